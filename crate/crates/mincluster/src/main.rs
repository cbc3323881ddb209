use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use mincluster::compare::{oracle_compare, CompareOptions};
use mincluster::error::{CliError, CliResult};
use mincluster::formats::{clusters_dot, to_json_text, GraphDoc, MspDagDoc};
use mincluster::pipeline::find_document;
use mincluster::stats::{run_row, StatsReport};
use mincluster_core::sp::sp_reduce_dag;
use mincluster_core::{
    build_msp_dag, find_all_msps, generate_dag, normalize, transitive_reduction, FindConfig, GenParams,
    RedundancyPolicy, SpStep, StDag, DEFAULT_PATH_CAP,
};

#[derive(Parser)]
#[command(name = "mincluster", version, about = "Minimal cluster detection in st-DAGs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random st-DAG.
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Find all minimal clusters of a graph.
    Find {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// Include per-stage wall-clock times.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the maximum syncpoints and their precedence DAG.
    Mspdag {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Remove redundant edges, or with --sp, apply series-parallel reduction.
    Reduce {
        #[command(flatten)]
        input: InputArgs,
        /// Report series-parallel reduction steps instead.
        #[arg(long)]
        sp: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Summary statistics over generated DAGs.
    Stats {
        #[command(flatten)]
        gen: GenArgs,
        /// Additional vertex counts; each adds a row.
        #[arg(long = "also-n", value_delimiter = ',')]
        also_n: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Include runtimes. Output is then no longer reproducible.
        #[arg(long)]
        timing: bool,
        /// Print a text table instead of JSON.
        #[arg(long)]
        table: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the search against exhaustive enumeration on small DAGs.
    OracleCompare {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 300)]
        samples: usize,
        /// Skip generated graphs with more vertices.
        #[arg(long = "max-n", default_value_t = 20)]
        max_n: usize,
        /// Also compare the built-in reference graphs.
        #[arg(long)]
        fixtures: bool,
        #[arg(long, hide = true)]
        corrupt: bool,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Minimum number of vertices.
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long, default_value_t = 0.33)]
    parexp: f64,
    #[arg(long, default_value_t = 0.33)]
    serexp: f64,
    #[arg(long, default_value_t = 5)]
    maxwidth: usize,
    #[arg(long, default_value_t = 0.4)]
    clustsettle: f64,
    /// Number of disruptive edges.
    #[arg(long, default_value_t = 10)]
    narb: usize,
    #[arg(long, env = "MINCLUSTER_SEED", default_value_t = 0)]
    seed: u64,
}

impl GenArgs {
    fn params(&self) -> CliResult<GenParams> {
        let params = GenParams {
            n: self.n,
            parexp: self.parexp,
            serexp: self.serexp,
            maxwidth: self.maxwidth,
            clustsettle: self.clustsettle,
            narb: self.narb,
            seed: self.seed,
        };
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args)]
struct InputArgs {
    /// Graph file in JSON or DOT; `-` reads standard input.
    input: PathBuf,
    /// Reject graphs with redundant edges instead of removing them.
    #[arg(long)]
    strict: bool,
}

impl InputArgs {
    fn load(&self) -> CliResult<StDag> {
        let text = if self.input == Path::new("-") {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|source| CliError::Io {
                path: self.input.clone(),
                source,
            })?;
            s
        } else {
            std::fs::read_to_string(&self.input).map_err(|source| CliError::Io {
                path: self.input.clone(),
                source,
            })?
        };
        let g = GraphDoc::parse(&text)?.to_dag()?;
        if self.strict {
            normalize(g.clone(), RedundancyPolicy::Strict)?;
        }
        Ok(g)
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Only pair syncpoints whose inner vertex sets are disjoint, and skip the
    /// pairing of single-entry or single-exit regions.
    #[arg(long)]
    literal: bool,
    #[arg(long = "path-cap", default_value_t = DEFAULT_PATH_CAP)]
    path_cap: u64,
}

impl SearchArgs {
    fn config(&self) -> FindConfig {
        FindConfig {
            path_cap: self.path_cap,
            pair_small_regions: !self.literal,
            disjoint_brackets: self.literal,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write DOT instead of JSON where supported.
    #[arg(long)]
    dot: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl OutputArgs {
    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            }),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn pretty(value: &impl serde::Serialize) -> CliResult<String> {
    to_json_text(value)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Gen { gen, output } => {
            let generated = generate_dag(&gen.params()?)?;
            let mut doc = GraphDoc::from_dag(&generated.dag);
            doc.generation = Some((&generated.record).into());
            output.emit(&if output.dot { doc.to_dot() } else { doc.to_json() })
        }
        Command::Find {
            input,
            search,
            timing,
            output,
        } => {
            let (g, doc) = find_document(input.load()?, &search.config(), timing)?;
            output.emit(&if output.dot {
                clusters_dot(&g, &doc.clusters)
            } else {
                pretty(&doc)?
            })
        }
        Command::Mspdag { input, output } => {
            let g = normalize(input.load()?, RedundancyPolicy::Reduce)?.dag;
            let msps = find_all_msps(&g);
            let doc = MspDagDoc::new(&g, &msps, &build_msp_dag(&g, &msps));
            output.emit(&if output.dot { doc.to_dot() } else { pretty(&doc)? })
        }
        Command::Reduce { input, sp, output } => {
            let g = input.load()?;
            if sp {
                let r = sp_reduce_dag(&g);
                let steps: Vec<_> = r
                    .steps
                    .iter()
                    .map(|s| match s {
                        SpStep::Serial(u, v) => json!({"serial": [u.0, v.0]}),
                        SpStep::Parallel(vs) => json!({"parallel": vs.iter().map(|v| v.0).collect::<Vec<_>>()}),
                    })
                    .collect();
                let groups: Vec<Vec<u32>> = r.groups.iter().map(|g| g.iter().map(|v| v.0).collect()).collect();
                let doc = json!({
                    "fully_reduced": r.fully_reduced,
                    "steps": steps,
                    "groups": groups,
                    "edges": r.edges,
                });
                output.emit(&pretty(&doc)?)
            } else {
                let (reduced, removed) = transitive_reduction(&g);
                if !removed.is_empty() {
                    let list: Vec<String> = removed.iter().map(|(u, v)| format!("({u}, {v})")).collect();
                    eprintln!("removed redundant edges: {}", list.join(", "));
                }
                let doc = GraphDoc::from_dag(&reduced);
                output.emit(&if output.dot { doc.to_dot() } else { doc.to_json() })
            }
        }
        Command::Stats {
            gen,
            also_n,
            samples,
            timing,
            table,
            search,
            output,
        } => {
            let base = gen.params()?;
            let mut rows = Vec::new();
            for n in std::iter::once(base.n).chain(also_n) {
                let params = GenParams { n, ..base };
                params.validate()?;
                rows.push(run_row(&params, samples, &search.config(), timing));
            }
            let report = StatsReport::new(rows);
            output.emit(&if table { report.table() } else { pretty(&report)? })?;
            match report.rows.iter().find(|r| samples > 0 && r.succeeded() == 0) {
                Some(_) => Err(CliError::AllSamplesFailed(samples)),
                None => Ok(()),
            }
        }
        Command::OracleCompare {
            gen,
            samples,
            max_n,
            fixtures,
            corrupt,
            search,
            output,
        } => {
            let options = CompareOptions {
                samples,
                max_n,
                include_fixtures: fixtures,
                corrupt,
            };
            let report = oracle_compare(&gen.params()?, &options, &search.config())?;
            output.emit(&pretty(&report)?)?;
            if report.compared < samples {
                eprintln!(
                    "compared only {} of {} samples within {} seeds",
                    report.compared, samples, report.seeds_tried
                );
            }
            match report.mismatches.len() {
                0 => Ok(()),
                k => Err(CliError::Mismatch(k)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
