//! Batch statistics over generated DAGs, one row per parameter set.

use serde::{Deserialize, Serialize};

use mincluster_core::{generate_dag, FindConfig, GenParams};

use crate::pipeline::run_timed;

/// Mean, sample variance (divisor `count - 1`, zero for a single value),
/// minimum and maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub count: usize,
    pub mean: f64,
    pub var: f64,
    pub min: f64,
    pub max: f64,
}

impl Metric {
    pub fn of(values: &[f64]) -> Option<Metric> {
        let count = values.len();
        if count == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let var = if count > 1 {
            values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Metric {
            count,
            mean,
            var,
            min,
            max,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFailure {
    pub seed: u64,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub n: usize,
    pub parexp: f64,
    pub serexp: f64,
    pub maxwidth: usize,
    pub clustsettle: f64,
    pub narb: usize,
    pub base_seed: u64,
    pub samples: usize,
    pub failures: Vec<SampleFailure>,
    pub vertices: Option<Metric>,
    /// Number of maximum syncpoints per DAG.
    pub msp_count: Option<Metric>,
    pub clusters_per_dag: Option<Metric>,
    pub complex_clusters_per_dag: Option<Metric>,
    /// Over all clusters of the row.
    pub cluster_sizes: Option<Metric>,
    /// Largest start or end set among the syncpoints of a DAG.
    pub max_msp_side: Option<Metric>,
    /// Seconds per DAG; omitted in deterministic output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<Metric>,
}

impl RunStats {
    pub fn succeeded(&self) -> usize {
        self.samples - self.failures.len()
    }
}

/// Generates `samples` DAGs with seeds `base.seed + i` and runs the search on
/// each. Failed samples are recorded and skipped.
pub fn run_row(base: &GenParams, samples: usize, config: &FindConfig, timing: bool) -> RunStats {
    let mut failures = Vec::new();
    let (mut vertices, mut msps, mut clusters, mut complex, mut sizes, mut sides, mut secs) =
        (vec![], vec![], vec![], vec![], vec![], vec![], vec![]);
    for i in 0..samples as u64 {
        let params = GenParams {
            seed: base.seed.wrapping_add(i),
            ..*base
        };
        let result = generate_dag(&params).and_then(|gen| {
            run_timed(&gen.dag, config)
                .map(|run| (gen, run))
                .map_err(|e| match e {
                    crate::error::CliError::Core(e) => e,
                    other => unreachable!("search reports core errors only: {other}"),
                })
        });
        let (gen, run) = match result {
            Ok(ok) => ok,
            Err(e) => {
                failures.push(SampleFailure {
                    seed: params.seed,
                    error: e.to_string(),
                });
                continue;
            }
        };
        let out = &run.outcome;
        vertices.push(gen.dag.len() as f64);
        msps.push(out.msps.len() as f64);
        clusters.push(out.clusters.len() as f64);
        complex.push(out.clusters.iter().filter(|c| c.is_complex).count() as f64);
        sizes.extend(out.clusters.iter().map(|c| c.vertices.len() as f64));
        let side = out.msps.iter().map(|m| m.start.len().max(m.end.len())).max().unwrap_or(0);
        sides.push(side as f64);
        secs.push(run.seconds());
    }
    RunStats {
        n: base.n,
        parexp: base.parexp,
        serexp: base.serexp,
        maxwidth: base.maxwidth,
        clustsettle: base.clustsettle,
        narb: base.narb,
        base_seed: base.seed,
        samples,
        failures,
        vertices: Metric::of(&vertices),
        msp_count: Metric::of(&msps),
        clusters_per_dag: Metric::of(&clusters),
        complex_clusters_per_dag: Metric::of(&complex),
        cluster_sizes: Metric::of(&sizes),
        max_msp_side: Metric::of(&sides),
        runtime_s: if timing { Metric::of(&secs) } else { None },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuntimeRatio {
    pub from_n: usize,
    pub to_n: usize,
    /// Mean runtime of the later row over the earlier one.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub rows: Vec<RunStats>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub runtime_ratios: Vec<RuntimeRatio>,
}

impl StatsReport {
    pub fn new(rows: Vec<RunStats>) -> Self {
        let runtime_ratios = rows
            .windows(2)
            .filter_map(|w| {
                let (a, b) = (w[0].runtime_s?, w[1].runtime_s?);
                Some(RuntimeRatio {
                    from_n: w[0].n,
                    to_n: w[1].n,
                    ratio: b.mean / a.mean,
                })
            })
            .collect();
        StatsReport { rows, runtime_ratios }
    }

    /// One line per row in the column order mean/var/min/max for N, clusters
    /// per DAG, cluster sizes and runtime.
    pub fn table(&self) -> String {
        let cell = |m: Option<Metric>| match m {
            Some(m) => format!("{:>9.3} {:>10.3} {:>7} {:>7}", m.mean, m.var, fmt_num(m.min), fmt_num(m.max)),
            None => format!("{:>9} {:>10} {:>7} {:>7}", "-", "-", "-", "-"),
        };
        let mut out = format!(
            "{:>6} {:>8} {:>5} | {:^36} | {:^36} | {:^36} | {:^36} | {:>5}\n",
            "n", "maxwidth", "narb", "MSPs per DAG", "clusters per DAG", "cluster sizes", "runtime (s)", "fail"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>6} {:>8} {:>5} | {} | {} | {} | {} | {:>5}\n",
                r.n,
                r.maxwidth,
                r.narb,
                cell(r.msp_count),
                cell(r.clusters_per_dag),
                cell(r.cluster_sizes),
                cell(r.runtime_s),
                r.failures.len()
            ));
        }
        for q in &self.runtime_ratios {
            out.push_str(&format!("runtime ratio n={} -> n={}: {:.2}\n", q.from_n, q.to_n, q.ratio));
        }
        out
    }
}

fn fmt_num(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e12 {
        format!("{}", x as i64)
    } else {
        format!("{x:.4}")
    }
}
