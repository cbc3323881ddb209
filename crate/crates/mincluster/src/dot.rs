//! Reader and writer for the directed subset of the Graphviz DOT language.
//!
//! The reader accepts `[strict] digraph [name] { ... }` with node statements,
//! edge chains (`a -> b -> c`), attribute lists, `graph`/`node`/`edge`
//! default statements, `key = value` graph attributes and C, C++ and `#`
//! comments. Subgraphs and undirected edges are rejected.

use std::fmt::Write as _;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DotGraph {
    pub name: Option<String>,
    /// Node names in order of first appearance.
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    /// Top-level `key = value` statements and `graph [...]` attributes.
    pub attrs: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Id(String),
    Arrow,
    UndirectedEdge,
    Open,
    Close,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Equals,
}

fn dot_err<T>(line: usize, message: impl Into<String>) -> CliResult<T> {
    Err(CliError::Dot {
        line,
        message: message.into(),
    })
}

fn tokenize(text: &str) -> CliResult<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line) = (0, 1);
    let mut at_line_start = true;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
            at_line_start = true;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if (c == '#' && at_line_start) || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        at_line_start = false;
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let start = line;
            i += 2;
            loop {
                match chars.get(i) {
                    None => return dot_err(start, "unterminated comment"),
                    Some('*') if chars.get(i + 1) == Some(&'/') => {
                        i += 2;
                        break;
                    }
                    Some('\n') => line += 1,
                    _ => {}
                }
                i += 1;
            }
            continue;
        }
        let single = match c {
            '{' => Some(Tok::Open),
            '}' => Some(Tok::Close),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((tok, line));
            i += 1;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push((Tok::Arrow, line));
            i += 2;
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            out.push((Tok::UndirectedEdge, line));
            i += 2;
            continue;
        }
        if c == '"' {
            let start = line;
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return dot_err(start, "unterminated string"),
                    Some('"') => break,
                    Some('\\') if matches!(chars.get(i + 1), Some('"') | Some('\\')) => {
                        s.push(chars[i + 1]);
                        i += 1;
                    }
                    Some('\\') if chars.get(i + 1) == Some(&'\n') => {
                        line += 1;
                        i += 1;
                    }
                    Some(&ch) => {
                        if ch == '\n' {
                            line += 1;
                        }
                        s.push(ch);
                    }
                }
                i += 1;
            }
            out.push((Tok::Id(s), line));
            i += 1;
            continue;
        }
        if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.')
                || (i == start && chars[i] == '-')
            {
                i += 1;
            }
            out.push((Tok::Id(chars[start..i].iter().collect()), line));
            continue;
        }
        return dot_err(line, format!("unexpected character {c:?}"));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or(self.toks.last())
            .map_or(1, |&(_, l)| l)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> CliResult<()> {
        let line = self.line();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => dot_err(line, format!("expected {what}")),
        }
    }

    fn id(&mut self, what: &str) -> CliResult<String> {
        let line = self.line();
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            _ => dot_err(line, format!("expected {what}")),
        }
    }

    fn attr_list(&mut self) -> CliResult<Vec<(String, String)>> {
        let mut attrs = Vec::new();
        while self.peek() == Some(&Tok::LBracket) {
            self.next();
            while self.peek() != Some(&Tok::RBracket) {
                let key = self.id("attribute name")?;
                self.expect(Tok::Equals, "'=' in attribute")?;
                let value = self.id("attribute value")?;
                attrs.push((key, value));
                if matches!(self.peek(), Some(Tok::Comma) | Some(Tok::Semi)) {
                    self.next();
                }
            }
            self.next();
        }
        Ok(attrs)
    }
}

pub fn parse_dot(text: &str) -> CliResult<DotGraph> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut g = DotGraph::default();
    let mut head = p.id("'digraph'")?;
    if head.eq_ignore_ascii_case("strict") {
        head = p.id("'digraph'")?;
    }
    if head.eq_ignore_ascii_case("graph") {
        return dot_err(1, "undirected graphs are not supported");
    }
    if !head.eq_ignore_ascii_case("digraph") {
        return dot_err(1, format!("expected 'digraph', found {head:?}"));
    }
    if let Some(Tok::Id(_)) = p.peek() {
        g.name = Some(p.id("graph name")?);
    }
    p.expect(Tok::Open, "'{'")?;
    let add_node = |g: &mut DotGraph, name: &str| {
        if !g.nodes.iter().any(|n| n == name) {
            g.nodes.push(name.to_string());
        }
    };
    loop {
        let line = p.line();
        match p.next() {
            None => return dot_err(line, "missing '}'"),
            Some(Tok::Close) => break,
            Some(Tok::Semi) => continue,
            Some(Tok::Open) => return dot_err(line, "subgraphs are not supported"),
            Some(Tok::Id(word)) => {
                let lower = word.to_ascii_lowercase();
                if lower == "subgraph" {
                    return dot_err(line, "subgraphs are not supported");
                }
                if matches!(lower.as_str(), "graph" | "node" | "edge") && p.peek() == Some(&Tok::LBracket) {
                    let attrs = p.attr_list()?;
                    if lower == "graph" {
                        g.attrs.extend(attrs);
                    }
                    continue;
                }
                if p.peek() == Some(&Tok::Equals) {
                    p.next();
                    let value = p.id("attribute value")?;
                    g.attrs.push((word, value));
                    continue;
                }
                add_node(&mut g, &word);
                let mut prev = word;
                loop {
                    match p.peek() {
                        Some(Tok::Arrow) => {
                            p.next();
                            let next = p.id("edge target")?;
                            add_node(&mut g, &next);
                            g.edges.push((prev, next.clone()));
                            prev = next;
                        }
                        Some(Tok::UndirectedEdge) => {
                            return dot_err(p.line(), "undirected edge '--' in a digraph")
                        }
                        _ => break,
                    }
                }
                p.attr_list()?;
            }
            Some(_) => return dot_err(line, "unexpected token"),
        }
    }
    if p.peek().is_some() {
        return dot_err(p.line(), "trailing input after '}'");
    }
    Ok(g)
}

/// Quotes a DOT identifier when it is not a plain alphanumeric word.
pub fn quote(s: &str) -> String {
    let plain = !s.is_empty()
        && (s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') && !s.starts_with(|c: char| c.is_ascii_digit())
            || s.chars().all(|c| c.is_ascii_digit()));
    if plain {
        s.to_string()
    } else {
        format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
    }
}

pub fn write_dot(g: &DotGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(g.name.as_deref().unwrap_or("G")));
    for (k, v) in &g.attrs {
        let _ = writeln!(out, "  {} = {};", quote(k), quote(v));
    }
    for n in &g.nodes {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for (a, b) in &g.edges {
        let _ = writeln!(out, "  {} -> {};", quote(a), quote(b));
    }
    out.push_str("}\n");
    out
}
