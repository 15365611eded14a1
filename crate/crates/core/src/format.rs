//! The line-oriented graph file format.
//!
//! ```text
//! # comment
//! group dihedral 3
//! vertices 3
//! params k 2 l 3
//! alpha builtin example4
//! rule lifted
//! edge 1 2 r1
//! loop 3 s0
//! ```
//!
//! A `table N` group may list its `N` rows on the following lines. An
//! `alpha table` block is followed by lines `<generators> -> <value>` with
//! generator names separated by spaces or commas. `rule` is one of
//! `lifted` (the default, with validated parameters), `lifted unchecked`
//! and `unlifted`; the last two skip the axiom checks. Vertices are 1-based
//! and edges are numbered in file order.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::alpha::{AlphaFunction, BuiltinAlpha};
use crate::count::{CountRule, SparsityParams};
use crate::error::{Error, Result};
use crate::graph::{Edge, GainGraph};
use crate::group::{Group, GroupSpec};

/// How the alpha function of a document was given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlphaSpec {
    Builtin(BuiltinAlpha),
    /// Generator names and the value of the generated subgroup's class.
    Table(Vec<(Vec<String>, u8)>),
}

/// Count rule and whether the parameters are validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RuleSpec {
    pub rule: CountRule,
    pub checked: bool,
}

impl Default for RuleSpec {
    fn default() -> Self {
        RuleSpec {
            rule: CountRule::Lifted,
            checked: true,
        }
    }
}

/// A parsed graph file.
#[derive(Clone, Debug)]
pub struct Document {
    pub group: Arc<Group>,
    pub graph: GainGraph,
    pub k: Option<u32>,
    pub ell: Option<u32>,
    pub alpha: Option<AlphaSpec>,
    pub rule: RuleSpec,
}

impl Document {
    /// Builds the alpha function named in the document.
    pub fn alpha_function(&self) -> Result<AlphaFunction> {
        match &self.alpha {
            None => Err(Error::InvalidAlpha("the file has no alpha line".into())),
            Some(AlphaSpec::Builtin(b)) => AlphaFunction::builtin(*b, self.group.clone()),
            Some(AlphaSpec::Table(rows)) => {
                let entries = rows
                    .iter()
                    .map(|(gens, v)| {
                        let elems = gens
                            .iter()
                            .map(|n| self.group.elem_by_name(n))
                            .collect::<Result<Vec<_>>>()?;
                        Ok((elems, *v))
                    })
                    .collect::<Result<Vec<_>>>()?;
                AlphaFunction::from_table(self.group.clone(), &entries)
            }
        }
    }

    /// Sparsity parameters from the `params`, `alpha` and `rule` lines.
    pub fn params(&self) -> Result<SparsityParams> {
        let (Some(k), Some(ell)) = (self.k, self.ell) else {
            return Err(Error::InvalidParams("the file has no params line".into()));
        };
        let alpha = self.alpha_function()?;
        if self.rule.checked && self.rule.rule == CountRule::Lifted {
            SparsityParams::new(k, ell, alpha)
        } else {
            SparsityParams::unverified(k, ell, alpha, self.rule.rule)
        }
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Attaches a line number to errors that lack one.
fn at(line: usize, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => perr(line, other.to_string()),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, w: Option<&str>, what: &str) -> Result<T> {
    let w = w.ok_or_else(|| perr(line, format!("missing {what}")))?;
    w.parse()
        .map_err(|_| perr(line, format!("{what} `{w}` is not a valid number")))
}

/// Parses a graph file.
pub fn parse_document(text: &str) -> Result<Document> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut group: Option<(usize, GroupSpec)> = None;
    let mut vertices: Option<usize> = None;
    let mut k = None;
    let mut ell = None;
    let mut alpha = None;
    let mut rule = RuleSpec::default();
    // (line, tail, head, label name)
    let mut edges: Vec<(usize, usize, usize, String)> = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, line) = lines[i];
        i += 1;
        let mut words = line.split_whitespace();
        let kw = words.next().expect("nonempty line");
        match kw {
            "group" => {
                if group.is_some() {
                    return Err(perr(ln, "duplicate group line"));
                }
                let rest = line["group".len()..].trim();
                let rw: Vec<&str> = rest.split_whitespace().collect();
                let spec = if rw.len() == 2 && rw[0] == "table" {
                    let n: usize = parse_num(ln, Some(rw[1]), "table size")?;
                    let mut rows = Vec::with_capacity(n);
                    for _ in 0..n {
                        let Some(&(rl, row)) = lines.get(i) else {
                            return Err(perr(ln, "table ends before all rows were given"));
                        };
                        i += 1;
                        let r = row
                            .split_whitespace()
                            .map(|w| parse_num(rl, Some(w), "table entry"))
                            .collect::<Result<Vec<usize>>>()?;
                        if r.len() != n {
                            return Err(perr(rl, format!("table row needs {n} entries")));
                        }
                        rows.push(r);
                    }
                    GroupSpec::Table(rows)
                } else {
                    rest.parse().map_err(|e| at(ln, e))?
                };
                group = Some((ln, spec));
            }
            "vertices" => {
                if vertices.is_some() {
                    return Err(perr(ln, "duplicate vertices line"));
                }
                vertices = Some(parse_num(ln, words.next(), "vertex count")?);
            }
            "params" => {
                let toks: Vec<&str> = words.collect();
                match toks.as_slice() {
                    ["k", kv, "l", lv] => {
                        k = Some(parse_num(ln, Some(kv), "k")?);
                        ell = Some(parse_num(ln, Some(lv), "l")?);
                    }
                    _ => return Err(perr(ln, "expected `params k <int> l <int>`")),
                }
            }
            "alpha" => match words.next() {
                Some("builtin") => {
                    let rest: Vec<&str> = words.collect();
                    alpha = Some(AlphaSpec::Builtin(
                        rest.join(" ").parse().map_err(|e| at(ln, e))?,
                    ));
                }
                Some("table") => {
                    let mut rows = Vec::new();
                    while let Some(&(rl, row)) = lines.get(i) {
                        let Some((lhs, rhs)) = row.split_once("->") else {
                            break;
                        };
                        i += 1;
                        let gens = lhs
                            .split(|c: char| c == ',' || c.is_whitespace())
                            .filter(|w| !w.is_empty())
                            .map(str::to_string)
                            .collect();
                        rows.push((gens, parse_num(rl, Some(rhs.trim()), "alpha value")?));
                    }
                    alpha = Some(AlphaSpec::Table(rows));
                }
                _ => return Err(perr(ln, "expected `alpha builtin <name>` or `alpha table`")),
            },
            "rule" => {
                let toks: Vec<&str> = words.collect();
                rule = match toks.as_slice() {
                    ["lifted"] => RuleSpec::default(),
                    ["lifted", "unchecked"] => RuleSpec {
                        rule: CountRule::Lifted,
                        checked: false,
                    },
                    ["unlifted"] => RuleSpec {
                        rule: CountRule::Plain,
                        checked: false,
                    },
                    _ => {
                        return Err(perr(
                            ln,
                            "expected `rule lifted`, `rule lifted unchecked` or `rule unlifted`",
                        ))
                    }
                };
            }
            "edge" | "loop" => {
                let u: usize = parse_num(ln, words.next(), "vertex")?;
                let v: usize = if kw == "edge" {
                    parse_num(ln, words.next(), "vertex")?
                } else {
                    u
                };
                let name = words
                    .next()
                    .ok_or_else(|| perr(ln, "missing element name"))?
                    .to_string();
                if words.next().is_some() {
                    return Err(perr(ln, "unexpected tokens after the element name"));
                }
                edges.push((ln, u, v, name));
            }
            other => return Err(perr(ln, format!("unknown keyword `{other}`"))),
        }
    }
    let (gl, spec) = group.ok_or_else(|| perr(0, "missing group line"))?;
    let group = Arc::new(Group::new(&spec).map_err(|e| at(gl, e))?);
    let n = vertices.ok_or_else(|| perr(0, "missing vertices line"))?;
    let mut es = Vec::with_capacity(edges.len());
    for (ln, u, v, name) in edges {
        for x in [u, v] {
            if x == 0 || x > n {
                return Err(perr(ln, format!("vertex {x} is outside 1..{n}")));
            }
        }
        let label = group.elem_by_name(&name).map_err(|e| at(ln, e))?;
        es.push(Edge {
            tail: u - 1,
            head: v - 1,
            label,
        });
    }
    let graph = GainGraph::new(group.clone(), n, es).map_err(|e| at(0, e))?;
    let doc = Document {
        group,
        graph,
        k,
        ell,
        alpha,
        rule,
    };
    if let Some(AlphaSpec::Table(_)) = &doc.alpha {
        // Surface unknown names and conflicting values at parse time.
        doc.alpha_function().map_err(|e| at(0, e))?;
    }
    Ok(doc)
}

/// Writes a graph file that [`parse_document`] reads back unchanged.
pub fn write_document(doc: &Document) -> String {
    let mut s = String::new();
    let g = &doc.group;
    writeln!(s, "group {}", g.spec()).unwrap();
    writeln!(s, "vertices {}", doc.graph.vertex_count()).unwrap();
    if let (Some(k), Some(l)) = (doc.k, doc.ell) {
        writeln!(s, "params k {k} l {l}").unwrap();
    }
    match &doc.alpha {
        None => {}
        Some(AlphaSpec::Builtin(b)) => writeln!(s, "alpha builtin {b}").unwrap(),
        Some(AlphaSpec::Table(rows)) => {
            writeln!(s, "alpha table").unwrap();
            for (gens, v) in rows {
                writeln!(s, "{} -> {v}", gens.join(",")).unwrap();
            }
        }
    }
    let rule = match (doc.rule.rule, doc.rule.checked) {
        (CountRule::Lifted, true) => "lifted",
        (CountRule::Lifted, false) => "lifted unchecked",
        (CountRule::Plain, _) => "unlifted",
    };
    writeln!(s, "rule {rule}").unwrap();
    for e in doc.graph.edges() {
        if e.is_loop() {
            writeln!(s, "loop {} {}", e.tail + 1, g.name(e.label)).unwrap();
        } else {
            writeln!(s, "edge {} {} {}", e.tail + 1, e.head + 1, g.name(e.label)).unwrap();
        }
    }
    s
}
