use std::fmt;

use gainmat::alpha::{AxiomReport, CheckMode, Witness};
use gainmat::verifier::{AxiomVerdict, SuiteReport};
use gainmat::{EdgeSet, Group};
use serde::Serialize;

/// 1-based edge ids in file order.
pub fn ids(s: EdgeSet) -> Vec<usize> {
    s.iter().map(|e| e + 1).collect()
}

/// Comma-separated ids, or `-` for none.
pub fn join(ids: &[usize]) -> String {
    if ids.is_empty() {
        return "-".to_string();
    }
    ids.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn elems(g: &Group, s: gainmat::ElemSet) -> String {
    format!("{{{}}}", s.iter().map(|x| g.name(x)).collect::<Vec<_>>().join(","))
}

#[derive(Serialize)]
pub struct CheckReport {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "{} witness={}", self.verdict, join(w)),
            None => f.write_str(self.verdict),
        }
    }
}

#[derive(Serialize)]
pub struct IndependentReport {
    pub verdict: &'static str,
    pub edges: Vec<usize>,
}

impl fmt::Display for IndependentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} edges={}", self.verdict, join(&self.edges))
    }
}

#[derive(Serialize)]
pub struct Part {
    pub edges: Vec<usize>,
    pub f: i64,
}

#[derive(Serialize)]
pub struct Certificate {
    pub e0: Vec<usize>,
    pub parts: Vec<Part>,
    pub value: i64,
}

#[derive(Serialize)]
pub struct RankReport {
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl fmt::Display for RankReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RANK {}", self.rank)?;
        if let Some(c) = &self.certificate {
            write!(f, "\nE0 {}", join(&c.e0))?;
            for p in &c.parts {
                write!(f, "\nPART {} f={}", join(&p.edges), p.f)?;
            }
            write!(f, "\nVALUE {}", c.value)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct CircuitsReport {
    pub k: u32,
    pub l: u32,
    pub circuits: Vec<Vec<usize>>,
}

impl fmt::Display for CircuitsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CIRCUITS {}", self.circuits.len())?;
        for c in &self.circuits {
            write!(f, "\nCIRCUIT {}", join(c))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct NearBalancedReport {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
}

impl fmt::Display for NearBalancedReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.verdict)?;
        if let (Some(b), Some(x), Some(g)) = (self.base, &self.extra, &self.g) {
            write!(f, " base={b} extra={} g={g}", join(x))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct ViolationLine {
    pub axiom: String,
    pub witness: String,
}

#[derive(Serialize)]
pub struct AlphaReport {
    pub verdict: &'static str,
    pub mode: String,
    pub violations: Vec<ViolationLine>,
    pub truncated: bool,
}

impl AlphaReport {
    pub fn new(g: &Group, r: &AxiomReport) -> AlphaReport {
        let mode = match r.mode {
            CheckMode::Literal => "literal".to_string(),
            CheckMode::Lattice => "lattice".to_string(),
            CheckMode::Sampled { budget, seed } => format!("sampled:{budget}:{seed}"),
        };
        let violations = r
            .violations
            .iter()
            .map(|v| ViolationLine {
                axiom: v.axiom.to_string(),
                witness: match &v.witness {
                    Witness::Single { x } => elems(g, *x),
                    Witness::Pair { x, y } => format!("{};{}", elems(g, *x), elems(g, *y)),
                    Witness::Probe { s, g: e } => format!("{};{}", elems(g, *s), g.name(*e)),
                },
            })
            .collect();
        AlphaReport {
            verdict: if r.passed { "PASSED" } else { "FAILED" },
            mode,
            violations,
            truncated: r.truncated,
        }
    }
}

impl fmt::Display for AlphaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ALPHA {} mode={}", self.verdict, self.mode)?;
        for v in &self.violations {
            write!(f, "\nVIOLATION {} witness={}", v.axiom, v.witness)?;
        }
        if self.truncated {
            f.write_str("\nTRUNCATED")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct MatroidReport {
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i2: Option<(Vec<usize>, Vec<usize>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i3: Option<(Vec<usize>, Vec<usize>, Vec<usize>)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_mismatch: Option<Vec<usize>>,
}

impl MatroidReport {
    pub fn new(v: &AxiomVerdict) -> MatroidReport {
        MatroidReport {
            verdict: if v.is_matroid() { "MATROID" } else { "NOT MATROID" },
            i2: v.i2.as_ref().map(|w| (ids(w.independent), ids(w.dependent))),
            i3: v
                .i3
                .as_ref()
                .map(|w| (ids(w.restriction), ids(w.smaller), ids(w.larger))),
            oracle_mismatch: v.oracle_mismatch.map(ids),
        }
    }
}

impl fmt::Display for MatroidReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.verdict)?;
        if let Some((i, d)) = &self.i2 {
            write!(f, "\nI2 independent={} dependent={}", join(i), join(d))?;
        }
        if let Some((r, s, l)) = &self.i3 {
            write!(f, "\nI3 restriction={} smaller={} larger={}", join(r), join(s), join(l))?;
        }
        if let Some(m) = &self.oracle_mismatch {
            write!(f, "\nORACLE MISMATCH {}", join(m))?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct SuitesReport {
    pub suites: Vec<SuiteReport>,
}

impl fmt::Display for SuitesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.suites.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{s}")?;
            if let Some((_, what)) = &s.first_failure {
                write!(f, "\nFIRST FAILURE {what}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
pub struct SearchReport {
    pub verdict: &'static str,
    pub rule: String,
    pub max_vertices: usize,
    pub max_edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    /// The counterexample in the graph file format.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub document: Option<String>,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} rule={} max_vertices={} max_edges={}",
            self.verdict, self.rule, self.max_vertices, self.max_edges
        )?;
        match (&self.file, &self.document) {
            (Some(p), _) => write!(f, "\nFILE {p}"),
            (None, Some(d)) => write!(f, "\n{}", d.trim_end()),
            _ => Ok(()),
        }
    }
}
