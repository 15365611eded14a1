//! Command-line front end: sparsity, independence, rank, circuits and
//! near-balance of graph files, alpha validation and exhaustive runs.

mod report;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use gainmat::count::{
    check_sparse, enumerate_circuits, f_alpha, independent, matroid_rank, rank_certificate,
};
use gainmat::format::{parse_document, write_document, AlphaSpec, Document, RuleSpec};
use gainmat::verifier::{
    run_property_suites, search_counterexample, verify_matroid, Alphabet, SearchRule, SearchSpec,
    Suite,
};
use gainmat::{AxiomOptions, BuiltinAlpha, CountRule, EdgeSet, Group, GroupSpec};
use serde::Serialize;

use report::*;

#[derive(Parser)]
#[command(name = "gainmat", version, about = "Lifted count matroids on group-labeled graphs")]
struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check f_alpha-sparsity of the whole edge set.
    Check { file: PathBuf },
    /// Test independence of an edge subset.
    Independent {
        file: PathBuf,
        /// 1-based edge ids, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        edges: Vec<usize>,
    },
    /// Matroid rank of the edge set.
    Rank {
        file: PathBuf,
        /// Also print a minimizing partition.
        #[arg(long)]
        certificate: bool,
    },
    /// Circuits of the plain (k, l)-count matroid.
    Circuits {
        file: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
    },
    /// Balanced, near-balanced or neither.
    NearBalanced {
        file: PathBuf,
        /// 1-based edge ids, comma separated; all edges by default.
        #[arg(long, value_delimiter = ',')]
        edges: Option<Vec<usize>>,
    },
    /// Check the alpha function of a file against the axioms.
    VerifyAlpha {
        file: PathBuf,
        /// Smoothness parameter; defaults to the file's k.
        #[arg(long)]
        k: Option<u32>,
    },
    /// Matroid axioms on a file, property suites or a counterexample search.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Graph file whose matroid axioms are checked.
    #[arg(conflicts_with_all = ["suite", "search"])]
    file: Option<PathBuf>,
    /// Property suite name, or `all`.
    #[arg(long, conflicts_with = "search")]
    suite: Option<String>,
    /// Count rule to search for a counterexample.
    #[arg(long)]
    search: Option<String>,
    #[arg(long, default_value_t = 4)]
    max_vertices: usize,
    #[arg(long, default_value_t = 8)]
    max_edges: usize,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 3)]
    l: u32,
    /// Builtin alpha replacing the rule's default.
    #[arg(long)]
    alpha: Option<String>,
    /// Label edges with every group element instead of {1, g}.
    #[arg(long)]
    full_alphabet: bool,
    /// Write a found counterexample here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<gainmat::Error> for Failure {
    fn from(e: gainmat::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn emit<R: Display + Serialize>(json: bool, r: &R) {
    if json {
        println!("{}", serde_json::to_string_pretty(r).expect("reports serialize"));
    } else {
        println!("{r}");
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_document(&text)?)
}

fn edge_set(doc: &Document, one_based: &[usize]) -> Result<EdgeSet, Failure> {
    let m = doc.graph.edge_count();
    let mut s = EdgeSet::EMPTY;
    for &e in one_based {
        if e == 0 || e > m {
            return Err(Failure::Input(format!("edge id {e} is outside 1..{m}")));
        }
        s = s.with(e - 1);
    }
    Ok(s)
}

fn check(json: bool, file: &Path) -> Outcome {
    let doc = load(file)?;
    let p = doc.params()?;
    let v = check_sparse(&p, &doc.graph)?;
    emit(
        json,
        &CheckReport {
            verdict: if v.sparse { "SPARSE" } else { "NOT SPARSE" },
            witness: v.witness.map(ids),
        },
    );
    Ok(v.sparse)
}

fn cmd_independent(json: bool, file: &Path, edges: &[usize]) -> Outcome {
    let doc = load(file)?;
    let p = doc.params()?;
    let s = edge_set(&doc, edges)?;
    let yes = independent(&p, &doc.graph, s)?;
    emit(
        json,
        &IndependentReport {
            verdict: if yes { "INDEPENDENT" } else { "DEPENDENT" },
            edges: ids(s),
        },
    );
    Ok(yes)
}

fn rank(json: bool, file: &Path, certificate: bool) -> Outcome {
    let doc = load(file)?;
    let p = doc.params()?;
    let g = &doc.graph;
    let r = matroid_rank(&p, g, g.all_edges())?;
    let certificate = if certificate {
        let c = rank_certificate(&p, g)?;
        if c.value != r as i64 {
            return Err(Failure::Internal(format!(
                "certificate value {} differs from rank {r}",
                c.value
            )));
        }
        let parts = c
            .parts
            .iter()
            .map(|&s| {
                Ok(Part {
                    edges: ids(s),
                    f: f_alpha(&p, g, s)?,
                })
            })
            .collect::<Result<Vec<_>, gainmat::Error>>()?;
        Some(Certificate {
            e0: ids(c.e0),
            parts,
            value: c.value,
        })
    } else {
        None
    };
    emit(
        json,
        &RankReport {
            rank: r,
            certificate,
        },
    );
    Ok(true)
}

fn circuits(json: bool, file: &Path, k: u32, l: u32) -> Outcome {
    let doc = load(file)?;
    let g = &doc.graph;
    let cs = enumerate_circuits(k, l, g, g.all_edges())?;
    emit(
        json,
        &CircuitsReport {
            k,
            l,
            circuits: cs.into_iter().map(ids).collect(),
        },
    );
    Ok(true)
}

fn near_balanced(json: bool, file: &Path, edges: Option<&[usize]>) -> Outcome {
    let doc = load(file)?;
    let g = &doc.graph;
    let s = match edges {
        Some(e) => edge_set(&doc, e)?,
        None => g.all_edges(),
    };
    let blank = |verdict| NearBalancedReport {
        verdict,
        base: None,
        extra: None,
        g: None,
    };
    // Balance is only meaningful here on a connected set.
    let cert = g.near_balanced(s)?;
    let (report, yes) = if g.is_balanced(s) {
        (blank("BALANCED"), true)
    } else if let Some(c) = cert {
        let r = NearBalancedReport {
            verdict: "NEAR-BALANCED",
            base: Some(c.base + 1),
            extra: Some(ids(c.extra)),
            g: Some(doc.group.name(c.g).to_string()),
        };
        (r, true)
    } else {
        (blank("NEITHER"), false)
    };
    emit(json, &report);
    Ok(yes)
}

fn verify_alpha(json: bool, file: &Path, k: Option<u32>) -> Outcome {
    let doc = load(file)?;
    let a = doc.alpha_function()?;
    let k = k
        .or(doc.k)
        .ok_or_else(|| Failure::Input("no k given and the file has no params line".into()))?;
    let r = a.verify_axioms(k, &AxiomOptions::default())?;
    emit(json, &AlphaReport::new(&doc.group, &r));
    Ok(r.passed)
}

fn group_arg(v: &VerifyArgs) -> Result<Arc<Group>, Failure> {
    let text = v
        .group
        .as_deref()
        .ok_or_else(|| Failure::Input("--group is required with --suite or --search".into()))?;
    let spec: GroupSpec = text.parse()?;
    Ok(Arc::new(Group::new(&spec)?))
}

fn search_spec(v: &VerifyArgs, rule: SearchRule) -> Result<SearchSpec, Failure> {
    let alpha = v
        .alpha
        .as_deref()
        .map(str::parse::<BuiltinAlpha>)
        .transpose()?;
    let mut spec = SearchSpec::new(group_arg(v)?, rule)
        .with_bounds(v.max_vertices, v.max_edges)
        .with_params(v.k, v.l, alpha);
    if v.full_alphabet {
        spec.alphabet = Alphabet::Full;
    }
    // Fail on bad parameters before any enumeration starts.
    spec.params()?;
    Ok(spec)
}

fn verify(json: bool, v: &VerifyArgs) -> Outcome {
    if let Some(file) = &v.file {
        let doc = load(file)?;
        let p = doc.params()?;
        let verdict = verify_matroid(&p, &doc.graph)?;
        emit(json, &MatroidReport::new(&verdict));
        return Ok(verdict.is_matroid());
    }
    if let Some(name) = &v.suite {
        let suites: Vec<Suite> = if name == "all" {
            Suite::ALL.to_vec()
        } else {
            vec![name.parse()?]
        };
        let spec = search_spec(v, SearchRule::TheoremFull)?;
        let reports = run_property_suites(&suites, &spec)?;
        let clean = reports.iter().all(|r| r.failures == 0);
        emit(json, &SuitesReport { suites: reports });
        return Ok(clean);
    }
    if let Some(rule) = &v.search {
        let rule: SearchRule = rule.parse()?;
        let spec = search_spec(v, rule)?;
        let found = search_counterexample(&spec)?;
        let mut report = SearchReport {
            verdict: if found.is_some() {
                "COUNTEREXAMPLE"
            } else {
                "NO COUNTEREXAMPLE"
            },
            rule: rule.to_string(),
            max_vertices: v.max_vertices,
            max_edges: v.max_edges,
            file: None,
            document: None,
        };
        if let Some(c) = &found {
            let p = spec.params()?;
            let doc = Document {
                group: spec.group.clone(),
                graph: c.graph.clone(),
                k: Some(p.k),
                ell: Some(p.ell),
                alpha: p.alpha.builtin_kind().map(AlphaSpec::Builtin),
                rule: RuleSpec {
                    rule: p.rule,
                    checked: rule == SearchRule::TheoremFull && p.rule == CountRule::Lifted,
                },
            };
            let text = write_document(&doc);
            match &v.out {
                Some(path) => {
                    std::fs::write(path, &text).map_err(|e| {
                        Failure::Input(format!("cannot write {}: {e}", path.display()))
                    })?;
                    report.file = Some(path.display().to_string());
                }
                None => report.document = Some(text),
            }
        }
        emit(json, &report);
        return Ok(found.is_some());
    }
    Err(Failure::Input(
        "verify needs a file, --suite or --search".into(),
    ))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let outcome = match &cli.cmd {
        Cmd::Check { file } => check(json, file),
        Cmd::Independent { file, edges } => cmd_independent(json, file, edges),
        Cmd::Rank { file, certificate } => rank(json, file, *certificate),
        Cmd::Circuits { file, k, l } => circuits(json, file, *k, *l),
        Cmd::NearBalanced { file, edges } => near_balanced(json, file, edges.as_deref()),
        Cmd::VerifyAlpha { file, k } => verify_alpha(json, file, *k),
        Cmd::Verify(v) => verify(json, v),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
