//! Acceptance run: one `PASS`/`FAIL` line per criterion, exit status 1 if
//! any criterion fails.

mod common;

use std::ops::ControlFlow;
use std::sync::Arc;
use std::time::Instant;

use gainmat::count::{
    check_sparse, check_sparse_naive, f_alpha, independent, matroid_rank, rank_certificate,
};
use gainmat::verifier::{
    near_balanced_brute, run_property_suites, search_counterexample, verify_space, Alphabet,
    Counterexample, InstanceSpace, SearchRule, SearchSpec, Suite,
};
use gainmat::{AlphaFunction, AxiomOptions, BuiltinAlpha, GainGraph, Group, SparsityParams};

use common::{connected, frame_independent, group, near_balanced_by_switching};

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn for_each_instance(space: &InstanceSpace, mut f: impl FnMut(GainGraph)) {
    space.for_each_seq(|seq| {
        f(space.graph(seq));
        ControlFlow::Continue(())
    });
}

fn space(grp: &Arc<Group>, n: usize, m: usize, alphabet: Alphabet) -> InstanceSpace {
    InstanceSpace::new(grp.clone(), n, m, &alphabet).expect("space")
}

fn default_alphabet(grp: &Arc<Group>) -> Alphabet {
    SearchSpec::new(grp.clone(), SearchRule::TheoremFull).alphabet
}

/// The configurations of the matroid check. `(1, 1)` admits only alpha
/// functions bounded by 1, so only the frame function is used there.
fn configs(grp: &Arc<Group>) -> Vec<SparsityParams> {
    let a = |b| AlphaFunction::builtin(b, grp.clone()).expect("alpha");
    vec![
        SparsityParams::new(1, 1, a(BuiltinAlpha::Frame)).expect("compliant"),
        SparsityParams::new(2, 3, a(BuiltinAlpha::Frame)).expect("compliant"),
        SparsityParams::new(2, 3, a(BuiltinAlpha::Example2)).expect("compliant"),
        SparsityParams::new(2, 3, a(BuiltinAlpha::Example3Lifted)).expect("compliant"),
        SparsityParams::new(2, 3, a(BuiltinAlpha::Example4)).expect("compliant"),
    ]
}

fn criterion1() -> Outcome {
    let runs = [
        ("cyclic 2", Alphabet::Full),
        ("cyclic 3", Alphabet::Full),
        // A rotation and a reflection generate all of D3.
        ("dihedral 3", Alphabet::Labels(vec![1, 3])),
    ];
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for (spec, alphabet) in runs {
        let grp = group(spec);
        let p = SparsityParams::new(
            1,
            1,
            AlphaFunction::builtin(BuiltinAlpha::Frame, grp.clone()).unwrap(),
        )
        .unwrap();
        for_each_instance(&space(&grp, 4, 6, alphabet), |g| {
            let all = g.all_edges();
            if all.is_empty() || !connected(&g, all) {
                return;
            }
            checked += 1;
            if independent(&p, &g, all).unwrap() != frame_independent(&g, all) {
                mismatches += 1;
            }
        });
    }
    outcome(
        mismatches == 0 && checked > 0,
        format!("{checked} connected instances over Z2, Z3, D3, {mismatches} mismatches"),
    )
}

fn criterion2() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    let runs = [
        ("cyclic 2", None),
        ("cyclic 3", None),
        ("cyclic 4", None),
        // The order-two element of Z4 as a label, on one edge fewer.
        ("cyclic 4", Some(Alphabet::Labels(vec![1, 2]))),
    ];
    for (spec, alphabet) in runs {
        let grp = group(spec);
        let m = if alphabet.is_some() { 6 } else { 7 };
        let alphabet = alphabet.unwrap_or_else(|| default_alphabet(&grp));
        let sp = space(&grp, 4, m, alphabet);
        let reports = verify_space(&sp, &configs(&grp)).unwrap();
        let failures: u64 = reports.iter().map(|r| r.i2_failures + r.i3_failures).sum();
        let insts = reports[0].instances;
        if failures > 0 {
            pass = false;
            for r in reports.iter().filter(|r| !r.passed()) {
                detail.push(format!("{spec} {}: {:?}", r.label, r.first_failure));
            }
        }
        detail.push(format!("{spec} |E|<={m}: {insts} instances x 5 configs, {failures} failures"));
    }
    outcome(pass, detail.join("; "))
}

/// Both sets of the witness are independent by the naive oracle, maximal in
/// the restriction and of different sizes.
fn witness_valid(p: &SparsityParams, c: &Counterexample) -> bool {
    let Some(w) = &c.verdict.i3 else {
        return false;
    };
    let g = &c.graph;
    let naive = |s| check_sparse_naive(p, g, s).unwrap().sparse;
    let maximal = |s: gainmat::EdgeSet| {
        naive(s)
            && w
                .restriction
                .difference(s)
                .iter()
                .all(|e| !naive(s.with(e)))
    };
    maximal(w.smaller) && maximal(w.larger) && w.smaller.len() != w.larger.len()
}

fn criterion3() -> Outcome {
    let grp = group("cyclic 3");
    let spec = SearchSpec::new(grp.clone(), SearchRule::Example3Naive).with_bounds(4, 8);
    let p = spec.params().unwrap();
    match search_counterexample(&spec).unwrap() {
        Some(c) => {
            let ok = witness_valid(&p, &c);
            outcome(
                ok,
                format!(
                    "found on {} edges, naive re-validation {}",
                    c.graph.edge_count(),
                    if ok { "passed" } else { "failed" }
                ),
            )
        }
        None => {
            // The bound is too small: the first counterexample needs 9 edges.
            let wider = spec.clone().with_bounds(4, 9);
            let note = match search_counterexample(&wider).unwrap() {
                Some(c) => format!(
                    "first one at |V|<=4, |E|<=9 has {} edges, naive re-validation {}",
                    c.graph.edge_count(),
                    if witness_valid(&p, &c) { "passed" } else { "failed" }
                ),
                None => "none at |E|<=9 either".to_string(),
            };
            outcome(false, format!("no counterexample over Z3 with |V|<=4, |E|<=8; {note}"))
        }
    }
}

fn criterion4() -> Outcome {
    let grp = group("cyclic 2");
    let spec = SearchSpec::new(grp.clone(), SearchRule::Example3NearbalOnly).with_bounds(4, 8);
    let p = spec.params().unwrap();
    let found = search_counterexample(&spec).unwrap();
    let fixed = SearchSpec::new(grp, SearchRule::TheoremFull).with_bounds(4, 8);
    let none = search_counterexample(&fixed).unwrap().is_none();
    match found {
        Some(c) => {
            let ok = witness_valid(&p, &c);
            outcome(
                ok && none,
                format!(
                    "alpha(Z2)=3: failure on {} vertices and {} edges (re-validated: {ok}); alpha(Z2)=2: {}",
                    c.graph.vertices_of(c.graph.all_edges()).len(),
                    c.graph.edge_count(),
                    if none { "no failure" } else { "failure found" }
                ),
            )
        }
        None => outcome(false, "no failure found with alpha(Z2)=3"),
    }
}

fn criterion5() -> Outcome {
    let opts = AxiomOptions::default();
    let mut passing = true;
    for n in 2..=6 {
        let grp = group(&format!("dihedral {n}"));
        let a = AlphaFunction::builtin(BuiltinAlpha::Example4, grp).unwrap();
        passing &= a.verify_axioms(2, &opts).unwrap().passed;
    }
    let grp = group("product cyclic 3 ; cyclic 2 ; cyclic 3");
    let a = AlphaFunction::builtin(BuiltinAlpha::Example4, grp.clone()).unwrap();
    let report = a.verify_axioms(2, &opts).unwrap();
    let witness = report.first(gainmat::alpha::Axiom::C2).map(|v| v.witness.clone());
    let detail = match &witness {
        Some(gainmat::alpha::Witness::Pair { x, y }) => {
            let name = |s: gainmat::ElemSet| {
                s.iter().map(|e| grp.name(e).to_string()).collect::<Vec<_>>().join(" ")
            };
            format!(
                "dihedral 2..6 pass: {passing}; Z3xZ2xZ3 c2 witness X={{{}}} Y={{{}}}",
                name(*x),
                name(*y)
            )
        }
        other => format!("dihedral 2..6 pass: {passing}; Z3xZ2xZ3 c2 witness {other:?}"),
    };
    outcome(passing && witness.is_some(), detail)
}

fn criterion6() -> Outcome {
    let opts = AxiomOptions::default();
    let mut tried = 0;
    let mut failed = Vec::new();
    for n in 2..=12 {
        let grp = group(&format!("cyclic {n}"));
        for i in 1..n {
            let a = AlphaFunction::builtin(BuiltinAlpha::Example5 { n, i }, grp.clone()).unwrap();
            tried += 1;
            if !a.verify_axioms(2, &opts).unwrap().passed {
                failed.push(format!("n={n} i={i}"));
            }
        }
    }
    outcome(
        failed.is_empty(),
        format!("{tried} (n, i) pairs, failing: {failed:?}"),
    )
}

/// Minimum of `|E0| + sum part(f(E_i))` over valid partitions, by a subset
/// recursion that assigns the block of the lowest remaining edge.
fn partition_min(m: usize, table: &[Option<i64>], part: impl Fn(i64) -> i64) -> i64 {
    let full = (1usize << m) - 1;
    let mut h = vec![0i64; full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        let mut best = i64::MAX;
        let mut sub = rest;
        loop {
            let b = sub | low;
            let own = b.count_ones() as i64;
            let cost = table[b].map_or(own, |f| own.min(part(f)));
            best = best.min(cost + h[s ^ b]);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        h[s] = best;
    }
    h[full]
}

fn criterion7() -> Outcome {
    let mut checked = 0u64;
    let mut literal = 0u64;
    let mut clamped = 0u64;
    let mut certificate = 0u64;
    let mut example = None;
    for spec in ["cyclic 2", "cyclic 3", "cyclic 4"] {
        let grp = group(spec);
        let cfgs = configs(&grp);
        for_each_instance(&space(&grp, 4, 6, default_alphabet(&grp)), |g| {
            let m = g.edge_count();
            for p in &cfgs {
                let table: Vec<Option<i64>> = g
                    .all_edges()
                    .subsets()
                    .map(|s| {
                        (!s.is_empty() && connected(&g, s)).then(|| f_alpha(p, &g, s).unwrap())
                    })
                    .collect();
                let r = matroid_rank(p, &g, g.all_edges()).unwrap() as i64;
                checked += 1;
                if partition_min(m, &table, |f| f) != r {
                    literal += 1;
                    if example.is_none() {
                        example = Some(format!(
                            "{} k={} l={}: {:?}",
                            spec,
                            p.k,
                            p.ell,
                            g.edges()
                        ));
                    }
                }
                if partition_min(m, &table, |f| f.max(0)) != r {
                    clamped += 1;
                }
                if rank_certificate(p, &g).unwrap().value != r {
                    certificate += 1;
                }
            }
        });
    }
    outcome(
        literal == 0,
        format!(
            "{checked} instance-configurations; literal formula mismatches {literal} \
             (first: {}); with parts valued max(f, 0): {clamped}; rank_certificate: {certificate}",
            example.unwrap_or_else(|| "none".into())
        ),
    )
}

fn criterion8() -> Outcome {
    let runs: Vec<(&str, Alphabet)> = vec![
        ("trivial", Alphabet::Full),
        ("cyclic 2", Alphabet::Full),
        ("cyclic 3", Alphabet::Full),
        ("cyclic 4", Alphabet::Labels(vec![1, 2])),
        ("product cyclic 2 ; cyclic 2", Alphabet::Labels(vec![1, 2])),
        ("cyclic 5", Alphabet::Labels(vec![1, 2])),
        ("cyclic 6", Alphabet::Labels(vec![1, 3])),
        ("dihedral 3", Alphabet::Labels(vec![1, 3])),
    ];
    let mut checked = 0u64;
    let mut near = 0u64;
    let mut brute_mismatch = 0u64;
    let mut switching_checked = 0u64;
    let mut switching_mismatch = 0u64;
    for (spec, alphabet) in runs {
        let grp = group(spec);
        for_each_instance(&space(&grp, 4, 6, alphabet), |g| {
            let all = g.all_edges();
            if all.is_empty() || !g.is_connected(all) {
                return;
            }
            checked += 1;
            let lib = g.near_balanced(all).unwrap().is_some();
            near += u64::from(lib);
            if lib != near_balanced_brute(&g, all) {
                brute_mismatch += 1;
            }
            if g.edge_count() <= 5 {
                switching_checked += 1;
                if lib != near_balanced_by_switching(&g, all) {
                    switching_mismatch += 1;
                }
            }
        });
    }
    outcome(
        brute_mismatch == 0 && switching_mismatch == 0 && near > 0,
        format!(
            "{checked} connected instances ({near} near-balanced), split brute force \
             mismatches {brute_mismatch}; switching characterization on {switching_checked} \
             instances with |E|<=5, mismatches {switching_mismatch}"
        ),
    )
}

fn criterion9() -> Outcome {
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    let mut engine_mismatches = 0u64;
    for spec in ["cyclic 2", "cyclic 3", "cyclic 4"] {
        let grp = group(spec);
        let cfgs = configs(&grp);
        let sp = space(&grp, 4, 7, default_alphabet(&grp));
        for_each_instance(&sp, |g| {
            for p in &cfgs {
                checked += 1;
                let fast = check_sparse(p, &g).unwrap();
                let naive = check_sparse_naive(p, &g, g.all_edges()).unwrap();
                if fast.sparse != naive.sparse {
                    mismatches += 1;
                }
            }
        });
        engine_mismatches += verify_space(&sp, &cfgs)
            .unwrap()
            .iter()
            .map(|r| r.oracle_mismatches)
            .sum::<u64>();
    }
    outcome(
        mismatches == 0 && engine_mismatches == 0,
        format!(
            "{checked} instance-configurations, check_sparse vs check_sparse_naive \
             mismatches {mismatches}; exhaustive engine mismatches {engine_mismatches}"
        ),
    )
}

fn criterion10() -> Outcome {
    let suites: Vec<Suite> = Suite::ALL
        .into_iter()
        .filter(|&s| s != Suite::Prop0Equiv)
        .collect();
    let mut failures = vec![0u64; suites.len()];
    let mut filtered = vec![0u64; suites.len()];
    for spec in ["cyclic 2", "cyclic 3"] {
        let grp = group(spec);
        let s = SearchSpec::new(grp, SearchRule::TheoremFull);
        for (i, r) in run_property_suites(&suites, &s).unwrap().iter().enumerate() {
            println!("  {spec}: {r}");
            failures[i] += r.failures;
            filtered[i] += r.filtered;
        }
    }
    let vacuous: Vec<String> = suites
        .iter()
        .zip(&filtered)
        .filter(|(_, &f)| f == 0)
        .map(|(s, _)| s.to_string())
        .collect();
    let total: u64 = failures.iter().sum();
    outcome(
        total == 0 && vacuous.is_empty(),
        format!("{total} failures over Z2 and Z3 at |V|<=4, |E|<=8; vacuous suites: {vacuous:?}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "frame matroid equivalence", criterion1),
        (2, "matroid axioms for compliant parameters", criterion2),
        (3, "example3_naive counterexample", criterion3),
        (4, "alpha(Z2) necessity", criterion4),
        (5, "example4 axioms in both directions", criterion5),
        (6, "example5 axioms", criterion6),
        (7, "rank formula", criterion7),
        (8, "near-balancedness equivalence", criterion8),
        (9, "sparsity checker equivalence", criterion9),
        (10, "structural lemma suites", criterion10),
    ];
    let mut all = true;
    for (n, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        all &= o.pass;
        println!(
            "{} criterion {n} ({name}): {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
