mod common;

use gainmat::count::independent;
use gainmat::verifier::{
    enumerate_instances, run_property_suite, search_counterexample, verify_matroid, verify_space,
    Alphabet, InstanceSpace, SearchRule, SearchSpec, Suite,
};
use gainmat::{AlphaFunction, BuiltinAlpha, SparsityParams};

use common::{f_table, group, independence_from_table};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Multisets of at most `m` edges over `n(n+1)/2` slots times `labels`.
fn expected_instances(n: u64, m: u64, labels: u64) -> u64 {
    let types = n * (n + 1) / 2 * labels;
    binomial(types + m, m)
}

#[test]
fn instance_counts() {
    let z3 = group("cyclic 3");
    let one = InstanceSpace::new(z3.clone(), 1, 1, &Alphabet::IdentityAnd(1)).unwrap();
    assert_eq!(one.len(), 3);
    let spec = SearchSpec::new(z3.clone(), SearchRule::TheoremFull).with_bounds(1, 1);
    let graphs = enumerate_instances(&spec).unwrap();
    let sizes: Vec<_> = graphs.iter().map(|g| g.edge_count()).collect();
    assert_eq!(sizes, vec![0, 1, 1]);
    assert_eq!(
        InstanceSpace::new(z3.clone(), 4, 7, &Alphabet::IdentityAnd(1)).unwrap().len(),
        888_030
    );
    for (n, m) in [(2, 3), (3, 4), (4, 5)] {
        let s = InstanceSpace::new(z3.clone(), n, m, &Alphabet::Full).unwrap();
        assert_eq!(s.len() as u64, expected_instances(n as u64, m as u64, 3));
        let l = InstanceSpace::new(z3.clone(), n, m, &Alphabet::Labels(vec![2, 1, 2])).unwrap();
        assert_eq!(l.len() as u64, expected_instances(n as u64, m as u64, 3));
    }
    assert!(InstanceSpace::new(z3.clone(), 9, 2, &Alphabet::Full).is_err());
    assert!(InstanceSpace::new(z3.clone(), 4, 13, &Alphabet::Full).is_err());
    assert!(InstanceSpace::new(z3, 8, 12, &Alphabet::Full).is_err());
}

#[test]
fn matroid_verdicts_match_the_oracle_table() {
    let grp = group("cyclic 3");
    let p = SparsityParams::new(
        2,
        3,
        AlphaFunction::builtin(BuiltinAlpha::Example3Lifted, grp.clone()).unwrap(),
    )
    .unwrap();
    let spec = SearchSpec::new(grp, SearchRule::TheoremFull).with_bounds(3, 5);
    for g in enumerate_instances(&spec).unwrap() {
        let v = verify_matroid(&p, &g).unwrap();
        assert!(v.is_matroid());
        assert!(v.oracle_mismatch.is_none());
        let table = f_table(p.k, p.ell, &p.alpha, true, &g);
        let indep = independence_from_table(g.edge_count(), &table);
        for s in g.all_edges().subsets() {
            assert_eq!(independent(&p, &g, s).unwrap(), indep[s.0 as usize]);
        }
    }
}

/// The first non-matroid instance of a space is the same whether found by
/// the exhaustive engine or by the literal check on every instance, since
/// every restriction of an instance is enumerated before it.
#[test]
fn engine_agrees_with_literal_checks() {
    let grp = group("cyclic 2");
    let spec = SearchSpec::new(grp, SearchRule::Example3NearbalOnly).with_bounds(3, 7);
    let p = spec.params().unwrap();
    let found = search_counterexample(&spec).unwrap().expect("a counterexample on 3 vertices");
    let literal = enumerate_instances(&spec)
        .unwrap()
        .into_iter()
        .find(|g| !verify_matroid(&p, g).unwrap().is_matroid())
        .expect("a literal failure");
    assert_eq!(found.graph.edges(), literal.edges());
    assert_eq!(found.graph.edge_count(), 7);
    assert!(!found.verdict.is_matroid());
    // The witnesses hold up under the oracle.
    let g = &found.graph;
    let table = f_table(p.k, p.ell, &p.alpha, true, g);
    let indep = independence_from_table(g.edge_count(), &table);
    if let Some(w) = &found.verdict.i2 {
        assert!(indep[w.independent.0 as usize]);
        assert!(!indep[w.dependent.0 as usize]);
        assert!(w.dependent.is_subset(w.independent));
    }
    if let Some(w) = &found.verdict.i3 {
        assert!(indep[w.smaller.0 as usize] && indep[w.larger.0 as usize]);
        assert!(w.smaller.len() < w.larger.len());
        for e in w.restriction.difference(w.smaller).iter() {
            assert!(!indep[w.smaller.with(e).0 as usize]);
        }
    }
}

#[test]
fn theorem_full_has_no_counterexample() {
    for spec in ["cyclic 2", "cyclic 3", "dihedral 3"] {
        let s = SearchSpec::new(group(spec), SearchRule::TheoremFull).with_bounds(3, 6);
        assert!(search_counterexample(&s).unwrap().is_none(), "{spec}");
    }
}

#[test]
fn verify_space_reports_each_configuration() {
    let grp = group("cyclic 4");
    let a = |b| AlphaFunction::builtin(b, grp.clone()).unwrap();
    let params = vec![
        SparsityParams::new(1, 1, a(BuiltinAlpha::Frame)).unwrap(),
        SparsityParams::new(2, 3, a(BuiltinAlpha::Example2)).unwrap(),
    ];
    let space = InstanceSpace::new(grp.clone(), 3, 5, &Alphabet::Labels(vec![1, 2])).unwrap();
    let reports = verify_space(&space, &params).unwrap();
    assert_eq!(reports.len(), 2);
    for r in &reports {
        assert!(r.passed(), "{}", r.label);
        assert_eq!(r.instances, space.len() as u64);
    }
    assert!(reports[0].label.contains("frame"));
}

#[test]
fn suites_run_clean_on_small_spaces() {
    let spec = SearchSpec::new(group("cyclic 3"), SearchRule::TheoremFull).with_bounds(3, 5);
    for suite in Suite::ALL {
        let r = run_property_suite(suite, &spec).unwrap();
        assert_eq!(r.failures, 0, "{r}");
        assert!(r.tested > 0, "{r}");
        assert_eq!(r.to_string().split_whitespace().next(), Some("SUITE"));
    }
    assert!("prop0_equiv".parse::<Suite>().is_ok());
    assert!("nonsense".parse::<Suite>().is_err());
}
