mod common;

use gainmat::format::{parse_document, write_document, AlphaSpec};
use gainmat::{BuiltinAlpha, CountRule, Error};
use proptest::prelude::*;

const SAMPLE: &str = "\
# a triangle with a loop
group dihedral 3
vertices 3
params k 2 l 3
alpha builtin example4
rule lifted
edge 1 2 r1
edge 2 3 s0
edge 3 1 r0
loop 3 s2
";

fn line_of(e: Error) -> usize {
    match e {
        Error::Parse { line, .. } => line,
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn parses_the_sample() {
    let doc = parse_document(SAMPLE).unwrap();
    assert_eq!(doc.group.order(), 6);
    assert_eq!(doc.graph.vertex_count(), 3);
    assert_eq!(doc.graph.edge_count(), 4);
    assert_eq!((doc.k, doc.ell), (Some(2), Some(3)));
    assert_eq!(doc.alpha, Some(AlphaSpec::Builtin(BuiltinAlpha::Example4)));
    let e = doc.graph.edge(1);
    assert_eq!((e.tail, e.head), (1, 2));
    assert_eq!(doc.group.name(e.label), "s0");
    let l = doc.graph.edge(3);
    assert_eq!((l.tail, l.head), (2, 2));
    assert!(doc.params().is_ok());
}

#[test]
fn round_trips() {
    let doc = parse_document(SAMPLE).unwrap();
    let text = write_document(&doc);
    let again = parse_document(&text).unwrap();
    assert_eq!(write_document(&again), text);
    assert_eq!(again.graph.edges(), doc.graph.edges());
}

#[test]
fn tables_and_rules() {
    let text = "\
group cyclic 4
vertices 2
params k 2 l 3
alpha table
1 -> 3
2 -> 2
rule unlifted
edge 1 2 1
";
    let doc = parse_document(text).unwrap();
    let p = doc.params().unwrap();
    assert_eq!(p.rule, CountRule::Plain);
    let again = parse_document(&write_document(&doc)).unwrap();
    assert_eq!(again.alpha, doc.alpha);
    assert_eq!(again.rule, doc.rule);
    let table = "group table 2\n0 1\n1 0\nvertices 1\nloop 1 1\n";
    let doc = parse_document(table).unwrap();
    assert_eq!(doc.group.order(), 2);
}

#[test]
fn errors_carry_line_numbers() {
    assert_eq!(line_of(parse_document("group cyclic 3\nvertices 2\nedge 1 3 1\n").unwrap_err()), 3);
    assert_eq!(line_of(parse_document("group cyclic 3\nvertices 2\nedge 1 2 9\n").unwrap_err()), 3);
    assert_eq!(line_of(parse_document("group cyclic 3\nfoo\n").unwrap_err()), 2);
    assert_eq!(line_of(parse_document("# c\n\ngroup cyclic 3\ngroup cyclic 3\n").unwrap_err()), 4);
    assert_eq!(line_of(parse_document("group cyclic 3\nvertices 1\nparams k 2\n").unwrap_err()), 3);
    assert_eq!(line_of(parse_document("group cyclic 3\nvertices 1\nrule sideways\n").unwrap_err()), 3);
    assert_eq!(line_of(parse_document("group cyclic x\n").unwrap_err()), 1);
    // Missing mandatory lines are reported against line 0.
    assert_eq!(line_of(parse_document("vertices 2\n").unwrap_err()), 0);
    // A non-compliant alpha parses, but its parameters are refused.
    let doc = parse_document(
        "group cyclic 2\nvertices 1\nparams k 2 l 3\nalpha builtin example3_naive\n",
    )
    .unwrap();
    assert!(matches!(doc.params(), Err(Error::InvalidParams(_))));
}

proptest! {
    #[test]
    fn random_graphs_round_trip(
        spec in prop::sample::select(vec!["cyclic 5", "dihedral 4", "product cyclic 2 ; cyclic 3"]),
        n in 1usize..6,
        raw in prop::collection::vec((0usize..6, 0usize..6, 0usize..12), 0..10),
    ) {
        let grp = common::group(spec);
        let edges: Vec<_> = raw.iter().map(|&(u, v, x)| (u % n, v % n, x % grp.order())).collect();
        let g = common::graph(&grp, n, &edges);
        let mut text = format!("group {spec}\nvertices {n}\n");
        for e in g.edges() {
            let kw = if e.tail == e.head { "loop" } else { "edge" };
            let head = if e.tail == e.head { String::new() } else { format!(" {}", e.head + 1) };
            text += &format!("{kw} {}{head} {}\n", e.tail + 1, grp.name(e.label));
        }
        let doc = parse_document(&text).unwrap();
        prop_assert_eq!(doc.graph.edges(), g.edges());
        let again = parse_document(&write_document(&doc)).unwrap();
        prop_assert_eq!(again.graph.edges(), g.edges());
    }
}
