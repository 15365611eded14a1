mod common;

use gainmat::{ElemSet, Group, GroupSpec};

use common::{closure, group};

fn specs() -> Vec<&'static str> {
    vec![
        "trivial",
        "cyclic 1",
        "cyclic 2",
        "cyclic 6",
        "cyclic 12",
        "dihedral 2",
        "dihedral 3",
        "dihedral 4",
        "dihedral 6",
        "product cyclic 2 ; cyclic 2",
        "product cyclic 2 ; dihedral 3",
    ]
}

/// Every subset closed under the product, for groups small enough to list
/// all subsets.
fn subgroups_by_closure(g: &Group) -> Vec<ElemSet> {
    let n = g.order();
    let mut out = Vec::new();
    for mask in 1u64..1 << n {
        let s = ElemSet(mask);
        if !s.contains(g.identity()) {
            continue;
        }
        if s.iter().all(|a| s.iter().all(|b| s.contains(g.mul(a, b)))) {
            out.push(s);
        }
    }
    out
}

#[test]
fn group_axioms_hold() {
    for spec in specs() {
        let g = group(spec);
        let id = g.identity();
        for a in g.elements() {
            assert_eq!(g.mul(a, id), a, "{spec}");
            assert_eq!(g.mul(id, a), a, "{spec}");
            assert_eq!(g.mul(a, g.inv(a)), id, "{spec}");
            for b in g.elements() {
                for c in g.elements() {
                    assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{spec}");
                }
            }
        }
    }
}

#[test]
fn lattice_matches_closure_enumeration() {
    for spec in specs() {
        let g = group(spec);
        if g.order() > 12 {
            continue;
        }
        let mut expected = subgroups_by_closure(&g);
        let mut got = g.lattice().subgroups().to_vec();
        expected.sort_by_key(|s| s.0);
        got.sort_by_key(|s| s.0);
        assert_eq!(got, expected, "{spec}");
        assert_eq!(g.lattice().subgroup(0), ElemSet::singleton(g.identity()));
    }
}

#[test]
fn known_lattice_sizes() {
    // Divisor counts for cyclic groups; n + d(n) + sigma(n) style counts for
    // dihedral groups: D3 has 6 subgroups, D4 has 10, D6 has 16.
    let cases = [
        ("cyclic 12", 6, 6),
        ("dihedral 3", 6, 4),
        ("dihedral 4", 10, 8),
        ("dihedral 6", 16, 10),
        ("product cyclic 2 ; cyclic 2", 5, 5),
    ];
    for (spec, subgroups, classes) in cases {
        let g = group(spec);
        assert_eq!(g.lattice().len(), subgroups, "{spec}");
        assert_eq!(g.lattice().class_count(), classes, "{spec}");
    }
}

#[test]
fn generated_matches_closure() {
    for spec in ["dihedral 4", "product cyclic 2 ; dihedral 3", "cyclic 12"] {
        let g = group(spec);
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                let s = ElemSet::from_elems([a, b]);
                assert_eq!(g.generated(s), closure(&g, &[a, b]), "{spec} {a} {b}");
            }
        }
    }
}

#[test]
fn conjugate_subgroups_share_a_class() {
    let g = group("dihedral 3");
    let lat = g.lattice();
    let s: Vec<usize> = ["s0", "s1", "s2"]
        .iter()
        .map(|n| {
            let x = g.elem_by_name(n).unwrap();
            lat.id_of(g.generated(ElemSet::singleton(x))).unwrap()
        })
        .collect();
    assert_eq!(lat.class_id(s[0]), lat.class_id(s[1]));
    assert_eq!(lat.class_id(s[1]), lat.class_id(s[2]));
    let r = lat
        .id_of(g.generated(ElemSet::singleton(g.elem_by_name("r1").unwrap())))
        .unwrap();
    assert_ne!(lat.class_id(r), lat.class_id(s[0]));
}

#[test]
fn classification() {
    let g = group("product cyclic 2 ; cyclic 2");
    let all = gainmat::group::Subgroup { members: g.all() };
    let c = g.classify_subgroup(&all);
    assert!(!c.is_cyclic && !c.iso_to_z2 && !c.is_trivial);
    let z = group("cyclic 6");
    let three = z.elem_by_name("3").unwrap();
    let h = z.generated_subgroup(ElemSet::singleton(three));
    let c = z.classify_subgroup(&h);
    assert!(c.is_cyclic && c.iso_to_z2);
    assert_eq!(c.cyclic_order, Some(2));
}

#[test]
fn maximal_cyclic_subgroups() {
    let g = group("dihedral 4");
    let r2 = g.elem_by_name("r2").unwrap();
    // r2 lies in <r1> (order 4) only among cyclic subgroups other than <r2>.
    let found = g.maximal_cyclic_subgroups_containing(r2).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].order(), 4);
    let s0 = g.elem_by_name("s0").unwrap();
    let found = g.maximal_cyclic_subgroups_containing(s0).unwrap();
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].order(), 2);
}

#[test]
fn names_round_trip() {
    for spec in specs() {
        let g = group(spec);
        for a in g.elements() {
            assert_eq!(g.elem_by_name(g.name(a)).unwrap(), a);
        }
    }
    assert!(group("cyclic 3").elem_by_name("7").is_err());
}

#[test]
fn rejects_oversized_and_malformed_specs() {
    assert!(Group::new(&GroupSpec::Cyclic(65)).is_err());
    assert!(Group::new(&GroupSpec::Dihedral(40)).is_err());
    assert!("cyclic".parse::<GroupSpec>().is_err());
    assert!("cyclic x".parse::<GroupSpec>().is_err());
    assert!("free 2".parse::<GroupSpec>().is_err());
}

#[test]
fn table_groups_match_builtins() {
    let z4 = Group::from_table(vec![
        vec![0, 1, 2, 3],
        vec![1, 2, 3, 0],
        vec![2, 3, 0, 1],
        vec![3, 0, 1, 2],
    ])
    .unwrap();
    assert_eq!(z4.lattice().len(), 3);
    assert_eq!(z4.elem_order(1), 4);
}
