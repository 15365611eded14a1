//! Circuit enumeration for count matroids from an independence oracle.
//!
//! Start from the fundamental circuits of a greedy basis and close the
//! family under elimination: for circuits `C1 != C2` and `e` in both, if no
//! known circuit lies inside `(C1 ∪ C2) - e`, a new circuit is extracted
//! from that dependent set. When no pair yields a new circuit, the family
//! holds every circuit.

use crate::error::Result;
use crate::graph::{EdgeSet, GainGraph};

use super::pebble::{count_independent, greedy_independent};

/// Shrinks a dependent set to a circuit.
fn minimize(dep: EdgeSet, indep: &mut impl FnMut(EdgeSet) -> bool) -> EdgeSet {
    let mut d = dep;
    for e in dep.iter() {
        if !indep(d.without(e)) {
            d.remove(e);
        }
    }
    d
}

/// All circuits of a matroid on `ground` given by an independence oracle,
/// sorted by bitmask.
pub fn circuits_from_oracle(
    ground: EdgeSet,
    mut indep: impl FnMut(EdgeSet) -> bool,
) -> Vec<EdgeSet> {
    let mut basis = EdgeSet::EMPTY;
    for e in ground.iter() {
        if indep(basis.with(e)) {
            basis.insert(e);
        }
    }
    let mut circuits: Vec<EdgeSet> = Vec::new();
    for e in ground.difference(basis).iter() {
        let c = minimize(basis.with(e), &mut indep);
        if !circuits.contains(&c) {
            circuits.push(c);
        }
    }
    let mut i = 0;
    while i < circuits.len() {
        for j in 0..i {
            let (c1, c2) = (circuits[i], circuits[j]);
            for e in c1.intersection(c2).iter() {
                let u = c1.union(c2).without(e);
                if circuits.iter().any(|c| c.is_subset(u)) {
                    continue;
                }
                let c = minimize(u, &mut indep);
                circuits.push(c);
            }
        }
        i += 1;
    }
    circuits.sort();
    circuits
}

/// All circuits of the (k, l)-count matroid restricted to `f`, sorted by
/// bitmask. Each circuit is connected when `l >= 1`.
pub fn enumerate_circuits(k: u32, ell: u32, g: &GainGraph, f: EdgeSet) -> Result<Vec<EdgeSet>> {
    // Validates parameters and the edge set once.
    greedy_independent(k, ell, g, f)?;
    Ok(circuits_from_oracle(f, |s| {
        count_independent(k, ell, g, s).expect("validated parameters")
    }))
}
