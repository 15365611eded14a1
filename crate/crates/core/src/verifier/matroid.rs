use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::count::{check_sparse_naive, f_alpha, SparsityChecker, SparsityParams};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, GainGraph};

/// Largest edge count accepted by [`verify_matroid`].
pub const MATROID_BOUND: usize = 12;
/// Up to this edge count the naive sparsity oracle is run alongside the
/// circuit-based one and the two are compared on every subset.
pub const CROSS_CHECK_BOUND: usize = 8;

/// `Y` independent with a dependent subset `X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct I2Witness {
    pub independent: EdgeSet,
    pub dependent: EdgeSet,
}

/// Two maximal independent subsets of `restriction` of different sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct I3Witness {
    pub restriction: EdgeSet,
    pub smaller: EdgeSet,
    pub larger: EdgeSet,
}

/// Outcome of checking the independence axioms on one graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomVerdict {
    pub i1: bool,
    pub i2: Option<I2Witness>,
    pub i3: Option<I3Witness>,
    /// A subset on which the two sparsity oracles disagree.
    pub oracle_mismatch: Option<EdgeSet>,
}

impl AxiomVerdict {
    /// True iff the independent sets form a matroid.
    pub fn is_matroid(&self) -> bool {
        self.i1 && self.i2.is_none() && self.i3.is_none()
    }
}

/// Independence of every subset of the edge set, indexed by bitmask.
pub(crate) fn independence_table(p: &SparsityParams, g: &GainGraph) -> Result<Vec<bool>> {
    let m = g.edge_count();
    let all = g.all_edges();
    let checker = SparsityChecker::new(p.k, p.ell, g, all)?;
    let mut cache: FxHashMap<EdgeSet, i64> = FxHashMap::default();
    let mut out = Vec::with_capacity(1 << m);
    for s in all.subsets() {
        let ok = checker.subset_sparse(g, s, |c| {
            *cache
                .entry(c)
                .or_insert_with(|| f_alpha(p, g, c).expect("circuits are connected"))
        })?;
        out.push(ok);
    }
    Ok(out)
}

/// Checks (I1), (I2) and (I3) over all subsets of the edge set by brute
/// force.
pub fn verify_matroid(p: &SparsityParams, g: &GainGraph) -> Result<AxiomVerdict> {
    let m = g.edge_count();
    if m > MATROID_BOUND {
        return Err(Error::TooLarge {
            what: "edge count for axiom verification",
            size: m,
            bound: MATROID_BOUND,
        });
    }
    let indep = independence_table(p, g)?;
    let mut oracle_mismatch = None;
    if m <= CROSS_CHECK_BOUND {
        for s in g.all_edges().subsets() {
            if check_sparse_naive(p, g, s)?.sparse != indep[s.0 as usize] {
                oracle_mismatch = Some(s);
                break;
            }
        }
    }
    let full = (1usize << m) - 1;
    let i1 = indep[0];
    // One-element removals suffice: a dependent subset of an independent
    // set is reached by a chain that drops one edge at a time.
    let mut i2 = None;
    'i2: for y in 0..=full {
        if !indep[y] {
            continue;
        }
        for e in 0..m {
            if y >> e & 1 == 1 && !indep[y ^ 1 << e] {
                i2 = Some(I2Witness {
                    independent: EdgeSet(y as u64),
                    dependent: EdgeSet((y ^ 1 << e) as u64),
                });
                break 'i2;
            }
        }
    }
    // ext[i]: edges whose addition keeps the independent set i independent.
    let mut ext = vec![0usize; full + 1];
    for i in 0..=full {
        if indep[i] {
            for e in 0..m {
                if i >> e & 1 == 0 && indep[i | 1 << e] {
                    ext[i] |= 1 << e;
                }
            }
        }
    }
    let mut i3 = None;
    'i3: for r in 0..=full {
        let mut small: Option<usize> = None;
        let mut large: Option<usize> = None;
        let mut sub = r;
        loop {
            if indep[sub] && ext[sub] & r == 0 {
                let c = sub.count_ones();
                if small.is_none_or(|s| c < s.count_ones()) {
                    small = Some(sub);
                }
                if large.is_none_or(|l| c > l.count_ones()) {
                    large = Some(sub);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & r;
        }
        if let (Some(s), Some(l)) = (small, large) {
            if s.count_ones() != l.count_ones() {
                i3 = Some(I3Witness {
                    restriction: EdgeSet(r as u64),
                    smaller: EdgeSet(s as u64),
                    larger: EdgeSet(l as u64),
                });
                break 'i3;
            }
        }
    }
    Ok(AxiomVerdict {
        i1,
        i2,
        i3,
        oracle_mismatch,
    })
}
