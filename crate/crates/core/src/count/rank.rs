use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, GainGraph};

use super::circuits::enumerate_circuits;
use super::pebble::k0_orientation;
use super::sparsity::{beta, check_sparse, f_alpha, SparsityChecker, SparsityParams};

/// Largest edge set accepted by [`rank_certificate`].
pub const CERTIFICATE_BOUND: usize = 10;
/// Largest edge set accepted by [`tight_sets`] and [`is_full`].
pub const SUBSET_BOUND: usize = 16;

/// Rank of `f` by growing an independent set greedily in ascending id order.
pub fn matroid_rank(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<usize> {
    Ok(greedy_basis(p, g, f)?.len())
}

/// The basis of `f` found by the ascending greedy.
pub fn greedy_basis(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<EdgeSet> {
    let checker = SparsityChecker::new(p.k, p.ell, g, f)?;
    let mut cache: FxHashMap<EdgeSet, i64> = FxHashMap::default();
    let mut basis = EdgeSet::EMPTY;
    for e in f.iter() {
        let t = basis.with(e);
        let ok = checker.subset_sparse(g, t, |c| {
            *cache
                .entry(c)
                .or_insert_with(|| f_alpha(p, g, c).expect("circuits are connected"))
        })?;
        if ok {
            basis = t;
        }
    }
    Ok(basis)
}

/// A valid partition `{E0, E1, ..., Et}` of the edge set with each `Ei`
/// connected for `i >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub e0: EdgeSet,
    pub parts: Vec<EdgeSet>,
    /// `|E0| + sum of max(f_alpha(Ei), 0)`.
    pub value: i64,
}

/// A valid partition minimizing `|E0| + sum max(f_alpha(Ei), 0)`, whose
/// value is the rank of the whole edge set.
///
/// A part with `f_alpha < 0` only arises from loops at a single vertex
/// when `l > k`. Each such loop is dependent on its own, so the part
/// contributes nothing to the rank and is counted as zero. Without that
/// clamp the minimum would drop below the rank on such graphs.
pub fn rank_certificate(p: &SparsityParams, g: &GainGraph) -> Result<PartitionCertificate> {
    let m = g.edge_count();
    if m > CERTIFICATE_BOUND {
        return Err(Error::TooLarge {
            what: "edge set for a rank certificate",
            size: m,
            bound: CERTIFICATE_BOUND,
        });
    }
    let full = (1usize << m) - 1;
    // Clamped f_alpha of every connected subset, indexed by bitmask.
    let mut fval: Vec<Option<i64>> = vec![None; full + 1];
    for s in EdgeSet::full(m).subsets().skip(1) {
        if g.is_connected(s) {
            fval[s.0 as usize] = Some(f_alpha(p, g, s)?.max(0));
        }
    }
    // best[s]: minimum value over valid partitions of s; choice[s]: the
    // block holding the lowest edge of s, or 0 when that edge is in E0.
    let mut best = vec![0i64; full + 1];
    let mut choice = vec![0usize; full + 1];
    for s in 1..=full {
        let low = s & s.wrapping_neg();
        let mut b = 1 + best[s ^ low];
        let mut c = 0;
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let block = sub | low;
            if let Some(v) = fval[block] {
                let cand = v + best[s ^ block];
                if cand < b {
                    b = cand;
                    c = block;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[s] = b;
        choice[s] = c;
    }
    let mut e0 = EdgeSet::EMPTY;
    let mut parts = Vec::new();
    let mut s = full;
    while s != 0 {
        let low = s & s.wrapping_neg();
        let c = choice[s];
        if c == 0 {
            e0.insert(low.trailing_zeros() as usize);
            s ^= low;
        } else {
            parts.push(EdgeSet(c as u64));
            s ^= c;
        }
    }
    parts.sort();
    Ok(PartitionCertificate {
        e0,
        parts,
        value: best[full],
    })
}

/// Every inclusion-maximal f_alpha-tight subset of the edge set, sorted by
/// bitmask. The graph must be f_alpha-sparse. Maximal tight sets are
/// pairwise edge-disjoint since tight sets sharing an edge have a tight
/// union.
pub fn tight_sets(p: &SparsityParams, g: &GainGraph) -> Result<Vec<EdgeSet>> {
    let m = g.edge_count();
    if m > SUBSET_BOUND {
        return Err(Error::TooLarge {
            what: "edge set for tight-set enumeration",
            size: m,
            bound: SUBSET_BOUND,
        });
    }
    if !check_sparse(p, g)?.sparse {
        return Err(Error::NotSparse);
    }
    let mut tight = Vec::new();
    for s in g.all_edges().subsets().skip(1) {
        if g.is_connected(s) && s.len() as i64 == f_alpha(p, g, s)? {
            tight.push(s);
        }
    }
    let maximal: Vec<EdgeSet> = tight
        .iter()
        .copied()
        .filter(|&s| !tight.iter().any(|&t| t != s && s.is_subset(t)))
        .collect();
    debug_assert!(maximal.iter().enumerate().all(|(i, a)| maximal[i + 1..]
        .iter()
        .all(|b| a.intersection(*b).is_empty())));
    Ok(maximal)
}

/// Whether the connected set `f` is f_alpha-full: some connected spanning
/// f_alpha-sparse `T ⊆ f` has `beta(T) = beta(f)` and
/// `|T| >= k|V(f)| - l + min(beta(T), 2k - l + 1)`.
pub fn is_full(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<bool> {
    g.check_set(f)?;
    if f.is_empty() {
        return Err(Error::EmptyEdgeSet);
    }
    if !g.is_connected(f) {
        return Err(Error::Disconnected);
    }
    if f.len() > SUBSET_BOUND {
        return Err(Error::TooLarge {
            what: "edge set for a fullness test",
            size: f.len(),
            bound: SUBSET_BOUND,
        });
    }
    let verts = g.vertices_of(f);
    let n = verts.len() as i64;
    let (k, ell) = (p.k as i64, p.ell as i64);
    let beta_f = beta(p, g, f)?;
    let mut circuits = Vec::new();
    for lp in 1..=p.ell {
        circuits.extend(enumerate_circuits(p.k, lp, g, f)?);
    }
    let mut cache: FxHashMap<EdgeSet, i64> = FxHashMap::default();
    for t in f.subsets().skip(1) {
        if g.vertices_of(t) != verts || !g.is_connected(t) {
            continue;
        }
        let bt = beta(p, g, t)?;
        if bt != beta_f || (t.len() as i64) < k * n - ell + bt.min(2 * k - ell + 1) {
            continue;
        }
        if k0_orientation(p.k, g, t)?.is_some() {
            continue;
        }
        let mut ok = true;
        for &c in circuits.iter().filter(|c| c.is_subset(t)) {
            let fc = match cache.get(&c) {
                Some(&v) => v,
                None => {
                    let v = f_alpha(p, g, c)?;
                    cache.insert(c, v);
                    v
                }
            };
            if c.len() as i64 > fc {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(true);
        }
    }
    Ok(false)
}
