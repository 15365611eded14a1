use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alpha::{AlphaFunction, AxiomOptions};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, GainGraph};

use super::circuits::enumerate_circuits;
use super::pebble::k0_orientation;

/// Largest edge set accepted by [`check_sparse_naive`].
pub const NAIVE_BOUND: usize = 20;

/// How `beta` is derived from the alpha value of a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountRule {
    /// `min(alpha~, k)` on near-balanced sets, `alpha~` otherwise.
    Lifted,
    /// `alpha~` on every set, with no near-balance clause.
    Plain,
}

impl fmt::Display for CountRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountRule::Lifted => "lifted",
            CountRule::Plain => "unlifted",
        })
    }
}

/// `(k, l)` together with the alpha function and the count rule.
#[derive(Clone, Debug)]
pub struct SparsityParams {
    pub k: u32,
    pub ell: u32,
    pub alpha: AlphaFunction,
    pub rule: CountRule,
}

impl SparsityParams {
    /// Validated parameters under the lifted rule: `k >= 1`,
    /// `0 <= l <= 2k - 1`, alpha bounded by `l` and passing every axiom
    /// check including smoothness for `k`.
    pub fn new(k: u32, ell: u32, alpha: AlphaFunction) -> Result<SparsityParams> {
        let p = SparsityParams::unverified(k, ell, alpha, CountRule::Lifted)?;
        let report = p.alpha.verify_axioms(k, &AxiomOptions::default())?;
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidParams(format!(
                "alpha fails axiom {} (witness {:?})",
                v.axiom, v.witness
            )));
        }
        Ok(p)
    }

    /// Parameters with only the structural checks, for exploring count
    /// conditions outside the theorem (such as the unlifted rule).
    pub fn unverified(
        k: u32,
        ell: u32,
        alpha: AlphaFunction,
        rule: CountRule,
    ) -> Result<SparsityParams> {
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if ell >= 2 * k {
            return Err(Error::InvalidParams(format!(
                "l must satisfy 0 <= l <= 2k - 1, got k={k}, l={ell}"
            )));
        }
        if alpha.max_value() as u32 > ell {
            return Err(Error::InvalidParams(format!(
                "alpha takes the value {} which exceeds l = {ell}",
                alpha.max_value()
            )));
        }
        Ok(SparsityParams {
            k,
            ell,
            alpha,
            rule,
        })
    }

    /// `beta` from the alpha value and near-balancedness of a set.
    #[inline]
    pub fn beta_from(&self, alpha_tilde: u8, near_balanced: bool) -> i64 {
        let a = alpha_tilde as i64;
        match self.rule {
            CountRule::Lifted if near_balanced => a.min(self.k as i64),
            _ => a,
        }
    }

    /// `k n - l + beta` for a set spanning `n` vertices.
    #[inline]
    pub fn f_from(&self, n_vertices: usize, beta: i64) -> i64 {
        self.k as i64 * n_vertices as i64 - self.ell as i64 + beta
    }
}

/// `beta(F)` for a connected nonempty `f`.
pub fn beta(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<i64> {
    let id = g.subgroup_id_of_set(f)?;
    let a = p.alpha.value_by_id(id);
    // The near-balance clause only matters when alpha~ exceeds k.
    let nb = p.rule == CountRule::Lifted
        && a as u32 > p.k
        && id != 0
        && g.near_balanced_unchecked(f);
    Ok(p.beta_from(a, nb))
}

/// `f_alpha(F) = k |V(F)| - l + beta(F)` for a connected nonempty `f`.
pub fn f_alpha(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<i64> {
    let b = beta(p, g, f)?;
    Ok(p.f_from(g.vertices_of(f).len(), b))
}

/// Outcome of a sparsity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountVerdict {
    pub sparse: bool,
    /// A connected set `F` with `|F| > f_alpha(F)` when not sparse.
    pub witness: Option<EdgeSet>,
}

impl CountVerdict {
    fn sparse() -> Self {
        CountVerdict {
            sparse: true,
            witness: None,
        }
    }

    fn violated(w: EdgeSet) -> Self {
        CountVerdict {
            sparse: false,
            witness: Some(w),
        }
    }
}

/// Reference check over every nonempty connected subset of `f`. Returns
/// the violating subset with the least bitmask.
pub fn check_sparse_naive(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<CountVerdict> {
    g.check_set(f)?;
    if f.len() > NAIVE_BOUND {
        return Err(Error::TooLarge {
            what: "edge set",
            size: f.len(),
            bound: NAIVE_BOUND,
        });
    }
    for s in f.subsets().skip(1) {
        if g.is_connected(s) && s.len() as i64 > f_alpha(p, g, s)? {
            return Ok(CountVerdict::violated(s));
        }
    }
    Ok(CountVerdict::sparse())
}

/// Structural data for checking sparsity of one edge set under any alpha:
/// the (k, 0) verdict and the circuits of `M_{k,l'}` for `l' = 1..l`.
#[derive(Clone, Debug)]
pub struct SparsityChecker {
    k: u32,
    k0_witness: Option<EdgeSet>,
    /// `(l', circuit)` pairs in order of `l'`, then bitmask.
    circuits: Vec<(u32, EdgeSet)>,
}

impl SparsityChecker {
    pub fn new(k: u32, ell: u32, g: &GainGraph, f: EdgeSet) -> Result<SparsityChecker> {
        let k0_witness = k0_orientation(k, g, f)?;
        let mut circuits = Vec::new();
        for lp in 1..=ell {
            for c in enumerate_circuits(k, lp, g, f)? {
                circuits.push((lp, c));
            }
        }
        Ok(SparsityChecker {
            k,
            k0_witness,
            circuits,
        })
    }

    pub fn k0_witness(&self) -> Option<EdgeSet> {
        self.k0_witness
    }

    pub fn circuits(&self) -> &[(u32, EdgeSet)] {
        &self.circuits
    }

    /// Verdict for the whole set, given `f_alpha` on connected sets.
    pub fn verdict(&self, mut f: impl FnMut(EdgeSet) -> Result<i64>) -> Result<CountVerdict> {
        if let Some(w) = self.k0_witness {
            return Ok(CountVerdict::violated(w));
        }
        for &(_, c) in &self.circuits {
            if c.len() as i64 > f(c)? {
                return Ok(CountVerdict::violated(c));
            }
        }
        Ok(CountVerdict::sparse())
    }

    /// Whether every circuit inside `s` passes the count. The circuits of a
    /// restriction are the circuits contained in it, so together with
    /// (k, 0)-sparsity of `s` this decides sparsity of any subset of the
    /// set the checker was built for.
    pub fn subset_passes(&self, s: EdgeSet, mut f: impl FnMut(EdgeSet) -> i64) -> bool {
        self.circuits
            .iter()
            .filter(|(_, c)| c.is_subset(s))
            .all(|&(_, c)| c.len() as i64 <= f(c))
    }

    /// Sparsity of a subset `s` of the checker's set.
    pub fn subset_sparse(
        &self,
        g: &GainGraph,
        s: EdgeSet,
        f: impl FnMut(EdgeSet) -> i64,
    ) -> Result<bool> {
        Ok(k0_orientation(self.k, g, s)?.is_none() && self.subset_passes(s, f))
    }
}

/// Sparsity of the subgraph on `f`: (k, 0)-sparsity by orientation, then
/// every circuit of `M_{k,l'}`, `1 <= l' <= l`, against `f_alpha`.
pub fn check_sparse_in(p: &SparsityParams, g: &GainGraph, f: EdgeSet) -> Result<CountVerdict> {
    let checker = SparsityChecker::new(p.k, p.ell, g, f)?;
    checker.verdict(|c| f_alpha(p, g, c))
}

/// Sparsity of the whole graph.
pub fn check_sparse(p: &SparsityParams, g: &GainGraph) -> Result<CountVerdict> {
    check_sparse_in(p, g, g.all_edges())
}

/// Independence of `i` in the lifted count matroid.
pub fn independent(p: &SparsityParams, g: &GainGraph, i: EdgeSet) -> Result<bool> {
    Ok(check_sparse_in(p, g, i)?.sparse)
}
