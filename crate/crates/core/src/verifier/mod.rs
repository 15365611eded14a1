//! Exhaustive verification: matroid axioms on single graphs and over whole
//! instance spaces, counterexample search and the structural property
//! suites.

mod matroid;
mod oracle;
mod space;
mod store;
mod suites;

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alpha::{AlphaFunction, BuiltinAlpha};
use crate::count::{CountRule, SparsityParams};
use crate::error::{Error, Result};
use crate::graph::GainGraph;
use crate::group::Group;

pub use matroid::{
    verify_matroid, AxiomVerdict, I2Witness, I3Witness, CROSS_CHECK_BOUND, MATROID_BOUND,
};
pub use oracle::near_balanced_brute;
pub use space::{Alphabet, InstanceSpace, MAX_INSTANCES, MAX_INSTANCE_EDGES};
pub use suites::{run_property_suite, run_property_suites, Suite, SuiteReport};

use store::Engine;

/// The count condition explored by a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchRule {
    /// Value 3 on every unbalanced set, no near-balance clause.
    Example3Naive,
    /// Value 3 on unbalanced sets, capped at `k` on near-balanced ones,
    /// with no special value for subgroups of order two.
    Example3NearbalOnly,
    /// The lifted count with validated parameters.
    TheoremFull,
}

impl fmt::Display for SearchRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchRule::Example3Naive => "example3_naive",
            SearchRule::Example3NearbalOnly => "example3_nearbal_only",
            SearchRule::TheoremFull => "theorem_full",
        })
    }
}

impl FromStr for SearchRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example3_naive" => Ok(SearchRule::Example3Naive),
            "example3_nearbal_only" => Ok(SearchRule::Example3NearbalOnly),
            "theorem_full" => Ok(SearchRule::TheoremFull),
            _ => Err(Error::InvalidParams(format!("unknown search rule `{s}`"))),
        }
    }
}

/// Bounds and count condition of an exhaustive run.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub group: Arc<Group>,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub rule: SearchRule,
    pub k: u32,
    pub ell: u32,
    /// Overrides the alpha function implied by the rule.
    pub alpha: Option<BuiltinAlpha>,
    pub alphabet: Alphabet,
}

impl SearchSpec {
    /// Defaults: at most 4 vertices and 8 edges, `k = 2`, `l = 3`, labels
    /// drawn from the identity and the element with index 1.
    pub fn new(group: Arc<Group>, rule: SearchRule) -> SearchSpec {
        let alphabet = if group.order() > 1 {
            let g = group
                .elements()
                .find(|&x| x != group.identity())
                .expect("a non-identity element");
            Alphabet::IdentityAnd(g)
        } else {
            Alphabet::Full
        };
        SearchSpec {
            group,
            max_vertices: 4,
            max_edges: 8,
            rule,
            k: 2,
            ell: 3,
            alpha: None,
            alphabet,
        }
    }

    pub fn with_bounds(mut self, max_vertices: usize, max_edges: usize) -> SearchSpec {
        self.max_vertices = max_vertices;
        self.max_edges = max_edges;
        self
    }

    pub fn with_params(mut self, k: u32, ell: u32, alpha: Option<BuiltinAlpha>) -> SearchSpec {
        self.k = k;
        self.ell = ell;
        self.alpha = alpha;
        self
    }

    /// The sparsity parameters of the rule. Only `theorem_full` validates
    /// the alpha function.
    pub fn params(&self) -> Result<SparsityParams> {
        let (default, rule) = match self.rule {
            SearchRule::Example3Naive => (BuiltinAlpha::Example3Naive, CountRule::Plain),
            SearchRule::Example3NearbalOnly => (BuiltinAlpha::Example3Naive, CountRule::Lifted),
            SearchRule::TheoremFull => (BuiltinAlpha::Example3Lifted, CountRule::Lifted),
        };
        let alpha = AlphaFunction::builtin(self.alpha.unwrap_or(default), self.group.clone())?;
        match self.rule {
            SearchRule::TheoremFull => SparsityParams::new(self.k, self.ell, alpha),
            _ => SparsityParams::unverified(self.k, self.ell, alpha, rule),
        }
    }

    pub fn space(&self) -> Result<InstanceSpace> {
        InstanceSpace::new(
            self.group.clone(),
            self.max_vertices,
            self.max_edges,
            &self.alphabet,
        )
    }
}

/// Every labeled multigraph of the spec's space, in enumeration order.
pub fn enumerate_instances(spec: &SearchSpec) -> Result<Vec<GainGraph>> {
    let space = spec.space()?;
    let mut out = Vec::with_capacity(space.len());
    space.for_each_seq(|seq| {
        out.push(space.graph(seq));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// A graph whose independent sets do not form a matroid.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub graph: GainGraph,
    pub verdict: AxiomVerdict,
}

/// The first instance of the spec's space, in enumeration order, on which
/// (I2) or (I3) fails for the rule's count condition.
pub fn search_counterexample(spec: &SearchSpec) -> Result<Option<Counterexample>> {
    let params = spec.params()?;
    let space = spec.space()?;
    let mut engine = Engine::new(&space, vec![params.clone()], false, false);
    let mut found: Option<Vec<u8>> = None;
    engine.run(|eng, seq, _| {
        let st = &eng.stats[0];
        if st.current_failed && (st.i2 > 0 || st.i3 > 0) {
            found = Some(seq.to_vec());
            return Ok(ControlFlow::Break(()));
        }
        Ok(ControlFlow::Continue(()))
    })?;
    match found {
        None => Ok(None),
        Some(seq) => {
            let graph = space.graph(&seq);
            let verdict = verify_matroid(&params, &graph)?;
            Ok(Some(Counterexample { graph, verdict }))
        }
    }
}

/// Matroid-axiom results for one configuration over an instance space.
#[derive(Clone, Debug)]
pub struct ConfigReport {
    pub label: String,
    pub instances: u64,
    pub i2_failures: u64,
    pub i3_failures: u64,
    pub oracle_mismatches: u64,
    /// The first failing instance with its verdict.
    pub first_failure: Option<Counterexample>,
}

impl ConfigReport {
    pub fn passed(&self) -> bool {
        self.i2_failures == 0 && self.i3_failures == 0 && self.oracle_mismatches == 0
    }
}

/// Checks (I1)-(I3) for every instance of `space` under each parameter
/// set, and compares the circuit-based sparsity test with the naive one on
/// every instance.
pub fn verify_space(space: &InstanceSpace, params: &[SparsityParams]) -> Result<Vec<ConfigReport>> {
    let mut engine = Engine::new(space, params.to_vec(), false, false);
    engine.run(|_, _, _| Ok(ControlFlow::Continue(())))?;
    let mut out = Vec::new();
    for (p, st) in params.iter().zip(&engine.stats) {
        let first_failure = match &st.first_failure {
            None => None,
            Some(seq) => {
                let graph = space.graph(seq);
                let verdict = verify_matroid(p, &graph)?;
                Some(Counterexample { graph, verdict })
            }
        };
        out.push(ConfigReport {
            label: format!(
                "k={} l={} alpha={} rule={}",
                p.k,
                p.ell,
                p.alpha
                    .builtin_kind()
                    .map_or_else(|| "table".to_string(), |b| b.to_string()),
                p.rule
            ),
            instances: st.instances,
            i2_failures: st.i2,
            i3_failures: st.i3,
            oracle_mismatches: st.mismatches,
            first_failure,
        });
    }
    Ok(out)
}
