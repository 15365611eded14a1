//! Structural property suites. Each suite filters instances (or tuples of
//! sub-multisets of an instance) by a lemma's hypotheses and checks its
//! conclusion. Tuples are anchored at their union so that each is visited
//! once over the whole space.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, GainGraph};

use super::oracle::near_balanced_brute;
use super::space::Mask;
use super::store::{mask_set, Engine, Rec, FULL, INDEP, TIGHT};
use super::SearchSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Suite {
    Lem4,
    Tight1,
    Near1,
    Tight2,
    Alpha1,
    Main1,
    Main2,
    BetaMonotone,
    Prop0Equiv,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Lem4,
        Suite::Tight1,
        Suite::Near1,
        Suite::Tight2,
        Suite::Alpha1,
        Suite::Main1,
        Suite::Main2,
        Suite::BetaMonotone,
        Suite::Prop0Equiv,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Lem4 => "lem4",
            Suite::Tight1 => "tight1",
            Suite::Near1 => "near1",
            Suite::Tight2 => "tight2",
            Suite::Alpha1 => "alpha1",
            Suite::Main1 => "main1",
            Suite::Main2 => "main2",
            Suite::BetaMonotone => "beta_monotone",
            Suite::Prop0Equiv => "prop0_equiv",
        }
    }

    fn uses_submasks(self) -> bool {
        matches!(self, Suite::Lem4 | Suite::Main1 | Suite::Main2)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown suite `{s}`")))
    }
}

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    /// Instances examined.
    pub tested: u64,
    /// Instances or tuples satisfying the hypotheses.
    pub filtered: u64,
    pub failures: u64,
    /// The first failing instance and what failed.
    #[serde(skip)]
    pub first_failure: Option<(GainGraph, String)>,
}

impl SuiteReport {
    fn new(s: Suite) -> SuiteReport {
        SuiteReport {
            name: s.name().to_string(),
            tested: 0,
            filtered: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn fail(&mut self, g: &GainGraph, what: String) {
        self.failures += 1;
        if self.first_failure.is_none() {
            self.first_failure = Some((g.clone(), what));
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SUITE {} tested={} filtered={} failures={}",
            self.name, self.tested, self.filtered, self.failures
        )
    }
}

/// Runs one suite over the spec's instance space.
pub fn run_property_suite(suite: Suite, spec: &SearchSpec) -> Result<SuiteReport> {
    Ok(run_property_suites(&[suite], spec)?.remove(0))
}

/// Runs several suites in a single pass over the spec's instance space.
pub fn run_property_suites(suites: &[Suite], spec: &SearchSpec) -> Result<Vec<SuiteReport>> {
    let params = spec.params()?;
    let space = spec.space()?;
    let mut engine = Engine::new(&space, vec![params], true, true);
    let mut reports: Vec<SuiteReport> = suites.iter().map(|&s| SuiteReport::new(s)).collect();
    let need_submasks = suites.iter().any(|s| s.uses_submasks());
    let mut sub_idx: Vec<usize> = Vec::new();
    engine.run(|eng, seq, idx| {
        let prof = eng.prof[idx];
        if !prof.conn {
            return Ok(ControlFlow::Continue(()));
        }
        let m = seq.len();
        let full: Mask = ((1u32 << m) - 1) as Mask;
        if need_submasks {
            sub_idx.clear();
            sub_idx.extend((0..=full).map(|s| eng.index_masked(seq, s)));
        }
        let mut graph: Option<GainGraph> = None;
        let mut ctx = Ctx {
            eng,
            seq,
            idx,
            full,
            sub_idx: &sub_idx,
            graph: &mut graph,
        };
        for (s, rep) in suites.iter().zip(reports.iter_mut()) {
            rep.tested += 1;
            match s {
                Suite::Lem4 => ctx.lem4(rep),
                Suite::Tight1 => ctx.tight1(rep)?,
                Suite::Near1 => ctx.near1(rep)?,
                Suite::Tight2 => ctx.tight2(rep)?,
                Suite::Alpha1 => ctx.alpha1(rep),
                Suite::Main1 => ctx.main1(rep),
                Suite::Main2 => ctx.main2(rep),
                Suite::BetaMonotone => ctx.beta_monotone(rep),
                Suite::Prop0Equiv => ctx.prop0(rep)?,
            }
        }
        Ok(ControlFlow::Continue(()))
    })?;
    Ok(reports)
}

struct Ctx<'e, 'a, 's> {
    eng: &'e Engine<'a>,
    seq: &'s [u8],
    idx: usize,
    full: Mask,
    sub_idx: &'s [usize],
    graph: &'s mut Option<GainGraph>,
}

impl Ctx<'_, '_, '_> {
    fn g(&mut self) -> &GainGraph {
        if self.graph.is_none() {
            *self.graph = Some(self.eng.space.graph(self.seq));
        }
        self.graph.as_ref().expect("just built")
    }

    fn rec(&self, idx: usize) -> Rec {
        self.eng.recs[0][idx]
    }

    fn sub(&self, mask: Mask) -> Rec {
        self.rec(self.sub_idx[mask as usize])
    }

    fn k(&self) -> i64 {
        self.eng.configs[0].params.k as i64
    }

    fn ell(&self) -> i64 {
        self.eng.configs[0].params.ell as i64
    }

    fn critical(&self, idx: usize) -> bool {
        let p = self.eng.prof[idx];
        p.conn && !p.balanced() && p.nb && self.eng.configs[0].exceeds_k(p.sub)
    }

    fn children(&self) -> impl Iterator<Item = usize> + '_ {
        Engine::child_masks(self.seq).map(|(_, cm)| self.eng.index_masked(self.seq, cm))
    }

    /// Hypotheses shared by the base-uniqueness and fraction lemmas.
    fn dense_near_balanced(&self) -> bool {
        let p = self.eng.prof[self.idx];
        let r = self.rec(self.idx);
        p.nb && r.has(FULL) && r.beta as i64 > 2 * self.k() - self.ell()
    }

    fn beta_monotone(&mut self, rep: &mut SuiteReport) {
        let b = self.rec(self.idx).beta;
        let kids: Vec<usize> = self.children().collect();
        for c in kids {
            if !self.eng.prof[c].conn {
                continue;
            }
            rep.filtered += 1;
            if self.rec(c).beta > b {
                let g = self.g().clone();
                rep.fail(&g, "beta of a connected subset exceeds beta of the set".into());
            }
        }
    }

    fn alpha1(&mut self, rep: &mut SuiteReport) {
        if !self.critical(self.idx) {
            return;
        }
        rep.filtered += 1;
        let kids: Vec<usize> = self.children().collect();
        for c in kids {
            let p = self.eng.prof[c];
            if p.conn && !p.balanced() && !self.critical(c) {
                let g = self.g().clone();
                rep.fail(&g, "a connected subset is neither alpha-critical nor balanced".into());
                return;
            }
        }
    }

    fn prop0(&mut self, rep: &mut SuiteReport) -> Result<()> {
        let g = self.g().clone();
        let all = g.all_edges();
        let lib = g.near_balanced(all)?.is_some();
        let brute = near_balanced_brute(&g, all);
        if brute {
            rep.filtered += 1;
        }
        if lib != brute {
            rep.fail(
                &g,
                format!("base test says {lib}, split enumeration says {brute}"),
            );
        }
        Ok(())
    }

    fn tight1(&mut self, rep: &mut SuiteReport) -> Result<()> {
        if !self.dense_near_balanced() {
            return Ok(());
        }
        rep.filtered += 1;
        let g = self.g().clone();
        let bases = g.near_balance_bases(g.all_edges())?;
        if bases.len() != 1 {
            rep.fail(&g, format!("bases {bases:?}"));
        }
        Ok(())
    }

    fn near1(&mut self, rep: &mut SuiteReport) -> Result<()> {
        if !self.dense_near_balanced() {
            return Ok(());
        }
        rep.filtered += 1;
        let g = self.g().clone();
        let all = g.all_edges();
        let verts = g.vertices_of(all);
        for v in g.near_balance_bases(all)? {
            for fr in g.fractions_in(all, v) {
                if g.near_balanced(fr)?.is_none() {
                    rep.fail(&g, format!("fraction {fr:?} of base {} is not near-balanced", v + 1));
                    return Ok(());
                }
            }
            for kset in g.extra_edge_sets(all, v)? {
                let rest = all.difference(kset);
                // G - K keeps every vertex, so a single vertex stays connected.
                let ok = verts.len() == 1
                    || (g.vertices_of(rest) == verts && g.is_connected(rest));
                if !ok {
                    rep.fail(&g, format!("removing extra set {kset:?} disconnects"));
                    return Ok(());
                }
            }
        }
        Ok(())
    }

    fn tight2(&mut self, rep: &mut SuiteReport) -> Result<()> {
        if !self.critical(self.idx) || !self.rec(self.idx).has(FULL) {
            return Ok(());
        }
        rep.filtered += 1;
        let g = self.g().clone();
        let all = g.all_edges();
        for v in g.near_balance_bases(all)? {
            let loops = EdgeSet::from_ids(
                all.iter()
                    .filter(|&e| g.edge(e).is_loop() && g.edge(e).tail == v),
            );
            let at_v = EdgeSet::from_ids(all.iter().filter(|&e| g.edge(e).is_incident(v)))
                .difference(loops);
            let sets = g.extra_edge_sets(all, v)?;
            for (i, a) in sets.iter().enumerate() {
                for b in &sets[i + 1..] {
                    let (a, b) = (a.difference(loops), b.difference(loops));
                    if !a.intersection(b).is_empty() || a.union(b) != at_v {
                        rep.fail(
                            &g,
                            format!("extra sets {a:?} and {b:?} at base {} are not complementary", v + 1),
                        );
                        return Ok(());
                    }
                }
            }
        }
        Ok(())
    }

    fn lem4(&mut self, rep: &mut SuiteReport) {
        let full = self.full;
        let (k, ell) = (self.k(), self.ell());
        let beta_e = self.rec(self.idx).beta as i64;
        let prof = |s: &Self, m: Mask| s.eng.prof[s.sub_idx[m as usize]];
        for x in 1..=full {
            let rx = self.sub(x);
            if !rx.has(FULL) {
                continue;
            }
            let need = full ^ x;
            // Y = need | z over submasks z of x, with x <= y.
            let mut z = x;
            loop {
                let y = need | z;
                if y >= x {
                    let ry = self.sub(y);
                    let i = x & y;
                    if ry.has(FULL) && i != 0 {
                        let (px, py, pi) = (prof(self, x), prof(self, y), prof(self, i));
                        let ri = self.sub(i);
                        let bsum = rx.beta as i64 + ry.beta as i64;
                        if pi.conn
                            && pi.vmask == px.vmask & py.vmask
                            && ri.has(INDEP)
                            && i.count_ones() as i64 > k * pi.nv() as i64 - 2 * ell + bsum.min(2 * k)
                        {
                            rep.filtered += 1;
                            if bsum < ri.beta as i64 + beta_e {
                                let g = self.g().clone();
                                rep.fail(
                                    &g,
                                    format!("X={:?} Y={:?}", mask_set(x), mask_set(y)),
                                );
                            }
                        }
                    }
                }
                if z == 0 {
                    break;
                }
                z = (z - 1) & x;
            }
        }
    }

    fn main1(&mut self, rep: &mut SuiteReport) {
        let r = self.rec(self.idx);
        if !r.has(INDEP) {
            return;
        }
        let full = self.full;
        let tight: Vec<Mask> = (1..=full).filter(|&s| self.sub(s).has(TIGHT)).collect();
        for (a, &x) in tight.iter().enumerate() {
            for &y in &tight[a..] {
                if x | y != full || x & y == 0 {
                    continue;
                }
                rep.filtered += 1;
                if !r.has(TIGHT) {
                    let g = self.g().clone();
                    rep.fail(
                        &g,
                        format!("X={:?} Y={:?} have a non-tight union", mask_set(x), mask_set(y)),
                    );
                }
            }
        }
    }

    fn main2(&mut self, rep: &mut SuiteReport) {
        let full = self.full;
        let r = self.rec(self.idx);
        let kids: Vec<(usize, Mask)> = Engine::child_masks(self.seq).collect();
        for (e, y) in kids {
            let ry = self.sub(y);
            if !ry.has(FULL) {
                continue;
            }
            let bit: Mask = 1 << e;
            let mut x = y;
            while x != 0 {
                let rx = self.sub(x);
                let xe = x | bit;
                if rx.has(TIGHT) && self.eng.prof[self.sub_idx[xe as usize]].conn {
                    let rxe = if xe == full { r } else { self.sub(xe) };
                    if rxe.f == rx.f {
                        rep.filtered += 1;
                        if r.f != ry.f || !r.has(FULL) {
                            let g = self.g().clone();
                            rep.fail(
                                &g,
                                format!("X={:?} Y={:?} e={}", mask_set(x), mask_set(y), e + 1),
                            );
                        }
                    }
                }
                x = (x - 1) & y;
            }
        }
    }
}
