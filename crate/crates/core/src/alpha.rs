//! Normalized polymatroidal functions on subsets of a finite group.
//!
//! A function is stored by its value on each conjugacy class of subgroups,
//! so invariance under closure and conjugation holds by construction. The
//! remaining axioms are checked by [`AlphaFunction::verify_axioms`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ConjClass, Elem, ElemSet, Group, GroupSpec};

/// Built-in families of alpha functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BuiltinAlpha {
    /// 0 on the trivial subgroup, 2 otherwise.
    Example2,
    /// 0 on the trivial subgroup, 3 otherwise.
    Example3Naive,
    /// 0 on the trivial subgroup, 2 on subgroups of order two, 3 otherwise.
    Example3Lifted,
    /// 0 trivial, 2 nontrivial cyclic, 3 otherwise.
    Example4,
    /// The cyclic-symmetry family over `Z_n` with parameter `i`.
    Example5 { n: usize, i: usize },
    /// 0 trivial, 1 otherwise.
    Frame,
}

impl fmt::Display for BuiltinAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinAlpha::Example2 => write!(f, "example2"),
            BuiltinAlpha::Example3Naive => write!(f, "example3_naive"),
            BuiltinAlpha::Example3Lifted => write!(f, "example3_lifted"),
            BuiltinAlpha::Example4 => write!(f, "example4"),
            BuiltinAlpha::Example5 { n, i } => write!(f, "example5 {n} {i}"),
            BuiltinAlpha::Frame => write!(f, "frame"),
        }
    }
}

impl FromStr for BuiltinAlpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let w: Vec<&str> = s.split_whitespace().collect();
        let bad = || Error::InvalidAlpha(format!("unknown builtin `{s}`"));
        match w.as_slice() {
            ["example2"] => Ok(BuiltinAlpha::Example2),
            ["example3_naive"] => Ok(BuiltinAlpha::Example3Naive),
            ["example3_lifted"] => Ok(BuiltinAlpha::Example3Lifted),
            ["example4"] => Ok(BuiltinAlpha::Example4),
            ["frame"] => Ok(BuiltinAlpha::Frame),
            ["example5", n, i] => Ok(BuiltinAlpha::Example5 {
                n: n.parse().map_err(|_| bad())?,
                i: i.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// `S(n, i)` from the cyclic-symmetry family. Every positive integer
/// divides 0, so `i - 1 = 0` admits every divisor of `n`.
pub fn s_set(n: usize, i: usize) -> Vec<usize> {
    let divides = |d: usize, x: usize| x.is_multiple_of(d);
    let mut out: Vec<usize> = (2..=n)
        .filter(|&d| divides(d, n))
        .filter(|&d| divides(d, i) || divides(d, i - 1) || divides(d, i + 1))
        .collect();
    if i % 2 == 1 {
        out.retain(|&d| d != 2);
    }
    out
}

/// An alpha function on the subgroup conjugacy classes of a group.
#[derive(Clone)]
pub struct AlphaFunction {
    group: Arc<Group>,
    /// Value per subgroup lattice id.
    values: Vec<u8>,
    ell_cap: u8,
    builtin: Option<BuiltinAlpha>,
}

impl fmt::Debug for AlphaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlphaFunction")
            .field("group", &self.group)
            .field("builtin", &self.builtin)
            .field("ell_cap", &self.ell_cap)
            .finish()
    }
}

impl AlphaFunction {
    pub fn builtin(kind: BuiltinAlpha, group: Arc<Group>) -> Result<AlphaFunction> {
        let s_values = match kind {
            BuiltinAlpha::Example5 { n, i } => {
                if group.spec() != &GroupSpec::Cyclic(n) {
                    return Err(Error::InvalidAlpha(format!(
                        "example5 {n} {i} requires the group cyclic {n}"
                    )));
                }
                if !(0 < i && i < n) {
                    return Err(Error::InvalidAlpha(format!(
                        "example5 needs 0 < i < n, got n={n}, i={i}"
                    )));
                }
                s_set(n, i)
            }
            _ => Vec::new(),
        };
        let lat = group.lattice();
        let mut values = Vec::with_capacity(lat.len());
        for &h in lat.subgroups() {
            let c = group.classify_subgroup(&crate::group::Subgroup { members: h });
            let v = if c.is_trivial {
                0
            } else {
                match kind {
                    BuiltinAlpha::Example2 => 2,
                    BuiltinAlpha::Example3Naive => 3,
                    BuiltinAlpha::Example3Lifted => {
                        if c.iso_to_z2 {
                            2
                        } else {
                            3
                        }
                    }
                    BuiltinAlpha::Example4 => {
                        if c.is_cyclic {
                            2
                        } else {
                            3
                        }
                    }
                    BuiltinAlpha::Example5 { i, .. } => {
                        if i % 2 == 1 && c.iso_to_z2 {
                            1
                        } else if s_values.contains(&h.len()) {
                            // Subgroups of a cyclic group are cyclic.
                            2
                        } else {
                            3
                        }
                    }
                    BuiltinAlpha::Frame => 1,
                }
            };
            values.push(v);
        }
        let ell_cap = match kind {
            BuiltinAlpha::Frame => 1,
            BuiltinAlpha::Example2 => 2,
            _ => 3,
        };
        Ok(AlphaFunction {
            group,
            values,
            ell_cap,
            builtin: Some(kind),
        })
    }

    /// Builds an alpha function from `(generators, value)` entries. Each
    /// entry assigns the value to the class of the generated subgroup.
    /// Every class must be covered, except the trivial class, which
    /// defaults to 0.
    pub fn from_table(group: Arc<Group>, entries: &[(Vec<Elem>, u8)]) -> Result<AlphaFunction> {
        let lat = group.lattice();
        let mut class_values: Vec<Option<u8>> = vec![None; lat.class_count()];
        let triv_class = lat.class_id(0);
        for (gens, v) in entries {
            for &g in gens {
                group.check_elem(g)?;
            }
            let id = group.subgroup_id(ElemSet::from_elems(gens.iter().copied()));
            let c = lat.class_id(id);
            match class_values[c] {
                Some(old) if old != *v => {
                    return Err(Error::InvalidAlpha(format!(
                        "conflicting values {old} and {v} for the class of {:?}",
                        lat.class_representative(c)
                    )))
                }
                _ => class_values[c] = Some(*v),
            }
        }
        if class_values[triv_class].is_none() {
            class_values[triv_class] = Some(0);
        }
        if let Some(c) = class_values.iter().position(|v| v.is_none()) {
            return Err(Error::InvalidAlpha(format!(
                "no value for the class of {:?}",
                lat.class_representative(c)
            )));
        }
        let values: Vec<u8> = (0..lat.len())
            .map(|id| class_values[lat.class_id(id)].unwrap())
            .collect();
        let ell_cap = values.iter().copied().max().unwrap_or(0);
        Ok(AlphaFunction {
            group,
            values,
            ell_cap,
            builtin: None,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn builtin_kind(&self) -> Option<BuiltinAlpha> {
        self.builtin
    }

    /// Largest value taken.
    pub fn max_value(&self) -> u8 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// The nominal cap of the family (1 for frame, 2 for example2, 3 for
    /// the other built-ins, the maximum value for tables).
    pub fn ell_cap(&self) -> u8 {
        self.ell_cap
    }

    /// Value on a subgroup given by lattice id.
    #[inline]
    pub fn value_by_id(&self, subgroup_id: usize) -> u8 {
        self.values[subgroup_id]
    }

    /// `alpha(X)`, evaluated on the class of the subgroup generated by `X`.
    pub fn eval(&self, x: ElemSet) -> u8 {
        self.values[self.group.subgroup_id(x)]
    }

    /// Value on a conjugacy class.
    pub fn eval_class(&self, c: &ConjClass) -> u8 {
        self.eval(c.representative)
    }

    /// Checks (c1), (c2), (c3), (c6) and the smoothness condition for `k`.
    pub fn verify_axioms(&self, k: u32, opts: &AxiomOptions) -> Result<AxiomReport> {
        let n = self.group.order();
        let mode = if n <= opts.literal_bound {
            CheckMode::Literal
        } else if n <= opts.exhaustive_bound {
            CheckMode::Lattice
        } else if let Some((budget, seed)) = opts.sample_budget {
            CheckMode::Sampled { budget, seed }
        } else {
            return Err(Error::TooLarge {
                what: "group order",
                size: n,
                bound: opts.exhaustive_bound,
            });
        };
        let mut rep = Collector::new(opts.max_violations);
        let g = &*self.group;
        let e = g.identity();
        if self.eval(ElemSet::EMPTY) != 0 {
            rep.push(Axiom::C1, Witness::Single { x: ElemSet::EMPTY });
        }
        for x in g.elements() {
            let v = self.eval(ElemSet::singleton(x));
            if (x == e) != (v == 0) {
                rep.push(
                    Axiom::C6,
                    Witness::Single {
                        x: ElemSet::singleton(x),
                    },
                );
            }
        }
        match mode {
            CheckMode::Literal => self.check_literal(k, &mut rep),
            CheckMode::Lattice => self.check_lattice(k, &mut rep),
            CheckMode::Sampled { budget, seed } => self.check_sampled(k, budget, seed, &mut rep),
        }
        Ok(AxiomReport {
            passed: rep.violations.is_empty(),
            mode,
            violations: rep.violations,
            truncated: rep.truncated,
            structural: vec![Axiom::C4, Axiom::C5],
        })
    }

    fn smooth_violation(&self, s: ElemSet, g: Elem, k: u32, jump: i32) -> bool {
        let grp = &*self.group;
        let e = grp.identity();
        jump > k as i32 && (s != ElemSet::singleton(e) || grp.mul(g, g) == e)
    }

    fn check_literal(&self, k: u32, rep: &mut Collector) {
        let grp = &*self.group;
        let n = grp.order();
        let total = 1usize << n;
        let vals: Vec<u8> = (0..total).map(|x| self.eval(ElemSet(x as u64))).collect();
        // (c3): adding one element never decreases the value.
        for x in 0..total {
            for g in 0..n {
                let y = x | 1 << g;
                if vals[y] < vals[x] {
                    rep.push(
                        Axiom::C3,
                        Witness::Pair {
                            x: ElemSet(x as u64),
                            y: ElemSet(y as u64),
                        },
                    );
                }
            }
        }
        // (c2) over all pairs.
        for x in 0..total {
            for y in x..total {
                let lhs = vals[x] as i32 + vals[y] as i32;
                let rhs = vals[x | y] as i32 + vals[x & y] as i32;
                if lhs < rhs {
                    rep.push(
                        Axiom::C2,
                        Witness::Pair {
                            x: ElemSet(x as u64),
                            y: ElemSet(y as u64),
                        },
                    );
                }
            }
        }
        // Smoothness over all nonempty S and all g.
        for s in 1..total {
            for g in 0..n {
                let jump = vals[s | 1 << g] as i32 - vals[s] as i32;
                if self.smooth_violation(ElemSet(s as u64), g, k, jump) {
                    rep.push(
                        Axiom::Smoothness,
                        Witness::Probe {
                            s: ElemSet(s as u64),
                            g,
                        },
                    );
                }
            }
        }
    }

    fn check_lattice(&self, k: u32, rep: &mut Collector) {
        // Since alpha(X) = alpha(<X>), monotonicity on subgroups implies it
        // on all subsets, and given monotonicity, submodularity on pairs of
        // subgroups implies it on all pairs.
        let grp = &*self.group;
        let lat = grp.lattice();
        let subs = lat.subgroups();
        for (i, &h) in subs.iter().enumerate() {
            for g in grp.elements() {
                let j = grp.subgroup_id(h.union(ElemSet::singleton(g)));
                let jump = self.values[j] as i32 - self.values[i] as i32;
                if jump < 0 {
                    rep.push(
                        Axiom::C3,
                        Witness::Pair {
                            x: h,
                            y: lat.subgroup(j),
                        },
                    );
                }
                // A nontrivial subgroup is generated by a set other than
                // {1}, and the trivial subgroup only by {1}, so testing S = H
                // is exact.
                if self.smooth_violation(h, g, k, jump) {
                    rep.push(Axiom::Smoothness, Witness::Probe { s: h, g });
                }
            }
        }
        for (i, &x) in subs.iter().enumerate() {
            for (j, &y) in subs.iter().enumerate().skip(i) {
                let meet = x.intersection(y);
                let mid = lat.id_of(meet).expect("intersection of subgroups");
                let join = grp.subgroup_id(x.union(y));
                let lhs = self.values[i] as i32 + self.values[j] as i32;
                let rhs = self.values[mid] as i32 + self.values[join] as i32;
                if lhs < rhs {
                    rep.push(Axiom::C2, Witness::Pair { x, y });
                }
            }
        }
        // Singleton probes: pairs (subgroup, {g}).
        for &h in subs {
            for g in grp.elements() {
                let y = ElemSet::singleton(g);
                let lhs = self.eval(h) as i32 + self.eval(y) as i32;
                let rhs = self.eval(h.union(y)) as i32 + self.eval(h.intersection(y)) as i32;
                if lhs < rhs {
                    rep.push(Axiom::C2, Witness::Pair { x: h, y });
                }
            }
        }
    }

    fn check_sampled(&self, k: u32, budget: usize, seed: u64, rep: &mut Collector) {
        let grp = &*self.group;
        let n = grp.order();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = grp.all().0;
        for _ in 0..budget {
            let x = ElemSet(rng.gen::<u64>() & all);
            let y = ElemSet(rng.gen::<u64>() & all);
            let g = rng.gen_range(0..n);
            let (vx, vy) = (self.eval(x) as i32, self.eval(y) as i32);
            let vu = self.eval(x.union(y)) as i32;
            let vi = self.eval(x.intersection(y)) as i32;
            if vx + vy < vu + vi {
                rep.push(Axiom::C2, Witness::Pair { x, y });
            }
            if vu < vx || vu < vy {
                rep.push(Axiom::C3, Witness::Pair { x, y: x.union(y) });
            }
            if !x.is_empty() {
                let jump = self.eval(x.union(ElemSet::singleton(g))) as i32 - vx;
                if self.smooth_violation(x, g, k, jump) {
                    rep.push(Axiom::Smoothness, Witness::Probe { s: x, g });
                }
            }
        }
    }
}

/// Axiom identifiers used in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    Smoothness,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::C1 => "c1",
            Axiom::C2 => "c2",
            Axiom::C3 => "c3",
            Axiom::C4 => "c4",
            Axiom::C5 => "c5",
            Axiom::C6 => "c6",
            Axiom::Smoothness => "smoothness",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Single { x: ElemSet },
    Pair { x: ElemSet, y: ElemSet },
    Probe { s: ElemSet, g: Elem },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Witness,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckMode {
    /// Every subset (and pair of subsets) of the group.
    Literal,
    /// Pairs of subgroups plus (subgroup, singleton) probes.
    Lattice,
    /// Random subset pairs.
    Sampled { budget: usize, seed: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub mode: CheckMode,
    pub violations: Vec<Violation>,
    /// True when more violations existed than were recorded.
    pub truncated: bool,
    /// Axioms that hold by the representation.
    pub structural: Vec<Axiom>,
}

impl AxiomReport {
    pub fn first(&self, axiom: Axiom) -> Option<&Violation> {
        self.violations.iter().find(|v| v.axiom == axiom)
    }
}

#[derive(Clone, Debug)]
pub struct AxiomOptions {
    /// Groups up to this order are checked over all subsets.
    pub literal_bound: usize,
    /// Groups up to this order are checked on the subgroup lattice.
    pub exhaustive_bound: usize,
    /// Budget and seed for random sampling beyond the exhaustive bound.
    pub sample_budget: Option<(usize, u64)>,
    pub max_violations: usize,
}

impl Default for AxiomOptions {
    fn default() -> Self {
        AxiomOptions {
            literal_bound: 12,
            exhaustive_bound: 24,
            sample_budget: None,
            max_violations: 64,
        }
    }
}

struct Collector {
    violations: Vec<Violation>,
    cap: usize,
    truncated: bool,
}

impl Collector {
    fn new(cap: usize) -> Self {
        Collector {
            violations: Vec::new(),
            cap,
            truncated: false,
        }
    }

    fn push(&mut self, axiom: Axiom, witness: Witness) {
        if self.violations.len() < self.cap {
            self.violations.push(Violation { axiom, witness });
        } else {
            self.truncated = true;
        }
    }
}
