//! Per-instance records over an [`InstanceSpace`].
//!
//! Instances are visited so that every sub-multiset comes first. Each
//! record is computed from its own graph and the records of its children
//! (the instance minus one edge):
//!
//! * naive independence: `E` passes the count if connected, and every
//!   child is naively independent;
//! * fast independence: the (k, 0) orientation test plus the count on
//!   every circuit of `M_{k,l'}`, both cached per unlabeled shape;
//! * rank: `|E|` if independent, else the largest child rank;
//! * the largest spanning connected independent subset per `beta` value,
//!   which decides fullness.
//!
//! (I2) and (I3) are checked only at the whole instance, which covers
//! every restriction because each restriction is an earlier instance.

use std::ops::ControlFlow;
use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::count::{enumerate_circuits, k0_orientation, CountRule, SparsityParams};
use crate::error::Result;
use crate::graph::{Edge, EdgeSet, GainGraph};

use super::space::{InstanceSpace, Mask};

pub(crate) const NAIVE: u8 = 1;
pub(crate) const INDEP: u8 = 2;
pub(crate) const TIGHT: u8 = 4;
pub(crate) const FULL: u8 = 8;

/// Label-independent data of an instance.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Profile {
    pub vmask: u8,
    pub conn: bool,
    /// Subgroup lattice id of the whole instance when connected.
    pub sub: u16,
    /// Near-balancedness, computed when some rule needs it.
    pub nb: bool,
}

impl Profile {
    pub(crate) fn nv(&self) -> u32 {
        self.vmask.count_ones()
    }

    pub(crate) fn balanced(&self) -> bool {
        self.sub == 0
    }
}

/// Per-configuration data of an instance.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Rec {
    pub f: i8,
    pub beta: i8,
    pub rank: u8,
    pub flags: u8,
}

impl Rec {
    #[inline]
    pub(crate) fn has(&self, flag: u8) -> bool {
        self.flags & flag != 0
    }
}

struct ShapeData {
    k0_ok: bool,
    /// `(l', circuit)` pairs as position masks.
    circuits: Vec<(u8, Mask)>,
}

struct ShapeCache {
    k: u32,
    max_ell: u32,
    data: FxHashMap<usize, Rc<ShapeData>>,
}

pub(crate) struct Config {
    pub params: SparsityParams,
    /// Alpha value per subgroup lattice id.
    pub alpha: Vec<u8>,
    cache: usize,
}

impl Config {
    /// Whether the set with this subgroup is alpha-critical when
    /// near-balanced.
    pub(crate) fn exceeds_k(&self, sub: u16) -> bool {
        self.alpha[sub as usize] as u32 > self.params.k
    }
}

/// Counters and first witnesses for one configuration.
#[derive(Clone, Debug, Default)]
pub(crate) struct Stats {
    pub instances: u64,
    pub i2: u64,
    pub i3: u64,
    pub mismatches: u64,
    /// Sequence of the first instance failing (I2) or (I3), or with
    /// disagreeing oracles.
    pub first_failure: Option<Vec<u8>>,
    /// Set while visiting an instance that fails.
    pub current_failed: bool,
}

pub(crate) struct Engine<'a> {
    pub space: &'a InstanceSpace,
    pub configs: Vec<Config>,
    pub prof: Vec<Profile>,
    pub recs: Vec<Vec<Rec>>,
    /// Largest spanning connected independent subset per beta value for
    /// configuration 0, with stride `l + 1`.
    pub best: Option<Vec<i8>>,
    pub stats: Vec<Stats>,
    caches: Vec<ShapeCache>,
    nb_always: bool,
}

impl<'a> Engine<'a> {
    /// `track_full` enables fullness for configuration 0; `nb_always`
    /// computes near-balancedness of every unbalanced connected instance.
    pub(crate) fn new(
        space: &'a InstanceSpace,
        params: Vec<SparsityParams>,
        track_full: bool,
        nb_always: bool,
    ) -> Engine<'a> {
        let lat_len = space.group().lattice().len();
        let mut caches: Vec<ShapeCache> = Vec::new();
        let mut configs = Vec::new();
        for p in params {
            let cache = match caches.iter().position(|c| c.k == p.k) {
                Some(i) => {
                    caches[i].max_ell = caches[i].max_ell.max(p.ell);
                    i
                }
                None => {
                    caches.push(ShapeCache {
                        k: p.k,
                        max_ell: p.ell,
                        data: FxHashMap::default(),
                    });
                    caches.len() - 1
                }
            };
            let alpha = (0..lat_len).map(|i| p.alpha.value_by_id(i)).collect();
            configs.push(Config {
                params: p,
                alpha,
                cache,
            });
        }
        let n = space.len();
        let stride = configs.first().map_or(1, |c| c.params.ell as usize + 1);
        Engine {
            space,
            prof: vec![Profile::default(); n],
            recs: configs.iter().map(|_| vec![Rec::default(); n]).collect(),
            best: (track_full && !configs.is_empty()).then(|| vec![-1i8; n * stride]),
            stats: vec![Stats::default(); configs.len()],
            configs,
            caches,
            nb_always,
        }
    }

    fn stride(&self) -> usize {
        self.configs[0].params.ell as usize + 1
    }

    #[inline]
    pub(crate) fn index_masked(&self, seq: &[u8], mask: Mask) -> usize {
        self.space.ranker().index_masked(seq, mask)
    }

    /// Position masks of the children, one per distinct edge type.
    pub(crate) fn child_masks(seq: &[u8]) -> impl Iterator<Item = (usize, Mask)> + '_ {
        let full: Mask = ((1u32 << seq.len()) - 1) as Mask;
        (0..seq.len())
            .filter(move |&i| i == 0 || seq[i] != seq[i - 1])
            .map(move |i| (i, full ^ (1 << i)))
    }

    /// Visits every instance, computing its records before calling
    /// `observe`. Stops when the observer breaks.
    pub(crate) fn run(
        &mut self,
        mut observe: impl FnMut(&mut Engine<'a>, &[u8], usize) -> Result<ControlFlow<()>>,
    ) -> Result<()> {
        let space = self.space;
        let mut err = None;
        space.for_each_seq(|seq| {
            let idx = space.ranker().index(seq);
            let step = self
                .process(seq, idx)
                .and_then(|_| observe(self, seq, idx));
            match step {
                Ok(c) => c,
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    fn graph(&self, seq: &[u8]) -> GainGraph {
        self.space.graph(seq)
    }

    fn shape(&mut self, ci: usize, seq: &[u8]) -> Result<Rc<ShapeData>> {
        let slots: Vec<u8> = seq.iter().map(|&t| self.space.slot(t)).collect();
        let key = self.space.shape_ranker().index(&slots);
        if let Some(d) = self.caches[ci].data.get(&key) {
            return Ok(d.clone());
        }
        let (k, max_ell) = (self.caches[ci].k, self.caches[ci].max_ell);
        let id = self.space.group().identity();
        let g = GainGraph::new(
            self.space.group().clone(),
            self.space.vertices(),
            slots
                .iter()
                .map(|&s| {
                    let (tail, head) = self.space.slot_ends(s);
                    Edge {
                        tail,
                        head,
                        label: id,
                    }
                })
                .collect(),
        )?;
        let all = g.all_edges();
        let k0_ok = k0_orientation(k, &g, all)?.is_none();
        let mut circuits = Vec::new();
        for lp in 1..=max_ell {
            for c in enumerate_circuits(k, lp, &g, all)? {
                circuits.push((lp as u8, c.0 as Mask));
            }
        }
        let d = Rc::new(ShapeData { k0_ok, circuits });
        self.caches[ci].data.insert(key, d.clone());
        Ok(d)
    }

    fn process(&mut self, seq: &[u8], idx: usize) -> Result<()> {
        let m = seq.len();
        let full: Mask = ((1u32 << m) - 1) as Mask;
        let mut prof = Profile::default();
        for &t in seq {
            let e = self.space.edge(t);
            prof.vmask |= 1 << e.tail | 1 << e.head;
        }
        if m > 0 {
            let g = self.graph(seq);
            let all = g.all_edges();
            prof.conn = g.is_connected(all);
            if prof.conn {
                prof.sub = g.subgroup_id_of_set(all)? as u16;
                let wanted = self.nb_always
                    || self
                        .configs
                        .iter()
                        .any(|c| c.params.rule == CountRule::Lifted && c.exceeds_k(prof.sub));
                prof.nb = prof.sub != 0 && wanted && g.near_balanced_unchecked(all);
            }
        }
        self.prof[idx] = prof;
        let children: Vec<(usize, Mask, usize)> = Self::child_masks(seq)
            .map(|(i, cm)| (i, cm, self.index_masked(seq, cm)))
            .collect();
        for c in 0..self.configs.len() {
            let (k, ell) = (
                self.configs[c].params.k as i64,
                self.configs[c].params.ell as i64,
            );
            let mut rec = Rec::default();
            if prof.conn {
                let p = &self.configs[c].params;
                let b = p.beta_from(self.configs[c].alpha[prof.sub as usize], prof.nb);
                rec.beta = b as i8;
                rec.f = (k * prof.nv() as i64 - ell + b) as i8;
            }
            let recs = &self.recs[c];
            let naive = (!prof.conn || m as i64 <= rec.f as i64)
                && children.iter().all(|&(_, _, ci)| recs[ci].has(NAIVE));
            let fast = if m == 0 {
                true
            } else {
                let cache = self.configs[c].cache;
                let shape = self.shape(cache, seq)?;
                let recs = &self.recs[c];
                let ell_c = self.configs[c].params.ell as u8;
                shape.k0_ok
                    && shape
                        .circuits
                        .iter()
                        .filter(|&&(lp, _)| lp <= ell_c)
                        .all(|&(_, cm)| {
                            let fc = if cm == full {
                                rec.f
                            } else {
                                recs[self.index_masked(seq, cm)].f
                            };
                            cm.count_ones() as i64 <= fc as i64
                        })
            };
            let recs = &self.recs[c];
            if naive {
                rec.flags |= NAIVE;
            }
            if fast {
                rec.flags |= INDEP;
            }
            rec.rank = if fast {
                m as u8
            } else {
                children.iter().map(|&(_, _, ci)| recs[ci].rank).max().unwrap_or(0)
            };
            if prof.conn && fast && m as i64 == rec.f as i64 {
                rec.flags |= TIGHT;
            }
            let mut failed = false;
            let st = &mut self.stats[c];
            st.instances += 1;
            if naive != fast {
                st.mismatches += 1;
                failed = true;
            }
            if fast && children.iter().any(|&(_, _, ci)| !recs[ci].has(INDEP)) {
                st.i2 += 1;
                failed = true;
            }
            if !fast && i3_fails(self.space, recs, seq, &children, rec.rank) {
                self.stats[c].i3 += 1;
                failed = true;
            }
            let stride = self.stride();
            if let (0, Some(best)) = (c, self.best.as_mut()) {
                let s = stride;
                let mut row = vec![-1i8; s];
                if prof.conn {
                    for &(_, _, ci) in &children {
                        let cp = self.prof[ci];
                        if cp.conn && cp.vmask == prof.vmask {
                            for b in 0..s {
                                row[b] = row[b].max(best[ci * s + b]);
                            }
                        }
                    }
                    if fast {
                        let b = rec.beta as usize;
                        row[b] = row[b].max(m as i8);
                    }
                    let b = rec.beta as i64;
                    let need = k * prof.nv() as i64 - ell + b.min(2 * k - ell + 1);
                    let have = row[rec.beta as usize] as i64;
                    if have >= 0 && have >= need {
                        rec.flags |= FULL;
                    }
                }
                best[idx * s..(idx + 1) * s].copy_from_slice(&row);
            }
            let st = &mut self.stats[c];
            st.current_failed = failed;
            if failed && st.first_failure.is_none() {
                st.first_failure = Some(seq.to_vec());
            }
            self.recs[c][idx] = rec;
        }
        Ok(())
    }
}

/// Whether some maximal independent subset of the instance is smaller than
/// its rank, given that every child satisfies (I3). Such a set misses an
/// edge `e`, is a basis of `E - e`, and stays dependent with `e` added, so
/// `rank(E - e) = rank(E) - 1`.
fn i3_fails(
    space: &InstanceSpace,
    recs: &[Rec],
    seq: &[u8],
    children: &[(usize, Mask, usize)],
    rank: u8,
) -> bool {
    if rank == 0 {
        return false;
    }
    smaller_maximal(space, recs, seq, children, rank).is_some()
}

/// A maximal independent set of size `rank - 1` as a position mask.
pub(crate) fn smaller_maximal(
    space: &InstanceSpace,
    recs: &[Rec],
    seq: &[u8],
    children: &[(usize, Mask, usize)],
    rank: u8,
) -> Option<Mask> {
    let r = space.ranker();
    for &(i, cm, ci) in children {
        if recs[ci].rank + 1 != rank {
            continue;
        }
        let want = rank as u32 - 1;
        let found = submasks_of_size(cm, want).find(|&b| {
            recs[r.index_masked(seq, b)].has(INDEP) && !recs[r.index_masked(seq, b | 1 << i)].has(INDEP)
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Submasks of `set` with exactly `size` bits.
pub(crate) fn submasks_of_size(set: Mask, size: u32) -> impl Iterator<Item = Mask> {
    let positions: Vec<u32> = (0..16).filter(|&b| set >> b & 1 == 1).collect();
    let n = positions.len() as u32;
    let mut state: Option<u32> = if size <= n {
        Some(if size == 0 { 0 } else { (1u32 << size) - 1 })
    } else {
        None
    };
    std::iter::from_fn(move || {
        let c = state?;
        let mask = positions
            .iter()
            .enumerate()
            .filter(|&(j, _)| c >> j & 1 == 1)
            .fold(0 as Mask, |acc, (_, &p)| acc | 1 << p);
        // Gosper's hack for the next combination.
        state = if c == 0 {
            None
        } else {
            let u = c & c.wrapping_neg();
            let v = c + u;
            let next = v + (((v ^ c) / u) >> 2);
            (next < 1u32 << n).then_some(next)
        };
        Some(mask)
    })
}

/// Edge set of a position mask.
pub(crate) fn mask_set(mask: Mask) -> EdgeSet {
    EdgeSet(mask as u64)
}
