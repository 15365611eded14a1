//! Deterministic enumeration of small labeled multigraphs.
//!
//! An instance on `n` vertices is a multiset of edge types. A type is a
//! vertex pair `u <= v` (a loop when `u = v`, otherwise an arc `u -> v`)
//! together with a label from a fixed alphabet. Instances are listed by
//! size and then lexicographically as non-decreasing type sequences, so
//! every sub-multiset comes before its supersets. Each instance also has a
//! dense index from the combinatorial number system, which the verifier
//! uses to address per-instance records.

use std::ops::ControlFlow;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Edge, GainGraph};
use crate::group::{Elem, Group};

/// Largest number of instances a space may hold.
pub const MAX_INSTANCES: usize = 40_000_000;

/// Edge-position mask within one instance.
pub(crate) type Mask = u16;

/// Largest instance size supported by the enumeration.
pub const MAX_INSTANCE_EDGES: usize = 12;

#[derive(Clone, Debug)]
pub(crate) struct Ranker {
    ntypes: usize,
    binom: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

impl Ranker {
    fn new(ntypes: usize, max_len: usize) -> Result<Ranker> {
        let top = ntypes + max_len + 1;
        let mut binom = vec![vec![0usize; max_len + 2]; top + 1];
        for a in 0..=top {
            binom[a][0] = 1;
            for b in 1..=(max_len + 1).min(a) {
                binom[a][b] = binom[a - 1][b - 1].saturating_add(binom[a - 1][b]);
            }
        }
        let mut offsets = Vec::with_capacity(max_len + 2);
        let mut acc = 0usize;
        for m in 0..=max_len {
            offsets.push(acc);
            let count = if ntypes == 0 {
                usize::from(m == 0)
            } else {
                binom[ntypes + m - 1][m]
            };
            acc = acc.saturating_add(count);
        }
        offsets.push(acc);
        if acc > MAX_INSTANCES {
            return Err(Error::TooLarge {
                what: "instance count",
                size: acc,
                bound: MAX_INSTANCES,
            });
        }
        Ok(Ranker {
            ntypes,
            binom,
            offsets,
        })
    }

    pub(crate) fn len(&self) -> usize {
        *self.offsets.last().expect("nonempty offsets")
    }

    /// Index of a non-decreasing sequence.
    #[inline]
    pub(crate) fn index(&self, seq: &[u8]) -> usize {
        let mut r = self.offsets[seq.len()];
        for (i, &t) in seq.iter().enumerate() {
            r += self.binom[t as usize + i][i + 1];
        }
        r
    }

    /// Index of the sub-multiset at the positions of `mask`.
    #[inline]
    pub(crate) fn index_masked(&self, seq: &[u8], mask: Mask) -> usize {
        let mut r = self.offsets[mask.count_ones() as usize];
        let mut j = 0;
        let mut m = mask;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            m &= m - 1;
            r += self.binom[seq[p] as usize + j][j + 1];
            j += 1;
        }
        r
    }

    /// Visits every non-decreasing sequence in order of length, then
    /// lexicographically.
    pub(crate) fn for_each(
        &self,
        max_len: usize,
        mut f: impl FnMut(&[u8]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let mut seq: Vec<u8> = Vec::with_capacity(max_len);
        for m in 0..=max_len {
            if m > 0 && self.ntypes == 0 {
                break;
            }
            seq.clear();
            seq.resize(m, 0);
            loop {
                f(&seq)?;
                // Advance the rightmost position that can still grow.
                let Some(i) = (0..m).rev().find(|&i| (seq[i] as usize) + 1 < self.ntypes) else {
                    break;
                };
                let t = seq[i] + 1;
                for x in &mut seq[i..] {
                    *x = t;
                }
            }
        }
        ControlFlow::Continue(())
    }
}

/// The labels used when enumerating instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// The identity and the given non-identity element.
    IdentityAnd(Elem),
    /// Every group element.
    Full,
    /// The identity and the given elements.
    Labels(Vec<Elem>),
}

/// Enumeration bounds for labeled multigraphs over a group.
#[derive(Clone, Debug)]
pub struct InstanceSpace {
    group: Arc<Group>,
    vertices: usize,
    max_edges: usize,
    labels: Vec<Elem>,
    slots: Vec<(usize, usize)>,
    ranker: Ranker,
    shapes: Ranker,
}

impl InstanceSpace {
    pub fn new(
        group: Arc<Group>,
        vertices: usize,
        max_edges: usize,
        alphabet: &Alphabet,
    ) -> Result<InstanceSpace> {
        if vertices == 0 || vertices > 8 {
            return Err(Error::InvalidParams(format!(
                "instance spaces need 1 to 8 vertices, got {vertices}"
            )));
        }
        if max_edges > MAX_INSTANCE_EDGES {
            return Err(Error::TooLarge {
                what: "edge bound",
                size: max_edges,
                bound: MAX_INSTANCE_EDGES,
            });
        }
        let labels = match alphabet {
            Alphabet::IdentityAnd(g) => {
                group.check_elem(*g)?;
                if *g == group.identity() {
                    return Err(Error::IdentityElement);
                }
                vec![group.identity(), *g]
            }
            Alphabet::Full => {
                let mut v = vec![group.identity()];
                v.extend(group.elements().filter(|&x| x != group.identity()));
                v
            }
            Alphabet::Labels(xs) => {
                let mut v = vec![group.identity()];
                for &x in xs {
                    group.check_elem(x)?;
                    if !v.contains(&x) {
                        v.push(x);
                    }
                }
                v
            }
        };
        let mut slots = Vec::new();
        for u in 0..vertices {
            for v in u..vertices {
                slots.push((u, v));
            }
        }
        let ntypes = slots.len() * labels.len();
        if ntypes > u8::MAX as usize {
            return Err(Error::TooLarge {
                what: "number of edge types",
                size: ntypes,
                bound: u8::MAX as usize,
            });
        }
        let ranker = Ranker::new(ntypes, max_edges)?;
        let shapes = Ranker::new(slots.len(), max_edges)?;
        Ok(InstanceSpace {
            group,
            vertices,
            max_edges,
            labels,
            slots,
            ranker,
            shapes,
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn max_edges(&self) -> usize {
        self.max_edges
    }

    pub fn labels(&self) -> &[Elem] {
        &self.labels
    }

    /// Number of instances, the empty one included.
    pub fn len(&self) -> usize {
        self.ranker.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn ranker(&self) -> &Ranker {
        &self.ranker
    }

    pub(crate) fn shape_ranker(&self) -> &Ranker {
        &self.shapes
    }

    /// The edge of a type.
    pub(crate) fn edge(&self, t: u8) -> Edge {
        let l = self.labels.len();
        let (tail, head) = self.slots[t as usize / l];
        Edge {
            tail,
            head,
            label: self.labels[t as usize % l],
        }
    }

    /// Vertex-pair index of a type.
    #[inline]
    pub(crate) fn slot(&self, t: u8) -> u8 {
        (t as usize / self.labels.len()) as u8
    }

    pub(crate) fn slot_ends(&self, s: u8) -> (usize, usize) {
        self.slots[s as usize]
    }

    /// The graph of an instance, edges in sequence order.
    pub fn graph(&self, seq: &[u8]) -> GainGraph {
        GainGraph::new(
            self.group.clone(),
            self.vertices,
            seq.iter().map(|&t| self.edge(t)).collect(),
        )
        .expect("instance edges are valid")
    }

    /// Visits every instance sequence in enumeration order.
    pub fn for_each_seq(&self, f: impl FnMut(&[u8]) -> ControlFlow<()>) {
        let _ = self.ranker.for_each(self.max_edges, f);
    }
}
