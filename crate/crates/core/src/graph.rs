//! Group-labeled directed multigraphs: walks, switching, relabeling along a
//! forest, balancedness, splits and fractions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaFunction;
use crate::error::{Error, Result};
use crate::group::{ConjClass, Elem, ElemSet, Group, Subgroup};

/// Largest supported vertex count. One slot is kept free so that a split
/// can always add a vertex.
pub const MAX_VERTICES: usize = 63;
/// Largest supported edge count (edge sets are 64-bit masks).
pub const MAX_EDGES: usize = 64;

/// A set of edge ids stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    /// The set `{0, .., m-1}`.
    pub fn full(m: usize) -> EdgeSet {
        if m >= 64 {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(e: usize) -> EdgeSet {
        EdgeSet(1u64 << e)
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(it: I) -> EdgeSet {
        EdgeSet(it.into_iter().fold(0u64, |m, e| m | 1u64 << e))
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u64 << e);
    }

    pub fn with(self, e: usize) -> EdgeSet {
        EdgeSet(self.0 | 1u64 << e)
    }

    pub fn without(self, e: usize) -> EdgeSet {
        EdgeSet(self.0 & !(1u64 << e))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 | o.0)
    }

    pub fn intersection(self, o: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & o.0)
    }

    pub fn difference(self, o: EdgeSet) -> EdgeSet {
        EdgeSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: EdgeSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets, in increasing order of their bitmask.
    pub fn subsets(self) -> impl Iterator<Item = EdgeSet> {
        let full = self.0;
        let mut cur = Some(0u64);
        std::iter::from_fn(move || {
            let c = cur?;
            cur = if c == full {
                None
            } else {
                Some((c.wrapping_sub(full)) & full)
            };
            Some(EdgeSet(c))
        })
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of vertices stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        EdgeSet(self.0).iter()
    }

    pub fn first(self) -> Option<usize> {
        EdgeSet(self.0).first()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An oriented edge with its label. Loops have `tail == head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub label: Elem,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn is_incident(&self, v: usize) -> bool {
        self.tail == v || self.head == v
    }

    /// The other endpoint of the edge as seen from `v`.
    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// A walk `v0, e1, v1, ..., ek, vk`, stored as a start vertex and steps
/// `(edge, forward)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub start: usize,
    pub steps: Vec<(usize, bool)>,
}

impl Walk {
    pub fn empty(v: usize) -> Walk {
        Walk {
            start: v,
            steps: Vec::new(),
        }
    }

    /// Builds a walk from its alternating vertex and edge sequences,
    /// inferring the direction of each step. Loops are traversed forward.
    pub fn from_sequence(g: &GainGraph, vertices: &[usize], edges: &[usize]) -> Result<Walk> {
        if vertices.len() != edges.len() + 1 {
            return Err(Error::InvalidGraph(
                "a walk has one more vertex than edges".into(),
            ));
        }
        let mut steps = Vec::with_capacity(edges.len());
        for (i, &e) in edges.iter().enumerate() {
            let ed = g.edge_checked(e)?;
            let (a, b) = (vertices[i], vertices[i + 1]);
            if ed.tail == a && ed.head == b {
                steps.push((e, true));
            } else if ed.head == a && ed.tail == b {
                steps.push((e, false));
            } else {
                return Err(Error::IncidenceMismatch { step: i });
            }
        }
        Ok(Walk {
            start: vertices[0],
            steps,
        })
    }
}

/// A group-labeled directed multigraph.
#[derive(Clone)]
pub struct GainGraph {
    group: Arc<Group>,
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl fmt::Debug for GainGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GainGraph")
            .field("group", &self.group)
            .field("vertex_count", &self.vertex_count)
            .field("edges", &self.edges)
            .finish()
    }
}

/// Subgroup data of a connected edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSubgroup {
    /// `<psi'(F)>` for the relabeling along a spanning tree rooted at the
    /// least vertex of `F`.
    pub subgroup: Subgroup,
    pub class: ConjClass,
    pub alpha_tilde: u8,
}

/// Certificate of near-balancedness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearBalanceCertificate {
    pub base: usize,
    pub extra: EdgeSet,
    /// The common non-identity label of the extra edges after relabeling.
    pub g: Elem,
}

struct Relabeling {
    /// Potential per vertex (identity where unset).
    pot: Vec<Elem>,
    tree: EdgeSet,
}

impl GainGraph {
    pub fn new(group: Arc<Group>, vertex_count: usize, edges: Vec<Edge>) -> Result<GainGraph> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "at most {MAX_VERTICES} vertices are supported, got {vertex_count}"
            )));
        }
        if edges.len() > MAX_EDGES {
            return Err(Error::InvalidGraph(format!(
                "at most {MAX_EDGES} edges are supported, got {}",
                edges.len()
            )));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.tail >= vertex_count || e.head >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {i} uses a vertex outside 0..{vertex_count}"
                )));
            }
            group.check_elem(e.label)?;
        }
        Ok(GainGraph {
            group,
            vertex_count,
            edges,
        })
    }

    /// Convenience constructor from `(tail, head, label)` triples.
    pub fn from_triples(
        group: Arc<Group>,
        vertex_count: usize,
        edges: &[(usize, usize, Elem)],
    ) -> Result<GainGraph> {
        GainGraph::new(
            group,
            vertex_count,
            edges
                .iter()
                .map(|&(tail, head, label)| Edge { tail, head, label })
                .collect(),
        )
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    fn edge_checked(&self, e: usize) -> Result<&Edge> {
        self.edges
            .get(e)
            .ok_or_else(|| Error::InvalidGraph(format!("no edge with id {e}")))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub fn check_set(&self, f: EdgeSet) -> Result<()> {
        if f.is_subset(self.all_edges()) {
            Ok(())
        } else {
            Err(Error::InvalidGraph(format!(
                "edge set {f:?} is not contained in the graph"
            )))
        }
    }

    /// Vertices incident to `f`.
    pub fn vertices_of(&self, f: EdgeSet) -> VertexSet {
        let mut s = VertexSet::default();
        for e in f.iter() {
            s.insert(self.edges[e].tail);
            s.insert(self.edges[e].head);
        }
        s
    }

    /// Edges of `f` incident to `v` (loops included).
    pub fn incident(&self, f: EdgeSet, v: usize) -> EdgeSet {
        EdgeSet::from_ids(f.iter().filter(|&e| self.edges[e].is_incident(v)))
    }

    /// Loops of `f` at `v`.
    pub fn loops_at(&self, f: EdgeSet, v: usize) -> EdgeSet {
        EdgeSet::from_ids(
            f.iter()
                .filter(|&e| self.edges[e].is_loop() && self.edges[e].tail == v),
        )
    }

    /// Connected components of `f`, as edge sets ordered by least edge id.
    pub fn components(&self, f: EdgeSet) -> Vec<EdgeSet> {
        let mut uf = UnionFind::new(self.vertex_count);
        for e in f.iter() {
            uf.union(self.edges[e].tail, self.edges[e].head);
        }
        let mut out: Vec<(usize, EdgeSet)> = Vec::new();
        for e in f.iter() {
            let r = uf.find(self.edges[e].tail);
            match out.iter_mut().find(|(root, _)| *root == r) {
                Some((_, s)) => s.insert(e),
                None => out.push((r, EdgeSet::singleton(e))),
            }
        }
        out.into_iter().map(|(_, s)| s).collect()
    }

    /// True iff `f` is nonempty and connected.
    pub fn is_connected(&self, f: EdgeSet) -> bool {
        let Some(first) = f.first() else {
            return false;
        };
        let mut reached = VertexSet::default();
        reached.insert(self.edges[first].tail);
        let mut rest = f;
        loop {
            let mut grew = false;
            for e in rest.iter() {
                let ed = self.edges[e];
                if reached.contains(ed.tail) || reached.contains(ed.head) {
                    reached.insert(ed.tail);
                    reached.insert(ed.head);
                    rest.remove(e);
                    grew = true;
                }
            }
            if rest.is_empty() {
                return true;
            }
            if !grew {
                return false;
            }
        }
    }

    /// Gain of a walk.
    pub fn walk_gain(&self, w: &Walk) -> Result<Elem> {
        let grp = &*self.group;
        let mut cur = w.start;
        let mut gain = grp.identity();
        for (i, &(e, fwd)) in w.steps.iter().enumerate() {
            let ed = self.edge_checked(e)?;
            if fwd {
                if ed.tail != cur {
                    return Err(Error::IncidenceMismatch { step: i });
                }
                gain = grp.mul(gain, ed.label);
                cur = ed.head;
            } else {
                if ed.head != cur {
                    return Err(Error::IncidenceMismatch { step: i });
                }
                gain = grp.mul(gain, grp.inv(ed.label));
                cur = ed.tail;
            }
        }
        Ok(gain)
    }

    /// Switching at `v` with `gamma`.
    pub fn switch(&self, v: usize, gamma: Elem) -> GainGraph {
        let mut gammas = vec![self.group.identity(); self.vertex_count];
        gammas[v] = gamma;
        self.switch_all(&gammas)
    }

    /// Simultaneous switching at every vertex: `psi'(e) = g_tail psi(e) g_head^{-1}`.
    pub fn switch_all(&self, gammas: &[Elem]) -> GainGraph {
        let grp = &*self.group;
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                label: grp.mul(grp.mul(gammas[e.tail], e.label), grp.inv(gammas[e.head])),
                ..*e
            })
            .collect();
        GainGraph {
            group: self.group.clone(),
            vertex_count: self.vertex_count,
            edges,
        }
    }

    /// The graph with edge `e` reversed and its label inverted.
    pub fn reversed(&self, e: usize) -> GainGraph {
        let mut g = self.clone();
        let ed = g.edges[e];
        g.edges[e] = Edge {
            tail: ed.head,
            head: ed.tail,
            label: self.group.inv(ed.label),
        };
        g
    }

    /// The graph on the same vertices keeping only the edges of `f`, in
    /// order. Returns the new graph and the original id of each new edge.
    pub fn restrict(&self, f: EdgeSet) -> (GainGraph, Vec<usize>) {
        let ids = f.to_vec();
        let g = GainGraph {
            group: self.group.clone(),
            vertex_count: self.vertex_count,
            edges: ids.iter().map(|&e| self.edges[e]).collect(),
        };
        (g, ids)
    }

    /// True iff `f` has no cycle (loops count as cycles).
    pub fn is_forest(&self, f: EdgeSet) -> bool {
        let mut uf = UnionFind::new(self.vertex_count);
        f.iter()
            .all(|e| uf.union(self.edges[e].tail, self.edges[e].head))
    }

    /// Potentials along a BFS forest of `f`: each component is rooted at its
    /// least vertex with the identity, and `pot(head) = pot(tail) psi(e)`
    /// along tree edges, which are chosen by least id in BFS order.
    fn relabeling(&self, f: EdgeSet) -> Relabeling {
        self.relabeling_with(f, None)
    }

    fn relabeling_with(&self, f: EdgeSet, forest: Option<EdgeSet>) -> Relabeling {
        let grp = &*self.group;
        let n = self.vertex_count;
        let id = grp.identity();
        let mut pot = vec![id; n];
        let mut comp = vec![usize::MAX; n];
        let mut tree = EdgeSet::EMPTY;
        let usable = forest.unwrap_or(f);
        let verts = self.vertices_of(f);
        let mut ncomp = 0;
        let mut queue = Vec::with_capacity(n);
        for root in verts.iter() {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = ncomp;
            queue.clear();
            queue.push(root);
            let mut qi = 0;
            while qi < queue.len() {
                let a = queue[qi];
                qi += 1;
                for e in usable.iter() {
                    let ed = self.edges[e];
                    if ed.is_loop() {
                        continue;
                    }
                    let (b, val) = if ed.tail == a {
                        (ed.head, grp.mul(pot[a], ed.label))
                    } else if ed.head == a {
                        (ed.tail, grp.mul(pot[a], grp.inv(ed.label)))
                    } else {
                        continue;
                    };
                    if comp[b] == usize::MAX {
                        comp[b] = ncomp;
                        pot[b] = val;
                        tree.insert(e);
                        queue.push(b);
                    }
                }
            }
            ncomp += 1;
        }
        Relabeling { pot, tree }
    }

    #[inline]
    fn relabeled(&self, pot: &[Elem], e: usize) -> Elem {
        let grp = &*self.group;
        let ed = self.edges[e];
        grp.mul(grp.mul(pot[ed.tail], ed.label), grp.inv(pot[ed.head]))
    }

    /// A spanning forest of `f`, chosen by BFS from the least vertex of each
    /// component with least-id edges first.
    pub fn spanning_forest(&self, f: EdgeSet) -> EdgeSet {
        self.relabeling(f).tree
    }

    /// An equivalent labeling that is the identity on the given forest,
    /// obtained by switching each vertex with the gain of its root path.
    pub fn make_respecting(&self, forest: EdgeSet) -> Result<GainGraph> {
        self.check_set(forest)?;
        if !self.is_forest(forest) {
            return Err(Error::NotAForest);
        }
        let r = self.relabeling_with(forest, Some(forest));
        Ok(self.switch_all(&r.pot))
    }

    /// Lattice id of `<psi'(F)>` for connected `f`, relabeling along the BFS
    /// spanning tree rooted at the least vertex.
    pub fn subgroup_id_of_set(&self, f: EdgeSet) -> Result<usize> {
        self.check_connected(f)?;
        let r = self.relabeling(f);
        let gens = ElemSet::from_elems(f.iter().map(|e| self.relabeled(&r.pot, e)));
        Ok(self.group.subgroup_id(gens))
    }

    /// The subgroup generated by closed walks in `f`, its conjugacy class and
    /// the alpha value of that class.
    pub fn subgroup_of_set(&self, f: EdgeSet, alpha: &AlphaFunction) -> Result<SetSubgroup> {
        let id = self.subgroup_id_of_set(f)?;
        let members = self.group.lattice().subgroup(id);
        let subgroup = Subgroup { members };
        Ok(SetSubgroup {
            subgroup,
            class: self.group.conj_class(&subgroup),
            alpha_tilde: alpha.value_by_id(id),
        })
    }

    fn check_connected(&self, f: EdgeSet) -> Result<()> {
        self.check_set(f)?;
        if f.is_empty() {
            return Err(Error::EmptyEdgeSet);
        }
        if !self.is_connected(f) {
            return Err(Error::Disconnected);
        }
        Ok(())
    }

    /// True iff `f` contains no unbalanced cycle.
    pub fn is_balanced(&self, f: EdgeSet) -> bool {
        let r = self.relabeling(f);
        let id = self.group.identity();
        f.difference(r.tree)
            .iter()
            .all(|e| self.relabeled(&r.pot, e) == id)
    }

    /// Splits `v` into `v` (keeping `e1` and balanced loops) and a new vertex
    /// (taking `e2`). Unbalanced loops at `v` become arcs from `v` to the new
    /// vertex with their label. `{e1, e2}` must partition the non-loop edges
    /// at `v`.
    pub fn split(&self, v: usize, e1: EdgeSet, e2: EdgeSet) -> Result<GainGraph> {
        self.split_with_reversed_loops(v, e1, e2, EdgeSet::EMPTY)
    }

    /// As [`split`](Self::split), but the arcs coming from the loops in
    /// `flipped` carry the inverse label instead.
    pub fn split_with_reversed_loops(
        &self,
        v: usize,
        e1: EdgeSet,
        e2: EdgeSet,
        flipped: EdgeSet,
    ) -> Result<GainGraph> {
        if v >= self.vertex_count {
            return Err(Error::InvalidPartition(format!("no vertex {v}")));
        }
        let all = self.all_edges();
        let nonloop = EdgeSet::from_ids(
            all.iter()
                .filter(|&e| self.edges[e].is_incident(v) && !self.edges[e].is_loop()),
        );
        if !e1.intersection(e2).is_empty() || e1.union(e2) != nonloop {
            return Err(Error::InvalidPartition(
                "the two parts must partition the non-loop edges at the vertex".into(),
            ));
        }
        let grp = &*self.group;
        let v2 = self.vertex_count;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, ed)| {
                if e2.contains(i) {
                    Edge {
                        tail: if ed.tail == v { v2 } else { ed.tail },
                        head: if ed.head == v { v2 } else { ed.head },
                        label: ed.label,
                    }
                } else if ed.is_loop() && ed.tail == v && ed.label != grp.identity() {
                    Edge {
                        tail: v,
                        head: v2,
                        label: if flipped.contains(i) {
                            grp.inv(ed.label)
                        } else {
                            ed.label
                        },
                    }
                } else {
                    *ed
                }
            })
            .collect();
        Ok(GainGraph {
            group: self.group.clone(),
            vertex_count: self.vertex_count + 1,
            edges,
        })
    }

    /// Whether the split of `G_F` at `v` sending `e2` to the new vertex (and
    /// the other non-loop edges of `f` at `v` to `v`) leaves `f` balanced,
    /// choosing the orientation of each arc made from an unbalanced loop
    /// freely.
    pub fn split_is_balanced(&self, f: EdgeSet, v: usize, e2: EdgeSet) -> bool {
        let grp = &*self.group;
        let id = grp.identity();
        let n = self.vertex_count;
        let v2 = n;
        let ends = |e: usize| -> (usize, usize) {
            let ed = self.edges[e];
            if e2.contains(e) {
                (
                    if ed.tail == v { v2 } else { ed.tail },
                    if ed.head == v { v2 } else { ed.head },
                )
            } else {
                (ed.tail, ed.head)
            }
        };
        let mut arcs = Vec::new();
        let mut plain = Vec::new();
        for e in f.iter() {
            let ed = self.edges[e];
            if ed.is_loop() && ed.tail == v && ed.label != id {
                arcs.push(ed.label);
            } else {
                plain.push(e);
            }
        }
        // Potentials over the plain edges.
        let mut pot = vec![id; n + 1];
        let mut comp = vec![usize::MAX; n + 1];
        let mut nc = 0;
        let mut verts: Vec<usize> = Vec::new();
        for &e in &plain {
            let (a, b) = ends(e);
            verts.push(a);
            verts.push(b);
        }
        verts.push(v);
        verts.push(v2);
        let mut queue = Vec::new();
        for &root in &verts {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = nc;
            queue.clear();
            queue.push(root);
            let mut qi = 0;
            while qi < queue.len() {
                let a = queue[qi];
                qi += 1;
                for &e in &plain {
                    let (t, h) = ends(e);
                    let lab = self.edges[e].label;
                    if t == h {
                        continue;
                    }
                    let (b, val) = if t == a {
                        (h, grp.mul(pot[a], lab))
                    } else if h == a {
                        (t, grp.mul(pot[a], grp.inv(lab)))
                    } else {
                        continue;
                    };
                    if comp[b] == usize::MAX {
                        comp[b] = nc;
                        pot[b] = val;
                        queue.push(b);
                    }
                }
            }
            nc += 1;
        }
        for &e in &plain {
            let (t, h) = ends(e);
            let lab = self.edges[e].label;
            if grp.mul(pot[t], lab) != pot[h] {
                return false;
            }
        }
        if arcs.is_empty() {
            return true;
        }
        let t = if comp[v] == comp[v2] {
            grp.mul(grp.inv(pot[v]), pot[v2])
        } else {
            arcs[0]
        };
        let ti = grp.inv(t);
        arcs.iter().all(|&x| x == t || x == ti)
    }

    /// Fractions of `v` in the whole graph.
    pub fn fractions(&self, v: usize) -> Vec<EdgeSet> {
        self.fractions_in(self.all_edges(), v)
    }

    /// Fractions of `v` in `G_F`: for each component of `G_F - v`, the
    /// non-loop-at-`v` edges of `f` spanned by that component and `v`.
    /// Empty fractions are omitted; the order follows the least vertex of
    /// each component.
    pub fn fractions_in(&self, f: EdgeSet, v: usize) -> Vec<EdgeSet> {
        let away = EdgeSet::from_ids(f.iter().filter(|&e| !self.edges[e].is_incident(v)));
        let mut uf = UnionFind::new(self.vertex_count);
        for e in away.iter() {
            uf.union(self.edges[e].tail, self.edges[e].head);
        }
        let verts = self.vertices_of(f);
        let mut roots: Vec<usize> = Vec::new();
        for u in verts.iter() {
            if u == v {
                continue;
            }
            let r = uf.find(u);
            if !roots.contains(&r) {
                roots.push(r);
            }
        }
        let mut out = Vec::new();
        for r in roots {
            let mut s = EdgeSet::EMPTY;
            for e in f.iter() {
                let ed = self.edges[e];
                if ed.is_loop() && ed.tail == v {
                    continue;
                }
                let u = if ed.tail != v { ed.tail } else { ed.head };
                if u != v && uf.find(u) == r {
                    s.insert(e);
                }
            }
            if !s.is_empty() {
                out.push(s);
            }
        }
        out
    }

    /// Tests whether `v` is a base for the near-balancedness of the
    /// connected, unbalanced set `f`. On success returns a certificate.
    fn base_test(&self, f: EdgeSet, v: usize) -> Option<NearBalanceCertificate> {
        let grp = &*self.group;
        let id = grp.identity();
        let n = self.vertex_count;
        // Spanning forest of G_F - v, extended by the least edge from v into
        // each of its components.
        let away = EdgeSet::from_ids(f.iter().filter(|&e| !self.edges[e].is_incident(v)));
        let mut uf = UnionFind::new(n);
        let mut tree = EdgeSet::EMPTY;
        for e in away.iter() {
            if uf.union(self.edges[e].tail, self.edges[e].head) {
                tree.insert(e);
            }
        }
        let at_v = f.difference(away);
        let mut linked: Vec<usize> = Vec::new();
        for e in at_v.iter() {
            let ed = self.edges[e];
            if ed.is_loop() {
                continue;
            }
            let r = uf.find(ed.other(v));
            if !linked.contains(&r) {
                linked.push(r);
                tree.insert(e);
            }
        }
        let r = self.relabeling_with(f, Some(tree));
        // The relabeling roots the tree at its least vertex; re-root at v.
        let shift = grp.inv(r.pot[v]);
        let pot: Vec<Elem> = r.pot.iter().map(|&p| grp.mul(shift, p)).collect();
        for e in away.iter() {
            if self.relabeled(&pot, e) != id {
                return None;
            }
        }
        // Per-fraction value of the non-identity labels, oriented into v.
        let mut frac_val: Vec<(usize, Elem)> = Vec::new();
        let mut values: Vec<Elem> = Vec::new();
        let mut norm = Vec::new();
        for e in at_v.iter() {
            let ed = self.edges[e];
            if ed.is_loop() {
                if ed.label != id {
                    values.push(ed.label);
                }
                continue;
            }
            let lab = self.relabeled(&pot, e);
            let h = if ed.head == v { lab } else { grp.inv(lab) };
            let root = uf.find(ed.other(v));
            norm.push((e, root, h));
            if h == id {
                continue;
            }
            match frac_val.iter().find(|(r0, _)| *r0 == root) {
                Some(&(_, h0)) if h0 != h => return None,
                Some(_) => {}
                None => {
                    frac_val.push((root, h));
                    values.push(h);
                }
            }
        }
        let &g = values.first()?;
        let gi = grp.inv(g);
        if !values.iter().all(|&x| x == g || x == gi) {
            return None;
        }
        let mut extra = EdgeSet::EMPTY;
        for &(e, root, h) in &norm {
            let fv = frac_val.iter().find(|(r0, _)| *r0 == root).map(|&(_, x)| x);
            let hit = match fv {
                Some(x) if x == g => h == g,
                Some(_) => h == id,
                None => false,
            };
            if hit {
                extra.insert(e);
            }
        }
        for e in at_v.iter() {
            let ed = self.edges[e];
            if ed.is_loop() && ed.label != id {
                extra.insert(e);
            }
        }
        Some(NearBalanceCertificate { base: v, extra, g })
    }

    /// Near-balancedness of the connected set `f`: `None` when `f` is
    /// balanced or has no base, otherwise a certificate for the least base.
    pub fn near_balanced(&self, f: EdgeSet) -> Result<Option<NearBalanceCertificate>> {
        self.check_connected(f)?;
        if self.is_balanced(f) {
            return Ok(None);
        }
        Ok(self
            .vertices_of(f)
            .iter()
            .find_map(|v| self.base_test(f, v)))
    }

    /// Fast predicate form of [`near_balanced`](Self::near_balanced) for a
    /// set already known to be connected and unbalanced.
    pub(crate) fn near_balanced_unchecked(&self, f: EdgeSet) -> bool {
        self.vertices_of(f)
            .iter()
            .any(|v| self.base_test(f, v).is_some())
    }

    /// All bases of the near-balanced set `f` (empty if it is not).
    pub fn near_balance_bases(&self, f: EdgeSet) -> Result<Vec<usize>> {
        self.check_connected(f)?;
        if self.is_balanced(f) {
            return Ok(Vec::new());
        }
        Ok(self
            .vertices_of(f)
            .iter()
            .filter(|&v| self.base_test(f, v).is_some())
            .collect())
    }

    /// Whether `v` is a base for the near-balancedness of `f`.
    pub fn is_base(&self, f: EdgeSet, v: usize) -> Result<bool> {
        self.check_connected(f)?;
        Ok(!self.is_balanced(f) && self.vertices_of(f).contains(v) && self.base_test(f, v).is_some())
    }

    /// Every extra edge set of `f` at the base `v`, from all balanced split
    /// bipartitions, sorted and deduplicated. Each contains all unbalanced
    /// loops of `f` at `v`.
    pub fn extra_edge_sets(&self, f: EdgeSet, v: usize) -> Result<Vec<EdgeSet>> {
        if !self.is_base(f, v)? {
            return Err(Error::NotABase(v));
        }
        let id = self.group.identity();
        let at_v: Vec<usize> = f
            .iter()
            .filter(|&e| self.edges[e].is_incident(v) && !self.edges[e].is_loop())
            .collect();
        if at_v.len() > 20 {
            return Err(Error::TooLarge {
                what: "degree at the base",
                size: at_v.len(),
                bound: 20,
            });
        }
        let loops = EdgeSet::from_ids(
            f.iter()
                .filter(|&e| self.edges[e].is_loop() && self.edges[e].tail == v && self.edges[e].label != id),
        );
        let mut out = Vec::new();
        for mask in 0u64..1 << at_v.len() {
            let e2 = EdgeSet::from_ids(
                at_v.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            );
            if self.split_is_balanced(f, v, e2) {
                out.push(e2.union(loops));
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Union-find over vertex indices.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the classes of `a` and `b`; false if they were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }
}
