//! The (k, l) pebble game on loopy multigraphs, valid for `0 <= l < 2k`.
//! Edge labels are ignored here.

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, GainGraph};

/// State of a pebble game. Every vertex starts with `k` pebbles; an
/// accepted edge is oriented out of the vertex whose pebble it took.
#[derive(Clone, Debug)]
pub struct PebbleGame {
    k: u32,
    ell: u32,
    pebbles: Vec<u32>,
    /// Out-edges per vertex as `(edge id, head)`.
    out: Vec<Vec<(usize, usize)>>,
    accepted: EdgeSet,
}

impl PebbleGame {
    pub fn new(k: u32, ell: u32, vertex_count: usize) -> Result<PebbleGame> {
        if k == 0 || ell >= 2 * k {
            return Err(Error::InvalidParams(format!(
                "the pebble game needs k >= 1 and 0 <= l < 2k, got k={k}, l={ell}"
            )));
        }
        Ok(PebbleGame {
            k,
            ell,
            pebbles: vec![k; vertex_count],
            out: vec![Vec::new(); vertex_count],
            accepted: EdgeSet::EMPTY,
        })
    }

    pub fn accepted(&self) -> EdgeSet {
        self.accepted
    }

    /// Moves one pebble to `u` along a reversed directed path, never taking
    /// it from `keep`. Returns false if no pebble is reachable.
    fn gather(&mut self, u: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut seen = vec![false; n];
        seen[u] = true;
        seen[keep] = true;
        // Iterative DFS storing the edge used to reach each vertex.
        let mut pred: Vec<Option<(usize, usize, usize)>> = vec![None; n];
        let mut stack = vec![u];
        let mut found = None;
        'search: while let Some(a) = stack.pop() {
            for &(e, b) in &self.out[a] {
                if seen[b] {
                    continue;
                }
                seen[b] = true;
                pred[b] = Some((a, e, b));
                if self.pebbles[b] > 0 {
                    found = Some(b);
                    break 'search;
                }
                stack.push(b);
            }
        }
        let Some(w) = found else {
            return false;
        };
        self.pebbles[w] -= 1;
        self.pebbles[u] += 1;
        let mut cur = w;
        while cur != u {
            let (a, e, b) = pred[cur].expect("path to the pebble");
            let pos = self.out[a]
                .iter()
                .position(|&(x, _)| x == e)
                .expect("edge on path");
            self.out[a].swap_remove(pos);
            self.out[b].push((e, a));
            cur = a;
        }
        true
    }

    /// Vertices reachable from `a` or `b` along oriented edges.
    pub fn reach(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.pebbles.len();
        let mut seen = vec![false; n];
        let mut stack = vec![a, b];
        seen[a] = true;
        seen[b] = true;
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &(_, y) in &self.out[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Tries to insert edge `e = (a, b)`. Returns whether it was accepted.
    pub fn try_insert(&mut self, e: usize, a: usize, b: usize) -> bool {
        let need = self.ell + 1;
        if a == b {
            if need > self.k {
                return false;
            }
            while self.pebbles[a] < need {
                if !self.gather(a, a) {
                    return false;
                }
            }
        } else {
            while self.pebbles[a] + self.pebbles[b] < need {
                if !self.gather(a, b) && !self.gather(b, a) {
                    return false;
                }
            }
        }
        let from = if self.pebbles[a] > 0 { a } else { b };
        let to = if from == a { b } else { a };
        self.pebbles[from] -= 1;
        self.out[from].push((e, to));
        self.accepted.insert(e);
        true
    }

    /// Edges currently oriented out of a vertex of `verts`.
    pub fn edges_out_of(&self, verts: &[usize]) -> EdgeSet {
        let mut s = EdgeSet::EMPTY;
        for &v in verts {
            for &(e, _) in &self.out[v] {
                s.insert(e);
            }
        }
        s
    }
}

/// Edges of `f` accepted by the pebble game in ascending id order.
pub fn greedy_independent(k: u32, ell: u32, g: &GainGraph, f: EdgeSet) -> Result<EdgeSet> {
    g.check_set(f)?;
    let mut game = PebbleGame::new(k, ell, g.vertex_count())?;
    for e in f.iter() {
        let ed = g.edge(e);
        game.try_insert(e, ed.tail, ed.head);
    }
    Ok(game.accepted())
}

/// Rank of `f` in the (k, l)-count matroid.
pub fn count_matroid_rank(k: u32, ell: u32, g: &GainGraph, f: EdgeSet) -> Result<usize> {
    Ok(greedy_independent(k, ell, g, f)?.len())
}

/// Whether `f` is (k, l)-sparse.
pub fn count_independent(k: u32, ell: u32, g: &GainGraph, f: EdgeSet) -> Result<bool> {
    Ok(greedy_independent(k, ell, g, f)? == f)
}

/// Checks (k, 0)-sparsity of `f` through an orientation with out-degree at
/// most `k`. On failure returns a connected witness `W` with
/// `|W| = k |V(W)| + 1`.
pub fn k0_orientation(k: u32, g: &GainGraph, f: EdgeSet) -> Result<Option<EdgeSet>> {
    g.check_set(f)?;
    let mut game = PebbleGame::new(k, 0, g.vertex_count())?;
    for e in f.iter() {
        let ed = g.edge(e);
        if !game.try_insert(e, ed.tail, ed.head) {
            let r = game.reach(ed.tail, ed.head);
            return Ok(Some(game.edges_out_of(&r).with(e)));
        }
    }
    Ok(None)
}
