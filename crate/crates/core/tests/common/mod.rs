//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's own balance, near-balance or sparsity code.

#![allow(dead_code)]

use std::collections::VecDeque;
use std::sync::Arc;

use gainmat::{AlphaFunction, EdgeSet, Elem, ElemSet, GainGraph, Group, GroupSpec};

pub fn group(spec: &str) -> Arc<Group> {
    let s: GroupSpec = spec.parse().expect("group spec");
    Arc::new(Group::new(&s).expect("group"))
}

pub fn graph(grp: &Arc<Group>, n: usize, edges: &[(usize, usize, Elem)]) -> GainGraph {
    GainGraph::from_triples(grp.clone(), n, edges).expect("graph")
}

fn endpoints(g: &GainGraph, e: usize) -> (usize, usize, Elem) {
    let ed = g.edge(e);
    (ed.tail, ed.head, ed.label)
}

pub fn vertex_list(g: &GainGraph, f: EdgeSet) -> Vec<usize> {
    let mut vs: Vec<usize> = f
        .iter()
        .flat_map(|e| {
            let (a, b, _) = endpoints(g, e);
            [a, b]
        })
        .collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Connectivity of `(V(F), F)` by breadth-first search.
pub fn connected(g: &GainGraph, f: EdgeSet) -> bool {
    let vs = vertex_list(g, f);
    let Some(&root) = vs.first() else {
        return false;
    };
    let mut seen = vec![root];
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for e in f.iter() {
            let (a, b, _) = endpoints(g, e);
            for (x, y) in [(a, b), (b, a)] {
                if x == u && !seen.contains(&y) {
                    seen.push(y);
                    queue.push_back(y);
                }
            }
        }
    }
    seen.len() == vs.len()
}

/// Potentials `p` with `p(tail) * psi(e) * p(head)^-1` trivial on a
/// spanning tree, then the gains of all edges under them. `F` must be
/// connected.
pub fn normalized_gains(g: &GainGraph, f: EdgeSet) -> Vec<Elem> {
    let grp = g.group();
    let id = grp.identity();
    let vs = vertex_list(g, f);
    let mut pot: Vec<Option<Elem>> = vec![None; g.vertex_count()];
    pot[vs[0]] = Some(id);
    let mut changed = true;
    while changed {
        changed = false;
        for e in f.iter() {
            let (a, b, x) = endpoints(g, e);
            match (pot[a], pot[b]) {
                // p(b) = p(a) * x makes the edge trivial.
                (Some(pa), None) => {
                    pot[b] = Some(grp.mul(pa, x));
                    changed = true;
                }
                (None, Some(pb)) => {
                    pot[a] = Some(grp.mul(pb, grp.inv(x)));
                    changed = true;
                }
                _ => {}
            }
        }
    }
    f.iter()
        .map(|e| {
            let (a, b, x) = endpoints(g, e);
            let (pa, pb) = (pot[a].unwrap(), pot[b].unwrap());
            grp.mul(grp.mul(pa, x), grp.inv(pb))
        })
        .collect()
}

pub fn closure(grp: &Group, gens: &[Elem]) -> ElemSet {
    let mut set = vec![grp.identity()];
    let mut i = 0;
    while i < set.len() {
        for &s in gens {
            let y = grp.mul(set[i], s);
            if !set.contains(&y) {
                set.push(y);
            }
        }
        i += 1;
    }
    ElemSet::from_elems(set)
}

/// The subgroup generated by the gains of closed walks, up to conjugacy.
pub fn gain_subgroup(g: &GainGraph, f: EdgeSet) -> ElemSet {
    closure(g.group(), &normalized_gains(g, f))
}

pub fn balanced(g: &GainGraph, f: EdgeSet) -> bool {
    let id = g.group().identity();
    normalized_gains(g, f).iter().all(|&x| x == id)
}

/// Near-balancedness through the equivalent-gain characterization: a base
/// `v`, a non-identity `g` and a set `E'` of edges at `v` such that some
/// switching gives `g` on `E'` (oriented into `v`) and the identity
/// elsewhere.
pub fn near_balanced_by_switching(g: &GainGraph, f: EdgeSet) -> bool {
    if !connected(g, f) || balanced(g, f) {
        return false;
    }
    let grp = g.group();
    let id = grp.identity();
    let vs = vertex_list(g, f);
    for &v in &vs {
        let at_v: Vec<usize> = f
            .iter()
            .filter(|&e| {
                let (a, b, _) = endpoints(g, e);
                a == v || b == v
            })
            .collect();
        let loops: Vec<usize> = at_v
            .iter()
            .copied()
            .filter(|&e| endpoints(g, e).0 == endpoints(g, e).1)
            .collect();
        for x in grp.elements().filter(|&x| x != id) {
            for mask in 0u32..1 << at_v.len() {
                // A loop has no preferred direction, so either orientation
                // of it may carry `x`.
                for flips in 0u32..1 << loops.len() {
                    let target = |e: usize| -> Elem {
                        let Some(pos) = at_v.iter().position(|&y| y == e) else {
                            return id;
                        };
                        if mask >> pos & 1 == 0 {
                            return id;
                        }
                        let (a, b, _) = endpoints(g, e);
                        if a == b {
                            let li = loops.iter().position(|&y| y == e).unwrap();
                            if flips >> li & 1 == 1 {
                                grp.inv(x)
                            } else {
                                x
                            }
                        } else if b == v {
                            x
                        } else {
                            grp.inv(x)
                        }
                    };
                    if switching_equivalent(g, f, &vs, target) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Whether potentials `p` exist with `p(tail) * psi(e) * p(head)^-1 =
/// target(e)` on every edge of the connected set `F`.
fn switching_equivalent(
    g: &GainGraph,
    f: EdgeSet,
    vs: &[usize],
    target: impl Fn(usize) -> Elem,
) -> bool {
    let grp = g.group();
    'root: for r in grp.elements() {
        let mut pot: Vec<Option<Elem>> = vec![None; g.vertex_count()];
        pot[vs[0]] = Some(r);
        let mut changed = true;
        while changed {
            changed = false;
            for e in f.iter() {
                let (a, b, x) = endpoints(g, e);
                let t = target(e);
                match (pot[a], pot[b]) {
                    // p(b) = t^-1 * p(a) * x
                    (Some(pa), None) => {
                        pot[b] = Some(grp.mul(grp.mul(grp.inv(t), pa), x));
                        changed = true;
                    }
                    // p(a) = t * p(b) * x^-1
                    (None, Some(pb)) => {
                        pot[a] = Some(grp.mul(grp.mul(t, pb), grp.inv(x)));
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
        for e in f.iter() {
            let (a, b, x) = endpoints(g, e);
            let (pa, pb) = (pot[a].unwrap(), pot[b].unwrap());
            if grp.mul(grp.mul(pa, x), grp.inv(pb)) != target(e) {
                continue 'root;
            }
        }
        return true;
    }
    false
}

/// The count function from first principles, with the lift capped at `k`
/// on near-balanced sets when `lifted`.
pub fn f_oracle(
    k: u32,
    ell: u32,
    alpha: &AlphaFunction,
    lifted: bool,
    g: &GainGraph,
    f: EdgeSet,
) -> i64 {
    let a = alpha.eval(gain_subgroup(g, f)) as i64;
    let beta = if lifted && a > k as i64 && near_balanced_by_switching(g, f) {
        k as i64
    } else {
        a
    };
    k as i64 * vertex_list(g, f).len() as i64 - ell as i64 + beta
}

/// `f`-sparsity of `I` by the definition: every connected subset obeys the
/// count. `fv` caches the count per subset.
pub fn sparse_by_definition(i: EdgeSet, mut fv: impl FnMut(EdgeSet) -> Option<i64>) -> bool {
    i.subsets()
        .filter(|s| !s.is_empty())
        .all(|s| fv(s).is_none_or(|bound| s.len() as i64 <= bound))
}

/// Table of the count over every connected subset of the graph's edges.
pub fn f_table(
    k: u32,
    ell: u32,
    alpha: &AlphaFunction,
    lifted: bool,
    g: &GainGraph,
) -> Vec<Option<i64>> {
    g.all_edges()
        .subsets()
        .map(|s| (!s.is_empty() && connected(g, s)).then(|| f_oracle(k, ell, alpha, lifted, g, s)))
        .collect()
}

/// Independence of every subset, from a count table.
pub fn independence_from_table(m: usize, table: &[Option<i64>]) -> Vec<bool> {
    let mut out = vec![true; 1 << m];
    for s in 1..1usize << m {
        let own = table[s].is_none_or(|b| s.count_ones() as i64 <= b);
        let kids = (0..m).filter(|&e| s >> e & 1 == 1).all(|e| out[s ^ 1 << e]);
        out[s] = own && kids;
    }
    out
}

/// The frame matroid: every component has at most one cycle, and that
/// cycle is unbalanced.
pub fn frame_independent(g: &GainGraph, i: EdgeSet) -> bool {
    let mut rest = i;
    while let Some(e0) = rest.first() {
        // Grow the component of e0 inside rest.
        let mut comp = EdgeSet::singleton(e0);
        loop {
            let vs = vertex_list(g, comp);
            let more = EdgeSet::from_ids(rest.iter().filter(|&e| {
                let (a, b, _) = endpoints(g, e);
                vs.contains(&a) || vs.contains(&b)
            }));
            if more == comp {
                break;
            }
            comp = more;
        }
        let nv = vertex_list(g, comp).len();
        if comp.len() > nv || (comp.len() == nv && balanced(g, comp)) {
            return false;
        }
        rest = rest.difference(comp);
    }
    true
}

/// Plain `(k, l)`-sparsity by the definition over all nonempty subsets.
pub fn plain_sparse(k: u32, ell: u32, g: &GainGraph, i: EdgeSet) -> bool {
    i.subsets().filter(|s| !s.is_empty()).all(|s| {
        s.len() as i64 <= k as i64 * vertex_list(g, s).len() as i64 - ell as i64
    })
}

/// Largest independent subset size under an independence predicate.
pub fn brute_rank(f: EdgeSet, indep: impl Fn(EdgeSet) -> bool) -> usize {
    f.subsets().filter(|&s| indep(s)).map(|s| s.len()).max().unwrap_or(0)
}

/// Minimal dependent subsets under an independence predicate.
pub fn brute_circuits(f: EdgeSet, indep: impl Fn(EdgeSet) -> bool) -> Vec<EdgeSet> {
    let mut out: Vec<EdgeSet> = f
        .subsets()
        .filter(|&s| !indep(s) && s.iter().all(|e| indep(s.without(e))))
        .collect();
    out.sort_by_key(|s| s.0);
    out
}

/// Every set partition of `items`, as lists of blocks.
pub fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    fn go(items: &[usize], i: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(items[i]);
            go(items, i + 1, cur, out);
            cur[b].pop();
        }
        cur.push(vec![items[i]]);
        go(items, i + 1, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(items, 0, &mut Vec::new(), &mut out);
    out
}

/// Minimum of `|E0| + sum f(E_i)` over partitions of `all` into a free
/// part `E0` and connected parts, with `part_value` applied to each count.
pub fn partition_minimum(
    m: usize,
    table: &[Option<i64>],
    part_value: impl Fn(i64) -> i64,
) -> i64 {
    let full = (1usize << m) - 1;
    let mut best = i64::MAX;
    for e0 in 0..=full {
        let rest: Vec<usize> = (0..m).filter(|&e| (full ^ e0) >> e & 1 == 1).collect();
        for p in set_partitions(&rest) {
            let mut val = e0.count_ones() as i64;
            let mut ok = true;
            for block in &p {
                let mask = block.iter().fold(0usize, |a, &e| a | 1 << e);
                match table[mask] {
                    Some(x) => val += part_value(x),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                best = best.min(val);
            }
        }
    }
    best
}
