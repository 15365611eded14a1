use crate::graph::{EdgeSet, GainGraph};

/// Near-balancedness by trying every split: each vertex, each bipartition
/// of its non-loop edges and each orientation of the arcs made from
/// unbalanced loops. Returns false for balanced or disconnected sets.
pub fn near_balanced_brute(g: &GainGraph, f: EdgeSet) -> bool {
    if !g.is_connected(f) || g.is_balanced(f) {
        return false;
    }
    let (h, _) = g.restrict(f);
    let all = h.all_edges();
    let id = h.group().identity();
    for v in h.vertices_of(all).iter() {
        let nonloop: Vec<usize> = all
            .iter()
            .filter(|&e| h.edge(e).is_incident(v) && !h.edge(e).is_loop())
            .collect();
        let bad_loops: Vec<usize> = all
            .iter()
            .filter(|&e| h.edge(e).is_loop() && h.edge(e).tail == v && h.edge(e).label != id)
            .collect();
        for mask in 0u64..1 << nonloop.len() {
            let pick = |bit: bool| {
                EdgeSet::from_ids(
                    nonloop
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| (mask >> i & 1 == 1) == bit)
                        .map(|(_, &e)| e),
                )
            };
            let (e1, e2) = (pick(false), pick(true));
            for flips in 0u64..1 << bad_loops.len() {
                let flipped = EdgeSet::from_ids(
                    bad_loops
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| flips >> i & 1 == 1)
                        .map(|(_, &e)| e),
                );
                let s = h
                    .split_with_reversed_loops(v, e1, e2, flipped)
                    .expect("a valid bipartition");
                if s.is_balanced(s.all_edges()) {
                    return true;
                }
            }
        }
    }
    false
}
