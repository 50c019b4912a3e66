//! Test corpora: every connected graph up to isomorphism within vertex and
//! edge caps, and seeded random graphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// Seeded generator used for all random corpora.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Canonical edge set of `g`: the lexicographically smallest sorted edge list
/// over relabelings that order vertices by (degree, neighbour degrees).
pub fn canonical_form(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.n();
    let key = |v: usize| {
        let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
        nd.sort_unstable();
        (g.degree(v), nd)
    };
    let keys: Vec<_> = (0..n).map(key).collect();
    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    // Consecutive runs of equal keys; positions inside a run may be permuted.
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &verts {
        match cells.last_mut() {
            Some(cell) if keys[cell[0]] == keys[v] => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut label = vec![0usize; n];
    search(g, &cells, 0, 0, &mut label, &mut best);
    best.unwrap_or_default()
}

fn search(
    g: &Graph,
    cells: &[Vec<usize>],
    cell: usize,
    next: usize,
    label: &mut [usize],
    best: &mut Option<Vec<(usize, usize)>>,
) {
    if cell == cells.len() {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (label[u], label[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            *best = Some(edges);
        }
        return;
    }
    let len = cells[cell].len();
    permute(&mut cells[cell].clone(), len, &mut |perm| {
        for (i, &v) in perm.iter().enumerate() {
            label[v] = next + i;
        }
        search(g, cells, cell + 1, next + len, label, best);
    });
}

/// Heap's algorithm.
fn permute(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k - 1 {
        permute(items, k - 1, f);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    permute(items, k - 1, f);
}

/// All connected graphs with at least one edge, at most `max_n` vertices and
/// at most `max_m` edges, one per isomorphism class, in canonical labelling.
/// Ordered by edge count, then vertex count, then canonical edge list.
pub fn connected_graphs(max_n: usize, max_m: usize) -> Vec<Graph> {
    if max_n < 2 || max_m < 1 {
        return Vec::new();
    }
    let mut all: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    let mut level: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
    level.insert((2, vec![(0, 1)]));
    for _ in 1..max_m {
        let mut next: BTreeSet<(usize, Vec<(usize, usize)>)> = BTreeSet::new();
        for (n, edges) in &level {
            let g = Graph::from_edges(*n, edges).expect("canonical edges are simple");
            for u in 0..*n {
                for v in u + 1..*n {
                    if !g.has_edge(u, v) {
                        let mut h = g.clone();
                        h.add_edge(u, v).unwrap();
                        next.insert((*n, canonical_form(&h)));
                    }
                }
                if *n < max_n {
                    let mut h = g.disjoint_union(&Graph::empty(1));
                    h.add_edge(u, *n).unwrap();
                    next.insert((n + 1, canonical_form(&h)));
                }
            }
        }
        all.extend(std::mem::replace(&mut level, next));
    }
    all.extend(level);
    all.into_iter()
        .map(|(n, edges)| Graph::from_edges(n, &edges).expect("canonical edges are simple"))
        .collect()
}

/// Every graph on exactly `n` vertices (connected or not, including the
/// edgeless one), one per isomorphism class. Exhaustive over edge subsets,
/// so only sensible for `n ≤ 6`.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 32, "all_graphs is exhaustive; n = {n} is too large");
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        seen.insert(canonical_form(&Graph::from_edges(n, &edges).unwrap()));
    }
    seen.into_iter().map(|edges| Graph::from_edges(n, &edges).unwrap()).collect()
}

/// A connected graph on `n ≥ 2` vertices with `m` edges: a random spanning
/// tree plus random extra edges, with shuffled vertex labels and edge order.
pub fn random_connected<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Graph {
    assert!(n >= 2 && m >= n - 1 && m <= n * (n - 1) / 2, "no connected graph with n = {n}, m = {m}");
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (perm[rng.gen_range(0..i)], perm[i])).collect();
    let mut missing: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == (u, v)) {
                missing.push((u, v));
            }
        }
    }
    missing.shuffle(rng);
    edges.extend(missing.into_iter().take(m - (n - 1)));
    edges.shuffle(rng);
    Graph::from_edges(n, &edges).unwrap()
}

/// A connected graph on `2..=max_n` vertices with a uniformly chosen
/// admissible edge count.
pub fn random_connected_up_to<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> Graph {
    let n = rng.gen_range(2..=max_n.max(2));
    let m = rng.gen_range(n - 1..=n * (n - 1) / 2);
    random_connected(rng, n, m)
}

/// `G(n, p)` with edges in lexicographic order.
pub fn random_gnp<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn counts_match_known_tables() {
        let by_n = connected_graphs(6, 15);
        let mut counts = [0usize; 7];
        for g in &by_n {
            assert!(g.is_connected());
            counts[g.n()] += 1;
        }
        assert_eq!(counts, [0, 0, 1, 2, 6, 21, 112]);

        let by_m = connected_graphs(8, 7);
        let mut counts = [0usize; 8];
        for g in &by_m {
            counts[g.m()] += 1;
        }
        assert_eq!(counts, [0, 1, 1, 3, 5, 12, 30, 79]);

        let all: Vec<usize> = (1..=5).map(|n| all_graphs(n).len()).collect();
        assert_eq!(all, [1, 2, 4, 11, 34]);
    }

    #[test]
    fn canonical_form_is_label_invariant() {
        let mut r = rng(7);
        for _ in 0..30 {
            let g = random_connected_up_to(&mut r, 7);
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut r);
            assert_eq!(canonical_form(&g), canonical_form(&g.relabel(&perm).unwrap()));
        }
        assert_ne!(canonical_form(&named::path(4)), canonical_form(&named::star(3)));
    }

    #[test]
    fn random_graphs_are_connected_and_seeded() {
        let mut a = rng(42);
        let mut b = rng(42);
        for _ in 0..20 {
            let g = random_connected_up_to(&mut a, 10);
            assert!(g.is_connected());
            assert_eq!(g, random_connected_up_to(&mut b, 10));
        }
        let g = random_connected(&mut a, 5, 10);
        assert!(g.is_complete());
        assert_eq!(random_gnp(&mut a, 6, 1.0).m(), 15);
    }
}
