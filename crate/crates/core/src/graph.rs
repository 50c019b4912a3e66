//! Simple undirected graphs with an ordered edge list.
//!
//! The edge order is part of a graph's identity: every edge-indexed matrix
//! (incidence, Helmholtzian, signed loop graph) uses it for row/column order.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Edges as `(min, max)` pairs, in ingestion order.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists.
    adj: Vec<Vec<usize>>,
    index: HashMap<(usize, usize), usize>,
}

/// A 3-clique `(i, j, k)` with `i < j < k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle(pub [usize; 3]);

impl Triangle {
    pub fn vertices(&self) -> [usize; 3] {
        self.0
    }

    /// The three undirected edges as `(min, max)` pairs: `ij`, `ik`, `jk`.
    pub fn edges(&self) -> [(usize, usize); 3] {
        let [i, j, k] = self.0;
        [(i, j), (i, k), (j, k)]
    }
}

/// Connected components: `count` and a per-vertex component id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub count: usize,
    pub labels: Vec<usize>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
            index: HashMap::new(),
        }
    }

    /// Builds a graph from an edge list, keeping the given order.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Appends an edge at the end of the edge list and returns its index.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<usize> {
        for w in [u, v] {
            if w >= self.n {
                return Err(Error::VertexOutOfRange { vertex: w, n: self.n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let key = norm(u, v);
        if self.index.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.0, key.1));
        }
        let e = self.edges.len();
        self.edges.push(key);
        self.index.insert(key, e);
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a];
            let pos = list.binary_search(&b).unwrap_err();
            list.insert(pos, b);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<(usize, usize)> {
        self.edges
            .get(e)
            .copied()
            .ok_or(Error::EdgeOutOfRange { index: e, m: self.m() })
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index.get(&norm(u, v)).copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.index.contains_key(&norm(u, v))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// All 3-cliques, sorted lexicographically.
    pub fn enumerate_triangles(&self) -> Vec<Triangle> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for &v in self.adj[u].iter().filter(|&&v| v > u) {
                for w in sorted_intersection(&self.adj[u], &self.adj[v]) {
                    if w > v {
                        out.push(Triangle([u, v, w]));
                    }
                }
            }
        }
        out
    }

    pub fn triangle_count(&self) -> usize {
        self.enumerate_triangles().len()
    }

    /// Number of triangles containing edge `e`, i.e. `|N(u) ∩ N(v)|`.
    pub fn triangle_degree_edge(&self, e: usize) -> Result<usize> {
        let (u, v) = self.edge(e)?;
        Ok(sorted_intersection(&self.adj[u], &self.adj[v]).count())
    }

    /// Triangle degree of every edge, in edge order.
    pub fn edge_triangle_degrees(&self) -> Vec<usize> {
        self.edges
            .iter()
            .map(|&(u, v)| sorted_intersection(&self.adj[u], &self.adj[v]).count())
            .collect()
    }

    /// Number of triangles containing vertex `u`.
    pub fn triangle_degree_vertex(&self, u: usize) -> Result<usize> {
        self.check_vertex(u)?;
        let nb = &self.adj[u];
        let mut count = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if self.has_edge(a, b) {
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// `|N(e)| = d(u) + d(v) - 2` for `e = {u, v}`.
    pub fn edge_neighborhood_size(&self, e: usize) -> Result<usize> {
        let (u, v) = self.edge(e)?;
        Ok(self.degree(u) + self.degree(v) - 2)
    }

    pub fn components(&self) -> Components {
        let mut labels = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if labels[s] != usize::MAX {
                continue;
            }
            labels[s] = count;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if labels[y] == usize::MAX {
                        labels[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        Components { count, labels }
    }

    pub fn is_connected(&self) -> bool {
        self.components().count <= 1
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Largest shortest-path distance; `None` when the graph is disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.distances_from(s) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    pub fn is_complete(&self) -> bool {
        self.m() == self.n * self.n.saturating_sub(1) / 2
    }

    /// `Some(r)` if every vertex has degree `r`.
    pub fn regularity(&self) -> Option<usize> {
        let r = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|a| a.len() == r).then_some(r)
    }

    /// Whether the graph is `K_t ∨ sK_1` with `t ≥ 1` and `s ≥ 2`.
    pub fn is_complete_split(&self) -> bool {
        let n = self.n;
        if n < 3 {
            return false;
        }
        let dominating: Vec<usize> = (0..n).filter(|&v| self.degree(v) == n - 1).collect();
        let rest: Vec<usize> = (0..n).filter(|&v| self.degree(v) != n - 1).collect();
        if dominating.is_empty() || rest.len() < 2 {
            return false;
        }
        rest.iter()
            .all(|&v| self.adj[v].iter().all(|w| dominating.binary_search(w).is_ok()))
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v).expect("complement edges are simple");
                }
            }
        }
        g
    }

    /// `A(G)` as an `n × n` 0/1 matrix.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let mut a = IntMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1;
            a[(v, u)] = 1;
        }
        a
    }

    /// Combinatorial Laplacian `D - A`.
    pub fn laplacian_matrix(&self) -> IntMatrix {
        let mut l = IntMatrix::zeros(self.n, self.n);
        for v in 0..self.n {
            l[(v, v)] = self.degree(v) as i64;
        }
        for &(u, v) in &self.edges {
            l[(u, v)] = -1;
            l[(v, u)] = -1;
        }
        l
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut g = Graph::empty(self.n + other.n);
        for &(u, v) in self.edges.iter() {
            g.add_edge(u, v).unwrap();
        }
        for &(u, v) in other.edges.iter() {
            g.add_edge(u + off, v + off).unwrap();
        }
        g
    }

    /// Join `self ∨ other`: disjoint union followed by every cross pair
    /// `(u, v)` in lexicographic order.
    pub fn join(&self, other: &Graph) -> Graph {
        let mut g = self.disjoint_union(other);
        for u in 0..self.n {
            for v in 0..other.n {
                g.add_edge(u, self.n + v).unwrap();
            }
        }
        g
    }

    /// Relabels vertices so that vertex `v` becomes `perm[v]`; edge order is kept.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: perm.len() });
        }
        let mut g = Graph::empty(self.n);
        for &(u, v) in &self.edges {
            g.add_edge(perm[u], perm[v])?;
        }
        Ok(g)
    }
}

/// Iterator over the common elements of two sorted slices.
fn sorted_intersection<'a>(a: &'a [usize], b: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
    let (mut i, mut j) = (0, 0);
    std::iter::from_fn(move || {
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let x = a[i];
                    i += 1;
                    j += 1;
                    return Some(x);
                }
            }
        }
        None
    })
}

/// Named small graphs used throughout tests and the CLI.
pub mod named {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).unwrap();
        }
        g
    }

    /// `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Graph {
        let mut g = Graph::empty(k + 1);
        for v in 1..=k {
            g.add_edge(0, v).unwrap();
        }
        g
    }

    /// Complete multipartite graph with parts laid out consecutively.
    pub fn complete_multipartite(parts: &[usize]) -> Graph {
        let n: usize = parts.iter().sum();
        let mut part_of = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat(i).take(p));
        }
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// The 8-vertex, 9-edge graph of the worked example, with 0-based
    /// labels (`v1 -> 0`, ..., `v8 -> 7`) and the edge order `e1..e9`.
    pub fn worked_example() -> Graph {
        Graph::from_edges(8, &WORKED_EXAMPLE_ARCS).unwrap()
    }

    /// Arc directions `(tail, head)` of the worked example, `e1..e9`.
    pub const WORKED_EXAMPLE_ARCS: [(usize, usize); 9] = [
        (1, 0),
        (0, 2),
        (3, 1),
        (3, 2),
        (3, 4),
        (3, 5),
        (3, 6),
        (6, 7),
        (3, 7),
    ];

    /// The Helmholtzian of [`worked_example`] under [`WORKED_EXAMPLE_ARCS`].
    pub const WORKED_EXAMPLE_H: [[i64; 9]; 9] = [
        [2, -1, -1, 0, 0, 0, 0, 0, 0],
        [-1, 2, 0, 1, 0, 0, 0, 0, 0],
        [-1, 0, 2, 1, 1, 1, 1, 0, 1],
        [0, 1, 1, 2, 1, 1, 1, 0, 1],
        [0, 0, 1, 1, 2, 1, 1, 0, 1],
        [0, 0, 1, 1, 1, 2, 1, 0, 1],
        [0, 0, 1, 1, 1, 1, 3, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 3, 0],
        [0, 0, 1, 1, 1, 1, 0, 0, 3],
    ];

    /// Its characteristic polynomial, `[1, c₁, …, c₉]`.
    pub const WORKED_EXAMPLE_CHARPOLY: [i64; 10] = [1, -21, 178, -802, 2105, -3293, 2996, -1452, 288, 0];
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    fn brute_triangles(g: &Graph) -> Vec<Triangle> {
        let n = g.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if g.has_edge(i, j) && g.has_edge(i, k) && g.has_edge(j, k) {
                        out.push(Triangle([i, j, k]));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(Error::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
    }

    #[test]
    fn triangles_of_small_graphs() {
        assert_eq!(complete(3).enumerate_triangles(), vec![Triangle([0, 1, 2])]);
        assert_eq!(complete(4).enumerate_triangles().len(), 4);
        assert_eq!(worked_example().enumerate_triangles(), vec![Triangle([3, 6, 7])]);
        assert!(path(6).enumerate_triangles().is_empty());
    }

    #[test]
    fn triangle_degrees() {
        let k5 = complete(5);
        for e in 0..k5.m() {
            assert_eq!(k5.triangle_degree_edge(e).unwrap(), 3);
        }
        let g = worked_example();
        assert_eq!(g.triangle_degree_edge(7).unwrap(), 1);
        assert_eq!(g.triangle_degree_vertex(3).unwrap(), 1);
        assert_eq!(complete(4).triangle_degree_vertex(0).unwrap(), 3);
        assert_eq!(star(4).triangle_degree_vertex(2).unwrap(), 0);
        assert!(path(4).edge_triangle_degrees().iter().all(|&d| d == 0));
        assert!(matches!(g.triangle_degree_edge(9), Err(Error::EdgeOutOfRange { .. })));
        assert!(matches!(g.triangle_degree_vertex(8), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn edge_neighborhoods() {
        assert_eq!(path(2).edge_neighborhood_size(0).unwrap(), 0);
        assert_eq!(worked_example().edge_neighborhood_size(4).unwrap(), 5);
        assert_eq!(complete(4).edge_neighborhood_size(0).unwrap(), 4);
    }

    #[test]
    fn components_and_diameter() {
        let g = complete(3).disjoint_union(&path(2));
        assert_eq!(g.components().count, 2);
        assert_eq!(g.diameter(), None);
        assert_eq!(worked_example().components().count, 1);
        assert_eq!(Graph::empty(5).components().count, 5);
        assert_eq!(complete(6).diameter(), Some(1));
        assert_eq!(path(4).diameter(), Some(3));
        let w = worked_example();
        assert_eq!(w.diameter(), Some(3));
        assert_eq!(w.distances_from(0)[4], Some(3));
    }

    #[test]
    fn complete_split_recognition() {
        assert!(complete(2).join(&Graph::empty(3)).is_complete_split());
        assert!(star(3).is_complete_split());
        assert!(!complete(4).is_complete_split());
        assert!(!cycle(4).is_complete_split());
        assert!(!path(4).is_complete_split());
    }

    #[test]
    fn join_layout() {
        let g = Graph::empty(2).join(&Graph::empty(2));
        assert_eq!(g.edges(), &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(g.regularity(), Some(2));
    }

    #[test]
    fn triangle_sums_match_count() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=12);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.45) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let tri = g.enumerate_triangles();
            assert_eq!(tri, brute_triangles(&g));
            let t = tri.len();
            assert_eq!(g.edge_triangle_degrees().iter().sum::<usize>(), 3 * t);
            let vs: usize = (0..n).map(|u| g.triangle_degree_vertex(u).unwrap()).sum();
            assert_eq!(vs, 3 * t);
            for e in 0..g.m() {
                let ne = g.edge_neighborhood_size(e).unwrap();
                assert!(ne >= 2 * g.triangle_degree_edge(e).unwrap());
            }
        }
    }
}
