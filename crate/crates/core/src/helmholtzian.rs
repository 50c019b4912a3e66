//! The Helmholtzian `H = BBᵀ + CᵀC`, built three ways, and the signed loop
//! graph `Λ(G)` whose adjacency matrix equals it.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::incidence::{build_b, build_c, Orientation};
use crate::matrix::IntMatrix;

/// How a Helmholtzian matrix was assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Entry rules on pairs of edges.
    Direct,
    /// `BBᵀ + CᵀC`.
    Factored,
    /// `A(Λ_R) + D`.
    Split,
    /// Block form of a join; similar to the direct build by a permutation.
    JoinBlock,
}

/// A square symmetric integer matrix indexed by edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelmholtzianMatrix {
    matrix: IntMatrix,
    provenance: Provenance,
}

impl HelmholtzianMatrix {
    /// Wraps `matrix` after checking that it is square and symmetric.
    pub fn new(matrix: IntMatrix, provenance: Provenance) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), got: matrix.cols() });
        }
        if let Some((row, col)) = matrix.asymmetry() {
            return Err(Error::NotSymmetric { row, col });
        }
        Ok(HelmholtzianMatrix { matrix, provenance })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// How two distinct edges relate at a shared endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// Head of one meets tail of the other (`e ↔ e′`).
    HeadToTail,
    /// Heads meet or tails meet (`e ±∼ e′`).
    SameEnd,
    /// Adjacent and in a common triangle.
    CoTriangular,
    /// No shared endpoint.
    Disjoint,
}

/// Classifies the pair `(e, f)` of distinct edges.
pub fn pair_kind(g: &Graph, o: &Orientation, e: usize, f: usize) -> PairKind {
    let (a, b) = o.arcs()[e];
    let (c, d) = o.arcs()[f];
    let shared = if a == c || a == d {
        a
    } else if b == c || b == d {
        b
    } else {
        return PairKind::Disjoint;
    };
    let x = if a == shared { b } else { a };
    let y = if c == shared { d } else { c };
    if g.has_edge(x, y) {
        return PairKind::CoTriangular;
    }
    // `shared` is the head of e iff b == shared.
    let e_head = b == shared;
    let f_head = d == shared;
    if e_head == f_head {
        PairKind::SameEnd
    } else {
        PairKind::HeadToTail
    }
}

/// Non-cotriangular adjacent pairs `(e, f, sign)` with `e < f`, grouped by
/// shared vertex; sign is `+1` for `±∼` and `-1` for `↔`.
fn signed_pairs(g: &Graph, o: &Orientation) -> Vec<(usize, usize, i64)> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push(e);
        incident[v].push(e);
    }
    let mut out = Vec::new();
    for v in 0..g.n() {
        let inc = &incident[v];
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                let (e, f) = if e < f { (e, f) } else { (f, e) };
                match pair_kind(g, o, e, f) {
                    PairKind::HeadToTail => out.push((e, f, -1)),
                    PairKind::SameEnd => out.push((e, f, 1)),
                    _ => {}
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn check_nonempty(g: &Graph, o: &Orientation) -> Result<()> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    if o.len() != g.m() {
        return Err(Error::BadOrientation(format!("{} arcs for {} edges", o.len(), g.m())));
    }
    Ok(())
}

/// Builds `H` from the entry rules: `Δ(e)+2` on the diagonal, `-1` for
/// `e ↔ e′`, `+1` for `e ±∼ e′`, zero for co-triangular or disjoint pairs.
pub fn build_h_direct(g: &Graph, o: &Orientation) -> Result<HelmholtzianMatrix> {
    check_nonempty(g, o)?;
    let m = g.m();
    let mut h = IntMatrix::zeros(m, m);
    for (e, d) in g.edge_triangle_degrees().into_iter().enumerate() {
        h[(e, e)] = d as i64 + 2;
    }
    for (e, f, s) in signed_pairs(g, o) {
        h[(e, f)] = s;
        h[(f, e)] = s;
    }
    Ok(HelmholtzianMatrix { matrix: h, provenance: Provenance::Direct })
}

/// Builds `H` as the exact product `BBᵀ + CᵀC`.
pub fn build_h_factored(g: &Graph, o: &Orientation) -> Result<HelmholtzianMatrix> {
    check_nonempty(g, o)?;
    let b = build_b(g, o)?;
    let c = build_c(g, o)?;
    let down = b.mul(&b.transpose())?;
    let up = c.transpose().mul(&c)?;
    Ok(HelmholtzianMatrix { matrix: down.add(&up)?, provenance: Provenance::Factored })
}

/// Builds `H` as `A(Λ_R) + D` from the signed loop graph.
pub fn build_h_split(g: &Graph, o: &Orientation) -> Result<HelmholtzianMatrix> {
    let lambda = build_signed_loop_graph(g, o)?;
    Ok(HelmholtzianMatrix { matrix: lambda.adjacency_matrix(), provenance: Provenance::Split })
}

/// `H`, or the empty `0 × 0` matrix for an edgeless graph.
pub fn helmholtzian_or_empty(g: &Graph, o: &Orientation) -> Result<HelmholtzianMatrix> {
    if g.m() == 0 {
        return Ok(HelmholtzianMatrix { matrix: IntMatrix::zeros(0, 0), provenance: Provenance::Direct });
    }
    build_h_direct(g, o)
}

/// The signed graph with loops `Λ(G)` on vertex set `E(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedLoopGraph {
    /// Loop count `Δ(e) + 2` per vertex.
    loops: Vec<usize>,
    positive: Vec<(usize, usize)>,
    negative: Vec<(usize, usize)>,
    /// Signed neighbor lists of the loop-free part `Λ_R`.
    adj: Vec<Vec<(usize, i64)>>,
}

/// Builds `Λ(G)`.
pub fn build_signed_loop_graph(g: &Graph, o: &Orientation) -> Result<SignedLoopGraph> {
    check_nonempty(g, o)?;
    let m = g.m();
    let loops = g.edge_triangle_degrees().into_iter().map(|d| d + 2).collect();
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    let mut adj = vec![Vec::new(); m];
    for (e, f, s) in signed_pairs(g, o) {
        if s > 0 {
            positive.push((e, f));
        } else {
            negative.push((e, f));
        }
        adj[e].push((f, s));
        adj[f].push((e, s));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Ok(SignedLoopGraph { loops, positive, negative, adj })
}

impl SignedLoopGraph {
    /// Number of vertices, i.e. edges of the underlying graph.
    pub fn order(&self) -> usize {
        self.loops.len()
    }

    pub fn loops(&self) -> &[usize] {
        &self.loops
    }

    pub fn positive_edges(&self) -> &[(usize, usize)] {
        &self.positive
    }

    pub fn negative_edges(&self) -> &[(usize, usize)] {
        &self.negative
    }

    /// Signed neighbors of `v` in `Λ_R`, sorted by vertex.
    pub fn neighbors(&self, v: usize) -> &[(usize, i64)] {
        &self.adj[v]
    }

    /// Sign of the `Λ_R` edge `{u, v}`, or 0.
    pub fn sign(&self, u: usize, v: usize) -> i64 {
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .map_or(0, |i| self.adj[u][i].1)
    }

    /// `A(Λ_R)`: signed adjacency without loops.
    pub fn reduced_adjacency(&self) -> IntMatrix {
        let m = self.order();
        let mut a = IntMatrix::zeros(m, m);
        for (v, list) in self.adj.iter().enumerate() {
            for &(w, s) in list {
                a[(v, w)] = s;
            }
        }
        a
    }

    /// The diagonal loop-count matrix `D`.
    pub fn loop_matrix(&self) -> IntMatrix {
        let m = self.order();
        let mut d = IntMatrix::zeros(m, m);
        for (v, &l) in self.loops.iter().enumerate() {
            d[(v, v)] = l as i64;
        }
        d
    }

    /// `A(Λ) = A(Λ_R) + D`, with each loop counted once on the diagonal.
    pub fn adjacency_matrix(&self) -> IntMatrix {
        let mut a = self.reduced_adjacency();
        for (v, &l) in self.loops.iter().enumerate() {
            a[(v, v)] = l as i64;
        }
        a
    }

    /// `Λ′`: the same graph with `k` loops removed from every vertex.
    pub fn remove_loops(&self, k: usize) -> SignedLoopGraph {
        let mut out = self.clone();
        for l in &mut out.loops {
            *l = l.saturating_sub(k);
        }
        out
    }
}

/// `xᵀHx` next to the combinatorial expansion
/// `Σ (3Δ(e)+4−d(e⁺)−d(e⁻)) x_e² + Σ_↔ (x_e−x_f)² + Σ_± (x_e+x_f)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub matrix_value: f64,
    pub combinatorial_value: f64,
    pub relative_error: f64,
}

impl QuadraticForm {
    pub fn agrees(&self, tol: f64) -> bool {
        self.relative_error <= tol
    }
}

/// Evaluates the quadratic form of `h` at `x` both ways. `h` must be the
/// Helmholtzian of `(g, o)`.
pub fn quadratic_form(g: &Graph, o: &Orientation, h: &HelmholtzianMatrix, x: &[f64]) -> Result<QuadraticForm> {
    let m = h.dim();
    if x.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: x.len() });
    }
    if g.m() != m {
        return Err(Error::DimensionMismatch { expected: g.m(), got: m });
    }
    let mut matrix_value = 0.0;
    let mut scale = 0.0;
    for i in 0..m {
        for (j, &hij) in h.matrix().row(i).iter().enumerate() {
            if hij != 0 {
                let t = hij as f64 * x[i] * x[j];
                matrix_value += t;
                scale += t.abs();
            }
        }
    }
    let deltas = g.edge_triangle_degrees();
    let mut comb = 0.0;
    for e in 0..m {
        let (t, hd) = o.arcs()[e];
        let coeff = 3 * deltas[e] as i64 + 4 - g.degree(t) as i64 - g.degree(hd) as i64;
        comb += coeff as f64 * x[e] * x[e];
    }
    for (e, f, s) in signed_pairs(g, o) {
        let d = x[e] + s as f64 * x[f];
        comb += d * d;
    }
    let relative_error = (matrix_value - comb).abs() / scale.max(1.0);
    Ok(QuadraticForm { matrix_value, combinatorial_value: comb, relative_error })
}

/// One sandwich `lower ≤ middle ≤ upper`; `lower` is absent when it is
/// undefined (no triangles).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    pub lower: Option<f64>,
    pub middle: f64,
    pub upper: f64,
}

impl Sandwich {
    /// Whether both inequalities hold up to `tol` relative slack.
    pub fn holds(&self, tol: f64) -> bool {
        let slack = tol * self.upper.abs().max(self.middle.abs()).max(1.0);
        let low_ok = self.lower.map_or(true, |l| l <= self.middle + slack);
        low_ok && self.middle <= self.upper + slack
    }
}

/// The triangle-side sandwich for `xᵀCᵀCx` and the vertex-side one for
/// `xᵀBBᵀx`.
pub fn rayleigh_inequalities(g: &Graph, o: &Orientation, x: &[f64]) -> Result<(Sandwich, Sandwich)> {
    if x.len() != g.m() {
        return Err(Error::DimensionMismatch { expected: g.m(), got: x.len() });
    }
    let c = build_c(g, o)?;
    let mut total = 0.0;
    let mut middle = 0.0;
    for t in 0..c.rows() {
        let y: f64 = c.row(t).iter().zip(x).map(|(&s, &v)| s as f64 * v).sum();
        total += y;
        middle += y * y;
    }
    let deltas = g.edge_triangle_degrees();
    let upper = deltas.iter().zip(x).map(|(&d, &v)| 3.0 * d as f64 * v * v).sum();
    let tri = Sandwich {
        lower: (c.rows() > 0).then(|| total * total / c.rows() as f64),
        middle,
        upper,
    };

    let mut by_vertex = vec![0.0; g.n()];
    for (e, &(t, h)) in o.arcs().iter().enumerate() {
        by_vertex[t] -= x[e];
        by_vertex[h] += x[e];
    }
    let total: f64 = by_vertex.iter().sum();
    let middle = by_vertex.iter().map(|y| y * y).sum();
    let upper = o
        .arcs()
        .iter()
        .zip(x)
        .map(|(&(t, h), &v)| (g.degree(t) + g.degree(h)) as f64 * v * v)
        .sum();
    let vert = Sandwich {
        lower: (g.n() > 0).then(|| total * total / g.n() as f64),
        middle,
        upper,
    };
    Ok((tri, vert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::incidence::canonical_orientation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn worked() -> (Graph, Orientation) {
        let g = worked_example();
        let o = Orientation::from_arcs(&g, WORKED_EXAMPLE_ARCS.to_vec()).unwrap();
        (g, o)
    }

    #[test]
    fn worked_example_matrix() {
        let (g, o) = worked();
        let expected = IntMatrix::from_rows(&WORKED_EXAMPLE_H);
        assert_eq!(build_h_direct(&g, &o).unwrap().matrix(), &expected);
        assert_eq!(build_h_factored(&g, &o).unwrap().matrix(), &expected);
        assert_eq!(build_h_split(&g, &o).unwrap().matrix(), &expected);
    }

    #[test]
    fn small_cases() {
        let k3 = complete(3);
        let h = build_h_direct(&k3, &canonical_orientation(&k3)).unwrap();
        assert_eq!(h.matrix(), &IntMatrix::identity(3).shift_diagonal(2));
        let p3 = path(3);
        let h = build_h_direct(&p3, &canonical_orientation(&p3)).unwrap();
        assert_eq!(h.matrix().to_rows(), vec![vec![2, -1], vec![-1, 2]]);
        let s = star(3);
        let o = canonical_orientation(&s);
        assert_eq!(build_h_direct(&s, &o).unwrap().matrix(), build_h_factored(&s, &o).unwrap().matrix());
        assert_eq!(build_h_direct(&Graph::empty(2), &Orientation::from_arcs(&Graph::empty(2), vec![]).unwrap()), Err(Error::EmptyEdgeSet));
    }

    #[test]
    fn signed_loop_graph_of_worked_example() {
        let (g, o) = worked();
        let l = build_signed_loop_graph(&g, &o).unwrap();
        assert_eq!(l.loops(), &[2, 2, 2, 2, 2, 2, 3, 3, 3]);
        assert_eq!(l.negative_edges(), &[(0, 1), (0, 2)]);
        assert_eq!(l.positive_edges().len(), 15);
        assert_eq!(l.sign(1, 0), -1);
        assert_eq!(l.sign(7, 0), 0);
        assert_eq!(l.reduced_adjacency().add(&l.loop_matrix()).unwrap(), l.adjacency_matrix());

        let k3 = complete(3);
        let l = build_signed_loop_graph(&k3, &canonical_orientation(&k3)).unwrap();
        assert_eq!(l.loops(), &[3, 3, 3]);
        assert!(l.positive_edges().is_empty() && l.negative_edges().is_empty());
        let p3 = path(3);
        let l = build_signed_loop_graph(&p3, &canonical_orientation(&p3)).unwrap();
        assert_eq!((l.loops(), l.negative_edges()), (&[2usize, 2][..], &[(0, 1)][..]));
    }

    #[test]
    fn quadratic_form_identity() {
        let (g, o) = worked();
        let h = build_h_direct(&g, &o).unwrap();
        let q = quadratic_form(&g, &o, &h, &[0.0; 9]).unwrap();
        assert_eq!(q.matrix_value, 0.0);
        let mut x = [0.0; 9];
        x[7] = 1.0;
        let q = quadratic_form(&g, &o, &h, &x).unwrap();
        assert_eq!((q.matrix_value, q.combinatorial_value), (3.0, 3.0));
        assert!(quadratic_form(&g, &o, &h, &[1.0; 3]).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let k4 = complete(4);
        let o4 = canonical_orientation(&k4);
        let h4 = build_h_direct(&k4, &o4).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..6).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let q = quadratic_form(&k4, &o4, &h4, &x).unwrap();
            assert!(q.agrees(1e-12), "{q:?}");
            let (t, v) = rayleigh_inequalities(&k4, &o4, &x).unwrap();
            assert!(t.holds(1e-12) && v.holds(1e-12));
        }
    }

    #[test]
    fn random_orientations_agree_across_builds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in [complete(5), complete_multipartite(&[2, 2, 2]), worked_example(), cycle(5)] {
            for _ in 0..5 {
                let o = Orientation::random(&g, &mut rng);
                let d = build_h_direct(&g, &o).unwrap();
                assert_eq!(d.matrix(), build_h_factored(&g, &o).unwrap().matrix());
                assert_eq!(d.matrix(), build_h_split(&g, &o).unwrap().matrix());
            }
        }
    }
}
