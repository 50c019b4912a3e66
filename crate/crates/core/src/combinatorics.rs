//! Characteristic-polynomial coefficients from graph statistics: closed forms
//! for `c₁, c₂, c₃` and an enumeration of basic subgraphs of `Λ(G)` that
//! yields every `c_k`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::helmholtzian::{build_signed_loop_graph, SignedLoopGraph};
use crate::incidence::Orientation;
use crate::poly::{charpoly_exact, CharPoly};

/// Default number of partial states the enumeration may visit.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

/// `c₁, c₂, c₃` with the intermediate sums that make them up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedFormCoeffs {
    pub c1: i128,
    pub c2: i128,
    pub c3: i128,
    /// `Σ_{e<f} (Δ(e)+2)(Δ(f)+2)`.
    pub pair_sum: i128,
    /// `Σ_v C(d(v), 2)`, the edge count of the line graph.
    pub line_graph_edges: i128,
    /// `3t`.
    pub three_t: i128,
    /// `−Σ_{e<f<g} Π (Δ+2)`.
    pub c31: i128,
    /// `Σ_e (Σ_v C(d(v),2) − 3t − |N(e)| + 2Δ(e)) (Δ(e)+2)`.
    pub c32: i128,
    /// `−2 Σ_u (C(d(u),3) − Δ(u)(d(u)−2) + P(u) − K(u))`.
    pub c33: i128,
    /// `−2 Σ_u (C(d(u),3) − Δ(u)(d(u)−2))`, which drops the `P(u) − K(u)`
    /// correction and is only right when no neighborhood contains a path
    /// on three vertices.
    pub c33_uncorrected: i128,
    /// `Σ_u P(u)`, where `P(u) = Σ_{x∈N(u)} C(d_{G[N(u)]}(x), 2)` counts
    /// paths on three vertices inside `G[N(u)]`.
    pub neighborhood_paths: i128,
    /// `Σ_u K(u)`, where `K(u)` counts triangles inside `G[N(u)]`.
    pub neighborhood_triangles: i128,
}

fn choose(n: i128, k: i128) -> i128 {
    if n < k || k < 0 {
        return 0;
    }
    let mut r = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Closed-form `c₁, c₂, c₃` of the Helmholtzian characteristic polynomial.
pub fn coeffs_closed_form(g: &Graph) -> Result<ClosedFormCoeffs> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let deltas: Vec<i128> = g.edge_triangle_degrees().into_iter().map(|d| d as i128).collect();
    let w: Vec<i128> = deltas.iter().map(|d| d + 2).collect();
    // Elementary symmetric polynomials e1, e2, e3 of the weights.
    let (mut e1, mut e2, mut e3) = (0i128, 0i128, 0i128);
    for &x in &w {
        e3 += e2 * x;
        e2 += e1 * x;
        e1 += x;
    }
    let t = g.triangle_count() as i128;
    let line_graph_edges: i128 = (0..g.n()).map(|v| choose(g.degree(v) as i128, 2)).sum();
    let three_t = 3 * t;

    let c1 = -e1;
    let c2 = e2 - line_graph_edges + three_t;
    let c31 = -e3;
    let mut c32 = 0;
    for e in 0..g.m() {
        let ne = g.edge_neighborhood_size(e)? as i128;
        c32 += (line_graph_edges - three_t - ne + 2 * deltas[e]) * w[e];
    }
    let mut uncorrected = 0;
    let mut paths = 0;
    let mut tris = 0;
    for u in 0..g.n() {
        let d = g.degree(u) as i128;
        let du = g.triangle_degree_vertex(u)? as i128;
        uncorrected += choose(d, 3) - du * (d - 2);
        let nb = g.neighbors(u);
        for &x in nb {
            // Neighbors of x inside N(u), sorted.
            let inner: Vec<usize> = nb.iter().copied().filter(|&y| g.has_edge(x, y)).collect();
            paths += choose(inner.len() as i128, 2);
            for (a, &y) in inner.iter().enumerate().filter(|&(_, &y)| y > x) {
                tris += inner[a + 1..].iter().filter(|&&z| g.has_edge(y, z)).count() as i128;
            }
        }
    }
    let c33_uncorrected = -2 * uncorrected;
    let c33 = -2 * (uncorrected + paths - tris);
    Ok(ClosedFormCoeffs {
        c1,
        c2,
        c3: c31 + c32 + c33,
        pair_sum: e2,
        line_graph_edges,
        three_t,
        c31,
        c32,
        c33,
        c33_uncorrected,
        neighborhood_paths: paths,
        neighborhood_triangles: tris,
    })
}

/// A vertex-disjoint union of isolated vertices, isolated edges and cycles
/// (length ≥ 3) in `Λ(G)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BasicSubgraph {
    pub isolated: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Each cycle as its vertex sequence, smallest vertex first.
    pub cycles: Vec<Vec<usize>>,
    /// Product of the `Λ_R` edge signs along each cycle.
    pub cycle_signs: Vec<i64>,
}

impl BasicSubgraph {
    /// Number of vertices `k`.
    pub fn order(&self) -> usize {
        self.isolated.len() + 2 * self.edges.len() + self.cycles.iter().map(Vec::len).sum::<usize>()
    }

    /// `n(B)`.
    pub fn isolated_count(&self) -> usize {
        self.isolated.len()
    }

    /// `m(B)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `c(B)`.
    pub fn cycle_count(&self) -> usize {
        self.cycles.len()
    }

    /// `p(B) = m(B) + c(B)`.
    pub fn nontrivial_count(&self) -> usize {
        self.edges.len() + self.cycles.len()
    }

    /// `c°₋(B)`: odd cycles with negative sign.
    pub fn odd_negative(&self) -> usize {
        self.cycles.iter().zip(&self.cycle_signs).filter(|(c, &s)| c.len() % 2 == 1 && s < 0).count()
    }

    /// `cᵉ₊(B)`: even cycles with positive sign.
    pub fn even_positive(&self) -> usize {
        self.cycles.iter().zip(&self.cycle_signs).filter(|(c, &s)| c.len() % 2 == 0 && s > 0).count()
    }

    /// `(−1)^{m(B) + c°₋(B) + cᵉ₊(B)} 2^{c(B)} Π_{v isolated} w(v)`.
    pub fn weight(&self, loops: &[usize]) -> BigInt {
        let mut w = BigInt::one();
        for &v in &self.isolated {
            w *= loops[v];
        }
        w <<= self.cycle_count();
        if (self.edge_count() + self.odd_negative() + self.even_positive()) % 2 == 1 {
            w = -w;
        }
        w
    }
}

/// Depth-first enumeration of basic subgraphs. Vertices are decided in
/// increasing order; a cycle is started only at its smallest vertex and is
/// recorded once by requiring its second vertex to be smaller than its last.
struct Enumerator<'a, F: FnMut(&BasicSubgraph)> {
    lambda: &'a SignedLoopGraph,
    used: Vec<bool>,
    current: BasicSubgraph,
    /// Only subgraphs of this order are reported, when set.
    target: Option<usize>,
    states: u64,
    budget: u64,
    visit: F,
}

impl<F: FnMut(&BasicSubgraph)> Enumerator<'_, F> {
    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn run(&mut self, from: usize, chosen: usize) -> Result<()> {
        self.tick()?;
        let m = self.lambda.order();
        if let Some(k) = self.target {
            if chosen > k {
                return Ok(());
            }
            let free = (from..m).filter(|&v| !self.used[v]).count();
            if chosen + free < k {
                return Ok(());
            }
        }
        let Some(v) = (from..m).find(|&v| !self.used[v]) else {
            if self.target.map_or(true, |k| k == chosen) {
                (self.visit)(&self.current);
            }
            return Ok(());
        };
        // v left out of B.
        self.used[v] = true;
        self.run(v + 1, chosen)?;
        // v isolated.
        self.current.isolated.push(v);
        self.run(v + 1, chosen + 1)?;
        self.current.isolated.pop();
        // v matched with a later free neighbor.
        let nbrs: Vec<(usize, i64)> = self.lambda.neighbors(v).to_vec();
        for &(u, _) in &nbrs {
            if u > v && !self.used[u] {
                self.used[u] = true;
                self.current.edges.push((v, u));
                self.run(v + 1, chosen + 2)?;
                self.current.edges.pop();
                self.used[u] = false;
            }
        }
        // v as the smallest vertex of a cycle.
        let mut path = vec![v];
        self.extend_cycle(&mut path, 1, chosen)?;
        self.used[v] = false;
        Ok(())
    }

    fn extend_cycle(&mut self, path: &mut Vec<usize>, sign: i64, chosen: usize) -> Result<()> {
        self.tick()?;
        let start = path[0];
        let last = *path.last().unwrap();
        if let Some(k) = self.target {
            if chosen + path.len() > k {
                return Ok(());
            }
        }
        if path.len() >= 3 && path[1] < last {
            let closing = self.lambda.sign(last, start);
            if closing != 0 {
                self.current.cycles.push(path.clone());
                self.current.cycle_signs.push(sign * closing);
                self.run(start + 1, chosen + path.len())?;
                self.current.cycles.pop();
                self.current.cycle_signs.pop();
            }
        }
        let nbrs: Vec<(usize, i64)> = self.lambda.neighbors(last).to_vec();
        for (u, s) in nbrs {
            if u > start && !self.used[u] {
                self.used[u] = true;
                path.push(u);
                self.extend_cycle(path, sign * s, chosen)?;
                path.pop();
                self.used[u] = false;
            }
        }
        Ok(())
    }
}

/// Calls `visit` on every basic subgraph of `lambda` (of order `k`, if
/// given). Fails once more than `budget` partial states have been visited.
pub fn for_each_basic_subgraph<F: FnMut(&BasicSubgraph)>(
    lambda: &SignedLoopGraph,
    k: Option<usize>,
    budget: u64,
    visit: F,
) -> Result<u64> {
    let mut en = Enumerator {
        lambda,
        used: vec![false; lambda.order()],
        current: BasicSubgraph::default(),
        target: k,
        states: 0,
        budget,
        visit,
    };
    en.run(0, 0)?;
    Ok(en.states)
}

/// `c_k = (−1)^k Σ_{B ∈ 𝔅_k} ϖ(B)` by exhaustive enumeration.
pub fn coeff_ck_oracle(g: &Graph, o: &Orientation, k: usize, budget: u64) -> Result<BigInt> {
    if k > g.m() {
        return Err(Error::EdgeOutOfRange { index: k, m: g.m() });
    }
    if k == 0 {
        return Ok(BigInt::one());
    }
    let lambda = build_signed_loop_graph(g, o)?;
    let mut sum = BigInt::zero();
    for_each_basic_subgraph(&lambda, Some(k), budget, |b| sum += b.weight(lambda.loops()))?;
    Ok(if k % 2 == 1 { -sum } else { sum })
}

/// All of `c₀ … c_m` from a single enumeration.
pub fn all_coeffs_oracle(g: &Graph, o: &Orientation, budget: u64) -> Result<CharPoly> {
    let lambda = build_signed_loop_graph(g, o)?;
    let mut sums = vec![BigInt::zero(); g.m() + 1];
    for_each_basic_subgraph(&lambda, None, budget, |b| sums[b.order()] += b.weight(lambda.loops()))?;
    for (k, s) in sums.iter_mut().enumerate() {
        if k % 2 == 1 {
            *s = -std::mem::take(s);
        }
    }
    Ok(CharPoly::from_coeffs(sums).expect("the empty subgraph has weight 1"))
}

/// The characteristic polynomials of `A(Λ)` and of `A(Λ′)`, where `Λ′`
/// drops two loops at every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopShift {
    pub full: CharPoly,
    pub reduced: CharPoly,
    /// `φ_Λ(λ) = φ_{Λ′}(λ − 2)`.
    pub holds: bool,
}

pub fn loop_shift_check(g: &Graph, o: &Orientation) -> Result<LoopShift> {
    let lambda = build_signed_loop_graph(g, o)?;
    let full = charpoly_exact(&lambda.adjacency_matrix());
    let reduced = charpoly_exact(&lambda.remove_loops(2).adjacency_matrix());
    let holds = full.shift(2) == reduced;
    Ok(LoopShift { full, reduced, holds })
}
