//! The invariant suite run by the `verify` command: every structural,
//! spectral and combinatorial property the crate relies on, checked against
//! a single graph.

use nalgebra::SymmetricEigen;
use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{all_coeffs_oracle, coeffs_closed_form, loop_shift_check, DEFAULT_ORACLE_BUDGET};
use crate::corpus;
use crate::error::{Error, Result};
use crate::families::{
    closed_form_spectrum, gen_family, join_block_matrix, join_regular_spectrum, threshold_spectrum_iterative,
    FamilySpec,
};
use crate::graph::Graph;
use crate::helmholtzian::{build_h_direct, build_h_factored, quadratic_form, rayleigh_inequalities, HelmholtzianMatrix};
use crate::incidence::{build_b, build_c, canonical_orientation, Orientation};
use crate::io::{emit_edgelist, encode_graph6, parse_edgelist, parse_graph6};
use crate::poly::{charpoly_exact, CharPoly};
use crate::spectral::{
    distinct_count_and_diameter_check, eigen_decomposition, h_integral_test, krylov_rank, least_eigenvalue_bounds,
    null_vector_residuals, nullity_formula, nullity_rank, roots_bracketed, spectral_projectors, Spectrum,
    DEFAULT_CLUSTER_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// The outcome of one invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    /// Measured deviation, for floating checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    /// Tolerance the residual was held to; absent for exact checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Check {
    fn exact(module: &'static str, name: &'static str, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            module,
            name,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            residual: None,
            tolerance: None,
        }
    }

    fn float(module: &'static str, name: &'static str, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Check {
            module,
            name,
            status: if residual <= tolerance { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            residual: Some(residual),
            tolerance: Some(tolerance),
        }
    }

    fn skipped(module: &'static str, name: &'static str, why: impl Into<String>) -> Self {
        Check { module, name, status: Status::Skipped, detail: why.into(), residual: None, tolerance: None }
    }

    fn error(module: &'static str, name: &'static str, err: &Error) -> Self {
        Check::exact(module, name, false, err.to_string())
    }
}

/// Knobs for the suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub cluster_tol: f64,
    pub oracle_budget: u64,
    pub seed: u64,
    /// Random vectors per quadratic-form check.
    pub random_vectors: usize,
    /// Random orientations compared against the given one.
    pub orientation_samples: usize,
    /// Largest edge count for the basic-subgraph oracle.
    pub oracle_max_edges: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cluster_tol: DEFAULT_CLUSTER_TOL,
            oracle_budget: DEFAULT_ORACLE_BUDGET,
            seed: 42,
            random_vectors: 20,
            orientation_samples: 20,
            oracle_max_edges: 10,
        }
    }
}

/// True when no check failed.
pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.status != Status::Fail)
}

/// Largest `m` for which the exact Krylov rank check runs.
const KRYLOV_MAX_EDGES: usize = 60;

/// Runs every graph-level invariant on `(g, o)`.
pub fn verify_graph(g: &Graph, o: &Orientation, opts: &VerifyOptions) -> Vec<Check> {
    let mut out = Vec::new();
    graph_checks(g, &mut out);
    io_checks(g, o, &mut out);
    if g.m() == 0 {
        out.push(Check::skipped("helmholtzian", "all", "graph has no edges; H is the empty 0x0 matrix"));
        return out;
    }
    let mut rng = corpus::rng(opts.seed);
    if let Err(e) = matrix_checks(g, o, opts, &mut rng, &mut out) {
        out.push(Check::error("helmholtzian", "construction", &e));
    }
    out
}

fn graph_checks(g: &Graph, out: &mut Vec<Check>) {
    const M: &str = "graph_core";
    let tris = g.enumerate_triangles();
    let t = tris.len();
    let deltas = g.edge_triangle_degrees();
    let edge_sum: usize = deltas.iter().sum();
    out.push(Check::exact(M, "triangle_edge_degree_sum", edge_sum == 3 * t, format!("sum {edge_sum}, 3t = {}", 3 * t)));
    let vertex_sum: usize = (0..g.n()).map(|u| g.triangle_degree_vertex(u).unwrap()).sum();
    out.push(Check::exact(M, "triangle_vertex_degree_sum", vertex_sum == 3 * t, format!("sum {vertex_sum}, 3t = {}", 3 * t)));
    if g.n() <= 12 {
        let mut brute = Vec::new();
        for i in 0..g.n() {
            for j in i + 1..g.n() {
                for k in j + 1..g.n() {
                    if g.has_edge(i, j) && g.has_edge(i, k) && g.has_edge(j, k) {
                        brute.push([i, j, k]);
                    }
                }
            }
        }
        let ok = brute.iter().eq(tris.iter().map(|tr| &tr.0));
        out.push(Check::exact(M, "triangles_brute_force", ok, format!("{t} triangles")));
    } else {
        out.push(Check::skipped(M, "triangles_brute_force", "more than 12 vertices"));
    }
    let worst = (0..g.m())
        .map(|e| g.edge_neighborhood_size(e).unwrap() as i64 - 2 * deltas[e] as i64)
        .min();
    out.push(Check::exact(
        M,
        "edge_neighborhood_bound",
        worst.is_none_or(|w| w >= 0),
        format!("min |N(e)| - 2Δ(e) = {}", worst.map_or("n/a".into(), |w| w.to_string())),
    ));
}

fn io_checks(g: &Graph, o: &Orientation, out: &mut Vec<Check>) {
    const M: &str = "cli_io";
    let text = emit_edgelist(g, o);
    let ok = parse_edgelist(&text).is_ok_and(|el| el.graph == *g && el.orientation == *o);
    out.push(Check::exact(M, "edgelist_round_trip", ok, "emit then parse"));
    let mut want = g.edges().to_vec();
    want.sort_unstable();
    let ok = parse_graph6(&encode_graph6(g)).is_ok_and(|h| h.n() == g.n() && h.edges() == &want[..]);
    out.push(Check::exact(M, "graph6_round_trip", ok, "encode then decode"));
}

fn random_vector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn matrix_checks<R: Rng + ?Sized>(
    g: &Graph,
    o: &Orientation,
    opts: &VerifyOptions,
    rng: &mut R,
    out: &mut Vec<Check>,
) -> Result<()> {
    let m = g.m();
    let tol = opts.cluster_tol;

    // incidence
    let b = build_b(g, o)?;
    let c = build_c(g, o)?;
    let cb = c.mul(&b)?;
    out.push(Check::exact("incidence", "cb_zero", cb.is_zero(), format!("C is {}x{}", c.rows(), c.cols())));
    let b_rows = (0..b.rows()).all(|i| b.row(i).iter().sum::<i64>() == 0);
    out.push(Check::exact("incidence", "b_row_sums_zero", b_rows, ""));
    let c_rows = (0..c.rows()).all(|i| c.row(i).iter().map(|x| x.abs()).sum::<i64>() == 3);
    out.push(Check::exact("incidence", "c_abs_row_sums_three", c_rows, ""));

    // helmholtzian
    let h = build_h_direct(g, o)?;
    let factored = build_h_factored(g, o)?;
    out.push(Check::exact("helmholtzian", "direct_equals_factored", h.matrix() == factored.matrix(), "entrywise"));
    let poly = charpoly_exact(h.matrix());

    let e = rng.gen_range(0..m);
    let mut flipped = o.clone();
    flipped.flip(e);
    let hf = build_h_direct(g, &flipped)?;
    let conj = hf.matrix() == &h.matrix().signed_conjugate(&o.agreement(&flipped));
    let same = charpoly_exact(hf.matrix()) == poly;
    out.push(Check::exact("incidence", "flip_conjugation", conj && same, format!("edge {e} flipped")));

    let mut differing = 0;
    for _ in 0..opts.orientation_samples {
        let r = Orientation::random(g, rng);
        if charpoly_exact(build_h_direct(g, &r)?.matrix()) != poly {
            differing += 1;
        }
    }
    out.push(Check::exact(
        "helmholtzian",
        "orientation_independence",
        differing == 0,
        format!("{differing} of {} random orientations differ", opts.orientation_samples),
    ));

    let eig = eigen_decomposition(h.matrix())?;
    let lambda1 = eig.values[0];
    let scale = lambda1.abs().max(1.0);
    let lambda_min = *eig.values.last().unwrap();
    out.push(Check::float(
        "helmholtzian",
        "positive_semidefinite",
        (-lambda_min).max(0.0) / scale,
        1e-8,
        format!("least eigenvalue {lambda_min:e}"),
    ));

    let mut qf_worst: f64 = 0.0;
    let (mut tri_ok, mut vert_ok) = (true, true);
    for _ in 0..opts.random_vectors {
        let x = random_vector(rng, m);
        qf_worst = qf_worst.max(quadratic_form(g, o, &h, &x)?.relative_error);
        let (tri, vert) = rayleigh_inequalities(g, o, &x)?;
        tri_ok &= tri.holds(1e-9);
        vert_ok &= vert.holds(1e-9);
    }
    out.push(Check::float("helmholtzian", "quadratic_form_identity", qf_worst, 1e-9, "relative error"));
    out.push(Check::exact("helmholtzian", "triangle_side_inequalities", tri_ok, format!("{} vectors", opts.random_vectors)));
    out.push(Check::exact("helmholtzian", "vertex_side_inequalities", vert_ok, format!("{} vectors", opts.random_vectors)));

    if c.rows() == 0 {
        let bbt = b.mul(&b.transpose())?;
        let lap: Vec<f64> = {
            let mut v: Vec<f64> = SymmetricEigen::new(g.laplacian_matrix().to_f64()).eigenvalues.iter().copied().collect();
            v.sort_unstable_by(|a, b| b.total_cmp(a));
            v.into_iter().filter(|x| x.abs() > tol * scale).collect()
        };
        let nonzero: Vec<f64> = eig.values.iter().copied().filter(|x| x.abs() > tol * scale).collect();
        let dev = if lap.len() == nonzero.len() {
            lap.iter().zip(&nonzero).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale
        } else {
            f64::INFINITY
        };
        let mut chk = Check::float("helmholtzian", "triangle_free_laplacian", dev, tol, "nonzero H and L spectra");
        if bbt != *h.matrix() {
            chk.status = Status::Fail;
            chk.detail = "H differs from BBᵀ".into();
        }
        out.push(chk);
    } else {
        out.push(Check::skipped("helmholtzian", "triangle_free_laplacian", "graph has triangles"));
    }

    spectral_checks(g, o, &h, &poly, &eig, opts, out)?;
    combinatorial_checks(g, o, &poly, opts, out)?;
    Ok(())
}

fn spectral_checks(
    g: &Graph,
    o: &Orientation,
    h: &HelmholtzianMatrix,
    poly: &CharPoly,
    eig: &crate::spectral::EigenDecomposition,
    opts: &VerifyOptions,
    out: &mut Vec<Check>,
) -> Result<()> {
    const M: &str = "spectral";
    let tol = opts.cluster_tol;
    let sp = Spectrum::cluster(&eig.values, tol);
    let scale = sp.scale();

    let trace = h.matrix().trace();
    let c1 = poly.coeff(1).clone();
    out.push(Check::exact(M, "trace_equals_minus_c1", BigInt::from(trace) == -c1.clone(), format!("trace {trace}, c1 {c1}")));

    let rank_nullity = nullity_rank(g, o)?;
    let trailing = poly.trailing_zeros();
    let float_zero = eig.values.iter().filter(|x| x.abs() <= tol * scale).count();
    out.push(Check::exact(
        M,
        "nullity_agreement",
        rank_nullity == trailing && trailing == float_zero,
        format!("rank {rank_nullity}, charpoly {trailing}, eigensolve {float_zero}"),
    ));

    let formula = nullity_formula(g)?;
    let detail = format!(
        "formula {} vs rank {rank_nullity}; rank(C) = {}, t = {}{}",
        formula.value,
        formula.rank_c,
        formula.triangles,
        if formula.valid { "" } else { " (hypothesis rank(C) = t fails; flagged)" }
    );
    out.push(Check::exact(M, "nullity_formula", !formula.valid || formula.value == rank_nullity as i64, detail));

    let brackets = roots_bracketed(poly, &sp, tol);
    let missing = brackets.iter().filter(|&&b| !b).count();
    out.push(Check::exact(M, "eigenvalues_bracket_roots", missing == 0, format!("{missing} of {} clusters unbracketed", brackets.len())));

    match null_vector_residuals(g, o, eig, tol)? {
        Some((rb, rc)) => out.push(Check::float(M, "null_vectors", rb.max(rc), 1e-8, format!("|Bᵀx| {rb:e}, |Cx| {rc:e}"))),
        None => out.push(Check::skipped(M, "null_vectors", "H is nonsingular")),
    }

    let s = sp.distinct();
    if h.dim() <= KRYLOV_MAX_EDGES {
        let r = krylov_rank(h, s);
        out.push(Check::exact(M, "minimal_polynomial_degree", r == s, format!("rank of I..H^{s} is {r}, s = {s}")));
    } else {
        out.push(Check::skipped(M, "minimal_polynomial_degree", format!("more than {KRYLOV_MAX_EDGES} edges")));
    }

    if g.is_connected() {
        let lb = least_eigenvalue_bounds(g, o, h, tol)?;
        out.push(Check::exact(
            M,
            "least_eigenvalue_bounds",
            lb.ok(),
            format!(
                "λ_min {:.6}, bound (i) {}, bound (ii) {}, complete {}",
                lb.lambda_min,
                lb.bound_i,
                lb.bound_ii.map_or("n/a".into(), |b| b.to_string()),
                lb.complete
            ),
        ));
        let dc = distinct_count_and_diameter_check(g, &sp)?;
        out.push(Check::exact(
            M,
            "diameter_and_distinct_count",
            dc.ok(),
            format!("s = {}, diameter = {}", dc.distinct, dc.diameter),
        ));
    } else {
        let why = format!("graph is disconnected ({} components)", g.components().count);
        out.push(Check::skipped(M, "least_eigenvalue_bounds", why.clone()));
        out.push(Check::skipped(M, "diameter_and_distinct_count", why));
    }

    let ptol = 1e-6 * h.dim() as f64;
    match spectral_projectors(h, &sp) {
        Ok((_, rep)) => {
            let worst = [rep.idempotence, rep.partition_of_unity, rep.reconstruction, rep.eigen_relation]
                .into_iter()
                .fold(0.0, f64::max);
            let how = if rep.direct_products { "matrix products" } else { "eigenvector evaluation" };
            out.push(Check::float(M, "spectral_projectors", worst, ptol, format!("{} projectors via {how}", sp.distinct())));
        }
        Err(e @ Error::IllConditionedProjector { .. }) => out.push(Check::skipped(M, "spectral_projectors", e.to_string())),
        Err(e) => out.push(Check::error(M, "spectral_projectors", &e)),
    }
    Ok(())
}

fn combinatorial_checks(
    g: &Graph,
    o: &Orientation,
    poly: &CharPoly,
    opts: &VerifyOptions,
    out: &mut Vec<Check>,
) -> Result<()> {
    const M: &str = "charpoly_combinatorics";
    let cf = coeffs_closed_form(g)?;
    let coeff = |k: usize| if k <= poly.degree() { poly.coeff(k).clone() } else { BigInt::from(0) };
    let ok = [cf.c1, cf.c2, cf.c3].iter().enumerate().all(|(i, &c)| BigInt::from(c) == coeff(i + 1));
    out.push(Check::exact(M, "closed_form_coefficients", ok, format!("c1 {}, c2 {}, c3 {}", cf.c1, cf.c2, cf.c3)));

    let w: Vec<i128> = g.edge_triangle_degrees().iter().map(|&d| d as i128 + 2).collect();
    let s: i128 = w.iter().sum();
    let sq: i128 = w.iter().map(|x| x * x).sum();
    out.push(Check::exact(M, "pair_sum_unordered", (s * s - sq) / 2 == cf.pair_sum, format!("pair sum {}", cf.pair_sum)));

    if g.m() <= opts.oracle_max_edges {
        match all_coeffs_oracle(g, o, opts.oracle_budget) {
            Ok(p) => out.push(Check::exact(M, "basic_subgraph_oracle", &p == poly, "all coefficients")),
            Err(e @ Error::BudgetExceeded { .. }) => out.push(Check::skipped(M, "basic_subgraph_oracle", e.to_string())),
            Err(e) => out.push(Check::error(M, "basic_subgraph_oracle", &e)),
        }
    } else {
        out.push(Check::skipped(M, "basic_subgraph_oracle", format!("more than {} edges", opts.oracle_max_edges)));
    }
    let ls = loop_shift_check(g, o)?;
    out.push(Check::exact(M, "loop_shift", ls.holds, "φ_Λ(λ) = φ_Λ'(λ - 2)"));
    Ok(())
}

/// The graph-level suite on the generated graph (canonical orientation),
/// plus the family-specific identities that apply to `spec`.
pub fn verify_family(spec: &FamilySpec, opts: &VerifyOptions) -> Result<Vec<Check>> {
    const M: &str = "families";
    let g = gen_family(spec)?;
    let o = canonical_orientation(&g);
    let mut out = verify_graph(&g, &o, opts);
    if g.m() == 0 {
        return Ok(out);
    }
    let h = build_h_direct(&g, &o)?;
    let eig = eigen_decomposition(h.matrix())?;
    let numeric = Spectrum::cluster(&eig.values, opts.cluster_tol);

    match closed_form_spectrum(spec) {
        Ok(cf) => {
            let ok = cf.total() == g.m() && cf.matches(&numeric, opts.cluster_tol);
            out.push(Check::exact(M, "closed_form_spectrum", ok, format!("{} distinct values", cf.distinct())));
        }
        Err(Error::NoClosedForm(_)) => out.push(Check::skipped(M, "closed_form_spectrum", "no closed form for this family")),
        Err(e) => out.push(Check::error(M, "closed_form_spectrum", &e)),
    }

    if let FamilySpec::Threshold(bits) = spec {
        let sp = threshold_spectrum_iterative(bits)?;
        let integral = h_integral_test(&h, opts.cluster_tol)?.integral;
        out.push(Check::exact(M, "threshold_h_integral", integral && sp.matches(&numeric, opts.cluster_tol), "recursion vs eigensolve"));
    }

    if let FamilySpec::Join(a, b) = spec {
        let (ga, gb) = (gen_family(a)?, gen_family(b)?);
        let block = join_block_matrix(&ga, &gb)?;
        let same = charpoly_exact(block.matrix()) == charpoly_exact(h.matrix());
        out.push(Check::exact(M, "join_block_charpoly", same, "block form vs direct build"));
        match join_regular_spectrum(&ga, &gb, opts.cluster_tol) {
            Ok(sp) => out.push(Check::exact(M, "join_regular_spectrum", sp.matches(&numeric, 1e-8), "closed form vs eigensolve")),
            Err(Error::NotRegular) => out.push(Check::skipped(M, "join_regular_spectrum", "a factor is not regular")),
            Err(e) => out.push(Check::error(M, "join_regular_spectrum", &e)),
        }
    }

    if let FamilySpec::HSeq { seed, .. } = spec {
        let seed_graph = gen_family(seed)?;
        let seed_ok = seed_graph.m() == 0 || {
            let hs = build_h_direct(&seed_graph, &canonical_orientation(&seed_graph))?;
            h_integral_test(&hs, opts.cluster_tol)?.integral
        } && crate::spectral::laplacian_integral_test(&seed_graph, opts.cluster_tol)?.integral;
        if seed_ok {
            let integral = h_integral_test(&h, opts.cluster_tol)?.integral;
            out.push(Check::exact(M, "hseq_h_integral", integral, "integral seed stays integral"));
        } else {
            out.push(Check::skipped(M, "hseq_h_integral", "seed is not both H- and Laplacian-integral"));
        }
    }
    Ok(out)
}
