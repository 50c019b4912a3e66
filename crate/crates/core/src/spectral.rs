//! Spectra of Helmholtzian matrices: floating eigensolve with clustering,
//! exact nullity, least-eigenvalue bounds, spectral projectors, integrality
//! and the distinct-eigenvalue / diameter relation.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::helmholtzian::{pair_kind, HelmholtzianMatrix, PairKind};
use crate::incidence::{build_b, build_c, canonical_orientation, Orientation};
use crate::matrix::{bareiss_rank, IntMatrix};
use crate::poly::{charpoly_exact, f64_to_dyadic, CharPoly};

/// Default clustering tolerance, relative to `max(1, λ₁)`.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumKind {
    ExactInteger,
    ClusteredFloat { tol: f64 },
}

/// Eigenvalues with multiplicities, strictly decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: SpectrumKind,
    entries: Vec<(f64, usize)>,
}

impl Spectrum {
    /// Exact integer spectrum; equal values merge, zero multiplicities drop.
    pub fn exact<I: IntoIterator<Item = (i64, usize)>>(pairs: I) -> Self {
        let mut v: Vec<(i64, usize)> = pairs.into_iter().filter(|&(_, k)| k > 0).collect();
        v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        let mut entries: Vec<(f64, usize)> = Vec::with_capacity(v.len());
        let mut last: Option<i64> = None;
        for (x, k) in v {
            if last == Some(x) {
                entries.last_mut().unwrap().1 += k;
            } else {
                entries.push((x as f64, k));
                last = Some(x);
            }
        }
        Spectrum { kind: SpectrumKind::ExactInteger, entries }
    }

    /// Greedy clustering of eigenvalues: after sorting in decreasing order,
    /// neighbours closer than `tol · max(1, λ₁)` share a cluster whose value
    /// is their mean.
    pub fn cluster(values: &[f64], tol: f64) -> Self {
        let mut v = values.to_vec();
        v.sort_unstable_by(|a, b| b.total_cmp(a));
        let scale = v.first().map_or(1.0, |&x| x.abs().max(1.0));
        let mut groups: Vec<Vec<f64>> = Vec::new();
        for x in v {
            match groups.last_mut() {
                Some(g) if g.last().unwrap() - x <= tol * scale => g.push(x),
                _ => groups.push(vec![x]),
            }
        }
        let entries = groups
            .into_iter()
            .map(|g| (g.iter().sum::<f64>() / g.len() as f64, g.len()))
            .collect();
        Spectrum { kind: SpectrumKind::ClusteredFloat { tol }, entries }
    }

    pub fn kind(&self) -> SpectrumKind {
        self.kind
    }

    pub fn entries(&self) -> &[(f64, usize)] {
        &self.entries
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn largest(&self) -> Option<f64> {
        self.entries.first().map(|e| e.0)
    }

    pub fn smallest(&self) -> Option<f64> {
        self.entries.last().map(|e| e.0)
    }

    /// `max(1, |λ₁|)`, the scale that tolerances are relative to.
    pub fn scale(&self) -> f64 {
        self.largest().map_or(1.0, |x| x.abs().max(1.0))
    }

    /// Multiplicity of the cluster within `tol · scale` of `x` (0 if none).
    pub fn multiplicity_near(&self, x: f64, tol: f64) -> usize {
        let t = tol * self.scale();
        self.entries.iter().filter(|e| (e.0 - x).abs() <= t).map(|e| e.1).sum()
    }

    /// Integer values and multiplicities, if every value is within `tol` of
    /// an integer.
    pub fn to_integers(&self, tol: f64) -> Option<Vec<(i64, usize)>> {
        self.entries
            .iter()
            .map(|&(x, k)| {
                let r = x.round();
                ((x - r).abs() <= tol).then_some((r as i64, k))
            })
            .collect()
    }

    /// Same number of values, equal multiplicities, and values within
    /// `tol · max(1, |value|)`.
    pub fn matches(&self, other: &Spectrum, tol: f64) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= tol * a.0.abs().max(1.0))
    }

    /// Plain list of all eigenvalues, decreasing, with repetition.
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|&(x, k)| std::iter::repeat(x).take(k)).collect()
    }
}

/// Human-readable key for a spectrum value: integers print without a
/// fractional part.
pub fn value_label(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * x.abs().max(1.0) {
        let r = if r == 0.0 { 0.0 } else { r };
        format!("{r:.0}")
    } else {
        let s = format!("{x:.12}");
        s.trim_end_matches('0').to_string()
    }
}

/// Serialized as an ordered map `{"value": multiplicity}`.
impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for &(x, k) in &self.entries {
            map.serialize_entry(&value_label(x), &k)?;
        }
        map.end()
    }
}

/// Eigenvalues (decreasing) and the matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    /// Column `i` belongs to `values[i]`.
    pub vectors: DMatrix<f64>,
    /// `max_i ‖Hx_i − λ_i x_i‖₂`.
    pub max_residual: f64,
    pub frobenius: f64,
}

/// Symmetric eigendecomposition of an integer matrix, with a residual check
/// of `1e−9 · ‖H‖_F` per eigenpair.
pub fn eigen_decomposition(h: &IntMatrix) -> Result<EigenDecomposition> {
    if h.rows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !h.is_square() {
        return Err(Error::DimensionMismatch { expected: h.rows(), got: h.cols() });
    }
    if let Some((row, col)) = h.asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    let a = h.to_f64();
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..h.rows()).collect();
    order.sort_unstable_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(h.rows(), h.rows(), |r, c| eig.eigenvectors[(r, order[c])]);
    let mut max_residual: f64 = 0.0;
    for (c, &lambda) in values.iter().enumerate() {
        let x = vectors.column(c);
        let r = &a * x - x * lambda;
        max_residual = max_residual.max(r.norm());
    }
    let frobenius = h.frobenius();
    if !(max_residual <= 1e-9 * frobenius.max(1.0)) {
        return Err(Error::Numerical(format!(
            "eigenpair residual {max_residual:e} exceeds 1e-9 * ||H||_F"
        )));
    }
    Ok(EigenDecomposition { values, vectors, max_residual, frobenius })
}

/// Clustered floating spectrum of `h`.
pub fn eigen_spectrum(h: &HelmholtzianMatrix, cluster_tol: f64) -> Result<Spectrum> {
    if !(cluster_tol > 0.0) {
        return Err(Error::Numerical(format!("cluster tolerance must be positive, got {cluster_tol}")));
    }
    let eig = eigen_decomposition(h.matrix())?;
    Ok(Spectrum::cluster(&eig.values, cluster_tol))
}

/// Exact characteristic polynomial `det(λI − H)`.
pub fn charpoly(h: &HelmholtzianMatrix) -> CharPoly {
    charpoly_exact(h.matrix())
}

/// `m − rank [Bᵀ; C]`, by exact elimination.
pub fn nullity_rank(g: &Graph, o: &Orientation) -> Result<usize> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let b = build_b(g, o)?;
    let c = build_c(g, o)?;
    let stacked = b.transpose().vstack(&c)?;
    Ok(g.m() - stacked.rank())
}

/// A formula value with a flag saying whether its hypothesis
/// `rank(C) = t` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlaggedValue {
    pub value: i64,
    pub valid: bool,
    pub rank_c: usize,
    pub triangles: usize,
}

fn rank_c(g: &Graph) -> Result<(usize, usize)> {
    let c = build_c(g, &canonical_orientation(g))?;
    Ok((c.rank(), c.rows()))
}

/// `m − n − t + w`, valid when the triangle boundaries are independent.
pub fn nullity_formula(g: &Graph) -> Result<FlaggedValue> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let (rank_c, t) = rank_c(g)?;
    let w = g.components().count;
    let value = g.m() as i64 - g.n() as i64 - t as i64 + w as i64;
    Ok(FlaggedValue { value, valid: rank_c == t, rank_c, triangles: t })
}

/// `m − n − η + w` with `η` from [`nullity_rank`]; equals the triangle
/// count when the flag is set.
pub fn triangles_from_nullity(g: &Graph) -> Result<FlaggedValue> {
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let eta = nullity_rank(g, &canonical_orientation(g))?;
    let (rank_c, t) = rank_c(g)?;
    let w = g.components().count;
    let value = g.m() as i64 - g.n() as i64 - eta as i64 + w as i64;
    Ok(FlaggedValue { value, valid: rank_c == t, rank_c, triangles: t })
}

/// Upper bounds on the least eigenvalue `λ_m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeastBounds {
    pub lambda_min: f64,
    /// `min_e Δ(e) + 2`.
    pub bound_i: i64,
    /// `min (Δ(e)+Δ(f))/2 + 1` over edge pairs forming an induced `P₃`;
    /// absent for complete graphs.
    pub bound_ii: Option<f64>,
    pub holds_i: bool,
    pub holds_ii: bool,
    /// Whether `λ_m = bound_i` (within tolerance).
    pub equality_i: bool,
    pub complete: bool,
}

impl LeastBounds {
    /// Both bounds hold and equality in (i) occurs exactly for `K_n`.
    pub fn ok(&self) -> bool {
        self.holds_i && self.holds_ii && self.equality_i == self.complete
    }
}

/// Computes both bounds and compares them with the least eigenvalue of `h`.
pub fn least_eigenvalue_bounds(g: &Graph, o: &Orientation, h: &HelmholtzianMatrix, tol: f64) -> Result<LeastBounds> {
    require_connected(g)?;
    if g.m() == 0 {
        return Err(Error::EmptyEdgeSet);
    }
    let eig = eigen_decomposition(h.matrix())?;
    let lambda_min = *eig.values.last().unwrap();
    let scale = eig.values[0].abs().max(1.0);
    let deltas = g.edge_triangle_degrees();
    let bound_i = deltas.iter().map(|&d| d as i64 + 2).min().unwrap();
    let mut bound_ii: Option<f64> = None;
    for e in 0..g.m() {
        for f in e + 1..g.m() {
            // Adjacent, not co-triangular: the two edges induce a P₃.
            if matches!(pair_kind(g, o, e, f), PairKind::HeadToTail | PairKind::SameEnd) {
                let b = (deltas[e] + deltas[f]) as f64 / 2.0 + 1.0;
                bound_ii = Some(bound_ii.map_or(b, |x: f64| x.min(b)));
            }
        }
    }
    let slack = tol * scale;
    let complete = g.is_complete();
    Ok(LeastBounds {
        lambda_min,
        bound_i,
        bound_ii,
        holds_i: lambda_min <= bound_i as f64 + slack,
        holds_ii: bound_ii.map_or(true, |b| lambda_min <= b + slack),
        equality_i: (lambda_min - bound_i as f64).abs() <= slack,
        complete,
    })
}

fn require_connected(g: &Graph) -> Result<()> {
    let c = g.components();
    if c.count > 1 {
        return Err(Error::Disconnected { components: c.count });
    }
    Ok(())
}

/// Deviations measured for a family of spectral projectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorReport {
    /// `max_i ‖P_i² − P_i‖_max`.
    pub idempotence: f64,
    /// `‖Σ P_i − I‖_max`.
    pub partition_of_unity: f64,
    /// `‖Σ λ_i P_i − H‖_max`.
    pub reconstruction: f64,
    /// `max_i ‖H P_i − λ_i P_i‖_max`.
    pub eigen_relation: f64,
    /// `max_i |tr P_i − m_i|`.
    pub trace: f64,
    /// Whether the Lagrange products were formed directly in `H`
    /// (`false`: evaluated through the eigendecomposition).
    pub direct_products: bool,
}

impl ProjectorReport {
    pub fn within(&self, tol: f64) -> bool {
        [self.idempotence, self.partition_of_unity, self.reconstruction, self.eigen_relation, self.trace]
            .iter()
            .all(|&x| x <= tol)
    }
}

/// Product-of-gaps amplification above which the direct matrix products
/// lose too many digits and the eigendecomposition is used instead.
const MAX_PRODUCT_AMPLIFICATION: f64 = 1e6;

fn nearest(lam: &[f64], x: f64) -> usize {
    (0..lam.len()).min_by(|&a, &b| (lam[a] - x).abs().total_cmp(&(lam[b] - x).abs())).unwrap()
}

/// `P_i = Π_{j≠i} (H − λ_j I) / Π_{j≠i} (λ_i − λ_j)` for every cluster of
/// `sp`.
///
/// When the ratio of the largest factor product to the denominator is small
/// the products are formed in `H` itself; otherwise the same polynomial is
/// evaluated on the clustered eigenvalue of each eigenvector and mapped back
/// through the eigenvectors. Evaluating at the raw solver output instead would
/// multiply its rounding by that same amplification.
pub fn spectral_projectors(h: &HelmholtzianMatrix, sp: &Spectrum) -> Result<(Vec<DMatrix<f64>>, ProjectorReport)> {
    let m = h.dim();
    if m == 0 {
        return Err(Error::EmptyMatrix);
    }
    if sp.total() != m {
        return Err(Error::DimensionMismatch { expected: m, got: sp.total() });
    }
    let tol = match sp.kind() {
        SpectrumKind::ClusteredFloat { tol } => tol,
        SpectrumKind::ExactInteger => DEFAULT_CLUSTER_TOL,
    };
    let lam: Vec<f64> = sp.entries().iter().map(|e| e.0).collect();
    let scale = sp.scale();
    for w in lam.windows(2) {
        let gap = w[0] - w[1];
        if gap < 10.0 * tol * scale {
            return Err(Error::IllConditionedProjector { a: w[0], b: w[1], gap });
        }
    }
    let a = h.matrix().to_f64();
    let eye = DMatrix::<f64>::identity(m, m);
    let (lo, hi) = (*lam.last().unwrap(), lam[0]);
    let amplification = (0..lam.len())
        .map(|i| {
            (0..lam.len())
                .filter(|&j| j != i)
                .map(|j| (hi - lam[j]).abs().max((lo - lam[j]).abs()) / (lam[i] - lam[j]).abs())
                .product::<f64>()
        })
        .fold(1.0, f64::max);
    let direct = amplification <= MAX_PRODUCT_AMPLIFICATION;

    let projectors: Vec<DMatrix<f64>> = if direct {
        (0..lam.len())
            .map(|i| {
                let mut p = eye.clone();
                for (j, &lj) in lam.iter().enumerate() {
                    if j != i {
                        p = (&a - &eye * lj) * p / (lam[i] - lj);
                    }
                }
                p
            })
            .collect()
    } else {
        let eig = eigen_decomposition(h.matrix())?;
        (0..lam.len())
            .map(|i| {
                let f: DVector<f64> = DVector::from_iterator(
                    m,
                    eig.values.iter().map(|&x| {
                        let k = nearest(&lam, x);
                        lam.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, &lj)| (lam[k] - lj) / (lam[i] - lj))
                            .product::<f64>()
                    }),
                );
                &eig.vectors * DMatrix::from_diagonal(&f) * eig.vectors.transpose()
            })
            .collect()
    };

    let max_abs = |x: &DMatrix<f64>| x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let mut report = ProjectorReport {
        idempotence: 0.0,
        partition_of_unity: 0.0,
        reconstruction: 0.0,
        eigen_relation: 0.0,
        trace: 0.0,
        direct_products: direct,
    };
    let mut sum = DMatrix::<f64>::zeros(m, m);
    let mut recon = DMatrix::<f64>::zeros(m, m);
    for (i, p) in projectors.iter().enumerate() {
        report.idempotence = report.idempotence.max(max_abs(&(p * p - p)));
        report.eigen_relation = report.eigen_relation.max(max_abs(&(&a * p - p * lam[i])));
        report.trace = report.trace.max((p.trace() - sp.entries()[i].1 as f64).abs());
        sum += p;
        recon += p * lam[i];
    }
    report.partition_of_unity = max_abs(&(sum - &eye));
    report.reconstruction = max_abs(&(recon - &a));
    Ok((projectors, report))
}

/// Cluster count against diameter, with the one- and two-value
/// classifications.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiameterCheck {
    pub distinct: usize,
    pub diameter: usize,
    /// `diameter ≤ distinct`.
    pub holds: bool,
    /// `distinct = 1` exactly when the graph is complete.
    pub one_value_iff_complete: bool,
    /// `distinct = 2` exactly when the graph is `K_t ∨ sK_1`, `s ≥ 2`.
    pub two_values_iff_split: bool,
}

impl DiameterCheck {
    pub fn ok(&self) -> bool {
        self.holds && self.one_value_iff_complete && self.two_values_iff_split
    }
}

pub fn distinct_count_and_diameter_check(g: &Graph, sp: &Spectrum) -> Result<DiameterCheck> {
    require_connected(g)?;
    let diameter = g.diameter().ok_or(Error::Disconnected { components: g.components().count })?;
    let s = sp.distinct();
    Ok(DiameterCheck {
        distinct: s,
        diameter,
        holds: diameter <= s,
        one_value_iff_complete: (s == 1) == g.is_complete(),
        two_values_iff_split: (s == 2) == g.is_complete_split(),
    })
}

/// Outcome of an integrality test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Integrality {
    pub integral: bool,
    /// The confirmed integer spectrum.
    pub spectrum: Option<Spectrum>,
}

/// Rounds the clustered spectrum of `a` and confirms it against the exact
/// characteristic polynomial.
pub fn integral_spectrum(a: &IntMatrix, cluster_tol: f64) -> Result<Integrality> {
    let eig = eigen_decomposition(a)?;
    let sp = Spectrum::cluster(&eig.values, cluster_tol);
    let rounded: Vec<(i64, usize)> = sp.entries().iter().map(|&(x, k)| (x.round() as i64, k)).collect();
    let candidate = Spectrum::exact(rounded.iter().copied());
    let expanded = CharPoly::from_roots(&rounded);
    let integral = expanded == charpoly_exact(a);
    Ok(Integrality { integral, spectrum: integral.then_some(candidate) })
}

/// Whether every eigenvalue of `H` is an integer.
pub fn h_integral_test(h: &HelmholtzianMatrix, cluster_tol: f64) -> Result<Integrality> {
    integral_spectrum(h.matrix(), cluster_tol)
}

/// Whether every Laplacian eigenvalue of `g` is an integer.
pub fn laplacian_integral_test(g: &Graph, cluster_tol: f64) -> Result<Integrality> {
    integral_spectrum(&g.laplacian_matrix(), cluster_tol)
}

/// Rank of the moment matrix whose rows are `I, H, …, H^s` flattened
/// (upper triangles suffice since every power is symmetric). Exact.
pub fn krylov_rank(h: &HelmholtzianMatrix, s: usize) -> usize {
    let m = h.dim();
    let a: Vec<Vec<BigInt>> = (0..m).map(|i| h.matrix().row(i).iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut power: Vec<Vec<BigInt>> =
        (0..m).map(|i| (0..m).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let flatten = |p: &Vec<Vec<BigInt>>| -> Vec<BigInt> {
        (0..m).flat_map(|i| p[i][i..].iter().cloned().collect::<Vec<_>>()).collect()
    };
    let mut rows = vec![flatten(&power)];
    for _ in 0..s {
        power = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut acc = BigInt::zero();
                        for k in 0..m {
                            if !a[i][k].is_zero() && !power[k][j].is_zero() {
                                acc += &a[i][k] * &power[k][j];
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        rows.push(flatten(&power));
    }
    bareiss_rank(rows).expect("BigInt elimination cannot overflow")
}

/// For each cluster `(v, k)` of `sp`, whether the exact polynomial has a
/// root within `tol · scale` of `v`: either `round(v)` is an exact root, or
/// `φ^{(k−1)}` vanishes or changes sign on `[v − δ, v + δ]`.
pub fn roots_bracketed(poly: &CharPoly, sp: &Spectrum, tol: f64) -> Vec<bool> {
    let delta = tol * sp.scale();
    sp.entries()
        .iter()
        .map(|&(v, k)| {
            let r = v.round();
            if (v - r).abs() <= delta && poly.root_multiplicity(r as i64) >= 1 {
                return true;
            }
            let order = k.saturating_sub(1);
            let (a, sa) = f64_to_dyadic(v - delta);
            let (b, sb) = f64_to_dyadic(v + delta);
            let lo = poly.derivative_sign_at(order, &a, sa);
            let hi = poly.derivative_sign_at(order, &b, sb);
            lo == Ordering::Equal || hi == Ordering::Equal || lo != hi
        })
        .collect()
}

/// Largest `‖Bᵀx‖₂` and `‖Cx‖₂` over eigenvectors `x` whose eigenvalue is
/// within `tol · scale` of zero; `None` if there are none.
pub fn null_vector_residuals(g: &Graph, o: &Orientation, eig: &EigenDecomposition, tol: f64) -> Result<Option<(f64, f64)>> {
    let scale = eig.values.first().map_or(1.0, |x| x.abs().max(1.0));
    let bt = build_b(g, o)?.transpose().to_f64();
    let c = build_c(g, o)?;
    let cf = c.to_f64();
    let mut worst: Option<(f64, f64)> = None;
    for (i, &x) in eig.values.iter().enumerate() {
        if x.abs() > tol * scale {
            continue;
        }
        let v = eig.vectors.column(i);
        let rb = (&bt * v).norm();
        let rc = if c.rows() == 0 { 0.0 } else { (&cf * v).norm() };
        worst = Some(worst.map_or((rb, rc), |(a, b)| (a.max(rb), b.max(rc))));
    }
    Ok(worst)
}
