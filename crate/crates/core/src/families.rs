//! Named graph families, their text specs, and closed-form Helmholtzian
//! spectra (windmills, complete split and multipartite graphs, threshold
//! graphs, joins of regular graphs).

use std::fmt;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::graph::{named, Graph};
use crate::helmholtzian::{build_h_direct, HelmholtzianMatrix, Provenance};
use crate::incidence::canonical_orientation;
use crate::matrix::IntMatrix;
use crate::spectral::{eigen_decomposition, h_integral_test, laplacian_integral_test, Spectrum};

/// Largest vertex count a spec may generate.
pub const MAX_FAMILY_ORDER: usize = 2000;

/// A named graph family with its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Complete(usize),
    Empty(usize),
    Path(usize),
    Cycle(usize),
    /// `K_{1,k}`.
    Star(usize),
    /// `K_{n₁,…,n_k}`.
    Multipartite(Vec<usize>),
    /// `K_{n₀} ∨ (K_{n₁} ∪ … ∪ K_{n_k})`.
    Windmill { core: usize, parts: Vec<usize> },
    /// `K_t ∨ sK_1`.
    Split { s: usize, t: usize },
    /// Creation sequence; the first bit is the initial vertex.
    Threshold(Vec<bool>),
    /// `K_{2,…,2}` with `k` parts.
    Cocktail(usize),
    Join(Box<FamilySpec>, Box<FamilySpec>),
    /// `G_{i+1} = K_s ∨ (G_i ∪ tK_1)` from a seed.
    HSeq { seed: Box<FamilySpec>, steps: Vec<(usize, usize)> },
    Graph6(String),
    Explicit(Graph),
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        match self {
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::Empty(n) => write!(f, "empty:{n}"),
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Star(k) => write!(f, "star:{k}"),
            FamilySpec::Multipartite(p) => write!(f, "multipartite:{}", list(p)),
            FamilySpec::Windmill { core, parts } => write!(f, "windmill:{core};{}", list(parts)),
            FamilySpec::Split { s, t } => write!(f, "split:{s},{t}"),
            FamilySpec::Threshold(bits) => {
                let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(f, "threshold:{s}")
            }
            FamilySpec::Cocktail(k) => write!(f, "cocktail:{k}"),
            FamilySpec::Join(a, b) => write!(f, "join({a},{b})"),
            FamilySpec::HSeq { seed, steps } => {
                write!(f, "hseq({seed}")?;
                for (s, t) in steps {
                    write!(f, "|{s},{t}")?;
                }
                write!(f, ")")
            }
            FamilySpec::Graph6(s) => write!(f, "g6:{s}"),
            FamilySpec::Explicit(g) => write!(f, "explicit(n={}, m={})", g.n(), g.m()),
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidFamily(msg.into())
}

fn parse_count(s: &str) -> Result<usize> {
    let s = s.trim();
    s.parse::<usize>().map_err(|_| bad(format!("expected a non-negative integer, got `{s}`")))
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',').map(parse_count).collect()
}

/// Splits `s` at `sep` characters that are not nested inside parentheses.
fn split_top(s: &str, sep: char) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(bad("unbalanced `)`"));
                }
            }
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(bad("unbalanced `(`"));
    }
    out.push(&s[start..]);
    Ok(out)
}

impl FamilySpec {
    /// Parses the text form, e.g. `windmill:2;2,2`, `split:4,2`,
    /// `threshold:001101`, `join(complete:3,cycle:4)`, `hseq(complete:2|1,1)`.
    pub fn parse(text: &str) -> Result<Self> {
        let spec = Self::parse_depth(text.trim(), 0)?;
        spec.validate()?;
        Ok(spec)
    }

    fn parse_depth(text: &str, depth: usize) -> Result<Self> {
        if depth > 64 {
            return Err(bad("spec nested too deeply"));
        }
        if let Some(inner) = text.strip_prefix("join(") {
            let inner = inner.strip_suffix(')').ok_or_else(|| bad("`join(` without closing `)`"))?;
            // A new operand starts at a piece beginning with a letter, so that
            // list commas (`multipartite:2,3`) stay with their spec.
            let mut operands: Vec<String> = Vec::new();
            for piece in split_top(inner, ',')? {
                let starts_spec = piece.trim_start().chars().next().is_some_and(|c| c.is_ascii_alphabetic());
                match operands.last_mut() {
                    Some(last) if !starts_spec => {
                        last.push(',');
                        last.push_str(piece);
                    }
                    _ => operands.push(piece.to_string()),
                }
            }
            if operands.len() != 2 {
                return Err(bad(format!("join takes two operands, got {}", operands.len())));
            }
            let a = Self::parse_depth(operands[0].trim(), depth + 1)?;
            let b = Self::parse_depth(operands[1].trim(), depth + 1)?;
            return Ok(FamilySpec::Join(Box::new(a), Box::new(b)));
        }
        if let Some(inner) = text.strip_prefix("hseq(") {
            let inner = inner.strip_suffix(')').ok_or_else(|| bad("`hseq(` without closing `)`"))?;
            let parts = split_top(inner, '|')?;
            let seed = Self::parse_depth(parts[0].trim(), depth + 1)?;
            let mut steps = Vec::new();
            for p in &parts[1..] {
                let v = parse_list(p)?;
                let [s, t] = v[..] else {
                    return Err(bad(format!("hseq step `{p}` must be `s,t`")));
                };
                steps.push((s, t));
            }
            return Ok(FamilySpec::HSeq { seed: Box::new(seed), steps });
        }
        let (name, args) = text.split_once(':').ok_or_else(|| bad(format!("expected `name:args`, got `{text}`")))?;
        let spec = match name.trim() {
            "complete" => FamilySpec::Complete(parse_count(args)?),
            "empty" => FamilySpec::Empty(parse_count(args)?),
            "path" => FamilySpec::Path(parse_count(args)?),
            "cycle" => FamilySpec::Cycle(parse_count(args)?),
            "star" => FamilySpec::Star(parse_count(args)?),
            "multipartite" => FamilySpec::Multipartite(parse_list(args)?),
            "bipartite" => {
                let v = parse_list(args)?;
                if v.len() != 2 {
                    return Err(bad("bipartite takes exactly two part sizes"));
                }
                FamilySpec::Multipartite(v)
            }
            "windmill" => {
                let (core, parts) = args.split_once(';').ok_or_else(|| bad("windmill expects `n0;n1,n2,...`"))?;
                FamilySpec::Windmill { core: parse_count(core)?, parts: parse_list(parts)? }
            }
            "split" => {
                let v = parse_list(args)?;
                let [s, t] = v[..] else {
                    return Err(bad("split expects `s,t`"));
                };
                FamilySpec::Split { s, t }
            }
            "threshold" => {
                let bits = args
                    .chars()
                    .filter(|c| !c.is_whitespace() && *c != ',')
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(bad(format!("threshold bits must be 0 or 1, got `{c}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                FamilySpec::Threshold(bits)
            }
            "cocktail" => FamilySpec::Cocktail(parse_count(args)?),
            "g6" | "graph6" => FamilySpec::Graph6(args.trim().to_string()),
            other => return Err(bad(format!("unknown family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks parameter ranges and the size cap.
    pub fn validate(&self) -> Result<()> {
        let positive = |v: &[usize], what: &str| {
            if v.is_empty() || v.contains(&0) {
                Err(bad(format!("{what} sizes must be at least 1")))
            } else {
                Ok(())
            }
        };
        match self {
            FamilySpec::Complete(n) | FamilySpec::Empty(n) | FamilySpec::Path(n) => positive(&[*n], "vertex")?,
            FamilySpec::Cycle(n) if *n < 3 => return Err(bad("a cycle needs at least 3 vertices")),
            FamilySpec::Star(k) | FamilySpec::Cocktail(k) => positive(&[*k], "part")?,
            FamilySpec::Multipartite(p) => positive(p, "part")?,
            FamilySpec::Windmill { core, parts } => {
                positive(&[*core], "core")?;
                positive(parts, "part")?;
            }
            FamilySpec::Split { s, t } => positive(&[*s, *t], "split")?,
            FamilySpec::Threshold(bits) if bits.is_empty() => return Err(bad("threshold string is empty")),
            FamilySpec::Join(a, b) => {
                a.validate()?;
                b.validate()?;
            }
            FamilySpec::HSeq { seed, .. } => seed.validate()?,
            _ => {}
        }
        let n = self.order()?;
        if n > MAX_FAMILY_ORDER {
            return Err(bad(format!("{n} vertices exceeds the limit of {MAX_FAMILY_ORDER}")));
        }
        if let FamilySpec::Graph6(s) = self {
            crate::io::parse_graph6(s)?;
        }
        Ok(())
    }

    /// Vertex count, without building the graph.
    pub fn order(&self) -> Result<usize> {
        let overflow = || bad("vertex count overflows");
        let sum = |v: &[usize]| v.iter().try_fold(0usize, |a, &b| a.checked_add(b)).ok_or_else(overflow);
        Ok(match self {
            FamilySpec::Complete(n) | FamilySpec::Empty(n) | FamilySpec::Path(n) | FamilySpec::Cycle(n) => *n,
            FamilySpec::Star(k) => k.checked_add(1).ok_or_else(overflow)?,
            FamilySpec::Multipartite(p) => sum(p)?,
            FamilySpec::Windmill { core, parts } => sum(parts)?.checked_add(*core).ok_or_else(overflow)?,
            FamilySpec::Split { s, t } => s.checked_add(*t).ok_or_else(overflow)?,
            FamilySpec::Threshold(bits) => bits.len(),
            FamilySpec::Cocktail(k) => k.checked_mul(2).ok_or_else(overflow)?,
            FamilySpec::Join(a, b) => a.order()?.checked_add(b.order()?).ok_or_else(overflow)?,
            FamilySpec::HSeq { seed, steps } => {
                let mut n = seed.order()?;
                for &(s, t) in steps {
                    n = n.checked_add(s).and_then(|n| n.checked_add(t)).ok_or_else(overflow)?;
                }
                n
            }
            FamilySpec::Graph6(s) => crate::io::graph6_order(s)?,
            FamilySpec::Explicit(g) => g.n(),
        })
    }
}

/// Builds the graph of a spec. Parts are laid out in declaration order;
/// threshold vertices in creation order; joins put the left operand first
/// and add cross edges in lexicographic order.
pub fn gen_family(spec: &FamilySpec) -> Result<Graph> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::Complete(n) => named::complete(*n),
        FamilySpec::Empty(n) => Graph::empty(*n),
        FamilySpec::Path(n) => named::path(*n),
        FamilySpec::Cycle(n) => named::cycle(*n),
        FamilySpec::Star(k) => named::star(*k),
        FamilySpec::Multipartite(p) => named::complete_multipartite(p),
        FamilySpec::Windmill { core, parts } => {
            let mut rest = Graph::empty(0);
            for &p in parts {
                rest = rest.disjoint_union(&named::complete(p));
            }
            named::complete(*core).join(&rest)
        }
        FamilySpec::Split { s, t } => named::complete(*t).join(&Graph::empty(*s)),
        FamilySpec::Threshold(bits) => threshold_graph(bits),
        FamilySpec::Cocktail(k) => named::complete_multipartite(&vec![2; *k]),
        FamilySpec::Join(a, b) => gen_family(a)?.join(&gen_family(b)?),
        FamilySpec::HSeq { seed, steps } => {
            let mut g = gen_family(seed)?;
            for &(s, t) in steps {
                g = hseq_step(&g, s, t);
            }
            g
        }
        FamilySpec::Graph6(s) => crate::io::parse_graph6(s)?,
        FamilySpec::Explicit(g) => g.clone(),
    })
}

fn threshold_graph(bits: &[bool]) -> Graph {
    let mut g = Graph::empty(bits.len());
    for (v, &b) in bits.iter().enumerate().skip(1) {
        if b {
            for u in 0..v {
                g.add_edge(u, v).expect("threshold edges are simple");
            }
        }
    }
    g
}

fn hseq_step(g: &Graph, s: usize, t: usize) -> Graph {
    named::complete(s).join(&g.disjoint_union(&Graph::empty(t)))
}

fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The closed-form spectrum of a family, exact.
pub fn closed_form_spectrum(spec: &FamilySpec) -> Result<Spectrum> {
    spec.validate()?;
    let no = || Error::NoClosedForm(spec.to_string());
    let sp = match spec {
        FamilySpec::Complete(n) if *n >= 2 => Spectrum::exact([(*n as i64, choose2(*n))]),
        FamilySpec::Split { s, t } => {
            if *s == 1 {
                // K_t ∨ K_1 = K_{t+1}.
                Spectrum::exact([(*t as i64 + 1, choose2(t + 1))])
            } else {
                Spectrum::exact([((s + t) as i64, choose2(t + 1)), (*t as i64, (s - 1) * t)])
            }
        }
        FamilySpec::Windmill { core, parts } => windmill_spectrum(*core, parts),
        FamilySpec::Multipartite(p) if p.len() >= 2 => multipartite_spectrum(p),
        FamilySpec::Star(k) => multipartite_spectrum(&[1, *k]),
        FamilySpec::Cocktail(k) if *k >= 2 => multipartite_spectrum(&vec![2; *k]),
        FamilySpec::Threshold(bits) => threshold_spectrum_iterative(bits)?,
        _ => return Err(no()),
    };
    Ok(sp)
}

fn windmill_spectrum(n0: usize, parts: &[usize]) -> Spectrum {
    let k = parts.len();
    let n = n0 + parts.iter().sum::<usize>();
    let mut v = vec![(n as i64, n0 * (n0 + 1) / 2), (n0 as i64, n0 * (k - 1))];
    for &ni in parts {
        v.push(((n0 + ni) as i64, (2 * n0 + ni) * (ni - 1) / 2));
    }
    Spectrum::exact(v)
}

fn multipartite_spectrum(parts: &[usize]) -> Spectrum {
    let k = parts.len();
    let n: usize = parts.iter().sum();
    let mut v = vec![(n as i64, choose2(k))];
    for &ni in parts {
        v.push(((n - ni) as i64, (k - 1) * (ni - 1)));
    }
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (parts[i], parts[j]);
            v.push(((n - a - b) as i64, a * b + 1 - a - b));
        }
    }
    Spectrum::exact(v)
}

/// The block matrix with `(n_i+1) I` on the diagonal blocks and all-ones
/// blocks elsewhere.
pub fn n_matrix(parts: &[usize]) -> IntMatrix {
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (i, &p) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat(i).take(p));
    }
    let mut a = IntMatrix::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            a[(u, v)] = if u == v {
                parts[part_of[u]] as i64 + 1
            } else if part_of[u] != part_of[v] {
                1
            } else {
                0
            };
        }
    }
    a
}

/// `{n+1: 1, n_i+1: n_i−1, 1: k−1}`.
pub fn n_matrix_spectrum(parts: &[usize]) -> Result<Spectrum> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(bad("part sizes must be at least 1"));
    }
    let n: usize = parts.iter().sum();
    let mut v = vec![(n as i64 + 1, 1), (1, parts.len() - 1)];
    for &p in parts {
        v.push((p as i64 + 1, p - 1));
    }
    Ok(Spectrum::exact(v))
}

/// `diag(H(G₁)+n₂I, H(G₂)+n₁I, I⊗A(Ḡ₂) + A(Ḡ₁)⊗I + X)` with `X` diagonal,
/// `X_{(u,v)} = d₁(u) + d₂(v) + 2`, cross pairs indexed by `u·n₂ + v`.
/// Blocks of edgeless factors are empty.
pub fn join_block_matrix(g1: &Graph, g2: &Graph) -> Result<HelmholtzianMatrix> {
    let (n1, n2) = (g1.n(), g2.n());
    if n1 == 0 || n2 == 0 {
        return Err(bad("join factors need at least one vertex"));
    }
    let block = |g: &Graph, shift: usize| -> Result<IntMatrix> {
        if g.m() == 0 {
            return Ok(IntMatrix::zeros(0, 0));
        }
        Ok(build_h_direct(g, &canonical_orientation(g))?.matrix().shift_diagonal(shift as i64))
    };
    let top = block(g1, n2)?;
    let mid = block(g2, n1)?;
    let mut cross = IntMatrix::identity(n1)
        .kron(&g2.complement().adjacency_matrix())
        .add(&g1.complement().adjacency_matrix().kron(&IntMatrix::identity(n2)))?;
    for u in 0..n1 {
        for v in 0..n2 {
            cross[(u * n2 + v, u * n2 + v)] = (g1.degree(u) + g2.degree(v) + 2) as i64;
        }
    }
    HelmholtzianMatrix::new(IntMatrix::block_diagonal(&[&top, &mid, &cross]), Provenance::JoinBlock)
}

fn adjacency_eigenvalues(g: &Graph) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(g.adjacency_matrix().to_f64()).eigenvalues.iter().copied().collect();
    v.sort_unstable_by(|a, b| b.total_cmp(a));
    v
}

fn h_eigenvalues(g: &Graph) -> Result<Vec<f64>> {
    if g.m() == 0 {
        return Ok(Vec::new());
    }
    let h = build_h_direct(g, &canonical_orientation(g))?;
    Ok(eigen_decomposition(h.matrix())?.values)
}

/// Spectrum of `G₁ ∨ G₂` for regular factors from the factors' Helmholtzian
/// and adjacency spectra.
pub fn join_regular_spectrum(g1: &Graph, g2: &Graph, cluster_tol: f64) -> Result<Spectrum> {
    let r1 = g1.regularity().ok_or(Error::NotRegular)? as f64;
    let r2 = g2.regularity().ok_or(Error::NotRegular)? as f64;
    if g1.n() == 0 || g2.n() == 0 {
        return Err(bad("join factors need at least one vertex"));
    }
    let (n1, n2) = (g1.n() as f64, g2.n() as f64);
    // The leading adjacency eigenvalue r belongs to the all-ones vector.
    let mu1: Vec<f64> = adjacency_eigenvalues(g1).into_iter().skip(1).collect();
    let mu2: Vec<f64> = adjacency_eigenvalues(g2).into_iter().skip(1).collect();
    let mut values: Vec<f64> = Vec::new();
    values.extend(h_eigenvalues(g1)?.into_iter().map(|l| l + n2));
    values.extend(h_eigenvalues(g2)?.into_iter().map(|l| l + n1));
    values.push(n1 + n2);
    values.extend(mu2.iter().map(|m| n1 + r2 - m));
    values.extend(mu1.iter().map(|m| n2 + r1 - m));
    for a in &mu1 {
        for b in &mu2 {
            values.push(r1 + r2 - a - b);
        }
    }
    Ok(Spectrum::cluster(&values, cluster_tol))
}

/// Exact spectrum of a threshold graph by the add-a-vertex recursion,
/// tracking the Laplacian spectrum alongside.
pub fn threshold_spectrum_iterative(bits: &[bool]) -> Result<Spectrum> {
    let (h, _) = threshold_spectra(bits)?;
    Ok(Spectrum::exact(h.into_iter().map(|x| (x, 1))))
}

/// Helmholtzian and Laplacian eigenvalues (with repetition, exact) of the
/// threshold graph with creation sequence `bits`.
pub fn threshold_spectra(bits: &[bool]) -> Result<(Vec<i64>, Vec<i64>)> {
    if bits.is_empty() {
        return Err(bad("threshold string is empty"));
    }
    if !bits[1..].contains(&true) {
        return Err(Error::EmptyEdgeSet);
    }
    let mut h: Vec<i64> = Vec::new();
    let mut lap: Vec<i64> = vec![0];
    for (i, &b) in bits.iter().enumerate().skip(1) {
        let n = i as i64 + 1;
        if b {
            // Laplacian of the previous graph, decreasing; its last value is 0.
            lap.sort_unstable_by(|a, b| b.cmp(a));
            let top: Vec<i64> = lap[..lap.len() - 1].iter().map(|m| m + 1).collect();
            h = h.iter().map(|l| l + 1).chain(top.iter().copied()).chain([n]).collect();
            lap = top.into_iter().chain([n, 0]).collect();
        } else {
            lap.push(0);
        }
    }
    h.sort_unstable_by(|a, b| b.cmp(a));
    lap.sort_unstable_by(|a, b| b.cmp(a));
    Ok((h, lap))
}

/// `G₀ = seed`, `G_{i+1} = K_s ∨ (G_i ∪ tK_1)`. The seed must be both
/// H-integral and Laplacian-integral.
pub fn h_integral_sequence(seed: &Graph, steps: &[(usize, usize)], cluster_tol: f64) -> Result<Vec<Graph>> {
    if seed.m() > 0 {
        let h = build_h_direct(seed, &canonical_orientation(seed))?;
        if !h_integral_test(&h, cluster_tol)?.integral {
            return Err(Error::SeedNotIntegral("H"));
        }
    }
    if seed.n() > 0 && !laplacian_integral_test(seed, cluster_tol)?.integral {
        return Err(Error::SeedNotIntegral("Laplacian"));
    }
    let mut out = vec![seed.clone()];
    for &(s, t) in steps {
        let next = hseq_step(out.last().unwrap(), s, t);
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::poly::charpoly_exact;
    use crate::spectral::eigen_spectrum;

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    fn direct_spectrum(g: &Graph) -> Spectrum {
        eigen_spectrum(&build_h_direct(g, &canonical_orientation(g)).unwrap(), 1e-8).unwrap()
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in [
            "complete:4",
            "windmill:2;2,2",
            "split:4,2",
            "threshold:001101",
            "multipartite:2,3,1",
            "join(complete:3,cycle:4)",
            "join(multipartite:2,3,join(empty:1,empty:2))",
            "hseq(complete:2|1,1|2,0)",
            "cocktail:3",
            "g6:Bw",
        ] {
            let spec = FamilySpec::parse(text).unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!(FamilySpec::parse("bipartite:2,3").unwrap(), FamilySpec::Multipartite(vec![2, 3]));
        for bad in ["", "complete", "complete:x", "cycle:2", "split:1", "join(complete:2)", "join(complete:2", "threshold:", "threshold:012", "multipartite:2,0", "complete:5000", "nope:3"] {
            assert!(FamilySpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn generated_graphs() {
        assert_eq!(gen_family(&FamilySpec::Complete(4)).unwrap().m(), 6);
        let star = gen_family(&FamilySpec::Threshold(bits("001"))).unwrap();
        assert_eq!(star.edges(), &[(0, 2), (1, 2)]);
        assert_eq!(gen_family(&FamilySpec::Split { s: 3, t: 2 }).unwrap().m(), 7);
        let w = gen_family(&FamilySpec::parse("windmill:2;2,2").unwrap()).unwrap();
        assert_eq!((w.n(), w.m()), (6, 11));
        let h = gen_family(&FamilySpec::parse("hseq(complete:2|1,1)").unwrap()).unwrap();
        assert_eq!((h.n(), h.m()), (4, 4));
    }

    #[test]
    fn closed_forms() {
        let sp = closed_form_spectrum(&FamilySpec::Split { s: 4, t: 2 }).unwrap();
        assert_eq!(sp, Spectrum::exact([(6, 3), (2, 6)]));
        let sp = closed_form_spectrum(&FamilySpec::Multipartite(vec![2, 3])).unwrap();
        assert_eq!(sp, Spectrum::exact([(5, 1), (3, 1), (2, 2), (0, 2)]));
        let sp = closed_form_spectrum(&FamilySpec::parse("windmill:2;2,2").unwrap()).unwrap();
        assert_eq!(sp, Spectrum::exact([(6, 3), (4, 6), (2, 2)]));
        assert_eq!(closed_form_spectrum(&FamilySpec::Split { s: 1, t: 3 }).unwrap(), Spectrum::exact([(4, 6)]));
        assert!(matches!(closed_form_spectrum(&FamilySpec::Path(4)), Err(Error::NoClosedForm(_))));
        for spec in ["split:4,2", "multipartite:2,3", "windmill:2;2,2", "windmill:1;3,1,2", "multipartite:1,2,3,3", "cocktail:3", "star:4"] {
            let spec = FamilySpec::parse(spec).unwrap();
            let g = gen_family(&spec).unwrap();
            let cf = closed_form_spectrum(&spec).unwrap();
            assert_eq!(cf.total(), g.m());
            assert!(cf.matches(&direct_spectrum(&g), 1e-8), "{spec}");
        }
    }

    #[test]
    fn n_matrix_spectra() {
        assert_eq!(n_matrix_spectrum(&[1, 1]).unwrap(), Spectrum::exact([(3, 1), (1, 1)]));
        assert_eq!(n_matrix_spectrum(&[3]).unwrap(), Spectrum::exact([(4, 3)]));
        let want = n_matrix_spectrum(&[2, 2]).unwrap();
        assert_eq!(want, Spectrum::exact([(5, 1), (3, 2), (1, 1)]));
        let h = HelmholtzianMatrix::new(n_matrix(&[2, 2]), Provenance::Direct).unwrap();
        assert!(eigen_spectrum(&h, 1e-8).unwrap().matches(&want, 1e-9));
    }

    #[test]
    fn join_blocks() {
        let k1 = complete(1);
        assert_eq!(join_block_matrix(&k1, &k1).unwrap().matrix().to_rows(), vec![vec![2]]);
        for (a, b) in [(complete(1), Graph::empty(2)), (Graph::empty(2), Graph::empty(2)), (complete(3), cycle(4)), (path(3), star(2))] {
            let j = a.join(&b);
            let direct = build_h_direct(&j, &canonical_orientation(&j)).unwrap();
            let block = join_block_matrix(&a, &b).unwrap();
            assert_eq!(charpoly_exact(block.matrix()), charpoly_exact(direct.matrix()));
        }
        let c4 = Graph::empty(2).join(&Graph::empty(2));
        assert_eq!(charpoly_exact(join_block_matrix(&Graph::empty(2), &Graph::empty(2)).unwrap().matrix()), charpoly_exact(build_h_direct(&c4, &canonical_orientation(&c4)).unwrap().matrix()));
    }

    #[test]
    fn regular_joins() {
        let k1 = complete(1);
        assert!(join_regular_spectrum(&k1, &k1, 1e-8).unwrap().matches(&Spectrum::exact([(2, 1)]), 1e-9));
        let e3 = Graph::empty(3);
        let sp = join_regular_spectrum(&e3, &e3, 1e-8).unwrap();
        assert!(sp.matches(&Spectrum::exact([(6, 1), (3, 4), (0, 4)]), 1e-9), "{sp:?}");
        let c3 = cycle(3);
        let sp = join_regular_spectrum(&c3, &c3, 1e-8).unwrap();
        assert!(sp.matches(&direct_spectrum(&c3.join(&c3)), 1e-8));
        assert_eq!(join_regular_spectrum(&path(3), &c3, 1e-8), Err(Error::NotRegular));
    }

    #[test]
    fn threshold_recursion() {
        let sp = threshold_spectrum_iterative(&bits("001101")).unwrap();
        assert_eq!(sp, Spectrum::exact([(6, 1), (5, 5), (3, 3), (1, 1)]));
        assert_eq!(threshold_spectrum_iterative(&bits("01")).unwrap(), Spectrum::exact([(2, 1)]));
        assert_eq!(threshold_spectrum_iterative(&bits("0011")).unwrap(), Spectrum::exact([(4, 3), (2, 2)]));
        let (_, lap) = threshold_spectra(&bits("00110")).unwrap();
        assert_eq!(lap, vec![4, 4, 2, 0, 0]);
        assert_eq!(threshold_spectrum_iterative(&bits("000")), Err(Error::EmptyEdgeSet));
    }

    #[test]
    fn integral_sequences() {
        let seq = h_integral_sequence(&complete(2), &[(1, 1)], 1e-8).unwrap();
        let last = seq.last().unwrap();
        assert!(h_integral_test(&build_h_direct(last, &canonical_orientation(last)).unwrap(), 1e-8).unwrap().integral);
        let seq = h_integral_sequence(&complete(3), &[], 1e-8).unwrap();
        assert_eq!(seq.len(), 1);
        let star = gen_family(&FamilySpec::Threshold(bits("001"))).unwrap();
        let seq = h_integral_sequence(&star, &[(2, 0)], 1e-8).unwrap();
        let g = &seq[1];
        assert!(h_integral_test(&build_h_direct(g, &canonical_orientation(g)).unwrap(), 1e-8).unwrap().integral);
        assert_eq!(h_integral_sequence(&path(4), &[(1, 1)], 1e-8), Err(Error::SeedNotIntegral("H")));
    }
}
