//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any fails. Built with `harness = false` so the
//! summary is always visible under `cargo test`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hodge_core::combinatorics::{all_coeffs_oracle, coeffs_closed_form, DEFAULT_ORACLE_BUDGET};
use hodge_core::corpus::{self, all_graphs, connected_graphs, random_connected, random_connected_up_to, random_gnp};
use hodge_core::families::{
    closed_form_spectrum, gen_family, join_block_matrix, join_regular_spectrum, threshold_spectrum_iterative, FamilySpec,
};
use hodge_core::graph::named;
use hodge_core::helmholtzian::{build_h_direct, build_h_factored, quadratic_form, rayleigh_inequalities};
use hodge_core::incidence::{build_b, build_c, canonical_orientation, Orientation};
use hodge_core::io::parse_edgelist;
use hodge_core::poly::{charpoly_exact, CharPoly};
use hodge_core::spectral::{
    distinct_count_and_diameter_check, eigen_decomposition, eigen_spectrum, h_integral_test, least_eigenvalue_bounds,
    null_vector_residuals, nullity_formula, nullity_rank, spectral_projectors, Spectrum,
};
use hodge_core::Graph;
use rand::Rng;

const TOL: f64 = 1e-8;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, checked: usize, what: &str) -> Outcome {
    if failures.is_empty() {
        Outcome { ok: true, detail: format!("{checked} {what}") }
    } else {
        let shown: Vec<&String> = failures.iter().take(3).collect();
        Outcome { ok: false, detail: format!("{} of {checked} {what} failed; first: {shown:?}", failures.len()) }
    }
}

/// Connected graphs on at most 6 vertices plus 200 seeded random connected
/// graphs on at most 12 vertices.
fn corpus_graphs() -> Vec<Graph> {
    let mut out = connected_graphs(6, 15);
    let mut rng = corpus::rng(42);
    out.extend((0..200).map(|_| random_connected_up_to(&mut rng, 12)));
    out
}

fn h_of(g: &Graph, o: &Orientation) -> hodge_core::HelmholtzianMatrix {
    build_h_direct(g, o).expect("corpus graphs have edges")
}

fn c1_worked_example() -> Outcome {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/worked_example.edgelist");
    let el = parse_edgelist(&fs::read_to_string(path).unwrap()).unwrap();
    let h = h_of(&el.graph, &el.orientation);
    let want: Vec<Vec<i64>> = named::WORKED_EXAMPLE_H.iter().map(|r| r.to_vec()).collect();
    let poly = charpoly_exact(h.matrix());
    let ok_h = h.matrix().to_rows() == want;
    let ok_p = poly == CharPoly::from_i64(&named::WORKED_EXAMPLE_CHARPOLY).unwrap();
    Outcome { ok: ok_h && ok_p, detail: format!("matrix {}, charpoly {poly}", if ok_h { "exact" } else { "differs" }) }
}

fn c2_coefficient_formulas() -> Outcome {
    let cf = coeffs_closed_form(&named::worked_example()).unwrap();
    let got = [cf.c1, cf.c2, cf.c3, cf.pair_sum, cf.line_graph_edges, cf.three_t, cf.c31, cf.c32, cf.c33];
    let want = [-21, 178, -802, 195, 20, 3, -1051, 281, -32];
    let mut failures = Vec::new();
    if got != want {
        failures.push(format!("worked example gives {got:?}"));
    }
    let mut rng = corpus::rng(2);
    let mut checked = 0;
    while checked < 200 {
        let n = rng.gen_range(2..=9);
        let p = rng.gen_range(0.2..0.9);
        let g = random_gnp(&mut rng, n, p);
        if g.m() == 0 {
            continue;
        }
        checked += 1;
        let cf = coeffs_closed_form(&g).unwrap();
        let p = charpoly_exact(h_of(&g, &canonical_orientation(&g)).matrix());
        let coeff = |k: usize| if k <= p.degree() { p.coeff(k).clone() } else { 0.into() };
        if [cf.c1, cf.c2, cf.c3].iter().enumerate().any(|(i, &c)| coeff(i + 1) != c.into()) {
            failures.push(format!("{:?}", g.edges()));
        }
    }
    outcome(failures, checked, "random graphs plus the worked example intermediates")
}

fn c3_basic_subgraph_oracle() -> Outcome {
    let mut graphs = connected_graphs(8, 7);
    let mut rng = corpus::rng(3);
    graphs.extend((0..50).map(|_| {
        let n = rng.gen_range(5..=9);
        random_connected(&mut rng, n, 8)
    }));
    let mut failures = Vec::new();
    for g in &graphs {
        let o = Orientation::random(g, &mut rng);
        let oracle = all_coeffs_oracle(g, &o, DEFAULT_ORACLE_BUDGET);
        let exact = charpoly_exact(h_of(g, &o).matrix());
        if oracle.as_ref() != Ok(&exact) {
            failures.push(format!("{:?}: {oracle:?}", g.edges()));
        }
    }
    outcome(failures, graphs.len(), "graphs, all coefficients")
}

fn c4_construction_equivalence(corpus: &[Graph]) -> Outcome {
    let mut rng = corpus::rng(4);
    let mut failures = Vec::new();
    for g in corpus {
        let o = Orientation::random(g, &mut rng);
        let same = h_of(g, &o).matrix() == build_h_factored(g, &o).unwrap().matrix();
        let cb = build_c(g, &o).unwrap().mul(&build_b(g, &o).unwrap()).unwrap().is_zero();
        if !(same && cb) {
            failures.push(format!("{:?}", g.edges()));
        }
    }
    outcome(failures, corpus.len(), "corpus graphs")
}

fn c5_orientation_invariance(corpus: &[Graph]) -> Outcome {
    let mut rng = corpus::rng(5);
    let mut failures = Vec::new();
    for g in corpus {
        for _ in 0..20 {
            let a = Orientation::random(g, &mut rng);
            let b = Orientation::random(g, &mut rng);
            if charpoly_exact(h_of(g, &a).matrix()) != charpoly_exact(h_of(g, &b).matrix()) {
                failures.push(format!("{:?}", g.edges()));
                break;
            }
        }
    }
    outcome(failures, corpus.len(), "corpus graphs x 20 orientation pairs")
}

fn c6_nullity(corpus: &[Graph]) -> Outcome {
    let mut failures = Vec::new();
    for g in corpus {
        let o = canonical_orientation(g);
        let h = h_of(g, &o);
        let rank = nullity_rank(g, &o).unwrap();
        let trailing = charpoly_exact(h.matrix()).trailing_zeros();
        let eig = eigen_decomposition(h.matrix()).unwrap();
        let scale = eig.values[0].abs().max(1.0);
        let float_zero = eig.values.iter().filter(|x| x.abs() <= TOL * scale).count();
        let f = nullity_formula(g).unwrap();
        if rank != trailing || rank != float_zero || (f.valid && f.value != rank as i64) {
            failures.push(format!("{:?}: rank {rank}, charpoly {trailing}, float {float_zero}, formula {f:?}", g.edges()));
        }
    }
    let mut flagged = Vec::new();
    for (name, g) in [("K4", named::complete(4)), ("K222", named::complete_multipartite(&[2, 2, 2]))] {
        let f = nullity_formula(&g).unwrap();
        let rank = nullity_rank(&g, &canonical_orientation(&g)).unwrap();
        if f.value != -1 || rank != 0 || f.valid {
            failures.push(format!("{name}: formula {}, rank {rank}, valid {}", f.value, f.valid));
        }
        flagged.push(format!("{name} formula {} vs rank {rank} (rank C = {}, t = {}) flagged", f.value, f.rank_c, f.triangles));
    }
    let mut o = outcome(failures, corpus.len(), "corpus graphs");
    o.detail = format!("{}; {}", o.detail, flagged.join("; "));
    o
}

fn c7_family_spectra() -> Outcome {
    let mut specs: Vec<FamilySpec> = Vec::new();
    specs.extend((2..=8).map(FamilySpec::Complete));
    for s in 1..=5 {
        for t in 1..=4 {
            specs.push(FamilySpec::Split { s, t });
        }
    }
    for core in 1..=3 {
        for k in 1..=3usize {
            // Every multiset of k part sizes from 1..=3.
            let mut parts = vec![1usize; k];
            loop {
                specs.push(FamilySpec::Windmill { core, parts: parts.clone() });
                let Some(i) = (0..k).rev().find(|&i| parts[i] < 3) else { break };
                let v = parts[i] + 1;
                for p in &mut parts[i..] {
                    *p = v;
                }
            }
        }
    }
    for k in 2..=4usize {
        let mut parts = vec![1usize; k];
        loop {
            specs.push(FamilySpec::Multipartite(parts.clone()));
            let Some(i) = (0..k).rev().find(|&i| parts[i] < 3) else { break };
            let v = parts[i] + 1;
            for p in &mut parts[i..] {
                *p = v;
            }
        }
    }
    for a in 1..=5 {
        for b in a..=5 {
            specs.push(FamilySpec::parse(&format!("bipartite:{a},{b}")).unwrap());
        }
    }
    let mut failures = Vec::new();
    for spec in &specs {
        let g = gen_family(spec).unwrap();
        let cf = closed_form_spectrum(spec).unwrap();
        let numeric = eigen_spectrum(&h_of(&g, &canonical_orientation(&g)), TOL).unwrap();
        if cf.total() != g.m() || !cf.matches(&numeric, TOL) {
            failures.push(format!("{spec}: closed {cf:?} vs {numeric:?}"));
        }
    }
    outcome(failures, specs.len(), "family members")
}

fn c8_threshold() -> Outcome {
    let bits = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<_>>();
    let mut failures = Vec::new();
    let example = threshold_spectrum_iterative(&bits("001101")).unwrap();
    if example != Spectrum::exact([(6, 1), (5, 5), (3, 3), (1, 1)]) {
        failures.push(format!("001101 gives {example:?}"));
    }
    let mut checked = 0;
    for len in 2..=8usize {
        for mask in 0u32..(1 << (len - 1)) {
            // Bit 0 is the initial vertex; the remaining bits come from the mask.
            let b: Vec<bool> = std::iter::once(false).chain((0..len - 1).map(|i| mask >> i & 1 == 1)).collect();
            if !b.contains(&true) {
                continue;
            }
            checked += 1;
            let spec = FamilySpec::Threshold(b.clone());
            let g = gen_family(&spec).unwrap();
            let h = h_of(&g, &canonical_orientation(&g));
            let numeric = eigen_spectrum(&h, TOL).unwrap();
            let iter = threshold_spectrum_iterative(&b).unwrap();
            if !iter.matches(&numeric, TOL) || !h_integral_test(&h, TOL).unwrap().integral {
                failures.push(spec.to_string());
            }
        }
    }
    outcome(failures, checked, "threshold graphs plus the worked example")
}

fn c9_join() -> Outcome {
    let mut failures = Vec::new();
    let small: Vec<Graph> = (1..=5).flat_map(all_graphs).collect();
    let mut pairs: Vec<(Graph, Graph)> = Vec::new();
    for a in &small {
        for b in &small {
            pairs.push((a.clone(), b.clone()));
        }
    }
    // Splits with a factor of order 6..=9 are sampled.
    let mut rng = corpus::rng(9);
    for n1 in 6..=9usize {
        for n2 in 1..=10 - n1 {
            for _ in 0..10 {
                let p = rng.gen_range(0.0..1.0);
                let a = random_gnp(&mut rng, n1, p);
                let b = random_gnp(&mut rng, n2, p);
                if rng.gen_bool(0.5) {
                    pairs.push((a, b));
                } else {
                    pairs.push((b, a));
                }
            }
        }
    }
    for (a, b) in &pairs {
        let j = a.join(b);
        let direct = charpoly_exact(h_of(&j, &canonical_orientation(&j)).matrix());
        let block = charpoly_exact(join_block_matrix(a, b).unwrap().matrix());
        if direct != block {
            failures.push(format!("{:?} v {:?}", a.edges(), b.edges()));
        }
    }
    let regular: Vec<(String, Graph)> = (3..=6)
        .map(|n| (format!("C{n}"), named::cycle(n)))
        .chain((1..=5).map(|n| (format!("K{n}"), named::complete(n))))
        .chain((2..=3).map(|k| (format!("CP{k}"), named::complete_multipartite(&vec![2; k]))))
        .collect();
    let mut regular_pairs = 0;
    for (na, a) in &regular {
        for (nb, b) in &regular {
            regular_pairs += 1;
            let j = a.join(b);
            let numeric = eigen_spectrum(&h_of(&j, &canonical_orientation(&j)), TOL).unwrap();
            let closed = join_regular_spectrum(a, b, TOL).unwrap();
            if !closed.matches(&numeric, TOL) {
                failures.push(format!("{na} v {nb}: {closed:?} vs {numeric:?}"));
            }
        }
    }
    outcome(failures, pairs.len() + regular_pairs, "block-form pairs and regular pairs")
}

fn c10_classification() -> Outcome {
    let graphs = connected_graphs(6, 15);
    let mut failures = Vec::new();
    let (mut ones, mut twos) = (0, 0);
    for g in &graphs {
        let sp = eigen_spectrum(&h_of(g, &canonical_orientation(g)), TOL).unwrap();
        let dc = distinct_count_and_diameter_check(g, &sp).unwrap();
        ones += (dc.distinct == 1) as usize;
        twos += (dc.distinct == 2) as usize;
        if !dc.ok() {
            failures.push(format!("{:?}: {dc:?}", g.edges()));
        }
    }
    let mut o = outcome(failures, graphs.len(), "connected graphs");
    o.detail = format!("{}; {ones} with one value, {twos} with two", o.detail);
    o
}

fn c11_bounds_and_projectors(corpus: &[Graph]) -> Outcome {
    let mut failures = Vec::new();
    let mut equality = 0;
    let mut fallback = 0;
    for g in corpus {
        let o = canonical_orientation(g);
        let h = h_of(g, &o);
        let lb = least_eigenvalue_bounds(g, &o, &h, TOL).unwrap();
        equality += lb.equality_i as usize;
        if !lb.ok() {
            failures.push(format!("{:?}: bounds {lb:?}", g.edges()));
        }
        let eig = eigen_decomposition(h.matrix()).unwrap();
        let sp = Spectrum::cluster(&eig.values, TOL);
        match spectral_projectors(&h, &sp) {
            Ok((_, rep)) => {
                fallback += (!rep.direct_products) as usize;
                if !rep.within(1e-6 * g.m() as f64) {
                    failures.push(format!("{:?}: projectors {rep:?}", g.edges()));
                }
            }
            Err(e) => failures.push(format!("{:?}: projectors {e}", g.edges())),
        }
        if let Some((rb, rc)) = null_vector_residuals(g, &o, &eig, TOL).unwrap() {
            if rb > 1e-8 || rc > 1e-8 {
                failures.push(format!("{:?}: null residuals {rb:e} {rc:e}", g.edges()));
            }
        }
    }
    let mut o = outcome(failures, corpus.len(), "connected corpus graphs");
    o.detail = format!("{}; equality in (i) on {equality}; {fallback} projector families via eigenvectors", o.detail);
    o
}

fn c12_quadratic_form(corpus: &[Graph]) -> Outcome {
    let mut rng = corpus::rng(12);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for g in corpus {
        let o = Orientation::random(g, &mut rng);
        let h = h_of(g, &o);
        for _ in 0..100 {
            let x: Vec<f64> = (0..g.m()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q = quadratic_form(g, &o, &h, &x).unwrap();
            worst = worst.max(q.relative_error);
            let (tri, vert) = rayleigh_inequalities(g, &o, &x).unwrap();
            if !q.agrees(1e-9) || !tri.holds(1e-9) || !vert.holds(1e-9) {
                failures.push(format!("{:?}: {q:?} {tri:?} {vert:?}", g.edges()));
                break;
            }
        }
    }
    let mut o = outcome(failures, corpus.len(), "corpus graphs x 100 vectors");
    o.detail = format!("{}; worst identity error {worst:.1e}", o.detail);
    o
}

fn main() -> ExitCode {
    let corpus = corpus_graphs();
    let criteria: Vec<(&str, Option<Duration>, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("worked example golden matrix and charpoly", Some(Duration::from_secs(1)), Box::new(c1_worked_example)),
        ("closed-form c1, c2, c3", Some(Duration::from_secs(30)), Box::new(c2_coefficient_formulas)),
        ("basic-subgraph coefficient oracle", None, Box::new(c3_basic_subgraph_oracle)),
        ("direct = factored and CB = 0", None, Box::new(|| c4_construction_equivalence(&corpus))),
        ("orientation invariance", None, Box::new(|| c5_orientation_invariance(&corpus))),
        ("nullity", None, Box::new(|| c6_nullity(&corpus))),
        ("family closed-form spectra", None, Box::new(c7_family_spectra)),
        ("threshold recursion and integrality", None, Box::new(c8_threshold)),
        ("join block form and regular joins", None, Box::new(c9_join)),
        ("one/two-value classification and diameter", Some(Duration::from_secs(300)), Box::new(c10_classification)),
        ("least-eigenvalue bounds, projectors, null vectors", None, Box::new(|| c11_bounds_and_projectors(&corpus))),
        ("quadratic form identity and inequalities", None, Box::new(|| c12_quadratic_form(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut o = run();
        let elapsed = t.elapsed();
        if let Some(limit) = limit {
            if elapsed > *limit {
                o.ok = false;
                o.detail = format!("{} (over the {:?} limit)", o.detail, limit);
            }
        }
        failed += (!o.ok) as usize;
        println!(
            "criterion {:>2} {} {name}: {} [{:.2}s]",
            i + 1,
            if o.ok { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
