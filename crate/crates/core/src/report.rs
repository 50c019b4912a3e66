//! Command dispatch and machine-readable reports.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::families::{closed_form_spectrum, gen_family, FamilySpec};
use crate::graph::Graph;
use crate::helmholtzian::build_h_direct;
use crate::incidence::{canonical_orientation, Orientation};
use crate::io::{parse_edgelist, parse_graph6};
use crate::poly::charpoly_exact;
use crate::spectral::{eigen_spectrum, least_eigenvalue_bounds, nullity_formula, nullity_rank, Spectrum};
use crate::verify::{all_pass, verify_family, verify_graph, Check, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Matrix,
    Spectrum,
    Charpoly,
    Nullity,
    Triangles,
    Bounds,
    Family,
    Verify,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Matrix,
        Command::Spectrum,
        Command::Charpoly,
        Command::Nullity,
        Command::Triangles,
        Command::Bounds,
        Command::Family,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Matrix => "matrix",
            Command::Spectrum => "spectrum",
            Command::Charpoly => "charpoly",
            Command::Nullity => "nullity",
            Command::Triangles => "triangles",
            Command::Bounds => "bounds",
            Command::Family => "family",
            Command::Verify => "verify",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Plain,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "plain" => Ok(Format::Plain),
            _ => Err(format!("unknown format `{s}` (expected json, csv or plain)")),
        }
    }
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    /// Edge-list text, with the file name it came from.
    EdgeList { source: String, text: String },
    Graph6(String),
    Family(String),
}

/// A graph ready for a command.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub graph: Graph,
    pub orientation: Orientation,
    pub spec: Option<FamilySpec>,
    pub descriptor: Value,
}

pub fn load(input: &Input) -> Result<Loaded> {
    let (graph, orientation, spec, mut descriptor) = match input {
        Input::EdgeList { source, text } => {
            let el = parse_edgelist(text)?;
            let mut d = json!({ "kind": "edgelist", "source": source });
            if let Some(names) = &el.names {
                d["names"] = json!(names);
            }
            (el.graph, el.orientation, None, d)
        }
        Input::Graph6(s) => {
            let g = parse_graph6(s)?;
            let o = canonical_orientation(&g);
            (g, o, None, json!({ "kind": "graph6", "value": s.trim() }))
        }
        Input::Family(text) => {
            let spec = FamilySpec::parse(text)?;
            let g = gen_family(&spec)?;
            let o = canonical_orientation(&g);
            let d = json!({ "kind": "family", "spec": spec.to_string() });
            (g, o, Some(spec), d)
        }
    };
    descriptor["n"] = json!(graph.n());
    descriptor["m"] = json!(graph.m());
    Ok(Loaded { graph, orientation, spec, descriptor })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Timings {
    pub load_ms: f64,
    pub compute_ms: f64,
}

/// The report printed for every command. All five keys are always present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub input: Value,
    pub command: Command,
    pub results: Value,
    pub checks: Vec<Check>,
    pub timings: Timings,
}

impl RunReport {
    /// False when any check failed.
    pub fn passed(&self) -> bool {
        all_pass(&self.checks)
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Loads the input and runs one command.
pub fn run_command(cmd: Command, input: &Input, opts: &VerifyOptions) -> Result<RunReport> {
    let t0 = Instant::now();
    let loaded = load(input)?;
    let load_ms = ms(t0);
    let t1 = Instant::now();
    let (results, checks) = compute(cmd, &loaded, opts)?;
    Ok(RunReport {
        input: loaded.descriptor,
        command: cmd,
        results,
        checks,
        timings: Timings { load_ms, compute_ms: ms(t1) },
    })
}

fn spectrum_json(sp: &Spectrum, provenance: &str, tol: Option<f64>) -> Value {
    let mut v = json!({ "spectrum": sp, "provenance": provenance });
    if let Some(t) = tol {
        v["cluster_tol"] = json!(t);
    }
    v
}

fn compute(cmd: Command, l: &Loaded, opts: &VerifyOptions) -> Result<(Value, Vec<Check>)> {
    let (g, o) = (&l.graph, &l.orientation);
    let tol = opts.cluster_tol;
    let results = match cmd {
        Command::Matrix => {
            let h = if g.m() == 0 { Vec::new() } else { build_h_direct(g, o)?.matrix().to_rows() };
            json!({ "dim": g.m(), "matrix": h, "provenance": "exact" })
        }
        Command::Spectrum => {
            if let Some(Ok(sp)) = l.spec.as_ref().map(closed_form_spectrum) {
                spectrum_json(&sp, "closed_form", None)
            } else if g.m() == 0 {
                spectrum_json(&Spectrum::exact([]), "exact", None)
            } else {
                spectrum_json(&eigen_spectrum(&build_h_direct(g, o)?, tol)?, "eigensolve", Some(tol))
            }
        }
        Command::Charpoly => {
            let coeffs = if g.m() == 0 {
                json!(["1"])
            } else {
                json!(charpoly_exact(build_h_direct(g, o)?.matrix()))
            };
            json!({ "coefficients": coeffs, "provenance": "exact" })
        }
        Command::Nullity => {
            if g.m() == 0 {
                json!({ "rank": 0, "formula": null, "formula_valid": false })
            } else {
                let f = nullity_formula(g)?;
                json!({
                    "rank": nullity_rank(g, o)?,
                    "formula": f.value,
                    "formula_valid": f.valid,
                    "rank_c": f.rank_c,
                    "triangles": f.triangles,
                })
            }
        }
        Command::Triangles => {
            let tris: Vec<[usize; 3]> = g.enumerate_triangles().iter().map(|t| t.0).collect();
            let vertex: Vec<usize> = (0..g.n()).map(|u| g.triangle_degree_vertex(u).unwrap()).collect();
            json!({
                "count": tris.len(),
                "triangles": tris,
                "edge_triangle_degrees": g.edge_triangle_degrees(),
                "vertex_triangle_degrees": vertex,
            })
        }
        Command::Bounds => {
            let h = build_h_direct(g, o)?;
            let lb = least_eigenvalue_bounds(g, o, &h, tol)?;
            json!({
                "lambda_min": lb.lambda_min,
                "bound_i": lb.bound_i,
                "bound_ii": lb.bound_ii,
                "holds_i": lb.holds_i,
                "holds_ii": lb.holds_ii,
                "equality_i": lb.equality_i,
                "complete": lb.complete,
                "tolerance": tol,
            })
        }
        Command::Family => {
            let spec = l.spec.as_ref().ok_or_else(|| Error::InvalidFamily("the family command needs --family".into()))?;
            let closed = match closed_form_spectrum(spec) {
                Ok(sp) => json!(sp),
                Err(Error::NoClosedForm(_)) => Value::Null,
                Err(e) => return Err(e),
            };
            let numeric = if g.m() == 0 {
                Value::Null
            } else {
                json!(eigen_spectrum(&build_h_direct(g, o)?, tol)?)
            };
            json!({
                "spec": spec.to_string(),
                "edges": g.edges(),
                "closed_form": closed,
                "eigensolve": numeric,
                "cluster_tol": tol,
            })
        }
        Command::Verify => {
            let checks = match &l.spec {
                Some(spec) => verify_family(spec, opts)?,
                None => verify_graph(g, o, opts),
            };
            let count = |s| checks.iter().filter(|c| c.status == s).count();
            use crate::verify::Status;
            let summary = json!({
                "passed": count(Status::Pass),
                "failed": count(Status::Fail),
                "skipped": count(Status::Skipped),
            });
            return Ok((summary, checks));
        }
    };
    Ok((results, Vec::new()))
}

/// Renders a report. JSON is the full report; CSV and plain print the main
/// result table only (matrix rows, spectrum entries, coefficients).
pub fn render(report: &RunReport, format: Format) -> String {
    if format == Format::Json {
        return serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    }
    let sep = if format == Format::Csv { "," } else { " " };
    let mut out = String::new();
    let r = &report.results;
    let cell = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match report.command {
        Command::Matrix => {
            for row in r["matrix"].as_array().into_iter().flatten() {
                let cells: Vec<String> = row.as_array().into_iter().flatten().map(cell).collect();
                writeln!(out, "{}", cells.join(sep)).unwrap();
            }
        }
        Command::Spectrum | Command::Family => {
            let sp = if report.command == Command::Spectrum { &r["spectrum"] } else { &r["eigensolve"] };
            if format == Format::Csv {
                out.push_str("value,multiplicity\n");
            }
            for (k, v) in sp.as_object().into_iter().flatten() {
                writeln!(out, "{k}{sep}{v}").unwrap();
            }
        }
        Command::Charpoly => {
            let cells: Vec<String> = r["coefficients"].as_array().into_iter().flatten().map(cell).collect();
            writeln!(out, "{}", cells.join(sep)).unwrap();
        }
        Command::Verify => {
            if format == Format::Csv {
                out.push_str("module,check,status,detail\n");
            }
            for c in &report.checks {
                let status = serde_json::to_value(c.status).unwrap();
                let detail = if format == Format::Csv { format!("\"{}\"", c.detail.replace('"', "\"\"")) } else { c.detail.clone() };
                writeln!(out, "{}{sep}{}{sep}{}{sep}{}", c.module, c.name, cell(&status), detail).unwrap();
            }
        }
        _ => {
            for (k, v) in r.as_object().into_iter().flatten() {
                writeln!(out, "{k}{sep}{}", cell(v)).unwrap();
            }
        }
    }
    out
}
