use std::f64::consts::PI;
use std::fmt::Write;
use std::path::{Path, PathBuf};

use hyperideal_core::regular::regular_simplex_check;
use hyperideal_core::circles::{config_from_realization, koebe_continuation, KoebeOptions};
use hyperideal_core::combinatorics::{check_all, TOL_ANGLE};
use hyperideal_core::simplex::{admissible_simplex_angles, stratum_basis, HyperidealSimplex, EDGES, TOL_SUM};
use hyperideal_core::solver::{realize, RealizeOptions};

use crate::document::{CellulationDocument, CircleConfigDocument, Parsed, RealizationDocument};
use crate::error::{CliError, Result};
use crate::svg::{emit_svg, SvgOptions};

/// Text report and exit status of a successful run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: String,
    pub code: i32,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome { report, code: 0 }
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_cellulation(path: &Path) -> Result<Parsed> {
    CellulationDocument::from_json(&read_text(path)?)?.parse()
}

/// Parse an angle: a number, or `pi` with an optional factor and divisor
/// (`2pi/3`, `pi/2`, `0.5pi`).
pub fn parse_angle(s: &str, degrees: bool) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let bad = || CliError::Parse(format!("bad angle {s:?}"));
    if let Some(i) = t.find("pi") {
        let factor = match t[..i].trim() {
            "" => 1.0,
            f => f.trim_end_matches('*').parse::<f64>().map_err(|_| bad())?,
        };
        let divisor = match t[i + 2..].trim() {
            "" => 1.0,
            d => d.strip_prefix('/').ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?,
        };
        return Ok(factor * PI / divisor);
    }
    let value = t.parse::<f64>().map_err(|_| bad())?;
    Ok(if degrees { value.to_radians() } else { value })
}

pub fn cmd_validate(parsed: &Parsed) -> Result<Outcome> {
    let w = parsed.angles.as_ref().ok_or_else(|| CliError::Parse("document has no angles".into()))?;
    let sigma = &parsed.sigma;
    let v = check_all(sigma, w);
    let mut out = String::new();
    let n_ideal = sigma.ideal().iter().filter(|&&b| b).count();
    let _ = writeln!(
        out,
        "cellulation: {} vertices, {} edges, {} faces, {} ideal",
        sigma.n_vertices(),
        sigma.n_edges(),
        sigma.n_faces(),
        n_ideal
    );
    let mut local = Vec::new();
    for (e, &x) in w.iter().enumerate() {
        if !(x > 0.0 && x < PI) {
            local.push(format!("edge {}: angle {x} outside (0, pi)", parsed.edge_id_key(e)));
        }
    }
    for v in 0..sigma.n_vertices() {
        let s: f64 = sigma.vertex_edges(v).iter().map(|&e| w[e]).sum();
        let gap = s - 2.0 * PI;
        if sigma.is_ideal(v) && gap.abs() > TOL_ANGLE {
            local.push(format!("ideal vertex {}: angle sum {s:.12}, expected 2 pi", parsed.ids[v]));
        } else if !sigma.is_ideal(v) && gap <= TOL_ANGLE {
            local.push(format!("vertex {}: angle sum {s:.12}, must exceed 2 pi", parsed.ids[v]));
        }
    }
    let _ = writeln!(out, "angles and vertex sums: {}", if local.is_empty() { "ok" } else { "violated" });
    for r in &local {
        let _ = writeln!(out, "  {r}");
    }
    let _ = writeln!(out, "circuits: {}", if v.circuits.ok { "ok" } else { "violated" });
    if let Some(wit) = &v.circuits.witness {
        let edges: Vec<String> = wit.arcs.iter().map(|&e| parsed.edge_id_key(e)).collect();
        let kind = if wit.vertex.is_some() { "vertex link" } else { "non-elementary" };
        let _ = writeln!(
            out,
            "  witness cycle ({kind}): faces {:?} across edges {edges:?}, weight {:.12}",
            wit.nodes, wit.weight
        );
    }
    let _ = writeln!(out, "simple paths: {}", if v.paths.ok { "ok" } else { "violated" });
    if let Some(wit) = &v.paths.witness {
        let edges: Vec<String> = wit.arcs.iter().map(|&e| parsed.edge_id_key(e)).collect();
        let around = wit.vertex.map_or_else(|| "?".into(), |x| parsed.ids[x].to_string());
        let _ = writeln!(
            out,
            "  witness path: faces {:?} across edges {edges:?} around vertex {around}, weight {:.12}",
            wit.nodes, wit.weight
        );
    }
    let _ = writeln!(out, "verdict: {}", if v.admissible { "admissible" } else { "inadmissible" });
    Ok(Outcome { report: out, code: if v.admissible { 0 } else { 1 } })
}

#[derive(Debug, Clone, Default)]
pub struct RealizeArgs {
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub options: RealizeOptions,
}

/// Solve, write the requested documents, and return the realization
/// document with the report.
pub fn cmd_realize(parsed: &Parsed, args: &RealizeArgs) -> Result<(RealizationDocument, Outcome)> {
    let w = parsed.angles.as_ref().ok_or_else(|| CliError::Parse("document has no angles".into()))?;
    let check = cmd_validate(parsed)?;
    if check.code != 0 {
        return Err(CliError::Inadmissible(vec![check.report]));
    }
    let r = realize(&parsed.sigma, w, &args.options)?;
    let doc = RealizationDocument::new(parsed, &r);
    if let Some(path) = &args.out {
        write_text(path, &doc.to_json())?;
    }
    if let Some(path) = &args.svg {
        let config = config_from_realization(&parsed.sigma, &r)?;
        write_text(path, &emit_svg(&config, &SvgOptions::default()))?;
    }
    let d = &r.diagnostics;
    let mut out = String::new();
    let _ = writeln!(out, "volume: {:.12}", r.volume);
    let _ = writeln!(out, "iterations: {}", d.iterations);
    let _ = writeln!(out, "reduced gradient: {:.3e}", d.reduced_gradient);
    let _ = writeln!(out, "length mismatch: {:.3e}", d.length_mismatch);
    let _ = writeln!(out, "shear: {:.3e}", d.shear);
    let _ = writeln!(out, "gluing mismatch: {:.3e}", d.gluing_mismatch);
    let _ = writeln!(out, "max angle error: {:.3e}", d.max_angle_error);
    Ok((doc, Outcome::ok(out)))
}

#[derive(Debug, Clone, Default)]
pub struct KoebeArgs {
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub options: KoebeOptions,
}

pub fn cmd_koebe(parsed: &Parsed, args: &KoebeArgs) -> Result<Outcome> {
    let k = koebe_continuation(&parsed.sigma, &args.options)?;
    let doc = CircleConfigDocument::new(&parsed.ids, &k.config);
    if let Some(path) = &args.out {
        write_text(path, &doc.to_json())?;
    }
    if let Some(path) = &args.svg {
        write_text(path, &emit_svg(&k.config, &SvgOptions::default()))?;
    }
    let increasing = k.volumes.windows(2).all(|p| p[1] > p[0]);
    let mut out = String::new();
    let _ = writeln!(out, "steps: {}, final delta {:.3e}", k.deltas.len(), k.deltas.last().copied().unwrap_or(f64::NAN));
    let _ = writeln!(out, "volume: {:.12} -> {:.12} ({})", k.volumes[0], k.volumes[k.volumes.len() - 1], if increasing { "increasing" } else { "NOT increasing" });
    let _ = writeln!(out, "circles: {} black, {} red", parsed.sigma.n_faces(), parsed.sigma.n_vertices());
    let _ = writeln!(out, "max tangency residual: {:.3e}", k.tangency_residual);
    let _ = writeln!(out, "max orthogonality residual: {:.3e}", k.orthogonality_residual);
    let _ = writeln!(out, "extrapolation error: {:.3e}", k.extrapolation_error);
    Ok(Outcome::ok(out))
}

#[derive(Debug, Clone, Default)]
pub struct SimplexArgs {
    /// Exterior angles at the edges 12, 13, 14, 23, 24, 34.
    pub angles: Option<[f64; 6]>,
    pub regular: Option<f64>,
    pub report: bool,
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.10}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn cmd_simplex(args: &SimplexArgs) -> Result<Outcome> {
    let mut out = String::new();
    if let Some(l0) = args.regular {
        let r = regular_simplex_check(l0, true)?;
        let _ = writeln!(out, "regular simplex with edge length {l0}");
        let _ = writeln!(out, "interior angles: {}", fmt_list(&r.t));
        let _ = writeln!(out, "derivatives a, b, c: {}", fmt_list(&[r.a, r.b, r.c]));
        if args.report {
            let _ = writeln!(out, "matrix:");
            for row in &r.matrix {
                let _ = writeln!(out, "  {}", fmt_list(row));
            }
            let _ = writeln!(out, "closed-form eigenvalues: {}", fmt_list(&r.closed_form_eigenvalues));
        }
        if let Some(d) = r.geometric_deviation() {
            let _ = writeln!(out, "geometric derivative deviation: {d:.3e}");
        }
        let _ = writeln!(out, "eigenvalues: {}", fmt_list(&r.eigenvalues));
        let _ = writeln!(out, "smallest eigenvalue: {:.10}", r.min_eigenvalue());
        let _ = writeln!(out, "positive definite: {}", if r.positive_definite() { "yes" } else { "no" });
        return Ok(Outcome { report: out, code: if r.positive_definite() { 0 } else { 1 } });
    }
    let theta = args.angles.ok_or_else(|| CliError::Parse("give --angles or --regular".into()))?;
    let ideal: [bool; 4] = std::array::from_fn(|v| {
        let s: f64 = EDGES.iter().zip(&theta).filter(|((a, b), _)| *a == v || *b == v).map(|(_, t)| t).sum();
        (s - 2.0 * PI).abs() <= TOL_SUM
    });
    let verdict = admissible_simplex_angles(&theta, &ideal);
    let _ = writeln!(out, "vertex sums: {}", fmt_list(&verdict.vertex_sums));
    if !verdict.admissible {
        let _ = writeln!(out, "admissible: no");
        for r in &verdict.reasons {
            let _ = writeln!(out, "  {r}");
        }
        return Ok(Outcome { report: out, code: 1 });
    }
    let _ = writeln!(out, "admissible: yes");
    let classes: Vec<&str> = ideal.iter().map(|&b| if b { "ideal" } else { "hyperideal" }).collect();
    let _ = writeln!(out, "vertices: {classes:?}");
    let s = HyperidealSimplex::from_angles(&theta, &ideal)?;
    let lengths = s.edge_lengths(&[0.0; 4])?;
    let _ = writeln!(out, "edge lengths: {}", fmt_list(&lengths.raw));
    let volume = s.volume()?;
    let _ = writeln!(out, "volume: {volume:.12}");
    // central differences along the stratum against the gradient L / 2
    let g = s.schlafli_gradient(&[0.0; 4])?;
    let basis = stratum_basis(&ideal);
    let h = 1e-4;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for c in 0..basis.ncols() {
        let b = basis.column(c);
        let shifted = |sign: f64| -> Result<f64> {
            let t: [f64; 6] = std::array::from_fn(|k| theta[k] + sign * h * b[k]);
            Ok(HyperidealSimplex::from_angles(&t, &ideal)?.volume()?)
        };
        let fd = (shifted(1.0)? - shifted(-1.0)?) / (2.0 * h);
        let exact: f64 = (0..6).map(|k| b[k] * g[k]).sum();
        worst = worst.max((fd - exact).abs());
        scale = scale.max(exact.abs());
    }
    // the stratum gradient vanishes at symmetric points, so the error is
    // relative to max(|gradient|, 1)
    let _ = writeln!(
        out,
        "schlafli gradient check: error {:.3e} (gradient scale {scale:.3e}, relative {:.3e})",
        worst,
        worst / scale.max(1.0)
    );
    let hess = s.volume_hessian()?;
    let _ = writeln!(out, "hessian eigenvalues: {}", fmt_list(&hess.eigenvalues()));
    if args.report {
        let _ = writeln!(out, "gradient (exterior angles): {}", fmt_list(&g));
        let _ = writeln!(out, "hessian symmetry defect: {:.3e}", hess.symmetry_defect());
    }
    Ok(Outcome::ok(out))
}
