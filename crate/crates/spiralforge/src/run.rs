//! The subcommands, as library functions returning their stdout text.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use spiralforge_core::solver::{solve_minimal, SolvedSurface};
use spiralforge_core::tube::max_embed_ell;
use spiralforge_core::verify::{build_mesh, summary, EmbedVerdict};

use crate::config::Resolved;
use crate::export::{write_csv, write_obj};
use crate::report::render;
use crate::RunError;

pub const REPORT_FILE: &str = "report.toml";
pub const MESH_FILE: &str = "mesh.obj";
pub const FIELDS_FILE: &str = "mesh.csv";

/// Curve invariants over a few turns of the frame.
pub fn spiral_table(r: &Resolved) -> String {
    let spec = &r.spec;
    let dx = spec.delta * spec.xi;
    let mut out = String::new();
    let _ = writeln!(out, "kappa0 = {}  tau0 = {}  rho0 = {}  xi = {}  delta = {}", spec.kappa0, spec.tau0, spec.rho0, spec.xi, spec.delta);
    let _ = writeln!(out, "spiral exponents (a, b, c) = ({}, {}, {})", spec.abc.a, spec.abc.b, spec.abc.c);
    let _ = writeln!(
        out,
        "turn period {:.6e}, scale factor per turn {:.6e}",
        spec.turn_period(),
        (2.0 * std::f64::consts::PI * spec.xi / spec.rho0).exp()
    );
    match max_embed_ell(spec) {
        Ok(b) => _ = writeln!(out, "max_embed_ell = {b:.6e}"),
        Err(e) => _ = writeln!(out, "max_embed_ell unavailable: {e}"),
    }
    let _ = writeln!(out, "{:>14} {:>14} {:>14} {:>14} {:>14}", "z", "|gamma|", "speed", "curvature", "torsion");
    for k in -4..=4 {
        let z = k as f64 * spec.turn_period() / 4.0;
        let decay = (-dx * z).exp();
        let _ = writeln!(
            out,
            "{:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e}",
            z,
            spec.gamma_point(z).norm(),
            1.0 / decay,
            spec.delta * spec.kappa0 * decay,
            -spec.delta * spec.tau0 * decay + 0.0
        );
    }
    out
}

pub struct SolveRun {
    pub solved: SolvedSurface,
    pub report: String,
    pub seconds: f64,
}

pub fn solve(r: &Resolved) -> Result<SolveRun, RunError> {
    let start = Instant::now();
    let solved = solve_minimal(&r.spec, &r.solve_config())?;
    let seconds = start.elapsed().as_secs_f64();
    let report = render(&r.config, &r.warnings, &r.spec, &solved);
    Ok(SolveRun { solved, report, seconds })
}

fn output_dir(r: &Resolved) -> Result<PathBuf, RunError> {
    let dir = r.config.output.dir.clone();
    fs::create_dir_all(&dir).map_err(|e| RunError::io(&dir, e))?;
    Ok(dir)
}

fn write_mesh(r: &Resolved, s: &SolvedSurface, dir: &Path) -> Result<(), RunError> {
    let e = &r.config.export;
    let mesh = build_mesh(&s.surface, &s.total, &s.q, e.res_s, e.res_theta, e.first_period, e.periods)?;
    write_obj(&mesh, &dir.join(MESH_FILE))?;
    write_csv(&mesh, &dir.join(FIELDS_FILE))
}

fn converged(run: &SolveRun) -> Result<(), RunError> {
    let rep = &run.solved.report;
    if rep.converged {
        Ok(())
    } else {
        Err(RunError::NotConverged(format!(
            "{} iterations, interior residual {:.3e}",
            rep.iterations, rep.final_interior_residual
        )))
    }
}

/// Solve and write the report, mesh and fields. Artifacts are written even
/// when the iteration does not converge; the error then follows.
pub fn solve_command(r: &Resolved) -> Result<String, RunError> {
    let run = solve(r)?;
    let dir = output_dir(r)?;
    let path = dir.join(REPORT_FILE);
    fs::write(&path, &run.report).map_err(|e| RunError::io(&path, e))?;
    write_mesh(r, &run.solved, &dir)?;
    converged(&run)?;
    Ok(format!("{}\nsolved in {:.2}s, artifacts in {}\n", summary(&run.solved.report), run.seconds, dir.display()))
}

pub fn export_command(r: &Resolved) -> Result<String, RunError> {
    let run = solve(r)?;
    let dir = output_dir(r)?;
    write_mesh(r, &run.solved, &dir)?;
    converged(&run)?;
    Ok(format!("wrote {} and {} in {}\n", MESH_FILE, FIELDS_FILE, dir.display()))
}

/// Embeddedness verdict of the solved surface. A sampled collision is a
/// rejection of the parameters.
pub fn check_embed_command(r: &Resolved) -> Result<String, RunError> {
    let run = solve(r)?;
    let rep = &run.solved.report;
    let bound = rep.max_embed_ell.map_or("unavailable".to_string(), |b| format!("{b:.6e}"));
    let text = format!(
        "ell = {}  max_embed_ell = {}\nverdict = {}  min separation ratio = {:.4}\n",
        r.config.grid.ell,
        bound,
        rep.embed_verdict.as_str(),
        rep.embed_min_ratio
    );
    if rep.embed_verdict == EmbedVerdict::NotCertified {
        return Err(RunError::Rejected(format!("sampled collision found\n{text}")));
    }
    converged(&run)?;
    Ok(text)
}
