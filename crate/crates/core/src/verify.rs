//! Post-solve certification: self-similarity, embeddedness, weighted norms,
//! and the triangulated mesh handed to exporters.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::bent::{bent_normal, bent_point, BentSurface};
use crate::error::{Error, Result};
use crate::fourier::Complex;
use crate::grid::CylinderGrid;
use crate::linalg::{Mat3, Vec3};
use crate::real::m;
use crate::sequence::Kronecker;
use crate::spiral::SpiralSpec;
use crate::tube::max_embed_ell;

/// Embeddedness outcome of a solved surface.
#[derive(Clone, Debug, PartialEq)]
pub enum EmbedVerdict {
    /// `ℓ` is inside the analytic bound and the solve converged.
    Certified,
    /// Outside the bound (or unconverged) but no sampled collision.
    SampledOk,
    NotCertified,
}

impl EmbedVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            EmbedVerdict::Certified => "certified",
            EmbedVerdict::SampledOk => "sampled-ok",
            EmbedVerdict::NotCertified => "not-certified",
        }
    }
}

/// Summary of a fixed-point solve. `runtime` is filled in by callers that
/// own a clock.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub residual_history: Vec<f64>,
    pub final_interior_residual: f64,
    pub update_history: Vec<f64>,
    pub damping_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub b_x: f64,
    pub b_y: f64,
    /// `cosh^{3/4}`-weighted sup of `v`, derivatives to order 2.
    pub norm_v: f64,
    pub sup_v: f64,
    pub zeta: f64,
    pub u0_c_hat: f64,
    pub u0_residual: f64,
    pub max_embed_ell: Option<f64>,
    pub embed_verdict: EmbedVerdict,
    pub embed_min_ratio: f64,
    pub self_similarity_defect: f64,
    pub runtime: f64,
}

/// Rotation used as the similarity in [`check_self_similarity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimilarityAxis {
    /// The frame's own rotation `exp(2πδ𝕽)` about the spiral axis.
    Spiral,
    /// Rotation by the same angle about `e_z`, as if the initial frame were
    /// aligned with the coordinate axes. Wrong unless `ω̂ = e_z`.
    LiteralZ,
}

fn similarity_matrix(spec: &SpiralSpec, axis: SimilarityAxis) -> Mat3 {
    match axis {
        SimilarityAxis::Spiral => spec.similarity_rotation(),
        SimilarityAxis::LiteralZ => {
            Mat3::cross_matrix(Vec3::EZ.scale(2.0 * PI * spec.delta * spec.r_norm())).exp_antisymmetric()
        }
    }
}

/// Point of `G + e^{δξθ}fν_G` at `(s, θ)` for a scalar `f`.
pub fn graph_point_at(spec: &SpiralSpec, s: f64, theta: f64, f: f64) -> Vec3 {
    let e = m::exp(spec.delta * spec.xi * theta);
    bent_point(spec, s, theta) + bent_normal(spec, s, theta).scale(e * f)
}

/// `max |G_w(s,θ+2π) − e^{2πδξ}R G_w(s,θ)| / e^{δξθ}` over the grid, for the
/// total graph function `f`.
pub fn check_self_similarity(surface: &BentSurface, f: &[f64], axis: SimilarityAxis) -> Result<f64> {
    let spec = surface.spec.as_ref().ok_or(Error::Internal("surface has no spiral spec"))?;
    surface.grid.check(f)?;
    let rot = similarity_matrix(spec, axis);
    let dil = m::exp(2.0 * PI * spec.delta * spec.xi);
    let g = &surface.grid;
    let mut defect = 0.0f64;
    for j in 0..g.rows() {
        for k in 0..g.n_theta {
            let p0 = surface.graph_point(f, j, k, 0)?;
            let p1 = surface.graph_point(f, j, k, 1)?;
            let d = (p1 - rot.apply(p0).scale(dil)).norm() / m::exp(spec.delta * spec.xi * g.theta[k]);
            defect = defect.max(d);
        }
    }
    Ok(defect)
}

/// Result of a sampled self-intersection search.
#[derive(Clone, Debug, PartialEq)]
pub struct CollisionReport {
    /// Minimum over tested pairs of image distance divided by the smaller
    /// local edge length.
    pub min_ratio: f64,
    pub pairs_tested: usize,
    /// Parameter indices `((row, col), (row, col))` of a colliding pair.
    pub counterexample: Option<((usize, usize), (usize, usize))>,
}

/// Collision threshold as a fraction of the local edge length.
pub const COLLISION_FRACTION: f64 = 0.5;
/// Pairs closer than this many cells in both parameter directions are skipped.
pub const EXCLUSION_CELLS: usize = 3;

/// Search a sampled parametrized surface for collisions.
///
/// `points` is row-major with `rows × cols` entries; `periodic_cols` wraps
/// the column distance. Every pair of a uniform subsample (stride chosen so
/// at most `uniform_max` points take part) is tested, followed by `n_random`
/// quasi-random pairs over all points. A pair collides when its image
/// distance falls below [`COLLISION_FRACTION`] of the smaller edge length.
pub fn sampled_collisions(
    points: &[Vec3],
    rows: usize,
    cols: usize,
    periodic_cols: bool,
    uniform_max: usize,
    n_random: usize,
    seed: u64,
) -> CollisionReport {
    debug_assert_eq!(points.len(), rows * cols);
    let at = |r: usize, c: usize| points[r * cols + c];
    let edge: Vec<f64> = (0..rows * cols)
        .map(|i| {
            let (r, c) = (i / cols, i % cols);
            let p = at(r, c);
            let mut e = f64::INFINITY;
            let mut nb = vec![];
            if r > 0 {
                nb.push((r - 1, c));
            }
            if r + 1 < rows {
                nb.push((r + 1, c));
            }
            if c > 0 {
                nb.push((r, c - 1));
            } else if periodic_cols {
                nb.push((r, cols - 1));
            }
            if c + 1 < cols {
                nb.push((r, c + 1));
            } else if periodic_cols {
                nb.push((r, 0));
            }
            for (a, b) in nb {
                e = e.min((at(a, b) - p).norm());
            }
            e
        })
        .collect();
    let excluded = |a: usize, b: usize| {
        let (ra, ca, rb, cb) = (a / cols, a % cols, b / cols, b % cols);
        let dr = ra.abs_diff(rb);
        let mut dc = ca.abs_diff(cb);
        if periodic_cols {
            dc = dc.min(cols - dc);
        }
        dr <= EXCLUSION_CELLS && dc <= EXCLUSION_CELLS
    };
    let mut report = CollisionReport { min_ratio: f64::INFINITY, pairs_tested: 0, counterexample: None };
    let test = |a: usize, b: usize, report: &mut CollisionReport| {
        if a == b || excluded(a, b) {
            return;
        }
        report.pairs_tested += 1;
        let scale = edge[a].min(edge[b]);
        let ratio = (points[a] - points[b]).norm() / scale;
        if ratio < report.min_ratio {
            report.min_ratio = ratio;
        }
        if ratio < COLLISION_FRACTION && report.counterexample.is_none() {
            report.counterexample = Some(((a / cols, a % cols), (b / cols, b % cols)));
        }
    };
    let total = rows * cols;
    let stride = {
        let mut k = 1;
        while (rows.div_ceil(k)) * (cols.div_ceil(k)) > uniform_max.max(1) {
            k += 1;
        }
        k
    };
    let sub: Vec<usize> = (0..rows)
        .step_by(stride)
        .flat_map(|r| (0..cols).step_by(stride).map(move |c| r * cols + c))
        .collect();
    for (i, &a) in sub.iter().enumerate() {
        for &b in &sub[i + 1..] {
            test(a, b, &mut report);
        }
    }
    let mut seq = Kronecker::<2>::new(seed);
    for _ in 0..n_random {
        let q = seq.next_point();
        let a = ((q[0] * total as f64) as usize).min(total - 1);
        let b = ((q[1] * total as f64) as usize).min(total - 1);
        test(a, b, &mut report);
    }
    report
}

/// The figure-eight cylinder `(sin θ, sin θ cos θ, s)`, which crosses itself
/// along `θ ∈ {0, π}`. Negative control for [`sampled_collisions`].
pub fn figure_eight_points(rows: usize, cols: usize) -> Vec<Vec3> {
    let mut pts = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let s = -1.0 + 2.0 * r as f64 / (rows - 1).max(1) as f64;
        for c in 0..cols {
            let t = -PI + 2.0 * PI * c as f64 / cols as f64;
            pts.push(Vec3::new(m::sin(t), m::sin(t) * m::cos(t), s));
        }
    }
    pts
}

/// Embeddedness check of `G_w` for the total graph function `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbedCheck {
    pub verdict: EmbedVerdict,
    pub max_embed_ell: Option<f64>,
    pub sampled: CollisionReport,
}

/// Two-stage check: the analytic bound `ℓ ≤ max_embed_ell` (with `converged`)
/// certifies; otherwise the sampled search over `periods` consecutive turns
/// in θ decides between "sampled-ok" and "not-certified". The sampled search
/// runs in both cases and is reported; `seed` offsets its quasi-random pairs.
pub fn check_embedded(
    surface: &BentSurface,
    f: &[f64],
    converged: bool,
    n_pairs: usize,
    periods: usize,
    seed: u64,
) -> Result<EmbedCheck> {
    let spec = surface.spec.as_ref().ok_or(Error::Internal("surface has no spiral spec"))?;
    surface.grid.check(f)?;
    let g = &surface.grid;
    let periods = periods.max(1);
    let cols = g.n_theta * periods;
    let first = -((periods as i32 - 1) / 2);
    let mut pts = Vec::with_capacity(g.rows() * cols);
    for j in 0..g.rows() {
        for p in 0..periods {
            for k in 0..g.n_theta {
                pts.push(surface.graph_point(f, j, k, first + p as i32)?);
            }
        }
    }
    let sampled = sampled_collisions(&pts, g.rows(), cols, false, 4096, n_pairs, seed);
    let bound = max_embed_ell(spec).ok();
    let verdict = if sampled.counterexample.is_some() {
        EmbedVerdict::NotCertified
    } else if converged && bound.is_some_and(|b| surface.ell <= b) {
        EmbedVerdict::Certified
    } else {
        EmbedVerdict::SampledOk
    };
    Ok(EmbedCheck { verdict, max_embed_ell: bound, sampled })
}

/// `sup cosh^{−ρ}(s)(|u| + Σ|∂u| + Σ|∂²u|)` up to derivative order `k ≤ 2`;
/// `s`-derivatives are fourth-order differences, `θ`-derivatives spectral.
pub fn weighted_norm(grid: &CylinderGrid, u: &[f64], rho: f64, k: u32) -> Result<f64> {
    grid.check(u)?;
    if k > 2 {
        return Err(Error::UnsupportedParameter("derivative order above 2"));
    }
    let mut total: Vec<f64> = u.iter().map(|x| m::abs(*x)).collect();
    let mut add = |d: Vec<f64>| {
        for (t, x) in total.iter_mut().zip(d) {
            *t += m::abs(x);
        }
    };
    if k >= 1 {
        add(grid.d_s4(u, 1));
        add(grid.d_theta(u, 1));
    }
    if k >= 2 {
        add(grid.d_s4(u, 2));
        add(grid.d_theta(u, 2));
        add(grid.d_theta(&grid.d_s4(u, 1), 1));
    }
    let n = grid.n_theta;
    Ok(total
        .iter()
        .enumerate()
        .fold(0.0f64, |a, (i, &x)| a.max(x / libm::pow(m::cosh(grid.s[i / n]), rho))))
}

/// Triangulated `G_w` with per-vertex fields.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
    pub s: Vec<f64>,
    pub theta: Vec<f64>,
    pub h_abs: Vec<f64>,
    pub u: Vec<f64>,
}

/// Interpolant of a grid function: cubic Lagrange in `s`, trigonometric in θ.
pub struct GridInterpolant<'a> {
    grid: &'a CylinderGrid,
    coeffs: Vec<Vec<Complex>>,
}

impl<'a> GridInterpolant<'a> {
    pub fn new(grid: &'a CylinderGrid, u: &[f64]) -> Result<Self> {
        grid.check(u)?;
        let coeffs = u.chunks(grid.n_theta).map(|r| grid.fft().real_forward(r, -PI)).collect();
        Ok(Self { grid, coeffs })
    }

    pub fn eval(&self, s: f64, theta: f64) -> f64 {
        let g = self.grid;
        let x = (s + g.s_max) / g.h;
        let j0 = (libm::floor(x) as i64 - 1).clamp(0, g.n_s as i64 - 3) as usize;
        let nodes = [j0, j0 + 1, j0 + 2, j0 + 3];
        let mut acc = 0.0;
        for (a, &ja) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (b, &jb) in nodes.iter().enumerate() {
                if a != b {
                    w *= (x - jb as f64) / (ja as f64 - jb as f64);
                }
            }
            if w != 0.0 {
                acc += w * g.fft().interpolate(&self.coeffs[ja], theta);
            }
        }
        acc
    }
}

/// Mesh of `G_w` on `res_s × res_theta` vertices per turn (θ over the closed
/// interval `[−π, π]`), repeated for turns `first_period..first_period+periods`.
/// `q` is `Q` of the same graph on the grid; `|H| = |Q|/(e^{δξθ}cosh²s)`.
pub fn build_mesh(
    surface: &BentSurface,
    f: &[f64],
    q: &[f64],
    res_s: usize,
    res_theta: usize,
    first_period: i32,
    periods: usize,
) -> Result<Mesh> {
    let spec = surface.spec.as_ref().ok_or(Error::Internal("surface has no spiral spec"))?;
    if res_s < 2 || res_theta < 2 {
        return Err(Error::GridMismatch("mesh resolution must be at least 2 x 2"));
    }
    let g = &surface.grid;
    let fi = GridInterpolant::new(g, f)?;
    let qi = GridInterpolant::new(g, q)?;
    let mut mesh = Mesh::default();
    for p in 0..periods {
        let base = mesh.vertices.len();
        let shift = 2.0 * PI * (first_period + p as i32) as f64;
        for a in 0..res_s {
            let s = -g.s_max + 2.0 * g.s_max * a as f64 / (res_s - 1) as f64;
            for b in 0..res_theta {
                let t = -PI + 2.0 * PI * b as f64 / (res_theta - 1) as f64;
                let fv = fi.eval(s, t);
                let theta = t + shift;
                mesh.vertices.push(graph_point_at(spec, s, theta, fv));
                mesh.s.push(s);
                mesh.theta.push(theta);
                mesh.u.push(fv);
                let scale = m::exp(spec.delta * spec.xi * theta) * m::cosh(s) * m::cosh(s);
                mesh.h_abs.push(m::abs(qi.eval(s, t)) / scale);
            }
        }
        for a in 0..res_s - 1 {
            for b in 0..res_theta - 1 {
                let i = base + a * res_theta + b;
                let (i1, i2, i3) = (i + 1, i + res_theta, i + res_theta + 1);
                mesh.faces.push([i, i2, i1]);
                mesh.faces.push([i1, i2, i3]);
            }
        }
    }
    Ok(mesh)
}

/// Short human-readable summary of a report.
pub fn summary(report: &SolveReport) -> String {
    alloc::format!(
        "converged={} iterations={} residual={:.3e} b=({:.6e}, {:.6e}) embed={} defect={:.3e}",
        report.converged,
        report.iterations,
        report.final_interior_residual,
        report.b_x,
        report.b_y,
        report.embed_verdict.as_str(),
        report.self_similarity_defect
    )
}
