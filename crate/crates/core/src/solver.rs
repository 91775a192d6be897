//! The linear inverse of the stability operator on `Λ` and the fixed-point
//! map `Ψ` whose fixed points are minimal graphs over the bent helicoid.
//!
//! The linear inverse is exact for the discrete operator
//! [`CylinderGrid::stability_apply`] on interior rows: the θ-mean is inverted
//! by marching the three-point scheme outward from `s = 0`, nonzero modes by
//! tridiagonal solves with zero Dirichlet data at `s = ±S`. Consequently a
//! fixed point of `Ψ` has `Q = 0` exactly wherever `ψ ≡ 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bent::BentSurface;
use crate::error::{Error, Result};
use crate::fourier::Complex;
use crate::grid::{sup_norm, CylinderGrid};
use crate::helicoid::{kernel_fn, substitute_fn, substitute_image_fn, CutoffSpec, Which};
use crate::linalg::solve_tridiagonal;
use crate::quadrature;
use crate::real::m;

/// `(Ē, E̊)`: the θ-mean per row (`(1/2π)∫E dθ`) and the remainder.
pub fn meridian_split(grid: &CylinderGrid, e: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let bar = grid.row_means(e);
    let n = grid.n_theta;
    let ring = e.iter().enumerate().map(|(i, &x)| x - bar[i / n]).collect();
    (bar, ring)
}

/// Solve `v̄'' + 2sech²(s)v̄ = Ē` on the rows, with `v̄(0) = v̄'(0) = 0`,
/// exactly for the second-order three-point scheme.
pub fn invert_mean(grid: &CylinderGrid, e_bar: &[f64]) -> Vec<f64> {
    let rows = grid.rows();
    let mid = grid.n_s / 2;
    let h2 = grid.h * grid.h;
    let pot = |j: usize| 2.0 / (m::cosh(grid.s[j]) * m::cosh(grid.s[j]));
    let mut v = vec![0.0; rows];
    v[mid + 1] = 0.5 * h2 * e_bar[mid];
    v[mid - 1] = 0.5 * h2 * e_bar[mid];
    for j in mid + 1..rows - 1 {
        v[j + 1] = h2 * e_bar[j] + (2.0 - h2 * pot(j)) * v[j] - v[j - 1];
    }
    for j in (1..mid).rev() {
        v[j - 1] = h2 * e_bar[j] + (2.0 - h2 * pot(j)) * v[j] - v[j + 1];
    }
    v
}

/// Continuum solution of the same problem by nested quadrature,
/// `v̄(s) = tanh s ∫₀ˢ tanh⁻²(s') ∫₀^{s'} tanh(σ)Ē(σ) dσ ds'`.
///
/// Obtained from `(tanh²φ')' = tanh·Ē` with `v̄ = tanh·φ`. Near `s' = 0` the
/// outer integrand tends to `Ē(0)/2` and is replaced by that limit.
pub fn invert_mean_quadrature<F: Fn(f64) -> f64>(e_bar: F, s: f64, tol: f64) -> f64 {
    let inner = |sp: f64| quadrature::integrate(|x| m::tanh(x) * e_bar(x), 0.0, sp, 0.01 * tol);
    let outer = |sp: f64| {
        if m::abs(sp) < 1e-4 {
            0.5 * e_bar(0.0)
        } else {
            let t = m::tanh(sp);
            inner(sp) / (t * t)
        }
    };
    m::tanh(s) * quadrature::integrate(outer, 0.0, s, tol)
}

/// The substitute kernel sampled on a grid, with its Gram matrix against
/// the bounded kernel.
#[derive(Clone, Debug)]
pub struct SubstituteKernel {
    pub u: [Vec<f64>; 2],
    pub w: [Vec<f64>; 2],
    pub kappa: [Vec<f64>; 2],
    /// `gram[i][j] = ⟨κ_i, w_j⟩` over the grid.
    pub gram: [[f64; 2]; 2],
}

impl SubstituteKernel {
    pub fn new(grid: &CylinderGrid) -> Result<Self> {
        let xy = [Which::X, Which::Y];
        let u = xy.map(|w| grid.sample(|s, t| substitute_fn(w, s, t)));
        let w = xy.map(|w| grid.sample(|s, t| substitute_image_fn(w, s, t)));
        let kappa = xy.map(|w| grid.sample(|s, t| kernel_fn(w, s, t)));
        let mut gram = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                gram[i][j] = grid.inner(&kappa[i], &w[j]);
            }
        }
        let det = gram[0][0] * gram[1][1] - gram[0][1] * gram[1][0];
        if m::abs(det) < 1e-8 {
            return Err(Error::Internal("singular substitute-kernel Gram matrix"));
        }
        Ok(Self { u, w, kappa, gram })
    }
}

/// `E⊥ = E̊ − b_x w_x − b_y w_y` with `b` chosen so `E⊥ ⟂ κ_x, κ_y`.
pub fn orthogonalize(grid: &CylinderGrid, sk: &SubstituteKernel, e_ring: &[f64]) -> (Vec<f64>, f64, f64) {
    let r = [grid.inner(e_ring, &sk.kappa[0]), grid.inner(e_ring, &sk.kappa[1])];
    let g = &sk.gram;
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let bx = (g[1][1] * r[0] - g[0][1] * r[1]) / det;
    let by = (g[0][0] * r[1] - g[1][0] * r[0]) / det;
    let perp = e_ring
        .iter()
        .enumerate()
        .map(|(i, &x)| x - bx * sk.w[0][i] - by * sk.w[1][i])
        .collect();
    (perp, bx, by)
}

/// Mode-wise solve of `v'' − m²v + 2sech²v = Ê_m`, `v(±S) = 0`, for every
/// nonzero θ-mode; the θ-mean of the input is ignored.
pub fn invert_perp(grid: &CylinderGrid, e_perp: &[f64]) -> Result<Vec<f64>> {
    grid.check(e_perp)?;
    let (n, rows, h2) = (grid.n_theta, grid.rows(), grid.h * grid.h);
    let fft = grid.fft();
    let coeffs: Vec<Vec<Complex>> = e_perp.chunks(n).map(|r| fft.real_forward(r, 0.0)).collect();
    let inner = rows - 2;
    let mut out_coeffs = vec![vec![Complex::default(); n / 2 + 1]; rows];
    let lower = vec![1.0 / h2; inner];
    let upper = vec![1.0 / h2; inner];
    for mode in 1..=n / 2 {
        let mm = (mode * mode) as f64;
        let diag: Vec<f64> = (1..rows - 1)
            .map(|j| -2.0 / h2 - mm + 2.0 / (m::cosh(grid.s[j]) * m::cosh(grid.s[j])))
            .collect();
        let mut re: Vec<f64> = (1..rows - 1).map(|j| coeffs[j][mode].re).collect();
        let mut im: Vec<f64> = (1..rows - 1).map(|j| coeffs[j][mode].im).collect();
        solve_tridiagonal(&lower, &diag, &upper, &mut re).ok_or(Error::Internal("singular mode system"))?;
        solve_tridiagonal(&lower, &diag, &upper, &mut im).ok_or(Error::Internal("singular mode system"))?;
        for j in 1..rows - 1 {
            out_coeffs[j][mode] = Complex::new(re[j - 1], im[j - 1]);
        }
    }
    let mut v = vec![0.0; e_perp.len()];
    for (c, row) in out_coeffs.iter().zip(v.chunks_mut(n)) {
        fft.real_inverse(c, 0.0, row);
    }
    Ok(v)
}

/// Solution `(v, b_x, b_y)` of `L_h v = E − b_x w_x − b_y w_y`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub v: Vec<f64>,
    pub b_x: f64,
    pub b_y: f64,
}

pub fn linear_solve(grid: &CylinderGrid, sk: &SubstituteKernel, e: &[f64]) -> Result<LinearSolution> {
    grid.check(e)?;
    let (bar, ring) = meridian_split(grid, e);
    let vbar = invert_mean(grid, &bar);
    let (perp, b_x, b_y) = orthogonalize(grid, sk, &ring);
    let mut v = invert_perp(grid, &perp)?;
    let n = grid.n_theta;
    for (i, x) in v.iter_mut().enumerate() {
        *x += vbar[i / n];
    }
    Ok(LinearSolution { v, b_x, b_y })
}

/// Interior residual of `L_h v = E − b_x w_x − b_y w_y`.
pub fn linear_residual(grid: &CylinderGrid, sk: &SubstituteKernel, e: &[f64], sol: &LinearSolution) -> Result<f64> {
    let lv = grid.stability_apply(&sol.v)?;
    let r: Vec<f64> = (0..e.len())
        .map(|i| lv[i] - (e[i] - sol.b_x * sk.w[0][i] - sol.b_y * sk.w[1][i]))
        .collect();
    Ok(grid.sup_interior(&r))
}

/// The triple `(v, b_x, b_y)` iterated by `Ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub v: Vec<f64>,
    pub b_x: f64,
    pub b_y: f64,
}

impl SolverState {
    pub fn zero(grid: &CylinderGrid) -> Self {
        Self { v: vec![0.0; grid.len()], b_x: 0.0, b_y: 0.0 }
    }
}

/// Grid data for `Ψ` on one surface: cutoffs, substitute kernel, cached.
#[derive(Clone, Debug)]
pub struct FixedPointMap {
    pub psi: Vec<f64>,
    pub psi_prime: Vec<f64>,
    pub kernel: SubstituteKernel,
    /// `cosh(s)` bound of the certification region, `ℓ/4`.
    pub interior_cosh: f64,
}

impl FixedPointMap {
    /// `ψ = ψ[arccosh(ℓ/2), arccosh(ℓ/4)](|s|)`, `ψ' = ψ[arccosh ℓ, arccosh(ℓ/2)](|s|)`.
    pub fn new(surface: &BentSurface) -> Result<Self> {
        let ell = surface.ell;
        let g = &surface.grid;
        let c = CutoffSpec::new(m::acosh(ell / 2.0), m::acosh(ell / 4.0))?;
        let cp = CutoffSpec::new(m::acosh(ell), m::acosh(ell / 2.0))?;
        let psi = g.from_profile(&g.s.iter().map(|&s| c.eval(m::abs(s))).collect::<Vec<_>>());
        let psi_prime = g.from_profile(&g.s.iter().map(|&s| cp.eval(m::abs(s))).collect::<Vec<_>>());
        Ok(Self { psi, psi_prime, kernel: SubstituteKernel::new(g)?, interior_cosh: ell / 4.0 })
    }

    /// The graph function `ψv + b_x u_x + b_y u_y` (without `u₀`).
    pub fn graph_function(&self, state: &SolverState) -> Vec<f64> {
        let k = &self.kernel;
        (0..state.v.len())
            .map(|i| self.psi[i] * state.v[i] + state.b_x * k.u[0][i] + state.b_y * k.u[1][i])
            .collect()
    }
}

/// Result of one application of `Ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    /// `Ψ(state)`, undamped.
    pub next: SolverState,
    /// Max-norm of `Ψ(state) − state` over `v` and `b`.
    pub update_norm: f64,
    /// `sup |Q|` at the input state over `cosh(s) ≤ ℓ/4`.
    pub residual: f64,
}

/// `Ψ[v,b_x,b_y] = (ψv, b_x, b_y) − R_F[ψ′Q[ψv + b_x u_x + b_y u_y]]`.
pub fn psi_step(surface: &BentSurface, map: &FixedPointMap, state: &SolverState) -> Result<StepOutcome> {
    let f = map.graph_function(state);
    let q = surface.q_operator(&f)?;
    let residual = surface.grid.sup_within_cosh(&q, map.interior_cosh);
    let e: Vec<f64> = q.iter().zip(&map.psi_prime).map(|(a, b)| a * b).collect();
    let r = linear_solve(&surface.grid, &map.kernel, &e)?;
    let v: Vec<f64> = (0..state.v.len()).map(|i| map.psi[i] * state.v[i] - r.v[i]).collect();
    let next = SolverState { v, b_x: state.b_x - r.b_x, b_y: state.b_y - r.b_y };
    let dv = next.v.iter().zip(&state.v).fold(0.0f64, |a, (x, y)| a.max(m::abs(x - y)));
    let update_norm = dv.max(m::abs(next.b_x - state.b_x)).max(m::abs(next.b_y - state.b_y));
    Ok(StepOutcome { next, update_norm, residual })
}

/// Knobs of the fixed-point iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationConfig {
    /// Stop when the undamped update norm falls below this...
    pub tol: f64,
    /// ...and the interior residual at the current state is at most this.
    /// The update norm alone does not bound `Q`: rough modes are amplified by
    /// up to `4/h²` in the residual.
    pub residual_tol: f64,
    pub max_iter: usize,
    /// Initial damping `λ ∈ (0, 1]`.
    pub damping: f64,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self { tol: 1e-11, residual_tol: 1e-9, max_iter: 50, damping: 1.0 }
    }
}

/// Trace of a fixed-point run.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub state: SolverState,
    /// Interior residual at every visited state, ending with the final one.
    pub residual_history: Vec<f64>,
    pub update_history: Vec<f64>,
    pub damping_history: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Lower bound for the adaptive damping.
pub const MIN_DAMPING: f64 = 0.05;

/// Iterate `state ← state + λ(Ψ(state) − state)`.
///
/// `λ` is halved (down to [`MIN_DAMPING`]) when the interior residual grows.
/// Otherwise it is set from a secant estimate: if successive undamped updates
/// satisfy `d_k ≈ r·d_{k−1}`, the dominant mode of `Ψ` has eigenvalue
/// `μ = 1 − (1−r)/λ`, and `λ = 1/(1−μ)` removes it. A sign-alternating
/// `b`-mode with `μ ≈ −δℓ²` is what makes undamped iteration slow at the
/// demo parameters.
pub fn iterate(surface: &BentSurface, map: &FixedPointMap, cfg: &IterationConfig) -> Result<IterationTrace> {
    let mut state = SolverState::zero(&surface.grid);
    let mut lambda = cfg.damping.clamp(1e-3, 1.0);
    let mut residuals = Vec::new();
    let mut updates = Vec::new();
    let mut lambdas = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    let mut prev_update: Option<(Vec<f64>, f64, f64)> = None;
    while iterations < cfg.max_iter {
        let out = psi_step(surface, map, &state)?;
        let d: Vec<f64> = out.next.v.iter().zip(&state.v).map(|(a, b)| a - b).collect();
        let (dbx, dby) = (out.next.b_x - state.b_x, out.next.b_y - state.b_y);
        if let Some(&prev) = residuals.last() {
            if out.residual > prev {
                lambda = (0.5 * lambda).max(MIN_DAMPING);
            } else if let Some((pd, pbx, pby)) = &prev_update {
                let num = d.iter().zip(pd).map(|(a, b)| a * b).sum::<f64>() + dbx * pbx + dby * pby;
                let den = pd.iter().map(|a| a * a).sum::<f64>() + pbx * pbx + pby * pby;
                if den > 0.0 {
                    let r = num / den;
                    // r ≥ 1 means no contraction is visible yet; keep λ.
                    if r < 1.0 {
                        lambda = (lambda / (1.0 - r)).clamp(MIN_DAMPING, 1.0);
                    }
                }
            }
        }
        prev_update = Some((d, dbx, dby));
        residuals.push(out.residual);
        updates.push(out.update_norm);
        lambdas.push(lambda);
        iterations += 1;
        if out.update_norm < cfg.tol && out.residual <= cfg.residual_tol {
            state = out.next;
            converged = true;
            break;
        }
        let mix = |a: f64, b: f64| a + lambda * (b - a);
        state = SolverState {
            v: state.v.iter().zip(&out.next.v).map(|(&a, &b)| mix(a, b)).collect(),
            b_x: mix(state.b_x, out.next.b_x),
            b_y: mix(state.b_y, out.next.b_y),
        };
    }
    let q = surface.q_operator(&map.graph_function(&state))?;
    residuals.push(surface.grid.sup_within_cosh(&q, map.interior_cosh));
    Ok(IterationTrace {
        state,
        residual_history: residuals,
        update_history: updates,
        damping_history: lambdas,
        converged,
        iterations,
    })
}

/// `max(‖v‖_∞, |b_x|, |b_y|) / (δℓ^{1/4}|𝕽|)`, the measured radius multiplier.
pub fn measured_zeta(state: &SolverState, delta: f64, ell: f64, r_norm: f64) -> f64 {
    sup_norm(&state.v).max(m::abs(state.b_x)).max(m::abs(state.b_y)) / (delta * libm::pow(ell, 0.25) * r_norm)
}

/// Parameters of [`solve_minimal`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolveConfig {
    pub ell: f64,
    pub n_s: usize,
    pub n_theta: usize,
    pub iteration: IterationConfig,
    /// Gate `δ(1 + |𝕽| + |ξ|)ℓ ≤ ε₁`.
    pub eps1: f64,
    /// Quasi-random pairs for the sampled embeddedness test.
    pub embed_pairs: usize,
    /// Consecutive θ-turns covered by the sampled embeddedness test.
    pub embed_periods: usize,
    pub embed_seed: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            ell: 32.0,
            n_s: 1024,
            n_theta: 64,
            iteration: IterationConfig::default(),
            eps1: 0.1,
            embed_pairs: 10_000,
            embed_periods: 3,
            embed_seed: 0,
        }
    }
}

/// Everything produced by a solve.
#[derive(Clone, Debug)]
pub struct SolvedSurface {
    pub surface: BentSurface,
    pub map: FixedPointMap,
    pub state: SolverState,
    /// `ψv + b_x u_x + b_y u_y + u₀` on the grid.
    pub total: Vec<f64>,
    /// `Q` of `total` on the grid.
    pub q: Vec<f64>,
    pub report: crate::verify::SolveReport,
}

/// `δ(1 + |𝕽| + |ξ|)ℓ`.
pub fn gate_value(spec: &crate::SpiralSpec, ell: f64) -> f64 {
    spec.delta * (1.0 + spec.r_norm() + m::abs(spec.xi)) * ell
}

/// Build the bent surface, iterate `Ψ` and certify the result.
pub fn solve_minimal(spec: &crate::SpiralSpec, cfg: &SolveConfig) -> Result<SolvedSurface> {
    use crate::verify::{check_embedded, check_self_similarity, weighted_norm, SimilarityAxis, SolveReport};
    let gate = gate_value(spec, cfg.ell);
    if !(gate <= cfg.eps1) {
        return Err(Error::RejectedParameters(alloc::format!(
            "delta*(1+|R|+|xi|)*ell = {gate:.4} exceeds eps1 = {}",
            cfg.eps1
        )));
    }
    let surface = BentSurface::new(spec, cfg.ell, cfg.n_s, cfg.n_theta)?;
    let map = FixedPointMap::new(&surface)?;
    let trace = iterate(&surface, &map, &cfg.iteration)?;
    let n = surface.grid.n_theta;
    let total: Vec<f64> = map
        .graph_function(&trace.state)
        .iter()
        .enumerate()
        .map(|(i, x)| x + surface.u0.values[i / n])
        .collect();
    let q = surface.q_total(&total)?;
    let embed = check_embedded(&surface, &total, trace.converged, cfg.embed_pairs, cfg.embed_periods, cfg.embed_seed)?;
    let defect = check_self_similarity(&surface, &total, SimilarityAxis::Spiral)?;
    let report = SolveReport {
        final_interior_residual: *trace.residual_history.last().unwrap_or(&f64::NAN),
        residual_history: trace.residual_history.clone(),
        update_history: trace.update_history.clone(),
        damping_history: trace.damping_history.clone(),
        iterations: trace.iterations,
        converged: trace.converged,
        b_x: trace.state.b_x,
        b_y: trace.state.b_y,
        norm_v: weighted_norm(&surface.grid, &trace.state.v, 0.75, 2)?,
        sup_v: sup_norm(&trace.state.v),
        zeta: measured_zeta(&trace.state, spec.delta, cfg.ell, spec.r_norm()),
        u0_c_hat: surface.u0.c_hat,
        u0_residual: surface.u0.residual,
        max_embed_ell: embed.max_embed_ell,
        embed_verdict: embed.verdict,
        embed_min_ratio: embed.sampled.min_ratio,
        self_similarity_defect: defect,
        runtime: 0.0,
    };
    Ok(SolvedSurface { surface, map, state: trace.state, total, q, report })
}
