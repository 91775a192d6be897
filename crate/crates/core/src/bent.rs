//! The bent helicoid `G = M∘F`, its normalized jets, normal graphs over it,
//! the mean-curvature operator `Q`, and the odd profile `u₀`.
//!
//! Normalized gauge: with `P(s,θ) = sinh s (sin θ, cos θ, 0)` and the
//! generator `A = δ(ξI + 𝕽)`, the map is `G = e^{δξθ}Fr(θ)K(s,θ)` where
//! `K` differs from `P` by terms killed by the normalized derivatives
//! `D_s = ∂_s`, `D_θ = A + ∂_θ`. Hence
//! `∇̃G = (P_s, e_z + AP + P_θ)` and every higher normalized derivative is a
//! polynomial in `A` applied to θ-periodic closed forms. The reference
//! surface `G₀` is the case `𝕽 = 0`, `A = δξI`.

use alloc::vec;
use alloc::vec::Vec;

use crate::autodiff::Dual2;
use crate::error::{Error, Result};
use crate::grid::CylinderGrid;
use crate::homogeneous::{mean_curvature_with_normal, Jet, DEGENERATE_ASPECT};
use crate::linalg::{Mat3, Vec3};
use crate::real::{m, Real};
use crate::spiral::SpiralSpec;

/// The θ-periodic fields `T₁ = P_s` and `T₂ = e_z + AP + P_θ`.
fn first_fields<T: Real>(a: &Mat3, s: T, t: T) -> (Vec3<T>, Vec3<T>) {
    let (sh, ch) = (s.sinh(), s.cosh());
    let (st, ct) = (t.sin(), t.cos());
    let p = Vec3::new(sh * st, sh * ct, T::zero());
    let ps = Vec3::new(ch * st, ch * ct, T::zero());
    let pt = Vec3::new(sh * ct, -(sh * st), T::zero());
    let ez = Vec3::new(T::zero(), T::zero(), T::cst(1.0));
    (ps, ez + a.apply(p) + pt)
}

/// A vector field with its partials up to order two:
/// `[v, ∂_s, ∂_θ, ∂_ss, ∂_sθ, ∂_θθ]`.
pub type Field2 = [Vec3; 6];

fn split(v: Vec3<Dual2>) -> Field2 {
    let c = |f: fn(&Dual2) -> f64| Vec3::new(f(&v.x), f(&v.y), f(&v.z));
    [c(|d| d.v), c(|d| d.s), c(|d| d.t), c(|d| d.ss), c(|d| d.st), c(|d| d.tt)]
}

/// Normalized jets up to third order plus the normal field with its
/// derivatives, at one point.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct NormalizedData {
    pub jet: Jet,
    /// `(∇̃³_sss, ∇̃³_ssθ, ∇̃³_sθθ, ∇̃³_θθθ)`.
    pub third: [Vec3; 4],
    /// `ν̃ = R(θ)ν_G` and its plain partials in `(s, θ)`.
    pub nu: Field2,
}

/// Normalized data for the generator `a` at `(s, θ)`.
pub fn normalized_data(a: &Mat3, s: f64, theta: f64) -> NormalizedData {
    let (t1, t2) = first_fields(a, Dual2::var_s(s), Dual2::var_t(theta));
    let nu = split(t1.cross(t2).normalized());
    let (t1, t2) = (split(t1), split(t2));
    let a2 = a.matmul(a);
    let jet = Jet::new(
        [t1[0], t2[0]],
        [t1[1], a.apply(t2[0]) + t2[2], a.apply(t1[0]) + t1[2], t2[1]],
    );
    let third = [
        t1[3],
        a.apply(t1[1]) + t1[4],
        a2.apply(t1[0]) + a.apply(t1[2]).scale(2.0) + t1[5],
        a2.apply(t2[0]) + a.apply(t2[2]).scale(2.0) + t2[5],
    ];
    NormalizedData { jet, third, nu }
}

/// `∇̃G = e^{−δξθ}R(θ)∇G` (first and second order).
pub fn normalized_jet(spec: &SpiralSpec, s: f64, theta: f64) -> Jet {
    normalized_data(&spec.generator(), s, theta).jet
}

/// `G(s,θ) = M(F(s,θ))`.
pub fn bent_point(spec: &SpiralSpec, s: f64, theta: f64) -> Vec3 {
    let sh = m::sinh(s);
    crate::tube::tube_map(spec, sh * m::sin(theta), sh * m::cos(theta), theta)
}

/// Jets of `G` itself: `∇^{(k)}G = e^{δξθ}Fr(θ)∇̃^{(k)}G`. Returns the
/// first/second-order jet and the four third derivatives.
pub fn bent_jet(spec: &SpiralSpec, s: f64, theta: f64) -> (Jet, [Vec3; 4]) {
    let d = normalized_data(&spec.generator(), s, theta);
    let f = spec.frame_matrix(theta).scaled(m::exp(spec.delta * spec.xi * theta));
    (d.jet.rotated(&f), d.third.map(|v| f.apply(v)))
}

/// Unit normal `ν_G` of the bent surface.
pub fn bent_normal(spec: &SpiralSpec, s: f64, theta: f64) -> Vec3 {
    let (j, _) = bent_jet(spec, s, theta);
    j.d1[0].cross(j.d1[1]).normalized()
}

/// Point of the reference surface
/// `G₀ = (e^{εθ}sin θ sinh s, e^{εθ}cos θ sinh s, (e^{εθ}−1)/ε)`, `ε = δξ`.
pub fn reference_point(delta_xi: f64, s: f64, theta: f64) -> Vec3 {
    let e = m::exp(delta_xi * theta);
    let sh = m::sinh(s);
    let z = if delta_xi == 0.0 { theta } else { libm::expm1(delta_xi * theta) / delta_xi };
    Vec3::new(e * m::sin(theta) * sh, e * m::cos(theta) * sh, z)
}

/// Jets of `G₀`; at `ε = 0` these are exactly the helicoid jets.
pub fn reference_jet(delta_xi: f64, s: f64, theta: f64) -> (Jet, [Vec3; 4]) {
    let d = normalized_data(&Mat3::identity().scaled(delta_xi), s, theta);
    let e = m::exp(delta_xi * theta);
    (d.jet.scaled(e), d.third.map(|v| v.scale(e)))
}

/// Values and partials `(f, f_s, f_θ, f_ss, f_sθ, f_θθ)` of a graph function.
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct ScalarJet {
    pub v: f64,
    pub s: f64,
    pub t: f64,
    pub ss: f64,
    pub st: f64,
    pub tt: f64,
}

/// `∇̃G + ℰ_δ[f]`, where `ℰ_δ[f]` is the normalized jet of `e^{δξθ}f ν_G`:
/// with `Y = fν̃`, `ℰ = (Y_s, AY + Y_θ, Y_ss, A²Y + 2AY_θ + Y_θθ, AY_s + Y_sθ, ·)`.
#[inline]
pub fn graph_jet_from(base: &NormalizedData, a: &Mat3, a2: &Mat3, f: &ScalarJet) -> Jet {
    let n = &base.nu;
    let y = n[0].scale(f.v);
    let ys = n[0].scale(f.s) + n[1].scale(f.v);
    let yt = n[0].scale(f.t) + n[2].scale(f.v);
    let yss = n[0].scale(f.ss) + n[1].scale(2.0 * f.s) + n[3].scale(f.v);
    let yst = n[0].scale(f.st) + n[1].scale(f.t) + n[2].scale(f.s) + n[4].scale(f.v);
    let ytt = n[0].scale(f.tt) + n[2].scale(2.0 * f.t) + n[5].scale(f.v);
    let mixed = a.apply(ys) + yst;
    let e = Jet::new(
        [ys, a.apply(y) + yt],
        [yss, a2.apply(y) + a.apply(yt).scale(2.0) + ytt, mixed, mixed],
    );
    base.jet + e
}

/// `cosh²(s)·H(jet)` with the immersion check of the graph.
#[inline]
fn scaled_mean_curvature(j: &Jet, cosh2: f64, s: f64, theta: f64) -> Result<f64> {
    let c = j.d1[0].cross(j.d1[1]);
    let cn = c.norm();
    let n2 = j.d1[0].dot(j.d1[0]) + j.d1[1].dot(j.d1[1]);
    if !(2.0 * cn / n2 >= DEGENERATE_ASPECT) {
        return Err(Error::GraphTooLarge { s, theta });
    }
    Ok(cosh2 * mean_curvature_with_normal(j, c.scale(1.0 / cn)))
}

/// Derivative grids of a graph function: s-derivatives by fourth-order
/// differences, θ-derivatives mode-wise.
pub fn scalar_jets(grid: &CylinderGrid, f: &[f64]) -> Vec<ScalarJet> {
    let fs = grid.d_s4(f, 1);
    let fss = grid.d_s4(f, 2);
    let ft = grid.d_theta(f, 1);
    let ftt = grid.d_theta(f, 2);
    let fst = grid.d_theta(&fs, 1);
    (0..f.len())
        .map(|i| ScalarJet { v: f[i], s: fs[i], t: ft[i], ss: fss[i], st: fst[i], tt: ftt[i] })
        .collect()
}

/// Residual of the θ-independent minimal-graph equation over `G₀` at one
/// node, with the graph function given by value and `s`-derivatives.
fn reference_residual(base: &NormalizedData, a: &Mat3, a2: &Mat3, s: f64, u: f64, us: f64, uss: f64) -> Result<f64> {
    let f = ScalarJet { v: u, s: us, ss: uss, ..Default::default() };
    let j = graph_jet_from(base, a, a2, &f);
    let c = m::cosh(s);
    scaled_mean_curvature(&j, c * c, s, 0.0)
}

/// The odd profile `u₀` on the rows of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct U0Profile {
    pub values: Vec<f64>,
    /// Largest residual of the discrete equation over all rows.
    pub residual: f64,
    /// `sup |u₀(s)| / (δ|ξ| s²)` over `s ≠ 0`; zero when `δξ = 0`.
    pub c_hat: f64,
}

/// Solve `cosh²(s)H(∇̃G₀ + ℰ[u₀]) = 0` for θ-independent odd `u₀`.
///
/// The second-order central scheme is marched outward from `s = 0` with
/// `u₀(0) = 0`. The start value satisfies `u₂ = 8u₁`, i.e. the fourth-order
/// `u₀'(0)` of the odd extension vanishes. Each new node is found by damped
/// scalar Newton. The rim is left free.
pub fn solve_u0(delta_xi: f64, grid: &CylinderGrid) -> Result<U0Profile> {
    let rows = grid.rows();
    let mid = grid.n_s / 2;
    let mut values = vec![0.0; rows];
    if delta_xi == 0.0 {
        return Ok(U0Profile { values, residual: 0.0, c_hat: 0.0 });
    }
    let a = Mat3::identity().scaled(delta_xi);
    let a2 = a.matmul(&a);
    let h = grid.h;
    let n_half = rows - 1 - mid;
    let base: Vec<NormalizedData> = (0..=n_half).map(|i| normalized_data(&a, i as f64 * h, 0.0)).collect();
    let mut v = vec![0.0; n_half + 1];
    let res_at = |v: &[f64], i: usize, next: f64| -> Result<f64> {
        let s = i as f64 * h;
        let (um, u0) = (v[i - 1], v[i]);
        reference_residual(&base[i], &a, &a2, s, u0, (next - um) / (2.0 * h), (next - 2.0 * u0 + um) / (h * h))
    };
    // First node: unknown u₁ with u₂ = 8u₁.
    let start = |x: f64| -> Result<f64> {
        let w = [0.0, x];
        reference_residual(&base[1], &a, &a2, h, w[1], 8.0 * x / (2.0 * h), (8.0 * x - 2.0 * x) / (h * h))
    };
    v[1] = newton_scalar(start, 0.0).map_err(|_| Error::NoU0Profile(h))?;
    if n_half >= 2 {
        v[2] = 8.0 * v[1];
    }
    for i in 2..n_half {
        let guess = 2.0 * v[i] - v[i - 1];
        let vi = v.clone();
        v[i + 1] = newton_scalar(|x| res_at(&vi, i, x), guess).map_err(|_| Error::NoU0Profile(i as f64 * h))?;
    }
    let mut residual = start(v[1])?.abs();
    for i in 2..n_half {
        residual = residual.max(res_at(&v, i, v[i + 1])?.abs());
    }
    for i in 0..=n_half {
        values[mid + i] = v[i];
        values[mid - i] = -v[i];
    }
    let c_hat = (1..=n_half)
        .map(|i| {
            let s = i as f64 * h;
            m::abs(v[i]) / (m::abs(delta_xi) * s * s)
        })
        .fold(0.0f64, f64::max);
    Ok(U0Profile { values, residual, c_hat })
}

/// Damped Newton for a scalar root with a central-difference slope.
fn newton_scalar<F: Fn(f64) -> Result<f64>>(f: F, mut x: f64) -> Result<f64> {
    let mut r = f(x)?;
    for _ in 0..60 {
        if r == 0.0 {
            return Ok(x);
        }
        let eta = 1e-6 * (1.0 + m::abs(x));
        let slope = (f(x + eta)? - f(x - eta)?) / (2.0 * eta);
        if slope == 0.0 || !slope.is_finite() {
            return Err(Error::Internal("zero slope"));
        }
        let step = -r / slope;
        let mut lambda = 1.0;
        loop {
            let xn = x + lambda * step;
            let rn = f(xn);
            if let Ok(rn) = rn {
                if m::abs(rn) < m::abs(r) || lambda < 1e-6 {
                    let done = m::abs(xn - x) <= 1e-15 * (1.0 + m::abs(x));
                    x = xn;
                    r = rn;
                    if done {
                        return Ok(x);
                    }
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-9 {
                return Ok(x);
            }
        }
    }
    if m::abs(r) < 1e-8 {
        Ok(x)
    } else {
        Err(Error::Internal("Newton did not converge"))
    }
}

/// The bent helicoid sampled on the solver grid, with the frozen `u₀`.
#[derive(Clone, Debug)]
pub struct BentSurface {
    /// `None` for synthetic test rigs that only carry a generator.
    pub spec: Option<SpiralSpec>,
    pub ell: f64,
    pub grid: CylinderGrid,
    pub generator: Mat3,
    generator2: Mat3,
    pub delta_xi: f64,
    pub u0: U0Profile,
    /// Row-major normalized data at every node.
    pub nodes: Vec<NormalizedData>,
    cosh2: Vec<f64>,
}

impl BentSurface {
    pub fn new(spec: &SpiralSpec, ell: f64, n_s: usize, n_theta: usize) -> Result<Self> {
        if !(ell > 1.0) {
            return Err(Error::UnsupportedParameter("ell must exceed 1"));
        }
        let grid = CylinderGrid::for_ell(ell, n_s, n_theta)?;
        let mut s = Self::with_generator(spec.generator(), spec.delta * spec.xi, ell, grid, true)?;
        s.spec = Some(spec.clone());
        Ok(s)
    }

    /// Surface built from a bare generator `A` and `δξ`; `with_u0 = false`
    /// freezes `u₀ = 0`.
    pub fn with_generator(generator: Mat3, delta_xi: f64, ell: f64, grid: CylinderGrid, with_u0: bool) -> Result<Self> {
        let u0 = if with_u0 {
            solve_u0(delta_xi, &grid)?
        } else {
            U0Profile { values: vec![0.0; grid.rows()], residual: 0.0, c_hat: 0.0 }
        };
        let mut nodes = Vec::with_capacity(grid.len());
        for &s in &grid.s {
            for &t in &grid.theta {
                nodes.push(normalized_data(&generator, s, t));
            }
        }
        let cosh2 = grid.s.iter().map(|&s| m::cosh(s) * m::cosh(s)).collect();
        Ok(Self {
            spec: None,
            ell,
            generator2: generator.matmul(&generator),
            generator,
            delta_xi,
            u0,
            nodes,
            cosh2,
            grid,
        })
    }

    pub fn node(&self, j: usize, k: usize) -> &NormalizedData {
        &self.nodes[self.grid.idx(j, k)]
    }

    /// `u₀` spread over the grid.
    pub fn u0_grid(&self) -> Vec<f64> {
        self.grid.from_profile(&self.u0.values)
    }

    /// Normalized graph jets `∇̃G + ℰ_δ[f]` at every node for the total
    /// graph function `f` (which must already include `u₀` if wanted).
    pub fn graph_jets(&self, f: &[f64]) -> Result<Vec<Jet>> {
        self.grid.check(f)?;
        let sj = scalar_jets(&self.grid, f);
        Ok(self
            .nodes
            .iter()
            .zip(&sj)
            .map(|(b, fj)| graph_jet_from(b, &self.generator, &self.generator2, fj))
            .collect())
    }

    /// `ℰ_δ[f]` alone at every node.
    pub fn variation_jets(&self, f: &[f64]) -> Result<Vec<Jet>> {
        Ok(self.graph_jets(f)?.into_iter().zip(&self.nodes).map(|(j, b)| j - b.jet).collect())
    }

    /// `Q[u] = cosh²(s)·H(∇̃G + ℰ_δ[u + u₀])` at every node.
    pub fn q_operator(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.grid.check(u)?;
        let n = self.grid.n_theta;
        let f: Vec<f64> = u.iter().enumerate().map(|(i, &x)| x + self.u0.values[i / n]).collect();
        self.q_total(&f)
    }

    /// `cosh²(s)·H` of the graph of the total function `f` (no `u₀` added).
    pub fn q_total(&self, f: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid.n_theta;
        let jets = self.graph_jets(f)?;
        jets.iter()
            .enumerate()
            .map(|(i, j)| {
                let (r, k) = (i / n, i % n);
                scaled_mean_curvature(j, self.cosh2[r], self.grid.s[r], self.grid.theta[k])
            })
            .collect()
    }

    /// Point of `G_w = G + e^{δξθ}f ν_G` at node `(j, k)` shifted by `periods`
    /// turns of θ, evaluated from the closed forms at `θ + 2π·periods`.
    pub fn graph_point(&self, f: &[f64], j: usize, k: usize, periods: i32) -> Result<Vec3> {
        let spec = self.spec.as_ref().ok_or(Error::Internal("surface has no spiral spec"))?;
        let s = self.grid.s[j];
        let t = self.grid.theta[k] + 2.0 * core::f64::consts::PI * periods as f64;
        let nu = bent_normal(spec, s, t);
        let e = m::exp(spec.delta * spec.xi * t);
        Ok(bent_point(spec, s, t) + nu.scale(e * f[self.grid.idx(j, k)]))
    }
}
