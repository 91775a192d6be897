//! The tube map `M(x,y,z) = γ(z) + e^{δξz}(x e₁(z) + y e₂(z))` around the
//! spiral axis, and the logarithmic-cone radius bounds.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::real::m;
use crate::sequence::Kronecker;
use crate::spiral::SpiralSpec;

pub fn tube_map(spec: &SpiralSpec, x: f64, y: f64, z: f64) -> Vec3 {
    let f = spec.frame_matrix(z);
    let e = m::exp(spec.delta * spec.xi * z);
    spec.gamma_point(z) + (f.col(0).scale(x) + f.col(1).scale(y)).scale(e)
}

/// `DM` at `(x,y,z)`; columns are `∂_x M, ∂_y M, ∂_z M`.
///
/// `∂_z M = e^{δξz}(e₃ + δ(ξI + 𝕽)(x e₁ + y e₂))`, so
/// `det DM = e^{3δξz}(1 + δ(x·e₃·𝕽e₁ + y·e₃·𝕽e₂))`; see [`tube_jacobian_det`].
pub fn tube_jacobian(spec: &SpiralSpec, x: f64, y: f64, z: f64) -> Mat3 {
    let f = spec.frame_matrix(z);
    let e = m::exp(spec.delta * spec.xi * z);
    let (e1, e2, e3) = (f.col(0), f.col(1), f.col(2));
    let dz = e3 + spec.generator().apply(e1.scale(x) + e2.scale(y));
    Mat3::from_cols(e1.scale(e), e2.scale(e), dz.scale(e))
}

/// Closed form of `det DM`. Frame rotations commute with `𝕽`, so
/// `eᵢ(z)·𝕽eⱼ(z) = 𝕽ᵢⱼ` and the correction is independent of `z`.
pub fn tube_jacobian_det(spec: &SpiralSpec, x: f64, y: f64, z: f64) -> f64 {
    let r = &spec.r.0;
    m::exp(3.0 * spec.delta * spec.xi * z) * (1.0 + spec.delta * (x * r[2][0] + y * r[2][1]))
}

/// `√((τ₀²+ξ²)/(ρ₀²+ξ²))`.
fn cone_factor(spec: &SpiralSpec) -> f64 {
    let xi2 = spec.xi * spec.xi;
    m::sqrt((spec.tau0 * spec.tau0 + xi2) / (spec.rho0 * spec.rho0 + xi2))
}

/// Largest admissible `α`: `(e^{π|ξ|/ρ₀}−1)/(e^{π|ξ|/ρ₀}+1) = tanh(π|ξ|/(2ρ₀))`.
pub fn alpha_bound(spec: &SpiralSpec) -> f64 {
    m::tanh(PI * m::abs(spec.xi) / (2.0 * spec.rho0))
}

pub fn tube_radius(spec: &SpiralSpec, alpha: f64) -> Result<f64> {
    if spec.xi == 0.0 {
        return Err(Error::UnsupportedParameter("tube radius needs xi != 0"));
    }
    Ok(alpha / (spec.delta * m::abs(spec.xi)) * cone_factor(spec))
}

/// Largest `ℓ` for which the bent surface is certified embedded.
pub fn max_embed_ell(spec: &SpiralSpec) -> Result<f64> {
    if spec.xi == 0.0 {
        return Err(Error::UnsupportedParameter("embedding bound needs xi != 0"));
    }
    tube_radius(spec, alpha_bound(spec))
}

/// Outcome of a sampled injectivity test of `M` on a tube.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectivityReport {
    /// Minimum over far pairs of `|M(p)−M(q)|` divided by the local image
    /// sampling resolution; `+∞` when no far pairs exist.
    pub min_separation: f64,
    pub pairs_tested: usize,
    pub injective: bool,
}

/// Sample the tube of `radius` over two frame turns and compare images of
/// points whose preimages are at least half a turn apart in `z`.
pub fn check_injectivity(spec: &SpiralSpec, radius: f64, n_samples: usize) -> InjectivityReport {
    check_injectivity_over(spec, radius, n_samples, 0.0, 2.0 * spec.turn_period())
}

/// [`check_injectivity`] on `z ∈ [z0, z0 + span]`.
///
/// Points are stratified three ways per axis in `(r², φ, z)` with quasi-random
/// positions inside each cell. A pair collides when its image distance is
/// below `e^{δξz}·h` (the smaller of the two local scales), with `h` the preimage sampling spacing.
pub fn check_injectivity_over(spec: &SpiralSpec, radius: f64, n_samples: usize, z0: f64, span: f64) -> InjectivityReport {
    let mut seq = Kronecker::<3>::new(0);
    let pts: Vec<(f64, Vec3)> = (0..n_samples)
        .map(|i| {
            let cell = i % 27;
            let q = seq.next_point();
            let u = [((cell % 3) as f64 + q[0]) / 3.0, (((cell / 3) % 3) as f64 + q[1]) / 3.0, ((cell / 9) as f64 + q[2]) / 3.0];
            let r = radius * m::sqrt(u[0]);
            let phi = 2.0 * PI * u[1];
            let z = z0 + span * u[2];
            (z, tube_map(spec, r * m::cos(phi), r * m::sin(phi), z))
        })
        .collect();
    let h = libm::cbrt(PI * radius * radius * span.max(radius) / n_samples.max(1) as f64);
    let half = 0.5 * spec.turn_period();
    let mut min_sep = f64::INFINITY;
    let mut pairs = 0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (zi, pi) = pts[i];
            let (zj, pj) = pts[j];
            if m::abs(zi - zj) < half {
                continue;
            }
            pairs += 1;
            let scale = m::exp(spec.delta * spec.xi * zi).min(m::exp(spec.delta * spec.xi * zj)) * h;
            min_sep = min_sep.min((pi - pj).norm() / scale);
        }
    }
    InjectivityReport { min_separation: min_sep, pairs_tested: pairs, injective: min_sep > 1.0 }
}
