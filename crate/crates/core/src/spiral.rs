//! Logarithmic spirals: the closed-form family `φ[a,b,c]`, curves specified
//! by a constant antisymmetric generator `𝕽`, their frames and rotations.
//!
//! Frame convention: `e(z) = exp(δz𝕽)·e(0)` with `e(0)` the standard basis,
//! so `eᵢ'(z) = δ𝕽eᵢ(z)`. With this convention the Frenet torsion of `γ` is
//! `−δτ₀e^{−δξz}`, where `τ₀` is the value returned by [`matrix_invariants`].

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::real::m;

/// Exponents of `φ[a,b,c](t) = e^{at}(cos ct, sin ct, b/a)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SpiralParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl SpiralParams {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }
}

/// Below this `|a|` the regularized form `e_r(ct) + b·t·e_z` is used.
pub const FLAT_A: f64 = 1e-12;

pub fn spiral_point(p: SpiralParams, t: f64) -> Vec3 {
    let (ct, st) = (m::cos(p.c * t), m::sin(p.c * t));
    if m::abs(p.a) < FLAT_A {
        return Vec3::new(ct, st, p.b * t);
    }
    let e = m::exp(p.a * t);
    Vec3::new(e * ct, e * st, e * p.b / p.a)
}

/// `(speed, curvature, torsion)` of `φ[a,b,c]` at `t`.
pub fn spiral_invariants(p: SpiralParams, t: f64) -> (f64, f64, f64) {
    let SpiralParams { a, b, c } = p;
    let big_a = a * a + b * b + c * c;
    let e = m::exp(a * t);
    let speed = m::sqrt(big_a) * e;
    let kappa = m::sqrt(a * a * c * c + c * c * c * c) / big_a / e;
    let tau = b * c / big_a / e;
    (speed, kappa, tau)
}

/// Spiral exponents and scale such that `scale·φ[a*,b*,c*](z)` has
/// `ds = e^{ξz}dz`, `κ = κ₀e^{−ξz}`, `τ = τ₀e^{−ξz}`.
pub fn invariants_to_spiral(kappa0: f64, tau0: f64, xi: f64) -> Result<(SpiralParams, f64)> {
    if !(kappa0 > 0.0) {
        return Err(Error::InvalidInvariants("kappa0 must be positive"));
    }
    let rho2 = kappa0 * kappa0 + tau0 * tau0;
    let a = xi;
    let c = m::sqrt(rho2);
    let b = tau0 / kappa0 * m::sqrt(rho2 + xi * xi);
    let scale = 1.0 / m::sqrt(a * a + b * b + c * c);
    Ok((SpiralParams { a, b, c }, scale))
}

/// `(κ₀, τ₀) = (|𝕽e₃|, ⟨e₃×𝕽²e₃, 𝕽e₃⟩/|𝕽e₃|²)`.
pub fn matrix_invariants(r: &Mat3) -> Result<(f64, f64)> {
    let re3 = r.col(2);
    let k2 = re3.dot(re3);
    if k2 == 0.0 {
        return Err(Error::DegenerateAxis);
    }
    let r2e3 = r.apply(re3);
    let tau = Vec3::EZ.cross(r2e3).dot(re3) / k2;
    Ok((m::sqrt(k2), tau))
}

/// The generator whose frame is the Frenet frame of `γ` at `z = 0`:
/// `𝕽e₃ = κ₀e₁`, with `matrix_invariants` returning `(κ₀, τ₀)`.
pub fn frenet_generator(kappa0: f64, tau0: f64) -> Mat3 {
    Mat3([[0.0, tau0, kappa0], [-tau0, 0.0, 0.0], [-kappa0, 0.0, 0.0]])
}

/// Curve parameters `(𝕽, δ, ξ)` with derived invariants.
///
/// `γ` is anchored so that `γ(z + 2π/(δρ₀)) = e^{2πξ/ρ₀}γ(z)` holds exactly
/// for `ξ ≠ 0`: the similarity centre of the spiral is the origin and its
/// axis is `ω̂`, where `𝕽v = ω×v`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpiralSpec {
    pub r: Mat3,
    pub delta: f64,
    pub xi: f64,
    pub kappa0: f64,
    pub tau0: f64,
    pub rho0: f64,
    /// Exponents of the unit-δ normal form; multiply by δ for the δ-scaled curve.
    pub abc: SpiralParams,
    omega: Vec3,
    axis: Vec3,
    axial: f64,
    c_perp: Vec3,
}

impl SpiralSpec {
    pub fn new(r: Mat3, delta: f64, xi: f64) -> Result<Self> {
        let defect = r.antisymmetry_defect();
        if defect > 1e-12 * r.max_abs().max(1.0) {
            return Err(Error::NotAntisymmetric(defect));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::UnsupportedParameter("delta must be positive"));
        }
        if !xi.is_finite() {
            return Err(Error::UnsupportedParameter("xi must be finite"));
        }
        let (kappa0, tau0) = matrix_invariants(&r)?;
        let rho0 = m::sqrt(kappa0 * kappa0 + tau0 * tau0);
        let (abc, _) = invariants_to_spiral(kappa0, tau0, xi)?;
        let omega = r.axial();
        let axis = omega.scale(1.0 / omega.norm());
        let axial = axis.dot(Vec3::EZ);
        let v = Vec3::EZ - axis.scale(axial);
        let c_perp = (v.scale(xi) - omega.cross(v)).scale(1.0 / (delta * (xi * xi + rho0 * rho0)));
        Ok(Self { r, delta, xi, kappa0, tau0, rho0, abc, omega, axis, axial, c_perp })
    }

    /// Frenet-aligned spec from the invariants.
    pub fn frenet(kappa0: f64, tau0: f64, delta: f64, xi: f64) -> Result<Self> {
        if !(kappa0 > 0.0) {
            return Err(Error::InvalidInvariants("kappa0 must be positive"));
        }
        Self::new(frenet_generator(kappa0, tau0), delta, xi)
    }

    /// Operator norm of `𝕽`, which equals `ρ₀`.
    pub fn r_norm(&self) -> f64 {
        self.rho0
    }

    /// The rotation vector `ω` with `𝕽v = ω×v`.
    pub fn omega(&self) -> Vec3 {
        self.omega
    }

    /// Unit axis of the spiral.
    pub fn axis(&self) -> Vec3 {
        self.axis
    }

    /// `δ(ξI + 𝕽)`, the θ-generator of the normalized gauge.
    pub fn generator(&self) -> Mat3 {
        Mat3::identity().scaled(self.xi).add(&self.r).scaled(self.delta)
    }

    /// Parameter length of one turn of the frame, `2π/(δρ₀)`.
    pub fn turn_period(&self) -> f64 {
        2.0 * PI / (self.delta * self.rho0)
    }

    /// The frame rotation `exp(δz𝕽)`; its columns are `e₁, e₂, e₃` at `z`.
    pub fn frame_matrix(&self, z: f64) -> Mat3 {
        self.r.scaled(self.delta * z).exp_antisymmetric()
    }

    pub fn frame_at(&self, z: f64) -> [Vec3; 3] {
        let f = self.frame_matrix(z);
        [f.col(0), f.col(1), f.col(2)]
    }

    /// `R(θ)`, mapping `eᵢ(θ)` to the standard basis.
    pub fn rotation_r(&self, theta: f64) -> Mat3 {
        self.frame_matrix(theta).transpose()
    }

    /// Rotation part of the discrete similarity `θ ↦ θ + 2π`: rotation about
    /// the spiral axis by `2πδρ₀`.
    pub fn similarity_rotation(&self) -> Mat3 {
        self.frame_matrix(2.0 * PI)
    }

    /// `γ(z)`, with `γ'(z) = e^{δξz}e₃(z)`.
    pub fn gamma_point(&self, z: f64) -> Vec3 {
        let e = m::exp(self.delta * self.xi * z);
        let along = if self.xi == 0.0 { z } else { e / (self.delta * self.xi) };
        self.frame_matrix(z).apply(self.c_perp).scale(e) + self.axis.scale(self.axial * along)
    }

    /// `γ'(z) = e^{δξz}e₃(z)`.
    pub fn gamma_derivative(&self, z: f64) -> Vec3 {
        self.frame_matrix(z).col(2).scale(m::exp(self.delta * self.xi * z))
    }
}
