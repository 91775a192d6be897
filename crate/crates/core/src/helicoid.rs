//! The conformal helicoid `F(s,θ) = (sinh s sin θ, sinh s cos θ, θ)`, its
//! stability operator, kernel and substitute-kernel functions, and cutoffs.

use core::f64::consts::PI;

use crate::autodiff::Dual2;
use crate::error::{Error, Result};
use crate::homogeneous::Jet;
use crate::linalg::Vec3;
use crate::quadrature;
use crate::real::{m, Real};

pub fn helicoid_point(s: f64, theta: f64) -> Vec3 {
    let sh = m::sinh(s);
    Vec3::new(sh * m::sin(theta), sh * m::cos(theta), theta)
}

pub fn helicoid_jet(s: f64, theta: f64) -> Jet {
    let (sh, ch) = (m::sinh(s), m::cosh(s));
    let (st, ct) = (m::sin(theta), m::cos(theta));
    Jet::symmetric(
        Vec3::new(ch * st, ch * ct, 0.0),
        Vec3::new(sh * ct, -sh * st, 1.0),
        Vec3::new(sh * st, sh * ct, 0.0),
        Vec3::new(-sh * st, -sh * ct, 0.0),
        Vec3::new(ch * ct, -ch * st, 0.0),
    )
}

/// Third derivatives `(F_sss, F_ssθ, F_sθθ, F_θθθ)`.
pub fn helicoid_third(s: f64, theta: f64) -> [Vec3; 4] {
    let (sh, ch) = (m::sinh(s), m::cosh(s));
    let (st, ct) = (m::sin(theta), m::cos(theta));
    [
        Vec3::new(ch * st, ch * ct, 0.0),
        Vec3::new(sh * ct, -sh * st, 0.0),
        Vec3::new(-ch * st, -ch * ct, 0.0),
        Vec3::new(-sh * ct, sh * st, 0.0),
    ]
}

/// `ν_F = (−cos θ/cosh s, sin θ/cosh s, tanh s)` and the conformal factor
/// `|A_F|²/2 = cosh⁻⁴ s` of the Gauss map. This is minus the normal
/// `F_s×F_θ/|F_s×F_θ|` used by [`crate::homogeneous::unit_normal`].
pub fn gauss_map(s: f64, theta: f64) -> (Vec3, f64) {
    let ch = m::cosh(s);
    let nu = Vec3::new(-m::cos(theta) / ch, m::sin(theta) / ch, m::tanh(s));
    (nu, 1.0 / (ch * ch * ch * ch))
}

/// Smooth step `ψ[a,b]`: 0 near the `a` side, 1 near the `b` side.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CutoffSpec {
    pub a: f64,
    pub b: f64,
}

impl CutoffSpec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a == b || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidCutoff);
        }
        Ok(Self { a, b })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_generic(t)
    }

    pub fn eval_generic<T: Real>(&self, t: T) -> T {
        let l = (t - T::cst(self.a)).scale(6.0 / (self.b - self.a)) - T::cst(3.0);
        psi0(l)
    }
}

fn bump_edge<T: Real>(x: T) -> T {
    if x.value() > 0.0 {
        (-x.recip()).exp()
    } else {
        T::zero()
    }
}

/// `ψ₀(t) = f(t+1)/(f(t+1)+f(1−t))` with `f(x) = e^{−1/x}` for `x > 0`.
pub fn psi0<T: Real>(t: T) -> T {
    if t.value() <= -1.0 {
        return T::zero();
    }
    if t.value() >= 1.0 {
        return T::cst(1.0);
    }
    let one = T::cst(1.0);
    let p = bump_edge(one + t);
    let q = bump_edge(one - t);
    p / (p + q)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Which {
    X,
    Y,
    Z,
}

impl Which {
    pub const ALL: [Which; 3] = [Which::X, Which::Y, Which::Z];
}

/// Bounded Jacobi fields: `κ_x = cos θ/cosh s`, `κ_y = sin θ/cosh s`, `κ_z = tanh s`.
pub fn kernel_fn(which: Which, s: f64, theta: f64) -> f64 {
    match which {
        Which::X => m::cos(theta) / m::cosh(s),
        Which::Y => m::sin(theta) / m::cosh(s),
        Which::Z => m::tanh(s),
    }
}

/// Cutoff `ψ[1,2]` used by the substitute kernel, applied to `|s|`.
pub const SUBSTITUTE_CUTOFF: CutoffSpec = CutoffSpec { a: 1.0, b: 2.0 };

/// Radial profile `g` with `u_x = g(s)cos θ/4π`, `u_y = g(s)sin θ/4π`,
/// `u_z = g(s)/4π`, as a jet in `s`.
fn substitute_profile(which: Which, s: f64) -> Dual2 {
    let sd = Dual2::var_s(s);
    let abs = if s < 0.0 { -sd } else { sd };
    let psi = SUBSTITUTE_CUTOFF.eval_generic(abs);
    match which {
        Which::X | Which::Y => psi * sd.cosh(),
        Which::Z => psi * sd,
    }
}

fn angular(which: Which, theta: f64) -> f64 {
    match which {
        Which::X => m::cos(theta),
        Which::Y => m::sin(theta),
        Which::Z => 1.0,
    }
}

/// `u_x = ψ(s)cos θ cosh s/4π`, `u_y = ψ(s)sin θ cosh s/4π`, `u_z = ψ(s)s/4π`,
/// with `ψ(s) = ψ[1,2](|s|)`.
pub fn substitute_fn(which: Which, s: f64, theta: f64) -> f64 {
    substitute_profile(which, s).v * angular(which, theta) / (4.0 * PI)
}

/// `w = cosh²(s)𝓛_F u = u_ss + u_θθ + 2sech²(s)u` for the substitute
/// functions, with exact cutoff derivatives.
pub fn substitute_image_fn(which: Which, s: f64, theta: f64) -> f64 {
    let g = substitute_profile(which, s);
    let sech2 = 1.0 / (m::cosh(s) * m::cosh(s));
    let radial = match which {
        Which::X | Which::Y => g.ss - g.v + 2.0 * sech2 * g.v,
        Which::Z => g.ss + 2.0 * sech2 * g.v,
    };
    radial * angular(which, theta) / (4.0 * PI)
}

/// `∫_{|s|≤s_max} ∫ κ_i w_j dθ ds`. The θ-integral is done exactly.
pub fn pairing(kernel: Which, image: Which, s_max: f64) -> f64 {
    let angular_integral = match (kernel, image) {
        (Which::X, Which::X) | (Which::Y, Which::Y) => PI,
        (Which::Z, Which::Z) => 2.0 * PI,
        _ => return cross_pairing(kernel, image, s_max),
    };
    let radial = |s: f64| {
        let k = match kernel {
            Which::Z => m::tanh(s),
            _ => 1.0 / m::cosh(s),
        };
        // θ where the angular factor is 1
        let t0 = if image == Which::Y { 0.5 * PI } else { 0.0 };
        k * substitute_image_fn(image, s, t0)
    };
    angular_integral * quadrature::integrate_panels(radial, -s_max, s_max, 40, 1e-13)
}

/// Off-diagonal pairings by direct quadrature: the trapezoid rule in θ (exact
/// for the trigonometric integrands here) and adaptive Simpson in `s`.
fn cross_pairing(kernel: Which, image: Which, s_max: f64) -> f64 {
    const N: usize = 16;
    quadrature::integrate_panels(
        |s| {
            (0..N)
                .map(|k| {
                    let t = -PI + 2.0 * PI * k as f64 / N as f64;
                    kernel_fn(kernel, s, t) * substitute_image_fn(image, s, t)
                })
                .sum::<f64>()
                * (2.0 * PI / N as f64)
        },
        -s_max,
        s_max,
        20,
        // the θ-sums cancel to roundoff of the summands, roughly 1e-13 per
        // unit length in the cutoff band; a tighter target never terminates
        1e-10,
    )
}

/// `∫ κ w dμ_Ω` over `|s| ≤ s_max` for the matched pair.
pub fn kernel_pairing(which: Which, s_max: f64) -> f64 {
    pairing(which, which, s_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_support() {
        let c = CutoffSpec::new(1.0, 2.0).unwrap();
        assert_eq!(c.eval(0.9), 0.0);
        assert_eq!(c.eval(2.1), 1.0);
        assert_eq!(psi0(0.0), 0.5);
        assert!(CutoffSpec::new(1.0, 1.0).is_err());
    }

    #[test]
    fn far_field_image() {
        for &s in &[2.0, 2.5, -3.0, 6.0] {
            let t = 0.7;
            let expected = 2.0 * m::cos(t) / m::cosh(s) / (4.0 * PI);
            assert!((substitute_image_fn(Which::X, s, t) - expected).abs() < 1e-15);
        }
    }
}
