//! Jets of surface maps and the homogeneous quantities built from them.
//!
//! Orientation: the unit normal is `ν = ∇₁×∇₂/|∇₁×∇₂|` and the mean curvature
//! is `H = gⁱʲ ν·∇²ᵢⱼ`, the sum of principal curvatures for that normal. The
//! graph of `√(1−x²−y²)` at its top therefore has `H = −2`.

use core::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};
use crate::quadrature;
use crate::real::m;

/// Jets with aspect ratio below this are not immersions.
pub const DEGENERATE_ASPECT: f64 = 1e-10;

/// First and second derivatives of a surface map at a point.
///
/// `d2` is ordered `(∇²₁₁, ∇²₂₂, ∇²₁₂, ∇²₂₁)`.
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct Jet {
    pub d1: [Vec3; 2],
    pub d2: [Vec3; 4],
}

/// A perturbation of a jet; same shape.
pub type Variation = Jet;

impl Jet {
    pub fn new(d1: [Vec3; 2], d2: [Vec3; 4]) -> Self {
        Self { d1, d2 }
    }

    /// Jet with symmetric mixed partials.
    pub fn symmetric(du: Vec3, dv: Vec3, duu: Vec3, dvv: Vec3, duv: Vec3) -> Self {
        Self { d1: [du, dv], d2: [duu, dvv, duv, duv] }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { d1: self.d1.map(|v| v.scale(c)), d2: self.d2.map(|v| v.scale(c)) }
    }

    pub fn rotated(&self, r: &Mat3) -> Self {
        Self { d1: self.d1.map(|v| r.apply(v)), d2: self.d2.map(|v| r.apply(v)) }
    }

    /// Frobenius norm of the first derivatives, `|∇|`.
    pub fn first_norm(&self) -> f64 {
        m::sqrt(self.d1[0].dot(self.d1[0]) + self.d1[1].dot(self.d1[1]))
    }

    /// Largest component difference against another jet.
    pub fn max_diff(&self, o: &Jet) -> f64 {
        self.d1
            .iter()
            .zip(&o.d1)
            .chain(self.d2.iter().zip(&o.d2))
            .fold(0.0f64, |a, (x, y)| a.max((*x - *y).max_abs()))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet {
            d1: [self.d1[0] + o.d1[0], self.d1[1] + o.d1[1]],
            d2: [self.d2[0] + o.d2[0], self.d2[1] + o.d2[1], self.d2[2] + o.d2[2], self.d2[3] + o.d2[3]],
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + o.scaled(-1.0)
    }
}

/// `𝔞 = 2√det(∇ᵀ∇)/|∇|²`, equal to 1 exactly on conformal jets.
pub fn aspect_ratio(j: &Jet) -> Result<f64> {
    let n2 = j.d1[0].dot(j.d1[0]) + j.d1[1].dot(j.d1[1]);
    if n2 == 0.0 || !n2.is_finite() {
        return Err(Error::InvalidImmersion(0.0));
    }
    Ok(2.0 * j.d1[0].cross(j.d1[1]).norm() / n2)
}

fn check_immersed(j: &Jet) -> Result<()> {
    let a = aspect_ratio(j)?;
    if a < DEGENERATE_ASPECT {
        return Err(Error::InvalidImmersion(a));
    }
    Ok(())
}

pub fn unit_normal(j: &Jet) -> Result<Vec3> {
    check_immersed(j)?;
    Ok(j.d1[0].cross(j.d1[1]).normalized())
}

pub fn mean_curvature(j: &Jet) -> Result<f64> {
    let nu = unit_normal(j)?;
    Ok(mean_curvature_with_normal(j, nu))
}

/// `H` given a precomputed unit normal; no immersion check.
#[inline]
pub fn mean_curvature_with_normal(j: &Jet, nu: Vec3) -> f64 {
    let (a, b) = (j.d1[0], j.d1[1]);
    let (g11, g12, g22) = (a.dot(a), a.dot(b), b.dot(b));
    let h11 = nu.dot(j.d2[0]);
    let h22 = nu.dot(j.d2[1]);
    let h12 = 0.5 * (nu.dot(j.d2[2]) + nu.dot(j.d2[3]));
    (g22 * h11 - 2.0 * g12 * h12 + g11 * h22) / (g11 * g22 - g12 * g12)
}

/// Quantities that are homogeneous in the jet and can be Taylor-expanded.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    AspectRatio,
    MeanCurvature,
    /// Component `i ∈ {0,1,2}` of the unit normal.
    NormalComponent(usize),
}

impl Quantity {
    pub fn eval(self, j: &Jet) -> Result<f64> {
        match self {
            Quantity::AspectRatio => {
                check_immersed(j)?;
                aspect_ratio(j)
            }
            Quantity::MeanCurvature => mean_curvature(j),
            Quantity::NormalComponent(i) => Ok(unit_normal(j)?[i]),
        }
    }
}

/// Step of the path-parameter finite differences, relative to `|j|`.
const FD_STEP: f64 = 1e-3;

/// Path `σ ↦ Φ(j + σ·t*·ê)` in the rescaled parameter `t = σ·|e|/|j|`.
struct Path<'a> {
    q: Quantity,
    j: &'a Jet,
    dir: Jet,
}

impl Path<'_> {
    fn at(&self, t: f64) -> Result<f64> {
        self.q.eval(&(*self.j + self.dir.scaled(t))).map_err(|_| Error::InvalidVariation(t))
    }

    /// Fourth-order central difference of the `order`-th derivative at `t`.
    fn derivative(&self, t: f64, order: usize) -> Result<f64> {
        let h = FD_STEP;
        let f = |k: i32| self.at(t + k as f64 * h);
        Ok(match order {
            0 => f(0)?,
            1 => (-f(2)? + 8.0 * f(1)? - 8.0 * f(-1)? + f(-2)?) / (12.0 * h),
            2 => (-f(2)? + 16.0 * f(1)? - 30.0 * f(0)? + 16.0 * f(-1)? - f(-2)?) / (12.0 * h * h),
            3 => (-f(3)? + 8.0 * f(2)? - 13.0 * f(1)? + 13.0 * f(-1)? - 8.0 * f(-2)? + f(-3)?) / (8.0 * h * h * h),
            _ => unreachable!("derivative order above 3"),
        })
    }
}

fn path<'a>(q: Quantity, j: &'a Jet, e: &Variation) -> (Path<'a>, f64) {
    let jn = j.first_norm();
    let en = e.first_norm().max(m::sqrt(e.d2.iter().map(|v| v.dot(*v)).sum::<f64>()));
    if en == 0.0 {
        return (Path { q, j, dir: Jet::default() }, 0.0);
    }
    (Path { q, j, dir: e.scaled(jn / en) }, en / jn)
}

/// Order-`k` Taylor remainder `Φ(j+e) − Σ_{i≤k} D^{(i)}Φ|_j(e^{⊗i})/i!`, `k ≤ 3`.
///
/// Directional derivatives come from fourth-order central differences along
/// the straight path `j + σe`.
pub fn taylor_remainder(q: Quantity, j: &Jet, e: &Variation, k: usize) -> Result<f64> {
    assert!(k <= 3, "Taylor remainder order {k} above 3");
    let (p, tstar) = path(q, j, e);
    if tstar == 0.0 {
        return Ok(0.0);
    }
    let mut r = p.at(tstar)?;
    let mut fact = 1.0;
    for i in 0..=k {
        if i > 0 {
            fact *= i as f64;
        }
        r -= p.derivative(0.0, i)? * libm::pow(tstar, i as f64) / fact;
    }
    Ok(r)
}

/// The same remainder in integral form,
/// `∫₀¹ (1−σ)^k/k! · (d/dσ)^{k+1} Φ(j+σe) dσ`, for `k ≤ 2`.
pub fn taylor_remainder_integral(q: Quantity, j: &Jet, e: &Variation, k: usize, tol: f64) -> Result<f64> {
    assert!(k <= 2, "integral form supports k ≤ 2");
    let (p, tstar) = path(q, j, e);
    if tstar == 0.0 {
        return Ok(0.0);
    }
    let fact = [1.0, 1.0, 2.0][k];
    let mut err = None;
    let v = quadrature::integrate(
        |sigma| match p.derivative(sigma * tstar, k + 1) {
            Ok(d) => libm::pow(1.0 - sigma, k as f64) / fact * d * libm::pow(tstar, k as f64 + 1.0),
            Err(e) => {
                err = Some(e);
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(v),
    }
}
