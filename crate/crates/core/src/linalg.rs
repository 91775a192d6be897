//! Small fixed-size linear algebra: 3-vectors over any [`Real`], 3×3 float
//! matrices, Rodrigues exponentials and a tridiagonal solver.

use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::real::{m, Real};

#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct Vec3<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }
    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }
    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }
    #[inline]
    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }
    #[inline]
    pub fn scale_f(self, k: f64) -> Self {
        Self::new(self.x.scale(k), self.y.scale(k), self.z.scale(k))
    }
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }
    pub fn normalized(self) -> Self {
        self.scale(self.norm().recip())
    }
    pub fn values(self) -> Vec3 {
        Vec3::new(self.x.value(), self.y.value(), self.z.value())
    }
}

impl Vec3 {
    pub const EX: Vec3 = Vec3 { x: 1.0, y: 0.0, z: 0.0 };
    pub const EY: Vec3 = Vec3 { x: 0.0, y: 1.0, z: 0.0 };
    pub const EZ: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 1.0 };

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
    pub fn max_abs(self) -> f64 {
        m::abs(self.x).max(m::abs(self.y)).max(m::abs(self.z))
    }
}

impl<T: Real> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> AddAssign for Vec3<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v.scale(self)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

/// Row-major 3×3 matrix.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Default for Mat3 {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mat3 {
    pub const fn zero() -> Self {
        Mat3([[0.0; 3]; 3])
    }
    pub const fn identity() -> Self {
        Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }
    pub fn from_cols(a: Vec3, b: Vec3, c: Vec3) -> Self {
        Mat3([[a.x, b.x, c.x], [a.y, b.y, c.y], [a.z, b.z, c.z]])
    }
    pub fn col(&self, j: usize) -> Vec3 {
        Vec3::new(self.0[0][j], self.0[1][j], self.0[2][j])
    }
    /// The matrix of `v ↦ w × v`.
    pub fn cross_matrix(w: Vec3) -> Self {
        Mat3([[0.0, -w.z, w.y], [w.z, 0.0, -w.x], [-w.y, w.x, 0.0]])
    }
    /// The vector `w` with `self·v = w × v`; exact only for antisymmetric input.
    pub fn axial(&self) -> Vec3 {
        let a = &self.0;
        Vec3::new(0.5 * (a[2][1] - a[1][2]), 0.5 * (a[0][2] - a[2][0]), 0.5 * (a[1][0] - a[0][1]))
    }
    pub fn transpose(&self) -> Self {
        let a = &self.0;
        Mat3([[a[0][0], a[1][0], a[2][0]], [a[0][1], a[1][1], a[2][1]], [a[0][2], a[1][2], a[2][2]]])
    }
    pub fn scaled(&self, k: f64) -> Self {
        let mut r = *self;
        r.0.iter_mut().flatten().for_each(|x| *x *= k);
        r
    }
    pub fn add(&self, o: &Mat3) -> Self {
        let mut r = *self;
        for i in 0..3 {
            for j in 0..3 {
                r.0[i][j] += o.0[i][j];
            }
        }
        r
    }
    pub fn sub(&self, o: &Mat3) -> Self {
        self.add(&o.scaled(-1.0))
    }
    pub fn matmul(&self, o: &Mat3) -> Self {
        let mut r = Mat3::zero();
        for i in 0..3 {
            for j in 0..3 {
                r.0[i][j] = (0..3).map(|k| self.0[i][k] * o.0[k][j]).sum();
            }
        }
        r
    }
    #[inline]
    pub fn apply<T: Real>(&self, v: Vec3<T>) -> Vec3<T> {
        let a = &self.0;
        Vec3::new(
            v.x.scale(a[0][0]) + v.y.scale(a[0][1]) + v.z.scale(a[0][2]),
            v.x.scale(a[1][0]) + v.y.scale(a[1][1]) + v.z.scale(a[1][2]),
            v.x.scale(a[2][0]) + v.y.scale(a[2][1]) + v.z.scale(a[2][2]),
        )
    }
    pub fn det(&self) -> f64 {
        self.col(0).dot(self.col(1).cross(self.col(2)))
    }
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let (c0, c1, c2) = (self.col(0), self.col(1), self.col(2));
        let (r0, r1, r2) = (c1.cross(c2), c2.cross(c0), c0.cross(c1));
        Some(Mat3([r0.to_array(), r1.to_array(), r2.to_array()]).scaled(1.0 / d))
    }
    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0f64, |a, &x| a.max(m::abs(x)))
    }
    /// Largest absolute entry of `self + selfᵀ`.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.add(&self.transpose()).max_abs()
    }
    /// `exp(A)` for antisymmetric `A`, by Rodrigues' formula.
    pub fn exp_antisymmetric(&self) -> Self {
        let w = self.axial();
        let phi = w.norm();
        if phi == 0.0 {
            return Mat3::identity();
        }
        let k = Mat3::cross_matrix(w.scale(1.0 / phi));
        let k2 = k.matmul(&k);
        Mat3::identity().add(&k.scaled(m::sin(phi))).add(&k2.scaled(1.0 - m::cos(phi)))
    }
}

/// Solve a tridiagonal system in place (Thomas algorithm).
///
/// `lower[i]` couples row `i` to `i-1` (`lower[0]` unused), `upper[i]` couples
/// row `i` to `i+1` (last entry unused). Returns `None` on a zero pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> Option<()> {
    let n = diag.len();
    if n == 0 {
        return Some(());
    }
    let mut c = alloc::vec![0.0; n];
    let mut beta = diag[0];
    if beta == 0.0 {
        return None;
    }
    rhs[0] /= beta;
    for i in 1..n {
        c[i - 1] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i - 1];
        if beta == 0.0 {
            return None;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    Some(())
}
