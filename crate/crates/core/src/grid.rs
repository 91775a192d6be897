//! Uniform `(s, θ)` grids on `Λ = [−S, S] × [−π, π)` with periodic θ, and the
//! discrete operators acting on grid functions.
//!
//! Grid functions are row-major: `u[j * n_theta + k]` is the value at
//! `(s_j, θ_k)`, `s_j = −S + j·h`, `θ_k = −π + 2πk/n_theta`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fourier::Fft;
use crate::real::m;

#[derive(Clone, Debug)]
pub struct CylinderGrid {
    /// Number of s-intervals; there are `n_s + 1` rows.
    pub n_s: usize,
    pub n_theta: usize,
    pub s_max: f64,
    pub h: f64,
    pub s: Vec<f64>,
    pub theta: Vec<f64>,
    fft: Fft,
}

impl CylinderGrid {
    /// `n_s` must be even (so that `s = 0` is a node) and at least 8;
    /// `n_theta` must be a power of two.
    pub fn new(s_max: f64, n_s: usize, n_theta: usize) -> Result<Self> {
        if n_s < 8 || !n_s.is_multiple_of(2) {
            return Err(Error::GridMismatch("n_s must be even and at least 8"));
        }
        if !n_theta.is_power_of_two() || n_theta < 4 {
            return Err(Error::GridMismatch("n_theta must be a power of two, at least 4"));
        }
        if !(s_max > 0.0) {
            return Err(Error::GridMismatch("s_max must be positive"));
        }
        let h = 2.0 * s_max / n_s as f64;
        let s = (0..=n_s).map(|j| -s_max + j as f64 * h).collect();
        let theta = (0..n_theta).map(|k| -PI + 2.0 * PI * k as f64 / n_theta as f64).collect();
        Ok(Self { n_s, n_theta, s_max, h, s, theta, fft: Fft::new(n_theta) })
    }

    /// The grid on `|s| ≤ arccosh(ℓ)`.
    pub fn for_ell(ell: f64, n_s: usize, n_theta: usize) -> Result<Self> {
        Self::new(m::acosh(ell), n_s, n_theta)
    }

    pub fn rows(&self) -> usize {
        self.n_s + 1
    }

    pub fn len(&self) -> usize {
        self.rows() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn fft(&self) -> &Fft {
        &self.fft
    }

    #[inline]
    pub fn idx(&self, j: usize, k: usize) -> usize {
        j * self.n_theta + k
    }

    pub fn check(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.len() {
            return Err(Error::GridMismatch("grid function has the wrong length"));
        }
        Ok(())
    }

    pub fn sample<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for &s in &self.s {
            for &t in &self.theta {
                out.push(f(s, t));
            }
        }
        out
    }

    /// Sample an `s`-profile as a θ-constant grid function.
    pub fn from_profile(&self, p: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for &v in p {
            out.extend(core::iter::repeat_n(v, self.n_theta));
        }
        out
    }

    /// Mode-wise `∂_θ^order`, row by row.
    pub fn d_theta(&self, u: &[f64], order: u32) -> Vec<f64> {
        let n = self.n_theta;
        let mut out = vec![0.0; u.len()];
        for (row, o) in u.chunks(n).zip(out.chunks_mut(n)) {
            self.fft.derivative(row, order, o);
        }
        out
    }

    /// `∂_s` (order 1) or `∂_s²` (order 2) by fourth-order differences with
    /// one-sided closure on the two outermost rows at each end.
    pub fn d_s4(&self, u: &[f64], order: u32) -> Vec<f64> {
        let (n, rows, h) = (self.n_theta, self.rows(), self.h);
        let mut out = vec![0.0; u.len()];
        let at = |j: usize, k: usize| u[j * n + k];
        for k in 0..n {
            for j in 0..rows {
                let v = if order == 1 {
                    let c: (&[f64], usize, f64) = if j >= 2 && j + 2 < rows {
                        (&[1.0, -8.0, 0.0, 8.0, -1.0], j - 2, 1.0)
                    } else if j == 0 {
                        (&[-25.0, 48.0, -36.0, 16.0, -3.0], 0, 1.0)
                    } else if j == 1 {
                        (&[-3.0, -10.0, 18.0, -6.0, 1.0], 0, 1.0)
                    } else if j + 1 == rows {
                        (&[3.0, -16.0, 36.0, -48.0, 25.0], rows - 5, 1.0)
                    } else {
                        (&[-1.0, 6.0, -18.0, 10.0, 3.0], rows - 5, 1.0)
                    };
                    c.0.iter().enumerate().map(|(i, w)| w * at(c.1 + i, k)).sum::<f64>() * c.2 / (12.0 * h)
                } else {
                    let c: (&[f64], usize) = if j >= 2 && j + 2 < rows {
                        (&[-1.0, 16.0, -30.0, 16.0, -1.0], j - 2)
                    } else if j == 0 {
                        (&[45.0, -154.0, 214.0, -156.0, 61.0, -10.0], 0)
                    } else if j == 1 {
                        (&[10.0, -15.0, -4.0, 14.0, -6.0, 1.0], 0)
                    } else if j + 1 == rows {
                        (&[-10.0, 61.0, -156.0, 214.0, -154.0, 45.0], rows - 6)
                    } else {
                        (&[1.0, -6.0, 14.0, -4.0, -15.0, 10.0], rows - 6)
                    };
                    c.0.iter().enumerate().map(|(i, w)| w * at(c.1 + i, k)).sum::<f64>() / (12.0 * h * h)
                };
                out[j * n + k] = v;
            }
        }
        out
    }

    /// `∂_s²` by second-order central differences; one-sided second-order
    /// closure on the boundary rows.
    pub fn d_ss2(&self, u: &[f64]) -> Vec<f64> {
        let (n, rows, h2) = (self.n_theta, self.rows(), self.h * self.h);
        let mut out = vec![0.0; u.len()];
        for j in 0..rows {
            for k in 0..n {
                let a = |jj: usize| u[jj * n + k];
                out[j * n + k] = if j == 0 {
                    2.0 * a(0) - 5.0 * a(1) + 4.0 * a(2) - a(3)
                } else if j + 1 == rows {
                    2.0 * a(j) - 5.0 * a(j - 1) + 4.0 * a(j - 2) - a(j - 3)
                } else {
                    a(j - 1) - 2.0 * a(j) + a(j + 1)
                } / h2;
            }
        }
        out
    }

    /// The discrete stability operator
    /// `L_h u = D²_s u + ∂²_θ u + 2sech²(s)u ≈ cosh²(s)𝓛_F u`.
    pub fn stability_apply(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check(u)?;
        let mut out = self.d_ss2(u);
        let tt = self.d_theta(u, 2);
        let n = self.n_theta;
        for (j, &s) in self.s.iter().enumerate() {
            let p = 2.0 / (m::cosh(s) * m::cosh(s));
            for k in 0..n {
                let i = j * n + k;
                out[i] += tt[i] + p * u[i];
            }
        }
        Ok(out)
    }

    /// Trapezoid weight in `s` times the uniform θ weight.
    pub fn weight(&self, j: usize) -> f64 {
        let ws = if j == 0 || j == self.n_s { 0.5 * self.h } else { self.h };
        ws * 2.0 * PI / self.n_theta as f64
    }

    /// Discrete `∫∫ u v ds dθ` over the grid.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        let n = self.n_theta;
        (0..self.rows())
            .map(|j| self.weight(j) * (0..n).map(|k| u[j * n + k] * v[j * n + k]).sum::<f64>())
            .sum()
    }

    /// θ-mean of each row.
    pub fn row_means(&self, u: &[f64]) -> Vec<f64> {
        u.chunks(self.n_theta).map(|r| r.iter().sum::<f64>() / self.n_theta as f64).collect()
    }

    /// Rows with `cosh(s) ≤ bound`, the certification region.
    pub fn rows_within_cosh(&self, bound: f64) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows()).filter(move |&j| m::cosh(self.s[j]) <= bound)
    }

    /// `max |u|` over rows with `cosh(s) ≤ bound`.
    pub fn sup_within_cosh(&self, u: &[f64], bound: f64) -> f64 {
        let n = self.n_theta;
        self.rows_within_cosh(bound)
            .flat_map(|j| u[j * n..(j + 1) * n].iter())
            .fold(0.0f64, |a, &x| a.max(m::abs(x)))
    }

    /// `max |u|` over interior rows (boundary rows excluded).
    pub fn sup_interior(&self, u: &[f64]) -> f64 {
        let n = self.n_theta;
        u[n..u.len() - n].iter().fold(0.0f64, |a, &x| a.max(m::abs(x)))
    }
}

pub fn sup_norm(u: &[f64]) -> f64 {
    u.iter().fold(0.0f64, |a, &x| a.max(m::abs(x)))
}
