//! Radix-2 FFT and mode-wise operations on real θ-periodic samples.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Sub};

use crate::real::m;

#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }
    #[inline]
    pub fn scale(self, k: f64) -> Self {
        Self::new(self.re * k, self.im * k)
    }
    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }
}

impl Mul for Complex {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Add for Complex {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Complex {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

/// Precomputed tables for length-`n` transforms, `n` a power of two.
#[derive(Clone, Debug)]
pub struct Fft {
    n: usize,
    twiddles: Vec<Complex>,
    bitrev: Vec<usize>,
}

impl Fft {
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length {n} is not a power of two");
        let twiddles = (0..n / 2)
            .map(|k| {
                let a = -2.0 * PI * k as f64 / n as f64;
                Complex::new(m::cos(a), m::sin(a))
            })
            .collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n)
            .map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) })
            .collect();
        Self { n, twiddles, bitrev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place transform `X_k = Σ_j x_j e^{∓2πijk/n}` (minus sign forward).
    pub fn transform(&self, data: &mut [Complex], inverse: bool) {
        let n = self.n;
        assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.bitrev[i];
            if i < j {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + len / 2] * w;
                    data[start + k] = a + b;
                    data[start + k + len / 2] = a - b;
                }
            }
            len <<= 1;
        }
    }

    /// Fourier coefficients `c_m`, `m = 0..=n/2`, of real samples on
    /// `θ_k = θ_0 + 2πk/n`, normalized so `x(θ) = Σ_m c_m e^{imθ}` with the
    /// usual conjugate pairing. The phase of `θ_0` is folded in.
    pub fn real_forward(&self, x: &[f64], theta0: f64) -> Vec<Complex> {
        let n = self.n;
        let mut buf: Vec<Complex> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
        self.transform(&mut buf, false);
        (0..=n / 2)
            .map(|k| {
                let a = -(k as f64) * theta0;
                (buf[k] * Complex::new(m::cos(a), m::sin(a))).scale(1.0 / n as f64)
            })
            .collect()
    }

    /// Inverse of [`Fft::real_forward`]. The Nyquist coefficient is taken as
    /// real (its imaginary part is not representable on the grid).
    pub fn real_inverse(&self, c: &[Complex], theta0: f64, out: &mut [f64]) {
        let n = self.n;
        let mut buf = vec![Complex::default(); n];
        for k in 0..=n / 2 {
            let a = k as f64 * theta0;
            let ck = c[k] * Complex::new(m::cos(a), m::sin(a));
            buf[k] = ck;
            if k != 0 && k != n / 2 {
                buf[n - k] = ck.conj();
            }
        }
        if n >= 2 {
            buf[n / 2] = Complex::new(buf[n / 2].re, 0.0);
        }
        self.transform(&mut buf, true);
        for (o, b) in out.iter_mut().zip(&buf) {
            *o = b.re;
        }
    }

    /// Mode-wise `∂_θ^order` of real periodic samples. Odd derivatives
    /// annihilate the Nyquist mode, which has no well-defined derivative.
    pub fn derivative(&self, x: &[f64], order: u32, out: &mut [f64]) {
        let n = self.n;
        let mut c = self.real_forward(x, 0.0);
        for (k, ck) in c.iter_mut().enumerate() {
            let mk = k as f64;
            *ck = match order % 4 {
                0 => ck.scale(libm::pow(mk, order as f64)),
                1 => Complex::new(-ck.im, ck.re).scale(libm::pow(mk, order as f64)),
                2 => ck.scale(-libm::pow(mk, order as f64)),
                _ => Complex::new(ck.im, -ck.re).scale(libm::pow(mk, order as f64)),
            };
            if order % 2 == 1 && k == n / 2 {
                *ck = Complex::default();
            }
        }
        self.real_inverse(&c, 0.0, out);
    }

    /// Evaluate the trigonometric interpolant of samples on
    /// `θ_k = θ_0 + 2πk/n` at an arbitrary `θ`.
    pub fn interpolate(&self, coeffs: &[Complex], theta: f64) -> f64 {
        let n = self.n;
        let mut v = coeffs[0].re;
        for (k, c) in coeffs.iter().enumerate().skip(1) {
            let a = k as f64 * theta;
            let w = c.re * m::cos(a) - c.im * m::sin(a);
            v += if k == n / 2 { w } else { 2.0 * w };
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[Complex]) -> Vec<Complex> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex::default(), |acc, (j, &v)| {
                    let a = -2.0 * PI * (j * k) as f64 / n as f64;
                    acc + v * Complex::new(m::cos(a), m::sin(a))
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for &n in &[1usize, 2, 4, 16, 64] {
            let x: Vec<Complex> =
                (0..n).map(|j| Complex::new(m::sin(j as f64 * 1.3) + 0.2, m::cos(j as f64 * 0.7))).collect();
            let mut y = x.clone();
            Fft::new(n).transform(&mut y, false);
            for (a, b) in y.iter().zip(naive_dft(&x)) {
                assert!((a.re - b.re).abs() < 1e-12 && (a.im - b.im).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_derivatives_are_exact_on_band_limited_data() {
        let n = 32;
        let fft = Fft::new(n);
        let th: Vec<f64> = (0..n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).collect();
        let x: Vec<f64> = th.iter().map(|&t| m::cos(3.0 * t) + 0.5 * m::sin(t)).collect();
        let mut d1 = vec![0.0; n];
        let mut d2 = vec![0.0; n];
        fft.derivative(&x, 1, &mut d1);
        fft.derivative(&x, 2, &mut d2);
        for k in 0..n {
            let t = th[k];
            assert!((d1[k] - (-3.0 * m::sin(3.0 * t) + 0.5 * m::cos(t))).abs() < 1e-12);
            assert!((d2[k] - (-9.0 * m::cos(3.0 * t) - 0.5 * m::sin(t))).abs() < 1e-12);
        }
        let c = fft.real_forward(&x, -PI);
        let t = 0.4321;
        assert!((fft.interpolate(&c, t) - (m::cos(3.0 * t) + 0.5 * m::sin(t))).abs() < 1e-12);
        let mut back = vec![0.0; n];
        fft.real_inverse(&c, -PI, &mut back);
        for k in 0..n {
            assert!((back[k] - x[k]).abs() < 1e-13);
        }
    }
}
