//! Second-order forward-mode differentiation in two variables `(s, θ)`.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::real::Real;

/// Value together with all partial derivatives up to order two in `(s, θ)`.
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct Dual2 {
    pub v: f64,
    pub s: f64,
    pub t: f64,
    pub ss: f64,
    pub st: f64,
    pub tt: f64,
}

impl Dual2 {
    pub fn constant(v: f64) -> Self {
        Self { v, ..Default::default() }
    }

    /// The independent variable `s` evaluated at `v`.
    pub fn var_s(v: f64) -> Self {
        Self { v, s: 1.0, ..Default::default() }
    }

    /// The independent variable `θ` evaluated at `v`.
    pub fn var_t(v: f64) -> Self {
        Self { v, t: 1.0, ..Default::default() }
    }

    /// Compose with a scalar function whose value and first two derivatives
    /// at `self.v` are `h0, h1, h2`.
    #[inline]
    pub fn chain(self, h0: f64, h1: f64, h2: f64) -> Self {
        Self {
            v: h0,
            s: h1 * self.s,
            t: h1 * self.t,
            ss: h2 * self.s * self.s + h1 * self.ss,
            st: h2 * self.s * self.t + h1 * self.st,
            tt: h2 * self.t * self.t + h1 * self.tt,
        }
    }
}

impl Add for Dual2 {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            v: self.v + o.v,
            s: self.s + o.s,
            t: self.t + o.t,
            ss: self.ss + o.ss,
            st: self.st + o.st,
            tt: self.tt + o.tt,
        }
    }
}

impl Sub for Dual2 {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Dual2 {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self { v: -self.v, s: -self.s, t: -self.t, ss: -self.ss, st: -self.st, tt: -self.tt }
    }
}

impl Mul for Dual2 {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        Self {
            v: self.v * o.v,
            s: self.s * o.v + self.v * o.s,
            t: self.t * o.v + self.v * o.t,
            ss: self.ss * o.v + 2.0 * self.s * o.s + self.v * o.ss,
            st: self.st * o.v + self.s * o.t + self.t * o.s + self.v * o.st,
            tt: self.tt * o.v + 2.0 * self.t * o.t + self.v * o.tt,
        }
    }
}

impl Div for Dual2 {
    type Output = Self;
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Real for Dual2 {
    fn cst(x: f64) -> Self {
        Self::constant(x)
    }
    fn value(self) -> f64 {
        self.v
    }
    fn scale(self, k: f64) -> Self {
        Self { v: self.v * k, s: self.s * k, t: self.t * k, ss: self.ss * k, st: self.st * k, tt: self.tt * k }
    }
    fn sin(self) -> Self {
        let (s, c) = (libm::sin(self.v), libm::cos(self.v));
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = (libm::sin(self.v), libm::cos(self.v));
        self.chain(c, -s, -c)
    }
    fn sinh(self) -> Self {
        let (s, c) = (libm::sinh(self.v), libm::cosh(self.v));
        self.chain(s, c, s)
    }
    fn cosh(self) -> Self {
        let (s, c) = (libm::sinh(self.v), libm::cosh(self.v));
        self.chain(c, s, c)
    }
    fn exp(self) -> Self {
        let e = libm::exp(self.v);
        self.chain(e, e, e)
    }
    fn sqrt(self) -> Self {
        let r = libm::sqrt(self.v);
        self.chain(r, 0.5 / r, -0.25 / (r * self.v))
    }
    fn recip(self) -> Self {
        let r = 1.0 / self.v;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }
}
