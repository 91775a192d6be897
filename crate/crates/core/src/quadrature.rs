//! Adaptive Simpson quadrature.

use crate::real::m;

/// `∫_a^b f` to absolute tolerance `tol` by adaptive Simpson with Richardson
/// correction. Recursion depth is capped at 50; a non-finite integrand stops
/// refinement and propagates into the result.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    step(&mut f, a, b, fa, fb, fc, whole, tol, 50)
}

/// Integrate over `[a, b]` split into `pieces` equal panels; useful when the
/// integrand has features narrower than the interval.
pub fn integrate_panels<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| integrate(&mut f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / pieces as f64))
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn step<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let diff = left + right - whole;
    if depth == 0 || m::abs(diff) <= 15.0 * tol || !diff.is_finite() {
        return left + right + diff / 15.0;
    }
    step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}
