//! Finite-difference oracles shared by the integration tests.
#![allow(dead_code)]

use spiralforge_core::Vec3;

const D1: [(f64, f64); 6] = [(-3.0, -1.0 / 60.0), (-2.0, 3.0 / 20.0), (-1.0, -0.75), (1.0, 0.75), (2.0, -3.0 / 20.0), (3.0, 1.0 / 60.0)];
const D2: [(f64, f64); 7] = [
    (-3.0, 1.0 / 90.0),
    (-2.0, -3.0 / 20.0),
    (-1.0, 1.5),
    (0.0, -49.0 / 18.0),
    (1.0, 1.5),
    (2.0, -3.0 / 20.0),
    (3.0, 1.0 / 90.0),
];
const D3: [(f64, f64); 8] = [
    (-4.0, -7.0 / 240.0),
    (-3.0, 3.0 / 10.0),
    (-2.0, -169.0 / 120.0),
    (-1.0, 61.0 / 30.0),
    (1.0, -61.0 / 30.0),
    (2.0, 169.0 / 120.0),
    (3.0, -3.0 / 10.0),
    (4.0, 7.0 / 240.0),
];

fn stencil<F: Fn(f64) -> Vec3>(f: &F, t: f64, h: f64, w: &[(f64, f64)], p: i32) -> Vec3 {
    w.iter().fold(Vec3::zero(), |acc, &(k, c)| acc + f(t + k * h).scale(c)).scale(1.0 / h.powi(p))
}

/// Sixth-order central first, second and third derivatives.
pub fn derivatives<F: Fn(f64) -> Vec3>(f: F, t: f64, h: f64) -> (Vec3, Vec3, Vec3) {
    (stencil(&f, t, h, &D1, 1), stencil(&f, t, h, &D2, 2), stencil(&f, t, h, &D3, 3))
}

pub fn fd1<F: Fn(f64) -> Vec3>(f: F, t: f64, h: f64) -> Vec3 {
    stencil(&f, t, h, &D1, 1)
}

/// `(speed, curvature, torsion)` of a space curve from its derivatives.
pub fn frenet_oracle<F: Fn(f64) -> Vec3>(f: F, t: f64, h: f64) -> (f64, f64, f64) {
    let (d1, d2, d3) = derivatives(f, t, h);
    let c = d1.cross(d2);
    let speed = d1.norm();
    (speed, c.norm() / speed.powi(3), c.dot(d3) / c.dot(c))
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
