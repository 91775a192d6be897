//! Deterministic low-discrepancy points (additive recurrence on the
//! generalized golden ratio).

/// The `d`-dimensional Kronecker sequence with offset `seed`.
#[derive(Clone, Debug)]
pub struct Kronecker<const D: usize> {
    alpha: [f64; D],
    index: u64,
}

impl<const D: usize> Kronecker<D> {
    pub fn new(seed: u64) -> Self {
        // phi_d is the unique positive root of x^(d+1) = x + 1.
        let mut phi = 2.0f64;
        for _ in 0..64 {
            phi = libm::pow(1.0 + phi, 1.0 / (D as f64 + 1.0));
        }
        let mut alpha = [0.0; D];
        for (k, a) in alpha.iter_mut().enumerate() {
            *a = libm::pow(1.0 / phi, k as f64 + 1.0);
        }
        Self { alpha, index: seed }
    }

    pub fn next_point(&mut self) -> [f64; D] {
        self.index += 1;
        let n = self.index as f64;
        let mut p = [0.0; D];
        for (k, x) in p.iter_mut().enumerate() {
            let v = 0.5 + self.alpha[k] * n;
            *x = v - libm::floor(v);
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_cube_and_uniform() {
        let mut k = Kronecker::<2>::new(7);
        let mut counts = [0usize; 4];
        for _ in 0..4000 {
            let p = k.next_point();
            assert!(p.iter().all(|&x| (0.0..1.0).contains(&x)));
            counts[(p[0] * 2.0) as usize * 2 + (p[1] * 2.0) as usize] += 1;
        }
        for c in counts {
            assert!((c as i64 - 1000).abs() < 20);
        }
    }
}
