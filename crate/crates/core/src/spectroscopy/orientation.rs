/// Isotropic average of four dipole projections for parallel polarizations.
///
/// C̄ = (1/15)[(μ_m·μ_m1)(μ_m2·μ_m3) + (μ_m·μ_m2)(μ_m1·μ_m3) + (μ_m·μ_m3)(μ_m1·μ_m2)]
pub fn orientation_factor(dipoles: &[[f64; 3]], m: usize, m1: usize, m2: usize, m3: usize) -> f64 {
    let p = |a: usize, b: usize| {
        let (x, y) = (&dipoles[a], &dipoles[b]);
        x[0] * y[0] + x[1] * y[1] + x[2] * y[2]
    };
    (p(m, m1) * p(m2, m3) + p(m, m2) * p(m1, m3) + p(m, m3) * p(m1, m2)) / 15.0
}

/// All C̄ values for a ring, laid out as `[(m·N + m1)·N² + m3·N + m2]`.
///
/// The layout pairs the bra indices (m, m1) against the ket indices (m3, m2)
/// as they appear in the response sums.
#[derive(Debug, Clone)]
pub struct OrientationTensor {
    pub n: usize,
    pub values: Vec<f64>,
}

impl OrientationTensor {
    pub fn new(dipoles: &[[f64; 3]]) -> Self {
        let n = dipoles.len();
        let mut values = vec![0.0; n.pow(4)];
        for m in 0..n {
            for m1 in 0..n {
                for m3 in 0..n {
                    for m2 in 0..n {
                        values[((m * n + m1) * n + m3) * n + m2] = orientation_factor(dipoles, m, m1, m2, m3);
                    }
                }
            }
        }
        Self { n, values }
    }

    /// Row for bra pair a = m·N + m1, indexed by b = m3·N + m2.
    #[inline]
    pub fn row(&self, a: usize) -> &[f64] {
        let nn = self.n * self.n;
        &self.values[a * nn..(a + 1) * nn]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_dipoles() {
        let d = [[0.0, 0.0, 1.0]];
        assert!((orientation_factor(&d, 0, 0, 0, 0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_pairs_vanish() {
        let d = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        // every pairing contains at least one orthogonal product
        assert_eq!(orientation_factor(&d, 0, 1, 2, 0), 0.0);
        assert_eq!(orientation_factor(&d, 0, 1, 2, 2), 0.0);
    }

    #[test]
    fn tensor_layout() {
        let d = [[1.0, 0.0, 0.0], [0.6, 0.8, 0.0], [0.0, 0.6, 0.8]];
        let t = OrientationTensor::new(&d);
        let (m, m1, m2, m3) = (2, 0, 1, 2);
        assert_eq!(t.row(m * 3 + m1)[m3 * 3 + m2], orientation_factor(&d, m, m1, m2, m3));
    }
}
