use super::StaticsError;
use crate::model::ExcitonMatrix;
use nalgebra::{DMatrix, SymmetricEigen};

/// Eigen-decomposition of one exciton matrix.
#[derive(Debug, Clone)]
pub struct SpectralRealization {
    /// Ascending, cm⁻¹.
    pub energies: Vec<f64>,
    /// Columns are eigenvectors, ordered like `energies`.
    pub eigenvectors: DMatrix<f64>,
}

impl SpectralRealization {
    pub fn n(&self) -> usize {
        self.energies.len()
    }
}

/// Full real spectrum of K, sorted ascending.
///
/// Each eigenvector's sign is fixed so that its largest-magnitude component
/// (lowest index on ties) is positive.
pub fn diagonalize(k: &ExcitonMatrix) -> Result<SpectralRealization, StaticsError> {
    let m = &k.k;
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (m[(i, j)] - m[(j, i)]).abs();
            if d != 0.0 {
                return Err(StaticsError::NotSymmetric(i, j, d));
            }
        }
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (c, &src) in order.iter().enumerate() {
        let col = eig.eigenvectors.column(src);
        let mut pivot = 0;
        for r in 1..n {
            if col[r].abs() > col[pivot].abs() + 1e-12 {
                pivot = r;
            }
        }
        let sign = if col[pivot] < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            vecs[(r, c)] = sign * col[r];
        }
    }
    Ok(SpectralRealization { energies, eigenvectors: vecs })
}

/// 1/Σ ψ⁴ for a normalized real vector.
pub fn ipr<'a>(psi: impl IntoIterator<Item = &'a f64>) -> f64 {
    1.0 / psi.into_iter().map(|x| x.powi(4)).sum::<f64>()
}

/// (E_i, IPR_i) for every eigenstate.
pub fn ipr_spectrum(r: &SpectralRealization) -> Vec<(f64, f64)> {
    r.energies
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, ipr(r.eigenvectors.column(i).iter())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_exciton_matrix, CouplingParams, DisorderShifts, RingGeometry};

    fn clean() -> ExcitonMatrix {
        build_exciton_matrix(&RingGeometry::default(), &CouplingParams::default(), &DisorderShifts::zeros(16)).unwrap()
    }

    #[test]
    fn clean_ring_pairs() {
        let r = diagonalize(&clean()).unwrap();
        let e = &r.energies;
        // two bands of eight; the band edges of each band are non-degenerate
        for p in [1, 3, 5, 9, 11, 13] {
            let gap = e[p + 1] - e[p];
            assert!(gap.abs() < 1e-6, "pair {p}: {gap}");
        }
        for p in [0, 6, 7, 8, 14] {
            assert!(e[p + 1] - e[p] > 1.0, "level {p}");
        }
        assert!((e[0] + 1769.11).abs() < 0.01);
        assert!((e[7] - 287.76).abs() < 0.01);
        assert!((e[8] - 486.54).abs() < 0.01);
    }

    #[test]
    fn orthonormal_and_residual() {
        let k = clean();
        let r = diagonalize(&k).unwrap();
        let v = &r.eigenvectors;
        let g = v.transpose() * v;
        assert!((g - DMatrix::identity(16, 16)).abs().max() < 1e-10);
        let norm = k.k.abs().max();
        for i in 0..16 {
            let res = &k.k * v.column(i) - v.column(i) * r.energies[i];
            assert!(res.abs().max() < 1e-8 * norm);
        }
    }

    #[test]
    fn ipr_limits() {
        assert_eq!(ipr(&[0.0, 1.0, 0.0]), 1.0);
        let u = vec![0.25; 16];
        assert!((ipr(&u) - 16.0).abs() < 1e-12);
        let z = ExcitonMatrix { k: DMatrix::zeros(4, 4) };
        assert!(diagonalize(&z).unwrap().energies.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn rejects_asymmetric() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = 1.0;
        assert!(matches!(diagonalize(&ExcitonMatrix { k: m }), Err(StaticsError::NotSymmetric(0, 1, _))));
    }
}
