//! Hermitian eigendecompositions and numerical rank of PSD matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::model::CVector;
use crate::stats::CMatrix;

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// the matching unit eigenvectors as columns.
pub fn hermitian_eigen(x: &CMatrix) -> (Vec<f64>, CMatrix) {
    debug_assert_eq!(x.nrows(), x.ncols());
    let herm = x.map_with_location(|r, c, v| {
        // Symmetrize first so solver dust cannot produce complex eigenvalues.
        (v + x[(c, r)].conj()) * Complex64::new(0.5, 0.0)
    });
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = x.nrows();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(x: &CMatrix) -> Vec<f64> {
    hermitian_eigen(x).0
}

/// Numerical rank report of a PSD matrix.
#[derive(Debug, Clone)]
pub struct RankInfo {
    pub rank: usize,
    /// Ascending eigenvalues.
    pub eigenvalues: Vec<f64>,
    /// `t` with `X ~ t t^H`, present only when the rank is 1.
    pub factor: Option<CVector>,
}

/// Counts eigenvalues above `threshold * lambda_max` and extracts the
/// principal factor when exactly one survives. A zero (or negative dust)
/// matrix has rank 0 and no factor.
pub fn numerical_rank(x: &CMatrix, threshold: f64) -> RankInfo {
    let (values, vectors) = hermitian_eigen(x);
    let lambda_max = values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 {
        return RankInfo { rank: 0, eigenvalues: values, factor: None };
    }
    let cut = threshold * lambda_max;
    let rank = values.iter().filter(|&&v| v > cut).count();
    let factor = (rank == 1).then(|| {
        let idx = values.len() - 1;
        let u = vectors.column(idx);
        let mut t = CVector::from_column_slice(u.as_slice());
        t *= Complex64::new(lambda_max.sqrt(), 0.0);
        t
    });
    RankInfo { rank, eigenvalues: values, factor }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hermitian_eigen_recovers_known_spectrum() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        let (values, vectors) = hermitian_eigen(&m);
        assert_abs_diff_eq!(values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(values[1], 3.0, epsilon = 1e-12);
        let lam = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            2,
            values.iter().map(|&v| Complex64::new(v, 0.0)),
        ));
        let recon = &vectors * lam * vectors.adjoint();
        assert!((recon - m).norm() < 1e-12);
    }

    #[test]
    fn rank_one_matrix_yields_factor_with_right_power() {
        let u = CVector::from_vec(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
        ]);
        let x = (&u * u.adjoint()) * Complex64::new(3.0, 0.0);
        let info = numerical_rank(&x, 1e-9);
        assert_eq!(info.rank, 1);
        let t = info.factor.unwrap();
        assert_abs_diff_eq!(t.norm_squared(), 3.0, epsilon = 1e-12);
        assert!((&t * t.adjoint() - &x).norm() < 1e-10);
    }

    #[test]
    fn threshold_separates_rank_one_from_rank_two() {
        let near = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1e-9, 0.0),
        ]));
        assert_eq!(numerical_rank(&near, 1e-6).rank, 1);
        let spread = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        let info = numerical_rank(&spread, 1e-6);
        assert_eq!(info.rank, 2);
        assert!(info.factor.is_none());
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let z = CMatrix::zeros(3, 3);
        let info = numerical_rank(&z, 1e-6);
        assert_eq!(info.rank, 0);
        assert!(info.factor.is_none());
    }
}
