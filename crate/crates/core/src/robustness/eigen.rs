//! Cyclic Jacobi eigenvalue solver for dense symmetric matrices.
//!
//! Each rotation annihilates one off-diagonal pair; a sweep visits every pair
//! once in row order. Convergence is declared when the off-diagonal Frobenius
//! mass falls below `tol · ‖A‖_F`, after which one more sweep is run to
//! polish the diagonal (Jacobi converges quadratically near the end, so this
//! costs little and removes most of the residual error).

use thiserror::Error;

use crate::linalg::Matrix;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps \
         (off-diagonal norm {off_norm:e}, matrix norm {norm:e})"
    )]
    NoConvergence {
        sweeps: usize,
        off_norm: f64,
        norm: f64,
    },
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            sum += 2.0 * a[(i, j)] * a[(i, j)];
        }
    }
    sum.sqrt()
}

fn sweep(a: &mut Matrix) {
    let n = a.rows();
    for p in 0..n {
        for q in p + 1..n {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let app = a[(p, p)];
            let aqq = a[(q, q)];
            let theta = (aqq - app) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            a[(p, p)] = app - t * apq;
            a[(q, q)] = aqq + t * apq;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            for k in 0..n {
                if k == p || k == q {
                    continue;
                }
                let akp = a[(k, p)];
                let akq = a[(k, q)];
                let new_p = c * akp - s * akq;
                let new_q = s * akp + c * akq;
                a[(k, p)] = new_p;
                a[(p, k)] = new_p;
                a[(k, q)] = new_q;
                a[(q, k)] = new_q;
            }
        }
    }
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(
    matrix: &Matrix,
    tol: f64,
    max_sweeps: usize,
) -> Result<Vec<f64>, EigenError> {
    let (rows, cols) = (matrix.rows(), matrix.cols());
    if rows != cols {
        return Err(EigenError::NotSquare { rows, cols });
    }
    let norm = matrix.frobenius_norm();
    if !matrix.is_symmetric(1e-12 * norm.max(1.0)) {
        return Err(EigenError::NotSymmetric);
    }
    let mut a = matrix.clone();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= tol * norm {
            break;
        }
        if sweeps == max_sweeps {
            return Err(EigenError::NoConvergence {
                sweeps,
                off_norm: off,
                norm,
            });
        }
        sweep(&mut a);
        sweeps += 1;
    }
    if sweeps > 0 {
        sweep(&mut a);
    }
    let mut values: Vec<f64> = (0..rows).map(|i| a[(i, i)]).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_returned_sorted() {
        let m = Matrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -1.0]]);
        assert_eq!(
            symmetric_eigenvalues(&m, DEFAULT_TOL, 10).unwrap(),
            vec![-1.0, 3.0]
        );
    }

    #[test]
    fn two_by_two() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let m = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let ev = symmetric_eigenvalues(&m, DEFAULT_TOL, 10).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_input() {
        let m = Matrix::zeros(2, 3);
        assert_eq!(
            symmetric_eigenvalues(&m, DEFAULT_TOL, 10),
            Err(EigenError::NotSquare { rows: 2, cols: 3 })
        );
        let m = Matrix::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]);
        assert_eq!(
            symmetric_eigenvalues(&m, DEFAULT_TOL, 10),
            Err(EigenError::NotSymmetric)
        );
    }

    #[test]
    fn sweep_cap_is_reported() {
        let m = Matrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 5.0],
            vec![3.0, 5.0, 6.0],
        ]);
        assert!(matches!(
            symmetric_eigenvalues(&m, DEFAULT_TOL, 0),
            Err(EigenError::NoConvergence { sweeps: 0, .. })
        ));
    }
}
