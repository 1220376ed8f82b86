//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! The matrices met here are reduced states of a handful of qubits, so the
//! O(n³)-per-sweep cost is irrelevant next to the robustness of Jacobi: it
//! converges quadratically, needs no shifts and returns orthonormal vectors
//! even for degenerate spectra.

use crate::error::{domain, Error, Result};
use crate::qcore::matrix::Matrix;
use crate::scalar::{c, cr, Real, C};

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (descending) and matching eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<R: Real> {
    pub values: Vec<R>,
    pub vectors: Matrix<R>,
}

impl<R: Real> EigenDecomposition<R> {
    /// V diag(values) V†.
    pub fn reconstruct(&self) -> Matrix<R> {
        let n = self.values.len();
        let mut out = Matrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            for i in 0..n {
                let vik = self.vectors[(i, k)].scale(lam);
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn eigvals_hermitian<R: Real>(a: &Matrix<R>) -> Result<Vec<R>> {
    check_hermitian(a)?;
    let (values, _) = jacobi(a.hermitian_part(), false)?;
    Ok(values)
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh<R: Real>(a: &Matrix<R>) -> Result<EigenDecomposition<R>> {
    check_hermitian(a)?;
    let (values, vectors) = jacobi(a.hermitian_part(), true)?;
    Ok(EigenDecomposition {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Spectrum of a matrix already known to be Hermitian up to round-off.
pub(crate) fn spectrum_unchecked<R: Real>(a: &Matrix<R>) -> Vec<R> {
    match jacobi(a.hermitian_part(), false) {
        Ok((values, _)) => values,
        Err(_) => vec![R::nan(); a.rows()],
    }
}

fn check_hermitian<R: Real>(a: &Matrix<R>) -> Result<()> {
    if !a.is_square() {
        return domain(format!(
            "eigensolve needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        ));
    }
    let tol = R::input_tolerance() * R::one().max(a.max_abs());
    if !a.is_hermitian(tol) {
        return domain("matrix is not Hermitian");
    }
    Ok(())
}

fn off_diagonal_norm<R: Real>(a: &Matrix<R>) -> R {
    let n = a.rows();
    let mut s = R::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<R: Real>(mut a: Matrix<R>, want_vectors: bool) -> Result<(Vec<R>, Option<Matrix<R>>)> {
    let n = a.rows();
    let mut v = want_vectors.then(|| Matrix::identity(n));
    let scale = a.max_abs().max(R::min_positive_value());
    if !scale.is_finite() {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    let threshold = R::epsilon() * scale * R::lit(n as f64);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, v.as_mut(), p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > threshold * R::lit(1e3) {
        return Err(Error::Numeric("Jacobi eigensolver did not converge".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<R> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| {
        diag[j]
            .partial_cmp(&diag[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = v.map(|v| {
        let mut sorted = Matrix::zeros(n, n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                sorted[(row, new_col)] = v[(row, old_col)];
            }
        }
        sorted
    });
    Ok((values, vectors))
}

/// Annihilates the (p, q) entry with the unitary J = D·G, where D removes the
/// phase of a_pq and G is the real Jacobi rotation of the resulting block.
fn rotate<R: Real>(a: &mut Matrix<R>, v: Option<&mut Matrix<R>>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= R::min_positive_value() {
        return;
    }
    let n = a.rows();
    let phase = apq.unscale(mag); // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (R::lit(2.0) * mag);
    let t = if tau >= R::zero() {
        R::one() / (tau + (R::one() + tau * tau).sqrt())
    } else {
        -R::one() / (-tau + (R::one() + tau * tau).sqrt())
    };
    let cs = R::one() / (R::one() + t * t).sqrt();
    let sn = t * cs;

    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on the (p, q) subspace.
    let jpp = cr(cs);
    let jpq = cr(sn);
    let jqp = phase.conj().scale(-sn);
    let jqq = phase.conj().scale(cs);

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = c(R::zero(), R::zero());
    a[(q, p)] = c(R::zero(), R::zero());
    a[(p, p)] = cr(a[(p, p)].re);
    a[(q, q)] = cr(a[(q, q)].re);

    if let Some(v) = v {
        for k in 0..n {
            let vkp: C<R> = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * jpp + vkq * jqp;
            v[(k, q)] = vkp * jpq + vkq * jqq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn diagonal_input() {
        let m = Matrix::<f64>::diag(&[0.03, 0.97]);
        let ev = eigvals_hermitian(&m).unwrap();
        assert_eq!(ev, vec![0.97, 0.03]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let ev = eigvals_hermitian::<f64>(&x).unwrap();
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Matrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!(matches!(
            eigvals_hermitian::<f64>(&m),
            Err(crate::Error::Domain(_))
        ));
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = Matrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.5, -1.0), c(0.0, 0.3)],
            vec![c(0.5, 1.0), c(-1.0, 0.0), c(0.2, 0.2)],
            vec![c(0.0, -0.3), c(0.2, -0.2), c(0.7, 0.0)],
        ]);
        let d = eigh::<f64>(&m).unwrap();
        assert!(d.reconstruct().max_abs_diff(&m) < 1e-12);
        assert!(d.vectors.is_unitary(1e-12));
        assert!(d.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
