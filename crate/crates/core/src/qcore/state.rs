use crate::error::{domain, Result};
use crate::qcore::eigen::spectrum_unchecked;
use crate::qcore::matrix::Matrix;
use crate::qcore::ops::{
    partial_trace_matrix, reduced_from_amplitudes, validate_qubits, LocalPattern,
};
use crate::scalar::{cr, Real, C};

fn qubits_for_dim(dim: usize) -> Option<usize> {
    (dim >= 2 && dim.is_power_of_two()).then(|| dim.trailing_zeros() as usize)
}

/// Normalized pure state of an n-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<R: Real> {
    amps: Vec<C<R>>,
    n_qubits: usize,
}

impl<R: Real> StateVector<R> {
    /// Validates length (a power of two, at least 2) and unit norm.
    pub fn new(amps: Vec<C<R>>) -> Result<Self> {
        let Some(n_qubits) = qubits_for_dim(amps.len()) else {
            return domain(format!(
                "amplitude count {} is not a power of two ≥ 2",
                amps.len()
            ));
        };
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return domain("amplitudes must be finite");
        }
        let norm2: R = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm2 - R::one()).abs() > R::tolerance() {
            return domain(format!("squared norm {norm2} differs from 1"));
        }
        Ok(StateVector { amps, n_qubits })
    }

    /// Rescales to unit norm; fails only on a zero or non-finite vector.
    pub fn normalized(mut amps: Vec<C<R>>) -> Result<Self> {
        let norm: R = amps.iter().map(|z| z.norm_sqr()).sum::<R>().sqrt();
        if !(norm.is_finite() && norm > R::zero()) {
            return domain("cannot normalize a zero or non-finite vector");
        }
        for z in &mut amps {
            *z = z.unscale(norm);
        }
        Self::new(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C<R>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> R {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn density(&self) -> DensityOperator<R> {
        DensityOperator::from_matrix_unchecked(Matrix::outer(&self.amps), self.n_qubits)
    }

    /// Reduced state on `keep` (in the given order).
    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator<R>> {
        validate_qubits(self.n_qubits, keep)?;
        Ok(DensityOperator::from_matrix_unchecked(
            reduced_from_amplitudes(&self.amps, self.n_qubits, keep),
            keep.len(),
        ))
    }

    /// Applies `u` to `targets`; `targets[0]` is the most significant qubit of `u`.
    pub fn apply_local_unitary(&self, targets: &[usize], u: &Matrix<R>) -> Result<Self> {
        check_local_unitary(self.n_qubits, targets, u)?;
        let mut amps = self.amps.clone();
        LocalPattern::new(self.n_qubits, targets).apply_vec(u, &mut amps);
        Ok(StateVector {
            amps,
            n_qubits: self.n_qubits,
        })
    }

    pub fn cast<S: Real>(&self) -> StateVector<S> {
        StateVector {
            amps: self
                .amps
                .iter()
                .map(|z| C::new(S::lit(z.re.as_f64()), S::lit(z.im.as_f64())))
                .collect(),
            n_qubits: self.n_qubits,
        }
    }
}

/// Density operator of an n-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<R: Real> {
    matrix: Matrix<R>,
    n_qubits: usize,
}

impl<R: Real> DensityOperator<R> {
    /// Validates Hermiticity, unit trace and positivity within tolerance.
    pub fn new(matrix: Matrix<R>) -> Result<Self> {
        if !matrix.is_square() {
            return domain("density operator must be square");
        }
        let Some(n_qubits) = qubits_for_dim(matrix.rows()) else {
            return domain(format!(
                "dimension {} is not a power of two ≥ 2",
                matrix.rows()
            ));
        };
        let tol = R::tolerance();
        if !matrix.is_hermitian(tol) {
            return domain("density operator is not Hermitian");
        }
        let tr = matrix.trace();
        if (tr.re - R::one()).abs() > tol || tr.im.abs() > tol {
            return domain(format!("trace {} + {}i differs from 1", tr.re, tr.im));
        }
        let min_ev = spectrum_unchecked(&matrix)
            .last()
            .copied()
            .unwrap_or(R::zero());
        if !(min_ev >= -tol) {
            return domain(format!("negative eigenvalue {min_ev}"));
        }
        Ok(DensityOperator { matrix, n_qubits })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix<R>, n_qubits: usize) -> Self {
        debug_assert_eq!(matrix.rows(), 1 << n_qubits);
        DensityOperator { matrix, n_qubits }
    }

    pub fn from_pure(psi: &StateVector<R>) -> Self {
        psi.density()
    }

    /// I / 2^n.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        let m = Matrix::identity(d).scale_real(R::one() / R::lit(d as f64));
        Self::from_matrix_unchecked(m, n_qubits)
    }

    pub fn matrix(&self) -> &Matrix<R> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<R> {
        self.matrix
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> C<R> {
        self.matrix.trace()
    }

    /// Spectrum, descending.
    pub fn eigenvalues(&self) -> Vec<R> {
        spectrum_unchecked(&self.matrix)
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        validate_qubits(self.n_qubits, keep)?;
        Ok(Self::from_matrix_unchecked(
            partial_trace_matrix(&self.matrix, self.n_qubits, keep),
            keep.len(),
        ))
    }

    /// U ρ U† with U acting on `targets`.
    pub fn apply_local_unitary(&self, targets: &[usize], u: &Matrix<R>) -> Result<Self> {
        check_local_unitary(self.n_qubits, targets, u)?;
        Ok(self.conjugate_unchecked(targets, u))
    }

    pub(crate) fn conjugate_unchecked(&self, targets: &[usize], op: &Matrix<R>) -> Self {
        let m = LocalPattern::new(self.n_qubits, targets).conjugate(op, &self.matrix);
        Self::from_matrix_unchecked(m, self.n_qubits)
    }

    /// Weighted sum of operators on the same register; weights are not checked.
    pub(crate) fn mix(terms: &[(R, &Self)]) -> Self {
        let (_, first) = terms[0];
        let d = first.dim();
        let mut acc = Matrix::zeros(d, d);
        for (w, rho) in terms {
            acc = &acc + &rho.matrix.scale(cr(*w));
        }
        Self::from_matrix_unchecked(acc, first.n_qubits)
    }
}

pub(crate) fn check_local_unitary<R: Real>(
    n_qubits: usize,
    targets: &[usize],
    u: &Matrix<R>,
) -> Result<()> {
    validate_qubits(n_qubits, targets)?;
    let d = 1usize << targets.len();
    if u.rows() != d || u.cols() != d {
        return domain(format!(
            "operator is {}x{} but {} target qubit(s) need {d}x{d}",
            u.rows(),
            u.cols(),
            targets.len()
        ));
    }
    if !u.is_unitary(R::tolerance()) {
        return domain("operator is not unitary");
    }
    Ok(())
}

/// Reduced state on `keep`.
pub fn partial_trace<R: Real>(
    rho: &DensityOperator<R>,
    keep: &[usize],
) -> Result<DensityOperator<R>> {
    rho.partial_trace(keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn state_vector_validation() {
        assert!(StateVector::<f64>::new(vec![c(1.0, 0.0)]).is_err());
        assert!(StateVector::<f64>::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(StateVector::<f64>::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_ok());
        assert!(StateVector::<f64>::normalized(vec![c(0.0, 0.0); 4]).is_err());
        assert!(StateVector::<f64>::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn density_validation() {
        assert!(DensityOperator::<f64>::new(Matrix::identity(4)).is_err());
        assert!(DensityOperator::<f64>::new(Matrix::diag(&[0.5, 0.5])).is_ok());
        assert!(DensityOperator::<f64>::new(Matrix::diag(&[1.5, -0.5])).is_err());
        let mut m = Matrix::diag(&[0.5, 0.5]);
        m[(0, 1)] = c(0.1, 0.0);
        assert!(DensityOperator::<f64>::new(m).is_err());
    }

    #[test]
    fn product_state_marginal() {
        // |01>: keep the second qubit -> |1><1|.
        let psi = StateVector::<f64>::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
            .unwrap();
        let r = psi.density().partial_trace(&[1]).unwrap();
        assert!(r.matrix().max_abs_diff(&Matrix::diag(&[0.0, 1.0])) < 1e-15);
        let r2 = psi.reduced(&[1]).unwrap();
        assert_eq!(r.matrix(), r2.matrix());
    }

    #[test]
    fn non_unitary_rejected() {
        let psi = StateVector::<f64>::new(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let m = Matrix::diag(&[1.0, 0.5]);
        assert!(psi.apply_local_unitary(&[0], &m).is_err());
        assert!(psi.density().apply_local_unitary(&[0], &m).is_err());
        assert!(psi.apply_local_unitary(&[0], &Matrix::identity(4)).is_err());
    }
}
