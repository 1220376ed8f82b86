//! Register-level operations: tensor products, partial traces and operators
//! acting on a subset of qubits.

use crate::error::{domain, Result};
use crate::qcore::matrix::Matrix;
use crate::scalar::{czero, Real, C};

/// `A ⊗ B`.
pub fn tensor<R: Real>(a: &Matrix<R>, b: &Matrix<R>) -> Matrix<R> {
    a.kron(b)
}

/// Full-register index offsets for every value of a sub-register index.
///
/// `qubits[0]` is the most significant bit of the sub-register index, and
/// qubit 0 of the register is the most significant bit of the full index.
pub(crate) fn index_offsets(n_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    let k = qubits.len();
    (0..1usize << k)
        .map(|j| {
            qubits.iter().enumerate().fold(0usize, |acc, (pos, &q)| {
                let bit = (j >> (k - 1 - pos)) & 1;
                acc | (bit << (n_qubits - 1 - q))
            })
        })
        .collect()
}

pub(crate) fn complement(n_qubits: usize, qubits: &[usize]) -> Vec<usize> {
    (0..n_qubits).filter(|q| !qubits.contains(q)).collect()
}

pub(crate) fn validate_qubits(n_qubits: usize, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return domain("qubit subset must be non-empty");
    }
    for (i, &q) in qubits.iter().enumerate() {
        if q >= n_qubits {
            return domain(format!(
                "qubit index {q} out of range for {n_qubits} qubits"
            ));
        }
        if qubits[..i].contains(&q) {
            return domain(format!("qubit index {q} listed twice"));
        }
    }
    Ok(())
}

/// Precomputed gather/scatter pattern for an operator on `targets`.
pub(crate) struct LocalPattern {
    target: Vec<usize>,
    rest: Vec<usize>,
}

impl LocalPattern {
    pub(crate) fn new(n_qubits: usize, targets: &[usize]) -> Self {
        LocalPattern {
            target: index_offsets(n_qubits, targets),
            rest: index_offsets(n_qubits, &complement(n_qubits, targets)),
        }
    }

    /// Applies `op` (dimension 2^|targets|) to a strided vector view.
    fn apply_strided<R: Real>(
        &self,
        op: &Matrix<R>,
        data: &mut [C<R>],
        stride: usize,
        offset: usize,
        scratch: &mut Vec<C<R>>,
    ) {
        let m = self.target.len();
        for &base in &self.rest {
            scratch.clear();
            scratch.extend(
                self.target
                    .iter()
                    .map(|&t| data[(base + t) * stride + offset]),
            );
            for (i, &t) in self.target.iter().enumerate() {
                let mut acc = czero();
                for (j, &x) in scratch.iter().enumerate().take(m) {
                    acc += op[(i, j)] * x;
                }
                data[(base + t) * stride + offset] = acc;
            }
        }
    }

    pub(crate) fn apply_vec<R: Real>(&self, op: &Matrix<R>, v: &mut [C<R>]) {
        let mut scratch = Vec::with_capacity(self.target.len());
        self.apply_strided(op, v, 1, 0, &mut scratch);
    }

    /// `op_embedded · M`.
    pub(crate) fn apply_left<R: Real>(&self, op: &Matrix<R>, m: &mut Matrix<R>) {
        let cols = m.cols();
        let mut scratch = Vec::with_capacity(self.target.len());
        let data = m.as_mut_slice();
        for col in 0..cols {
            self.apply_strided(op, data, cols, col, &mut scratch);
        }
    }

    /// `op_embedded · M · op_embedded†`.
    pub(crate) fn conjugate<R: Real>(&self, op: &Matrix<R>, m: &Matrix<R>) -> Matrix<R> {
        let mut left = m.clone();
        self.apply_left(op, &mut left);
        let mut both = left.adjoint();
        self.apply_left(op, &mut both);
        both.adjoint()
    }
}

/// Partial trace of a 2^n × 2^n matrix keeping `keep` (in the given order).
pub(crate) fn partial_trace_matrix<R: Real>(
    m: &Matrix<R>,
    n_qubits: usize,
    keep: &[usize],
) -> Matrix<R> {
    let kept = index_offsets(n_qubits, keep);
    let traced = index_offsets(n_qubits, &complement(n_qubits, keep));
    let d = kept.len();
    let mut out = Matrix::zeros(d, d);
    for (i, &ki) in kept.iter().enumerate() {
        for (j, &kj) in kept.iter().enumerate() {
            let mut acc = czero();
            for &t in &traced {
                acc += m[(ki + t, kj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    out
}

/// Reduced density matrix of a pure state on `keep`, computed directly from
/// the amplitudes without forming the full projector.
pub(crate) fn reduced_from_amplitudes<R: Real>(
    amps: &[C<R>],
    n_qubits: usize,
    keep: &[usize],
) -> Matrix<R> {
    let kept = index_offsets(n_qubits, keep);
    let traced = index_offsets(n_qubits, &complement(n_qubits, keep));
    let d = kept.len();
    let mut out = Matrix::zeros(d, d);
    for &t in &traced {
        for (i, &ki) in kept.iter().enumerate() {
            let a = amps[ki + t];
            if a.re == R::zero() && a.im == R::zero() {
                continue;
            }
            for (j, &kj) in kept.iter().enumerate() {
                out[(i, j)] += a * amps[kj + t].conj();
            }
        }
    }
    out
}
