//! Entropies in bits.

use crate::error::{domain, Result};
use crate::qcore::state::DensityOperator;
use crate::scalar::Real;

/// Shannon entropy (bits) of a spectrum. Eigenvalues in (-tol, 0) are
/// clipped to 0 and 0·log 0 is taken as 0.
pub fn spectrum_entropy<R: Real>(eigenvalues: &[R]) -> R {
    eigenvalues
        .iter()
        .filter(|&&x| x > R::zero())
        .map(|&x| -x * x.log2())
        .sum()
}

/// S(ρ) = −tr ρ log₂ ρ.
pub fn von_neumann_entropy<R: Real>(rho: &DensityOperator<R>) -> R {
    spectrum_entropy(&rho.eigenvalues())
}

/// H(x) = −x log₂ x − (1−x) log₂(1−x).
pub fn binary_entropy<R: Real>(x: R) -> Result<R> {
    let slack = R::lit(1e-12);
    if !(x >= -slack && x <= R::one() + slack) {
        return domain(format!("binary entropy argument {x} outside [0, 1]"));
    }
    let x = x.max(R::zero()).min(R::one());
    Ok(spectrum_entropy(&[x, R::one() - x]))
}
