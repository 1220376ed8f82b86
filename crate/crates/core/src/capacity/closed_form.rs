//! Closed forms for GHZ and gGHZ states shared as `S1 S2 R1 R2`.
//!
//! Encoding `U(a, θ¹, θ²)` on the side-x sender followed by the side-x
//! channel leaves the side state with eigenvalues `¼(1 ± r₀)`, `¼(1 ± r₁)`
//! where `r₀`, `r₁` are the Bloch lengths of Λ(U|0⟩⟨0|U†) and Λ(U|1⟩⟨1|U†).

use crate::channels::ChannelSpec;
use crate::error::{domain, Result};
use crate::qcore::{binary_entropy, Receiver};
use crate::scalar::Real;

use super::EncodingUnitaryParams;

fn quarter<R: Real>(r2: R) -> [R; 2] {
    let r = r2.max(R::zero()).min(R::one()).sqrt();
    let q = R::lit(0.25);
    [q * (R::one() + r), q * (R::one() - r)]
}

fn sorted_desc<R: Real>(mut v: [R; 4]) -> [R; 4] {
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalue"));
    v
}

/// Sum of the two largest weights of a Pauli distribution.
pub fn pauli_pair_weight<R: Real>(q: [R; 4]) -> R {
    let mut s = q;
    s.sort_by(|a, b| b.partial_cmp(a).expect("finite weight"));
    s[0] + s[1]
}

fn side_param<R: Real>(p: [R; 2], side: Receiver) -> R {
    p[(side.number() - 1) as usize]
}

/// Eigenvalues (descending) of the side-`side` state of GHZ₄ after encoding
/// with `params` and the channel.
pub fn ghz_zeta_eigenvalues<R: Real>(
    spec: &ChannelSpec<R>,
    side: Receiver,
    params: &EncodingUnitaryParams<R>,
) -> Result<[R; 4]> {
    spec.validate()?;
    let a2 = params.a * params.a;
    let b2 = R::one() - a2;
    let four = R::lit(4.0);
    let (r0, r1) = match spec {
        ChannelSpec::Identity => (R::one(), R::one()),
        ChannelSpec::AmplitudeDamping { gamma } => {
            let g = side_param(*gamma, side);
            let k = four * g * (R::one() - g);
            (R::one() - k * a2 * a2, R::one() - k * b2 * b2)
        }
        ChannelSpec::PhaseDamping { p } => {
            let p = side_param(*p, side);
            let f = R::one() - four * a2 * b2 * p * (R::lit(2.0) - p);
            (f, f)
        }
        ChannelSpec::Pauli(noise) => {
            let [q0, q1, q2, q3] = noise.marginal(side);
            let theta = params.theta2 - params.theta1;
            let f1 = R::lit(2.0) * a2 * (a2 - R::one());
            let eight = R::lit(8.0);
            let g = (q0 - q1 - q2 + q3).powi(2)
                + f1 * (eight * q1 * q2 + eight * q0 * q3
                    - four * (q0 + q3) * (q1 + q2)
                    - four * (q1 - q2) * (q0 - q3) * (R::lit(2.0) * theta).cos());
            (g, g)
        }
    };
    let [x, y] = quarter(r0);
    let [z, w] = quarter(r1);
    Ok(sorted_desc([x, y, z, w]))
}

/// `(1 − 4γ(1−γ)a⁴, 1 − 4γ(1−γ)(1−a²)²)`.
fn ad_fg<R: Real>(a: R, gamma: R) -> (R, R) {
    let k = R::lit(4.0) * gamma * (R::one() - gamma);
    let a2 = a * a;
    (
        R::one() - k * a2 * a2,
        R::one() - k * (R::one() - a2).powi(2),
    )
}

fn check_ad<R: Real>(a: R, gamma: R) -> Result<()> {
    if !(a > R::zero() && a < R::one()) {
        return domain(format!("a = {a} must lie strictly inside (0, 1)"));
    }
    if !(gamma > R::zero() && gamma < R::one()) {
        return domain(format!("γ = {gamma} must lie strictly inside (0, 1)"));
    }
    Ok(())
}

/// S(ζ¹) of GHZ₄ under amplitude damping as a function of `a`.
pub fn ad_zeta_entropy<R: Real>(a: R, gamma: R) -> R {
    let (f, g) = ad_fg(a, gamma);
    let mut s = R::zero();
    for r2 in [f, g] {
        for x in quarter(r2) {
            if x > R::zero() {
                s -= x * x.log2();
            }
        }
    }
    s
}

/// `1 + H(½(1 − √(1 − γ + γ²)))`.
pub fn ad_min_entropy<R: Real>(gamma: R) -> Result<R> {
    if !(gamma >= R::zero() && gamma <= R::one()) {
        return domain(format!("γ = {gamma} outside [0, 1]"));
    }
    let s = (R::one() - gamma + gamma * gamma).sqrt();
    Ok(R::one() + binary_entropy(R::lit(0.5) * (R::one() - s))?)
}

/// LHS − RHS of the stationarity condition of S(ζ¹) in `a` under amplitude
/// damping:
///
/// ```text
/// a²/√f · log((1−√f)/(1+√f))  −  (1−a²)/√g · log((1−√g)/(1+√g))
/// ```
///
/// dS/da = −2γ(1−γ)·a·residual, so the residual is positive exactly where S
/// decreases in `a`.
pub fn extremum_residual_ad<R: Real>(a: R, gamma: R) -> Result<R> {
    check_ad(a, gamma)?;
    let (f, g) = ad_fg(a, gamma);
    let term = |w: R, r2: R| {
        let r = r2.sqrt();
        w / r * ((R::one() - r) / (R::one() + r)).log2()
    };
    let a2 = a * a;
    Ok(term(a2, f) - term(R::one() - a2, g))
}

/// Closed-form LOCC bound of GHZ₄ under `spec`.
pub fn ghz_closed_form_bound<R: Real>(spec: &ChannelSpec<R>) -> Result<R> {
    spec.validate()?;
    let three = R::lit(3.0);
    match spec {
        ChannelSpec::Identity | ChannelSpec::PhaseDamping { .. } => Ok(three),
        ChannelSpec::AmplitudeDamping { gamma } => {
            let worst = ad_min_entropy(gamma[0])?.max(ad_min_entropy(gamma[1])?);
            Ok(three + R::one() - worst)
        }
        ChannelSpec::Pauli(noise) => {
            let h = |side| binary_entropy(pauli_pair_weight(noise.marginal(side)));
            Ok(three - h(Receiver::R1)?.max(h(Receiver::R2)?))
        }
    }
}

/// Closed-form bound of gGHZ₄ with larger marginal weight `m`:
/// `2 + H(m) − max_x H(b₁ + b₂)` for Pauli noise, `2 + H(m)` for phase
/// damping and no noise. Amplitude damping has no closed form here.
pub fn gghz_closed_form_bound<R: Real>(m: R, spec: &ChannelSpec<R>) -> Result<R> {
    spec.validate()?;
    let base = R::lit(2.0) + binary_entropy(m)?;
    match spec {
        ChannelSpec::Identity | ChannelSpec::PhaseDamping { .. } => Ok(base),
        ChannelSpec::Pauli(noise) => {
            let h = |side| binary_entropy(pauli_pair_weight(noise.marginal(side)));
            Ok(base - h(Receiver::R1)?.max(h(Receiver::R2)?))
        }
        ChannelSpec::AmplitudeDamping { gamma } if gamma.iter().all(|g| g.is_zero()) => Ok(base),
        ChannelSpec::AmplitudeDamping { .. } => {
            domain("no closed form for gGHZ under amplitude damping")
        }
    }
}
