//! Dense-coding capacity quantities: the global capacity, the noiseless LOCC
//! bound, ensemble χ, and the noisy bounds obtained by minimizing the output
//! entropy of each side over its senders' encoding unitaries.
//!
//! With sides x ∈ {1, 2} (the senders routed to Rx together with Rx) every
//! bound has the shape
//!
//! ```text
//! n_sender_qubits + S(ρ^{R1}) + S(ρ^{R2}) − max_x S_x
//! ```
//!
//! where `S_x` is the side-x entropy of the unencoded state (noiseless case)
//! or its minimum over encodings after the channel (noisy case).

mod closed_form;
mod optimize;

pub use closed_form::{
    ad_min_entropy, ad_zeta_entropy, extremum_residual_ad, gghz_closed_form_bound,
    ghz_closed_form_bound, ghz_zeta_eigenvalues, pauli_pair_weight,
};
pub use optimize::{EncodingUnitaryParams, Minimum, OptConfig, Parameterization};

use crate::channels::{apply_channel_unchecked, check_covariance, pauli_basis, ChannelSpec};
use crate::error::{domain, Result};
use crate::qcore::ops::LocalPattern;
use crate::qcore::{von_neumann_entropy, DensityOperator, Matrix, Receiver, RegisterLayout};
use crate::scalar::Real;

/// Covariance deviation above which [`covariant_chi`] refuses a channel.
pub const COVARIANCE_TOLERANCE: f64 = 1e-8;

/// The global-decoding capacity and the classical threshold `log d_S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalCapacity<R: Real> {
    pub value: R,
    pub classical_threshold: R,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport<R: Real> {
    pub bound_bits: R,
    pub log_dim_senders: R,
    pub term_s_r1: R,
    pub term_s_r2: R,
    /// `max_x S_x`.
    pub term_min_entropy: R,
    /// `[S_1, S_2]`.
    pub side_entropies: [R; 2],
    /// Per-qubit encoding parameters reaching `S_x`, indexed by side.
    /// Empty in the noiseless case, where no encoding enters.
    pub minimizer: [Vec<EncodingUnitaryParams<R>>; 2],
    /// Side attaining the max; side 1 on ties.
    pub which_side: Receiver,
    pub parameterization: Option<Parameterization>,
}

impl<R: Real> BoundReport<R> {
    fn assemble(
        log_dim_senders: R,
        term_s_r1: R,
        term_s_r2: R,
        side_entropies: [R; 2],
        minimizer: [Vec<EncodingUnitaryParams<R>>; 2],
        parameterization: Option<Parameterization>,
    ) -> Self {
        let which_side = if side_entropies[1] > side_entropies[0] {
            Receiver::R2
        } else {
            Receiver::R1
        };
        let term_min_entropy = side_entropies[(which_side.number() - 1) as usize];
        BoundReport {
            bound_bits: log_dim_senders + term_s_r1 + term_s_r2 - term_min_entropy,
            log_dim_senders,
            term_s_r1,
            term_s_r2,
            term_min_entropy,
            side_entropies,
            minimizer,
            which_side,
            parameterization,
        }
    }

    pub fn minimizer_for(&self, side: Receiver) -> &[EncodingUnitaryParams<R>] {
        &self.minimizer[(side.number() - 1) as usize]
    }
}

/// Probability-weighted set of states on one register.
#[derive(Debug, Clone)]
pub struct Ensemble<R: Real> {
    members: Vec<(R, DensityOperator<R>)>,
}

impl<R: Real> Ensemble<R> {
    pub fn new(members: Vec<(R, DensityOperator<R>)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return domain("ensemble must be non-empty");
        };
        let n = first.n_qubits();
        if members.iter().any(|(_, r)| r.n_qubits() != n) {
            return domain("ensemble members must share one register");
        }
        if members.iter().any(|(p, _)| !(*p >= R::zero())) {
            return domain("ensemble probabilities must be non-negative");
        }
        let total: R = members.iter().map(|(p, _)| *p).sum();
        if (total - R::one()).abs() > R::lit(1e-12).max(R::epsilon() * R::lit(64.0)) {
            return domain(format!("ensemble probabilities sum to {total}"));
        }
        Ok(Ensemble { members })
    }

    pub fn members(&self) -> &[(R, DensityOperator<R>)] {
        &self.members
    }

    pub fn n_qubits(&self) -> usize {
        self.members[0].1.n_qubits()
    }

    pub fn average(&self) -> DensityOperator<R> {
        let terms: Vec<(R, &DensityOperator<R>)> =
            self.members.iter().map(|(p, r)| (*p, r)).collect();
        DensityOperator::mix(&terms)
    }

    /// `ρ` encoded with each of the 4^N Pauli products on the senders (uniform
    /// weights) and, optionally, sent through `channel`.
    pub fn pauli_encoded(
        rho: &DensityOperator<R>,
        layout: &RegisterLayout,
        channel: Option<&ChannelSpec<R>>,
    ) -> Result<Self> {
        check_layout(rho, layout)?;
        if let Some(spec) = channel {
            spec.validate()?;
        }
        let senders = layout.sender_qubits();
        let basis = pauli_basis::<R>(senders.len());
        let w = R::one() / R::lit(basis.len() as f64);
        let members = basis
            .iter()
            .map(|u| {
                let enc = rho.conjugate_unchecked(&senders, u);
                let out = match channel {
                    Some(spec) => apply_channel_unchecked(&enc, spec, layout),
                    None => enc,
                };
                (w, out)
            })
            .collect();
        Ensemble::new(members)
    }
}

fn check_layout<R: Real>(rho: &DensityOperator<R>, layout: &RegisterLayout) -> Result<()> {
    if rho.n_qubits() != layout.n_qubits() {
        return domain(format!(
            "state has {} qubits but layout has {}",
            rho.n_qubits(),
            layout.n_qubits()
        ));
    }
    Ok(())
}

fn side_index(side: Receiver) -> usize {
    (side.number() - 1) as usize
}

fn entropy_of<R: Real>(rho: &DensityOperator<R>, keep: &[usize]) -> R {
    von_neumann_entropy(&rho.partial_trace(keep).expect("layout-derived qubits"))
}

/// `log d_S + S(ρ^{R1R2}) − S(ρ)`, reported raw alongside `log d_S`.
pub fn global_capacity<R: Real>(
    rho: &DensityOperator<R>,
    layout: &RegisterLayout,
) -> Result<GlobalCapacity<R>> {
    check_layout(rho, layout)?;
    let log_d = R::lit(layout.n_senders() as f64);
    let s_r = entropy_of(rho, &layout.receiver_qubits());
    let s_all = von_neumann_entropy(rho);
    Ok(GlobalCapacity {
        value: log_d + s_r - s_all,
        classical_threshold: log_d,
    })
}

/// `S(ξ¹) + S(ξ²) − max_x Σ_i p_i S(ξ^x_i)` with ξ^x the side-x marginals.
pub fn ensemble_chi<R: Real>(e: &Ensemble<R>, layout: &RegisterLayout) -> Result<R> {
    if e.n_qubits() != layout.n_qubits() {
        return domain("ensemble and layout disagree on the qubit count");
    }
    let avg = e.average();
    let mut holevo = R::zero();
    let mut conditional = [R::zero(); 2];
    for side in Receiver::BOTH {
        let keep = layout.side_qubits(side);
        holevo += entropy_of(&avg, &keep);
        conditional[side_index(side)] = e
            .members()
            .iter()
            .map(|(p, r)| *p * entropy_of(r, &keep))
            .sum();
    }
    Ok(holevo - conditional[0].max(conditional[1]))
}

fn receiver_terms<R: Real>(rho: &DensityOperator<R>, layout: &RegisterLayout) -> (R, R) {
    (
        entropy_of(rho, &[layout.receiver_qubit(Receiver::R1)]),
        entropy_of(rho, &[layout.receiver_qubit(Receiver::R2)]),
    )
}

/// Noiseless bound: side entropies are those of the unencoded state.
pub fn locc_bound_noiseless<R: Real>(
    rho: &DensityOperator<R>,
    layout: &RegisterLayout,
) -> Result<BoundReport<R>> {
    check_layout(rho, layout)?;
    let (s1, s2) = receiver_terms(rho, layout);
    let sides = Receiver::BOTH.map(|x| entropy_of(rho, &layout.side_qubits(x)));
    Ok(BoundReport::assemble(
        R::lit(layout.n_senders() as f64),
        s1,
        s2,
        sides,
        [Vec::new(), Vec::new()],
        None,
    ))
}

fn check_group(layout: &RegisterLayout, side: Receiver, cfg: &OptConfig) -> Result<Vec<usize>> {
    let group = layout.sender_group(side);
    if group.is_empty() {
        return domain(format!("no sender is routed to {side}"));
    }
    if group.len() > 1 && !cfg.allow_multi_qubit {
        return domain(format!(
            "{side} has {} senders; enable multi-qubit encodings to optimize over them",
            group.len()
        ));
    }
    Ok(group)
}

/// min over encodings on the side-`side` senders of S(tr_other Λ(UρU†)),
/// evaluated on the full register.
pub fn min_output_entropy<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
    side: Receiver,
    cfg: &OptConfig,
) -> Result<Minimum<R>> {
    check_layout(rho, layout)?;
    spec.validate()?;
    let group = check_group(layout, side, cfg)?;
    let keep = layout.side_qubits(side);
    let patterns: Vec<LocalPattern> = group
        .iter()
        .map(|&q| LocalPattern::new(rho.n_qubits(), &[q]))
        .collect();
    optimize::minimize(group.len(), cfg, |us: &[Matrix<R>]| {
        let mut m = rho.matrix().clone();
        for (p, u) in patterns.iter().zip(us) {
            m = p.conjugate(u, &m);
        }
        let enc = DensityOperator::from_matrix_unchecked(m, rho.n_qubits());
        let out = apply_channel_unchecked(&enc, spec, layout);
        entropy_of(&out, &keep)
    })
}

/// Same minimization on the side-x marginal with the channel's side action;
/// valid whenever the channel factorizes over the cut.
fn min_side_entropy<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
    side: Receiver,
    cfg: &OptConfig,
) -> Result<Minimum<R>> {
    let group = check_group(layout, side, cfg)?;
    let keep = layout.side_qubits(side);
    let local = rho.partial_trace(&keep)?;
    let targets: Vec<usize> = group
        .iter()
        .map(|q| {
            keep.iter()
                .position(|k| k == q)
                .expect("group lies on its side")
        })
        .collect();
    let action = spec.side_action(side);
    let patterns: Vec<LocalPattern> = targets
        .iter()
        .map(|&q| LocalPattern::new(local.n_qubits(), &[q]))
        .collect();
    optimize::minimize(group.len(), cfg, |us: &[Matrix<R>]| {
        let mut m = local.matrix().clone();
        for (p, u) in patterns.iter().zip(us) {
            m = p.conjugate(u, &m);
        }
        let enc = DensityOperator::from_matrix_unchecked(m, local.n_qubits());
        von_neumann_entropy(&action.apply(&enc, &targets))
    })
}

fn noisy_report<R: Real>(
    rho: &DensityOperator<R>,
    layout: &RegisterLayout,
    cfg: &OptConfig,
    mut side_min: impl FnMut(Receiver) -> Result<Minimum<R>>,
) -> Result<BoundReport<R>> {
    let (s1, s2) = receiver_terms(rho, layout);
    let m1 = side_min(Receiver::R1)?;
    let m2 = side_min(Receiver::R2)?;
    Ok(BoundReport::assemble(
        R::lit(layout.n_senders() as f64),
        s1,
        s2,
        [m1.value, m2.value],
        [m1.params, m2.params],
        Some(cfg.parameterization),
    ))
}

/// Noisy LOCC bound; every objective evaluation runs the channel on the full
/// register and traces out the other side afterwards.
pub fn noisy_locc_bound<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
    cfg: &OptConfig,
) -> Result<BoundReport<R>> {
    check_layout(rho, layout)?;
    spec.validate()?;
    noisy_report(rho, layout, cfg, |side| {
        min_output_entropy(rho, spec, layout, side, cfg)
    })
}

/// χ for a covariant channel: receiver terms from the unencoded state, side
/// entropies minimized on the side marginals. Refuses channels whose
/// covariance deviation exceeds [`COVARIANCE_TOLERANCE`].
pub fn covariant_chi<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
    cfg: &OptConfig,
) -> Result<BoundReport<R>> {
    check_layout(rho, layout)?;
    let dev = check_covariance(spec, layout, &pauli_basis(layout.n_senders()))?;
    if dev > R::lit(COVARIANCE_TOLERANCE) {
        return domain(format!(
            "channel {spec} is not covariant: deviation {dev} exceeds {COVARIANCE_TOLERANCE}"
        ));
    }
    covariant_chi_unchecked(rho, spec, layout, cfg)
}

/// [`covariant_chi`] without the covariance probe, for campaigns that have
/// already checked the channel once.
pub fn covariant_chi_unchecked<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
    cfg: &OptConfig,
) -> Result<BoundReport<R>> {
    check_layout(rho, layout)?;
    spec.validate()?;
    noisy_report(rho, layout, cfg, |side| {
        min_side_entropy(rho, spec, layout, side, cfg)
    })
}
