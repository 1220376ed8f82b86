//! Noise acting on the senders' qubits between encoding and reception.
//!
//! Channel strings accepted by [`ChannelSpec::parse`]:
//!
//! ```text
//! none
//! ad:<γ1>,<γ2>            local amplitude damping, γ per sender group
//! pd:<p1>,<p2>            local phase damping, p per sender group
//! pauli:<q0>,<q1>,<q2>,<q3>   fully-correlated Pauli noise
//! pauli-gen:<q00>,…,<q33>     general two-group Pauli noise, row-major q_mn
//! ```
//!
//! The sender group routed to R1 takes the first parameter, the group routed
//! to R2 the second. For Pauli noise `σ_m` acts on every qubit of the R1
//! group and `σ_n` on every qubit of the R2 group.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, spec_err, Result};
use crate::qcore::ops::LocalPattern;
use crate::qcore::{DensityOperator, Matrix, Receiver, RegisterLayout, StateVector};
use crate::scalar::{c, cr, Real, C};

/// Probe states per basis element in [`check_covariance`].
pub const COVARIANCE_PROBES: usize = 8;
const COVARIANCE_PROBE_SEED: u64 = 0x5eed_c0fa;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PauliNoise<R: Real> {
    /// `q_mn = q_m δ_mn`: both groups suffer the same σ_m.
    Correlated([R; 4]),
    /// Arbitrary joint distribution `q[m][n]`.
    General([[R; 4]; 4]),
}

impl<R: Real> PauliNoise<R> {
    pub fn joint(&self) -> [[R; 4]; 4] {
        match *self {
            PauliNoise::General(q) => q,
            PauliNoise::Correlated(q) => {
                let mut j = [[R::zero(); 4]; 4];
                for m in 0..4 {
                    j[m][m] = q[m];
                }
                j
            }
        }
    }

    /// Marginal weights of the Pauli applied to one sender group:
    /// `p_m = Σ_n q_mn` for R1, `r_n = Σ_m q_mn` for R2.
    pub fn marginal(&self, side: Receiver) -> [R; 4] {
        let j = self.joint();
        let mut out = [R::zero(); 4];
        for m in 0..4 {
            for n in 0..4 {
                match side {
                    Receiver::R1 => out[m] += j[m][n],
                    Receiver::R2 => out[n] += j[m][n],
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec<R: Real> {
    Identity,
    AmplitudeDamping { gamma: [R; 2] },
    PhaseDamping { p: [R; 2] },
    Pauli(PauliNoise<R>),
}

impl<R: Real> ChannelSpec<R> {
    pub fn amplitude_damping(g1: R, g2: R) -> Result<Self> {
        let s = ChannelSpec::AmplitudeDamping { gamma: [g1, g2] };
        s.validate()?;
        Ok(s)
    }

    pub fn phase_damping(p1: R, p2: R) -> Result<Self> {
        let s = ChannelSpec::PhaseDamping { p: [p1, p2] };
        s.validate()?;
        Ok(s)
    }

    pub fn correlated_pauli(q: [R; 4]) -> Result<Self> {
        let s = ChannelSpec::Pauli(PauliNoise::Correlated(q));
        s.validate()?;
        Ok(s)
    }

    pub fn general_pauli(q: [[R; 4]; 4]) -> Result<Self> {
        let s = ChannelSpec::Pauli(PauliNoise::General(q));
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, xs: &[R]| -> Result<()> {
            for &x in xs {
                if !(x >= R::zero() && x <= R::one()) {
                    return domain(format!("{name} parameter {x} outside [0, 1]"));
                }
            }
            Ok(())
        };
        match self {
            ChannelSpec::Identity => Ok(()),
            ChannelSpec::AmplitudeDamping { gamma } => unit("amplitude-damping", gamma),
            ChannelSpec::PhaseDamping { p } => unit("phase-damping", p),
            ChannelSpec::Pauli(noise) => {
                let j = noise.joint();
                let flat: Vec<R> = j.iter().flatten().copied().collect();
                if flat.iter().any(|&x| !(x >= R::zero())) {
                    return domain("Pauli weights must be non-negative");
                }
                let sum: R = flat.iter().copied().sum();
                if (sum - R::one()).abs() > R::lit(1e-12).max(R::epsilon() * R::lit(16.0)) {
                    return domain(format!("Pauli weights sum to {sum}, not 1"));
                }
                Ok(())
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ChannelSpec::Identity => "none",
            ChannelSpec::AmplitudeDamping { .. } => "ad",
            ChannelSpec::PhaseDamping { .. } => "pd",
            ChannelSpec::Pauli(PauliNoise::Correlated(_)) => "pauli",
            ChannelSpec::Pauli(PauliNoise::General(_)) => "pauli-gen",
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            ChannelSpec::Identity => true,
            ChannelSpec::AmplitudeDamping { gamma } => gamma.iter().all(|g| g.is_zero()),
            ChannelSpec::PhaseDamping { p } => p.iter().all(|g| g.is_zero()),
            ChannelSpec::Pauli(noise) => (noise.joint()[0][0] - R::one()).abs() <= R::epsilon(),
        }
    }

    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        if s.eq_ignore_ascii_case("none") || s.eq_ignore_ascii_case("identity") {
            return Ok(ChannelSpec::Identity);
        }
        let Some((family, args)) = s.split_once(':') else {
            return spec_err(input, "expected `<family>:<params>` or `none`");
        };
        let vals: Vec<R> = args
            .split(',')
            .map(|t| t.trim().parse::<R>().ok().filter(|x| x.is_finite()))
            .collect::<Option<_>>()
            .ok_or_else(|| crate::Error::Spec {
                input: input.to_string(),
                msg: "non-numeric parameter".into(),
            })?;
        let spec = match (family.trim(), vals.len()) {
            ("ad", 1) => ChannelSpec::AmplitudeDamping {
                gamma: [vals[0]; 2],
            },
            ("ad", 2) => ChannelSpec::AmplitudeDamping {
                gamma: [vals[0], vals[1]],
            },
            ("pd", 1) => ChannelSpec::PhaseDamping { p: [vals[0]; 2] },
            ("pd", 2) => ChannelSpec::PhaseDamping {
                p: [vals[0], vals[1]],
            },
            ("pauli", 4) => {
                ChannelSpec::Pauli(PauliNoise::Correlated([vals[0], vals[1], vals[2], vals[3]]))
            }
            ("pauli-gen", 16) => {
                let mut q = [[R::zero(); 4]; 4];
                for (i, v) in vals.iter().enumerate() {
                    q[i / 4][i % 4] = *v;
                }
                ChannelSpec::Pauli(PauliNoise::General(q))
            }
            ("ad" | "pd", n) => {
                return spec_err(input, format!("expected 1 or 2 parameters, got {n}"))
            }
            ("pauli", n) => return spec_err(input, format!("expected 4 parameters, got {n}")),
            ("pauli-gen", n) => return spec_err(input, format!("expected 16 parameters, got {n}")),
            (f, _) => return spec_err(input, format!("unknown channel family `{f}`")),
        };
        spec.validate().map_err(|e| crate::Error::Spec {
            input: input.to_string(),
            msg: e.to_string(),
        })?;
        Ok(spec)
    }

    /// Single-qubit Kraus operators applied to each qubit of the sender group
    /// routed to `side`; `None` for Pauli noise, which is not a product.
    fn per_qubit_kraus(&self, side: Receiver) -> Option<Vec<Matrix<R>>> {
        let idx = (side.number() - 1) as usize;
        match self {
            ChannelSpec::Identity => Some(vec![Matrix::identity(2)]),
            ChannelSpec::AmplitudeDamping { gamma } => Some(amplitude_damping_kraus(gamma[idx])),
            ChannelSpec::PhaseDamping { p } => Some(phase_damping_kraus(p[idx])),
            ChannelSpec::Pauli(_) => None,
        }
    }

    /// The channel induced on one side after tracing out the other side.
    pub(crate) fn side_action(&self, side: Receiver) -> SideAction<R> {
        match self {
            ChannelSpec::Pauli(noise) => SideAction::PauliMixture(noise.marginal(side)),
            _ => SideAction::PerQubit(self.per_qubit_kraus(side).expect("product channel")),
        }
    }
}

impl<R: Real> fmt::Display for ChannelSpec<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[R]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            ChannelSpec::Identity => write!(f, "none"),
            ChannelSpec::AmplitudeDamping { gamma } => write!(f, "ad:{}", join(gamma)),
            ChannelSpec::PhaseDamping { p } => write!(f, "pd:{}", join(p)),
            ChannelSpec::Pauli(PauliNoise::Correlated(q)) => write!(f, "pauli:{}", join(q)),
            ChannelSpec::Pauli(PauliNoise::General(q)) => {
                let flat: Vec<R> = q.iter().flatten().copied().collect();
                write!(f, "pauli-gen:{}", join(&flat))
            }
        }
    }
}

/// Channel restricted to one side of the LOCC bipartition.
#[derive(Debug, Clone)]
pub(crate) enum SideAction<R: Real> {
    PerQubit(Vec<Matrix<R>>),
    PauliMixture([R; 4]),
}

impl<R: Real> SideAction<R> {
    /// Applies the action to `targets` (the side's sender qubits) of `rho`.
    pub(crate) fn apply(&self, rho: &DensityOperator<R>, targets: &[usize]) -> DensityOperator<R> {
        match self {
            SideAction::PerQubit(kraus) => {
                let mut out = rho.clone();
                for &q in targets {
                    out = apply_kraus_unchecked(&out, &[q], kraus);
                }
                out
            }
            SideAction::PauliMixture(q) => {
                let paulis = pauli_matrices::<R>();
                let terms: Vec<(R, Matrix<R>)> = (0..4)
                    .filter(|&m| q[m] > R::zero())
                    .map(|m| (q[m], repeat_tensor(&paulis[m], targets.len())))
                    .collect();
                apply_mixture(rho, targets, &terms)
            }
        }
    }
}

/// Operators of a CPTP map in Kraus form.
#[derive(Debug, Clone)]
pub struct KrausSet<R: Real> {
    operators: Vec<Matrix<R>>,
}

impl<R: Real> KrausSet<R> {
    /// Validates equal square dimensions and completeness Σ M†M = I.
    pub fn new(operators: Vec<Matrix<R>>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return domain("Kraus set must be non-empty");
        };
        let d = first.rows();
        if operators.iter().any(|m| m.rows() != d || m.cols() != d) {
            return domain("Kraus operators must share one square dimension");
        }
        let set = KrausSet { operators };
        let dev = set.completeness_deviation();
        if dev > R::tolerance() {
            return domain(format!("Kraus completeness violated by {dev}"));
        }
        Ok(set)
    }

    pub fn operators(&self) -> &[Matrix<R>] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// max |(Σ M†M − I)_ij|.
    pub fn completeness_deviation(&self) -> R {
        let d = self.dim();
        let mut acc = Matrix::zeros(d, d);
        for m in &self.operators {
            acc = &acc + &m.adjoint().matmul(m);
        }
        acc.max_abs_diff(&Matrix::identity(d))
    }

    /// ρ → Σ M ρ M† with the operators acting on `targets` of the register.
    /// Noise never touches receivers, so receiver targets are rejected.
    pub fn apply(
        &self,
        rho: &DensityOperator<R>,
        targets: &[usize],
        layout: &RegisterLayout,
    ) -> Result<DensityOperator<R>> {
        if rho.n_qubits() != layout.n_qubits() {
            return domain("state and layout disagree on the qubit count");
        }
        crate::qcore::ops::validate_qubits(rho.n_qubits(), targets)?;
        let receivers = layout.receiver_qubits();
        if let Some(q) = targets.iter().find(|q| receivers.contains(q)) {
            return domain(format!(
                "noise may act only on senders; qubit {q} is a receiver"
            ));
        }
        if self.dim() != 1 << targets.len() {
            return domain("Kraus dimension does not match the target count");
        }
        Ok(apply_kraus_unchecked(rho, targets, &self.operators))
    }
}

pub fn amplitude_damping_kraus<R: Real>(gamma: R) -> Vec<Matrix<R>> {
    let m0 = Matrix::diag(&[R::one(), (R::one() - gamma).sqrt()]);
    let mut m1 = Matrix::zeros(2, 2);
    m1[(0, 1)] = cr(gamma.sqrt());
    vec![m0, m1]
}

pub fn phase_damping_kraus<R: Real>(p: R) -> Vec<Matrix<R>> {
    let s = (R::one() - p).sqrt();
    vec![
        Matrix::diag(&[s, s]),
        Matrix::diag(&[p.sqrt(), R::zero()]),
        Matrix::diag(&[R::zero(), p.sqrt()]),
    ]
}

/// σ0 = I, σ1 = X, σ2 = Y, σ3 = Z.
pub fn pauli_matrices<R: Real>() -> [Matrix<R>; 4] {
    let (o, l) = (R::zero(), R::one());
    [
        Matrix::identity(2),
        Matrix::from_rows(&[vec![c(o, o), c(l, o)], vec![c(l, o), c(o, o)]]),
        Matrix::from_rows(&[vec![c(o, o), c(o, -l)], vec![c(o, l), c(o, o)]]),
        Matrix::diag(&[l, -l]),
    ]
}

fn repeat_tensor<R: Real>(m: &Matrix<R>, k: usize) -> Matrix<R> {
    (1..k).fold(m.clone(), |acc, _| acc.kron(m))
}

/// All 4^k k-fold tensor products of Pauli matrices; index `m₁…m_k` in base 4,
/// first factor most significant.
pub fn pauli_basis<R: Real>(k: usize) -> Vec<Matrix<R>> {
    let paulis = pauli_matrices::<R>();
    let mut basis = vec![Matrix::identity(1)];
    for _ in 0..k {
        basis = basis
            .iter()
            .flat_map(|b| paulis.iter().map(move |p| b.kron(p)))
            .collect();
    }
    basis
}

/// Kraus operators of the whole channel on the sender qubits, in the order of
/// [`RegisterLayout::sender_qubits`].
pub fn kraus_for<R: Real>(spec: &ChannelSpec<R>, layout: &RegisterLayout) -> Result<KrausSet<R>> {
    spec.validate()?;
    let senders = layout.sender_qubits();
    let group_of = |q: usize| {
        if layout.sender_group(Receiver::R1).contains(&q) {
            Receiver::R1
        } else {
            Receiver::R2
        }
    };
    let ops = match spec {
        ChannelSpec::Pauli(noise) => {
            let j = noise.joint();
            let paulis = pauli_matrices::<R>();
            let mut ops = Vec::new();
            for (m, row) in j.iter().enumerate() {
                for (n, &w) in row.iter().enumerate() {
                    if w > R::zero() {
                        let op = senders.iter().fold(Matrix::identity(1), |acc, &q| {
                            let s = if group_of(q) == Receiver::R1 { m } else { n };
                            acc.kron(&paulis[s])
                        });
                        ops.push(op.scale_real(w.sqrt()));
                    }
                }
            }
            ops
        }
        _ => senders.iter().fold(vec![Matrix::identity(1)], |acc, &q| {
            let local = spec.per_qubit_kraus(group_of(q)).expect("product channel");
            acc.iter()
                .flat_map(|a| local.iter().map(move |k| a.kron(k)))
                .collect()
        }),
    };
    KrausSet::new(ops)
}

/// Λ(ρ) with Λ acting on the senders as described by `spec` and `layout`.
pub fn apply_channel<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
) -> Result<DensityOperator<R>> {
    spec.validate()?;
    if rho.n_qubits() != layout.n_qubits() {
        return domain(format!(
            "state has {} qubits but layout has {}",
            rho.n_qubits(),
            layout.n_qubits()
        ));
    }
    Ok(apply_channel_unchecked(rho, spec, layout))
}

pub(crate) fn apply_channel_unchecked<R: Real>(
    rho: &DensityOperator<R>,
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
) -> DensityOperator<R> {
    let g1 = layout.sender_group(Receiver::R1);
    let g2 = layout.sender_group(Receiver::R2);
    match spec {
        ChannelSpec::Identity => rho.clone(),
        ChannelSpec::Pauli(noise) => {
            let j = noise.joint();
            let paulis = pauli_matrices::<R>();
            let targets: Vec<usize> = g1.iter().chain(&g2).copied().collect();
            let mut terms = Vec::new();
            for (m, row) in j.iter().enumerate() {
                for (n, &w) in row.iter().enumerate() {
                    if w > R::zero() {
                        let mut w = Matrix::identity(1);
                        for _ in &g1 {
                            w = w.kron(&paulis[m]);
                        }
                        for _ in &g2 {
                            w = w.kron(&paulis[n]);
                        }
                        terms.push((j[m][n], w));
                    }
                }
            }
            apply_mixture(rho, &targets, &terms)
        }
        _ => {
            let mut out = rho.clone();
            for (side, group) in [(Receiver::R1, &g1), (Receiver::R2, &g2)] {
                let kraus = spec.per_qubit_kraus(side).expect("product channel");
                for &q in group {
                    out = apply_kraus_unchecked(&out, &[q], &kraus);
                }
            }
            out
        }
    }
}

fn apply_kraus_unchecked<R: Real>(
    rho: &DensityOperator<R>,
    targets: &[usize],
    kraus: &[Matrix<R>],
) -> DensityOperator<R> {
    let terms: Vec<(R, Matrix<R>)> = kraus.iter().map(|k| (R::one(), k.clone())).collect();
    apply_mixture(rho, targets, &terms)
}

/// Σ w · K ρ K† over `terms`, each K acting on `targets`.
fn apply_mixture<R: Real>(
    rho: &DensityOperator<R>,
    targets: &[usize],
    terms: &[(R, Matrix<R>)],
) -> DensityOperator<R> {
    let pattern = LocalPattern::new(rho.n_qubits(), targets);
    let d = rho.dim();
    let mut acc = Matrix::zeros(d, d);
    for (w, k) in terms {
        let term = pattern.conjugate(k, rho.matrix());
        for (a, b) in acc.as_mut_slice().iter_mut().zip(term.as_slice()) {
            *a += b.scale(*w);
        }
    }
    DensityOperator::from_matrix_unchecked(acc, rho.n_qubits())
}

/// Fixed pseudo-random mixed states used to probe covariance.
fn probe_states<R: Real>(n_qubits: usize) -> Vec<DensityOperator<R>> {
    let mut rng = ChaCha8Rng::seed_from_u64(COVARIANCE_PROBE_SEED);
    (0..COVARIANCE_PROBES)
        .map(|_| {
            // Pure state on 2n qubits, traced down to n: a full-rank mixed probe.
            let amps: Vec<C<R>> = (0..1usize << (2 * n_qubits))
                .map(|_| {
                    c(
                        R::sample_standard_normal(&mut rng),
                        R::sample_standard_normal(&mut rng),
                    )
                })
                .collect();
            let psi = StateVector::normalized(amps).expect("Gaussian vector is non-zero");
            psi.reduced(&(0..n_qubits).collect::<Vec<_>>())
                .expect("valid subset")
        })
        .collect()
}

/// max over `basis` and the probe states of ‖Λ(WρW†) − WΛ(ρ)W†‖_max, with W
/// acting on all sender qubits.
pub fn check_covariance<R: Real>(
    spec: &ChannelSpec<R>,
    layout: &RegisterLayout,
    basis: &[Matrix<R>],
) -> Result<R> {
    spec.validate()?;
    let senders = layout.sender_qubits();
    let d = 1usize << senders.len();
    if basis.iter().any(|w| w.rows() != d || w.cols() != d) {
        return domain(format!(
            "basis operators must be {d}x{d} to act on the senders"
        ));
    }
    let pattern = LocalPattern::new(layout.n_qubits(), &senders);
    let mut worst = R::zero();
    for rho in probe_states::<R>(layout.n_qubits()) {
        let out = apply_channel_unchecked(&rho, spec, layout);
        for w in basis {
            let rotated = DensityOperator::from_matrix_unchecked(
                pattern.conjugate(w, rho.matrix()),
                rho.n_qubits(),
            );
            let lhs = apply_channel_unchecked(&rotated, spec, layout);
            let rhs = pattern.conjugate(w, out.matrix());
            worst = worst.max(lhs.matrix().max_abs_diff(&rhs));
        }
    }
    Ok(worst)
}

/// (1/4^k) Σ_W W ρ W† over the Pauli basis on `targets`.
pub fn twirl<R: Real>(rho: &DensityOperator<R>, targets: &[usize]) -> Result<DensityOperator<R>> {
    crate::qcore::ops::validate_qubits(rho.n_qubits(), targets)?;
    let basis = pauli_basis::<R>(targets.len());
    let weight = R::one() / R::lit(basis.len() as f64);
    let terms: Vec<(R, Matrix<R>)> = basis.into_iter().map(|w| (weight, w)).collect();
    Ok(apply_mixture(rho, targets, &terms))
}
