//! Generalized geometric measure and the premises of the GGM–capacity
//! ordering theorem for four-qubit states.
//!
//! For a pure state the squared maximal Schmidt coefficient of a cut A:B is
//! the largest eigenvalue of either marginal, and
//! `E = 1 − max_{A:B} λ²_{A:B}`.

use std::fmt;

use crate::error::{domain, Result};
use crate::qcore::{eigvals_hermitian, von_neumann_entropy, Receiver, RegisterLayout, StateVector};
use crate::scalar::Real;

/// Absolute tolerance for ties in argmax comparisons and entropy inequalities.
pub const TIE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BipartitionEntry<R: Real> {
    /// The side containing qubit 0 for balanced cuts, else the smaller side.
    pub part: Vec<usize>,
    pub lambda_sq: R,
}

impl<R: Real> BipartitionEntry<R> {
    /// Label such as `S1|S2R1R2`, using role names when a layout is given
    /// and qubit indices (`q0|q1q2q3`) otherwise.
    pub fn label(&self, n_qubits: usize, layout: Option<&RegisterLayout>) -> String {
        let name = |q: usize| match layout {
            Some(l) => l.roles()[q].to_string(),
            None => format!("q{q}"),
        };
        let rest: Vec<usize> = (0..n_qubits).filter(|q| !self.part.contains(q)).collect();
        let a: String = self.part.iter().map(|&q| name(q)).collect();
        let b: String = rest.iter().map(|&q| name(q)).collect();
        format!("{a}|{b}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BipartitionScan<R: Real> {
    pub n_qubits: usize,
    pub entries: Vec<BipartitionEntry<R>>,
    /// Index into `entries` of the first cut attaining the maximum.
    pub argmax: usize,
}

impl<R: Real> BipartitionScan<R> {
    pub fn max_lambda_sq(&self) -> R {
        self.entries[self.argmax].lambda_sq
    }

    pub fn argmax_entry(&self) -> &BipartitionEntry<R> {
        &self.entries[self.argmax]
    }

    pub fn entry_for(&self, part: &[usize]) -> Option<&BipartitionEntry<R>> {
        let mut want = part.to_vec();
        want.sort_unstable();
        let rest: Vec<usize> = (0..self.n_qubits).filter(|q| !want.contains(q)).collect();
        self.entries
            .iter()
            .find(|e| e.part == want || e.part == rest)
    }

    /// Whether the cut `part : rest` attains the maximum within [`TIE_TOLERANCE`].
    pub fn attains_max(&self, part: &[usize]) -> bool {
        self.entry_for(part)
            .is_some_and(|e| e.lambda_sq >= self.max_lambda_sq() - R::lit(TIE_TOLERANCE))
    }
}

/// Every nontrivial cut of `n` parties once, as the side described on
/// [`BipartitionEntry::part`].
pub fn bipartitions(n: usize) -> Vec<Vec<usize>> {
    let mut cuts = Vec::new();
    for mask in 1u32..(1u32 << n) - 1 {
        let part: Vec<usize> = (0..n).filter(|q| mask >> (n - 1 - q) & 1 == 1).collect();
        let size = part.len();
        let keep = if 2 * size < n {
            true
        } else if 2 * size == n {
            part.contains(&0)
        } else {
            false
        };
        if keep {
            cuts.push(part);
        }
    }
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cuts
}

/// GGM of a pure state together with the scan over all cuts.
pub fn ggm<R: Real>(state: &StateVector<R>) -> Result<(R, BipartitionScan<R>)> {
    let n = state.n_qubits();
    if n < 2 {
        return domain("GGM needs at least two parties");
    }
    let mut entries = Vec::new();
    for part in bipartitions(n) {
        let rho = state.reduced(&part)?;
        let lambda_sq = eigvals_hermitian(rho.matrix())?[0].min(R::one());
        entries.push(BipartitionEntry { part, lambda_sq });
    }
    let mut argmax = 0;
    for (i, e) in entries.iter().enumerate() {
        if e.lambda_sq > entries[argmax].lambda_sq {
            argmax = i;
        }
    }
    let scan = BipartitionScan {
        n_qubits: n,
        entries,
        argmax,
    };
    Ok(((R::one() - scan.max_lambda_sq()).max(R::zero()), scan))
}

/// Premise flags; `swapped_*` exchange the roles of (S1, R1) and (S2, R2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Theorem2Flags {
    /// S(ρ^{R1}) ≤ S(ρ^{S1R1}).
    pub cond_i: bool,
    /// The maximal λ² is attained by the cut R2 : rest.
    pub cond_ii: bool,
    pub swapped_i: bool,
    pub swapped_ii: bool,
}

impl Theorem2Flags {
    pub fn strict(&self) -> bool {
        self.cond_i && self.cond_ii
    }

    pub fn swapped(&self) -> bool {
        self.swapped_i && self.swapped_ii
    }

    pub fn either(&self) -> bool {
        self.strict() || self.swapped()
    }

    pub fn all(&self) -> bool {
        self.strict() && self.swapped()
    }
}

/// Premise counting conventions for population statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PremiseConvention {
    /// cond_i ∧ cond_ii.
    Strict,
    /// (cond_i ∧ cond_ii) ∨ (swapped_i ∧ swapped_ii).
    EitherOrientation,
}

impl PremiseConvention {
    pub const ALL: [PremiseConvention; 2] = [
        PremiseConvention::Strict,
        PremiseConvention::EitherOrientation,
    ];

    pub fn holds(self, f: &Theorem2Flags) -> bool {
        match self {
            PremiseConvention::Strict => f.strict(),
            PremiseConvention::EitherOrientation => f.either(),
        }
    }
}

impl fmt::Display for PremiseConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PremiseConvention::Strict => "strict",
            PremiseConvention::EitherOrientation => "either",
        })
    }
}

fn four_party_check(state_qubits: usize, layout: &RegisterLayout) -> Result<()> {
    if state_qubits != 4 || layout.n_qubits() != 4 || layout.n_senders() != 2 {
        return domain("the premises are defined for four parties S1 S2 R1 R2");
    }
    for r in Receiver::BOTH {
        if layout.sender_group(r).len() != 1 {
            return domain(format!("{r} must receive from exactly one sender"));
        }
    }
    Ok(())
}

/// Evaluates both orientations of the premises from the scan and the side
/// entropies.
pub fn theorem2_conditions<R: Real>(
    state: &StateVector<R>,
    layout: &RegisterLayout,
) -> Result<Theorem2Flags> {
    four_party_check(state.n_qubits(), layout)?;
    let (_, scan) = ggm(state)?;
    Ok(theorem2_from_scan(state, layout, &scan))
}

pub(crate) fn theorem2_from_scan<R: Real>(
    state: &StateVector<R>,
    layout: &RegisterLayout,
    scan: &BipartitionScan<R>,
) -> Theorem2Flags {
    let tol = R::lit(TIE_TOLERANCE);
    let s = |keep: &[usize]| von_neumann_entropy(&state.reduced(keep).expect("layout qubits"));
    let orient = |near: Receiver| {
        let far = near.other();
        let cond_i = s(&[layout.receiver_qubit(near)]) <= s(&layout.side_qubits(near)) + tol;
        let cond_ii = scan.attains_max(&[layout.receiver_qubit(far)]);
        (cond_i, cond_ii)
    };
    let (cond_i, cond_ii) = orient(Receiver::R1);
    let (swapped_i, swapped_ii) = orient(Receiver::R2);
    Theorem2Flags {
        cond_i,
        cond_ii,
        swapped_i,
        swapped_ii,
    }
}

/// GGM `1 − m` of the gGHZ state whose noiseless bound `2 + H(m)` equals `b`,
/// with `m ∈ [½, 1]` found by bisection.
pub fn gghz_ggm_at_capacity<R: Real>(b: R) -> Result<R> {
    let tol = R::lit(1e-9);
    let two = R::lit(2.0);
    let three = R::lit(3.0);
    if !(b >= two - tol && b <= three + tol) {
        return domain(format!("capacity {b} outside [2, 3]"));
    }
    invert_entropy(b - two)
}

/// Solves H(m) = h for m ∈ [½, 1] (h clamped to [0, 1]) and returns 1 − m.
///
/// Bisection runs on x = m − ½ against the deficit 1 − H(½ + x), evaluated
/// with `ln_1p` so that it stays accurate where H is flat near ½.
pub(crate) fn invert_entropy<R: Real>(h: R) -> Result<R> {
    let target = R::one() - h.max(R::zero()).min(R::one());
    let half = R::lit(0.5);
    let two = R::lit(2.0);
    let deficit = |x: R| {
        let up = if x < half {
            (half - x) * (-two * x).ln_1p()
        } else {
            R::zero()
        };
        ((half + x) * (two * x).ln_1p() + up) / R::LN_2()
    };
    let (mut lo, mut hi) = (R::zero(), half);
    while hi - lo > R::lit(1e-13) {
        let mid = half * (lo + hi);
        if deficit(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(half - half * (lo + hi))
}
