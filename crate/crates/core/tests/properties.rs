mod common;

use densecode::capacity::{ghz_zeta_eigenvalues, pauli_pair_weight};
use densecode::experiment::fmt_float;
use densecode::ggm::bipartitions;
use densecode::qcore::spectrum_entropy;
use densecode::{
    apply_channel, check_covariance, ensemble_chi, ggm, kraus_for, load_state,
    locc_bound_noiseless, make_gghz, make_ghz, min_output_entropy, noisy_locc_bound, partial_trace,
    pauli_basis, save_state, twirl, von_neumann_entropy, Channel, EncodingUnitaryParams, Ensemble,
    GghzParams, OptConfig, Receiver, RegisterLayout,
};
use proptest::prelude::*;

use common::{h2, random_mixed, random_pure, random_unitary, rng};

fn simplex4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(0.001f64..1.0).prop_map(|w| {
        let s: f64 = w.iter().sum();
        w.map(|x| x / s)
    })
}

fn simplex16() -> impl Strategy<Value = [[f64; 4]; 4]> {
    prop::collection::vec(0.001f64..1.0, 16).prop_map(|w| {
        let s: f64 = w.iter().sum();
        let mut q = [[0.0; 4]; 4];
        for (k, x) in w.iter().enumerate() {
            q[k / 4][k % 4] = x / s;
        }
        q
    })
}

fn channel() -> impl Strategy<Value = Channel> {
    prop_oneof![
        (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b)| Channel::amplitude_damping(a, b).unwrap()),
        (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(a, b)| Channel::phase_damping(a, b).unwrap()),
        simplex4().prop_map(|q| Channel::correlated_pauli(q).unwrap()),
        simplex16().prop_map(|q| Channel::general_pauli(q).unwrap()),
    ]
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn ghz_rho() -> densecode::DensityOp {
    make_ghz::<f64>(4).unwrap().density()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_composes(id in 0u64..10_000) {
        let rho = random_mixed(4, 1, id);
        let once = partial_trace(&rho, &[1, 3]).unwrap();
        let twice = partial_trace(&partial_trace(&rho, &[0, 1, 3]).unwrap(), &[1, 2]).unwrap();
        prop_assert!(once.matrix().max_abs_diff(twice.matrix()) <= 1e-12);
    }

    #[test]
    fn schmidt_spectra_agree(id in 0u64..10_000, n in 2usize..=5) {
        let psi = random_pure(n, 2, id);
        for part in bipartitions(n) {
            let rest: Vec<usize> = (0..n).filter(|q| !part.contains(q)).collect();
            let a = sorted_desc(psi.reduced(&part).unwrap().eigenvalues());
            let b = sorted_desc(psi.reduced(&rest).unwrap().eigenvalues());
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn entropy_is_unitarily_invariant(id in 0u64..10_000, useed in any::<u64>()) {
        let rho = random_mixed(2, 3, id);
        let u = random_unitary(4, &mut rng(useed));
        let rotated = rho.apply_local_unitary(&[0, 1], &u).unwrap();
        prop_assert!((von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs() <= 1e-12);
    }

    #[test]
    fn entropy_is_subadditive(id in 0u64..10_000) {
        let rho = random_mixed(2, 4, id);
        let sa = von_neumann_entropy(&rho.partial_trace(&[0]).unwrap());
        let sb = von_neumann_entropy(&rho.partial_trace(&[1]).unwrap());
        prop_assert!(von_neumann_entropy(&rho) <= sa + sb + 1e-12);
    }

    #[test]
    fn kraus_sets_are_complete(spec in channel()) {
        let set = kraus_for(&spec, &RegisterLayout::four_qubit()).unwrap();
        prop_assert!(set.completeness_deviation() <= 1e-10);
    }

    #[test]
    fn channels_preserve_trace_and_positivity(spec in channel(), id in 0u64..10_000) {
        let out = apply_channel(&random_mixed(4, 5, id), &spec, &RegisterLayout::four_qubit()).unwrap();
        prop_assert!((out.trace().re - 1.0).abs() <= 1e-10);
        prop_assert!(out.eigenvalues().iter().all(|&x| x >= -1e-9));
    }

    #[test]
    fn channels_leave_receivers_alone(spec in channel(), id in 0u64..10_000) {
        let layout = RegisterLayout::four_qubit();
        let rho = random_mixed(4, 6, id);
        let out = apply_channel(&rho, &spec, &layout).unwrap();
        let r = layout.receiver_qubits();
        let before = rho.partial_trace(&r).unwrap();
        let after = out.partial_trace(&r).unwrap();
        prop_assert!(before.matrix().max_abs_diff(after.matrix()) <= 1e-12);
    }

    #[test]
    fn pauli_noise_is_covariant(q in simplex16()) {
        let spec = Channel::general_pauli(q).unwrap();
        let dev = check_covariance(&spec, &RegisterLayout::four_qubit(), &pauli_basis(2)).unwrap();
        prop_assert!(dev < 1e-12);
    }

    #[test]
    fn twirl_is_idempotent_and_keeps_receivers(id in 0u64..10_000) {
        let rho = random_mixed(4, 7, id);
        let once = twirl(&rho, &[0, 1]).unwrap();
        let twice = twirl(&once, &[0, 1]).unwrap();
        prop_assert!(once.matrix().max_abs_diff(twice.matrix()) <= 1e-12);
        let before = rho.partial_trace(&[2, 3]).unwrap();
        let after = once.partial_trace(&[2, 3]).unwrap();
        prop_assert!(before.matrix().max_abs_diff(after.matrix()) <= 1e-12);
    }

    #[test]
    fn ggm_is_local_unitary_invariant(id in 0u64..10_000, party in 0usize..4, useed in any::<u64>()) {
        let psi = random_pure(4, 8, id);
        let u = random_unitary(2, &mut rng(useed));
        let moved = psi.apply_local_unitary(&[party], &u).unwrap();
        prop_assert!((ggm(&moved).unwrap().0 - ggm(&psi).unwrap().0).abs() <= 1e-10);
    }

    #[test]
    fn gghz_ggm_is_smaller_weight(p in 0.0f64..=1.0, phi in 0.0f64..std::f64::consts::TAU) {
        let psi = make_gghz(GghzParams::new(p, phi).unwrap(), 4).unwrap();
        let (e, scan) = ggm(&psi).unwrap();
        prop_assert!((e - (1.0 - p.max(1.0 - p))).abs() <= 1e-12);
        for entry in &scan.entries {
            prop_assert!((entry.lambda_sq - p.max(1.0 - p)).abs() <= 1e-12);
        }
    }

    #[test]
    fn state_file_round_trip(id in 0u64..10_000, n in 1usize..=6) {
        let psi = random_pure(n, 9, id);
        let (back, _) = load_state::<f64>(&save_state(&psi, None)).unwrap();
        for (x, y) in psi.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn fmt_float_round_trips_to_twelve_digits(x in -1e6f64..1e6) {
        let y: f64 = fmt_float(x).parse().unwrap();
        prop_assert!((x - y).abs() <= 1e-11 * x.abs().max(1e-300));
    }

    #[test]
    fn ad_pd_ghz_side_entropy_ignores_phases(
        g in 0.0f64..=1.0,
        a in 0.0f64..=1.0,
        t1 in 0.0f64..std::f64::consts::FRAC_PI_2,
        t2 in 0.0f64..std::f64::consts::FRAC_PI_2,
        ad in any::<bool>(),
    ) {
        let spec = if ad {
            Channel::amplitude_damping(g, g).unwrap()
        } else {
            Channel::phase_damping(g, g).unwrap()
        };
        let layout = RegisterLayout::four_qubit();
        let rho = ghz_rho();
        let side_entropy = |p: EncodingUnitaryParams<f64>| {
            let encoded = rho.apply_local_unitary(&[0], &p.unitary()).unwrap();
            let out = apply_channel(&encoded, &spec, &layout).unwrap();
            von_neumann_entropy(&out.partial_trace(&layout.side_qubits(Receiver::R1)).unwrap())
        };
        let base = side_entropy(EncodingUnitaryParams::new(a, 0.0, 0.0).unwrap());
        let moved = side_entropy(EncodingUnitaryParams::new(a, t1, t2).unwrap());
        prop_assert!((base - moved).abs() < 1e-10);
    }

    #[test]
    fn symmetric_channels_give_equal_sides(
        g in 0.0f64..=1.0,
        a in 0.0f64..=1.0,
        t in 0.0f64..std::f64::consts::FRAC_PI_2,
        q in simplex4(),
        family in 0usize..3,
    ) {
        let spec = match family {
            0 => Channel::amplitude_damping(g, g).unwrap(),
            1 => Channel::phase_damping(g, g).unwrap(),
            _ => Channel::correlated_pauli(q).unwrap(),
        };
        let params = EncodingUnitaryParams::new(a, t, 0.0).unwrap();
        let s1 = spectrum_entropy(&ghz_zeta_eigenvalues(&spec, Receiver::R1, &params).unwrap());
        let s2 = spectrum_entropy(&ghz_zeta_eigenvalues(&spec, Receiver::R2, &params).unwrap());
        prop_assert!((s1 - s2).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn identity_channel_matches_noiseless_bound(id in 0u64..10_000) {
        let layout = RegisterLayout::four_qubit();
        let rho = random_pure(4, 10, id).density();
        let noiseless = locc_bound_noiseless(&rho, &layout).unwrap().bound_bits;
        let noisy = noisy_locc_bound(&rho, &Channel::Identity, &layout, &OptConfig::campaign())
            .unwrap()
            .bound_bits;
        prop_assert!((noiseless - noisy).abs() <= 1e-9);
    }

    #[test]
    fn bound_report_identity_holds(id in 0u64..10_000, q in simplex4()) {
        let layout = RegisterLayout::four_qubit();
        let rho = random_pure(4, 11, id).density();
        let spec = Channel::correlated_pauli(q).unwrap();
        let r = noisy_locc_bound(&rho, &spec, &layout, &OptConfig::campaign()).unwrap();
        prop_assert_eq!(
            r.bound_bits,
            r.log_dim_senders + r.term_s_r1 + r.term_s_r2 - r.term_min_entropy
        );
    }

    #[test]
    fn general_pauli_marginal_formula(q in simplex16()) {
        let spec = Channel::general_pauli(q).unwrap();
        let rows: [f64; 4] = std::array::from_fn(|m| q[m].iter().sum());
        let cols: [f64; 4] = std::array::from_fn(|n| (0..4).map(|m| q[m][n]).sum());
        let oracle = 3.0 - h2(pauli_pair_weight(rows)).max(h2(pauli_pair_weight(cols)));
        let b = noisy_locc_bound(&ghz_rho(), &spec, &RegisterLayout::four_qubit(), &OptConfig::default())
            .unwrap()
            .bound_bits;
        prop_assert!((b - oracle).abs() < 1e-6);
    }

    #[test]
    fn optimizer_minimum_is_below_probes(id in 0u64..10_000, probe_seed in any::<u64>()) {
        use rand::Rng;
        let layout = RegisterLayout::four_qubit();
        let rho = random_pure(4, 12, id).density();
        let spec = Channel::amplitude_damping(0.4, 0.7).unwrap();
        let min = min_output_entropy(&rho, &spec, &layout, Receiver::R1, &OptConfig::default()).unwrap();
        let mut r = rng(probe_seed);
        for _ in 0..60 {
            let p = EncodingUnitaryParams::new(
                r.random::<f64>(),
                r.random::<f64>() * std::f64::consts::FRAC_PI_2,
                r.random::<f64>() * std::f64::consts::FRAC_PI_2,
            )
            .unwrap();
            let encoded = rho.apply_local_unitary(&[0], &p.unitary()).unwrap();
            let out = apply_channel(&encoded, &spec, &layout).unwrap();
            let s = von_neumann_entropy(&out.partial_trace(&layout.side_qubits(Receiver::R1)).unwrap());
            prop_assert!(min.value <= s + 1e-9);
        }
    }
}

#[test]
fn haar_marginal_purity_mean() {
    // E[tr ρ_A²] for one qubit of a Haar four-qubit state is (2 + 8)/(16 + 1).
    let n = 20_000;
    let mean: f64 = (0..n)
        .map(|i| {
            let m = random_pure(4, 13, i).reduced(&[0]).unwrap();
            m.matrix().matmul(m.matrix()).trace().re
        })
        .sum::<f64>()
        / n as f64;
    assert!((mean - 10.0 / 17.0).abs() < 0.005, "mean purity {mean}");
}

#[test]
fn haar_spectra_are_rotation_invariant() {
    // Two-sample KS test on the largest one-qubit marginal eigenvalue, with
    // and without a fixed global unitary.
    let n = 10_000u64;
    let u = random_unitary(16, &mut rng(14));
    let top = |psi: &densecode::PureState| sorted_desc(psi.reduced(&[0]).unwrap().eigenvalues())[0];
    let mut a: Vec<f64> = (0..n).map(|i| top(&random_pure(4, 15, i))).collect();
    let mut b: Vec<f64> = (0..n)
        .map(|i| {
            top(&random_pure(4, 16, i)
                .apply_local_unitary(&[0, 1, 2, 3], &u)
                .unwrap())
        })
        .collect();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 - j as f64).abs() / n as f64);
    }
    // 0.1% critical value for equal samples: 1.95·sqrt(2/n).
    assert!(d < 1.95 * (2.0 / n as f64).sqrt(), "KS statistic {d}");
}

#[test]
fn ghz_pauli_ensemble_holevo() {
    let layout = RegisterLayout::four_qubit();
    let rho = ghz_rho();
    let clean = Ensemble::pauli_encoded(&rho, &layout, None).unwrap();
    assert!((ensemble_chi(&clean, &layout).unwrap() - 3.0).abs() < 1e-9);
    let spec = Channel::correlated_pauli([0.93, 0.01, 0.02, 0.04]).unwrap();
    let noisy = Ensemble::pauli_encoded(&rho, &layout, Some(&spec)).unwrap();
    let chi = ensemble_chi(&noisy, &layout).unwrap();
    assert!((chi - (3.0 - h2(0.97))).abs() < 1e-6, "chi {chi}");
}
