#![allow(dead_code)]

use densecode::{haar_random_pure, DensityOp, Matrix, PureState, RngSeed, C};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_pure(n: usize, seed: u64, id: u64) -> PureState {
    haar_random_pure(n, RngSeed::new(seed, id)).unwrap()
}

/// Random mixed state on `n` qubits: a Haar state on `2n` qubits traced down.
pub fn random_mixed(n: usize, seed: u64, id: u64) -> DensityOp {
    let keep: Vec<usize> = (0..n).collect();
    random_pure(2 * n, seed, id).reduced(&keep).unwrap()
}

/// Haar unitary of dimension `d` by Gram–Schmidt on Gaussian columns.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> Matrix<f64> {
    let mut cols: Vec<Vec<C<f64>>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<C<f64>> = (0..d)
            .map(|_| C::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        for u in &cols {
            let proj: C<f64> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= proj * y;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    let mut data = vec![C::new(0.0, 0.0); d * d];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            data[i * d + j] = *x;
        }
    }
    Matrix::from_vec(d, d, data).unwrap()
}

/// Point drawn uniformly from the probability simplex.
pub fn simplex<const K: usize>(rng: &mut ChaCha8Rng) -> [f64; K] {
    let mut q = [0.0; K];
    for x in q.iter_mut() {
        *x = -rng.random::<f64>().max(1e-300).ln();
    }
    let s: f64 = q.iter().sum();
    q.map(|x| x / s)
}

/// Binary entropy written out directly, independent of the crate.
pub fn h2(x: f64) -> f64 {
    let t = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    t(x) + t(1.0 - x)
}
