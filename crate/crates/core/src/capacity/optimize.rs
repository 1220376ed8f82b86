//! Minimization of an output entropy over sender encoding unitaries: a coarse
//! grid (or random starts for multi-qubit groups) followed by bounded
//! Nelder–Mead refinement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qcore::Matrix;
use crate::scalar::{c, Real};

/// `[[a e^{iθ¹}, √(1−a²) e^{−iθ²}], [−√(1−a²) e^{iθ²}, a e^{−iθ¹}]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodingUnitaryParams<R: Real> {
    pub a: R,
    pub theta1: R,
    pub theta2: R,
}

impl<R: Real> EncodingUnitaryParams<R> {
    pub fn new(a: R, theta1: R, theta2: R) -> Result<Self> {
        if !(a >= R::zero() && a <= R::one()) {
            return crate::error::domain(format!("unitary parameter a = {a} outside [0, 1]"));
        }
        if !(theta1.is_finite() && theta2.is_finite()) {
            return crate::error::domain("unitary phases must be finite");
        }
        Ok(EncodingUnitaryParams { a, theta1, theta2 })
    }

    pub fn identity() -> Self {
        EncodingUnitaryParams {
            a: R::one(),
            theta1: R::zero(),
            theta2: R::zero(),
        }
    }

    pub fn unitary(&self) -> Matrix<R> {
        let a = self.a;
        let b = (R::one() - a * a).max(R::zero()).sqrt();
        let (s1, c1) = self.theta1.sin_cos();
        let (s2, c2) = self.theta2.sin_cos();
        Matrix::from_rows(&[
            vec![c(a * c1, a * s1), c(b * c2, -b * s2)],
            vec![c(-b * c2, -b * s2), c(a * c1, -a * s1)],
        ])
    }

    /// Same unitary with θ² moved to zero: only θ² − θ¹ matters for the
    /// entropies of encoded GHZ-type states under Pauli noise.
    pub fn canonical_phase(&self) -> Self {
        let two_pi = R::TAU();
        let mut t = (self.theta1 - self.theta2) % two_pi;
        if t < R::zero() {
            t += two_pi;
        }
        EncodingUnitaryParams {
            a: self.a,
            theta1: t,
            theta2: R::zero(),
        }
    }
}

/// Range of the phases θ¹, θ² searched by the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameterization {
    /// θ¹, θ² ∈ [0, π/2].
    Quadrant,
    /// θ¹, θ² ∈ [0, 2π]: every SU(2) element is reachable.
    FullCircle,
}

impl Parameterization {
    pub fn theta_max<R: Real>(self) -> R {
        match self {
            Parameterization::Quadrant => R::FRAC_PI_2(),
            Parameterization::FullCircle => R::TAU(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parameterization::Quadrant => "quadrant",
            Parameterization::FullCircle => "full-circle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptConfig {
    /// Grid intervals along a (step 1/a_steps).
    pub a_steps: usize,
    /// Grid intervals along each phase over [0, π/2].
    pub theta_steps: usize,
    /// Simplex diameter at which refinement stops.
    pub refine_tol: f64,
    pub max_evals: usize,
    /// Number of best grid/probe points refined independently.
    pub starts: usize,
    /// Random parameter probes evaluated besides the grid.
    pub probes: usize,
    pub probe_seed: u64,
    pub parameterization: Parameterization,
    /// Allow sender groups of several qubits (product of 2×2 unitaries).
    pub allow_multi_qubit: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            a_steps: 64,
            theta_steps: 16,
            refine_tol: 1e-8,
            max_evals: 4000,
            starts: 2,
            probes: 32,
            probe_seed: 0x0b5e_55ed,
            parameterization: Parameterization::Quadrant,
            allow_multi_qubit: false,
        }
    }
}

impl OptConfig {
    /// Coarse grid with more refinement starts, for population campaigns.
    pub fn campaign() -> Self {
        OptConfig {
            a_steps: 8,
            theta_steps: 4,
            starts: 3,
            probes: 8,
            max_evals: 1500,
            ..OptConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<R: Real> {
    pub value: R,
    pub params: Vec<EncodingUnitaryParams<R>>,
    pub evaluations: usize,
}

struct Counted<F> {
    f: F,
    evals: usize,
}

impl<F> Counted<F> {
    fn eval<R: Real>(&mut self, x: &[R]) -> Result<R>
    where
        F: FnMut(&[R]) -> R,
    {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Numeric(format!("objective is not finite at {x:?}")))
        }
    }
}

fn bounds<R: Real>(k: usize, cfg: &OptConfig) -> Vec<(R, R)> {
    let tmax = cfg.parameterization.theta_max::<R>();
    (0..k)
        .flat_map(|_| [(R::zero(), R::one()), (R::zero(), tmax), (R::zero(), tmax)])
        .collect()
}

fn to_params<R: Real>(x: &[R]) -> Vec<EncodingUnitaryParams<R>> {
    x.chunks(3)
        .map(|p| EncodingUnitaryParams {
            a: p[0],
            theta1: p[1],
            theta2: p[2],
        })
        .collect()
}

/// Minimizes `f` over `k` stacked `(a, θ¹, θ²)` triples.
pub(crate) fn minimize<R: Real>(
    k: usize,
    cfg: &OptConfig,
    f: impl FnMut(&[Matrix<R>]) -> R,
) -> Result<Minimum<R>> {
    let mut f = f;
    let objective = move |x: &[R]| {
        let us: Vec<Matrix<R>> = to_params(x).iter().map(|p| p.unitary()).collect();
        f(&us)
    };
    let mut obj = Counted {
        f: objective,
        evals: 0,
    };
    let bnds = bounds::<R>(k, cfg);
    let theta_scale = match cfg.parameterization {
        Parameterization::Quadrant => 1,
        Parameterization::FullCircle => 4,
    };

    let mut candidates: Vec<(R, Vec<R>)> = Vec::new();
    if k == 1 {
        let na = cfg.a_steps.max(1);
        let nt = (cfg.theta_steps * theta_scale).max(1);
        for i in 0..=na {
            let a = R::lit(i as f64 / na as f64);
            for j in 0..=nt {
                let t1 = bnds[1].1 * R::lit(j as f64 / nt as f64);
                for l in 0..=nt {
                    let t2 = bnds[2].1 * R::lit(l as f64 / nt as f64);
                    let x = vec![a, t1, t2];
                    let v = obj.eval(&x)?;
                    candidates.push((v, x));
                }
            }
        }
    } else {
        // Identity start plus the random probes below.
        let x: Vec<R> = (0..k)
            .flat_map(|_| [R::one(), R::zero(), R::zero()])
            .collect();
        let v = obj.eval(&x)?;
        candidates.push((v, x));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.probe_seed);
    let n_probes = if k == 1 {
        cfg.probes
    } else {
        cfg.probes.max(16) * k
    };
    for _ in 0..n_probes {
        let x: Vec<R> = bnds
            .iter()
            .map(|&(lo, hi)| lo + (hi - lo) * R::lit(rng.random::<f64>()))
            .collect();
        let v = obj.eval(&x)?;
        candidates.push((v, x));
    }

    candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
    let steps: Vec<R> = bnds
        .iter()
        .enumerate()
        .map(|(i, &(_, hi))| {
            if i % 3 == 0 {
                R::one() / R::lit(cfg.a_steps.max(1) as f64)
            } else {
                hi / R::lit((cfg.theta_steps * theta_scale).max(1) as f64)
            }
        })
        .collect();

    let mut best = candidates[0].clone();
    let mut used: Vec<Vec<R>> = Vec::new();
    for (_, x0) in candidates.iter() {
        if used.len() >= cfg.starts.max(1) {
            break;
        }
        // Skip starts that sit in the same grid cell as an earlier one.
        let near = used.iter().any(|u| {
            u.iter()
                .zip(x0)
                .zip(&steps)
                .all(|((a, b), s)| (*a - *b).abs() <= *s * R::lit(1.5))
        });
        if near {
            continue;
        }
        used.push(x0.clone());
        let refined = nelder_mead(&mut obj, x0, &steps, &bnds, cfg)?;
        if refined.0 < best.0 {
            best = refined;
        }
    }

    Ok(Minimum {
        value: best.0,
        params: to_params(&best.1),
        evaluations: obj.evals,
    })
}

fn clamp<R: Real>(x: &mut [R], bnds: &[(R, R)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bnds) {
        *v = v.max(lo).min(hi);
    }
}

fn nelder_mead<R: Real, F: FnMut(&[R]) -> R>(
    obj: &mut Counted<F>,
    x0: &[R],
    steps: &[R],
    bnds: &[(R, R)],
    cfg: &OptConfig,
) -> Result<(R, Vec<R>)> {
    let n = x0.len();
    let tol = R::lit(cfg.refine_tol).max(R::epsilon() * R::lit(10.0));
    let budget = obj.evals + cfg.max_evals;

    let mut simplex: Vec<(R, Vec<R>)> = Vec::with_capacity(n + 1);
    simplex.push((obj.eval(x0)?, x0.to_vec()));
    for i in 0..n {
        let mut x = x0.to_vec();
        let (lo, hi) = bnds[i];
        // Step toward the interior so the vertex is not clamped onto x0.
        x[i] = if x[i] + steps[i] <= hi {
            x[i] + steps[i]
        } else {
            x[i] - steps[i]
        };
        x[i] = x[i].max(lo).min(hi);
        simplex.push((obj.eval(&x)?, x));
    }

    let half = R::lit(0.5);
    let two = R::lit(2.0);
    loop {
        simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(_, x)| x.iter().zip(&simplex[0].1).map(|(a, b)| (*a - *b).abs()))
            .fold(R::zero(), R::max);
        let spread = simplex[n].0 - simplex[0].0;
        let flat = spread <= R::epsilon() * R::lit(4.0) * simplex[0].0.abs().max(R::one());
        if diameter < tol || (flat && diameter < R::lit(1e-4)) || obj.evals >= budget {
            break;
        }

        let mut centroid = vec![R::zero(); n];
        for (_, x) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += *v / R::lit(n as f64);
            }
        }
        let along = |t: R, worst: &[R]| -> Vec<R> {
            let mut p: Vec<R> = centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| *c + t * (*w - *c))
                .collect();
            clamp(&mut p, bnds);
            p
        };
        let worst = simplex[n].1.clone();
        let xr = along(-R::one(), &worst);
        let fr = obj.eval(&xr)?;
        if fr < simplex[0].0 {
            let xe = along(-two, &worst);
            let fe = obj.eval(&xe)?;
            simplex[n] = if fe < fr { (fe, xe) } else { (fr, xr) };
        } else if fr < simplex[n - 1].0 {
            simplex[n] = (fr, xr);
        } else {
            let (xc, fc) = if fr < simplex[n].0 {
                let xc = along(-half, &worst);
                let fc = obj.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = along(half, &worst);
                let fc = obj.eval(&xc)?;
                (xc, fc)
            };
            if fc < simplex[n].0.min(fr) {
                simplex[n] = (fc, xc);
            } else {
                let best = simplex[0].1.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<R> = best
                        .iter()
                        .zip(&vertex.1)
                        .map(|(b, v)| *b + half * (*v - *b))
                        .collect();
                    *vertex = (obj.eval(&x)?, x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objective"));
    Ok(simplex.swap_remove(0))
}
