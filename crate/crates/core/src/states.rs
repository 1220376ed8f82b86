//! Reference states, Haar-random sampling and the plain-text state format.
//!
//! State file layout:
//!
//! ```text
//! n 4 S1 S2 R1 R2
//! 0.7071067811865476 0
//! 0 0
//! ...
//! ```
//!
//! The header carries the qubit count and, optionally, the role string of a
//! [`RegisterLayout`]. It is followed by exactly 2^n lines `re im`, basis
//! index ascending, qubit 0 most significant.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::qcore::{RegisterLayout, StateVector};
use crate::scalar::{c, czero, Real, C};

/// Norm slack tolerated when reading a state file; the state is renormalized.
pub const LOAD_NORM_TOLERANCE: f64 = 1e-6;

/// α|0…0⟩ + √(1−α²) e^{iφ}|1…1⟩ parameterized by `p = α²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GghzParams<R: Real> {
    pub p: R,
    pub phi: R,
}

impl<R: Real> GghzParams<R> {
    pub fn new(p: R, phi: R) -> Result<Self> {
        if !(p >= R::zero() && p <= R::one()) {
            return domain(format!("gGHZ weight p = {p} outside [0, 1]"));
        }
        if !phi.is_finite() {
            return domain("gGHZ phase must be finite");
        }
        Ok(GghzParams { p, phi })
    }

    /// The larger eigenvalue of every marginal, max(p, 1 − p).
    pub fn larger_weight(&self) -> R {
        self.p.max(R::one() - self.p)
    }
}

/// Seed plus stream index of a reproducible random sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngSeed {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        RngSeed { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// (|0…0⟩ + |1…1⟩)/√2 on `n` qubits.
pub fn make_ghz<R: Real>(n: usize) -> Result<StateVector<R>> {
    if n < 2 {
        return domain(format!("GHZ state needs at least 2 qubits, got {n}"));
    }
    make_gghz(GghzParams::new(R::lit(0.5), R::zero())?, n)
}

pub fn make_gghz<R: Real>(params: GghzParams<R>, n: usize) -> Result<StateVector<R>> {
    if n < 2 {
        return domain(format!("gGHZ state needs at least 2 qubits, got {n}"));
    }
    let GghzParams { p, phi } = GghzParams::new(params.p, params.phi)?;
    let mut amps = vec![czero(); 1 << n];
    let tail = (R::one() - p).sqrt();
    amps[0] = c(p.sqrt(), R::zero());
    amps[(1 << n) - 1] = c(tail * phi.cos(), tail * phi.sin());
    StateVector::new(amps)
}

/// Haar-random pure state: 2^n i.i.d. standard complex Gaussians, normalized.
pub fn haar_random_pure<R: Real>(n: usize, seed: RngSeed) -> Result<StateVector<R>> {
    if n < 1 {
        return domain("Haar sampling needs at least one qubit");
    }
    let mut rng = seed.rng();
    let amps: Vec<C<R>> = (0..1usize << n)
        .map(|_| {
            let re = R::sample_standard_normal(&mut rng);
            let im = R::sample_standard_normal(&mut rng);
            c(re, im)
        })
        .collect();
    StateVector::normalized(amps)
}

/// Renders a state (and optional layout) in the text format described above.
pub fn save_state<R: Real>(psi: &StateVector<R>, layout: Option<&RegisterLayout>) -> String {
    let mut out = format!("n {}", psi.n_qubits());
    if let Some(l) = layout {
        out.push(' ');
        out.push_str(&l.to_string());
    }
    out.push('\n');
    for z in psi.amplitudes() {
        out.push_str(&format!("{} {}\n", z.re, z.im));
    }
    out
}

/// Parses the text format. Returns the state and the layout if the header
/// carried a role string.
pub fn load_state<R: Real>(text: &str) -> Result<(StateVector<R>, Option<RegisterLayout>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty state file"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("n") {
        return Err(parse_err(hline, "header must start with `n <qubits>`"));
    }
    let n: usize = toks
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(hline, "missing or non-numeric qubit count"))?;
    if !(1..=24).contains(&n) {
        return Err(parse_err(hline, format!("unsupported qubit count {n}")));
    }
    let roles: Vec<&str> = toks.collect();
    let layout = if roles.is_empty() {
        None
    } else {
        let l =
            RegisterLayout::parse(&roles.join(" ")).map_err(|e| parse_err(hline, e.to_string()))?;
        if l.n_qubits() != n {
            return Err(parse_err(
                hline,
                format!("role string names {} qubits but n = {n}", l.n_qubits()),
            ));
        }
        Some(l)
    };

    let expected = 1usize << n;
    let mut amps = Vec::with_capacity(expected);
    let mut last_line = hline;
    for (lineno, line) in lines {
        last_line = lineno;
        if amps.len() == expected {
            return Err(parse_err(
                lineno,
                format!("expected {expected} amplitudes, found more"),
            ));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 2 {
            return Err(parse_err(lineno, "expected two numbers `re im`"));
        }
        let re: R = parse_num(parts[0]).ok_or_else(|| parse_err(lineno, "non-numeric entry"))?;
        let im: R = parse_num(parts[1]).ok_or_else(|| parse_err(lineno, "non-numeric entry"))?;
        amps.push(c(re, im));
    }
    if amps.len() != expected {
        return Err(parse_err(
            last_line,
            format!("expected {expected} amplitudes, found {}", amps.len()),
        ));
    }
    let norm2: R = amps.iter().map(|z| z.norm_sqr()).sum();
    if (norm2 - R::one()).abs() > R::lit(LOAD_NORM_TOLERANCE) {
        return Err(parse_err(
            last_line,
            format!("squared norm {norm2} is not 1 within {LOAD_NORM_TOLERANCE}"),
        ));
    }
    let psi = if (norm2 - R::one()).abs() <= R::tolerance() {
        StateVector::new(amps)?
    } else {
        StateVector::normalized(amps)?
    };
    Ok((psi, layout))
}

fn parse_num<R: Real>(s: &str) -> Option<R> {
    s.parse::<R>().ok().filter(|x| x.is_finite())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
