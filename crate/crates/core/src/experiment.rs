//! Batch experiments behind the command-line driver: Haar-random campaigns,
//! the gGHZ reference curve, closed-form channel scans, single-state bounds
//! and GGM scans. Every experiment produces CSV rows plus a text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::capacity::{
    covariant_chi, covariant_chi_unchecked, ghz_closed_form_bound, global_capacity,
    locc_bound_noiseless, noisy_locc_bound, BoundReport, OptConfig,
};
use crate::channels::{check_covariance, pauli_basis, ChannelSpec, PauliNoise};
use crate::error::{domain, spec_err, Error, Result};
use crate::ggm::{ggm, invert_entropy, theorem2_from_scan, PremiseConvention, Theorem2Flags};
use crate::qcore::{DensityOperator, Receiver, RegisterLayout, StateVector};
use crate::states::{haar_random_pure, load_state, make_gghz, make_ghz, GghzParams, RngSeed};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 50_000;
pub const DEFAULT_POINTS: usize = 11;

/// Absolute slack in the "on or above the gGHZ line" comparison.
pub const LINE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Haar,
    GghzCurve,
    ChannelScan,
    Bound,
    Ggm,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "haar" => Mode::Haar,
            "gghz-curve" => Mode::GghzCurve,
            "channel-scan" => Mode::ChannelScan,
            "bound" => Mode::Bound,
            "ggm" => Mode::Ggm,
            other => return spec_err(other, "unknown mode"),
        })
    }
}

/// Where the state of the `bound` and `ggm` modes comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Ghz,
    Gghz(GghzParams<f64>),
    File(PathBuf),
}

impl FromStr for StateSource {
    type Err = Error;

    /// `ghz`, `gghz:<p>,<phi>` or a path to a state file.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "ghz" {
            return Ok(StateSource::Ghz);
        }
        if let Some(args) = t.strip_prefix("gghz:") {
            let vals: Vec<f64> = args
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Spec {
                    input: s.to_string(),
                    msg: "expected gghz:<p>,<phi>".into(),
                })?;
            let (p, phi) = match vals[..] {
                [p] => (p, 0.0),
                [p, phi] => (p, phi),
                _ => return spec_err(s, "expected gghz:<p>,<phi>"),
            };
            let params = GghzParams::new(p, phi).map_err(|e| Error::Spec {
                input: s.to_string(),
                msg: e.to_string(),
            })?;
            return Ok(StateSource::Gghz(params));
        }
        if t.is_empty() {
            return spec_err(s, "empty state specifier");
        }
        Ok(StateSource::File(PathBuf::from(t)))
    }
}

impl StateSource {
    /// The state and its layout; four-qubit `S1 S2 R1 R2` unless a file
    /// names other roles.
    pub fn load(&self) -> Result<(StateVector<f64>, RegisterLayout)> {
        match self {
            StateSource::Ghz => Ok((make_ghz(4)?, RegisterLayout::four_qubit())),
            StateSource::Gghz(p) => Ok((make_gghz(*p, 4)?, RegisterLayout::four_qubit())),
            StateSource::File(path) => {
                let text = std::fs::read_to_string(path)?;
                let (psi, layout) = load_state::<f64>(&text)?;
                let layout = match layout {
                    Some(l) => l,
                    None if psi.n_qubits() >= 3 => RegisterLayout::standard(psi.n_qubits() - 2)?,
                    None => return domain("a state needs at least three qubits: senders, R1, R2"),
                };
                Ok((psi, layout))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n_samples: usize,
    pub seed: u64,
    pub channel: ChannelSpec<f64>,
    pub state: StateSource,
    pub out: Option<PathBuf>,
    pub points: usize,
    /// Worker threads; `None` uses every available core.
    pub jobs: Option<usize>,
    pub opt: OptConfig,
}

impl ExperimentConfig {
    pub fn new(mode: Mode) -> Self {
        ExperimentConfig {
            mode,
            n_samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            channel: ChannelSpec::Identity,
            state: StateSource::Ghz,
            out: None,
            points: DEFAULT_POINTS,
            jobs: None,
            opt: OptConfig::default(),
        }
    }

    /// Applies `key=value` settings; keys are the long CLI flag names.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let int = |v: &str| -> Result<usize> {
            v.trim().parse().map_err(|_| Error::Spec {
                input: v.into(),
                msg: format!("`{key}` needs an integer"),
            })
        };
        match key {
            "mode" => self.mode = value.parse()?,
            "n" => self.n_samples = int(value)?,
            "seed" => {
                self.seed = value.trim().parse().map_err(|_| Error::Spec {
                    input: value.into(),
                    msg: "`seed` needs an unsigned 64-bit integer".into(),
                })?
            }
            "channel" => self.channel = ChannelSpec::parse(value)?,
            "state" => self.state = value.parse()?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "points" => self.points = int(value)?,
            "jobs" => self.jobs = Some(int(value)?),
            other => return spec_err(other, "unknown configuration key"),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return spec_err("n", "sample count must be positive");
        }
        if self.jobs == Some(0) {
            return spec_err("jobs", "job count must be positive");
        }
        if matches!(self.mode, Mode::GghzCurve | Mode::ChannelScan) && self.points < 2 {
            return spec_err("points", "at least two points are needed");
        }
        if self.mode == Mode::ChannelScan && matches!(self.channel, ChannelSpec::Identity) {
            return spec_err("channel", "channel-scan needs a channel family");
        }
        Ok(())
    }

    fn run_in_pool<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// Parses a `key=value` configuration file (blank lines and `#` comments are
/// ignored).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected key=value, got `{line}`"),
            });
        };
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

/// `x` with 12 significant digits, shortest of fixed or exponent notation.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: String| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn open_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn write_table(out: &Option<PathBuf>, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(open_writer(out)?);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

/// The gGHZ reference line in the (bound, GGM) plane: the bound of gGHZ with
/// larger marginal weight m ∈ [½, 1] against its GGM 1 − m.
#[derive(Debug, Clone)]
pub enum GghzLine {
    /// bound(m) = 2 + H(m) − shift.
    Shifted { shift: f64 },
    /// Sampled (bound, GGM) pairs with bound ascending.
    Sampled(Vec<(f64, f64)>),
}

impl GghzLine {
    pub fn for_channel(spec: &ChannelSpec<f64>, opt: &OptConfig) -> Result<Self> {
        match spec {
            ChannelSpec::Identity | ChannelSpec::PhaseDamping { .. } => {
                Ok(GghzLine::Shifted { shift: 0.0 })
            }
            ChannelSpec::Pauli(_) => {
                let b = crate::capacity::gghz_closed_form_bound(0.5, spec)?;
                Ok(GghzLine::Shifted { shift: 3.0 - b })
            }
            ChannelSpec::AmplitudeDamping { .. } => {
                let layout = RegisterLayout::four_qubit();
                let mut pts = Vec::new();
                for k in 0..=32 {
                    let m = 0.5 + 0.5 * k as f64 / 32.0;
                    let psi = make_gghz(GghzParams::new(m, 0.0)?, 4)?;
                    let r = noisy_locc_bound(&psi.density(), spec, &layout, opt)?;
                    pts.push((r.bound_bits, 1.0 - m));
                }
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                Ok(GghzLine::Sampled(pts))
            }
        }
    }

    /// GGM of the gGHZ state with bound `b`; `None` when `b` exceeds every
    /// gGHZ bound.
    pub fn threshold(&self, b: f64) -> Result<Option<f64>> {
        match self {
            GghzLine::Shifted { shift } => {
                let h = b - 2.0 + shift;
                if h > 1.0 + LINE_TOLERANCE {
                    Ok(None)
                } else {
                    invert_entropy(h).map(Some)
                }
            }
            GghzLine::Sampled(pts) => {
                let (lo, hi) = (pts[0], pts[pts.len() - 1]);
                if b > hi.0 + LINE_TOLERANCE {
                    return Ok(None);
                }
                if b <= lo.0 {
                    return Ok(Some(lo.1));
                }
                let k = pts.partition_point(|p| p.0 < b).clamp(1, pts.len() - 1);
                let (x0, y0) = pts[k - 1];
                let (x1, y1) = pts[k];
                let t = if x1 > x0 { (b - x0) / (x1 - x0) } else { 1.0 };
                Ok(Some(y0 + t * (y1 - y0)))
            }
        }
    }

    pub fn is_above(&self, b: f64, ggm: f64) -> Result<bool> {
        Ok(match self.threshold(b)? {
            Some(t) => ggm >= t - LINE_TOLERANCE,
            None => false,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarRow {
    pub state_id: u64,
    pub ggm: f64,
    pub bound_bits: f64,
    pub flags: Theorem2Flags,
    pub above_gghz_line: bool,
    pub argmax_cut: String,
    /// E ≥ gGHZ GGM at the noiseless bound, for the ordering invariant.
    pub above_noiseless_line: bool,
}

/// Population tallies for one premise convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub premises_above: usize,
    pub violated_above: usize,
    pub below: usize,
    /// Samples meeting the premises but below the noiseless gGHZ line.
    pub premises_violations: usize,
}

impl Tally {
    pub fn fractions(&self) -> [f64; 3] {
        let n = (self.premises_above + self.violated_above + self.below).max(1) as f64;
        [
            self.premises_above as f64 / n,
            self.violated_above as f64 / n,
            self.below as f64 / n,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaarSummary {
    pub n_samples: usize,
    pub seed: u64,
    pub channel: String,
    pub strict: Tally,
    pub either: Tally,
    /// Samples satisfying both premise orientations.
    pub all_flags: usize,
    /// Of those, how many lie below the noiseless gGHZ line.
    pub ordering_violations: usize,
}

impl HaarSummary {
    pub fn tally(&self, c: PremiseConvention) -> &Tally {
        match c {
            PremiseConvention::Strict => &self.strict,
            PremiseConvention::EitherOrientation => &self.either,
        }
    }

    pub fn from_rows(rows: &[HaarRow], seed: u64, channel: &str) -> Self {
        let mut s = HaarSummary {
            n_samples: rows.len(),
            seed,
            channel: channel.to_string(),
            strict: Tally::default(),
            either: Tally::default(),
            all_flags: 0,
            ordering_violations: 0,
        };
        for r in rows {
            for c in PremiseConvention::ALL {
                let t = match c {
                    PremiseConvention::Strict => &mut s.strict,
                    PremiseConvention::EitherOrientation => &mut s.either,
                };
                if c.holds(&r.flags) && !r.above_noiseless_line {
                    t.premises_violations += 1;
                }
                match (r.above_gghz_line, c.holds(&r.flags)) {
                    (false, _) => t.below += 1,
                    (true, true) => t.premises_above += 1,
                    (true, false) => t.violated_above += 1,
                }
            }
            if r.flags.all() {
                s.all_flags += 1;
                if !r.above_noiseless_line {
                    s.ordering_violations += 1;
                }
            }
        }
        s
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "samples: {}", self.n_samples);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "channel: {}", self.channel);
        for c in PremiseConvention::ALL {
            let [a, b, d] = self.tally(c).fractions();
            let _ = writeln!(
                out,
                "{c}: premises & above line {:.2}% | premises violated & above line {:.2}% | below line {:.2}% | premises but below noiseless line {}",
                100.0 * a,
                100.0 * b,
                100.0 * d,
                self.tally(c).premises_violations
            );
        }
        let _ = writeln!(
            out,
            "all four flags: {} samples, {} below the gGHZ line",
            self.all_flags, self.ordering_violations
        );
        out
    }
}

#[derive(Debug, Clone)]
pub struct HaarOutcome {
    pub rows: Vec<HaarRow>,
    pub summary: HaarSummary,
}

pub const HAAR_HEADER: [&str; 9] = [
    "state_id",
    "ggm",
    "bound_bits",
    "cond_i",
    "cond_ii",
    "swapped_i",
    "swapped_ii",
    "above_gghz_line",
    "argmax_cut",
];

impl HaarOutcome {
    pub fn records(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| {
                vec![
                    r.state_id.to_string(),
                    fmt_float(r.ggm),
                    fmt_float(r.bound_bits),
                    r.flags.cond_i.to_string(),
                    r.flags.cond_ii.to_string(),
                    r.flags.swapped_i.to_string(),
                    r.flags.swapped_ii.to_string(),
                    r.above_gghz_line.to_string(),
                    r.argmax_cut.clone(),
                ]
            })
            .collect()
    }

    pub fn write_csv(&self, out: &Option<PathBuf>) -> Result<()> {
        write_table(out, &HAAR_HEADER, &self.records())
    }
}

/// Bound used for the campaign: the noiseless bound, χ for covariant
/// channels, the noisy bound otherwise.
#[derive(Debug, Clone)]
enum CampaignBound {
    Noiseless,
    Covariant(ChannelSpec<f64>),
    General(ChannelSpec<f64>),
}

impl CampaignBound {
    fn new(spec: &ChannelSpec<f64>, layout: &RegisterLayout) -> Result<Self> {
        if matches!(spec, ChannelSpec::Identity) {
            return Ok(CampaignBound::Noiseless);
        }
        let dev = check_covariance(spec, layout, &pauli_basis(layout.n_senders()))?;
        Ok(if dev <= crate::capacity::COVARIANCE_TOLERANCE {
            CampaignBound::Covariant(*spec)
        } else {
            CampaignBound::General(*spec)
        })
    }

    fn eval(
        &self,
        rho: &DensityOperator<f64>,
        layout: &RegisterLayout,
        opt: &OptConfig,
    ) -> Result<BoundReport<f64>> {
        match self {
            CampaignBound::Noiseless => locc_bound_noiseless(rho, layout),
            CampaignBound::Covariant(s) => covariant_chi_unchecked(rho, s, layout, opt),
            CampaignBound::General(s) => noisy_locc_bound(rho, s, layout, opt),
        }
    }
}

/// One Haar sample: GGM, premises and bound of the `state_id`-th state.
pub fn haar_sample(
    state_id: u64,
    seed: u64,
    bound: &ChannelSpec<f64>,
    line: &GghzLine,
    opt: &OptConfig,
) -> Result<HaarRow> {
    let layout = RegisterLayout::four_qubit();
    let kind = CampaignBound::new(bound, &layout)?;
    haar_row(
        state_id,
        seed,
        &kind,
        line,
        &GghzLine::Shifted { shift: 0.0 },
        &layout,
        opt,
    )
}

fn haar_row(
    state_id: u64,
    seed: u64,
    kind: &CampaignBound,
    line: &GghzLine,
    noiseless_line: &GghzLine,
    layout: &RegisterLayout,
    opt: &OptConfig,
) -> Result<HaarRow> {
    let psi = haar_random_pure::<f64>(4, RngSeed::new(seed, state_id))?;
    let (e, scan) = ggm(&psi)?;
    let flags = theorem2_from_scan(&psi, layout, &scan);
    let rho = psi.density();
    let report = kind.eval(&rho, layout, opt)?;
    let noiseless = match kind {
        CampaignBound::Noiseless => report.bound_bits,
        _ => locc_bound_noiseless(&rho, layout)?.bound_bits,
    };
    Ok(HaarRow {
        state_id,
        ggm: e,
        bound_bits: report.bound_bits,
        flags,
        above_gghz_line: line.is_above(report.bound_bits, e)?,
        argmax_cut: scan.argmax_entry().label(4, Some(layout)),
        above_noiseless_line: noiseless_line.is_above(noiseless, e)?,
    })
}

/// Haar-random four-qubit campaign. Samples use RNG stream `state_id`, so the
/// output does not depend on scheduling.
pub fn haar_experiment(cfg: &ExperimentConfig) -> Result<HaarOutcome> {
    cfg.validate()?;
    let layout = RegisterLayout::four_qubit();
    let kind = CampaignBound::new(&cfg.channel, &layout)?;
    let opt = if matches!(kind, CampaignBound::Noiseless) {
        cfg.opt.clone()
    } else {
        OptConfig {
            parameterization: cfg.opt.parameterization,
            allow_multi_qubit: cfg.opt.allow_multi_qubit,
            ..OptConfig::campaign()
        }
    };
    let line = GghzLine::for_channel(&cfg.channel, &cfg.opt)?;
    let noiseless_line = GghzLine::Shifted { shift: 0.0 };
    let rows = cfg.run_in_pool(|| {
        (0..cfg.n_samples as u64)
            .into_par_iter()
            .map(|id| haar_row(id, cfg.seed, &kind, &line, &noiseless_line, &layout, &opt))
            .collect::<Result<Vec<_>>>()
    })??;
    let summary = HaarSummary::from_rows(&rows, cfg.seed, &cfg.channel.to_string());
    Ok(HaarOutcome { rows, summary })
}

/// Generic CSV table with a summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: String,
}

impl Table {
    pub fn write_csv(&self, out: &Option<PathBuf>) -> Result<()> {
        let header: Vec<&str> = self.header.iter().map(String::as_str).collect();
        write_table(out, &header, &self.rows)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

fn bound_for(
    rho: &DensityOperator<f64>,
    spec: &ChannelSpec<f64>,
    layout: &RegisterLayout,
    opt: &OptConfig,
) -> Result<BoundReport<f64>> {
    if matches!(spec, ChannelSpec::Identity) {
        return locc_bound_noiseless(rho, layout);
    }
    match covariant_chi(rho, spec, layout, opt) {
        Err(Error::Domain(_)) => noisy_locc_bound(rho, spec, layout, opt),
        r => r,
    }
}

/// Bound of gGHZ(m) against its GGM for m sweeping [½, 1].
pub fn gghz_curve(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let layout = RegisterLayout::four_qubit();
    let ms: Vec<f64> = (0..cfg.points)
        .map(|k| 0.5 + 0.5 * k as f64 / (cfg.points - 1) as f64)
        .collect();
    let rows = cfg.run_in_pool(|| {
        ms.par_iter()
            .map(|&m| {
                let psi = make_gghz(GghzParams::new(m, 0.0)?, 4)?;
                let r = bound_for(&psi.density(), &cfg.channel, &layout, &cfg.opt)?;
                Ok(vec![
                    fmt_float(m),
                    fmt_float(1.0 - m),
                    fmt_float(r.bound_bits),
                ])
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(Table {
        header: vec!["m".into(), "ggm".into(), "bound_bits".into()],
        summary: format!(
            "gGHZ curve: {} points, channel {}\n",
            cfg.points, cfg.channel
        ),
        rows,
    })
}

fn random_simplex(seed: u64, id: u64, k: usize) -> Vec<f64> {
    let mut rng = RngSeed::new(seed, id).rng();
    let x: Vec<f64> = (0..k).map(|_| Exp1.sample(&mut rng)).collect();
    let s: f64 = x.iter().sum();
    x.iter().map(|v| v / s).collect()
}

/// Numeric GHZ bound against its closed form over a parameter sweep of the
/// configured channel family.
pub fn channel_scan(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    let n = cfg.points;
    let grid = |k: usize| k as f64 / (n - 1) as f64;
    let specs: Vec<(String, ChannelSpec<f64>)> = match cfg.channel {
        ChannelSpec::Identity => unreachable!("validated"),
        ChannelSpec::AmplitudeDamping { .. } => (0..n)
            .map(|k| {
                Ok((
                    fmt_float(grid(k)),
                    ChannelSpec::amplitude_damping(grid(k), grid(k))?,
                ))
            })
            .collect::<Result<_>>()?,
        ChannelSpec::PhaseDamping { .. } => (0..n)
            .map(|k| {
                Ok((
                    fmt_float(grid(k)),
                    ChannelSpec::phase_damping(grid(k), grid(k))?,
                ))
            })
            .collect::<Result<_>>()?,
        ChannelSpec::Pauli(PauliNoise::Correlated(_)) => (0..n as u64)
            .map(|id| {
                let q = random_simplex(cfg.seed, id, 4);
                let label = q
                    .iter()
                    .map(|x| fmt_float(*x))
                    .collect::<Vec<_>>()
                    .join(";");
                Ok((
                    label,
                    ChannelSpec::correlated_pauli([q[0], q[1], q[2], q[3]])?,
                ))
            })
            .collect::<Result<_>>()?,
        ChannelSpec::Pauli(PauliNoise::General(_)) => (0..n as u64)
            .map(|id| {
                let q = random_simplex(cfg.seed, id, 16);
                let label = q
                    .iter()
                    .map(|x| fmt_float(*x))
                    .collect::<Vec<_>>()
                    .join(";");
                let mut m = [[0.0; 4]; 4];
                for (i, v) in q.iter().enumerate() {
                    m[i / 4][i % 4] = *v;
                }
                Ok((label, ChannelSpec::general_pauli(m)?))
            })
            .collect::<Result<_>>()?,
    };
    let rho = make_ghz::<f64>(4)?.density();
    let layout = RegisterLayout::four_qubit();
    let results = cfg.run_in_pool(|| {
        specs
            .par_iter()
            .map(|(label, spec)| {
                let r = bound_for(&rho, spec, &layout, &cfg.opt)?;
                let closed = ghz_closed_form_bound(spec)?;
                let a = r
                    .minimizer_for(r.which_side)
                    .first()
                    .map(|p| p.a)
                    .unwrap_or(f64::NAN);
                Ok((label.clone(), r.bound_bits, closed, a))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let worst = results
        .iter()
        .map(|(_, b, c, _)| (b - c).abs())
        .fold(0.0, f64::max);
    let rows = results
        .into_iter()
        .map(|(label, b, c, a)| {
            vec![
                label,
                fmt_float(b),
                fmt_float(c),
                fmt_float((b - c).abs()),
                fmt_float(a),
            ]
        })
        .collect();
    Ok(Table {
        header: [
            "param",
            "numeric_bound",
            "closed_form_bound",
            "deviation",
            "minimizer_a",
        ]
        .map(String::from)
        .to_vec(),
        summary: format!(
            "channel scan: family {}, {} points, max deviation {}\n",
            cfg.channel.family(),
            n,
            fmt_float(worst)
        ),
        rows,
    })
}

/// Every capacity quantity of one state as `quantity,value` rows.
pub fn bound_report(cfg: &ExperimentConfig) -> Result<Table> {
    let (psi, layout) = cfg.state.load()?;
    if psi.n_qubits() != layout.n_qubits() {
        return domain("state and role string disagree on the qubit count");
    }
    let rho = psi.density();
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut push = |k: &str, v: String| rows.push((k.to_string(), v));
    push("layout", layout.to_string());
    push("channel", cfg.channel.to_string());
    let g = global_capacity(&rho, &layout)?;
    push("global_capacity", fmt_float(g.value));
    push("classical_threshold", fmt_float(g.classical_threshold));
    let nl = locc_bound_noiseless(&rho, &layout)?;
    push("noiseless_bound", fmt_float(nl.bound_bits));
    if !matches!(cfg.channel, ChannelSpec::Identity) {
        let r = bound_for(&rho, &cfg.channel, &layout, &cfg.opt)?;
        push("noisy_bound", fmt_float(r.bound_bits));
        push("term_s_r1", fmt_float(r.term_s_r1));
        push("term_s_r2", fmt_float(r.term_s_r2));
        push("side_entropy_1", fmt_float(r.side_entropies[0]));
        push("side_entropy_2", fmt_float(r.side_entropies[1]));
        push("which_side", r.which_side.to_string());
        for side in Receiver::BOTH {
            for (i, p) in r.minimizer_for(side).iter().enumerate() {
                let key = format!("minimizer_{side}_{i}");
                push(
                    &key,
                    format!(
                        "{};{};{}",
                        fmt_float(p.a),
                        fmt_float(p.theta1),
                        fmt_float(p.theta2)
                    ),
                );
            }
        }
    }
    let (e, _) = ggm(&psi)?;
    push("ggm", fmt_float(e));
    let summary = rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect();
    Ok(Table {
        header: vec!["quantity".into(), "value".into()],
        rows: rows.into_iter().map(|(k, v)| vec![k, v]).collect(),
        summary,
    })
}

/// GGM scan over all cuts of one state, plus the premise flags for four
/// parties.
pub fn ggm_report(cfg: &ExperimentConfig) -> Result<Table> {
    let (psi, layout) = cfg.state.load()?;
    let (e, scan) = ggm(&psi)?;
    let mut summary = format!(
        "ggm: {}\nargmax cut: {}\n",
        fmt_float(e),
        scan.argmax_entry().label(psi.n_qubits(), Some(&layout))
    );
    if psi.n_qubits() == 4 {
        if let Ok(f) = crate::ggm::theorem2_conditions(&psi, &layout) {
            let _ = writeln!(
                summary,
                "cond_i: {} cond_ii: {} swapped_i: {} swapped_ii: {}",
                f.cond_i, f.cond_ii, f.swapped_i, f.swapped_ii
            );
        }
    }
    let rows = scan
        .entries
        .iter()
        .map(|en| {
            vec![
                en.label(psi.n_qubits(), Some(&layout)),
                fmt_float(en.lambda_sq),
            ]
        })
        .collect();
    Ok(Table {
        header: vec!["cut".into(), "lambda_sq".into()],
        rows,
        summary,
    })
}

/// Runs the configured mode, writes its CSV and returns the summary.
pub fn run(cfg: &ExperimentConfig) -> Result<String> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Haar => {
            let out = haar_experiment(cfg)?;
            out.write_csv(&cfg.out)?;
            Ok(out.summary.render())
        }
        mode => {
            let t = match mode {
                Mode::GghzCurve => gghz_curve(cfg)?,
                Mode::ChannelScan => channel_scan(cfg)?,
                Mode::Bound => bound_report(cfg)?,
                Mode::Ggm => ggm_report(cfg)?,
                Mode::Haar => unreachable!(),
            };
            t.write_csv(&cfg.out)?;
            Ok(format!("seed: {}\n{}", cfg.seed, t.summary))
        }
    }
}
