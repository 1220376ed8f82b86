use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use densecode::experiment::{parse_config, run, ExperimentConfig, Mode};
use densecode::{Error, Parameterization};

/// LOCC dense-coding capacity bounds and GGM campaigns.
#[derive(Debug, Parser)]
#[command(name = "densecode", version)]
struct Cli {
    /// haar | gghz-curve | channel-scan | bound | ggm (may come from --config)
    mode: Option<String>,
    /// Number of Haar samples.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// none | ad:<g1>,<g2> | pd:<p1>,<p2> | pauli:<q0>,..,<q3> | pauli-gen:<16 values>
    #[arg(long)]
    channel: Option<String>,
    /// ghz | gghz:<p>,<phi> | path to a state file
    #[arg(long)]
    state: Option<String>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Points of a curve or scan.
    #[arg(long)]
    points: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// key=value file with the same keys as the long flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Search encoding phases over [0, 2π] instead of [0, π/2].
    #[arg(long)]
    full_circle: bool,
    /// Optimize over product unitaries on multi-qubit sender groups.
    #[arg(long)]
    multi_qubit: bool,
}

fn build_config(cli: &Cli) -> densecode::Result<ExperimentConfig> {
    let file = match &cli.config {
        Some(p) => parse_config(&std::fs::read_to_string(p)?)?,
        None => Default::default(),
    };
    let mode = match (&cli.mode, file.get("mode")) {
        (Some(m), _) => m.parse::<Mode>()?,
        (None, Some(m)) => m.parse::<Mode>()?,
        (None, None) => {
            return Err(Error::Spec {
                input: String::new(),
                msg: "a mode is required".into(),
            })
        }
    };
    let mut cfg = ExperimentConfig::new(mode);
    for (k, v) in &file {
        if k != "mode" {
            cfg.apply(k, v)?;
        }
    }
    let flags: [(&str, Option<String>); 7] = [
        ("n", cli.n.map(|x| x.to_string())),
        ("seed", cli.seed.map(|x| x.to_string())),
        ("channel", cli.channel.clone()),
        ("state", cli.state.clone()),
        ("out", cli.out.as_ref().map(|p| p.display().to_string())),
        ("points", cli.points.map(|x| x.to_string())),
        ("jobs", cli.jobs.map(|x| x.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.apply(k, &v)?;
        }
    }
    if cli.full_circle {
        cfg.opt.parameterization = Parameterization::FullCircle;
    }
    cfg.opt.allow_multi_qubit = cli.multi_qubit;
    cfg.validate()?;
    Ok(cfg)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Spec { .. } | Error::Parse { .. } | Error::Domain(_) => 2,
        Error::Numeric(_) => 3,
        Error::Io(_) | Error::Csv(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = build_config(&cli).and_then(|cfg| {
        let summary = run(&cfg)?;
        // Keep stdout clean for CSV when no output file is given.
        if cfg.out.is_some() {
            print!("{summary}");
        } else {
            eprint!("{summary}");
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("densecode: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
