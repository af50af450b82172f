use clap::{Args, Parser, Subcommand};
use fhwh::config::{ConfigFile, Cx, Experiment, ExperimentConfig, Format, LemmaKind, Side, SymbolKind};
use fhwh::run::assertion_failures;
use fhwh::CliError;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Toeplitz and finite Wiener-Hopf determinants with Fisher-Hartwig symbols.
#[derive(Parser)]
#[command(name = "fhwh", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// G, E and G2 of a symbol
    Constants {
        #[arg(long, value_enum)]
        kind: Option<SymbolKind>,
        #[command(flatten)]
        common: Common,
    },
    /// Borodin-Okounkov identity residuals
    BoCheck {
        #[arg(long, value_enum)]
        side: Option<Side>,
        #[command(flatten)]
        common: Common,
    },
    /// A limit formula against its direct determinant
    LemmaCheck {
        #[arg(long, value_enum)]
        lemma: Option<LemmaKind>,
        #[command(flatten)]
        common: Common,
    },
    /// det2 W_2n / G2^2n against det2 T_n / G2^n
    TheoremSweep {
        #[command(flatten)]
        common: Common,
    },
    /// det W_2n e^{2n alpha} against det T_n for alpha = beta
    CorollarySweep {
        #[command(flatten)]
        common: Common,
    },
    /// Samples of the Wiener-Hopf kernel k(u)
    KernelDump {
        #[arg(long, value_enum)]
        kind: Option<SymbolKind>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// TOML configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file (stdout if absent)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Fail with exit code 1 when a residual exceeds tolerances.residual
    #[arg(long)]
    assert: bool,
    /// Replace alpha by alpha-re + i alpha-im
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    /// Replace beta by beta-re + i beta-im
    #[arg(long, allow_hyphen_values = true)]
    beta_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_im: Option<f64>,
    /// Matrix sizes, comma separated
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Interval lengths R, comma separated
    #[arg(long = "R", value_delimiter = ',')]
    big_r: Option<Vec<f64>>,
    /// Circle radii, comma separated
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<f64>>,
    /// Line regularizations, comma separated
    #[arg(long, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
}

impl Common {
    fn file(&self) -> Result<ConfigFile, CliError> {
        let mut f = match &self.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        if self.alpha_re.is_some() || self.alpha_im.is_some() {
            f.symbol.alpha = Some(Cx { re: self.alpha_re.unwrap_or(0.0), im: self.alpha_im.unwrap_or(0.0) });
        }
        if self.beta_re.is_some() || self.beta_im.is_some() {
            f.symbol.beta = Some(Cx { re: self.beta_re.unwrap_or(0.0), im: self.beta_im.unwrap_or(0.0) });
        }
        if let Some(n) = &self.n {
            f.schedule.n = Some(n.clone());
        }
        if let Some(r) = &self.big_r {
            f.schedule.big_r = Some(r.clone());
        }
        if let Some(r) = &self.r {
            f.symbol.r = Some(r.clone());
        }
        if let Some(e) = &self.eps {
            f.symbol.eps = Some(e.clone());
        }
        if self.format.is_some() {
            f.output.format = self.format;
        }
        if self.output.is_some() {
            f.output.path = self.output.clone();
        }
        Ok(f)
    }
}

fn configure(cmd: &Cmd) -> Result<(ExperimentConfig, bool), CliError> {
    let (exp, common) = match cmd {
        Cmd::Constants { common, .. } => (Experiment::Constants, common),
        Cmd::BoCheck { common, .. } => (Experiment::BoCheck, common),
        Cmd::LemmaCheck { common, .. } => (Experiment::LemmaCheck, common),
        Cmd::TheoremSweep { common } => (Experiment::TheoremSweep, common),
        Cmd::CorollarySweep { common } => (Experiment::CorollarySweep, common),
        Cmd::KernelDump { common, .. } => (Experiment::KernelDump, common),
    };
    let mut file = common.file()?;
    match cmd {
        Cmd::Constants { kind: Some(k), .. } | Cmd::KernelDump { kind: Some(k), .. } => file.symbol.kind = Some(*k),
        Cmd::BoCheck { side: Some(s), .. } => file.side = Some(*s),
        Cmd::LemmaCheck { lemma: Some(l), .. } => file.lemma = Some(*l),
        _ => {}
    }
    Ok((ExperimentConfig::resolve(exp, &file)?, common.assert))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, assert) = match configure(&cli.cmd) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fhwh: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match fhwh::run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fhwh: {e}");
            return ExitCode::from(2);
        }
    };
    let bytes = match report.render(config.output.format) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("fhwh: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &config.output.path {
        Some(p) => std::fs::write(p, &bytes).map_err(|source| CliError::Io { path: p.clone(), source }),
        None => std::io::stdout().write_all(&bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    };
    if let Err(e) = written {
        eprintln!("fhwh: {e}");
        return ExitCode::from(2);
    }
    let mut code = 0;
    for (i, r) in report.rows.iter().enumerate() {
        if let Some(e) = &r.error {
            eprintln!("fhwh: row {i} failed ({}): {}", e.code, e.message);
            code = 1;
        }
    }
    if assert {
        let bad = assertion_failures(&report);
        if !bad.is_empty() {
            eprintln!("fhwh: residual above {:e} in rows {bad:?}", config.tolerances.residual);
            code = 1;
        }
    }
    ExitCode::from(code)
}
