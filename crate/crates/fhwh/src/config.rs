//! Experiment configuration: a TOML file merged over per-experiment defaults.

use crate::error::CliError;
use clap::ValueEnum;
use fhwh_core::symbols::{FhParams, Sign, SymbolSpec};
use fhwh_core::C64;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// A complex number written as `{ re = .., im = .. }`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cx {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Cx {
    pub fn real(re: f64) -> Self {
        Cx { re, im: 0.0 }
    }
}

impl From<Cx> for C64 {
    fn from(c: Cx) -> C64 {
        C64::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Constants,
    BoCheck,
    LemmaCheck,
    TheoremSweep,
    CorollarySweep,
    KernelDump,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Constants => "constants",
            Experiment::BoCheck => "bo-check",
            Experiment::LemmaCheck => "lemma-check",
            Experiment::TheoremSweep => "theorem-sweep",
            Experiment::CorollarySweep => "corollary-sweep",
            Experiment::KernelDump => "kernel-dump",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Circle,
    Line,
}

/// Which limit formula `lemma-check` compares against its direct value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    /// scalar kernels against `det₂ T_n`, `α = β`
    Lemma4,
    /// scalar kernels against `det₂ W_R`, `α = β`
    Lemma5,
    /// block kernels against `det₂ T_n`
    Lemma6,
    /// block kernels against `det₂ W_R`
    WhGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SymbolKind {
    ToeplitzPure,
    ToeplitzReg,
    WhPure,
    WhReg,
    SechPlus,
    SechMinus,
    MatrixTau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    pub kind: SymbolKind,
    pub alpha: Cx,
    pub beta: Cx,
    /// circle radii for regularized Toeplitz symbols
    pub r: Vec<f64>,
    /// ε values for regularized Wiener-Hopf symbols
    pub eps: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub n: Vec<usize>,
    #[serde(rename = "R")]
    pub big_r: Vec<f64>,
    /// kernel-dump grid half-width and sample count
    pub u_max: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// limit-formula refinement tolerance, divided by `n` (or `R/2`)
    pub quadrature: f64,
    /// refinement tolerance of the direct `(0, R)` Nyström determinants
    pub nystrom: f64,
    /// residual bound enforced under `--assert`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

/// Fully resolved configuration, echoed in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub side: Side,
    pub lemma: LemmaKind,
    pub symbol: SymbolConfig,
    pub schedule: Schedule,
    pub tolerances: Tolerances,
    pub output: OutputConfig,
}

/// The file form: every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: Option<Experiment>,
    pub side: Option<Side>,
    pub lemma: Option<LemmaKind>,
    #[serde(default)]
    pub symbol: SymbolFile,
    #[serde(default)]
    pub schedule: ScheduleFile,
    #[serde(default)]
    pub tolerances: TolerancesFile,
    #[serde(default)]
    pub output: OutputFile,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolFile {
    pub kind: Option<SymbolKind>,
    pub alpha: Option<Cx>,
    pub beta: Option<Cx>,
    pub r: Option<Vec<f64>>,
    pub eps: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub n: Option<Vec<usize>>,
    #[serde(rename = "R")]
    pub big_r: Option<Vec<f64>>,
    pub u_max: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesFile {
    pub quadrature: Option<f64>,
    pub nystrom: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputFile {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }
}

impl ExperimentConfig {
    /// Defaults for each experiment, matching the acceptance suite.
    pub fn defaults(experiment: Experiment) -> Self {
        let (kind, a, b, n, big_r, residual) = match experiment {
            Experiment::Constants => (SymbolKind::WhReg, 0.2, 0.2, vec![], vec![], 0.0),
            Experiment::BoCheck => (SymbolKind::ToeplitzReg, 0.3, 0.3, vec![4, 8, 16], vec![4.0, 8.0], 1e-7),
            Experiment::LemmaCheck => (SymbolKind::ToeplitzPure, 0.2, 0.2, vec![8, 16, 32], vec![16.0, 32.0, 64.0], 1e-4),
            Experiment::TheoremSweep => (SymbolKind::WhPure, 0.2, 0.2, vec![8, 16, 32, 64], vec![], 0.02),
            Experiment::CorollarySweep => (SymbolKind::WhPure, 0.25, 0.25, vec![8, 16, 32], vec![], 0.05),
            Experiment::KernelDump => (SymbolKind::WhReg, 0.3, 0.1, vec![], vec![], 0.0),
        };
        ExperimentConfig {
            experiment,
            side: Side::Circle,
            lemma: LemmaKind::Lemma4,
            symbol: SymbolConfig { kind, alpha: Cx::real(a), beta: Cx::real(b), r: vec![0.5], eps: vec![0.1] },
            schedule: Schedule { n, big_r, u_max: 5.0, samples: 101 },
            tolerances: Tolerances { quadrature: 1e-6, nystrom: 1e-6, residual },
            output: OutputConfig::default(),
        }
    }

    /// Defaults overlaid with a config file.
    pub fn resolve(experiment: Experiment, file: &ConfigFile) -> Result<Self, CliError> {
        if let Some(e) = file.experiment {
            if e != experiment {
                return Err(CliError::Config(format!(
                    "config file is for {} but {} was requested",
                    e.name(),
                    experiment.name()
                )));
            }
        }
        let mut c = Self::defaults(experiment);
        if let Some(s) = file.side {
            c.side = s;
        }
        if let Some(l) = file.lemma {
            c.lemma = l;
        }
        let s = &file.symbol;
        if let Some(k) = s.kind {
            c.symbol.kind = k;
        }
        if let Some(a) = s.alpha {
            c.symbol.alpha = a;
            // a lone alpha means the symmetric case
            if s.beta.is_none() {
                c.symbol.beta = a;
            }
        }
        if let Some(b) = s.beta {
            c.symbol.beta = b;
        }
        if let Some(r) = &s.r {
            c.symbol.r = r.clone();
        }
        if let Some(e) = &s.eps {
            c.symbol.eps = e.clone();
        }
        let s = &file.schedule;
        if let Some(n) = &s.n {
            c.schedule.n = n.clone();
        }
        if let Some(r) = &s.big_r {
            c.schedule.big_r = r.clone();
        }
        if let Some(u) = s.u_max {
            c.schedule.u_max = u;
        }
        if let Some(k) = s.samples {
            c.schedule.samples = k;
        }
        let t = &file.tolerances;
        if let Some(v) = t.quadrature {
            c.tolerances.quadrature = v;
        }
        if let Some(v) = t.nystrom {
            c.tolerances.nystrom = v;
        }
        if let Some(v) = t.residual {
            c.tolerances.residual = v;
        }
        if let Some(f) = file.output.format {
            c.output.format = f;
        }
        if let Some(p) = &file.output.path {
            c.output.path = Some(p.clone());
        }
        Ok(c)
    }

    pub fn params(&self) -> Result<FhParams, CliError> {
        FhParams::new(self.symbol.alpha.into(), self.symbol.beta.into()).map_err(|e| {
            CliError::Config(format!(
                "{e}; the theorem hypothesis requires |Re(alpha + beta)| < 1 (and |Re(alpha - beta)| < 1 for the limit kernels)"
            ))
        })
    }

    /// Symbols described by the `symbol` table, one per `r` or `ε` value.
    pub fn symbols(&self) -> Result<Vec<(f64, SymbolSpec)>, CliError> {
        let a: C64 = self.symbol.alpha.into();
        let out = match self.symbol.kind {
            SymbolKind::ToeplitzPure => vec![(f64::NAN, SymbolSpec::ToeplitzPure(self.params()?))],
            SymbolKind::WhPure => vec![(f64::NAN, SymbolSpec::WhPure(self.params()?))],
            SymbolKind::MatrixTau => vec![(f64::NAN, SymbolSpec::MatrixTau(self.params()?))],
            SymbolKind::ToeplitzReg => {
                let p = self.params()?;
                self.symbol.r.iter().map(|&r| (r, SymbolSpec::ToeplitzReg { params: p, r })).collect()
            }
            SymbolKind::WhReg => {
                let p = self.params()?;
                self.symbol.eps.iter().map(|&eps| (eps, SymbolSpec::WhReg { params: p, eps })).collect()
            }
            SymbolKind::SechPlus => vec![(f64::NAN, SymbolSpec::Sech { sign: Sign::Plus, a })],
            SymbolKind::SechMinus => vec![(f64::NAN, SymbolSpec::Sech { sign: Sign::Minus, a })],
        };
        for (_, s) in &out {
            s.validate().map_err(|e| CliError::Config(e.to_string()))?;
        }
        Ok(out)
    }

    /// Checks every precondition before any computation starts.
    pub fn preflight(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        let t = &self.tolerances;
        if !(t.quadrature > 0.0 && t.nystrom > 0.0 && t.residual >= 0.0) {
            return bad("tolerances must be positive");
        }
        let sym = self.symbol.alpha == self.symbol.beta;
        match self.experiment {
            Experiment::Constants => {
                self.symbols()?;
            }
            Experiment::KernelDump => {
                if !matches!(self.symbol.kind, SymbolKind::WhPure | SymbolKind::WhReg) {
                    return bad("kernel-dump needs symbol.kind = wh-pure or wh-reg");
                }
                if self.schedule.u_max.is_nan() || self.schedule.u_max <= 0.0 || self.schedule.samples < 2 {
                    return bad("kernel-dump needs u_max > 0 and at least 2 samples");
                }
                self.symbols()?;
            }
            Experiment::BoCheck => {
                let p = self.params()?;
                match self.side {
                    Side::Circle => {
                        if self.schedule.n.is_empty() || self.symbol.r.is_empty() {
                            return bad("bo-check on the circle needs non-empty schedule.n and symbol.r");
                        }
                        for &r in &self.symbol.r {
                            SymbolSpec::ToeplitzReg { params: p, r }.validate().map_err(|e| CliError::Config(e.to_string()))?;
                        }
                    }
                    Side::Line => {
                        if !sym {
                            return bad("bo-check on the line needs alpha = beta");
                        }
                        if self.schedule.big_r.is_empty() || self.symbol.eps.is_empty() {
                            return bad("bo-check on the line needs non-empty schedule.R and symbol.eps");
                        }
                        for &eps in &self.symbol.eps {
                            SymbolSpec::WhReg { params: p, eps }.validate().map_err(|e| CliError::Config(e.to_string()))?;
                        }
                        if self.schedule.big_r.iter().any(|&r| r.is_nan() || r <= 0.0) {
                            return bad("R values must be positive");
                        }
                    }
                }
            }
            Experiment::LemmaCheck => {
                let p = self.params()?;
                let (a, b) = (p.alpha.re, p.beta.re);
                match self.lemma {
                    LemmaKind::Lemma4 | LemmaKind::Lemma5 => {
                        if !sym || a.abs() >= 0.5 {
                            return bad("scalar limit formulas need alpha = beta with |Re alpha| < 1/2");
                        }
                    }
                    LemmaKind::Lemma6 | LemmaKind::WhGeneral => {
                        if a >= 0.5 || b >= 0.5 {
                            return bad("block limit formulas need Re alpha, Re beta < 1/2");
                        }
                        if self.lemma == LemmaKind::WhGeneral && (a <= -0.5 || b <= -0.5) {
                            return bad("the Wiener-Hopf block formula needs Re alpha, Re beta > -1/2");
                        }
                    }
                }
                let by_r = matches!(self.lemma, LemmaKind::Lemma5 | LemmaKind::WhGeneral);
                if by_r && (self.schedule.big_r.is_empty() || self.schedule.big_r.iter().any(|&r| r.is_nan() || r <= 0.0)) {
                    return bad("this lemma-check needs a non-empty schedule.R of positive values");
                }
                if !by_r && (self.schedule.n.is_empty() || self.schedule.n.contains(&0)) {
                    return bad("this lemma-check needs a non-empty schedule.n of positive values");
                }
            }
            Experiment::TheoremSweep | Experiment::CorollarySweep => {
                let p = self.params()?;
                if self.schedule.n.is_empty() || self.schedule.n.contains(&0) {
                    return bad("the sweep needs a non-empty schedule.n of positive values");
                }
                let (a, b) = (p.alpha.re, p.beta.re);
                if self.experiment == Experiment::CorollarySweep && (!sym || a.abs() >= 0.5) {
                    return bad("corollary-sweep needs alpha = beta with |Re alpha| < 1/2");
                }
                if a.abs() >= 0.5 || b.abs() >= 0.5 {
                    return bad("the limit formulas used by the sweep need |Re alpha|, |Re beta| < 1/2");
                }
            }
        }
        Ok(())
    }
}
