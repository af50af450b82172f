//! Experiment drivers. Rows are computed in parallel and assembled in
//! schedule order; a failing row is recorded and the sweep continues.

use crate::config::{Experiment, ExperimentConfig, LemmaKind, Side};
use crate::error::CliError;
use crate::report::{ReportFile, Row};
use fhwh_core::constants::{circle_constants, line_constants};
use fhwh_core::limits::{
    corollary_check, lemma4_rhs, lemma5_rhs, lemma6_rhs, theorem_ratio, wh_general_rhs, wh_normalized_direct,
    ConvergenceRow,
};
use fhwh_core::symbols::SymbolSpec;
use fhwh_core::toeplitz::{bo_rhs, bo_rhs_reg, relative_residual, toeplitz_det, toeplitz_det2, ExactOracle, ToeplitzInstance};
use fhwh_core::wienerhopf::{bowh_rhs, bowh_rhs_reg, wh_det, WhKernel};
use fhwh_core::C64;
use rayon::prelude::*;

pub const SWEEP_COLUMNS: [&str; 9] =
    ["n", "R", "lhs_log_re", "lhs_log_im", "rhs_log_re", "rhs_log_im", "ratio_abs", "residual", "err_est"];

pub const CONSTANTS_COLUMNS: [&str; 13] = [
    "param", "log_g_re", "log_g_im", "log_e_re", "log_e_im", "log_g2_re", "log_g2_im", "g_re", "g_im", "e_re", "e_im",
    "g2_re", "g2_im",
];

pub const BO_COLUMNS: [&str; 12] = [
    "param", "size", "det_log_re", "det_log_im", "rhs_log_re", "rhs_log_im", "residual", "det2_log_re", "det2_log_im",
    "rhs2_log_re", "rhs2_log_im", "residual2",
];

pub const LEMMA_COLUMNS: [&str; 9] =
    ["n", "R", "formula_log_re", "formula_log_im", "direct_log_re", "direct_log_im", "diff", "err_est", "direct_err_est"];

pub const KERNEL_COLUMNS: [&str; 3] = ["u", "k_re", "k_im"];

/// Runs the configured experiment. Only configuration errors abort.
pub fn run(config: &ExperimentConfig) -> Result<ReportFile, CliError> {
    config.preflight()?;
    let report = match config.experiment {
        Experiment::Constants => constants(config)?,
        Experiment::BoCheck => bo_check(config)?,
        Experiment::LemmaCheck => lemma_check(config)?,
        Experiment::TheoremSweep | Experiment::CorollarySweep => sweep(config)?,
        Experiment::KernelDump => kernel_dump(config)?,
    };
    Ok(report)
}

fn parallel_rows<T: Sync, F>(items: &[T], f: F) -> Vec<Row>
where
    F: Fn(&T) -> Row + Sync + Send,
{
    items.par_iter().map(f).collect()
}

fn constants(config: &ExperimentConfig) -> Result<ReportFile, CliError> {
    let mut rep = ReportFile::new(config.clone(), &CONSTANTS_COLUMNS);
    let symbols = config.symbols()?;
    rep.rows = parallel_rows(&symbols, |&(param, spec)| {
        let k = if spec.is_circle() { circle_constants(&spec) } else { line_constants(&spec) };
        match k {
            Ok(k) => {
                let e = k.log_e.unwrap_or(C64::new(f64::NAN, f64::NAN));
                let (g, ee, g2) = (k.log_g.exp(), e.exp(), k.log_g2.exp());
                Row::ok(vec![
                    param, k.log_g.re, k.log_g.im, e.re, e.im, k.log_g2.re, k.log_g2.im, g.re, g.im, ee.re, ee.im,
                    g2.re, g2.im,
                ])
            }
            Err(err) => Row::failed(vec![param], CONSTANTS_COLUMNS.len(), &err),
        }
    });
    if let Some((_, spec)) = symbols.first() {
        if let Ok(k) = if spec.is_circle() { circle_constants(spec) } else { line_constants(spec) } {
            rep.notes.push(format!("G: {}", k.notes.g));
            rep.notes.push(format!("E: {}", k.notes.e));
            rep.notes.push(format!("G2: {}", k.notes.g2));
        }
    }
    Ok(rep)
}

fn bo_row(param: f64, size: f64, det: C64, rhs: C64, det2: C64, rhs2: C64) -> Row {
    Row::ok(vec![
        param,
        size,
        det.re,
        det.im,
        rhs.re,
        rhs.im,
        relative_residual(det, rhs),
        det2.re,
        det2.im,
        rhs2.re,
        rhs2.im,
        relative_residual(det2, rhs2),
    ])
}

fn bo_check(config: &ExperimentConfig) -> Result<ReportFile, CliError> {
    let mut rep = ReportFile::new(config.clone(), &BO_COLUMNS);
    let p = config.params()?;
    match config.side {
        Side::Circle => {
            rep.notes.push("param = r, size = n".into());
            let jobs: Vec<(f64, usize)> =
                config.symbol.r.iter().flat_map(|&r| config.schedule.n.iter().map(move |&n| (r, n))).collect();
            rep.rows = parallel_rows(&jobs, |&(r, n)| {
                let go = || -> fhwh_core::Result<Row> {
                    let inst = ToeplitzInstance::new(SymbolSpec::ToeplitzReg { params: p, r }, n)?;
                    Ok(bo_row(r, n as f64, toeplitz_det(&inst)?, bo_rhs(&inst)?, toeplitz_det2(&inst)?, bo_rhs_reg(&inst)?))
                };
                go().unwrap_or_else(|e| Row::failed(vec![r, n as f64], BO_COLUMNS.len(), &e))
            });
        }
        Side::Line => {
            rep.notes.push("param = eps, size = R".into());
            let jobs: Vec<(f64, f64)> =
                config.symbol.eps.iter().flat_map(|&e| config.schedule.big_r.iter().map(move |&r| (e, r))).collect();
            let tol = config.tolerances.nystrom;
            rep.rows = parallel_rows(&jobs, |&(eps, r)| {
                let go = || -> fhwh_core::Result<Row> {
                    let spec = SymbolSpec::WhReg { params: p, eps };
                    let d = wh_det(&spec, r, tol)?;
                    Ok(bo_row(eps, r, d.log_det, bowh_rhs(&spec, r)?, d.log_det2.unwrap(), bowh_rhs_reg(&spec, r)?))
                };
                go().unwrap_or_else(|e| Row::failed(vec![eps, r], BO_COLUMNS.len(), &e))
            });
        }
    }
    Ok(rep)
}

fn lemma_check(config: &ExperimentConfig) -> Result<ReportFile, CliError> {
    let mut rep = ReportFile::new(config.clone(), &LEMMA_COLUMNS);
    let p = config.params()?;
    let q = config.tolerances.quadrature;
    let ny = config.tolerances.nystrom;
    let oracle = ExactOracle::certify();
    let by_r = matches!(config.lemma, LemmaKind::Lemma5 | LemmaKind::WhGeneral);
    let jobs: Vec<f64> = if by_r {
        config.schedule.big_r.clone()
    } else {
        config.schedule.n.iter().map(|&n| n as f64).collect()
    };
    rep.rows = parallel_rows(&jobs, |&x| {
        let (n, r) = if by_r { (f64::NAN, x) } else { (x, f64::NAN) };
        let go = || -> fhwh_core::Result<Row> {
            let (formula, direct, direct_err) = match config.lemma {
                LemmaKind::Lemma4 => {
                    let n = x as usize;
                    (lemma4_rhs(p.alpha, n, q / x)?, oracle.normalized_det2(&p, n)?, 0.0)
                }
                LemmaKind::Lemma6 => {
                    let n = x as usize;
                    (lemma6_rhs(&p, n, q / x)?, oracle.normalized_det2(&p, n)?, 0.0)
                }
                LemmaKind::Lemma5 | LemmaKind::WhGeneral => {
                    let f = if config.lemma == LemmaKind::Lemma5 {
                        lemma5_rhs(p.alpha, x, 2.0 * q / x)?
                    } else {
                        wh_general_rhs(&p, x, 2.0 * q / x)?
                    };
                    let d = wh_normalized_direct(&p, x, ny)?;
                    (f, d.log_det, d.error_estimate)
                }
            };
            let v = formula.log_det;
            Ok(Row::ok(vec![
                n,
                r,
                v.re,
                v.im,
                direct.re,
                direct.im,
                fhwh_core::log_distance(v, direct),
                formula.error_estimate,
                direct_err,
            ]))
        };
        go().unwrap_or_else(|e| Row::failed(vec![n, r], LEMMA_COLUMNS.len(), &e))
    });
    Ok(rep)
}

fn sweep_row(r: &ConvergenceRow) -> Row {
    Row::ok(vec![
        r.n as f64,
        r.r,
        r.lhs_log.re,
        r.lhs_log.im,
        r.rhs_log.re,
        r.rhs_log.im,
        r.ratio.norm(),
        r.residual,
        r.error_estimate,
    ])
}

fn sweep(config: &ExperimentConfig) -> Result<ReportFile, CliError> {
    let mut rep = ReportFile::new(config.clone(), &SWEEP_COLUMNS);
    let p = config.params()?;
    let q = config.tolerances.quadrature;
    let oracle = ExactOracle::certify();
    let corollary = config.experiment == Experiment::CorollarySweep;
    rep.rows = parallel_rows(&config.schedule.n, |&n| {
        let tol = q / n as f64;
        let row = if corollary { corollary_check(&oracle, p.alpha, n, tol) } else { theorem_ratio(&oracle, &p, n, tol) };
        match row {
            Ok(r) => sweep_row(&r),
            Err(e) => Row::failed(vec![n as f64, 2.0 * n as f64], SWEEP_COLUMNS.len(), &e),
        }
    });
    rep.notes.push(if corollary {
        "lhs = log det W_R + R alpha, rhs = log det T_n, R = 2n".into()
    } else {
        "lhs = log det2 W_R - R log G2, rhs = log det2 T_n - n log G2, R = 2n".into()
    });
    Ok(rep)
}

fn kernel_dump(config: &ExperimentConfig) -> Result<ReportFile, CliError> {
    let mut rep = ReportFile::new(config.clone(), &KERNEL_COLUMNS);
    let mut rows = Vec::new();
    for (param, spec) in config.symbols()? {
        let table = match WhKernel::new(&spec) {
            Ok(k) => k.table(config.schedule.u_max, config.schedule.samples),
            Err(e) => {
                rows.push(Row::failed(vec![], KERNEL_COLUMNS.len(), &e));
                continue;
            }
        };
        let label = if param.is_nan() { String::new() } else { format!("eps = {param}: ") };
        rep.notes.push(format!(
            "{label}k(0+) = {:e} {:+e}i, k(0-) = {:e} {:+e}i",
            table.zero_plus.re, table.zero_plus.im, table.zero_minus.re, table.zero_minus.im
        ));
        if let SymbolSpec::WhPure(p) = spec {
            rep.notes.push(format!("{label}|k(u)| ~ |u|^{:e} as |u| -> inf", -1.0 - (p.alpha + p.beta).re));
        }
        for (u, k) in table.grid.iter().zip(&table.values) {
            rows.push(Row::ok(vec![*u, k.re, k.im]));
        }
    }
    rep.rows = rows;
    Ok(rep)
}

/// Rows whose residual-type column exceeds the configured bound.
pub fn assertion_failures(report: &ReportFile) -> Vec<usize> {
    let bound = report.config.tolerances.residual;
    let names: &[&str] = match report.config.experiment {
        Experiment::TheoremSweep | Experiment::CorollarySweep => &["residual"],
        Experiment::BoCheck => &["residual", "residual2"],
        Experiment::LemmaCheck => &["diff"],
        Experiment::Constants | Experiment::KernelDump => &[],
    };
    let mut bad = Vec::new();
    for name in names {
        if let Some(col) = report.column(name) {
            for (i, v) in col.iter().enumerate() {
                if !matches!(v, Some(x) if *x <= bound) && !bad.contains(&i) {
                    bad.push(i);
                }
            }
        }
    }
    bad.sort_unstable();
    bad
}
