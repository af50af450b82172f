//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//!
//! Tests take a shared lock so that the runtime bounds measure one
//! criterion at a time.

use fhwh_core::constants::{line_constants, log_sech_e_pair, matrix_e_factor, sech_e_pair};
use fhwh_core::fredholm::{nystrom_det, FnKernel};
use fhwh_core::limits::{
    corollary_sweep, lemma4_rhs, lemma5_rhs, lemma6_rhs, theorem_sweep, wh_normalized_direct,
};
use fhwh_core::quadrature::{composite_gauss, Interval, Node};
use fhwh_core::symbols::{matrix_tau_eval, symdet, FhParams, Sign, SymbolSpec};
use fhwh_core::toeplitz::{
    bo_rhs, bo_rhs_reg, relative_residual, toeplitz_det, toeplitz_det2, ExactOracle, ToeplitzInstance,
};
use fhwh_core::wienerhopf::{bowh_rhs, bowh_rhs_reg, wh_det};
use fhwh_core::C64;
use std::f64::consts::PI;
use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

static SERIAL: Mutex<()> = Mutex::new(());

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn report(id: u32, name: &str, ok: bool, detail: String) {
    // straight to the handle so the line survives output capture
    let line = format!("criterion {id:>2} {}: {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {id} failed: {detail}");
}

fn within(t: Instant, limit: u64) -> (bool, Duration) {
    let e = t.elapsed();
    (e < Duration::from_secs(limit), e)
}

#[test]
fn c01_borodin_okounkov_circle() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let pairs = [(0.1, 0.1), (0.3, 0.3), (0.2, -0.1)];
    for r in [0.3, 0.6, 0.9] {
        for &(a, b) in &pairs {
            let spec = SymbolSpec::ToeplitzReg { params: FhParams::real(a, b).unwrap(), r };
            for n in [4, 8, 16] {
                let inst = ToeplitzInstance::new(spec, n).unwrap();
                worst = worst.max(relative_residual(toeplitz_det(&inst).unwrap(), bo_rhs(&inst).unwrap()));
                worst = worst.max(relative_residual(toeplitz_det2(&inst).unwrap(), bo_rhs_reg(&inst).unwrap()));
            }
        }
    }
    let (fast, e) = within(t, 10);
    report(1, "Borodin-Okounkov on the circle", worst < 1e-7 && fast, format!("max residual {worst:.2e} (< 1e-7), {e:.2?} (< 10 s)"));
}

#[test]
fn c02_borodin_okounkov_line() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for eps in [0.2, 0.05] {
        for a in [0.1, 0.3] {
            let spec = SymbolSpec::WhReg { params: FhParams::real(a, a).unwrap(), eps };
            for r in [4.0, 8.0] {
                let d = wh_det(&spec, r, 1e-9).unwrap();
                worst = worst.max(relative_residual(d.log_det, bowh_rhs(&spec, r).unwrap()));
                worst = worst.max(relative_residual(d.log_det2.unwrap(), bowh_rhs_reg(&spec, r).unwrap()));
            }
        }
    }
    let (fast, e) = within(t, 60);
    report(2, "Borodin-Okounkov on the line", worst < 1e-5 && fast, format!("max residual {worst:.2e} (< 1e-5), {e:.2?} (< 60 s)"));
}

#[test]
fn c03_exact_oracle_gate() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let rep = ExactOracle::certify().report();
    report(
        3,
        "closed-form Toeplitz determinant gate",
        rep.passed && rep.max_rel_err < 1e-9 && rep.cases == 54,
        format!("{} cases, max relative error {:.2e} (< 1e-9)", rep.cases, rep.max_rel_err),
    );
}

#[test]
fn c04_lemma4_identity() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let oracle = ExactOracle::certify();
    let mut worst: f64 = 0.0;
    for a in [c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.3), c(-0.2, 0.0)] {
        let p = FhParams::symmetric(a).unwrap();
        for n in [8, 16, 32] {
            let v = lemma4_rhs(a, n, 1e-6 / n as f64).unwrap();
            worst = worst.max((v.log_det - oracle.normalized_det2(&p, n).unwrap()).norm());
        }
    }
    let (fast, e) = within(t, 120);
    report(4, "scalar limit formula for Toeplitz", worst < 1e-4 && fast, format!("max |diff| {worst:.2e} (< 1e-4), {e:.2?} (< 2 min)"));
}

#[test]
fn c05_lemma5_identity() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for a in [c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.3), c(-0.2, 0.0)] {
        let p = FhParams::symmetric(a).unwrap();
        for r in [16.0, 32.0, 64.0] {
            let v = lemma5_rhs(a, r, 1e-6 / r).unwrap();
            let d = wh_normalized_direct(&p, r, 1e-6).unwrap();
            worst = worst.max((v.log_det - d.log_det).norm());
        }
    }
    let (fast, e) = within(t, 300);
    report(5, "scalar limit formula for Wiener-Hopf", worst < 1e-3 && fast, format!("max |diff| {worst:.2e} (< 1e-3), {e:.2?} (< 5 min)"));
}

#[test]
fn c06_lemma6_identity() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let oracle = ExactOracle::certify();
    let n = 32;
    let tol = 1e-6 / n as f64;
    let mut worst: f64 = 0.0;
    for (a, b) in [(c(0.2, 0.0), c(0.1, 0.0)), (c(0.0, 0.3), c(0.0, -0.2))] {
        let p = FhParams::new(a, b).unwrap();
        let v = lemma6_rhs(&p, n, tol).unwrap();
        worst = worst.max((v.log_det - oracle.normalized_det2(&p, n).unwrap()).norm());
    }
    let a = c(0.2, 0.0);
    let block = lemma6_rhs(&FhParams::symmetric(a).unwrap(), n, tol).unwrap();
    let scalar = lemma4_rhs(a, n, tol).unwrap();
    let gap = (block.log_det - scalar.log_det).norm();
    // the constant C(α, α) carries its own quadrature error, pinned by criterion 10
    let budget = block.error_estimate + scalar.error_estimate + 1e-5;
    report(
        6,
        "block limit formula",
        worst < 1e-3 && gap < budget,
        format!("max |diff| {worst:.2e} (< 1e-3), block vs scalar {gap:.2e} (< {budget:.2e})"),
    );
}

#[test]
fn c07_theorem_convergence() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let oracle = ExactOracle::certify();
    let ns = [8, 16, 32, 64];
    let mut ok = true;
    let mut detail = Vec::new();
    for (a, b) in [(c(0.2, 0.0), c(0.2, 0.0)), (c(0.25, 0.0), c(-0.1, 0.0)), (c(0.0, 0.3), c(0.1, 0.0))] {
        let p = FhParams::new(a, b).unwrap();
        let rep = theorem_sweep(&oracle, &p, &ns, 1e-8).unwrap();
        let last = rep.final_residual().unwrap();
        ok &= rep.strictly_decreasing() && last < 0.02;
        let res: Vec<String> = rep.rows.iter().map(|r| format!("{:.2e}", r.residual)).collect();
        detail.push(format!("({a},{b}) [{}]", res.join(" ")));
    }
    report(7, "Toeplitz/Wiener-Hopf ratio tends to 1", ok, detail.join("; "));
}

#[test]
fn c08_corollary_convergence() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let oracle = ExactOracle::certify();
    let mut ok = true;
    let mut detail = Vec::new();
    for a in [0.1, 0.25] {
        let rep = corollary_sweep(&oracle, c(a, 0.0), &[8, 16, 32], 1e-8).unwrap();
        ok &= rep.strictly_decreasing() && rep.final_residual().unwrap() < 0.05;
        let res: Vec<String> = rep.rows.iter().map(|r| format!("{:.2e}", r.residual)).collect();
        detail.push(format!("α={a} [{}]", res.join(" ")));
    }
    report(8, "det W_2n e^{2nα} / det T_n tends to 1", ok, detail.join("; "));
}

#[test]
fn c09_sech_szego() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut ok = true;
    let mut detail = Vec::new();
    for a in [0.2, 0.3] {
        let s = (PI * a).sin();
        let k = line_constants(&SymbolSpec::Sech { sign: Sign::Minus, a: c(a, 0.0) }).unwrap();
        let kp = line_constants(&SymbolSpec::Sech { sign: Sign::Plus, a: c(a, 0.0) }).unwrap();
        ok &= (k.log_g + kp.log_g + a * a).norm() < 1e-10;
        let kernel = FnKernel::new(move |x: &Node, y: &Node| c(s / (2.0 * PI) / (0.5 * (x.x - y.x)).cosh(), 0.0));
        let mut res = Vec::new();
        for l in [10.0, 20.0, 40.0] {
            let rule = composite_gauss(16, (l / 2.0) as usize, Interval::new(0.0, l));
            let d = nystrom_det(&kernel, &rule).unwrap().log_det;
            res.push(relative_residual(d, l * k.log_g + k.log_e.unwrap()));
        }
        ok &= res[2] < 1e-3 && res[2] <= res[0];
        detail.push(format!("α={a} [{:.2e} {:.2e} {:.2e}]", res[0], res[1], res[2]));
    }
    report(9, "Szegő limit for the sech kernel", ok, detail.join("; "));
}

#[test]
fn c10_constant_consistency() {
    let _g = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let mut worst_e: f64 = 0.0;
    for a in [0.1, 0.2] {
        let m = matrix_e_factor(&FhParams::real(a, a).unwrap()).unwrap();
        worst_e = worst_e.max((m - sech_e_pair(c(a, 0.0)).unwrap()).norm());
        assert!(log_sech_e_pair(c(a, 0.0)).unwrap().im.abs() < 1e-12);
    }
    let mut worst_d: f64 = 0.0;
    for (a, b) in [(c(0.2, 0.0), c(0.1, 0.0)), (c(0.0, 0.3), c(0.1, 0.0)), (c(0.25, 0.1), c(-0.3, 0.2))] {
        let p = FhParams::new(a, b).unwrap();
        for k in -40..=40 {
            let xi = 0.1 * k as f64;
            let d = matrix_tau_eval(&p, xi).det();
            worst_d = worst_d.max((d - symdet(&p, xi)).norm());
        }
    }
    report(
        10,
        "matrix and scalar constants agree",
        worst_e < 1e-5 && worst_d < 1e-12,
        format!("E gap {worst_e:.2e} (< 1e-5), det τ gap {worst_d:.2e} (< 1e-12)"),
    );
}
