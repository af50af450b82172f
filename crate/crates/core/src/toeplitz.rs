//! Toeplitz matrices `T_n(φ) = (φ_{j-k})`, their determinants, the circle
//! Borodin-Okounkov right-hand side and the exact product formula for the
//! pure Fisher-Hartwig symbol.

use crate::constants::circle_constants;
use crate::error::{Error, Result};
use crate::linalg::{lu_logdet, ComplexMatrix};
use crate::special::ln_gamma;
use crate::symbols::{circle_fourier_coeffs, quotient_coeffs, FhParams, FourierData, SymbolSpec};
use crate::C64;
use alloc::vec::Vec;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `T_n(φ)` with its coefficient table.
#[derive(Debug, Clone)]
pub struct ToeplitzInstance {
    spec: SymbolSpec,
    n: usize,
    coeffs: FourierData,
}

impl ToeplitzInstance {
    pub fn new(spec: SymbolSpec, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !spec.is_circle() {
            return Err(Error::WrongVariant("Toeplitz matrices need a circle symbol"));
        }
        let m = n as i64 - 1;
        let coeffs = circle_fourier_coeffs(&spec, -m, m)?;
        Ok(ToeplitzInstance { spec, n, coeffs })
    }

    pub fn spec(&self) -> &SymbolSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &FourierData {
        &self.coeffs
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.n, self.n, |j, k| self.coeffs.get(j as i64 - k as i64))
    }
}

/// `log det T_n(φ)` by LU.
pub fn toeplitz_det(inst: &ToeplitzInstance) -> Result<C64> {
    lu_logdet(&inst.matrix())
}

/// `log det₂ T_n(φ) = log det T_n(φ) - n(φ_0 - 1)`.
pub fn toeplitz_det2(inst: &ToeplitzInstance) -> Result<C64> {
    Ok(toeplitz_det(inst)? - inst.n as f64 * (inst.coeffs.get(0) - 1.0))
}

/// Candidate closed form for the pure symbol,
/// `Σ_{j=1}^n [lnΓ(j) + lnΓ(j+α+β) - lnΓ(j+α) - lnΓ(j+β)]`.
///
/// Not ground truth on its own; see [`ExactOracle`].
pub fn exact_fh_det(p: &FhParams, n: usize) -> Result<C64> {
    let mut acc = C64::new(0.0, 0.0);
    for j in 1..=n {
        let j = C64::new(j as f64, 0.0);
        acc += (ln_gamma(j)? - ln_gamma(j + p.alpha)?) + (ln_gamma(j + p.alpha + p.beta)? - ln_gamma(j + p.beta)?);
    }
    Ok(crate::wrap_log(acc))
}

/// Parameter grid of the oracle gate.
pub fn gate_grid() -> [FhParams; 9] {
    let c = C64::new;
    let pairs = [
        (c(-0.3, 0.0), c(0.0, 0.0)),
        (c(-0.3, 0.0), c(0.2, 0.0)),
        (c(0.0, 0.0), c(0.2, 0.0)),
        (c(0.2, 0.0), c(0.2, 0.0)),
        (c(0.2, 0.0), c(-0.3, 0.0)),
        (c(0.0, 0.3), c(0.0, 0.0)),
        (c(0.0, 0.3), c(0.2, 0.0)),
        (c(-0.3, 0.0), c(0.0, 0.3)),
        (c(0.0, 0.3), c(0.0, 0.3)),
    ];
    pairs.map(|(a, b)| FhParams { alpha: a, beta: b })
}

/// Result of comparing the closed form with LU determinants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateReport {
    pub passed: bool,
    pub max_rel_err: f64,
    pub cases: usize,
}

pub const GATE_TOL: f64 = 1e-9;

/// Pure-symbol determinants: the closed form once it has passed its gate,
/// direct LU otherwise.
#[derive(Debug, Clone, Copy)]
pub struct ExactOracle {
    report: GateReport,
}

impl ExactOracle {
    /// Runs the gate: `n <= 6` over [`gate_grid`].
    pub fn certify() -> Self {
        let mut worst = 0.0f64;
        let mut cases = 0;
        let mut ok = true;
        for p in gate_grid() {
            for n in 1..=6 {
                cases += 1;
                let direct = ToeplitzInstance::new(SymbolSpec::ToeplitzPure(p), n).and_then(|t| toeplitz_det(&t));
                let closed = exact_fh_det(&p, n);
                match (direct, closed) {
                    (Ok(d), Ok(c)) => {
                        let e = (crate::wrap_log(c - d).exp() - ONE).norm();
                        worst = worst.max(e);
                    }
                    _ => ok = false,
                }
            }
        }
        ExactOracle { report: GateReport { passed: ok && worst < GATE_TOL, max_rel_err: worst, cases } }
    }

    pub fn report(&self) -> GateReport {
        self.report
    }

    /// `log det T_n(φ_{α,β})`.
    pub fn log_det(&self, p: &FhParams, n: usize) -> Result<C64> {
        p.check_strip()?;
        if self.report.passed {
            exact_fh_det(p, n)
        } else {
            toeplitz_det(&ToeplitzInstance::new(SymbolSpec::ToeplitzPure(*p), n)?)
        }
    }

    /// `log det₂ T_n - n log G₂ = log det T_n` for the pure symbol, since
    /// `(log φ)_0 = 0` makes `log G₂ = 1 - φ_0`.
    pub fn normalized_det2(&self, p: &FhParams, n: usize) -> Result<C64> {
        let spec = SymbolSpec::ToeplitzPure(*p);
        let phi0 = circle_fourier_coeffs(&spec, 0, 0)?.get(0);
        let g2 = circle_constants(&spec)?.log_g2;
        let det = self.log_det(p, n)?;
        Ok(det - n as f64 * (phi0 - 1.0) - n as f64 * g2)
    }
}

/// Largest K_n dimension before giving up.
pub const KN_BUDGET: usize = 6000;

/// `K_n(i, j) = Σ_k (φ⁻/φ⁺)_{n+i+k+1} (φ⁺/φ⁻)_{-n-j-k-1}` on a square
/// truncation chosen from the geometric decay `r^{i+j+2k}`.
pub fn kn_matrix(spec: &SymbolSpec, n: usize) -> Result<ComplexMatrix> {
    let SymbolSpec::ToeplitzReg { r, .. } = *spec else {
        return Err(Error::WrongVariant("K_n needs ToeplitzReg"));
    };
    let dim = ((1e-17f64).ln() / r.ln()).ceil() as usize + 12;
    if dim > KN_BUDGET {
        return Err(Error::TruncationBudget { budget: KN_BUDGET, tol: 1e-17 });
    }
    let top = (n + 2 * dim + 2) as i64;
    let (q1, q2) = quotient_coeffs(spec, -top, top)?;
    let a = ComplexMatrix::from_fn(dim, dim, |i, k| q1.get((n + i + k + 1) as i64));
    let b = ComplexMatrix::from_fn(dim, dim, |k, j| q2.get(-((n + j + k + 1) as i64)));
    a.matmul(&b)
}

fn bo_parts(inst: &ToeplitzInstance) -> Result<(crate::constants::LimitConstants, C64)> {
    if !matches!(inst.spec, SymbolSpec::ToeplitzReg { .. }) {
        return Err(Error::WrongVariant("Borodin-Okounkov needs ToeplitzReg"));
    }
    let k = circle_constants(&inst.spec)?;
    let kn = kn_matrix(&inst.spec, inst.n)?;
    let det = lu_logdet(&kn.identity_minus(ONE))?;
    Ok((k, det))
}

/// `log[G^n E det(I - K_n)]`.
pub fn bo_rhs(inst: &ToeplitzInstance) -> Result<C64> {
    let (k, det) = bo_parts(inst)?;
    Ok(inst.n as f64 * k.log_g + k.log_e.ok_or(Error::DivergentE)? + det)
}

/// `log[G₂^n E det(I - K_n)]`.
pub fn bo_rhs_reg(inst: &ToeplitzInstance) -> Result<C64> {
    let (k, det) = bo_parts(inst)?;
    Ok(inst.n as f64 * k.log_g2 + k.log_e.ok_or(Error::DivergentE)? + det)
}

/// Relative residual `|exp(a - b) - 1|` of two log values.
pub fn relative_residual(a: C64, b: C64) -> f64 {
    (crate::wrap_log(a - b).exp() - ONE).norm()
}

/// `log det T_n` for several `n` sharing one coefficient table.
pub fn toeplitz_dets(spec: &SymbolSpec, ns: &[usize]) -> Result<Vec<C64>> {
    let top = ns.iter().copied().max().unwrap_or(1);
    let inst = ToeplitzInstance::new(*spec, top)?;
    ns.iter()
        .map(|&n| lu_logdet(&ComplexMatrix::from_fn(n, n, |j, k| inst.coeffs.get(j as i64 - k as i64))))
        .collect()
}
