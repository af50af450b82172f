//! The Fisher-Hartwig symbols on the circle and on the line, their
//! Wiener-Hopf factors and their Fourier data.

use crate::error::{Error, Result};
use crate::quadrature::{graded_two_sided_on, Interval};
use crate::special::{binomial_bound, binomial_series, complex_gamma};
use crate::{rpow, C64};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// The exponent pair `(α, β)` of a single Fisher-Hartwig singularity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhParams {
    pub alpha: C64,
    pub beta: C64,
}

impl FhParams {
    /// Checked constructor: requires `|Re(α+β)| < 1` and `|Re(α-β)| < 1`.
    pub fn new(alpha: C64, beta: C64) -> Result<Self> {
        let p = FhParams { alpha, beta };
        p.check_strip()?;
        Ok(p)
    }

    pub fn real(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(C64::new(alpha, 0.0), C64::new(beta, 0.0))
    }

    pub fn symmetric(alpha: C64) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    pub fn check_strip(&self) -> Result<()> {
        let s = (self.alpha + self.beta).re;
        let d = (self.alpha - self.beta).re;
        if s.abs() >= 1.0 || d.abs() >= 1.0 || !s.is_finite() || !d.is_finite() {
            return Err(Error::ParameterStrip(format!(
                "alpha = {}, beta = {} give Re(alpha+beta) = {s}, Re(alpha-beta) = {d}",
                self.alpha, self.beta
            )));
        }
        Ok(())
    }

    /// `|Re α| < 1/2` and `|Re β| < 1/2`.
    pub fn in_corollary_strip(&self) -> bool {
        self.alpha.re.abs() < 0.5 && self.beta.re.abs() < 0.5
    }

    pub fn swapped(&self) -> Self {
        FhParams { alpha: self.beta, beta: self.alpha }
    }

    pub fn is_trivial(&self) -> bool {
        self.alpha == C64::new(0.0, 0.0) && self.beta == C64::new(0.0, 0.0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.alpha == self.beta
    }
}

/// Sign in front of `sin(πa) sech(πξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Every symbol the library knows about.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymbolSpec {
    /// `(1-z)^α (1-1/z)^β` on the unit circle.
    ToeplitzPure(FhParams),
    /// `(1-rz)^α (1-r/z)^β`, `0 < r < 1`.
    ToeplitzReg { params: FhParams, r: f64 },
    /// `(ξ-i0)^α (ξ-i)^{-α} (ξ+i0)^β (ξ+i)^{-β}` on the line.
    WhPure(FhParams),
    /// `((ξ-iε)/(ξ-i))^α ((ξ+iε)/(ξ+i))^β`, `0 < ε < 1`.
    WhReg { params: FhParams, eps: f64 },
    /// `1 ± sin(πa) sech(πξ)`.
    Sech { sign: Sign, a: C64 },
    /// The 2×2 matrix symbol τ.
    MatrixTau(FhParams),
}

impl SymbolSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SymbolSpec::ToeplitzPure(p) | SymbolSpec::WhPure(p) | SymbolSpec::MatrixTau(p) => p.check_strip(),
            SymbolSpec::ToeplitzReg { params, r } => {
                params.check_strip()?;
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::InvalidParameter(format!("r = {r} must lie in (0, 1)")));
                }
                Ok(())
            }
            SymbolSpec::WhReg { params, eps } => {
                params.check_strip()?;
                if !(eps > 0.0 && eps < 1.0) {
                    return Err(Error::InvalidParameter(format!("eps = {eps} must lie in (0, 1)")));
                }
                Ok(())
            }
            SymbolSpec::Sech { a, .. } => {
                if a.re.abs() >= 0.5 {
                    return Err(Error::InvalidParameter(format!("sech amplitude a = {a} needs |Re a| < 1/2")));
                }
                Ok(())
            }
        }
    }

    pub fn params(&self) -> Option<FhParams> {
        match *self {
            SymbolSpec::ToeplitzPure(p) | SymbolSpec::WhPure(p) | SymbolSpec::MatrixTau(p) => Some(p),
            SymbolSpec::ToeplitzReg { params, .. } | SymbolSpec::WhReg { params, .. } => Some(params),
            SymbolSpec::Sech { .. } => None,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, SymbolSpec::ToeplitzPure(_) | SymbolSpec::ToeplitzReg { .. })
    }

    pub fn is_line(&self) -> bool {
        !self.is_circle()
    }

    /// True when the symbol is identically 1 (or the identity matrix).
    pub fn is_trivial(&self) -> bool {
        match *self {
            SymbolSpec::Sech { a, .. } => a == C64::new(0.0, 0.0),
            _ => self.params().map(|p| p.is_trivial()).unwrap_or(false),
        }
    }
}

/// `φ(e^{iθ})` for a circle symbol, branch `0 < θ < 2π`.
pub fn eval_circle(spec: &SymbolSpec, theta: f64) -> Result<C64> {
    match *spec {
        SymbolSpec::ToeplitzPure(p) => {
            let t = theta.rem_euclid(2.0 * PI);
            if t == 0.0 {
                return Err(Error::SingularPoint);
            }
            Ok(pure_circle(p, t, 2.0 * PI - t))
        }
        SymbolSpec::ToeplitzReg { params, r } => {
            let z = C64::from_polar(r, theta);
            let zc = C64::from_polar(r, -theta);
            Ok((ONE - z).powc(params.alpha) * (ONE - zc).powc(params.beta))
        }
        _ => Err(Error::WrongVariant("eval_circle needs a circle symbol")),
    }
}

/// Pure symbol from `θ` and its distance `gap` to `2π`, accurate at both ends.
fn pure_circle(p: FhParams, theta: f64, gap: f64) -> C64 {
    // 2 - 2cos θ = 4 sin²(θ/2)
    let half = if theta <= PI { (0.5 * theta).sin() } else { (0.5 * gap).sin() };
    let modulus = rpow(4.0 * half * half, 0.5 * (p.alpha + p.beta));
    modulus * (I * (theta - PI) * 0.5 * (p.alpha - p.beta)).exp()
}

/// `σ(ξ)` for a scalar line symbol.
pub fn eval_line(spec: &SymbolSpec, xi: f64) -> Result<C64> {
    match *spec {
        SymbolSpec::WhPure(p) => {
            if xi == 0.0 {
                return Err(Error::SingularPoint);
            }
            Ok(wh_symbol(p, 0.0, xi))
        }
        SymbolSpec::WhReg { params, eps } => Ok(wh_symbol(params, eps, xi)),
        SymbolSpec::Sech { sign, a } => Ok(ONE + sign.value() * (PI * a).sin() / (PI * xi).cosh()),
        _ => Err(Error::WrongVariant("eval_line needs a scalar line symbol")),
    }
}

/// Each factor is `exp(±γ Log(ratio))` with a ratio tending to 1 at infinity.
/// Both ratios have positive real part on the real line, so the principal
/// Log is continuous there.
fn wh_symbol(p: FhParams, eps: f64, xi: f64) -> C64 {
    wh_log(p, eps, xi).exp()
}

fn wh_log(p: FhParams, eps: f64, xi: f64) -> C64 {
    let lower = C64::new(xi, -eps) / C64::new(xi, -1.0);
    let upper = C64::new(xi, eps) / C64::new(xi, 1.0);
    p.alpha * lower.ln() + p.beta * upper.ln()
}

/// The continuous logarithm of a scalar line symbol, vanishing at infinity.
///
/// For complex exponents the principal log of `σ` itself wraps near `ξ = 0`.
pub fn log_line(spec: &SymbolSpec, xi: f64) -> Result<C64> {
    match *spec {
        SymbolSpec::WhPure(p) => {
            if xi == 0.0 {
                return Err(Error::SingularPoint);
            }
            Ok(wh_log(p, 0.0, xi))
        }
        SymbolSpec::WhReg { params, eps } => Ok(wh_log(params, eps, xi)),
        SymbolSpec::Sech { .. } => Ok(eval_line(spec, xi)?.ln()),
        _ => Err(Error::WrongVariant("log_line needs a scalar line symbol")),
    }
}

/// The matrix symbol τ(ξ).
pub fn matrix_tau_eval(p: &FhParams, xi: f64) -> crate::linalg::Mat2 {
    let (a12, a21) = tau_off_diagonal(p, xi);
    crate::linalg::Mat2([[ONE, a12], [a21, ONE]])
}

pub(crate) fn tau_off_diagonal(p: &FhParams, xi: f64) -> (C64, C64) {
    let shift = I * 0.5 * (p.alpha - p.beta);
    let a12 = -(PI * p.beta).sin() / (PI * (xi + shift)).cosh();
    let a21 = -(PI * p.alpha).sin() / (PI * (xi - shift)).cosh();
    (a12, a21)
}

/// Closed form for `det τ(ξ)`.
pub fn symdet(p: &FhParams, xi: f64) -> C64 {
    let c = (PI * xi).cosh();
    let s = (PI * (p.alpha - p.beta) * 0.5).sin();
    ONE - (PI * p.alpha).sin() * (PI * p.beta).sin() / (c * c - s * s)
}

/// Fourier coefficients `φ_k` for `k` in `min_index..=max_index`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierData {
    pub min_index: i64,
    pub values: Vec<C64>,
    /// Certified bound on the truncation error of each coefficient.
    pub tail_bound: f64,
}

impl FourierData {
    pub fn max_index(&self) -> i64 {
        self.min_index + self.values.len() as i64 - 1
    }

    /// Coefficient `k`, or zero outside the stored range.
    pub fn get(&self, k: i64) -> C64 {
        if k < self.min_index || k > self.max_index() {
            return C64::new(0.0, 0.0);
        }
        self.values[(k - self.min_index) as usize]
    }
}

/// Default relative tail tolerance for truncated binomial convolutions.
pub const TAIL_TOL: f64 = 1e-12;
/// Largest number of terms a truncated series may use.
pub const TRUNCATION_BUDGET: usize = 2_000_000;

/// Laurent coefficients of `(1 - rz)^a (1 - r/z)^b`, `0 < r < 1`.
///
/// Both factors are absolutely convergent binomial series; the coefficient
/// of `z^k` is a single convolution sum truncated under an explicit
/// geometric majorant.
#[derive(Debug, Clone)]
pub struct LaurentProduct {
    plus: Vec<C64>,
    minus: Vec<C64>,
    terms: usize,
    tail: f64,
}

impl LaurentProduct {
    /// Prepare coefficients with `|k| <= max_index`.
    pub fn new(a: C64, b: C64, r: f64, max_index: usize, tol: f64) -> Result<Self> {
        let ca = (a.norm() - 1.0).max(0.0);
        let cb = (b.norm() - 1.0).max(0.0);
        let c = ca + cb;
        // Σ_{l>=L} |C(a,k+l) C(b,l)| r^{2l} <= e^c Σ (k+l)^c (1+ln..) r^{2l}; see binomial_bound
        let mut terms = 1usize;
        let tail = loop {
            if terms > TRUNCATION_BUDGET {
                return Err(Error::TruncationBudget { budget: TRUNCATION_BUDGET, tol });
            }
            let j = (terms + max_index) as f64;
            let rho = r * r * ((1.0 + 1.0 / j).powf(c) * ((1.0 + (j + 1.0).ln()) / (1.0 + j.ln())).powf(c));
            if rho < 1.0 {
                let first = binomial_bound(a, terms + max_index).max(1.0)
                    * binomial_bound(b, terms + max_index).max(1.0)
                    * r.powi(2 * terms as i32);
                let bound = first / (1.0 - rho);
                if bound < tol {
                    break bound;
                }
            }
            terms = (terms * 2).max(terms + 8);
        };
        let len = max_index + terms + 1;
        let mut plus = binomial_series(a, len);
        let mut minus = binomial_series(b, len);
        let mut rp = 1.0;
        for j in 0..len {
            plus[j] *= rp;
            minus[j] *= rp;
            rp *= -r;
        }
        Ok(LaurentProduct { plus, minus, terms, tail })
    }

    /// Coefficient of `z^k`.
    pub fn coefficient(&self, k: i64) -> C64 {
        let m = k.unsigned_abs() as usize;
        let (hi, lo) = if k >= 0 { (&self.plus, &self.minus) } else { (&self.minus, &self.plus) };
        let mut acc = C64::new(0.0, 0.0);
        // sum small terms first
        for l in (0..self.terms).rev() {
            acc += hi[m + l] * lo[l];
        }
        acc
    }

    /// Bound on the neglected part of every coefficient.
    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    /// `(1-rz)^a` and `(1-r/z)^b` at `z = e^{iθ}` from the truncated series.
    pub fn factors_at(&self, theta: f64) -> (C64, C64) {
        let z = C64::from_polar(1.0, theta);
        let zi = z.conj();
        let horner = |c: &[C64], w: C64| c.iter().rev().fold(C64::new(0.0, 0.0), |acc, &v| acc * w + v);
        (horner(&self.plus, z), horner(&self.minus, zi))
    }

    fn data(&self, lo: i64, hi: i64) -> FourierData {
        FourierData {
            min_index: lo,
            values: (lo..=hi).map(|k| self.coefficient(k)).collect(),
            tail_bound: self.tail,
        }
    }
}

/// Where pure-symbol Fourier coefficients come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientSource {
    /// The Γ-ratio closed form, after it agreed with quadrature.
    ClosedForm,
    /// Direct quadrature of the defining integral.
    Quadrature,
}

/// Closed-form coefficient `φ_k = (-1)^k Γ(1+α+β) / (Γ(1+β+k) Γ(1+α-k))`,
/// evaluated with pole-free ratio recurrences from `φ_0`. No strip check.
pub fn pure_coefficients_closed_form(alpha: C64, beta: C64, lo: i64, hi: i64) -> Result<Vec<C64>> {
    let phi0 = if alpha == ZERO || beta == ZERO {
        ONE
    } else {
        complex_gamma(ONE + alpha + beta)? / (complex_gamma(ONE + alpha)? * complex_gamma(ONE + beta)?)
    };
    let top = hi.max(0) as usize;
    let bottom = (-lo).max(0) as usize;
    let mut pos = Vec::with_capacity(top + 1);
    let mut c = phi0;
    pos.push(c);
    for k in 1..=top {
        c = c * ((k as f64 - 1.0) - alpha) / (beta + k as f64);
        pos.push(c);
    }
    let mut neg = Vec::with_capacity(bottom + 1);
    let mut c = phi0;
    neg.push(c);
    for k in 1..=bottom {
        c = c * ((k as f64 - 1.0) - beta) / (alpha + k as f64);
        neg.push(c);
    }
    Ok((lo..=hi)
        .map(|k| if k >= 0 { pos[k as usize] } else { neg[(-k) as usize] })
        .collect())
}

/// `φ_k = (1/2π)∫ φ(e^{iθ}) e^{-ikθ} dθ` for the pure symbol, on a mesh
/// graded toward both ends of `(0, 2π)`.
pub fn pure_coefficient_quadrature(p: &FhParams, k: i64) -> C64 {
    let rule = graded_two_sided_on(Interval::new(0.0, 2.0 * PI), 60, 16, 0.25);
    let sum: C64 = rule.integrate_nodes(|n| {
        let v = pure_circle(*p, n.x, n.to_hi);
        v * C64::from_polar(1.0, -(k as f64) * n.x)
    });
    sum / (2.0 * PI)
}

/// Runs the closed-form check at `k ∈ {-2, ..., 2}` and reports which source
/// is trustworthy for these parameters.
pub fn certify_pure_coefficients(p: &FhParams) -> CoefficientSource {
    let Ok(closed) = pure_coefficients_closed_form(p.alpha, p.beta, -2, 2) else {
        return CoefficientSource::Quadrature;
    };
    let ok = (-2..=2).all(|k| {
        let q = pure_coefficient_quadrature(p, k);
        (q - closed[(k + 2) as usize]).norm() < 1e-8
    });
    if ok {
        CoefficientSource::ClosedForm
    } else {
        CoefficientSource::Quadrature
    }
}

/// Fourier coefficients of a circle symbol for `k` in `lo..=hi`.
pub fn circle_fourier_coeffs(spec: &SymbolSpec, lo: i64, hi: i64) -> Result<FourierData> {
    spec.validate()?;
    match *spec {
        SymbolSpec::ToeplitzReg { params, r } => {
            let span = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
            Ok(LaurentProduct::new(params.alpha, params.beta, r, span, TAIL_TOL)?.data(lo, hi))
        }
        SymbolSpec::ToeplitzPure(p) => {
            let values = match certify_pure_coefficients(&p) {
                CoefficientSource::ClosedForm => pure_coefficients_closed_form(p.alpha, p.beta, lo, hi)?,
                CoefficientSource::Quadrature => (lo..=hi).map(|k| pure_coefficient_quadrature(&p, k)).collect(),
            };
            Ok(FourierData { min_index: lo, values, tail_bound: 0.0 })
        }
        _ => Err(Error::WrongVariant("circle_fourier_coeffs needs a circle symbol")),
    }
}

/// Coefficients of `φ⁻/φ⁺` and `φ⁺/φ⁻` for the regular symbol, `k` in `lo..=hi`.
pub fn quotient_coeffs(spec: &SymbolSpec, lo: i64, hi: i64) -> Result<(FourierData, FourierData)> {
    spec.validate()?;
    let SymbolSpec::ToeplitzReg { params, r } = *spec else {
        return Err(Error::WrongVariant("quotient_coeffs needs ToeplitzReg"));
    };
    let span = lo.unsigned_abs().max(hi.unsigned_abs()) as usize;
    // φ⁻/φ⁺ = (1-rz)^{-α}(1-r/z)^β, φ⁺/φ⁻ = (1-rz)^α(1-r/z)^{-β}
    let q1 = LaurentProduct::new(-params.alpha, params.beta, r, span, TAIL_TOL)?;
    let q2 = LaurentProduct::new(params.alpha, -params.beta, r, span, TAIL_TOL)?;
    Ok((q1.data(lo, hi), q2.data(lo, hi)))
}

/// Distance from the real axis to the nearest singularity of
/// `log(1 + c sech πξ)`: poles of sech at `±i/2` and zeros of `cosh πξ + c`.
pub fn sech_strip(c: C64) -> f64 {
    let mut d: f64 = 0.5;
    let root = (-c).acosh() / PI;
    for s in [1.0, -1.0] {
        for k in -1..=1 {
            let z = s * root + C64::new(0.0, 2.0 * k as f64);
            d = d.min(z.im.abs());
        }
    }
    d
}

/// Trapezoid transform of `log σ` for `σ = 1 + c sech πξ`, cached samples.
#[derive(Debug, Clone)]
pub struct SechTransform {
    h: f64,
    xi0: f64,
    samples: Vec<C64>,
    strip: f64,
}

impl SechTransform {
    pub fn new(sign: Sign, a: C64) -> Self {
        let c = sign.value() * (PI * a).sin();
        let h = 0.01;
        let half = 1400usize;
        let xi0 = -(half as f64) * h;
        let samples = (0..=2 * half)
            .map(|k| {
                let xi = xi0 + k as f64 * h;
                (ONE + c / (PI * xi).cosh()).ln()
            })
            .collect();
        SechTransform { h, xi0, samples, strip: sech_strip(c) }
    }

    /// Exponential decay rate of `τ(x)`.
    pub fn strip(&self) -> f64 {
        self.strip
    }

    /// `τ(x) = (1/2π)∫ log σ(ξ) e^{-ixξ} dξ`.
    pub fn tau(&self, x: f64) -> C64 {
        let step = C64::from_polar(1.0, -x * self.h);
        let mut rot = C64::from_polar(1.0, -x * self.xi0);
        let mut acc = C64::new(0.0, 0.0);
        for (k, &v) in self.samples.iter().enumerate() {
            acc += v * rot;
            rot *= step;
            if k % 64 == 63 {
                // renormalize the running rotation
                rot = C64::from_polar(1.0, -x * (self.xi0 + (k + 1) as f64 * self.h));
            }
        }
        acc * self.h / (2.0 * PI)
    }

    /// `(1/2π)∫ (log σ - σ + 1) dξ`.
    pub fn log_g2(&self) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for &v in self.samples.iter() {
            acc += v - v.exp() + 1.0;
        }
        acc * self.h / (2.0 * PI)
    }
}

/// `τ(x)`, the Fourier transform of `log σ`, for a scalar line symbol.
pub fn line_log_fourier(spec: &SymbolSpec, x: f64) -> Result<C64> {
    spec.validate()?;
    if spec.is_trivial() {
        return Ok(C64::new(0.0, 0.0));
    }
    match *spec {
        SymbolSpec::WhReg { params, eps } => Ok(wh_reg_tau(&params, eps, x)),
        SymbolSpec::Sech { sign, a } => Ok(SechTransform::new(sign, a).tau(x)),
        SymbolSpec::WhPure(_) => Err(Error::NonIntegrableLog),
        _ => Err(Error::WrongVariant("line_log_fourier needs a scalar line symbol")),
    }
}

/// `τ` for `σ_ε` from its branch-cut representation: `log σ_ε` has cuts on
/// `i[ε, 1]` (β part) and `-i[ε, 1]` (α part), giving
/// `τ(x) = -β ∫_ε^1 e^{-xy} dy` for `x > 0` and the α analogue for `x < 0`.
/// At `x = 0` the average of the one-sided limits is returned.
pub(crate) fn wh_reg_tau(p: &FhParams, eps: f64, x: f64) -> C64 {
    let ax = x.abs();
    // ∫_ε^1 e^{-ay} dy = e^{-εa}(1 - e^{-(1-ε)a})/a
    let cut = if ax == 0.0 { 1.0 - eps } else { -(-eps * ax).exp() * (-(1.0 - eps) * ax).exp_m1() / ax };
    if x > 0.0 {
        -p.beta * cut
    } else if x < 0.0 {
        -p.alpha * cut
    } else {
        -(p.alpha + p.beta) * 0.5 * cut
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_symbols() {
        let p = FhParams::real(0.0, 0.0).unwrap();
        assert_eq!(eval_circle(&SymbolSpec::ToeplitzPure(p), 1.3).unwrap(), ONE);
        assert_eq!(eval_line(&SymbolSpec::WhPure(p), 0.7).unwrap(), ONE);
        let t = matrix_tau_eval(&p, 0.4);
        assert_eq!(t, crate::linalg::Mat2::IDENTITY);
    }

    #[test]
    fn pure_circle_at_pi() {
        let p = FhParams::real(0.3, 0.1).unwrap();
        let v = eval_circle(&SymbolSpec::ToeplitzPure(p), PI).unwrap();
        assert!((v - c(4f64.powf(0.2), 0.0)).norm() < 1e-14);
        assert_eq!(eval_circle(&SymbolSpec::ToeplitzPure(p), 0.0), Err(Error::SingularPoint));
        // principal-power product form (1-z)^α(1-1/z)^β
        let th = 2.1;
        let z = C64::from_polar(1.0, th);
        let want = (ONE - z).powc(p.alpha) * (ONE - z.conj()).powc(p.beta);
        assert!((eval_circle(&SymbolSpec::ToeplitzPure(p), th).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn small_xi_law() {
        let p = FhParams::real(0.2, 0.1).unwrap();
        let x = 1e-8;
        let v = eval_line(&SymbolSpec::WhPure(p), x).unwrap() / x.powf(0.3);
        assert!((v - C64::from_polar(1.0, PI * 0.1 / 2.0)).norm() < 1e-6);
        let v = eval_line(&SymbolSpec::WhPure(p), -x).unwrap() / x.powf(0.3);
        assert!((v - C64::from_polar(1.0, -PI * 0.1 / 2.0)).norm() < 1e-6);
        assert_eq!(eval_line(&SymbolSpec::WhPure(p), 0.0), Err(Error::SingularPoint));
    }

    #[test]
    fn regular_line_symbol() {
        let a = 0.3;
        let eps = 0.2;
        let s = SymbolSpec::WhReg { params: FhParams::real(a, a).unwrap(), eps };
        assert!((eval_line(&s, 0.0).unwrap() - c(eps.powf(2.0 * a), 0.0)).norm() < 1e-14);
        let xi = 0.7f64;
        let want = ((xi * xi + eps * eps) / (xi * xi + 1.0)).powf(a);
        assert!((eval_line(&s, xi).unwrap() - c(want, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn closed_form_first_degree() {
        // (1-z)^1: coefficients 1, -1
        let v = pure_coefficients_closed_form(ONE, c(0.0, 0.0), -2, 3).unwrap();
        let want = [0.0, 0.0, 1.0, -1.0, 0.0, 0.0];
        for (got, w) in v.iter().zip(want) {
            assert!((got - c(w, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_zero_coefficient_oracle() {
        for (a, b) in [(c(0.3, 0.0), c(0.1, 0.0)), (c(-0.2, 0.1), c(0.25, 0.0)), (c(0.0, 0.3), c(0.0, 0.3))] {
            let p = FhParams::new(a, b).unwrap();
            let q = pure_coefficient_quadrature(&p, 0);
            let closed = pure_coefficients_closed_form(a, b, 0, 0).unwrap()[0];
            assert!((q - closed).norm() < 1e-8, "{q} {closed}");
            assert_eq!(certify_pure_coefficients(&p), CoefficientSource::ClosedForm);
        }
    }

    #[test]
    fn regular_coefficients() {
        let p = FhParams::real(0.3, -0.2).unwrap();
        let spec = SymbolSpec::ToeplitzReg { params: p, r: 0.5 };
        let d = circle_fourier_coeffs(&spec, -3, 3).unwrap();
        let rule = crate::quadrature::composite_gauss(16, 64, Interval::new(0.0, 2.0 * PI));
        for k in -3..=3 {
            let q: C64 = rule.integrate_nodes(|n| eval_circle(&spec, n.x).unwrap() * C64::from_polar(1.0, -(k as f64) * n.x))
                / (2.0 * PI);
            assert!((q - d.get(k)).norm() < 1e-10);
        }
    }

    #[test]
    fn quotient_trivial_and_reflection() {
        let zero = SymbolSpec::ToeplitzReg { params: FhParams::real(0.0, 0.0).unwrap(), r: 0.5 };
        let (q1, q2) = quotient_coeffs(&zero, -4, 4).unwrap();
        for k in -4..=4 {
            let d = if k == 0 { ONE } else { c(0.0, 0.0) };
            assert_eq!(q1.get(k), d);
            assert_eq!(q2.get(k), d);
        }
        let s = SymbolSpec::ToeplitzReg { params: FhParams::real(0.3, 0.3).unwrap(), r: 0.5 };
        let (q1, q2) = quotient_coeffs(&s, -10, 10).unwrap();
        for k in -10..=10 {
            assert!((q1.get(k) - q2.get(-k)).norm() < 1e-15);
        }
    }

    #[test]
    fn quotient_matches_sampled_dft() {
        let a = 0.3;
        let s = SymbolSpec::ToeplitzReg { params: FhParams::real(a, a).unwrap(), r: 0.5 };
        let (q1, _) = quotient_coeffs(&s, -6, 6).unwrap();
        let n = 256;
        for k in -6i64..=6 {
            let mut acc = c(0.0, 0.0);
            for j in 0..n {
                let th = 2.0 * PI * j as f64 / n as f64;
                let z = C64::from_polar(1.0, th);
                let v = (ONE - 0.5 / z).powf(a) * (ONE - 0.5 * z).powf(-a);
                acc += v * C64::from_polar(1.0, -(k as f64) * th);
            }
            assert!((acc / n as f64 - q1.get(k)).norm() < 1e-10);
        }
    }

    #[test]
    fn factor_series_reproduce_symbol() {
        for r in [0.3, 0.6, 0.9] {
            let p = FhParams::new(c(0.2, 0.1), c(-0.3, 0.0)).unwrap();
            let lp = LaurentProduct::new(p.alpha, p.beta, r, 0, 1e-14).unwrap();
            for th in [0.1, 1.0, 2.5, 4.0] {
                let (fp, fm) = lp.factors_at(th);
                let want = eval_circle(&SymbolSpec::ToeplitzReg { params: p, r }, th).unwrap();
                assert!((fp * fm - want).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn tau_symdet() {
        let p = FhParams::real(0.25, 0.25).unwrap();
        assert!((matrix_tau_eval(&p, 0.0).det() - 0.5).norm() < 1e-15);
        let p = FhParams::new(c(0.3, 0.2), c(-0.1, 0.4)).unwrap();
        for k in 0..50 {
            let xi = -3.0 + 0.12 * k as f64;
            assert!((matrix_tau_eval(&p, xi).det() - symdet(&p, xi)).norm() < 1e-12);
        }
    }

    #[test]
    fn regular_tau_at_zero() {
        let a = 0.3;
        let eps = 0.2;
        let s = SymbolSpec::WhReg { params: FhParams::real(a, a).unwrap(), eps };
        let t0 = line_log_fourier(&s, 0.0).unwrap();
        // (1/2π)∫ log((ξ²+ε²)/(ξ²+1)) = ε - 1
        assert!((t0 - c(a * (eps - 1.0), 0.0)).norm() < 1e-14);
        let pure = SymbolSpec::WhPure(FhParams::real(a, a).unwrap());
        assert_eq!(line_log_fourier(&pure, 1.0), Err(Error::NonIntegrableLog));
    }

    #[test]
    fn regular_tau_matches_quadrature() {
        let p = FhParams::new(c(0.3, 0.1), c(-0.2, 0.0)).unwrap();
        let s = SymbolSpec::WhReg { params: p, eps: 0.3 };
        // direct transform of log σ_ε on a long interval; log σ_ε = O(1/ξ) so
        // only moderate accuracy is expected at x = 2
        let rule = crate::quadrature::composite_gauss(16, 4000, Interval::new(-2000.0, 2000.0));
        let x = 2.0;
        let direct: C64 = rule.integrate_nodes(|n| eval_line(&s, n.x).unwrap().ln() * C64::from_polar(1.0, -x * n.x))
            / (2.0 * PI);
        assert!((direct - line_log_fourier(&s, x).unwrap()).norm() < 1e-3);
    }

    #[test]
    fn sech_strip_values() {
        let a = 0.2;
        assert!((sech_strip(c(-(PI * a).sin(), 0.0)) - 0.3).abs() < 1e-12);
        assert!((sech_strip(c((PI * a).sin(), 0.0)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sech_transform_decay_rate() {
        for (sign, d) in [(Sign::Plus, 0.5), (Sign::Minus, 0.2)] {
            let t = SechTransform::new(sign, c(0.3, 0.0));
            assert!((t.strip() - d).abs() < 1e-12);
            let slope = (t.tau(40.0).norm() / t.tau(60.0).norm()).ln() / 20.0;
            assert!((slope - d).abs() < 0.05 * d + 0.02, "{slope}");
        }
        let t = SechTransform::new(Sign::Plus, c(0.3, 0.0));
        for x in [56.0, 70.0, 90.0] {
            assert!(t.tau(x).norm() < 1e-12);
        }
    }
}
