//! Limit kernels on `(0, 1)` for the normalized determinants
//! `det₂ T_n/G₂^n` and `det₂ W_R/G₂^R`, and the convergence checks that
//! compare the two.
//!
//! Every determinant here is a ratio `det(I - s(I - sA₀)⁻¹A)` with
//! `A₀(x, y) = (sin πa/π)/(x+y)` (scalar) or its 2×2 off-diagonal analogue.
//! For the block kernels `[[0, B], [C, 0]]` the determinant of `I - A` is
//! `det(I - BC)`, which halves the matrix size.

use crate::constants::{line_constants, log_c_constant, log_sech_e_pair};
use crate::error::{Error, Result};
use crate::fredholm::{assemble, ratio_det_matrices, DiagonalPolicy, FredholmResult, Kernel, Singularity, NEAR_SINGULAR};
use crate::linalg::{ComplexMatrix, Mat2};
use crate::quadrature::{exponential_rule, graded_two_sided, Node, QuadratureRule};
use crate::symbols::{FhParams, SymbolSpec};
use crate::toeplitz::ExactOracle;
use crate::wienerhopf::{wh_det2, WhKernel};
use crate::C64;
use alloc::vec::Vec;
use core::f64::consts::PI;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// `e^z - 1` without cancellation for small `z`.
pub fn expm1(z: C64) -> C64 {
    let s = (0.5 * z.im).sin();
    C64::new(z.re.exp_m1() * z.im.cos() - 2.0 * s * s, z.re.exp() * z.im.sin())
}

/// `ln(1 - x)` from the node, using the stored gap near 1.
fn ln_one_minus(n: &Node) -> f64 {
    if n.x < 0.5 {
        (-n.x).ln_1p()
    } else {
        n.to_hi.ln()
    }
}

/// Scalar limit kernels, all of the form `b(x) A₀(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarKind {
    A0,
    /// `((1-x)/(1+x))^{n+α} - 1`
    A1(usize),
    /// `((1+x)/(1-x))^α - 1`
    A2,
    /// `((1-x)/(1+x))^α e^{-Rx} - 1`
    A1Tilde(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarLimitKernel {
    pub alpha: C64,
    pub kind: ScalarKind,
}

impl ScalarLimitKernel {
    pub fn new(alpha: C64, kind: ScalarKind) -> Result<Self> {
        if alpha.re.abs() >= 0.5 {
            return Err(Error::ParameterStrip("scalar limit kernels need |Re α| < 1/2".into()));
        }
        Ok(ScalarLimitKernel { alpha, kind })
    }

    /// The bracket `b(x)`, 1 for `A₀`.
    pub fn bracket(&self, x: &Node) -> C64 {
        let a = self.alpha;
        let l = ln_one_minus(x) - x.x.ln_1p();
        match self.kind {
            ScalarKind::A0 => ONE,
            ScalarKind::A1(n) => expm1((a + n as f64) * l),
            ScalarKind::A2 => expm1(-a * l),
            ScalarKind::A1Tilde(r) => expm1(a * l - r * x.x),
        }
    }
}

impl Kernel for ScalarLimitKernel {
    type Value = C64;
    fn eval(&self, x: &Node, y: &Node) -> C64 {
        self.bracket(x) * (PI * self.alpha).sin() / (PI * (x.x + y.x))
    }
    fn singularity(&self) -> Singularity {
        Singularity::CornerAtOrigin
    }
}

/// Block limit kernels `[[0, B], [C, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlockKind {
    /// first determinant, `A₀`
    A0P,
    /// first determinant, `P(A - A₀)` limit for `T_n`
    A1(usize),
    /// second determinant, `A₀`
    A0Q,
    /// second determinant, `Q(A - A₀)` limit
    A2,
    /// first determinant, `P(A - A₀)` limit for `W_R`
    A1TildeWh(f64),
}

impl BlockKind {
    fn is_first(&self) -> bool {
        matches!(self, BlockKind::A0P | BlockKind::A1(_) | BlockKind::A1TildeWh(_))
    }
}

/// Diagonal similarity applied to the block kernels. All gauges give the
/// same Fredholm determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// `x^{±(α-β)}/(x+y)` entries
    Plain,
    /// `(x/y)^{±(α-β)/2}/(x+y)` entries
    Symmetric,
    /// symmetric, then conjugated by `diag((1-x)^γ, (1-x)^{-γ})` with
    /// `γ = (Re α - Re β)/2`, which keeps the entries square integrable
    /// near `x = 1` on the whole strip `|Re(α±β)| < 1`
    #[default]
    Reweighted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockLimitKernel {
    pub params: FhParams,
    pub kind: BlockKind,
    pub gauge: Gauge,
}

impl BlockLimitKernel {
    pub fn new(params: FhParams, kind: BlockKind, gauge: Gauge) -> Result<Self> {
        let (a, b) = (params.alpha.re, params.beta.re);
        if a >= 0.5 || b >= 0.5 || (a - b).abs() >= 1.0 || (a + b).abs() >= 1.0 {
            return Err(Error::ParameterStrip(
                "block limit kernels need Re α, Re β < 1/2 and |Re(α ± β)| < 1".into(),
            ));
        }
        if matches!(kind, BlockKind::A1TildeWh(_)) && (a <= -0.5 || b <= -0.5) {
            return Err(Error::ParameterStrip("the Wiener-Hopf block kernel needs Re α, Re β > -1/2".into()));
        }
        Ok(BlockLimitKernel { params, kind, gauge })
    }

    /// Row factors `(f₁₂(x) - 1, f₂₁(x) - 1)`; zero for the `A₀` kinds.
    pub fn brackets(&self, x: &Node) -> (C64, C64) {
        let (a, b) = (self.params.alpha, self.params.beta);
        let lm = ln_one_minus(x);
        let lp = x.x.ln_1p();
        match self.kind {
            BlockKind::A0P | BlockKind::A0Q => (ZERO, ZERO),
            BlockKind::A1(n) => {
                let n = n as f64;
                (expm1((a + n) * lm - (b + n) * lp), expm1((b + n) * lm - (a + n) * lp))
            }
            BlockKind::A1TildeWh(r) => (expm1(a * lm - b * lp - r * x.x), expm1(b * lm - a * lp - r * x.x)),
            BlockKind::A2 => (expm1(b * lp - a * lm), expm1(a * lp - b * lm)),
        }
    }

    /// `(x, y)` factors multiplying `sin πβ/(π(x+y))` and `sin πα/(π(x+y))`.
    fn gauge_factors(&self, x: &Node, y: &Node) -> (C64, C64) {
        let d = self.params.beta - self.params.alpha;
        let d = if self.kind.is_first() { d } else { -d };
        let (lx, ly) = (x.x.ln(), y.x.ln());
        match self.gauge {
            Gauge::Plain => ((d * lx).exp(), (-d * lx).exp()),
            Gauge::Symmetric | Gauge::Reweighted => {
                let s = (0.5 * d * (lx - ly)).exp();
                let (mut b, mut c) = (s, s.inv());
                if self.gauge == Gauge::Reweighted {
                    let g = 0.5 * (self.params.alpha.re - self.params.beta.re);
                    let w = (g * (ln_one_minus(x) + ln_one_minus(y))).exp();
                    b *= w;
                    c /= w;
                }
                (b, c)
            }
        }
    }
}

impl Kernel for BlockLimitKernel {
    type Value = Mat2;
    fn eval(&self, x: &Node, y: &Node) -> Mat2 {
        let (fb, fc) = match self.kind {
            BlockKind::A0P | BlockKind::A0Q => (ONE, ONE),
            _ => self.brackets(x),
        };
        let (gb, gc) = self.gauge_factors(x, y);
        let h = 1.0 / (PI * (x.x + y.x));
        let b = (PI * self.params.beta).sin() * h * fb * gb;
        let c = (PI * self.params.alpha).sin() * h * fc * gc;
        Mat2([[ZERO, b], [c, ZERO]])
    }
    fn singularity(&self) -> Singularity {
        Singularity::CornerAtOrigin
    }
}

/// A member of the limit kernel family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitKernelSet {
    Scalar(ScalarLimitKernel),
    Block(BlockLimitKernel),
}

/// Quadrature on `(0, 1)` for the limit kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// composite Gauss graded geometrically toward both ends
    #[default]
    Graded,
    /// `x = e^{-s}` substitution
    Exponential,
}

/// Refinement ladder: rung `k` uses `levels = 16 + 8k` and order `8 + 4k`.
pub const MAX_RUNG: usize = 3;

pub fn limit_rule(backend: Backend, rung: usize) -> QuadratureRule {
    let levels = 16 + 8 * rung;
    let m = 8 + 4 * rung;
    match backend {
        Backend::Graded => graded_two_sided(levels, levels, m, 0.25),
        Backend::Exponential => exponential_rule(36.0 + 12.0 * rung as f64, levels, m),
    }
}

/// Evaluates `f` on successive rungs until two agree to `tol`.
pub fn refine_rungs<F>(tol: f64, mut f: F) -> Result<FredholmResult>
where
    F: FnMut(usize) -> Result<C64>,
{
    let mut history = Vec::new();
    let mut prev = f(0)?;
    history.push(prev);
    for rung in 1..=MAX_RUNG {
        let next = f(rung)?;
        history.push(next);
        let est = (crate::wrap_log(next - prev).exp() - ONE).norm();
        prev = next;
        if est < tol {
            return Ok(FredholmResult {
                log_det: next,
                log_det2: None,
                quadrature_order: limit_rule(Backend::Graded, rung).len(),
                history,
                error_estimate: est,
            });
        }
    }
    let n = history.len();
    let est = (crate::wrap_log(history[n - 1] - history[n - 2]).exp() - ONE).norm();
    Err(Error::BudgetExhausted { best_re: prev.re, best_im: prev.im, estimate: est })
}

fn scalar_ratios(alpha: C64, kind: ScalarKind, rule: &QuadratureRule) -> Result<C64> {
    let a0 = ScalarLimitKernel::new(alpha, ScalarKind::A0)?;
    let a1 = ScalarLimitKernel::new(alpha, kind)?;
    let m0 = assemble(&a0, rule, DiagonalPolicy::Evaluate);
    let m1 = assemble(&a1, rule, DiagonalPolicy::Evaluate);
    let mut total = ZERO;
    for s in [1.0, -1.0] {
        total += ratio_det_matrices(&m0, &m1, s)?;
    }
    Ok(total)
}

fn scalar_lemma(alpha: C64, kind: ScalarKind, tol: f64, backend: Backend) -> Result<FredholmResult> {
    if alpha.norm() == 0.0 {
        return Ok(FredholmResult { log_det: ZERO, log_det2: None, quadrature_order: 0, history: Vec::new(), error_estimate: 0.0 });
    }
    let constant = -alpha * alpha * 4f64.ln() + log_sech_e_pair(alpha)?;
    let mut res = refine_rungs(tol, |k| {
        let rule = limit_rule(backend, k);
        Ok(scalar_ratios(alpha, kind, &rule)? + scalar_ratios(alpha, ScalarKind::A2, &rule)?)
    })?;
    res.log_det += constant;
    res.history.iter_mut().for_each(|v| *v += constant);
    Ok(res)
}

/// Limit formula for `log det₂ T_n(φ_{α,α}) - n log G₂`.
pub fn lemma4_rhs(alpha: C64, n: usize, tol: f64) -> Result<FredholmResult> {
    scalar_lemma(alpha, ScalarKind::A1(n), tol, Backend::Graded)
}

/// [`lemma4_rhs`] on a chosen quadrature backend.
pub fn lemma4_rhs_with(alpha: C64, n: usize, tol: f64, backend: Backend) -> Result<FredholmResult> {
    scalar_lemma(alpha, ScalarKind::A1(n), tol, backend)
}

/// Limit formula for `log det₂ W_R(σ_{α,α}) - R log G₂`.
pub fn lemma5_rhs(alpha: C64, r: f64, tol: f64) -> Result<FredholmResult> {
    scalar_lemma(alpha, ScalarKind::A1Tilde(r), tol, Backend::Graded)
}

/// Off-diagonal blocks `(B, C)` of the assembled block kernel.
pub fn block_parts(k: &BlockLimitKernel, rule: &QuadratureRule) -> (ComplexMatrix, ComplexMatrix) {
    let nodes = rule.nodes();
    let sw: Vec<f64> = nodes.iter().map(|n| n.w.sqrt()).collect();
    let n = nodes.len();
    let mut b = ComplexMatrix::zeros(n, n);
    let mut c = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = k.eval(&nodes[i], &nodes[j]);
            let w = sw[i] * sw[j];
            b[(i, j)] = v.0[0][1] * w;
            c[(i, j)] = v.0[1][0] * w;
        }
    }
    (b, c)
}

/// `log det(I - A₀)` for a block `A₀` kind, through `det(I - BC)`.
pub fn block_a0_logdet(params: &FhParams, kind: BlockKind, gauge: Gauge, rule: &QuadratureRule) -> Result<C64> {
    let k = BlockLimitKernel::new(*params, kind, gauge)?;
    let (b, c) = block_parts(&k, rule);
    let lu = b.matmul(&c)?.identity_minus(ONE).lu()?;
    Ok(lu.log_det())
}

/// `log det(I - (I - A₀)⁻¹A)` for block kernels.
pub fn block_ratio(params: &FhParams, kind: BlockKind, gauge: Gauge, rule: &QuadratureRule) -> Result<C64> {
    let base = if kind.is_first() { BlockKind::A0P } else { BlockKind::A0Q };
    let k0 = BlockLimitKernel::new(*params, base, gauge)?;
    let k1 = BlockLimitKernel::new(*params, kind, gauge)?;
    let (b0, c0) = block_parts(&k0, rule);
    let (mut b1, mut c1) = block_parts(&k1, rule);
    let lu0 = b0.matmul(&c0)?.identity_minus(ONE).lu()?;
    if lu0.pivot_ratio() < NEAR_SINGULAR {
        return Err(Error::NearSingular(lu0.pivot_ratio()));
    }
    b1.add_scaled(&b0, ONE);
    c1.add_scaled(&c0, ONE);
    let top = b1.matmul(&c1)?.identity_minus(ONE).lu()?.log_det();
    Ok(top - lu0.log_det())
}

fn block_lemma(params: &FhParams, first: BlockKind, tol: f64, gauge: Gauge) -> Result<FredholmResult> {
    if params.is_trivial() {
        return Ok(FredholmResult { log_det: ZERO, log_det2: None, quadrature_order: 0, history: Vec::new(), error_estimate: 0.0 });
    }
    let constant = log_c_constant(params)?;
    let mut res = refine_rungs(tol, |k| {
        let rule = limit_rule(Backend::Graded, k);
        Ok(block_ratio(params, first, gauge, &rule)? + block_ratio(params, BlockKind::A2, gauge, &rule)?)
    })?;
    res.log_det += constant;
    res.history.iter_mut().for_each(|v| *v += constant);
    Ok(res)
}

/// Block limit formula for `log det₂ T_n(φ_{α,β}) - n log G₂`.
pub fn lemma6_rhs(params: &FhParams, n: usize, tol: f64) -> Result<FredholmResult> {
    block_lemma(params, BlockKind::A1(n), tol, Gauge::default())
}

pub fn lemma6_rhs_gauge(params: &FhParams, n: usize, tol: f64, gauge: Gauge) -> Result<FredholmResult> {
    block_lemma(params, BlockKind::A1(n), tol, gauge)
}

/// Block limit formula for `log det₂ W_R(σ_{α,β}) - R log G₂`.
pub fn wh_general_rhs(params: &FhParams, r: f64, tol: f64) -> Result<FredholmResult> {
    block_lemma(params, BlockKind::A1TildeWh(r), tol, Gauge::default())
}

/// Direct `log det₂ W_R(σ_{α,β}) - R log G₂` from the Nyström matrix on `(0, R)`.
pub fn wh_normalized_direct(params: &FhParams, r: f64, tol: f64) -> Result<FredholmResult> {
    let spec = SymbolSpec::WhPure(*params);
    if params.is_trivial() {
        return Ok(FredholmResult { log_det: ZERO, log_det2: None, quadrature_order: 0, history: Vec::new(), error_estimate: 0.0 });
    }
    let g2 = line_constants(&spec)?.log_g2;
    let mut res = wh_det2(&spec, r, tol)?;
    res.log_det -= r * g2;
    res.history.iter_mut().for_each(|v| *v -= r * g2);
    Ok(res)
}

/// One row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub r: f64,
    pub lhs_log: C64,
    pub rhs_log: C64,
    pub ratio: C64,
    pub residual: f64,
    pub error_estimate: f64,
    /// Direct `(0, R)` Nyström value of the left side, when computed.
    pub lhs_direct: Option<C64>,
}

impl ConvergenceRow {
    pub fn new(n: usize, r: f64, lhs_log: C64, rhs_log: C64, error_estimate: f64) -> Self {
        let ratio = crate::wrap_log(lhs_log - rhs_log).exp();
        ConvergenceRow { n, r, lhs_log, rhs_log, ratio, residual: (ratio - ONE).norm(), error_estimate, lhs_direct: None }
    }
}

/// Rows ordered by `n` with a power-law fit of the residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    /// Richardson estimate of the limiting ratio.
    pub extrapolated: Option<C64>,
    /// `p` in `residual ≈ c n^{-p}` (least squares in log-log).
    pub fit_exponent: Option<f64>,
}

impl ConvergenceReport {
    pub fn from_rows(mut rows: Vec<ConvergenceRow>) -> Self {
        rows.sort_by_key(|r| r.n);
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.residual > 0.0 && r.n > 0)
            .map(|r| ((r.n as f64).ln(), r.residual.ln()))
            .collect();
        let fit_exponent = if pts.len() >= 2 {
            let k = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
            (sxx > 0.0).then(|| -sxy / sxx)
        } else {
            None
        };
        let extrapolated = match (rows.len(), fit_exponent) {
            (l, Some(p)) if l >= 2 && p > 0.0 => {
                let (a, b) = (&rows[l - 2], &rows[l - 1]);
                let q = (b.n as f64 / a.n as f64).powf(p);
                Some(b.ratio + (b.ratio - a.ratio) / (q - 1.0))
            }
            (l, _) if l >= 1 => Some(rows[l - 1].ratio),
            _ => None,
        };
        ConvergenceReport { rows, extrapolated, fit_exponent }
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].residual < w[0].residual)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.rows.last().map(|r| r.residual)
    }
}

/// Largest `n` for which [`theorem_ratio`] also runs the direct Nyström check.
pub const DIRECT_MAX_N: usize = 16;

/// `det₂ W_{2n}(σ)/G₂^{2n}` against `det₂ T_n(φ)/G₂^n`.
pub fn theorem_ratio(oracle: &ExactOracle, params: &FhParams, n: usize, tol: f64) -> Result<ConvergenceRow> {
    params.check_strip()?;
    let r = 2.0 * n as f64;
    let rhs = oracle.normalized_det2(params, n)?;
    let lhs = wh_general_rhs(params, r, tol)?;
    let mut row = ConvergenceRow::new(n, r, lhs.log_det, rhs, lhs.error_estimate);
    if n <= DIRECT_MAX_N && !params.is_trivial() {
        row.lhs_direct = Some(wh_normalized_direct(params, r, 1e-6)?.log_det);
    }
    Ok(row)
}

pub fn theorem_sweep(oracle: &ExactOracle, params: &FhParams, ns: &[usize], tol: f64) -> Result<ConvergenceReport> {
    let rows = ns.iter().map(|&n| theorem_ratio(oracle, params, n, tol)).collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_rows(rows))
}

/// `log det W_R(σ_{α,α}) = [log det₂ W_R - R log G₂] + R (log G₂ + k(0))`,
/// with `log G₂ + k(0) = log G`.
fn wh_log_g(alpha: C64) -> Result<C64> {
    let p = FhParams::symmetric(alpha)?;
    let spec = SymbolSpec::WhPure(p);
    if p.is_trivial() {
        return Ok(ZERO);
    }
    let g2 = line_constants(&spec)?.log_g2;
    Ok(g2 + WhKernel::new(&spec)?.limits_at_zero().0)
}

/// `log det W_{2n}(σ_{α,α}) + 2nα` against `log det T_n(φ_{α,α})`.
pub fn corollary_check(oracle: &ExactOracle, alpha: C64, n: usize, tol: f64) -> Result<ConvergenceRow> {
    if alpha.re.abs() >= 0.5 {
        return Err(Error::ParameterStrip("the corollary needs |Re α| < 1/2".into()));
    }
    let p = FhParams::symmetric(alpha)?;
    let r = 2.0 * n as f64;
    let rhs = oracle.log_det(&p, n)?;
    let log_g = wh_log_g(alpha)?;
    let norm = wh_general_rhs(&p, r, tol)?;
    let lhs = norm.log_det + r * log_g + r * alpha;
    let mut row = ConvergenceRow::new(n, r, lhs, rhs, norm.error_estimate);
    if n <= DIRECT_MAX_N / 2 && !p.is_trivial() {
        let spec = SymbolSpec::WhPure(p);
        let d = crate::wienerhopf::wh_det(&spec, r, 1e-6)?;
        row.lhs_direct = Some(d.log_det + r * alpha);
    }
    Ok(row)
}

pub fn corollary_sweep(oracle: &ExactOracle, alpha: C64, ns: &[usize], tol: f64) -> Result<ConvergenceReport> {
    let rows = ns.iter().map(|&n| corollary_check(oracle, alpha, n, tol)).collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_rows(rows))
}
