//! Nyström discretization of Fredholm determinants `det(I - K)` and
//! `det₂(I - K)` for scalar and 2×2 block kernels.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Mat2};
use crate::quadrature::{Node, QuadratureRule};
use crate::C64;
use alloc::vec::Vec;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// What the kernel does near its singular set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    Smooth,
    /// `1/(x+y)` behavior at the corner `x = y = 0`.
    CornerAtOrigin,
    /// Different one-sided limits across `x = y`.
    DiagonalJump,
}

/// Scalar or 2×2 kernel values.
pub trait KernelValue: Copy {
    const DIM: usize;
    fn entry(&self, i: usize, j: usize) -> C64;
    fn average(a: Self, b: Self) -> Self;
}

impl KernelValue for C64 {
    const DIM: usize = 1;
    fn entry(&self, _: usize, _: usize) -> C64 {
        *self
    }
    fn average(a: Self, b: Self) -> Self {
        0.5 * (a + b)
    }
}

impl KernelValue for Mat2 {
    const DIM: usize = 2;
    fn entry(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }
    fn average(a: Self, b: Self) -> Self {
        let mut r = a;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = 0.5 * (a.0[i][j] + b.0[i][j]);
            }
        }
        r
    }
}

/// A quadrature-ready integral kernel.
pub trait Kernel {
    type Value: KernelValue;

    fn eval(&self, x: &Node, y: &Node) -> Self::Value;

    fn singularity(&self) -> Singularity {
        Singularity::Smooth
    }

    /// One-sided limits `(k(x, x-0), k(x, x+0))` for kernels with a diagonal jump.
    fn diagonal_limits(&self, _x: &Node) -> Option<(Self::Value, Self::Value)> {
        None
    }
}

/// A kernel from a closure.
pub struct FnKernel<F> {
    f: F,
    singularity: Singularity,
}

impl<F> FnKernel<F> {
    pub fn new(f: F) -> Self {
        FnKernel { f, singularity: Singularity::Smooth }
    }

    pub fn with_singularity(f: F, singularity: Singularity) -> Self {
        FnKernel { f, singularity }
    }
}

impl<V: KernelValue, F: Fn(&Node, &Node) -> V> Kernel for FnKernel<F> {
    type Value = V;
    fn eval(&self, x: &Node, y: &Node) -> V {
        (self.f)(x, y)
    }
    fn singularity(&self) -> Singularity {
        self.singularity
    }
}

impl<K: Kernel + ?Sized> Kernel for &K {
    type Value = K::Value;
    fn eval(&self, x: &Node, y: &Node) -> K::Value {
        (**self).eval(x, y)
    }
    fn singularity(&self) -> Singularity {
        (**self).singularity()
    }
    fn diagonal_limits(&self, x: &Node) -> Option<(K::Value, K::Value)> {
        (**self).diagonal_limits(x)
    }
}

/// How `k(x, x)` is resolved on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DiagonalPolicy {
    /// Use the evaluator as is.
    Evaluate,
    /// Average of the one-sided limits when the kernel provides them.
    #[default]
    SymmetricAverage,
}

/// Outcome of a Fredholm determinant computation.
#[derive(Debug, Clone, PartialEq)]
pub struct FredholmResult {
    pub log_det: C64,
    pub log_det2: Option<C64>,
    /// Number of quadrature nodes of the final rule.
    pub quadrature_order: usize,
    /// Values at successive refinements, coarsest first.
    pub history: Vec<C64>,
    /// `|exp(v_m - v_2m) - 1|` for the last two refinements, 0 if none.
    pub error_estimate: f64,
}

impl FredholmResult {
    fn single(log_det: C64, log_det2: Option<C64>, order: usize) -> Self {
        FredholmResult { log_det, log_det2, quadrature_order: order, history: alloc::vec![log_det], error_estimate: 0.0 }
    }
}

/// Symmetrically weighted Nyström matrix `W^{1/2} K W^{1/2}`, 2×2 blocks interleaved.
pub fn assemble<K: Kernel>(k: &K, rule: &QuadratureRule, policy: DiagonalPolicy) -> ComplexMatrix {
    let d = K::Value::DIM;
    let n = rule.len();
    let nodes = rule.nodes();
    let sw: Vec<f64> = nodes.iter().map(|n| n.w.sqrt()).collect();
    let mut m = ComplexMatrix::zeros(d * n, d * n);
    for i in 0..n {
        for j in 0..n {
            let v = if i == j && policy == DiagonalPolicy::SymmetricAverage {
                match k.diagonal_limits(&nodes[i]) {
                    Some((l, r)) => K::Value::average(l, r),
                    None => k.eval(&nodes[i], &nodes[j]),
                }
            } else {
                k.eval(&nodes[i], &nodes[j])
            };
            let w = sw[i] * sw[j];
            for a in 0..d {
                for b in 0..d {
                    m[(d * i + a, d * j + b)] = v.entry(a, b) * w;
                }
            }
        }
    }
    m
}

/// `log det(I - K)` on the rule.
pub fn nystrom_det<K: Kernel>(k: &K, rule: &QuadratureRule) -> Result<FredholmResult> {
    let m = assemble(k, rule, DiagonalPolicy::default());
    let log_det = m.identity_minus(ONE).lu()?.log_det();
    Ok(FredholmResult::single(log_det, None, rule.len()))
}

/// `log det(I - K)` together with `log det₂(I - K) = log det(I - K) + tr K`.
pub fn nystrom_det2<K: Kernel>(k: &K, rule: &QuadratureRule, policy: DiagonalPolicy) -> Result<FredholmResult> {
    let m = assemble(k, rule, policy);
    let log_det = m.identity_minus(ONE).lu()?.log_det();
    Ok(FredholmResult::single(log_det, Some(log_det + m.trace()), rule.len()))
}

/// Smallest acceptable LU pivot ratio for `I ∓ A₀`.
pub const NEAR_SINGULAR: f64 = 1e-12;

/// `log det(I - s(I - sA₀)⁻¹A₁)` for `s = ±1`, computed as
/// `log det(I - sA₀ - sA₁) - log det(I - sA₀)`.
pub fn ratio_det<K0: Kernel, K1: Kernel<Value = K0::Value>>(
    a0: &K0,
    a1: &K1,
    rule: &QuadratureRule,
    sign: f64,
) -> Result<FredholmResult> {
    let m0 = assemble(a0, rule, DiagonalPolicy::default());
    let m1 = assemble(a1, rule, DiagonalPolicy::default());
    ratio_det_matrices(&m0, &m1, sign).map(|v| FredholmResult::single(v, None, rule.len()))
}

/// [`ratio_det`] on assembled matrices.
pub fn ratio_det_matrices(m0: &ComplexMatrix, m1: &ComplexMatrix, sign: f64) -> Result<C64> {
    let s = C64::new(sign, 0.0);
    let base = m0.identity_minus(s).lu()?;
    let ratio = base.pivot_ratio();
    if ratio < NEAR_SINGULAR {
        return Err(Error::NearSingular(ratio));
    }
    let mut full = m0.clone();
    full.add_scaled(m1, ONE);
    let top = full.identity_minus(s).lu()?.log_det();
    Ok(top - base.log_det())
}

/// Repeats `eval(order)` with doubling orders until successive values agree.
///
/// Agreement is measured as `|exp(v_m - v_2m) - 1| < tol`. Running past
/// `max_order` returns [`Error::BudgetExhausted`] with the best value.
pub fn refine_until<F>(initial_order: usize, max_order: usize, tol: f64, mut eval: F) -> Result<FredholmResult>
where
    F: FnMut(usize) -> Result<C64>,
{
    assert!(tol > 0.0);
    let mut order = initial_order.max(1);
    let mut history = Vec::new();
    let mut prev = eval(order)?;
    history.push(prev);
    loop {
        let next_order = order * 2;
        if next_order > max_order {
            let estimate = if history.len() >= 2 {
                step_error(history[history.len() - 2], prev)
            } else {
                f64::INFINITY
            };
            return Err(Error::BudgetExhausted { best_re: prev.re, best_im: prev.im, estimate });
        }
        let next = eval(next_order)?;
        history.push(next);
        let estimate = step_error(prev, next);
        order = next_order;
        prev = next;
        if estimate < tol {
            return Ok(FredholmResult {
                log_det: next,
                log_det2: None,
                quadrature_order: order,
                history,
                error_estimate: estimate,
            });
        }
    }
}

fn step_error(a: C64, b: C64) -> f64 {
    (crate::wrap_log(a - b).exp() - ONE).norm()
}
