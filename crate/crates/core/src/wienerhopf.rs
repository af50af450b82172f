//! Finite Wiener-Hopf operators `W_R(σ) = I + K` on `L²(0, R)` with
//! `K(x, y) = k(x - y)`, `k(u) = (1/2π)∫ (σ(ξ) - 1) e^{-iuξ} dξ`.
//!
//! The kernel of `σ_ε` (and of the pure symbol at `ε = 0`) is evaluated from
//! its branch-cut form. Deforming the contour onto the cuts `±i[ε, 1]` gives
//!
//! ```text
//! k(u) = -(sin πβ/π) ∫_ε^1 ((y+ε)/(1+y))^α ((y-ε)/(1-y))^β e^{-uy} dy,   u > 0
//! k(u) = -(sin πα/π) ∫_ε^1 ((y+ε)/(1+y))^β ((y-ε)/(1-y))^α e^{uy} dy,    u < 0
//! ```
//!
//! and [`wh_kernel_oracle`] checks it against direct oscillatory quadrature.

use crate::constants::line_constants;
use crate::error::{Error, Result};
use crate::fredholm::{refine_until, FredholmResult};
use crate::linalg::{lu_logdet, ComplexMatrix};
use crate::quadrature::{composite_gauss, gauss_legendre, geometric_panels, graded_mesh, graded_two_sided_on, Interval};
use crate::symbols::{eval_line, FhParams, SymbolSpec};
use crate::{rpow, C64};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };
const I: C64 = C64 { re: 0.0, im: 1.0 };

fn line_params(spec: &SymbolSpec) -> Result<(FhParams, f64)> {
    spec.validate()?;
    match *spec {
        SymbolSpec::WhPure(p) => Ok((p, 0.0)),
        SymbolSpec::WhReg { params, eps } => Ok((params, eps)),
        _ => Err(Error::WrongVariant("Wiener-Hopf kernels need WhPure or WhReg")),
    }
}

/// Side of `u = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Positive,
    Negative,
}

/// Branch-cut quadrature data for `k`.
#[derive(Debug, Clone)]
pub struct WhKernel {
    spec: SymbolSpec,
    y: Vec<f64>,
    /// weights for `u > 0`, `k(u) = Σ plus_i e^{-u y_i}`
    plus: Vec<C64>,
    /// weights for `u < 0`, `k(u) = Σ minus_i e^{-|u| y_i}`
    minus: Vec<C64>,
}

impl WhKernel {
    pub fn new(spec: &SymbolSpec) -> Result<Self> {
        let (p, eps) = line_params(spec)?;
        let rule = graded_two_sided_on(Interval::new(eps, 1.0), 30, 12, 0.25);
        let mut y = Vec::with_capacity(rule.len());
        let mut plus = Vec::with_capacity(rule.len());
        let mut minus = Vec::with_capacity(rule.len());
        let sa = (PI * p.alpha).sin() / PI;
        let sb = (PI * p.beta).sin() / PI;
        for n in rule.nodes() {
            let lower = (n.x + eps) / (1.0 + n.x);
            let upper = n.from_lo / n.to_hi;
            y.push(n.x);
            plus.push(-sb * rpow(lower, p.alpha) * rpow(upper, p.beta) * n.w);
            minus.push(-sa * rpow(lower, p.beta) * rpow(upper, p.alpha) * n.w);
        }
        Ok(WhKernel { spec: *spec, y, plus, minus })
    }

    pub fn spec(&self) -> &SymbolSpec {
        &self.spec
    }

    /// `k(s·v)` for `v >= 0` on the given side (the limit when `v = 0`).
    pub fn one_sided(&self, v: f64, side: Side) -> C64 {
        let c = match side {
            Side::Positive => &self.plus,
            Side::Negative => &self.minus,
        };
        c.iter().zip(&self.y).map(|(&ci, &yi)| ci * (-v * yi).exp()).sum()
    }

    /// `(k(0+), k(0-))`.
    pub fn limits_at_zero(&self) -> (C64, C64) {
        (self.one_sided(0.0, Side::Positive), self.one_sided(0.0, Side::Negative))
    }

    pub fn has_jump(&self) -> bool {
        let (a, b) = self.limits_at_zero();
        (a - b).norm() > 1e-14 * (1.0 + a.norm())
    }

    pub fn eval(&self, u: f64) -> Result<C64> {
        if u > 0.0 {
            Ok(self.one_sided(u, Side::Positive))
        } else if u < 0.0 {
            Ok(self.one_sided(-u, Side::Negative))
        } else if self.has_jump() {
            Err(Error::EvaluationAtJump)
        } else {
            Ok(self.limits_at_zero().0)
        }
    }

    /// Samples on `u_j = -u_max + j·(2u_max/(count-1))`, skipping nothing:
    /// at `u = 0` the average of the one-sided limits is stored.
    pub fn table(&self, u_max: f64, count: usize) -> WhKernelTable {
        let count = count.max(2);
        let step = 2.0 * u_max / (count - 1) as f64;
        let (kp, km) = self.limits_at_zero();
        let mut grid = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        for j in 0..count {
            let u = -u_max + j as f64 * step;
            let u = if u.abs() < 0.5 * step * 1e-9 { 0.0 } else { u };
            grid.push(u);
            values.push(self.eval(u).unwrap_or(0.5 * (kp + km)));
        }
        WhKernelTable { spec: self.spec, grid, values, zero_plus: kp, zero_minus: km }
    }
}

/// Sampled kernel with its one-sided limits at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct WhKernelTable {
    pub spec: SymbolSpec,
    pub grid: Vec<f64>,
    pub values: Vec<C64>,
    pub zero_plus: C64,
    pub zero_minus: C64,
}

/// `k(u)` from the branch-cut representation.
pub fn wh_kernel(spec: &SymbolSpec, u: f64) -> Result<C64> {
    if spec.is_trivial() {
        spec.validate()?;
        return Ok(ZERO);
    }
    WhKernel::new(spec)?.eval(u)
}

/// `k(u)` by direct quadrature of the Fourier integral, `u != 0`.
///
/// The `1/ξ` and `1/ξ²` terms of `σ - 1` at infinity are removed with
/// `a₁/(ξ-i) + c₂/(ξ²+1)`, whose transforms are known; the remainder is
/// `O(ξ⁻³)` and is integrated on `[-L, L]` with panels graded toward 0.
pub fn wh_kernel_oracle(spec: &SymbolSpec, u: f64) -> Result<C64> {
    let (p, eps) = line_params(spec)?;
    if u == 0.0 {
        return Err(Error::EvaluationAtJump);
    }
    let d = p.alpha - p.beta;
    let a1 = I * d * (1.0 - eps);
    let a2 = -(p.alpha + p.beta) * (1.0 - eps * eps) * 0.5 - d * d * (1.0 - eps) * (1.0 - eps) * 0.5;
    let c2 = a2 - I * a1;
    let remainder = |xi: f64| -> Result<C64> {
        let s = eval_line(spec, xi)? - 1.0;
        Ok(s - a1 / C64::new(xi, -1.0) - c2 / (xi * xi + 1.0))
    };
    let inner = graded_mesh(40, 16, 0.25);
    let width = (0.5f64).min(1.0 / u.abs());
    let len = 400.0;
    let outer = composite_gauss(16, ((len - 1.0) / width).ceil() as usize, Interval::new(1.0, len));
    let mut acc = ZERO;
    for sgn in [1.0, -1.0] {
        for n in inner.nodes().iter().chain(outer.nodes()) {
            let xi = sgn * n.x;
            acc += remainder(xi)? * C64::from_polar(n.w, -u * xi);
        }
    }
    let mut k = acc / (2.0 * PI);
    if u < 0.0 {
        k += a1 * I * u.exp();
    }
    k += c2 * 0.5 * (-u.abs()).exp();
    Ok(k)
}

/// How the diagonal panel blocks of `W_R` are discretized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalTreatment {
    /// Plain Nyström with `k(0)` replaced by the mean of the one-sided limits.
    SymmetricAverage,
    /// Product integration on each diagonal panel plus exact `tr K` and
    /// `tr K²` in place of their discrete counterparts.
    Corrected,
}

/// Uniform panels of width `panel_width`, `order` Gauss points each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhScheme {
    pub panel_width: f64,
    pub order: usize,
    pub diagonal: DiagonalTreatment,
}

impl Default for WhScheme {
    fn default() -> Self {
        WhScheme { panel_width: 0.5, order: 16, diagonal: DiagonalTreatment::Corrected }
    }
}

/// Symmetrically weighted Nyström matrix of `K` on `(0, R)`.
pub fn build_kernel_matrix(kernel: &WhKernel, r: f64, scheme: &WhScheme) -> Result<ComplexMatrix> {
    if !(r > 0.0) {
        return Err(Error::InvalidParameter("R must be positive".into()));
    }
    let m = scheme.order;
    let panels = (r / scheme.panel_width).round().max(1.0) as usize;
    let pw = r / panels as f64;
    let base = gauss_legendre(m, Interval::new(0.0, pw));
    let t: Vec<f64> = base.points().collect();
    let w: Vec<f64> = base.weights().collect();
    let q = kernel.y.len();

    // e^{-(t_a - t_b) y_i}, row a·m + b
    let shift = ComplexMatrix::from_fn(q, m * m, |i, ab| C64::new((-(t[ab / m] - t[ab % m]) * kernel.y[i]).exp(), 0.0));
    // e^{-d·pw·y_i} times the cut weights
    let far = |c: &[C64]| {
        ComplexMatrix::from_fn(panels, q, |d, i| c[i] * (-(d as f64) * pw * kernel.y[i]).exp())
    };
    let tp = far(&kernel.plus).matmul(&shift)?;
    let tm = far(&kernel.minus).matmul(&shift)?;

    let diag = diagonal_block(kernel, &base, scheme.diagonal)?;
    let n = panels * m;
    let mut out = ComplexMatrix::zeros(n, n);
    for pi in 0..panels {
        for pj in 0..panels {
            for a in 0..m {
                for b in 0..m {
                    let v = if pi == pj {
                        diag[(a, b)]
                    } else if pi > pj {
                        tp[(pi - pj, a * m + b)] * (w[a] * w[b]).sqrt()
                    } else {
                        // |u| = d·pw + t_b - t_a
                        tm[(pj - pi, b * m + a)] * (w[a] * w[b]).sqrt()
                    };
                    out[(pi * m + a, pj * m + b)] = v;
                }
            }
        }
    }
    Ok(out)
}

fn diagonal_block(kernel: &WhKernel, base: &crate::QuadratureRule, how: DiagonalTreatment) -> Result<ComplexMatrix> {
    let m = base.len();
    let t: Vec<f64> = base.points().collect();
    let w: Vec<f64> = base.weights().collect();
    let pw = base.domain().len();
    match how {
        DiagonalTreatment::SymmetricAverage => {
            let (kp, km) = kernel.limits_at_zero();
            Ok(ComplexMatrix::from_fn(m, m, |a, b| {
                let v = if a == b {
                    0.5 * (kp + km)
                } else if a > b {
                    kernel.one_sided(t[a] - t[b], Side::Positive)
                } else {
                    kernel.one_sided(t[b] - t[a], Side::Negative)
                };
                v * (w[a] * w[b]).sqrt()
            }))
        }
        DiagonalTreatment::Corrected => {
            // A_ab = ∫_panel k(t_a - y) ℓ_b(y) dy, then W^{1/2} A W^{-1/2}
            let bary: Vec<f64> = (0..m)
                .map(|j| {
                    let mut p = 1.0;
                    for k in 0..m {
                        if k != j {
                            p *= t[j] - t[k];
                        }
                    }
                    1.0 / p
                })
                .collect();
            let lagrange = |y: f64, out: &mut [f64]| {
                let mut full = 1.0;
                for k in 0..m {
                    full *= y - t[k];
                }
                for j in 0..m {
                    let d = y - t[j];
                    out[j] = if d == 0.0 {
                        let mut p = 1.0;
                        for k in 0..m {
                            if k != j {
                                p *= y - t[k];
                            }
                        }
                        p * bary[j]
                    } else {
                        full / d * bary[j]
                    };
                }
            };
            let sub = 24;
            let mut a = ComplexMatrix::zeros(m, m);
            let mut ell = vec![0.0; m];
            for i in 0..m {
                for (lo, hi, side) in [(0.0, t[i], Side::Positive), (t[i], pw, Side::Negative)] {
                    let r = gauss_legendre(sub, Interval::new(lo, hi));
                    for nd in r.nodes() {
                        let v = match side {
                            Side::Positive => kernel.one_sided(nd.to_hi, Side::Positive),
                            Side::Negative => kernel.one_sided(nd.from_lo, Side::Negative),
                        } * nd.w;
                        lagrange(nd.x, &mut ell);
                        for b in 0..m {
                            a[(i, b)] += v * ell[b];
                        }
                    }
                }
            }
            Ok(ComplexMatrix::from_fn(m, m, |i, b| a[(i, b)] * (w[i] / w[b]).sqrt()))
        }
    }
}

/// `I + K` on `(0, R)`.
pub fn build_wr(spec: &SymbolSpec, r: f64, scheme: &WhScheme) -> Result<ComplexMatrix> {
    let kernel = WhKernel::new(spec)?;
    let mut m = build_kernel_matrix(&kernel, r, scheme)?;
    for i in 0..m.rows() {
        m[(i, i)] += ONE;
    }
    Ok(m)
}

/// `tr K² = 2 ∫₀^R (R - u) k(u) k(-u) du`.
pub fn trace_k2(kernel: &WhKernel, r: f64) -> C64 {
    let panels = r.ceil().max(1.0) as usize;
    let rule = composite_gauss(16, panels, Interval::new(0.0, r));
    2.0 * rule.integrate_nodes(|n| {
        n.to_hi * kernel.one_sided(n.x, Side::Positive) * kernel.one_sided(n.x, Side::Negative)
    })
}

/// `log det₂ W_R(σ)` for one discretization.
pub fn wh_log_det2_with(spec: &SymbolSpec, r: f64, scheme: &WhScheme) -> Result<C64> {
    if spec.is_trivial() {
        spec.validate()?;
        return Ok(ZERO);
    }
    let kernel = WhKernel::new(spec)?;
    let m = build_kernel_matrix(&kernel, r, scheme)?;
    let tr = m.trace();
    let mut wr = m.clone();
    for i in 0..wr.rows() {
        wr[(i, i)] += ONE;
    }
    let ld = lu_logdet(&wr)?;
    match scheme.diagonal {
        DiagonalTreatment::SymmetricAverage => Ok(ld - tr),
        DiagonalTreatment::Corrected => {
            let n = m.rows();
            let mut tr2 = ZERO;
            for i in 0..n {
                for j in 0..n {
                    tr2 += m[(i, j)] * m[(j, i)];
                }
            }
            Ok(ld - tr + 0.5 * tr2 - 0.5 * trace_k2(&kernel, r))
        }
    }
}

/// `log det₂ W_R(σ)`, refining the Gauss order per panel until successive
/// values agree to `tol`.
pub fn wh_det2(spec: &SymbolSpec, r: f64, tol: f64) -> Result<FredholmResult> {
    let pw = if r <= 8.0 { 0.5 } else { 1.0 };
    refine_until(8, 32, tol, |m| {
        wh_log_det2_with(spec, r, &WhScheme { panel_width: pw, order: m, diagonal: DiagonalTreatment::Corrected })
    })
}

/// `lim_{ε→0} log det₂ W_R(σ_ε)` from three values of `ε` in geometric
/// progression, by Richardson extrapolation with the observed order.
pub fn wh_det2_eps_limit(params: &FhParams, r: f64, eps: [f64; 3], tol: f64) -> Result<C64> {
    let v = eps
        .iter()
        .map(|&e| wh_det2(&SymbolSpec::WhReg { params: *params, eps: e }, r, tol).map(|x| x.log_det))
        .collect::<Result<Vec<_>>>()?;
    let q = eps[0] / eps[1];
    let (d1, d2) = (v[1] - v[0], v[2] - v[1]);
    if d2.norm() == 0.0 {
        return Ok(v[2]);
    }
    let rate = d1.norm() / d2.norm();
    if !(rate > 1.0) || !((eps[1] / eps[2] - q).abs() < 1e-9 * q) {
        return Err(Error::InvalidParameter("ε values must shrink geometrically with converging determinants".into()));
    }
    Ok(v[2] + d2 / (rate - 1.0))
}

/// `log det W_R(σ)` for `α = β`, where `K` is trace class:
/// `log det = log det₂ + R k(0)`.
pub fn wh_det(spec: &SymbolSpec, r: f64, tol: f64) -> Result<FredholmResult> {
    let (p, _) = line_params(spec)?;
    if !p.is_symmetric() {
        return Err(Error::WrongVariant("det W_R needs alpha = beta; use det2"));
    }
    let k0 = if p.is_trivial() { ZERO } else { WhKernel::new(spec)?.limits_at_zero().0 };
    let mut res = wh_det2(spec, r, tol)?;
    let shift = r * k0;
    res.log_det2 = Some(res.log_det);
    res.log_det += shift;
    res.history.iter_mut().for_each(|v| *v += shift);
    Ok(res)
}

/// Half-line Hankel matrix `W^{1/2} h(s_i + s_j) W^{1/2}` with
/// `h(v) = (sin πα/π) ∫_ε^1 ((y+ε)/(y-ε))^α ((1-y)/(1+y))^α e^{-(R+v)y} dy`.
fn hankel_matrix(alpha: C64, eps: f64, r: f64) -> Result<ComplexMatrix> {
    let cut = graded_two_sided_on(Interval::new(eps, 1.0), 30, 12, 0.25);
    let s = (PI * alpha).sin() / PI;
    let weights: Vec<C64> = cut
        .nodes()
        .iter()
        .map(|n| {
            let f = rpow((n.x + eps) / n.from_lo, alpha) * rpow(n.to_hi / (1.0 + n.x), alpha);
            s * f * n.w * (-r * n.x).exp()
        })
        .collect();
    let half = geometric_panels(16, 0.5, 1.5, 36.0 / eps);
    let q = cut.len();
    let sw: Vec<f64> = half.weights().map(|w| w.sqrt()).collect();
    let e = ComplexMatrix::from_fn(half.len(), q, |i, k| weights[k] * (-half.node(i).x * cut.node(k).x).exp() * sw[i]);
    let et = ComplexMatrix::from_fn(q, half.len(), |k, j| C64::new((-half.node(j).x * cut.node(k).x).exp() * sw[j], 0.0));
    e.matmul(&et)
}

fn bowh_parts(spec: &SymbolSpec, r: f64) -> Result<(crate::constants::LimitConstants, C64)> {
    let SymbolSpec::WhReg { params, eps } = *spec else {
        return Err(Error::WrongVariant("the line Borodin-Okounkov identity needs WhReg"));
    };
    spec.validate()?;
    if !params.is_symmetric() {
        return Err(Error::WrongVariant("the line Borodin-Okounkov identity needs alpha = beta"));
    }
    let k = line_constants(spec)?;
    if params.is_trivial() {
        return Ok((k, ZERO));
    }
    let h = hankel_matrix(params.alpha, eps, r)?;
    let h2 = h.matmul(&h)?;
    Ok((k, lu_logdet(&h2.identity_minus(ONE))?))
}

/// `log[G^R E det(I - K_R)]` with `K_R = H²`.
pub fn bowh_rhs(spec: &SymbolSpec, r: f64) -> Result<C64> {
    let (k, det) = bowh_parts(spec, r)?;
    Ok(r * k.log_g + k.log_e.ok_or(Error::DivergentE)? + det)
}

/// `log[G₂^R E det(I - K_R)]`.
pub fn bowh_rhs_reg(spec: &SymbolSpec, r: f64) -> Result<C64> {
    let (k, det) = bowh_parts(spec, r)?;
    Ok(r * k.log_g2 + k.log_e.ok_or(Error::DivergentE)? + det)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn reg(a: f64, b: f64, eps: f64) -> SymbolSpec {
        SymbolSpec::WhReg { params: FhParams::real(a, b).unwrap(), eps }
    }

    #[test]
    fn trivial_kernel() {
        let s = reg(0.0, 0.0, 0.3);
        assert_eq!(wh_kernel(&s, 1.0).unwrap(), ZERO);
        assert_eq!(wh_log_det2_with(&s, 4.0, &WhScheme::default()).unwrap(), ZERO);
        let m = build_wr(&s, 3.0, &WhScheme::default()).unwrap();
        assert!((m.clone().identity_minus(ONE)).norm() == 0.0 || m == ComplexMatrix::identity(m.rows()));
    }

    #[test]
    fn kernel_matches_oracle() {
        for spec in [
            reg(0.3, 0.3, 0.2),
            reg(0.2, -0.1, 0.1),
            SymbolSpec::WhReg { params: FhParams::new(c(0.1, 0.3), c(0.25, 0.0)).unwrap(), eps: 0.3 },
            SymbolSpec::WhPure(FhParams::real(0.25, 0.1).unwrap()),
        ] {
            let k = WhKernel::new(&spec).unwrap();
            for u in [-3.0, -1.0, -0.2, 0.3, 1.0, 2.5] {
                let a = k.eval(u).unwrap();
                let b = wh_kernel_oracle(&spec, u).unwrap();
                assert!((a - b).norm() < 1e-7, "{spec:?} u={u}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn symmetric_kernel_real_even() {
        let k = WhKernel::new(&reg(0.3, 0.3, 0.2)).unwrap();
        for u in [0.1, 0.7, 3.0] {
            let a = k.eval(u).unwrap();
            let b = k.eval(-u).unwrap();
            assert!(a.im.abs() < 1e-15 && (a - b).norm() < 1e-15);
        }
        assert!(!k.has_jump());
    }

    #[test]
    fn jump_at_zero() {
        let spec = SymbolSpec::WhPure(FhParams::real(0.3, 0.1).unwrap());
        let k = WhKernel::new(&spec).unwrap();
        assert_eq!(k.eval(0.0), Err(Error::EvaluationAtJump));
        let (kp, km) = k.limits_at_zero();
        assert!((kp - km - c(0.2, 0.0)).norm() < 1e-10);
        // sided limits of the oracle
        let h = 1e-4;
        let op = wh_kernel_oracle(&spec, h).unwrap();
        let om = wh_kernel_oracle(&spec, -h).unwrap();
        assert!(((op - om) - (kp - km)).norm() < 1e-3);
        assert!((op - kp).norm() < 1e-3 && (om - km).norm() < 1e-3);
    }

    #[test]
    fn pure_kernel_tail() {
        let p = FhParams::real(0.2, 0.1).unwrap();
        let k = WhKernel::new(&SymbolSpec::WhPure(p)).unwrap();
        for side in [1.0, -1.0] {
            let a = k.eval(side * 50.0).unwrap().norm();
            let b = k.eval(side * 200.0).unwrap().norm();
            let slope = (b / a).ln() / 4f64.ln();
            assert!((slope + 1.3).abs() < 0.15, "{slope}");
        }
    }

    #[test]
    fn trace_identity() {
        // log det - log det₂ = R·k(0) = R (1/2π)∫(σ-1)
        let a = 0.25;
        let eps = 0.1;
        let spec = reg(a, a, eps);
        let r = 6.0;
        let d = wh_det(&spec, r, 1e-10).unwrap();
        let rule = graded_mesh(40, 16, 0.25);
        let outer = composite_gauss(16, 16, Interval::UNIT);
        let mut mean = 0.0;
        for n in rule.nodes() {
            mean += 2.0 * n.w * (eval_line(&spec, n.x).unwrap().re - 1.0);
        }
        for n in outer.nodes() {
            mean += 2.0 * n.w / (n.x * n.x) * (eval_line(&spec, 1.0 / n.x).unwrap().re - 1.0);
        }
        mean /= 2.0 * PI;
        assert!((d.log_det - d.log_det2.unwrap() - c(r * mean, 0.0)).norm() < 1e-7);
    }

    #[test]
    fn symmetric_matrix_for_real_symmetric_symbol() {
        let m = build_wr(&reg(0.2, 0.2, 0.3), 4.0, &WhScheme { diagonal: DiagonalTreatment::SymmetricAverage, ..Default::default() })
            .unwrap();
        for i in 0..m.rows() {
            for j in 0..m.rows() {
                assert!((m[(i, j)] - m[(j, i)]).norm() < 1e-14);
                assert!(m[(i, j)].im == 0.0);
            }
        }
    }

    #[test]
    fn bowh_identity_example() {
        let spec = reg(0.2, 0.2, 0.05);
        let lhs = wh_det(&spec, 6.0, 1e-10).unwrap();
        let rhs = bowh_rhs(&spec, 6.0).unwrap();
        assert!(crate::toeplitz::relative_residual(lhs.log_det, rhs) < 1e-5);
        let rhs2 = bowh_rhs_reg(&spec, 6.0).unwrap();
        assert!(crate::toeplitz::relative_residual(lhs.log_det2.unwrap(), rhs2) < 1e-5);
        assert_eq!(bowh_rhs(&reg(0.0, 0.0, 0.2), 5.0).unwrap(), ZERO);
    }

    #[test]
    fn pure_det2_is_the_regularized_limit() {
        let p = FhParams::real(0.25, 0.25).unwrap();
        let pure = wh_det2(&SymbolSpec::WhPure(p), 8.0, 1e-10).unwrap().log_det;
        let lim = wh_det2_eps_limit(&p, 8.0, [1e-2, 1e-3, 1e-4], 1e-10).unwrap();
        assert!((pure - lim).norm() < 5e-6, "{}", (pure - lim).norm());
    }

    #[test]
    fn g2_from_kernel_limits() {
        // log G₂ = -(α+β)(1-ε)/2 - (k(0+) + k(0-))/2
        for (a, b, eps) in [(c(0.0, 0.3), c(0.1, 0.0), 0.0), (c(0.2, 0.1), c(0.2, 0.1), 0.0), (c(0.25, 0.0), c(-0.1, 0.0), 0.1)] {
            let p = FhParams::new(a, b).unwrap();
            let spec = if eps == 0.0 { SymbolSpec::WhPure(p) } else { SymbolSpec::WhReg { params: p, eps } };
            let (kp, km) = WhKernel::new(&spec).unwrap().limits_at_zero();
            let g2 = line_constants(&spec).unwrap().log_g2;
            assert!((g2 + (a + b) * (1.0 - eps) * 0.5 + 0.5 * (kp + km)).norm() < 1e-11);
        }
    }

    #[test]
    fn det2_slope_tends_to_log_g2() {
        let spec = reg(0.2, 0.2, 0.2);
        let g2 = line_constants(&spec).unwrap().log_g2;
        let v: Vec<C64> = [8.0, 16.0, 32.0].iter().map(|&r| wh_det2(&spec, r, 1e-9).unwrap().log_det).collect();
        let s1 = (v[1] - v[0]) / 8.0;
        let s2 = (v[2] - v[1]) / 16.0;
        assert!((s2 - g2).norm() < (s1 - g2).norm() + 1e-12);
        assert!((s2 - g2).norm() < 1e-6);
    }

    #[test]
    fn diagonal_treatments_agree_across_the_jump() {
        let spec = reg(0.3, 0.1, 0.2);
        let at = |m, d| wh_log_det2_with(&spec, 8.0, &WhScheme { panel_width: 0.5, order: m, diagonal: d }).unwrap();
        let fine = at(32, DiagonalTreatment::Corrected);
        let plain: Vec<f64> = [8, 16, 32].iter().map(|&m| (at(m, DiagonalTreatment::SymmetricAverage) - fine).norm()).collect();
        let corr: Vec<f64> = [8, 16].iter().map(|&m| (at(m, DiagonalTreatment::Corrected) - fine).norm()).collect();
        // the plain scheme is first order: within its own refinement step of the corrected value
        assert!(plain[2] < 1.5 * (plain[1] - plain[2]) && plain[2] < 1e-3);
        assert!((plain[0] / plain[1] - 2.0).abs() < 0.1);
        assert!(corr[0] < 1e-6 && corr[1] < corr[0]);
    }
}
