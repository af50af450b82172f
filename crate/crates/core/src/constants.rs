//! The limit constants G, E and G₂ of circle and line symbols, the
//! matrix factor det W(τ)W(τ⁻¹) and the constant C(α, β).

use crate::error::{Error, Result};
use crate::linalg::{lu_logdet, ComplexMatrix};
use crate::quadrature::{composite_gauss, geometric_panels, graded_mesh, Interval};
use crate::symbols::{
    circle_fourier_coeffs, log_line, tau_off_diagonal, wh_reg_tau, FhParams, LaurentProduct, SechTransform, Sign,
    SymbolSpec, TAIL_TOL,
};
use crate::C64;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// G, E and G₂ in log scale, with a short note on how each was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitConstants {
    pub log_g: C64,
    /// `None` when E diverges (pure Fisher-Hartwig symbols).
    pub log_e: Option<C64>,
    pub log_g2: C64,
    pub notes: Provenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Provenance {
    pub g: &'static str,
    pub e: &'static str,
    pub g2: &'static str,
}

impl LimitConstants {
    fn trivial() -> Self {
        LimitConstants {
            log_g: ZERO,
            log_e: Some(ZERO),
            log_g2: ZERO,
            notes: Provenance { g: "symbol is 1", e: "symbol is 1", g2: "symbol is 1" },
        }
    }

    pub fn g(&self) -> C64 {
        self.log_g.exp()
    }

    pub fn e(&self) -> Result<C64> {
        self.log_e.map(|v| v.exp()).ok_or(Error::DivergentE)
    }

    pub fn g2(&self) -> C64 {
        self.log_g2.exp()
    }
}

/// Constants of a circle symbol.
pub fn circle_constants(spec: &SymbolSpec) -> Result<LimitConstants> {
    spec.validate()?;
    if spec.is_trivial() {
        return Ok(LimitConstants::trivial());
    }
    match *spec {
        SymbolSpec::ToeplitzReg { params, r } => {
            // (log φ)_k = -α r^k/k for k > 0 and -β r^{|k|}/|k| for k < 0
            let mut acc = ZERO;
            let mut k = 1usize;
            let r2 = r * r;
            loop {
                let term = r2.powi(k as i32) / k as f64;
                acc += term;
                // Σ_{j>k} r^{2j}/j <= r^{2(k+1)} / ((k+1)(1-r²))
                let tail = r2.powi(k as i32 + 1) / ((k + 1) as f64 * (1.0 - r2));
                if tail < 1e-17 * acc.norm().max(1e-300) || tail < 1e-300 {
                    break;
                }
                k += 1;
                if k > crate::symbols::TRUNCATION_BUDGET {
                    return Err(Error::DivergentE);
                }
            }
            let phi0 = LaurentProduct::new(params.alpha, params.beta, r, 0, TAIL_TOL)?.coefficient(0);
            Ok(LimitConstants {
                log_g: ZERO,
                log_e: Some(params.alpha * params.beta * acc),
                log_g2: ONE - phi0,
                notes: Provenance {
                    g: "(log φ)_0 = 0 from the factor series of log(1 - rz), log(1 - r/z)",
                    e: "Σ k (log φ)_k (log φ)_{-k} with geometric tail bound",
                    g2: "(log φ)_0 - φ_0 + 1 with φ_0 from the binomial convolution",
                },
            })
        }
        SymbolSpec::ToeplitzPure(_) => {
            let phi0 = circle_fourier_coeffs(spec, 0, 0)?.get(0);
            Ok(LimitConstants {
                log_g: ZERO,
                log_e: None,
                log_g2: ONE - phi0,
                notes: Provenance {
                    g: "(log φ)_0 = 0: log φ = α log(1-z) + β log(1-1/z) has no constant term",
                    e: "diverges: k (log φ)_k (log φ)_{-k} = αβ/k",
                    g2: "(log φ)_0 - φ_0 + 1 with certified φ_0",
                },
            })
        }
        _ => Err(Error::WrongVariant("circle_constants needs a circle symbol")),
    }
}

/// `(1/2π)∫ (log σ - σ + 1) dξ` on the line: graded meshes on `|ξ| < 1`
/// and `ξ = 1/u` outside.
fn line_g2_direct(spec: &SymbolSpec) -> Result<C64> {
    let inner = graded_mesh(40, 16, 0.25);
    let outer = composite_gauss(16, 8, Interval::UNIT);
    let f = |xi: f64| -> Result<C64> {
        let l = log_line(spec, xi)?;
        Ok(l - l.exp() + 1.0)
    };
    let mut acc = ZERO;
    for sgn in [1.0, -1.0] {
        for n in inner.nodes() {
            acc += f(sgn * n.x)? * n.w;
        }
        for n in outer.nodes() {
            let u = n.x;
            acc += f(sgn / u)? * (n.w / (u * u));
        }
    }
    Ok(acc / (2.0 * PI))
}

/// Constants of a line symbol (scalar variants and the matrix τ).
pub fn line_constants(spec: &SymbolSpec) -> Result<LimitConstants> {
    spec.validate()?;
    if spec.is_trivial() {
        return Ok(LimitConstants::trivial());
    }
    match *spec {
        SymbolSpec::WhReg { params, eps } => {
            let log_e = line_e_integral(|x| wh_reg_tau(&params, eps, x), eps)?;
            Ok(LimitConstants {
                log_g: wh_reg_tau(&params, eps, 0.0),
                log_e: Some(log_e),
                log_g2: line_g2_direct(spec)?,
                notes: Provenance {
                    g: "τ(0) as the mean of the one-sided branch-cut limits",
                    e: "∫ x τ(x)τ(-x) dx on geometric panels with e^{-2εx} envelope",
                    g2: "direct integral of log σ - σ + 1",
                },
            })
        }
        SymbolSpec::WhPure(params) => Ok(LimitConstants {
            log_g: wh_reg_tau(&params, 0.0, 0.0),
            log_e: None,
            log_g2: line_g2_direct(spec)?,
            notes: Provenance {
                g: "τ(0) as the mean of the one-sided branch-cut limits",
                e: "diverges: x τ(x)τ(-x) ~ αβ/x",
                g2: "direct integral of log σ - σ + 1",
            },
        }),
        SymbolSpec::Sech { sign, a } => {
            let t = SechTransform::new(sign, a);
            let log_e = line_e_integral(|x| t.tau(x), t.strip())?;
            Ok(LimitConstants {
                log_g: t.tau(0.0),
                log_e: Some(log_e),
                log_g2: t.log_g2(),
                notes: Provenance {
                    g: "trapezoid mean of log σ",
                    e: "∫ x τ(x)τ(-x) dx, τ by trapezoid transform",
                    g2: "trapezoid integral of log σ - σ + 1",
                },
            })
        }
        SymbolSpec::MatrixTau(params) => {
            let log_g = matrix_log_g(&params)?;
            Ok(LimitConstants {
                log_g,
                log_e: Some(log_matrix_e_factor(&params)?),
                log_g2: log_g,
                notes: Provenance {
                    g: "trapezoid mean of log det τ",
                    e: "det(I - H(τ)H(τ̃⁻¹)) by block Nyström",
                    g2: "equals G since tr(τ - I) = 0",
                },
            })
        }
        _ => Err(Error::WrongVariant("line_constants needs a line symbol")),
    }
}

/// `∫₀^∞ x τ(x) τ(-x) dx` for τ decaying like `e^{-rate |x|}`.
fn line_e_integral<F: Fn(f64) -> C64>(tau: F, rate: f64) -> Result<C64> {
    if !(rate > 0.0) {
        return Err(Error::DivergentE);
    }
    // envelope x e^{-2 rate x} below 1e-16
    let end = (40.0 / rate).max(20.0);
    let rule = geometric_panels(16, 0.5, 1.25, end);
    Ok(rule.integrate_nodes(|n| tau(n.x) * tau(-n.x) * n.x))
}

/// `E(1 - s sech πξ) · E(1 + s sech πξ)` with `s = sin πα`.
pub fn sech_e_pair(alpha: C64) -> Result<C64> {
    Ok(log_sech_e_pair(alpha)?.exp())
}

pub fn log_sech_e_pair(alpha: C64) -> Result<C64> {
    let minus = line_constants(&SymbolSpec::Sech { sign: Sign::Minus, a: alpha })?;
    let plus = line_constants(&SymbolSpec::Sech { sign: Sign::Plus, a: alpha })?;
    Ok(minus.log_e.ok_or(Error::DivergentE)? + plus.log_e.ok_or(Error::DivergentE)?)
}

/// `(1/2π)∫ log det τ(ξ) dξ`.
fn matrix_log_g(p: &FhParams) -> Result<C64> {
    let h = 0.005;
    let mut acc = ZERO;
    let half = 3000;
    for k in -half..=half {
        let xi = k as f64 * h;
        let (a12, a21) = tau_off_diagonal(p, xi);
        let d = ONE - a12 * a21;
        if d.norm() < 1e-13 {
            return Err(Error::ZeroDeterminantSymbol);
        }
        acc += d.ln();
    }
    Ok(acc * h / (2.0 * PI))
}

/// Distance from the real axis to the nearest singularity of τ and of τ⁻¹.
fn tau_strips(p: &FhParams) -> (f64, f64) {
    let c = 0.5 * (p.alpha - p.beta);
    // poles: cosh π(ξ ± i c) = 0  =>  ξ = ∓ i c + i(k + 1/2)
    let mut d_tau = f64::INFINITY;
    for k in -2..=2 {
        for s in [1.0, -1.0] {
            let xi = -s * C64::new(0.0, 1.0) * c + C64::new(0.0, k as f64 + 0.5);
            d_tau = d_tau.min(xi.im.abs());
        }
    }
    // zeros of det τ: cosh² πξ = sin² πc + sin πα sin πβ
    let sc = (PI * c).sin();
    let w = sc * sc + (PI * p.alpha).sin() * (PI * p.beta).sin();
    let mut d_inv = d_tau;
    for root in [w.sqrt(), -w.sqrt()] {
        let base = root.acosh() / PI;
        for s in [1.0, -1.0] {
            for k in -1..=1 {
                let xi = s * base + C64::new(0.0, 2.0 * k as f64);
                d_inv = d_inv.min(xi.im.abs());
            }
        }
    }
    (d_tau, d_inv)
}

/// `det W(τ) W(τ⁻¹) = det(I - H(τ) H(τ̃⁻¹))`.
pub fn matrix_e_factor(p: &FhParams) -> Result<C64> {
    Ok(log_matrix_e_factor(p)?.exp())
}

pub fn log_matrix_e_factor(p: &FhParams) -> Result<C64> {
    p.check_strip()?;
    if p.is_trivial() {
        return Ok(ZERO);
    }
    let (d_tau, d_inv) = tau_strips(p);
    if d_inv < 1e-3 {
        return Err(Error::ZeroDeterminantSymbol);
    }
    // Half-line truncation and uniform panels of width 2.
    let x_end = (36.0 / (d_tau + d_inv)).clamp(16.0, 120.0);
    let width = 2.0;
    let panels = (x_end / width).ceil() as usize;
    let m = 16;
    let rule = composite_gauss(m, panels, Interval::new(0.0, panels as f64 * width));
    let base: Vec<(f64, f64)> = rule.nodes()[..m].iter().map(|n| (n.x, n.w)).collect();

    // ξ grid for the Fourier transforms of τ - I and τ⁻¹ - I.
    let lim = 14.0;
    let period = 2.0 * panels as f64 * width + 40.0 / d_inv + 10.0;
    let h = 2.0 * PI / period;
    let count = (2.0 * lim / h).ceil() as usize + 1;
    let xi0 = -0.5 * (count - 1) as f64 * h;
    // f[k] = (τ12, τ21, inv11, inv12, inv21, inv22) minus identity
    let mut f: Vec<[C64; 6]> = Vec::with_capacity(count);
    for k in 0..count {
        let xi = xi0 + k as f64 * h;
        let (a12, a21) = tau_off_diagonal(p, xi);
        let d = ONE - a12 * a21;
        if d.norm() < 1e-13 {
            return Err(Error::ZeroDeterminantSymbol);
        }
        let di = ONE / d;
        f.push([a12, a21, di - 1.0, -a12 * di, -a21 * di, di - 1.0]);
    }

    // Transforms at every distinct node sum x_i + x_j = (p+q)·width + t_a + t_b.
    let sums = 2 * panels - 1;
    let idx = |s: usize, a: usize, b: usize| (s * m + a) * m + b;
    let mut k_tau = vec![[ZERO; 2]; sums * m * m];
    let mut k_inv = vec![[ZERO; 4]; sums * m * m];
    let scale = h / (2.0 * PI);
    for s in 0..sums {
        for a in 0..m {
            for b in a..m {
                let u = s as f64 * width + base[a].0 + base[b].0;
                let mut t = [ZERO; 2];
                let mut v = [ZERO; 4];
                // e^{-iuξ} for τ, e^{+iuξ} for the reflected τ̃⁻¹
                let step = C64::from_polar(1.0, -u * h);
                let mut rot = C64::from_polar(1.0, -u * xi0);
                for (k, fk) in f.iter().enumerate() {
                    let rc = rot.conj();
                    t[0] += fk[0] * rot;
                    t[1] += fk[1] * rot;
                    for e in 0..4 {
                        v[e] += fk[2 + e] * rc;
                    }
                    rot *= step;
                    if k % 64 == 63 {
                        rot = C64::from_polar(1.0, -u * (xi0 + (k + 1) as f64 * h));
                    }
                }
                for e in 0..2 {
                    t[e] *= scale;
                }
                for e in 0..4 {
                    v[e] *= scale;
                }
                k_tau[idx(s, a, b)] = t;
                k_tau[idx(s, b, a)] = t;
                k_inv[idx(s, a, b)] = v;
                k_inv[idx(s, b, a)] = v;
            }
        }
    }

    let n = rule.len();
    let sw: Vec<f64> = rule.weights().map(|w| w.sqrt()).collect();
    let mut h1 = ComplexMatrix::zeros(2 * n, 2 * n);
    let mut h2 = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        let (pi, ai) = (i / m, i % m);
        for j in 0..n {
            let (pj, aj) = (j / m, j % m);
            let key = idx(pi + pj, ai, aj);
            let w = sw[i] * sw[j];
            let t = k_tau[key];
            let v = k_inv[key];
            h1[(2 * i, 2 * j + 1)] = t[0] * w;
            h1[(2 * i + 1, 2 * j)] = t[1] * w;
            h2[(2 * i, 2 * j)] = v[0] * w;
            h2[(2 * i, 2 * j + 1)] = v[1] * w;
            h2[(2 * i + 1, 2 * j)] = v[2] * w;
            h2[(2 * i + 1, 2 * j + 1)] = v[3] * w;
        }
    }
    let prod = h1.matmul(&h2)?;
    lu_logdet(&prod.identity_minus(ONE))
}

/// `C(α, β) = 4^{-αβ} det W(τ) W(τ⁻¹)`, log scale.
pub fn log_c_constant(p: &FhParams) -> Result<C64> {
    Ok(-p.alpha * p.beta * 4f64.ln() + log_matrix_e_factor(p)?)
}

pub fn c_constant(p: &FhParams) -> Result<C64> {
    Ok(log_c_constant(p)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn trivial_constants() {
        let z = FhParams::real(0.0, 0.0).unwrap();
        for spec in [
            SymbolSpec::ToeplitzReg { params: z, r: 0.5 },
            SymbolSpec::WhReg { params: z, eps: 0.3 },
            SymbolSpec::Sech { sign: Sign::Plus, a: ZERO },
        ] {
            let k = if spec.is_circle() { circle_constants(&spec) } else { line_constants(&spec) }.unwrap();
            assert_eq!((k.g(), k.e().unwrap(), k.g2()), (ONE, ONE, ONE));
        }
        assert_eq!(matrix_e_factor(&z).unwrap(), ONE);
        assert_eq!(c_constant(&z).unwrap(), ONE);
    }

    #[test]
    fn regular_circle_e() {
        let p = FhParams::new(c(0.2, 0.1), c(-0.3, 0.05)).unwrap();
        for r in [0.3, 0.6, 0.9, 0.99] {
            let k = circle_constants(&SymbolSpec::ToeplitzReg { params: p, r }).unwrap();
            let want = (-p.alpha * p.beta * (1.0 - r * r).ln()).exp();
            assert!((k.e().unwrap() - want).norm() < 1e-13 * want.norm());
        }
    }

    #[test]
    fn pure_circle_constants() {
        let p = FhParams::real(0.3, 0.3).unwrap();
        let k = circle_constants(&SymbolSpec::ToeplitzPure(p)).unwrap();
        assert_eq!(k.g(), ONE);
        assert_eq!(k.e(), Err(Error::DivergentE));
    }

    #[test]
    fn regular_line_e() {
        for (a, eps) in [(0.2, 0.1), (0.3, 0.05), (0.1, 0.5)] {
            let k = line_constants(&SymbolSpec::WhReg { params: FhParams::real(a, a).unwrap(), eps }).unwrap();
            let want = ((1.0 + eps) * (1.0 + eps) / (4.0 * eps)).powf(a * a);
            assert!((k.e().unwrap() - want).norm() < 1e-12, "{}", k.e().unwrap());
            assert!((k.g() - (a * (eps - 1.0)).exp()).norm() < 1e-14);
        }
    }

    #[test]
    fn pure_line_g() {
        let a = 0.3;
        let k = line_constants(&SymbolSpec::WhPure(FhParams::real(a, a).unwrap())).unwrap();
        assert!((k.g() - (-a).exp()).norm() < 1e-14);
        assert_eq!(k.e(), Err(Error::DivergentE));
    }

    #[test]
    fn sech_pair_frozen() {
        assert!((sech_e_pair(c(0.1, 0.0)).unwrap() - 1.014_712_755_278_142_3).norm() < 1e-10);
        assert!((sech_e_pair(c(0.2, 0.0)).unwrap() - 1.070_906_608_368_671_8).norm() < 1e-10);
        assert_eq!(sech_e_pair(ZERO).unwrap(), ONE);
    }

    #[test]
    fn sech_g_product() {
        // G(1 - s sech) G(1 + s sech) = G(1 - s² sech²) = e^{-α²}
        for a in [c(0.1, 0.0), c(0.2, 0.0), c(0.0, 0.3)] {
            let m = line_constants(&SymbolSpec::Sech { sign: Sign::Minus, a }).unwrap();
            let p = line_constants(&SymbolSpec::Sech { sign: Sign::Plus, a }).unwrap();
            assert!((m.log_g + p.log_g + a * a).norm() < 1e-12);
        }
    }

    #[test]
    fn matrix_e_frozen() {
        let cases = [
            ((c(0.2, 0.0), c(0.1, 0.0)), c(1.031_981_523_515_192_6, 0.0)),
            ((c(0.0, 0.15), c(0.0, -0.15)), c(1.028_852_030_429_26, 0.0)),
            ((c(0.0, 0.3), c(0.0, -0.2)), c(1.062_849_170_823_03, 0.0)),
            ((c(0.25, 0.0), c(-0.1, 0.0)), c(0.961_077_075_600_17, 0.0)),
            ((c(0.0, 0.3), c(0.1, 0.0)), c(0.998_981_255_523_04, 0.034_425_367_923_93)),
        ];
        for ((a, b), want) in cases {
            let got = matrix_e_factor(&FhParams::new(a, b).unwrap()).unwrap();
            assert!((got - want).norm() < 1e-10, "{a} {b}: {got}");
        }
    }

    #[test]
    fn matrix_e_reduces_to_sech_pair() {
        for a in [0.1, 0.2] {
            let m = matrix_e_factor(&FhParams::real(a, a).unwrap()).unwrap();
            let s = sech_e_pair(c(a, 0.0)).unwrap();
            assert!((m - s).norm() < 1e-10);
        }
    }
}
