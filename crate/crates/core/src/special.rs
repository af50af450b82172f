//! Gamma function and generalized binomial coefficients for complex arguments.

use crate::error::{Error, Result};
use crate::C64;
use core::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn pole_check(z: C64) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole(z.re));
    }
    Ok(())
}

/// Lanczos log-gamma for `Re z >= 1/2`.
fn ln_gamma_right(z: C64) -> C64 {
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// A logarithm of `Γ(z)`. Correct modulo `2πi`; callers that need the
/// principal value should wrap it.
pub fn ln_gamma(z: C64) -> Result<C64> {
    pole_check(z)?;
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let s = (PI * z).sin();
        Ok(PI.ln() - s.ln() - ln_gamma_right(1.0 - z))
    } else {
        Ok(ln_gamma_right(z))
    }
}

/// Complex gamma function.
pub fn complex_gamma(z: C64) -> Result<C64> {
    pole_check(z)?;
    if z.re < 0.5 {
        let s = (PI * z).sin();
        Ok(PI / (s * ln_gamma_right(1.0 - z).exp()))
    } else {
        Ok(ln_gamma_right(z).exp())
    }
}

/// Generalized binomial coefficient `C(a, k) = a(a-1)...(a-k+1)/k!`.
pub fn gen_binomial(a: C64, k: usize) -> C64 {
    let mut c = C64::new(1.0, 0.0);
    for j in 0..k {
        c *= (a - j as f64) / (j + 1) as f64;
    }
    c
}

/// The sequence `C(a, 0), ..., C(a, len-1)` by the same recurrence.
pub fn binomial_series(a: C64, len: usize) -> alloc::vec::Vec<C64> {
    let mut out = alloc::vec::Vec::with_capacity(len);
    let mut c = C64::new(1.0, 0.0);
    for j in 0..len {
        out.push(c);
        c *= (a - j as f64) / (j + 1) as f64;
    }
    out
}

/// Upper bound for `|C(a, j)|`, valid for all `j >= 0`.
///
/// Each factor `|a - i + 1| / i` is at most `1 + c/i` with `c = max(|a| - 1, 0)`,
/// so the product is below `exp(c (1 + ln j)) = e^c j^c`.
pub fn binomial_bound(a: C64, j: usize) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let c = (a.norm() - 1.0).max(0.0);
    (c * (1.0 + (j as f64).ln())).exp()
}
