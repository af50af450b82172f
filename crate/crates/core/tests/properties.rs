use fhwh_core::constants::line_constants;
use fhwh_core::limits::{block_ratio, limit_rule, Backend, BlockKind, Gauge};
use fhwh_core::linalg::{lu_logdet, ComplexMatrix};
use fhwh_core::special::ln_gamma;
use fhwh_core::symbols::{circle_fourier_coeffs, matrix_tau_eval, symdet, FhParams, Sign, SymbolSpec};
use fhwh_core::toeplitz::{exact_fh_det, toeplitz_det, ToeplitzInstance};
use fhwh_core::wienerhopf::WhKernel;
use fhwh_core::{log_distance, wrap_log, C64};
use proptest::prelude::*;
use std::f64::consts::PI;

fn complex(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo..hi, lo..hi).prop_map(|(re, im)| C64::new(re, im))
}

/// (α, β) with |Re α|, |Re β| < 0.3, so every strip condition holds.
fn small_params() -> impl Strategy<Value = FhParams> {
    (complex(-0.3, 0.3), complex(-0.3, 0.3)).prop_map(|(a, b)| FhParams::new(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_recurrence(z in complex(0.2, 6.0)) {
        let lhs = ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap();
        prop_assert!(log_distance(lhs, z.ln()) < 1e-12);
    }

    #[test]
    fn gamma_reflection(z in complex(-2.4, 2.4)) {
        prop_assume!((z.re - z.re.round()).abs() > 0.05 || z.im.abs() > 0.05);
        let lhs = ln_gamma(z).unwrap() + ln_gamma(1.0 - z).unwrap();
        let rhs = (C64::new(PI, 0.0) / (z * PI).sin()).ln();
        prop_assert!(log_distance(lhs, rhs) < 1e-10);
    }

    #[test]
    fn wrap_log_range(re in -5.0..5.0f64, im in -50.0..50.0f64) {
        let w = wrap_log(C64::new(re, im));
        prop_assert!(w.im > -PI - 1e-15 && w.im <= PI + 1e-15);
        prop_assert!((w.exp() - C64::new(re, im).exp()).norm() < 1e-12 * re.exp());
    }

    #[test]
    fn logdet_product_rule(seed in proptest::collection::vec(complex(-0.3, 0.3), 32)) {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| seed[4 * i + j] + if i == j { 1.0 } else { 0.0 });
        let b = ComplexMatrix::from_fn(4, 4, |i, j| seed[16 + 4 * i + j] + if i == j { 1.0 } else { 0.0 });
        let ab = a.matmul(&b).unwrap();
        let lhs = lu_logdet(&ab).unwrap();
        let rhs = lu_logdet(&a).unwrap() + lu_logdet(&b).unwrap();
        prop_assert!(log_distance(lhs, rhs) < 1e-11);
    }

    #[test]
    fn pure_toeplitz_swap_symmetry(p in small_params(), n in 1usize..12) {
        // T_n(φ_{β,α}) is the transpose of T_n(φ_{α,β})
        let a = exact_fh_det(&p, n).unwrap();
        let b = exact_fh_det(&p.swapped(), n).unwrap();
        prop_assert!(log_distance(a, b) < 1e-12);
    }

    #[test]
    fn pure_toeplitz_closed_form_matches_lu(p in small_params(), n in 1usize..10) {
        let lu = toeplitz_det(&ToeplitzInstance::new(SymbolSpec::ToeplitzPure(p), n).unwrap()).unwrap();
        prop_assert!(log_distance(lu, exact_fh_det(&p, n).unwrap()) < 1e-9);
    }

    #[test]
    fn coefficient_recurrence(p in small_params()) {
        let c = circle_fourier_coeffs(&SymbolSpec::ToeplitzPure(p), -6, 6).unwrap();
        for k in 1..=6i64 {
            let kf = k as f64;
            let up = c.get(k - 1) * (kf - 1.0 - p.alpha) / (p.beta + kf);
            let down = c.get(-k + 1) * (kf - 1.0 - p.beta) / (p.alpha + kf);
            prop_assert!((c.get(k) - up).norm() < 1e-12 * (1.0 + up.norm()));
            prop_assert!((c.get(-k) - down).norm() < 1e-12 * (1.0 + down.norm()));
        }
    }

    #[test]
    fn matrix_tau_determinant(p in small_params(), xi in -4.0..4.0f64) {
        prop_assert!((matrix_tau_eval(&p, xi).det() - symdet(&p, xi)).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wh_kernel_reflection(p in small_params(), eps in 0.05..0.5f64, u in 0.05..4.0f64) {
        // swapping α and β reflects the kernel
        let k = WhKernel::new(&SymbolSpec::WhReg { params: p, eps }).unwrap();
        let s = WhKernel::new(&SymbolSpec::WhReg { params: p.swapped(), eps }).unwrap();
        prop_assert!((k.eval(u).unwrap() - s.eval(-u).unwrap()).norm() < 1e-13);
        prop_assert!((k.eval(-u).unwrap() - s.eval(u).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn sech_pair_g_product(a in complex(-0.3, 0.3)) {
        let m = line_constants(&SymbolSpec::Sech { sign: Sign::Minus, a }).unwrap();
        let p = line_constants(&SymbolSpec::Sech { sign: Sign::Plus, a }).unwrap();
        prop_assert!((m.log_g + p.log_g + a * a).norm() < 1e-9);
    }

    #[test]
    fn block_gauge_invariance(p in small_params(), n in 2usize..40) {
        let rule = limit_rule(Backend::Graded, 0);
        for kind in [BlockKind::A1(n), BlockKind::A2] {
            let a = block_ratio(&p, kind, Gauge::Plain, &rule).unwrap();
            let b = block_ratio(&p, kind, Gauge::Reweighted, &rule).unwrap();
            prop_assert!(log_distance(a, b) < 1e-9);
        }
    }
}
