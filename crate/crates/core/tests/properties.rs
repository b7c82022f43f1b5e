use powser::arith::{value, ArithFunctionId};
use powser::hpnum::{gamma, rel_diff, zeta, PrecisionContext};
use powser::series::{eval_exp_series, EvalPoint};
use proptest::prelude::*;
use rug::Complex;

fn pc(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits).unwrap()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gamma_recurrence(re in 0.1f64..12.0, im in -40.0f64..40.0) {
        let pc = pc(128);
        let s = Complex::with_val(128, (re, im));
        let g = gamma(&s, &pc).unwrap();
        let g1 = gamma(&Complex::with_val(128, &s + 1u32), &pc).unwrap();
        let rhs = Complex::with_val(128, &s * &g);
        prop_assert!(rel_diff(&g1, &rhs) < 1e-35);
    }

    #[test]
    fn conjugate_symmetry(re in -3.0f64..6.0, im in 0.5f64..60.0) {
        let pc = pc(128);
        let s = Complex::with_val(128, (re, im));
        let sc = Complex::with_val(128, (re, -im));
        for f in [gamma, zeta] {
            let a = f(&s, &pc).unwrap();
            let b = f(&sc, &pc).unwrap();
            let b_conj = Complex::with_val(128, b.conj_ref());
            prop_assert!(rel_diff(&a, &b_conj) < 1e-35);
        }
    }

    #[test]
    fn precision_doubling(re in 0.2f64..4.0, im in -50.0f64..50.0) {
        let s = Complex::with_val(256, (re, im));
        for f in [gamma, zeta] {
            let a = f(&s, &pc(128)).unwrap();
            let b = f(&s, &pc(256)).unwrap();
            prop_assert!(rel_diff(&a, &b) < 2f64.powi(-120), "{}", rel_diff(&a, &b));
        }
    }

    #[test]
    fn mobius_multiplicative(m in 1u64..5000, n in 1u64..5000) {
        prop_assume!(gcd(m, n) == 1);
        let mu = |k| value(ArithFunctionId::Mobius, k).unwrap().as_int().unwrap();
        prop_assert_eq!(mu(m * n), mu(m) * mu(n));
    }

    #[test]
    fn series_linearity(t in 0.02f64..1.0, arg in -1.2f64..1.2) {
        // F_{Λ−1}(t) = F_Λ(t) − 1/(e^t − 1)
        let pc = pc(128);
        let point = EvalPoint::polar(pc.work(), t, arg).unwrap();
        let tol = 1e-25;
        let a = eval_exp_series(ArithFunctionId::VonMangoldt, &point, &pc, tol).unwrap().value;
        let b = eval_exp_series(ArithFunctionId::VonMangoldtMinusOne, &point, &pc, tol).unwrap().value;
        let geo = Complex::with_val(pc.work(), point.t().exp_ref()) - 1u32;
        let geo = Complex::with_val(pc.work(), geo.recip_ref());
        let d = Complex::with_val(pc.work(), &a - &b) - geo;
        prop_assert!(powser::hpnum::abs_f64(&d) < 4.0 * tol);
    }

    #[test]
    fn tail_bound_is_honest(t in 0.01f64..0.8, arg in -1.3f64..1.3) {
        let pc = pc(128);
        let point = EvalPoint::polar(pc.work(), t, arg).unwrap();
        let coarse = eval_exp_series(ArithFunctionId::Liouville, &point, &pc, 1e-8).unwrap();
        let fine = eval_exp_series(ArithFunctionId::Liouville, &point, &pc, 1e-30).unwrap();
        let d = powser::hpnum::abs_f64(&Complex::with_val(pc.work(), &coarse.value - &fine.value));
        prop_assert!(d <= coarse.tail_bound + 1e-30);
    }
}
