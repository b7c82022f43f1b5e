//! Acceptance criteria 1 to 10. Each test writes one `criterion N: PASS|FAIL`
//! line to stderr (uncaptured) and then asserts.

use powser::arith::{mertens, sieve, value, ArithFunctionId, ArithValue, FactorList};
use powser::asym::{
    abelian_mu_envelope, choose_t, corollary_residual, crossover, error_envelope_e, fake_asymptotics_probe,
    tau_expansion, tau_expansion_coefficients, two_omega_leading_coefficient, walfisz_envelope, EnvelopeParams,
    MainTermSource,
};
use powser::hpnum::{abs_f64, PrecisionContext};
use powser::mellin::{
    bound_segment, default_kappa, g_of_tau, inverse_mellin_deformed, inverse_mellin_line, ContourSpec, Segment,
    ZeroFreeRegionSpec,
};
use powser::series::{eval_exp_series, EvalPoint};
use rug::{Complex, Float, Rational};
use std::f64::consts::FRAC_PI_4;
use std::io::Write;
use std::process::Command;

fn pc(bits: u32) -> PrecisionContext {
    PrecisionContext::new(bits).unwrap()
}

fn verdict(n: u32, ok: bool, detail: &str) {
    let line = format!("criterion {n:>2}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn note(s: &str) {
    let _ = std::io::stderr().write_all(format!("    {s}\n").as_bytes());
}

fn diff(a: &Complex, b: &Complex) -> f64 {
    abs_f64(&Complex::with_val(a.prec().0, a - b))
}

#[test]
fn criterion_01_oracle_equivalence() {
    use ArithFunctionId::*;
    let pc = pc(128);
    let tol = 1e-12;
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for fn_id in [Mobius, Liouville, LiouvilleAlternating, MobiusAlternating, VonMangoldtMinusOne, TwoOmegaMinusTau] {
        for t in [0.5, 0.2, 0.1, 0.05] {
            for arg in [0.0, FRAC_PI_4, -FRAC_PI_4] {
                let point = EvalPoint::polar(pc.work(), t, arg).unwrap();
                let series = eval_exp_series(fn_id, &point, &pc, tol).unwrap();
                let line = inverse_mellin_line(fn_id, &point, default_kappa(t).unwrap(), &pc, tol).unwrap();
                let d = diff(&series.value, &line.series.value);
                worst = worst.max(d);
                if !(d <= 1e-10) {
                    failures.push(format!("{fn_id} t={t} arg={arg:.3}: {d:e}"));
                }
            }
        }
    }
    for f in &failures {
        note(f);
    }
    verdict(1, failures.is_empty(), &format!("72 points, max |line - series| = {worst:.3e} (limit 1e-10)"));
}

#[test]
fn criterion_02_contour_invariance() {
    let pc = pc(128);
    let tol = 1e-12;
    let mut worst: f64 = 0.0;
    for (t, arg) in [(0.1, 0.0), (0.05, FRAC_PI_4)] {
        let point = EvalPoint::polar(pc.work(), t, arg).unwrap();
        let kappa = default_kappa(t).unwrap();
        let line = inverse_mellin_line(ArithFunctionId::Mobius, &point, kappa, &pc, tol).unwrap();
        for height in [5.0, 10.0, 14.0] {
            let spec = ContourSpec::auto(t, height).unwrap();
            let def = inverse_mellin_deformed(ArithFunctionId::Mobius, &point, &spec, &pc, tol).unwrap();
            let d = diff(&def.series.value, &line.series.value);
            note(&format!("t={t} arg={arg:.3} T={height}: |deformed - line| = {d:.3e}"));
            worst = worst.max(d);
        }
    }
    verdict(2, worst <= 1e-8, &format!("max |deformed - line| = {worst:.3e} (limit 1e-8)"));
}

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[test]
fn criterion_03_tau_expansion_order() {
    let pc = pc(128);
    let ts = [0.1, 0.05, 0.025];
    let values: Vec<Complex> = ts
        .iter()
        .map(|&t| {
            let point = EvalPoint::real(pc.work(), t).unwrap();
            eval_exp_series(ArithFunctionId::TauDivisors, &point, &pc, 1e-30).unwrap().value
        })
        .collect();
    let expected = [
        Rational::from((1, 4)),
        Rational::from((1, 144)),
        Rational::new(),
        Rational::from((1, 86400)),
    ];
    let coefs = tau_expansion_coefficients(4).unwrap();
    let coef_ok = coefs == expected;
    note(&format!("coefficients {:?}", coefs.iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    let mut ok = coef_ok;
    let mut detail = Vec::new();
    for k in [2usize, 3, 4] {
        let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
        let ys: Vec<f64> = ts
            .iter()
            .zip(&values)
            .map(|(&t, v)| {
                let tc = Complex::with_val(pc.work(), (t, 0));
                let e = tau_expansion(&tc, k, &pc).unwrap();
                diff(v, &e).ln()
            })
            .collect();
        let slope = fitted_slope(&xs, &ys);
        let pass = (slope - k as f64).abs() <= 0.35;
        ok &= pass;
        detail.push(format!("K={k}: {slope:.3}"));
        note(&format!("K={k}: fitted exponent {slope:.4} (target {k} +- 0.35) {}", if pass { "ok" } else { "off" }));
    }
    verdict(3, ok, &format!("coefficients exact: {coef_ok}; exponents {}", detail.join(", ")));
}

#[test]
fn criterion_04_arithmetic_identities() {
    let limit = 10_000u64;
    let pc = pc(128);
    let p = pc.work();
    let mut ok = true;
    for n in 1..=limit {
        let divs = FactorList::trial_division(n).unwrap().divisors();
        let mu_sum: i64 = divs.iter().map(|&d| value(ArithFunctionId::Mobius, d).unwrap().as_int().unwrap()).sum();
        ok &= mu_sum == i64::from(n == 1);
        let mut lam = Float::with_val(p, 0);
        for &d in &divs {
            lam += value(ArithFunctionId::VonMangoldt, d).unwrap().to_float(p);
        }
        let ln_n = Float::with_val(p, n).ln();
        ok &= Float::with_val(p, &lam - &ln_n).abs().to_f64() <= 1e-30;
    }
    for fn_id in ArithFunctionId::ALL {
        let lim = if fn_id == ArithFunctionId::PrimeSequence { 2_000 } else { limit };
        let table = sieve(fn_id, lim).unwrap();
        for n in 1..=lim {
            let a: ArithValue = table.get(n).unwrap();
            ok &= a == value(fn_id, n).unwrap();
        }
    }
    let direct = |x: u64| -> i64 { (1..=x).map(|n| value(ArithFunctionId::Mobius, n).unwrap().as_int().unwrap()).sum() };
    let table = sieve(ArithFunctionId::Mobius, 100).unwrap().with_prefix_sums().unwrap();
    let m10 = direct(10);
    let m100 = direct(100);
    ok &= m10 == -1 && m100 == 1;
    ok &= mertens(&table, 10).unwrap() == m10 && mertens(&table, 100).unwrap() == m100;
    verdict(4, ok, &format!("divisor sums and sieve vs oracle for n <= {limit}; M(10) = {m10}, M(100) = {m100}"));
}

#[test]
fn criterion_05_segment_majorants() {
    let pc = pc(128);
    let mut ok = true;
    for t in [0.1, 0.05, 0.02] {
        for height in [5.0, 10.0, 14.0] {
            let point = EvalPoint::real(pc.work(), t).unwrap();
            let spec = ContourSpec::auto(t, height).unwrap();
            let def = inverse_mellin_deformed(ArithFunctionId::Mobius, &point, &spec, &pc, 1e-12).unwrap();
            let mut maj = [0.0; 3];
            let mut line = format!("t={t} T={height}:");
            for (i, seg) in Segment::ALL.into_iter().enumerate() {
                maj[i] = bound_segment(seg, ArithFunctionId::Mobius, &point, &spec, &pc).unwrap();
                let v = abs_f64(&def.segments[&seg]);
                ok &= v <= maj[i];
                line.push_str(&format!(" {}={v:.3e}<={:.3e}", seg.name(), maj[i]));
            }
            let ratio = maj[1] / maj[0];
            ok &= (0.1..=10.0).contains(&ratio);
            note(&format!("{line} hor/vert={ratio:.3}"));
        }
    }
    verdict(5, ok, "|I_seg| <= majorant and hor/vert majorant ratio within 10x on the 3x3 grid");
}

#[test]
fn criterion_06_residual_smallness() {
    let pc = pc(128);
    let mut ok = true;
    for t in [1e-1, 1e-2, 1e-3] {
        let point = EvalPoint::real(pc.work(), t).unwrap();
        let f = eval_exp_series(ArithFunctionId::VonMangoldt, &point, &pc, 1e-20).unwrap().value;
        let main = 1.0 / -(-t).exp_m1();
        let r = (f.real().to_f64() - main).abs();
        let pass = r < 0.05 / t;
        ok &= pass;
        note(&format!("vonmangoldt t={t:e}: |F - 1/(1-e^-t)| = {r:.4} vs {:.4} {}", 0.05 / t, if pass { "ok" } else { "off" }));
        for fn_id in [ArithFunctionId::Liouville, ArithFunctionId::Mobius] {
            let v = eval_exp_series(fn_id, &point, &pc, 1e-20).unwrap().value;
            let a = abs_f64(&v);
            let pass = a < 10.0 / t.sqrt();
            ok &= pass;
            note(&format!("{fn_id} t={t:e}: |F| = {a:.4} vs {:.4} {}", 10.0 / t.sqrt(), if pass { "ok" } else { "off" }));
        }
    }
    verdict(6, ok, "residuals on t in {1e-1, 1e-2, 1e-3}");
}

#[test]
fn criterion_07_fake_asymptotics() {
    let pc = pc(128);
    let grid = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
    let rows = fake_asymptotics_probe(&grid, &pc, 1e-20, &Default::default()).unwrap();
    let mut ok = rows.len() == grid.len();
    for r in &rows {
        let v = r.plus_two.to_f64();
        ok &= v.abs() < 0.5;
        note(&format!("t={:e}: F+2 = {v:.6e}, (F+2)sqrt(t) = {:.6e}, terms {}", r.t, r.scaled.to_f64(), r.terms_used));
    }
    verdict(7, ok, "|F_mu(t) + 2| < 0.5 on t = 1e-2 .. 1e-6");
}

#[test]
fn criterion_08_two_omega_main_term() {
    let pc = pc(128);
    let t = 1e-3;
    let z = Complex::with_val(pc.work(), (Float::with_val(pc.work(), -t).exp(), 0));
    let lit = corollary_residual(ArithFunctionId::TwoOmega, &z, MainTermSource::Literal, &pc, 1e-15).unwrap();
    let res = corollary_residual(ArithFunctionId::TwoOmega, &z, MainTermSource::ResidueDerived, &pc, 1e-15).unwrap();
    let (rl, rr) = (abs_f64(&lit.residual), abs_f64(&res.residual));
    note(&format!("leading coefficient 6/pi^2 = {:.12}", two_omega_leading_coefficient(&pc).to_f64()));
    note(&format!("residual vs literal main term = {rl:.6}, vs residue main term = {rr:.6}"));
    verdict(8, rr <= 0.1 * rl, &format!("ratio residue/literal = {:.3e} (limit 0.1)", rr / rl));
}

fn agree_100(a: &Float, b: &Float) -> bool {
    let p = b.prec();
    let d = Float::with_val(p, a - b).abs();
    let scale = Float::with_val(p, b.abs_ref());
    d.is_zero() || d <= scale * Float::with_val(p, Float::i_exp(1, -100))
}

#[test]
fn criterion_09_envelopes() {
    let (lo, hi) = (pc(128), pc(256));
    let params = EnvelopeParams::default();
    let region = ZeroFreeRegionSpec::default();
    let mut ok = true;
    let mut count = 0;
    let mut check = |name: &str, f: &dyn Fn(&PrecisionContext) -> Float| {
        let (a, b) = (f(&lo), f(&hi));
        let pass = agree_100(&a, &b);
        count += 1;
        if !pass {
            note(&format!("{name}: {} vs {}", a.to_f64(), b.to_f64()));
        }
        ok &= pass;
    };
    let tval = |pc: &PrecisionContext, e: i32| Float::with_val(pc.work(), Float::i_exp(1, 0)) / Float::with_val(pc.work(), 10u32).pow(e);
    use rug::ops::Pow;
    for e in [2, 3, 6, 10, 20, 50, 100] {
        check(&format!("E(1e-{e})"), &|pc| error_envelope_e(&tval(pc, e), &params, pc).unwrap());
        for c in [0.1, 1.0] {
            check(&format!("A(1e-{e}, {c})"), &|pc| {
                abelian_mu_envelope(&tval(pc, e), &Float::with_val(pc.work(), c), pc).unwrap()
            });
            check(&format!("W(1e{e}, {c})"), &|pc| {
                let x = Float::with_val(pc.work(), 10u32).pow(e);
                walfisz_envelope(&Float::with_val(pc.work(), x), &Float::with_val(pc.work(), c), pc).unwrap()
            });
        }
    }
    for e in 4..=8 {
        check(&format!("choose_T(1e-{e})"), &|pc| choose_t(&tval(pc, e), &params.alpha, pc).unwrap());
    }
    for tau in [0.0, 5.0, 16.0, 20.0, 100.0, 1e4, 1e8] {
        check(&format!("g({tau})"), &|pc| g_of_tau(&region, &Float::with_val(pc.work(), tau), pc).unwrap());
    }
    let mut crossings = Vec::new();
    for c in [0.1, 1.0] {
        match crossover(&params, &Float::with_val(lo.work(), c), &lo) {
            Ok(x) => {
                note(&format!("c={c}: crossover at log(1/t*) = {:.6e}", x.log_inv_t.to_f64()));
                crossings.push(x.log_inv_t.is_finite() && x.log_inv_t > 0);
            }
            Err(e) => {
                note(&format!("c={c}: crossover failed: {e}"));
                crossings.push(false);
            }
        }
    }
    ok &= crossings.iter().all(|&b| b);
    verdict(9, ok, &format!("{count} envelope values agree to 100 bits at 128 vs 256; crossovers for c in {{0.1, 1}}"));
}

#[test]
fn criterion_10_determinism() {
    let dir = std::env::temp_dir().join(format!("powser-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("cmp.svg");
    let svg_s = svg.to_str().unwrap().to_string();
    let commands: Vec<Vec<String>> = [
        vec!["sieve", "--fn", "vonmangoldt", "--limit", "500"],
        vec!["sieve", "--fn", "mobius", "--limit", "1000", "--prefix-sums"],
        vec!["eval", "--fn", "mobius", "--t-abs", "0.1", "--prec", "128", "--tol", "1e-20"],
        vec!["eval", "--fn", "liouville", "--t-abs", "0.05", "--t-arg-deg", "45"],
        vec!["mellin", "--fn", "mobius", "--t-abs", "0.1", "--contour", "line", "--tol", "1e-12"],
        vec!["mellin", "--fn", "mobius", "--t-abs", "0.05", "--t-arg-deg", "45", "--contour", "deformed", "--T", "10", "--tol", "1e-12"],
        vec!["compare", "--fn", "vonmangoldt", "--t-grid", "1e-1:1e-3:9", "--svg", svg_s.as_str()],
        vec!["compare", "--fn", "two-omega", "--t-grid", "1e-3:1e-3:1", "--main-term", "paper"],
        vec!["bounds", "--t-abs", "1e-6", "--b", "ford"],
        vec!["probe", "--kind", "fake-asym", "--grid", "1e-2:1e-4:5"],
        vec!["probe", "--kind", "rh-window", "--eta", "0.5", "--grid", "1e-1:1e-4:4"],
        vec!["probe", "--kind", "delange", "--grid", "1e-2:1e-3:2"],
        vec!["probe", "--kind", "prime-abelian", "--grid", "1e-1:1e-2:2"],
    ]
    .iter()
    .map(|c| c.iter().map(|s| s.to_string()).collect())
    .collect();
    let run = |args: &[String]| {
        let o = Command::new(env!("CARGO_BIN_EXE_powser")).args(args).output().unwrap();
        let file = if args.iter().any(|a| a == "--svg") { std::fs::read(&svg).unwrap() } else { Vec::new() };
        (o.status.code(), o.stdout, file)
    };
    let mut ok = true;
    for c in &commands {
        let (a, b) = (run(c), run(c));
        let same = a == b && a.0 == Some(0);
        if !same {
            note(&format!("not reproducible: {}", c.join(" ")));
        }
        ok &= same;
    }
    verdict(10, ok, &format!("{} commands byte-identical across two runs", commands.len()));
}
