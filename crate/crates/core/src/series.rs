//! Direct evaluation of F(t) = Σ aₙ e^{−nt} (equivalently Σ aₙ zⁿ, z = e^{−t})
//! with a closed-form bound on the discarded tail.

use crate::arith::{sieve_with, ArithFunctionId, SieveConfig, SieveTable, Values};
use crate::error::{Error, Result};
use crate::hpnum::{abs_f64, PrecisionContext};
use rug::ops::NegAssign;
use rug::{Assign, Complex, Float};
use std::collections::{BTreeMap, HashMap};
use std::f64::consts::FRAC_PI_2;

/// Terms between direct re-evaluations of e^{−nt}.
pub const BLOCK_LEN: u64 = 1 << 12;

/// A point t with Re t > 0 in the sector |arg t| ≤ π/2 − θ.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint {
    t: Complex,
    theta: f64,
}

impl EvalPoint {
    pub fn new(t: Complex, theta: f64) -> Result<Self> {
        if !t.real().is_finite() || !t.imag().is_finite() {
            return Err(Error::Domain("t must be finite".into()));
        }
        if t.real() <= &0 {
            return Err(Error::Domain(format!("Re(t) must be positive, got {}", t.real().to_f64())));
        }
        if !(theta > 0.0 && theta <= FRAC_PI_2) {
            return Err(Error::Domain(format!("sector parameter theta = {theta} must lie in (0, pi/2]")));
        }
        let arg = arg_f64(&t);
        if arg.abs() > FRAC_PI_2 - theta + 1e-15 {
            return Err(Error::Domain(format!(
                "|arg t| = {:.6} exceeds pi/2 - theta = {:.6}",
                arg.abs(),
                FRAC_PI_2 - theta
            )));
        }
        Ok(EvalPoint { t, theta })
    }

    /// Uses the largest admissible θ, π/2 − |arg t|.
    pub fn with_max_theta(t: Complex) -> Result<Self> {
        let theta = (FRAC_PI_2 - arg_f64(&t).abs()).min(FRAC_PI_2);
        Self::new(t, theta)
    }

    /// t = r·e^{iφ}; φ = 0 gives an exactly real t.
    pub fn polar(prec: u32, abs: f64, arg: f64) -> Result<Self> {
        if !(abs > 0.0) {
            return Err(Error::Domain(format!("|t| must be positive, got {abs}")));
        }
        let t = if arg == 0.0 {
            Complex::with_val(prec, (abs, 0))
        } else {
            let phi = Float::with_val(prec, arg);
            let (s, c) = phi.sin_cos(Float::new(prec));
            Complex::with_val(prec, (c * abs, s * abs))
        };
        Self::with_max_theta(t)
    }

    pub fn real(prec: u32, t: f64) -> Result<Self> {
        Self::polar(prec, t, 0.0)
    }

    pub fn t(&self) -> &Complex {
        &self.t
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn abs_f64(&self) -> f64 {
        abs_f64(&self.t)
    }

    pub fn arg_f64(&self) -> f64 {
        arg_f64(&self.t)
    }

    pub fn is_real(&self) -> bool {
        self.t.imag().is_zero()
    }
}

fn arg_f64(z: &Complex) -> f64 {
    z.imag().to_f64().atan2(z.real().to_f64())
}

/// A computed value with its error budget and diagnostic counters.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesValue {
    pub value: Complex,
    /// Bound on the discarded part (for series: the tail beyond `terms_used`).
    pub tail_bound: f64,
    pub terms_used: u64,
    pub counters: BTreeMap<&'static str, u64>,
}

/// Σ_{n>N} |aₙ| e^{−n r} bound for the growth class of `fn_id`.
///
/// Every function except the primes satisfies |aₙ| ≤ n, for which
/// Σ_{n>N} n e^{−nr} ≤ (N+1) e^{−Nr} (1 + 1/r) / (1 − e^{−r}).
/// For pₙ ≤ n(log n + log log n) (n ≥ 6) the ratio test bound
/// f(N+1)/(1 − ρ) is used, ρ = sup_{n>N} f(n+1)/f(n).
pub fn tail_majorant(fn_id: ArithFunctionId, n: u64, re_t: f64) -> f64 {
    log_tail_majorant(fn_id, n, re_t).exp()
}

fn log_tail_majorant(fn_id: ArithFunctionId, n: u64, r: f64) -> f64 {
    let nf = n as f64;
    if fn_id == ArithFunctionId::PrimeSequence {
        if n < 6 {
            return f64::INFINITY;
        }
        let g = |x: f64| x * (x.ln() + x.ln().ln());
        let rho = (g(nf + 2.0) / g(nf + 1.0)).ln() - r;
        if rho >= 0.0 {
            return f64::INFINITY;
        }
        g(nf + 1.0).ln() - (nf + 1.0) * r - (-rho.exp_m1()).ln()
    } else {
        (nf + 1.0).ln() - nf * r + (1.0 / r).ln_1p() - (-(-r).exp_m1()).ln()
    }
}

/// Smallest N whose tail majorant is at most `target`.
pub fn required_terms(fn_id: ArithFunctionId, re_t: f64, target: f64) -> Result<u64> {
    if !(re_t > 0.0) {
        return Err(Error::Domain(format!("Re(t) must be positive, got {re_t}")));
    }
    if !(target > 0.0) {
        return Err(Error::InvalidArgument(format!("target error must be positive, got {target}")));
    }
    let log_target = target.ln();
    // the majorants are decreasing once N ≥ 1/r
    let mut lo = ((1.0 / re_t).ceil() as u64).max(16);
    if log_tail_majorant(fn_id, lo, re_t) <= log_target {
        return Ok(lo);
    }
    let mut hi = lo;
    loop {
        hi = hi.checked_mul(2).ok_or_else(|| Error::Overflow("required series length".into()))?;
        if hi > 1 << 62 {
            return Err(Error::Overflow("required series length".into()));
        }
        if log_tail_majorant(fn_id, hi, re_t) <= log_target {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if log_tail_majorant(fn_id, mid, re_t) <= log_target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// F(t) for the given function, sieving as many terms as the tail bound needs.
pub fn eval_exp_series(
    fn_id: ArithFunctionId,
    point: &EvalPoint,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<SeriesValue> {
    eval_exp_series_with(fn_id, point, pc, target_abs_err, &SieveConfig::default())
}

pub fn eval_exp_series_with(
    fn_id: ArithFunctionId,
    point: &EvalPoint,
    pc: &PrecisionContext,
    target_abs_err: f64,
    config: &SieveConfig,
) -> Result<SeriesValue> {
    let n = plan(fn_id, point, target_abs_err)?;
    if n > config.memory_cap {
        return Err(Error::MemoryCap { required: n, cap: config.memory_cap });
    }
    let table = sieve_with(fn_id, n, config)?;
    sum_table(&table, n, point, pc, target_abs_err)
}

/// F(t) from a prebuilt table, which must be long enough for the target.
pub fn eval_with_table(
    table: &SieveTable,
    point: &EvalPoint,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<SeriesValue> {
    let n = plan(table.fn_id(), point, target_abs_err)?;
    if n > table.limit() {
        return Err(Error::InvalidArgument(format!(
            "table for {} has {} entries, {} required",
            table.fn_id(),
            table.limit(),
            n
        )));
    }
    sum_table(table, n, point, pc, target_abs_err)
}

/// Number of terms `eval_exp_series` will sum at this point and tolerance.
pub fn plan(fn_id: ArithFunctionId, point: &EvalPoint, target_abs_err: f64) -> Result<u64> {
    let r = point.t().real().to_f64();
    // half the budget goes to the tail, the rest is rounding slack
    required_terms(fn_id, r, target_abs_err / 2.0)
}

/// Σ aₙ zⁿ for |z| < 1, through t = −log z (principal branch).
pub fn eval_power_series(
    fn_id: ArithFunctionId,
    z: &Complex,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<SeriesValue> {
    if z.real().is_zero() && z.imag().is_zero() {
        return Ok(SeriesValue {
            value: Complex::with_val(pc.bits, 0),
            tail_bound: 0.0,
            terms_used: 0,
            counters: BTreeMap::new(),
        });
    }
    let point = EvalPoint::with_max_theta(t_of_z(z, pc)?)?;
    eval_exp_series(fn_id, &point, pc, target_abs_err)
}

/// t = −log z, rejecting |z| ≥ 1 and the non-positive real axis.
pub fn t_of_z(z: &Complex, pc: &PrecisionContext) -> Result<Complex> {
    if z.imag().is_zero() && z.real() <= &0 {
        return Err(Error::Domain("z on the non-positive real axis is outside the principal branch".into()));
    }
    let m = Float::with_val(pc.work(), z.abs_ref());
    if m >= 1 {
        return Err(Error::Domain(format!("|z| = {} must be < 1", m.to_f64())));
    }
    let mut t = Complex::with_val(pc.work(), z.ln_ref());
    t.neg_assign();
    Ok(t)
}

/// Whether z lies in S_θ, i.e. |arg(1 − z)| ≤ π/2 − θ (z = 1 counts as inside).
pub fn sector_check(z: &Complex, theta: f64) -> bool {
    let w = Complex::with_val(z.prec().0.max(z.prec().1), 1 - z);
    if w.real().is_zero() && w.imag().is_zero() {
        return true;
    }
    arg_f64(&w).abs() <= FRAC_PI_2 - theta
}

enum Coef {
    Zero,
    Int(i64),
    Log { p: u64, offset: i64 },
}

fn coefficient(values: &Values, i: usize, minus_one: bool) -> Coef {
    match values {
        Values::Small(v) => match v[i] {
            0 => Coef::Zero,
            x => Coef::Int(x as i64),
        },
        Values::Int(v) => match v[i] {
            0 => Coef::Zero,
            x => Coef::Int(x as i64),
        },
        Values::Primes(v) => Coef::Int(v[i] as i64),
        Values::PrimePowers { p, .. } => {
            let off = minus_one as i64;
            match p[i] {
                0 if off == 0 => Coef::Zero,
                0 => Coef::Int(-off),
                q => Coef::Log { p: q as u64, offset: off },
            }
        }
    }
}

struct LogCache {
    prec: u32,
    map: HashMap<u64, Float>,
}

impl LogCache {
    fn get(&mut self, p: u64, offset: i64) -> &Float {
        let prec = self.prec;
        self.map.entry(p).or_insert_with(|| Float::with_val(prec, p).ln() - offset)
    }
}

fn sum_table(
    table: &SieveTable,
    n_terms: u64,
    point: &EvalPoint,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<SeriesValue> {
    let p = pc.work();
    let acc_prec = p + 32;
    let minus_one = table.fn_id() == ArithFunctionId::VonMangoldtMinusOne;
    let values = table.values();
    let mut logs = LogCache { prec: p, map: HashMap::new() };
    let mut nonzero = 0u64;
    let mut blocks = 0u64;
    let r = point.t().real().to_f64();
    let tail = tail_majorant(table.fn_id(), n_terms, r);
    debug_assert!(tail <= target_abs_err);

    let value = if point.is_real() {
        let t = point.t().real();
        let z = Float::with_val(p, -t).exp();
        let mut acc = Float::with_val(acc_prec, 0);
        let mut block_acc = Float::with_val(acc_prec, 0);
        let mut pw = Float::new(p);
        let mut tmp = Float::new(p);
        let mut start = 1u64;
        while start <= n_terms {
            let end = (start + BLOCK_LEN - 1).min(n_terms);
            pw.assign(t * start);
            pw.neg_assign();
            pw.exp_mut();
            block_acc.assign(0);
            for n in start..=end {
                match coefficient(values, (n - 1) as usize, minus_one) {
                    Coef::Zero => {}
                    Coef::Int(1) => {
                        block_acc += &pw;
                        nonzero += 1;
                    }
                    Coef::Int(-1) => {
                        block_acc -= &pw;
                        nonzero += 1;
                    }
                    Coef::Int(c) => {
                        tmp.assign(&pw * c);
                        block_acc += &tmp;
                        nonzero += 1;
                    }
                    Coef::Log { p: q, offset } => {
                        tmp.assign(&pw * logs.get(q, offset));
                        block_acc += &tmp;
                        nonzero += 1;
                    }
                }
                pw *= &z;
            }
            acc += &block_acc;
            blocks += 1;
            start = end + 1;
        }
        Complex::with_val(pc.bits, (acc, 0))
    } else {
        let t = Complex::with_val(p, point.t());
        let mut z = Complex::with_val(p, -&t);
        z.exp_mut();
        let mut acc = Complex::with_val(acc_prec, 0);
        let mut block_acc = Complex::with_val(acc_prec, 0);
        let mut pw = Complex::new(p);
        let mut tmp = Complex::new(p);
        let mut start = 1u64;
        while start <= n_terms {
            let end = (start + BLOCK_LEN - 1).min(n_terms);
            pw.assign(&t * start);
            pw.neg_assign();
            pw.exp_mut();
            block_acc.assign(0);
            for n in start..=end {
                match coefficient(values, (n - 1) as usize, minus_one) {
                    Coef::Zero => {}
                    Coef::Int(1) => {
                        block_acc += &pw;
                        nonzero += 1;
                    }
                    Coef::Int(-1) => {
                        block_acc -= &pw;
                        nonzero += 1;
                    }
                    Coef::Int(c) => {
                        tmp.assign(&pw * c);
                        block_acc += &tmp;
                        nonzero += 1;
                    }
                    Coef::Log { p: q, offset } => {
                        tmp.assign(&pw * logs.get(q, offset));
                        block_acc += &tmp;
                        nonzero += 1;
                    }
                }
                pw *= &z;
            }
            acc += &block_acc;
            blocks += 1;
            start = end + 1;
        }
        Complex::with_val(pc.bits, acc)
    };
    crate::hpnum::ensure_finite(&value, "series summation")?;
    let mut counters = BTreeMap::new();
    counters.insert("blocks", blocks);
    counters.insert("nonzero_terms", nonzero);
    counters.insert("sieve_limit", table.limit());
    Ok(SeriesValue { value, tail_bound: tail, terms_used: n_terms, counters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::sieve;
    use crate::hpnum::rel_diff;

    fn pc() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn eval_point_validation() {
        assert!(EvalPoint::real(128, -1.0).is_err());
        assert!(EvalPoint::real(128, 0.0).is_err());
        assert!(EvalPoint::polar(128, 0.1, 1.6).is_err());
        let p = EvalPoint::polar(128, 0.1, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((p.theta() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(EvalPoint::new(p.t().clone(), 1.0).is_err());
    }

    #[test]
    fn tail_formula_is_an_upper_bound() {
        for &r in &[1e-3, 0.05, 0.5, 2.0] {
            for n in [10u64, 100, 5000] {
                let q: f64 = (-r as f64).exp();
                // exact Σ_{k>N} k q^k = q^{N+1}((N+1) − N q)/(1−q)²
                let nf = n as f64;
                let exact = q.powf(nf + 1.0) * ((nf + 1.0) - nf * q) / (1.0 - q).powi(2);
                let bound = tail_majorant(ArithFunctionId::Mobius, n, r);
                assert!(bound >= exact * (1.0 - 1e-12), "r={r} n={n}");
            }
        }
    }

    #[test]
    fn prime_tail_bounds_actual_tail() {
        let primes = sieve(ArithFunctionId::PrimeSequence, 40000).unwrap();
        let r = 0.01;
        let n = 2000u64;
        let mut tail = 0.0;
        for k in n + 1..=40000 {
            let pk = primes.get(k).unwrap().as_int().unwrap() as f64;
            tail += pk * (-(k as f64) * r).exp();
        }
        let b = tail_majorant(ArithFunctionId::PrimeSequence, n, r);
        assert!(b >= tail && b < 3.0 * tail, "bound {b} tail {tail}");
    }

    #[test]
    fn large_t_is_dominated_by_leading_terms() {
        let point = EvalPoint::real(128, 20.0).unwrap();
        let v = eval_exp_series(ArithFunctionId::Mobius, &point, &pc(), 1e-30).unwrap();
        let e = |k: i32| Float::with_val(192, -20 * k).exp();
        let head = e(1) - e(2) - e(3) - e(5) + e(6);
        let head = Complex::with_val(128, (head, 0));
        let diff = abs_f64(&Complex::with_val(128, &v.value - &head));
        assert!(diff <= v.tail_bound + 1e-45);
    }

    #[test]
    fn half_agrees_across_precisions() {
        let point = EvalPoint::real(256, std::f64::consts::LN_2).unwrap();
        let a = eval_exp_series(ArithFunctionId::Mobius, &point, &pc(), 1e-30).unwrap();
        let hi = PrecisionContext::new(256).unwrap();
        let b = eval_exp_series(ArithFunctionId::Mobius, &point, &hi, 1e-60).unwrap();
        assert!(abs_f64(&Complex::with_val(256, &a.value - &b.value)) < 2e-30);
    }

    #[test]
    fn zero_z_is_empty_sum() {
        let v = eval_power_series(ArithFunctionId::Mobius, &Complex::with_val(64, 0), &pc(), 1e-10).unwrap();
        assert!(v.value.real().is_zero() && v.terms_used == 0);
    }

    #[test]
    fn power_series_rejects_bad_z() {
        let p = pc();
        assert!(eval_power_series(ArithFunctionId::Mobius, &Complex::with_val(64, -0.5), &p, 1e-10).is_err());
        assert!(eval_power_series(ArithFunctionId::Mobius, &Complex::with_val(64, 1.0), &p, 1e-10).is_err());
        assert!(eval_power_series(ArithFunctionId::Mobius, &Complex::with_val(64, (0.6, 0.9)), &p, 1e-10).is_err());
    }

    #[test]
    fn power_series_matches_exp_series() {
        let p = pc();
        for &(re, im) in &[(0.3, 0.0), (0.1, 0.07)] {
            let point = EvalPoint::with_max_theta(Complex::with_val(p.work(), (re, im))).unwrap();
            let a = eval_exp_series(ArithFunctionId::Liouville, &point, &p, 1e-25).unwrap();
            let z = Complex::with_val(p.work(), -point.t()).exp();
            let b = eval_power_series(ArithFunctionId::Liouville, &z, &p, 1e-25).unwrap();
            assert_eq!(a.terms_used, b.terms_used);
            assert!(rel_diff(&a.value, &b.value) < 2f64.powi(-120));
        }
    }

    #[test]
    fn sector_membership() {
        assert!(sector_check(&Complex::with_val(64, 0.5), 0.3));
        assert!(sector_check(&Complex::with_val(64, 1.0), 0.3));
        assert!(!sector_check(&Complex::with_val(64, (0.0, 0.99)), FRAC_PI_2 - 0.1));
    }

    #[test]
    fn memory_cap_reports_required_length() {
        let point = EvalPoint::real(128, 1e-7).unwrap();
        let err = eval_exp_series(ArithFunctionId::Mobius, &point, &pc(), 1e-20).unwrap_err();
        match err {
            Error::MemoryCap { required, cap } => {
                assert!(required > cap);
                assert_eq!(cap, SieveConfig::DEFAULT_MEMORY_CAP);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn short_table_rejected() {
        let table = sieve(ArithFunctionId::Mobius, 100).unwrap();
        let point = EvalPoint::real(128, 0.01).unwrap();
        assert!(eval_with_table(&table, &point, &pc(), 1e-20).is_err());
    }
}
