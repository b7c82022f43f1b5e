use super::bernoulli::bernoulli_ref;
use super::{as_exact_integer, ensure_finite, PrecisionContext};
use crate::error::{Error, Result};
use rug::ops::NegAssign;
use rug::{Assign, Complex, Float, Integer};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

const MIN_RE: f64 = -10.0;
const MAX_IM: f64 = 1.0e4;
const MAX_CORRECTIONS: usize = 120;
const MAX_DOUBLINGS: u32 = 12;

/// Result of one Euler–Maclaurin evaluation with explicit cutoffs.
#[derive(Debug, Clone)]
pub struct ZetaEval {
    pub value: Complex,
    pub derivative: Option<Complex>,
    /// Bound on the Euler–Maclaurin remainder of `value`.
    pub error_bound: f64,
    /// Estimate of the remainder of `derivative` (same construction, differentiated).
    pub derivative_error: f64,
    pub cutoff: u64,
    pub corrections: usize,
}

type LogTable = Arc<Vec<Float>>;


fn log_cache() -> &'static RwLock<HashMap<u32, LogTable>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, LogTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `log n` for n = 0..=upto at precision `prec` (index 0 unused).
fn logs(prec: u32, upto: u64) -> LogTable {
    if let Some(t) = log_cache().read().unwrap().get(&prec) {
        if t.len() as u64 > upto {
            return t.clone();
        }
    }
    let len = (upto + 1).max(256).next_power_of_two();
    let mut v = Vec::with_capacity(len as usize);
    v.push(Float::with_val(prec, 0));
    for n in 1..len {
        v.push(Float::with_val(prec, n).ln());
    }
    let t = Arc::new(v);
    let mut w = log_cache().write().unwrap();
    let keep = w.get(&prec).map_or(true, |old| old.len() < t.len());
    if keep {
        w.insert(prec, t.clone());
    }
    t
}

fn coef_cache() -> &'static RwLock<HashMap<u32, LogTable>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, LogTable>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// B_{2k}/(2k)! for k = 1..=MAX_CORRECTIONS+1 at precision `prec`.
fn correction_coefs(prec: u32) -> Result<LogTable> {
    if let Some(t) = coef_cache().read().unwrap().get(&prec) {
        return Ok(t.clone());
    }
    let mut v = Vec::with_capacity(MAX_CORRECTIONS + 1);
    let mut fact = Integer::from(2);
    for k in 1..=MAX_CORRECTIONS + 1 {
        v.push(Float::with_val(prec, bernoulli_ref(2 * k)?) / Float::with_val(prec, &fact));
        fact *= ((2 * k + 1) * (2 * k + 2)) as u32;
    }
    let t = Arc::new(v);
    coef_cache().write().unwrap().insert(prec, t.clone());
    Ok(t)
}

fn check_range(s: &Complex) -> Result<()> {
    ensure_finite(s, "zeta argument")?;
    if as_exact_integer(s) == Some(1) {
        return Err(Error::Pole { what: "zeta", at: "1".into() });
    }
    let re = s.real().to_f64();
    let im = s.imag().to_f64();
    if re < MIN_RE || im.abs() > MAX_IM {
        return Err(Error::Range {
            what: "zeta",
            detail: format!("s = {re} + {im}i (validated for Re s >= {MIN_RE}, |Im s| <= {MAX_IM})"),
        });
    }
    Ok(())
}

/// Euler–Maclaurin evaluation with `cutoff` direct terms and `corrections`
/// Bernoulli correction terms:
///
/// ζ(s) = Σ_{n<N} n^{−s} + N^{1−s}/(s−1) + N^{−s}/2
///        + Σ_{k=1}^{m} B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1} + R,
///
/// with |R| ≤ |T_{m+1}| · |s+2m+1| / (σ+2m+1). The derivative is obtained by
/// differentiating every term (log factors), never by finite differences.
pub fn zeta_with_cutoffs(
    s: &Complex,
    cutoff: u64,
    corrections: usize,
    pc: &PrecisionContext,
    with_derivative: bool,
) -> Result<ZetaEval> {
    check_range(s)?;
    if cutoff < 2 {
        return Err(Error::InvalidArgument("zeta cutoff must be at least 2".into()));
    }
    if corrections == 0 || corrections > MAX_CORRECTIONS {
        return Err(Error::InvalidArgument(format!("corrections must be in 1..={MAX_CORRECTIONS}")));
    }
    let sigma = s.real().to_f64();
    if sigma + 2.0 * corrections as f64 + 1.0 <= 0.0 {
        return Err(Error::Range { what: "zeta", detail: "too few corrections for this Re(s)".into() });
    }
    let smag = s.real().to_f64().hypot(s.imag().to_f64()).max(1.0);
    let extra = ((smag * (cutoff as f64).ln().max(1.0)).log2().ceil() as u32) + 8;
    let p = pc.work() + extra;
    let lg = logs(p, cutoff);
    let s = Complex::with_val(p, s);

    // n^{−s} by exp at primes and one multiplication at composites
    let mut spf = vec![0u32; cutoff as usize];
    let mut pows: Vec<Complex> = Vec::with_capacity(cutoff as usize);
    pows.push(Complex::new(p));
    pows.push(Complex::with_val(p, 1));
    let mut sum = Complex::with_val(p, 1);
    let mut dsum = Complex::with_val(p, 0);
    let mut t = Complex::new(p);
    for n in 2..cutoff as usize {
        if spf[n] == 0 {
            for m in (n..cutoff as usize).step_by(n) {
                if spf[m] == 0 {
                    spf[m] = n as u32;
                }
            }
        }
        let q = spf[n] as usize;
        if q == n {
            t.assign(&s * &lg[n]);
            t.neg_assign();
            t.exp_mut();
        } else {
            t.assign(&pows[q] * &pows[n / q]);
        }
        sum += &t;
        pows.push(t.clone());
        if with_derivative {
            t *= &lg[n];
            dsum -= &t;
        }
    }

    let ln_big = &lg[cutoff as usize];
    let mut npow = Complex::with_val(p, &s * ln_big); // N^{−s}
    npow = -npow;
    npow.exp_mut();
    let s1 = Complex::with_val(p, &s - 1u32);
    let mut tail = Complex::with_val(p, &npow * cutoff);
    tail /= &s1;
    sum += &tail;
    if with_derivative {
        // d/ds N^{1−s}/(s−1) = N^{1−s}/(s−1) · (−log N − 1/(s−1))
        let mut f = Complex::with_val(p, s1.recip_ref());
        f += ln_big;
        let d = Complex::with_val(p, &tail * &f);
        dsum -= d;
    }
    let half = Complex::with_val(p, &npow / 2u32);
    sum += &half;
    if with_derivative {
        dsum -= Complex::with_val(p, &half * ln_big);
    }

    // corrections
    let n_f = Float::with_val(p, cutoff);
    let n2 = Float::with_val(p, &n_f * &n_f);
    let mut np = Complex::with_val(p, &npow / &n_f); // N^{−s−2k+1} at k = 1
    let mut poly = s.clone(); // s(s+1)…(s+2k−2)
    let mut dpoly = Complex::with_val(p, 1);
    let coefs = correction_coefs(p)?;
    let mut term_abs = 0.0;
    let mut dterm_abs = 0.0;
    for k in 1..=corrections + 1 {
        let coef: &Float = &coefs[k - 1];
        let mut term = Complex::with_val(p, &poly * &np);
        term *= coef;
        let dterm = if with_derivative {
            let mut d = Complex::with_val(p, &poly * ln_big);
            d = Complex::with_val(p, &dpoly - &d);
            d *= &np;
            d *= coef;
            Some(d)
        } else {
            None
        };
        if k > corrections {
            term_abs = Float::with_val(53, term.abs_ref()).to_f64();
            dterm_abs = dterm.map_or(0.0, |d| Float::with_val(53, d.abs_ref()).to_f64());
            break;
        }
        sum += &term;
        if let Some(d) = dterm {
            dsum += d;
        }
        for a in [2 * k - 1, 2 * k] {
            let sa = Complex::with_val(p, &s + a as u32);
            if with_derivative {
                dpoly *= &sa;
                dpoly += &poly;
            }
            poly *= &sa;
        }
        np /= &n2;
    }
    let tau = s.imag().to_f64();
    let m2 = 2.0 * corrections as f64 + 1.0;
    let factor = (sigma + m2).hypot(tau) / (sigma + m2);
    ensure_finite(&sum, "zeta")?;
    Ok(ZetaEval {
        value: pc.round_c(&sum),
        derivative: with_derivative.then(|| pc.round_c(&dsum)),
        error_bound: term_abs * factor,
        derivative_error: dterm_abs * factor,
        cutoff,
        corrections,
    })
}

/// Cheapest (N, m) whose predicted remainder is below `target`, using
/// |B_{2k}|/(2k)! ≈ 2(2π)^{−2k}. The caller still checks the actual bound.
fn plan_cutoffs(sigma: f64, tau: f64, target: f64) -> (u64, usize) {
    let log_target = target.ln() - 2.0;
    let ln2pi = (2.0 * std::f64::consts::PI).ln();
    let mut best = (64u64, 32usize);
    let mut best_cost = f64::INFINITY;
    let mut n = 16u64;
    while n <= 1 << 16 {
        let ln_n = (n as f64).ln();
        // log |s(s+1)…(s+2k−2)| accumulated with k
        let mut log_poly = 0.5 * (sigma * sigma + tau * tau).ln();
        for k in 1..=MAX_CORRECTIONS {
            // term k+1 needs s(s+1)…(s+2k)
            let lp = log_poly
                + 0.5 * ((sigma + (2 * k - 1) as f64).powi(2) + tau * tau).ln()
                + 0.5 * ((sigma + (2 * k) as f64).powi(2) + tau * tau).ln();
            let log_term = 2f64.ln() - (2 * k + 2) as f64 * ln2pi + lp - (sigma + (2 * k + 1) as f64) * ln_n;
            if log_term <= log_target && 2.0 * k as f64 + 1.0 + sigma > 0.0 {
                let cost = 40.0 * n as f64 / ln_n + n as f64 + 6.0 * k as f64;
                if cost < best_cost {
                    best_cost = cost;
                    best = (n, k);
                }
                break;
            }
            log_poly = lp;
        }
        n += (n / 4).max(1);
    }
    best
}

fn adaptive(s: &Complex, pc: &PrecisionContext, with_derivative: bool) -> Result<ZetaEval> {
    check_range(s)?;
    let target_rel = 2f64.powi(-(pc.work() as i32));
    let (mut cutoff, mut m) = plan_cutoffs(s.real().to_f64(), s.imag().to_f64(), target_rel);
    for _ in 0..=MAX_DOUBLINGS {
        let ev = zeta_with_cutoffs(s, cutoff, m, pc, with_derivative)?;
        let scale = super::abs_f64(&ev.value).max(1e-30);
        let mut ok = ev.error_bound <= target_rel * scale;
        if let Some(d) = &ev.derivative {
            ok &= ev.derivative_error <= target_rel * super::abs_f64(d).max(1e-30) * 4.0;
        }
        if ok {
            return Ok(ev);
        }
        cutoff *= 2;
        m = (m * 2).min(MAX_CORRECTIONS);
    }
    Err(Error::NonConvergence(format!(
        "Euler-Maclaurin for zeta did not reach {} bits at s = {}",
        pc.work(),
        s
    )))
}

/// Riemann ζ(s) for s ≠ 1 in the validated range.
pub fn zeta(s: &Complex, pc: &PrecisionContext) -> Result<Complex> {
    Ok(adaptive(s, pc, false)?.value)
}

pub fn zeta_prime(s: &Complex, pc: &PrecisionContext) -> Result<Complex> {
    Ok(adaptive(s, pc, true)?.derivative.expect("derivative requested"))
}

/// (ζ(s), ζ′(s)) from a single differentiated Euler–Maclaurin pass.
pub fn zeta_and_prime(s: &Complex, pc: &PrecisionContext) -> Result<(Complex, Complex)> {
    let ev = adaptive(s, pc, true)?;
    Ok((ev.value, ev.derivative.expect("derivative requested")))
}
