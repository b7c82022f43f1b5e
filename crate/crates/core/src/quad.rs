//! Adaptive Gauss–Legendre quadrature for complex-valued integrands of a real
//! parameter, at multiprecision.

use crate::error::{Error, Result};
use rug::{Assign, Complex, Float};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

type Rule = Arc<Vec<(Float, Float)>>;

fn rule_cache() -> &'static Mutex<HashMap<(usize, u32), Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize, prec: u32) -> Rule {
    assert!(n >= 1);
    let key = (n, prec);
    if let Some(r) = rule_cache().lock().unwrap().get(&key) {
        return r.clone();
    }
    let rule = Arc::new(compute_rule(n, prec));
    rule_cache().lock().unwrap().insert(key, rule.clone());
    rule
}

fn compute_rule(n: usize, prec: u32) -> Vec<(Float, Float)> {
    let wp = prec + 32;
    let mut p0 = Float::new(wp);
    let mut p1 = Float::new(wp);
    let mut tmp = Float::new(wp);
    let mut dp = Float::new(wp);
    let half = n / 2;
    let mut pos = Vec::with_capacity(half);
    for i in 0..half {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = Float::with_val(wp, guess);
        for _ in 0..100 {
            legendre(n, &x, &mut p0, &mut p1, &mut tmp, &mut dp);
            let step = Float::with_val(wp, &p1 / &dp);
            x -= &step;
            if step.is_zero() || step.get_exp().unwrap_or(i32::MIN) < 4 - wp as i32 {
                break;
            }
        }
        pos.push(x);
    }
    let weight = |x: &Float, p0: &mut Float, p1: &mut Float, tmp: &mut Float, dp: &mut Float| {
        legendre(n, x, p0, p1, tmp, dp);
        let one_minus = Float::with_val(wp, 1 - Float::with_val(wp, x * x));
        Float::with_val(prec, 2 / (one_minus * Float::with_val(wp, &*dp * &*dp)))
    };
    let mut nodes = Vec::with_capacity(n);
    for x in &pos {
        let w = weight(x, &mut p0, &mut p1, &mut tmp, &mut dp);
        nodes.push((Float::with_val(prec, -x), w));
    }
    if n % 2 == 1 {
        let zero = Float::with_val(wp, 0);
        let w = weight(&zero, &mut p0, &mut p1, &mut tmp, &mut dp);
        nodes.push((Float::with_val(prec, 0), w));
    }
    for x in pos.iter().rev() {
        let w = weight(x, &mut p0, &mut p1, &mut tmp, &mut dp);
        nodes.push((Float::with_val(prec, x), w));
    }
    nodes
}

// p1 ← P_n(x), dp ← P_n′(x)
fn legendre(n: usize, x: &Float, p0: &mut Float, p1: &mut Float, tmp: &mut Float, dp: &mut Float) {
    p0.assign(1);
    p1.assign(x);
    for k in 2..=n {
        // P_k = ((2k−1) x P_{k−1} − (k−1) P_{k−2}) / k
        tmp.assign(&*x * &*p1);
        *tmp *= (2 * k - 1) as u32;
        *p0 *= (k - 1) as u32;
        *tmp -= &*p0;
        *tmp /= k as u32;
        std::mem::swap(p0, p1);
        std::mem::swap(p1, tmp);
    }
    // P_n′ = n (x P_n − P_{n−1}) / (x² − 1)
    let xx = Float::with_val(x.prec(), x * x) - 1u32;
    dp.assign(&*x * &*p1);
    *dp -= &*p0;
    *dp *= n as u32;
    *dp /= &xx;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub min_order: usize,
    pub max_order: usize,
    /// Maximum number of panel bisections over the whole integral.
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { min_order: 8, max_order: 64, max_subdivisions: 4000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: Complex,
    /// Sum over panels of the difference between the last two rules.
    pub error_estimate: f64,
    pub evaluations: u64,
    pub panels: u64,
}

/// ∫ f(u) du over `[breaks[0], breaks[last]]`; each interior break point is
/// a panel boundary. Panels are refined by order doubling, then bisection,
/// until successive rules agree to the panel's share of `tol`.
pub fn integrate<F>(mut f: F, breaks: &[f64], tol: f64, prec: u32, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(&Float) -> Result<Complex>,
{
    if breaks.len() < 2 {
        return Err(Error::InvalidArgument("integration needs at least two break points".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("quadrature tolerance must be positive, got {tol}")));
    }
    let total: f64 = breaks.windows(2).map(|w| (w[1] - w[0]).abs()).sum();
    let mut acc = Complex::with_val(prec + 32, 0);
    let mut err = 0.0;
    let mut evals = 0u64;
    let mut panels = 0u64;
    let mut splits = 0usize;
    let mut stack: Vec<(f64, f64)> = Vec::new();
    for w in breaks.windows(2).rev() {
        if w[0] != w[1] {
            stack.push((w[0], w[1]));
        }
    }
    let mut tmp = Complex::new(prec);
    while let Some((a, b)) = stack.pop() {
        let share = if total > 0.0 { tol * (b - a).abs() / total } else { tol };
        let mut order = cfg.min_order;
        let mut prev = panel(&mut f, a, b, order, prec, &mut tmp)?;
        evals += order as u64;
        let mut accepted = None;
        while order < cfg.max_order {
            order *= 2;
            let cur = panel(&mut f, a, b, order, prec, &mut tmp)?;
            evals += order as u64;
            let d = crate::hpnum::abs_f64(&Complex::with_val(prec, &cur - &prev));
            if d <= share {
                accepted = Some((cur, d));
                break;
            }
            prev = cur;
        }
        match accepted {
            Some((v, d)) => {
                acc += &v;
                err += d;
                panels += 1;
            }
            None => {
                splits += 1;
                if splits > cfg.max_subdivisions {
                    return Err(Error::NonConvergence(format!(
                        "quadrature exceeded {} subdivisions near [{a}, {b}]",
                        cfg.max_subdivisions
                    )));
                }
                let m = 0.5 * (a + b);
                stack.push((m, b));
                stack.push((a, m));
            }
        }
    }
    Ok(QuadResult { value: Complex::with_val(prec, acc), error_estimate: err, evaluations: evals, panels })
}

fn panel<F>(f: &mut F, a: f64, b: f64, order: usize, prec: u32, tmp: &mut Complex) -> Result<Complex>
where
    F: FnMut(&Float) -> Result<Complex>,
{
    let rule = gauss_legendre(order, prec);
    let mid = Float::with_val(prec, a) / 2u32 + Float::with_val(prec, b) / 2u32;
    let half = Float::with_val(prec, b) / 2u32 - Float::with_val(prec, a) / 2u32;
    let mut sum = Complex::with_val(prec + 16, 0);
    let mut u = Float::new(prec);
    for (x, w) in rule.iter() {
        u.assign(&half * x);
        u += &mid;
        let fx = f(&u)?;
        tmp.assign(&fx * w);
        sum += &*tmp;
    }
    sum *= &half;
    Ok(Complex::with_val(prec, sum))
}
