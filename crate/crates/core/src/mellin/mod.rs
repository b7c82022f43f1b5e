//! Inverse Mellin representation F(t) = (1/2πi) ∫ D(s) Γ(s) t^{−s} ds on the
//! vertical line Re s = κ > 1 and on the deformed contour that dips into the
//! zero-free region, together with explicit majorants for its segments.

mod dirichlet;
mod region;

pub use dirichlet::{closed_form, dirichlet_abs_sum, dirichlet_d, DirichletClosedForm, DEFAULT_NU};
pub use region::{g_and_slope, g_of_tau, ZeroFreeRegionSpec};

use crate::arith::ArithFunctionId;
use crate::error::{Error, Result};
use crate::hpnum::{gamma, gamma_stirling_bound, PrecisionContext};
use crate::quad::{gauss_legendre, integrate, QuadConfig};
use crate::series::{EvalPoint, SeriesValue};
use rug::ops::NegAssign;
use rug::{Complex, Float};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

/// Highest contour height for which the rectangle up to the zero-free arc is
/// certified free of zeros of ζ (first zero at height 14.1347…).
pub const SAFE_HEIGHT: f64 = 14.0;

/// κ = 1 + 1/log(1/|t|), for |t| < 1.
pub fn default_kappa(t_abs: f64) -> Result<f64> {
    if !(t_abs > 0.0 && t_abs < 1.0) {
        return Err(Error::Domain(format!("automatic kappa needs 0 < |t| < 1, got {t_abs}")));
    }
    Ok(1.0 + 1.0 / (1.0 / t_abs).ln())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub kappa: f64,
    /// Height T where the contour leaves the line Re s = κ.
    pub height: f64,
    pub region: ZeroFreeRegionSpec,
    pub quad: QuadConfig,
    pub nu: f64,
    /// Overrides the calibrated C_D in the segment majorants.
    pub c_d: Option<f64>,
    pub allow_unsafe_height: bool,
}

impl ContourSpec {
    pub fn new(kappa: f64, height: f64, region: ZeroFreeRegionSpec) -> Result<Self> {
        let c = ContourSpec {
            kappa,
            height,
            region,
            quad: QuadConfig::default(),
            nu: DEFAULT_NU,
            c_d: None,
            allow_unsafe_height: false,
        };
        c.validate()?;
        Ok(c)
    }

    /// κ from `default_kappa`, default region.
    pub fn auto(t_abs: f64, height: f64) -> Result<Self> {
        Self::new(default_kappa(t_abs)?, height, ZeroFreeRegionSpec::default())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 1.0 && self.kappa.is_finite()) {
            return Err(Error::Domain(format!("kappa must exceed 1, got {}", self.kappa)));
        }
        if !(self.height > 0.0 && self.height.is_finite()) {
            return Err(Error::InvalidArgument(format!("contour height T must be positive, got {}", self.height)));
        }
        if self.height > SAFE_HEIGHT && !self.allow_unsafe_height {
            return Err(Error::RegionSafety(format!(
                "T = {} exceeds {SAFE_HEIGHT}; zero-freeness of zeta above it is not certified (override to explore)",
                self.height
            )));
        }
        self.region.validate()?;
        let (g0, _) = g_and_slope(&self.region, 0.0);
        if !(g0 > 0.0) {
            return Err(Error::InvalidArgument(format!("zero-free boundary g = {g0} must stay positive")));
        }
        if !(self.nu >= 0.0) {
            return Err(Error::InvalidArgument(format!("nu must be nonnegative, got {}", self.nu)));
        }
        Ok(())
    }
}

/// Line-integral result. `series.tail_bound` is the total error budget.
#[derive(Debug, Clone, PartialEq)]
pub struct LineIntegral {
    pub series: SeriesValue,
    pub kappa: f64,
    /// Truncation heights above and below the real axis.
    pub cutoff_upper: f64,
    pub cutoff_lower: f64,
    pub truncation_bound: f64,
    pub quad_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Segment {
    Vert,
    Hor,
    Arc,
}

impl Segment {
    pub const ALL: [Segment; 3] = [Segment::Vert, Segment::Hor, Segment::Arc];

    pub fn name(self) -> &'static str {
        match self {
            Segment::Vert => "vert",
            Segment::Hor => "hor",
            Segment::Arc => "arc",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformedIntegral {
    pub series: SeriesValue,
    pub kappa: f64,
    pub height: f64,
    pub cutoff_upper: f64,
    pub cutoff_lower: f64,
    /// Contributions of both vertical rays, both horizontal segments, and
    /// the arc σ = g(τ), |τ| ≤ T; they add up to `series.value`.
    pub segments: BTreeMap<Segment, Complex>,
    pub truncation_bound: f64,
    pub quad_error: f64,
}

struct Integrand<'a> {
    fn_id: ArithFunctionId,
    log_t: Complex,
    pc: &'a PrecisionContext,
    evaluations: u64,
}

impl Integrand<'_> {
    fn new<'a>(fn_id: ArithFunctionId, point: &EvalPoint, pc: &'a PrecisionContext) -> Integrand<'a> {
        let log_t = Complex::with_val(pc.work(), point.t().ln_ref());
        Integrand { fn_id, log_t, pc, evaluations: 0 }
    }

    /// D(s) Γ(s) t^{−s}
    fn eval(&mut self, s: &Complex) -> Result<Complex> {
        self.evaluations += 1;
        let p = self.pc.work();
        let d = dirichlet_d(self.fn_id, s, self.pc)?;
        let g = gamma(s, self.pc)?;
        let mut ts = Complex::with_val(p, s * &self.log_t);
        ts.neg_assign();
        ts.exp_mut();
        let v = Complex::with_val(p, &d * &g) * ts;
        crate::hpnum::ensure_finite(&v, "Mellin integrand")?;
        Ok(v)
    }
}

/// Bound for (1/2π) ∫_H^∞ |D Γ t^{−s}| dτ along σ = κ with decay rate c,
/// using |Γ(κ+iτ)| ≤ √(2π)|s|^{κ−½} e^{−πτ/2} e^{1/(6|s|)} and |D| ≤ `d_abs`.
fn ray_tail_bound(kappa: f64, h: f64, c: f64, d_abs: f64, t_abs: f64) -> f64 {
    let a = kappa - 0.5;
    let u = h + kappa;
    let rate = c - a / u;
    if rate <= 0.0 {
        return f64::INFINITY;
    }
    let log_pref = 0.5 * (2.0 * PI).ln() + d_abs.ln() - kappa * t_abs.ln() + 1.0 / (6.0 * h.max(kappa));
    let log_int = a * u.ln() - c * h - rate.ln();
    (log_pref + log_int).exp() / (2.0 * PI)
}

/// Smallest height (within 1/8) with `ray_tail_bound` ≤ target.
fn ray_cutoff(kappa: f64, c: f64, d_abs: f64, t_abs: f64, target: f64, floor: f64) -> Result<f64> {
    let mut hi = floor.max(8.0);
    while ray_tail_bound(kappa, hi, c, d_abs, t_abs) > target {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::Range {
                what: "Mellin line cutoff",
                detail: format!("truncation height exceeds 1e4 (decay rate {c})"),
            });
        }
    }
    let mut lo = floor.max(hi / 2.0);
    if ray_tail_bound(kappa, lo, c, d_abs, t_abs) <= target {
        return Ok(lo);
    }
    while hi - lo > 0.125 {
        let mid = 0.5 * (lo + hi);
        if ray_tail_bound(kappa, mid, c, d_abs, t_abs) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi.ceil())
}

fn breaks(a: f64, b: f64, width: f64, extra: &[f64]) -> Vec<f64> {
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    let mut v: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    v.extend(extra.iter().copied().filter(|x| *x > a && *x < b));
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v.dedup();
    v
}

const PANEL_WIDTH: f64 = 1.0;

fn check_point(point: &EvalPoint) -> Result<(f64, f64, f64)> {
    let arg = point.arg_f64();
    let c_up = FRAC_PI_2 - arg;
    let c_low = FRAC_PI_2 + arg;
    if !(c_up > 0.0 && c_low > 0.0) {
        return Err(Error::Domain("|arg t| must be below pi/2".into()));
    }
    Ok((point.abs_f64(), c_up, c_low))
}

/// Integral of `ig` along σ = κ for τ ∈ [a, b], divided by 2π
/// (that is, (1/2πi) ∫ f ds with ds = i dτ).
fn vertical_piece(
    ig: &mut Integrand,
    kappa: f64,
    a: f64,
    b: f64,
    tol: f64,
    cfg: &QuadConfig,
    extra: &[f64],
) -> Result<(Complex, f64)> {
    let p = ig.pc.work();
    let kap = Float::with_val(p, kappa);
    let r = integrate(
        |tau| ig.eval(&Complex::with_val(p, (&kap, tau))),
        &breaks(a, b, PANEL_WIDTH, extra),
        tol * 2.0 * PI,
        p,
        cfg,
    )?;
    let two_pi = Float::with_val(p, rug::float::Constant::Pi) * 2u32;
    Ok((r.value / two_pi, r.error_estimate / (2.0 * PI)))
}

/// (1/2πi) ∫_{κ−i∞}^{κ+i∞} D(s)Γ(s)t^{−s} ds.
pub fn inverse_mellin_line(
    fn_id: ArithFunctionId,
    point: &EvalPoint,
    kappa: f64,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<LineIntegral> {
    inverse_mellin_line_with(fn_id, point, kappa, pc, target_abs_err, &QuadConfig::default())
}

pub fn inverse_mellin_line_with(
    fn_id: ArithFunctionId,
    point: &EvalPoint,
    kappa: f64,
    pc: &PrecisionContext,
    target_abs_err: f64,
    cfg: &QuadConfig,
) -> Result<LineIntegral> {
    if !(kappa > 1.0 && kappa.is_finite()) {
        return Err(Error::Domain(format!("kappa must exceed 1, got {kappa}")));
    }
    if !(target_abs_err > 0.0) {
        return Err(Error::InvalidArgument("target error must be positive".into()));
    }
    closed_form(fn_id)?;
    let (t_abs, c_up, c_low) = check_point(point)?;
    let d_abs = dirichlet_abs_sum(fn_id, kappa, pc)?;
    let h_up = ray_cutoff(kappa, c_up, d_abs, t_abs, target_abs_err / 8.0, 0.0)?;
    let h_low = ray_cutoff(kappa, c_low, d_abs, t_abs, target_abs_err / 8.0, 0.0)?;
    let truncation =
        ray_tail_bound(kappa, h_up, c_up, d_abs, t_abs) + ray_tail_bound(kappa, h_low, c_low, d_abs, t_abs);
    let mut ig = Integrand::new(fn_id, point, pc);
    let quad_tol = target_abs_err / 4.0;
    let (value, qerr) = if point.is_real() {
        // f(conj s) = conj f(s): integrate the upper half and double its real part
        let (v, e) = vertical_piece(&mut ig, kappa, 0.0, h_up, quad_tol / 2.0, cfg, &[])?;
        (Complex::with_val(pc.work(), (Float::with_val(pc.work(), v.real() * 2u32), 0)), 2.0 * e)
    } else {
        let (v, e) = vertical_piece(&mut ig, kappa, -h_low, h_up, quad_tol, cfg, &[0.0])?;
        (v, e)
    };
    let mut counters = BTreeMap::new();
    counters.insert("integrand_evaluations", ig.evaluations);
    Ok(LineIntegral {
        series: SeriesValue {
            value: pc.round_c(&value),
            tail_bound: truncation + qerr,
            terms_used: ig.evaluations,
            counters,
        },
        kappa,
        cutoff_upper: h_up,
        cutoff_lower: h_low,
        truncation_bound: truncation,
        quad_error: qerr,
    })
}

fn require_analytic(fn_id: ArithFunctionId) -> Result<()> {
    let cf = closed_form(fn_id)?;
    if !cf.analytic_in_region {
        return Err(Error::Domain(format!(
            "{fn_id}: D(s) = {} has a pole at s = 1 inside the deformed contour",
            cf.formula
        )));
    }
    Ok(())
}

/// Same integral along κ−i∞ → κ−iT → g(T)−iT → (arc σ = g(τ)) → g(T)+iT →
/// κ+iT → κ+i∞, reported per segment.
pub fn inverse_mellin_deformed(
    fn_id: ArithFunctionId,
    point: &EvalPoint,
    spec: &ContourSpec,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<DeformedIntegral> {
    spec.validate()?;
    require_analytic(fn_id)?;
    if !(target_abs_err > 0.0) {
        return Err(Error::InvalidArgument("target error must be positive".into()));
    }
    let (t_abs, c_up, c_low) = check_point(point)?;
    let kappa = spec.kappa;
    let t_h = spec.height;
    let d_abs = dirichlet_abs_sum(fn_id, kappa, pc)?;
    let h_up = ray_cutoff(kappa, c_up, d_abs, t_abs, target_abs_err / 8.0, t_h + 1.0)?;
    let h_low = ray_cutoff(kappa, c_low, d_abs, t_abs, target_abs_err / 8.0, t_h + 1.0)?;
    let truncation =
        ray_tail_bound(kappa, h_up, c_up, d_abs, t_abs) + ray_tail_bound(kappa, h_low, c_low, d_abs, t_abs);
    let p = pc.work();
    let cfg = &spec.quad;
    let mut ig = Integrand::new(fn_id, point, pc);
    let real = point.is_real();
    let tol = target_abs_err / 4.0 / if real { 6.0 } else { 10.0 };
    let two_pi_i = Complex::with_val(p, (0, Float::with_val(p, rug::float::Constant::Pi) * 2u32));
    let (g_t, _) = g_and_slope(&spec.region, t_h);
    let mut qerr = 0.0;

    let horizontal = |ig: &mut Integrand, tau: f64, qerr: &mut f64| -> Result<Complex> {
        // (1/2πi) ∫_{g(T)}^{κ} f(σ + iτ) dσ
        let tt = Float::with_val(p, tau);
        let r = integrate(
            |sigma| ig.eval(&Complex::with_val(p, (sigma, &tt))),
            &breaks(g_t, kappa, 0.25, &[1.0]),
            tol * 2.0 * PI,
            p,
            cfg,
        )?;
        *qerr += r.error_estimate / (2.0 * PI);
        Ok(r.value / &two_pi_i)
    };
    let region = spec.region.clone();
    let arc = |ig: &mut Integrand, a: f64, b: f64, qerr: &mut f64| -> Result<Complex> {
        // (1/2πi) ∫ f(g(τ) + iτ) (g′(τ) + i) dτ
        let w = region.w_f64();
        let r = integrate(
            |tau| {
                let (_, dg) = g_and_slope(&region, tau.to_f64());
                let gs = g_of_tau(&region, tau, &pc.raised(pc.guard_bits))?;
                let s = Complex::with_val(p, (&gs, tau));
                let f = ig.eval(&s)?;
                Ok(f * Complex::with_val(p, (dg, 1)))
            },
            &breaks(a, b, 0.5 * PANEL_WIDTH, &[-w, 0.0, w]),
            tol * 2.0 * PI,
            p,
            cfg,
        )?;
        *qerr += r.error_estimate / (2.0 * PI);
        Ok(r.value / &two_pi_i)
    };

    let (vert, hor, arc_v) = if real {
        let (v, e) = vertical_piece(&mut ig, kappa, t_h, h_up, tol, cfg, &[])?;
        qerr += e;
        let h = horizontal(&mut ig, t_h, &mut qerr)?;
        let a = arc(&mut ig, 0.0, t_h, &mut qerr)?;
        qerr *= 2.0;
        let dbl = |z: Complex| Complex::with_val(p, (Float::with_val(p, z.real() * 2u32), 0));
        (dbl(v), dbl(h), dbl(a))
    } else {
        let (v1, e1) = vertical_piece(&mut ig, kappa, t_h, h_up, tol, cfg, &[])?;
        let (v2, e2) = vertical_piece(&mut ig, kappa, -h_low, -t_h, tol, cfg, &[])?;
        qerr += e1 + e2;
        let h1 = horizontal(&mut ig, t_h, &mut qerr)?;
        let h2 = horizontal(&mut ig, -t_h, &mut qerr)?;
        let a = arc(&mut ig, -t_h, t_h, &mut qerr)?;
        (v1 + v2, h1 - h2, a)
    };
    let total = Complex::with_val(p, &vert + &hor) + &arc_v;
    let mut segments = BTreeMap::new();
    segments.insert(Segment::Vert, pc.round_c(&vert));
    segments.insert(Segment::Hor, pc.round_c(&hor));
    segments.insert(Segment::Arc, pc.round_c(&arc_v));
    let mut counters = BTreeMap::new();
    counters.insert("integrand_evaluations", ig.evaluations);
    Ok(DeformedIntegral {
        series: SeriesValue {
            value: pc.round_c(&total),
            tail_bound: truncation + qerr,
            terms_used: ig.evaluations,
            counters,
        },
        kappa,
        height: t_h,
        cutoff_upper: h_up,
        cutoff_lower: h_low,
        segments,
        truncation_bound: truncation,
        quad_error: qerr,
    })
}

/// C_D = 2 × max |D(s)|/(1+|τ|)^ν over a fixed sample of the contour
/// (rays up to T + 40, both horizontals, the arc).
pub fn calibrate_c_d(fn_id: ArithFunctionId, spec: &ContourSpec, pc: &PrecisionContext) -> Result<f64> {
    spec.validate()?;
    require_analytic(fn_id)?;
    let t_h = spec.height;
    let (g_t, _) = g_and_slope(&spec.region, t_h);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let steps = 160;
    for k in 0..=steps {
        let tau = t_h + 40.0 * k as f64 / steps as f64;
        pts.push((spec.kappa, tau));
    }
    for k in 0..=16 {
        pts.push((g_t + (spec.kappa - g_t) * k as f64 / 16.0, t_h));
    }
    let arc_steps = (8.0 * t_h).ceil() as usize;
    for k in 0..=arc_steps {
        let tau = t_h * k as f64 / arc_steps as f64;
        pts.push((g_and_slope(&spec.region, tau).0, tau));
    }
    let p = pc.work();
    let mut m: f64 = 0.0;
    for (sigma, tau) in pts {
        for sgn in [1.0, -1.0] {
            let s = Complex::with_val(p, (sigma, sgn * tau));
            let d = dirichlet_d(fn_id, &s, pc)?;
            m = m.max(crate::hpnum::abs_f64(&d) / (1.0 + tau.abs()).powf(spec.nu));
            if tau == 0.0 {
                break;
            }
        }
    }
    Ok(2.0 * m)
}

/// Composite Gauss–Legendre in double precision.
fn integrate_f64<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(24, 64);
    let nodes: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (x.to_f64(), w.to_f64())).collect();
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + h * k as f64;
        let mid = lo + 0.5 * h;
        let s: f64 = nodes.iter().map(|(x, w)| w * f(mid + 0.5 * h * x)).sum();
        total += 0.5 * h * s;
    }
    total
}

/// Explicit majorant of |I_seg|: the integral over the segment of
/// C_D (1+|τ|)^ν × (Stirling bound for |Γ|) × |t^{−s}| × |ds| / 2π.
pub fn bound_segment(
    which: Segment,
    fn_id: ArithFunctionId,
    point: &EvalPoint,
    spec: &ContourSpec,
    pc: &PrecisionContext,
) -> Result<f64> {
    let c_d = match spec.c_d {
        Some(c) => c,
        None => calibrate_c_d(fn_id, spec, pc)?,
    };
    bound_segment_with(which, point, spec, c_d)
}

/// `bound_segment` for a given C_D.
pub fn bound_segment_with(which: Segment, point: &EvalPoint, spec: &ContourSpec, c_d: f64) -> Result<f64> {
    spec.validate()?;
    let (t_abs, _, _) = check_point(point)?;
    let arg = point.arg_f64();
    let nu = spec.nu;
    let kappa = spec.kappa;
    let t_h = spec.height;
    let ln_t = t_abs.ln();
    // |t^{−s}| = |t|^{−σ} e^{τ arg t}
    let ts = |sigma: f64, tau: f64| (-sigma * ln_t + tau * arg).exp();
    let dg = |tau: f64| c_d * (1.0 + tau.abs()).powf(nu);
    let two_sided = |sigma: f64, tau: f64| ts(sigma, tau) + ts(sigma, -tau);
    let v = match which {
        Segment::Vert => {
            let c = FRAC_PI_2 - arg.abs();
            // integrand decays like e^{−cτ}; integrate until e^{−c L} < 1e-30
            let len = (70.0 / c).max(20.0) + 2.0 * (nu + kappa) / c;
            let f = |tau: f64| dg(tau) * gamma_stirling_bound(kappa, tau) * two_sided(kappa, tau);
            let body = integrate_f64(f, t_h, t_h + len, (len * 2.0).ceil() as usize);
            // remainder beyond T + len, by the ray tail estimate with |D| ≤ C_D (1+τ)^ν
            let tail_h = t_h + len;
            let tail = 2.0 * dg(tail_h) * ray_tail_bound(kappa + nu, tail_h, c, 1.0, t_abs) * t_abs.powf(nu);
            body + tail
        }
        Segment::Hor => {
            let (g_t, _) = g_and_slope(&spec.region, t_h);
            let f = |sigma: f64| dg(t_h) * gamma_stirling_bound(sigma, t_h) * two_sided(sigma, t_h);
            integrate_f64(f, g_t, kappa, 8)
        }
        Segment::Arc => {
            let f = |tau: f64| {
                let (g, d) = g_and_slope(&spec.region, tau);
                dg(tau) * gamma_stirling_bound(g, tau) * ts(g, tau) * (1.0 + d * d).sqrt()
            };
            let w = spec.region.w_f64();
            let mut cuts = vec![-t_h, 0.0, t_h];
            if w < t_h {
                cuts.extend([-w, w]);
            }
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.windows(2).map(|c| integrate_f64(&f, c[0], c[1], ((c[1] - c[0]) * 2.0).ceil() as usize)).sum()
        }
    };
    Ok(v / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ArithFunctionId as F;
    use crate::hpnum::abs_f64;
    use crate::series::eval_exp_series;

    fn pc() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn kappa_default() {
        assert!((default_kappa(0.1).unwrap() - (1.0 + 1.0 / 10f64.ln())).abs() < 1e-15);
        assert!(default_kappa(1.5).is_err());
    }

    #[test]
    fn tall_contour_rejected() {
        assert!(matches!(ContourSpec::auto(0.1, 20.0), Err(Error::RegionSafety(_))));
        let mut spec = ContourSpec::auto(0.1, 10.0).unwrap();
        spec.height = 20.0;
        spec.allow_unsafe_height = true;
        assert!(spec.validate().is_ok());
    }

    #[test]
    fn poles_block_deformation() {
        let point = EvalPoint::real(128, 0.1).unwrap();
        let spec = ContourSpec::auto(0.1, 10.0).unwrap();
        for f in [F::VonMangoldt, F::TauDivisors, F::TwoOmega, F::TwoOmegaMinusTau] {
            assert!(matches!(inverse_mellin_deformed(f, &point, &spec, &pc(), 1e-8), Err(Error::Domain(_))));
        }
        assert!(inverse_mellin_deformed(F::PrimeSequence, &point, &spec, &pc(), 1e-8).is_err());
    }

    #[test]
    fn ray_tail_is_decreasing() {
        let a = ray_tail_bound(1.5, 10.0, FRAC_PI_2, 2.0, 0.1);
        let b = ray_tail_bound(1.5, 20.0, FRAC_PI_2, 2.0, 0.1);
        assert!(b < a && a.is_finite());
    }

    #[test]
    fn line_matches_series_for_mobius() {
        let p = pc();
        let point = EvalPoint::real(128, 0.1).unwrap();
        let line = inverse_mellin_line(F::Mobius, &point, 1.5, &p, 1e-12).unwrap();
        let direct = eval_exp_series(F::Mobius, &point, &p, 1e-20).unwrap();
        let d = abs_f64(&Complex::with_val(128, &line.series.value - &direct.value));
        assert!(d < 1e-10, "diff {d}");
        assert!(line.series.tail_bound < 1e-12);
    }

    #[test]
    fn line_is_kappa_independent() {
        let p = pc();
        let point = EvalPoint::polar(128, 0.2, 0.3).unwrap();
        let a = inverse_mellin_line(F::Liouville, &point, 1.3, &p, 1e-10).unwrap();
        let b = inverse_mellin_line(F::Liouville, &point, 2.0, &p, 1e-10).unwrap();
        let d = abs_f64(&Complex::with_val(128, &a.series.value - &b.series.value));
        assert!(d < 2e-10, "diff {d}");
    }

    #[test]
    fn line_for_pole_forms_still_matches() {
        let p = pc();
        let point = EvalPoint::real(128, 0.2).unwrap();
        let line = inverse_mellin_line(F::VonMangoldt, &point, 1.6, &p, 1e-10).unwrap();
        let direct = eval_exp_series(F::VonMangoldt, &point, &p, 1e-20).unwrap();
        let d = abs_f64(&Complex::with_val(128, &line.series.value - &direct.value));
        assert!(d < 1e-9, "diff {d}");
    }

    #[test]
    fn deformed_matches_line() {
        let p = pc();
        let point = EvalPoint::real(128, 0.1).unwrap();
        let spec = ContourSpec::auto(0.1, 10.0).unwrap();
        let line = inverse_mellin_line(F::Mobius, &point, spec.kappa, &p, 1e-10).unwrap();
        let def = inverse_mellin_deformed(F::Mobius, &point, &spec, &p, 1e-10).unwrap();
        let d = abs_f64(&Complex::with_val(128, &line.series.value - &def.series.value));
        assert!(d < 1e-8, "diff {d}");
        for seg in Segment::ALL {
            let m = bound_segment(seg, F::Mobius, &point, &spec, &p).unwrap();
            assert!(abs_f64(&def.segments[&seg]) <= m, "{}", seg.name());
        }
    }
}
