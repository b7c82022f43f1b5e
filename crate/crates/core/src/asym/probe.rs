use super::envelope::choose_t;
use crate::arith::{sieve_with, ArithFunctionId, SieveConfig};
use crate::error::{Error, Result};
use crate::hpnum::PrecisionContext;
use crate::mellin::{bound_segment, ContourSpec, Segment, SAFE_HEIGHT};
use crate::series::{eval_with_table, plan, EvalPoint};
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct FakeAsymRow {
    pub t: f64,
    pub value: Float,
    pub plus_two: Float,
    /// (F + 2)·√t
    pub scaled: Float,
    pub tail_bound: f64,
    pub terms_used: u64,
}

fn sorted_desc(grid: &[f64]) -> Vec<f64> {
    let mut g = grid.to_vec();
    g.sort_by(|a, b| b.partial_cmp(a).unwrap());
    g
}

/// Real-t values of F_μ at every grid point, from a single sieve.
fn mobius_values(
    grid: &[f64],
    pc: &PrecisionContext,
    tol: f64,
    cfg: &SieveConfig,
) -> Result<Vec<(f64, crate::series::SeriesValue)>> {
    let mut points = Vec::with_capacity(grid.len());
    let mut need = 1u64;
    for &t in grid {
        let p = EvalPoint::real(pc.work(), t)?;
        need = need.max(plan(ArithFunctionId::Mobius, &p, tol)?);
        points.push((t, p));
    }
    if need > cfg.memory_cap {
        return Err(Error::MemoryCap { required: need, cap: cfg.memory_cap });
    }
    let table = sieve_with(ArithFunctionId::Mobius, need, cfg)?;
    points.into_iter().map(|(t, p)| Ok((t, eval_with_table(&table, &p, pc, tol)?))).collect()
}

/// Rows (t, F_μ(t), F_μ(t)+2, (F_μ(t)+2)√t), ordered by decreasing t.
pub fn fake_asymptotics_probe(
    t_grid: &[f64],
    pc: &PrecisionContext,
    tol: f64,
    cfg: &SieveConfig,
) -> Result<Vec<FakeAsymRow>> {
    for &t in t_grid {
        if !(t > 0.0 && t <= 1e-2) {
            return Err(Error::Domain(format!("fake-asymptotics grid must lie in (0, 1e-2], got {t}")));
        }
    }
    let p = pc.work();
    let grid = sorted_desc(t_grid);
    mobius_values(&grid, pc, tol, cfg)?
        .into_iter()
        .map(|(t, v)| {
            let value = v.value.real().clone();
            let plus_two = Float::with_val(p, &value + 2u32);
            let scaled = Float::with_val(p, &plus_two * Float::with_val(p, t).sqrt());
            Ok(FakeAsymRow {
                t,
                value: pc.round(&value),
                plus_two: pc.round(&plus_two),
                scaled: pc.round(&scaled),
                tail_bound: v.tail_bound,
                terms_used: v.terms_used,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhSeriesRow {
    pub z: f64,
    /// |F_μ(z)| (1−z)^η
    pub ratio: Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhMertensRow {
    pub x: u64,
    pub mertens: i64,
    /// |M(x)| / x^η
    pub ratio: Float,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RhWindow {
    pub eta: f64,
    pub series: Vec<RhSeriesRow>,
    pub mertens: Vec<RhMertensRow>,
}

/// Both sides of the η-window: |F_μ(z)|(1−z)^η on the z grid, and |M(x)|/x^η
/// at the paired scales x = 1/(1−z), rounded.
pub fn rh_window_probe(
    eta: f64,
    z_grid: &[f64],
    pc: &PrecisionContext,
    tol: f64,
    cfg: &SieveConfig,
) -> Result<RhWindow> {
    if !(0.5..1.0).contains(&eta) {
        return Err(Error::Domain(format!("eta must lie in [1/2, 1), got {eta}")));
    }
    let p = pc.work();
    let mut ts = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        if !(z > 0.0 && z < 1.0) {
            return Err(Error::Domain(format!("z must lie in (0, 1), got {z}")));
        }
        ts.push(-Float::with_val(p, z).ln().to_f64());
    }
    let values = mobius_values(&ts, pc, tol, cfg)?;
    let mut series = Vec::new();
    let mut xs = Vec::new();
    for (&z, (_, v)) in z_grid.iter().zip(values.iter()) {
        let w = Float::with_val(p, 1 - Float::with_val(p, z));
        let r = Float::with_val(p, v.value.real().abs_ref()) * w.pow(Float::with_val(p, eta));
        series.push(RhSeriesRow { z, ratio: pc.round(&r) });
        xs.push(((1.0 / (1.0 - z)).round() as u64).max(1));
    }
    let x_max = xs.iter().copied().max().unwrap_or(1);
    let table = sieve_with(ArithFunctionId::Mobius, x_max, cfg)?.with_prefix_sums()?;
    let mut mertens = Vec::new();
    for x in xs {
        let m = table.prefix_sum(x)?;
        let r = Float::with_val(p, m.unsigned_abs()) / Float::with_val(p, x).pow(Float::with_val(p, eta));
        mertens.push(RhMertensRow { x, mertens: m, ratio: pc.round(&r) });
    }
    Ok(RhWindow { eta, series, mertens })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelangeRow {
    pub t: f64,
    pub value: Float,
    /// F_μ(t) √(1 − e^{−t})
    pub scaled: Float,
}

/// Trajectory of F_μ on real t scaled by √(1−z); the oscillation of sign
/// is what an Ω± statement predicts.
pub fn delange_probe(t_grid: &[f64], pc: &PrecisionContext, tol: f64, cfg: &SieveConfig) -> Result<Vec<DelangeRow>> {
    let p = pc.work();
    let grid = sorted_desc(t_grid);
    mobius_values(&grid, pc, tol, cfg)?
        .into_iter()
        .map(|(t, v)| {
            let w = -Float::with_val(p, -t).exp_m1();
            let scaled = Float::with_val(p, v.value.real() * w.sqrt());
            Ok(DelangeRow { t, value: pc.round(v.value.real()), scaled: pc.round(&scaled) })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimeAbelianRow {
    pub one_minus_z: f64,
    pub direct: Float,
    pub abelian: Float,
    pub ratio: Float,
    pub tail_bound: f64,
}

/// Σ pₙ zⁿ against (1/(1−z)²) log(1/(1−z)) at z = 1 − d.
pub fn prime_abelian_probe(
    one_minus_z: &[f64],
    pc: &PrecisionContext,
    tol: f64,
    cfg: &SieveConfig,
) -> Result<Vec<PrimeAbelianRow>> {
    let p = pc.work();
    let mut grid = one_minus_z.to_vec();
    grid.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut points = Vec::new();
    let mut need = 1u64;
    for &d in &grid {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::Domain(format!("1 - z must lie in (0, 1), got {d}")));
        }
        let t = -Float::with_val(p, -d).ln_1p();
        let point = EvalPoint::with_max_theta(Complex::with_val(p, (t, 0)))?;
        need = need.max(plan(ArithFunctionId::PrimeSequence, &point, tol)?);
        points.push((d, point));
    }
    if need > cfg.memory_cap {
        return Err(Error::MemoryCap { required: need, cap: cfg.memory_cap });
    }
    let table = sieve_with(ArithFunctionId::PrimeSequence, need, cfg)?;
    points
        .into_iter()
        .map(|(d, point)| {
            let v = eval_with_table(&table, &point, pc, tol)?;
            let x = Float::with_val(p, d).recip();
            let ab = Float::with_val(p, x.square_ref()) * x.ln();
            let ratio = Float::with_val(p, v.value.real() / &ab);
            Ok(PrimeAbelianRow {
                one_minus_z: d,
                direct: pc.round(v.value.real()),
                abelian: pc.round(&ab),
                ratio: pc.round(&ratio),
                tail_bound: v.tail_bound,
            })
        })
        .collect()
}

/// The horizontal and arc majorants at T = choose_T(t), clamped to the safe height.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceRow {
    pub t: f64,
    pub chosen_t: f64,
    pub used_t: f64,
    pub clamped: bool,
    pub hor: f64,
    pub arc: f64,
    /// max/min of log hor and log arc
    pub slack: f64,
    /// |log hor − log arc| / log(1/t)
    pub normalized_gap: f64,
}

pub fn balance_report(
    fn_id: ArithFunctionId,
    t_abs: f64,
    alpha: &Rational,
    pc: &PrecisionContext,
) -> Result<BalanceRow> {
    let chosen = choose_t(&Float::with_val(pc.work(), t_abs), alpha, pc)?.to_f64();
    let clamped = chosen > SAFE_HEIGHT;
    let used = chosen.min(SAFE_HEIGHT);
    let spec = ContourSpec::auto(t_abs, used)?;
    let point = EvalPoint::real(pc.work(), t_abs)?;
    let hor = bound_segment(Segment::Hor, fn_id, &point, &spec, pc)?;
    let arc = bound_segment(Segment::Arc, fn_id, &point, &spec, pc)?;
    let (lh, la) = (hor.ln(), arc.ln());
    let slack = if lh > 0.0 && la > 0.0 { lh.max(la) / lh.min(la) } else { f64::INFINITY };
    Ok(BalanceRow {
        t: t_abs,
        chosen_t: chosen,
        used_t: used,
        clamped,
        hor,
        arc,
        slack,
        normalized_gap: (lh - la).abs() / (1.0 / t_abs).ln(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn fake_asym_rows_sorted() {
        let rows = fake_asymptotics_probe(&[1e-3, 1e-2, 3e-3], &pc(), 1e-15, &SieveConfig::default()).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.windows(2).all(|w| w[0].t > w[1].t));
        assert!(rows.iter().all(|r| r.plus_two.to_f64().abs() < 0.5));
        assert!(fake_asymptotics_probe(&[0.1], &pc(), 1e-15, &SieveConfig::default()).is_err());
    }

    #[test]
    fn rh_window_eta_one_half_sizes() {
        let w = rh_window_probe(0.5, &[0.9, 0.99, 0.999], &pc(), 1e-15, &SieveConfig::default()).unwrap();
        assert_eq!(w.series.len(), 3);
        assert_eq!(w.mertens.len(), 3);
        assert_eq!(w.mertens[1].x, 100);
        assert_eq!(w.mertens[1].mertens, 1);
        assert!(rh_window_probe(1.0, &[0.9], &pc(), 1e-15, &SieveConfig::default()).is_err());
    }

    #[test]
    fn prime_ratio_drifts_toward_one() {
        let rows = prime_abelian_probe(&[1e-2, 1e-3, 1e-4], &pc(), 1e-10, &SieveConfig::default()).unwrap();
        let gaps: Vec<f64> = rows.iter().map(|r| (r.ratio.to_f64() - 1.0).abs()).collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }

    #[test]
    fn balance_slack() {
        let r = balance_report(ArithFunctionId::Mobius, 1e-6, &Rational::from((2, 3)), &pc()).unwrap();
        assert!(!r.clamped);
        assert!(r.slack <= 10.0, "{r:?}");
    }
}
