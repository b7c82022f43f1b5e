use crate::error::{Error, Result};
use crate::hpnum::PrecisionContext;
use rug::ops::Pow;
use rug::{Float, Rational};

/// Zero-free region σ ≥ g(τ) of Korobov–Vinogradov shape:
/// g(τ) = 1 − b (log|τ|)^{−α} (log log|τ|)^{−β} for |τ| ≥ w, and g(w) below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroFreeRegionSpec {
    pub alpha: Rational,
    pub beta: Rational,
    pub b: Rational,
    pub w: Rational,
}

impl Default for ZeroFreeRegionSpec {
    fn default() -> Self {
        ZeroFreeRegionSpec {
            alpha: Rational::from((2, 3)),
            beta: Rational::from((1, 3)),
            b: Rational::from((203, 10000)),
            w: Rational::from(16),
        }
    }
}

impl ZeroFreeRegionSpec {
    pub fn new(alpha: Rational, beta: Rational, b: Rational, w: Rational) -> Result<Self> {
        let r = ZeroFreeRegionSpec { alpha, beta, b, w };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha", &self.alpha), ("beta", &self.beta), ("b", &self.b)] {
            if *v <= 0 {
                return Err(Error::InvalidArgument(format!("region parameter {name} must be positive")));
            }
        }
        // log log w > 0
        if self.w.to_f64() <= std::f64::consts::E {
            return Err(Error::InvalidArgument(format!("region parameter w = {} must exceed e", self.w.to_f64())));
        }
        Ok(())
    }

    pub fn w_f64(&self) -> f64 {
        self.w.to_f64()
    }
}

/// g(τ) at the context's precision.
pub fn g_of_tau(region: &ZeroFreeRegionSpec, tau: &Float, pc: &PrecisionContext) -> Result<Float> {
    region.validate()?;
    let p = pc.work();
    let w = Float::with_val(p, &region.w);
    let at = Float::with_val(p, tau.abs_ref());
    let x = if at < w { w } else { at };
    let l = x.ln();
    let ll = Float::with_val(p, l.ln_ref());
    let alpha = Float::with_val(p, &region.alpha);
    let beta = Float::with_val(p, &region.beta);
    let mut d = Float::with_val(p, (&l).pow(&alpha));
    d *= ll.pow(&beta);
    let mut g = Float::with_val(p, &region.b) / d;
    g = 1 - g;
    Ok(pc.round(&g))
}

/// Double precision g(τ) and g′(τ) for contour geometry.
pub fn g_and_slope(region: &ZeroFreeRegionSpec, tau: f64) -> (f64, f64) {
    let w = region.w_f64();
    let (a, be, b) = (region.alpha.to_f64(), region.beta.to_f64(), region.b.to_f64());
    let at = tau.abs();
    let x = at.max(w);
    let l = x.ln();
    let ll = l.ln();
    let h = b * l.powf(-a) * ll.powf(-be);
    let g = 1.0 - h;
    if at <= w {
        return (g, 0.0);
    }
    // d/dx of −h = h (α/ln x + β/(ln x · ln ln x)) / x
    let dg = h * (a / l + be / (l * ll)) / x;
    (g, dg * tau.signum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_below_w() {
        let r = ZeroFreeRegionSpec::default();
        let pc = PrecisionContext::new(128).unwrap();
        let a = g_of_tau(&r, &Float::with_val(128, 3), &pc).unwrap();
        let b = g_of_tau(&r, &Float::with_val(128, -16), &pc).unwrap();
        assert_eq!(a, b);
        let (g, dg) = g_and_slope(&r, 10.0);
        assert!((g - 0.98978).abs() < 1e-5, "{g}");
        assert_eq!(dg, 0.0);
    }

    #[test]
    fn formula_at_one_million() {
        let r = ZeroFreeRegionSpec::default();
        let pc = PrecisionContext::new(256).unwrap();
        let g = g_of_tau(&r, &Float::with_val(256, 1e6), &pc).unwrap();
        let l = 1e6f64.ln();
        let expect = 1.0 - 0.0203 * l.powf(-2.0 / 3.0) * l.ln().powf(-1.0 / 3.0);
        assert!((g.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn slope_matches_difference() {
        let r = ZeroFreeRegionSpec::default();
        for &tau in &[20.0, 100.0, -500.0] {
            let h = 1e-5;
            let fd = (g_and_slope(&r, tau + h).0 - g_and_slope(&r, tau - h).0) / (2.0 * h);
            assert!((fd - g_and_slope(&r, tau).1).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_small_w() {
        let mut r = ZeroFreeRegionSpec::default();
        r.w = Rational::from(2);
        assert!(r.validate().is_err());
    }
}
