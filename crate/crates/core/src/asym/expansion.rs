use crate::arith::ArithFunctionId;
use crate::error::{Error, Result};
use crate::hpnum::{bernoulli, euler_gamma, pi, zeta_and_prime, PrecisionContext};
use crate::series::{eval_power_series, t_of_z, SeriesValue};
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

/// |coefficient| B_{n+1}² / ((n+1)! (n+1)) of tⁿ in the divisor expansion,
/// for n = 0..K−1.
pub fn tau_expansion_coefficients(k: usize) -> Result<Vec<Rational>> {
    let mut out = Vec::with_capacity(k);
    let mut fact = Integer::from(1);
    for n in 0..k {
        fact *= (n + 1) as u32;
        let b = bernoulli(n + 1)?;
        let den = Integer::from(&fact * (n as u32 + 1));
        out.push(Rational::from(b.square_ref()) / den);
    }
    Ok(out)
}

/// Σ τ(n) e^{−nt} ≈ (1/t) log(1/t) + γ/t + Σ_{n<K} (−1)ⁿ cₙ tⁿ.
///
/// The signs are those of the residues of ζ(s)² Γ(s) t^{−s} at s = −n:
/// ζ(−n)² (−1)ⁿ/n! tⁿ, which puts +1/4 at n = 0 and −cₙ at every odd n.
pub fn tau_expansion(t: &Complex, k: usize, pc: &PrecisionContext) -> Result<Complex> {
    let p = pc.work();
    if !(t.real() > &0) {
        return Err(Error::Domain("tau expansion needs Re(t) > 0".into()));
    }
    let log_inv = -Complex::with_val(p, t.ln_ref());
    let inv = Complex::with_val(p, t.recip_ref());
    let mut acc = Complex::with_val(p, &log_inv + euler_gamma(pc));
    acc *= &inv;
    let mut tp = Complex::with_val(p, 1);
    for (n, c) in tau_expansion_coefficients(k)?.iter().enumerate() {
        let term = Complex::with_val(p, &tp * Float::with_val(p, c));
        if n % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        tp *= t;
    }
    Ok(pc.round_c(&acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MainTermSource {
    /// The main terms in their originally stated form.
    Literal,
    /// Residue at s = 1 of D(s) Γ(s) t^{−s}.
    ResidueDerived,
}

impl MainTermSource {
    pub fn name(self) -> &'static str {
        match self {
            MainTermSource::Literal => "paper",
            MainTermSource::ResidueDerived => "residue",
        }
    }
}

impl std::str::FromStr for MainTermSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper-literal" => Ok(MainTermSource::Literal),
            "residue" | "residue-derived" => Ok(MainTermSource::ResidueDerived),
            _ => Err(Error::InvalidArgument(format!("unknown main-term source '{s}' (paper|residue)"))),
        }
    }
}

/// Symbolic main term, for reports.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermForm {
    pub fn_id: ArithFunctionId,
    pub description: &'static str,
    pub source: MainTermSource,
}

pub fn main_term_form(fn_id: ArithFunctionId, source: MainTermSource) -> Result<MainTermForm> {
    use ArithFunctionId::*;
    use MainTermSource::*;
    let description = match (fn_id, source) {
        (Mobius | MobiusAlternating | Liouville | LiouvilleAlternating, _) => "0",
        (VonMangoldt, Literal) => "1/(1-z)",
        (VonMangoldt, ResidueDerived) => "1/t",
        (TwoOmega, Literal) => "(1/(1-z)) log(1/(1-z)) + (1+gamma)/(1-z)",
        (TwoOmega, ResidueDerived) => "(1/t) [(log(1/t) + gamma)/zeta(2) - 2 zeta'(2)/zeta(2)^2]",
        _ => {
            return Err(Error::Unsupported(format!("no main term is defined for {fn_id}")));
        }
    };
    Ok(MainTermForm { fn_id, description, source })
}

/// Main term of Σ aₙ zⁿ as z → 1 in a sector, t = −log z.
pub fn corollary_main_term(
    fn_id: ArithFunctionId,
    z: &Complex,
    source: MainTermSource,
    pc: &PrecisionContext,
) -> Result<Complex> {
    use ArithFunctionId::*;
    use MainTermSource::*;
    main_term_form(fn_id, source)?;
    let p = pc.work();
    let t = t_of_z(z, pc)?;
    let one_minus = Complex::with_val(p, 1 - z);
    let v = match (fn_id, source) {
        (Mobius | MobiusAlternating | Liouville | LiouvilleAlternating, _) => Complex::with_val(p, 0),
        (VonMangoldt, Literal) => Complex::with_val(p, one_minus.recip_ref()),
        (VonMangoldt, ResidueDerived) => Complex::with_val(p, t.recip_ref()),
        (TwoOmega, Literal) => {
            let inv = Complex::with_val(p, one_minus.recip_ref());
            let lg = Complex::with_val(p, inv.ln_ref());
            let g = euler_gamma(pc) + 1u32;
            Complex::with_val(p, &inv * &lg) + inv * g
        }
        (TwoOmega, ResidueDerived) => {
            // ζ(s)²/ζ(2s) = A/(s−1)² + B/(s−1) + …, A = 1/ζ(2),
            // B = 2γ/ζ(2) − 2ζ′(2)/ζ(2)²; Γ(s)t^{−s} = t^{−1}(1 − (γ + log t)(s−1) + …)
            let (z2, dz2) = zeta_and_prime(&Complex::with_val(p, 2), pc)?;
            let z2 = z2.real().clone();
            let dz2 = dz2.real().clone();
            let gamma = euler_gamma(pc);
            let inv_t = Complex::with_val(p, t.recip_ref());
            let log_inv = -Complex::with_val(p, t.ln_ref());
            let lead = Complex::with_val(p, &log_inv + &gamma) / &z2;
            let c = Float::with_val(p, &dz2 * 2u32) / Float::with_val(p, z2.square_ref());
            (lead - c) * inv_t
        }
        _ => unreachable!("rejected by main_term_form"),
    };
    Ok(pc.round_c(&v))
}

/// Leading coefficient 1/ζ(2) = 6/π² of the residue-derived 2^ω term.
pub fn two_omega_leading_coefficient(pc: &PrecisionContext) -> Float {
    let pi = pi(pc.work());
    pc.round(&(Float::with_val(pc.work(), 6u32) / Float::with_val(pc.work(), pi.square_ref())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub direct: SeriesValue,
    pub main: Complex,
    pub residual: Complex,
}

/// Σ aₙ zⁿ − main term.
pub fn corollary_residual(
    fn_id: ArithFunctionId,
    z: &Complex,
    source: MainTermSource,
    pc: &PrecisionContext,
    target_abs_err: f64,
) -> Result<Residual> {
    let main = corollary_main_term(fn_id, z, source, pc)?;
    let direct = eval_power_series(fn_id, z, pc, target_abs_err)?;
    let residual = pc.round_c(&Complex::with_val(pc.work(), &direct.value - &main));
    Ok(Residual { direct, main, residual })
}

/// ℓ(x) = (log x)^k (log log x)^m.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlowlyVarying {
    pub log_power: u32,
    pub loglog_power: u32,
}

impl SlowlyVarying {
    pub const ONE: SlowlyVarying = SlowlyVarying { log_power: 0, loglog_power: 0 };
    pub const LOG: SlowlyVarying = SlowlyVarying { log_power: 1, loglog_power: 0 };

    pub fn eval(&self, x: &Float) -> Result<Float> {
        let p = x.prec();
        let mut v = Float::with_val(p, 1);
        if self.log_power == 0 && self.loglog_power == 0 {
            return Ok(v);
        }
        let l = Float::with_val(p, x.ln_ref());
        if !(l > 0) {
            return Err(Error::Domain("slowly varying factor needs x > 1".into()));
        }
        v *= Float::with_val(p, (&l).pow(self.log_power));
        if self.loglog_power > 0 {
            let ll = l.ln();
            if !(ll > 0) {
                return Err(Error::Domain("log log factor needs x > e".into()));
            }
            v *= ll.pow(self.loglog_power);
        }
        Ok(v)
    }
}

impl std::str::FromStr for SlowlyVarying {
    type Err = Error;
    /// `k,m` or one of `1`, `log`, `loglog`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" => return Ok(SlowlyVarying::ONE),
            "log" => return Ok(SlowlyVarying::LOG),
            "loglog" => return Ok(SlowlyVarying { log_power: 0, loglog_power: 1 }),
            _ => {}
        }
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::Unsupported(format!("slowly varying descriptor '{s}' (expected k,m)")))?;
        let k = a.trim().parse().map_err(|_| Error::Unsupported(format!("bad log power in '{s}'")))?;
        let m = b.trim().parse().map_err(|_| Error::Unsupported(format!("bad log log power in '{s}'")))?;
        Ok(SlowlyVarying { log_power: k, loglog_power: m })
    }
}

/// Γ(α+1)/(1−z)^{α+1} · ℓ(1/(1−z)) for real z ∈ (0, 1).
pub fn abelian_transfer(alpha: &Float, ell: SlowlyVarying, z: &Float, pc: &PrecisionContext) -> Result<Float> {
    if !(*alpha > 0) {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    if !(*z > 0 && *z < 1) {
        return Err(Error::Domain("z must lie in (0, 1)".into()));
    }
    let p = pc.work();
    let x = Float::with_val(p, 1 - z).recip();
    let a1 = Float::with_val(p, alpha + 1u32);
    let g = Float::with_val(p, a1.gamma_ref());
    let v = g * Float::with_val(p, (&x).pow(&a1)) * ell.eval(&x)?;
    Ok(pc.round(&v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ArithFunctionId as F;
    use crate::hpnum::{abs_f64, rel_diff_real};
    use crate::series::{eval_exp_series, EvalPoint};

    fn pc() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn first_coefficients() {
        let c = tau_expansion_coefficients(4).unwrap();
        assert_eq!(c[0], Rational::from((1, 4)));
        assert_eq!(c[1], Rational::from((1, 144)));
        assert_eq!(c[2], Rational::new());
        assert_eq!(c[3], Rational::from((1, 86400)));
    }

    #[test]
    fn expansion_constant_term_matches_series() {
        let p = pc();
        let point = EvalPoint::real(128, 0.05).unwrap();
        let f = eval_exp_series(F::TauDivisors, &point, &p, 1e-25).unwrap();
        let e = tau_expansion(point.t(), 4, &p).unwrap();
        let d = abs_f64(&Complex::with_val(128, &f.value - &e));
        // next term is c₅ t⁵ with c₅ = B₆²/(6!·6)
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn main_terms() {
        let p = pc();
        let z = Complex::with_val(128, 0.9);
        let m = corollary_main_term(F::VonMangoldt, &z, MainTermSource::Literal, &p).unwrap();
        assert!((m.real().to_f64() - 10.0).abs() < 1e-13);
        let m = corollary_main_term(F::Mobius, &z, MainTermSource::Literal, &p).unwrap();
        assert!(m.real().is_zero());
        assert!(corollary_main_term(F::TauDivisors, &z, MainTermSource::Literal, &p).is_err());
        let c = two_omega_leading_coefficient(&p).to_f64();
        assert!((c - 6.0 / std::f64::consts::PI.powi(2)).abs() < 1e-16);
    }

    #[test]
    fn abelian_transfer_for_n() {
        let p = pc();
        // Σ n zⁿ = z/(1−z)²
        let z = Float::with_val(160, 1) - Float::with_val(160, 1e-4);
        let a = abelian_transfer(&Float::with_val(128, 1), SlowlyVarying::ONE, &z, &p).unwrap();
        let exact = Float::with_val(160, &z) / Float::with_val(160, 1e-8);
        assert!((a / exact - 1u32).abs() < 1.001e-4);
        assert!("1,2".parse::<SlowlyVarying>().is_ok());
        assert!("x^2".parse::<SlowlyVarying>().is_err());
    }

    #[test]
    fn abelian_transfer_for_n_log_n() {
        let p = pc();
        let mut prev = f64::INFINITY;
        for &d in &[1e-2, 1e-3, 2e-4] {
            let z = Float::with_val(160, 1) - Float::with_val(160, d);
            let mut direct = Float::with_val(160, 0);
            let mut zn = Float::with_val(160, 1);
            for n in 1..(60.0 / d) as u64 {
                zn *= &z;
                direct += Float::with_val(160, n) * Float::with_val(160, n).ln() * &zn;
            }
            let a = abelian_transfer(&Float::with_val(128, 1), SlowlyVarying::LOG, &z, &p).unwrap();
            let gap = rel_diff_real(&direct, &a);
            assert!(gap < prev);
            prev = gap;
        }
    }
}
