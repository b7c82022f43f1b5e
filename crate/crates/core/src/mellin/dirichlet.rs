use crate::arith::ArithFunctionId;
use crate::error::{Error, Result};
use crate::hpnum::{euler_gamma, zeta, zeta_and_prime, PrecisionContext};
use rug::{Complex, Float};

/// Closed form of D(s) = Σ aₙ n^{−s} in terms of ζ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirichletClosedForm {
    pub fn_id: ArithFunctionId,
    pub formula: &'static str,
    /// Growth exponent in the assumed bound |D(s)| ≤ C_D (1+|τ|)^ν.
    pub nu: f64,
    /// D is analytic (pole-free) on σ ≥ g(τ).
    pub analytic_in_region: bool,
}

pub const DEFAULT_NU: f64 = 2.0;

pub fn closed_form(fn_id: ArithFunctionId) -> Result<DirichletClosedForm> {
    use ArithFunctionId::*;
    let (formula, analytic) = match fn_id {
        Mobius => ("1/zeta(s)", true),
        MobiusAlternating => ("(2^s+1)/((2^s-1) zeta(s))", true),
        Liouville => ("zeta(2s)/zeta(s)", true),
        LiouvilleAlternating => ("(1+2^(1-s)) zeta(2s)/zeta(s)", true),
        VonMangoldt => ("-zeta'(s)/zeta(s)", false),
        VonMangoldtMinusOne => ("-zeta'(s)/zeta(s) - zeta(s)", true),
        TauDivisors => ("zeta(s)^2", false),
        TwoOmega => ("zeta(s)^2/zeta(2s)", false),
        // double pole at s = 1 with coefficient 1/zeta(2) - 1
        TwoOmegaMinusTau => ("zeta(s)^2/zeta(2s) - zeta(s)^2", false),
        PrimeSequence => {
            return Err(Error::Unsupported("the primes have no closed-form Dirichlet series".into()))
        }
    };
    Ok(DirichletClosedForm { fn_id, formula, nu: DEFAULT_NU, analytic_in_region: analytic })
}

fn has_pole_at_one(fn_id: ArithFunctionId) -> bool {
    use ArithFunctionId::*;
    matches!(fn_id, VonMangoldt | TauDivisors | TwoOmega | TwoOmegaMinusTau)
}

fn uses_zeta_2s(fn_id: ArithFunctionId) -> bool {
    use ArithFunctionId::*;
    matches!(fn_id, Liouville | LiouvilleAlternating | TwoOmega | TwoOmegaMinusTau)
}

fn is_exact(s: &Complex, v: f64) -> bool {
    s.imag().is_zero() && *s.real() == v
}

/// D(s) from its closed form.
pub fn dirichlet_d(fn_id: ArithFunctionId, s: &Complex, pc: &PrecisionContext) -> Result<Complex> {
    use ArithFunctionId::*;
    closed_form(fn_id)?;
    let p = pc.work();
    if is_exact(s, 1.0) {
        if has_pole_at_one(fn_id) {
            return Err(Error::Pole { what: "Dirichlet series", at: "s = 1".into() });
        }
        // removable points: 1/ζ vanishes, and the poles of −ζ′/ζ and ζ cancel
        return Ok(match fn_id {
            VonMangoldtMinusOne => {
                let g = euler_gamma(pc);
                Complex::with_val(pc.bits, (g * -2i32, 0))
            }
            _ => Complex::with_val(pc.bits, 0),
        });
    }
    if uses_zeta_2s(fn_id) && is_exact(s, 0.5) {
        return Err(Error::Pole { what: "zeta(2s)", at: "s = 1/2".into() });
    }
    let z2 = |s: &Complex| -> Result<Complex> { zeta(&Complex::with_val(p, s * 2u32), pc) };
    let value = match fn_id {
        Mobius => recip(&zeta(s, pc)?, pc)?,
        MobiusAlternating => {
            let two_s = two_pow(s, p);
            let num = Complex::with_val(p, &two_s + 1u32);
            let den = Complex::with_val(p, &two_s - 1u32);
            if den.real().is_zero() && den.imag().is_zero() {
                return Err(Error::Pole { what: "(2^s+1)/(2^s-1)", at: s.to_string() });
            }
            recip(&zeta(s, pc)?, pc)? * num / den
        }
        Liouville => z2(s)? * recip(&zeta(s, pc)?, pc)?,
        LiouvilleAlternating => {
            let mut f = two_pow(&Complex::with_val(p, 1 - s), p);
            f += 1u32;
            f * z2(s)? * recip(&zeta(s, pc)?, pc)?
        }
        VonMangoldt => {
            let (z, dz) = zeta_and_prime(s, pc)?;
            -(dz * recip(&z, pc)?)
        }
        VonMangoldtMinusOne => {
            let (z, dz) = zeta_and_prime(s, pc)?;
            let r = recip(&z, pc)?;
            -(dz * r) - z
        }
        TauDivisors => {
            let z = zeta(s, pc)?;
            Complex::with_val(p, z.square_ref())
        }
        TwoOmega => {
            let z = zeta(s, pc)?;
            Complex::with_val(p, z.square_ref()) * recip(&z2(s)?, pc)?
        }
        TwoOmegaMinusTau => {
            let z = zeta(s, pc)?;
            let sq = Complex::with_val(p, z.square_ref());
            let r = recip(&z2(s)?, pc)?;
            Complex::with_val(p, &sq * &r) - sq
        }
        PrimeSequence => unreachable!("rejected by closed_form"),
    };
    crate::hpnum::ensure_finite(&value, "Dirichlet series")?;
    Ok(value)
}

/// Σ |aₙ| n^{−κ} for real κ > 1, the trivial majorant of |D(κ + iτ)|.
pub fn dirichlet_abs_sum(fn_id: ArithFunctionId, kappa: f64, pc: &PrecisionContext) -> Result<f64> {
    use ArithFunctionId::*;
    if !(kappa > 1.0) {
        return Err(Error::Domain(format!("absolute convergence needs kappa > 1, got {kappa}")));
    }
    let p = pc.work();
    let s = Complex::with_val(p, (kappa, 0));
    let s2 = Complex::with_val(p, (2.0 * kappa, 0));
    let re = |z: Complex| z.real().to_f64();
    let z = re(zeta(&s, pc)?);
    let v = match fn_id {
        Mobius | MobiusAlternating => z / re(zeta(&s2, pc)?),
        Liouville | LiouvilleAlternating => z,
        VonMangoldt => -re(zeta_and_prime(&s, pc)?.1) / z,
        // |Λ(n) − 1| ≤ Λ(n) + 1
        VonMangoldtMinusOne => -re(zeta_and_prime(&s, pc)?.1) / z + z,
        TauDivisors => z * z,
        TwoOmega => z * z / re(zeta(&s2, pc)?),
        // 2^ω ≤ τ, so |2^ω − τ| = τ − 2^ω
        TwoOmegaMinusTau => z * z - z * z / re(zeta(&s2, pc)?),
        PrimeSequence => return Err(Error::Unsupported("the primes have no Dirichlet majorant".into())),
    };
    // one ulp-scale margin for the f64 conversion
    Ok(v * (1.0 + 1e-12))
}

fn two_pow(s: &Complex, p: u32) -> Complex {
    let ln2 = Float::with_val(p, rug::float::Constant::Log2);
    Complex::with_val(p, s * ln2).exp()
}

fn recip(z: &Complex, pc: &PrecisionContext) -> Result<Complex> {
    let m = Float::with_val(pc.work(), z.abs_ref());
    let floor = Float::with_val(53, Float::i_exp(1, -((pc.work() / 2) as i32)));
    if m < floor {
        return Err(Error::ZeroDivision(format!("zeta vanishes (|zeta| = {:e}) on the contour", m.to_f64())));
    }
    Ok(Complex::with_val(pc.work(), z.recip_ref()))
}
