use crate::error::{Error, Result};
use rug::{Float, Integer, Rational};
use std::sync::OnceLock;

/// Largest index served by [`bernoulli`].
pub const BERNOULLI_CAP: usize = 256;

static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();

fn table() -> &'static [Rational] {
    TABLE.get_or_init(|| build_table(BERNOULLI_CAP))
}

// Σ_{k=0}^{m} C(m+1, k) B_k = 0 for m ≥ 1, with B_0 = 1 (gives B_1 = −1/2).
fn build_table(cap: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(cap + 1);
    b.push(Rational::from(1));
    for m in 1..=cap {
        if m > 1 && m % 2 == 1 {
            b.push(Rational::new());
            continue;
        }
        let mut acc = Rational::new();
        let mut binom = Integer::from(1); // C(m+1, 0)
        for (k, bk) in b.iter().enumerate() {
            if !bk.is_zero() {
                acc += Rational::from(bk * &binom);
            }
            binom *= (m + 1 - k) as u32;
            binom /= (k + 1) as u32;
        }
        // binom is now C(m+1, m)
        acc /= binom;
        b.push(-acc);
    }
    b
}

/// Exact Bernoulli number `B_n`, with the convention `B_1 = −1/2`.
pub fn bernoulli(n: usize) -> Result<Rational> {
    if n > BERNOULLI_CAP {
        return Err(Error::Range {
            what: "bernoulli",
            detail: format!("index {n} exceeds cap {BERNOULLI_CAP}"),
        });
    }
    Ok(table()[n].clone())
}

pub(crate) fn bernoulli_ref(n: usize) -> Result<&'static Rational> {
    table().get(n).ok_or(Error::Range {
        what: "bernoulli",
        detail: format!("index {n} exceeds cap {BERNOULLI_CAP}"),
    })
}

pub fn bernoulli_float(n: usize, prec: u32) -> Result<Float> {
    Ok(Float::with_val(prec, bernoulli_ref(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0).unwrap(), 1);
        assert_eq!(bernoulli(1).unwrap(), Rational::from((-1, 2)));
        assert_eq!(bernoulli(2).unwrap(), Rational::from((1, 6)));
        assert_eq!(bernoulli(3).unwrap(), 0);
        assert_eq!(bernoulli(4).unwrap(), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12).unwrap(), Rational::from((-691, 2730)));
    }

    #[test]
    fn odd_indices_vanish() {
        for n in (3..=BERNOULLI_CAP).step_by(2) {
            assert!(bernoulli(n).unwrap().is_zero(), "B_{n}");
        }
    }

    #[test]
    fn recurrence_holds_at_cap() {
        // independent check: Σ_{k} C(m+1,k) B_k = 0 recomputed with rug binomials
        for m in [10usize, 57, 128, 255] {
            let mut s = Rational::new();
            for k in 0..=m {
                let c = Integer::from(Integer::binomial_u(m as u32 + 1, k as u32));
                s += bernoulli(k).unwrap() * c;
            }
            assert!(s.is_zero(), "m = {m}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(bernoulli(BERNOULLI_CAP + 1), Err(Error::Range { .. })));
    }

    #[test]
    fn even_signs_alternate() {
        for k in 1..=BERNOULLI_CAP / 2 {
            let b = bernoulli(2 * k).unwrap();
            let positive = b > 0;
            assert_eq!(positive, k % 2 == 1, "B_{}", 2 * k);
        }
    }
}
