use crate::error::{Error, Result};

/// Prime factorization `n = Π pᵢ^{kᵢ}` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactorList {
    /// Factorizes by trial division up to √n.
    pub fn trial_division(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factor 0".into()));
        }
        let mut factors = Vec::new();
        let mut m = n;
        let mut p = 2u64;
        while p.saturating_mul(p) <= m {
            if m % p == 0 {
                let mut k = 0;
                while m % p == 0 {
                    m /= p;
                    k += 1;
                }
                factors.push((p, k));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(FactorList { n, factors })
    }

    /// ω(n), the number of distinct primes.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Ω(n), primes counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, k)| k).sum()
    }

    pub fn num_divisors(&self) -> u64 {
        self.factors.iter().map(|&(_, k)| k as u64 + 1).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, k)| k == 1)
    }

    pub fn product(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &(p, k)| acc.checked_mul(p.checked_pow(k)?))
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, k) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..k {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The n-th prime (p₁ = 2) by counting with trial division.
pub fn nth_prime_trial(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("prime index starts at 1".into()));
    }
    let mut count = 0;
    let mut candidate = 1u64;
    while count < n {
        candidate = candidate
            .checked_add(1)
            .ok_or_else(|| Error::Overflow(format!("prime index {n}")))?;
        if is_prime(candidate) {
            count += 1;
        }
    }
    Ok(candidate)
}
