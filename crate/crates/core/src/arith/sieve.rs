use super::{ArithFunctionId, ArithValue, PrimePower};
use crate::error::{Error, Result};
use rug::Float;
use std::io::Write;

/// Limits for table construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Maximum number of table entries.
    pub memory_cap: u64,
    /// Numbers processed per sieve segment.
    pub segment_len: usize,
}

impl SieveConfig {
    pub const DEFAULT_MEMORY_CAP: u64 = 1 << 28;
    pub const DEFAULT_SEGMENT_LEN: usize = 1 << 22;
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { memory_cap: Self::DEFAULT_MEMORY_CAP, segment_len: Self::DEFAULT_SEGMENT_LEN }
    }
}

/// Compact per-n storage; index 0 holds n = 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Small(Vec<i8>),
    Int(Vec<i32>),
    /// Λ family: `p[i] = 0` when n is not a prime power.
    PrimePowers { p: Vec<u32>, k: Vec<u8> },
    Primes(Vec<u64>),
}

impl Values {
    fn len(&self) -> usize {
        match self {
            Values::Small(v) => v.len(),
            Values::Int(v) => v.len(),
            Values::PrimePowers { p, .. } => p.len(),
            Values::Primes(v) => v.len(),
        }
    }
}

/// Exact values of one arithmetic function on 1..=limit.
#[derive(Debug, Clone, PartialEq)]
pub struct SieveTable {
    fn_id: ArithFunctionId,
    limit: u64,
    values: Values,
    prefix_sums: Option<Vec<i64>>,
}

impl SieveTable {
    pub fn fn_id(&self) -> ArithFunctionId {
        self.fn_id
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn get(&self, n: u64) -> Result<ArithValue> {
        self.check_index(n)?;
        let i = (n - 1) as usize;
        Ok(match &self.values {
            Values::Small(v) => ArithValue::Int(v[i] as i64),
            Values::Int(v) => ArithValue::Int(v[i] as i64),
            Values::Primes(v) => ArithValue::Int(v[i] as i64),
            Values::PrimePowers { p, k } => {
                let prime_power = (p[i] != 0).then(|| PrimePower { p: p[i] as u64, k: k[i] as u32 });
                let offset = if self.fn_id == ArithFunctionId::VonMangoldtMinusOne { 1 } else { 0 };
                ArithValue::LogPrime { prime_power, offset }
            }
        })
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n == 0 || n > self.limit {
            return Err(Error::Domain(format!("index {n} outside table range 1..={}", self.limit)));
        }
        Ok(())
    }

    /// Attaches exact prefix sums S(0) = 0, S(n) = S(n−1) + aₙ.
    pub fn with_prefix_sums(mut self) -> Result<Self> {
        if !self.fn_id.is_integer_valued() {
            return Err(Error::Unsupported(format!("prefix sums for {}", self.fn_id)));
        }
        let mut sums = Vec::with_capacity(self.limit as usize + 1);
        sums.push(0i64);
        let mut acc = 0i64;
        for n in 1..=self.limit {
            let v = self.get(n)?.as_int().expect("integer valued");
            acc = acc.checked_add(v).ok_or_else(|| Error::Overflow(format!("prefix sum at n = {n}")))?;
            sums.push(acc);
        }
        self.prefix_sums = Some(sums);
        Ok(self)
    }

    pub fn prefix_sums(&self) -> Option<&[i64]> {
        self.prefix_sums.as_deref()
    }

    pub fn prefix_sum(&self, x: u64) -> Result<i64> {
        let sums = self
            .prefix_sums
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("table was built without prefix sums".into()))?;
        if x > self.limit {
            return Err(Error::Domain(format!("x = {x} exceeds table limit {}", self.limit)));
        }
        Ok(sums[x as usize])
    }

    /// CSV export with header `n,value` (plus `p,k` for the Λ family and
    /// `prefix` when prefix sums exist). Λ values are written numerically
    /// at `prec` bits.
    pub fn write_csv<W: Write>(&self, mut w: W, prec: u32) -> std::io::Result<()> {
        let log_family = matches!(self.values, Values::PrimePowers { .. });
        let mut header = String::from("n,value");
        if log_family {
            header.push_str(",p,k");
        }
        if self.prefix_sums.is_some() {
            header.push_str(",prefix");
        }
        writeln!(w, "{header}")?;
        let digits = crate::numfmt::digits_for_bits(prec);
        for n in 1..=self.limit {
            let v = self.get(n).expect("in range");
            match v {
                ArithValue::Int(x) => write!(w, "{n},{x}")?,
                ArithValue::LogPrime { prime_power, .. } => {
                    let f: Float = v.to_float(prec);
                    let (p, k) = prime_power.map_or((0, 0), |pp| (pp.p, pp.k));
                    write!(w, "{n},{},{p},{k}", crate::numfmt::sci(&f, digits))?
                }
            }
            if let Some(s) = &self.prefix_sums {
                write!(w, ",{}", s[n as usize])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Sieves `fn_id` on 1..=limit with the default configuration.
pub fn sieve(fn_id: ArithFunctionId, limit: u64) -> Result<SieveTable> {
    sieve_with(fn_id, limit, &SieveConfig::default())
}

pub fn sieve_with(fn_id: ArithFunctionId, limit: u64, config: &SieveConfig) -> Result<SieveTable> {
    if limit == 0 {
        return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
    }
    if limit > config.memory_cap {
        return Err(Error::MemoryCap { required: limit, cap: config.memory_cap });
    }
    if config.segment_len == 0 {
        return Err(Error::InvalidArgument("segment length must be positive".into()));
    }
    let values = match fn_id {
        ArithFunctionId::PrimeSequence => Values::Primes(first_primes(limit, config.segment_len)?),
        ArithFunctionId::VonMangoldt | ArithFunctionId::VonMangoldtMinusOne => {
            if limit > u32::MAX as u64 {
                return Err(Error::Overflow(format!("prime-power table beyond {}", u32::MAX)));
            }
            let mut p = Vec::with_capacity(limit as usize);
            let mut k = Vec::with_capacity(limit as usize);
            factor_segments(limit, config.segment_len, |_, seg| {
                for i in 0..seg.len() {
                    if seg.omega[i] == 1 {
                        p.push(seg.last_p[i] as u32);
                        k.push(seg.last_k[i]);
                    } else {
                        p.push(0);
                        k.push(0);
                    }
                }
            });
            Values::PrimePowers { p, k }
        }
        ArithFunctionId::Mobius
        | ArithFunctionId::MobiusAlternating
        | ArithFunctionId::Liouville
        | ArithFunctionId::LiouvilleAlternating => {
            let mut v = Vec::with_capacity(limit as usize);
            factor_segments(limit, config.segment_len, |lo, seg| {
                for i in 0..seg.len() {
                    let base: i8 = match fn_id {
                        ArithFunctionId::Mobius | ArithFunctionId::MobiusAlternating => {
                            if !seg.squarefree[i] {
                                0
                            } else if seg.omega[i] % 2 == 0 {
                                1
                            } else {
                                -1
                            }
                        }
                        _ => {
                            if seg.big_omega[i] % 2 == 0 {
                                1
                            } else {
                                -1
                            }
                        }
                    };
                    let alternating =
                        matches!(fn_id, ArithFunctionId::MobiusAlternating | ArithFunctionId::LiouvilleAlternating);
                    let n = lo + i as u64;
                    v.push(if alternating && n % 2 == 0 { -base } else { base });
                }
            });
            Values::Small(v)
        }
        ArithFunctionId::TauDivisors | ArithFunctionId::TwoOmega | ArithFunctionId::TwoOmegaMinusTau => {
            let mut v = Vec::with_capacity(limit as usize);
            factor_segments(limit, config.segment_len, |_, seg| {
                for i in 0..seg.len() {
                    let tau = seg.tau[i] as i32;
                    let two = 1i32 << seg.omega[i];
                    v.push(match fn_id {
                        ArithFunctionId::TauDivisors => tau,
                        ArithFunctionId::TwoOmega => two,
                        _ => two - tau,
                    });
                }
            });
            Values::Int(v)
        }
    };
    debug_assert_eq!(values.len() as u64, limit);
    Ok(SieveTable { fn_id, limit, values, prefix_sums: None })
}

/// M(x) = Σ_{n≤x} μ(n) from a Möbius table with prefix sums.
pub fn mertens(table: &SieveTable, x: u64) -> Result<i64> {
    if table.fn_id() != ArithFunctionId::Mobius {
        return Err(Error::InvalidArgument(format!("mertens needs a mobius table, got {}", table.fn_id())));
    }
    if x == 0 {
        return Err(Error::Domain("mertens is defined for x >= 1".into()));
    }
    table.prefix_sum(x)
}

/// Per-segment factorization summary.
struct Segment {
    rem: Vec<u64>,
    omega: Vec<u8>,
    big_omega: Vec<u8>,
    tau: Vec<u32>,
    squarefree: Vec<bool>,
    last_p: Vec<u64>,
    last_k: Vec<u8>,
}

impl Segment {
    fn len(&self) -> usize {
        self.rem.len()
    }

    fn reset(&mut self, lo: u64, len: usize) {
        self.rem.clear();
        self.rem.extend(lo..lo + len as u64);
        for v in [&mut self.omega, &mut self.big_omega, &mut self.last_k] {
            v.clear();
            v.resize(len, 0);
        }
        self.tau.clear();
        self.tau.resize(len, 1);
        self.squarefree.clear();
        self.squarefree.resize(len, true);
        self.last_p.clear();
        self.last_p.resize(len, 0);
    }
}

fn small_primes(upto: u64) -> Vec<u64> {
    let n = upto as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

// Segments are visited in increasing order; `emit(lo, seg)` sees n = lo..lo+len.
fn factor_segments(limit: u64, segment_len: usize, mut emit: impl FnMut(u64, &Segment)) {
    let primes = small_primes(isqrt(limit));
    let mut seg = Segment {
        rem: Vec::new(),
        omega: Vec::new(),
        big_omega: Vec::new(),
        tau: Vec::new(),
        squarefree: Vec::new(),
        last_p: Vec::new(),
        last_k: Vec::new(),
    };
    let mut lo = 1u64;
    while lo <= limit {
        let hi = (lo + segment_len as u64 - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg.reset(lo, len);
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                let i = (m - lo) as usize;
                let mut r = seg.rem[i] / p;
                let mut k = 1u8;
                while r % p == 0 {
                    r /= p;
                    k += 1;
                }
                seg.rem[i] = r;
                seg.omega[i] += 1;
                seg.big_omega[i] += k;
                seg.tau[i] *= k as u32 + 1;
                if k > 1 {
                    seg.squarefree[i] = false;
                }
                seg.last_p[i] = p;
                seg.last_k[i] = k;
                m += p;
            }
        }
        for i in 0..len {
            let r = seg.rem[i];
            if r > 1 {
                seg.omega[i] += 1;
                seg.big_omega[i] += 1;
                seg.tau[i] *= 2;
                seg.last_p[i] = r;
                seg.last_k[i] = 1;
            }
        }
        emit(lo, &seg);
        lo = hi + 1;
    }
}

/// Upper bound for p_n: n(log n + log log n) for n ≥ 6 (Rosser).
pub(crate) fn nth_prime_upper_bound(n: u64) -> u64 {
    if n < 6 {
        return 13;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
}

fn first_primes(count: u64, segment_len: usize) -> Result<Vec<u64>> {
    let bound = nth_prime_upper_bound(count);
    let base = small_primes(isqrt(bound) + 1);
    let mut out = Vec::with_capacity(count as usize);
    let mut lo = 2u64;
    let mut mark = Vec::new();
    while (out.len() as u64) < count {
        if lo > bound {
            return Err(Error::Overflow(format!("prime bound {bound} too small for count {count}")));
        }
        let hi = (lo + segment_len as u64 - 1).min(bound);
        let len = (hi - lo + 1) as usize;
        mark.clear();
        mark.resize(len, true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = (lo.div_ceil(p) * p).max(p * p);
            while m <= hi {
                mark[(m - lo) as usize] = false;
                m += p;
            }
        }
        for (i, &is_p) in mark.iter().enumerate() {
            if is_p {
                out.push(lo + i as u64);
                if out.len() as u64 == count {
                    break;
                }
            }
        }
        lo = hi + 1;
    }
    Ok(out)
}
