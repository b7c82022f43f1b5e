//! Deterministic decimal rendering of multiprecision values.

use rug::{Complex, Float};

/// Significant decimal digits that round-trip `bits` of mantissa.
pub fn digits_for_bits(bits: u32) -> usize {
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Scientific notation with `digits` significant digits, e.g. `-1.25e-3`.
pub fn sci(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0e0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = x.to_string_radix(10, Some(digits.max(1)));
    normalize(&s)
}

pub fn sci_c(z: &Complex, digits: usize) -> (String, String) {
    (sci(z.real(), digits), sci(z.imag(), digits))
}

/// f64 in Rust's shortest round-trip scientific form.
pub fn sci_f64(x: f64) -> String {
    format!("{x:e}")
}

// rug prints e.g. "1.2500e-3"; keep the mantissa digits, normalize the exponent.
fn normalize(s: &str) -> String {
    let (mant, exp) = match s.find(['e', '@']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let mant = mant.trim_start_matches('-');
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let all: String = format!("{int_part}{frac_part}");
    let lead = all.find(|c: char| c != '0').unwrap_or(0);
    let digits = &all[lead..];
    let exp10 = exp + int_part.len() as i64 - 1 - lead as i64;
    let (first, rest) = digits.split_at(1.min(digits.len()));
    let sign = if neg { "-" } else { "" };
    if rest.is_empty() {
        format!("{sign}{first}e{exp10}")
    } else {
        format!("{sign}{first}.{rest}e{exp10}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_scientific() {
        assert_eq!(sci(&Float::with_val(64, 0.00125), 3), "1.25e-3");
        assert_eq!(sci(&Float::with_val(64, -12345), 5), "-1.2345e4");
        assert_eq!(sci(&Float::with_val(64, 0), 5), "0e0");
        assert_eq!(sci(&Float::with_val(64, 1), 4), "1.000e0");
        assert_eq!(digits_for_bits(128), 40);
    }
}
