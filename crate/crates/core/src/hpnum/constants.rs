use super::PrecisionContext;
use rug::float::Constant;
use rug::Float;

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// Euler's constant by the Brent–McMillan Bessel-function algorithm.
pub fn euler_gamma(pc: &PrecisionContext) -> Float {
    pc.round(&brent_mcmillan(pc.work()))
}

// γ = U/V − log n with U = Σ A_k, V = Σ B_k,
//   B_k = B_{k−1} n²/k²,  A_k = (A_{k−1} n²/k + B_k)/k,  A_0 = −log n, B_0 = 1.
// Truncation error is O(e^{−4n}); the series is summed while terms matter.
fn brent_mcmillan(prec: u32) -> Float {
    let p = prec + 16;
    let n = ((prec as f64 * std::f64::consts::LN_2 + 10.0) / 4.0).ceil() as u64 + 1;
    let n2 = Float::with_val(p, n * n);
    let mut a = -Float::with_val(p, n).ln();
    let mut b = Float::with_val(p, 1);
    let mut u = a.clone();
    let mut v = b.clone();
    let kmax = (3.6 * n as f64).ceil() as u64 + 16;
    for k in 1..=kmax {
        b *= &n2;
        b /= k * k;
        a *= &n2;
        a /= k;
        a += &b;
        a /= k;
        u += &a;
        v += &b;
    }
    u / v
}
