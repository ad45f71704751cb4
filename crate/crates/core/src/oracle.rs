//! Reference evaluators used to validate constructed networks.
//!
//! These deliberately avoid the network code paths: powers go through
//! compensated repeated multiplication, polynomial values through plain
//! Horner steps, so a bug in the builders cannot hide in its own oracle.

/// `x^n` by repeated multiplication carried in double-double precision.
/// The split products are FMA-free so results match across platforms.
pub fn pow_compensated(x: f64, n: u32) -> f64 {
    let mut hi = 1.0f64;
    let mut lo = 0.0f64;
    for _ in 0..n {
        let (p, e) = two_prod(hi, x);
        lo = lo * x + e;
        let s = p + lo;
        lo -= s - p;
        hi = s;
    }
    hi
}

/// Dekker's exact product: returns `(p, e)` with `a * b = p + e`.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    const SPLIT: f64 = 134217729.0; // 2^27 + 1
    let p = a * b;
    let ca = SPLIT * a;
    let ahi = ca - (ca - a);
    let alo = a - ahi;
    let cb = SPLIT * b;
    let bhi = cb - (cb - b);
    let blo = b - bhi;
    let e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, e)
}

/// Plain Horner evaluation of ascending coefficients `a_0..a_n`.
pub fn horner_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
