//! One-hidden-layer realizations of `x^n * y` and of `sum_k x^k y_k`.
//!
//! The kernel coefficients come from the symmetric-product identity that
//! rewrites a product of `s` factors as a signed sum of s-th powers; they are
//! explicit, so no linear solve is involved and coefficient magnitudes stay
//! bounded by 1/(2^(s-1) s!) times binomials.

use crate::error::{Error, Result};
use crate::netcore::{AffineLayer, Matrix, PowerNet};
use crate::stage::Stage;
use crate::vandermonde::binomial;

/// Coefficients of the one-hidden-layer net computing `x^n * y` from
/// `(x, y)`. All four vectors have length `u_n = 2 (n+1) (s-n)`.
#[derive(Clone, Debug)]
pub struct XnYKernel {
    pub n: u32,
    pub s: u32,
    pub gamma: Vec<f64>,
    pub alpha_x: Vec<f64>,
    pub alpha_y: Vec<f64>,
    pub beta: Vec<f64>,
}

impl XnYKernel {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    /// Direct evaluation of the linear combination; used by tests and by the
    /// stage assembler.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.len() {
            let t = self.alpha_x[i] * x + self.alpha_y[i] * y + self.beta[i];
            acc += self.gamma[i] * crate::netcore::repu(t, self.s);
        }
        acc
    }
}

/// Builds the `x^n * y` kernel for `0 <= n <= s-1`.
///
/// Terms are ordered column-major over the (shift, slope) grid, each signed
/// power expanded into its positive/negative activation pair, so serialized
/// nets are comparable across implementations.
pub fn xny_kernel(n: u32, s: u32) -> Result<XnYKernel> {
    if s < 2 {
        return Err(Error::BadPower(s));
    }
    if n >= s {
        return Err(Error::Invalid(format!(
            "kernel exponent must satisfy 0 <= n <= s-1, got n={n}, s={s}"
        )));
    }
    let (n, s) = (n as usize, s as usize);
    let norm = (2f64).powi(s as i32 - 1) * factorial(s);
    let sign_s = if s % 2 == 0 { 1.0 } else { -1.0 };
    let un = 2 * (n + 1) * (s - n);
    let mut k = XnYKernel {
        n: n as u32,
        s: s as u32,
        gamma: Vec::with_capacity(un),
        alpha_x: Vec::with_capacity(un),
        alpha_y: Vec::with_capacity(un),
        beta: Vec::with_capacity(un),
    };
    for r in 0..=n {
        for j in 0..=(s - n - 1) {
            let sign = if (j + r) % 2 == 0 { 1.0 } else { -1.0 };
            let g = sign * binomial(s - n - 1, j) * binomial(n, r) / norm;
            let ax = (n as f64) - 2.0 * (r as f64);
            let b = (s as f64) - ((n + 1) as f64) - 2.0 * (j as f64);
            // positive orientation
            k.gamma.push(g);
            k.alpha_x.push(ax);
            k.alpha_y.push(1.0);
            k.beta.push(b);
            // mirrored orientation
            k.gamma.push(g * sign_s);
            k.alpha_x.push(-ax);
            k.alpha_y.push(-1.0);
            k.beta.push(-b);
        }
    }
    debug_assert_eq!(k.len(), un);
    Ok(k)
}

/// Depth-2 net with input `(x, y)` computing `x^n * y` exactly on R^2.
pub fn xny_net(n: u32, s: u32) -> Result<PowerNet> {
    let k = xny_kernel(n, s)?;
    let u = k.len();
    let mut w = Matrix::zeros(u, 2);
    for i in 0..u {
        w.set(i, 0, k.alpha_x[i]);
        w.set(i, 1, k.alpha_y[i]);
    }
    let first = AffineLayer::new(w, k.beta.clone())?;
    let mut out = Matrix::zeros(1, u);
    for i in 0..u {
        out.set(0, i, k.gamma[i]);
    }
    let second = AffineLayer::new(out, vec![0.0])?;
    PowerNet::new(s, 2, vec![first, second])
}

/// Depth-2 net with input `(x, y_0, ..., y_(s-1))` computing
/// `y_0 + y_1 x + ... + y_(s-1) x^(s-1)` exactly. Uses at most
/// `(s^3 + 3 s^2 + 2 s) / 3` activation units.
pub fn power_sum_net(s: u32) -> Result<PowerNet> {
    let mut stage = Stage::new(1 + s as usize, s)?;
    let mut parts = Vec::with_capacity(s as usize);
    // y_0 passes through an identity block
    parts.push(stage.poly_row(1, &[0.0, 1.0])?);
    for k in 1..s {
        parts.push(stage.product(0, 1 + k as usize, k)?);
    }
    stage.push_output(&parts);
    stage.into_net()
}

/// Right-hand side of the symmetric-product identity: expands
/// `(2^(s-1) s!) * x_1 * ... * x_s` as a signed sum of s-th powers of sums
/// in which subsets of `x_2..x_s` flip sign. Serves as an oracle for the
/// kernel coefficients.
pub fn symmetric_product_rhs(s: u32, x: &[f64]) -> f64 {
    let s = s as usize;
    assert_eq!(x.len(), s, "need exactly s factors");
    let mut acc = 0.0;
    for mask in 0u32..(1 << (s - 1)) {
        let k = mask.count_ones();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut sum = x[0];
        for (i, xi) in x.iter().enumerate().skip(1) {
            if mask & (1 << (i - 1)) != 0 {
                sum -= xi;
            } else {
                sum += xi;
            }
        }
        acc += sign * sum.powi(s as i32);
    }
    acc
}

/// Termwise evaluation of the two-variable expansion of
/// `(2^(s-1) s!) x^(n1) y^(n2)` as a signed sum of s-th powers; requires
/// `n1 >= 1` and `n1 + n2 <= s`. This is a reference oracle only; network
/// construction always goes through the `n2 = 1` kernel.
pub fn split_product_expansion(s: u32, n1: u32, n2: u32, x: f64, y: f64) -> Result<f64> {
    let (s, n1, n2) = (s as usize, n1 as usize, n2 as usize);
    let t = n1 + n2;
    if n1 < 1 || t > s {
        return Err(Error::Invalid(format!(
            "expansion needs 1 <= n1 and n1 + n2 <= s, got n1={n1}, n2={n2}, s={s}"
        )));
    }
    let pw = |base: f64| base.powi(s as i32);
    let mut acc = pw((n1 as f64) * x + (n2 as f64) * y + ((s - t) as f64));
    for k in 1..=(s - t) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign
            * binomial(s - t, k)
            * pw((n1 as f64) * x + (n2 as f64) * y + ((s - t) as f64 - 2.0 * k as f64));
    }
    for k in 1..=(s - 1) {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let r_lo = 1.max(k.saturating_sub(s - t));
        let r_hi = (t - 1).min(k);
        for r in r_lo..=r_hi {
            let j_lo = r.saturating_sub(n2);
            let j_hi = r.min(n1 - 1);
            for j in j_lo..=j_hi {
                let count = binomial(s - t, k - r) * binomial(n1 - 1, j) * binomial(n2, r - j);
                if count == 0.0 {
                    continue;
                }
                let base = (n1 as f64 - 2.0 * j as f64) * x
                    + (n2 as f64 - 2.0 * (r - j) as f64) * y
                    + ((s - t) as f64 - 2.0 * (k - r) as f64);
                acc += sign * count * pw(base);
            }
        }
    }
    Ok(acc)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}
