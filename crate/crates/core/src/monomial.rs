//! Exact network builders for monomials `x^n`.
//!
//! Small exponents use one hidden layer; general exponents run the base-s
//! digit iteration, squaring-and-multiplying through `(.)^s` and `x^j * y`
//! blocks so the depth stays at `ceil(log_s n) + 1`.

use crate::error::{Error, Result};
use crate::netcore::{AffineLayer, Matrix, PowerNet};
use crate::stage::Stage;

/// Digits of `n` in radix `s`, least significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSDigits {
    pub digits: Vec<u32>,
    pub radix: u32,
}

impl BaseSDigits {
    pub fn value(&self) -> u64 {
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, d| acc * self.radix as u64 + *d as u64)
    }
}

pub fn base_s_digits(n: u64, s: u32) -> Result<BaseSDigits> {
    if n < 1 {
        return Err(Error::Invalid("digit expansion needs n >= 1".into()));
    }
    if s < 2 {
        return Err(Error::Invalid("radix must be at least 2".into()));
    }
    let mut digits = Vec::new();
    let mut rest = n;
    while rest > 0 {
        digits.push((rest % s as u64) as u32);
        rest /= s as u64;
    }
    Ok(BaseSDigits { digits, radix: s })
}

/// Depth-2 net with one hidden layer of two nodes realizing `x^s` exactly.
pub fn power_s_net(s: u32) -> Result<PowerNet> {
    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
    let first = AffineLayer::new(Matrix::from_rows(vec![vec![1.0], vec![-1.0]])?, vec![0.0; 2])?;
    let second = AffineLayer::new(Matrix::from_rows(vec![vec![1.0, sign]])?, vec![0.0])?;
    PowerNet::new(s, 1, vec![first, second])
}

/// Depth-2 net with `2s` hidden nodes realizing `x^n` for `1 <= n < s`.
pub fn power_low_net(n: u32, s: u32) -> Result<PowerNet> {
    if n < 1 || n >= s {
        return Err(Error::Invalid(format!(
            "one-layer monomial needs 1 <= n < s, got n={n}, s={s}"
        )));
    }
    let mut coeffs = vec![0.0; n as usize + 1];
    coeffs[n as usize] = 1.0;
    let mut stage = Stage::new(1, s)?;
    let c = stage.poly_row(0, &coeffs)?;
    stage.push_output(&[c]);
    stage.into_net()
}

/// Kernels cancel s-th powers of their inputs down to the represented
/// monomial; the lost digits scale like |x|^gap, where gap is the spread
/// between the kernel's implicit top exponent and the exponent it carries.
/// Beyond this spread the base-s digit iteration is not evaluable in doubles
/// and the builder switches to a balanced exponent split.
const STABLE_GAP: u64 = 20;

/// Worst exponent spread over the stages of the digit iteration.
fn digit_gap(digits: &[u32], s: u32) -> u64 {
    let s = s as u64;
    let mut carried = digits[0] as u64; // n mod s^k after stage k
    let mut cap = s; // s^k
    let mut worst = 0u64;
    for &d in &digits[1..] {
        cap *= s;
        let implicit = if d > 0 { cap } else { carried * s };
        let next = carried + d as u64 * (cap / s);
        worst = worst.max(implicit.saturating_sub(next));
        carried = next;
    }
    worst
}

/// Builds a net realizing `x^n` exactly on R, for any `n >= 0`.
pub fn monomial_net(n: u64, s: u32) -> Result<PowerNet> {
    if s < 2 {
        return Err(Error::BadPower(s));
    }
    if n <= 1 {
        // single affine layer: constant 1 or the identity map
        let w = Matrix::from_rows(vec![vec![if n == 1 { 1.0 } else { 0.0 }]])?;
        let b = vec![if n == 0 { 1.0 } else { 0.0 }];
        return PowerNet::new(s, 1, vec![AffineLayer::new(w, b)?]);
    }
    if n == s as u64 {
        return power_s_net(s);
    }
    if n < s as u64 {
        return power_low_net(n as u32, s);
    }
    let digits = base_s_digits(n, s)?.digits;
    let m = digits.len() - 1;
    if digits[..m].iter().all(|d| *d == 0) && digits[m] == 1 {
        // n = s^m; pure powers chain directly
        return power_chain_net(m, s);
    }
    if digit_gap(&digits, s) > STABLE_GAP {
        return balanced_monomial_net(n, s);
    }

    // first stage: (x) -> (x^s, x^(n_0))
    let mut first = Stage::new(1, s)?;
    let p = first.power(0);
    first.push_output(&[p]);
    let mut low = vec![0.0; digits[0] as usize + 1];
    low[digits[0] as usize] = 1.0;
    let c = first.poly_row(0, &low)?;
    first.push_output(&[c]);
    let mut net = first.into_net()?;

    // middle stages: (a, b) -> (a^s, a^(digit) * b)
    for &digit in digits.iter().take(m).skip(1) {
        let mut stage = Stage::new(2, s)?;
        let p = stage.power(0);
        stage.push_output(&[p]);
        let prod = stage.product(0, 1, digit)?;
        stage.push_output(&[prod]);
        net = crate::netcore::concat(&stage.into_net()?, &net)?;
    }

    // final stage: (a, b) -> a^(n_m) * b
    let mut last = Stage::new(2, s)?;
    let prod = last.product(0, 1, digits[m])?;
    last.push_output(&[prod]);
    crate::netcore::concat(&last.into_net()?, &net)
}

/// How one exponent at a level is produced from the level below.
enum Split {
    /// e = s * h: two-node power block on the h-wire
    Power(u64),
    /// e = c * h: degree-c row on the h-wire
    WirePower(u64, u32),
    /// e = c * h + r: kernel on (h-wire, r-wire)
    Product(u64, u32, u64),
    /// e <= s: produced from the unit wire (or directly from x at the bottom)
    Small,
}

fn split_exponent(e: u64, s: u32) -> Split {
    let sl = s as u64;
    if e <= sl {
        return Split::Small;
    }
    if e % sl == 0 {
        return Split::Power(e / sl);
    }
    // h = ceil(e/s) keeps the kernel's implicit s-th power within s of e
    let h = e.div_ceil(sl);
    let c = (e / h) as u32;
    let r = e % h;
    if r == 0 {
        Split::WirePower(h, c)
    } else {
        Split::Product(h, c, r)
    }
}

/// Balanced exponent splitting: every stage multiplies near-equal powers, so
/// intermediate magnitudes never overshoot |x|^n and the evaluation stays
/// accurate in doubles. Depth matches the digit iteration.
fn balanced_monomial_net(n: u64, s: u32) -> Result<PowerNet> {
    use std::collections::{BTreeMap, BTreeSet};
    let sl = s as u64;
    let mut levels: Vec<BTreeSet<u64>> = vec![[n].into()];
    loop {
        let cur = levels.last().unwrap();
        if cur.iter().all(|e| *e <= sl) {
            break;
        }
        let mut next = BTreeSet::new();
        for &e in cur {
            match split_exponent(e, s) {
                Split::Small => {
                    next.insert(1);
                }
                Split::Power(h) | Split::WirePower(h, _) => {
                    next.insert(h);
                }
                Split::Product(h, _, r) => {
                    next.insert(h);
                    next.insert(r);
                }
            }
        }
        levels.push(next);
    }

    // bottom stage: all exponents <= s, built from x in one hop
    let bottom = levels.last().unwrap();
    let mut stage = Stage::new(1, s)?;
    let mut wires: BTreeMap<u64, usize> = BTreeMap::new();
    let low: Vec<Vec<f64>> = bottom
        .iter()
        .filter(|e| **e < sl)
        .map(|e| {
            let mut c = vec![0.0; *e as usize + 1];
            c[*e as usize] = 1.0;
            c
        })
        .collect();
    let sets: Vec<&[f64]> = low.iter().map(|c| c.as_slice()).collect();
    let rows = stage.poly_rows(0, &sets)?;
    let mut it = rows.into_iter();
    for &e in bottom.iter() {
        if e < sl {
            let row = it.next().unwrap();
            wires.insert(e, stage.push_output(&[row]));
        } else {
            let p = stage.power(0);
            wires.insert(e, stage.push_output(&[p]));
        }
    }
    let mut net = stage.into_net()?;

    // upward stages
    for j in (0..levels.len() - 1).rev() {
        let mut stage = Stage::new(net.output_dim(), s)?;
        let mut new_wires: BTreeMap<u64, usize> = BTreeMap::new();
        for &e in levels[j].iter() {
            let contrib = match split_exponent(e, s) {
                Split::Small => {
                    let unit = wires[&1];
                    let mut c = vec![0.0; e as usize + 1];
                    c[e as usize] = 1.0;
                    stage.poly_row(unit, &c)?
                }
                Split::Power(h) => stage.power(wires[&h]),
                Split::WirePower(h, c) => {
                    let mut coeffs = vec![0.0; c as usize + 1];
                    coeffs[c as usize] = 1.0;
                    stage.poly_row(wires[&h], &coeffs)?
                }
                Split::Product(h, c, r) => stage.product(wires[&h], wires[&r], c)?,
            };
            new_wires.insert(e, stage.push_output(&[contrib]));
        }
        net = crate::netcore::concat(&stage.into_net()?, &net)?;
        wires = new_wires;
    }
    debug_assert_eq!(net.output_dim(), 1);
    Ok(net)
}

/// Chain of `m` squaring-to-the-s stages realizing `x^(s^m)`.
fn power_chain_net(m: usize, s: u32) -> Result<PowerNet> {
    let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
    let mut layers = Vec::with_capacity(m + 1);
    layers.push(AffineLayer::new(
        Matrix::from_rows(vec![vec![1.0], vec![-1.0]])?,
        vec![0.0; 2],
    )?);
    for _ in 1..m {
        layers.push(AffineLayer::new(
            Matrix::from_rows(vec![vec![1.0, sign], vec![-1.0, -sign]])?,
            vec![0.0; 2],
        )?);
    }
    layers.push(AffineLayer::new(
        Matrix::from_rows(vec![vec![1.0, sign]])?,
        vec![0.0],
    )?);
    PowerNet::new(s, 1, layers)
}
