//! Univariate polynomial-to-network compilers.
//!
//! Four strategies build a net realizing `p(x) = a_0 + a_1 x + ... + a_n x^n`
//! exactly:
//!
//! - shallow: one hidden layer of `2s` nodes, degree up to `s`;
//! - horner: an n-stage multiply-accumulate chain, narrow but deep;
//! - recursive: base-s coefficient grouping with power-carrying kernels,
//!   `ceil(log_s n) + 1` affine layers;
//! - optimal: the grouping plus an explicit power ladder, one layer deeper
//!   (`ceil(log_s n) + 2`) but with O(n) nodes and O(s n) nonzeros.

use crate::error::{Error, Result};
use crate::netcore::{concat, PowerNet};
use crate::stage::{Contribution, Stage};

/// Dense univariate coefficients, ascending degree. Trailing zeros are kept
/// (the stored degree is the index of the last entry).
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<f64>,
}

impl PolyCoeffs {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Invalid("polynomial needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid("non-finite coefficient".into()));
        }
        Ok(PolyCoeffs { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the highest nonzero coefficient (0 for the zero polynomial).
    pub fn effective_degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| *c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        crate::oracle::horner_eval(&self.coeffs, x)
    }

    /// One coefficient per line, ascending degree; blank lines ignored.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() {
                continue;
            }
            let v: f64 = t.parse().map_err(|_| {
                Error::Invalid(format!("line {}: cannot parse '{}' as a number", lineno + 1, t))
            })?;
            coeffs.push(v);
        }
        PolyCoeffs::new(coeffs)
    }

    /// JSON array of reals, ascending degree.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let coeffs: Vec<f64> = serde_json::from_str(text)?;
        PolyCoeffs::new(coeffs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Shallow,
    Horner,
    Recursive,
    Optimal,
    Auto,
}

impl Strategy {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "shallow" => Ok(Strategy::Shallow),
            "horner" => Ok(Strategy::Horner),
            "recursive" => Ok(Strategy::Recursive),
            "optimal" => Ok(Strategy::Optimal),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::Strategy(format!("unknown strategy '{other}'"))),
        }
    }
}

/// Smallest `t` with `s^t >= n` (so `t = ceil(log_s n)`), computed in
/// integers.
pub fn ceil_log(n: u64, s: u64) -> u32 {
    let mut t = 0;
    let mut v = 1u64;
    while v < n {
        v = v.saturating_mul(s);
        t += 1;
    }
    t
}

/// One hidden layer of exactly `2s` nodes; requires stored degree `<= s`.
pub fn shallow_poly_net(p: &PolyCoeffs, s: u32) -> Result<PowerNet> {
    if p.degree() > s as usize {
        return Err(Error::Strategy(format!(
            "degree {} exceeds activation power {}; use a deep strategy",
            p.degree(),
            s
        )));
    }
    let mut stage = Stage::new(1, s)?;
    let c = stage.poly_row(0, &p.coeffs)?;
    stage.push_output(&[c]);
    stage.into_net()
}

/// Affine net for degree <= 1 (no hidden nodes).
fn affine_net(a0: f64, a1: f64, s: u32) -> Result<PowerNet> {
    use crate::netcore::{AffineLayer, Matrix};
    let layer = AffineLayer::new(Matrix::from_rows(vec![vec![a1]])?, vec![a0])?;
    PowerNet::new(s, 1, vec![layer])
}

/// Smallest power of two at least `max(1, x)`; wire values are divided by
/// these so products never square large magnitudes, and the division by a
/// binary power is exact.
pub(crate) fn pow2_scale(x: f64) -> f64 {
    let mut s = 1.0;
    while s < x {
        s *= 2.0;
    }
    s
}

/// Multiply-accumulate chain: stage k maps `(x, y) -> (x, a_(k-1) + x*y)`,
/// one stage per degree, each carrying `x` forward through an identity
/// block beside the product kernel. Depth is `n + 1` affine layers. Partial
/// values ride scaled by binary powers so large coefficients do not degrade
/// the kernels.
pub fn horner_net(p: &PolyCoeffs, s: u32) -> Result<PowerNet> {
    let a = &p.coeffs;
    let n = p.effective_degree();
    if n == 0 {
        return affine_net(a[0], 0.0, s);
    }
    // tail[k] bounds the partial value |y_k| on the unit interval
    let mut tail = vec![0.0; n + 2];
    tail[n + 1] = a[n].abs();
    for k in (1..=n).rev() {
        tail[k] = tail[k + 1] + a[k - 1].abs();
    }
    let sigma = |k: usize| -> f64 {
        if k == 1 {
            1.0 // final output carries the true value
        } else {
            pow2_scale(tail[k].max(1.0))
        }
    };
    if n == 1 {
        // still one kernel stage so the chain shape is uniform
        let mut stage = Stage::new(1, s)?;
        let prod = stage.product_const(0, a[1], 1)?;
        let mut c = Contribution::constant(a[0]);
        c.units = prod.units;
        stage.push_output(&[c]);
        return stage.into_net();
    }
    // first stage: x -> (x, (a_(n-1) + a_n * x) / sigma_n)
    let mut first = Stage::new(1, s)?;
    let carry = first.poly_row(0, &[0.0, 1.0])?;
    first.push_output(&[carry]);
    let prod = first.product_const(0, a[n] / sigma(n), 1)?;
    let y = [prod, Contribution::constant(a[n - 1] / sigma(n))];
    first.push_output(&y);
    let mut net = first.into_net()?;
    // middle stages: (x, y) -> (x, (a_(k-1) + x * y * sigma_(k+1)) / sigma_k)
    for k in (2..n).rev() {
        let mut stage = Stage::new(2, s)?;
        let carry = stage.poly_row(0, &[0.0, 1.0])?;
        stage.push_output(&[carry]);
        let prod = stage.product(0, 1, 1)?.scaled(sigma(k + 1) / sigma(k));
        stage.push_output(&[prod, Contribution::constant(a[k - 1] / sigma(k))]);
        net = concat(&stage.into_net()?, &net)?;
    }
    // last stage: (x, y) -> a_0 + x * y * sigma_2
    let mut last = Stage::new(2, s)?;
    let prod = last.product(0, 1, 1)?.scaled(sigma(2));
    last.push_output(&[prod, Contribution::constant(a[0])]);
    concat(&last.into_net()?, &net)
}

// ---------------------------------------------------------------------------
// Level planning shared by the recursive and optimal builders.
//
// Level 1 splits the coefficients into groups of s (the top group takes one
// extra coefficient so n_1 = ceil(n/s) groups always cover degree n). Level
// i+1 groups combine s previous group values against powers of the running
// variable. Tracking which groups are identically zero or constant lets the
// builders skip dead blocks.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
enum TermVal {
    Const(f64),
    Prev(usize), // index into the previous level's node list
}

#[derive(Clone, Debug)]
enum NodeKind {
    Zero,
    Const(f64),
    Poly(Vec<f64>),               // level 1: polynomial in the base variable
    Combine(Vec<(u32, TermVal)>), // level >= 2: sum of term * power^j
}

struct LevelPlan {
    /// levels[0] is level 1; one entry per group.
    levels: Vec<Vec<NodeKind>>,
}

/// Magnitude bounds per node on the unit interval; wire values are divided
/// by the corresponding binary power (1.0 for the top node, whose wire must
/// carry the true value).
fn plan_scales(plan: &LevelPlan) -> Vec<Vec<f64>> {
    let mut bounds: Vec<Vec<f64>> = Vec::with_capacity(plan.levels.len());
    for (li, level) in plan.levels.iter().enumerate() {
        let mut row = Vec::with_capacity(level.len());
        for nk in level {
            let b = match nk {
                NodeKind::Zero => 0.0,
                NodeKind::Const(c) => c.abs(),
                NodeKind::Poly(c) => c.iter().map(|v| v.abs()).sum(),
                NodeKind::Combine(terms) => terms
                    .iter()
                    .map(|(_, tv)| match tv {
                        TermVal::Const(c) => c.abs(),
                        TermVal::Prev(idx) => bounds[li - 1][*idx],
                    })
                    .sum(),
            };
            row.push(b);
        }
        bounds.push(row);
    }
    bounds
}

fn plan_levels(a: &[f64], n: usize, s: u32) -> LevelPlan {
    let s = s as usize;
    let n1 = n.div_ceil(s);
    let mut level1 = Vec::with_capacity(n1);
    for k in 0..n1 {
        let hi = if k == n1 - 1 { k * s + s } else { k * s + s - 1 };
        let mut coeffs: Vec<f64> = (k * s..=hi)
            .map(|i| if i <= n { a[i] } else { 0.0 })
            .collect();
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        let node = if coeffs.iter().all(|c| *c == 0.0) {
            NodeKind::Zero
        } else if coeffs.len() == 1 {
            NodeKind::Const(coeffs[0])
        } else {
            NodeKind::Poly(coeffs)
        };
        level1.push(node);
    }
    let mut levels = vec![level1];
    while levels.last().unwrap().len() > 1 {
        let prev = levels.last().unwrap();
        let cnt = prev.len().div_ceil(s);
        let mut next = Vec::with_capacity(cnt);
        for k in 0..cnt {
            let mut terms = Vec::new();
            for j in 0..s {
                let idx = k * s + j;
                if idx >= prev.len() {
                    continue;
                }
                match &prev[idx] {
                    NodeKind::Zero => {}
                    NodeKind::Const(c) => terms.push((j as u32, TermVal::Const(*c))),
                    _ => terms.push((j as u32, TermVal::Prev(idx))),
                }
            }
            let node = match terms.as_slice() {
                [] => NodeKind::Zero,
                [(0, TermVal::Const(c))] => NodeKind::Const(*c),
                _ => NodeKind::Combine(terms),
            };
            next.push(node);
        }
        levels.push(next);
    }
    LevelPlan { levels }
}

/// Base-s grouping where each stage computes the next group values through
/// power-carrying kernels on the running variable. Degree `<= s` falls back
/// to the shallow form.
pub fn recursive_poly_net(p: &PolyCoeffs, s: u32) -> Result<PowerNet> {
    let n = p.effective_degree();
    if n <= s as usize {
        return shallow_or_affine(p, s);
    }
    let plan = plan_levels(&p.coeffs, n, s);
    let bounds = plan_scales(&plan);
    let t = plan.levels.len();
    let sigma = |li: usize, idx: usize| -> f64 {
        if li + 1 == t {
            1.0
        } else {
            pow2_scale(bounds[li][idx].max(1.0))
        }
    };
    // stage with the last power-product anywhere ahead; the running power is
    // only carried that far
    let last_power_stage = (2..=t)
        .rev()
        .find(|i| {
            plan.levels[i - 1].iter().any(|nk| match nk {
                NodeKind::Combine(terms) => terms.iter().any(|(j, _)| *j >= 1),
                _ => false,
            })
        })
        .unwrap_or(1);

    // stage 1: x -> (z = x^s, group polynomials)
    let mut wires: Vec<Option<usize>> = Vec::new(); // per level-1 node: output wire
    let mut stage = Stage::new(1, s)?;
    let mut z_wire = None;
    if last_power_stage >= 2 {
        let c = stage.power(0);
        z_wire = Some(stage.push_output(&[c]));
    }
    let polys: Vec<Vec<f64>> = plan.levels[0]
        .iter()
        .enumerate()
        .filter_map(|(idx, nk)| match nk {
            NodeKind::Poly(c) => {
                let sc = sigma(0, idx);
                Some(c.iter().map(|v| v / sc).collect())
            }
            _ => None,
        })
        .collect();
    let sets: Vec<&[f64]> = polys.iter().map(|c| c.as_slice()).collect();
    let rows = stage.poly_rows(0, &sets)?;
    let mut rows_iter = rows.into_iter();
    for nk in &plan.levels[0] {
        match nk {
            NodeKind::Poly(_) => {
                let c = rows_iter.next().unwrap();
                wires.push(Some(stage.push_output(&[c])));
            }
            _ => wires.push(None),
        }
    }
    let mut net = stage.into_net()?;

    // stages 2..t: combine previous groups against powers of z
    for i in 2..=t {
        let level = &plan.levels[i - 1];
        let mut stage = Stage::new(net.output_dim(), s)?;
        let mut new_z = None;
        if i < last_power_stage {
            let c = stage.power(z_wire.expect("running power present"));
            new_z = Some(stage.push_output(&[c]));
        }
        let mut new_wires: Vec<Option<usize>> = Vec::with_capacity(level.len());
        for (idx_out, nk) in level.iter().enumerate() {
            match nk {
                NodeKind::Combine(terms) => {
                    let out_scale = sigma(i - 1, idx_out);
                    let mut parts = Vec::new();
                    // constant coefficients batch into one polynomial row in z
                    let mut const_poly = vec![0.0; s as usize];
                    let mut any_const = false;
                    for (j, tv) in terms {
                        match tv {
                            TermVal::Const(c) => {
                                if *j == 0 {
                                    parts.push(Contribution::constant(*c / out_scale));
                                } else {
                                    const_poly[*j as usize] = *c / out_scale;
                                    any_const = true;
                                }
                            }
                            TermVal::Prev(idx) => {
                                let yw = wires[*idx].expect("wire for previous group");
                                let rescale = sigma(i - 2, *idx) / out_scale;
                                if *j == 0 {
                                    parts.push(stage.poly_row(yw, &[0.0, rescale])?);
                                } else {
                                    let prod = stage.product(
                                        z_wire.expect("running power present"),
                                        yw,
                                        *j,
                                    )?;
                                    parts.push(prod.scaled(rescale));
                                }
                            }
                        }
                    }
                    if any_const {
                        parts.push(stage.poly_row(z_wire.expect("power present"), &const_poly)?);
                    }
                    new_wires.push(Some(stage.push_output(&parts)));
                }
                NodeKind::Const(_) | NodeKind::Zero => new_wires.push(None),
                NodeKind::Poly(_) => unreachable!("polynomial nodes appear only at level 1"),
            }
        }
        if stage.output_count() == 0 {
            return Err(Error::Invalid("internal: empty stage in recursive build".into()));
        }
        net = concat(&stage.into_net()?, &net)?;
        wires = new_wires;
        z_wire = new_z;
    }
    finish_scalar(net, &plan, &wires, s)
}

/// The node-optimal construction: an explicit ladder of repeated s-th powers
/// feeds per-stage product kernels, so every hidden group costs O(s) nodes.
/// Degree `<= s` falls back to the shallow form; otherwise the depth is
/// exactly `ceil(log_s n) + 2` affine layers.
pub fn optimal_poly_net(p: &PolyCoeffs, s: u32) -> Result<PowerNet> {
    let n = p.effective_degree();
    if n <= s as usize {
        return shallow_or_affine(p, s);
    }
    let plan = plan_levels(&p.coeffs, n, s);
    let bounds = plan_scales(&plan);
    let t = plan.levels.len();
    let sigma = |li: usize, idx: usize| -> f64 {
        if li + 1 == t {
            1.0
        } else {
            pow2_scale(bounds[li][idx].max(1.0))
        }
    };

    // ladder_j[i] (i = 2..=t): powers of the block base consumed by level-i
    // groups; j = 1 is the base itself.
    let mut ladder_j: Vec<std::collections::BTreeSet<u32>> = vec![Default::default(); t + 1];
    for i in 2..=t {
        for nk in &plan.levels[i - 1] {
            if let NodeKind::Combine(terms) = nk {
                for (j, _) in terms {
                    if *j >= 1 {
                        ladder_j[i].insert(*j);
                    }
                }
            }
        }
    }
    // early segment: block bases born one stage ahead so their higher powers
    // can be formed; beyond it only first powers are needed and each base is
    // formed in place from the previous one
    let early_end = (2..=t)
        .filter(|i| ladder_j[*i].iter().any(|j| *j >= 2))
        .max()
        .unwrap_or(0);
    let late_end = (2..=t).filter(|i| !ladder_j[*i].is_empty()).max().unwrap_or(0);

    // wire bookkeeping between stages
    struct Carry {
        x: Option<usize>,
        base: Option<(u32, usize)>,       // early-born base B_i, available one stage ahead
        powers: Vec<(u32, usize)>,        // (j, wire) powers consumed by the next stage
        groups: Vec<Option<usize>>,       // wires of the previous level's groups
        late_base: Option<(u32, usize)>,  // base carried along the late segment
    }

    // stage 0: carry x; birth of the first early base
    let mut s0 = Stage::new(1, s)?;
    let c = s0.poly_row(0, &[0.0, 1.0])?;
    let x_w = s0.push_output(&[c]);
    let mut base = None;
    if early_end >= 2 {
        let c = s0.power(0);
        base = Some((2u32, s0.push_output(&[c])));
    }
    let mut net = s0.into_net()?;
    let mut carry = Carry {
        x: Some(x_w),
        base,
        powers: Vec::new(),
        groups: Vec::new(),
        late_base: None,
    };

    for i in 1..=t {
        let mut stage = Stage::new(net.output_dim(), s)?;
        let mut next = Carry {
            x: None,
            base: None,
            powers: Vec::new(),
            groups: Vec::new(),
            late_base: None,
        };
        // group rows for this level
        if i == 1 {
            let xw = carry.x.expect("x carried to stage 1");
            let polys: Vec<Vec<f64>> = plan.levels[0]
                .iter()
                .enumerate()
                .filter_map(|(idx, nk)| match nk {
                    NodeKind::Poly(c) => {
                        let sc = sigma(0, idx);
                        Some(c.iter().map(|v| v / sc).collect())
                    }
                    _ => None,
                })
                .collect();
            let sets: Vec<&[f64]> = polys.iter().map(|c| c.as_slice()).collect();
            let rows = stage.poly_rows(xw, &sets)?;
            let mut it = rows.into_iter();
            for nk in &plan.levels[0] {
                match nk {
                    NodeKind::Poly(_) => {
                        let c = it.next().unwrap();
                        next.groups.push(Some(stage.push_output(&[c])));
                    }
                    _ => next.groups.push(None),
                }
            }
        } else {
            let find_pow = |j: u32| -> usize {
                carry
                    .powers
                    .iter()
                    .find(|(jj, _)| *jj == j)
                    .map(|(_, w)| *w)
                    .expect("scheduled power wire")
            };
            for (idx_out, nk) in plan.levels[i - 1].iter().enumerate() {
                match nk {
                    NodeKind::Combine(terms) => {
                        let out_scale = sigma(i - 1, idx_out);
                        let mut parts = Vec::new();
                        for (j, tv) in terms {
                            match tv {
                                TermVal::Const(c) => {
                                    if *j == 0 {
                                        parts.push(Contribution::constant(*c / out_scale));
                                    } else {
                                        parts.push(stage.poly_row(
                                            find_pow(*j),
                                            &[0.0, *c / out_scale],
                                        )?);
                                    }
                                }
                                TermVal::Prev(idx) => {
                                    let yw = carry.groups[*idx].expect("group wire");
                                    let rescale = sigma(i - 2, *idx) / out_scale;
                                    if *j == 0 {
                                        parts.push(stage.poly_row(yw, &[0.0, rescale])?);
                                    } else {
                                        let prod = stage.product(find_pow(*j), yw, 1)?;
                                        parts.push(prod.scaled(rescale));
                                    }
                                }
                            }
                        }
                        next.groups.push(Some(stage.push_output(&parts)));
                    }
                    _ => next.groups.push(None),
                }
            }
        }
        // ladder emissions for the next stage
        if i < t {
            let dest = i + 1; // level consuming what this stage emits
            if dest <= early_end {
                let (bi, bw) = carry.base.expect("early base available");
                debug_assert_eq!(bi, dest as u32);
                // powers of the base for the next stage's products
                let mut want: Vec<u32> = ladder_j[dest].iter().copied().collect();
                // pass the base itself onward when the late segment follows
                if dest == early_end && late_end > early_end && !want.contains(&1) {
                    want.push(1);
                    want.sort_unstable();
                }
                let mono: Vec<Vec<f64>> = want
                    .iter()
                    .map(|j| {
                        let mut c = vec![0.0; *j as usize + 1];
                        c[*j as usize] = 1.0;
                        c
                    })
                    .collect();
                let sets: Vec<&[f64]> = mono.iter().map(|c| c.as_slice()).collect();
                let rows = stage.poly_rows(bw, &sets)?;
                for (j, row) in want.iter().zip(rows) {
                    let w = stage.push_output(&[row]);
                    next.powers.push((*j, w));
                    if *j == 1 && dest == early_end && late_end > early_end {
                        next.late_base = Some((dest as u32, w));
                    }
                }
                // birth of the following early base
                if dest < early_end {
                    let c = stage.power(bw);
                    next.base = Some((dest as u32 + 1, stage.push_output(&[c])));
                }
            } else if dest <= late_end {
                // form the base in place from the previous one; the chain
                // starts from the x carry when there is no early segment
                let prev = match carry.late_base {
                    Some((_, w)) => w,
                    None => {
                        debug_assert_eq!(i, 1, "late base chain starts at stage 1");
                        carry.x.expect("x carried to stage 1")
                    }
                };
                let c = stage.power(prev);
                let w = stage.push_output(&[c]);
                if !ladder_j[dest].is_empty() {
                    next.powers.push((1, w));
                }
                next.late_base = Some((dest as u32, w));
            }
            // x forwarding is only ever needed into stage 1
        }
        if stage.output_count() == 0 {
            return Err(Error::Invalid("internal: empty stage in optimal build".into()));
        }
        net = concat(&stage.into_net()?, &net)?;
        carry = next;
    }
    finish_scalar(net, &plan, &carry.groups, s)
}

/// The networks end with the top group as their sole output; a top group
/// that degenerated to a constant still needs a scalar net.
fn finish_scalar(
    net: PowerNet,
    plan: &LevelPlan,
    wires: &[Option<usize>],
    s: u32,
) -> Result<PowerNet> {
    let top = plan.levels.last().unwrap();
    debug_assert_eq!(top.len(), 1);
    match &top[0] {
        NodeKind::Const(c) => affine_net(*c, 0.0, s),
        NodeKind::Zero => affine_net(0.0, 0.0, s),
        _ => {
            debug_assert_eq!(wires.len(), 1);
            debug_assert_eq!(net.output_dim(), 1);
            Ok(net)
        }
    }
}

fn shallow_or_affine(p: &PolyCoeffs, s: u32) -> Result<PowerNet> {
    if p.effective_degree() <= 1 {
        let a = p.coeffs();
        return affine_net(a[0], a.get(1).copied().unwrap_or(0.0), s);
    }
    let trimmed = PolyCoeffs::new(p.coeffs()[..=p.effective_degree()].to_vec())?;
    shallow_poly_net(&trimmed, s)
}

/// Strategy dispatcher. `Auto` picks the shallow form when the degree fits
/// in one layer and the optimal construction otherwise.
pub fn build_poly_net(p: &PolyCoeffs, s: u32, strategy: Strategy) -> Result<PowerNet> {
    match strategy {
        Strategy::Shallow => shallow_poly_net(p, s),
        Strategy::Horner => horner_net(p, s),
        Strategy::Recursive => recursive_poly_net(p, s),
        Strategy::Optimal => optimal_poly_net(p, s),
        Strategy::Auto => {
            if p.effective_degree() <= s as usize {
                shallow_or_affine(p, s)
            } else {
                optimal_poly_net(p, s)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;

    fn eval1(net: &PowerNet, x: f64) -> f64 {
        net.evaluate(&[x]).unwrap()[0]
    }

    fn poly(v: &[f64]) -> PolyCoeffs {
        PolyCoeffs::new(v.to_vec()).unwrap()
    }

    #[test]
    fn shallow_examples() {
        let p = poly(&[1.0, 2.0, 3.0]);
        let net = shallow_poly_net(&p, 2).unwrap();
        assert!((eval1(&net, 2.0) - 17.0).abs() < 1e-12);
        assert_eq!(net.stats().nodes, 4);

        let c = poly(&[5.0]);
        for s in 2..=4 {
            let net = shallow_poly_net(&c, s).unwrap();
            assert!((eval1(&net, -3.3) - 5.0).abs() < 1e-12);
            assert_eq!(net.stats().nodes, 2 * s as usize);
        }

        assert!(matches!(
            shallow_poly_net(&poly(&[0.0, 0.0, 0.0, 1.0]), 2),
            Err(Error::Strategy(_))
        ));
    }

    #[test]
    fn horner_examples() {
        let p = poly(&[1.0, 1.0, 1.0, 1.0]);
        let net = horner_net(&p, 2).unwrap();
        assert!((eval1(&net, 1.0) - 4.0).abs() < 1e-12);
        assert_eq!(net.depth(), 4); // n + 1 affine layers

        let p = poly(&[0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let net = horner_net(&p, 2).unwrap();
        assert!((eval1(&net, 1.2) - 2.48832).abs() < 1e-12);

        // middle stages carry x beside the kernel: 4(s-1) + 2s hidden units
        for s in [2u32, 3, 4] {
            let p = poly(&[1.0, -0.5, 0.25, 2.0, 1.5]);
            let net = horner_net(&p, s).unwrap();
            let width = net.layers()[1].out_dim();
            assert_eq!(width as u32, 4 * (s - 1) + 2 * s, "s={s}");
        }
    }

    #[test]
    fn recursive_examples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(101);
        let coeffs: Vec<f64> = (0..=10).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = poly(&coeffs);
        let net = recursive_poly_net(&p, 2).unwrap();
        // depth = ceil(log2 10) + 1
        assert_eq!(net.depth(), ceil_log(10, 2) as usize + 1);
        for _ in 0..100 {
            let x = rng.random_range(-1.0..1.0);
            let want = p.eval(x);
            assert!((eval1(&net, x) - want).abs() <= 1e-10 * want.abs().max(1.0));
        }

        // pure power collapses to the chain depth
        let mut xs = vec![0.0; 5];
        xs[4] = 1.0;
        let net = recursive_poly_net(&poly(&xs), 2).unwrap();
        assert!((eval1(&net, 2.0) - 16.0).abs() < 1e-11);
        assert_eq!(net.depth(), 3);
    }

    #[test]
    fn optimal_depth_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(103);
        for s in 2..=5u32 {
            for n in (s as usize + 1)..=80 {
                let coeffs: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let net = optimal_poly_net(&poly(&coeffs), s).unwrap();
                let t = ceil_log(n as u64, s as u64) as usize;
                let is_power = (s as u64).pow(t as u32) == n as u64;
                if is_power {
                    assert!(net.depth() <= t + 2, "n={n} s={s}");
                } else {
                    assert_eq!(net.depth(), t + 2, "n={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn optimal_size_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(107);
        for s in 2..=5u32 {
            for n in 2..=100usize {
                let coeffs: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let net = optimal_poly_net(&poly(&coeffs), s).unwrap();
                let st = net.stats();
                assert!(
                    st.nodes <= 8 * n,
                    "nodes {} > 8n for n={n}, s={s}",
                    st.nodes
                );
                assert!(
                    st.nonzeros <= 24 * s as usize * n,
                    "nonzeros {} > 24sn for n={n}, s={s}",
                    st.nonzeros
                );
            }
        }
    }

    #[test]
    fn chebyshev_t8_through_optimal() {
        // T8 coefficients; T8(cos t) = cos 8t
        let t8 = poly(&[1.0, 0.0, -32.0, 0.0, 160.0, 0.0, -256.0, 0.0, 128.0]);
        let net = optimal_poly_net(&t8, 2).unwrap();
        let x = (std::f64::consts::PI / 5.0).cos();
        let want = (8.0 * std::f64::consts::PI / 5.0).cos();
        assert!((eval1(&net, x) - want).abs() < 1e-10);
    }

    #[test]
    fn single_term_matches_monomial_net() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(109);
        for (n, s) in [(9usize, 2u32), (12, 3), (7, 2)] {
            let mut coeffs = vec![0.0; n + 1];
            coeffs[n] = 1.7;
            let net = optimal_poly_net(&poly(&coeffs), s).unwrap();
            let mono = crate::monomial::monomial_net(n as u64, s).unwrap();
            for _ in 0..50 {
                let x = rng.random_range(-1.2..1.2);
                let a = eval1(&net, x);
                let b = 1.7 * eval1(&mono, x);
                assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0), "n={n} s={s}");
            }
        }
    }

    #[test]
    fn strategies_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(113);
        let coeffs: Vec<f64> = (0..=6).map(|_| rng.random_range(-1.0..1.0)).collect();
        let p = poly(&coeffs);
        let nets = [
            horner_net(&p, 2).unwrap(),
            recursive_poly_net(&p, 2).unwrap(),
            optimal_poly_net(&p, 2).unwrap(),
        ];
        let want = p.eval(0.3);
        for net in &nets {
            assert!((eval1(net, 0.3) - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn auto_picks_by_degree() {
        let p = poly(&[1.0, 2.0, 0.5, -0.25]);
        let net = build_poly_net(&p, 4, Strategy::Auto).unwrap();
        assert_eq!(net.depth(), 2);
        let mut c = vec![0.1; 10];
        c[9] = -0.4;
        let net = build_poly_net(&poly(&c), 2, Strategy::Auto).unwrap();
        assert!(net.depth() > 2);
        assert_eq!(net.depth(), ceil_log(9, 2) as usize + 2);
    }

    #[test]
    fn degenerate_degrees_are_affine() {
        for strat in [Strategy::Horner, Strategy::Recursive, Strategy::Optimal, Strategy::Auto] {
            let net = build_poly_net(&poly(&[3.5]), 2, strat).unwrap();
            assert!((eval1(&net, 9.0) - 3.5).abs() < 1e-15);
            let net = build_poly_net(&poly(&[1.0, -2.0]), 3, strat).unwrap();
            assert!((eval1(&net, 0.5) - 0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn exhaustive_exactness_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(127);
        for s in 2..=4u32 {
            for n in 1..=40usize {
                let coeffs: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let p = poly(&coeffs);
                let norm: f64 = coeffs.iter().map(|c| c.abs()).sum();
                let nets = [
                    horner_net(&p, s).unwrap(),
                    recursive_poly_net(&p, s).unwrap(),
                    optimal_poly_net(&p, s).unwrap(),
                ];
                for _ in 0..20 {
                    let x = rng.random_range(-1.0..1.0);
                    let want = p.eval(x);
                    for (which, net) in nets.iter().enumerate() {
                        let got = eval1(net, x);
                        assert!(
                            (got - want).abs() <= 1e-9 * norm.max(1.0),
                            "strategy {which} n={n} s={s} x={x}: {got} vs {want}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sparse_polynomials_build_and_evaluate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(131);
        for s in 2..=3u32 {
            for _ in 0..40 {
                let n = rng.random_range(2..60usize);
                let mut coeffs = vec![0.0; n + 1];
                coeffs[n] = rng.random_range(0.5..1.0);
                for _ in 0..3 {
                    let i = rng.random_range(0..n);
                    coeffs[i] = rng.random_range(-1.0..1.0);
                }
                let p = poly(&coeffs);
                for build in [recursive_poly_net, optimal_poly_net] {
                    let net = build(&p, s).unwrap();
                    for _ in 0..10 {
                        let x = rng.random_range(-1.0..1.0);
                        let want = p.eval(x);
                        assert!(
                            (eval1(&net, x) - want).abs() <= 1e-9 * want.abs().max(1.0),
                            "n={n} s={s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn coefficients_from_text() {
        let p = PolyCoeffs::from_csv_str("1.5\n\n-2\n0.25\n").unwrap();
        assert_eq!(p.coeffs(), &[1.5, -2.0, 0.25]);
        let p = PolyCoeffs::from_json_str("[1, 0, 3.5]").unwrap();
        assert_eq!(p.coeffs(), &[1.0, 0.0, 3.5]);
        assert!(PolyCoeffs::from_csv_str("1.0\nnope\n").is_err());
    }
}
