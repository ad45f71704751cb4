//! Assembler for one-hidden-layer building blocks.
//!
//! Every deep construction in this crate is a concatenation of depth-2
//! stages. A stage owns a growing hidden layer; blocks append units and hand
//! back the output-row entries (plus an additive constant) that reproduce
//! their value, so several blocks can be summed into one output wire.

use crate::bivariate::xny_kernel;
use crate::error::{Error, Result};
use crate::netcore::{AffineLayer, Matrix, PowerNet, MAX_POWER, MIN_POWER};
use crate::vandermonde::{default_nodes, solve_lambda};

/// Output-row entries over a stage's hidden units, plus an additive constant.
#[derive(Clone, Debug, Default)]
pub(crate) struct Contribution {
    pub units: Vec<(usize, f64)>,
    pub constant: f64,
}

impl Contribution {
    pub fn constant(c: f64) -> Self {
        Contribution {
            units: Vec::new(),
            constant: c,
        }
    }

    pub fn scaled(mut self, f: f64) -> Self {
        for (_, w) in self.units.iter_mut() {
            *w *= f;
        }
        self.constant *= f;
        self
    }
}

pub(crate) struct Stage {
    input_dim: usize,
    s: u32,
    hidden: Vec<(Vec<(usize, f64)>, f64)>,
    outputs: Vec<(Vec<(usize, f64)>, f64)>,
}

impl Stage {
    pub fn new(input_dim: usize, s: u32) -> Result<Self> {
        if !(MIN_POWER..=MAX_POWER).contains(&s) {
            return Err(Error::BadPower(s));
        }
        if input_dim == 0 {
            return Err(Error::Invalid("stage needs at least one input".into()));
        }
        Ok(Stage {
            input_dim,
            s,
            hidden: Vec::new(),
            outputs: Vec::new(),
        })
    }

    fn add_unit(&mut self, row: Vec<(usize, f64)>, bias: f64) -> usize {
        self.hidden.push((row, bias));
        self.hidden.len() - 1
    }

    /// `wire^s` through the two-sided activation pair; two units.
    pub fn power(&mut self, wire: usize) -> Contribution {
        let sign = if self.s % 2 == 0 { 1.0 } else { -1.0 };
        let pos = self.add_unit(vec![(wire, 1.0)], 0.0);
        let neg = self.add_unit(vec![(wire, -1.0)], 0.0);
        Contribution {
            units: vec![(pos, 1.0), (neg, sign)],
            constant: 0.0,
        }
    }

    /// One shared block of `2s` shifted units on `wire`, with one output row
    /// per coefficient set. Each set is ascending `a_0..a_m` with `m <= s`;
    /// the row reproduces `sum_j a_j wire^j` exactly.
    pub fn poly_rows(&mut self, wire: usize, coeff_sets: &[&[f64]]) -> Result<Vec<Contribution>> {
        let s = self.s as usize;
        let nodes = default_nodes(self.s);
        let sign = if self.s % 2 == 0 { 1.0 } else { -1.0 };
        let mut pairs = Vec::with_capacity(s);
        for bk in &nodes {
            let pos = self.add_unit(vec![(wire, 1.0)], *bk);
            let neg = self.add_unit(vec![(wire, -1.0)], -*bk);
            pairs.push((pos, neg));
        }
        let mut rows = Vec::with_capacity(coeff_sets.len());
        for set in coeff_sets {
            if set.len() > s + 1 {
                return Err(Error::Invalid(format!(
                    "coefficient set of degree {} exceeds activation power {}",
                    set.len() - 1,
                    s
                )));
            }
            // reverse to (d_s .. d_0), zero-padding high degrees
            let mut d = vec![0.0; s + 1];
            for (j, a) in set.iter().enumerate() {
                d[s - j] = *a;
            }
            let lc = solve_lambda(&d, &nodes)?;
            let mut units = Vec::with_capacity(2 * s);
            for (k, (pos, neg)) in pairs.iter().enumerate() {
                units.push((*pos, lc.lambda[k]));
                units.push((*neg, lc.lambda[k] * sign));
            }
            rows.push(Contribution {
                units,
                constant: lc.lambda[s],
            });
        }
        Ok(rows)
    }

    pub fn poly_row(&mut self, wire: usize, coeffs: &[f64]) -> Result<Contribution> {
        Ok(self.poly_rows(wire, &[coeffs])?.pop().unwrap())
    }

    /// `xw^n * yw` through the explicit kernel; `u_n = 2(n+1)(s-n)` units.
    pub fn product(&mut self, xw: usize, yw: usize, n: u32) -> Result<Contribution> {
        let k = xny_kernel(n, self.s)?;
        let mut units = Vec::with_capacity(k.len());
        for i in 0..k.len() {
            let mut row = Vec::with_capacity(2);
            if k.alpha_x[i] != 0.0 {
                row.push((xw, k.alpha_x[i]));
            }
            if xw == yw {
                // reuse of one wire as both factors
                match row.last_mut() {
                    Some(e) => e.1 += k.alpha_y[i],
                    None => row.push((yw, k.alpha_y[i])),
                }
            } else {
                row.push((yw, k.alpha_y[i]));
            }
            let idx = self.add_unit(row, k.beta[i]);
            units.push((idx, k.gamma[i]));
        }
        Ok(Contribution {
            units,
            constant: 0.0,
        })
    }

    /// `xw^n * c` for a constant factor folded into the kernel shifts.
    pub fn product_const(&mut self, xw: usize, c: f64, n: u32) -> Result<Contribution> {
        let k = xny_kernel(n, self.s)?;
        let mut units = Vec::with_capacity(k.len());
        for i in 0..k.len() {
            let row = if k.alpha_x[i] != 0.0 {
                vec![(xw, k.alpha_x[i])]
            } else {
                Vec::new()
            };
            let idx = self.add_unit(row, k.alpha_y[i] * c + k.beta[i]);
            units.push((idx, k.gamma[i]));
        }
        Ok(Contribution {
            units,
            constant: 0.0,
        })
    }

    /// Emits one output wire summing the given contributions.
    pub fn push_output(&mut self, parts: &[Contribution]) -> usize {
        let mut row: Vec<(usize, f64)> = Vec::new();
        let mut constant = 0.0;
        for p in parts {
            row.extend_from_slice(&p.units);
            constant += p.constant;
        }
        self.outputs.push((row, constant));
        self.outputs.len() - 1
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    /// Densifies into a depth-2 net (or a single affine layer when no hidden
    /// units were created).
    pub fn into_net(self) -> Result<PowerNet> {
        if self.outputs.is_empty() {
            return Err(Error::Invalid("stage produced no outputs".into()));
        }
        if self.hidden.is_empty() {
            let mut w = Matrix::zeros(self.outputs.len(), self.input_dim);
            let bias = self.outputs.iter().map(|(_, c)| *c).collect();
            // no hidden units: outputs are constants
            for (row, _) in &self.outputs {
                debug_assert!(row.is_empty());
            }
            let _ = &mut w;
            let layer = AffineLayer::new(w, bias)?;
            return PowerNet::new(self.s, self.input_dim, vec![layer]);
        }
        let mut w1 = Matrix::zeros(self.hidden.len(), self.input_dim);
        let mut b1 = vec![0.0; self.hidden.len()];
        for (i, (row, bias)) in self.hidden.iter().enumerate() {
            for (j, v) in row {
                w1.set(i, *j, w1.get(i, *j) + v);
            }
            b1[i] = *bias;
        }
        let mut w2 = Matrix::zeros(self.outputs.len(), self.hidden.len());
        let mut b2 = vec![0.0; self.outputs.len()];
        for (i, (row, c)) in self.outputs.iter().enumerate() {
            for (j, v) in row {
                w2.set(i, *j, w2.get(i, *j) + v);
            }
            b2[i] = *c;
        }
        PowerNet::new(
            self.s,
            self.input_dim,
            vec![AffineLayer::new(w1, b1)?, AffineLayer::new(w2, b2)?],
        )
    }
}

/// Depth-2 net passing all `width` wires through unchanged (2s units each).
pub(crate) fn identity_stage(width: usize, s: u32) -> Result<PowerNet> {
    let mut stage = Stage::new(width, s)?;
    for w in 0..width {
        let c = stage.poly_row(w, &[0.0, 1.0])?;
        stage.push_output(&[c]);
    }
    stage.into_net()
}

/// Appends identity hops until the net has the requested depth.
pub(crate) fn extend_to_depth(mut net: PowerNet, depth: usize, s: u32) -> Result<PowerNet> {
    while net.depth() < depth {
        let hop = identity_stage(net.output_dim(), s)?;
        net = crate::netcore::concat(&hop, &net)?;
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_row_realizes_cubic() {
        let mut stage = Stage::new(1, 3).unwrap();
        let c = stage.poly_row(0, &[1.0, -2.0, 0.5, 0.25]).unwrap();
        stage.push_output(&[c]);
        let net = stage.into_net().unwrap();
        for x in [-1.5, -0.3, 0.0, 0.7, 2.0] {
            let want = 1.0 - 2.0 * x + 0.5 * x * x + 0.25 * x * x * x;
            let got = net.evaluate(&[x]).unwrap()[0];
            assert!((got - want).abs() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn contributions_sum_into_one_output() {
        // x^2 + 3*(x*y) from (x, y), one stage
        let mut stage = Stage::new(2, 2).unwrap();
        let sq = stage.power(0);
        let prod = stage.product(0, 1, 1).unwrap().scaled(3.0);
        stage.push_output(&[sq, prod]);
        let net = stage.into_net().unwrap();
        let got = net.evaluate(&[2.0, 5.0]).unwrap()[0];
        assert!((got - (4.0 + 30.0)).abs() < 1e-12);
    }

    #[test]
    fn product_with_shared_wire_squares() {
        let mut stage = Stage::new(1, 2).unwrap();
        let c = stage.product(0, 0, 1).unwrap();
        stage.push_output(&[c]);
        let net = stage.into_net().unwrap();
        let got = net.evaluate(&[3.0]).unwrap()[0];
        assert!((got - 9.0).abs() < 1e-12);
    }

    #[test]
    fn product_const_folds_factor() {
        let mut stage = Stage::new(1, 3).unwrap();
        let c = stage.product_const(0, 2.5, 1).unwrap();
        stage.push_output(&[c]);
        let net = stage.into_net().unwrap();
        for x in [-1.0, 0.2, 1.7] {
            let got = net.evaluate(&[x]).unwrap()[0];
            assert!((got - 2.5 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_chain_preserves_values() {
        let base = crate::monomial::power_s_net(2).unwrap();
        let deep = extend_to_depth(base, 5, 2).unwrap();
        assert_eq!(deep.depth(), 5);
        let got = deep.evaluate(&[1.3]).unwrap()[0];
        assert!((got - 1.69).abs() < 1e-12);
    }
}
