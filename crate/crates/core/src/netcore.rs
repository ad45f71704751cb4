//! Data model for RePU networks.
//!
//! A network is an ordered sequence of affine layers `(A_k, b_k)` together
//! with an activation power `s`. Evaluation alternates affine maps with the
//! elementwise rectified power unit `max(0, x)^s`, with no activation after
//! the final affine layer. The module also provides the composition calculus
//! (concatenation, parallelization, tensor product, shared-input tensor) and
//! structural complexity counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest supported activation power. `s = 1` (ReLU) is out of scope.
pub const MIN_POWER: u32 = 2;
/// Largest supported activation power. Beyond this the combination
/// coefficients of the shifted-power representations exceed what double
/// precision resolves reliably.
pub const MAX_POWER: u32 = 12;

/// Rectified power unit `max(0, x)^s`.
#[inline]
pub fn repu(x: f64, s: u32) -> f64 {
    if x > 0.0 {
        x.powi(s as i32)
    } else {
        0.0
    }
}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Shape("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        if cols == 0 {
            return Err(Error::Shape("matrix needs at least one column".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// `self * other`, skipping zero entries of `self`. The constructions
    /// produce very sparse junction factors, so this keeps concatenation
    /// cheap without a sparse storage format.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let w = self.get(i, t);
                if w == 0.0 {
                    continue;
                }
                let src = other.row(t);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += w * s;
                }
            }
        }
        Ok(out)
    }

    /// `self * x` with pairwise summation on long rows.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rows).map(|i| dot(self.row(i), x)).collect()
    }
}

/// Dot product; rows longer than 64 use pairwise summation so results are
/// reproducible and accurate independent of platform FMA behavior.
pub fn dot(w: &[f64], x: &[f64]) -> f64 {
    debug_assert_eq!(w.len(), x.len());
    if w.len() <= 64 {
        let mut acc = 0.0;
        for (a, b) in w.iter().zip(x) {
            acc += a * b;
        }
        acc
    } else {
        let mid = w.len() / 2;
        dot(&w[..mid], &x[..mid]) + dot(&w[mid..], &x[mid..])
    }
}

/// One affine map `x -> A x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineLayer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
}

impl AffineLayer {
    pub fn new(weights: Matrix, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != weights.rows() {
            return Err(Error::Shape(format!(
                "bias length {} does not match {} rows",
                bias.len(),
                weights.rows()
            )));
        }
        if !weights.is_finite() || bias.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite layer entry".into()));
        }
        Ok(AffineLayer { weights, bias })
    }

    pub fn out_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn in_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.weights.matvec(x);
        for (v, b) in y.iter_mut().zip(&self.bias) {
            *v += b;
        }
        y
    }

    pub fn nonzeros(&self) -> usize {
        self.weights.nonzeros() + self.bias.iter().filter(|v| **v != 0.0).count()
    }
}

/// Structural complexity of a network: `depth` counts affine layers,
/// `nodes` counts hidden activation units, `nonzeros` counts stored nonzero
/// weights and biases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NetStats {
    pub depth: usize,
    pub nodes: usize,
    pub nonzeros: usize,
}

/// A RePU network: immutable after construction, safe to share across
/// threads.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerNet {
    power: u32,
    input_dim: usize,
    layers: Vec<AffineLayer>,
}

impl PowerNet {
    pub fn new(power: u32, input_dim: usize, layers: Vec<AffineLayer>) -> Result<Self> {
        if !(MIN_POWER..=MAX_POWER).contains(&power) {
            return Err(Error::BadPower(power));
        }
        if input_dim == 0 {
            return Err(Error::Invalid("input dimension must be at least 1".into()));
        }
        if layers.is_empty() {
            return Err(Error::Invalid("network needs at least one layer".into()));
        }
        let mut expect = input_dim;
        for (k, layer) in layers.iter().enumerate() {
            if layer.in_dim() != expect {
                return Err(Error::Invalid(format!(
                    "layer {} expects input width {}, previous width is {}",
                    k + 1,
                    layer.in_dim(),
                    expect
                )));
            }
            expect = layer.out_dim();
        }
        Ok(PowerNet {
            power,
            input_dim,
            layers,
        })
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().unwrap().out_dim()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[AffineLayer] {
        &self.layers
    }

    /// Width of the k-th intermediate vector, `k = 0..=depth`.
    pub fn width(&self, k: usize) -> usize {
        if k == 0 {
            self.input_dim
        } else {
            self.layers[k - 1].out_dim()
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::InputShape {
                expected: self.input_dim,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("non-finite input".into()));
        }
        let mut cur = x.to_vec();
        let last = self.layers.len() - 1;
        for (k, layer) in self.layers.iter().enumerate() {
            let mut next = layer.apply(&cur);
            if k < last {
                for v in next.iter_mut() {
                    *v = repu(*v, self.power);
                }
            }
            if next.iter().any(|v| !v.is_finite()) {
                return Err(Error::Overflow { layer: k + 1 });
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Evaluates many points; points are independent, so the batch is run in
    /// parallel. Results (including which error surfaces on failure) do not
    /// depend on scheduling.
    pub fn evaluate_batch(&self, points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        use rayon::prelude::*;
        let results: Vec<Result<Vec<f64>>> =
            points.par_iter().map(|p| self.evaluate(p)).collect();
        results.into_iter().collect()
    }

    pub fn stats(&self) -> NetStats {
        let nodes = (0..self.layers.len() - 1)
            .map(|k| self.layers[k].out_dim())
            .sum();
        let nonzeros = self.layers.iter().map(|l| l.nonzeros()).sum();
        NetStats {
            depth: self.layers.len(),
            nodes,
            nonzeros,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&NetJson::from(self)).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: NetJson = serde_json::from_str(text)?;
        doc.into_net()
    }
}

/// Realization of function composition: `concat(g, f)(x) = g(f(x))`. The
/// junction stores the merged affine pair, so the result has depth
/// `L_f + L_g - 1`.
pub fn concat(outer: &PowerNet, inner: &PowerNet) -> Result<PowerNet> {
    if outer.power != inner.power {
        return Err(Error::PowerMismatch(inner.power, outer.power));
    }
    if outer.input_dim != inner.output_dim() {
        return Err(Error::Shape(format!(
            "outer expects input width {}, inner produces {}",
            outer.input_dim,
            inner.output_dim()
        )));
    }
    let inner_last = inner.layers.last().unwrap();
    let outer_first = &outer.layers[0];
    let weights = outer_first.weights.matmul(&inner_last.weights)?;
    let mut bias = outer_first.weights.matvec(&inner_last.bias);
    for (v, b) in bias.iter_mut().zip(&outer_first.bias) {
        *v += b;
    }
    let mut layers: Vec<AffineLayer> = Vec::with_capacity(inner.depth() + outer.depth() - 1);
    layers.extend_from_slice(&inner.layers[..inner.depth() - 1]);
    layers.push(AffineLayer::new(weights, bias)?);
    layers.extend_from_slice(&outer.layers[1..]);
    PowerNet::new(outer.power, inner.input_dim, layers)
}

/// Side-by-side composition over a shared input. The shorter first layer is
/// zero-padded on the right, interior layers are block-diagonal, and the
/// output stacks both component outputs.
pub fn parallel(a: &PowerNet, b: &PowerNet) -> Result<PowerNet> {
    if a.power != b.power {
        return Err(Error::PowerMismatch(a.power, b.power));
    }
    if a.depth() != b.depth() {
        return Err(Error::DepthMismatch(a.depth(), b.depth()));
    }
    let input_dim = a.input_dim.max(b.input_dim);
    let mut layers = Vec::with_capacity(a.depth());
    for k in 0..a.depth() {
        let (la, lb) = (&a.layers[k], &b.layers[k]);
        let layer = if k == 0 {
            stack_padded(la, lb, input_dim)?
        } else {
            block_diag(la, lb)?
        };
        layers.push(layer);
    }
    PowerNet::new(a.power, input_dim, layers)
}

/// Side-by-side composition over disjoint inputs: block-diagonal in every
/// layer including the first, so `evaluate([x; y]) = [a(x); b(y)]`.
pub fn tensor(a: &PowerNet, b: &PowerNet) -> Result<PowerNet> {
    if a.power != b.power {
        return Err(Error::PowerMismatch(a.power, b.power));
    }
    if a.depth() != b.depth() {
        return Err(Error::DepthMismatch(a.depth(), b.depth()));
    }
    let mut layers = Vec::with_capacity(a.depth());
    for k in 0..a.depth() {
        layers.push(block_diag(&a.layers[k], &b.layers[k])?);
    }
    PowerNet::new(a.power, a.input_dim + b.input_dim, layers)
}

/// Tensor product in which every subnet reads the same first input
/// coordinate. Each subnet expects `(z, private...)`; the result expects one
/// shared `z` followed by the concatenated private blocks.
pub fn shared_input_tensor(subnets: &[PowerNet]) -> Result<PowerNet> {
    let first = subnets
        .first()
        .ok_or_else(|| Error::Invalid("shared-input tensor of an empty list".into()))?;
    if subnets.len() == 1 {
        return Ok(first.clone());
    }
    for n in subnets {
        if n.power != first.power {
            return Err(Error::PowerMismatch(first.power, n.power));
        }
        if n.depth() != first.depth() {
            return Err(Error::DepthMismatch(first.depth(), n.depth()));
        }
    }
    let input_dim = 1 + subnets.iter().map(|n| n.input_dim - 1).sum::<usize>();
    let depth = first.depth();
    let mut layers = Vec::with_capacity(depth);
    for k in 0..depth {
        let rows: usize = subnets.iter().map(|n| n.layers[k].out_dim()).sum();
        let cols = if k == 0 {
            input_dim
        } else {
            subnets.iter().map(|n| n.layers[k].in_dim()).sum()
        };
        let mut w = Matrix::zeros(rows, cols);
        let mut bias = Vec::with_capacity(rows);
        let mut row0 = 0;
        let mut col0 = if k == 0 { 1 } else { 0 };
        for n in subnets {
            let l = &n.layers[k];
            for i in 0..l.out_dim() {
                for j in 0..l.in_dim() {
                    let v = l.weights.get(i, j);
                    if v == 0.0 {
                        continue;
                    }
                    if k == 0 {
                        if j == 0 {
                            w.set(row0 + i, 0, v);
                        } else {
                            w.set(row0 + i, col0 + j - 1, v);
                        }
                    } else {
                        w.set(row0 + i, col0 + j, v);
                    }
                }
            }
            bias.extend_from_slice(&l.bias);
            row0 += l.out_dim();
            col0 += if k == 0 { l.in_dim() - 1 } else { l.in_dim() };
        }
        layers.push(AffineLayer::new(w, bias)?);
    }
    PowerNet::new(first.power, input_dim, layers)
}

/// Depth-2 net with `2s` hidden nodes realizing `x -> x` exactly on all of R.
pub fn identity_net(s: u32) -> Result<PowerNet> {
    let mut stage = crate::stage::Stage::new(1, s)?;
    let c = stage.poly_row(0, &[0.0, 1.0])?;
    stage.push_output(&[c]);
    stage.into_net()
}

fn stack_padded(a: &AffineLayer, b: &AffineLayer, cols: usize) -> Result<AffineLayer> {
    let rows = a.out_dim() + b.out_dim();
    let mut w = Matrix::zeros(rows, cols);
    for (off, l) in [(0usize, a), (a.out_dim(), b)] {
        for i in 0..l.out_dim() {
            for j in 0..l.in_dim() {
                w.set(off + i, j, l.weights.get(i, j));
            }
        }
    }
    let mut bias = a.bias.clone();
    bias.extend_from_slice(&b.bias);
    AffineLayer::new(w, bias)
}

fn block_diag(a: &AffineLayer, b: &AffineLayer) -> Result<AffineLayer> {
    let mut w = Matrix::zeros(a.out_dim() + b.out_dim(), a.in_dim() + b.in_dim());
    for i in 0..a.out_dim() {
        for j in 0..a.in_dim() {
            w.set(i, j, a.weights.get(i, j));
        }
    }
    for i in 0..b.out_dim() {
        for j in 0..b.in_dim() {
            w.set(a.out_dim() + i, a.in_dim() + j, b.weights.get(i, j));
        }
    }
    let mut bias = a.bias.clone();
    bias.extend_from_slice(&b.bias);
    AffineLayer::new(w, bias)
}

#[derive(Serialize, Deserialize)]
struct LayerJson {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct NetJson {
    power: u32,
    input_dim: usize,
    layers: Vec<LayerJson>,
}

impl From<&PowerNet> for NetJson {
    fn from(net: &PowerNet) -> Self {
        NetJson {
            power: net.power,
            input_dim: net.input_dim,
            layers: net
                .layers
                .iter()
                .map(|l| LayerJson {
                    a: l.weights.to_rows(),
                    b: l.bias.clone(),
                })
                .collect(),
        }
    }
}

impl NetJson {
    fn into_net(self) -> Result<PowerNet> {
        let layers = self
            .layers
            .into_iter()
            .map(|l| AffineLayer::new(Matrix::from_rows(l.a)?, l.b))
            .collect::<Result<Vec<_>>>()?;
        PowerNet::new(self.power, self.input_dim, layers)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::power_s_net;

    fn eval1(net: &PowerNet, x: f64) -> f64 {
        net.evaluate(&[x]).unwrap()[0]
    }

    #[test]
    fn square_net_at_three() {
        let net = power_s_net(2).unwrap();
        assert_eq!(eval1(&net, 3.0), 9.0);
        // negative side goes through the mirrored unit
        assert_eq!(eval1(&net, -3.0), 9.0);
    }

    #[test]
    fn identity_net_examples() {
        let id = identity_net(2).unwrap();
        assert!((eval1(&id, 0.5) - 0.5).abs() < 1e-14);
        assert!((eval1(&id, 2.0) - 2.0).abs() < 1e-14);
        assert_eq!(eval1(&id, 0.0), 0.0);
        let id3 = identity_net(3).unwrap();
        assert!((eval1(&id3, -0.7) + 0.7).abs() < 1e-13);
    }

    #[test]
    fn stats_counts() {
        let sq = power_s_net(2).unwrap();
        let st = sq.stats();
        assert_eq!(st.depth, 2);
        assert_eq!(st.nodes, 2);
        assert_eq!(st.nonzeros, 4);

        let id = identity_net(2).unwrap();
        assert_eq!(id.stats().depth, 2);
        assert_eq!(id.stats().nodes, 4);
    }

    #[test]
    fn concat_composes() {
        let sq = power_s_net(2).unwrap();
        let quad = concat(&sq, &sq).unwrap();
        assert_eq!(quad.depth(), 3);
        assert_eq!(eval1(&quad, 2.0), 16.0);

        let cube = power_s_net(3).unwrap();
        let id3 = identity_net(3).unwrap();
        let c = concat(&id3, &cube).unwrap();
        assert!((eval1(&c, 1.1) - 1.331).abs() < 1e-12);
    }

    #[test]
    fn concat_rejects_power_mismatch() {
        let a = power_s_net(2).unwrap();
        let b = power_s_net(3).unwrap();
        assert!(matches!(concat(&a, &b), Err(Error::PowerMismatch(_, _))));
    }

    #[test]
    fn parallel_stacks_outputs() {
        let sq = power_s_net(2).unwrap();
        let id = identity_net(2).unwrap();
        let p = parallel(&sq, &id).unwrap();
        let out = p.evaluate(&[3.0]).unwrap();
        assert!((out[0] - 9.0).abs() < 1e-12);
        assert!((out[1] - 3.0).abs() < 1e-12);
        assert_eq!(p.stats().nodes, 2 + 4);
        assert_eq!(
            p.stats().nonzeros,
            sq.stats().nonzeros + id.stats().nonzeros
        );

        let dup = parallel(&id, &id).unwrap();
        let out = dup.evaluate(&[1.0]).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-14);
        assert!((out[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn tensor_is_independent() {
        let sq = power_s_net(2).unwrap();
        let t = tensor(&sq, &sq).unwrap();
        let out = t.evaluate(&[2.0, 3.0]).unwrap();
        assert_eq!(out, vec![4.0, 9.0]);
        for k in 0..t.depth() {
            assert_eq!(t.layers()[k].out_dim(), 2 * sq.layers()[k].out_dim());
        }

        let id = identity_net(2).unwrap();
        let t = tensor(&id, &id).unwrap();
        let out = t.evaluate(&[1.0, -1.0]).unwrap();
        assert!((out[0] - 1.0).abs() < 1e-14);
        assert!((out[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn shared_input_tensor_shares_first_coordinate() {
        let prod = crate::bivariate::xny_net(1, 2).unwrap(); // (z, y) -> z*y
        let two = shared_input_tensor(&[prod.clone(), prod.clone()]).unwrap();
        assert_eq!(two.input_dim(), 3);
        let out = two.evaluate(&[2.0, 3.0, 5.0]).unwrap();
        assert!((out[0] - 6.0).abs() < 1e-12);
        assert!((out[1] - 10.0).abs() < 1e-12);

        let one = shared_input_tensor(std::slice::from_ref(&prod)).unwrap();
        assert_eq!(one, prod);
    }

    #[test]
    fn evaluate_checks_shapes_and_overflow() {
        let sq = power_s_net(2).unwrap();
        assert!(matches!(
            sq.evaluate(&[1.0, 2.0]),
            Err(Error::InputShape { .. })
        ));
        // repeated squaring overflows quickly
        let mut net = power_s_net(2).unwrap();
        for _ in 0..12 {
            net = concat(&power_s_net(2).unwrap(), &net).unwrap();
        }
        assert!(matches!(
            net.evaluate(&[10.0]),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn batch_matches_single() {
        let sq = power_s_net(2).unwrap();
        let pts: Vec<Vec<f64>> = (0..100).map(|i| vec![i as f64 / 7.0 - 5.0]).collect();
        let batch = sq.evaluate_batch(&pts).unwrap();
        for (p, out) in pts.iter().zip(&batch) {
            assert_eq!(out, &sq.evaluate(p).unwrap());
        }
    }

    #[test]
    fn json_round_trip_is_fixed_point() {
        let net = crate::monomial::monomial_net(7, 2).unwrap();
        let text = net.to_json();
        let back = PowerNet::from_json(&text).unwrap();
        assert_eq!(net, back);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn serialized_square_net_has_two_layers() {
        let net = power_s_net(2).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&net.to_json()).unwrap();
        assert_eq!(doc["layers"].as_array().unwrap().len(), 2);
        assert_eq!(doc["power"], 2);
    }

    #[test]
    fn deserialize_rejects_mismatched_dims() {
        let text = r#"{"power":2,"input_dim":1,
            "layers":[{"A":[[1.0],[-1.0]],"b":[0.0,0.0]},
                      {"A":[[1.0,1.0,1.0]],"b":[0.0]}]}"#;
        assert!(PowerNet::from_json(text).is_err());
        let bad_bias = r#"{"power":2,"input_dim":1,
            "layers":[{"A":[[1.0],[-1.0]],"b":[0.0]}]}"#;
        assert!(PowerNet::from_json(bad_bias).is_err());
        let bad_power = r#"{"power":1,"input_dim":1,"layers":[{"A":[[1.0]],"b":[0.0]}]}"#;
        assert!(matches!(
            PowerNet::from_json(bad_power),
            Err(Error::BadPower(1))
        ));
    }

    #[test]
    fn parse_error_reports_location() {
        let err = PowerNet::from_json("{not json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line") || msg.contains("column"), "{msg}");
    }
}
