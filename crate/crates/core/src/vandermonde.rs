//! Node schemes and the bordered Vandermonde solve that produces the
//! combination coefficients expressing low-degree monomials through shifted
//! s-th powers, plus the l-infinity condition number used to compare node
//! choices.

use crate::error::{Error, Result};

/// Choice of the shift points `b_1..b_s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeScheme {
    Chebyshev,
    Equidistant,
    /// Numerically computed optimal symmetric nodes; tabulated for
    /// `2 <= s <= 6` only.
    OptimalSymmetric,
}

impl NodeScheme {
    pub fn name(&self) -> &'static str {
        match self {
            NodeScheme::Chebyshev => "chebyshev",
            NodeScheme::Equidistant => "equidistant",
            NodeScheme::OptimalSymmetric => "optimal",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "chebyshev" | "cheb" => Ok(NodeScheme::Chebyshev),
            "equidistant" | "equi" => Ok(NodeScheme::Equidistant),
            "optimal" | "optimalsymmetric" => Ok(NodeScheme::OptimalSymmetric),
            other => Err(Error::Unsupported(format!("unknown node scheme '{other}'"))),
        }
    }
}

/// Optimal symmetric nodes for s = 2..=6; larger s fall back to Chebyshev
/// because the optimization is not reliable there.
const OPTIMAL_NODES: [&[f64]; 5] = [
    &[1.0, -1.0],
    &[1.224744871391589, 0.0, -1.224744871391589], // sqrt(3/2)
    &[1.2228992744, 0.5552395908, -0.5552395908, -1.2228992744],
    &[1.2001030479, 0.8077421768, 0.0, -0.8077421768, -1.2001030479],
    &[
        1.1601101028,
        0.9771502216,
        0.3788765912,
        -0.3788765912,
        -0.9771502216,
        -1.1601101028,
    ],
];

/// Returns the `s` shift points for the requested scheme, ordered as
/// tabulated (descending from +1-ish to -1-ish).
pub fn make_nodes(scheme: NodeScheme, s: u32) -> Result<Vec<f64>> {
    if s < 2 {
        return Err(Error::Unsupported(format!(
            "node schemes are defined for s >= 2, got {s}"
        )));
    }
    let s = s as usize;
    match scheme {
        NodeScheme::Chebyshev => Ok((1..=s)
            .map(|k| (((k - 1) as f64) / ((s - 1) as f64) * std::f64::consts::PI).cos())
            .collect()),
        NodeScheme::Equidistant => Ok((1..=s)
            .map(|k| 1.0 - 2.0 * ((k - 1) as f64) / ((s - 1) as f64))
            .collect()),
        NodeScheme::OptimalSymmetric => {
            if s > 6 {
                return Err(Error::Unsupported(format!(
                    "optimal symmetric nodes are tabulated only for s <= 6, got {s}"
                )));
            }
            Ok(OPTIMAL_NODES[s - 2].to_vec())
        }
    }
}

/// Scheme used by all network builders: optimal symmetric nodes while they
/// are tabulated, Chebyshev nodes beyond that.
pub fn default_nodes(s: u32) -> Vec<f64> {
    let scheme = if s <= 6 {
        NodeScheme::OptimalSymmetric
    } else {
        NodeScheme::Chebyshev
    };
    make_nodes(scheme, s).expect("default scheme is always valid")
}

/// Solved combination coefficients: `lambda = (l_1..l_s, l_0)` such that
/// `l_0 + sum_k l_k * rho_s(x + b_k)` reproduces the polynomial with
/// coefficient vector `target = (d_s, ..., d_0)`.
#[derive(Clone, Debug)]
pub struct LambdaCoeffs {
    pub lambda: Vec<f64>,
    pub nodes: Vec<f64>,
    pub target: Vec<f64>,
}

impl LambdaCoeffs {
    /// Evaluates `l_0 + sum_k l_k rho_s(x + b_k)` with `rho_s(t) = t^s`
    /// written through the two-sided power pair, mirroring how a network
    /// layer realizes it.
    pub fn reconstruct(&self, x: f64) -> f64 {
        let s = self.nodes.len() as u32;
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        let mut acc = self.lambda[self.nodes.len()];
        for (lk, bk) in self.lambda.iter().zip(&self.nodes) {
            let t = x + bk;
            acc += lk * (crate::netcore::repu(t, s) + sign * crate::netcore::repu(-t, s));
        }
        acc
    }
}

/// Solves the bordered Vandermonde system for the combination coefficients.
///
/// `d` is ordered `(d_s, ..., d_1, d_0)`; `nodes` are the `s` pairwise
/// distinct shifts. The top block solves `sum_k l_k b_k^(s-j) = d_j / C(s,j)`
/// for `j = s..1`, and `l_0` is backed out from the `d_0` row.
pub fn solve_lambda(d: &[f64], nodes: &[f64]) -> Result<LambdaCoeffs> {
    let s = nodes.len();
    if s == 0 {
        return Err(Error::Shape("need at least one node".into()));
    }
    if d.len() != s + 1 {
        return Err(Error::Shape(format!(
            "coefficient vector must have length {} for {} nodes, got {}",
            s + 1,
            s,
            d.len()
        )));
    }
    let v = vandermonde_matrix(nodes);
    // rhs_i = d_{i+1} / C(s, i+1) matching row i of V (power s-1-i).
    let mut rhs = vec![0.0; s];
    for (i, r) in rhs.iter_mut().enumerate() {
        let j = i + 1;
        *r = d[s - j] / binomial(s, j);
    }
    let lam = solve_dense(v, rhs)?;
    let mut l0 = d[s];
    for (lk, bk) in lam.iter().zip(nodes) {
        l0 -= lk * bk.powi(s as i32);
    }
    let mut lambda = lam;
    lambda.push(l0);
    Ok(LambdaCoeffs {
        lambda,
        nodes: nodes.to_vec(),
        target: d.to_vec(),
    })
}

/// Condition-number sweep in CSV form: header `s,scheme,cond_inf`, one row
/// per (s, scheme) with s running 2..=max_s.
pub fn cond_sweep_csv(schemes: &[NodeScheme], max_s: u32) -> Result<String> {
    if max_s < 2 {
        return Err(Error::Invalid("sweep needs max_s >= 2".into()));
    }
    let mut out = String::from("s,scheme,cond_inf\n");
    for s in 2..=max_s {
        for scheme in schemes {
            if *scheme == NodeScheme::OptimalSymmetric && s > 6 {
                continue;
            }
            let kappa = cond_inf(&make_nodes(*scheme, s)?)?;
            out.push_str(&format!("{},{},{}\n", s, scheme.name(), kappa));
        }
    }
    Ok(out)
}

/// `||V||_inf * ||V^-1||_inf` for the Vandermonde matrix of the given nodes.
pub fn cond_inf(nodes: &[f64]) -> Result<f64> {
    let s = nodes.len();
    if s == 0 {
        return Err(Error::Shape("need at least one node".into()));
    }
    if s == 1 {
        return Ok(1.0);
    }
    let v = vandermonde_matrix(nodes);
    let norm_v = inf_norm(&v);
    let inv = invert_dense(v)?;
    Ok(norm_v * inf_norm(&inv))
}

/// Row `i` holds `b_k^(s-1-i)`, so the first row carries the highest power
/// and the last row is all ones.
fn vandermonde_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let s = nodes.len();
    (0..s)
        .map(|i| {
            nodes
                .iter()
                .map(|b| b.powi((s - 1 - i) as i32))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn inf_norm(m: &[Vec<f64>]) -> f64 {
    m.iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * ((n - i) as f64) / ((i + 1) as f64);
    }
    acc.round()
}

/// Gaussian elimination with column pivoting. Column swaps permute the
/// unknowns, which is undone at the end.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = a.len();
    let scale: f64 = a
        .iter()
        .flat_map(|r| r.iter().map(|v| v.abs()))
        .fold(0.0, f64::max);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[k][i].abs().partial_cmp(&a[k][j].abs()).unwrap())
            .unwrap();
        if a[k][piv].abs() <= scale * 1e-14 {
            return Err(Error::Singular(
                "Vandermonde system is singular to working precision (duplicate nodes?)".into(),
            ));
        }
        if piv != k {
            perm.swap(k, piv);
            for row in a.iter_mut() {
                row.swap(k, piv);
            }
        }
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f == 0.0 {
                continue;
            }
            a[i][k] = 0.0;
            for j in k + 1..n {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    let mut y = vec![0.0; n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in k + 1..n {
            acc -= a[k][j] * y[j];
        }
        y[k] = acc / a[k][k];
    }
    let mut x = vec![0.0; n];
    for k in 0..n {
        x[perm[k]] = y[k];
    }
    Ok(x)
}

fn invert_dense(a: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve_dense(a.clone(), e)?);
    }
    // cols[j] is the j-th column of the inverse
    Ok((0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect())
}
