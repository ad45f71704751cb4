//! Legendre projection front-end.
//!
//! Smooth functions are projected onto polynomial spaces (1D Legendre
//! truncation, or a hyperbolic-cross space in 2-3 dimensions), the projection
//! is converted to monomial coefficients, and the result is compiled into a
//! network. Compilation is exact, so the measured network error tracks the
//! projection error and the classical convergence rates become testable.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multipoly::{hyperbolic_set, MultiIndex, MultiPoly};
use crate::netcore::PowerNet;
use crate::poly1d::{optimal_poly_net, PolyCoeffs};

/// Hard cap on basis conversion; beyond roughly degree 30 the
/// Legendre-to-monomial change of basis loses digits to cancellation, and
/// past 64 it is not meaningful in doubles.
pub const CONVERSION_CAP: usize = 64;
/// Degree above which conversion results should be treated with caution.
pub const CONVERSION_ADVISORY: usize = 30;

/// Gauss-Legendre nodes and weights on (-1, 1).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        crate::oracle::compensated_sum(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(x, w)| w * f(*x)),
        )
    }
}

/// Value and derivative of the Legendre polynomial of the given degree.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut pm = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * pm) / kf;
        pm = p;
        p = next;
    }
    let d = (n as f64) * (x * p - pm) / (x * x - 1.0);
    (p, d)
}

/// Values P_0(x) .. P_n(x).
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n == 0 {
        return out;
    }
    out.push(x);
    for k in 2..=n {
        let kf = k as f64;
        let v = ((2.0 * kf - 1.0) * x * out[k - 1] - (kf - 1.0) * out[k - 2]) / kf;
        out.push(v);
    }
    out
}

/// Gauss-Legendre rule with `nq` points: roots of P_nq by safeguarded Newton
/// iteration from Chebyshev-type initial guesses, weights
/// `2 / ((1 - x^2) P'(x)^2)`. The rule is symmetrized exactly.
pub fn gauss_legendre(nq: usize) -> Result<QuadratureRule> {
    if nq == 0 {
        return Err(Error::Invalid("quadrature needs at least one point".into()));
    }
    let mut nodes = vec![0.0; nq];
    let mut weights = vec![0.0; nq];
    let half = nq / 2;
    let angle = |t: f64| (std::f64::consts::PI * t / (nq as f64 + 0.5)).cos();
    for i in 0..half {
        // i-th positive-side root, counted inward from +1; the Chebyshev
        // angles on either side bracket it
        let mut x = angle(i as f64 + 0.75);
        let mut lo = angle(i as f64 + 1.25);
        let mut hi = if i == 0 { 1.0 } else { angle(i as f64 + 0.25) };
        // sign of P_nq just above this root alternates with i
        let sign_above = if i % 2 == 0 { 1.0 } else { -1.0 };
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_with_deriv(nq, x);
            if p == 0.0 {
                converged = true;
                break;
            }
            if p * sign_above > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - p / dp;
            if next <= lo || next >= hi {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-15 * x.abs().max(1e-3) {
                x = next;
                converged = true;
                break;
            }
            x = next;
        }
        if !converged {
            let (p, _) = legendre_with_deriv(nq, x);
            if p.abs() > 1e-12 {
                return Err(Error::Numerical(format!(
                    "Legendre root iteration did not converge for nq={nq}"
                )));
            }
        }
        let (_, dp) = legendre_with_deriv(nq, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[nq - 1 - i] = x;
        nodes[i] = -x;
        weights[nq - 1 - i] = w;
        weights[i] = w;
    }
    if nq % 2 == 1 {
        let (_, dp) = legendre_with_deriv(nq, 0.0);
        nodes[half] = 0.0;
        weights[half] = 2.0 / (dp * dp);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Legendre coefficients `c_0..c_N` in the standard (non-normalized) basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LegendreExpansion {
    pub coeffs: Vec<f64>,
}

impl LegendreExpansion {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let p = legendre_all(self.degree(), x);
        crate::oracle::compensated_sum(self.coeffs.iter().zip(&p).map(|(c, v)| c * v))
    }
}

/// L2 projection onto degree `n`: `c_k = (2k+1)/2 * sum_i w_i f(x_i) P_k(x_i)`.
/// Requires `nq >= n + 1`; the result is exact for polynomial integrands the
/// rule resolves.
pub fn project_legendre(f: impl Fn(f64) -> f64, n: usize, nq: usize) -> Result<LegendreExpansion> {
    if nq < n + 1 {
        return Err(Error::Invalid(format!(
            "projection to degree {n} needs at least {} quadrature points, got {nq}",
            n + 1
        )));
    }
    let rule = gauss_legendre(nq)?;
    let fx: Vec<f64> = rule.nodes.iter().map(|x| f(*x)).collect();
    let mut coeffs = Vec::with_capacity(n + 1);
    let tables: Vec<Vec<f64>> = rule.nodes.iter().map(|x| legendre_all(n, *x)).collect();
    for k in 0..=n {
        let integral = crate::oracle::compensated_sum(
            (0..nq).map(|i| rule.weights[i] * fx[i] * tables[i][k]),
        );
        coeffs.push((2.0 * k as f64 + 1.0) / 2.0 * integral);
    }
    Ok(LegendreExpansion { coeffs })
}

/// Monomial coefficient rows of P_0..P_n from the three-term recurrence.
fn legendre_monomial_rows(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    rows.push(vec![1.0]);
    if n == 0 {
        return rows;
    }
    rows.push(vec![0.0, 1.0]);
    for k in 1..n {
        let kf = k as f64;
        let mut next = vec![0.0; k + 2];
        for (j, v) in rows[k].iter().enumerate() {
            next[j + 1] += (2.0 * kf + 1.0) * v;
        }
        for (j, v) in rows[k - 1].iter().enumerate() {
            next[j] -= kf * v;
        }
        for v in next.iter_mut() {
            *v /= kf + 1.0;
        }
        rows.push(next);
    }
    rows
}

/// Exact triangular change of basis to monomial coefficients. Capped at
/// degree 64; accuracy degrades noticeably past degree 30.
pub fn legendre_to_monomial(e: &LegendreExpansion) -> Result<PolyCoeffs> {
    let n = e.degree();
    if n > CONVERSION_CAP {
        return Err(Error::Unsupported(format!(
            "basis conversion is capped at degree {CONVERSION_CAP}, got {n}"
        )));
    }
    let rows = legendre_monomial_rows(n);
    let mut a = vec![0.0; n + 1];
    for (k, c) in e.coeffs.iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        for (j, v) in rows[k].iter().enumerate() {
            a[j] += c * v;
        }
    }
    PolyCoeffs::new(a)
}

/// Empirical error of a network against a reference function on a sampling
/// grid. `l2_error` is the root mean square over the grid.
#[derive(Clone, Copy, Debug)]
pub struct ErrorReport {
    pub l2_error: f64,
    pub linf_error: f64,
    pub n_samples: usize,
    pub degree: usize,
}

fn report_1d(f: &dyn Fn(f64) -> f64, net: &PowerNet, degree: usize) -> Result<ErrorReport> {
    const SAMPLES: usize = 2048;
    let mut sq = 0.0;
    let mut linf: f64 = 0.0;
    for i in 0..SAMPLES {
        let x = -1.0 + 2.0 * (i as f64) / ((SAMPLES - 1) as f64);
        let diff = net.evaluate(&[x])?[0] - f(x);
        sq += diff * diff;
        linf = linf.max(diff.abs());
    }
    Ok(ErrorReport {
        l2_error: (sq / SAMPLES as f64).sqrt(),
        linf_error: linf,
        n_samples: SAMPLES,
        degree,
    })
}

/// Deterministic quasi-random points in [-1, 1]^d (Halton, bases 2/3/5).
pub fn halton_points(count: usize, d: usize) -> Vec<Vec<f64>> {
    const BASES: [u64; 3] = [2, 3, 5];
    let radical = |mut i: u64, base: u64| -> f64 {
        let mut f = 1.0;
        let mut r = 0.0;
        while i > 0 {
            f /= base as f64;
            r += f * (i % base) as f64;
            i /= base;
        }
        r
    };
    (0..count)
        .map(|i| {
            (0..d)
                .map(|dim| 2.0 * radical(i as u64 + 1, BASES[dim]) - 1.0)
                .collect()
        })
        .collect()
}

fn report_md(f: &dyn Fn(&[f64]) -> f64, net: &PowerNet, degree: usize) -> Result<ErrorReport> {
    const SAMPLES: usize = 4096;
    let pts = halton_points(SAMPLES, net.input_dim());
    let mut sq = 0.0;
    let mut linf: f64 = 0.0;
    for p in &pts {
        let diff = net.evaluate(p)?[0] - f(p);
        sq += diff * diff;
        linf = linf.max(diff.abs());
    }
    Ok(ErrorReport {
        l2_error: (sq / SAMPLES as f64).sqrt(),
        linf_error: linf,
        n_samples: SAMPLES,
        degree,
    })
}

/// Project to degree `n`, convert to monomial form, compile. The returned
/// report measures the net against `f` on 2048 equispaced points.
pub fn approximate_net_1d(
    f: impl Fn(f64) -> f64,
    n: usize,
    s: u32,
) -> Result<(PowerNet, ErrorReport)> {
    let nq = (2 * n).max(n + 1).max(1);
    let expansion = project_legendre(&f, n, nq)?;
    let coeffs = legendre_to_monomial(&expansion)?;
    let net = optimal_poly_net(&coeffs, s)?;
    let report = report_1d(&f, &net, n)?;
    Ok((net, report))
}

/// Hyperbolic-cross Legendre projection in `d in {2, 3}` dimensions,
/// returned as a monomial-basis polynomial over the same (complete) index
/// set. `nq` quadrature points are used per dimension.
pub fn project_hyperbolic(
    f: impl Fn(&[f64]) -> f64,
    n: u32,
    d: usize,
    nq: usize,
) -> Result<MultiPoly> {
    if !(2..=3).contains(&d) {
        return Err(Error::Unsupported(format!(
            "hyperbolic projection is implemented for d in 2..=3, got {d}"
        )));
    }
    if n > 32 {
        return Err(Error::Unsupported(format!(
            "hyperbolic projection is capped at N = 32, got {n}"
        )));
    }
    if nq < n as usize + 1 {
        return Err(Error::Invalid(format!(
            "projection to degree {n} needs at least {} points per dimension",
            n + 1
        )));
    }
    let rule = gauss_legendre(nq)?;
    let table: Vec<Vec<f64>> = rule
        .nodes
        .iter()
        .map(|x| legendre_all(n as usize, *x))
        .collect();
    // tensor grid of f-values
    let mut grid_idx = vec![0usize; d];
    let mut fvals: Vec<f64> = Vec::with_capacity(nq.pow(d as u32));
    loop {
        let x: Vec<f64> = grid_idx.iter().map(|i| rule.nodes[*i]).collect();
        fvals.push(f(&x));
        let mut dim = 0;
        loop {
            if dim == d {
                break;
            }
            grid_idx[dim] += 1;
            if grid_idx[dim] < nq {
                break;
            }
            grid_idx[dim] = 0;
            dim += 1;
        }
        if grid_idx.iter().all(|i| *i == 0) {
            break;
        }
    }
    let set = hyperbolic_set(n, d);
    let mut legendre_terms: Vec<(MultiIndex, f64)> = Vec::with_capacity(set.len());
    for k in set.iter() {
        let mut norm = 1.0;
        for ki in &k.0 {
            norm *= (2.0 * *ki as f64 + 1.0) / 2.0;
        }
        let mut flat = 0usize;
        let mut idx = vec![0usize; d];
        let mut acc = Vec::with_capacity(fvals.len());
        loop {
            let mut wp = 1.0;
            for (dim, i) in idx.iter().enumerate() {
                wp *= rule.weights[*i] * table[*i][k.0[dim] as usize];
            }
            acc.push(wp * fvals[flat]);
            flat += 1;
            let mut dim = 0;
            loop {
                if dim == d {
                    break;
                }
                idx[dim] += 1;
                if idx[dim] < nq {
                    break;
                }
                idx[dim] = 0;
                dim += 1;
            }
            if idx.iter().all(|i| *i == 0) {
                break;
            }
        }
        legendre_terms.push((k.clone(), norm * crate::oracle::compensated_sum(acc)));
    }
    // expand each Legendre product into monomials
    let rows = legendre_monomial_rows(n as usize);
    let mut terms: BTreeMap<MultiIndex, f64> = BTreeMap::new();
    for (k, c) in &legendre_terms {
        if *c == 0.0 {
            continue;
        }
        let mut expo = vec![0usize; d];
        expand_product(&rows, k, *c, 0, &mut expo, 1.0, &mut terms);
    }
    MultiPoly::new(set, terms)
}

fn expand_product(
    rows: &[Vec<f64>],
    k: &MultiIndex,
    c: f64,
    dim: usize,
    expo: &mut Vec<usize>,
    factor: f64,
    out: &mut BTreeMap<MultiIndex, f64>,
) {
    if dim == k.0.len() {
        let idx = MultiIndex(expo.iter().map(|e| *e as u32).collect());
        *out.entry(idx).or_insert(0.0) += c * factor;
        return;
    }
    for (j, v) in rows[k.0[dim] as usize].iter().enumerate() {
        if *v == 0.0 {
            continue;
        }
        expo[dim] = j;
        expand_product(rows, k, c, dim + 1, expo, factor * v, out);
    }
    expo[dim] = 0;
}

/// Hyperbolic projection compiled through the multivariate builder; the
/// report samples 4096 quasi-random points in [-1, 1]^d.
pub fn approximate_net_md(
    f: impl Fn(&[f64]) -> f64,
    n: u32,
    d: usize,
    s: u32,
) -> Result<(PowerNet, ErrorReport)> {
    let nq = (2 * n as usize).max(n as usize + 1);
    let poly = project_hyperbolic(&f, n, d, nq)?;
    let net = crate::multipoly::mpoly_net(&poly, s)?;
    let report = report_md(&f, &net, n as usize)?;
    Ok((net, report))
}

/// One row of a convergence sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow {
    pub degree: usize,
    pub l2: f64,
    pub linf: f64,
}

/// Model selected by the sweep fit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateFit {
    /// log error vs N is the better straight line: `error ~ exp(slope * N)`.
    Exponential { slope: f64, r2: f64 },
    /// log error vs log N is the better straight line: `error ~ N^slope`.
    Algebraic { slope: f64, r2: f64 },
    /// All measured errors sit at the roundoff floor.
    Exact,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub exponential: Option<(f64, f64)>, // (slope, r2) of ln(l2) vs N
    pub algebraic: Option<(f64, f64)>,   // (slope, r2) of ln(l2) vs ln N
    pub preferred: RateFit,
}

/// Errors at or below this are treated as exactly-represented (roundoff
/// floor) and excluded from rate fits.
pub const FLOOR: f64 = 1e-14;

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}

/// Runs the 1D (or hyperbolic, for d > 1) pipeline over increasing degrees
/// and fits both decay models to the measured discrete-L2 errors (natural
/// logarithms). Rows at the roundoff floor are excluded from the fits.
pub fn convergence_sweep(
    f: impl Fn(&[f64]) -> f64,
    degrees: &[usize],
    s: u32,
    d: usize,
) -> Result<SweepResult> {
    if degrees.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("degrees must be strictly increasing".into()));
    }
    let mut rows = Vec::with_capacity(degrees.len());
    for n in degrees {
        let report = if d == 1 {
            approximate_net_1d(|x| f(&[x]), *n, s)?.1
        } else {
            approximate_net_md(&f, *n as u32, d, s)?.1
        };
        rows.push(SweepRow {
            degree: *n,
            l2: report.l2_error,
            linf: report.linf_error,
        });
    }
    let live: Vec<&SweepRow> = rows.iter().filter(|r| r.l2 > FLOOR).collect();
    if live.len() < 2 {
        return Ok(SweepResult {
            rows,
            exponential: None,
            algebraic: None,
            preferred: RateFit::Exact,
        });
    }
    let ns: Vec<f64> = live.iter().map(|r| r.degree as f64).collect();
    let lnn: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let lne: Vec<f64> = live.iter().map(|r| r.l2.ln()).collect();
    let exp_fit = linear_fit(&ns, &lne);
    let alg_fit = linear_fit(&lnn, &lne);
    let preferred = if exp_fit.1 >= alg_fit.1 {
        RateFit::Exponential {
            slope: exp_fit.0,
            r2: exp_fit.1,
        }
    } else {
        RateFit::Algebraic {
            slope: alg_fit.0,
            r2: alg_fit.1,
        }
    };
    Ok(SweepResult {
        rows,
        exponential: Some(exp_fit),
        algebraic: Some(alg_fit),
        preferred,
    })
}

/// Built-in reference functions for the command-line tools. The sum forms
/// make every name meaningful for any dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestFunction {
    /// exp(x_1 + ... + x_d)
    Exp,
    /// sin(3 (x_1 + ... + x_d))
    Sin3,
    /// 1 / (1 + 25 |x|^2)
    Runge,
    /// |x_1 + ... + x_d|^3
    AbsCubed,
    /// 1 / (2 + (x_1 + ... + x_d) / d)
    InvShifted,
    /// exp(x_1 * ... * x_d)
    ExpProduct,
    /// x_1^2 + ... + x_d^2
    SumSquares,
}

impl TestFunction {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "exp" => Ok(TestFunction::Exp),
            "sin3" => Ok(TestFunction::Sin3),
            "runge" => Ok(TestFunction::Runge),
            "absx3" => Ok(TestFunction::AbsCubed),
            "inv2px" => Ok(TestFunction::InvShifted),
            "expxy" => Ok(TestFunction::ExpProduct),
            "sumsq" => Ok(TestFunction::SumSquares),
            other => Err(Error::Unsupported(format!(
                "unknown function '{other}' (try exp, sin3, runge, absx3, inv2px, expxy, sumsq)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFunction::Exp => "exp",
            TestFunction::Sin3 => "sin3",
            TestFunction::Runge => "runge",
            TestFunction::AbsCubed => "absx3",
            TestFunction::InvShifted => "inv2px",
            TestFunction::ExpProduct => "expxy",
            TestFunction::SumSquares => "sumsq",
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let sum: f64 = x.iter().sum();
        match self {
            TestFunction::Exp => sum.exp(),
            TestFunction::Sin3 => (3.0 * sum).sin(),
            TestFunction::Runge => 1.0 / (1.0 + 25.0 * x.iter().map(|v| v * v).sum::<f64>()),
            TestFunction::AbsCubed => sum.abs().powi(3),
            TestFunction::InvShifted => 1.0 / (2.0 + sum / x.len() as f64),
            TestFunction::ExpProduct => x.iter().product::<f64>().exp(),
            TestFunction::SumSquares => x.iter().map(|v| v * v).sum(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_examples() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert_eq!(r.weights, vec![2.0]);

        let r = gauss_legendre(2).unwrap();
        assert!((r.nodes[1] - 0.5773502691896257).abs() < 1e-15);
        assert!((r.nodes[0] + 0.5773502691896257).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-14);
        assert!((r.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-14);

        let r = gauss_legendre(5).unwrap();
        assert!((r.integrate(|x| x.powi(8)) - 2.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn quadrature_invariants() {
        for nq in 1..=48usize {
            let r = gauss_legendre(nq).unwrap();
            let total: f64 = r.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "nq={nq}");
            assert!(r.weights.iter().all(|w| *w > 0.0));
            for i in 1..nq {
                assert!(r.nodes[i] > r.nodes[i - 1]);
            }
            for i in 0..nq {
                assert!((r.nodes[i] + r.nodes[nq - 1 - i]).abs() < 1e-13);
            }
            // exactness up to degree 2 nq - 1
            for k in (0..=(2 * nq - 1).min(40)).step_by(2) {
                let want = 2.0 / (k as f64 + 1.0);
                let got = r.integrate(|x| x.powi(k as i32));
                assert!((got - want).abs() < 1e-12, "nq={nq} k={k}");
            }
        }
    }

    #[test]
    fn projection_examples() {
        let e = project_legendre(|x| x * x, 2, 4).unwrap();
        assert!((e.coeffs[0] - 1.0 / 3.0).abs() < 1e-14);
        assert!(e.coeffs[1].abs() < 1e-14);
        assert!((e.coeffs[2] - 2.0 / 3.0).abs() < 1e-14);

        let e = project_legendre(|x| legendre_all(3, x)[3], 3, 8).unwrap();
        for (k, c) in e.coeffs.iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((c - want).abs() < 1e-13);
        }

        let e = project_legendre(|_| 1.0, 4, 6).unwrap();
        assert!((e.coeffs[0] - 1.0).abs() < 1e-14);
        assert!(e.coeffs[1..].iter().all(|c| c.abs() < 1e-14));

        assert!(project_legendre(|x| x, 4, 3).is_err());
    }

    #[test]
    fn projection_is_idempotent() {
        let e = project_legendre(|x: f64| x.exp(), 10, 24).unwrap();
        let again = project_legendre(|x| e.eval(x), 10, 24).unwrap();
        for (a, b) in e.coeffs.iter().zip(&again.coeffs) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn conversion_examples() {
        let a = legendre_to_monomial(&LegendreExpansion {
            coeffs: vec![1.0 / 3.0, 0.0, 2.0 / 3.0],
        })
        .unwrap();
        assert!(a.coeffs()[0].abs() < 1e-15);
        assert!(a.coeffs()[1].abs() < 1e-15);
        assert!((a.coeffs()[2] - 1.0).abs() < 1e-15);

        let a = legendre_to_monomial(&LegendreExpansion { coeffs: vec![1.0] }).unwrap();
        assert_eq!(a.coeffs(), &[1.0]);
        let a = legendre_to_monomial(&LegendreExpansion {
            coeffs: vec![0.0, 1.0],
        })
        .unwrap();
        assert_eq!(a.coeffs(), &[0.0, 1.0]);

        let too_big = LegendreExpansion {
            coeffs: vec![0.0; 66],
        };
        assert!(matches!(
            legendre_to_monomial(&too_big),
            Err(Error::Unsupported(_))
        ));
    }

    /// Inverse change of basis by triangular back-substitution; test-side
    /// oracle for the round trip.
    fn monomial_to_legendre(a: &[f64]) -> Vec<f64> {
        let n = a.len() - 1;
        let rows = legendre_monomial_rows(n);
        let mut rest = a.to_vec();
        let mut c = vec![0.0; n + 1];
        for k in (0..=n).rev() {
            let lead = rows[k][k];
            c[k] = rest[k] / lead;
            for (j, v) in rows[k].iter().enumerate() {
                rest[j] -= c[k] * v;
            }
        }
        c
    }

    #[test]
    fn conversion_round_trip() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(307);
        for n in [5usize, 12, 20, 30] {
            let coeffs: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let c = monomial_to_legendre(&coeffs);
            let back = legendre_to_monomial(&LegendreExpansion { coeffs: c }).unwrap();
            for (a, b) in coeffs.iter().zip(back.coeffs()) {
                assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn compile_polynomial_exactly() {
        let (net, report) = approximate_net_1d(|x| x * x * x, 3, 2).unwrap();
        assert!(report.l2_error <= 1e-12, "{}", report.l2_error);
        assert!((net.evaluate(&[0.5]).unwrap()[0] - 0.125).abs() < 1e-12);
    }

    #[test]
    fn compile_exp_is_spectral() {
        let (_, report) = approximate_net_1d(|x: f64| x.exp(), 16, 2).unwrap();
        assert!(report.linf_error <= 1e-9, "{}", report.linf_error);
    }

    #[test]
    fn absx_error_decreases() {
        let (_, r8) = approximate_net_1d(|x: f64| x.abs(), 8, 2).unwrap();
        let (_, r16) = approximate_net_1d(|x: f64| x.abs(), 16, 2).unwrap();
        assert!(r16.l2_error < r8.l2_error);
    }

    #[test]
    fn compilation_adds_no_error() {
        // net output vs projection polynomial, not vs f
        let n = 14;
        let exp = project_legendre(|x: f64| (3.0 * x).sin(), n, 2 * n).unwrap();
        let coeffs = legendre_to_monomial(&exp).unwrap();
        let net = optimal_poly_net(&coeffs, 2).unwrap();
        for i in 0..200 {
            let x = -1.0 + 2.0 * i as f64 / 199.0;
            let want = exp.eval(x);
            let got = net.evaluate(&[x]).unwrap()[0];
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0));
        }
    }

    #[test]
    fn hyperbolic_projection_examples() {
        let p = project_hyperbolic(|x| x[0] * x[1], 2, 2, 6).unwrap();
        for (k, a) in p.terms() {
            let want = if k.0 == vec![1, 1] { 1.0 } else { 0.0 };
            assert!((a - want).abs() < 1e-12, "{:?}", k.0);
        }

        // product of Legendre polynomials lands on a single coefficient
        let f = |x: &[f64]| {
            let p2 = 0.5 * (3.0 * x[0] * x[0] - 1.0);
            p2 * x[1]
        };
        let p = project_hyperbolic(f, 4, 2, 10).unwrap();
        let got = p.eval(&[0.3, 0.7]).unwrap();
        assert!((got - f(&[0.3, 0.7])).abs() < 1e-12);
    }

    #[test]
    fn hyperbolic_truncation_decreases() {
        let f = |x: &[f64]| (x[0] + x[1]).exp();
        let mut prev = f64::INFINITY;
        for n in [2u32, 4, 8] {
            let (net, report) = approximate_net_md(f, n, 2, 2).unwrap();
            assert!(report.l2_error < prev, "n={n}");
            prev = report.l2_error;
            // hidden layers stay within d * ceil(log_s N) + 1
            let bound = 2 * crate::poly1d::ceil_log(n as u64, 2) + 1;
            assert!((net.depth() - 1) as u32 <= bound, "n={n}");
        }
    }

    #[test]
    fn exp_product_truncation_decreases() {
        let f = |x: &[f64]| (x[0] * x[1]).exp();
        let mut prev = f64::INFINITY;
        for n in [2u32, 4, 8] {
            let (_, report) = approximate_net_md(f, n, 2, 2).unwrap();
            assert!(report.l2_error < prev, "n={n}");
            prev = report.l2_error;
        }
    }

    #[test]
    fn md_compile_exact_for_polynomials() {
        let f = |x: &[f64]| x[0] * x[0] + x[1] * x[1];
        let (net, report) = approximate_net_md(f, 2, 2, 2).unwrap();
        assert!(report.l2_error <= 1e-10, "{}", report.l2_error);
        let hidden_bound = 2 * crate::poly1d::ceil_log(2, 2) + 1;
        assert!((net.depth() - 1) as u32 <= hidden_bound);
    }

    #[test]
    fn sweep_classifies_analytic_vs_algebraic() {
        let exp = convergence_sweep(|x| x[0].exp(), &[4, 8, 12], 2, 1).unwrap();
        match exp.preferred {
            RateFit::Exponential { slope, .. } => assert!(slope < -0.5, "slope {slope}"),
            other => panic!("expected exponential fit, got {other:?}"),
        }

        let alg = convergence_sweep(|x| x[0].abs().powi(3), &[8, 16, 32], 2, 1).unwrap();
        match alg.preferred {
            RateFit::Algebraic { slope, .. } => {
                assert!((slope + 3.5).abs() <= 0.5, "slope {slope}")
            }
            other => panic!("expected algebraic fit, got {other:?}"),
        }
    }

    #[test]
    fn sweep_flags_exact_polynomials() {
        let res = convergence_sweep(|x| 1.0 + x[0] * x[0], &[2, 4, 6], 2, 1).unwrap();
        assert_eq!(res.preferred, RateFit::Exact);
        assert!(res.rows.iter().all(|r| r.l2 <= 1e-11));
    }

    #[test]
    fn monotone_decay_for_analytic_suite() {
        for f in [TestFunction::Exp, TestFunction::Sin3, TestFunction::InvShifted] {
            let res = convergence_sweep(|x| f.eval(x), &[4, 6, 8, 10], 2, 1).unwrap();
            for w in res.rows.windows(2) {
                assert!(
                    w[1].l2 < w[0].l2 || w[1].l2 <= FLOOR,
                    "{f:?} not decreasing: {} -> {}",
                    w[0].l2,
                    w[1].l2
                );
            }
        }
    }

    #[test]
    fn halton_is_deterministic_and_in_range() {
        let a = halton_points(100, 3);
        let b = halton_points(100, 3);
        assert_eq!(a, b);
        assert!(a
            .iter()
            .flatten()
            .all(|v| (-1.0..=1.0).contains(v)));
    }
}
