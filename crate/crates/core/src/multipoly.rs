//! Multivariate index sets and the recursive network builder for sparse
//! polynomials over downward-closed supports.
//!
//! The builder peels off the last variable: coefficient sub-polynomials in
//! the remaining variables compile recursively, their outputs are aligned to
//! a common depth with identity chains, and a variable-coefficient version
//! of the univariate staged construction contracts them against powers of
//! the peeled variable.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::netcore::{concat, parallel, AffineLayer, Matrix, PowerNet};
use crate::poly1d::{optimal_poly_net, PolyCoeffs};
use crate::stage::{extend_to_depth, identity_stage, Contribution, Stage};

/// Exponent vector; one entry per dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetKind {
    TotalDegree(u32),
    Tensor(u32),
    HyperbolicCross(u32),
    Custom,
}

/// Finite set of multi-indices, all of the same dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiIndexSet {
    dim: usize,
    kind: SetKind,
    indices: BTreeSet<MultiIndex>,
}

impl MultiIndexSet {
    pub fn custom(dim: usize, indices: BTreeSet<MultiIndex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("dimension must be at least 1".into()));
        }
        if indices.iter().any(|k| k.dim() != dim) {
            return Err(Error::Invalid("index dimension mismatch".into()));
        }
        Ok(MultiIndexSet {
            dim,
            kind: SetKind::Custom,
            indices,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, k: &MultiIndex) -> bool {
        self.indices.contains(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiIndex> {
        self.indices.iter()
    }

    /// Largest exponent appearing in coordinate `i`.
    pub fn max_degree(&self, i: usize) -> u32 {
        self.indices.iter().map(|k| k.0[i]).max().unwrap_or(0)
    }

    /// True iff the set is downward closed: together with any index it
    /// contains every componentwise-smaller index.
    pub fn is_complete(&self) -> bool {
        for k in &self.indices {
            for i in 0..self.dim {
                if k.0[i] > 0 {
                    let mut smaller = k.clone();
                    smaller.0[i] -= 1;
                    if !self.indices.contains(&smaller) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Downward closure; the explicit way to make a support usable by the
    /// network builder.
    pub fn completed(&self) -> MultiIndexSet {
        let mut closed: BTreeSet<MultiIndex> = BTreeSet::new();
        let mut queue: Vec<MultiIndex> = self.indices.iter().cloned().collect();
        while let Some(k) = queue.pop() {
            if !closed.insert(k.clone()) {
                continue;
            }
            for i in 0..self.dim {
                if k.0[i] > 0 {
                    let mut smaller = k.clone();
                    smaller.0[i] -= 1;
                    queue.push(smaller);
                }
            }
        }
        MultiIndexSet {
            dim: self.dim,
            kind: if self.is_complete() {
                self.kind
            } else {
                SetKind::Custom
            },
            indices: closed,
        }
    }
}

fn enumerate_box(dim: usize, cap: u32, keep: &dyn Fn(&[u32]) -> bool) -> BTreeSet<MultiIndex> {
    let mut out = BTreeSet::new();
    let mut cur = vec![0u32; dim];
    loop {
        if keep(&cur) {
            out.insert(MultiIndex(cur.clone()));
        }
        let mut i = 0;
        loop {
            if i == dim {
                return out;
            }
            if cur[i] < cap {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// All indices with total degree at most `n`; cardinality C(n+d, d).
pub fn total_degree_set(n: u32, d: usize) -> MultiIndexSet {
    MultiIndexSet {
        dim: d,
        kind: SetKind::TotalDegree(n),
        indices: enumerate_box(d, n, &|k| k.iter().sum::<u32>() <= n),
    }
}

/// All indices with every coordinate at most `n`; cardinality (n+1)^d.
pub fn tensor_set(n: u32, d: usize) -> MultiIndexSet {
    MultiIndexSet {
        dim: d,
        kind: SetKind::Tensor(n),
        indices: enumerate_box(d, n, &|_| true),
    }
}

/// Hyperbolic cross: product of max(1, k_i) at most `n`.
pub fn hyperbolic_set(n: u32, d: usize) -> MultiIndexSet {
    MultiIndexSet {
        dim: d,
        kind: SetKind::HyperbolicCross(n),
        indices: enumerate_box(d, n, &|k| {
            k.iter().map(|v| (*v).max(1) as u64).product::<u64>() <= n as u64
        }),
    }
}

/// Sparse multivariate polynomial with an explicit support set.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, f64>,
    support: MultiIndexSet,
}

impl MultiPoly {
    pub fn new(support: MultiIndexSet, terms: BTreeMap<MultiIndex, f64>) -> Result<Self> {
        for (k, a) in &terms {
            if !support.contains(k) {
                return Err(Error::Invalid(format!(
                    "term {:?} lies outside the declared support",
                    k.0
                )));
            }
            if !a.is_finite() {
                return Err(Error::Invalid("non-finite coefficient".into()));
            }
        }
        Ok(MultiPoly {
            dim: support.dim(),
            terms,
            support,
        })
    }

    /// Builds a polynomial whose support is exactly its term set.
    pub fn from_terms(dim: usize, terms: BTreeMap<MultiIndex, f64>) -> Result<Self> {
        let support = MultiIndexSet::custom(dim, terms.keys().cloned().collect())?;
        MultiPoly::new(support, terms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, f64> {
        &self.terms
    }

    pub fn support(&self) -> &MultiIndexSet {
        &self.support
    }

    /// Replaces the support by its downward closure.
    pub fn with_completed_support(self) -> Result<Self> {
        let support = self.support.completed();
        MultiPoly::new(support, self.terms)
    }

    /// Direct evaluation with compensated summation; the oracle the network
    /// builder is tested against.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::InputShape {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(crate::oracle::compensated_sum(self.terms.iter().map(
            |(k, a)| {
                let mut t = *a;
                for (xi, ki) in x.iter().zip(&k.0) {
                    t *= xi.powi(*ki as i32);
                }
                t
            },
        )))
    }

    /// Parses `{ "dim": d, "terms": [ { "k": [..], "a": .. } ] }`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct TermDoc {
            k: Vec<u32>,
            a: f64,
        }
        #[derive(Deserialize)]
        struct PolyDoc {
            dim: usize,
            terms: Vec<TermDoc>,
        }
        let doc: PolyDoc = serde_json::from_str(text)?;
        let mut terms = BTreeMap::new();
        for t in doc.terms {
            if t.k.len() != doc.dim {
                return Err(Error::Invalid(format!(
                    "term {:?} has {} exponents, expected {}",
                    t.k,
                    t.k.len(),
                    doc.dim
                )));
            }
            *terms.entry(MultiIndex(t.k)).or_insert(0.0) += t.a;
        }
        MultiPoly::from_terms(doc.dim, terms)
    }
}

/// Compiles a multivariate polynomial with complete support into a network
/// realizing it exactly on R^d.
pub fn mpoly_net(f: &MultiPoly, s: u32) -> Result<PowerNet> {
    if f.dim == 0 {
        return Err(Error::Invalid("dimension must be at least 1".into()));
    }
    if !f.support.is_complete() {
        return Err(Error::Incomplete(
            "support must be downward closed; call completed() on the support first".into(),
        ));
    }
    let terms: BTreeMap<Vec<u32>, f64> = f
        .terms
        .iter()
        .map(|(k, a)| (k.0.clone(), *a))
        .collect();
    build_md(&terms, f.dim, s)
}

// --- recursive builder ------------------------------------------------------

#[derive(Clone, Debug)]
enum Entry {
    Zero,
    Const(f64),
    Wire(usize), // producer output index
}

fn build_md(terms: &BTreeMap<Vec<u32>, f64>, d: usize, s: u32) -> Result<PowerNet> {
    if d == 1 {
        let n = terms
            .iter()
            .filter(|(_, a)| **a != 0.0)
            .map(|(k, _)| k[0])
            .max()
            .unwrap_or(0) as usize;
        let mut coeffs = vec![0.0; n + 1];
        for (k, a) in terms {
            if *a != 0.0 {
                coeffs[k[0] as usize] += *a;
            }
        }
        return optimal_poly_net(&PolyCoeffs::new(coeffs)?, s);
    }

    // group by the exponent of the last variable
    let mut groups: BTreeMap<u32, BTreeMap<Vec<u32>, f64>> = BTreeMap::new();
    for (k, a) in terms {
        if *a == 0.0 {
            continue;
        }
        let kd = k[d - 1];
        groups
            .entry(kd)
            .or_default()
            .insert(k[..d - 1].to_vec(), *a);
    }
    let nd = groups.keys().max().copied().unwrap_or(0) as usize;

    if groups.is_empty() {
        return zero_net(d, s);
    }

    // classify each coefficient group
    let mut kinds: Vec<Entry> = Vec::with_capacity(nd + 1);
    let mut subs: Vec<(usize, PowerNet)> = Vec::new();
    for kd in 0..=nd as u32 {
        match groups.get(&kd) {
            None => kinds.push(Entry::Zero),
            Some(g) => {
                let constant = g.len() == 1 && g.keys().next().unwrap().iter().all(|v| *v == 0);
                if constant {
                    kinds.push(Entry::Const(*g.values().next().unwrap()));
                } else {
                    let net = build_md(g, d - 1, s)?;
                    kinds.push(Entry::Wire(subs.len()));
                    subs.push((kd as usize, net));
                }
            }
        }
    }

    if nd == 0 {
        // no dependence on the last variable
        return match &kinds[0] {
            Entry::Zero => zero_net(d, s),
            Entry::Const(c) => const_net(d, *c, s),
            Entry::Wire(i) => Ok(widen_input(&subs[*i].1, d, &identity_cols(d - 1))?),
        };
    }
    if subs.is_empty() {
        // constant coefficients: a univariate polynomial in the last variable
        let coeffs: Vec<f64> = kinds
            .iter()
            .map(|e| match e {
                Entry::Const(c) => *c,
                _ => 0.0,
            })
            .collect();
        let net = optimal_poly_net(&PolyCoeffs::new(coeffs)?, s)?;
        return widen_input(&net, d, &[d - 1]);
    }

    let plan = plan_tail(&kinds, s as usize)?;

    // producer: aligned coefficient sub-nets beside the power chain for the
    // peeled variable
    let mut depth = subs.iter().map(|(_, n)| n.depth()).max().unwrap();
    if plan.need_pow.iter().any(|j| *j >= 2) && depth < 2 {
        depth = 2; // powers need one activation hop
    }
    let mut producer: Option<PowerNet> = None;
    let mut wire_of_sub: Vec<usize> = Vec::new();
    for (_, net) in &subs {
        let padded = extend_to_depth(net.clone(), depth, s)?;
        wire_of_sub.push(match &producer {
            None => 0,
            Some(p) => p.output_dim(),
        });
        producer = Some(match producer {
            None => padded,
            Some(p) => parallel(&p, &padded)?,
        });
    }
    let mut producer = producer.unwrap();
    let (chain, pow_wire_local) = power_chain(&plan.need_pow, depth, s)?;
    let chain = widen_input(&chain, d, &[d - 1])?;
    let base_out = producer.output_dim();
    producer = parallel(&producer, &chain)?;
    let pow_wires: BTreeMap<u32, usize> = pow_wire_local
        .into_iter()
        .map(|(j, w)| (j, base_out + w))
        .collect();

    let entries: Vec<Entry> = kinds
        .iter()
        .map(|e| match e {
            Entry::Wire(i) => Entry::Wire(wire_of_sub[*i]),
            other => other.clone(),
        })
        .collect();
    emit_tail(producer, &plan, &entries, &pow_wires, s)
}

fn zero_net(d: usize, s: u32) -> Result<PowerNet> {
    const_net(d, 0.0, s)
}

fn const_net(d: usize, c: f64, s: u32) -> Result<PowerNet> {
    let layer = AffineLayer::new(Matrix::zeros(1, d), vec![c])?;
    PowerNet::new(s, d, vec![layer])
}

fn identity_cols(m: usize) -> Vec<usize> {
    (0..m).collect()
}

/// Rebuilds the first layer so input column `j` of the original net reads
/// from column `mapping[j]` of a `d`-dimensional input.
fn widen_input(net: &PowerNet, d: usize, mapping: &[usize]) -> Result<PowerNet> {
    if mapping.len() != net.input_dim() {
        return Err(Error::Shape("input mapping length mismatch".into()));
    }
    let first = &net.layers()[0];
    let mut w = Matrix::zeros(first.out_dim(), d);
    for i in 0..first.out_dim() {
        for (j, dst) in mapping.iter().enumerate() {
            let v = first.weights.get(i, j);
            if v != 0.0 {
                w.set(i, *dst, v);
            }
        }
    }
    let mut layers = vec![AffineLayer::new(w, first.bias.clone())?];
    layers.extend_from_slice(&net.layers()[1..]);
    PowerNet::new(net.power(), d, layers)
}

/// Chain of the requested depth whose final layer emits the powers
/// `x^j, j in need` of its scalar input (identity hops before that).
fn power_chain(need: &BTreeSet<u32>, depth: usize, s: u32) -> Result<(PowerNet, BTreeMap<u32, usize>)> {
    let su = s as usize;
    let mut wires = BTreeMap::new();
    if need.iter().all(|j| *j == 1) {
        // the variable itself is enough; a pure identity chain
        let mut net = affine_identity(s)?;
        net = extend_to_depth(net, depth, s)?;
        wires.insert(1, 0);
        return Ok((net, wires));
    }
    let mut stage = Stage::new(1, s)?;
    let mut low: Vec<Vec<f64>> = Vec::new();
    let mut low_js: Vec<u32> = Vec::new();
    for j in need {
        if (*j as usize) < su {
            let mut c = vec![0.0; *j as usize + 1];
            c[*j as usize] = 1.0;
            low.push(c);
            low_js.push(*j);
        }
    }
    let sets: Vec<&[f64]> = low.iter().map(|c| c.as_slice()).collect();
    let rows = stage.poly_rows(0, &sets)?;
    for (j, row) in low_js.iter().zip(rows) {
        wires.insert(*j, stage.push_output(&[row]));
    }
    if need.contains(&(s)) {
        let c = stage.power(0);
        wires.insert(s, stage.push_output(&[c]));
    }
    let powers = stage.into_net()?;
    if depth < 2 {
        return Err(Error::Invalid("power chain needs depth >= 2".into()));
    }
    // identity hops first, powers as the final hop
    let mut net = powers;
    if depth > 2 {
        let mut head = affine_identity(s)?;
        head = extend_to_depth(head, depth - 1, s)?;
        net = concat(&net, &head)?;
    }
    Ok((net, wires))
}

fn affine_identity(s: u32) -> Result<PowerNet> {
    let layer = AffineLayer::new(Matrix::from_rows(vec![vec![1.0]])?, vec![0.0])?;
    PowerNet::new(s, 1, vec![layer])
}

// --- variable-coefficient tail ---------------------------------------------

#[derive(Clone, Debug)]
enum TailNode {
    Zero,
    Const(f64),
    // (power of the current base, entry) pairs; level 1 allows j == s
    Combine(Vec<(u32, TailTerm)>),
}

#[derive(Clone, Debug)]
enum TailTerm {
    Const(f64),
    Entry(usize), // level 1: index into the entry list
    Prev(usize),  // level >= 2: node index in the previous level
}

struct TailPlan {
    levels: Vec<Vec<TailNode>>,
    ladder_j: Vec<BTreeSet<u32>>,
    early_end: usize,
    late_end: usize,
    /// powers of the peeled variable the producer must emit (j = s means the
    /// s-th power feeding the ladder)
    need_pow: BTreeSet<u32>,
}

fn plan_tail(entries: &[Entry], s: usize) -> Result<TailPlan> {
    let nmax = entries.len() - 1;
    let n1 = nmax.div_ceil(s).max(1);
    let term_of = |idx: usize| -> Option<TailTerm> {
        match entries.get(idx) {
            None | Some(Entry::Zero) => None,
            Some(Entry::Const(c)) => Some(TailTerm::Const(*c)),
            Some(Entry::Wire(_)) => Some(TailTerm::Entry(idx)),
        }
    };
    let mut level1 = Vec::with_capacity(n1);
    for k in 0..n1 {
        let hi = if k == n1 - 1 { k * s + s } else { k * s + s - 1 };
        let mut terms = Vec::new();
        for idx in k * s..=hi.min(nmax) {
            if let Some(t) = term_of(idx) {
                terms.push(((idx - k * s) as u32, t));
            }
        }
        level1.push(classify(terms));
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
                    TailNode::Zero => {}
                    TailNode::Const(c) => terms.push((j as u32, TailTerm::Const(*c))),
                    TailNode::Combine(_) => terms.push((j as u32, TailTerm::Prev(idx))),
                }
            }
            next.push(classify(terms));
        }
        levels.push(next);
    }
    let t = levels.len();
    let mut ladder_j: Vec<BTreeSet<u32>> = vec![Default::default(); t + 1];
    for i in 2..=t {
        for nk in &levels[i - 1] {
            if let TailNode::Combine(terms) = nk {
                for (j, _) in terms {
                    if *j >= 1 {
                        ladder_j[i].insert(*j);
                    }
                }
            }
        }
    }
    let early_end = (2..=t)
        .filter(|i| ladder_j[*i].iter().any(|j| *j >= 2))
        .max()
        .unwrap_or(0);
    let late_end = (2..=t)
        .filter(|i| !ladder_j[*i].is_empty())
        .max()
        .unwrap_or(0);

    let mut need_pow: BTreeSet<u32> = BTreeSet::new();
    for nk in &levels[0] {
        if let TailNode::Combine(terms) = nk {
            for (j, _) in terms {
                if *j >= 1 {
                    need_pow.insert(*j); // j == s is the ladder base itself
                }
            }
        }
    }
    if early_end >= 2 {
        need_pow.insert(s as u32); // first ladder base must come from the producer
    }
    if late_end >= 2 && early_end < 2 {
        need_pow.insert(1); // late chain starts from the variable itself
    }
    Ok(TailPlan {
        levels,
        ladder_j,
        early_end,
        late_end,
        need_pow,
    })
}

fn classify(terms: Vec<(u32, TailTerm)>) -> TailNode {
    match terms.as_slice() {
        [] => TailNode::Zero,
        [(0, TailTerm::Const(c))] => TailNode::Const(*c),
        _ => TailNode::Combine(terms),
    }
}

fn emit_tail(
    producer: PowerNet,
    plan: &TailPlan,
    entries: &[Entry],
    pow_wires: &BTreeMap<u32, usize>,
    s: u32,
) -> Result<PowerNet> {
    let t = plan.levels.len();
    let mut net = producer;
    // carried wires between tail stages
    let mut group_wires: Vec<Option<usize>> = Vec::new();
    let mut power_wires: BTreeMap<u32, usize> = pow_wires.clone();
    let mut base: Option<usize> = if plan.early_end >= 2 {
        Some(*pow_wires.get(&s).expect("producer emits the ladder base"))
    } else {
        None
    };
    let mut late_base: Option<usize> = None;

    for i in 1..=t {
        let mut stage = Stage::new(net.output_dim(), s)?;
        let mut next_groups: Vec<Option<usize>> = Vec::new();
        let mut next_powers: BTreeMap<u32, usize> = BTreeMap::new();
        let mut next_base: Option<usize> = None;
        let mut next_late: Option<usize> = None;

        for nk in &plan.levels[i - 1] {
            match nk {
                TailNode::Combine(terms) => {
                    let mut parts = Vec::new();
                    for (j, tv) in terms {
                        let value_wire = match tv {
                            TailTerm::Const(_) => None,
                            TailTerm::Entry(idx) => match &entries[*idx] {
                                Entry::Wire(w) => Some(*w),
                                _ => unreachable!("planned entry is a wire"),
                            },
                            TailTerm::Prev(idx) => Some(group_wires[*idx].expect("group wire")),
                        };
                        if *j == 0 {
                            match (value_wire, tv) {
                                (Some(w), _) => parts.push(stage.poly_row(w, &[0.0, 1.0])?),
                                (None, TailTerm::Const(c)) => {
                                    parts.push(Contribution::constant(*c))
                                }
                                _ => unreachable!(),
                            }
                        } else {
                            let pw = *power_wires.get(j).expect("scheduled power wire");
                            match (value_wire, tv) {
                                (Some(w), _) => parts.push(stage.product(pw, w, 1)?),
                                (None, TailTerm::Const(c)) => {
                                    parts.push(stage.poly_row(pw, &[0.0, *c])?)
                                }
                                _ => unreachable!(),
                            }
                        }
                    }
                    next_groups.push(Some(stage.push_output(&parts)));
                }
                _ => next_groups.push(None),
            }
        }

        if i < t {
            let dest = i + 1;
            if dest <= plan.early_end {
                let bw = base.expect("early ladder base available");
                let mut want: Vec<u32> = plan.ladder_j[dest].iter().copied().collect();
                if dest == plan.early_end && plan.late_end > plan.early_end && !want.contains(&1) {
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
                    next_powers.insert(*j, w);
                    if *j == 1 && dest == plan.early_end && plan.late_end > plan.early_end {
                        next_late = Some(w);
                    }
                }
                if dest < plan.early_end {
                    let c = stage.power(bw);
                    next_base = Some(stage.push_output(&[c]));
                }
            } else if dest <= plan.late_end {
                let prev = match late_base {
                    Some(w) => w,
                    None => {
                        debug_assert_eq!(i, 1, "late chain starts at the first tail stage");
                        *power_wires.get(&1).expect("variable wire for the late chain")
                    }
                };
                let c = stage.power(prev);
                let w = stage.push_output(&[c]);
                if !plan.ladder_j[dest].is_empty() {
                    next_powers.insert(1, w);
                }
                next_late = Some(w);
            }
        }

        if stage.output_count() == 0 {
            return Err(Error::Invalid("internal: empty tail stage".into()));
        }
        net = concat(&stage.into_net()?, &net)?;
        group_wires = next_groups;
        power_wires = next_powers;
        base = next_base;
        late_base = next_late;
    }

    match &plan.levels[t - 1][0] {
        TailNode::Const(c) => const_net(net.input_dim(), *c, s),
        TailNode::Zero => zero_net(net.input_dim(), s),
        TailNode::Combine(_) => {
            debug_assert_eq!(net.output_dim(), 1);
            Ok(net)
        }
    }
}

// Keeps a uniform width-1 alias available for the builder above.
#[allow(dead_code)]
fn single_identity(s: u32) -> Result<PowerNet> {
    identity_stage(1, s)
}
