//! Property tests for the composition calculus and the index-set machinery.

use proptest::prelude::*;

use powernet_core::multipoly::{MultiIndex, MultiIndexSet};
use powernet_core::netcore::{concat, parallel, tensor, AffineLayer, Matrix};
use powernet_core::PowerNet;

/// Arbitrary small valid network with the requested input width.
fn arb_net(input_dim: usize) -> impl Strategy<Value = PowerNet> {
    let weight = -1.5f64..1.5f64;
    (2u32..=3, 1usize..=3, proptest::collection::vec(1usize..=3, 1..=3))
        .prop_flat_map(move |(power, out_dim, hidden)| {
            let mut widths = vec![input_dim];
            widths.extend(hidden);
            widths.push(out_dim);
            let mut layers = Vec::new();
            for k in 1..widths.len() {
                layers.push((
                    proptest::collection::vec(weight.clone(), widths[k] * widths[k - 1]),
                    proptest::collection::vec(weight.clone(), widths[k]),
                ));
            }
            (Just(power), Just(widths), layers)
        })
        .prop_map(|(power, widths, layers)| {
            let mut built = Vec::new();
            for (k, (w, b)) in layers.into_iter().enumerate() {
                let rows: Vec<Vec<f64>> = w.chunks(widths[k]).map(|c| c.to_vec()).collect();
                built.push(AffineLayer::new(Matrix::from_rows(rows).unwrap(), b).unwrap());
            }
            PowerNet::new(power, widths[0], built).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// concat realizes function composition on [-10, 10].
    #[test]
    fn composition_law(
        inner in arb_net(1),
        outer_seed in arb_net(1),
        x in -10.0f64..10.0,
    ) {
        // rebuild the outer net so its input width matches the inner output
        let mid = inner.output_dim();
        let outer = {
            let mut layers = outer_seed.layers().to_vec();
            let first = &layers[0];
            let mut w = Matrix::zeros(first.out_dim(), mid);
            for i in 0..first.out_dim() {
                for j in 0..mid {
                    w.set(i, j, first.weights.get(i, j % first.in_dim()));
                }
            }
            layers[0] = AffineLayer::new(w, first.bias.clone()).unwrap();
            PowerNet::new(inner.power(), mid, layers).unwrap()
        };
        let joined = concat(&outer, &inner).unwrap();
        prop_assert_eq!(joined.depth(), inner.depth() + outer.depth() - 1);
        let two_step = inner
            .evaluate(&[x])
            .and_then(|mid_val| outer.evaluate(&mid_val));
        let one_step = joined.evaluate(&[x]);
        match (two_step, one_step) {
            (Ok(a), Ok(b)) => {
                for (u, v) in a.iter().zip(&b) {
                    prop_assert!(
                        (u - v).abs() <= 1e-12 * u.abs().max(1.0),
                        "composition mismatch: {} vs {}", u, v
                    );
                }
            }
            // overflow on one path must be overflow on both
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "one path failed: {:?} vs {:?}", a, b),
        }
    }

    /// parallel and tensor outputs equal the stacked component outputs, and
    /// their structural counts are additive.
    #[test]
    fn parallel_and_tensor_semantics(
        a in arb_net(1),
        b_seed in arb_net(1),
        x in -3.0f64..3.0,
        y in -3.0f64..3.0,
    ) {
        // align depth and power so the compositions are defined
        let b = {
            let mut layers = b_seed.layers().to_vec();
            layers.truncate(a.depth());
            while layers.len() < a.depth() {
                let w = layers.last().unwrap().out_dim();
                layers.push(AffineLayer::new(
                    Matrix::from_rows(vec![vec![1.0; w]]).unwrap(),
                    vec![0.0],
                ).unwrap());
            }
            PowerNet::new(a.power(), 1, layers).unwrap()
        };
        let par = parallel(&a, &b).unwrap();
        let ten = tensor(&a, &b).unwrap();
        prop_assert_eq!(par.stats().nodes, a.stats().nodes + b.stats().nodes);
        prop_assert_eq!(par.stats().nonzeros, a.stats().nonzeros + b.stats().nonzeros);
        for k in 0..ten.depth() {
            prop_assert_eq!(
                ten.layers()[k].out_dim(),
                a.layers()[k].out_dim() + b.layers()[k].out_dim()
            );
        }
        if let (Ok(va), Ok(vb)) = (a.evaluate(&[x]), b.evaluate(&[x])) {
            let got = par.evaluate(&[x]).unwrap();
            let want: Vec<f64> = va.iter().chain(&vb).copied().collect();
            prop_assert_eq!(got, want);
        }
        if let (Ok(va), Ok(vb)) = (a.evaluate(&[x]), b.evaluate(&[y])) {
            let got = ten.evaluate(&[x, y]).unwrap();
            let want: Vec<f64> = va.iter().chain(&vb).copied().collect();
            prop_assert_eq!(got, want);
        }
    }

    /// JSON round trip is a weight-exact fixed point on arbitrary nets.
    #[test]
    fn json_round_trip_fixed_point(net in arb_net(2)) {
        let text = net.to_json();
        let back = PowerNet::from_json(&text).unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(back.to_json(), text);
    }

    /// The downward closure of any index set is complete, and completing
    /// twice changes nothing.
    #[test]
    fn closure_is_complete(
        raw in proptest::collection::vec(proptest::collection::vec(0u32..6, 2), 1..8)
    ) {
        let indices = raw.into_iter().map(MultiIndex).collect();
        let set = MultiIndexSet::custom(2, indices).unwrap();
        let closed = set.completed();
        prop_assert!(closed.is_complete());
        prop_assert_eq!(closed.completed().len(), closed.len());
        prop_assert!(closed.len() >= set.len());
    }
}

/// A constructed net is a polynomial of degree at most s^(depth-1):
/// interpolating it at that many Chebyshev points recovers it everywhere.
#[test]
fn constructed_nets_are_low_degree_polynomials() {
    let cases: Vec<PowerNet> = vec![
        powernet_core::monomial::power_s_net(2).unwrap(),
        powernet_core::monomial::monomial_net(6, 2).unwrap(),
        powernet_core::poly1d::build_poly_net(
            &powernet_core::poly1d::PolyCoeffs::new(vec![0.3, -1.0, 0.5, 0.25, 1.0]).unwrap(),
            2,
            powernet_core::poly1d::Strategy::Optimal,
        )
        .unwrap(),
    ];
    for net in cases {
        let cap = (net.power() as usize).pow(net.depth() as u32 - 1);
        let m = cap + 1;
        // Chebyshev interpolation nodes on [0.05, 0.95]
        let nodes: Vec<f64> = (0..m)
            .map(|i| {
                let t = ((2 * i + 1) as f64) * std::f64::consts::PI / (2 * m) as f64;
                0.5 + 0.45 * t.cos()
            })
            .collect();
        let values: Vec<f64> = nodes.iter().map(|x| net.evaluate(&[*x]).unwrap()[0]).collect();
        // barycentric evaluation of the unique degree-cap interpolant
        let weights: Vec<f64> = (0..m)
            .map(|i| {
                let mut w = 1.0;
                for j in 0..m {
                    if i != j {
                        w /= nodes[i] - nodes[j];
                    }
                }
                w
            })
            .collect();
        for k in 0..50 {
            let x = 0.06 + 0.88 * (k as f64) / 49.0;
            let mut num = 0.0;
            let mut den = 0.0;
            let mut exact = None;
            for i in 0..m {
                let d = x - nodes[i];
                if d.abs() < 1e-14 {
                    exact = Some(values[i]);
                    break;
                }
                num += weights[i] * values[i] / d;
                den += weights[i] / d;
            }
            let interp = exact.unwrap_or(num / den);
            let direct = net.evaluate(&[x]).unwrap()[0];
            assert!(
                (interp - direct).abs() <= 1e-9 * direct.abs().max(1.0),
                "degree cap {cap} exceeded at x={x}: {interp} vs {direct}"
            );
        }
    }
}
