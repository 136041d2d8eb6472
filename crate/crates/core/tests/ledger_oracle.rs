//! Ledger variances against a plain covariance-matrix propagation.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{fixed_circuits, max_discrepancy, run_ledger, Circuit, Op, ANGLES};
use cvqkd_core::ledger::Photocurrent;
use proptest::prelude::*;

#[test]
fn fixed_circuits_match_covariance_propagation() {
    for (k, c) in fixed_circuits().iter().enumerate() {
        let d = max_discrepancy(c);
        assert!(d <= 1e-10, "circuit {k}: {d:e}");
    }
}

#[test]
fn vacuum_stays_at_qnl_under_passive_optics() {
    let c = Circuit {
        inputs: vec![(1.0, 1.0); 4],
        ops: vec![
            Op::Split {
                i: 0,
                j: 1,
                eta: 0.3,
                theta: 0.9,
            },
            Op::Split {
                i: 2,
                j: 3,
                eta: 0.6,
                theta: -2.0,
            },
            Op::Loss { i: 1, loss: 0.4 },
            Op::Split {
                i: 1,
                j: 2,
                eta: 0.5,
                theta: FRAC_PI_2,
            },
            Op::Phase { i: 3, theta: 1.3 },
        ],
    };
    for f in run_ledger(&c) {
        for th in ANGLES {
            let v = Photocurrent::at_angle(&f, th).spectrum().total_noise;
            assert!((v - 1.0).abs() <= 1e-12, "{v}");
        }
    }
}

#[test]
fn lossless_splitters_conserve_total_noise() {
    let c = Circuit {
        inputs: vec![(0.1, 10.0), (0.4, 2.5), (1.0, 1.0)],
        ops: vec![
            Op::Split {
                i: 0,
                j: 1,
                eta: 0.5,
                theta: FRAC_PI_2,
            },
            Op::Split {
                i: 1,
                j: 2,
                eta: 0.37,
                theta: 0.0,
            },
            Op::Split {
                i: 0,
                j: 2,
                eta: 0.81,
                theta: 2.2,
            },
        ],
    };
    let before: f64 = c.inputs.iter().map(|(p, m)| p + m).sum();
    let after: f64 = run_ledger(&c)
        .iter()
        .map(|f| f.v_plus() + f.v_minus())
        .sum();
    assert!((before - after).abs() <= 1e-12);
}

fn op_strategy(n: usize) -> impl Strategy<Value = Op> {
    let split = (0..n, 0..n, 0.0..=1.0f64, -PI..PI)
        .prop_filter("distinct ports", |(i, j, _, _)| i != j)
        .prop_map(|(i, j, eta, theta)| Op::Split { i, j, eta, theta });
    let phase = (0..n, -PI..PI).prop_map(|(i, theta)| Op::Phase { i, theta });
    let loss = (0..n, 0.0..1.0f64).prop_map(|(i, loss)| Op::Loss { i, loss });
    prop_oneof![4 => split, 1 => phase, 1 => loss]
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2usize..=4).prop_flat_map(|n| {
        let input = (0.05..1.0f64, 1.0..3.0f64).prop_map(|(vp, excess)| (vp, excess / vp));
        (
            prop::collection::vec(input, n),
            prop::collection::vec(op_strategy(n), 1..12),
        )
            .prop_map(|(inputs, ops)| Circuit { inputs, ops })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_circuits_match_oracle(c in circuit_strategy()) {
        let d = max_discrepancy(&c);
        prop_assert!(d <= 1e-10, "{d:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_circuits_respect_uncertainty(c in circuit_strategy()) {
        for f in run_ledger(&c) {
            prop_assert!(f.v_plus() * f.v_minus() >= 1.0 - 1e-9);
        }
    }
}
