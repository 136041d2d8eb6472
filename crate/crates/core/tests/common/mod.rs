//! Covariance-matrix propagation used as an independent reference for the
//! ledger, plus the circuits it is checked on.

#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use cvqkd_core::ledger::{apply_loss, beamsplit, make_field, phase_shift, Photocurrent};
use cvqkd_core::{FieldState, SourceRegistry};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

#[derive(Debug, Clone, Copy)]
pub enum Op {
    Split {
        i: usize,
        j: usize,
        eta: f64,
        theta: f64,
    },
    Phase {
        i: usize,
        theta: f64,
    },
    Loss {
        i: usize,
        loss: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Circuit {
    /// `(V+, V-)` per input mode.
    pub inputs: Vec<(f64, f64)>,
    pub ops: Vec<Op>,
}

pub struct Oracle {
    cov: DMatrix<f64>,
}

fn rot(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    [[c, -s], [s, c]]
}

impl Oracle {
    pub fn new(inputs: &[(f64, f64)]) -> Self {
        let n = inputs.len();
        let mut cov = DMatrix::zeros(2 * n, 2 * n);
        for (k, (vp, vm)) in inputs.iter().enumerate() {
            cov[(2 * k, 2 * k)] = *vp;
            cov[(2 * k + 1, 2 * k + 1)] = *vm;
        }
        Oracle { cov }
    }

    fn modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    fn apply(&mut self, s: &DMatrix<f64>) {
        self.cov = s * &self.cov * s.transpose();
    }

    fn split(&mut self, i: usize, j: usize, eta: f64, theta: f64) {
        let n = self.modes();
        let (t, r) = (eta.sqrt(), (1.0 - eta).sqrt());
        let rm = rot(theta);
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for a in 0..2 {
            for b in 0..2 {
                let id = if a == b { 1.0 } else { 0.0 };
                s[(2 * i + a, 2 * i + b)] = t * id;
                s[(2 * i + a, 2 * j + b)] = r * rm[a][b];
                s[(2 * j + a, 2 * i + b)] = r * id;
                s[(2 * j + a, 2 * j + b)] = -t * rm[a][b];
            }
        }
        self.apply(&s);
    }

    fn phase(&mut self, i: usize, theta: f64) {
        let n = self.modes();
        let rm = rot(theta);
        let mut s = DMatrix::identity(2 * n, 2 * n);
        for a in 0..2 {
            for b in 0..2 {
                s[(2 * i + a, 2 * i + b)] = rm[a][b];
            }
        }
        self.apply(&s);
    }

    fn loss(&mut self, i: usize, loss: f64) {
        // couple to an environment mode in vacuum, then trace it out
        let n = self.modes();
        let mut big = DMatrix::zeros(2 * n + 2, 2 * n + 2);
        big.view_mut((0, 0), (2 * n, 2 * n)).copy_from(&self.cov);
        big[(2 * n, 2 * n)] = 1.0;
        big[(2 * n + 1, 2 * n + 1)] = 1.0;
        let mut o = Oracle { cov: big };
        o.split(i, n, 1.0 - loss, 0.0);
        self.cov = o.cov.view((0, 0), (2 * n, 2 * n)).into_owned();
    }

    pub fn variance(&self, w: &DVector<f64>) -> f64 {
        (w.transpose() * &self.cov * w)[(0, 0)]
    }

    pub fn weights(&self, terms: &[(usize, f64, f64)]) -> DVector<f64> {
        let mut w = DVector::zeros(self.cov.nrows());
        for &(mode, theta, scale) in terms {
            w[2 * mode] += scale * theta.cos();
            w[2 * mode + 1] += scale * theta.sin();
        }
        w
    }
}

pub fn run_ledger(c: &Circuit) -> Vec<FieldState> {
    let mut reg = SourceRegistry::new();
    let mut modes: Vec<FieldState> = c
        .inputs
        .iter()
        .map(|&(vp, vm)| {
            let src = reg.squeezed_mixed(vp, vm).unwrap();
            make_field(1.0, &src).unwrap()
        })
        .collect();
    for op in &c.ops {
        match *op {
            Op::Split { i, j, eta, theta } => {
                let (a, b) = beamsplit(&modes[i], &modes[j], eta, theta).unwrap();
                modes[i] = a;
                modes[j] = b;
            }
            Op::Phase { i, theta } => modes[i] = phase_shift(&modes[i], theta),
            Op::Loss { i, loss } => modes[i] = apply_loss(&modes[i], loss, &mut reg).unwrap(),
        }
    }
    modes
}

pub fn run_oracle(c: &Circuit) -> Oracle {
    let mut o = Oracle::new(&c.inputs);
    for op in &c.ops {
        match *op {
            Op::Split { i, j, eta, theta } => o.split(i, j, eta, theta),
            Op::Phase { i, theta } => o.phase(i, theta),
            Op::Loss { i, loss } => o.loss(i, loss),
        }
    }
    o
}

pub const ANGLES: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, 1.0, 2.5];

/// Largest absolute disagreement over single-mode and pairwise readouts.
pub fn max_discrepancy(c: &Circuit) -> f64 {
    let fields = run_ledger(c);
    let o = run_oracle(c);
    let mut worst: f64 = 0.0;
    for (i, f) in fields.iter().enumerate() {
        for th in ANGLES {
            let ledger = Photocurrent::at_angle(f, th).spectrum().total_noise;
            let oracle = o.variance(&o.weights(&[(i, th, 1.0)]));
            worst = worst.max((ledger - oracle).abs());
        }
    }
    for i in 0..fields.len() {
        for j in (i + 1)..fields.len() {
            for (ti, tj) in [
                (0.0, 0.0),
                (FRAC_PI_2, FRAC_PI_2),
                (0.0, FRAC_PI_2),
                (1.0, 2.5),
            ] {
                for sign in [1.0, -1.0] {
                    let a = Photocurrent::at_angle(&fields[i], ti);
                    let b = Photocurrent::at_angle(&fields[j], tj);
                    let joint = a.add_scaled(&b, sign).unwrap().scale(FRAC_1_SQRT_2);
                    let ledger = joint.spectrum().total_noise;
                    let w = o.weights(&[(i, ti, FRAC_1_SQRT_2), (j, tj, sign * FRAC_1_SQRT_2)]);
                    worst = worst.max((ledger - o.variance(&w)).abs());
                }
            }
        }
    }
    worst
}

pub fn fixed_circuits() -> Vec<Circuit> {
    vec![
        // EPR pair from two amplitude-squeezed beams
        Circuit {
            inputs: vec![(0.1, 10.0), (0.1, 10.0)],
            ops: vec![Op::Split {
                i: 0,
                j: 1,
                eta: 0.5,
                theta: FRAC_PI_2,
            }],
        },
        // EPR pair, lossy arms, then mixed again
        Circuit {
            inputs: vec![(0.25, 4.0), (0.2, 6.0)],
            ops: vec![
                Op::Split {
                    i: 0,
                    j: 1,
                    eta: 0.5,
                    theta: FRAC_PI_2,
                },
                Op::Loss { i: 0, loss: 0.1 },
                Op::Loss { i: 1, loss: 0.3 },
                Op::Split {
                    i: 0,
                    j: 1,
                    eta: 0.5,
                    theta: 0.0,
                },
            ],
        },
        // tap and 50:50 split of one arm
        Circuit {
            inputs: vec![(0.1, 10.0), (0.1, 10.0), (1.0, 1.0), (1.0, 1.0)],
            ops: vec![
                Op::Split {
                    i: 0,
                    j: 1,
                    eta: 0.5,
                    theta: FRAC_PI_2,
                },
                Op::Split {
                    i: 0,
                    j: 2,
                    eta: 0.84,
                    theta: 0.0,
                },
                Op::Split {
                    i: 2,
                    j: 3,
                    eta: 0.5,
                    theta: 0.0,
                },
            ],
        },
        // mixed input state, rotations
        Circuit {
            inputs: vec![(0.5, 3.0), (2.0, 2.0), (1.0, 1.0)],
            ops: vec![
                Op::Phase { i: 0, theta: 0.3 },
                Op::Split {
                    i: 0,
                    j: 1,
                    eta: 0.2,
                    theta: 1.1,
                },
                Op::Phase {
                    i: 1,
                    theta: -PI / 3.0,
                },
                Op::Split {
                    i: 1,
                    j: 2,
                    eta: 0.7,
                    theta: -0.4,
                },
                Op::Loss { i: 2, loss: 0.55 },
            ],
        },
        // trivial splitters
        Circuit {
            inputs: vec![(0.3, 1.0 / 0.3), (1.0, 1.0)],
            ops: vec![
                Op::Split {
                    i: 0,
                    j: 1,
                    eta: 1.0,
                    theta: 0.7,
                },
                Op::Split {
                    i: 0,
                    j: 1,
                    eta: 0.0,
                    theta: 0.2,
                },
                Op::Loss { i: 0, loss: 0.0 },
            ],
        },
    ]
}

/// A random passive circuit on 2 to 4 modes.
pub fn random_circuit<R: Rng>(rng: &mut R) -> Circuit {
    let n = rng.random_range(2..=4);
    let inputs = (0..n)
        .map(|_| {
            let vp = rng.random_range(0.05..1.0);
            (vp, rng.random_range(1.0..3.0) / vp)
        })
        .collect();
    let ops = (0..rng.random_range(1..12))
        .map(|_| match rng.random_range(0..6) {
            0 => Op::Phase {
                i: rng.random_range(0..n),
                theta: rng.random_range(-PI..PI),
            },
            1 => Op::Loss {
                i: rng.random_range(0..n),
                loss: rng.random_range(0.0..1.0),
            },
            _ => {
                let i = rng.random_range(0..n);
                let j = (i + rng.random_range(1..n)) % n;
                Op::Split {
                    i,
                    j,
                    eta: rng.random_range(0.0..=1.0),
                    theta: rng.random_range(-PI..PI),
                }
            }
        })
        .collect();
    Circuit { inputs, ops }
}
