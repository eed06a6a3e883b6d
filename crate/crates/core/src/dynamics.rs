//! Myopic best-response consumption dynamics.
//!
//! Consumption of product `a` by agent `i` is `x_i = 1/2 + y_i`; product `b`
//! gets `1/2 - y_i`. Each period every agent best-responds to its neighbors'
//! previous consumption, which gives the synchronous linear update
//! `y(t+1) = W y(t) + u` with `W = ((1 - alpha) / (2 alpha)) G` and the
//! constant drift `u = ((1 - alpha)(q_a - q_b) / (4 alpha (q_a + q_b))) 1`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::params::ModelParams;

/// Slack allowed on `|y_i| <= 1/2` before a state is reported out of bounds.
pub const BOUNDS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ConsumptionState {
    pub y: DVector<f64>,
    pub t: usize,
}

impl ConsumptionState {
    pub fn new(y: DVector<f64>, t: usize) -> Result<Self> {
        check_bounds(&y, t)?;
        Ok(Self { y, t })
    }

    /// Total consumption of product `a`, `sum_i (1/2 + y_i)`.
    pub fn total_a(&self) -> f64 {
        self.y.iter().map(|y| 0.5 + y).sum()
    }

    /// Total consumption of product `b`, `sum_i (1/2 - y_i)`.
    pub fn total_b(&self) -> f64 {
        self.y.iter().map(|y| 0.5 - y).sum()
    }
}

fn check_bounds(y: &DVector<f64>, t: usize) -> Result<()> {
    match y
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_finite() || v.abs() > 0.5 + BOUNDS_TOL)
    {
        Some((agent, &value)) => Err(Error::Bounds { agent, t, value }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsOperator {
    w: DMatrix<f64>,
    drift: f64,
}

impl DynamicsOperator {
    pub fn new(net: &Network, params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let w = net.weights() * params.neighbor_weight();
        let drift = (1.0 - params.alpha) * (params.q_a - params.q_b) / (4.0 * params.alpha * (params.q_a + params.q_b));
        Ok(Self { w, drift })
    }

    pub fn n(&self) -> usize {
        self.w.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.w
    }

    /// The common value of every component of the drift vector `u`.
    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn drift_vector(&self) -> DVector<f64> {
        DVector::from_element(self.n(), self.drift)
    }

    fn check_len(&self, v: &DVector<f64>) -> Result<()> {
        if v.len() == self.n() {
            Ok(())
        } else {
            Err(Error::Dimension {
                expected: self.n(),
                actual: v.len(),
            })
        }
    }

    pub fn step(&self, state: &ConsumptionState) -> Result<ConsumptionState> {
        self.check_len(&state.y)?;
        let y = &self.w * &state.y + self.drift_vector();
        ConsumptionState::new(y, state.t + 1)
    }

    /// States for `t = 0..=horizon` by repeated [`step`](Self::step).
    pub fn trajectory(&self, y0: &DVector<f64>, horizon: usize) -> Result<Vec<ConsumptionState>> {
        self.check_len(y0)?;
        let mut states = Vec::with_capacity(horizon + 1);
        states.push(ConsumptionState::new(y0.clone(), 0)?);
        for _ in 0..horizon {
            let next = self.step(states.last().expect("nonempty"))?;
            states.push(next);
        }
        Ok(states)
    }

    /// Closed form `W^t y0 + sum_{k<t} W^k u` for every `t = 0..=horizon`,
    /// with the powers of `W` formed by repeated multiplication.
    pub fn expanded_trajectory(&self, y0: &DVector<f64>, horizon: usize) -> Result<Vec<DVector<f64>>> {
        self.check_len(y0)?;
        let u = self.drift_vector();
        let mut power = DMatrix::identity(self.n(), self.n());
        let mut drift_sum = DVector::zeros(self.n());
        let mut out = Vec::with_capacity(horizon + 1);
        for t in 0..=horizon {
            out.push(&power * y0 + &drift_sum);
            if t < horizon {
                drift_sum += &power * &u;
                power = &self.w * power;
            }
        }
        Ok(out)
    }

    /// Closed form at a single time `t`.
    pub fn expanded_form(&self, y0: &DVector<f64>, t: usize) -> Result<DVector<f64>> {
        Ok(self.expanded_trajectory(y0, t)?.pop().expect("nonempty"))
    }

    /// Fixed point `y* = (I - W)^{-1} u`.
    pub fn steady_state(&self) -> Result<DVector<f64>> {
        let n = self.n();
        let system = DMatrix::identity(n, n) - &self.w;
        let u = self.drift_vector();
        let y = system
            .lu()
            .solve(&u)
            .ok_or_else(|| Error::Solve("I - W is singular".into()))?;
        let residual = (&self.w * &y + &u - &y).amax();
        if residual > 1e-10 {
            return Err(Error::Solve(format!("steady state residual {residual:e}")));
        }
        Ok(y)
    }

    /// Discounted consumption totals `(sum_t delta^t 1'(1/2 + y(t)), sum_t delta^t 1'(1/2 - y(t)))`
    /// over `t = 0..=horizon`, accumulated along the simulated trajectory.
    pub fn discounted_totals(&self, y0: &DVector<f64>, delta: f64, horizon: usize) -> Result<(f64, f64)> {
        let mut discount = 1.0;
        let mut totals = (0.0, 0.0);
        for state in self.trajectory(y0, horizon)? {
            totals.0 += discount * state.total_a();
            totals.1 += discount * state.total_b();
            discount *= delta;
        }
        Ok(totals)
    }
}

/// Bound on what [`DynamicsOperator::discounted_totals`] leaves out:
/// `n delta^(T+1) / (1 - delta) * (1/2 + max|y|)`.
pub fn discount_tail_bound(n: usize, delta: f64, horizon: usize, max_abs_y: f64) -> f64 {
    n as f64 * delta.powi(horizon as i32 + 1) / (1.0 - delta) * (0.5 + max_abs_y)
}
