//! Parameter sweeps for checking how the optimal seeding responds to
//! qualities, model coefficients and costs.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::allocation::{allocate_with_profile, demand_capacity};
use crate::centrality::{centrality, CentralityProfile};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::params::{Firm, ModelParams};

/// Absolute slack allowed between adjacent values of a monotone sequence.
pub const MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParam {
    Qa,
    Qb,
    Alpha,
    Delta,
    Cs,
    Cq,
}

impl SweepParam {
    fn apply(self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        match self {
            SweepParam::Qa => p.q_a = value,
            SweepParam::Qb => p.q_b = value,
            SweepParam::Alpha => p.alpha = value,
            SweepParam::Delta => p.delta = value,
            SweepParam::Cs => p.c_s = value,
            SweepParam::Cq => p.c_q = value,
        }
        p
    }

    /// Whether the centrality vector moves with this parameter.
    fn moves_centrality(self) -> bool {
        matches!(self, SweepParam::Alpha | SweepParam::Delta)
    }

    /// Direction the optimal seeding of firm `a` takes as the parameter grows.
    pub fn expected_response(self) -> Response {
        match self {
            SweepParam::Qa | SweepParam::Alpha | SweepParam::Cq => Response::Nondecreasing,
            SweepParam::Delta | SweepParam::Cs => Response::Nonincreasing,
            SweepParam::Qb => Response::ValleyAtOwnQuality,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepParam::Qa => "qa",
            SweepParam::Qb => "qb",
            SweepParam::Alpha => "alpha",
            SweepParam::Delta => "delta",
            SweepParam::Cs => "cs",
            SweepParam::Cq => "cq",
        })
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "qa" => SweepParam::Qa,
            "qb" => SweepParam::Qb,
            "alpha" => SweepParam::Alpha,
            "delta" => SweepParam::Delta,
            "cs" => SweepParam::Cs,
            "cq" => SweepParam::Cq,
            other => {
                return Err(Error::parse(
                    "--param",
                    format!("unknown parameter {other:?}, expected qa, qb, alpha, delta, cs or cq"),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Response {
    Nondecreasing,
    Nonincreasing,
    /// Nonincreasing up to the firm's own quality, nondecreasing after it.
    ValleyAtOwnQuality,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every adjacent pair within the slack; both nondecreasing and nonincreasing.
    Constant,
    Increasing,
    Decreasing,
    NonMonotone,
}

impl Verdict {
    pub fn is_nondecreasing(self) -> bool {
        matches!(self, Verdict::Constant | Verdict::Increasing)
    }

    pub fn is_nonincreasing(self) -> bool {
        matches!(self, Verdict::Constant | Verdict::Decreasing)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Increasing => "increasing",
            Verdict::Decreasing => "decreasing",
            Verdict::NonMonotone => "non-monotone",
        })
    }
}

pub fn verdict(values: &[f64]) -> Verdict {
    let up = values.windows(2).all(|w| w[1] >= w[0] - MONOTONE_SLACK);
    let down = values.windows(2).all(|w| w[1] <= w[0] + MONOTONE_SLACK);
    match (up, down) {
        (true, true) => Verdict::Constant,
        (true, false) => Verdict::Increasing,
        (false, true) => Verdict::Decreasing,
        (false, false) => Verdict::NonMonotone,
    }
}

/// How the budget is set at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SweepBudget {
    /// `c_s * total demand capacity + 1`, so the threshold rather than the
    /// budget limits seeding.
    #[default]
    Generous,
    /// Keep the base parameters' budget.
    Base,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub firm: Firm,
    pub budget: SweepBudget,
    /// Worker threads; 0 and 1 both run on the calling thread.
    pub jobs: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            firm: Firm::A,
            budget: SweepBudget::Generous,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub parameter: SweepParam,
    pub firm: Firm,
    pub grid: Vec<f64>,
    /// `||S*||_1` at each grid point.
    pub seed_amount: Vec<f64>,
    /// `c_s ||S*||_1` at each grid point.
    pub seed_spend: Vec<f64>,
    pub dq: Vec<f64>,
    /// Verdict on [`measured`](Self::measured).
    pub verdict: Verdict,
    /// Own quality of the swept firm, the expected valley of a rival-quality sweep.
    pub own_quality: f64,
}

impl SweepResult {
    /// The series the monotonicity claim is about: the seeded amount for a
    /// seeding-cost sweep (spend mixes price and quantity there), the seeding
    /// spend otherwise.
    pub fn measured(&self) -> &[f64] {
        match self.parameter {
            SweepParam::Cs => &self.seed_amount,
            _ => &self.seed_spend,
        }
    }

    /// Verdict on each prefix of the measured series.
    pub fn running_verdicts(&self) -> Vec<Verdict> {
        let m = self.measured();
        (1..=m.len()).map(|k| verdict(&m[..k])).collect()
    }

    /// Whether the measured series moves the way [`SweepParam::expected_response`] says.
    pub fn matches_expected(&self) -> bool {
        match self.parameter.expected_response() {
            Response::Nondecreasing => self.verdict.is_nondecreasing(),
            Response::Nonincreasing => self.verdict.is_nonincreasing(),
            Response::ValleyAtOwnQuality => self.valley_holds(),
        }
    }

    /// Nonincreasing over grid points at or below the own quality,
    /// nondecreasing over those at or above it.
    pub fn valley_holds(&self) -> bool {
        let m = self.measured();
        let left: Vec<f64> = self
            .grid
            .iter()
            .zip(m)
            .filter(|(g, _)| **g <= self.own_quality)
            .map(|(_, v)| *v)
            .collect();
        let right: Vec<f64> = self
            .grid
            .iter()
            .zip(m)
            .filter(|(g, _)| **g >= self.own_quality)
            .map(|(_, v)| *v)
            .collect();
        verdict(&left).is_nonincreasing() && verdict(&right).is_nondecreasing()
    }
}

struct PointResult {
    seed_amount: f64,
    seed_spend: f64,
    dq: f64,
}

fn evaluate_point(
    net: &Network,
    shared_profile: Option<&CentralityProfile>,
    params: &ModelParams,
    y0: &[f64],
    options: &SweepOptions,
) -> Result<PointResult> {
    let mut params = *params;
    if options.budget == SweepBudget::Generous {
        let total: f64 = demand_capacity(y0, options.firm)?.iter().sum();
        let generous = params.c_s * total + 1.0;
        match options.firm {
            Firm::A => params.budget_a = generous,
            Firm::B => params.budget_b = generous,
        }
    }
    params.validate()?;
    let owned;
    let profile = match shared_profile {
        Some(p) => p,
        None => {
            owned = centrality(net, &params)?;
            &owned
        }
    };
    let alloc = allocate_with_profile(profile, &params, y0, options.firm)?;
    Ok(PointResult {
        seed_amount: alloc.seeded_amount(),
        seed_spend: alloc.spend_seeding,
        dq: alloc.dq,
    })
}

/// Evaluates the optimal allocation at every grid value of `param`.
pub fn sweep(
    net: &Network,
    base: &ModelParams,
    y0: &[f64],
    param: SweepParam,
    grid: &[f64],
    options: SweepOptions,
) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::parse("--grid", "empty grid"));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParam {
            name: "grid",
            value: w[1],
            reason: "grid must be strictly increasing",
        });
    }
    let points: Vec<ModelParams> = grid.iter().map(|&g| param.apply(base, g)).collect();
    for p in &points {
        p.validate()?;
    }
    let shared = if param.moves_centrality() {
        None
    } else {
        Some(centrality(net, base)?)
    };

    let jobs = options.jobs.max(1).min(points.len());
    let results: Vec<Result<PointResult>> = if jobs == 1 {
        points
            .iter()
            .map(|p| evaluate_point(net, shared.as_ref(), p, y0, &options))
            .collect()
    } else {
        let chunk = points.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let handles: Vec<_> = points
                .chunks(chunk)
                .map(|slice| {
                    let shared = shared.as_ref();
                    let options = &options;
                    scope.spawn(move || {
                        slice
                            .iter()
                            .map(|p| evaluate_point(net, shared, p, y0, options))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    };

    let mut seed_amount = Vec::with_capacity(grid.len());
    let mut seed_spend = Vec::with_capacity(grid.len());
    let mut dq = Vec::with_capacity(grid.len());
    for r in results {
        let r = r?;
        seed_amount.push(r.seed_amount);
        seed_spend.push(r.seed_spend);
        dq.push(r.dq);
    }
    let mut result = SweepResult {
        parameter: param,
        firm: options.firm,
        grid: grid.to_vec(),
        seed_amount,
        seed_spend,
        dq,
        verdict: Verdict::Constant,
        own_quality: base.own_quality(options.firm),
    };
    result.verdict = verdict(result.measured());
    Ok(result)
}

/// Seeding of firm `a` as its own quality varies. Expected nondecreasing.
pub fn sweep_quality_own(net: &Network, base: &ModelParams, y0: &[f64], grid: &[f64]) -> Result<SweepResult> {
    sweep(net, base, y0, SweepParam::Qa, grid, SweepOptions::default())
}

/// Seeding of firm `a` as the rival quality varies. Expected to bottom out
/// where the qualities are equal.
pub fn sweep_quality_rival(net: &Network, base: &ModelParams, y0: &[f64], grid: &[f64]) -> Result<SweepResult> {
    sweep(net, base, y0, SweepParam::Qb, grid, SweepOptions::default())
}

/// Seeding of firm `a` as `alpha` or `delta` varies.
pub fn sweep_alpha_delta(
    net: &Network,
    base: &ModelParams,
    y0: &[f64],
    param: SweepParam,
    grid: &[f64],
) -> Result<SweepResult> {
    if !matches!(param, SweepParam::Alpha | SweepParam::Delta) {
        return Err(Error::parse("--param", format!("expected alpha or delta, got {param}")));
    }
    sweep(net, base, y0, param, grid, SweepOptions::default())
}

/// Seeding of firm `a` as `c_s` or `c_q` varies.
pub fn sweep_costs(
    net: &Network,
    base: &ModelParams,
    y0: &[f64],
    param: SweepParam,
    grid: &[f64],
) -> Result<SweepResult> {
    if !matches!(param, SweepParam::Cs | SweepParam::Cq) {
        return Err(Error::parse("--param", format!("expected cs or cq, got {param}")));
    }
    sweep(net, base, y0, param, grid, SweepOptions::default())
}

/// With equal budgets, checks that the lower-quality firm `a` seeds no more
/// than firm `b`: returns `false` only when `q_a <= q_b` and `||S_a*||_1 > ||S_b*||_1`.
pub fn check_equal_budget(net: &Network, params: &ModelParams, y0: &[f64]) -> Result<bool> {
    if params.budget_a != params.budget_b {
        return Err(Error::InvalidParam {
            name: "budget-b",
            value: params.budget_b,
            reason: "equal-budget comparison needs budget-a = budget-b",
        });
    }
    let profile = centrality(net, params)?;
    let a = allocate_with_profile(&profile, params, y0, Firm::A)?;
    let b = allocate_with_profile(&profile, params, y0, Firm::B)?;
    Ok(params.q_a > params.q_b || a.seeded_amount() <= b.seeded_amount() + MONOTONE_SLACK)
}
