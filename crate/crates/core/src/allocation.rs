//! Firm payoffs and the optimal split of a budget between seeding and
//! quality improvement.
//!
//! Firm `a`'s payoff gain from seeding `S_a` and raising its quality by
//! `dq_a` is `v'S_a + 2 lambda q_b dq_a / (q_a + q_b)^2`, and does not depend
//! on what firm `b` does. Seeding agent `i` therefore returns `v_i / c_s` per
//! unit of money against `2 lambda q_b / (c_q (q_a + q_b)^2)` for quality, so
//! the optimum seeds agents in decreasing centrality while `v_i` beats the
//! threshold and puts whatever is left into quality.

use serde::Serialize;

use crate::centrality::{centrality, star_centralities, CentralityProfile};
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::params::{Firm, ModelParams};

/// `lambda = delta (1 - alpha) n / (2 (1 - delta) (2 alpha - delta (1 - alpha)))`,
/// the payoff weight of the quality gap `(q_a - q_b) / (q_a + q_b)`.
pub fn lambda(params: &ModelParams, n: usize) -> f64 {
    let ModelParams { alpha, delta, .. } = *params;
    delta * (1.0 - alpha) * n as f64 / (2.0 * (1.0 - delta) * (2.0 * alpha - delta * (1.0 - alpha)))
}

/// Payoff gained per unit of quality improvement by `firm`.
pub fn quality_value(params: &ModelParams, n: usize, firm: Firm) -> f64 {
    let total = params.q_a + params.q_b;
    2.0 * lambda(params, n) * params.rival_quality(firm) / (total * total)
}

fn check_initial(y0: &[f64], n: usize) -> Result<()> {
    if y0.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: y0.len(),
        });
    }
    match y0.iter().enumerate().find(|(_, y)| !(y.abs() <= 0.5)) {
        Some((agent, &value)) => Err(Error::Capacity { agent, value }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FirmUtilities {
    pub a: f64,
    pub b: f64,
}

/// Closed-form discounted consumption of each product starting from `y0`.
pub fn firm_utilities(net: &Network, params: &ModelParams, y0: &[f64]) -> Result<FirmUtilities> {
    let profile = centrality(net, params)?;
    check_initial(y0, net.n())?;
    let n = net.n() as f64;
    let total = n / (1.0 - params.delta);
    let seeded: f64 = profile.v.iter().zip(y0).map(|(v, y)| v * y).sum();
    let gap = (params.q_a - params.q_b) / (params.q_a + params.q_b);
    let a = total / 2.0 + seeded + lambda(params, net.n()) * gap;
    Ok(FirmUtilities { a, b: total - a })
}

/// Payoff changes `(dU_a, dU_b)` caused by the seedings and quality
/// increments of both firms, with `v` the centrality vector.
pub fn marginal_utility(
    params: &ModelParams,
    v: &[f64],
    seeds_a: &[f64],
    seeds_b: &[f64],
    dq_a: f64,
    dq_b: f64,
) -> Result<(f64, f64)> {
    let n = v.len();
    for s in [seeds_a, seeds_b] {
        if s.len() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: s.len(),
            });
        }
    }
    let dot = |s: &[f64]| v.iter().zip(s).map(|(v, s)| v * s).sum::<f64>();
    let du_a = dot(seeds_a) - dot(seeds_b) + quality_value(params, n, Firm::A) * dq_a
        - quality_value(params, n, Firm::B) * dq_b;
    Ok((du_a, -du_a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub a: f64,
    pub b: f64,
}

impl Thresholds {
    pub fn of(&self, firm: Firm) -> f64 {
        match firm {
            Firm::A => self.a,
            Firm::B => self.b,
        }
    }
}

/// Centrality above which seeding an agent beats quality improvement:
/// `v_c = 2 lambda (c_s / c_q) q_rival / (q_a + q_b)^2`.
pub fn thresholds(params: &ModelParams, n: usize) -> Thresholds {
    let ratio = params.c_s / params.c_q;
    Thresholds {
        a: ratio * quality_value(params, n, Firm::A),
        b: ratio * quality_value(params, n, Firm::B),
    }
}

/// Per-agent seeding headroom: `1/2 - y0` for firm `a`, `1/2 + y0` for `b`.
pub fn demand_capacity(y0: &[f64], firm: Firm) -> Result<Vec<f64>> {
    check_initial(y0, y0.len())?;
    Ok(y0.iter().map(|y| 0.5 - firm.sign() * y).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Allocation {
    pub firm: Firm,
    pub seeds: Vec<f64>,
    pub dq: f64,
    pub spend_seeding: f64,
    pub spend_quality: f64,
}

impl Allocation {
    /// `||S||_1`
    pub fn seeded_amount(&self) -> f64 {
        self.seeds.iter().sum()
    }

    pub fn total_spend(&self) -> f64 {
        self.spend_seeding + self.spend_quality
    }

    /// `v'S + quality_value * dq`, the quantity the firm maximizes.
    pub fn objective(&self, v: &[f64], quality_value: f64) -> f64 {
        v.iter().zip(&self.seeds).map(|(v, s)| v * s).sum::<f64>() + quality_value * self.dq
    }

    /// Agents receiving a positive seed, in index order.
    pub fn seeded_agents(&self) -> Vec<usize> {
        (0..self.seeds.len()).filter(|&i| self.seeds[i] > 0.0).collect()
    }
}

/// Everything the water-filling rule needs about one firm's problem.
#[derive(Debug, Clone, Copy)]
pub struct FillProblem<'a> {
    pub v: &'a [f64],
    /// Agents in the order they should be considered.
    pub order: &'a [usize],
    pub capacity: &'a [f64],
    pub threshold: f64,
    pub budget: f64,
    pub c_s: f64,
    pub c_q: f64,
}

/// Seeds agents in `order` while their centrality is strictly above the
/// threshold and money remains; the remainder buys quality.
pub fn water_fill(firm: Firm, problem: FillProblem<'_>) -> Allocation {
    let mut seeds = vec![0.0; problem.v.len()];
    let mut remaining = problem.budget;
    for &i in problem.order {
        if remaining <= 0.0 || problem.v[i] <= problem.threshold {
            break;
        }
        let amount = problem.capacity[i].min(remaining / problem.c_s);
        seeds[i] = amount;
        remaining = (remaining - amount * problem.c_s).max(0.0);
    }
    let spend_seeding = problem.c_s * seeds.iter().sum::<f64>();
    Allocation {
        firm,
        seeds,
        dq: remaining / problem.c_q,
        spend_seeding,
        spend_quality: remaining,
    }
}

/// Optimal allocation of `firm`'s budget given a precomputed centrality profile.
pub fn allocate_with_profile(
    profile: &CentralityProfile,
    params: &ModelParams,
    y0: &[f64],
    firm: Firm,
) -> Result<Allocation> {
    params.validate()?;
    check_initial(y0, profile.n())?;
    let capacity = demand_capacity(y0, firm)?;
    let order = profile.ranking();
    Ok(water_fill(
        firm,
        FillProblem {
            v: &profile.v,
            order: &order,
            capacity: &capacity,
            threshold: thresholds(params, profile.n()).of(firm),
            budget: params.budget(firm),
            c_s: params.c_s,
            c_q: params.c_q,
        },
    ))
}

pub fn optimal_allocation(net: &Network, params: &ModelParams, y0: &[f64], firm: Firm) -> Result<Allocation> {
    let profile = centrality(net, params)?;
    allocate_with_profile(&profile, params, y0, firm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    pub a: Allocation,
    pub b: Allocation,
    /// `y0 + S_a - S_b`, clamped to `[-1/2, 1/2]`.
    pub initial_state: Vec<f64>,
    /// Agents seeded by both firms.
    pub contested_agents: Vec<usize>,
    /// Agents whose joint initial state had to be clamped.
    pub clamped_agents: Vec<usize>,
    /// Whether each firm's payoff gain from its own move is the same
    /// whatever the rival plays.
    pub decoupled: bool,
}

/// Pair of best responses. Each firm's problem ignores the rival, so the
/// pair is a Nash equilibrium.
pub fn nash_equilibrium(net: &Network, params: &ModelParams, y0: &[f64]) -> Result<Equilibrium> {
    let profile = centrality(net, params)?;
    let a = allocate_with_profile(&profile, params, y0, Firm::A)?;
    let b = allocate_with_profile(&profile, params, y0, Firm::B)?;

    let mut initial_state = Vec::with_capacity(y0.len());
    let mut clamped_agents = Vec::new();
    for (i, y) in y0.iter().enumerate() {
        let joint = y + a.seeds[i] - b.seeds[i];
        let clamped = joint.clamp(-0.5, 0.5);
        if clamped != joint {
            clamped_agents.push(i);
        }
        initial_state.push(clamped);
    }
    let contested_agents = (0..y0.len())
        .filter(|&i| a.seeds[i] > 0.0 && b.seeds[i] > 0.0)
        .collect();

    let decoupled = is_decoupled(params, &profile.v, &a, &b)?;
    Ok(Equilibrium {
        a,
        b,
        initial_state,
        contested_agents,
        clamped_agents,
        decoupled,
    })
}

fn is_decoupled(params: &ModelParams, v: &[f64], a: &Allocation, b: &Allocation) -> Result<bool> {
    let zero = vec![0.0; v.len()];
    let du_a = |sa: &[f64], dqa, sb: &[f64], dqb| marginal_utility(params, v, sa, sb, dqa, dqb).map(|d| d.0);
    // gain of a's move against b's move, and against b doing nothing
    let vs_b = du_a(&a.seeds, a.dq, &b.seeds, b.dq)? - du_a(&zero, 0.0, &b.seeds, b.dq)?;
    let vs_idle = du_a(&a.seeds, a.dq, &zero, 0.0)? - du_a(&zero, 0.0, &zero, 0.0)?;
    // and symmetrically for b (dU_b = -dU_a)
    let b_vs_a = du_a(&a.seeds, a.dq, &zero, 0.0)? - du_a(&a.seeds, a.dq, &b.seeds, b.dq)?;
    let b_vs_idle = du_a(&zero, 0.0, &zero, 0.0)? - du_a(&zero, 0.0, &b.seeds, b.dq)?;
    let tol = 1e-9 * (1.0 + vs_idle.abs() + b_vs_idle.abs());
    Ok((vs_b - vs_idle).abs() <= tol && (b_vs_a - b_vs_idle).abs() <= tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedingCapacityReport {
    pub firm: Firm,
    pub threshold: f64,
    /// Amount seeded by the optimal allocation with an unlimited budget.
    pub capacity: f64,
    /// Agents with centrality strictly above the threshold.
    pub seeded_agents: Vec<usize>,
}

pub fn capacity_with_profile(
    profile: &CentralityProfile,
    params: &ModelParams,
    y0: &[f64],
    firm: Firm,
) -> Result<SeedingCapacityReport> {
    params.validate()?;
    check_initial(y0, profile.n())?;
    let headroom = demand_capacity(y0, firm)?;
    let threshold = thresholds(params, profile.n()).of(firm);
    let seeded_agents: Vec<usize> = (0..profile.n()).filter(|&i| profile.v[i] > threshold).collect();
    let capacity = seeded_agents.iter().map(|&i| headroom[i]).sum();
    Ok(SeedingCapacityReport {
        firm,
        threshold,
        capacity,
        seeded_agents,
    })
}

pub fn seeding_capacity(net: &Network, params: &ModelParams, y0: &[f64], firm: Firm) -> Result<SeedingCapacityReport> {
    let profile = centrality(net, params)?;
    capacity_with_profile(&profile, params, y0, firm)
}

/// Largest number of agents any `n`-agent graph can push above `firm`'s
/// threshold: `min(floor(n delta (1 - alpha) / ((v_c - 1)(2 alpha - delta (1 - alpha)))), n)`.
///
/// Returns 0 when the threshold is at or above the star center's centrality
/// and [`Error::Regime`] (carrying `n`) when it is at or below 1.
pub fn max_seed_count(params: &ModelParams, n: usize, firm: Firm) -> Result<usize> {
    params.validate()?;
    let threshold = thresholds(params, n).of(firm);
    let (v_h, _) = star_centralities(n, params)?;
    if threshold >= v_h {
        return Ok(0);
    }
    if threshold <= 1.0 {
        return Err(Error::Regime { threshold, n });
    }
    let ModelParams { alpha, delta, .. } = *params;
    let bound = n as f64 * delta * (1.0 - alpha) / ((threshold - 1.0) * (2.0 * alpha - delta * (1.0 - alpha)));
    Ok((bound.floor() as usize).min(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Threshold above every achievable centrality.
    NoneSeedable,
    /// Threshold below the minimal centrality 1.
    AllSeedable,
    GraphDependent,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::NoneSeedable => "none_seedable",
            Regime::AllSeedable => "all_seedable",
            Regime::GraphDependent => "graph_dependent",
        })
    }
}

/// Whether seeding depends on the graph at all. Equality at either end
/// counts as graph dependent.
pub fn classify_regime(params: &ModelParams, n: usize, firm: Firm) -> Result<Regime> {
    params.validate()?;
    let threshold = thresholds(params, n).of(firm);
    let (v_h, _) = star_centralities(n, params)?;
    Ok(if threshold > v_h {
        Regime::NoneSeedable
    } else if threshold < 1.0 {
        Regime::AllSeedable
    } else {
        Regime::GraphDependent
    })
}
