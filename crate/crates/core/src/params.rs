use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Model parameters shared by the dynamics, centrality and allocation code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Weight of the isolation payoff, in `[1/2, 1]`.
    pub alpha: f64,
    /// Discount factor, in `[0, 1)`.
    pub delta: f64,
    pub q_a: f64,
    pub q_b: f64,
    /// Cost per unit of seeded consumption.
    pub c_s: f64,
    /// Cost per unit of quality improvement.
    pub c_q: f64,
    pub budget_a: f64,
    pub budget_b: f64,
}

impl ModelParams {
    /// The worked example: `alpha = delta = 1/2`, unit qualities and costs,
    /// no budget.
    pub const fn example1() -> Self {
        Self {
            alpha: 0.5,
            delta: 0.5,
            q_a: 1.0,
            q_b: 1.0,
            c_s: 1.0,
            c_q: 1.0,
            budget_a: 0.0,
            budget_b: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::InvalidParam { name, value, reason })
            }
        }
        check(
            "alpha",
            self.alpha,
            (0.5..=1.0).contains(&self.alpha),
            "isolation weight must lie in [1/2, 1]",
        )?;
        check(
            "delta",
            self.delta,
            (0.0..1.0).contains(&self.delta),
            "discount factor must lie in [0, 1)",
        )?;
        check("qa", self.q_a, self.q_a > 0.0, "quality must be positive")?;
        check("qb", self.q_b, self.q_b > 0.0, "quality must be positive")?;
        check("cs", self.c_s, self.c_s > 0.0, "seeding cost must be positive")?;
        check("cq", self.c_q, self.c_q > 0.0, "quality cost must be positive")?;
        check(
            "budget-a",
            self.budget_a,
            self.budget_a >= 0.0,
            "budget must be nonnegative",
        )?;
        check(
            "budget-b",
            self.budget_b,
            self.budget_b >= 0.0,
            "budget must be nonnegative",
        )?;
        Ok(())
    }

    /// `(1 - alpha) / (2 alpha)`: the row sum of the update matrix.
    pub fn neighbor_weight(&self) -> f64 {
        (1.0 - self.alpha) / (2.0 * self.alpha)
    }

    /// `delta (1 - alpha) / (2 alpha)`: the decay rate of the centrality series.
    pub fn walk_decay(&self) -> f64 {
        self.delta * self.neighbor_weight()
    }

    pub fn budget(&self, firm: Firm) -> f64 {
        match firm {
            Firm::A => self.budget_a,
            Firm::B => self.budget_b,
        }
    }

    pub fn own_quality(&self, firm: Firm) -> f64 {
        match firm {
            Firm::A => self.q_a,
            Firm::B => self.q_b,
        }
    }

    pub fn rival_quality(&self, firm: Firm) -> f64 {
        self.own_quality(firm.rival())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Firm {
    A,
    B,
}

impl Firm {
    pub fn rival(self) -> Firm {
        match self {
            Firm::A => Firm::B,
            Firm::B => Firm::A,
        }
    }

    /// Sign of this firm's product in the centered consumption `y`.
    pub fn sign(self) -> f64 {
        match self {
            Firm::A => 1.0,
            Firm::B => -1.0,
        }
    }
}

impl std::fmt::Display for Firm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Firm::A => "a",
            Firm::B => "b",
        })
    }
}

impl std::str::FromStr for Firm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" | "A" => Ok(Firm::A),
            "b" | "B" => Ok(Firm::B),
            other => Err(Error::parse(
                "--firm",
                format!("unknown firm {other:?}, expected a or b"),
            )),
        }
    }
}
