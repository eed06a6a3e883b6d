//! Competing firms spreading substitutable products over an influence network.
//!
//! Agents split their consumption between products `a` and `b` and update it
//! by myopic best response to their neighbors. Each firm holds a budget it can
//! spend on free seeding of chosen agents or on marginal quality improvement.
//! The crate computes the consumption dynamics, the discounted centralities
//! that price a seed, the firms' payoffs and the threshold ("water-filling")
//! allocation that is optimal for each firm, together with the sweeps used to
//! check how that allocation responds to the model's parameters.
//!
//! ```
//! use netseed::{allocation, Firm, ModelParams, Network};
//!
//! let params = ModelParams { budget_a: 10.0, ..ModelParams::example1() };
//! let net = Network::star(15).unwrap();
//! let alloc = allocation::optimal_allocation(&net, &params, &[0.0; 15], Firm::A).unwrap();
//! assert_eq!(alloc.seeded_agents(), vec![0]);
//! assert!((alloc.dq - 9.5).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x <= tol)` also rejects NaN

pub mod allocation;
pub mod analysis;
pub mod centrality;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod params;

pub use allocation::{Allocation, Equilibrium, Regime, SeedingCapacityReport, Thresholds};
pub use centrality::CentralityProfile;
pub use dynamics::{ConsumptionState, DynamicsOperator};
pub use error::{Error, Result};
pub use graph::Network;
pub use params::{Firm, ModelParams};
