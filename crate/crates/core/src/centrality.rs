//! Discounted walk centrality `v = (I - delta W')^{-1} 1`.
//!
//! `v_i` counts the discounted, weighted walks that carry agent `i`'s
//! consumption to the rest of the network. It is the marginal value to a
//! firm of one unit of initial consumption at agent `i`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::params::ModelParams;

/// Largest residual accepted from the direct solve.
pub const SOLVE_RESIDUAL_TOL: f64 = 1e-10;

/// Grid on which centralities are compared when ordering agents.
pub const RANKING_RESOLUTION: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityProfile {
    pub v: Vec<f64>,
    pub v_bar: f64,
    pub v_max: f64,
}

impl CentralityProfile {
    fn from_vector(v: Vec<f64>) -> Self {
        let v_bar = v.iter().sum::<f64>() / v.len() as f64;
        let v_max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self { v, v_bar, v_max }
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn sum(&self) -> f64 {
        self.v.iter().sum()
    }

    /// Agent indices by decreasing centrality, ties broken by ascending index.
    /// Centralities equal to within [`RANKING_RESOLUTION`] count as ties.
    pub fn ranking(&self) -> Vec<usize> {
        let key = |v: f64| (v / RANKING_RESOLUTION).round() as i64;
        let mut order: Vec<usize> = (0..self.v.len()).collect();
        order.sort_by_key(|&i| (std::cmp::Reverse(key(self.v[i])), i));
        order
    }
}

fn system_matrix(net: &Network, params: &ModelParams) -> DMatrix<f64> {
    let n = net.n();
    DMatrix::identity(n, n) - net.weights().transpose() * params.walk_decay()
}

/// Solves `(I - delta W') v = 1` by LU factorization.
pub fn centrality(net: &Network, params: &ModelParams) -> Result<CentralityProfile> {
    params.validate()?;
    let n = net.n();
    let system = system_matrix(net, params);
    let ones = DVector::from_element(n, 1.0);
    let v = system
        .clone()
        .lu()
        .solve(&ones)
        .ok_or_else(|| Error::Solve("I - delta W' is singular".into()))?;
    let residual = (&system * &v - &ones).amax();
    if !(residual <= SOLVE_RESIDUAL_TOL) {
        return Err(Error::Solve(format!("centrality residual {residual:e}")));
    }
    Ok(CentralityProfile::from_vector(v.iter().copied().collect()))
}

/// Truncated walk series `sum_k (delta W')^k 1`, stopped once the remaining
/// tail is provably below `tol`.
///
/// Every term is nonnegative and the entries of term `k` sum to `n r^k`
/// with `r = delta (1 - alpha) / (2 alpha)`, so after `K` terms the tail of
/// any entry is at most `r^K n / (1 - r)`.
pub fn centrality_series_oracle(net: &Network, params: &ModelParams, tol: f64) -> Vec<f64> {
    let n = net.n();
    let r = params.walk_decay();
    let step = net.weights().transpose() * r;
    let mut term = DVector::from_element(n, 1.0);
    let mut sum = DVector::zeros(n);
    let mut tail_scale = n as f64 / (1.0 - r);
    loop {
        sum += &term;
        tail_scale *= r;
        if tail_scale < tol {
            break;
        }
        term = &step * term;
    }
    sum.iter().copied().collect()
}

/// Common centrality of every agent in a balanced graph,
/// `2 alpha / (2 alpha - delta (1 - alpha))`.
pub fn balanced_centrality(params: &ModelParams) -> f64 {
    2.0 * params.alpha / (2.0 * params.alpha - params.delta * (1.0 - params.alpha))
}

/// `sum_i v_i = 2 alpha n / (2 alpha - delta (1 - alpha))` for every network.
pub fn centrality_sum_identity(params: &ModelParams, n: usize) -> f64 {
    n as f64 * balanced_centrality(params)
}

/// Centralities `(v_h, v_l)` of the center and of a leaf of the `n`-agent
/// star. `v_h` bounds the centrality of every agent in every `n`-agent graph.
pub fn star_centralities(n: usize, params: &ModelParams) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::Size(format!("star needs n >= 2, got {n}")));
    }
    let r = params.walk_decay();
    let leaves = (n - 1) as f64;
    let denom = 1.0 - r * r;
    Ok(((1.0 + r * leaves) / denom, (1.0 + r / leaves) / denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::random_network;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn balanced_ring_example() {
        let p = ModelParams::example1();
        let prof = centrality(&Network::balanced_ring(15, 2).unwrap(), &p).unwrap();
        for v in &prof.v {
            assert!((v - 4.0 / 3.0).abs() < 1e-12);
        }
        assert!((balanced_centrality(&p) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn star_example() {
        let p = ModelParams::example1();
        let prof = centrality(&Network::star(15).unwrap(), &p).unwrap();
        let (v_h, v_l) = star_centralities(15, &p).unwrap();
        assert!((v_h - 4.8).abs() < 1e-12);
        assert!((v_l - (1.0 + 0.25 / 14.0) / 0.9375).abs() < 1e-15);
        assert!((prof.v[0] - v_h).abs() < 1e-10);
        for v in &prof.v[1..] {
            assert!((v - v_l).abs() < 1e-10);
        }
        assert_eq!(prof.v_max, prof.v[0]);
        assert!(star_centralities(1, &p).is_err());
    }

    #[test]
    fn no_discount_gives_ones() {
        let p = ModelParams {
            delta: 0.0,
            ..ModelParams::example1()
        };
        let net = Network::k_star(6, 2).unwrap();
        assert!(centrality(&net, &p).unwrap().v.iter().all(|&v| v == 1.0));
        assert_eq!(centrality_series_oracle(&net, &p, 1e-12), vec![1.0; 6]);
        assert_eq!(star_centralities(6, &p).unwrap(), (1.0, 1.0));
        assert_eq!(balanced_centrality(&p), 1.0);
    }

    #[test]
    fn no_network_effect() {
        let p = ModelParams {
            alpha: 1.0,
            delta: 0.9,
            ..ModelParams::example1()
        };
        assert_eq!(balanced_centrality(&p), 1.0);
    }

    #[test]
    fn series_oracle_on_star() {
        let p = ModelParams::example1();
        let v = centrality_series_oracle(&Network::star(15).unwrap(), &p, 1e-12);
        assert!((v[0] - 4.8).abs() < 1e-12 + 1e-10);
    }

    #[test]
    fn k_star_centers_share_the_mass() {
        let p = ModelParams::example1();
        let prof = centrality(&Network::k_star(15, 3).unwrap(), &p).unwrap();
        // 15 * 0.25 / (3 * 0.75) + 1
        for c in 0..3 {
            assert!((prof.v[c] - 8.0 / 3.0).abs() < 1e-10);
        }
        for leaf in 3..15 {
            assert!((prof.v[leaf] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ranking_breaks_ties_by_index() {
        let prof = CentralityProfile::from_vector(vec![1.0, 2.0, 2.0, 1.5]);
        assert_eq!(prof.ranking(), vec![1, 2, 3, 0]);
        let noisy = CentralityProfile::from_vector(vec![1.0, 2.0 - 4e-16, 2.0 + 4e-16, 2.0]);
        assert_eq!(noisy.ranking(), vec![1, 2, 3, 0]);
    }

    #[test]
    fn random_graph_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(2..=30);
            let net = random_network(&mut rng, n);
            let p = ModelParams {
                alpha: rng.gen_range(0.5..=1.0),
                delta: rng.gen_range(0.0..0.99),
                ..ModelParams::example1()
            };
            let prof = centrality(&net, &p).unwrap();
            assert!((prof.sum() - centrality_sum_identity(&p, n)).abs() < 1e-9);
            let (v_h, _) = star_centralities(n, &p).unwrap();
            assert!(prof.v_bar <= prof.v_max + 1e-12);
            assert!(prof.v_max <= v_h + 1e-9);
            assert!(prof.v.iter().all(|&v| v >= 1.0 - 1e-12));

            // fixed-point form v = 1 + delta W' v
            let v = DVector::from_vec(prof.v.clone());
            let rhs = DVector::from_element(n, 1.0) + net.weights().transpose() * &v * p.walk_decay();
            assert!((rhs - &v).amax() < 1e-10);

            let series = centrality_series_oracle(&net, &p, 1e-11);
            for (a, b) in series.iter().zip(&prof.v) {
                assert!((a - b).abs() < 1e-11 + 1e-10);
            }
        }
    }
}
