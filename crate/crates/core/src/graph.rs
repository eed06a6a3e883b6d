//! Influence networks.
//!
//! A [`Network`] holds a row-stochastic, loop-free weight matrix `G` where
//! `g[i][j]` is the influence agent `j` has on agent `i`. Agents are 0-based
//! here and 1-based in every text format.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Absolute tolerance on each row sum.
pub const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    weights: DMatrix<f64>,
}

impl Network {
    /// Checks the invariants and wraps the matrix.
    pub fn validate(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        if n == 0 {
            return Err(Error::Size("a network needs at least one agent".into()));
        }
        if weights.ncols() != n {
            return Err(Error::NotSquare {
                rows: n,
                bad_row: 0,
                cols: weights.ncols(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let w = weights[(i, j)];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::NegativeWeight {
                        row: i,
                        col: j,
                        value: w,
                    });
                }
            }
            if weights[(i, i)] != 0.0 {
                return Err(Error::Diagonal {
                    agent: i,
                    value: weights[(i, i)],
                });
            }
            let sum: f64 = weights.row(i).iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::RowSum { row: i, sum });
            }
        }
        Ok(Self { weights })
    }

    /// Builds a network from nested rows. Ragged input is a [`Error::NotSquare`].
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((bad_row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                bad_row,
                cols: r.len(),
            });
        }
        Self::validate(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// Star on `n` agents with agent 0 as the center. The center listens to
    /// every leaf equally; every leaf listens only to the center.
    pub fn star(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Size(format!("star needs n >= 2, got {n}")));
        }
        let leaf_w = 1.0 / (n - 1) as f64;
        let weights = DMatrix::from_fn(n, n, |i, j| match (i, j) {
            (0, 0) => 0.0,
            (0, _) => leaf_w,
            (_, 0) => 1.0,
            _ => 0.0,
        });
        Self::validate(weights)
    }

    /// Circulant graph: agent `i` listens to agents `i+1, ..., i+d` (mod n)
    /// with weight `1/d` each. Doubly stochastic.
    pub fn balanced_ring(n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Size(format!("balanced ring needs n >= 2, got {n}")));
        }
        if d == 0 || d >= n {
            return Err(Error::Size(format!(
                "balanced ring degree must be in 1..={}, got {d}",
                n - 1
            )));
        }
        let w = 1.0 / d as f64;
        let weights = DMatrix::from_fn(n, n, |i, j| {
            let offset = (j + n - i) % n;
            if (1..=d).contains(&offset) {
                w
            } else {
                0.0
            }
        });
        Self::validate(weights)
    }

    /// Graph with `k` central agents (indices `0..k`) and `n - k` leaves.
    ///
    /// Leaves listen to the centers with weight `1/k` each; centers listen
    /// to the other centers with weight `1/(k-1)` each. Nobody listens to a
    /// leaf, so leaves keep the minimal centrality 1 and the centers share
    /// the rest of the centrality mass equally. `k = 1` is the star.
    pub fn k_star(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k + 1 > n {
            return Err(Error::Size(format!(
                "k-star needs 1 <= k and k + 1 <= n, got n = {n}, k = {k}"
            )));
        }
        if k == 1 {
            return Self::star(n);
        }
        let to_center = 1.0 / k as f64;
        let between_centers = 1.0 / (k - 1) as f64;
        let weights = DMatrix::from_fn(n, n, |i, j| {
            if j >= k || i == j {
                0.0
            } else if i < k {
                between_centers
            } else {
                to_center
            }
        });
        Self::validate(weights)
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[(i, j)]
    }

    /// Number of agents `i` listens to.
    pub fn out_degree(&self, i: usize) -> usize {
        self.weights.row(i).iter().filter(|&&w| w > 0.0).count()
    }

    /// Total influence each agent exerts on the others.
    pub fn column_sums(&self) -> Vec<f64> {
        self.weights.column_iter().map(|c| c.sum()).collect()
    }

    /// Parses the text graph format: a line holding `n`, then `n` rows of `n`
    /// whitespace-separated weights. Blank lines and lines starting with `#`
    /// are skipped. With `normalize`, each row is rescaled to sum to 1 before
    /// validation.
    pub fn parse(text: &str, normalize: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines.next().ok_or_else(|| Error::parse("line 1", "empty graph file"))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse(format!("line {line_no}"), format!("bad agent count {header:?}")))?;
        if n == 0 {
            return Err(Error::parse(format!("line {line_no}"), "agent count must be positive"));
        }

        let mut rows = Vec::with_capacity(n);
        for (line_no, line) in lines {
            if rows.len() == n {
                return Err(Error::parse(
                    format!("line {line_no}"),
                    "more rows than the declared agent count",
                ));
            }
            let row = line
                .split_whitespace()
                .map(f64::from_str)
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::parse(format!("line {line_no}"), e.to_string()))?;
            if row.len() != n {
                return Err(Error::parse(
                    format!("line {line_no}"),
                    format!("expected {n} weights, found {}", row.len()),
                ));
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::parse(
                "end of file",
                format!("expected {n} rows, found {}", rows.len()),
            ));
        }

        if normalize {
            for (i, row) in rows.iter_mut().enumerate() {
                let sum: f64 = row.iter().sum();
                if sum <= 0.0 || !sum.is_finite() {
                    return Err(Error::RowSum { row: i, sum });
                }
                row.iter_mut().for_each(|w| *w /= sum);
            }
        }
        Self::from_rows(&rows)
    }

    /// Serializes to the text graph format. Weights are written with full
    /// precision so that `parse(to_text())` reproduces the matrix.
    pub fn to_text(&self) -> String {
        let n = self.n();
        let mut out = format!("{n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| format!("{:?}", self.weights[(i, j)])).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_agent_swap_is_valid() {
        let net = Network::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(net.n(), 2);
        assert_eq!(net.column_sums(), vec![1.0, 1.0]);
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = Network::from_rows(&[vec![0.5, 0.5], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::Diagonal { agent: 0, .. }));
    }

    #[test]
    fn short_row_sum_is_rejected() {
        let err = Network::from_rows(&[vec![0.0, 0.9], vec![1.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::RowSum { row: 0, .. }));
    }

    #[test]
    fn negative_weight_is_rejected() {
        let err = Network::from_rows(&[vec![0.0, 1.5, -0.5], vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NegativeWeight { row: 0, col: 2, .. }));
    }

    #[test]
    fn ragged_and_empty_inputs() {
        assert!(matches!(
            Network::from_rows(&[vec![0.0, 1.0], vec![1.0]]),
            Err(Error::NotSquare { bad_row: 1, .. })
        ));
        assert!(matches!(Network::from_rows(&[]), Err(Error::Size(_))));
    }

    #[test]
    fn star_of_three() {
        let net = Network::star(3).unwrap();
        let expected = [[0.0, 0.5, 0.5], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &w) in row.iter().enumerate() {
                assert_eq!(net.weight(i, j), w);
            }
        }
        assert!(matches!(Network::star(1), Err(Error::Size(_))));
    }

    #[test]
    fn star_out_degrees() {
        let net = Network::star(15).unwrap();
        assert_eq!(net.out_degree(0), 14);
        assert!((1..15).all(|i| net.out_degree(i) == 1));
    }

    #[test]
    fn ring_of_three_is_complete() {
        let net = Network::balanced_ring(3, 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 0.0 } else { 0.5 };
                assert_eq!(net.weight(i, j), expected);
            }
        }
    }

    #[test]
    fn rings_are_doubly_stochastic() {
        for n in 2..12 {
            for d in 1..n {
                let net = Network::balanced_ring(n, d).unwrap();
                for s in net.column_sums() {
                    assert!((s - 1.0).abs() < 1e-12, "n={n} d={d} col sum {s}");
                }
            }
        }
        assert!(Network::balanced_ring(5, 0).is_err());
        assert!(Network::balanced_ring(5, 5).is_err());
    }

    #[test]
    fn k_star_shapes() {
        assert_eq!(Network::k_star(15, 1).unwrap(), Network::star(15).unwrap());
        assert!(matches!(Network::k_star(3, 3), Err(Error::Size(_))));
        assert!(matches!(Network::k_star(5, 0), Err(Error::Size(_))));

        let net = Network::k_star(15, 3).unwrap();
        let cols = net.column_sums();
        for c in 0..3 {
            // 12 leaves at 1/3 plus 2 centers at 1/2
            assert!((cols[c] - 5.0).abs() < 1e-12);
        }
        assert!(cols[3..].iter().all(|&s| s == 0.0));
    }

    #[test]
    fn text_format_round_trip() {
        let net = Network::k_star(7, 2).unwrap();
        let back = Network::parse(&net.to_text(), false).unwrap();
        assert_eq!(net, back);
    }

    #[test]
    fn parse_comments_and_normalize() {
        let text = "# two agents\n2\n0 2\n# second row\n3 0\n";
        assert!(matches!(Network::parse(text, false), Err(Error::RowSum { row: 0, .. })));
        let net = Network::parse(text, true).unwrap();
        assert_eq!(net.weight(0, 1), 1.0);
        assert_eq!(net.weight(1, 0), 1.0);
    }

    #[test]
    fn parse_errors_name_the_line() {
        match Network::parse("2\n0 1\n1 x\n", false) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 3"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(Network::parse("3\n0 1 0\n", false), Err(Error::Parse { .. })));
        assert!(matches!(Network::parse("", false), Err(Error::Parse { .. })));
    }
}
