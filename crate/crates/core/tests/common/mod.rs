use netseed::Network;
use rand::Rng;

/// Random row-stochastic network without self-loops; every agent listens to
/// at least one other agent.
pub fn random_network<R: Rng>(rng: &mut R, n: usize) -> Network {
    let density: f64 = rng.gen_range(0.05..1.0);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row: Vec<f64> = (0..n)
                .map(|j| {
                    if j != i && rng.gen_bool(density) {
                        rng.gen_range(0.01..1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            if row.iter().all(|&w| w == 0.0) {
                row[(i + rng.gen_range(1..n)) % n] = 1.0;
            }
            let s: f64 = row.iter().sum();
            row.iter().map(|w| w / s).collect()
        })
        .collect();
    Network::from_rows(&rows).expect("generated network is valid")
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-0.5..=0.5)).collect()
}
