//! Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero on any failure.

mod common;

use std::time::{Duration, Instant};

use nalgebra::DVector;
use netseed::allocation::{
    allocate_with_profile, classify_regime, firm_utilities, max_seed_count, quality_value, seeding_capacity, thresholds,
};
use netseed::analysis::{check_equal_budget, sweep, SweepOptions, SweepParam};
use netseed::centrality::{centrality, centrality_sum_identity, star_centralities};
use netseed::dynamics::discount_tail_bound;
use netseed::{DynamicsOperator, Firm, ModelParams, Network, Regime};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{random_network, random_state};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden(name: &str, actual: f64, expected: f64) -> Result<(), String> {
    ensure((actual - expected).abs() <= 1e-9, || {
        format!("{name} = {actual}, expected {expected}")
    })
}

fn example_golden_values() -> Outcome {
    let start = Instant::now();
    let p = ModelParams::example1();
    let n = 15;
    let zeros = vec![0.0; n];
    let t = thresholds(&p, n);
    golden("threshold a", t.a, 2.5)?;
    golden("threshold b", t.b, 2.5)?;
    ensure(max_seed_count(&p, n, Firm::A).map_err(|e| e.to_string())? == 3, || {
        "k != 3".into()
    })?;
    let ring = centrality(&Network::balanced_ring(n, 2).unwrap(), &p).map_err(|e| e.to_string())?;
    golden("v_bar", ring.v_bar, 4.0 / 3.0)?;
    let star = centrality(&Network::star(n).unwrap(), &p).map_err(|e| e.to_string())?;
    golden("v_h", star.v_max, 4.8)?;
    golden("v_h closed form", star_centralities(n, &p).unwrap().0, 4.8)?;
    for (name, net, expected) in [
        ("balanced", Network::balanced_ring(n, 2).unwrap(), 0.0),
        ("star", Network::star(n).unwrap(), 0.5),
        ("3-star", Network::k_star(n, 3).unwrap(), 1.5),
    ] {
        let cap = seeding_capacity(&net, &p, &zeros, Firm::A).map_err(|e| e.to_string())?;
        golden(&format!("{name} capacity"), cap.capacity, expected)?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("all golden values within 1e-9 in {elapsed:.1?}"))
}

fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams {
        alpha: rng.gen_range(0.5..=1.0),
        delta: rng.gen_range(0.0..0.95),
        q_a: rng.gen_range(0.1..5.0),
        q_b: rng.gen_range(0.1..5.0),
        c_s: rng.gen_range(0.05..3.0),
        c_q: rng.gen_range(0.05..3.0),
        budget_a: rng.gen_range(0.0..5.0),
        budget_b: rng.gen_range(0.0..5.0),
    }
}

/// Criteria 2 and 3 share their scenarios.
fn utilities_vs_simulation() -> (Outcome, Outcome) {
    const HORIZON: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut worst_ratio: f64 = 0.0;
    let mut worst_sum: f64 = 0.0;
    let mut sim_err = None;
    let mut sum_err = None;
    for case in 0..50 {
        let n = rng.gen_range(2..=20);
        let net = random_network(&mut rng, n);
        let p = random_params(&mut rng);
        let y0 = random_state(&mut rng, n);
        let u = firm_utilities(&net, &p, &y0).unwrap();
        let op = DynamicsOperator::new(&net, &p).unwrap();
        let (sim_a, sim_b) = op
            .discounted_totals(&DVector::from_vec(y0.clone()), p.delta, HORIZON)
            .unwrap();
        let bound = discount_tail_bound(n, p.delta, HORIZON, 0.5) + 1e-9;
        let gap = (u.a - sim_a).abs().max((u.b - sim_b).abs());
        worst_ratio = worst_ratio.max(gap / bound);
        if gap > bound && sim_err.is_none() {
            sim_err = Some(format!("case {case}: gap {gap:e} exceeds tail bound {bound:e}"));
        }
        // the truncated simulation must also split exactly sum_t delta^t n
        let truncated = n as f64 * (1.0 - p.delta.powi(HORIZON as i32 + 1)) / (1.0 - p.delta);
        let sum_gap = (u.a + u.b - n as f64 / (1.0 - p.delta))
            .abs()
            .max((sim_a + sim_b - truncated).abs());
        worst_sum = worst_sum.max(sum_gap);
        if sum_gap > 1e-9 && sum_err.is_none() {
            sum_err = Some(format!("case {case}: U_a + U_b off by {sum_gap:e}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(10) && sim_err.is_none() {
        sim_err = Some(format!("took {elapsed:?}"));
    }
    let sim = match sim_err {
        Some(e) => Err(e),
        None => Ok(format!(
            "50 scenarios, worst gap {worst_ratio:.3} of the tail bound, {elapsed:.1?}"
        )),
    };
    let sum = match sum_err {
        Some(e) => Err(e),
        None => Ok(format!(
            "50 scenarios, closed form and simulation, worst deviation {worst_sum:.1e}"
        )),
    };
    (sim, sum)
}

fn centrality_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let n = rng.gen_range(2..=30);
        let net = random_network(&mut rng, n);
        let p = random_params(&mut rng);
        let prof = centrality(&net, &p).map_err(|e| e.to_string())?;
        let err = (prof.sum() - centrality_sum_identity(&p, n)).abs();
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("case {case}: sum identity off by {err:e}"))?;
        let (v_h, _) = star_centralities(n, &p).unwrap();
        ensure(prof.v_bar <= prof.v_max + 1e-9 && prof.v_max <= v_h + 1e-9, || {
            format!("case {case}: v_bar {} v_max {} v_h {v_h}", prof.v_bar, prof.v_max)
        })?;
    }
    Ok(format!("100 graphs, worst sum deviation {worst:.1e}"))
}

/// Best objective over seeds on the grid `{0, 1/steps, ..., 1} * capacity`
/// that fit in the budget.
fn grid_oracle(v: &[f64], cap: &[f64], budget: f64, c_s: f64, marginal_quality: f64, steps: usize) -> f64 {
    fn go(i: usize, seeded_value: f64, spent: f64, ctx: &(&[f64], &[f64], f64, f64, f64, usize), best: &mut f64) {
        let (v, cap, budget, c_s, mq, steps) = *ctx;
        if i == v.len() {
            *best = best.max(seeded_value + mq * (budget - spent));
            return;
        }
        for k in 0..=steps {
            let s = cap[i] * k as f64 / steps as f64;
            let cost = spent + c_s * s;
            if cost > budget + 1e-12 {
                break;
            }
            go(i + 1, seeded_value + v[i] * s, cost, ctx, best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    go(0, 0.0, 0.0, &(v, cap, budget, c_s, marginal_quality, steps), &mut best);
    best
}

fn water_filling_oracle() -> Outcome {
    const STEPS: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seeding_cases = 0;
    let mut worst_margin = f64::INFINITY;
    for case in 0..25 {
        let n = rng.gen_range(2..=6);
        let net = random_network(&mut rng, n);
        let mut p = ModelParams {
            alpha: rng.gen_range(0.5..0.9),
            delta: rng.gen_range(0.5..0.95),
            q_a: rng.gen_range(0.5..2.0),
            q_b: rng.gen_range(0.5..2.0),
            c_s: rng.gen_range(0.02..1.0),
            c_q: rng.gen_range(0.2..2.0),
            budget_a: 0.0,
            budget_b: 0.0,
        };
        let y0 = random_state(&mut rng, n);
        let firm = if rng.gen_bool(0.5) { Firm::A } else { Firm::B };
        let cap: Vec<f64> = y0.iter().map(|y| 0.5 - firm.sign() * y).collect();
        let budget = rng.gen_range(0.0..1.2) * p.c_s * cap.iter().sum::<f64>();
        match firm {
            Firm::A => p.budget_a = budget,
            Firm::B => p.budget_b = budget,
        }
        let prof = centrality(&net, &p).unwrap();
        let alloc = allocate_with_profile(&prof, &p, &y0, firm).map_err(|e| e.to_string())?;
        let qv = quality_value(&p, n, firm);
        let objective = alloc.objective(&prof.v, qv);
        let oracle = grid_oracle(&prof.v, &cap, budget, p.c_s, qv / p.c_q, STEPS);
        let resolution: f64 = prof.v.iter().zip(&cap).map(|(v, c)| v * c).sum::<f64>() / STEPS as f64;
        if alloc.seeded_amount() > 0.0 {
            seeding_cases += 1;
        }
        worst_margin = worst_margin.min(objective - oracle);
        ensure(objective >= oracle - 1e-9, || {
            format!("case {case}: allocator {objective} below grid optimum {oracle}")
        })?;
        ensure(oracle >= objective - resolution - 1e-9, || {
            format!("case {case}: grid optimum {oracle} further than {resolution} from {objective}")
        })?;
    }
    Ok(format!(
        "25 instances ({seeding_cases} with seeding), allocator minus grid optimum >= {worst_margin:.3e}"
    ))
}

fn sweep_networks() -> Vec<(String, Network)> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut nets = vec![
        ("star".to_string(), Network::star(15).unwrap()),
        ("ring".to_string(), Network::balanced_ring(15, 2).unwrap()),
        ("3-star".to_string(), Network::k_star(15, 3).unwrap()),
    ];
    for i in 0..3 {
        let n = rng.gen_range(5..=20);
        nets.push((format!("random#{i}"), random_network(&mut rng, n)));
    }
    nets
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect()
}

fn comparative_statics() -> Outcome {
    let base = ModelParams {
        q_a: 1.0,
        q_b: 1.0,
        ..ModelParams::example1()
    };
    let sweeps = [
        (SweepParam::Qa, grid(0.1, 5.0, 60)),
        (SweepParam::Qb, grid(0.1, 5.0, 60)),
        (SweepParam::Alpha, grid(0.5, 0.99, 60)),
        (SweepParam::Delta, grid(0.0, 0.97, 60)),
        (SweepParam::Cs, grid(0.05, 4.0, 60)),
        (SweepParam::Cq, grid(0.05, 4.0, 60)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut count = 0;
    for (name, net) in sweep_networks() {
        let n = net.n();
        let states = [vec![0.0; n], random_state(&mut rng, n)];
        for y0 in &states {
            for (param, values) in &sweeps {
                let res = sweep(&net, &base, y0, *param, values, SweepOptions::default()).map_err(|e| e.to_string())?;
                ensure(res.matches_expected(), || {
                    format!(
                        "{param} sweep on {name}: verdict {:?} on {:?}",
                        res.verdict,
                        res.measured()
                    )
                })?;
                count += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let mut strict = 0;
    for case in 0..100 {
        let n = rng.gen_range(2..=20);
        let net = random_network(&mut rng, n);
        let budget = rng.gen_range(0.0..5.0);
        let p = ModelParams {
            budget_a: budget,
            budget_b: budget,
            ..random_params(&mut rng)
        };
        let zeros = vec![0.0; n];
        ensure(check_equal_budget(&net, &p, &zeros).map_err(|e| e.to_string())?, || {
            format!("equal-budget case {case}: lower-quality firm seeds more")
        })?;
        if p.q_a < p.q_b {
            strict += 1;
        }
    }
    Ok(format!(
        "{count} sweeps without violations; 100 equal-budget instances ({strict} with q_a < q_b)"
    ))
}

fn regimes() -> Outcome {
    let n = 15;
    let base = ModelParams::example1();
    for (c_s, expected) in [
        (0.2, Regime::AllSeedable),
        (1.0, Regime::GraphDependent),
        (3.0, Regime::NoneSeedable),
    ] {
        let p = ModelParams { c_s, ..base };
        let t = thresholds(&p, n).a;
        let got = classify_regime(&p, n, Firm::A).map_err(|e| e.to_string())?;
        ensure(got == expected, || {
            format!("threshold {t}: got {got}, expected {expected}")
        })?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fired = (0, 0);
    for case in 0..200 {
        let n = rng.gen_range(3..=20);
        let net = random_network(&mut rng, n);
        let alpha = rng.gen_range(0.5..0.95);
        let delta = rng.gen_range(0.3..0.95);
        let p = ModelParams {
            alpha,
            delta,
            q_a: rng.gen_range(0.5..2.0),
            q_b: rng.gen_range(0.5..2.0),
            c_s: 1.0,
            c_q: 1.0,
            budget_a: 0.0,
            budget_b: 0.0,
        };
        // threshold drawn from [0.5, 1.2 v_h)
        let (v_h, _) = star_centralities(n, &p).unwrap();
        let unit = thresholds(&p, n).a;
        let target = rng.gen_range(0.5..v_h * 1.2);
        let p = ModelParams {
            c_s: target / unit,
            ..p
        };
        let y0: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.45..0.45)).collect();
        let cap = |g: &Network| {
            seeding_capacity(g, &p, &y0, Firm::A)
                .map(|r| r.capacity)
                .map_err(|e| e.to_string())
        };
        let ring_cap = cap(&Network::balanced_ring(n, 1).unwrap())?;
        let star_cap = cap(&Network::star(n).unwrap())?;
        let g_cap = cap(&net)?;
        if ring_cap > 0.0 {
            fired.0 += 1;
            ensure(g_cap > 0.0, || {
                format!("case {case}: balanced seeds but graph does not")
            })?;
        }
        if star_cap == 0.0 {
            fired.1 += 1;
            ensure(g_cap == 0.0, || {
                format!("case {case}: star seeds nothing but graph does")
            })?;
        }
    }
    Ok(format!(
        "3 constructed regimes; 200 graphs, balanced-nonzero fired {}x, star-zero fired {}x",
        fired.0, fired.1
    ))
}

fn dynamics_bounds() -> Outcome {
    const HORIZON: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut max_abs: f64 = 0.0;
    let mut max_gap: f64 = 0.0;
    for case in 0..1000 {
        let n = rng.gen_range(2..=20);
        let net = random_network(&mut rng, n);
        let p = random_params(&mut rng);
        let y0 = if rng.gen_bool(0.2) {
            (0..n).map(|_| if rng.gen_bool(0.5) { 0.5 } else { -0.5 }).collect()
        } else {
            random_state(&mut rng, n)
        };
        let op = DynamicsOperator::new(&net, &p).map_err(|e| e.to_string())?;
        let y0 = DVector::from_vec(y0);
        let rec = op.trajectory(&y0, HORIZON).map_err(|e| format!("case {case}: {e}"))?;
        let expanded = op.expanded_trajectory(&y0, HORIZON).map_err(|e| e.to_string())?;
        for (state, closed) in rec.iter().zip(&expanded) {
            max_abs = max_abs.max(state.y.amax());
            max_gap = max_gap.max((&state.y - closed).amax());
        }
        ensure(max_abs <= 0.5, || format!("case {case}: |y| reached {max_abs}"))?;
        ensure(max_gap <= 1e-10, || {
            format!("case {case}: expanded form off by {max_gap:e}")
        })?;
    }
    Ok(format!(
        "1000 trajectories, max |y| {max_abs}, max expanded-form gap {max_gap:.1e}"
    ))
}

fn main() {
    let (sim, fixed_sum) = utilities_vs_simulation();
    let results = [
        ("1 worked example golden values", example_golden_values()),
        ("2 closed-form utilities vs simulation", sim),
        ("3 fixed-sum payoffs", fixed_sum),
        ("4 centrality identities and bounds", centrality_identities()),
        ("5 water-filling vs grid oracle", water_filling_oracle()),
        ("6 comparative statics and equal budgets", comparative_statics()),
        ("7 regime classification", regimes()),
        ("8 dynamics bounds and expanded form", dynamics_bounds()),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
