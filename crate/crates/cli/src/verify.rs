//! Randomized property suites. Each trial draws its own generator from
//! `(seed, suite, trial)`, so reports do not depend on thread scheduling.

use std::path::Path;

use netblow_core::random::{random_admissible, random_field, random_network, NetworkShape};
use netblow_core::spectral::{eigen_residual, rayleigh_quotient};
use netblow_core::{
    compare_runs, first_eigenpair, integrate, pairing_identity_residual, Network, Nonlinearity,
    SolveConfig,
};
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;

use crate::commands::{load_network, num};
use crate::config::RunConfig;
use crate::error::CliError;

/// `(passed, measure)`; larger measures are worse.
type Trial = (bool, f64);

struct Suite<'a> {
    name: &'static str,
    run: Box<dyn Fn(&mut SplitMix64) -> Trial + Sync + 'a>,
}

fn trial_rng(seed: u64, suite: usize, trial: usize) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed ^ ((suite as u64) << 48) ^ trial as u64)
}

fn summation_by_parts(rng: &mut SplitMix64) -> Trial {
    let net = random_network(rng, &NetworkShape::with_max_vertices(50));
    let n = net.len();
    let f = random_field(rng, n, -1.0, 1.0);
    let g = random_field(rng, n, -1.0, 1.0);
    let residual = pairing_identity_residual(&net, &f, &g).expect("sized fields");
    let scale = 1.0
        + net
            .edges()
            .map(|(x, y, w)| 2.0 * ((f[y] - f[x]) * (g[y] - g[x]) * w).abs())
            .sum::<f64>();
    let measure = residual / scale;
    (measure <= 1e-12, measure)
}

fn eigenpair(rng: &mut SplitMix64) -> Trial {
    let net = random_network(rng, &NetworkShape::with_max_vertices(20));
    let Ok(pair) = first_eigenpair(&net) else {
        return (false, f64::INFINITY);
    };
    let l = pair.lambda0;
    let measure = eigen_residual(&net, &pair).expect("sized") / l;
    let mut ok = measure <= 1e-10
        && net.interior().iter().all(|&x| pair.phi0[x] > 0.0)
        && (pair.phi0.sum_squares() - 1.0).abs() <= 1e-12
        && l <= net.min_interior_degree() * (1.0 + 1e-12);
    for _ in 0..20 {
        let u = random_admissible(rng, &net, -1.0, 1.0);
        if u.sum_squares() > 0.0 {
            ok &= rayleigh_quotient(&net, &u).expect("admissible") >= l * (1.0 - 1e-12);
        }
    }
    (ok, measure)
}

fn comparison(rng: &mut SplitMix64, f: &Nonlinearity, horizon: f64) -> Trial {
    let net = random_network(rng, &NetworkShape::with_max_vertices(12));
    let v0 = random_admissible(rng, &net, 0.0, 1.0);
    let mut u0 = v0.clone();
    for &x in net.interior() {
        u0[x] += rng.random_range(0.0..=0.5);
    }
    let cfg = SolveConfig {
        t_end: horizon,
        record_every: horizon / 10.0,
        ..SolveConfig::default()
    };
    match compare_runs(&net, f, &u0, &v0, &cfg) {
        Ok(rep) => {
            let measure = rep
                .samples
                .iter()
                .flat_map(|s| net.interior().iter().map(move |&x| -s.gap[x] / (1.0 + s.sup_u)))
                .fold(f64::NEG_INFINITY, f64::max);
            (rep.ordered, measure)
        }
        Err(_) => (false, f64::INFINITY),
    }
}

fn energy_monotone(rng: &mut SplitMix64, net: &Network, f: &Nonlinearity, gamma: f64, t_end: f64) -> Trial {
    let u0 = random_admissible(rng, net, 0.0, 1.0);
    if u0.iter().all(|&v| v == 0.0) {
        return (true, 0.0);
    }
    let cfg = SolveConfig {
        t_end,
        record_every: t_end / 10.0,
        ..SolveConfig::default()
    };
    let Ok(traj) = integrate(net, f, &u0, &cfg) else {
        return (false, f64::INFINITY);
    };
    let n = net.len();
    let measure = traj
        .steps
        .windows(2)
        .map(|w| {
            let (j0, j1) = (w[0].j(gamma, n), w[1].j(gamma, n));
            let scale = 1f64.max(j0.abs()).max(j1.abs()).max(w[0].energy).max(w[0].sum_big_f);
            (j0 - j1) / scale
        })
        .fold(f64::NEG_INFINITY, f64::max);
    (measure <= 1e-9, measure)
}

pub fn verify(config: &Path, trials: usize, seed: u64) -> Result<i32, CliError> {
    let cfg = RunConfig::load(config)?;
    let net = load_network(&cfg.network)?;
    first_eigenpair(&net)?;
    let f = cfg.f.clone();
    let horizon = cfg.solve.t_end.min(0.2);
    let energy_horizon = cfg.solve.t_end.min(0.5);

    let suites = [
        Suite {
            name: "summation_by_parts",
            run: Box::new(summation_by_parts),
        },
        Suite {
            name: "eigenpair_rayleigh",
            run: Box::new(eigenpair),
        },
        Suite {
            name: "comparison",
            run: Box::new(|rng: &mut SplitMix64| comparison(rng, &f, horizon)),
        },
        Suite {
            name: "energy_monotone",
            run: Box::new(|rng: &mut SplitMix64| {
                energy_monotone(rng, &net, &f, cfg.gamma, energy_horizon)
            }),
        },
    ];

    println!("suite,trials,passed,worst");
    let mut all = true;
    for (id, suite) in suites.iter().enumerate() {
        let results: Vec<Trial> = (0..trials)
            .into_par_iter()
            .map(|i| (suite.run)(&mut trial_rng(seed, id, i)))
            .collect();
        let passed = results.iter().filter(|r| r.0).count();
        let worst = results.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
        all &= passed == trials;
        println!("{},{trials},{passed},{}", suite.name, num(worst));
    }
    println!("# result={}", if all { "pass" } else { "fail" });
    Ok(if all { 0 } else { 1 })
}
