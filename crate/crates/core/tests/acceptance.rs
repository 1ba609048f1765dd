//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::f64::consts::LN_2;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use netblow_core::builders::{path, star};
use netblow_core::nonlinearity::{check_condition, find_initial_data, Condition, ConditionCParams};
use netblow_core::random::{random_admissible, random_field, random_network, NetworkShape};
use netblow_core::solver::{contraction_window, picard_local};
use netblow_core::spectral::{eigen_residual, interior_matrix, rayleigh_quotient};
use netblow_core::{
    compare_runs, concavity_certificate, concavity_report, energy_j, first_eigenpair,
    identity_residuals, integrate, pairing_identity_residual, Network, NodeField, Nonlinearity,
    Outcome, SolveConfig,
};
use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;

type Verdict = (bool, String);
type Criterion = (&'static str, fn() -> Verdict);

fn cfg(t_end: f64, record_every: f64) -> SolveConfig {
    SolveConfig {
        t_end,
        record_every,
        ..SolveConfig::default()
    }
}

fn summation_by_parts() -> Verdict {
    let start = Instant::now();
    let mut rng = SplitMix64::seed_from_u64(1);
    let shape = NetworkShape::with_max_vertices(50);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let net = random_network(&mut rng, &shape);
        let n = net.len();
        let f = random_field(&mut rng, n, -1.0, 1.0);
        let g = random_field(&mut rng, n, -1.0, 1.0);
        let residual = pairing_identity_residual(&net, &f, &g).unwrap();
        let mut scale: f64 = 1.0;
        for (x, y, w) in net.edges() {
            scale += 2.0 * ((f[y] - f[x]) * (g[y] - g[x]) * w).abs();
        }
        worst = worst.max(residual / scale);
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst <= 1e-12 && secs < 5.0,
        format!("worst residual/scale = {worst:.3e}, runtime {secs:.2} s"),
    )
}

fn eigenpair_contract() -> Verdict {
    let mut rng = SplitMix64::seed_from_u64(2);
    let shape = NetworkShape::with_max_vertices(20);
    let mut failures = Vec::new();
    let mut worst_oracle: f64 = 0.0;
    for trial in 0..200 {
        let net = random_network(&mut rng, &shape);
        let pair = first_eigenpair(&net).unwrap();
        let l = pair.lambda0;
        let residual = eigen_residual(&net, &pair).unwrap();
        let positive = net.interior().iter().all(|&x| pair.phi0[x] > 0.0);
        let norm_err = (pair.phi0.sum_squares() - 1.0).abs();
        let below_degree = l <= net.min_interior_degree() * (1.0 + 1e-12);
        let mut minimal = true;
        for _ in 0..100 {
            let u = random_admissible(&mut rng, &net, -1.0, 1.0);
            if u.sum_squares() > 0.0 && rayleigh_quotient(&net, &u).unwrap() < l * (1.0 - 1e-12) {
                minimal = false;
            }
        }
        let k = net.interior().len();
        let oracle = DMatrix::from_row_slice(k, k, &interior_matrix(&net))
            .symmetric_eigenvalues()
            .min();
        worst_oracle = worst_oracle.max((oracle - l).abs() / l);
        if !(residual <= 1e-10 * l && positive && norm_err <= 1e-12 && below_degree && minimal) {
            failures.push(trial);
        }
    }
    let mut closed = true;
    for k in 1..=10 {
        let l = first_eigenpair(&star(k, 1.0).unwrap()).unwrap().lambda0;
        closed &= (l - k as f64).abs() <= 1e-12;
    }
    let p4 = first_eigenpair(&path(4, 1.0).unwrap()).unwrap().lambda0;
    closed &= (p4 - 1.0).abs() <= 1e-10;
    (
        failures.is_empty() && closed && worst_oracle <= 1e-10,
        format!(
            "{} of 200 graphs failed, closed forms {}, worst relative gap to nalgebra {worst_oracle:.2e}",
            failures.len(),
            if closed { "ok" } else { "off" }
        ),
    )
}

fn comparison_principle() -> Verdict {
    let mut rng = SplitMix64::seed_from_u64(3);
    let shape = NetworkShape::with_max_vertices(12);
    let f = Nonlinearity::power(2.0).unwrap();
    let mut unordered = 0;
    let mut bound_failures = 0;
    let mut worst_ratio = f64::INFINITY;
    for _ in 0..1000 {
        let net = random_network(&mut rng, &shape);
        let v0 = random_admissible(&mut rng, &net, 0.0, 2.0);
        let mut u0 = v0.clone();
        for &x in net.interior() {
            u0[x] += rng.random_range(0.0..=1.0);
        }
        let star_vertex = *net
            .interior()
            .iter()
            .max_by(|&&a, &&b| (u0[a] - v0[a]).total_cmp(&(u0[b] - v0[b])))
            .unwrap();

        let lambda0 = first_eigenpair(&net).unwrap().lambda0;
        let params = ConditionCParams::new(3.0, ConditionCParams::beta_max(3.0, lambda0), 0.1);
        let mut horizon: f64 = 0.2;
        if let Ok(rep) = concavity_report(&net, &f, &params, lambda0, &u0) {
            horizon = horizon.min(rep.tstar_bound / 2.0);
        }
        let rep = compare_runs(&net, &f, &u0, &v0, &cfg(horizon, horizon / 10.0)).unwrap();
        if !rep.ordered {
            unordered += 1;
        }
        let tau0 = u0[star_vertex] - v0[star_vertex];
        let rate = net.degree(star_vertex).unwrap() + f.lipschitz_on(rep.max_sup_u);
        for s in rep.samples.iter().skip(1).take(10) {
            let bound = tau0 * (-rate * s.t).exp() * (1.0 - 1e-3);
            worst_ratio = worst_ratio.min(s.gap[star_vertex] / bound);
            if s.gap[star_vertex] < bound {
                bound_failures += 1;
            }
        }
    }
    (
        unordered == 0 && bound_failures == 0,
        format!(
            "{unordered} unordered trials, {bound_failures} strong-bound misses, min gap/bound = {worst_ratio:.4}"
        ),
    )
}

fn blowup_instance() -> Verdict {
    let net = star(2, 1.0).unwrap();
    let f = Nonlinearity::power(2.0).unwrap();
    let u0 = NodeField::indicator(3, 0, 4.0);
    let lambda0 = first_eigenpair(&net).unwrap().lambda0;
    let params = ConditionCParams::new(3.0, ConditionCParams::beta_max(3.0, lambda0), 0.1);
    let rep = concavity_report(&net, &f, &params, lambda0, &u0).unwrap();

    // J(0) = −(1/4)·2·2·16 + 4³/3 − 3·0.1
    let j0 = -16.0 + 64.0 / 3.0 - 0.3;
    let xi_exact = 1.5f64.sqrt() - 1.0;
    let m = 3.0 * (1.0 + 1.5f64.sqrt()) * 256.0 / (6.0 * j0);
    let tstar = m / (xi_exact * 16.0);
    let j_ok = (rep.j0 - j0).abs() <= 1e-9;
    let xi_ok = (rep.xi - xi_exact).abs() <= 1e-12;
    let m_ok = ((rep.m - m) / m).abs() <= 1e-9 && ((rep.tstar_bound - tstar) / tstar).abs() <= 1e-9;

    let traj = integrate(&net, &f, &u0, &cfg(2.0 * tstar, 0.01)).unwrap();
    let t_num = match traj.outcome {
        Outcome::BlowupDetected { t_num } => t_num,
        _ => f64::NAN,
    };
    let (margin, at) = concavity_certificate(&traj.i_series(rep.m), rep.xi).unwrap();
    (
        j_ok && xi_ok && m_ok && t_num <= rep.tstar_bound && margin > 0.0,
        format!(
            "J0 = {:.12}, xi = {:.12}, M = {:.9}, T* bound = {:.9}, T_num = {t_num:.9} (exact {:.9}), min certificate margin = {margin:.4e} at t = {at:.4}",
            rep.j0,
            rep.xi,
            rep.m,
            rep.tstar_bound,
            LN_2 / 2.0
        ),
    )
}

fn scalar_oracle() -> Verdict {
    let net = star(1, 1e-12).unwrap();
    let f = Nonlinearity::power(2.0).unwrap();
    let u0 = NodeField::indicator(2, 0, 1.0);
    let traj = integrate(&net, &f, &u0, &cfg(2.0, 0.01)).unwrap();
    match traj.outcome {
        Outcome::BlowupDetected { t_num } => (
            (t_num - 1.0).abs() <= 1e-3,
            format!("T_num = {t_num:.9}, |T_num - 1| = {:.3e}", (t_num - 1.0).abs()),
        ),
        other => (false, format!("outcome {other}")),
    }
}

fn exact_linear(net: &Network, a: f64, u0: &NodeField, t: f64) -> f64 {
    let k = net.interior().len();
    let mat = DMatrix::from_row_slice(k, k, &interior_matrix(net));
    let eig = mat.symmetric_eigen();
    let y0 = DVector::from_iterator(k, net.interior().iter().map(|&x| u0[x]));
    let coeffs = eig.eigenvectors.transpose() * y0;
    let decayed = DVector::from_iterator(
        k,
        coeffs
            .iter()
            .zip(eig.eigenvalues.iter())
            .map(|(c, mu)| c * ((a - mu) * t).exp()),
    );
    (eig.eigenvectors * decayed).norm_squared()
}

fn global_existence() -> Verdict {
    let mut rng = SplitMix64::seed_from_u64(6);
    let mut nets = vec![path(6, 1.0).unwrap(), star(3, 0.5).unwrap()];
    for _ in 0..8 {
        nets.push(random_network(&mut rng, &NetworkShape::default()));
    }
    let mut worst_rel: f64 = 0.0;
    let mut all_complete = true;
    let mut monotone = true;
    let mut found_initial = 0;
    for net in &nets {
        let lambda0 = first_eigenpair(net).unwrap().lambda0;
        let a = 0.9 * lambda0;
        let f = Nonlinearity::linear(a).unwrap();
        let u0 = random_admissible(&mut rng, net, 0.5, 2.0);
        // Relative error control only: Σu² decays by up to 15 orders of magnitude.
        let c = SolveConfig { abs_tol: 1e-20, ..cfg(20.0, 0.5) };
        let traj = integrate(net, &f, &u0, &c).unwrap();
        all_complete &= traj.outcome == Outcome::CompletedHorizon;
        monotone &= traj.steps.windows(2).all(|w| w[1].sum_u2 <= w[0].sum_u2);
        let exact = exact_linear(net, a, &u0, 20.0);
        worst_rel = worst_rel.max((traj.final_stats().sum_u2 - exact).abs() / exact);

        for slope in [0.9 * lambda0, lambda0] {
            let f = Nonlinearity::linear(slope).unwrap();
            for e in 0..=6 {
                let v_hi = 10f64.powi(e);
                if find_initial_data(net, &f, 0.1, v_hi).unwrap().is_some() {
                    found_initial += 1;
                }
            }
        }
    }
    (
        all_complete && monotone && worst_rel <= 1e-6 && found_initial == 0,
        format!(
            "completed {all_complete}, monotone {monotone}, worst relative gap to eigendecomposition {worst_rel:.3e}, initial data found {found_initial} times"
        ),
    )
}

fn condition_logic() -> Verdict {
    let mut rng = SplitMix64::seed_from_u64(7);
    let net = path(6, 1.0).unwrap();
    let lambda0 = first_eigenpair(&net).unwrap().lambda0;
    let mut broken = 0;
    for _ in 0..100 {
        let degree = rng.random_range(1..=5usize);
        let mut coeffs: Vec<f64> = (0..degree)
            .map(|_| {
                let c = rng.random_range(0.0..=3.0);
                if rng.random_bool(0.3) { 0.0 } else { c }
            })
            .collect();
        coeffs.push(rng.random_range(0.1..=3.0));
        let f = Nonlinearity::polynomial(coeffs).unwrap();
        let alpha = rng.random_range(2.05..=4.0);
        let params = ConditionCParams::new(alpha, ConditionCParams::beta_max(alpha, lambda0), 0.5);
        let holds = |c| check_condition(&f, c, &params, lambda0, 1e4, 2000).unwrap().holds_on_grid;
        let (a, b, c) = (holds(Condition::A), holds(Condition::B), holds(Condition::C));
        if (a && !b) || (b && !c) {
            broken += 1;
        }
    }

    let mut worst_power_margin: f64 = 0.0;
    for q in [1.5, 2.0, 3.0, 4.5] {
        let f = Nonlinearity::power(q).unwrap();
        let params = ConditionCParams::new(q + 1.0, 0.1, 0.1);
        let cert = check_condition(&f, Condition::A, &params, lambda0, 1e3, 1000).unwrap();
        let scale = 1e3 * f.f(1e3);
        worst_power_margin = worst_power_margin.max(cert.worst_margin.abs() / scale);
        if !cert.holds_on_grid || cert.analytic != Some(true) {
            broken += 1;
        }
    }

    // The (C) verdict of linear(a) on a fine grid of a around λ₀.
    let alpha = 3.0;
    let params = ConditionCParams::new(alpha, ConditionCParams::beta_max(alpha, lambda0), 0.01);
    let steps = 200;
    let mut flip = None;
    let mut previous = true;
    for i in 0..=steps {
        let a = lambda0 * (0.5 + i as f64 / steps as f64);
        let f = Nonlinearity::linear(a).unwrap();
        let cert = check_condition(&f, Condition::C, &params, lambda0, 1e8, 2000).unwrap();
        if cert.analytic != Some(cert.holds_on_grid) {
            broken += 1;
        }
        if previous && !cert.holds_on_grid && flip.is_none() {
            flip = Some(a);
        }
        previous = cert.holds_on_grid;
    }
    let resolution = lambda0 / steps as f64;
    let flip_ok = flip.is_some_and(|a| a > lambda0 && a - lambda0 <= resolution + 1e-12);
    (
        broken == 0 && worst_power_margin <= 1e-12 && flip_ok,
        format!(
            "{broken} broken implications or verdicts, worst power (A) margin {worst_power_margin:.2e}, linear (C) flips at a = {:.6} (lambda0 = {lambda0:.6}, step {resolution:.2e})",
            flip.unwrap_or(f64::NAN)
        ),
    )
}

fn energy_identities() -> Verdict {
    let net = path(6, 1.0).unwrap();
    let f = Nonlinearity::power(2.0).unwrap();
    let u0 = NodeField::new(vec![0.0, 0.4, 0.9, 0.6, 0.3, 0.0]);
    let tight = |h: f64| SolveConfig {
        t_end: 1.0,
        record_every: h,
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        ..SolveConfig::default()
    };
    let residual_at_half = |h: f64| {
        let traj = integrate(&net, &f, &u0, &tight(h)).unwrap();
        let mid = traj.times.iter().position(|&t| (t - 0.5).abs() < 1e-12).unwrap();
        let slice: Vec<(f64, NodeField)> =
            (mid - 1..=mid + 1).map(|k| (traj.times[k], traj.states[k].clone())).collect();
        identity_residuals(&net, &f, &slice).unwrap()
    };
    let coarse = residual_at_half(0.1);
    let fine = residual_at_half(0.05);
    let ratio12 = coarse.eq12_residual / fine.eq12_residual;
    let ratio13 = coarse.eq13_residual / fine.eq13_residual;

    let mut rng = SplitMix64::seed_from_u64(8);
    let mut worst_drop: f64 = 0.0;
    let mut runs = Vec::new();
    for _ in 0..50 {
        let net = random_network(&mut rng, &NetworkShape::default());
        let u0 = random_admissible(&mut rng, &net, 0.0, 3.0);
        runs.push((net, u0));
    }
    runs.push((star(2, 1.0).unwrap(), NodeField::indicator(3, 0, 4.0)));
    for (net, u0) in &runs {
        let traj = integrate(net, &f, u0, &cfg(1.0, 0.05)).unwrap();
        let n = net.len();
        for w in traj.steps.windows(2) {
            let (j0, j1) = (w[0].j(0.1, n), w[1].j(0.1, n));
            let scale = 1f64
                .max(j0.abs())
                .max(w[0].energy)
                .max(w[0].sum_big_f)
                .max(j1.abs());
            worst_drop = worst_drop.max((j0 - j1) / scale);
        }
        let direct = energy_j(net, &f, 0.1, u0).unwrap();
        let recorded = traj.steps[0].j(0.1, n);
        worst_drop = worst_drop.max((direct - recorded).abs() / 1f64.max(direct.abs()));
    }
    (
        ratio12 >= 3.5 && ratio13 >= 3.5 && worst_drop <= 1e-9,
        format!(
            "residual decay on halving: {ratio12:.3}x and {ratio13:.3}x, worst relative drop of J {worst_drop:.2e}"
        ),
    )
}

fn picard_oracle() -> Verdict {
    let net = path(6, 1.0).unwrap();
    let pair = first_eigenpair(&net).unwrap();
    let f = Nonlinearity::linear(0.0).unwrap();
    let c1 = contraction_window(&net, &f, &pair.phi0).unwrap();
    let t0 = 0.9 / c1;
    let sol = picard_local(&net, &f, &pair.phi0, t0, 1e-12).unwrap();
    // 1023 intervals = 31 outputs of 33 grid steps each.
    let traj = integrate(&net, &f, &pair.phi0, &cfg(t0, t0 / 31.0)).unwrap();
    let mut gap: f64 = 0.0;
    for (k, state) in traj.states.iter().enumerate() {
        let p = &sol.states[33 * k];
        for x in 0..net.len() {
            gap = gap.max((state[x] - p[x]).abs());
        }
    }
    let counts: Vec<usize> = [0.9, 0.1, 0.01, 0.001]
        .iter()
        .map(|r| picard_local(&net, &f, &pair.phi0, r / c1, 1e-12).unwrap().iterations)
        .collect();
    let decreasing = counts.windows(2).all(|w| w[1] < w[0]);
    (
        gap <= 1e-6 && decreasing && traj.states.len() == 32,
        format!("sup gap Picard vs RK = {gap:.3e}, iterations {counts:?}"),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("summation by parts", summation_by_parts),
        ("eigenpair contract", eigenpair_contract),
        ("comparison principle", comparison_principle),
        ("blow-up instance on P3", blowup_instance),
        ("scalar blow-up oracle", scalar_oracle),
        ("global existence for linear f", global_existence),
        ("condition logic", condition_logic),
        ("energy identities", energy_identities),
        ("Picard oracle", picard_oracle),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        if !ok {
            failed += 1;
        }
        println!("{} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
