use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use netblow_core::nonlinearity::{
    check_condition, find_initial_data, osgood_test, superlinear_minorant, Condition,
    ConditionCParams, ConditionCertificate, OsgoodVerdict,
};
use netblow_core::{
    concavity_report, energy_j, first_eigenpair, integrate, ConcavityReport, Network, NodeField,
    Outcome, Trajectory,
};

use crate::config::{InitialSpec, RunConfig};
use crate::error::CliError;

const OSGOOD_HORIZON: f64 = 1e100;

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn load_network(path: &Path) -> Result<Network, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Network::parse(&text).map_err(|source| CliError::Network {
        path: path.to_path_buf(),
        source,
    })
}

pub fn spectrum(graph: &Path) -> Result<i32, CliError> {
    let net = load_network(graph)?;
    let pair = first_eigenpair(&net)?;
    let mut out = String::new();
    writeln!(out, "lambda0 = {}", num(pair.lambda0)).unwrap();
    writeln!(out, "min_interior_degree = {}", num(net.min_interior_degree())).unwrap();
    writeln!(out, "max_interior_degree = {}", num(net.max_interior_degree())).unwrap();
    writeln!(out, "label,role,phi0").unwrap();
    for x in 0..net.len() {
        writeln!(out, "{},{},{}", net.label(x), net.role(x).as_str(), num(pair.phi0[x])).unwrap();
    }
    print!("{out}");
    Ok(0)
}

struct Setup {
    cfg: RunConfig,
    net: Network,
    lambda0: f64,
    params: ConditionCParams,
}

fn setup(config: &Path) -> Result<Setup, CliError> {
    let cfg = RunConfig::load(config)?;
    let net = load_network(&cfg.network)?;
    let lambda0 = first_eigenpair(&net)?.lambda0;
    let beta = cfg
        .beta
        .unwrap_or_else(|| ConditionCParams::beta_max(cfg.alpha, lambda0));
    let params = ConditionCParams::new(cfg.alpha, beta, cfg.gamma);
    Ok(Setup {
        cfg,
        net,
        lambda0,
        params,
    })
}

fn describe(which: Condition, cert: &ConditionCertificate) -> String {
    let detail = format!("worst margin {} at u={}", num(cert.worst_margin), num(cert.worst_u));
    match (cert.holds_on_grid, cert.analytic) {
        (true, Some(true)) => format!("({which}): holds (exact); {detail}"),
        (true, None) => format!("({which}): holds on grid; {detail}"),
        (true, Some(false)) => format!("({which}): fails (exact) beyond the grid; {detail}"),
        (false, Some(false)) => format!(
            "({which}): fails at u={} (exact); margin {}",
            num(cert.worst_u),
            num(cert.worst_margin)
        ),
        (false, _) => format!(
            "({which}): fails at u={}; margin {}",
            num(cert.worst_u),
            num(cert.worst_margin)
        ),
    }
}

fn certified(cert: &ConditionCertificate) -> bool {
    cert.holds_on_grid && cert.analytic != Some(false)
}

pub fn check(config: &Path) -> Result<i32, CliError> {
    let Setup {
        cfg,
        lambda0,
        params,
        ..
    } = setup(config)?;
    let f = &cfg.f;
    println!("f = {f}");
    println!("lambda0 = {}", num(lambda0));
    println!(
        "alpha = {}, beta = {}, gamma = {}",
        num(params.alpha),
        num(params.beta),
        num(params.gamma)
    );
    let beta_max = ConditionCParams::beta_max(params.alpha, lambda0);
    let beta_ok = params.validate(lambda0).is_ok();
    println!(
        "beta constraint: {} (0 < beta <= (alpha-2)*lambda0/2 = {})",
        if beta_ok { "satisfied" } else { "violated" },
        num(beta_max)
    );
    for which in [Condition::A, Condition::B, Condition::C] {
        match check_condition(f, which, &params, lambda0, cfg.u_max, cfg.grid_n) {
            Ok(cert) => println!("{}", describe(which, &cert)),
            Err(e) => println!("({which}): not evaluated ({e})"),
        }
    }
    let minorant = if params.alpha > 2.0 && cfg.u_max > 1.0 {
        superlinear_minorant(f, params.alpha, cfg.u_max)?
    } else {
        None
    };
    match minorant {
        Some(m) => println!("minorant: f(u) >= {} u^(alpha-1) for u >= {}", num(m.delta), num(m.m)),
        None => println!("minorant: none found on [1, {}]", num(cfg.u_max)),
    }
    let start = minorant.map_or(1.0, |m| m.m);
    match osgood_test(f, start, OSGOOD_HORIZON) {
        Ok(OsgoodVerdict::Converges {
            estimate,
            tail_bound,
        }) => println!(
            "osgood: converges from m={}, integral {} (tail bound {})",
            num(start),
            num(estimate),
            num(tail_bound)
        ),
        Ok(OsgoodVerdict::Diverges { partial, upper }) => println!(
            "osgood: diverges from m={} (partial integral {} up to {})",
            num(start),
            num(partial),
            num(upper)
        ),
        Err(e) => println!("osgood: not applicable ({e})"),
    }
    Ok(0)
}

fn initial_state(setup: &Setup) -> Result<Option<(NodeField, String)>, CliError> {
    let net = &setup.net;
    match &setup.cfg.u0 {
        InitialSpec::Auto => Ok(find_initial_data(net, &setup.cfg.f, setup.cfg.gamma, setup.cfg.v_hi)?
            .map(|d| {
                let note = format!("auto (level {})", num(d.level));
                (d.u0, note)
            })),
        InitialSpec::Constant(v) => Ok(Some((
            NodeField::constant_on_interior(net, *v),
            format!("constant {} on the interior", num(*v)),
        ))),
        InitialSpec::Values(values) => {
            let mut u = NodeField::zeros(net.len());
            for (label, v) in values {
                let x = net
                    .index_of(label)
                    .ok_or_else(|| CliError::Input(format!("u0: unknown vertex '{label}'")))?;
                u[x] = *v;
            }
            Ok(Some((u, "explicit values".to_string())))
        }
    }
}

pub fn find_initial(config: &Path) -> Result<i32, CliError> {
    let setup = setup(config)?;
    let cfg = &setup.cfg;
    let net = &setup.net;
    let omega0 = net.max_interior_degree();
    let gamma1 = cfg.gamma * net.len() as f64 / net.interior().len() as f64;
    println!("omega0 = {}", num(omega0));
    println!("gamma1 = {}", num(gamma1));
    match find_initial_data(net, &cfg.f, cfg.gamma, cfg.v_hi)? {
        None => println!("no qualifying initial data found up to v_hi = {}", num(cfg.v_hi)),
        Some(d) => {
            println!("level = {}", num(d.level));
            println!("J0 = {}", num(energy_j(net, &cfg.f, cfg.gamma, &d.u0)?));
            println!("label,u0");
            for x in 0..net.len() {
                println!("{},{}", net.label(x), num(d.u0[x]));
            }
        }
    }
    Ok(0)
}

fn trajectory_csv(net: &Network, traj: &Trajectory, gamma: f64, report: Option<&ConcavityReport>) -> String {
    let mut out = String::from("t");
    for label in net.labels() {
        out.push(',');
        out.push_str(label);
    }
    out.push_str(",sum_u2,J,I,Iprime,Iprimeprime,certificate_margin\n");
    let m = report.map_or(0.0, |r| r.m);
    for (k, (t, u)) in traj.times.iter().zip(&traj.states).enumerate() {
        let stats = traj.sample_stats(k);
        let sample = stats.i_sample(m);
        out.push_str(&num(*t));
        for v in u.iter() {
            out.push(',');
            out.push_str(&num(*v));
        }
        let margin = report.map_or(String::new(), |r| num(sample.margin(r.xi)));
        writeln!(
            out,
            ",{},{},{},{},{},{}",
            num(stats.sum_u2),
            num(stats.j(gamma, net.len())),
            num(sample.i),
            num(sample.i_prime),
            num(sample.i_double_prime),
            margin
        )
        .unwrap();
    }
    writeln!(out, "# outcome={}", traj.outcome).unwrap();
    out
}

pub fn simulate(config: &Path) -> Result<i32, CliError> {
    let setup = setup(config)?;
    let Some((u0, note)) = initial_state(&setup)? else {
        println!("no qualifying initial data found");
        return Ok(0);
    };
    let Setup {
        cfg,
        net,
        lambda0,
        params,
    } = &setup;
    let f = &cfg.f;
    println!("initial_data = {note}");
    let j0 = energy_j(net, f, cfg.gamma, &u0)?;
    println!("J0 = {}", num(j0));

    let c_cert = check_condition(f, Condition::C, params, *lambda0, cfg.u_max, cfg.grid_n)
        .ok()
        .filter(certified);
    let report = match (j0 > 0.0, c_cert.is_some()) {
        (true, true) => Some(concavity_report(net, f, params, *lambda0, &u0)?),
        (false, _) => {
            println!("bound: not available (J0 <= 0)");
            None
        }
        (true, false) => {
            println!("bound: not available (condition (C) not certified)");
            None
        }
    };
    if let Some(r) = &report {
        println!("xi = {}", num(r.xi));
        println!("M = {}", num(r.m));
        println!("tstar_bound = {}", num(r.tstar_bound));
    }

    let traj = integrate(net, f, &u0, &cfg.solve)?;
    let path = cfg.output_path();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(&path, trajectory_csv(net, &traj, cfg.gamma, report.as_ref())).map_err(|source| {
        CliError::Io {
            path: path.clone(),
            source,
        }
    })?;

    println!("outcome = {}", traj.outcome);
    let last = traj.final_stats();
    match traj.outcome {
        Outcome::BlowupDetected { t_num } => {
            println!("T_num = {}", num(t_num));
            if let Some(r) = &report {
                println!("T_num_within_bound = {}", t_num <= r.tstar_bound);
            }
        }
        Outcome::CompletedHorizon => {
            println!("sum_u2_ratio = {}", num(last.sum_u2 / traj.steps[0].sum_u2));
        }
        Outcome::StepFailure { t } => println!("step_failure_t = {}", num(t)),
    }
    println!("integral_sum_u2_at_cutoff = {}", num(traj.integral_at_cutoff()));
    println!("sup_final = {}", num(last.sup));
    println!("trajectory = {}", path.display());
    Ok(traj.outcome.exit_code())
}
