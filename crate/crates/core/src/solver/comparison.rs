//! Runtime check of the comparison principle: two ordered initial states are
//! integrated as one doubled system so both are sampled on the same steps.
//!
//! The pair is carried as `(v, w)` with `w = u − v`, so the gap is integrated
//! directly rather than recovered by subtracting two nearly equal states.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::nonlinearity::Nonlinearity;
use crate::operators::NodeField;
use crate::spectral::interior_matrix;

use super::dopri::{self, DriverOutcome, Flow, OdeSystem};
use super::{check_initial, Outcome, SolveConfig};

/// The first place where `u < v − tol_order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub vertex: usize,
    pub t: f64,
    pub gap: f64,
}

/// The gap `u − v` at one output time.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonSample {
    pub t: f64,
    pub gap: NodeField,
    /// `sup |u|` at this time.
    pub sup_u: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// `u ≥ v − 1e−9 (1 + sup |u|)` at every accepted step.
    pub ordered: bool,
    /// `None` when `u₀ = v₀` on `S`; otherwise whether `u > v` on all of `S`
    /// at every output time after `t = 0`.
    pub strict_on_s: Option<bool>,
    pub first_violation: Option<Violation>,
    /// `t = 0` followed by every output time.
    pub samples: Vec<ComparisonSample>,
    /// Largest `sup |u|` seen over the run.
    pub max_sup_u: f64,
    pub outcome: Outcome,
}

struct PairSystem<'a> {
    matrix: Vec<f64>,
    k: usize,
    f: &'a Nonlinearity,
}

impl OdeSystem for PairSystem<'_> {
    fn dim(&self) -> usize {
        2 * self.k
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let k = self.k;
        let (v, w) = y.split_at(k);
        for i in 0..k {
            let row = &self.matrix[i * k..(i + 1) * k];
            let lap_v: f64 = row.iter().zip(v).map(|(a, x)| a * x).sum();
            let lap_w: f64 = row.iter().zip(w).map(|(a, x)| a * x).sum();
            dy[i] = -lap_v + self.f.f(v[i]);
            dy[k + i] = -lap_w + self.f.increment(v[i], w[i]);
        }
    }
}

/// Co-integrates `u` from `u0` and `v` from `v0 ≤ u0` and reports whether the
/// order is preserved.
pub fn compare_runs(
    net: &Network,
    f: &Nonlinearity,
    u0: &NodeField,
    v0: &NodeField,
    cfg: &SolveConfig,
) -> Result<ComparisonReport> {
    cfg.validate()?;
    check_initial(net, u0)?;
    check_initial(net, v0)?;
    if let Some(vertex) = (0..net.len()).find(|&x| u0[x] < v0[x]) {
        return Err(Error::Unordered { vertex });
    }

    let interior = net.interior();
    let k = interior.len();
    let sys = PairSystem {
        matrix: interior_matrix(net),
        k,
        f,
    };
    let mut y0 = vec![0.0; 2 * k];
    for (i, &x) in interior.iter().enumerate() {
        y0[i] = v0[x];
        y0[k + i] = u0[x] - v0[x];
    }
    let has_strict = y0[k..].iter().any(|&g| g > 0.0);

    let gap_field = |w: &[f64]| {
        let mut g = NodeField::zeros(net.len());
        for (i, &x) in interior.iter().enumerate() {
            g[x] = w[i];
        }
        g
    };
    let sup_u = |y: &[f64]| (0..k).fold(0.0f64, |m, i| m.max((y[i] + y[k + i]).abs()));

    let mut samples = vec![ComparisonSample {
        t: 0.0,
        gap: gap_field(&y0[k..]),
        sup_u: sup_u(&y0),
    }];
    let mut max_sup_u = samples[0].sup_u;
    let mut first_violation = None;
    let mut strict = true;

    let driver = dopri::run(&sys, &y0, cfg, |step| {
        let y = step.y1;
        let sup = sup_u(y);
        max_sup_u = max_sup_u.max(sup);
        let tol_order = 1e-9 * (1.0 + sup);
        if first_violation.is_none() {
            if let Some(i) = (0..k).find(|&i| y[k + i] < -tol_order) {
                first_violation = Some(Violation {
                    vertex: interior[i],
                    t: step.t1,
                    gap: y[k + i],
                });
            }
        }
        if step.at_output {
            if y[k..].iter().any(|&g| !(g > 0.0)) {
                strict = false;
            }
            samples.push(ComparisonSample {
                t: step.t1,
                gap: gap_field(&y[k..]),
                sup_u: sup,
            });
        }
        Flow::Continue
    });

    let outcome = match driver {
        DriverOutcome::Completed | DriverOutcome::Stopped(_) => Outcome::CompletedHorizon,
        DriverOutcome::BlowUp(t_num) => Outcome::BlowupDetected { t_num },
        DriverOutcome::StepFailure(t) => Outcome::StepFailure { t },
    };
    Ok(ComparisonReport {
        ordered: first_violation.is_none(),
        strict_on_s: has_strict.then_some(strict),
        first_violation,
        samples,
        max_sup_u,
        outcome,
    })
}
