//! Time integration of `u_t = Δ_ω u + f(u)` on `S` with `u = 0` on `∂S`.
//!
//! [`integrate`] is the production path (adaptive Dormand–Prince on the
//! interior unknowns). [`picard_local`] is an independent fixed-point solver
//! on one contraction window, and [`compare_runs`] co-integrates an ordered
//! pair of initial states to check the comparison principle at runtime.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::functionals::ISample;
use crate::network::Network;
use crate::nonlinearity::Nonlinearity;
use crate::operators::NodeField;
use crate::spectral::interior_matrix;

mod comparison;
pub mod dopri;
mod picard;

pub use comparison::{compare_runs, ComparisonReport, ComparisonSample, Violation};
pub use dopri::{DriverOutcome, Flow, OdeSystem, StepView};
pub use picard::{contraction_window, picard_local, PicardSolution};

/// Step control and stopping rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveConfig {
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub blowup_sup_threshold: f64,
    pub dt_min: f64,
    /// Output sampling interval; the integrator lands exactly on its multiples.
    pub record_every: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            t_end: 1.0,
            rel_tol: 1e-8,
            abs_tol: 1e-10,
            blowup_sup_threshold: 1e12,
            dt_min: 1e-14,
            record_every: 0.01,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("t_end", self.t_end),
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("blowup_sup_threshold", self.blowup_sup_threshold),
            ("dt_min", self.dt_min),
            ("record_every", self.record_every),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
            }
        }
        if self.dt_min >= self.t_end {
            return Err(Error::InvalidParameter(format!(
                "dt_min = {} must be below t_end = {}",
                self.dt_min, self.t_end
            )));
        }
        Ok(())
    }
}

const MONITOR_WINDOW: usize = 5;

/// Tracks recent step history to decide when a run has blown up.
///
/// Blow-up is declared when the sup norm reaches the threshold (or stops
/// being finite), or when the controller wants a step below `dt_min` while
/// the solution is still running away: either the last five rejected error
/// estimates grew monotonically or the sup norm grew over the last five
/// accepted steps.
#[derive(Debug, Clone)]
pub struct BlowupMonitor {
    last_accepted_t: f64,
    rejection_errors: VecDeque<f64>,
    sups: VecDeque<f64>,
}

impl BlowupMonitor {
    pub fn new(initial_sup: f64) -> Self {
        BlowupMonitor {
            last_accepted_t: 0.0,
            rejection_errors: VecDeque::with_capacity(MONITOR_WINDOW),
            sups: VecDeque::from([initial_sup]),
        }
    }

    pub fn on_accepted(&mut self, t: f64, sup: f64) {
        self.last_accepted_t = t;
        if self.sups.len() == MONITOR_WINDOW {
            self.sups.pop_front();
        }
        self.sups.push_back(sup);
    }

    pub fn on_rejected(&mut self, error: f64) {
        if self.rejection_errors.len() == MONITOR_WINDOW {
            self.rejection_errors.pop_front();
        }
        self.rejection_errors.push_back(error);
    }

    /// Returns the numerical blow-up time (the last accepted time) if the
    /// current state and proposed step `dt_next` indicate blow-up.
    pub fn detect(&self, sup: f64, dt_next: f64, cfg: &SolveConfig) -> Option<f64> {
        if !sup.is_finite() || sup >= cfg.blowup_sup_threshold {
            return Some(self.last_accepted_t);
        }
        if dt_next < cfg.dt_min {
            let errors_growing = self.rejection_errors.len() == MONITOR_WINDOW
                && self.rejection_errors.iter().zip(self.rejection_errors.iter().skip(1)).all(|(a, b)| b >= a);
            let sup_growing = self.sups.len() == MONITOR_WINDOW
                && self.sups.iter().zip(self.sups.iter().skip(1)).all(|(a, b)| b > a);
            if errors_growing || sup_growing {
                return Some(self.last_accepted_t);
            }
        }
        None
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    CompletedHorizon,
    BlowupDetected { t_num: f64 },
    StepFailure { t: f64 },
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::CompletedHorizon => 0,
            Outcome::BlowupDetected { .. } => 2,
            Outcome::StepFailure { .. } => 3,
        }
    }
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::CompletedHorizon => write!(f, "completed_horizon"),
            Outcome::BlowupDetected { t_num } => write!(f, "blowup_detected(T_num={t_num:.16e})"),
            Outcome::StepFailure { t } => write!(f, "step_failure(t={t:.16e})"),
        }
    }
}

/// Scalar functionals at one accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepStats {
    pub t: f64,
    /// `Σ u²`
    pub sum_u2: f64,
    /// `(1/2) Σ_{x,y} [u(x) − u(y)]² ω`
    pub energy: f64,
    /// `Σ F(u)`
    pub sum_big_f: f64,
    /// `Σ u f(u)`
    pub sum_uf: f64,
    /// `Σ u_t²`
    pub sum_ut2: f64,
    /// `∫₀ᵗ Σ u² ds`
    pub int_u2: f64,
    /// `∫₀ᵗ Σ u_t² ds`
    pub int_ut2: f64,
    pub sup: f64,
}

impl StepStats {
    /// `J` for a given `γ`, over `n` vertices.
    pub fn j(&self, gamma: f64, n: usize) -> f64 {
        -0.5 * self.energy + self.sum_big_f - gamma * n as f64
    }

    /// `I''` from the `Σu²` balance.
    pub fn i_double_prime(&self) -> f64 {
        -2.0 * self.energy + 2.0 * self.sum_uf
    }

    pub fn i_sample(&self, m: f64) -> ISample {
        ISample {
            t: self.t,
            i: self.int_u2 + m,
            i_prime: self.sum_u2,
            i_double_prime: self.i_double_prime(),
        }
    }
}

/// A computed solution: states at the sampling times, scalar functionals at
/// every accepted step, and how the run ended.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<NodeField>,
    /// One entry per accepted step, starting with `t = 0`.
    pub steps: Vec<StepStats>,
    /// `steps[sample_steps[k]]` belongs to `times[k]`.
    pub sample_steps: Vec<usize>,
    pub outcome: Outcome,
}

impl Trajectory {
    pub fn final_stats(&self) -> &StepStats {
        self.steps.last().expect("trajectory has an initial step")
    }

    pub fn sample_stats(&self, k: usize) -> &StepStats {
        &self.steps[self.sample_steps[k]]
    }

    /// The `I` series over all accepted steps for a given `M`.
    pub fn i_series(&self, m: f64) -> Vec<ISample> {
        self.steps.iter().map(|s| s.i_sample(m)).collect()
    }

    /// `∫₀ᵗ Σ u² ds` at the last accepted step.
    pub fn integral_at_cutoff(&self) -> f64 {
        self.final_stats().int_u2
    }
}

/// `y' = −A y + f(y)` on the interior unknowns.
pub(crate) struct InteriorSystem<'a> {
    matrix: Vec<f64>,
    k: usize,
    f: &'a Nonlinearity,
}

impl<'a> InteriorSystem<'a> {
    pub(crate) fn new(net: &Network, f: &'a Nonlinearity) -> Self {
        InteriorSystem {
            matrix: interior_matrix(net),
            k: net.interior().len(),
            f,
        }
    }
}

impl OdeSystem for InteriorSystem<'_> {
    fn dim(&self) -> usize {
        self.k
    }

    fn rhs(&self, y: &[f64], dy: &mut [f64]) {
        let k = self.k;
        for i in 0..k {
            let row = &self.matrix[i * k..(i + 1) * k];
            let lap: f64 = row.iter().zip(y).map(|(a, v)| a * v).sum();
            dy[i] = -lap + self.f.f(y[i]);
        }
    }
}

/// Checks the standing assumptions on initial data: sized for the network,
/// zero on `∂S`, nonnegative.
pub(crate) fn check_initial(net: &Network, u0: &NodeField) -> Result<()> {
    u0.check_size(net)?;
    if let Some((vertex, value)) = u0.boundary_violation(net) {
        return Err(Error::NotAdmissible { vertex, value });
    }
    if let Some((vertex, &value)) = u0.iter().enumerate().find(|(_, v)| !(**v >= 0.0)) {
        return Err(Error::NegativeData { vertex, value });
    }
    Ok(())
}

fn embed(net: &Network, interior_values: &[f64]) -> NodeField {
    let mut u = NodeField::zeros(net.len());
    for (&x, &v) in net.interior().iter().zip(interior_values) {
        u[x] = v;
    }
    u
}

struct StatsBuilder<'a> {
    net: &'a Network,
    f: &'a Nonlinearity,
    scratch: Vec<f64>,
    scratch_dy: Vec<f64>,
}

impl StatsBuilder<'_> {
    fn sums(&self, y: &[f64], dy: &[f64]) -> (f64, f64, f64, f64, f64, f64) {
        let u = embed(self.net, y);
        let energy = crate::operators::dirichlet_energy(self.net, &u).expect("sized");
        let sum_u2 = y.iter().map(|v| v * v).sum();
        let sum_big_f = y.iter().map(|&v| self.f.antiderivative(v)).sum();
        let sum_uf = y.iter().map(|&v| v * self.f.f(v)).sum();
        let sum_ut2 = dy.iter().map(|v| v * v).sum();
        let sup = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        (sum_u2, energy, sum_big_f, sum_uf, sum_ut2, sup)
    }
}

/// Integrates from `u0` until `cfg.t_end` or blow-up.
///
/// `u0` must be nonnegative, zero on `∂S` and not identically zero.
/// Boundary entries of every recorded state are exactly zero.
pub fn integrate(
    net: &Network,
    f: &Nonlinearity,
    u0: &NodeField,
    cfg: &SolveConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_initial(net, u0)?;
    if u0.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroField);
    }
    let sys = InteriorSystem::new(net, f);
    let y0: Vec<f64> = net.interior().iter().map(|&x| u0[x]).collect();
    let mut dy0 = vec![0.0; y0.len()];
    sys.rhs(&y0, &mut dy0);

    let mut builder = StatsBuilder {
        net,
        f,
        scratch: vec![0.0; y0.len()],
        scratch_dy: vec![0.0; y0.len()],
    };
    let (sum_u2, energy, sum_big_f, sum_uf, sum_ut2, sup) = builder.sums(&y0, &dy0);
    let mut steps = vec![StepStats {
        t: 0.0,
        sum_u2,
        energy,
        sum_big_f,
        sum_uf,
        sum_ut2,
        int_u2: 0.0,
        int_ut2: 0.0,
        sup,
    }];
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut sample_steps = vec![0];
    let mut last_y = y0.clone();

    let driver = dopri::run(&sys, &y0, cfg, |step| {
        let prev = *steps.last().expect("initial step");
        let h = step.h();
        // Simpson on each step, with the midpoint from dense output.
        let mut mid = std::mem::take(&mut builder.scratch);
        let mut mid_dy = std::mem::take(&mut builder.scratch_dy);
        step.interpolate(0.5, &mut mid);
        sys.rhs(&mid, &mut mid_dy);
        let mid_u2: f64 = mid.iter().map(|v| v * v).sum();
        let mid_ut2: f64 = mid_dy.iter().map(|v| v * v).sum();
        builder.scratch = mid;
        builder.scratch_dy = mid_dy;

        let (sum_u2, energy, sum_big_f, sum_uf, sum_ut2, sup) = builder.sums(step.y1, step.dy1);
        let stats = StepStats {
            t: step.t1,
            sum_u2,
            energy,
            sum_big_f,
            sum_uf,
            sum_ut2,
            int_u2: prev.int_u2 + h / 6.0 * (prev.sum_u2 + 4.0 * mid_u2 + sum_u2),
            int_ut2: prev.int_ut2 + h / 6.0 * (prev.sum_ut2 + 4.0 * mid_ut2 + sum_ut2),
            sup,
        };
        steps.push(stats);
        last_y.copy_from_slice(step.y1);
        if step.at_output {
            times.push(step.t1);
            states.push(embed(net, step.y1));
            sample_steps.push(steps.len() - 1);
        }
        Flow::Continue
    });

    let outcome = match driver {
        DriverOutcome::Completed | DriverOutcome::Stopped(_) => Outcome::CompletedHorizon,
        DriverOutcome::BlowUp(t_num) => Outcome::BlowupDetected { t_num },
        DriverOutcome::StepFailure(t) => Outcome::StepFailure { t },
    };
    // The last accepted state is always recorded, even off the output grid.
    let last = steps.len() - 1;
    if *sample_steps.last().expect("nonempty") != last {
        sample_steps.push(last);
        times.push(steps[last].t);
        states.push(embed(net, &last_y));
    }
    Ok(Trajectory {
        times,
        states,
        steps,
        sample_steps,
        outcome,
    })
}
