//! Dormand–Prince 5(4) with PI step control. Dense output lands steps on
//! prescribed output times.

use super::{BlowupMonitor, SolveConfig};

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;
const MAX_STEPS: usize = 5_000_000;

/// An autonomous system `y' = F(y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, y: &[f64], dy: &mut [f64]);
}

/// An accepted step `[t0, t1]`, with derivatives at both ends and a
/// fourth-order interpolant.
pub struct StepView<'a> {
    pub t0: f64,
    pub t1: f64,
    pub y0: &'a [f64],
    pub y1: &'a [f64],
    pub dy0: &'a [f64],
    pub dy1: &'a [f64],
    /// True when `t1` is one of the requested output times.
    pub at_output: bool,
    dense: &'a [Vec<f64>; 5],
}

impl StepView<'_> {
    pub fn h(&self) -> f64 {
        self.t1 - self.t0
    }

    /// Dense output at `t0 + θ h`, `θ ∈ [0, 1]`.
    pub fn interpolate(&self, theta: f64, out: &mut [f64]) {
        let [r1, r2, r3, r4, r5] = self.dense;
        let th1 = 1.0 - theta;
        for i in 0..out.len() {
            out[i] = r1[i] + theta * (r2[i] + th1 * (r3[i] + theta * (r4[i] + th1 * r5[i])));
        }
    }
}

/// What the observer wants after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DriverOutcome {
    Completed,
    Stopped(f64),
    BlowUp(f64),
    StepFailure(f64),
}

fn error_norm(err: &[f64], y0: &[f64], y1: &[f64], cfg: &SolveConfig) -> f64 {
    let n = err.len().max(1);
    let sum: f64 = err
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let sk = cfg.abs_tol + cfg.rel_tol * a.abs().max(b.abs());
            (e / sk).powi(2)
        })
        .sum();
    (sum / n as f64).sqrt()
}

fn initial_step<S: OdeSystem>(sys: &S, y0: &[f64], f0: &[f64], cfg: &SolveConfig, hmax: f64) -> f64 {
    let n = y0.len().max(1) as f64;
    let scaled = |v: &[f64]| {
        (v.iter()
            .zip(y0)
            .map(|(x, y)| (x / (cfg.abs_tol + cfg.rel_tol * y.abs())).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
    };
    let d0 = scaled(y0);
    let d1 = scaled(f0);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h = h.min(hmax);
    let y1: Vec<f64> = y0.iter().zip(f0).map(|(y, f)| y + h * f).collect();
    let mut f1 = vec![0.0; y0.len()];
    sys.rhs(&y1, &mut f1);
    let diff: Vec<f64> = f1.iter().zip(f0).map(|(a, b)| a - b).collect();
    let d2 = scaled(&diff) / h;
    let dmax = d1.max(d2);
    let h1 = if dmax <= 1e-15 {
        (h * 1e-3).max(1e-6)
    } else {
        (0.01 / dmax).powf(0.2)
    };
    (100.0 * h).min(h1).min(hmax).max(cfg.dt_min)
}

/// Integrates `y' = F(y)` from `t = 0` to `cfg.t_end`, landing exactly on
/// every multiple of `cfg.record_every`. The observer sees every accepted
/// step and may stop the run.
pub fn run<S, O>(sys: &S, y0: &[f64], cfg: &SolveConfig, mut observer: O) -> DriverOutcome
where
    S: OdeSystem,
    O: FnMut(&StepView<'_>) -> Flow,
{
    let n = sys.dim();
    assert_eq!(y0.len(), n);
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut k5 = vec![0.0; n];
    let mut k6 = vec![0.0; n];
    let mut k7 = vec![0.0; n];
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut dense: [Vec<f64>; 5] = Default::default();
    for d in dense.iter_mut() {
        *d = vec![0.0; n];
    }

    sys.rhs(&y, &mut k1);
    let t_end = cfg.t_end;
    let mut t = 0.0;
    let mut h = initial_step(sys, &y, &k1, cfg, t_end.min(cfg.record_every));
    let mut fac_old: f64 = 1e-4;
    let mut last_rejected = false;
    let mut next_output = 1usize;
    let mut monitor = BlowupMonitor::new(y.iter().fold(0.0f64, |m, v| m.max(v.abs())));

    for _ in 0..MAX_STEPS {
        let output_time = (next_output as f64 * cfg.record_every).min(t_end);
        let mut landing = false;
        let mut h_try = h;
        if t + h_try >= output_time - 1e-12 * output_time.abs().max(1.0) {
            h_try = output_time - t;
            landing = true;
        }

        for i in 0..n {
            stage[i] = y[i] + h_try * A21 * k1[i];
        }
        sys.rhs(&stage, &mut k2);
        for i in 0..n {
            stage[i] = y[i] + h_try * (A31 * k1[i] + A32 * k2[i]);
        }
        sys.rhs(&stage, &mut k3);
        for i in 0..n {
            stage[i] = y[i] + h_try * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        sys.rhs(&stage, &mut k4);
        for i in 0..n {
            stage[i] = y[i] + h_try * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        sys.rhs(&stage, &mut k5);
        for i in 0..n {
            stage[i] = y[i]
                + h_try * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        sys.rhs(&stage, &mut k6);
        for i in 0..n {
            y_new[i] = y[i]
                + h_try * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        sys.rhs(&y_new, &mut k7);
        for i in 0..n {
            err[i] = h_try
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let mut e = error_norm(&err, &y, &y_new, cfg);
        if !e.is_finite() {
            e = 1e10;
        }

        let fac11 = e.powf(0.2 - BETA * 0.75);
        if e <= 1.0 {
            let mut fac = fac11 / fac_old.powf(BETA);
            fac = (1.0 / FAC_MAX).max((1.0 / FAC_MIN).min(fac / SAFETY));
            let mut h_new = h_try / fac;
            if last_rejected {
                h_new = h_new.min(h_try);
            }
            fac_old = e.max(1e-4);
            last_rejected = false;

            for i in 0..n {
                let ydiff = y_new[i] - y[i];
                let bspl = h_try * k1[i] - ydiff;
                dense[0][i] = y[i];
                dense[1][i] = ydiff;
                dense[2][i] = bspl;
                dense[3][i] = ydiff - h_try * k7[i] - bspl;
                dense[4][i] = h_try
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            let t_new = if landing { output_time } else { t + h_try };
            let view = StepView {
                t0: t,
                t1: t_new,
                y0: &y,
                y1: &y_new,
                dy0: &k1,
                dy1: &k7,
                at_output: landing,
                dense: &dense,
            };
            let flow = observer(&view);
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            t = t_new;
            if landing {
                next_output += 1;
                // Keep the controller's step instead of the truncated one.
                h_new = h_new.max(h);
            }
            if flow == Flow::Stop {
                return DriverOutcome::Stopped(t);
            }
            if landing && output_time >= t_end {
                return DriverOutcome::Completed;
            }
            let sup = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            monitor.on_accepted(t, sup);
            if let Some(t_num) = monitor.detect(sup, h_new, cfg) {
                return DriverOutcome::BlowUp(t_num);
            }
            if h_new < cfg.dt_min {
                return DriverOutcome::StepFailure(t);
            }
            h = h_new;
        } else {
            let h_new = h_try / (1.0 / FAC_MIN).min(fac11 / SAFETY);
            last_rejected = true;
            monitor.on_rejected(e);
            let sup = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if let Some(t_num) = monitor.detect(sup, h_new, cfg) {
                return DriverOutcome::BlowUp(t_num);
            }
            if h_new < cfg.dt_min {
                return DriverOutcome::StepFailure(t);
            }
            h = h_new;
        }
    }
    DriverOutcome::StepFailure(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Decay(f64);
    impl OdeSystem for Decay {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, y: &[f64], dy: &mut [f64]) {
            dy[0] = -self.0 * y[0];
        }
    }

    struct Oscillator;
    impl OdeSystem for Oscillator {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[1];
            dy[1] = -y[0];
        }
    }

    fn cfg(t_end: f64, record_every: f64) -> SolveConfig {
        SolveConfig {
            t_end,
            record_every,
            ..SolveConfig::default()
        }
    }

    #[test]
    fn exponential_decay_and_output_times() {
        let mut hits = Vec::new();
        let mut last = 0.0;
        let out = run(&Decay(2.0), &[1.0], &cfg(3.0, 0.5), |s| {
            if s.at_output {
                hits.push((s.t1, s.y1[0]));
            }
            last = s.y1[0];
            Flow::Continue
        });
        assert_eq!(out, DriverOutcome::Completed);
        assert_eq!(hits.len(), 6);
        for (k, (t, y)) in hits.iter().enumerate() {
            assert_eq!(*t, 0.5 * (k + 1) as f64);
            assert!((y - (-2.0 * t).exp()).abs() < 1e-9);
        }
        assert!((last - (-6.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn dense_output_is_accurate() {
        let mut worst: f64 = 0.0;
        run(&Oscillator, &[0.0, 1.0], &cfg(10.0, 10.0), |s| {
            let mut out = [0.0; 2];
            for k in 1..4 {
                let theta = k as f64 / 4.0;
                s.interpolate(theta, &mut out);
                let t = s.t0 + theta * s.h();
                worst = worst.max((out[0] - t.sin()).abs());
            }
            Flow::Continue
        });
        assert!(worst < 1e-7, "{worst}");
    }

    #[test]
    fn observer_can_stop() {
        let out = run(&Decay(1.0), &[1.0], &cfg(10.0, 1.0), |s| {
            if s.t1 >= 2.0 {
                Flow::Stop
            } else {
                Flow::Continue
            }
        });
        assert_eq!(out, DriverOutcome::Stopped(2.0));
    }
}
