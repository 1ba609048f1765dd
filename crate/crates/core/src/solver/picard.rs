//! Fixed-point iteration of the integral operator
//! `D[u](x, t) = u₀(x) + ∫₀ᵗ Δ_ω u ds + ∫₀ᵗ f(u) ds` on one contraction window.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::nonlinearity::Nonlinearity;
use crate::operators::NodeField;
use crate::spectral::interior_matrix;

use super::check_initial;

const GRID_POINTS: usize = 1024;
const MAX_ITERATIONS: usize = 200;

/// The fixed point sampled on the uniform grid over `[0, t0]`.
#[derive(Debug, Clone)]
pub struct PicardSolution {
    pub times: Vec<f64>,
    pub states: Vec<NodeField>,
    pub iterations: usize,
    /// `C₁ t0`, the contraction factor of the window.
    pub contraction: f64,
}

/// `C₁ = 2 |S̄| max ω + L` with `L` the Lipschitz constant of `f` on
/// `[0, 3 max |u₀|]`. Windows `[0, t0]` with `C₁ t0 < 1` are contractions.
pub fn contraction_window(net: &Network, f: &Nonlinearity, u0: &NodeField) -> Result<f64> {
    u0.check_size(net)?;
    let lipschitz = f.lipschitz_on(3.0 * u0.sup_abs());
    Ok(2.0 * net.len() as f64 * net.max_weight() + lipschitz)
}

/// Solves on `[0, t0]` by Picard iteration until successive iterates differ
/// by less than `tol` in the discrete sup norm over space and time.
pub fn picard_local(
    net: &Network,
    f: &Nonlinearity,
    u0: &NodeField,
    t0: f64,
    tol: f64,
) -> Result<PicardSolution> {
    check_initial(net, u0)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("picard_tol = {tol} must be positive")));
    }
    let c1 = contraction_window(net, f, u0)?;
    if !(t0 > 0.0) || c1 * t0 >= 1.0 {
        return Err(Error::WindowTooLarge {
            requested: t0,
            max: 1.0 / c1,
            c1,
        });
    }

    let interior = net.interior();
    let k = interior.len();
    let a = interior_matrix(net);
    let y0: Vec<f64> = interior.iter().map(|&x| u0[x]).collect();
    let dt = t0 / (GRID_POINTS - 1) as f64;

    let rhs = |y: &[f64], out: &mut [f64]| {
        for i in 0..k {
            let lap: f64 = a[i * k..(i + 1) * k].iter().zip(y).map(|(aij, v)| aij * v).sum();
            out[i] = -lap + f.f(y[i]);
        }
    };

    // Grid values, row-major by time.
    let mut current: Vec<f64> = y0.iter().copied().cycle().take(GRID_POINTS * k).collect();
    let mut next = vec![0.0; GRID_POINTS * k];
    let mut g_prev = vec![0.0; k];
    let mut g_cur = vec![0.0; k];

    for iteration in 1..=MAX_ITERATIONS {
        next[..k].copy_from_slice(&y0);
        rhs(&current[..k], &mut g_prev);
        for j in 1..GRID_POINTS {
            rhs(&current[j * k..(j + 1) * k], &mut g_cur);
            for i in 0..k {
                next[j * k + i] = next[(j - 1) * k + i] + 0.5 * dt * (g_prev[i] + g_cur[i]);
            }
            std::mem::swap(&mut g_prev, &mut g_cur);
        }
        let change = current
            .iter()
            .zip(&next)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        std::mem::swap(&mut current, &mut next);
        if !change.is_finite() {
            break;
        }
        if change < tol {
            let times = (0..GRID_POINTS).map(|j| j as f64 * dt).collect();
            let states = (0..GRID_POINTS)
                .map(|j| {
                    let mut u = NodeField::zeros(net.len());
                    for (i, &x) in interior.iter().enumerate() {
                        u[x] = current[j * k + i];
                    }
                    u
                })
                .collect();
            return Ok(PicardSolution {
                times,
                states,
                iterations: iteration,
                contraction: c1 * t0,
            });
        }
        if iteration == MAX_ITERATIONS {
            return Err(Error::PicardCap {
                iterations: MAX_ITERATIONS,
                change,
            });
        }
    }
    Err(Error::PicardCap {
        iterations: MAX_ITERATIONS,
        change: f64::NAN,
    })
}
