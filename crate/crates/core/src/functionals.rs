//! Concavity-method quantities: the energy `J`, the auxiliary integral `I`,
//! the constant `M`, the exponent `ξ`, the blow-up-time bound, and residual
//! checks of the energy identities along computed trajectories.
//!
//! With `E(u) = (1/2) Σ_{x,y} [u(x) − u(y)]² ω(x, y)`:
//!
//! ```text
//! J(u)   = −E(u)/2 + Σ_x [F(u(x)) − γ]
//! I(t)   = ∫₀ᵗ Σ_x u² ds + M
//! I'(t)  = Σ_x u²
//! I''(t) = −2E(u) + 2 Σ_x u f(u)
//! ```

use crate::error::{Error, Result};
use crate::network::Network;
use crate::nonlinearity::{ConditionCParams, Nonlinearity};
use crate::operators::{dirichlet_energy, laplacian, NodeField};

/// `J(u) = −(1/4) Σ_{x,y} [u(x) − u(y)]² ω(x, y) + Σ_x [F(u(x)) − γ]`.
pub fn energy_j(net: &Network, f: &Nonlinearity, gamma: f64, u: &NodeField) -> Result<f64> {
    let e = dirichlet_energy(net, u)?;
    let potential: f64 = u.iter().map(|&v| f.antiderivative(v) - gamma).sum();
    Ok(-0.5 * e + potential)
}

/// `I''` from the right side of the `Σu²` balance: `−2E(u) + 2 Σ u f(u)`.
pub fn second_derivative_i(net: &Network, f: &Nonlinearity, u: &NodeField) -> Result<f64> {
    let e = dirichlet_energy(net, u)?;
    let reaction: f64 = u.iter().map(|&v| v * f.f(v)).sum();
    Ok(-2.0 * e + 2.0 * reaction)
}

/// `u_t = Δ_ω u + f(u)` on `S`, zero on `∂S`.
pub fn time_derivative(net: &Network, f: &Nonlinearity, u: &NodeField) -> Result<NodeField> {
    let mut ut = laplacian(net, u)?;
    for x in 0..net.len() {
        ut[x] = if net.is_interior(x) { ut[x] + f.f(u[x]) } else { 0.0 };
    }
    Ok(ut)
}

/// `ξ = √(α/2) − 1`.
pub fn xi(alpha: f64) -> f64 {
    (alpha / 2.0).sqrt() - 1.0
}

/// `M = [α/(α−2)] (1 + √(1 + (α−2)/2)) (Σu₀²)² / (2α J(0))`.
pub fn concavity_constant(alpha: f64, sum_u0_sq: f64, j0: f64) -> f64 {
    (alpha / (alpha - 2.0)) * (1.0 + (1.0 + (alpha - 2.0) / 2.0).sqrt()) * sum_u0_sq * sum_u0_sq
        / (2.0 * alpha * j0)
}

/// Blow-up data for an initial state with `J(0) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcavityReport {
    pub j0: f64,
    pub xi: f64,
    pub m: f64,
    pub sum_u0_sq: f64,
    /// `M / (ξ Σ u₀²)`, an upper bound on the blow-up time.
    pub tstar_bound: f64,
}

/// Evaluates `ξ`, `M` and the blow-up-time bound for `u0`.
pub fn concavity_report(
    net: &Network,
    f: &Nonlinearity,
    params: &ConditionCParams,
    lambda0: f64,
    u0: &NodeField,
) -> Result<ConcavityReport> {
    params.validate(lambda0)?;
    let j0 = energy_j(net, f, params.gamma, u0)?;
    if !(j0 > 0.0) {
        return Err(Error::NonPositiveEnergy { j0 });
    }
    let sum_u0_sq = u0.sum_squares();
    let xi = xi(params.alpha);
    let m = concavity_constant(params.alpha, sum_u0_sq, j0);
    Ok(ConcavityReport {
        j0,
        xi,
        m,
        sum_u0_sq,
        tstar_bound: m / (xi * sum_u0_sq),
    })
}

/// Residuals of the `Σu²` balance and of `J' = Σ u_t²` at the middle of a
/// uniformly spaced triple of states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub eq12_residual: f64,
    pub eq13_residual: f64,
    /// `max(1, Σu² · sup f(u))` at the middle state; divide by it for a
    /// size-independent reading.
    pub scale: f64,
}

/// Compares centered differences of `Σu²` and `J` against their exact
/// right-hand sides at the middle of `(t − h, t, t + h)`.
pub fn identity_residuals(
    net: &Network,
    f: &Nonlinearity,
    slice: &[(f64, NodeField)],
) -> Result<IdentityResiduals> {
    if slice.len() != 3 {
        return Err(Error::BadSlice(format!("expected 3 states, got {}", slice.len())));
    }
    let (t0, t1, t2) = (slice[0].0, slice[1].0, slice[2].0);
    let h = t1 - t0;
    if !(h > 0.0) || ((t2 - t1) - h).abs() > 1e-9 * h {
        return Err(Error::BadSlice(format!(
            "times {t0}, {t1}, {t2} are not uniformly increasing"
        )));
    }
    let (lo, mid, hi) = (&slice[0].1, &slice[1].1, &slice[2].1);

    let d_mass = (hi.sum_squares() - lo.sum_squares()) / (t2 - t0);
    let eq12 = (d_mass - second_derivative_i(net, f, mid)?).abs();

    // γ cancels in the difference.
    let d_j = (energy_j(net, f, 0.0, hi)? - energy_j(net, f, 0.0, lo)?) / (t2 - t0);
    let ut = time_derivative(net, f, mid)?;
    let eq13 = (d_j - ut.sum_squares()).abs();

    let fscale = mid.iter().map(|&v| f.f(v).abs()).fold(0.0, f64::max);
    Ok(IdentityResiduals {
        eq12_residual: eq12,
        eq13_residual: eq13,
        scale: 1f64.max(mid.sum_squares() * fscale),
    })
}

/// One point of the `I` series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ISample {
    pub t: f64,
    pub i: f64,
    pub i_prime: f64,
    pub i_double_prime: f64,
}

impl ISample {
    /// `I'' I − (1 + ξ) I'²`.
    pub fn margin(&self, xi: f64) -> f64 {
        self.i_double_prime * self.i - (1.0 + xi) * self.i_prime * self.i_prime
    }
}

/// Worst value of `I''(t) I(t) − (1 + ξ) I'(t)²` over the series, and where
/// it occurred.
pub fn concavity_certificate(series: &[ISample], xi: f64) -> Result<(f64, f64)> {
    series
        .iter()
        .map(|s| (s.margin(xi), s.t))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or(Error::EmptySeries)
}
