//! Reaction terms `f` with their antiderivatives `F(u) = ∫₀ᵘ f`, plus the
//! growth conditions that drive the blow-up analysis.
//!
//! Conditions quantify over all `u > 0`; here they are certified on geometric
//! grids, with exact verdicts for the `power` and `linear` families.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::network::Network;
use crate::operators::NodeField;
use crate::quadrature::adaptive_simpson;

const QUAD_ABS: f64 = 1e-12;
const QUAD_REL: f64 = 1e-10;
const GRID_REL_TOL: f64 = 1e-12;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The shape of `f`.
#[derive(Clone)]
pub enum Family {
    /// `f(u) = u^q`, `q ≥ 1`.
    Power(f64),
    /// `f(u) = a·u`, `a ≥ 0`. `a = 0` is pure diffusion.
    Linear(f64),
    /// `f(u) = Σ_k c_k u^k` for `k = 1, 2, …`; `coeffs[0]` multiplies `u`.
    Polynomial(Vec<f64>),
    /// An arbitrary effect-free evaluator on `u ≥ 0`.
    Custom { name: String, eval: Evaluator },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Power(q) => write!(f, "Power({q})"),
            Family::Linear(a) => write!(f, "Linear({a})"),
            Family::Polynomial(c) => write!(f, "Polynomial({c:?})"),
            Family::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

/// A reaction term. Negative arguments are clamped: `f(u) = f(max(u, 0))`,
/// so `F(u) = 0` for `u ≤ 0`.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    family: Family,
}

impl Nonlinearity {
    pub fn power(q: f64) -> Result<Self> {
        if !q.is_finite() || q < 1.0 {
            return Err(Error::InvalidNonlinearity(format!(
                "power exponent {q} must be finite and >= 1"
            )));
        }
        Ok(Nonlinearity {
            family: Family::Power(q),
        })
    }

    pub fn linear(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidNonlinearity(format!(
                "linear coefficient {a} must be finite and >= 0"
            )));
        }
        Ok(Nonlinearity {
            family: Family::Linear(a),
        })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidNonlinearity("polynomial has no coefficients".into()));
        }
        if let Some((k, c)) = coeffs
            .iter()
            .enumerate()
            .find(|(_, c)| !c.is_finite() || **c < 0.0)
        {
            return Err(Error::InvalidNonlinearity(format!(
                "coefficient c{} = {c} must be finite and >= 0",
                k + 1
            )));
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidNonlinearity(
                "polynomial is identically zero".into(),
            ));
        }
        Ok(Nonlinearity {
            family: Family::Polynomial(coeffs),
        })
    }

    pub fn custom<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Nonlinearity {
            family: Family::Custom {
                name: name.into(),
                eval: Arc::new(eval),
            },
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// `f(u)`, with negative arguments clamped to zero.
    pub fn f(&self, u: f64) -> f64 {
        let u = u.max(0.0);
        match &self.family {
            Family::Power(q) => {
                if *q == 2.0 {
                    u * u
                } else {
                    u.powf(*q)
                }
            }
            Family::Linear(a) => a * u,
            Family::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ck| (acc + ck) * u),
            Family::Custom { eval, .. } => eval(u),
        }
    }

    /// `f(v + w) − f(v)` without cancellation when `v > 0` and `v + w > 0`.
    pub fn increment(&self, v: f64, w: f64) -> f64 {
        if !(v > 0.0 && v + w > 0.0) {
            return self.f(v + w) - self.f(v);
        }
        let rel = w / v;
        match &self.family {
            Family::Power(q) => {
                if *q == 2.0 {
                    w * (2.0 * v + w)
                } else {
                    v.powf(*q) * (q * rel.ln_1p()).exp_m1()
                }
            }
            Family::Linear(a) => a * w,
            Family::Polynomial(c) => c
                .iter()
                .enumerate()
                .map(|(k, ck)| {
                    let p = (k + 1) as f64;
                    ck * v.powi(k as i32 + 1) * (p * rel.ln_1p()).exp_m1()
                })
                .sum(),
            Family::Custom { eval, .. } => eval(v + w) - eval(v),
        }
    }

    /// `F(u) = ∫₀ᵘ f(s) ds`; closed form except for custom evaluators.
    pub fn antiderivative(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        match &self.family {
            Family::Power(q) => u.powf(q + 1.0) / (q + 1.0),
            Family::Linear(a) => 0.5 * a * u * u,
            Family::Polynomial(c) => c
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, ck)| (acc + ck / (k as f64 + 2.0)) * u)
                * u,
            Family::Custom { eval, .. } => {
                adaptive_simpson(|s| eval(s.max(0.0)), 0.0, u, QUAD_ABS, QUAD_REL)
            }
        }
    }

    /// A Lipschitz constant of `f` on `[−m, m]`.
    pub fn lipschitz_on(&self, m: f64) -> f64 {
        let m = m.abs();
        match &self.family {
            Family::Power(q) => q * m.powf(q - 1.0),
            Family::Linear(a) => *a,
            Family::Polynomial(c) => c
                .iter()
                .enumerate()
                .map(|(k, ck)| (k as f64 + 1.0) * ck * m.powi(k as i32))
                .sum(),
            Family::Custom { eval, .. } => {
                const SAMPLES: usize = 1000;
                if m == 0.0 {
                    return 0.0;
                }
                let h = m / SAMPLES as f64;
                let mut prev = eval(0.0);
                let mut best: f64 = 0.0;
                for i in 1..=SAMPLES {
                    let next = eval(i as f64 * h);
                    best = best.max((next - prev).abs() / h);
                    prev = next;
                }
                1.25 * best
            }
        }
    }

    /// Standing assumption on the reaction term: `f(0) = 0` and `f > 0` on
    /// `u > 0`. Structural for power and nonzero polynomial families.
    pub fn is_strictly_positive(&self) -> bool {
        match &self.family {
            Family::Power(_) | Family::Polynomial(_) => true,
            Family::Linear(a) => *a > 0.0,
            Family::Custom { eval, .. } => {
                eval(0.0) == 0.0 && geometric_grid(1e-6, 1e6, 1000).iter().all(|&u| eval(u) > 0.0)
            }
        }
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Power(q) => write!(f, "power:{q}"),
            Family::Linear(a) => write!(f, "linear:{a}"),
            Family::Polynomial(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Family::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl FromStr for Nonlinearity {
    type Err = Error;

    /// `power:q`, `linear:a` or `poly:c1,c2,...`.
    fn from_str(spec: &str) -> Result<Self> {
        let (kind, args) = spec
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::InvalidNonlinearity(format!("expected <family>:<args>, got '{spec}'")))?;
        let number = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidNonlinearity(format!("cannot parse number '{s}'")))
        };
        match kind.trim() {
            "power" => Nonlinearity::power(number(args)?),
            "linear" => Nonlinearity::linear(number(args)?),
            "poly" => Nonlinearity::polynomial(
                args.split(',').map(number).collect::<Result<Vec<_>>>()?,
            ),
            other => Err(Error::InvalidNonlinearity(format!("unknown family '{other}'"))),
        }
    }
}

/// `n` points geometrically spaced over `[lo, hi]`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi >= lo && n >= 2);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    grid[n - 1] = hi;
    grid
}

/// Which growth condition to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// `αF(u) ≤ u f(u)`
    A,
    /// `αF(u) ≤ u f(u) + γ`
    B,
    /// `αF(u) ≤ u f(u) + βu² + γ`
    C,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::A => "A",
            Condition::B => "B",
            Condition::C => "C",
        };
        f.write_str(s)
    }
}

/// `(α, β, γ)` of condition (C); `α = 2 + ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionCParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl ConditionCParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        ConditionCParams { alpha, beta, gamma }
    }

    pub fn epsilon(&self) -> f64 {
        self.alpha - 2.0
    }

    /// Largest admissible `β` for a graph with first eigenvalue `lambda0`.
    pub fn beta_max(alpha: f64, lambda0: f64) -> f64 {
        (alpha - 2.0) * lambda0 / 2.0
    }

    /// Checks `α > 2`, `γ > 0` and `0 < β ≤ (α − 2)λ₀/2`.
    pub fn validate(&self, lambda0: f64) -> Result<()> {
        self.validate_alpha()?;
        self.validate_gamma()?;
        self.validate_beta(lambda0)
    }

    fn validate_alpha(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha > 2.0) {
            return Err(Error::InvalidParameter(format!("alpha = {} must exceed 2", self.alpha)));
        }
        Ok(())
    }

    fn validate_gamma(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidParameter(format!("gamma = {} must be positive", self.gamma)));
        }
        Ok(())
    }

    fn validate_beta(&self, lambda0: f64) -> Result<()> {
        if !(lambda0.is_finite() && lambda0 > 0.0) {
            return Err(Error::InvalidParameter(format!("lambda0 = {lambda0} must be positive")));
        }
        let max = Self::beta_max(self.alpha, lambda0);
        // Allow β = (α − 2)λ₀/2 computed through a different rounding path.
        if !(self.beta > 0.0 && self.beta <= max * (1.0 + 1e-12)) {
            return Err(Error::InvalidParameter(format!(
                "beta = {} must lie in (0, (alpha-2)*lambda0/2 = {max}]",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Result of a grid check of (A), (B) or (C).
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionCertificate {
    pub holds_on_grid: bool,
    /// Raw margin `u f + [βu²] + [γ] − αF` at the worst grid point.
    pub worst_margin: f64,
    pub worst_u: f64,
    /// Exact verdict, available for the power and linear families.
    pub analytic: Option<bool>,
}

/// Evaluates the margin of `which` on a geometric grid over `(0, u_max]`.
///
/// `β` is ignored for (A) and (B), `γ` for (A). For (C), the parameters
/// must satisfy `0 < β ≤ (α − 2)λ₀/2`.
pub fn check_condition(
    f: &Nonlinearity,
    which: Condition,
    params: &ConditionCParams,
    lambda0: f64,
    u_max: f64,
    grid_n: usize,
) -> Result<ConditionCertificate> {
    if !(u_max.is_finite() && u_max > 0.0) {
        return Err(Error::InvalidParameter(format!("u_max = {u_max} must be positive")));
    }
    if grid_n < 100 {
        return Err(Error::InvalidParameter(format!("grid_n = {grid_n} must be at least 100")));
    }
    params.validate_alpha()?;
    if which != Condition::A {
        params.validate_gamma()?;
    }
    if which == Condition::C {
        params.validate_beta(lambda0)?;
    }
    let alpha = params.alpha;
    let beta = if which == Condition::C { params.beta } else { 0.0 };
    let gamma = if which == Condition::A { 0.0 } else { params.gamma };

    let lo = 1e-6f64.min(u_max * 1e-3);
    let mut worst = (f64::INFINITY, 0.0, 0.0);
    for u in geometric_grid(lo, u_max, grid_n) {
        let uf = u * f.f(u);
        let af = alpha * f.antiderivative(u);
        let quad = beta * u * u;
        let margin = uf + quad + gamma - af;
        let scale = 1f64.max(uf).max(af).max(quad).max(gamma);
        let normalized = margin / scale;
        if normalized < worst.0 {
            worst = (normalized, margin, u);
        }
    }
    Ok(ConditionCertificate {
        holds_on_grid: worst.0 >= -GRID_REL_TOL,
        worst_margin: worst.1,
        worst_u: worst.2,
        analytic: analytic_verdict(f, which, alpha, beta),
    })
}

fn analytic_verdict(f: &Nonlinearity, which: Condition, alpha: f64, beta: f64) -> Option<bool> {
    let linear = |a: f64| match which {
        Condition::A | Condition::B => a == 0.0,
        Condition::C => (alpha - 2.0) * a / 2.0 <= beta,
    };
    match f.family() {
        Family::Linear(a) => Some(linear(*a)),
        Family::Power(q) if *q == 1.0 => Some(linear(1.0)),
        // For q > 1 the u^{q+1} terms dominate at infinity and balance
        // exactly when α = q + 1.
        Family::Power(q) => Some(alpha <= q + 1.0),
        _ => None,
    }
}

/// Existence form of the linear (C) verdict: `f = a·u` satisfies (C) for
/// some admissible `(α, β, γ)` iff `a ≤ λ₀`.
pub fn linear_satisfies_c(a: f64, lambda0: f64) -> bool {
    a <= lambda0
}

/// Parameters of the decomposition `F(u) = u^{2+ε} h(u) + a u² + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    /// Needed for (C), where `0 < a ≤ λ₀/2`.
    pub lambda0: f64,
}

/// Reports whether `h(u) = (F(u) − a u² − b) / u^{2+ε}` is nondecreasing on a
/// geometric grid over `[u_lo, u_hi]`. No sign is imposed on `h`.
pub fn h_decomposition_monotone(
    f: &Nonlinearity,
    which: Condition,
    dec: &Decomposition,
    u_lo: f64,
    u_hi: f64,
    grid_n: usize,
) -> Result<bool> {
    if !(u_lo > 0.0 && u_hi > u_lo && u_hi.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < u_lo < u_hi, got [{u_lo}, {u_hi}]"
        )));
    }
    if grid_n < 2 {
        return Err(Error::InvalidParameter("grid_n must be at least 2".into()));
    }
    if !(dec.alpha.is_finite() && dec.alpha > 2.0) {
        return Err(Error::InvalidParameter(format!("alpha = {} must exceed 2", dec.alpha)));
    }
    let ok = match which {
        Condition::A => dec.a == 0.0 && dec.b == 0.0,
        Condition::B => dec.a == 0.0 && dec.b > 0.0,
        Condition::C => dec.a > 0.0 && dec.a <= dec.lambda0 / 2.0 && dec.b > 0.0,
    };
    if !ok {
        return Err(Error::InvalidParameter(format!(
            "a = {}, b = {} are not admissible for ({which})",
            dec.a, dec.b
        )));
    }
    let power = dec.alpha;
    let h: Vec<f64> = geometric_grid(u_lo, u_hi, grid_n)
        .into_iter()
        .map(|u| (f.antiderivative(u) - dec.a * u * u - dec.b) / u.powf(power))
        .collect();
    Ok(h.windows(2).all(|w| {
        let scale = w[0].abs().max(w[1].abs());
        w[1] - w[0] >= -GRID_REL_TOL * scale
    }))
}

/// A certified superlinear minorant `f(u) ≥ δ u^{1+ε}` for `u ≥ m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minorant {
    pub delta: f64,
    pub m: f64,
}

const MINORANT_GRID: usize = 10_000;
/// Minimum log-log slope of `f(u)/u^{1+ε}` over the last decade of the range.
/// A steeper decay means the ratio tends to zero and no minorant exists.
const MINORANT_TAIL_SLOPE: f64 = -1e-2;

/// Searches for `(δ, m)` with `δ > 0`, `1 < m < u_hi` and
/// `f(u) ≥ δ u^{1+ε}` on the grid over `[m, u_hi]`, `ε = α − 2`.
///
/// `m` is the first grid point above 1 and `δ` the largest constant valid
/// from there on. Returns `None` when the ratio `f(u)/u^{1+ε}` is still
/// decaying at the top of the range.
pub fn superlinear_minorant(f: &Nonlinearity, alpha: f64, u_hi: f64) -> Result<Option<Minorant>> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must exceed 2")));
    }
    if !(u_hi.is_finite() && u_hi > 1.0) {
        return Err(Error::InvalidParameter(format!("u_hi = {u_hi} must exceed 1")));
    }
    let exponent = alpha - 1.0;
    let grid = geometric_grid(1.0, u_hi, MINORANT_GRID + 1);
    let ratio = |u: f64| f.f(u) / u.powf(exponent);
    let m = grid[1];
    let delta = grid[1..].iter().map(|&u| ratio(u)).fold(f64::INFINITY, f64::min);
    if !(delta > 0.0) {
        return Ok(None);
    }
    let tail_start = (u_hi / 10.0).max(m);
    if tail_start < u_hi {
        let slope = (ratio(u_hi) / ratio(tail_start)).ln() / (u_hi / tail_start).ln();
        if slope < MINORANT_TAIL_SLOPE {
            return Ok(None);
        }
    }
    Ok(Some(Minorant { delta, m }))
}

/// `inf f(u)/u` over a geometric grid on `(0, u_hi]`; the linear lower bound
/// `f(u) ≥ λu` holds on the grid for every `λ` up to this value.
pub fn linear_lower_slope(f: &Nonlinearity, u_hi: f64, grid_n: usize) -> Result<f64> {
    if !(u_hi.is_finite() && u_hi > 0.0) || grid_n < 2 {
        return Err(Error::InvalidParameter(format!("bad range (0, {u_hi}] / {grid_n}")));
    }
    Ok(geometric_grid(1e-6f64.min(u_hi * 1e-3), u_hi, grid_n)
        .into_iter()
        .map(|u| f.f(u) / u)
        .fold(f64::INFINITY, f64::min))
}

/// Outcome of the Osgood integral test `∫_m^∞ ds / f(s)`.
#[derive(Debug, Clone, PartialEq)]
pub enum OsgoodVerdict {
    Converges { estimate: f64, tail_bound: f64 },
    Diverges { partial: f64, upper: f64 },
}

const OSGOOD_RATIO: f64 = 0.95;
const OSGOOD_RUN: usize = 5;

/// Integrates `1/f` over doubling windows `[2ᵏm, 2ᵏ⁺¹m]` up to `horizon`.
///
/// Declares divergence once the window integrals fail to decay
/// (ratio ≥ 0.95) over 5 consecutive windows; this is a heuristic that
/// separates logarithmic divergence from convergent tails. Otherwise returns
/// the partial sum plus a geometric tail estimate.
pub fn osgood_test(f: &Nonlinearity, m: f64, horizon: f64) -> Result<OsgoodVerdict> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!("m = {m} must be positive")));
    }
    if !(horizon > 2.0 * m) {
        return Err(Error::InvalidParameter(format!(
            "horizon {horizon} must exceed 2m = {}",
            2.0 * m
        )));
    }
    let mut lo = m;
    let mut sum = 0.0;
    let mut prev: Option<f64> = None;
    let mut run = 0;
    let mut tail = f64::INFINITY;
    while 2.0 * lo <= horizon {
        let hi = 2.0 * lo;
        for k in 0..=8 {
            let u = lo + (hi - lo) * k as f64 / 8.0;
            if !(f.f(u) > 0.0) {
                return Err(Error::VanishingNonlinearity { u });
            }
        }
        let w = adaptive_simpson(|s| 1.0 / f.f(s), lo, hi, 0.0, QUAD_REL);
        sum += w;
        if let Some(p) = prev {
            let r = w / p;
            if r >= OSGOOD_RATIO {
                run += 1;
                if run >= OSGOOD_RUN {
                    return Ok(OsgoodVerdict::Diverges { partial: sum, upper: hi });
                }
            } else {
                run = 0;
            }
            tail = if r < 1.0 { w * r / (1.0 - r) } else { f64::INFINITY };
            if r < OSGOOD_RATIO && tail <= 1e-13 * sum {
                return Ok(OsgoodVerdict::Converges {
                    estimate: sum + tail,
                    tail_bound: tail,
                });
            }
        }
        prev = Some(w);
        lo = hi;
    }
    if tail.is_finite() && run == 0 {
        Ok(OsgoodVerdict::Converges {
            estimate: sum + tail,
            tail_bound: tail,
        })
    } else {
        Ok(OsgoodVerdict::Diverges { partial: sum, upper: lo })
    }
}

/// Constant initial data on `S` with `J(u₀) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub level: f64,
    pub u0: NodeField,
}

const INITIAL_SCAN: usize = 20_000;

/// Scans `v ∈ (0, v_hi]` for `F(v) > ω₀ v² + γ₁` with `ω₀ = max_{x∈S} d_ω x`
/// and `γ₁ = γ |S̄| / |S|`. The first qualifying `v` gives
/// `u₀ = v` on `S`, zero on `∂S`, which has `J(u₀) > 0`.
pub fn find_initial_data(
    net: &Network,
    f: &Nonlinearity,
    gamma: f64,
    v_hi: f64,
) -> Result<Option<InitialData>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must be positive")));
    }
    if !(v_hi.is_finite() && v_hi > 0.0) {
        return Err(Error::InvalidParameter(format!("v_hi = {v_hi} must be positive")));
    }
    let omega0 = net.max_interior_degree();
    let gamma1 = gamma * net.len() as f64 / net.interior().len() as f64;
    let found = geometric_grid(v_hi * 1e-9, v_hi, INITIAL_SCAN)
        .into_iter()
        .find(|&v| f.antiderivative(v) > omega0 * v * v + gamma1);
    Ok(found.map(|level| InitialData {
        level,
        u0: NodeField::constant_on_interior(net, level),
    }))
}

/// `max((ω₀/δ)^{1/ε}, m)`: the initial maximum beyond which `f ≥ δu^{1+ε}`
/// forces blow-up.
pub fn large_data_threshold(delta: f64, epsilon: f64, m: f64, omega0: f64) -> Result<f64> {
    for (name, v) in [("delta", delta), ("epsilon", epsilon), ("m", m), ("omega0", omega0)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidParameter(format!("{name} = {v} must be positive")));
        }
    }
    Ok((omega0 / delta).powf(1.0 / epsilon).max(m))
}
