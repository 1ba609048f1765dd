//! Discrete Laplacian `Δ_ω`, the Dirichlet energy form and the
//! summation-by-parts identity.

use std::ops::{Deref, DerefMut};

use crate::error::{Error, Result};
use crate::network::Network;

/// One real value per vertex of `S̄`, indexed like the owning [`Network`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NodeField(Vec<f64>);

impl NodeField {
    pub fn new(values: Vec<f64>) -> Self {
        NodeField(values)
    }

    pub fn zeros(n: usize) -> Self {
        NodeField(vec![0.0; n])
    }

    /// `value` on every interior vertex, zero on the boundary.
    pub fn constant_on_interior(net: &Network, value: f64) -> Self {
        let mut v = vec![0.0; net.len()];
        for &x in net.interior() {
            v[x] = value;
        }
        NodeField(v)
    }

    /// `value` at vertex `x`, zero elsewhere.
    pub fn indicator(n: usize, x: usize, value: f64) -> Self {
        let mut v = vec![0.0; n];
        v[x] = value;
        NodeField(v)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn check_size(&self, net: &Network) -> Result<()> {
        if self.0.len() == net.len() {
            Ok(())
        } else {
            Err(Error::SizeMismatch {
                expected: net.len(),
                found: self.0.len(),
            })
        }
    }

    /// Membership in the class of fields vanishing on `∂S`.
    pub fn is_admissible(&self, net: &Network) -> bool {
        self.0.len() == net.len() && net.boundary().iter().all(|&z| self.0[z] == 0.0)
    }

    /// First boundary vertex where the field is nonzero, if any.
    pub fn boundary_violation(&self, net: &Network) -> Option<(usize, f64)> {
        net.boundary()
            .iter()
            .map(|&z| (z, self.0[z]))
            .find(|&(_, v)| v != 0.0)
    }

    pub fn sum_squares(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum()
    }

    pub fn sup_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> NodeField {
        NodeField(self.0.iter().map(|v| c * v).collect())
    }
}

impl From<Vec<f64>> for NodeField {
    fn from(v: Vec<f64>) -> Self {
        NodeField(v)
    }
}

impl Deref for NodeField {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for NodeField {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

/// `Δ_ω u(x) = Σ_y [u(y) − u(x)] ω(x, y)`, evaluated at every vertex of `S̄`.
/// Boundary rows use the same formula; callers restrict to `S` as needed.
pub fn laplacian(net: &Network, u: &NodeField) -> Result<NodeField> {
    u.check_size(net)?;
    let out = (0..net.len())
        .map(|x| {
            let ux = u[x];
            net.row(x)
                .iter()
                .zip(u.iter())
                .map(|(w, uy)| (uy - ux) * w)
                .sum()
        })
        .collect();
    Ok(NodeField(out))
}

/// `(1/2) Σ_{x,y} [u(x) − u(y)]² ω(x, y)`.
pub fn dirichlet_energy(net: &Network, u: &NodeField) -> Result<f64> {
    u.check_size(net)?;
    let mut total = 0.0;
    for x in 0..net.len() {
        let ux = u[x];
        for (w, uy) in net.row(x).iter().zip(u.iter()) {
            let d = ux - uy;
            total += d * d * w;
        }
    }
    Ok(0.5 * total)
}

/// `Σ_x g(x) · (−Δ_ω f)(x)`.
pub fn form_pairing(net: &Network, f: &NodeField, g: &NodeField) -> Result<f64> {
    g.check_size(net)?;
    let lap = laplacian(net, f)?;
    Ok(-g.iter().zip(lap.iter()).map(|(a, b)| a * b).sum::<f64>())
}

/// `|2 Σ_x g(x)(−Δ_ω f)(x) − Σ_{x,y} [f(y) − f(x)][g(y) − g(x)] ω(x, y)|`.
///
/// Zero in exact arithmetic for every pair of fields.
pub fn pairing_identity_residual(net: &Network, f: &NodeField, g: &NodeField) -> Result<f64> {
    f.check_size(net)?;
    g.check_size(net)?;
    let left = 2.0 * form_pairing(net, f, g)?;
    let mut right = 0.0;
    for x in 0..net.len() {
        for (y, w) in net.row(x).iter().enumerate() {
            right += (f[y] - f[x]) * (g[y] - g[x]) * w;
        }
    }
    Ok((left - right).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::builders::{path, star};
    use crate::random::{random_field, random_network, NetworkShape};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    #[test]
    fn constant_field_has_zero_laplacian() {
        let net = star(4, 1.5).unwrap();
        let u = NodeField::new(vec![3.0; net.len()]);
        assert!(laplacian(&net, &u).unwrap().iter().all(|&v| v == 0.0));
        assert_eq!(dirichlet_energy(&net, &u).unwrap(), 0.0);
    }

    #[test]
    fn small_hand_values() {
        let p3 = path(3, 1.0).unwrap();
        let u = NodeField::new(vec![0.0, 1.0, 0.0]);
        assert_eq!(laplacian(&p3, &u).unwrap()[1], -2.0);
        assert_eq!(dirichlet_energy(&p3, &u).unwrap(), 2.0);

        let s3 = star(3, 1.0).unwrap();
        let u = NodeField::indicator(4, 0, 1.0);
        assert_eq!(laplacian(&s3, &u).unwrap()[0], -3.0);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let p3 = path(3, 1.0).unwrap();
        let u = NodeField::zeros(2);
        assert_eq!(
            laplacian(&p3, &u),
            Err(Error::SizeMismatch { expected: 3, found: 2 })
        );
        assert!(dirichlet_energy(&p3, &u).is_err());
        assert!(pairing_identity_residual(&p3, &NodeField::zeros(3), &u).is_err());
    }

    #[test]
    fn zero_pair_has_zero_residual() {
        let p3 = path(3, 1.0).unwrap();
        let z = NodeField::zeros(3);
        assert_eq!(pairing_identity_residual(&p3, &z, &z).unwrap(), 0.0);
    }

    #[test]
    fn energy_matches_form() {
        let mut rng = SplitMix64::seed_from_u64(11);
        for _ in 0..200 {
            let net = random_network(&mut rng, &NetworkShape::default());
            let u = random_field(&mut rng, net.len(), -2.0, 2.0);
            let e = dirichlet_energy(&net, &u).unwrap();
            let form = form_pairing(&net, &u, &u).unwrap();
            assert!((e - form).abs() <= 1e-12 * e.abs().max(1.0), "{e} vs {form}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn linear_symmetric_and_semidefinite(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let mut rng = SplitMix64::seed_from_u64(seed);
            let net = random_network(&mut rng, &NetworkShape::default());
            let n = net.len();
            let u = random_field(&mut rng, n, -1.0, 1.0);
            let v = random_field(&mut rng, n, -1.0, 1.0);
            let combo = NodeField::new(u.iter().zip(v.iter()).map(|(x, y)| a * x + b * y).collect());
            let lhs = laplacian(&net, &combo).unwrap();
            let lu = laplacian(&net, &u).unwrap();
            let lv = laplacian(&net, &v).unwrap();
            let scale = net.max_weight() * n as f64 * 10.0;
            for x in 0..n {
                prop_assert!((lhs[x] - (a * lu[x] + b * lv[x])).abs() <= 1e-13 * scale);
            }
            let uv = form_pairing(&net, &u, &v).unwrap();
            let vu = form_pairing(&net, &v, &u).unwrap();
            prop_assert!((uv - vu).abs() <= 1e-12 * scale);
            prop_assert!(form_pairing(&net, &u, &u).unwrap() >= -1e-12 * scale);
        }
    }
}
