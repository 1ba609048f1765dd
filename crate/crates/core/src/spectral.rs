//! First Dirichlet eigenpair of `−Δ_ω` on the interior and the Rayleigh
//! quotient.

use crate::error::{Error, Result};
use crate::network::Network;
use crate::operators::{dirichlet_energy, NodeField};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_REL: f64 = 1e-14;

/// `(λ₀, φ₀)` with `φ₀ > 0` on `S`, `φ₀ = 0` on `∂S` and `Σ_{x∈S} φ₀² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub lambda0: f64,
    pub phi0: NodeField,
}

/// Eigen-decomposition of a dense symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub n: usize,
    /// Eigenvalues in the order produced by the rotations (unsorted).
    pub values: Vec<f64>,
    /// Column-major eigenvectors: column `k` is `vectors[k*n..(k+1)*n]`.
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// Index of the smallest eigenvalue.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for k in 1..self.n {
            if self.values[k] < self.values[best] {
                best = k;
            }
        }
        best
    }
}

/// The `|S| × |S|` matrix with `d_ω x` on the diagonal and `−ω(x, y)` off it,
/// row-major, rows in the order of [`Network::interior`].
pub fn interior_matrix(net: &Network) -> Vec<f64> {
    let s = net.interior();
    let k = s.len();
    let mut a = vec![0.0; k * k];
    for (i, &x) in s.iter().enumerate() {
        a[i * k + i] = net.row(x).iter().sum();
        for (j, &y) in s.iter().enumerate() {
            if i != j {
                a[i * k + j] = -net.weight(x, y);
            }
        }
    }
    a
}

/// Cyclic Jacobi rotations on a symmetric row-major matrix.
///
/// Stops once the off-diagonal Frobenius norm drops below `1e−14 · ‖A‖_F`,
/// then runs one polishing sweep.
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> Result<SymmetricEigen> {
    assert_eq!(matrix.len(), n * n, "matrix must be n×n");
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = OFF_DIAGONAL_REL * frob;
    let off_norm = |a: &[f64]| {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += a[p * n + q] * a[p * n + q];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    let mut polished = false;
    loop {
        if off_norm(&a) <= threshold {
            if polished {
                break;
            }
            polished = true;
        } else if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                // Columns of v are the eigenvectors.
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for k in 0..n {
        for i in 0..n {
            vectors[k * n + i] = v[i * n + k];
        }
    }
    Ok(SymmetricEigen {
        n,
        values,
        vectors,
        sweeps,
    })
}

/// First Dirichlet eigenpair of `−Δ_ω` on `S`.
pub fn first_eigenpair(net: &Network) -> Result<EigenPair> {
    let s = net.interior();
    let k = s.len();
    let eig = jacobi_eigen(&interior_matrix(net), k)?;
    let best = eig.argmin();
    let lambda0 = eig.values[best];
    let mut vec = eig.vector(best).to_vec();

    let lead = vec
        .iter()
        .copied()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    let norm = vec.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = lead.signum() / norm;
    for x in vec.iter_mut() {
        *x *= scale;
    }
    let mut phi0 = NodeField::zeros(net.len());
    for (i, &x) in s.iter().enumerate() {
        if vec[i] <= 0.0 {
            return Err(Error::NonPositiveEigenvector {
                vertex: x,
                value: vec[i],
            });
        }
        phi0[x] = vec[i];
    }
    Ok(EigenPair { lambda0, phi0 })
}

/// `dirichlet_energy(u) / Σ u²` for an admissible, nonzero `u`.
pub fn rayleigh_quotient(net: &Network, u: &NodeField) -> Result<f64> {
    u.check_size(net)?;
    if let Some((vertex, value)) = u.boundary_violation(net) {
        return Err(Error::NotAdmissible { vertex, value });
    }
    let mass = u.sum_squares();
    if mass == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(dirichlet_energy(net, u)? / mass)
}

/// `max_{x∈S} |−Δ_ω φ(x) − λ φ(x)|`.
pub fn eigen_residual(net: &Network, pair: &EigenPair) -> Result<f64> {
    let lap = crate::operators::laplacian(net, &pair.phi0)?;
    Ok(net
        .interior()
        .iter()
        .map(|&x| (-lap[x] - pair.lambda0 * pair.phi0[x]).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::builders::{cycle_with_pendant_boundary, grid, path, star};
    use crate::network::Role;
    use crate::random::{random_admissible, random_network, NetworkShape};
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

    #[test]
    fn star_is_a_one_by_one_problem() {
        for k in 1..6 {
            let pair = first_eigenpair(&star(k, 1.0).unwrap()).unwrap();
            assert_eq!(pair.lambda0, k as f64);
            assert_eq!(pair.phi0[0], 1.0);
        }
    }

    #[test]
    fn p4_eigenpair() {
        let net = path(4, 1.0).unwrap();
        let pair = first_eigenpair(&net).unwrap();
        assert!((pair.lambda0 - 1.0).abs() < 1e-12);
        let h = 0.5f64.sqrt();
        assert!((pair.phi0[1] - h).abs() < 1e-12 && (pair.phi0[2] - h).abs() < 1e-12);
        assert_eq!(pair.phi0[0], 0.0);
        assert_eq!(pair.phi0[3], 0.0);
    }

    #[test]
    fn closed_forms_for_builders() {
        // Cycle plus one pendant per vertex: constant vector, λ₀ = weight.
        let pair = first_eigenpair(&cycle_with_pendant_boundary(6, 0.7).unwrap()).unwrap();
        assert!((pair.lambda0 - 0.7).abs() < 1e-12);
        // Path with n interior vertices: 2 − 2cos(π/(n+1)).
        let pair = first_eigenpair(&path(12, 1.0).unwrap()).unwrap();
        let exact = 2.0 - 2.0 * (std::f64::consts::PI / 11.0).cos();
        assert!((pair.lambda0 - exact).abs() < 1e-12);
        // 4x5 grid: 2x3 interior block, spectrum is a sum of path spectra.
        let pair = first_eigenpair(&grid(4, 5, 1.0).unwrap()).unwrap();
        let exact = (2.0 - 2.0 * (std::f64::consts::PI / 3.0).cos())
            + (2.0 - 2.0 * (std::f64::consts::PI / 4.0).cos());
        assert!((pair.lambda0 - exact).abs() < 1e-12, "{}", pair.lambda0);
    }

    #[test]
    fn rayleigh_quotient_contract() {
        let p3 = path(3, 1.0).unwrap();
        assert_eq!(rayleigh_quotient(&p3, &NodeField::indicator(3, 1, 1.0)).unwrap(), 2.0);
        assert_eq!(rayleigh_quotient(&p3, &NodeField::zeros(3)), Err(Error::ZeroField));
        assert!(matches!(
            rayleigh_quotient(&p3, &NodeField::new(vec![1.0, 1.0, 0.0])),
            Err(Error::NotAdmissible { vertex: 0, .. })
        ));
    }

    #[test]
    fn random_invariants() {
        let mut rng = SplitMix64::seed_from_u64(5);
        for _ in 0..100 {
            let net = random_network(&mut rng, &NetworkShape::default());
            let pair = first_eigenpair(&net).unwrap();
            assert!(eigen_residual(&net, &pair).unwrap() <= 1e-10 * pair.lambda0);
            let mass: f64 = net.interior().iter().map(|&x| pair.phi0[x].powi(2)).sum();
            assert!((mass - 1.0).abs() <= 1e-12);
            assert!(pair.lambda0 <= net.min_interior_degree() + 1e-12);
            let rq = rayleigh_quotient(&net, &pair.phi0).unwrap();
            assert!((rq - pair.lambda0).abs() <= 1e-10 * pair.lambda0);
            for _ in 0..50 {
                let u = random_admissible(&mut rng, &net, -1.0, 1.0);
                let rq = rayleigh_quotient(&net, &u).unwrap();
                assert!(rq >= pair.lambda0 - 1e-10);
                let scaled = rayleigh_quotient(&net, &u.scaled(-3.7)).unwrap();
                assert!((scaled - rq).abs() <= 1e-12 * rq);
            }
            let c = 2.5;
            let scaled = first_eigenpair(&net.scaled(c).unwrap()).unwrap();
            assert!((scaled.lambda0 - c * pair.lambda0).abs() <= 1e-10 * c * pair.lambda0);
        }
    }

    #[test]
    fn boundary_disconnected_interior_is_reported() {
        // s0 - b - s1: two interior components of equal weight give a
        // degenerate λ₀ whose eigenvectors need not be positive.
        let net = Network::from_edges(
            &[
                ("s0", Role::Interior),
                ("b", Role::Boundary),
                ("s1", Role::Interior),
                ("c", Role::Boundary),
            ],
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 3.0)],
        )
        .unwrap();
        // s0 has degree 1, s1 degree 4: φ₀ lives on s0 only.
        assert!(matches!(
            first_eigenpair(&net),
            Err(Error::NonPositiveEigenvector { .. })
        ));
    }
}
