//! Seeded generators for random networks and fields.
//!
//! Everything takes a caller-supplied [`Rng`]; the CLI and the test suites use
//! `rand_xoshiro::SplitMix64` so that a seed fixes the whole stream.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, RngExt};

use crate::network::{Network, Role};
use crate::operators::NodeField;

/// Size and weight ranges for [`random_network`].
#[derive(Debug, Clone)]
pub struct NetworkShape {
    pub interior: RangeInclusive<usize>,
    pub boundary: RangeInclusive<usize>,
    pub weight_lo: f64,
    pub weight_hi: f64,
    /// Probability of each extra edge beyond the spanning structure.
    pub edge_prob: f64,
}

impl Default for NetworkShape {
    fn default() -> Self {
        NetworkShape {
            interior: 1..=8,
            boundary: 1..=4,
            weight_lo: 0.1,
            weight_hi: 10.0,
            edge_prob: 0.3,
        }
    }
}

impl NetworkShape {
    /// At most `n` vertices in total, with at least one on each side.
    pub fn with_max_vertices(n: usize) -> Self {
        assert!(n >= 2);
        let interior_max = (2 * n / 3).max(1);
        NetworkShape {
            interior: 1..=interior_max,
            boundary: 1..=(n - interior_max).max(1),
            ..NetworkShape::default()
        }
    }
}

/// A random valid network whose interior is connected on its own, so the
/// first Dirichlet eigenvector is strictly positive on `S`.
pub fn random_network<R: Rng + ?Sized>(rng: &mut R, shape: &NetworkShape) -> Network {
    let k = rng.random_range(shape.interior.clone());
    let m = rng.random_range(shape.boundary.clone());
    let n = k + m;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // order[i] is the matrix index of logical vertex i; logical 0..k are interior.
    let mut weights = vec![0.0; n * n];
    let draw = |rng: &mut R| rng.random_range(shape.weight_lo..=shape.weight_hi);
    let link = |a: usize, b: usize, w: f64, weights: &mut Vec<f64>| {
        let (x, y) = (order[a], order[b]);
        weights[x * n + y] = w;
        weights[y * n + x] = w;
    };
    for i in 1..k {
        let j = rng.random_range(0..i);
        let w = draw(rng);
        link(i, j, w, &mut weights);
    }
    for b in k..n {
        let j = rng.random_range(0..k);
        let w = draw(rng);
        link(b, j, w, &mut weights);
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let (x, y) = (order[a], order[b]);
            if weights[x * n + y] == 0.0 && rng.random_bool(shape.edge_prob) {
                let w = draw(rng);
                link(a, b, w, &mut weights);
            }
        }
    }
    let mut labels = vec![String::new(); n];
    let mut roles = vec![Role::Interior; n];
    for (logical, &idx) in order.iter().enumerate() {
        if logical < k {
            labels[idx] = format!("s{logical}");
        } else {
            labels[idx] = format!("b{}", logical - k);
            roles[idx] = Role::Boundary;
        }
    }
    Network::new(labels, roles, weights).expect("generator builds valid networks")
}

/// Independent uniform values in `[lo, hi]` on every vertex.
pub fn random_field<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> NodeField {
    NodeField::new((0..n).map(|_| rng.random_range(lo..=hi)).collect())
}

/// Uniform values in `[lo, hi]` on the interior, zero on the boundary.
pub fn random_admissible<R: Rng + ?Sized>(
    rng: &mut R,
    net: &Network,
    lo: f64,
    hi: f64,
) -> NodeField {
    let mut u = NodeField::zeros(net.len());
    for &x in net.interior() {
        u[x] = rng.random_range(lo..=hi);
    }
    u
}
