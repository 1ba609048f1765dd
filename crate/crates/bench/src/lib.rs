//! Shared inputs for the criterion benchmarks.

use netblow_core::builders::grid;
use netblow_core::{Network, NodeField};

/// Square grids with `side − 2` interior rows and columns.
pub fn grid_network(side: usize) -> Network {
    grid(side, side, 1.0).expect("side >= 3")
}

/// A smooth bump on the interior, zero on the boundary.
pub fn bump(net: &Network, height: f64) -> NodeField {
    let mut u = NodeField::zeros(net.len());
    let k = net.interior().len() as f64;
    for (i, &x) in net.interior().iter().enumerate() {
        let s = (i as f64 + 1.0) / (k + 1.0);
        u[x] = height * (std::f64::consts::PI * s).sin();
    }
    u
}
