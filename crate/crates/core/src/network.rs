//! Weighted networks with a vertex boundary.
//!
//! A [`Network`] is a finite, simple, connected graph `S̄ = S ∪ ∂S` with a
//! symmetric positive edge weight. Vertices carry string labels for I/O; all
//! numerics use the dense index `0..n`.
//!
//! The text format is one record per line:
//!
//! ```text
//! # comment
//! vertex a boundary
//! vertex b interior
//! vertex c boundary
//! edge a b 1.0
//! edge b c 0.5
//! ```
//!
//! Vertex declarations come first. Duplicate edges are accepted only when
//! they repeat the same weight.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::NetworkError;

/// Which side of the Dirichlet partition a vertex lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Interior,
    Boundary,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Interior => "interior",
            Role::Boundary => "boundary",
        }
    }
}

/// An immutable, validated weighted network with interior `S` and boundary `∂S`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    labels: Vec<String>,
    roles: Vec<Role>,
    weights: Vec<f64>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
}

impl Network {
    /// Builds a network from per-vertex labels and roles plus a dense row-major
    /// weight matrix, running the full invariant audit.
    pub fn new(
        labels: Vec<String>,
        roles: Vec<Role>,
        weights: Vec<f64>,
    ) -> Result<Self, NetworkError> {
        let n = labels.len();
        if roles.len() != n || weights.len() != n * n {
            return Err(NetworkError::TooSmall(format!(
                "{} labels, {} roles and {} weights do not describe a square network",
                n,
                roles.len(),
                weights.len()
            )));
        }
        let interior = (0..n).filter(|&i| roles[i] == Role::Interior).collect();
        let boundary = (0..n).filter(|&i| roles[i] == Role::Boundary).collect();
        let net = Network {
            labels,
            roles,
            weights,
            interior,
            boundary,
        };
        net.audit()?;
        Ok(net)
    }

    /// Builds a network from vertex declarations and an undirected edge list.
    pub fn from_edges(
        vertices: &[(&str, Role)],
        edges: &[(usize, usize, f64)],
    ) -> Result<Self, NetworkError> {
        let n = vertices.len();
        let mut weights = vec![0.0; n * n];
        for &(a, b, w) in edges {
            for idx in [a, b] {
                if idx >= n {
                    return Err(NetworkError::IndexOutOfRange { index: idx, len: n });
                }
            }
            weights[a * n + b] = w;
            weights[b * n + a] = w;
        }
        Network::new(
            vertices.iter().map(|(l, _)| l.to_string()).collect(),
            vertices.iter().map(|&(_, r)| r).collect(),
            weights,
        )
    }

    /// Checks every structural invariant listed on [`NetworkError`], returning
    /// the first violation found.
    pub fn audit(&self) -> Result<(), NetworkError> {
        let n = self.len();
        for x in 0..n {
            if self.weight(x, x) != 0.0 {
                return Err(NetworkError::Loop {
                    label: self.labels[x].clone(),
                });
            }
            for y in 0..n {
                let w = self.weight(x, y);
                if !w.is_finite() || w < 0.0 {
                    return Err(NetworkError::BadEntry {
                        a: self.labels[x].clone(),
                        b: self.labels[y].clone(),
                        weight: w,
                    });
                }
                if w != self.weight(y, x) {
                    return Err(NetworkError::Asymmetric {
                        a: self.labels[x].clone(),
                        b: self.labels[y].clone(),
                    });
                }
            }
        }
        if self.interior.is_empty() {
            return Err(NetworkError::EmptyInterior);
        }
        if self.boundary.is_empty() {
            return Err(NetworkError::EmptyBoundary);
        }
        for &z in &self.boundary {
            if !self.interior.iter().any(|&y| self.weight(z, y) > 0.0) {
                return Err(NetworkError::DetachedBoundary {
                    label: self.labels[z].clone(),
                });
            }
        }
        let reached = self.reachable_from(0);
        if let Some(x) = reached.iter().position(|&r| !r) {
            return Err(NetworkError::Disconnected {
                label: self.labels[x].clone(),
                root: self.labels[0].clone(),
            });
        }
        Ok(())
    }

    fn reachable_from(&self, root: usize) -> Vec<bool> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(x) = queue.pop_front() {
            for (y, &w) in self.row(x).iter().enumerate() {
                if !seen[y] && w > 0.0 {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn role(&self, x: usize) -> Role {
        self.roles[x]
    }

    pub fn is_interior(&self, x: usize) -> bool {
        self.roles[x] == Role::Interior
    }

    /// Interior vertex indices in increasing order.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    /// Boundary vertex indices in increasing order.
    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    #[inline]
    pub fn weight(&self, x: usize, y: usize) -> f64 {
        self.weights[x * self.len() + y]
    }

    /// Row `x` of the dense weight matrix.
    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.len();
        &self.weights[x * n..(x + 1) * n]
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    /// Weighted degree `d_ω x = Σ_y ω(x, y)`.
    pub fn degree(&self, x: usize) -> Result<f64, NetworkError> {
        if x >= self.len() {
            return Err(NetworkError::IndexOutOfRange {
                index: x,
                len: self.len(),
            });
        }
        Ok(self.row(x).iter().sum())
    }

    /// `ω₀ = max_{x∈S} d_ω x`.
    pub fn max_interior_degree(&self) -> f64 {
        self.interior
            .iter()
            .map(|&x| self.row(x).iter().sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min_interior_degree(&self) -> f64 {
        self.interior
            .iter()
            .map(|&x| self.row(x).iter().sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// Unordered edges `(x, y, ω)` with `x < y`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.len();
        (0..n).flat_map(move |x| {
            ((x + 1)..n).filter_map(move |y| {
                let w = self.weight(x, y);
                (w > 0.0).then_some((x, y, w))
            })
        })
    }

    /// The same graph with every weight multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Network, NetworkError> {
        Network::new(
            self.labels.clone(),
            self.roles.clone(),
            self.weights.iter().map(|w| w * factor).collect(),
        )
    }

    /// Parses the edge-list text format.
    pub fn parse(text: &str) -> Result<Network, NetworkError> {
        let mut labels: Vec<String> = Vec::new();
        let mut roles: Vec<Role> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edges: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
        let mut seen_edge = false;

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let Some(&keyword) = tokens.first() else {
                continue;
            };
            match keyword {
                "vertex" => {
                    if seen_edge {
                        return Err(NetworkError::Syntax {
                            line,
                            msg: "vertex declarations must precede edges".into(),
                        });
                    }
                    if tokens.len() != 3 {
                        return Err(NetworkError::Syntax {
                            line,
                            msg: "expected `vertex <label> interior|boundary`".into(),
                        });
                    }
                    let role = match tokens[2] {
                        "interior" => Role::Interior,
                        "boundary" => Role::Boundary,
                        other => {
                            return Err(NetworkError::Syntax {
                                line,
                                msg: format!("unknown role '{other}'"),
                            })
                        }
                    };
                    let label = tokens[1].to_string();
                    if index.contains_key(&label) {
                        return Err(NetworkError::DuplicateVertex { line, label });
                    }
                    index.insert(label.clone(), labels.len());
                    labels.push(label);
                    roles.push(role);
                }
                "edge" => {
                    seen_edge = true;
                    if tokens.len() != 4 {
                        return Err(NetworkError::Syntax {
                            line,
                            msg: "expected `edge <label1> <label2> <weight>`".into(),
                        });
                    }
                    let lookup = |l: &str| {
                        index
                            .get(l)
                            .copied()
                            .ok_or_else(|| NetworkError::UnknownVertex {
                                line,
                                label: l.to_string(),
                            })
                    };
                    let a = lookup(tokens[1])?;
                    let b = lookup(tokens[2])?;
                    if a == b {
                        return Err(NetworkError::SelfLoop {
                            line,
                            label: tokens[1].to_string(),
                        });
                    }
                    let weight: f64 = tokens[3].parse().map_err(|_| NetworkError::Syntax {
                        line,
                        msg: format!("cannot parse weight '{}'", tokens[3]),
                    })?;
                    if !weight.is_finite() || weight <= 0.0 {
                        return Err(NetworkError::InvalidWeight {
                            line,
                            a: tokens[1].to_string(),
                            b: tokens[2].to_string(),
                            weight,
                        });
                    }
                    let key = (a.min(b), a.max(b));
                    match edges.get(&key) {
                        Some(&(first, _)) if first != weight => {
                            return Err(NetworkError::ConflictingEdge {
                                line,
                                a: tokens[1].to_string(),
                                b: tokens[2].to_string(),
                                first,
                                second: weight,
                            });
                        }
                        Some(_) => {}
                        None => {
                            edges.insert(key, (weight, line));
                        }
                    }
                }
                other => {
                    return Err(NetworkError::Syntax {
                        line,
                        msg: format!("unknown record '{other}'"),
                    })
                }
            }
        }

        let n = labels.len();
        let mut weights = vec![0.0; n * n];
        for (&(a, b), &(w, _)) in &edges {
            weights[a * n + b] = w;
            weights[b * n + a] = w;
        }
        Network::new(labels, roles, weights)
    }

    /// Serializes to the edge-list format: vertices sorted by label, edges by
    /// `(min, max)` label, weights with 17 significant digits.
    pub fn to_edge_list(&self) -> String {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut out = String::new();
        for &x in &order {
            let _ = writeln!(out, "vertex {} {}", self.labels[x], self.roles[x].as_str());
        }
        let mut edges: Vec<(&str, &str, f64)> = self
            .edges()
            .map(|(x, y, w)| {
                let (a, b) = (self.labels[x].as_str(), self.labels[y].as_str());
                if a <= b {
                    (a, b, w)
                } else {
                    (b, a, w)
                }
            })
            .collect();
        edges.sort_by(|p, q| (p.0, p.1).cmp(&(q.0, q.1)));
        for (a, b, w) in edges {
            let _ = writeln!(out, "edge {a} {b} {w:.16e}");
        }
        out
    }
}

/// Canonical test graphs.
pub mod builders {
    use super::*;

    fn check_weight(weight: f64) -> Result<(), NetworkError> {
        if weight.is_finite() && weight > 0.0 {
            Ok(())
        } else {
            Err(NetworkError::TooSmall(format!("weight {weight} must be finite and > 0")))
        }
    }

    /// Path `v0 – v1 – … – v{n-1}` with the two endpoints as boundary.
    pub fn path(n: usize, weight: f64) -> Result<Network, NetworkError> {
        check_weight(weight)?;
        if n < 3 {
            return Err(NetworkError::TooSmall(format!(
                "a path needs at least 3 vertices to have an interior, got {n}"
            )));
        }
        let labels: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let vertices: Vec<(&str, Role)> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let role = if i == 0 || i == n - 1 {
                    Role::Boundary
                } else {
                    Role::Interior
                };
                (l.as_str(), role)
            })
            .collect();
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, weight)).collect();
        Network::from_edges(&vertices, &edges)
    }

    /// Star with interior center `c` and `k` boundary leaves `l1..lk`.
    pub fn star(k: usize, weight: f64) -> Result<Network, NetworkError> {
        check_weight(weight)?;
        if k < 1 {
            return Err(NetworkError::TooSmall("a star needs at least one leaf".into()));
        }
        let labels: Vec<String> = std::iter::once("c".to_string())
            .chain((1..=k).map(|i| format!("l{i}")))
            .collect();
        let vertices: Vec<(&str, Role)> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), if i == 0 { Role::Interior } else { Role::Boundary }))
            .collect();
        let edges: Vec<_> = (1..=k).map(|i| (0, i, weight)).collect();
        Network::from_edges(&vertices, &edges)
    }

    /// Interior cycle `c0..c{n-1}`, each vertex carrying one pendant boundary
    /// vertex `p{i}`.
    pub fn cycle_with_pendant_boundary(n: usize, weight: f64) -> Result<Network, NetworkError> {
        check_weight(weight)?;
        if n < 3 {
            return Err(NetworkError::TooSmall(format!(
                "a cycle needs at least 3 vertices, got {n}"
            )));
        }
        let labels: Vec<String> = (0..n)
            .map(|i| format!("c{i}"))
            .chain((0..n).map(|i| format!("p{i}")))
            .collect();
        let vertices: Vec<(&str, Role)> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), if i < n { Role::Interior } else { Role::Boundary }))
            .collect();
        let edges: Vec<_> = (0..n)
            .map(|i| (i, (i + 1) % n, weight))
            .chain((0..n).map(|i| (i, n + i, weight)))
            .collect();
        Network::from_edges(&vertices, &edges)
    }

    /// `rows × cols` lattice with 4-neighbour edges. Border cells form the
    /// boundary, except the four corners, which touch no interior cell and
    /// are therefore not part of `S̄`.
    pub fn grid(rows: usize, cols: usize, weight: f64) -> Result<Network, NetworkError> {
        check_weight(weight)?;
        if rows < 3 || cols < 3 {
            return Err(NetworkError::TooSmall(format!(
                "a {rows}x{cols} grid has no interior cell"
            )));
        }
        let is_corner = |r: usize, c: usize| (r == 0 || r == rows - 1) && (c == 0 || c == cols - 1);
        let mut cells = Vec::new();
        let mut slot = vec![usize::MAX; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                if is_corner(r, c) {
                    continue;
                }
                let border = r == 0 || c == 0 || r == rows - 1 || c == cols - 1;
                slot[r * cols + c] = cells.len();
                cells.push((
                    format!("r{r}c{c}"),
                    if border { Role::Boundary } else { Role::Interior },
                ));
            }
        }
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let here = slot[r * cols + c];
                if here == usize::MAX {
                    continue;
                }
                if c + 1 < cols && slot[r * cols + c + 1] != usize::MAX {
                    edges.push((here, slot[r * cols + c + 1], weight));
                }
                if r + 1 < rows && slot[(r + 1) * cols + c] != usize::MAX {
                    edges.push((here, slot[(r + 1) * cols + c], weight));
                }
            }
        }
        let vertices: Vec<(&str, Role)> = cells.iter().map(|(l, r)| (l.as_str(), *r)).collect();
        Network::from_edges(&vertices, &edges)
    }
}
