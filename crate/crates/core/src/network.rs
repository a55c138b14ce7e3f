//! Finite host networks and the π-weighted calculus on them.
//!
//! A [`HostNetwork`] stores an interior set Ω together with every neighbor of
//! Ω (the host). Vertex weights π are stored explicitly, so a boundary vertex
//! may carry more weight than its stored edges account for: its remaining
//! edges lead outside the host and are never needed for functions that vanish
//! off Ω.
//!
//! All carré du champ operations return **2Γ**, never Γ:
//!
//! ```text
//! gamma2(f, g)(x) = 2Γ(f, g)(x) = Σ_y P(x, y) (f(x) − f(y)) (g(x) − g(y))
//! ```
//!
//! Energy and Λ sum over ordered pairs (x, y), so every undirected edge is
//! counted twice. Self-loops add to π and P(x, x) but to no difference.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Relative tolerance used when checking π against stored row sums.
const WEIGHT_TOL: f64 = 1e-12;

/// A finite weighted graph with explicit vertex weights and a designated interior.
#[derive(Debug, Clone, PartialEq)]
pub struct HostNetwork {
    pi: Vec<f64>,
    // Sorted by neighbor index; a self-loop appears once as (i, c).
    adj: Vec<Vec<(usize, f64)>>,
    interior: Vec<usize>,
    is_interior: Vec<bool>,
}

impl HostNetwork {
    /// Builds a network from an undirected edge list (each pair listed once).
    ///
    /// Edges with zero conductance are dropped. The result satisfies every
    /// invariant below or construction fails:
    /// - interior vertices have π equal to their stored row sum,
    /// - boundary vertices have π at least their stored row sum,
    /// - each connected component of the interior has an edge leaving it.
    pub fn new(
        vertices: usize,
        pi: Vec<f64>,
        edges: &[(usize, usize, f64)],
        interior: &[usize],
    ) -> Result<Self> {
        if pi.len() != vertices {
            return Err(domain!("pi has {} entries, expected {}", pi.len(), vertices));
        }
        if let Some((i, w)) = pi.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(domain!("vertex {i} has non-positive weight {w}"));
        }

        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); vertices];
        for &(a, b, c) in edges {
            if a >= vertices || b >= vertices {
                return Err(domain!("edge ({a}, {b}) references an unknown vertex"));
            }
            if !(c.is_finite() && c >= 0.0) {
                return Err(domain!("edge ({a}, {b}) has invalid conductance {c}"));
            }
            if c == 0.0 {
                continue;
            }
            adj[a].push((b, c));
            if a != b {
                adj[b].push((a, c));
            }
        }
        for (i, row) in adj.iter_mut().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(domain!("duplicate edge at vertex {i}"));
            }
        }

        let mut is_interior = vec![false; vertices];
        for &i in interior {
            if i >= vertices {
                return Err(domain!("interior vertex {i} out of range"));
            }
            if is_interior[i] {
                return Err(domain!("interior vertex {i} listed twice"));
            }
            is_interior[i] = true;
        }
        if interior.is_empty() {
            return Err(domain!("interior is empty"));
        }
        let mut interior = interior.to_vec();
        interior.sort_unstable();

        let net = HostNetwork { pi, adj, interior, is_interior };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        for (i, row) in self.adj.iter().enumerate() {
            let total: f64 = row.iter().map(|&(_, c)| c).sum();
            let scale = WEIGHT_TOL * self.pi[i].max(total);
            if self.is_interior[i] {
                if (total - self.pi[i]).abs() > scale {
                    return Err(domain!(
                        "interior vertex {i}: pi = {} but stored conductances sum to {total}",
                        self.pi[i]
                    ));
                }
            } else if total > self.pi[i] + scale {
                return Err(domain!(
                    "boundary vertex {i}: pi = {} is below stored conductance sum {total}",
                    self.pi[i]
                ));
            }
        }

        // Every interior component must leak to the boundary, otherwise λ₁ = 0.
        let mut seen = vec![false; self.len()];
        for &start in &self.interior {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut leaks = false;
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.adj[x] {
                    if !self.is_interior[y] {
                        leaks = true;
                    } else if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            if !leaks {
                return Err(domain!(
                    "interior component containing vertex {start} has no edge leaving the interior"
                ));
            }
        }
        Ok(())
    }

    /// Number of host vertices.
    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.pi
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.pi[i]
    }

    /// Interior vertex indices, ascending.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.is_interior[i]
    }

    /// Stored neighbors of `i` with their conductances, ascending by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn conductance(&self, i: usize, j: usize) -> f64 {
        self.adj[i]
            .binary_search_by_key(&j, |&(k, _)| k)
            .map(|pos| self.adj[i][pos].1)
            .unwrap_or(0.0)
    }

    /// Undirected edges (i ≤ j) in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, row)| {
            row.iter().filter(move |&&(j, _)| j >= i).map(move |&(j, c)| (i, j, c))
        })
    }

    /// P(i, j) = c(i, j) / π(i).
    pub fn transition(&self, i: usize, j: usize) -> Result<f64> {
        if i >= self.len() || j >= self.len() {
            return Err(domain!("unknown vertex in transition({i}, {j})"));
        }
        Ok(self.conductance(i, j) / self.pi[i])
    }

    fn check_field(&self, f: &[f64]) {
        assert_eq!(f.len(), self.len(), "function must be defined on every host vertex");
    }

    /// (Δf)(x) = Σ_y P(x, y)(f(x) − f(y)) on interior rows; boundary rows are zero.
    pub fn laplacian(&self, f: &[f64]) -> Vec<f64> {
        self.check_field(f);
        let mut out = vec![0.0; self.len()];
        for &x in &self.interior {
            let s: f64 = self.adj[x].iter().map(|&(y, c)| c * (f[x] - f[y])).sum();
            out[x] = s / self.pi[x];
        }
        out
    }

    /// ⟨f, g⟩_π over the host.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.check_field(f);
        self.check_field(g);
        self.pi.iter().zip(f).zip(g).map(|((w, a), b)| w * a * b).sum()
    }

    pub fn norm_sq(&self, f: &[f64]) -> f64 {
        self.inner(f, f)
    }

    /// E(f, g) = Σ_{x,y} c(x, y)(f(x) − f(y))(g(x) − g(y)) over ordered pairs.
    pub fn energy(&self, f: &[f64], g: &[f64]) -> f64 {
        self.check_field(f);
        self.check_field(g);
        self.ordered_pairs().map(|(x, y, c)| c * (f[x] - f[y]) * (g[x] - g[y])).sum()
    }

    /// 2Γ(f, g) at every host vertex.
    ///
    /// Boundary entries only see stored edges. They are exact whenever one of
    /// the arguments vanishes off the interior, since truncated edges then
    /// contribute nothing.
    pub fn gamma2(&self, f: &[f64], g: &[f64]) -> Vec<f64> {
        self.check_field(f);
        self.check_field(g);
        (0..self.len())
            .map(|x| {
                let s: f64 = self.adj[x]
                    .iter()
                    .map(|&(y, c)| c * (f[x] - f[y]) * (g[x] - g[y]))
                    .sum();
                s / self.pi[x]
            })
            .collect()
    }

    /// Λ(f, g) = ¼ Σ_{x,y} c(x, y)|f(x) − f(y)|²|g(x) − g(y)|².
    pub fn lambda(&self, f: &[f64], g: &[f64]) -> f64 {
        self.check_field(f);
        self.check_field(g);
        0.25 * self
            .ordered_pairs()
            .map(|(x, y, c)| {
                let df = f[x] - f[y];
                let dg = g[x] - g[y];
                c * df * df * dg * dg
            })
            .sum::<f64>()
    }

    /// ℝᵐ-valued 2Γ(α, u): Σ_y P(x, y)(u(x) − u(y))(α(x) − α(y)), flattened row-major.
    pub fn gamma2_vec(&self, alpha: &TestFunction, u: &[f64]) -> Vec<f64> {
        self.check_alpha(alpha);
        self.check_field(u);
        let m = alpha.dim();
        let mut out = vec![0.0; self.len() * m];
        for x in 0..self.len() {
            let ax = alpha.at(x);
            let row = &mut out[x * m..(x + 1) * m];
            for &(y, c) in &self.adj[x] {
                let w = c * (u[x] - u[y]) / self.pi[x];
                for (r, (a, b)) in row.iter_mut().zip(ax.iter().zip(alpha.at(y))) {
                    *r += w * (a - b);
                }
            }
        }
        out
    }

    /// 2Γ(α)(x) = Σ_y P(x, y)‖α(x) − α(y)‖² at every host vertex.
    pub fn gamma2_norm(&self, alpha: &TestFunction) -> Vec<f64> {
        self.check_alpha(alpha);
        (0..self.len())
            .map(|x| {
                let s: f64 = self.adj[x]
                    .iter()
                    .map(|&(y, c)| c * alpha.dist_sq(x, y))
                    .sum();
                s / self.pi[x]
            })
            .collect()
    }

    /// Λ(α, u) with the ℝᵐ norm on α-differences.
    pub fn lambda_vec(&self, alpha: &TestFunction, u: &[f64]) -> f64 {
        self.check_alpha(alpha);
        self.check_field(u);
        0.25 * self
            .ordered_pairs()
            .map(|(x, y, c)| {
                let du = u[x] - u[y];
                c * du * du * alpha.dist_sq(x, y)
            })
            .sum::<f64>()
    }

    /// Componentwise Δα on interior rows, flattened row-major; boundary rows are zero.
    pub fn laplacian_vec(&self, alpha: &TestFunction) -> Vec<f64> {
        self.check_alpha(alpha);
        let m = alpha.dim();
        let mut out = vec![0.0; self.len() * m];
        for &x in &self.interior {
            let ax = alpha.at(x);
            let row = &mut out[x * m..(x + 1) * m];
            for &(y, c) in &self.adj[x] {
                let p = c / self.pi[x];
                for (r, (a, b)) in row.iter_mut().zip(ax.iter().zip(alpha.at(y))) {
                    *r += p * (a - b);
                }
            }
        }
        out
    }

    fn check_alpha(&self, alpha: &TestFunction) {
        assert_eq!(alpha.len(), self.len(), "test function must cover the host");
    }

    fn ordered_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, row)| row.iter().map(move |&(y, c)| (x, y, c)))
    }

    /// Relabels vertices: vertex `i` of `self` becomes vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(domain!("permutation has wrong length"));
        }
        let mut pi = vec![0.0; self.len()];
        for (i, &p) in perm.iter().enumerate() {
            pi[p] = self.pi[i];
        }
        let edges: Vec<_> = self.edges().map(|(i, j, c)| (perm[i], perm[j], c)).collect();
        let interior: Vec<_> = self.interior.iter().map(|&i| perm[i]).collect();
        HostNetwork::new(self.len(), pi, &edges, &interior)
    }

    pub fn to_file(&self) -> NetworkFile {
        NetworkFile {
            vertices: self.len(),
            pi: self.pi.clone(),
            edges: self.edges().collect(),
            interior: self.interior.clone(),
            elements: None,
        }
    }

    pub fn from_file(file: &NetworkFile) -> Result<Self> {
        HostNetwork::new(file.vertices, file.pi.clone(), &file.edges, &file.interior)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }
}

/// JSON interchange form of a [`HostNetwork`].
///
/// Edges are listed once with `i ≤ j` and mirrored on load. `elements` is an
/// optional sidecar carrying the group element encoding of each vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub vertices: usize,
    pub pi: Vec<f64>,
    pub edges: Vec<(usize, usize, f64)>,
    pub interior: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<Vec<i64>>>,
}

/// A function α: V → ℝᵐ, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TestFunction {
    dim: usize,
    values: Vec<f64>,
}

impl TestFunction {
    pub fn new(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        if dim == 0 {
            return Err(domain!("test function dimension must be at least 1"));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(domain!("vertex {i} has a {}-vector, expected {dim}", r.len()));
        }
        Ok(TestFunction { dim, values: rows.concat() })
    }

    pub fn from_flat(dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 || !values.len().is_multiple_of(dim) {
            return Err(domain!("flat buffer of {} values does not fit dimension {dim}", values.len()));
        }
        Ok(TestFunction { dim, values })
    }

    pub fn scalar(values: Vec<f64>) -> Self {
        TestFunction { dim: 1, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vertices covered.
    pub fn len(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, x: usize) -> &[f64] {
        &self.values[x * self.dim..(x + 1) * self.dim]
    }

    /// The scalar function x ↦ α(x)_h.
    pub fn component(&self, h: usize) -> Vec<f64> {
        self.values.iter().skip(h).step_by(self.dim).copied().collect()
    }

    fn dist_sq(&self, x: usize, y: usize) -> f64 {
        self.at(x).iter().zip(self.at(y)).map(|(a, b)| (a - b) * (a - b)).sum()
    }
}
