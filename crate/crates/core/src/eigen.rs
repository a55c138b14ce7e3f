//! Dirichlet spectra via cyclic Jacobi on the symmetrized Dirichlet matrix.

use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::network::HostNetwork;

/// Default relative off-diagonal tolerance for [`symmetric_eigh`].
pub const DEFAULT_TOL: f64 = 1e-13;

/// Sweep budget for [`symmetric_eigh`].
pub const MAX_SWEEPS: usize = 50;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(domain!("matrix rows must all have length {n}"));
        }
        Ok(DenseMatrix { n, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    fn max_off_diagonal(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max(self[(i, j)].abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Sweeps run until every off-diagonal entry is at most `tol · ‖M‖_F`.
/// Eigenvalues come back ascending; column `j` of the returned matrix is the
/// unit eigenvector for eigenvalue `j`. Equal eigenvalues keep the order in
/// which they sat on the diagonal.
pub fn symmetric_eigh(m: &DenseMatrix, tol: f64) -> Result<(Vec<f64>, DenseMatrix)> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(domain!("tolerance must be positive, got {tol}"));
    }
    let asym = m.max_asymmetry();
    if asym > 1e-12 {
        return Err(domain!("matrix is not symmetric (max |M_ij - M_ji| = {asym:e})"));
    }
    let n = m.dim();
    let mut a = m.clone();
    // Work on the exactly symmetric average.
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let mut v = DenseMatrix::identity(n);
    let threshold = tol * m.frobenius();

    let mut converged = a.max_off_diagonal() <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numeric(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal {:e})",
                a.max_off_diagonal()
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = a.max_off_diagonal() <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut q = DenseMatrix::zeros(n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            q[(r, dst)] = v[(r, src)];
        }
    }
    Ok((values, q))
}

// One Jacobi rotation annihilating a[p][q]; accumulates into v.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let app = a[(p, p)];
    let aqq = a[(q, q)];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let n = a.dim();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let np = c * akp - s * akq;
        let nq = s * akp + c * akq;
        a[(k, p)] = np;
        a[(p, k)] = np;
        a[(k, q)] = nq;
        a[(q, k)] = nq;
    }
    a[(p, p)] = app - t * apq;
    a[(q, q)] = aqq + t * apq;
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// M = D^{1/2}(I − P)D^{−1/2} restricted to the interior (ordered as
/// [`HostNetwork::interior`]). Entry (x, y) is δ_xy − c(x, y)/√(π(x)π(y)).
pub fn dirichlet_matrix(net: &HostNetwork) -> DenseMatrix {
    let interior = net.interior();
    let mut pos = vec![usize::MAX; net.len()];
    for (k, &x) in interior.iter().enumerate() {
        pos[x] = k;
    }
    let mut m = DenseMatrix::identity(interior.len());
    for (r, &x) in interior.iter().enumerate() {
        for &(y, c) in net.neighbors(x) {
            let col = pos[y];
            if col != usize::MAX {
                m[(r, col)] -= c / (net.weight(x) * net.weight(y)).sqrt();
            }
        }
    }
    m
}

/// Sorted Dirichlet eigenvalues with a π-orthonormal eigenbasis.
#[derive(Debug, Clone)]
pub struct DirichletSystem {
    eigenvalues: Vec<f64>,
    // Each vector lives on the host and vanishes off the interior.
    eigenvectors: Vec<Vec<f64>>,
    lambda_min: f64,
}

impl DirichletSystem {
    /// Builds a system from raw parts, typically for tests or replayed spectra.
    pub fn from_parts(eigenvalues: Vec<f64>, eigenvectors: Vec<Vec<f64>>, lambda_min: f64) -> Self {
        DirichletSystem { eigenvalues, eigenvectors, lambda_min }
    }

    /// A system that only knows its spectrum. Checkers that need eigenvectors
    /// must not be called on it.
    pub fn from_spectrum(eigenvalues: Vec<f64>, lambda_min: f64) -> Self {
        DirichletSystem { eigenvalues, eigenvectors: Vec::new(), lambda_min }
    }

    /// n = |Ω|.
    pub fn interior_size(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// λ_k with the 1-based index used throughout the inequalities.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    /// ‖Δu_i − λ_i u_i‖_π over interior rows, for each i.
    pub fn residuals(&self, net: &HostNetwork) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&lam, u)| {
                let lu = net.laplacian(u);
                net.interior()
                    .iter()
                    .map(|&x| {
                        let r = lu[x] - lam * u[x];
                        net.weight(x) * r * r
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }
}

/// The Dirichlet system of the interior of `net`.
///
/// `lambda_min` is the bottom of the ambient spectrum, known per family; it
/// is not estimated from the finite host.
pub fn dirichlet_system(net: &HostNetwork, lambda_min: f64) -> Result<DirichletSystem> {
    let m = dirichlet_matrix(net);
    let (values, q) = symmetric_eigh(&m, DEFAULT_TOL)?;
    let eigenvectors = (0..values.len())
        .map(|j| {
            let mut u = vec![0.0; net.len()];
            for (r, &x) in net.interior().iter().enumerate() {
                u[x] = q[(r, j)] / net.weight(x).sqrt();
            }
            u
        })
        .collect();
    Ok(DirichletSystem { eigenvalues: values, eigenvectors, lambda_min })
}

/// Spectrum table with columns `k,lambda_k,residual`.
pub fn spectrum_csv(sys: &DirichletSystem, net: &HostNetwork) -> String {
    let mut out = String::from("k,lambda_k,residual\n");
    for (k, (lam, res)) in sys.eigenvalues().iter().zip(sys.residuals(net)).enumerate() {
        let _ = writeln!(out, "{},{:?},{:?}", k + 1, lam, res);
    }
    out
}
