//! The master eigenvalue bound for an ℝᵐ-valued test function α and the
//! bookkeeping quantities behind it.
//!
//! For a Dirichlet system (λ_i, u_i) and 1 ≤ k < n:
//!
//! ```text
//! Σ_{i≤k} (λ_{k+1} − λ_i)² (⟨Γ(α), u_i²⟩ − Λ(α, u_i))
//!     ≤ Σ_{i≤k} (λ_{k+1} − λ_i) ‖u_i·Δα − 2Γ(α, u_i)‖²
//! ```
//!
//! The norm on the right runs over the whole host: 2Γ(α, u_i) is nonzero on
//! boundary vertices adjacent to the support of u_i.

use crate::eigen::DirichletSystem;
use crate::error::{domain, Result};
use crate::network::{HostNetwork, TestFunction};

use super::report::InequalityReport;

/// Per-eigenvector integrands of the master bound.
#[derive(Debug, Clone, PartialEq)]
pub struct MainBoundTerms {
    /// ⟨Γ(α), u_i²⟩.
    pub gamma: Vec<f64>,
    /// Λ(α, u_i).
    pub lambda: Vec<f64>,
    /// ‖u_i·Δα − 2Γ(α, u_i)‖².
    pub defect: Vec<f64>,
}

impl MainBoundTerms {
    pub fn compute(net: &HostNetwork, sys: &DirichletSystem, alpha: &TestFunction) -> Self {
        let m = alpha.dim();
        let gamma_field: Vec<f64> = net.gamma2_norm(alpha).iter().map(|g| 0.5 * g).collect();
        let lap = net.laplacian_vec(alpha);
        let mut terms = MainBoundTerms { gamma: Vec::new(), lambda: Vec::new(), defect: Vec::new() };
        for u in sys.eigenvectors() {
            let u_sq: Vec<f64> = u.iter().map(|v| v * v).collect();
            terms.gamma.push(net.inner(&gamma_field, &u_sq));
            terms.lambda.push(net.lambda_vec(alpha, u));
            let g2 = net.gamma2_vec(alpha, u);
            let defect: f64 = (0..net.len())
                .map(|x| {
                    let row: f64 = (0..m)
                        .map(|h| {
                            let v = u[x] * lap[x * m + h] - g2[x * m + h];
                            v * v
                        })
                        .sum();
                    net.weight(x) * row
                })
                .sum();
            terms.defect.push(defect);
        }
        terms
    }

    /// The master bound at index k, evaluated from precomputed terms.
    pub fn report(&self, sys: &DirichletSystem, k: usize) -> Result<InequalityReport> {
        let n = sys.interior_size();
        check_k(k, n)?;
        if self.gamma.len() != n {
            return Err(domain!("terms were computed for a different system"));
        }
        let next = sys.lambda(k + 1);
        let (mut lhs, mut rhs) = (0.0, 0.0);
        for i in 0..k {
            let gap = next - sys.eigenvalues()[i];
            lhs += gap * gap * (self.gamma[i] - self.lambda[i]);
            rhs += gap * self.defect[i];
        }
        Ok(InequalityReport::new("main-bound", k, lhs, rhs, true))
    }
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(domain!("k = {k} is out of range 1..{n}"));
    }
    Ok(())
}

/// Master bound at a single k.
pub fn main_bound(
    net: &HostNetwork,
    sys: &DirichletSystem,
    alpha: &TestFunction,
    k: usize,
) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    MainBoundTerms::compute(net, sys, alpha).report(sys, k)
}

/// Master bound at every k in 1..n.
pub fn main_bound_all(
    net: &HostNetwork,
    sys: &DirichletSystem,
    alpha: &TestFunction,
) -> Vec<InequalityReport> {
    let terms = MainBoundTerms::compute(net, sys, alpha);
    (1..sys.interior_size())
        .map(|k| terms.report(sys, k).expect("k in range"))
        .collect()
}

/// Quantities from the proof of the master bound at a fixed k, with the
/// residuals of every identity they satisfy.
///
/// For ℝᵐ-valued α the matrices `a` and `b` and the vectors `z`, `w` are
/// summed over components; each identity residual is the worst case over the
/// individual components, where the identities hold exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofScratch {
    pub k: usize,
    /// a_ij = ⟨u_i·α, u_j⟩.
    pub a: Vec<Vec<f64>>,
    /// b_ij = ⟨u_i·Δα − 2Γ(u_i, α), u_j⟩.
    pub b: Vec<Vec<f64>>,
    pub z: Vec<f64>,
    /// y_i = Λ(α, u_i).
    pub y: Vec<f64>,
    pub w: Vec<f64>,
    pub phi_norms: Vec<f64>,
    /// ⟨Γ(α), u_i²⟩.
    pub gamma: Vec<f64>,

    /// max |a_ij − a_ji|.
    pub a_symmetry: f64,
    /// max |b_ij + b_ji|.
    pub b_antisymmetry: f64,
    /// max |b_ij − (λ_j − λ_i) a_ij|.
    pub b_relation: f64,
    /// max |⟨φ_i, u_j⟩|.
    pub phi_orthogonality: f64,
    /// max |‖α_i − Σ_j b_ij u_j‖² − (‖α_i‖² − Σ_j b_ij²)|.
    pub norm_identity: f64,
    /// max |w_i − z_i − Σ_j (λ_i − λ_j) a_ij²|.
    pub w_identity: f64,
    /// max |z_i + y_i − ⟨Γ(α), u_i²⟩|.
    pub zy_identity: f64,
}

impl ProofScratch {
    pub const SYMMETRY_TOL: f64 = 1e-10;
    pub const IDENTITY_TOL: f64 = 1e-9;

    pub fn passes(&self) -> bool {
        self.a_symmetry <= Self::SYMMETRY_TOL
            && self.phi_orthogonality <= Self::SYMMETRY_TOL
            && self.b_antisymmetry <= Self::IDENTITY_TOL
            && self.b_relation <= Self::IDENTITY_TOL
            && self.norm_identity <= Self::IDENTITY_TOL
            && self.w_identity <= Self::IDENTITY_TOL
            && self.zy_identity <= Self::IDENTITY_TOL
    }

    /// Largest residual across all audited identities.
    pub fn worst_residual(&self) -> f64 {
        [
            self.a_symmetry,
            self.b_antisymmetry,
            self.b_relation,
            self.phi_orthogonality,
            self.norm_identity,
            self.w_identity,
            self.zy_identity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Recomputes every proof quantity at index k and measures each identity.
pub fn proof_identities_audit(
    net: &HostNetwork,
    sys: &DirichletSystem,
    alpha: &TestFunction,
    k: usize,
) -> Result<ProofScratch> {
    check_k(k, sys.interior_size())?;
    let lam = sys.eigenvalues();
    let us = &sys.eigenvectors()[..k];
    let nv = net.len();

    let gamma_field: Vec<f64> = net.gamma2_norm(alpha).iter().map(|g| 0.5 * g).collect();
    let mut s = ProofScratch {
        k,
        a: vec![vec![0.0; k]; k],
        b: vec![vec![0.0; k]; k],
        z: vec![0.0; k],
        y: us.iter().map(|u| net.lambda_vec(alpha, u)).collect(),
        w: vec![0.0; k],
        phi_norms: vec![0.0; k],
        gamma: us
            .iter()
            .map(|u| {
                let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
                net.inner(&gamma_field, &sq)
            })
            .collect(),
        a_symmetry: 0.0,
        b_antisymmetry: 0.0,
        b_relation: 0.0,
        phi_orthogonality: 0.0,
        norm_identity: 0.0,
        w_identity: 0.0,
        zy_identity: 0.0,
    };

    for h in 0..alpha.dim() {
        let comp = alpha.component(h);
        let lap = net.laplacian(&comp);
        let u_alpha: Vec<Vec<f64>> =
            us.iter().map(|u| u.iter().zip(&comp).map(|(p, q)| p * q).collect()).collect();
        // α_i = u_i·Δα − 2Γ(u_i, α) on the whole host.
        let alpha_i: Vec<Vec<f64>> = us
            .iter()
            .map(|u| {
                let g2 = net.gamma2(u, &comp);
                (0..nv).map(|x| u[x] * lap[x] - g2[x]).collect()
            })
            .collect();
        let a: Vec<Vec<f64>> =
            u_alpha.iter().map(|ua| us.iter().map(|uj| net.inner(ua, uj)).collect()).collect();
        let b: Vec<Vec<f64>> =
            alpha_i.iter().map(|ai| us.iter().map(|uj| net.inner(ai, uj)).collect()).collect();

        for i in 0..k {
            for j in 0..k {
                s.a[i][j] += a[i][j];
                s.b[i][j] += b[i][j];
                s.a_symmetry = s.a_symmetry.max((a[i][j] - a[j][i]).abs());
                s.b_antisymmetry = s.b_antisymmetry.max((b[i][j] + b[j][i]).abs());
                s.b_relation = s.b_relation.max((b[i][j] - (lam[j] - lam[i]) * a[i][j]).abs());
            }

            let mut phi = u_alpha[i].clone();
            let mut resid = alpha_i[i].clone();
            for j in 0..k {
                for x in 0..nv {
                    phi[x] -= a[i][j] * us[j][x];
                    resid[x] -= b[i][j] * us[j][x];
                }
            }
            for uj in us {
                s.phi_orthogonality = s.phi_orthogonality.max(net.inner(&phi, uj).abs());
            }
            s.phi_norms[i] += net.norm_sq(&phi);

            let b_sq: f64 = b[i].iter().map(|v| v * v).sum();
            let lhs = net.norm_sq(&resid);
            let rhs = net.norm_sq(&alpha_i[i]) - b_sq;
            s.norm_identity = s.norm_identity.max((lhs - rhs).abs());

            let z = net.inner(&alpha_i[i], &u_alpha[i]);
            let w = net.inner(&alpha_i[i], &phi);
            let shift: f64 = (0..k).map(|j| (lam[i] - lam[j]) * a[i][j] * a[i][j]).sum();
            s.w_identity = s.w_identity.max((w - z - shift).abs());
            s.z[i] += z;
            s.w[i] += w;
        }
    }
    for i in 0..k {
        s.zy_identity = s.zy_identity.max((s.z[i] + s.y[i] - s.gamma[i]).abs());
    }
    Ok(s)
}
