//! Inequalities that only involve the sorted Dirichlet spectrum and λ_min.

use crate::eigen::DirichletSystem;
use crate::error::{domain, Result};
use crate::network::HostNetwork;

use super::main_bound::check_k;
use super::report::{InequalityReport, SLACK_TOL};

/// Eigenvalue gaps at or below this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

fn head(sys: &DirichletSystem, k: usize) -> &[f64] {
    &sys.eigenvalues()[..k]
}

/// Σ_{i≤k} (1 − λ_i).
fn deficit(sys: &DirichletSystem, k: usize) -> f64 {
    head(sys, k).iter().map(|l| 1.0 - l).sum()
}

/// Σ_{i≤k} (λ_i − λ_min).
fn excess(sys: &DirichletSystem, k: usize) -> f64 {
    head(sys, k).iter().map(|l| l - sys.lambda_min()).sum()
}

/// Σ|λ_{k+1} − λ_i|² ≤ C_Y Σ(λ_{k+1} − λ_i)(λ_i − λ_min).
pub fn yang_check(sys: &DirichletSystem, c_y: f64, k: usize) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let next = sys.lambda(k + 1);
    let lmin = sys.lambda_min();
    let lhs = head(sys, k).iter().map(|l| (next - l).powi(2)).sum();
    let rhs = c_y * head(sys, k).iter().map(|l| (next - l) * (l - lmin)).sum::<f64>();
    Ok(InequalityReport::new("yang", k, lhs, rhs, true)
        .with_constant("C_Y", c_y)
        .with_constant("lambda_min", lmin))
}

/// Σ|λ_{k+1} − λ_i|²(1 − λ_i) ≤ C_YT Σ(λ_{k+1} − λ_i)(λ_i − λ_min).
pub fn yang_type_check(sys: &DirichletSystem, c_yt: f64, k: usize) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let next = sys.lambda(k + 1);
    let lmin = sys.lambda_min();
    let lhs = head(sys, k).iter().map(|l| (next - l).powi(2) * (1.0 - l)).sum();
    let rhs = c_yt * head(sys, k).iter().map(|l| (next - l) * (l - lmin)).sum::<f64>();
    Ok(InequalityReport::new("yang-type", k, lhs, rhs, true)
        .with_constant("C_YT", c_yt)
        .with_constant("lambda_min", lmin))
}

/// Σ|λ_{k+1} − λ_i|²(1 − ε − λ_i) ≤ 8·μ_max Σ(λ_{k+1} − λ_i)λ_i, for walks
/// whose steps map to the standard basis of ℤⁿ or to zero.
pub fn abelian_quotient_check(
    sys: &DirichletSystem,
    epsilon: f64,
    mu_max: f64,
    k: usize,
) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let next = sys.lambda(k + 1);
    let lhs = head(sys, k).iter().map(|l| (next - l).powi(2) * (1.0 - epsilon - l)).sum();
    let rhs = 8.0 * mu_max * head(sys, k).iter().map(|l| (next - l) * l).sum::<f64>();
    Ok(InequalityReport::new("abelian-quotient", k, lhs, rhs, true)
        .with_constant("epsilon", epsilon)
        .with_constant("mu_max", mu_max))
}

/// λ₂ − λ_min ≤ (C_YT/(1 − λ₁) + 1)(λ₁ − λ_min), gated on λ₁ < 1.
pub fn lambda2_bound(sys: &DirichletSystem, c_yt: f64) -> Result<InequalityReport> {
    check_k(1, sys.interior_size())?;
    let l1 = sys.lambda(1);
    let lmin = sys.lambda_min();
    let gate = l1 < 1.0;
    let rhs = if gate { (c_yt / (1.0 - l1) + 1.0) * (l1 - lmin) } else { f64::NAN };
    Ok(InequalityReport::new("lambda2", 1, sys.lambda(2) - lmin, rhs, gate)
        .with_constant("C_YT", c_yt)
        .with_constant("lambda_min", lmin))
}

/// λ_{k+1} − λ_min ≤ Σ μ_i(1 + C_YT − λ_i) / Σ(1 − λ_i), gated on
/// λ_k ≤ 1 + C_YT and a positive denominator.
pub fn yang_second_bound(sys: &DirichletSystem, c_yt: f64, k: usize) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let lmin = sys.lambda_min();
    let denom = deficit(sys, k);
    let gate = sys.lambda(k) <= 1.0 + c_yt && denom > 0.0;
    let rhs = if gate {
        head(sys, k).iter().map(|l| (l - lmin) * (1.0 + c_yt - l)).sum::<f64>() / denom
    } else {
        f64::NAN
    };
    Ok(InequalityReport::new("yang-second", k, sys.lambda(k + 1) - lmin, rhs, gate)
        .with_constant("C_YT", c_yt)
        .with_constant("lambda_min", lmin))
}

/// Σ(λ_i − λ_min)/(λ_{k+1} − λ_i) ≥ (1/C_YT) Σ(1 − λ_i), gated on λ_k ≤ 1 + C_YT.
///
/// Oriented with the eigenvalue sum on the right, so it becomes +∞ (and the
/// check passes) when λ_{k+1} = λ_k.
pub fn hile_protter_check(sys: &DirichletSystem, c_yt: f64, k: usize) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let lmin = sys.lambda_min();
    let next = sys.lambda(k + 1);
    let gate = sys.lambda(k) <= 1.0 + c_yt;
    let sum = if next - sys.lambda(k) <= DEGENERACY_TOL {
        f64::INFINITY
    } else {
        head(sys, k).iter().map(|l| (l - lmin) / (next - l)).sum()
    };
    Ok(InequalityReport::new("hile-protter", k, deficit(sys, k) / c_yt, sum, gate)
        .with_constant("C_YT", c_yt)
        .with_constant("lambda_min", lmin))
}

/// λ_{k+1} − λ_k ≤ C_YT Σ(λ_i − λ_min)/Σ(1 − λ_i), gated like [`yang_second_bound`].
pub fn ppw_bound(sys: &DirichletSystem, c_yt: f64, k: usize) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let denom = deficit(sys, k);
    let gate = sys.lambda(k) <= 1.0 + c_yt && denom > 0.0;
    let rhs = if gate { c_yt * excess(sys, k) / denom } else { f64::NAN };
    Ok(InequalityReport::new("ppw", k, sys.lambda(k + 1) - sys.lambda(k), rhs, gate)
        .with_constant("C_YT", c_yt)
        .with_constant("lambda_min", sys.lambda_min()))
}

/// λ_{k+1} − λ_min ≤ (1 + θ)k^{θ/2}(λ₁ − λ_min) with θ = C_YT/δ, gated on λ_k ≤ 1 − δ.
pub fn ratio_bound(sys: &DirichletSystem, c_yt: f64, delta: f64, k: usize) -> Result<InequalityReport> {
    check_k(k, sys.interior_size())?;
    let lmin = sys.lambda_min();
    let gate = delta > 0.0 && sys.lambda(k) <= 1.0 - delta;
    let theta = c_yt / delta;
    let rhs = if gate {
        (1.0 + theta) * (k as f64).powf(theta / 2.0) * (sys.lambda(1) - lmin)
    } else {
        f64::NAN
    };
    Ok(InequalityReport::new("ratio", k, sys.lambda(k + 1) - lmin, rhs, gate)
        .with_constant("C_YT", c_yt)
        .with_constant("delta", delta)
        .with_constant("theta", theta)
        .with_constant("lambda_min", lmin))
}

/// Largest δ admissible for [`ratio_bound`] at index k, i.e. 1 − λ_k, if positive.
pub fn max_delta(sys: &DirichletSystem, k: usize) -> Option<f64> {
    let d = 1.0 - sys.lambda(k);
    (d > 0.0).then_some(d)
}

/// Trace facts of the Dirichlet Laplacian:
///
/// - `trace-identity`: |Σλ_i − (n − Σ_{x∈Ω} P(x, x))| ≤ 1e−9,
/// - `trace-bound`: Σλ_i ≤ n,
/// - `trace-prefix` at each k: Σ_{i≤k}(1 − λ_i) ≥ 0.
pub fn trace_check(sys: &DirichletSystem, net: &HostNetwork) -> Result<Vec<InequalityReport>> {
    let n = sys.interior_size();
    if n != net.interior().len() {
        return Err(domain!("system has {n} eigenvalues but the interior has {}", net.interior().len()));
    }
    let total: f64 = sys.eigenvalues().iter().sum();
    let loops: f64 = net
        .interior()
        .iter()
        .map(|&x| net.conductance(x, x) / net.weight(x))
        .sum();
    let expected = n as f64 - loops;
    let mut out = vec![
        InequalityReport::new("trace-identity", n, (total - expected).abs(), SLACK_TOL, true)
            .with_tolerance(0.0),
        InequalityReport::new("trace-bound", n, total, n as f64, true),
    ];
    let mut running = 0.0;
    for k in 1..=n {
        running += 1.0 - sys.lambda(k);
        out.push(InequalityReport::new("trace-prefix", k, 0.0, running, true));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(values: &[f64], lmin: f64) -> DirichletSystem {
        DirichletSystem::from_spectrum(values.to_vec(), lmin)
    }

    #[test]
    fn degenerate_spectrum_is_zero_zero() {
        let s = sys(&[0.5, 0.5, 0.5], 0.0);
        let y = yang_check(&s, 12.0, 2).unwrap();
        assert_eq!((y.lhs, y.slack >= 0.0), (0.0, true));
        let t = yang_type_check(&s, 4.0, 2).unwrap();
        assert_eq!((t.lhs, t.rhs), (0.0, 0.0));
        let a = abelian_quotient_check(&s, 0.0, 0.25, 2).unwrap();
        assert_eq!((a.lhs, a.rhs), (0.0, 0.0));
        let p = ppw_bound(&s, 4.0, 2).unwrap();
        assert_eq!(p.lhs, 0.0);
        assert!(p.passes());
    }

    #[test]
    fn k_out_of_range() {
        let s = sys(&[0.2, 0.4], 0.0);
        assert!(yang_check(&s, 1.0, 0).is_err());
        assert!(yang_check(&s, 1.0, 2).is_err());
        assert!(lambda2_bound(&sys(&[0.3], 0.0), 1.0).is_err());
    }

    #[test]
    fn hile_protter_degenerate_is_infinite() {
        let s = sys(&[0.1, 0.3, 0.3], 0.0);
        let r = hile_protter_check(&s, 4.0, 2).unwrap();
        assert!(r.rhs.is_infinite() && r.passes());
    }

    #[test]
    fn yang_second_matches_lambda2_at_k1() {
        let s = sys(&[0.2, 0.35, 0.9], 0.05);
        let a = lambda2_bound(&s, 3.0).unwrap();
        let b = yang_second_bound(&s, 3.0, 1).unwrap();
        assert!((a.rhs - b.rhs).abs() < 1e-15);
        assert_eq!(a.lhs, b.lhs);
    }

    #[test]
    fn division_guard_disables_assertion() {
        // Σ(1 − λ_i) = 0 at k = 2.
        let s = sys(&[0.5, 1.5, 1.6], 0.0);
        let r = yang_second_bound(&s, 4.0, 2).unwrap();
        assert!(!r.hypothesis_ok && r.passes() && r.rhs.is_nan());
        assert!(!ppw_bound(&s, 4.0, 2).unwrap().hypothesis_ok);
    }

    #[test]
    fn ratio_bound_at_k1_has_no_growth_factor() {
        let s = sys(&[0.1, 0.4, 0.7], 0.0);
        let r = ratio_bound(&s, 4.0, 0.5, 1).unwrap();
        assert!((r.rhs - 9.0 * 0.1).abs() < 1e-15);
        assert!(r.hypothesis_ok);
        // δ too large for the gate.
        assert!(!ratio_bound(&s, 4.0, 0.95, 1).unwrap().hypothesis_ok);
        assert_eq!(max_delta(&s, 2), Some(0.6));
    }

    #[test]
    fn lambda2_gate() {
        assert!(!lambda2_bound(&sys(&[1.0, 1.2], 0.0), 2.0).unwrap().hypothesis_ok);
        let eq = lambda2_bound(&sys(&[0.3, 0.3], 0.1), 2.0).unwrap();
        assert!(eq.holds());
    }

    #[test]
    fn trace_single_vertex() {
        let edges: Vec<_> = (1..4).map(|j| (0, j, 1.0 / 3.0)).collect();
        let net = HostNetwork::new(4, vec![1.0; 4], &edges, &[0]).unwrap();
        let s = crate::eigen::dirichlet_system(&net, 0.0).unwrap();
        let reps = trace_check(&s, &net).unwrap();
        assert!(reps.iter().all(|r| r.passes()));
        assert_eq!(reps.len(), 3);
    }
}
