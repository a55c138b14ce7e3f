//! The Cheng–Yang recursion F_{k+1} ≤ ((k+1)/k)^θ F_k.

use crate::error::{domain, Result};

use super::report::InequalityReport;

/// Relative tolerance of each recursion step.
pub const STEP_RTOL: f64 = 1e-12;

/// Running averages of a₁..a_k and the quantity F_k they determine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionState {
    pub k: usize,
    /// A_k = (1/k) Σ a_i.
    pub mean: f64,
    /// B_k = (1/k) Σ a_i².
    pub mean_sq: f64,
    /// F_k = (1 + θ/2) A_k² − B_k.
    pub f: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecursionTrace {
    /// One state per prefix length 1..=len(a).
    pub states: Vec<RecursionState>,
    /// Per k, the premise Σ(a_{k+1} − a_i)² ≤ θ Σ a_i(a_{k+1} − a_i).
    /// Informational: a failed premise only disables the matching step.
    pub premises: Vec<InequalityReport>,
    /// Per k, the step F_{k+1} ≤ ((k+1)/k)^θ F_k, gated on its premise.
    pub reports: Vec<InequalityReport>,
}

impl RecursionTrace {
    pub fn passes(&self) -> bool {
        self.reports.iter().all(InequalityReport::passes)
    }
}

/// Builds every state of `a` and checks each step whose premise holds.
pub fn recursion_check(a: &[f64], theta: f64) -> Result<RecursionTrace> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(domain!("theta must be positive, got {theta}"));
    }
    if a.len() < 2 {
        return Err(domain!("need at least two terms, got {}", a.len()));
    }
    if a.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
        return Err(domain!("terms must be positive and finite"));
    }
    if a.windows(2).any(|w| w[1] < w[0]) {
        return Err(domain!("terms must be nondecreasing"));
    }

    let mut states = Vec::with_capacity(a.len());
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for (i, &x) in a.iter().enumerate() {
        sum += x;
        sum_sq += x * x;
        let k = (i + 1) as f64;
        let mean = sum / k;
        let mean_sq = sum_sq / k;
        states.push(RecursionState {
            k: i + 1,
            mean,
            mean_sq,
            f: (1.0 + theta / 2.0) * mean * mean - mean_sq,
            theta,
        });
    }

    let (mut premises, mut reports) = (Vec::new(), Vec::new());
    for k in 1..a.len() {
        let next = a[k];
        let head = &a[..k];
        let gaps_sq: f64 = head.iter().map(|ai| (next - ai).powi(2)).sum();
        let cross = theta * head.iter().map(|ai| ai * (next - ai)).sum::<f64>();
        let premise = InequalityReport::new("recursion-hypothesis", k, gaps_sq, cross, true)
            .with_constant("theta", theta);
        let premise_ok = premise.holds();
        let premise_slack = premise.slack;
        premises.push(premise);

        let lhs = states[k].f;
        let rhs = ((k + 1) as f64 / k as f64).powf(theta) * states[k - 1].f;
        let tol = STEP_RTOL * lhs.abs().max(rhs.abs());
        reports.push(
            InequalityReport::new("recursion", k, lhs, rhs, premise_ok)
                .with_constant("theta", theta)
                .with_constant("premise_slack", premise_slack)
                .with_tolerance(tol),
        );
    }
    Ok(RecursionTrace { states, premises, reports })
}
