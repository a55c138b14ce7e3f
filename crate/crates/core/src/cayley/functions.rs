//! Canonical test functions on Cayley balls and the analytic constants of each family.

use super::ball::BallNetwork;
use super::group::{Element, Family, GroupSpec};
use crate::error::{domain, Result};
use crate::network::TestFunction;

/// Bottom of the ambient L² spectrum: 0 for the amenable families,
/// 1 − 2√(d−1)/d for the d-regular tree.
pub fn lambda_min(spec: &GroupSpec) -> f64 {
    match spec.family() {
        Family::Tree(d) => 1.0 - 2.0 * ((d - 1) as f64).sqrt() / d as f64,
        Family::FreeAbelian(_) | Family::Heisenberg => 0.0,
    }
}

/// μ_* = min over non-identity support elements of μ.
pub fn mu_star(spec: &GroupSpec) -> Result<f64> {
    if let Family::Tree(_) = spec.family() {
        return Err(domain!("tree networks carry no step measure"));
    }
    spec.measure()
        .iter()
        .filter(|(g, _)| !g.is_identity())
        .map(|&(_, p)| p)
        .min_by(f64::total_cmp)
        .ok_or_else(|| domain!("measure is concentrated on the identity"))
}

/// Yang constant 6/μ_* for the amenable Cayley families.
pub fn yang_constant(spec: &GroupSpec) -> Option<f64> {
    mu_star(spec).ok().map(|m| 6.0 / m)
}

/// Data of a surjection α onto ℤⁿ whose generators map to the standard basis
/// or to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelianQuotient {
    pub rank: usize,
    /// ε = 1 − Σ_j (μ(s_j) + μ(s_j⁻¹)), the mass on ker α.
    pub epsilon: f64,
    /// max_j μ(s_j).
    pub mu_max: f64,
}

impl AbelianQuotient {
    /// Yang-type constant 8·max_j μ(s_j); only meaningful when ε = 0.
    pub fn yang_type_constant(&self) -> Option<f64> {
        (self.epsilon == 0.0).then_some(8.0 * self.mu_max)
    }
}

fn abelian_image(g: &Element) -> Option<Vec<i64>> {
    match g {
        Element::Lattice(v) => Some(v.clone()),
        Element::Heisenberg([a, b, _]) => Some(vec![*a, *b]),
        Element::Tree(_) => None,
    }
}

/// Checks that every support element maps to ±e_j or to 0 under the
/// canonical quotient (identity on ℤⁿ, (a, b, c) ↦ (a, b) on Heisenberg) and
/// that every basis direction is hit.
pub fn abelian_quotient(spec: &GroupSpec) -> Result<AbelianQuotient> {
    let rank = match spec.family() {
        Family::FreeAbelian(n) => n,
        Family::Heisenberg => 2,
        Family::Tree(_) => return Err(domain!("trees have no homomorphism cocycle here")),
    };
    let mut basis_mass = vec![0.0; rank];
    for (g, p) in spec.measure() {
        let v = abelian_image(g).expect("Cayley element");
        let nonzero: Vec<_> = v.iter().enumerate().filter(|(_, &x)| x != 0).collect();
        match nonzero.as_slice() {
            [] => {}
            [(j, 1)] => basis_mass[*j] += p,
            [(_, -1)] => {}
            _ => {
                return Err(domain!(
                    "support element {g} maps to {v:?}, which is neither a basis vector nor zero"
                ))
            }
        }
    }
    if let Some(j) = basis_mass.iter().position(|&p| p == 0.0) {
        return Err(domain!("no generator maps to basis direction e{}", j + 1));
    }
    let total: f64 = basis_mass.iter().map(|p| 2.0 * p).sum();
    let epsilon = if (1.0 - total).abs() <= 1e-15 { 0.0 } else { 1.0 - total };
    Ok(AbelianQuotient {
        rank,
        epsilon,
        mu_max: basis_mass.iter().copied().fold(0.0, f64::max),
    })
}

/// α: G → ℝⁿ given by the canonical quotient, evaluated on every host vertex.
pub fn homomorphism_cocycle(ball: &BallNetwork) -> Result<TestFunction> {
    let q = abelian_quotient(&ball.spec)?;
    let values: Vec<f64> = ball
        .elements
        .iter()
        .flat_map(|g| abelian_image(g).expect("Cayley element"))
        .map(|x| x as f64)
        .collect();
    TestFunction::from_flat(q.rank, values)
}

/// Busemann value of a tree vertex for the ray of all-first-child words.
///
/// With p the length of the leading run of zeros, the nearest ray vertex is
/// 0^p at level −p, so b(w) = −p + (|w| − p).
pub fn busemann_value(word: &[u32]) -> i64 {
    let p = word.iter().take_while(|&&c| c == 0).count() as i64;
    word.len() as i64 - 2 * p
}

pub fn busemann(ball: &BallNetwork) -> Result<TestFunction> {
    tree_degree(ball)?;
    let values = ball
        .elements
        .iter()
        .map(|g| match g {
            Element::Tree(w) => busemann_value(w) as f64,
            _ => unreachable!(),
        })
        .collect();
    Ok(TestFunction::scalar(values))
}

/// f(x) = (ξ/√(d−1))^{b(x)}.
pub fn tree_ground_state(ball: &BallNetwork, xi: f64) -> Result<Vec<f64>> {
    let d = tree_degree(ball)?;
    if !(xi.is_finite() && xi > 0.0) {
        return Err(domain!("xi must be positive, got {xi}"));
    }
    let base = xi / ((d - 1) as f64).sqrt();
    Ok(busemann(ball)?.component(0).iter().map(|&b| base.powi(b as i32)).collect())
}

/// Eigenvalue 1 − (√(d−1)/d)(ξ + ξ⁻¹) carried by [`tree_ground_state`].
pub fn ground_state_eigenvalue(d: usize, xi: f64) -> f64 {
    1.0 - ((d - 1) as f64).sqrt() / d as f64 * (xi + 1.0 / xi)
}

/// Yang-type constant 8√(d−1)/d for the d-regular tree.
pub fn tree_yang_type_constant(d: usize) -> f64 {
    8.0 * ((d - 1) as f64).sqrt() / d as f64
}

fn tree_degree(ball: &BallNetwork) -> Result<usize> {
    match ball.spec.family() {
        Family::Tree(d) => Ok(d),
        _ => Err(domain!("Busemann functions are only built on tree balls")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cayley::build_ball;

    fn words(v: &[(&str, f64)]) -> Vec<(String, f64)> {
        v.iter().map(|(s, p)| (s.to_string(), *p)).collect()
    }

    #[test]
    fn lambda_min_values() {
        assert_eq!(lambda_min(&GroupSpec::lattice(2).unwrap()), 0.0);
        let t3 = lambda_min(&GroupSpec::tree(3).unwrap());
        assert!((t3 - 0.0571910).abs() < 1e-7);
        let t4 = lambda_min(&GroupSpec::tree(4).unwrap());
        assert!((t4 - 0.1339746).abs() < 1e-7);
    }

    #[test]
    fn mu_star_values() {
        let z1 = GroupSpec::lattice(1).unwrap();
        assert_eq!(mu_star(&z1).unwrap(), 0.5);
        assert_eq!(yang_constant(&z1), Some(12.0));
        let wide = GroupSpec::with_words(
            Family::FreeAbelian(1),
            &words(&[("s1", 0.25), ("s1^-1", 0.25), ("s1^2", 0.25), ("s1^-2", 0.25)]),
        )
        .unwrap();
        assert_eq!(mu_star(&wide).unwrap(), 0.25);
        let lazy = GroupSpec::with_words(
            Family::FreeAbelian(1),
            &words(&[("e", 0.5), ("s1", 0.25), ("s1^-1", 0.25)]),
        )
        .unwrap();
        assert_eq!(mu_star(&lazy).unwrap(), 0.25);
        assert!(mu_star(&GroupSpec::tree(3).unwrap()).is_err());
    }

    #[test]
    fn quotient_constants() {
        let q = abelian_quotient(&GroupSpec::lattice(2).unwrap()).unwrap();
        assert_eq!((q.rank, q.epsilon, q.mu_max), (2, 0.0, 0.25));
        assert_eq!(q.yang_type_constant(), Some(2.0));
        let h = abelian_quotient(&GroupSpec::heisenberg().unwrap()).unwrap();
        assert_eq!((h.rank, h.epsilon, h.mu_max), (2, 0.0, 0.25));
        let lazy_h = GroupSpec::with_words(
            Family::Heisenberg,
            &words(&[("X", 0.2), ("X^-1", 0.2), ("Y", 0.2), ("Y^-1", 0.2), ("Z", 0.1), ("Z^-1", 0.1)]),
        )
        .unwrap();
        let q = abelian_quotient(&lazy_h).unwrap();
        assert!((q.epsilon - 0.2).abs() < 1e-15);
        assert_eq!(q.yang_type_constant(), None);
    }

    #[test]
    fn non_basis_steps_rejected() {
        let wide = GroupSpec::with_words(
            Family::FreeAbelian(1),
            &words(&[("s1", 0.25), ("s1^-1", 0.25), ("s1^2", 0.25), ("s1^-2", 0.25)]),
        )
        .unwrap();
        assert!(abelian_quotient(&wide).is_err());
        let ball = build_ball(&wide, 1).unwrap();
        assert!(homomorphism_cocycle(&ball).is_err());
        let tree = build_ball(&GroupSpec::tree(3).unwrap(), 1).unwrap();
        assert!(homomorphism_cocycle(&tree).is_err());
    }

    #[test]
    fn busemann_on_ray_and_root() {
        assert_eq!(busemann_value(&[]), 0);
        assert_eq!(busemann_value(&[0, 0]), -2);
        assert_eq!(busemann_value(&[1]), 1);
        assert_eq!(busemann_value(&[0, 1, 0]), 1);
        let lattice = build_ball(&GroupSpec::lattice(1).unwrap(), 1).unwrap();
        assert!(busemann(&lattice).is_err());
    }

    #[test]
    fn ground_state_rejects_bad_xi() {
        let tree = build_ball(&GroupSpec::tree(3).unwrap(), 1).unwrap();
        assert!(tree_ground_state(&tree, 0.0).is_err());
        assert!(tree_ground_state(&tree, -1.0).is_err());
        assert!(tree_ground_state(&tree, 1.0).is_ok());
    }
}
