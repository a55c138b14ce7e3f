//! Seeded random instances for property tests and `--random` runs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::network::{HostNetwork, TestFunction};

/// A connected network on `vertices` vertices, deterministic in `seed`.
///
/// A random spanning tree is laid down first, then each remaining pair is
/// joined with probability `density`; conductances are uniform in [0.1, 1]
/// and a few vertices get self-loops. Roughly a third of the vertices (at
/// least one, never all) form the boundary and carry an extra weight surplus
/// in [0, 1); all other vertices have π equal to their row sum.
pub fn random_network(vertices: usize, seed: u64, density: f64) -> Result<HostNetwork> {
    if vertices < 2 {
        return Err(domain!("random networks need at least 2 vertices, got {vertices}"));
    }
    if !(density > 0.0 && density <= 1.0) {
        return Err(domain!("density must lie in (0, 1], got {density}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..vertices).collect();
    order.shuffle(&mut rng);

    let mut joined = vec![vec![false; vertices]; vertices];
    let mut edges = Vec::new();
    for t in 1..vertices {
        let parent = order[rng.gen_range(0..t)];
        let (a, b) = (order[t].min(parent), order[t].max(parent));
        joined[a][b] = true;
        edges.push((a, b, rng.gen_range(0.1..=1.0)));
    }
    for (i, row) in joined.iter().enumerate() {
        for (j, &done) in row.iter().enumerate().skip(i + 1) {
            if !done && rng.gen_bool(density) {
                edges.push((i, j, rng.gen_range(0.1..=1.0)));
            }
        }
    }
    for i in 0..vertices {
        if rng.gen_bool(0.15) {
            edges.push((i, i, rng.gen_range(0.1..=1.0)));
        }
    }

    let boundary_count = (vertices / 3).clamp(1, vertices - 1);
    let mut labels: Vec<usize> = (0..vertices).collect();
    labels.shuffle(&mut rng);
    let mut is_boundary = vec![false; vertices];
    for &b in &labels[..boundary_count] {
        is_boundary[b] = true;
    }

    let mut pi = vec![0.0; vertices];
    for &(a, b, c) in &edges {
        pi[a] += c;
        if a != b {
            pi[b] += c;
        }
    }
    for (i, w) in pi.iter_mut().enumerate() {
        if is_boundary[i] {
            *w += rng.gen_range(0.0..1.0);
        }
    }
    let interior: Vec<usize> = (0..vertices).filter(|&i| !is_boundary[i]).collect();
    HostNetwork::new(vertices, pi, &edges, &interior)
}

/// Independent uniform values in [−1, 1] per vertex and coordinate.
pub fn random_test_function(vertices: usize, dim: usize, seed: u64) -> TestFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..vertices * dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    TestFunction::from_flat(dim, values).expect("length matches")
}

/// Uniform values in [−1, 1] on the interior of `net`, zero elsewhere.
pub fn random_interior_field(net: &HostNetwork, rng: &mut impl Rng) -> Vec<f64> {
    let mut f = vec![0.0; net.len()];
    for &x in net.interior() {
        f[x] = rng.gen_range(-1.0..=1.0);
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bytes() {
        let a = random_network(9, 42, 0.4).unwrap().to_json().unwrap();
        let b = random_network(9, 42, 0.4).unwrap().to_json().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_network(9, 43, 0.4).unwrap().to_json().unwrap());
    }

    #[test]
    fn full_density_is_complete() {
        let net = random_network(4, 1, 1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(net.conductance(i, j) >= 0.1);
                }
            }
        }
    }

    #[test]
    fn many_seeds_validate() {
        for seed in 0..200 {
            let n = 6 + (seed as usize % 7);
            let net = random_network(n, seed, 0.3).unwrap();
            assert!(!net.interior().is_empty() && net.interior().len() < n);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(random_network(1, 0, 0.5).is_err());
        assert!(random_network(5, 0, 0.0).is_err());
        assert!(random_network(5, 0, 1.5).is_err());
    }

    #[test]
    fn test_function_shape() {
        let a = random_test_function(5, 3, 9);
        assert_eq!((a.len(), a.dim()), (5, 3));
        assert!(a.component(2).iter().all(|v| v.abs() <= 1.0));
    }
}
