use std::collections::{HashMap, VecDeque};

use super::group::{Element, Family, GroupSpec};
use crate::error::{domain, Error, Result};
use crate::network::{HostNetwork, NetworkFile};

/// Default cap on host vertices for [`build_ball`].
pub const DEFAULT_HOST_CAP: usize = 20_000;

/// A finite piece of a Cayley network (or of a regular tree) as a host network.
///
/// Host vertices are group elements; every vertex has π = 1. For a plain ball
/// the interior is the word-metric ball of `radius` and the host adds the
/// sphere of radius `radius + 1`.
#[derive(Debug, Clone)]
pub struct BallNetwork {
    pub host: HostNetwork,
    pub elements: Vec<Element>,
    pub radius: usize,
    /// Host index of the identity (the tree root), if it survived restriction.
    pub origin: Option<usize>,
    pub spec: GroupSpec,
    index: HashMap<Element, usize>,
}

impl BallNetwork {
    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    /// Keeps only `interior` as Ω and trims the host to Ω and its neighbors.
    ///
    /// Every selected element must lie in the current interior, which
    /// guarantees its neighbors are present.
    pub fn restrict(&self, interior: &[Element]) -> Result<BallNetwork> {
        let mut picked = Vec::with_capacity(interior.len());
        for g in interior {
            let i = self
                .index_of(g)
                .ok_or_else(|| domain!("element {g} is not in the ball"))?;
            if !self.host.is_interior(i) {
                return Err(domain!("element {g} lies outside the interior of the ball"));
            }
            picked.push(i);
        }
        self.restrict_indices(&picked)
    }

    /// Same as [`BallNetwork::restrict`] with host vertex indices.
    pub fn restrict_indices(&self, picked: &[usize]) -> Result<BallNetwork> {
        let old = &self.host;
        let mut keep = vec![false; old.len()];
        for &i in picked {
            if i >= old.len() || !old.is_interior(i) {
                return Err(domain!("vertex {i} is not an interior vertex of the ball"));
            }
            keep[i] = true;
            for &(j, _) in old.neighbors(i) {
                keep[j] = true;
            }
        }
        let mut new_index = vec![usize::MAX; old.len()];
        let mut elements = Vec::new();
        for (i, _) in keep.iter().enumerate().filter(|(_, k)| **k) {
            new_index[i] = elements.len();
            elements.push(self.elements[i].clone());
        }
        let edges: Vec<_> = old
            .edges()
            .filter(|&(i, j, _)| keep[i] && keep[j])
            .map(|(i, j, c)| (new_index[i], new_index[j], c))
            .collect();
        let interior: Vec<_> = picked.iter().map(|&i| new_index[i]).collect();
        let host = HostNetwork::new(elements.len(), vec![1.0; elements.len()], &edges, &interior)?;
        let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
        let origin = self.origin.map(|o| new_index[o]).filter(|&o| o != usize::MAX);
        Ok(BallNetwork {
            host,
            elements,
            radius: self.radius,
            origin,
            spec: self.spec.clone(),
            index,
        })
    }

    /// Network JSON with the `elements` sidecar filled in.
    pub fn to_file(&self) -> NetworkFile {
        let mut file = self.host.to_file();
        file.elements = Some(self.elements.iter().map(Element::encode).collect());
        file
    }
}

/// BFS ball of radius `r` around the identity, capped at [`DEFAULT_HOST_CAP`] host vertices.
pub fn build_ball(spec: &GroupSpec, r: usize) -> Result<BallNetwork> {
    build_ball_capped(spec, r, DEFAULT_HOST_CAP)
}

pub fn build_ball_capped(spec: &GroupSpec, r: usize, cap: usize) -> Result<BallNetwork> {
    match spec.family() {
        Family::Tree(d) => build_tree_ball(spec, d, r, cap),
        family => build_cayley_ball(spec, family, r, cap),
    }
}

fn cap_error(cap: usize) -> Error {
    Error::Resource(format!("host would exceed {cap} vertices"))
}

fn build_cayley_ball(spec: &GroupSpec, family: Family, r: usize, cap: usize) -> Result<BallNetwork> {
    let steps: Vec<&(Element, f64)> = spec.measure().iter().collect();
    let mut elements = vec![family.identity()];
    let mut dist = vec![0usize];
    let mut index: HashMap<Element, usize> = HashMap::from([(family.identity(), 0)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        if dist[x] > r {
            continue;
        }
        for (y, _) in &steps {
            let z = family.mul(&elements[x], y);
            if index.contains_key(&z) {
                continue;
            }
            if elements.len() == cap {
                return Err(cap_error(cap));
            }
            index.insert(z.clone(), elements.len());
            elements.push(z);
            dist.push(dist[x] + 1);
            queue.push_back(elements.len() - 1);
        }
    }

    let mut edges = Vec::new();
    for (x, gx) in elements.iter().enumerate() {
        for (y, p) in &steps {
            if let Some(&z) = index.get(&family.mul(gx, y)) {
                // c(x, xy) = μ(y) = μ(y⁻¹) = c(xy, x); list once.
                if x <= z {
                    edges.push((x, z, *p));
                }
            }
        }
    }
    let interior: Vec<_> = (0..elements.len()).filter(|&i| dist[i] <= r).collect();
    let host = HostNetwork::new(elements.len(), vec![1.0; elements.len()], &edges, &interior)?;
    Ok(BallNetwork { host, elements, radius: r, origin: Some(0), spec: spec.clone(), index })
}

fn build_tree_ball(spec: &GroupSpec, d: usize, r: usize, cap: usize) -> Result<BallNetwork> {
    let c = 1.0 / d as f64;
    let mut elements = vec![Element::Tree(Vec::new())];
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    for depth in 1..=r + 1 {
        let mut next = Vec::new();
        for &parent in &level {
            let Element::Tree(word) = &elements[parent] else { unreachable!() };
            let children = if word.is_empty() { d } else { d - 1 };
            let word = word.clone();
            for child in 0..children as u32 {
                if elements.len() == cap {
                    return Err(cap_error(cap));
                }
                let mut w = word.clone();
                w.push(child);
                edges.push((parent, elements.len(), c));
                next.push(elements.len());
                elements.push(Element::Tree(w));
            }
        }
        level = next;
        debug_assert!(level.iter().all(|&i| matches!(&elements[i], Element::Tree(w) if w.len() == depth)));
    }
    let interior: Vec<_> = (0..elements.len())
        .filter(|&i| matches!(&elements[i], Element::Tree(w) if w.len() <= r))
        .collect();
    let host = HostNetwork::new(elements.len(), vec![1.0; elements.len()], &edges, &interior)?;
    let index = elements.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    Ok(BallNetwork { host, elements, radius: r, origin: Some(0), spec: spec.clone(), index })
}

/// The box {0..dims[0]-1} × … × {0..dims[n-1]-1} in ℤⁿ as a Dirichlet region.
pub fn lattice_box(spec: &GroupSpec, dims: &[usize]) -> Result<BallNetwork> {
    let Family::FreeAbelian(n) = spec.family() else {
        return Err(domain!("boxes are only defined for free abelian groups"));
    };
    if dims.len() != n || dims.contains(&0) {
        return Err(domain!("box needs {n} positive side lengths, got {dims:?}"));
    }
    // With unit steps in the support, word length is at most the ℓ¹ length.
    let radius: usize = dims.iter().map(|m| m - 1).sum();
    let ball = build_ball(spec, radius)?;
    let mut points = vec![Vec::new()];
    for &m in dims {
        points = points
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..m as i64).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let interior: Vec<_> = points.into_iter().map(Element::Lattice).collect();
    ball.restrict(&interior)
}
