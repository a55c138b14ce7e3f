use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Canonical encoding of a group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A point of ℤⁿ.
    Lattice(Vec<i64>),
    /// (a, b, c) with (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
    Heisenberg([i64; 3]),
    /// Child-index word from the root of a rooted regular tree.
    Tree(Vec<u32>),
}

impl Element {
    /// Flat integer encoding used in the JSON `elements` sidecar.
    pub fn encode(&self) -> Vec<i64> {
        match self {
            Element::Lattice(v) => v.clone(),
            Element::Heisenberg(t) => t.to_vec(),
            Element::Tree(w) => w.iter().map(|&c| c as i64).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Lattice(v) => v.iter().all(|&x| x == 0),
            Element::Heisenberg(t) => *t == [0, 0, 0],
            Element::Tree(w) => w.is_empty(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.encode())
    }
}

pub fn heisenberg_mul(x: [i64; 3], y: [i64; 3]) -> [i64; 3] {
    [x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1]]
}

pub fn heisenberg_inv(x: [i64; 3]) -> [i64; 3] {
    [-x[0], -x[1], x[0] * x[1] - x[2]]
}

/// Which group a [`GroupSpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    FreeAbelian(usize),
    Heisenberg,
    Tree(usize),
}

impl Family {
    pub fn identity(&self) -> Element {
        match *self {
            Family::FreeAbelian(n) => Element::Lattice(vec![0; n]),
            Family::Heisenberg => Element::Heisenberg([0; 3]),
            Family::Tree(_) => Element::Tree(Vec::new()),
        }
    }

    /// Inverse of [`Element::encode`].
    pub fn decode(&self, code: &[i64]) -> Result<Element> {
        match *self {
            Family::FreeAbelian(n) if code.len() == n => Ok(Element::Lattice(code.to_vec())),
            Family::Heisenberg if code.len() == 3 => Ok(Element::Heisenberg([code[0], code[1], code[2]])),
            Family::Tree(d) => {
                let word = code
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| {
                        let children = if i == 0 { d } else { d - 1 };
                        u32::try_from(c).ok().filter(|&c| (c as usize) < children)
                    })
                    .collect::<Option<Vec<u32>>>();
                word.map(Element::Tree)
                    .ok_or_else(|| domain!("{code:?} is not a child-index word of the {d}-regular tree"))
            }
            _ => Err(domain!("{code:?} has the wrong length for this group")),
        }
    }

    /// Group product for the Cayley families.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        match (x, y) {
            (Element::Lattice(a), Element::Lattice(b)) => {
                Element::Lattice(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Element::Heisenberg(a), Element::Heisenberg(b)) => {
                Element::Heisenberg(heisenberg_mul(*a, *b))
            }
            _ => panic!("mul is only defined for lattice and Heisenberg elements"),
        }
    }

    pub fn inv(&self, x: &Element) -> Element {
        match x {
            Element::Lattice(a) => Element::Lattice(a.iter().map(|p| -p).collect()),
            Element::Heisenberg(a) => Element::Heisenberg(heisenberg_inv(*a)),
            Element::Tree(_) => panic!("tree vertices are not group elements here"),
        }
    }

    fn generator(&self, name: &str) -> Result<Element> {
        match *self {
            Family::FreeAbelian(n) => {
                let j: usize = name
                    .strip_prefix('s')
                    .and_then(|s| s.parse().ok())
                    .filter(|&j| (1..=n).contains(&j))
                    .ok_or_else(|| Error::Parse(format!("unknown generator '{name}' for Z^{n}")))?;
                let mut v = vec![0; n];
                v[j - 1] = 1;
                Ok(Element::Lattice(v))
            }
            Family::Heisenberg => {
                let t = match name {
                    "X" | "x" | "s1" => [1, 0, 0],
                    "Y" | "y" | "s2" => [0, 1, 0],
                    "Z" | "z" | "s3" => [0, 0, 1],
                    _ => return Err(Error::Parse(format!("unknown Heisenberg generator '{name}'"))),
                };
                Ok(Element::Heisenberg(t))
            }
            Family::Tree(_) => Err(domain!("tree networks carry no generator words")),
        }
    }

    fn pow(&self, x: &Element, e: i64) -> Element {
        let base = if e < 0 { self.inv(x) } else { x.clone() };
        let mut acc = self.identity();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Evaluates a formal word such as `"s1^-1 s2"` or `"X*Y^2"`.
    /// `"e"`, `"1"` and the empty word denote the identity.
    pub fn parse_word(&self, word: &str) -> Result<Element> {
        let mut acc = self.identity();
        for token in word.split(|c: char| c.is_whitespace() || c == '*' || c == '.') {
            if token.is_empty() || token == "e" || token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((name, exp)) => {
                    let e: i64 = exp
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{token}'")))?;
                    (name, e)
                }
                None => (token, 1),
            };
            let g = self.generator(name)?;
            acc = self.mul(&acc, &self.pow(&g, exp));
        }
        Ok(acc)
    }
}

/// A group family together with its step distribution.
///
/// For the Cayley families the measure μ is symmetric, positive on its
/// support and sums to one; conductances are c(x, xy) = μ(y). Trees carry no
/// measure: every edge has conductance 1/d.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    family: Family,
    measure: Vec<(Element, f64)>,
}

impl GroupSpec {
    pub fn tree(d: usize) -> Result<Self> {
        if d < 3 {
            return Err(domain!("tree degree must be at least 3, got {d}"));
        }
        Ok(GroupSpec { family: Family::Tree(d), measure: Vec::new() })
    }

    /// ℤⁿ with μ uniform on the 2n unit steps.
    pub fn lattice(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain!("lattice rank must be positive"));
        }
        let p = 1.0 / (2 * n) as f64;
        let words: Vec<_> = (1..=n)
            .flat_map(|j| [(format!("s{j}"), p), (format!("s{j}^-1"), p)])
            .collect();
        Self::with_words(Family::FreeAbelian(n), &words)
    }

    /// Heisenberg group with μ uniform on X^{±1}, Y^{±1}.
    pub fn heisenberg() -> Result<Self> {
        let words: Vec<_> = ["X", "X^-1", "Y", "Y^-1"].iter().map(|w| (w.to_string(), 0.25)).collect();
        Self::with_words(Family::Heisenberg, &words)
    }

    /// Builds a Cayley spec from `(word, probability)` pairs.
    pub fn with_words(family: Family, words: &[(String, f64)]) -> Result<Self> {
        if let Family::Tree(d) = family {
            if !words.is_empty() {
                return Err(domain!("tree family takes no measure"));
            }
            return Self::tree(d);
        }
        if let Family::FreeAbelian(0) = family {
            return Err(domain!("lattice rank must be positive"));
        }
        let mut mass: BTreeMap<Element, f64> = BTreeMap::new();
        for (word, p) in words {
            if !(p.is_finite() && *p > 0.0) {
                return Err(domain!("probability of '{word}' must be positive, got {p}"));
            }
            let g = family.parse_word(word)?;
            *mass.entry(g).or_insert(0.0) += p;
        }
        let measure: Vec<_> = mass.into_iter().collect();
        GroupSpec::from_measure(family, measure)
    }

    fn from_measure(family: Family, measure: Vec<(Element, f64)>) -> Result<Self> {
        if measure.is_empty() {
            return Err(domain!("measure has empty support"));
        }
        let total: f64 = measure.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-15 {
            return Err(domain!("probabilities sum to {total}, not 1"));
        }
        let spec = GroupSpec { family, measure };
        for (g, p) in &spec.measure {
            let q = spec.mass(&family.inv(g));
            if q != *p {
                return Err(domain!("measure is not symmetric: mu({g}) = {p} but mu({g}^-1) = {q}"));
            }
            if let (Family::Heisenberg, Element::Heisenberg(t)) = (family, g) {
                let letter = t.iter().filter(|&&x| x != 0).count() == 1
                    && t.iter().all(|&x| x.abs() <= 1);
                if !letter && !g.is_identity() {
                    return Err(domain!(
                        "Heisenberg support must lie in {{X^±1, Y^±1, Z^±1}}, found {g}"
                    ));
                }
            }
        }
        Ok(spec)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Support of μ with probabilities, sorted by element.
    pub fn measure(&self) -> &[(Element, f64)] {
        &self.measure
    }

    pub fn mass(&self, g: &Element) -> f64 {
        self.measure
            .binary_search_by(|(h, _)| h.cmp(g))
            .map(|i| self.measure[i].1)
            .unwrap_or(0.0)
    }

    /// Parses `tree:D`, `zn:N` or `heisenberg`.
    pub fn parse_shorthand(text: &str) -> Result<Self> {
        let (name, arg) = match text.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (text, None),
        };
        let int = |s: Option<&str>| -> Result<usize> {
            s.and_then(|v| v.parse().ok())
                .ok_or_else(|| Error::Parse(format!("'{text}' needs an integer parameter")))
        };
        match name {
            "tree" => Self::tree(int(arg)?),
            "zn" | "z" => Self::lattice(int(arg)?),
            "heisenberg" | "heis" if arg.is_none() => Self::heisenberg(),
            _ => Err(Error::Parse(format!("unknown group '{text}'"))),
        }
    }

    pub fn from_file(file: &GroupSpecFile) -> Result<Self> {
        let need = |v: Option<usize>, what: &str| {
            v.ok_or_else(|| Error::Parse(format!("family '{}' needs \"{what}\"", file.family)))
        };
        let family = match file.family.as_str() {
            "tree" => Family::Tree(need(file.d, "d")?),
            "zn" => Family::FreeAbelian(need(file.n, "n")?),
            "heisenberg" => Family::Heisenberg,
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        };
        match (&file.measure, family) {
            (_, Family::Tree(d)) => {
                if file.measure.as_ref().is_some_and(|m| !m.is_empty()) {
                    return Err(domain!("tree family takes no measure"));
                }
                Self::tree(d)
            }
            (None, Family::FreeAbelian(n)) => Self::lattice(n),
            (None, Family::Heisenberg) => Self::heisenberg(),
            (Some(words), _) => Self::with_words(family, words),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }
}

/// JSON form: `{"family": "tree"|"zn"|"heisenberg", "d": .., "n": .., "measure": [["s1^-1", p], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpecFile {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<(String, f64)>>,
}
