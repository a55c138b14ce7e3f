//! Instances, constants and sweeps behind the command-line front end.
//!
//! An [`ExperimentConfig`] names one instance (a Cayley ball, a lattice box,
//! a network file or a seeded random network) and the checks to run on it.
//! [`Instance::build`] turns it into a diagonalized network with its
//! constants; the `*_csv` / `*_json` writers produce the reports.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::cayley::{
    abelian_quotient, build_ball, busemann, homomorphism_cocycle, lambda_min, lattice_box,
    tree_yang_type_constant, yang_constant, BallNetwork, Family, GroupSpec, GroupSpecFile,
};
use crate::eigen::{dirichlet_system, DirichletSystem};
use crate::error::{domain, Error, Result};
use crate::inequality::{
    abelian_quotient_check, hile_protter_check, lambda2_bound, max_delta, ppw_bound,
    proof_identities_audit, ratio_bound, recursion_check, trace_check, yang_check,
    yang_second_bound, yang_type_check, Check, InequalityReport, MainBoundTerms, ProofScratch,
};
use crate::network::{HostNetwork, NetworkFile, TestFunction};
use crate::random::{random_network, random_test_function};

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Overrides the derived instance id.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<usize>,
    /// Side lengths of a box in ℤⁿ, used instead of a ball.
    #[serde(rename = "box", skip_serializing_if = "Option::is_none")]
    pub box_dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomSource>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior: Option<InteriorSpec>,
    pub inequalities: Vec<Check>,
    pub k: KRange,
    pub constants: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `"tree:3"`-style shorthand or a full group spec object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    Shorthand(String),
    Spec(GroupSpecFile),
}

impl GroupSource {
    pub fn resolve(&self) -> Result<GroupSpec> {
        match self {
            GroupSource::Shorthand(s) => GroupSpec::parse_shorthand(s),
            GroupSource::Spec(f) => GroupSpec::from_file(f),
        }
    }
}

/// A path to a network JSON file or the network inline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NetworkSource {
    Path(PathBuf),
    Inline(NetworkFile),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomSource {
    pub vertices: usize,
    #[serde(default = "default_density")]
    pub density: f64,
}

fn default_density() -> f64 {
    0.5
}

/// Explicit interior: host vertex indices, or encoded group elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InteriorSpec {
    Indices(Vec<usize>),
    Elements(Vec<Vec<i64>>),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub enum KRange {
    #[default]
    All,
    List(Vec<usize>),
}

impl KRange {
    /// Resolves against an interior of size n; explicit entries must satisfy 1 ≤ k < n.
    pub fn resolve(&self, n: usize) -> Result<Vec<usize>> {
        match self {
            KRange::All => Ok((1..n).collect()),
            KRange::List(ks) => {
                if let Some(k) = ks.iter().find(|&&k| k == 0 || k >= n) {
                    return Err(domain!("k = {k} is out of range 1..{n}"));
                }
                let mut ks = ks.clone();
                ks.sort_unstable();
                ks.dedup();
                Ok(ks)
            }
        }
    }
}

impl FromStr for KRange {
    type Err = Error;

    /// `all`, or a comma list of indices and inclusive ranges `a-b`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(KRange::All);
        }
        let bad = || Error::Parse(format!("bad k range '{s}'"));
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b): (usize, usize) =
                        (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                    out.extend(a..=b);
                }
                None => out.push(part.parse().map_err(|_| bad())?),
            }
        }
        Ok(KRange::List(out))
    }
}

impl Serialize for KRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KRange::All => s.serialize_str("all"),
            KRange::List(v) => v.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for KRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Word(String),
            List(Vec<usize>),
        }
        match Raw::deserialize(d)? {
            Raw::Word(w) => w.parse().map_err(D::Error::custom),
            Raw::List(v) => Ok(KRange::List(v)),
        }
    }
}

/// Which test function α feeds the main bound and the audit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AlphaSpec {
    /// Busemann on trees, the abelian cocycle where one exists, else `random:1`.
    #[default]
    Auto,
    Random(usize),
    Busemann,
    Cocycle,
    Constant,
}

impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(AlphaSpec::Auto),
            "busemann" => Ok(AlphaSpec::Busemann),
            "cocycle" => Ok(AlphaSpec::Cocycle),
            "constant" => Ok(AlphaSpec::Constant),
            "random" => Ok(AlphaSpec::Random(1)),
            _ => s
                .strip_prefix("random:")
                .and_then(|m| m.parse().ok())
                .filter(|&m| m > 0)
                .map(AlphaSpec::Random)
                .ok_or_else(|| Error::Parse(format!("unknown test function '{s}'"))),
        }
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Auto => f.write_str("auto"),
            AlphaSpec::Random(m) => write!(f, "random:{m}"),
            AlphaSpec::Busemann => f.write_str("busemann"),
            AlphaSpec::Cocycle => f.write_str("cocycle"),
            AlphaSpec::Constant => f.write_str("constant"),
        }
    }
}

impl TryFrom<String> for AlphaSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlphaSpec> for String {
    fn from(a: AlphaSpec) -> String {
        a.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format '{s}' (csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
}

/// Constants fed to the checkers. `None` means no value is known.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Constants {
    pub lambda_min: f64,
    pub c_y: Option<f64>,
    pub c_yt: Option<f64>,
    pub epsilon: Option<f64>,
    pub mu_max: Option<f64>,
    pub theta: Option<f64>,
}

impl Constants {
    /// Keys accepted by [`Constants::set`].
    pub const KEYS: [&'static str; 6] = ["C_Y", "C_YT", "lambda_min", "epsilon", "mu_max", "theta"];

    /// Family defaults: C_YT = 8√(d−1)/d on trees and 8·max μ(s_j) for an
    /// abelian quotient with no kernel mass; C_Y = 6/μ_* on Cayley groups.
    pub fn for_group(spec: &GroupSpec) -> Self {
        let mut c = Constants { lambda_min: lambda_min(spec), ..Default::default() };
        match spec.family() {
            Family::Tree(d) => c.c_yt = Some(tree_yang_type_constant(d)),
            Family::FreeAbelian(_) | Family::Heisenberg => {
                c.c_y = yang_constant(spec);
                if let Ok(q) = abelian_quotient(spec) {
                    c.c_yt = q.yang_type_constant();
                    c.epsilon = Some(q.epsilon);
                    c.mu_max = Some(q.mu_max);
                }
            }
        }
        c
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(domain!("constant {key} must be finite, got {value}"));
        }
        match key {
            "C_Y" => self.c_y = Some(value),
            "C_YT" => self.c_yt = Some(value),
            "lambda_min" => self.lambda_min = value,
            "epsilon" => self.epsilon = Some(value),
            "mu_max" => self.mu_max = Some(value),
            "theta" => self.theta = Some(value),
            _ => {
                return Err(Error::Parse(format!(
                    "unknown constant '{key}' (known: {})",
                    Self::KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// C_Y, falling back to C_YT + 2 when λ_min = 0.
    pub fn yang(&self) -> Option<f64> {
        self.c_y
            .or_else(|| (self.lambda_min == 0.0).then_some(self.c_yt?.max(0.0) + 2.0))
    }

    /// θ for the recursion on the shifted spectrum: explicit, else C_Y, else C_YT.
    pub fn recursion_theta(&self) -> Option<f64> {
        self.theta.or(self.yang()).or(self.c_yt)
    }
}

/// A diagonalized network with its provenance and constants.
#[derive(Debug, Clone)]
pub struct Instance {
    pub id: String,
    pub net: HostNetwork,
    pub ball: Option<BallNetwork>,
    pub system: DirichletSystem,
    pub constants: Constants,
}

impl Instance {
    pub fn from_ball(id: impl Into<String>, ball: BallNetwork) -> Result<Self> {
        let constants = Constants::for_group(&ball.spec);
        let system = dirichlet_system(&ball.host, constants.lambda_min)?;
        Ok(Instance { id: id.into(), net: ball.host.clone(), ball: Some(ball), system, constants })
    }

    pub fn from_network(id: impl Into<String>, net: HostNetwork, constants: Constants) -> Result<Self> {
        let system = dirichlet_system(&net, constants.lambda_min)?;
        Ok(Instance { id: id.into(), net, ball: None, system, constants })
    }

    pub fn build(cfg: &ExperimentConfig) -> Result<Self> {
        let sources = [cfg.group.is_some(), cfg.network.is_some(), cfg.random.is_some()];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(domain!("exactly one of group, network or random must be given"));
        }
        let mut inst = if let Some(group) = &cfg.group {
            let spec = group.resolve()?;
            let (ball, shape) = match (&cfg.box_dims, cfg.radius) {
                (Some(dims), _) => {
                    let shape: Vec<_> = dims.iter().map(usize::to_string).collect();
                    (lattice_box(&spec, dims)?, format!("box{}", shape.join("x")))
                }
                (None, Some(r)) => (build_ball(&spec, r)?, format!("r{r}")),
                (None, None) => return Err(domain!("a group instance needs a radius or a box")),
            };
            let ball = match &cfg.interior {
                None => ball,
                Some(InteriorSpec::Indices(ix)) => ball.restrict_indices(ix)?,
                Some(InteriorSpec::Elements(codes)) => {
                    let family = spec.family();
                    let elements = codes.iter().map(|c| family.decode(c)).collect::<Result<Vec<_>>>()?;
                    ball.restrict(&elements)?
                }
            };
            let label = if cfg.interior.is_some() { format!("{shape}/subset") } else { shape };
            Instance::from_ball(format!("{}/{label}", group_label(&spec)), ball)?
        } else if let Some(source) = &cfg.network {
            let (file, label) = match source {
                NetworkSource::Path(p) => {
                    let text = std::fs::read_to_string(p)?;
                    (serde_json::from_str::<NetworkFile>(&text)?, format!("network:{}", p.display()))
                }
                NetworkSource::Inline(f) => (f.clone(), "network".to_string()),
            };
            let file = match &cfg.interior {
                None => file,
                Some(InteriorSpec::Indices(ix)) => NetworkFile { interior: ix.clone(), ..file },
                Some(InteriorSpec::Elements(_)) => {
                    return Err(domain!("network instances take interior vertex indices"))
                }
            };
            Instance::from_network(label, HostNetwork::from_file(&file)?, Constants::default())?
        } else {
            let r = cfg.random.expect("checked above");
            if cfg.interior.is_some() {
                return Err(domain!("random instances choose their own interior"));
            }
            let net = random_network(r.vertices, cfg.seed, r.density)?;
            let label = format!("random/n{}/d{:?}/s{}", r.vertices, r.density, cfg.seed);
            Instance::from_network(label, net, Constants::default())?
        };

        if !cfg.constants.is_empty() {
            for (key, &value) in &cfg.constants {
                inst.constants.set(key, value)?;
            }
            inst.system = DirichletSystem::from_parts(
                inst.system.eigenvalues().to_vec(),
                inst.system.eigenvectors().to_vec(),
                inst.constants.lambda_min,
            );
        }
        if let Some(id) = &cfg.id {
            inst.id = id.clone();
        }
        Ok(inst)
    }

    pub fn interior_size(&self) -> usize {
        self.system.interior_size()
    }

    /// Resolves a test function on the host. `seed` only matters for `random:m`.
    pub fn test_function(&self, spec: AlphaSpec, seed: u64) -> Result<TestFunction> {
        let n = self.net.len();
        match spec {
            AlphaSpec::Auto => {
                let Some(ball) = &self.ball else {
                    return self.test_function(AlphaSpec::Random(1), seed);
                };
                match ball.spec.family() {
                    Family::Tree(_) => busemann(ball),
                    _ => homomorphism_cocycle(ball)
                        .or_else(|_| self.test_function(AlphaSpec::Random(1), seed)),
                }
            }
            AlphaSpec::Random(m) => Ok(random_test_function(n, m, seed ^ ALPHA_STREAM)),
            AlphaSpec::Busemann => busemann(self.require_ball()?),
            AlphaSpec::Cocycle => homomorphism_cocycle(self.require_ball()?),
            AlphaSpec::Constant => Ok(TestFunction::scalar(vec![1.0; n])),
        }
    }

    fn require_ball(&self) -> Result<&BallNetwork> {
        self.ball.as_ref().ok_or_else(|| domain!("this test function needs a Cayley or tree instance"))
    }

    /// Checks that can run with the constants at hand.
    pub fn default_checks(&self) -> Vec<Check> {
        let c = &self.constants;
        Check::ALL
            .into_iter()
            .filter(|check| match check {
                Check::MainBound | Check::Trace => true,
                Check::Yang => c.yang().is_some(),
                Check::AbelianQuotient => c.epsilon.is_some() && c.mu_max.is_some(),
                Check::Recursion => c.recursion_theta().is_some(),
                _ => c.c_yt.is_some(),
            })
            .collect()
    }
}

/// Keeps random test functions independent of the random network drawn from the same seed.
const ALPHA_STREAM: u64 = 0x9E37_79B9_7F4A_7C15;

fn group_label(spec: &GroupSpec) -> String {
    let base = match spec.family() {
        Family::Tree(d) => return format!("tree:{d}"),
        Family::FreeAbelian(n) => (format!("zn:{n}"), GroupSpec::lattice(n)),
        Family::Heisenberg => ("heisenberg".to_string(), GroupSpec::heisenberg()),
    };
    match base {
        (name, Ok(default)) if default == *spec => name,
        (name, _) => format!("{name}+custom"),
    }
}

fn need(value: Option<f64>, check: Check, key: &str) -> Result<f64> {
    value.ok_or_else(|| {
        domain!("{check} needs the constant {key}; pass --constant {key}=VALUE")
    })
}

/// Runs `checks` over `ks` and returns every report in a fixed order:
/// checks in the given order, then by k.
pub fn run_checks(
    inst: &Instance,
    checks: &[Check],
    ks: &KRange,
    alpha: Option<&TestFunction>,
    delta: Option<f64>,
) -> Result<Vec<InequalityReport>> {
    let sys = &inst.system;
    let c = &inst.constants;
    let n = inst.interior_size();
    let ks = ks.resolve(n)?;
    let mut out = Vec::new();
    for &check in checks {
        match check {
            Check::MainBound => {
                let alpha = alpha.ok_or_else(|| domain!("main-bound needs a test function"))?;
                let terms = MainBoundTerms::compute(&inst.net, sys, alpha);
                for &k in &ks {
                    out.push(terms.report(sys, k)?);
                }
            }
            Check::Yang => {
                let cy = need(c.yang(), check, "C_Y")?;
                for &k in &ks {
                    out.push(yang_check(sys, cy, k)?);
                }
            }
            Check::YangType => {
                let cyt = need(c.c_yt, check, "C_YT")?;
                for &k in &ks {
                    out.push(yang_type_check(sys, cyt, k)?);
                }
            }
            Check::AbelianQuotient => {
                let eps = need(c.epsilon, check, "epsilon")?;
                let mu = need(c.mu_max, check, "mu_max")?;
                for &k in &ks {
                    out.push(abelian_quotient_check(sys, eps, mu, k)?);
                }
            }
            Check::Lambda2 => {
                let cyt = need(c.c_yt, check, "C_YT")?;
                if ks.contains(&1) {
                    out.push(lambda2_bound(sys, cyt)?);
                }
            }
            Check::YangSecond | Check::HileProtter | Check::Ppw => {
                let cyt = need(c.c_yt, check, "C_YT")?;
                let f = match check {
                    Check::YangSecond => yang_second_bound,
                    Check::HileProtter => hile_protter_check,
                    _ => ppw_bound,
                };
                for &k in &ks {
                    out.push(f(sys, cyt, k)?);
                }
            }
            Check::Ratio => {
                let cyt = need(c.c_yt, check, "C_YT")?;
                for &k in &ks {
                    let d = delta.unwrap_or_else(|| max_delta(sys, k).unwrap_or(0.0));
                    out.push(ratio_bound(sys, cyt, d, k)?);
                }
            }
            Check::Trace => out.extend(trace_check(sys, &inst.net)?),
            Check::Recursion => {
                let theta = need(c.recursion_theta(), check, "theta")?;
                let shifted: Vec<f64> = sys.eigenvalues().iter().map(|l| l - c.lambda_min).collect();
                if shifted.len() >= 2 {
                    let trace = recursion_check(&shifted, theta)?;
                    out.extend(trace.reports.into_iter().filter(|r| ks.contains(&r.k)));
                }
            }
        }
    }
    Ok(out)
}

/// Asserted vs passing counts over a set of reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub asserted: usize,
    pub passed: usize,
    /// (slack, k, inequality) of the worst failing assertion.
    pub worst: Option<(f64, usize, String)>,
}

impl Summary {
    pub fn of(reports: &[InequalityReport]) -> Self {
        let asserted: Vec<_> = reports.iter().filter(|r| r.hypothesis_ok).collect();
        let passed = asserted.iter().filter(|r| r.holds()).count();
        let worst = asserted
            .iter()
            .filter(|r| !r.holds())
            .min_by(|a, b| a.slack.total_cmp(&b.slack))
            .map(|r| (r.slack, r.k, r.name.clone()));
        Summary { asserted: asserted.len(), passed, worst }
    }

    pub fn ok(&self) -> bool {
        self.passed == self.asserted
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.worst {
            None => write!(f, "PASS {}/{}", self.passed, self.asserted),
            Some((s, k, name)) => {
                write!(f, "FAIL {}/{} (min slack {s:?} at k={k}, {name})", self.passed, self.asserted)
            }
        }
    }
}

/// Shortest round-trip formatting shared by every CSV writer.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Finite values become JSON numbers; ±∞ and NaN become strings.
fn json_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(fmt_f64(x))
    }
}

fn constants_blob(r: &InequalityReport) -> Value {
    Value::Object(r.constants.iter().map(|(k, &v)| (k.clone(), json_f64(v))).collect())
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).map_err(|e| Error::Io(e.into()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub const REPORT_HEADER: [&str; 8] =
    ["instance_id", "inequality", "k", "lhs", "rhs", "slack", "hypothesis_ok", "constants"];

pub fn reports_csv(id: &str, reports: &[InequalityReport]) -> Result<String> {
    let mut rows = vec![REPORT_HEADER.iter().map(|s| s.to_string()).collect()];
    for r in reports {
        rows.push(vec![
            id.to_string(),
            r.name.clone(),
            r.k.to_string(),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.slack),
            r.hypothesis_ok.to_string(),
            constants_blob(r).to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn reports_json(id: &str, reports: &[InequalityReport]) -> Result<String> {
    let rows: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "instance_id": id,
                "inequality": r.name,
                "k": r.k,
                "lhs": json_f64(r.lhs),
                "rhs": json_f64(r.rhs),
                "slack": json_f64(r.slack),
                "hypothesis_ok": r.hypothesis_ok,
                "constants": constants_blob(r),
            })
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

pub fn spectrum_json(sys: &DirichletSystem, net: &HostNetwork) -> Result<String> {
    let rows: Vec<Value> = sys
        .eigenvalues()
        .iter()
        .zip(sys.residuals(net))
        .enumerate()
        .map(|(i, (l, r))| json!({"k": i + 1, "lambda_k": json_f64(*l), "residual": json_f64(r)}))
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

/// Proof audit at each k in `ks`.
pub fn audit(inst: &Instance, alpha: &TestFunction, ks: &KRange) -> Result<Vec<ProofScratch>> {
    ks.resolve(inst.interior_size())?
        .into_iter()
        .map(|k| proof_identities_audit(&inst.net, &inst.system, alpha, k))
        .collect()
}

const AUDIT_HEADER: [&str; 10] = [
    "instance_id",
    "k",
    "a_symmetry",
    "b_antisymmetry",
    "b_relation",
    "phi_orthogonality",
    "norm_identity",
    "w_identity",
    "zy_identity",
    "passes",
];

fn audit_fields(s: &ProofScratch) -> [f64; 7] {
    [
        s.a_symmetry,
        s.b_antisymmetry,
        s.b_relation,
        s.phi_orthogonality,
        s.norm_identity,
        s.w_identity,
        s.zy_identity,
    ]
}

pub fn audit_csv(id: &str, audits: &[ProofScratch]) -> Result<String> {
    let mut rows = vec![AUDIT_HEADER.iter().map(|s| s.to_string()).collect()];
    for s in audits {
        let mut row = vec![id.to_string(), s.k.to_string()];
        row.extend(audit_fields(s).iter().map(|&v| fmt_f64(v)));
        row.push(s.passes().to_string());
        rows.push(row);
    }
    csv_string(rows)
}

pub fn audit_json(id: &str, audits: &[ProofScratch]) -> Result<String> {
    let rows: Vec<Value> = audits
        .iter()
        .map(|s| {
            let mut obj = serde_json::Map::new();
            obj.insert("instance_id".into(), json!(id));
            obj.insert("k".into(), json!(s.k));
            for (name, v) in AUDIT_HEADER[2..9].iter().zip(audit_fields(s)) {
                obj.insert(name.to_string(), json_f64(v));
            }
            obj.insert("passes".into(), json!(s.passes()));
            Value::Object(obj)
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}

/// λ_{k+1} next to each applicable upper bound for it. Gated-out or
/// unavailable bounds are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub k: usize,
    pub lambda_k: f64,
    pub lambda_next: f64,
    pub lambda2: Option<f64>,
    pub yang_second: Option<f64>,
    pub ppw: Option<f64>,
    pub ratio: Option<f64>,
    pub delta: Option<f64>,
    pub yang_type_slack: Option<f64>,
    pub abelian_quotient_slack: Option<f64>,
}

impl BoundsRow {
    /// Whether every bound present dominates λ_{k+1} (within the slack tolerance).
    pub fn consistent(&self) -> bool {
        let tol = crate::inequality::SLACK_TOL;
        [self.lambda2, self.yang_second, self.ppw, self.ratio]
            .into_iter()
            .flatten()
            .all(|b| b >= self.lambda_next - tol)
    }

    pub fn any_bound(&self) -> bool {
        self.lambda2.or(self.yang_second).or(self.ppw).or(self.ratio).is_some()
    }
}

pub fn bounds_table(inst: &Instance, delta: Option<f64>) -> Result<Vec<BoundsRow>> {
    let sys = &inst.system;
    let c = &inst.constants;
    let lmin = c.lambda_min;
    let gated = |r: InequalityReport, shift: f64| r.hypothesis_ok.then_some(r.rhs + shift);
    let mut rows = Vec::new();
    for k in 1..inst.interior_size() {
        let mut row = BoundsRow {
            k,
            lambda_k: sys.lambda(k),
            lambda_next: sys.lambda(k + 1),
            lambda2: None,
            yang_second: None,
            ppw: None,
            ratio: None,
            delta: None,
            yang_type_slack: None,
            abelian_quotient_slack: None,
        };
        if let Some(cyt) = c.c_yt {
            if k == 1 {
                row.lambda2 = gated(lambda2_bound(sys, cyt)?, lmin);
            }
            row.yang_second = gated(yang_second_bound(sys, cyt, k)?, lmin);
            row.ppw = gated(ppw_bound(sys, cyt, k)?, sys.lambda(k));
            let d = delta.or_else(|| max_delta(sys, k));
            if let Some(d) = d {
                row.ratio = gated(ratio_bound(sys, cyt, d, k)?, lmin);
                row.delta = row.ratio.map(|_| d);
            }
            row.yang_type_slack = Some(yang_type_check(sys, cyt, k)?.slack);
        }
        if let (Some(eps), Some(mu)) = (c.epsilon, c.mu_max) {
            row.abelian_quotient_slack = Some(abelian_quotient_check(sys, eps, mu, k)?.slack);
        }
        rows.push(row);
    }
    Ok(rows)
}

const BOUNDS_HEADER: [&str; 11] = [
    "instance_id",
    "k",
    "lambda_k",
    "lambda_k_plus_1",
    "lambda2_bound",
    "yang_second_bound",
    "ppw_bound",
    "ratio_bound",
    "delta",
    "yang_type_slack",
    "abelian_quotient_slack",
];

fn bounds_fields(r: &BoundsRow) -> [Option<f64>; 9] {
    [
        Some(r.lambda_k),
        Some(r.lambda_next),
        r.lambda2,
        r.yang_second,
        r.ppw,
        r.ratio,
        r.delta,
        r.yang_type_slack,
        r.abelian_quotient_slack,
    ]
}

pub fn bounds_csv(id: &str, rows: &[BoundsRow]) -> Result<String> {
    let mut out = vec![BOUNDS_HEADER.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let mut row = vec![id.to_string(), r.k.to_string()];
        row.extend(bounds_fields(r).iter().map(|v| v.map(fmt_f64).unwrap_or_default()));
        out.push(row);
    }
    csv_string(out)
}

pub fn bounds_json(id: &str, rows: &[BoundsRow]) -> Result<String> {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            let mut obj = serde_json::Map::new();
            obj.insert("instance_id".into(), json!(id));
            obj.insert("k".into(), json!(r.k));
            for (name, v) in BOUNDS_HEADER[2..].iter().zip(bounds_fields(r)) {
                obj.insert(name.to_string(), v.map(json_f64).unwrap_or(Value::Null));
            }
            Value::Object(obj)
        })
        .collect();
    Ok(serde_json::to_string_pretty(&rows)? + "\n")
}
