//! Scenario files: a TOML document with dotted section keys naming a catalog
//! target, the estimator settings and the checks to run.
//!
//! ```toml
//! name = "delta-1d"
//! target = "delta@0"
//! estimators = ["classical", "scaling"]
//! ladder.lambda_max = 0.25
//! ladder.ratio = 0.7071067811865476
//! ladder.count = 12
//! checks.conicity = true
//! ```
//!
//! Every key is listed in `scenarios/README.md` next to the bundled files.

mod report;

pub use report::{emit_report, svg_map};

use crate::acs::{
    acs_directions, check_acs_conicity, check_cone_bound, check_diagonal_singularity, check_hermitean_symmetry,
    check_subadditivity, check_wf_acs_inclusion, properly_acausal, salient_cone_filter, with_mirrors, AcsError,
    AcsEstimate, AcsSample, ConeSpec, MultiPhasePoint,
};
use crate::decay::Classification;
use crate::distributions::{catalog_ground_truth, parse_key, CatalogEntry, CatalogError, Distribution, TranslationKernel};
use crate::grid::{make_direction_set, make_ladder, DirectionSet, GridError, Multiplier, Window};
use crate::oscillatory::{crosscheck, transform_bounds};
use crate::wavefront::{
    check_reflection, check_translation_covariance, config_digest, conic_copies, cross_validate, default_suite,
    estimate_wf, feature_centers, lattice_around, soundness, window_robustness_check, BumpProfile, Estimator,
    FamilyFit, FamilySpec, WavefrontEstimate, WfConfig, WfError, DEFAULT_P_GRID,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed scenario: {0}")]
    Syntax(String),
    #[error("missing required key '{0}'")]
    MissingKey(String),
    #[error("invalid value for '{key}': {reason}")]
    Invalid { key: String, reason: String },
    #[error("bad override '{0}': expected key=value")]
    BadOverride(String),
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("scenario '{scenario}': {source}")]
    Catalog { scenario: String, source: CatalogError },
    #[error("scenario '{scenario}': {source}")]
    Estimate { scenario: String, source: AcsError },
    #[error("scenario '{scenario}': cannot write {path}: {source}")]
    Output { scenario: String, path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LadderSpec {
    pub lambda_max: f64,
    pub ratio: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeSpec {
    /// Explicit lattice; when empty the lattice is built around the target's features.
    pub points: Vec<Vec<f64>>,
    pub spacing: f64,
    pub per_axis: usize,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        LatticeSpec { points: Vec::new(), spacing: 0.5, per_axis: 9 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DirectionSpec {
    /// Number of equi-angular directions (dimension 1 and 2 only).
    pub count: Option<usize>,
    pub cap_radius: f64,
    pub cap_samples: Option<usize>,
}

impl Default for DirectionSpec {
    fn default() -> Self {
        DirectionSpec { count: None, cap_radius: 0.1, cap_samples: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FamilySuiteSpec {
    /// Drop the seeded random family from the scaling suite.
    pub deterministic_only: bool,
    pub p_grid: Vec<f64>,
}

impl Default for FamilySuiteSpec {
    fn default() -> Self {
        FamilySuiteSpec { deterministic_only: false, p_grid: DEFAULT_P_GRID.to_vec() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowSpec {
    pub radius: f64,
    pub sharpness: f64,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec { radius: 0.4, sharpness: 12.0 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Checks {
    pub soundness: bool,
    pub agreement: bool,
    pub conicity: bool,
    pub covariance: bool,
    pub reflection: bool,
    pub robustness: bool,
    pub numerics: bool,
    pub hermitean: bool,
    pub cone: bool,
    pub spacelike: bool,
    pub inclusion: bool,
    pub diagonal: bool,
    pub subadditivity: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AcsSpec {
    /// `x` tuples; mirrors are added automatically. Empty means the diagonal at the origin.
    pub tuples: Vec<Vec<Vec<f64>>>,
    /// Translation used by the covariance check.
    pub shift: Option<Vec<f64>>,
    /// Cone tolerance; defaults to the cap radius.
    pub cone_tol: Option<f64>,
    /// Second kernel for the subadditivity check.
    pub partner: Option<String>,
    /// Diagonal point `x` of the `(x, x)` check; defaults to the origin.
    pub diagonal: Option<Vec<f64>>,
    /// The kernel stands for a non-trivial field, so a Regular diagonal is a failure.
    pub nontrivial: bool,
}

impl Default for AcsSpec {
    fn default() -> Self {
        AcsSpec { tuples: Vec::new(), shift: None, cone_tol: None, partner: None, diagonal: None, nontrivial: true }
    }
}

/// Harness self-tests: artificial samples injected after estimation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Plant {
    /// A Singular sample at a `k` tuple outside the momentum cone.
    pub cone_violation: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub target: String,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<String>,
    pub ladder: LadderSpec,
    #[serde(default)]
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub directions: DirectionSpec,
    #[serde(default)]
    pub families: FamilySuiteSpec,
    #[serde(default)]
    pub window: WindowSpec,
    #[serde(default)]
    pub checks: Checks,
    #[serde(default)]
    pub acs: AcsSpec,
    #[serde(default)]
    pub plant: Plant,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<String>,
    #[serde(default)]
    pub threads: Option<usize>,
}

fn default_estimators() -> Vec<String> {
    vec!["scaling".into()]
}

fn default_seed() -> u64 {
    0x5eed
}

const REQUIRED: [&str; 3] = ["name", "target", "ladder"];

fn set_dotted(table: &mut toml::Table, key: &str, value: toml::Value) -> Result<(), ConfigError> {
    let parts: Vec<&str> = key.split('.').collect();
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| ConfigError::Invalid { key: key.into(), reason: format!("'{p}' is not a section") })?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

fn parse_override(s: &str) -> Result<(String, toml::Value), ConfigError> {
    let (k, v) = s.split_once('=').ok_or_else(|| ConfigError::BadOverride(s.into()))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(ConfigError::BadOverride(s.into()));
    }
    // a bare word that is not valid TOML is taken as a string
    let value = toml::from_str::<toml::Table>(&format!("v = {}", v.trim()))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(v.trim().to_string()));
    Ok((k.to_string(), value))
}

impl Scenario {
    /// Parse scenario text, applying `key=value` overrides first.
    pub fn parse(text: &str, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| ConfigError::Syntax(e.message().to_string()))?;
        for o in overrides {
            let (k, v) = parse_override(o)?;
            set_dotted(&mut table, &k, v)?;
        }
        for key in REQUIRED {
            if !table.contains_key(key) {
                return Err(ConfigError::MissingKey(key.into()));
            }
        }
        let sc: Scenario = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
        sc.validate()?;
        Ok(sc)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Scenario::parse(&text, overrides)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let bad = |key: &str, reason: String| Err(ConfigError::Invalid { key: key.into(), reason });
        if let Err(e) = make_ladder(self.ladder.lambda_max, self.ladder.ratio, self.ladder.count) {
            return bad("ladder", e.to_string());
        }
        if self.estimators.is_empty() {
            return bad("estimators", "at least one estimator is required".into());
        }
        for e in &self.estimators {
            if !["classical", "scaling", "singlefamily"].contains(&e.as_str()) {
                return bad("estimators", format!("unknown estimator '{e}'"));
            }
        }
        if !(self.lattice.spacing > 0.0) {
            return bad("lattice.spacing", "must be positive".into());
        }
        if !(self.directions.cap_radius > 0.0 && self.directions.cap_radius < 1.0) {
            return bad("directions.cap_radius", "must lie in (0, 1)".into());
        }
        if self.families.p_grid.is_empty() || self.families.p_grid.iter().any(|p| !(*p >= 1.0)) {
            return bad("families.p_grid", "must be nonempty with every p >= 1".into());
        }
        if !(self.window.radius > 0.0 && self.window.sharpness > 0.0) {
            return bad("window", "radius and sharpness must be positive".into());
        }
        if self.threads == Some(0) {
            return bad("threads", "must be at least 1".into());
        }
        Ok(())
    }

    pub fn config(&self) -> WfConfig {
        WfConfig {
            ladder: make_ladder(self.ladder.lambda_max, self.ladder.ratio, self.ladder.count).expect("validated ladder"),
            window_radius: self.window.radius,
            window_sharpness: self.window.sharpness,
            seed: self.seed,
            ..WfConfig::default()
        }
    }

    fn suite(&self) -> Vec<FamilySpec> {
        let mut s = default_suite();
        if self.families.deterministic_only {
            s.retain(|f| !matches!(f, FamilySpec::Random { .. }));
        }
        s
    }

    fn estimator(&self, name: &str) -> Estimator {
        match name {
            "classical" => Estimator::Classical,
            "singlefamily" => Estimator::SingleFamily { g: BumpProfile::new(0.0, 1.0, 8.0), p_grid: self.families.p_grid.clone() },
            _ => Estimator::ScalingFamilies { suite: self.suite() },
        }
    }

    fn direction_set(&self, dim: usize) -> Result<DirectionSet, GridError> {
        let samples = self.directions.cap_samples.unwrap_or(1 + 2 * dim);
        let count = self.directions.count.unwrap_or(match dim {
            1 => 2,
            _ => 8,
        });
        make_direction_set(dim, count, self.directions.cap_radius, samples)
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub applicable: bool,
    pub details: Value,
}

fn outcome(name: &str, pass: bool, details: Value) -> CheckOutcome {
    CheckOutcome { name: name.into(), pass, applicable: true, details }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn not_applicable(name: &str, reason: &str) -> CheckOutcome {
    CheckOutcome { name: name.into(), pass: true, applicable: false, details: json!({ "reason": reason }) }
}

/// One classified phase point, flattened for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSample {
    pub estimator: String,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub classification: Classification,
    /// `None` only for samples injected by `plant`.
    pub decisive: Option<FamilyFit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub name: String,
    pub target: String,
    pub kind: &'static str,
    pub dim: usize,
    pub config_digest: String,
    pub version: &'static str,
    pub samples: Vec<ReportSample>,
    pub checks: Vec<CheckOutcome>,
}

impl ScenarioReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Parse, run and write outputs. `out` overrides the scenario's output directory.
pub fn run_scenario(path: &Path, overrides: &[String], out: Option<&Path>) -> Result<ScenarioReport, ScenarioError> {
    let sc = Scenario::load(path, overrides)?;
    let report = execute(&sc)?;
    let dir = match (out, &sc.output) {
        (Some(o), _) => o.to_path_buf(),
        (None, Some(o)) => path.parent().unwrap_or(Path::new(".")).join(o),
        (None, None) => PathBuf::from("microspec-out").join(&sc.name),
    };
    emit_report(&report, &dir).map_err(|source| ScenarioError::Output { scenario: sc.name.clone(), path: dir, source })?;
    Ok(report)
}

/// Run every estimator and enabled check of a parsed scenario.
pub fn execute(sc: &Scenario) -> Result<ScenarioReport, ScenarioError> {
    let ctx = |source: CatalogError| ScenarioError::Catalog { scenario: sc.name.clone(), source };
    let est_err = |source: AcsError| ScenarioError::Estimate { scenario: sc.name.clone(), source };
    match parse_key(&sc.target).map_err(ctx)? {
        CatalogEntry::Distribution(u) => run_wavefront(sc, &u).map_err(|e| est_err(e.into())),
        CatalogEntry::Kernel(phi) => run_acs(sc, &phi).map_err(est_err),
    }
}

fn wf_samples(est: &WavefrontEstimate) -> Vec<ReportSample> {
    est.samples
        .iter()
        .map(|s| ReportSample {
            estimator: est.estimator.name().into(),
            x: s.point.x.clone(),
            xi: s.point.xi.clone(),
            classification: s.classification,
            decisive: Some(s.decisive_fit().clone()),
        })
        .collect()
}

fn acs_samples(est: &AcsEstimate) -> Vec<ReportSample> {
    est.samples
        .iter()
        .map(|s| ReportSample {
            estimator: "acs".into(),
            x: s.point.flat_x(),
            xi: s.point.flat_k(),
            classification: s.classification,
            decisive: s.fits.get(s.decisive).cloned(),
        })
        .collect()
}

fn run_wavefront(sc: &Scenario, u: &Distribution) -> Result<ScenarioReport, WfError> {
    let cfg = sc.config();
    let dim = u.dim();
    let dirs = sc.direction_set(dim)?;
    let lattice = if sc.lattice.points.is_empty() {
        lattice_around(&feature_centers(u), sc.lattice.spacing, sc.lattice.per_axis)
    } else {
        sc.lattice.points.clone()
    };
    let estimates = sc
        .estimators
        .iter()
        .map(|name| {
            let mut e = estimate_wf(u, &lattice, &dirs, &sc.estimator(name), &cfg)?;
            e.label = sc.target.clone();
            Ok(e)
        })
        .collect::<Result<Vec<_>, WfError>>()?;
    let primary = &estimates[0];
    let scaling = estimates.iter().find(|e| !matches!(e.estimator, Estimator::Classical)).unwrap_or(primary);
    let c = &sc.checks;
    let mut checks = Vec::new();
    if c.soundness {
        checks.push(match catalog_ground_truth(u) {
            Err(_) => not_applicable("soundness", "no ground truth for this target"),
            Ok(truth) => {
                let per: Vec<_> = estimates.iter().map(|e| (e.estimator.name(), soundness(e, &truth))).collect();
                let pass = per.iter().all(|(_, r)| r.pass());
                outcome("soundness", pass, json!(per.iter().map(|(n, r)| json!({ "estimator": n, "report": r })).collect::<Vec<_>>()))
            }
        });
    }
    if c.agreement {
        checks.push(if estimates.len() < 2 {
            not_applicable("agreement", "needs at least two estimators")
        } else {
            let r = cross_validate(&estimates.iter().collect::<Vec<_>>())?;
            outcome("agreement", r.disagreement_rate <= 0.05, to_json(&r))
        });
    }
    if c.conicity {
        let per = estimates
            .iter()
            .map(|e| Ok((e.estimator.name(), conic_copies(u, e, &cfg, &[0.5, 2.0])?.1)))
            .collect::<Result<Vec<_>, WfError>>()?;
        let pass = per.iter().all(|(_, r)| r.pass());
        checks.push(outcome("conicity", pass, json!(per.iter().map(|(n, r)| json!({ "estimator": n, "report": r })).collect::<Vec<_>>())));
    }
    if c.covariance {
        let r = check_translation_covariance(u, primary, &cfg)?;
        checks.push(outcome("covariance", r.pass(), to_json(&r)));
    }
    if c.reflection {
        checks.push(if !u.is_real() {
            not_applicable("reflection", "target is not real")
        } else {
            let r = check_reflection(primary);
            outcome("reflection", r.asymmetric.is_empty(), to_json(&r))
        });
    }
    if c.robustness {
        let r = window_robustness_check(u, scaling, &Multiplier::defaults(), &cfg)?;
        checks.push(outcome("robustness", r.pass(), to_json(&r)));
    }
    if c.numerics {
        let x = lattice.first().cloned().unwrap_or_else(|| vec![0.0; dim]);
        checks.push(numerics_check(u, &x, &dirs, &sc.suite(), &cfg)?);
    }
    for name in ["hermitean", "cone", "spacelike", "inclusion", "diagonal", "subadditivity"] {
        let on = match name {
            "hermitean" => c.hermitean,
            "cone" => c.cone,
            "spacelike" => c.spacelike,
            "inclusion" => c.inclusion,
            "diagonal" => c.diagonal,
            _ => c.subadditivity,
        };
        if on {
            checks.push(not_applicable(name, "target is a distribution, not a kernel"));
        }
    }
    Ok(ScenarioReport {
        name: sc.name.clone(),
        target: sc.target.clone(),
        kind: "wavefront",
        dim,
        config_digest: config_digest(&sc),
        version: env!("CARGO_PKG_VERSION"),
        samples: estimates.iter().flat_map(wf_samples).collect(),
        checks,
    })
}

/// Grid route against convolution route on 16 seeded probes, and the trivial
/// transform bound on every scaled family of the suite.
/// DFT-vs-direct probes at `x` plus the transform bound on every scaled family.
pub fn numerics_check(
    u: &Distribution,
    x: &[f64],
    dirs: &DirectionSet,
    suite: &[FamilySpec],
    cfg: &WfConfig,
) -> Result<CheckOutcome, WfError> {
    let h = Window::product(&vec![0.0; x.len()], cfg.window_radius, cfg.window_sharpness);
    let ks: Vec<Vec<f64>> = dirs.directions.iter().flat_map(|d| dirs.cap(d)).collect();
    let fam = suite[0].build(x, cfg.ladder.values(), cfg.seed, 0)?;
    let probes = crosscheck(u, &h, &fam, cfg.ladder.values(), &ks, 16, cfg.seed, &cfg.osc)?;
    let mut bounds = Vec::new();
    for spec in suite.iter().filter(|s| matches!(s, FamilySpec::Scaled { .. })) {
        let f = spec.build(x, cfg.ladder.values(), cfg.seed, 0)?;
        bounds.extend(transform_bounds(&f, cfg.ladder.values(), &dirs.directions).map_err(WfError::from)?);
    }
    let probe_fail = probes.iter().filter(|p| !p.pass).count();
    let bound_fail = bounds.iter().filter(|b| !b.pass).count();
    Ok(outcome(
        "numerics",
        probe_fail == 0 && bound_fail == 0 && !probes.is_empty(),
        json!({ "probes": probes.len(), "probe_failures": probe_fail, "bounds": bounds.len(), "bound_failures": bound_fail, "probe_records": probes }),
    ))
}

fn planted_sample(d: usize, n: usize, x: &[Vec<f64>]) -> AcsSample {
    // k_n points to the past: outside the cone for every d ≥ 1
    let mut k = vec![vec![0.0; d]; n];
    k[n - 1][0] = -1.0;
    if n > 1 {
        k[0][0] = 1.0;
    }
    AcsSample {
        point: MultiPhasePoint { x: x.to_vec(), k },
        classification: Classification::Singular,
        decisive: 0,
        fits: Vec::new(),
    }
}

fn run_acs(sc: &Scenario, phi: &TranslationKernel) -> Result<ScenarioReport, AcsError> {
    let cfg = sc.config();
    let (d, n) = (phi.d, phi.n);
    let mut dirs = acs_directions(d, n)?;
    dirs.cap_radius = sc.directions.cap_radius;
    if let Some(s) = sc.directions.cap_samples {
        dirs.cap_samples = s;
    }
    let base: Vec<Vec<Vec<f64>>> = if sc.acs.tuples.is_empty() { vec![vec![vec![0.0; d]; n]] } else { sc.acs.tuples.clone() };
    let tuples = with_mirrors(&base);
    let suite = sc.suite();
    let mut est = crate::acs::estimate_acs(phi, &tuples, &dirs, &suite, &cfg)?;
    if sc.plant.cone_violation {
        est.samples.push(planted_sample(d, n, &tuples[0]));
    }
    let c = &sc.checks;
    let cone = ConeSpec { d, n };
    let tol = sc.acs.cone_tol.unwrap_or(dirs.cap_radius);
    let mut checks = Vec::new();
    if c.conicity {
        let r = check_acs_conicity(phi, &est, &cfg, &[0.5, 2.0])?;
        checks.push(outcome("conicity", r.pass(), to_json(&r)));
    }
    if c.covariance {
        let s = sc.acs.shift.clone().unwrap_or_else(|| vec![0.5; d]);
        let r = crate::acs::check_translation_covariance(phi, &est, &s, &cfg)?;
        checks.push(outcome("covariance", r.pass(), to_json(&r)));
    }
    if c.hermitean {
        let r = check_hermitean_symmetry(&est)?;
        checks.push(if r.applicable {
            outcome("hermitean", r.pass(), to_json(&r))
        } else {
            not_applicable("hermitean", "functional is not hermitean")
        });
    }
    if c.cone {
        let r = check_cone_bound(&est, &cone, tol);
        checks.push(outcome("cone", r.pass(), to_json(&r)));
    }
    if c.spacelike {
        let w = |k: &[Vec<f64>]| {
            let norm = k.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
            let unit: Vec<Vec<f64>> = k.iter().map(|v| v.iter().map(|c| c / norm).collect()).collect();
            crate::acs::cone_membership(&unit, &cone, tol)
        };
        let salience = salient_cone_filter(&est, &w, phi.local)?;
        let acausal: Vec<&Vec<Vec<f64>>> = tuples.iter().filter(|t| properly_acausal(t)).collect();
        let singular: Vec<&MultiPhasePoint> = est
            .samples
            .iter()
            .filter(|s| s.classification == Classification::Singular && properly_acausal(&s.point.x))
            .map(|s| &s.point)
            .collect();
        checks.push(if acausal.is_empty() {
            not_applicable("spacelike", "no properly acausal tuple in the lattice")
        } else {
            outcome(
                "spacelike",
                singular.is_empty(),
                json!({ "acausal_tuples": acausal, "singular_at_acausal": singular, "salience": salience }),
            )
        });
    }
    let needs_wf = c.inclusion || c.diagonal;
    let wf = if needs_wf {
        let diag: Vec<f64> = sc.acs.diagonal.clone().unwrap_or_else(|| vec![0.0; d]);
        let mut points = tuples.clone();
        points.push(vec![diag.clone(); n]);
        Some((crate::acs::kernel_wavefront(phi, &points, &dirs, &suite, &cfg)?, diag))
    } else {
        None
    };
    if c.inclusion {
        let (wf, _) = wf.as_ref().expect("computed above");
        let r = check_wf_acs_inclusion(wf, &est);
        checks.push(outcome("inclusion", r.pass(), to_json(&r)));
    }
    if c.diagonal {
        let (wf, diag) = wf.as_ref().expect("computed above");
        checks.push(if n != 2 {
            not_applicable("diagonal", "needs a two-point kernel")
        } else {
            let r = check_diagonal_singularity(wf, diag)?;
            let pass = r.status != Classification::Regular || !sc.acs.nontrivial;
            outcome("diagonal", pass, to_json(&r))
        });
    }
    if c.subadditivity {
        checks.push(match &sc.acs.partner {
            None => not_applicable("subadditivity", "no partner kernel given"),
            Some(key) => {
                let other = match parse_key(key) {
                    Ok(CatalogEntry::Kernel(k)) if k.n == n && k.d == d => k,
                    _ => return Err(AcsError::Invalid(format!("partner '{key}' is not a kernel of matching shape"))),
                };
                let b = crate::acs::estimate_acs(&other, &tuples, &dirs, &suite, &cfg)?;
                let sum = crate::acs::estimate_acs(&phi.plus(&other), &tuples, &dirs, &suite, &cfg)?;
                let r = check_subadditivity(&est, &b, &sum);
                outcome("subadditivity", r.pass(), to_json(&r))
            }
        });
    }
    for name in ["soundness", "agreement", "reflection", "robustness", "numerics"] {
        let on = match name {
            "soundness" => c.soundness,
            "agreement" => c.agreement,
            "reflection" => c.reflection,
            "robustness" => c.robustness,
            _ => c.numerics,
        };
        if on {
            checks.push(not_applicable(name, "target is a kernel; these checks apply to distributions"));
        }
    }
    let mut samples = acs_samples(&est);
    if let Some((wf, _)) = &wf {
        samples.extend(wf_samples(wf));
    }
    Ok(ScenarioReport {
        name: sc.name.clone(),
        target: sc.target.clone(),
        kind: "acs",
        dim: d * n,
        config_digest: config_digest(&sc),
        version: env!("CARGO_PKG_VERSION"),
        samples,
        checks,
    })
}

/// Scenario files shipped with the crate, by file name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("delta-1d.toml", include_str!("../../scenarios/delta-1d.toml")),
    ("planted-cone.toml", include_str!("../../scenarios/planted-cone.toml")),
    ("missing-ladder.toml", include_str!("../../scenarios/missing-ladder.toml")),
    ("line-delta-2d.toml", include_str!("../../scenarios/line-delta-2d.toml")),
    ("bv-kernel-1d.toml", include_str!("../../scenarios/bv-kernel-1d.toml")),
    ("bv-kernel-2d.toml", include_str!("../../scenarios/bv-kernel-2d.toml")),
];

/// Exit status contract: 0 when every enabled check passes, 2 when one fails,
/// 1 when the scenario cannot be run.
pub fn exit_code(r: &Result<ScenarioReport, ScenarioError>) -> i32 {
    match r {
        Ok(rep) if rep.pass() => 0,
        Ok(_) => 2,
        Err(_) => 1,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfTestCase {
    pub scenario: String,
    pub expected: i32,
    pub got: i32,
    pub message: String,
}

/// Run the bundled harness scenarios in `dir` and compare exit statuses.
pub fn self_test(dir: &Path) -> std::io::Result<Vec<SelfTestCase>> {
    std::fs::create_dir_all(dir)?;
    let cases = [("delta-1d.toml", 0), ("planted-cone.toml", 2), ("missing-ladder.toml", 1)];
    let mut out = Vec::new();
    for (file, expected) in cases {
        let text = BUNDLED.iter().find(|(n, _)| *n == file).expect("bundled scenario").1;
        let path = dir.join(file);
        std::fs::write(&path, text)?;
        let stem = file.trim_end_matches(".toml");
        let r = run_scenario(&path, &[], Some(&dir.join("out").join(stem)));
        let message = match &r {
            Ok(rep) => {
                let failed: Vec<&str> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                if failed.is_empty() { "all checks pass".to_string() } else { format!("failed: {}", failed.join(", ")) }
            }
            Err(e) => e.to_string(),
        };
        out.push(SelfTestCase { scenario: stem.into(), expected, got: exit_code(&r), message });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "name = \"t\"\ntarget = \"delta@0\"\nladder.lambda_max = 0.25\nladder.ratio = 0.7\nladder.count = 8\n";

    #[test]
    fn missing_ladder_is_named() {
        let e = Scenario::parse("name = \"t\"\ntarget = \"delta@0\"\n", &[]).unwrap_err();
        assert!(matches!(e, ConfigError::MissingKey(ref k) if k == "ladder"), "{e}");
        assert!(e.to_string().contains("ladder"));
    }

    #[test]
    fn unknown_key_is_rejected() {
        let e = Scenario::parse(&format!("{MINIMAL}checks.bogus = true\n"), &[]).unwrap_err();
        assert!(e.to_string().contains("bogus"), "{e}");
    }

    #[test]
    fn overrides_reach_nested_keys() {
        let sc = Scenario::parse(MINIMAL, &["ladder.count=10".into(), "seed=7".into(), "target=pv@1".into()]).unwrap();
        assert_eq!(sc.ladder.count, 10);
        assert_eq!(sc.seed, 7);
        assert_eq!(sc.target, "pv@1");
        assert!(Scenario::parse(MINIMAL, &["novalue".into()]).is_err());
    }

    #[test]
    fn bad_ladder_is_invalid() {
        let e = Scenario::parse(&MINIMAL.replace("0.7", "1.5"), &[]).unwrap_err();
        assert!(matches!(e, ConfigError::Invalid { ref key, .. } if key == "ladder"));
    }

    #[test]
    fn bundled_files_parse_except_the_broken_one() {
        for (name, text) in BUNDLED {
            let r = Scenario::parse(text, &[]);
            assert_eq!(r.is_ok(), *name != "missing-ladder.toml", "{name}");
        }
    }
}
