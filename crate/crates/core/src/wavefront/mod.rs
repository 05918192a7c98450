//! Wavefront-set estimators and the checks that compare them.
//!
//! Three estimators classify sampled phase points `(x, ξ)`:
//! the classical localized transform `u(e_{k/λ} χ)`, the scaling-family
//! transform over a suite of testing families, and one normalized profile
//! scaled with several exponents `p`. All of them evaluate every direction at
//! a lattice point in one batch, so the grid route shares a single FFT.
//!
//! Singular verdicts are strong (a witness was found); Regular verdicts mean
//! no family in the finite suite produced a witness.

use crate::decay::{
    fit_decay, polynomial_prefactor_adjust, suffix_checked, Classification, DecayError, DecayFit, DecayThresholds,
};
use crate::distributions::{Distribution, WfDescriptor};
use crate::func::{Bump1D, Elementary1D, Factor, Product1D};
use crate::grid::{make_direction_set, BoxRegion, DirectionSet, GridError, LambdaLadder, Multiplier, TestingFamily, Window};
use crate::oscillatory::{classical_local_ft, windowed_scaled_ft, IntegralRecord, OscError, OscOptions};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WfError {
    #[error(transparent)]
    Osc(#[from] OscError),
    #[error(transparent)]
    Decay(#[from] DecayError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, xi: Vec<f64>) -> Result<Self, WfError> {
        if x.len() != xi.len() {
            return Err(WfError::Invalid("x and xi differ in dimension".into()));
        }
        if xi.iter().all(|v| *v == 0.0) || xi.iter().chain(&x).any(|v| !v.is_finite()) {
            return Err(WfError::Invalid("xi must be a finite nonzero vector".into()));
        }
        Ok(PhasePoint { x, xi })
    }

    fn mirrored(&self) -> PhasePoint {
        PhasePoint { x: self.x.clone(), xi: self.xi.iter().map(|v| -v).collect() }
    }
}

/// `exp(a(1 - 1/(1 - t²)))`-type bump on `(center - radius, center + radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpProfile {
    pub center: f64,
    pub radius: f64,
    pub sharpness: f64,
}

impl BumpProfile {
    pub fn new(center: f64, radius: f64, sharpness: f64) -> Self {
        BumpProfile { center, radius, sharpness }
    }

    fn factor(&self, normalized: bool) -> Factor {
        let b = Bump1D::new(self.center, self.radius, self.sharpness);
        if normalized {
            let c = 1.0 / b.integral();
            Arc::new(Product1D { a: Arc::new(Elementary1D::Polynomial(vec![c])), b: Arc::new(b) })
        } else {
            Arc::new(b)
        }
    }

    fn reach(&self) -> f64 {
        self.center.abs() + self.radius
    }
}

/// Recipe for a testing family; instantiated per anchor point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FamilySpec {
    /// `g(λ^{-p}(· - x))` with `g` the tensor power of the profile; `normalized` makes `∫g = 1`.
    Scaled { profile: BumpProfile, p: f64, normalized: bool },
    /// Per-λ random phase and cosine modulation, seeded from the configuration.
    Random { radius: f64, sharpness: f64 },
}

impl FamilySpec {
    pub fn label(&self) -> String {
        match self {
            FamilySpec::Scaled { profile, p, .. } => {
                format!("scaled(c={},r={},a={},p={p})", profile.center, profile.radius, profile.sharpness)
            }
            FamilySpec::Random { radius, sharpness } => format!("random(r={radius},a={sharpness})"),
        }
    }

    /// The family anchored at `x`. `slot` decorrelates the seeds of the
    /// families of a multi-point suite; the seed does not depend on `x`.
    pub fn build(&self, x: &[f64], ladder: &[f64], seed: u64, slot: u64) -> Result<TestingFamily, WfError> {
        let m = x.len();
        Ok(match self {
            FamilySpec::Scaled { profile, p, normalized } => TestingFamily::scaled_family(
                vec![profile.factor(*normalized); m],
                x,
                *p,
                BoxRegion::symmetric(m, 1.25 * profile.reach()),
            )?,
            FamilySpec::Random { radius, sharpness } => {
                TestingFamily::random_modulated(m, ladder, x, seed.wrapping_add(slot), *radius, *sharpness)
            }
        })
    }
}

/// Three bump profiles at `p = 1` and one seeded random family.
pub fn default_suite() -> Vec<FamilySpec> {
    vec![
        FamilySpec::Scaled { profile: BumpProfile::new(0.0, 1.0, 8.0), p: 1.0, normalized: false },
        FamilySpec::Scaled { profile: BumpProfile::new(0.0, 0.6, 4.0), p: 1.0, normalized: false },
        FamilySpec::Scaled { profile: BumpProfile::new(0.25, 0.8, 6.0), p: 1.0, normalized: false },
        FamilySpec::Random { radius: 1.0, sharpness: 8.0 },
    ]
}

pub const DEFAULT_P_GRID: [f64; 4] = [1.0, 1.5, 2.0, 3.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Estimator {
    Classical,
    ScalingFamilies { suite: Vec<FamilySpec> },
    /// One profile `g` with `ĝ(0) = 1`, scaled by `λ^p` for every `p` in the grid.
    SingleFamily { g: BumpProfile, p_grid: Vec<f64> },
}

impl Estimator {
    pub fn scaling_default() -> Self {
        Estimator::ScalingFamilies { suite: default_suite() }
    }

    pub fn single_default() -> Self {
        Estimator::SingleFamily { g: BumpProfile::new(0.0, 1.0, 8.0), p_grid: DEFAULT_P_GRID.to_vec() }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Estimator::Classical => "classical",
            Estimator::ScalingFamilies { .. } => "scaling",
            Estimator::SingleFamily { .. } => "singlefamily",
        }
    }

    fn suite(&self) -> Vec<FamilySpec> {
        match self {
            Estimator::Classical => Vec::new(),
            Estimator::ScalingFamilies { suite } => suite.clone(),
            Estimator::SingleFamily { g, p_grid } => {
                p_grid.iter().map(|&p| FamilySpec::Scaled { profile: *g, p, normalized: true }).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WfConfig {
    pub ladder: LambdaLadder,
    pub thresholds: DecayThresholds,
    /// Radius and sharpness of both the localizing window `χ` and the scaling window `h`.
    pub window_radius: f64,
    pub window_sharpness: f64,
    pub multiplier: Multiplier,
    pub osc: OscOptions,
    pub seed: u64,
    /// Downgrade fits that flip when the two coarsest ladder entries are dropped.
    pub suffix_check: bool,
}

impl Default for WfConfig {
    fn default() -> Self {
        WfConfig {
            ladder: LambdaLadder::default(),
            thresholds: DecayThresholds::default(),
            window_radius: 0.4,
            window_sharpness: 12.0,
            multiplier: Multiplier::Identity,
            osc: OscOptions::default(),
            seed: 0x5eed,
            suffix_check: true,
        }
    }
}

/// Hex SHA-256 of the JSON rendering of `value`.
pub fn config_digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("configuration serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Decay fit of one family (or of the classical transform) at one phase point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyFit {
    pub label: String,
    pub fit: DecayFit,
    /// Largest quadrature error over the cap, per ladder entry.
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub point: PhasePoint,
    pub classification: Classification,
    /// Index into `fits` of the fit that decided the classification.
    pub decisive: usize,
    pub fits: Vec<FamilyFit>,
}

impl Sample {
    pub fn decisive_fit(&self) -> &FamilyFit {
        &self.fits[self.decisive]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WavefrontEstimate {
    pub label: String,
    pub estimator: Estimator,
    pub dirs: DirectionSet,
    pub samples: Vec<Sample>,
    pub config_digest: String,
}

impl WavefrontEstimate {
    /// Distinct lattice points in sample order.
    pub fn lattice(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for s in &self.samples {
            if !out.contains(&s.point.x) {
                out.push(s.point.x.clone());
            }
        }
        out
    }

    pub fn classification_at(&self, p: &PhasePoint) -> Option<Classification> {
        self.samples.iter().find(|s| s.point == *p).map(|s| s.classification)
    }

    pub fn count(&self, c: Classification) -> usize {
        self.samples.iter().filter(|s| s.classification == c).count()
    }
}

/// Any Singular fit wins; Regular needs every fit Regular.
pub fn combine(fits: &[FamilyFit]) -> (Classification, usize) {
    if let Some(i) = fits.iter().position(|f| f.fit.classification == Classification::Singular) {
        return (Classification::Singular, i);
    }
    if let Some(i) = fits.iter().position(|f| f.fit.classification == Classification::Indeterminate) {
        return (Classification::Indeterminate, i);
    }
    // the weakest Regular witness
    let i = (0..fits.len())
        .min_by(|&a, &b| {
            let key = |f: &FamilyFit| if f.fit.floor_hit { f64::INFINITY } else { f.fit.excess_slope() };
            key(&fits[a]).partial_cmp(&key(&fits[b])).unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    (Classification::Regular, i)
}

/// One fit per direction. `batches[j]` holds the records at ladder entry `j`,
/// the caps of all directions concatenated in direction order.
pub fn fits_from_batches(
    batches: &[Vec<IntegralRecord>],
    n_dirs: usize,
    trivial_order: f64,
    thresholds: DecayThresholds,
    suffix_check: bool,
    label: &str,
) -> Result<Vec<FamilyFit>, WfError> {
    let lambdas: Vec<f64> = batches.iter().map(|b| b.first().map_or(f64::NAN, |r| r.lambda)).collect();
    (0..n_dirs)
        .map(|d| {
            let mut mags = Vec::with_capacity(batches.len());
            let mut errors = Vec::with_capacity(batches.len());
            for b in batches {
                let c = b.len() / n_dirs;
                let cap = &b[d * c..(d + 1) * c];
                mags.push(cap.iter().map(|r| r.value.norm()).fold(0.0, f64::max));
                errors.push(cap.iter().map(|r| r.quadrature_error).fold(0.0, f64::max));
            }
            let fit = polynomial_prefactor_adjust(&fit_decay(&lambdas, &mags, thresholds)?, trivial_order);
            let fit = if suffix_check { suffix_checked(&fit) } else { fit };
            Ok(FamilyFit { label: label.to_string(), fit, errors })
        })
        .collect()
}

pub fn window(center: &[f64], cfg: &WfConfig) -> Result<Window, WfError> {
    let w = Window::product(center, cfg.window_radius, cfg.window_sharpness);
    Ok(if cfg.multiplier == Multiplier::Identity { w } else { w.with_multiplier(&cfg.multiplier)? })
}

/// Classify every direction in `xis` at `x`. With `mu != 1` the directions are
/// `mu·ξ`, the ladder is `mu·λ` and the families are reindexed by `mu`.
fn evaluate_x(
    u: &Distribution,
    x: &[f64],
    xis: &[Vec<f64>],
    dirs: &DirectionSet,
    est: &Estimator,
    cfg: &WfConfig,
    mu: f64,
) -> Result<Vec<Sample>, WfError> {
    if xis.is_empty() {
        return Ok(Vec::new());
    }
    let ladder = if mu == 1.0 { cfg.ladder.values().to_vec() } else { cfg.ladder.scaled(mu) };
    let xis: Vec<Vec<f64>> = xis.iter().map(|xi| xi.iter().map(|v| v * mu).collect()).collect();
    let ks: Vec<Vec<f64>> = xis.iter().flat_map(|xi| dirs.cap(xi)).collect();
    let n = xis.len();
    let per_family: Vec<Vec<FamilyFit>> = match est {
        Estimator::Classical => {
            let chi = window(x, cfg)?;
            let batches = ladder
                .iter()
                .map(|&l| classical_local_ft(u, &chi, l, &ks))
                .collect::<Result<Vec<_>, _>>()?;
            vec![fits_from_batches(&batches, n, 0.0, cfg.thresholds, cfg.suffix_check, "classical")?]
        }
        _ => {
            let h = window(&vec![0.0; x.len()], cfg)?;
            est.suite()
                .iter()
                .map(|spec| {
                    let fam = spec.build(x, cfg.ladder.values(), cfg.seed, 0)?;
                    let fam = if mu == 1.0 { fam } else { fam.reindexed(mu) };
                    let batches = ladder
                        .iter()
                        .map(|&l| windowed_scaled_ft(u, &h, &fam, l, &ks, &cfg.osc))
                        .collect::<Result<Vec<_>, _>>()?;
                    fits_from_batches(&batches, n, fam.trivial_order(), cfg.thresholds, cfg.suffix_check, &spec.label())
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    Ok(xis
        .into_iter()
        .enumerate()
        .map(|(d, xi)| {
            let fits: Vec<FamilyFit> = per_family.iter().map(|f| f[d].clone()).collect();
            let (classification, decisive) = combine(&fits);
            Sample { point: PhasePoint { x: x.to_vec(), xi }, classification, decisive, fits }
        })
        .collect())
}

/// Run `est` on every lattice point and every direction of `dirs`.
pub fn estimate_wf(
    u: &Distribution,
    lattice: &[Vec<f64>],
    dirs: &DirectionSet,
    est: &Estimator,
    cfg: &WfConfig,
) -> Result<WavefrontEstimate, WfError> {
    let m = u.dim();
    if dirs.dim != m || lattice.iter().any(|x| x.len() != m) {
        return Err(WfError::Invalid(format!("lattice and directions must live in dimension {m}")));
    }
    let per_x = lattice
        .par_iter()
        .map(|x| evaluate_x(u, x, &dirs.directions, dirs, est, cfg, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WavefrontEstimate {
        label: String::new(),
        estimator: est.clone(),
        dirs: dirs.clone(),
        samples: per_x.into_iter().flatten().collect(),
        config_digest: config_digest(&(est, dirs, cfg)),
    })
}

pub fn estimate_wf_classical(
    u: &Distribution,
    lattice: &[Vec<f64>],
    dirs: &DirectionSet,
    cfg: &WfConfig,
) -> Result<WavefrontEstimate, WfError> {
    estimate_wf(u, lattice, dirs, &Estimator::Classical, cfg)
}

pub fn estimate_wf_scaling(
    u: &Distribution,
    lattice: &[Vec<f64>],
    dirs: &DirectionSet,
    suite: &[FamilySpec],
    cfg: &WfConfig,
) -> Result<WavefrontEstimate, WfError> {
    estimate_wf(u, lattice, dirs, &Estimator::ScalingFamilies { suite: suite.to_vec() }, cfg)
}

pub fn estimate_wf_singlefamily(
    u: &Distribution,
    lattice: &[Vec<f64>],
    dirs: &DirectionSet,
    g: BumpProfile,
    p_grid: &[f64],
    cfg: &WfConfig,
) -> Result<WavefrontEstimate, WfError> {
    if p_grid.is_empty() || p_grid.iter().any(|p| !(*p >= 1.0)) {
        return Err(WfError::Invalid("p grid must be nonempty with every p >= 1".into()));
    }
    estimate_wf(u, lattice, dirs, &Estimator::SingleFamily { g, p_grid: p_grid.to_vec() }, cfg)
}

/// Samples grouped by lattice point, keeping sample order.
fn by_x(samples: &[Sample]) -> Vec<(Vec<f64>, Vec<&Sample>)> {
    let mut out: Vec<(Vec<f64>, Vec<&Sample>)> = Vec::new();
    for s in samples {
        match out.iter_mut().find(|(x, _)| *x == s.point.x) {
            Some((_, v)) => v.push(s),
            None => out.push((s.point.x.clone(), vec![s])),
        }
    }
    out
}

/// A classification that changed between two evaluations of one phase point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub point: PhasePoint,
    pub expected: Classification,
    pub found: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConicityReport {
    pub multipliers: Vec<f64>,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ConicityReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Evaluate `(x, μξ)` for every sample and `μ` in `mus`, returning the new
/// samples and the comparison with `(x, ξ)`.
pub fn conic_copies(
    u: &Distribution,
    est: &WavefrontEstimate,
    cfg: &WfConfig,
    mus: &[f64],
) -> Result<(Vec<Sample>, ConicityReport), WfError> {
    let groups = by_x(&est.samples);
    let mut copies = Vec::new();
    let mut mismatches = Vec::new();
    for &mu in mus {
        let per_x = groups
            .par_iter()
            .map(|(x, ss)| {
                let xis: Vec<Vec<f64>> = ss.iter().map(|s| s.point.xi.clone()).collect();
                evaluate_x(u, x, &xis, &est.dirs, &est.estimator, cfg, mu)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for ((_, ss), new) in groups.iter().zip(per_x) {
            for (s, c) in ss.iter().zip(new) {
                if s.classification != c.classification {
                    mismatches.push(Mismatch { point: c.point.clone(), expected: s.classification, found: c.classification });
                }
                copies.push(c);
            }
        }
    }
    let report = ConicityReport { multipliers: mus.to_vec(), checked: copies.len(), mismatches };
    Ok((copies, report))
}

/// The estimate with `(x, μξ)`, `μ ∈ {1/2, 2}`, added for every sample.
pub fn with_conic_closure(
    u: &Distribution,
    est: &WavefrontEstimate,
    cfg: &WfConfig,
) -> Result<(WavefrontEstimate, ConicityReport), WfError> {
    let (copies, report) = conic_copies(u, est, cfg, &[0.5, 2.0])?;
    let mut out = est.clone();
    out.samples.extend(copies);
    Ok((out, report))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flip {
    pub point: PhasePoint,
    pub multiplier: String,
    pub from: Classification,
    pub to: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessReport {
    pub multipliers: Vec<String>,
    pub cap_shrink: f64,
    pub rechecked: usize,
    /// Regular → Singular.
    pub failures: Vec<Flip>,
    /// Regular → Indeterminate.
    pub warnings: Vec<Flip>,
}

impl RobustnessReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Re-run the Regular samples of `est` with windows `φ·h` (or `φ·χ`) and caps
/// shrunk by half, for each multiplier `φ`.
pub fn window_robustness_check(
    u: &Distribution,
    est: &WavefrontEstimate,
    multipliers: &[Multiplier],
    cfg: &WfConfig,
) -> Result<RobustnessReport, WfError> {
    let shrink = 0.5;
    let dirs = est.dirs.shrunk(shrink);
    let groups: Vec<(Vec<f64>, Vec<&Sample>)> = by_x(&est.samples)
        .into_iter()
        .map(|(x, ss)| (x, ss.into_iter().filter(|s| s.classification == Classification::Regular).collect::<Vec<_>>()))
        .filter(|(_, ss)| !ss.is_empty())
        .collect();
    let mut report = RobustnessReport {
        multipliers: multipliers.iter().map(|m| m.name()).collect(),
        cap_shrink: shrink,
        rechecked: 0,
        failures: Vec::new(),
        warnings: Vec::new(),
    };
    for m in multipliers {
        let cfg_m = WfConfig { multiplier: m.clone(), ..cfg.clone() };
        let per_x = groups
            .par_iter()
            .map(|(x, ss)| {
                let xis: Vec<Vec<f64>> = ss.iter().map(|s| s.point.xi.clone()).collect();
                evaluate_x(u, x, &xis, &dirs, &est.estimator, &cfg_m, 1.0)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for new in per_x.into_iter().flatten() {
            report.rechecked += 1;
            let flip = Flip {
                point: new.point.clone(),
                multiplier: m.name(),
                from: Classification::Regular,
                to: new.classification,
            };
            match new.classification {
                Classification::Singular => report.failures.push(flip),
                Classification::Indeterminate => report.warnings.push(flip),
                Classification::Regular => {}
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointAgreement {
    pub point: PhasePoint,
    pub classes: Vec<Classification>,
    pub disagree: bool,
    /// Some estimator is Indeterminate here or at a neighbouring sample.
    pub indeterminate_adjacent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub estimators: Vec<String>,
    pub points: Vec<PointAgreement>,
    /// Points where at least two estimators reached a verdict.
    pub decided: usize,
    pub disagreements: usize,
    pub disagreement_rate: f64,
    /// Disagreements without an Indeterminate verdict nearby.
    pub isolated_disagreements: usize,
}

/// Per-point comparison of estimates over the same phase points.
pub fn cross_validate(estimates: &[&WavefrontEstimate]) -> Result<AgreementReport, WfError> {
    let Some(first) = estimates.first() else {
        return Err(WfError::Invalid("nothing to compare".into()));
    };
    let pts: Vec<&PhasePoint> = first.samples.iter().map(|s| &s.point).collect();
    let mut table: Vec<Vec<Classification>> = vec![Vec::with_capacity(estimates.len()); pts.len()];
    for e in estimates {
        if e.samples.len() != pts.len() {
            return Err(WfError::Invalid("estimates sample different lattices".into()));
        }
        for (i, p) in pts.iter().enumerate() {
            // same lattice builder ⇒ same order; fall back to a search otherwise
            let c = if e.samples[i].point == **p {
                e.samples[i].classification
            } else {
                e.classification_at(p).ok_or_else(|| WfError::Invalid("estimates sample different lattices".into()))?
            };
            table[i].push(c);
        }
    }
    let spacing = min_spacing(&first.lattice());
    let near = |a: &PhasePoint, b: &PhasePoint| {
        (a.x == b.x) || (a.xi == b.xi && dist(&a.x, &b.x) <= spacing * (1.0 + 1e-9))
    };
    let indeterminate: Vec<bool> = table.iter().map(|c| c.contains(&Classification::Indeterminate)).collect();
    let mut points = Vec::with_capacity(pts.len());
    let (mut decided, mut disagreements, mut isolated) = (0, 0, 0);
    for (i, p) in pts.iter().enumerate() {
        let d: Vec<Classification> =
            table[i].iter().copied().filter(|c| *c != Classification::Indeterminate).collect();
        let disagree = d.windows(2).any(|w| w[0] != w[1]);
        let adjacent = indeterminate[i] || (0..pts.len()).any(|j| j != i && indeterminate[j] && near(p, pts[j]));
        if d.len() >= 2 {
            decided += 1;
        }
        if disagree {
            disagreements += 1;
            if !adjacent {
                isolated += 1;
            }
        }
        points.push(PointAgreement { point: (*p).clone(), classes: table[i].clone(), disagree, indeterminate_adjacent: adjacent });
    }
    Ok(AgreementReport {
        estimators: estimates.iter().map(|e| e.estimator.name().to_string()).collect(),
        points,
        decided,
        disagreements,
        disagreement_rate: if decided == 0 { 0.0 } else { disagreements as f64 / decided as f64 },
        isolated_disagreements: isolated,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn min_spacing(pts: &[Vec<f64>]) -> f64 {
    let mut m = f64::INFINITY;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            let d = dist(a, b);
            if d > 0.0 {
                m = m.min(d);
            }
        }
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub truth_singular: usize,
    pub false_regular: Vec<PhasePoint>,
    pub truth_regular: usize,
    pub indeterminate_on_regular: usize,
    pub singular_on_regular: usize,
    pub indeterminate_rate: f64,
}

impl SoundnessReport {
    /// No false Regular and at most 10% Indeterminate on regular points.
    pub fn pass(&self) -> bool {
        self.false_regular.is_empty() && self.indeterminate_rate <= 0.10
    }
}

/// Compare an estimate with a known wavefront set.
pub fn soundness(est: &WavefrontEstimate, truth: &WfDescriptor) -> SoundnessReport {
    let mut r = SoundnessReport {
        truth_singular: 0,
        false_regular: Vec::new(),
        truth_regular: 0,
        indeterminate_on_regular: 0,
        singular_on_regular: 0,
        indeterminate_rate: 0.0,
    };
    for s in &est.samples {
        if truth.contains(&s.point.x, &s.point.xi) {
            r.truth_singular += 1;
            if s.classification == Classification::Regular {
                r.false_regular.push(s.point.clone());
            }
        } else {
            r.truth_regular += 1;
            match s.classification {
                Classification::Indeterminate => r.indeterminate_on_regular += 1,
                Classification::Singular => r.singular_on_regular += 1,
                Classification::Regular => {}
            }
        }
    }
    if r.truth_regular > 0 {
        r.indeterminate_rate = r.indeterminate_on_regular as f64 / r.truth_regular as f64;
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl CovarianceReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Classify `u∘τ_{-x}` at the origin for every lattice point `x` of `est` and
/// compare with the classification of `u` at `x`.
pub fn check_translation_covariance(
    u: &Distribution,
    est: &WavefrontEstimate,
    cfg: &WfConfig,
) -> Result<CovarianceReport, WfError> {
    let groups = by_x(&est.samples);
    let per_x = groups
        .par_iter()
        .map(|(x, ss)| {
            let v = u.translated(&x.iter().map(|c| -c).collect::<Vec<_>>());
            let xis: Vec<Vec<f64>> = ss.iter().map(|s| s.point.xi.clone()).collect();
            evaluate_x(&v, &vec![0.0; x.len()], &xis, &est.dirs, &est.estimator, cfg, 1.0)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut report = CovarianceReport { checked: 0, mismatches: Vec::new() };
    for ((_, ss), new) in groups.iter().zip(per_x) {
        for (s, c) in ss.iter().zip(new) {
            report.checked += 1;
            if s.classification != c.classification {
                report.mismatches.push(Mismatch { point: s.point.clone(), expected: s.classification, found: c.classification });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReflectionReport {
    pub pairs: usize,
    /// `(x, ξ)` and `(x, -ξ)` classified differently, listed once per pair.
    pub asymmetric: Vec<Mismatch>,
    /// Samples whose mirror direction is not in the estimate.
    pub missing: usize,
}

/// Compare `(x, ξ)` with `(x, -ξ)` over the estimate.
pub fn check_reflection(est: &WavefrontEstimate) -> ReflectionReport {
    let mut r = ReflectionReport { pairs: 0, asymmetric: Vec::new(), missing: 0 };
    for (i, s) in est.samples.iter().enumerate() {
        let mirror = s.point.mirrored();
        match est.samples.iter().position(|t| t.point == mirror) {
            None => r.missing += 1,
            Some(j) if j > i => {
                r.pairs += 1;
                let c = est.samples[j].classification;
                if c != s.classification {
                    r.asymmetric.push(Mismatch { point: s.point.clone(), expected: s.classification, found: c });
                }
            }
            _ => {}
        }
    }
    r
}

/// Singular directions whose two neighbours on each side (by angle) are
/// Regular. Only meaningful in two dimensions with at least five directions;
/// reported, never corrected.
pub fn isolated_singular_directions(est: &WavefrontEstimate) -> Vec<PhasePoint> {
    let mut out = Vec::new();
    if est.dirs.dim != 2 {
        return out;
    }
    for (_, mut ss) in by_x(&est.samples) {
        if ss.len() < 5 {
            continue;
        }
        let angle = |s: &Sample| s.point.xi[1].atan2(s.point.xi[0]);
        ss.sort_by(|a, b| angle(a).total_cmp(&angle(b)));
        let n = ss.len();
        for j in 0..n {
            if ss[j].classification != Classification::Singular {
                continue;
            }
            let regular = |o: usize| ss[o % n].classification == Classification::Regular;
            if regular(j + 1) && regular(j + 2) && regular(j + n - 1) && regular(j + n - 2) {
                out.push(ss[j].point.clone());
            }
        }
    }
    out
}

/// `centers ± spacing·{-(per_axis-1)/2, …, (per_axis-1)/2}` on every axis, deduplicated, sorted.
pub fn lattice_around(centers: &[Vec<f64>], spacing: f64, per_axis: usize) -> Vec<Vec<f64>> {
    let half = (per_axis.max(1) - 1) as f64 / 2.0;
    let offsets: Vec<f64> = (0..per_axis.max(1)).map(|i| (i as f64 - half) * spacing).collect();
    let mut out: Vec<Vec<f64>> = Vec::new();
    for c in centers {
        let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
        for &ca in c {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    offsets.iter().map(move |o| {
                        let mut q = p.clone();
                        // rounding keeps lattices from different centres aligned
                        q.push(((ca + o) * 1e12).round() / 1e12);
                        q
                    })
                })
                .collect();
        }
        out.extend(pts);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    out.dedup();
    out
}

/// Feature points (poles, jumps, support points, a foot point of a line) of a
/// catalog distribution; the origin when there are none.
pub fn feature_centers(u: &Distribution) -> Vec<Vec<f64>> {
    let pts = feature_points(u);
    if pts.is_empty() {
        vec![vec![0.0; u.dim()]]
    } else {
        pts
    }
}

fn feature_points(u: &Distribution) -> Vec<Vec<f64>> {
    match u {
        Distribution::DeltaAt { x0 }
        | Distribution::DeltaDerivative { x0, .. }
        | Distribution::Heaviside { x0 }
        | Distribution::PrincipalValue { x0 }
        | Distribution::BoundaryValue { x0, .. } => vec![vec![*x0]],
        Distribution::Ridge { normal, offset, .. } => {
            let nn: f64 = normal.iter().map(|a| a * a).sum();
            vec![normal.iter().map(|a| a * offset / nn).collect()]
        }
        Distribution::Sum { terms } => terms.iter().flat_map(|(_, d)| feature_points(d)).collect(),
        _ => Vec::new(),
    }
}

/// Feature points ± 9 points per axis at spacing 0.5.
pub fn default_lattice(u: &Distribution) -> Vec<Vec<f64>> {
    lattice_around(&feature_centers(u), 0.5, 9)
}

/// Two directions in 1D, eight in 2D; caps of radius 0.1 with `1 + 2·dim` samples.
pub fn default_directions(dim: usize) -> Result<DirectionSet, WfError> {
    let n = if dim == 1 { 2 } else { 8 };
    Ok(make_direction_set(dim, n, 0.1, 1 + 2 * dim)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decay::DecayThresholds;

    fn fit(c: Classification, slope: f64) -> FamilyFit {
        let lambdas = crate::grid::geometric(0.25, 0.5, 6);
        let mags: Vec<f64> = lambdas.iter().map(|l| l.powf(slope)).collect();
        let mut f = fit_decay(&lambdas, &mags, DecayThresholds::default()).unwrap();
        f.classification = c;
        FamilyFit { label: String::new(), fit: f, errors: vec![0.0; 6] }
    }

    #[test]
    fn singular_wins_and_regular_needs_all() {
        use Classification::*;
        assert_eq!(combine(&[fit(Regular, 7.0), fit(Singular, 0.0), fit(Indeterminate, 3.0)]), (Singular, 1));
        assert_eq!(combine(&[fit(Regular, 7.0), fit(Indeterminate, 3.0)]), (Indeterminate, 1));
        assert_eq!(combine(&[fit(Regular, 9.0), fit(Regular, 7.0)]), (Regular, 1));
    }

    #[test]
    fn lattice_shapes() {
        let l = lattice_around(&[vec![0.0]], 0.5, 9);
        assert_eq!(l.len(), 9);
        assert_eq!(l[0], vec![-2.0]);
        assert_eq!(l[8], vec![2.0]);
        assert_eq!(lattice_around(&[vec![0.0, 0.0]], 0.5, 9).len(), 81);
        // overlapping centres deduplicate
        assert_eq!(lattice_around(&[vec![0.0], vec![0.5]], 0.5, 9).len(), 10);
    }

    #[test]
    fn phase_point_needs_nonzero_direction() {
        assert!(PhasePoint::new(vec![0.0], vec![0.0]).is_err());
        assert!(PhasePoint::new(vec![0.0], vec![1.0, 0.0]).is_err());
        assert!(PhasePoint::new(vec![0.0], vec![-2.0]).is_ok());
    }
}
