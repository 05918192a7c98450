//! Asymptotic correlation spectra of n-point kernels (n ≤ 2), the momentum
//! cone predicates of relativistic field theory, and the structural checks
//! relating the spectrum to the wavefront set of the kernel.
//!
//! Phase points are tuples `(x_1, …, x_n; k_1, …, k_n)` with `x_j, k_j ∈ ℝ^d`.
//! Directions live in `ℝ^{dn}`, flattened slot by slot.

use crate::decay::Classification;
use crate::distributions::TranslationKernel;
use crate::grid::{make_direction_set, DirectionSet};
use crate::oscillatory::windowed_multi_ft;
use crate::wavefront::{
    combine, config_digest, estimate_wf, fits_from_batches, window, Estimator, FamilyFit, FamilySpec, WavefrontEstimate,
    WfConfig, WfError,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AcsError {
    #[error(transparent)]
    Estimate(#[from] WfError),
    #[error("order {0} is not supported (n must be 1 or 2)")]
    UnsupportedOrder(usize),
    #[error("cone is not salient: both {0:?} and its negative lie in it")]
    NotSalient(Vec<f64>),
    #[error("mirror sample of {0:?} is missing from the lattice")]
    MissingMirrorSample(MultiPhasePoint),
    #[error("{0}")]
    Invalid(String),
}

const MATCH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiPhasePoint {
    pub x: Vec<Vec<f64>>,
    pub k: Vec<Vec<f64>>,
}

impl MultiPhasePoint {
    pub fn new(x: Vec<Vec<f64>>, k: Vec<Vec<f64>>) -> Result<Self, AcsError> {
        if x.len() != k.len() || x.is_empty() {
            return Err(AcsError::Invalid("x and k tuples need the same positive length".into()));
        }
        let d = x[0].len();
        if x.iter().chain(&k).any(|v| v.len() != d) {
            return Err(AcsError::Invalid("all tuple entries need the same dimension".into()));
        }
        if k.iter().flatten().all(|v| *v == 0.0) {
            return Err(AcsError::Invalid("k tuple must not vanish".into()));
        }
        Ok(MultiPhasePoint { x, k })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn flat_x(&self) -> Vec<f64> {
        self.x.concat()
    }

    pub fn flat_k(&self) -> Vec<f64> {
        self.k.concat()
    }

    /// `(x_n, …, x_1; -k_n, …, -k_1)`.
    pub fn mirrored(&self) -> MultiPhasePoint {
        MultiPhasePoint {
            x: self.x.iter().rev().cloned().collect(),
            k: self.k.iter().rev().map(|v| v.iter().map(|c| -c).collect()).collect(),
        }
    }

    fn close_to(&self, o: &MultiPhasePoint) -> bool {
        let near = |a: &[Vec<f64>], b: &[Vec<f64>]| {
            a.len() == b.len()
                && a.iter().zip(b).all(|(u, v)| u.iter().zip(v).all(|(p, q)| (p - q).abs() <= MATCH_TOL * (1.0 + p.abs())))
        };
        near(&self.x, &o.x) && near(&self.k, &o.k)
    }
}

fn split(flat: &[f64], d: usize) -> Vec<Vec<f64>> {
    flat.chunks(d).map(|c| c.to_vec()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcsSample {
    pub point: MultiPhasePoint,
    pub classification: Classification,
    pub decisive: usize,
    pub fits: Vec<FamilyFit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AcsEstimate {
    pub n: usize,
    pub d: usize,
    pub functional: String,
    pub hermitean: bool,
    pub local: bool,
    pub dirs: DirectionSet,
    pub suite: Vec<FamilySpec>,
    pub samples: Vec<AcsSample>,
    pub config_digest: String,
}

impl AcsEstimate {
    pub fn find(&self, p: &MultiPhasePoint) -> Option<&AcsSample> {
        self.samples.iter().find(|s| s.point.close_to(p))
    }

    pub fn count(&self, c: Classification) -> usize {
        self.samples.iter().filter(|s| s.classification == c).count()
    }
}

/// Directions in `ℝ^{dn}`: eight equi-angular ones when `dn = 2`; otherwise
/// `±e_i` and, for `n = 2`, the balanced tuples `±(v, -v)/|·|` for `v` among
/// the axes and the diagonals of `ℝ^d`. Both sets are closed under the mirror
/// map `k ↦ (-k_n, …, -k_1)`.
pub fn acs_directions(d: usize, n: usize) -> Result<DirectionSet, AcsError> {
    let m = d * n;
    if m == 2 {
        return Ok(make_direction_set(2, 8, 0.1, 5).map_err(WfError::from)?);
    }
    if m == 1 {
        return Ok(make_direction_set(1, 2, 0.1, 3).map_err(WfError::from)?);
    }
    let mut dirs: Vec<Vec<f64>> = Vec::new();
    for i in 0..m {
        for s in [1.0, -1.0] {
            let mut v = vec![0.0; m];
            v[i] = s;
            dirs.push(v);
        }
    }
    if n == 2 {
        let mut base: Vec<Vec<f64>> = (0..d).map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        if d == 2 {
            base.push(vec![1.0, 1.0]);
            base.push(vec![1.0, -1.0]);
        }
        for v in base {
            for s in [1.0, -1.0] {
                let mut w: Vec<f64> = v.iter().map(|c| s * c).collect();
                w.extend(v.iter().map(|c| -s * c));
                dirs.push(w);
            }
        }
    }
    Ok(DirectionSet::from_vectors(m, dirs, 0.1, 1 + 2 * m).map_err(WfError::from)?)
}

/// `x` tuples plus their reversals when missing.
pub fn with_mirrors(tuples: &[Vec<Vec<f64>>]) -> Vec<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<Vec<f64>>> = tuples.to_vec();
    for t in tuples {
        let r: Vec<Vec<f64>> = t.iter().rev().cloned().collect();
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// Classify every direction of `dirs` at one `x` tuple.
fn evaluate_tuple(
    phi: &TranslationKernel,
    xt: &[Vec<f64>],
    kdirs: &[Vec<f64>],
    dirs: &DirectionSet,
    suite: &[FamilySpec],
    cfg: &WfConfig,
    mu: f64,
) -> Result<Vec<AcsSample>, AcsError> {
    if kdirs.is_empty() {
        return Ok(Vec::new());
    }
    let ladder = if mu == 1.0 { cfg.ladder.values().to_vec() } else { cfg.ladder.scaled(mu) };
    let kdirs: Vec<Vec<f64>> = kdirs.iter().map(|k| k.iter().map(|v| v * mu).collect()).collect();
    let ks: Vec<Vec<f64>> = kdirs.iter().flat_map(|k| dirs.cap(k)).collect();
    let h = window(&vec![0.0; phi.dim()], cfg)?;
    let per_family = suite
        .iter()
        .map(|spec| {
            let fams = xt
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let f = spec.build(x, cfg.ladder.values(), cfg.seed, j as u64)?;
                    Ok(if mu == 1.0 { f } else { f.reindexed(mu) })
                })
                .collect::<Result<Vec<_>, WfError>>()?;
            let order: f64 = fams.iter().map(|f| f.trivial_order()).sum();
            let batches = ladder
                .iter()
                .map(|&l| windowed_multi_ft(phi, &h, &fams, l, &ks, &cfg.osc))
                .collect::<Result<Vec<_>, _>>()
                .map_err(WfError::from)?;
            Ok(fits_from_batches(&batches, kdirs.len(), order, cfg.thresholds, cfg.suffix_check, &spec.label())?)
        })
        .collect::<Result<Vec<_>, AcsError>>()?;
    Ok(kdirs
        .into_iter()
        .enumerate()
        .map(|(i, k)| {
            let fits: Vec<FamilyFit> = per_family.iter().map(|f| f[i].clone()).collect();
            let (classification, decisive) = combine(&fits);
            AcsSample { point: MultiPhasePoint { x: xt.to_vec(), k: split(&k, phi.d) }, classification, decisive, fits }
        })
        .collect())
}

/// Sample `ACS^n(φ)` at every `x` tuple and every direction of `dirs`.
pub fn estimate_acs(
    phi: &TranslationKernel,
    x_tuples: &[Vec<Vec<f64>>],
    dirs: &DirectionSet,
    suite: &[FamilySpec],
    cfg: &WfConfig,
) -> Result<AcsEstimate, AcsError> {
    if phi.n == 0 || phi.n > 2 {
        return Err(AcsError::UnsupportedOrder(phi.n));
    }
    if dirs.dim != phi.dim() {
        return Err(AcsError::Invalid(format!("directions must live in dimension {}", phi.dim())));
    }
    if x_tuples.iter().any(|t| t.len() != phi.n || t.iter().any(|x| x.len() != phi.d)) {
        return Err(AcsError::Invalid(format!("x tuples must hold {} points of dimension {}", phi.n, phi.d)));
    }
    let per = x_tuples
        .par_iter()
        .map(|xt| evaluate_tuple(phi, xt, &dirs.directions, dirs, suite, cfg, 1.0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AcsEstimate {
        n: phi.n,
        d: phi.d,
        functional: phi.label.clone(),
        hermitean: phi.hermitean,
        local: phi.local,
        dirs: dirs.clone(),
        suite: suite.to_vec(),
        samples: per.into_iter().flatten().collect(),
        config_digest: config_digest(&(&phi.label, dirs, suite, cfg)),
    })
}

fn by_tuple(samples: &[AcsSample]) -> Vec<(Vec<Vec<f64>>, Vec<&AcsSample>)> {
    let mut out: Vec<(Vec<Vec<f64>>, Vec<&AcsSample>)> = Vec::new();
    for s in samples {
        match out.iter_mut().find(|(x, _)| *x == s.point.x) {
            Some((_, v)) => v.push(s),
            None => out.push((s.point.x.clone(), vec![s])),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcsMismatch {
    pub point: MultiPhasePoint,
    pub expected: Classification,
    pub found: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcsComparison {
    pub checked: usize,
    pub mismatches: Vec<AcsMismatch>,
}

impl AcsComparison {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-evaluate at `(𝐱, μ𝐤)` for `μ ∈ mus` (ladder `μλ`, families reindexed by `μ`)
/// and compare with `(𝐱, 𝐤)`.
pub fn check_acs_conicity(
    phi: &TranslationKernel,
    est: &AcsEstimate,
    cfg: &WfConfig,
    mus: &[f64],
) -> Result<AcsComparison, AcsError> {
    let groups = by_tuple(&est.samples);
    let mut out = AcsComparison { checked: 0, mismatches: Vec::new() };
    for &mu in mus {
        let per = groups
            .par_iter()
            .map(|(xt, ss)| {
                let ks: Vec<Vec<f64>> = ss.iter().map(|s| s.point.flat_k()).collect();
                evaluate_tuple(phi, xt, &ks, &est.dirs, &est.suite, cfg, mu)
            })
            .collect::<Result<Vec<_>, _>>()?;
        for ((_, ss), new) in groups.iter().zip(per) {
            for (s, c) in ss.iter().zip(new) {
                out.checked += 1;
                if s.classification != c.classification {
                    out.mismatches.push(AcsMismatch { point: c.point, expected: s.classification, found: c.classification });
                }
            }
        }
    }
    Ok(out)
}

/// Minkowski cone data: signature `(+, -, …, -)` on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeSpec {
    pub d: usize,
    pub n: usize,
}

/// `k` within `tol` of the closed forward light cone: `k⁰ ≥ |k_spatial| - tol`.
pub fn in_forward_cone(k: &[f64], tol: f64) -> bool {
    let spatial = k[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    k[0] >= spatial - tol
}

/// Vanishing total momentum and every suffix sum `k_j + … + k_n`, `j ≥ 2`,
/// in the closed forward cone, all up to `tol`.
pub fn cone_membership(k_tuple: &[Vec<f64>], cone: &ConeSpec, tol: f64) -> bool {
    if k_tuple.len() != cone.n || k_tuple.iter().any(|k| k.len() != cone.d) {
        return false;
    }
    let mut suffix = vec![0.0; cone.d];
    for (j, k) in k_tuple.iter().enumerate().rev() {
        for (s, v) in suffix.iter_mut().zip(k) {
            *s += v;
        }
        if j >= 1 && !in_forward_cone(&suffix, tol) {
            return false;
        }
    }
    suffix.iter().map(|v| v * v).sum::<f64>().sqrt() <= tol
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeReport {
    pub tol: f64,
    pub singular_samples: usize,
    pub violations: Vec<MultiPhasePoint>,
}

impl ConeReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every Singular sample whose (unit) `k` tuple is outside the cone by more than `tol`.
pub fn check_cone_bound(est: &AcsEstimate, cone: &ConeSpec, tol: f64) -> ConeReport {
    let mut r = ConeReport { tol, singular_samples: 0, violations: Vec::new() };
    for s in est.samples.iter().filter(|s| s.classification == Classification::Singular) {
        r.singular_samples += 1;
        let norm = s.point.flat_k().iter().map(|v| v * v).sum::<f64>().sqrt();
        let unit: Vec<Vec<f64>> = s.point.k.iter().map(|k| k.iter().map(|v| v / norm).collect()).collect();
        if !cone_membership(&unit, cone, tol) {
            r.violations.push(s.point.clone());
        }
    }
    r
}

/// All pairs spacelike: `|Δx⁰| < |Δx_spatial|`.
pub fn properly_acausal(x_tuple: &[Vec<f64>]) -> bool {
    if x_tuple.len() < 2 {
        return false;
    }
    for i in 0..x_tuple.len() {
        for j in i + 1..x_tuple.len() {
            let dx: Vec<f64> = x_tuple[i].iter().zip(&x_tuple[j]).map(|(a, b)| a - b).collect();
            let spatial = dx[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(dx[0].abs() < spatial) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SalienceReport {
    pub salient: bool,
    /// The vanishing of the spectrum slice is predicted at every tuple listed here.
    pub predicted_empty: Vec<Vec<Vec<f64>>>,
    /// Singular samples at tuples where the slice is predicted empty.
    pub findings: Vec<MultiPhasePoint>,
}

impl SalienceReport {
    pub fn pass(&self) -> bool {
        self.findings.is_empty()
    }
}

/// Check `W ∩ -W = ∅` on the sampled directions; then at properly acausal
/// tuples of a local hermitean functional whose singular samples lie in `W`,
/// predict an empty slice and list any Singular sample there.
pub fn salient_cone_filter(
    est: &AcsEstimate,
    w: &dyn Fn(&[Vec<f64>]) -> bool,
    locality: bool,
) -> Result<SalienceReport, AcsError> {
    for k in &est.dirs.directions {
        let t = split(k, est.d);
        let neg: Vec<Vec<f64>> = t.iter().map(|v| v.iter().map(|c| -c).collect()).collect();
        if w(&t) && w(&neg) {
            return Err(AcsError::NotSalient(k.clone()));
        }
    }
    let mut r = SalienceReport { salient: true, predicted_empty: Vec::new(), findings: Vec::new() };
    if !(locality && est.hermitean) {
        return Ok(r);
    }
    let inside = est.samples.iter().filter(|s| s.classification == Classification::Singular).all(|s| w(&s.point.k));
    if !inside {
        return Ok(r);
    }
    for (xt, ss) in by_tuple(&est.samples) {
        if properly_acausal(&xt) {
            r.predicted_empty.push(xt.clone());
            r.findings.extend(ss.iter().filter(|s| s.classification == Classification::Singular).map(|s| s.point.clone()));
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermiteanReport {
    pub applicable: bool,
    pub pairs: usize,
    pub asymmetric: Vec<AcsMismatch>,
}

impl HermiteanReport {
    pub fn pass(&self) -> bool {
        self.asymmetric.is_empty()
    }
}

/// Compare each sample with its mirror `(x̄; -k̄)`. Non-hermitean functionals are
/// reported as not applicable.
pub fn check_hermitean_symmetry(est: &AcsEstimate) -> Result<HermiteanReport, AcsError> {
    let mut r = HermiteanReport { applicable: est.hermitean, pairs: 0, asymmetric: Vec::new() };
    if !est.hermitean {
        return Ok(r);
    }
    for s in &est.samples {
        let m = s.point.mirrored();
        let t = est.find(&m).ok_or_else(|| AcsError::MissingMirrorSample(s.point.clone()))?;
        r.pairs += 1;
        if t.classification != s.classification {
            r.asymmetric.push(AcsMismatch { point: s.point.clone(), expected: s.classification, found: t.classification });
        }
    }
    Ok(r)
}

/// `φ` at `𝐱 + (s, …, s)` against `φ∘τ_s` (every slot translated by `s`) at `𝐱`.
pub fn check_translation_covariance(
    phi: &TranslationKernel,
    est: &AcsEstimate,
    s: &[f64],
    cfg: &WfConfig,
) -> Result<AcsComparison, AcsError> {
    if s.len() != phi.d {
        return Err(AcsError::Invalid("shift has the wrong dimension".into()));
    }
    let shifted = phi.shifted(&vec![s.to_vec(); phi.n]);
    let groups = by_tuple(&est.samples);
    let per = groups
        .par_iter()
        .map(|(xt, ss)| {
            let ks: Vec<Vec<f64>> = ss.iter().map(|p| p.point.flat_k()).collect();
            let moved: Vec<Vec<f64>> = xt.iter().map(|x| x.iter().zip(s).map(|(a, b)| a + b).collect()).collect();
            let a = evaluate_tuple(phi, &moved, &ks, &est.dirs, &est.suite, cfg, 1.0)?;
            let b = evaluate_tuple(&shifted, xt, &ks, &est.dirs, &est.suite, cfg, 1.0)?;
            Ok::<_, AcsError>((a, b))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = AcsComparison { checked: 0, mismatches: Vec::new() };
    for (a, b) in per {
        for (p, q) in a.into_iter().zip(b) {
            out.checked += 1;
            if p.classification != q.classification {
                out.mismatches.push(AcsMismatch { point: q.point, expected: p.classification, found: q.classification });
            }
        }
    }
    Ok(out)
}

/// Scaling-family wavefront estimate of the kernel as a distribution on `ℝ^{dn}`,
/// sampled at the flattened tuples with the ACS directions. Duplicate tuples are
/// sampled once.
pub fn kernel_wavefront(
    phi: &TranslationKernel,
    x_tuples: &[Vec<Vec<f64>>],
    dirs: &DirectionSet,
    suite: &[FamilySpec],
    cfg: &WfConfig,
) -> Result<WavefrontEstimate, AcsError> {
    let mut lattice: Vec<Vec<f64>> = Vec::new();
    for t in x_tuples {
        let p = t.concat();
        if !lattice.contains(&p) {
            lattice.push(p);
        }
    }
    let wdirs = DirectionSet { dim: phi.d * phi.n, ..dirs.clone() };
    let est = Estimator::ScalingFamilies { suite: suite.to_vec() };
    Ok(estimate_wf(&phi.as_distribution(), &lattice, &wdirs, &est, cfg)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub wf_singular: usize,
    pub unmatched: usize,
    pub violations: Vec<MultiPhasePoint>,
}

impl InclusionReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every wf-Singular sample of the kernel (as a distribution on `ℝ^{dn}`) must
/// be acs-Singular or acs-Indeterminate.
pub fn check_wf_acs_inclusion(wf: &WavefrontEstimate, acs: &AcsEstimate) -> InclusionReport {
    let mut r = InclusionReport { wf_singular: 0, unmatched: 0, violations: Vec::new() };
    for s in wf.samples.iter().filter(|s| s.classification == Classification::Singular) {
        r.wf_singular += 1;
        let p = MultiPhasePoint { x: split(&s.point.x, acs.d), k: split(&s.point.xi, acs.d) };
        match acs.find(&p) {
            None => r.unmatched += 1,
            Some(a) if a.classification == Classification::Regular => r.violations.push(p),
            _ => {}
        }
    }
    r
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagonalReport {
    pub point: Vec<f64>,
    pub directions: usize,
    pub singular: usize,
    pub indeterminate: usize,
    /// Strongest verdict over the sampled directions.
    pub status: Classification,
}

/// Verdicts of a kernel wavefront estimate at the diagonal point `(x, x)`.
pub fn check_diagonal_singularity(wf: &WavefrontEstimate, x: &[f64]) -> Result<DiagonalReport, AcsError> {
    let p: Vec<f64> = [x, x].concat();
    let at: Vec<Classification> =
        wf.samples.iter().filter(|s| s.point.x == p).map(|s| s.classification).collect();
    if at.is_empty() {
        return Err(AcsError::Invalid(format!("estimate has no samples at the diagonal point {p:?}")));
    }
    let singular = at.iter().filter(|c| **c == Classification::Singular).count();
    let indeterminate = at.iter().filter(|c| **c == Classification::Indeterminate).count();
    let status = if singular > 0 {
        Classification::Singular
    } else if indeterminate > 0 {
        Classification::Indeterminate
    } else {
        Classification::Regular
    };
    Ok(DiagonalReport { point: p, directions: at.len(), singular, indeterminate, status })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubadditivityReport {
    pub checked: usize,
    pub violations: Vec<MultiPhasePoint>,
}

impl SubadditivityReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The estimate of `φ + φ'` must not be Singular where both summands are
/// Regular; Indeterminate verdicts are skipped.
pub fn check_subadditivity(a: &AcsEstimate, b: &AcsEstimate, sum: &AcsEstimate) -> SubadditivityReport {
    let mut r = SubadditivityReport { checked: 0, violations: Vec::new() };
    for s in &sum.samples {
        let (Some(x), Some(y)) = (a.find(&s.point), b.find(&s.point)) else { continue };
        if [s.classification, x.classification, y.classification].contains(&Classification::Indeterminate) {
            continue;
        }
        r.checked += 1;
        if s.classification == Classification::Singular
            && x.classification == Classification::Regular
            && y.classification == Classification::Regular
        {
            r.violations.push(s.point.clone());
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_examples() {
        let c = ConeSpec { d: 2, n: 2 };
        assert!(cone_membership(&[vec![-1.0, 0.0], vec![1.0, 0.0]], &c, 1e-12));
        assert!(!cone_membership(&[vec![1.0, 0.0], vec![1.0, 0.0]], &c, 1e-12));
        assert!(!cone_membership(&[vec![0.0, 1.0], vec![0.0, -1.0]], &c, 1e-12));
    }

    #[test]
    fn acausality_examples() {
        assert!(properly_acausal(&[vec![0.0, 0.0], vec![0.0, 5.0]]));
        assert!(!properly_acausal(&[vec![0.0, 0.0], vec![5.0, 0.0]]));
        assert!(!properly_acausal(&[vec![0.0, 0.0], vec![5.0, 5.0]]));
    }

    #[test]
    fn direction_sets_are_mirror_closed() {
        for (d, n) in [(1, 2), (2, 2), (2, 1)] {
            let dirs = acs_directions(d, n).unwrap();
            for k in &dirs.directions {
                let t = split(k, d);
                let m: Vec<f64> = t.iter().rev().flat_map(|v| v.iter().map(|c| -c)).collect();
                assert!(
                    dirs.directions.iter().any(|o| o.iter().zip(&m).all(|(a, b)| (a - b).abs() < 1e-12)),
                    "d={d} n={n} {k:?}"
                );
            }
        }
    }

    #[test]
    fn mirror_reverses_and_negates() {
        let p = MultiPhasePoint::new(vec![vec![0.0], vec![1.0]], vec![vec![2.0], vec![-3.0]]).unwrap();
        let m = p.mirrored();
        assert_eq!(m.x, vec![vec![1.0], vec![0.0]]);
        assert_eq!(m.k, vec![vec![3.0], vec![-2.0]]);
        assert_eq!(m.mirrored(), p);
    }
}
