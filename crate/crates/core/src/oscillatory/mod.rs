//! Windowed, scaled oscillatory integrals
//! `I(λ, k) = ∫ e^{-i k·y/λ} h(y) ⟨u, τ_y f_λ⟩ dy` and the classical
//! localized transform `u(e_{k/λ} χ)`.
//!
//! Two routes compute `I`. The grid route samples `G(y) = h(y)⟨u, τ_y f_λ⟩`
//! once and reads every target frequency off one zero-padded FFT. The
//! convolution route swaps the integrals, `I = ⟨u, (e_ω h) * f_λ⟩`, and pairs
//! once per target; it needs no y-grid and takes over when the Nyquist grid
//! would be too large.

mod fft;

pub use fft::PaddedSpectrum;

use crate::distributions::{kernel_pair_n, pair, Distribution, PairingError, TranslationKernel};
use crate::func::{Convolved1D, Factor, Modulated1D};
use crate::grid::{Grid, GridError, TestingFamily, Window};
use crate::testfn::{Term, TestFunction};
use crate::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::f64::consts::PI;
use thiserror::Error;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
/// Relative size of floating-point roundoff in a sum of `|terms|`.
const ROUNDOFF: f64 = 1e-14;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OscError {
    #[error("Nyquist grid needs {needed} points, limit is {limit}")]
    NyquistUnsatisfiable { needed: f64, limit: usize },
    #[error(transparent)]
    Pairing(#[from] PairingError),
    #[error(transparent)]
    Grid(#[from] GridError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralRecord {
    pub lambda: f64,
    pub k: Vec<f64>,
    pub value: C64,
    pub quadrature_error: f64,
}

impl IntegralRecord {
    fn zero(lambda: f64, k: &[f64]) -> Self {
        IntegralRecord { lambda, k: k.to_vec(), value: ZERO, quadrature_error: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Grid route when small enough, else the convolution route.
    Auto,
    Dft,
    Direct,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscOptions {
    /// Oversampling of the fastest target phase.
    pub q: f64,
    /// FFT length relative to the sampled extent, per axis.
    pub padding: usize,
    pub max_grid_points: usize,
    /// Largest grid `Auto` hands to the grid route.
    pub auto_dft_limit: usize,
    pub strategy: Strategy,
}

impl Default for OscOptions {
    fn default() -> Self {
        OscOptions { q: 4.0, padding: 2, max_grid_points: 1 << 22, auto_dft_limit: 1 << 12, strategy: Strategy::Auto }
    }
}

/// Grid and FFT sizes for one (window, λ, targets) evaluation.
#[derive(Debug, Clone)]
pub struct OscillatoryPlan {
    pub window: Window,
    pub y_grid: Grid,
    pub lambda: f64,
    pub k_targets: Vec<Vec<f64>>,
    pub q: f64,
    pub dft_size: Vec<usize>,
}

impl OscillatoryPlan {
    /// `member_bandwidth` bounds the spectrum of `y ↦ ⟨u, τ_y f_λ⟩` per axis.
    pub fn new(
        window: &Window,
        member_bandwidth: &[f64],
        lambda: f64,
        k_targets: &[Vec<f64>],
        opts: &OscOptions,
    ) -> Result<Self, OscError> {
        let (n_axes, spacing) = Self::layout(window, member_bandwidth, lambda, k_targets, opts);
        let needed: f64 = n_axes.iter().map(|&n| n as f64).product();
        if needed > opts.max_grid_points as f64 {
            return Err(OscError::NyquistUnsatisfiable { needed, limit: opts.max_grid_points });
        }
        let origin = window.center.iter().zip(&n_axes).zip(&spacing).map(|((c, n), h)| c - 0.5 * (n - 1) as f64 * h).collect();
        let y_grid = Grid::new(origin, spacing, n_axes.clone())?;
        let dft_size = n_axes.iter().map(|&n| (opts.padding.max(2) * n).next_power_of_two()).collect();
        Ok(OscillatoryPlan {
            window: window.clone(),
            y_grid,
            lambda,
            k_targets: k_targets.to_vec(),
            q: opts.q,
            dft_size,
        })
    }

    /// Points per axis the Nyquist guard asks for, without building anything.
    pub fn required_points(
        window: &Window,
        member_bandwidth: &[f64],
        lambda: f64,
        k_targets: &[Vec<f64>],
        opts: &OscOptions,
    ) -> f64 {
        Self::layout(window, member_bandwidth, lambda, k_targets, opts).0.iter().map(|&n| n as f64).product()
    }

    fn layout(
        window: &Window,
        member_bandwidth: &[f64],
        lambda: f64,
        k_targets: &[Vec<f64>],
        opts: &OscOptions,
    ) -> (Vec<usize>, Vec<f64>) {
        let m = window.dim();
        let kmax = k_targets.iter().map(|k| k.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
        let hb = window.bandwidth();
        let mut n_axes = Vec::with_capacity(m);
        let mut spacing = Vec::with_capacity(m);
        for a in 0..m {
            let om = k_targets.iter().map(|k| k[a].abs()).fold(0.0, f64::max) / lambda;
            let mut d = 2.0 * PI / (om + hb[a] + member_bandwidth[a]);
            if kmax > 0.0 {
                d = d.min(PI * lambda / (opts.q * kmax));
            }
            d = d.min(window.radius / 4.0);
            let n = ((2.0 * window.radius / d).ceil() as usize + 1).max(8);
            n_axes.push(n);
            spacing.push(2.0 * window.radius / (n - 1) as f64);
        }
        (n_axes, spacing)
    }

    pub fn points(&self) -> usize {
        self.y_grid.len()
    }
}

/// `⟨u, τ_y φ⟩` for all grid points where `h` is non-zero, with error estimates.
fn sample_pairings(
    u: &Distribution,
    member: &TestFunction,
    plan: &OscillatoryPlan,
) -> Result<(Vec<C64>, Vec<f64>), OscError> {
    let grid = &plan.y_grid;
    let hvals = plan.window.sample_on(grid);
    let pts: Vec<usize> = (0..grid.len()).filter(|&i| hvals[i] != 0.0).collect();
    // pairings depending on y only through a·y are computed once per key
    let keys: Option<Vec<i64>> = pts
        .iter()
        .map(|&i| u.shift_key(&grid.point(&grid.unflatten(i))).map(|k| (k * (1u64 << 40) as f64).round() as i64))
        .collect();
    let eval_at = |i: usize| -> Result<(C64, f64), PairingError> {
        let y = grid.point(&grid.unflatten(i));
        let r = pair(u, &member.translated(&y))?;
        Ok((r.value, r.error_estimate))
    };
    let mut g = vec![ZERO; grid.len()];
    let mut e = vec![0.0; grid.len()];
    match keys {
        Some(keys) => {
            let mut first: HashMap<i64, usize> = HashMap::new();
            let mut reps = Vec::new();
            for (j, &k) in keys.iter().enumerate() {
                first.entry(k).or_insert_with(|| {
                    reps.push(pts[j]);
                    reps.len() - 1
                });
            }
            let vals: Vec<(C64, f64)> = reps.par_iter().map(|&i| eval_at(i)).collect::<Result<_, _>>()?;
            for (j, &k) in keys.iter().enumerate() {
                let (v, err) = vals[first[&k]];
                g[pts[j]] = v * hvals[pts[j]];
                e[pts[j]] = err * hvals[pts[j]].abs();
            }
        }
        None => {
            let vals: Vec<(C64, f64)> = pts.par_iter().map(|&i| eval_at(i)).collect::<Result<_, _>>()?;
            for (j, &i) in pts.iter().enumerate() {
                g[i] = vals[j].0 * hvals[i];
                e[i] = vals[j].1 * hvals[i].abs();
            }
        }
    }
    Ok((g, e))
}

/// Grid route for one member.
fn scaled_ft_dft(
    u: &Distribution,
    member: &TestFunction,
    plan: &OscillatoryPlan,
) -> Result<Vec<IntegralRecord>, OscError> {
    let (g, e) = sample_pairings(u, member, plan)?;
    let cell: f64 = plan.y_grid.spacing().iter().product();
    let pair_err = cell * e.iter().sum::<f64>();
    let l1 = cell * g.iter().map(|v| v.norm()).sum::<f64>();
    let spec = PaddedSpectrum::new(&plan.y_grid, g, &plan.dft_size);
    Ok(plan
        .k_targets
        .iter()
        .map(|k| {
            let omega: Vec<f64> = k.iter().map(|v| v / plan.lambda).collect();
            let (value, interp_err) = spec.at(&omega);
            IntegralRecord {
                lambda: plan.lambda,
                k: k.clone(),
                value,
                quadrature_error: pair_err + interp_err + ROUNDOFF * l1,
            }
        })
        .collect())
}

/// Convolution route: `I = ⟨u, (e_ω h) * f_λ⟩`, one pairing per target.
fn scaled_ft_direct(
    u: &Distribution,
    window: &Window,
    member: &TestFunction,
    lambda: f64,
    k_targets: &[Vec<f64>],
) -> Result<Vec<IntegralRecord>, OscError> {
    let h = window
        .as_test_function()
        .ok_or_else(|| PairingError::Unsupported("convolution route needs a separable window".into()))?;
    k_targets
        .par_iter()
        .map(|k| {
            let omega: Vec<f64> = k.iter().map(|v| v / lambda).collect();
            let mut terms = Vec::new();
            for th in h.terms() {
                for tf in member.terms() {
                    let factors: Vec<Factor> = th
                        .factors
                        .iter()
                        .zip(&tf.factors)
                        .zip(&omega)
                        .map(|((hf, ff), &w)| {
                            let kern: Factor =
                                if w == 0.0 { hf.clone() } else { std::sync::Arc::new(Modulated1D { base: hf.clone(), omega: w }) };
                            std::sync::Arc::new(Convolved1D { kernel: kern, f: ff.clone() }) as Factor
                        })
                        .collect();
                    terms.push(Term { coeff: th.coeff * tf.coeff, factors });
                }
            }
            let psi = TestFunction::from_terms(member.dim(), terms);
            let r = pair(u, &psi)?;
            Ok(IntegralRecord { lambda, k: k.clone(), value: r.value, quadrature_error: r.error_estimate })
        })
        .collect()
}

fn resolve_strategy(
    window: &Window,
    member: &TestFunction,
    lambda: f64,
    k_targets: &[Vec<f64>],
    opts: &OscOptions,
) -> Result<Strategy, OscError> {
    let bw = member.bandwidth();
    let needed = OscillatoryPlan::required_points(window, &bw, lambda, k_targets, opts);
    match opts.strategy {
        Strategy::Dft | Strategy::Direct => Ok(opts.strategy),
        Strategy::Auto => {
            if needed <= opts.auto_dft_limit as f64 {
                Ok(Strategy::Dft)
            } else if window.as_test_function().is_some() {
                Ok(Strategy::Direct)
            } else if needed <= opts.max_grid_points as f64 {
                Ok(Strategy::Dft)
            } else {
                Err(OscError::NyquistUnsatisfiable { needed, limit: opts.max_grid_points })
            }
        }
    }
}

/// `∫ e^{-i k·y/λ} h(y) ⟨u, τ_y f_λ⟩ dy` for every target `k`.
pub fn windowed_scaled_ft(
    u: &Distribution,
    h: &Window,
    fam: &TestingFamily,
    lambda: f64,
    k_targets: &[Vec<f64>],
    opts: &OscOptions,
) -> Result<Vec<IntegralRecord>, OscError> {
    if u.dim() != fam.dim() || h.dim() != fam.dim() {
        return Err(PairingError::DimensionMismatch { expected: u.dim(), got: fam.dim() }.into());
    }
    let member = match fam.member(lambda)? {
        None => return Ok(k_targets.iter().map(|k| IntegralRecord::zero(lambda, k)).collect()),
        Some(m) if m.is_zero() => return Ok(k_targets.iter().map(|k| IntegralRecord::zero(lambda, k)).collect()),
        Some(m) => m,
    };
    match resolve_strategy(h, &member, lambda, k_targets, opts)? {
        Strategy::Direct => scaled_ft_direct(u, h, &member, lambda, k_targets),
        _ => {
            let plan = OscillatoryPlan::new(h, &member.bandwidth(), lambda, k_targets, opts)?;
            scaled_ft_dft(u, &member, &plan)
        }
    }
}

/// `χ̂u(k/λ) = u(e_{k/λ} χ)`.
pub fn classical_local_ft(
    u: &Distribution,
    chi: &Window,
    lambda: f64,
    k_targets: &[Vec<f64>],
) -> Result<Vec<IntegralRecord>, OscError> {
    let chi_tf = chi
        .as_test_function()
        .ok_or_else(|| PairingError::Unsupported("localizing window must be separable".into()))?;
    k_targets
        .par_iter()
        .map(|k| {
            let omega: Vec<f64> = k.iter().map(|v| v / lambda).collect();
            let r = pair(u, &chi_tf.modulated(&omega))?;
            Ok(IntegralRecord { lambda, k: k.clone(), value: r.value, quadrature_error: r.error_estimate })
        })
        .collect()
}

/// The n-point analogue on `ℝ^{dn}`: `φ_n(τ_{y_1} f^{(1)}_λ ⊗ … ⊗ τ_{y_n} f^{(n)}_λ)` windowed and transformed.
pub fn windowed_multi_ft(
    phi: &TranslationKernel,
    h: &Window,
    fams: &[TestingFamily],
    lambda: f64,
    k_targets: &[Vec<f64>],
    opts: &OscOptions,
) -> Result<Vec<IntegralRecord>, OscError> {
    if fams.len() != phi.n {
        return Err(PairingError::DimensionMismatch { expected: phi.n, got: fams.len() }.into());
    }
    let fam = if fams.len() == 1 { fams[0].clone() } else { TestingFamily::product(fams.to_vec()) };
    windowed_scaled_ft(&phi.as_distribution(), h, &fam, lambda, k_targets, opts)
}

/// The n-point functional evaluated on one product of members (no window).
pub fn multi_pairing(phi: &TranslationKernel, fams: &[TestingFamily], lambda: f64) -> Result<C64, OscError> {
    let mut members = Vec::new();
    for f in fams {
        match f.member(lambda)? {
            None => return Ok(ZERO),
            Some(m) => members.push(m),
        }
    }
    Ok(kernel_pair_n(phi, &members)?.value)
}

/// `|f̂_λ(k/λ)|` against the trivial bound `sup|g| · vol(O) · λ^m`, `m` the
/// family's trivial order.
#[derive(Debug, Clone, Serialize)]
pub struct TransformBound {
    pub lambda: f64,
    pub k: Vec<f64>,
    pub magnitude: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Evaluate the bound on every `λ` and every `k`. Only scaled-profile families
/// carry the bound; other kinds return an empty list.
pub fn transform_bounds(fam: &TestingFamily, lambdas: &[f64], ks: &[Vec<f64>]) -> Result<Vec<TransformBound>, OscError> {
    if !matches!(fam.kind, crate::grid::FamilyKind::ScaledProfile { .. }) {
        return Ok(Vec::new());
    }
    let one = Distribution::SmoothProfile {
        factors: (0..fam.dim()).map(|_| std::sync::Arc::new(crate::func::Elementary1D::Polynomial(vec![1.0])) as Factor).collect(),
    };
    let c = fam.sup_bound() * fam.region().volume();
    let mut out = Vec::new();
    for &l in lambdas {
        let Some(m) = fam.member(l)? else { continue };
        let bound = c * l.powf(fam.trivial_order());
        for k in ks {
            let omega: Vec<f64> = k.iter().map(|v| v / l).collect();
            let r = pair(&one, &m.modulated(&omega))?;
            let magnitude = r.value.norm();
            let pass = magnitude <= bound * (1.0 + 1e-9) + r.error_estimate;
            out.push(TransformBound { lambda: l, k: k.clone(), magnitude, bound, pass });
        }
    }
    Ok(out)
}

/// One comparison between the grid route and the convolution route.
#[derive(Debug, Clone, Serialize)]
pub struct Probe {
    pub lambda: f64,
    pub k: Vec<f64>,
    pub dft: C64,
    pub dft_error: f64,
    pub direct: C64,
    pub direct_error: f64,
    pub pass: bool,
}

/// Compare both routes on `probes` random (λ, k) pairs drawn from `lambdas × k_pool`.
/// Only λ whose Nyquist grid fits `opts.max_grid_points` are drawn.
pub fn crosscheck(
    u: &Distribution,
    h: &Window,
    fam: &TestingFamily,
    lambdas: &[f64],
    k_pool: &[Vec<f64>],
    probes: usize,
    seed: u64,
    opts: &OscOptions,
) -> Result<Vec<Probe>, OscError> {
    let mut feasible = Vec::new();
    for &l in lambdas {
        if let Some(m) = fam.member(l)? {
            let need = OscillatoryPlan::required_points(h, &m.bandwidth(), l, k_pool, opts);
            if need <= opts.max_grid_points as f64 {
                feasible.push(l);
            }
        }
    }
    if feasible.is_empty() || k_pool.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks: Vec<(f64, Vec<f64>)> = (0..probes)
        .map(|_| (feasible[rng.gen_range(0..feasible.len())], k_pool[rng.gen_range(0..k_pool.len())].clone()))
        .collect();
    let dft_opts = OscOptions { strategy: Strategy::Dft, ..opts.clone() };
    let direct_opts = OscOptions { strategy: Strategy::Direct, ..opts.clone() };
    picks
        .into_iter()
        .map(|(l, k)| {
            let a = windowed_scaled_ft(u, h, fam, l, std::slice::from_ref(&k), &dft_opts)?.remove(0);
            let b = windowed_scaled_ft(u, h, fam, l, std::slice::from_ref(&k), &direct_opts)?.remove(0);
            let pass = (a.value - b.value).norm() <= 10.0 * (a.quadrature_error + b.quadrature_error);
            Ok(Probe { lambda: l, k, dft: a.value, dft_error: a.quadrature_error, direct: b.value, direct_error: b.quadrature_error, pass })
        })
        .collect()
}
