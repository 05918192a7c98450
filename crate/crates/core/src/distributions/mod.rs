//! Closed-form distributions and the pairing engine `⟨u, φ⟩`.

mod catalog;
mod kernel;
mod ridge;
mod rules;

pub use catalog::{catalog_entries, catalog_ground_truth, parse_key, CatalogEntry, CatalogError, Side1D, WfDescriptor, BV_MINUS_SINGULAR_SIDE};
pub use kernel::{kernel_pair_n, TranslationKernel};
pub use ridge::RidgeProjection;

use crate::func::{Factor, Scaled1D};
use crate::testfn::TestFunction;
use crate::C64;
use rules::Ctx;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairingError {
    #[error("unresolved oscillation: bandwidth {bandwidth} at spacing {spacing}")]
    UnresolvedOscillation { bandwidth: f64, spacing: f64 },
    #[error("epsilon extrapolation diverged (relative change {relative_change:.3e})")]
    ExtrapolationDiverged { relative_change: f64 },
    #[error("dimension mismatch: distribution on R^{expected}, test function on R^{got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported pairing: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Method {
    Analytic,
    Quadrature { order: u32 },
    EpsilonExtrapolated { eps: Vec<f64>, order: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairingResult {
    pub value: C64,
    pub method: Method,
    pub error_estimate: f64,
}

impl PairingResult {
    pub fn analytic(value: C64) -> Self {
        PairingResult { value, method: Method::Analytic, error_estimate: 0.0 }
    }
    pub fn quadrature(value: C64, err: f64, order: u32) -> Self {
        PairingResult { value, method: Method::Quadrature { order }, error_estimate: err }
    }

    fn rank(m: &Method) -> u8 {
        match m {
            Method::Analytic => 0,
            Method::Quadrature { .. } => 1,
            Method::EpsilonExtrapolated { .. } => 2,
        }
    }

    fn merge_method(a: Method, b: &Method) -> Method {
        if Self::rank(b) > Self::rank(&a) {
            b.clone()
        } else {
            a
        }
    }

    /// `c·self + other`.
    pub fn axpy(self, c: C64, other: &PairingResult) -> PairingResult {
        PairingResult {
            value: self.value * c + other.value,
            method: Self::merge_method(self.method, &other.method),
            error_estimate: self.error_estimate * c.norm() + other.error_estimate,
        }
    }

    pub fn times(self, other: &PairingResult) -> PairingResult {
        PairingResult {
            value: self.value * other.value,
            method: Self::merge_method(self.method, &other.method),
            error_estimate: self.error_estimate * other.value.norm()
                + other.error_estimate * self.value.norm()
                + self.error_estimate * other.error_estimate,
        }
    }
}

/// Which side the `i0` sits on: `Minus` is `1/(x - x0 - i0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    /// `+1` for `- i0`, `-1` for `+ i0`; the Sokhotski–Plemelj jump is `iπ` times this.
    pub fn i0_sign(self) -> f64 {
        match self {
            Side::Minus => 1.0,
            Side::Plus => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Distribution {
    DeltaAt { x0: f64 },
    DeltaDerivative { x0: f64, order: usize },
    Heaviside { x0: f64 },
    PrincipalValue { x0: f64 },
    /// `1/((x - x0) ∓ i0)^power`.
    BoundaryValue { x0: f64, side: Side, power: u32 },
    /// Smooth function given by separable factors (not necessarily compact).
    SmoothProfile { factors: Vec<Factor> },
    /// `F(a·y - c)` for a one-dimensional distribution `F`.
    Ridge { normal: Vec<f64>, offset: f64, profile: Box<Distribution> },
    /// Product of distributions acting on disjoint coordinate groups.
    TensorProduct { groups: Vec<(Vec<usize>, Distribution)> },
    /// Finite linear combination.
    Sum { terms: Vec<(C64, Distribution)> },
}

impl Distribution {
    /// Line delta `δ(n·y - c)` in the plane; `n` is normalized.
    pub fn line_delta(normal: [f64; 2], offset: f64) -> Self {
        let n = (normal[0] * normal[0] + normal[1] * normal[1]).sqrt();
        Distribution::Ridge {
            normal: vec![normal[0] / n, normal[1] / n],
            offset: offset / n,
            profile: Box::new(Distribution::DeltaAt { x0: 0.0 }),
        }
    }

    pub fn smooth1d(f: impl crate::func::Fn1D + 'static) -> Self {
        Distribution::SmoothProfile { factors: vec![Arc::new(f)] }
    }

    pub fn scaled(self, c: C64) -> Self {
        Distribution::Sum { terms: vec![(c, self)] }
    }

    pub fn plus(self, other: Distribution) -> Self {
        Distribution::Sum { terms: vec![(C64::new(1.0, 0.0), self), (C64::new(1.0, 0.0), other)] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Distribution::DeltaAt { .. }
            | Distribution::DeltaDerivative { .. }
            | Distribution::Heaviside { .. }
            | Distribution::PrincipalValue { .. }
            | Distribution::BoundaryValue { .. } => 1,
            Distribution::SmoothProfile { factors } => factors.len(),
            Distribution::Ridge { normal, .. } => normal.len(),
            Distribution::TensorProduct { groups } => groups.iter().map(|(c, _)| c.len()).sum(),
            Distribution::Sum { terms } => terms.first().map_or(1, |t| t.1.dim()),
        }
    }

    /// `u∘τ_{-s}`, i.e. the distribution moved by `+s`.
    pub fn translated(&self, s: &[f64]) -> Distribution {
        assert_eq!(s.len(), self.dim());
        match self {
            Distribution::DeltaAt { x0 } => Distribution::DeltaAt { x0: x0 + s[0] },
            Distribution::DeltaDerivative { x0, order } => Distribution::DeltaDerivative { x0: x0 + s[0], order: *order },
            Distribution::Heaviside { x0 } => Distribution::Heaviside { x0: x0 + s[0] },
            Distribution::PrincipalValue { x0 } => Distribution::PrincipalValue { x0: x0 + s[0] },
            Distribution::BoundaryValue { x0, side, power } => {
                Distribution::BoundaryValue { x0: x0 + s[0], side: *side, power: *power }
            }
            Distribution::SmoothProfile { factors } => Distribution::SmoothProfile {
                factors: factors
                    .iter()
                    .zip(s)
                    .map(|(f, &v)| if v == 0.0 { f.clone() } else { Arc::new(Scaled1D::shifted(f.clone(), v)) as Factor })
                    .collect(),
            },
            Distribution::Ridge { normal, offset, profile } => Distribution::Ridge {
                normal: normal.clone(),
                offset: offset + normal.iter().zip(s).map(|(a, b)| a * b).sum::<f64>(),
                profile: profile.clone(),
            },
            Distribution::TensorProduct { groups } => Distribution::TensorProduct {
                groups: groups
                    .iter()
                    .map(|(c, d)| (c.clone(), d.translated(&c.iter().map(|&i| s[i]).collect::<Vec<_>>())))
                    .collect(),
            },
            Distribution::Sum { terms } => {
                Distribution::Sum { terms: terms.iter().map(|(c, d)| (*c, d.translated(s))).collect() }
            }
        }
    }

    /// Is the distribution real (⟨u, φ⟩ real for real φ)?
    pub fn is_real(&self) -> bool {
        match self {
            Distribution::BoundaryValue { .. } => false,
            Distribution::SmoothProfile { factors } => factors.iter().all(|f| f.is_real()),
            Distribution::Ridge { profile, .. } => profile.is_real(),
            Distribution::TensorProduct { groups } => groups.iter().all(|(_, d)| d.is_real()),
            Distribution::Sum { terms } => terms.iter().all(|(c, d)| c.im == 0.0 && d.is_real()),
            _ => true,
        }
    }

    /// `Some(key)` when `⟨u, τ_y φ⟩` depends on `y` only through `key(y)`.
    pub(crate) fn shift_key(&self, y: &[f64]) -> Option<f64> {
        match self {
            Distribution::Ridge { normal, .. } => Some(normal.iter().zip(y).map(|(a, b)| a * b).sum()),
            _ => None,
        }
    }
}

/// `⟨u, φ⟩`.
pub fn pair(u: &Distribution, phi: &TestFunction) -> Result<PairingResult, PairingError> {
    if u.dim() != phi.dim() {
        return Err(PairingError::DimensionMismatch { expected: u.dim(), got: phi.dim() });
    }
    let caps: Option<Vec<f64>> = phi.grid().map(|g| g.spacing().to_vec());
    let mut acc = PairingResult::analytic(C64::new(0.0, 0.0));
    for t in phi.terms() {
        let r = pair_separable(u, &t.factors, caps.as_deref())?;
        acc = r.axpy(t.coeff, &acc);
    }
    Ok(acc)
}

fn ctx_for(caps: Option<&[f64]>, axis: usize) -> Ctx {
    Ctx { dt_cap: caps.map(|c| c[axis]) }
}

pub(crate) fn pair_separable(
    u: &Distribution,
    factors: &[Factor],
    caps: Option<&[f64]>,
) -> Result<PairingResult, PairingError> {
    let one = |i: usize| -> Result<(&Factor, Ctx), PairingError> {
        if factors.len() != 1 {
            return Err(PairingError::DimensionMismatch { expected: 1, got: factors.len() });
        }
        Ok((&factors[i], ctx_for(caps, i)))
    };
    match u {
        Distribution::DeltaAt { x0 } => {
            let (f, _) = one(0)?;
            Ok(rules::delta(f.as_ref(), *x0))
        }
        Distribution::DeltaDerivative { x0, order } => {
            let (f, c) = one(0)?;
            rules::delta_derivative(&c, f.as_ref(), *x0, *order)
        }
        Distribution::Heaviside { x0 } => {
            let (f, c) = one(0)?;
            rules::heaviside(&c, f.as_ref(), *x0)
        }
        Distribution::PrincipalValue { x0 } => {
            let (f, c) = one(0)?;
            rules::principal_value(&c, f.as_ref(), *x0)
        }
        Distribution::BoundaryValue { x0, side, power } => {
            let (f, c) = one(0)?;
            rules::boundary_value(&c, f.as_ref(), *x0, *side, *power)
        }
        Distribution::SmoothProfile { factors: s } => {
            if s.len() != factors.len() {
                return Err(PairingError::DimensionMismatch { expected: s.len(), got: factors.len() });
            }
            let mut acc = PairingResult::analytic(C64::new(1.0, 0.0));
            for (a, (si, fi)) in s.iter().zip(factors).enumerate() {
                let r = rules::smooth(&ctx_for(caps, a), fi.as_ref(), si.as_ref())?;
                acc = acc.times(&r);
                if acc.value == C64::new(0.0, 0.0) && acc.error_estimate == 0.0 {
                    break;
                }
            }
            Ok(acc)
        }
        Distribution::Ridge { normal, offset, profile } => {
            if normal.len() != factors.len() {
                return Err(PairingError::DimensionMismatch { expected: normal.len(), got: factors.len() });
            }
            if profile.dim() != 1 {
                return Err(PairingError::Unsupported("ridge profile must be one-dimensional".into()));
            }
            let proj = RidgeProjection::new(normal, *offset, factors)?;
            if proj.is_zero() {
                return Ok(PairingResult::analytic(C64::new(0.0, 0.0)));
            }
            let f: Factor = Arc::new(proj);
            pair_separable(profile, &[f], None)
        }
        Distribution::TensorProduct { groups } => {
            let mut acc = PairingResult::analytic(C64::new(1.0, 0.0));
            for (coords, d) in groups {
                let fs: Vec<Factor> = coords.iter().map(|&i| factors[i].clone()).collect();
                let cs: Option<Vec<f64>> = caps.map(|c| coords.iter().map(|&i| c[i]).collect());
                let r = pair_separable(d, &fs, cs.as_deref())?;
                acc = acc.times(&r);
                if acc.value == C64::new(0.0, 0.0) && acc.error_estimate == 0.0 {
                    break;
                }
            }
            Ok(acc)
        }
        Distribution::Sum { terms } => {
            let mut acc = PairingResult::analytic(C64::new(0.0, 0.0));
            for (c, d) in terms {
                acc = pair_separable(d, factors, caps)?.axpy(*c, &acc);
            }
            Ok(acc)
        }
    }
}
