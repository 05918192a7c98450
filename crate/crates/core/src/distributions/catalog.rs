//! Named catalog entries and their known wavefront sets.

use super::{Distribution, Side, TranslationKernel};
use crate::func::{Bump1D, Elementary1D, Factor, Gaussian1D};
use crate::C64;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog key '{0}'")]
    UnknownKey(String),
    #[error("malformed catalog key '{key}': {reason}")]
    Malformed { key: String, reason: String },
    #[error("no ground truth registered for this distribution")]
    UnknownGroundTruth,
}

/// Which half-line of directions is singular at a one-dimensional point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side1D {
    Both,
    Positive,
    Negative,
}

impl Side1D {
    fn admits(self, xi: f64) -> bool {
        match self {
            Side1D::Both => xi != 0.0,
            Side1D::Positive => xi > 0.0,
            Side1D::Negative => xi < 0.0,
        }
    }
}

/// Singular side of `1/(x - x0 - i0)` under `f̂(k) = ∫ e^{-ikx} f(x) dx`.
/// Frozen from the ε-regularized Fourier transform oracle (see the tests).
pub const BV_MINUS_SINGULAR_SIDE: Side1D = Side1D::Negative;

/// Wavefront set predicate over sampled phase points.
#[derive(Debug, Clone, PartialEq)]
pub enum WfDescriptor {
    Empty,
    Point { x0: f64, side: Side1D },
    /// Singular where `a·x - c` hits the profile's singular points, along `±a`.
    Ridge { normal: Vec<f64>, offset: f64, profile: Box<WfDescriptor> },
    Union(Vec<WfDescriptor>),
}

const POS_TOL: f64 = 1e-9;

impl WfDescriptor {
    pub fn contains(&self, x: &[f64], xi: &[f64]) -> bool {
        match self {
            WfDescriptor::Empty => false,
            WfDescriptor::Point { x0, side } => x.len() == 1 && (x[0] - x0).abs() < POS_TOL && side.admits(xi[0]),
            WfDescriptor::Ridge { normal, offset, profile } => {
                let nn: f64 = normal.iter().map(|a| a * a).sum();
                let kappa = xi.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() / nn;
                let resid: f64 = xi.iter().zip(normal).map(|(a, b)| (a - kappa * b).powi(2)).sum::<f64>().sqrt();
                let xin: f64 = xi.iter().map(|a| a * a).sum::<f64>().sqrt();
                if resid > 1e-9 * xin.max(1e-300) || kappa == 0.0 {
                    return false;
                }
                let s = x.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() - offset;
                profile.contains(&[s], &[kappa])
            }
            WfDescriptor::Union(parts) => parts.iter().any(|p| p.contains(x, xi)),
        }
    }

    /// Position projection contains `x`?
    pub fn singular_at(&self, x: &[f64]) -> bool {
        match self {
            WfDescriptor::Empty => false,
            WfDescriptor::Point { x0, .. } => (x[0] - x0).abs() < POS_TOL,
            WfDescriptor::Ridge { normal, offset, profile } => {
                let s = x.iter().zip(normal).map(|(a, b)| a * b).sum::<f64>() - offset;
                profile.singular_at(&[s])
            }
            WfDescriptor::Union(parts) => parts.iter().any(|p| p.singular_at(x)),
        }
    }

    /// Feature points of one-dimensional descriptors (used to build lattices).
    pub fn feature_points(&self) -> Vec<f64> {
        match self {
            WfDescriptor::Point { x0, .. } => vec![*x0],
            WfDescriptor::Union(p) => p.iter().flat_map(|d| d.feature_points()).collect(),
            _ => Vec::new(),
        }
    }
}

/// Known wavefront set of a catalog distribution.
pub fn catalog_ground_truth(u: &Distribution) -> Result<WfDescriptor, CatalogError> {
    Ok(match u {
        Distribution::DeltaAt { x0 }
        | Distribution::DeltaDerivative { x0, .. }
        | Distribution::Heaviside { x0 }
        | Distribution::PrincipalValue { x0 } => WfDescriptor::Point { x0: *x0, side: Side1D::Both },
        Distribution::BoundaryValue { x0, side, .. } => WfDescriptor::Point {
            x0: *x0,
            side: match side {
                Side::Minus => BV_MINUS_SINGULAR_SIDE,
                Side::Plus => match BV_MINUS_SINGULAR_SIDE {
                    Side1D::Negative => Side1D::Positive,
                    Side1D::Positive => Side1D::Negative,
                    Side1D::Both => Side1D::Both,
                },
            },
        },
        Distribution::SmoothProfile { .. } => WfDescriptor::Empty,
        Distribution::Ridge { normal, offset, profile } => {
            let p = catalog_ground_truth(profile)?;
            if p == WfDescriptor::Empty {
                WfDescriptor::Empty
            } else {
                WfDescriptor::Ridge { normal: normal.clone(), offset: *offset, profile: Box::new(p) }
            }
        }
        Distribution::TensorProduct { groups } => {
            for (_, d) in groups {
                if catalog_ground_truth(d)? != WfDescriptor::Empty {
                    return Err(CatalogError::UnknownGroundTruth);
                }
            }
            WfDescriptor::Empty
        }
        Distribution::Sum { terms } => {
            // union; exact when the summands' singular supports are disjoint
            let parts: Vec<WfDescriptor> = terms
                .iter()
                .filter(|(c, _)| *c != C64::new(0.0, 0.0))
                .map(|(_, d)| catalog_ground_truth(d))
                .collect::<Result<_, _>>()?;
            let parts: Vec<WfDescriptor> = parts.into_iter().filter(|p| *p != WfDescriptor::Empty).collect();
            match parts.len() {
                0 => WfDescriptor::Empty,
                1 => parts.into_iter().next().unwrap(),
                _ => WfDescriptor::Union(parts),
            }
        }
    })
}

/// A parsed catalog key.
#[derive(Debug, Clone)]
pub enum CatalogEntry {
    Distribution(Distribution),
    Kernel(TranslationKernel),
}

/// `(key, description)` for every catalog template.
pub fn catalog_entries() -> Vec<(&'static str, &'static str)> {
    vec![
        ("delta@X", "Dirac delta at X"),
        ("delta'@X", "first derivative of the delta at X (one prime per order)"),
        ("heaviside@X", "unit step jumping at X"),
        ("pv@X", "principal value 1/(x - X)"),
        ("bv:-i0@X", "boundary value 1/(x - X - i0)"),
        ("bv:+i0@X", "boundary value 1/(x - X + i0)"),
        ("bvN:-i0@X", "boundary value 1/(x - X - i0)^N"),
        ("ibv:-i0@X", "i/(x - X - i0)"),
        ("smooth:bump@X", "smooth bump of radius 1.5 centred at X"),
        ("smooth:gauss@X", "Gaussian of width 0.7 centred at X"),
        ("const", "the constant function 1"),
        ("line-delta:n=(A,B)[,c=C]", "delta on the line A y0 + B y1 = C in the plane"),
        ("smooth2:gauss", "planar Gaussian of width 0.7"),
        ("ridge:a=(A,B)[,c=C]:KEY", "F(A y0 + B y1 - C) for a one-dimensional KEY"),
        ("KEY + KEY", "sum of two entries of the same dimension"),
        ("kernel:KEY", "two-point kernel w(y1 - y2) with difference profile KEY"),
        ("functional:KEY", "one-point functional given by KEY"),
        ("kernel2d:ibv", "planar two-point kernel i/((t - s) - i0)"),
        ("kernel2d:chiral", "planar local two-point kernel -1/((t - s) - i0)^2"),
    ]
}

fn malformed(key: &str, reason: &str) -> CatalogError {
    CatalogError::Malformed { key: key.into(), reason: reason.into() }
}

fn parse_num(key: &str, s: &str) -> Result<f64, CatalogError> {
    s.trim().parse::<f64>().map_err(|_| malformed(key, &format!("'{s}' is not a number")))
}

fn parse_vec2(key: &str, s: &str) -> Result<[f64; 2], CatalogError> {
    let s = s.trim();
    let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| malformed(key, "expected (a,b)"))?;
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != 2 {
        return Err(malformed(key, "expected two components"));
    }
    Ok([parse_num(key, parts[0])?, parse_num(key, parts[1])?])
}

fn split_at(key: &str, body: &str) -> Result<(String, f64), CatalogError> {
    match body.rsplit_once('@') {
        Some((k, x)) => Ok((k.to_string(), parse_num(key, x)?)),
        None => Ok((body.to_string(), 0.0)),
    }
}

/// Parse `a=(..)[,c=..]` prefixes.
fn parse_normal_offset(key: &str, s: &str, tag: &str) -> Result<([f64; 2], f64), CatalogError> {
    let s = s.trim();
    let rest = s.strip_prefix(tag).ok_or_else(|| malformed(key, &format!("expected '{tag}'")))?;
    let close = rest.find(')').ok_or_else(|| malformed(key, "unclosed vector"))?;
    let n = parse_vec2(key, &rest[..=close])?;
    let tail = rest[close + 1..].trim();
    let c = if let Some(c) = tail.strip_prefix(",c=") { parse_num(key, c)? } else if tail.is_empty() { 0.0 } else {
        return Err(malformed(key, "trailing characters"));
    };
    Ok((n, c))
}

fn parse_dist(key: &str) -> Result<Distribution, CatalogError> {
    let k = key.trim();
    if let Some((a, b)) = k.split_once(" + ") {
        let (a, b) = (parse_dist(a)?, parse_dist(b)?);
        if a.dim() != b.dim() {
            return Err(malformed(key, "summands of different dimension"));
        }
        return Ok(a.plus(b));
    }
    if k == "const" {
        return Ok(Distribution::SmoothProfile { factors: vec![Arc::new(Elementary1D::Polynomial(vec![1.0]))] });
    }
    if k == "smooth2:gauss" {
        let g = |_| Arc::new(Gaussian1D { center: 0.0, width: 0.7, amp: 1.0 }) as Factor;
        return Ok(Distribution::SmoothProfile { factors: (0..2).map(g).collect() });
    }
    if let Some(rest) = k.strip_prefix("line-delta:") {
        let (n, c) = parse_normal_offset(key, rest, "n=")?;
        return Ok(Distribution::line_delta(n, c));
    }
    if let Some(rest) = k.strip_prefix("ridge:") {
        let close = rest.find(')').ok_or_else(|| malformed(key, "expected ridge:a=(..):KEY"))?;
        let colon = rest[close..].find(':').ok_or_else(|| malformed(key, "expected ':' before the profile key"))? + close;
        let (spec, inner) = (&rest[..colon], &rest[colon + 1..]);
        let (n, c) = parse_normal_offset(key, spec, "a=")?;
        let profile = parse_dist(inner)?;
        if profile.dim() != 1 {
            return Err(malformed(key, "ridge profile must be one-dimensional"));
        }
        return Ok(Distribution::Ridge { normal: n.to_vec(), offset: c, profile: Box::new(profile) });
    }
    let (head, x0) = split_at(key, k)?;
    let head = head.as_str();
    if let Some(primes) = head.strip_prefix("delta") {
        if primes.is_empty() {
            return Ok(Distribution::DeltaAt { x0 });
        }
        if primes.chars().all(|c| c == '\'') {
            return Ok(Distribution::DeltaDerivative { x0, order: primes.len() });
        }
    }
    match head {
        "heaviside" => return Ok(Distribution::Heaviside { x0 }),
        "pv" => return Ok(Distribution::PrincipalValue { x0 }),
        "smooth:bump" => return Ok(Distribution::smooth1d(Bump1D::standard(x0, 1.5))),
        "smooth:gauss" => return Ok(Distribution::smooth1d(Gaussian1D { center: x0, width: 0.7, amp: 1.0 })),
        _ => {}
    }
    let (imag, head) = match head.strip_prefix('i') {
        Some(h) if h.starts_with("bv") => (true, h),
        _ => (false, head),
    };
    if let Some(rest) = head.strip_prefix("bv") {
        let (pow, sign) = rest.split_once(':').ok_or_else(|| malformed(key, "expected bv:±i0"))?;
        let power = if pow.is_empty() { 1 } else { pow.parse::<u32>().map_err(|_| malformed(key, "bad power"))? };
        if power == 0 {
            return Err(malformed(key, "power must be at least 1"));
        }
        let side = match sign {
            "-i0" => Side::Minus,
            "+i0" => Side::Plus,
            _ => return Err(malformed(key, "sign must be -i0 or +i0")),
        };
        let d = Distribution::BoundaryValue { x0, side, power };
        return Ok(if imag { d.scaled(C64::new(0.0, 1.0)) } else { d });
    }
    Err(CatalogError::UnknownKey(key.to_string()))
}

/// Parse a scenario-level key into a distribution or an n-point kernel.
pub fn parse_key(key: &str) -> Result<CatalogEntry, CatalogError> {
    let k = key.trim();
    if let Some(w) = k.strip_prefix("kernel:") {
        let w = parse_dist(w)?;
        return Ok(CatalogEntry::Kernel(TranslationKernel::two_point(w, k)));
    }
    if let Some(w) = k.strip_prefix("functional:") {
        let w = parse_dist(w)?;
        return Ok(CatalogEntry::Kernel(TranslationKernel::one_point(w, k)));
    }
    match k {
        "kernel2d:ibv" => {
            let w = Distribution::Ridge {
                normal: vec![1.0, -1.0],
                offset: 0.0,
                profile: Box::new(Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 1 }.scaled(C64::new(0.0, 1.0))),
            };
            return Ok(CatalogEntry::Kernel(TranslationKernel::two_point(w, k)));
        }
        "kernel2d:chiral" => {
            let w = Distribution::Ridge {
                normal: vec![1.0, -1.0],
                offset: 0.0,
                profile: Box::new(Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 2 }.scaled(C64::new(-1.0, 0.0))),
            };
            return Ok(CatalogEntry::Kernel(TranslationKernel::two_point(w, k).with_local(true)));
        }
        _ => {}
    }
    Ok(CatalogEntry::Distribution(parse_dist(k)?))
}
