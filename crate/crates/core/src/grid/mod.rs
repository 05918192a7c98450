//! Grids, λ-ladders, direction sets, windows and testing families.

mod family;
mod window;

pub use family::{BoxRegion, FamilyKind, TestingFamily};
pub use window::{make_bump, Multiplier, Window, WindowShape};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("bad range: {0}")]
    BadRange(String),
    #[error("window radius too small: support holds {points} grid points on axis {axis}")]
    RadiusTooSmall { axis: usize, points: usize },
    #[error("profile support not inside the family region: {0}")]
    SupportViolation(String),
    #[error("no tabulated member at lambda = {0}")]
    MissingMember(f64),
}

/// Uniform grid; coordinates are `origin + spacing * index` on every axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    extent: Vec<usize>,
}

impl Grid {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, extent: Vec<usize>) -> Result<Self, GridError> {
        let d = origin.len();
        if d == 0 || spacing.len() != d || extent.len() != d {
            return Err(GridError::BadRange("grid axes disagree".into()));
        }
        if spacing.iter().any(|&h| !(h > 0.0) || !h.is_finite()) {
            return Err(GridError::BadRange("spacing must be positive".into()));
        }
        if extent.iter().any(|&n| n < 8) {
            return Err(GridError::BadRange("extent must be at least 8 per axis".into()));
        }
        Ok(Grid { origin, spacing, extent })
    }

    /// Grid with `spacing` covering `[center - half, center + half]` on every axis.
    pub fn covering(center: &[f64], half: f64, spacing: f64) -> Result<Self, GridError> {
        let n = ((2.0 * half / spacing).ceil() as usize + 1).max(8);
        let origin = center.iter().map(|c| c - 0.5 * (n - 1) as f64 * spacing).collect();
        Grid::new(origin, vec![spacing; center.len()], vec![n; center.len()])
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }
    pub fn origin(&self) -> &[f64] {
        &self.origin
    }
    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }
    pub fn extent(&self) -> &[usize] {
        &self.extent
    }
    pub fn len(&self) -> usize {
        self.extent.iter().product()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + self.spacing[axis] * i as f64
    }
    pub fn point(&self, index: &[usize]) -> Vec<f64> {
        index.iter().enumerate().map(|(a, &i)| self.coordinate(a, i)).collect()
    }
    /// Row-major multi-index of a flat index (last axis fastest).
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = flat % self.extent[a];
            flat /= self.extent[a];
        }
        idx
    }
    pub fn lower(&self, axis: usize) -> f64 {
        self.origin[axis]
    }
    pub fn upper(&self, axis: usize) -> f64 {
        self.coordinate(axis, self.extent[axis] - 1)
    }
}

/// Geometric sequence `lambda_max * ratio^j` with no length restriction.
pub fn geometric(lambda_max: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|j| lambda_max * ratio.powi(j as i32)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaLadder {
    pub lambda_max: f64,
    pub ratio: f64,
    pub count: usize,
    values: Vec<f64>,
}

impl LambdaLadder {
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    /// Ladder entries multiplied by `mu`.
    pub fn scaled(&self, mu: f64) -> Vec<f64> {
        self.values.iter().map(|l| l * mu).collect()
    }
    /// Drop the `k` coarsest entries.
    pub fn without_coarsest(&self, k: usize) -> Vec<f64> {
        self.values[k.min(self.values.len())..].to_vec()
    }
}

impl Default for LambdaLadder {
    fn default() -> Self {
        make_ladder(0.25, std::f64::consts::FRAC_1_SQRT_2, 12).expect("default ladder")
    }
}

pub fn make_ladder(lambda_max: f64, ratio: f64, count: usize) -> Result<LambdaLadder, GridError> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(GridError::BadRange(format!("ratio {ratio} outside (0,1)")));
    }
    if !(lambda_max > 0.0 && lambda_max < 1.0) {
        return Err(GridError::BadRange(format!("lambda_max {lambda_max} outside (0,1)")));
    }
    if count < 6 {
        return Err(GridError::BadRange(format!("count {count} < 6")));
    }
    let values = geometric(lambda_max, ratio, count);
    if values.last().map_or(true, |&v| !(v > 0.0)) {
        return Err(GridError::BadRange("ladder underflows".into()));
    }
    Ok(LambdaLadder { lambda_max, ratio, count, values })
}

/// Unit directions with Euclidean caps of relative radius `cap_radius`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSet {
    pub dim: usize,
    pub directions: Vec<Vec<f64>>,
    pub cap_radius: f64,
    pub cap_samples: usize,
    pub covering: bool,
}

pub fn make_direction_set(
    dim: usize,
    n_directions: usize,
    cap_radius: f64,
    cap_samples: usize,
) -> Result<DirectionSet, GridError> {
    if n_directions < 2 {
        return Err(GridError::BadRange("need at least 2 directions".into()));
    }
    let directions = match dim {
        1 => {
            if n_directions != 2 {
                return Err(GridError::BadRange("dim 1 has exactly the directions +1 and -1".into()));
            }
            vec![vec![1.0], vec![-1.0]]
        }
        2 => (0..n_directions)
            .map(|j| {
                let a = 2.0 * std::f64::consts::PI * j as f64 / n_directions as f64;
                vec![snap(a.cos()), snap(a.sin())]
            })
            .collect(),
        _ => return Err(GridError::BadRange("equi-angular sets exist for dim 1 and 2; use from_vectors".into())),
    };
    let mut set = DirectionSet::from_vectors(dim, directions, cap_radius, cap_samples)?;
    set.covering = match dim {
        1 => true,
        _ => (std::f64::consts::PI / n_directions as f64) <= cap_radius.min(1.0).asin(),
    };
    Ok(set)
}

// cos(pi/2) etc. should be exactly zero so lattices are symmetric
fn snap(v: f64) -> f64 {
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

impl DirectionSet {
    pub fn from_vectors(
        dim: usize,
        dirs: Vec<Vec<f64>>,
        cap_radius: f64,
        cap_samples: usize,
    ) -> Result<Self, GridError> {
        if !(cap_radius > 0.0) {
            return Err(GridError::BadRange("cap radius must be positive".into()));
        }
        if cap_samples < 3 {
            return Err(GridError::BadRange("cap_samples must be at least 3".into()));
        }
        let mut directions = Vec::with_capacity(dirs.len());
        for v in dirs {
            if v.len() != dim {
                return Err(GridError::BadRange("direction of wrong dimension".into()));
            }
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(n > 0.0) {
                return Err(GridError::BadRange("zero direction".into()));
            }
            directions.push(if (n - 1.0).abs() < 1e-15 { v } else { v.iter().map(|x| x / n).collect() });
        }
        Ok(DirectionSet { dim, directions, cap_radius, cap_samples, covering: false })
    }

    /// Offsets (in units of the cap radius) used to sample each cap: the centre,
    /// then +/- each axis, then diagonal pairs.
    fn cap_offsets(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        let mut out = vec![vec![0.0; d]];
        for a in 0..d {
            for s in [1.0, -1.0] {
                let mut v = vec![0.0; d];
                v[a] = s;
                out.push(v);
            }
        }
        let r = std::f64::consts::FRAC_1_SQRT_2;
        'outer: for a in 0..d {
            for b in a + 1..d {
                for (sa, sb) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
                    if out.len() >= self.cap_samples {
                        break 'outer;
                    }
                    let mut v = vec![0.0; d];
                    v[a] = sa * r;
                    v[b] = sb * r;
                    out.push(v);
                }
            }
        }
        out.truncate(self.cap_samples);
        out
    }

    /// Cap sample points around `xi` (any length): `xi + |xi| r u`.
    pub fn cap(&self, xi: &[f64]) -> Vec<Vec<f64>> {
        let n = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.cap_offsets()
            .into_iter()
            .map(|u| xi.iter().zip(&u).map(|(x, o)| x + n * self.cap_radius * o).collect())
            .collect()
    }

    /// Same directions with the cap radius scaled by `factor`.
    pub fn shrunk(&self, factor: f64) -> Self {
        DirectionSet { cap_radius: self.cap_radius * factor, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_examples() {
        assert_eq!(geometric(0.25, 0.5, 4), vec![0.25, 0.125, 0.0625, 0.03125]);
        assert!(matches!(make_ladder(0.5, 0.5, 1), Err(GridError::BadRange(_))));
        let l = make_ladder(0.25, 0.5, 8).unwrap();
        assert!((l.values()[7] - 1.953125e-3).abs() < 1e-18);
        assert_eq!(&l.values()[..4], &[0.25, 0.125, 0.0625, 0.03125]);
        assert!(make_ladder(1.5, 0.5, 8).is_err());
        assert!(make_ladder(0.5, 1.0, 8).is_err());
    }

    #[test]
    fn direction_examples() {
        let d1 = make_direction_set(1, 2, 0.1, 3).unwrap();
        assert_eq!(d1.directions, vec![vec![1.0], vec![-1.0]]);
        let d2 = make_direction_set(2, 8, 0.1, 5).unwrap();
        for (j, v) in d2.directions.iter().enumerate() {
            let a = v[1].atan2(v[0]).rem_euclid(2.0 * std::f64::consts::PI);
            assert!((a - j as f64 * std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        }
        let cap = d2.cap(&d2.directions[1]);
        assert_eq!(cap.len(), 5);
        assert_eq!(cap[0], d2.directions[1]);
        for k in &cap[1..] {
            let dist = k.iter().zip(&d2.directions[1]).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            assert!(dist <= 0.1 + 1e-15 && dist > 0.0);
        }
        assert!(!d2.covering);
    }

    #[test]
    fn grid_coordinates_reproducible() {
        let g = Grid::new(vec![-1.0, 0.5], vec![0.1, 0.25], vec![21, 9]).unwrap();
        assert_eq!(g.point(&[3, 4]), vec![-1.0 + 0.1 * 3.0, 0.5 + 0.25 * 4.0]);
        assert_eq!(g.unflatten(9 * 3 + 4), vec![3, 4]);
        assert!(Grid::new(vec![0.0], vec![0.0], vec![8]).is_err());
        assert!(Grid::new(vec![0.0], vec![0.1], vec![7]).is_err());
    }
}
