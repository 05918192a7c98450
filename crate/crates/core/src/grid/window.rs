use super::{Grid, GridError};
use crate::func::{unit_bump_bandwidth, Bump1D, Elementary1D, Factor};
use crate::testfn::{Term, TestFunction};
use crate::C64;
use std::sync::Arc;

/// Entire multipliers for the window-robustness check, in coordinates relative
/// to the window centre.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum Multiplier {
    Identity,
    /// `∏_i (1 + amp cos(freq y_i + phase))`
    Cosine { amp: f64, freq: f64, phase: f64 },
    /// `1 + coef Σ_i y_i²`
    Quadratic { coef: f64 },
}

impl Multiplier {
    pub fn defaults() -> Vec<Multiplier> {
        vec![Multiplier::Cosine { amp: 0.5, freq: 5.0, phase: 0.3 }, Multiplier::Quadratic { coef: 3.0 }]
    }

    pub fn name(&self) -> String {
        match self {
            Multiplier::Identity => "identity".into(),
            Multiplier::Cosine { amp, freq, .. } => format!("1+{amp}cos({freq}y)"),
            Multiplier::Quadratic { coef } => format!("1+{coef}|y|^2"),
        }
    }

    /// Separable expansion on ℝ^dim, factors translated to `center`.
    pub fn terms(&self, center: &[f64]) -> Vec<(f64, Vec<Factor>)> {
        let d = center.len();
        let poly = |c: Vec<f64>| -> Factor { Arc::new(Elementary1D::Polynomial(c)) };
        match self {
            Multiplier::Identity => vec![(1.0, vec![poly(vec![1.0]); d])],
            Multiplier::Cosine { amp, freq, phase } => vec![(
                1.0,
                center
                    .iter()
                    .map(|c| {
                        Arc::new(Elementary1D::OnePlusCos { amp: *amp, freq: *freq, phase: phase - freq * c }) as Factor
                    })
                    .collect(),
            )],
            Multiplier::Quadratic { coef } => {
                let mut out = vec![(1.0, vec![poly(vec![1.0]); d])];
                for a in 0..d {
                    let mut f = vec![poly(vec![1.0]); d];
                    let c = center[a];
                    f[a] = poly(vec![c * c, -2.0 * c, 1.0]);
                    out.push((*coef, f));
                }
                out
            }
        }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        match self {
            Multiplier::Identity => 1.0,
            Multiplier::Cosine { amp, freq, phase } => y.iter().map(|v| 1.0 + amp * (freq * v + phase).cos()).product(),
            Multiplier::Quadratic { coef } => 1.0 + coef * y.iter().map(|v| v * v).sum::<f64>(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum WindowShape {
    /// `exp(a(1 - 1/(1 - |y-c|²/r²)))` on the ball.
    Radial { sharpness: f64 },
    /// Sum of tensor products of one-dimensional factors (cube support).
    Separable { terms: Vec<(f64, Vec<Factor>)> },
}

/// Real smooth window with `h(center) = 1`.
#[derive(Debug, Clone)]
pub struct Window {
    pub center: Vec<f64>,
    pub radius: f64,
    shape: WindowShape,
    multiplier: Multiplier,
    center_value: f64,
    grid: Option<Grid>,
}

/// Standard radial bump on `grid`.
pub fn make_bump(center: &[f64], radius: f64, grid: &Grid) -> Result<Window, GridError> {
    if grid.dim() != center.len() {
        return Err(GridError::BadRange("grid and centre dimensions differ".into()));
    }
    for a in 0..grid.dim() {
        let h = grid.spacing()[a];
        let pts = (2.0 * radius / h).floor() as usize;
        if pts < 5 || radius <= 2.0 * h {
            return Err(GridError::RadiusTooSmall { axis: a, points: pts });
        }
        if center[a] - radius < grid.lower(a) - 1e-12 || center[a] + radius > grid.upper(a) + 1e-12 {
            return Err(GridError::BadRange("ball not inside the grid".into()));
        }
    }
    let mut w = Window::radial(center, radius, 1.0);
    w.grid = Some(grid.clone());
    Ok(w)
}

impl Window {
    pub fn radial(center: &[f64], radius: f64, sharpness: f64) -> Self {
        Window {
            center: center.to_vec(),
            radius,
            shape: WindowShape::Radial { sharpness },
            multiplier: Multiplier::Identity,
            center_value: 1.0,
            grid: None,
        }
    }

    /// Tensor product of one-dimensional bumps of the given sharpness.
    pub fn product(center: &[f64], radius: f64, sharpness: f64) -> Self {
        let factors = center.iter().map(|&c| Arc::new(Bump1D::new(c, radius, sharpness)) as Factor).collect();
        Window {
            center: center.to_vec(),
            radius,
            shape: WindowShape::Separable { terms: vec![(1.0, factors)] },
            multiplier: Multiplier::Identity,
            center_value: 1.0,
            grid: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }
    pub fn shape(&self) -> &WindowShape {
        &self.shape
    }
    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }
    pub fn is_separable(&self) -> bool {
        matches!(self.shape, WindowShape::Separable { .. })
    }

    fn raw(&self, y: &[f64]) -> f64 {
        match &self.shape {
            WindowShape::Radial { sharpness } => {
                let r2: f64 = y.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / (self.radius * self.radius);
                if r2 >= 1.0 {
                    0.0
                } else {
                    (sharpness * (1.0 - 1.0 / (1.0 - r2))).exp()
                        * self.multiplier.eval(&y.iter().zip(&self.center).map(|(a, b)| a - b).collect::<Vec<_>>())
                }
            }
            WindowShape::Separable { terms } => {
                terms.iter().map(|(c, fs)| c * fs.iter().zip(y).map(|(f, v)| f.eval(*v).re).product::<f64>()).sum()
            }
        }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let v = self.raw(y);
        if v == 0.0 {
            0.0
        } else {
            v / self.center_value
        }
    }

    /// Values on a grid, row-major.
    pub fn sample_on(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.len()).map(|i| self.eval(&grid.point(&grid.unflatten(i)))).collect()
    }

    /// Window `φ·h` renormalized to 1 at the centre.
    pub fn with_multiplier(&self, m: &Multiplier) -> Result<Self, GridError> {
        let zero = vec![0.0; self.dim()];
        if m.eval(&zero) == 0.0 {
            return Err(GridError::BadRange("multiplier vanishes at the window centre".into()));
        }
        let mut w = self.clone();
        match &mut w.shape {
            WindowShape::Radial { .. } => {
                if self.multiplier != Multiplier::Identity {
                    return Err(GridError::BadRange("radial windows carry a single multiplier".into()));
                }
                w.multiplier = m.clone();
            }
            WindowShape::Separable { terms } => {
                let mut out = Vec::new();
                for (c, fs) in terms.iter() {
                    for (mc, mf) in m.terms(&self.center) {
                        let factors = fs
                            .iter()
                            .zip(&mf)
                            .map(|(f, g)| Arc::new(crate::func::Product1D { a: g.clone(), b: f.clone() }) as Factor)
                            .collect();
                        out.push((c * mc, factors));
                    }
                }
                *terms = out;
                w.multiplier = m.clone();
            }
        }
        w.center_value = 1.0;
        w.center_value = w.raw(&self.center);
        Ok(w)
    }

    /// The same window moved to `center`.
    pub fn recentered(&self, center: &[f64]) -> Self {
        let mut w = match &self.shape {
            WindowShape::Radial { sharpness } => Window::radial(center, self.radius, *sharpness),
            WindowShape::Separable { terms } => {
                let shift: Vec<f64> = center.iter().zip(&self.center).map(|(a, b)| a - b).collect();
                let terms = terms
                    .iter()
                    .map(|(c, fs)| {
                        (
                            *c,
                            fs.iter()
                                .enumerate()
                                .map(|(a, f)| {
                                    if shift[a] == 0.0 {
                                        f.clone()
                                    } else {
                                        Arc::new(crate::func::Scaled1D::shifted(f.clone(), shift[a])) as Factor
                                    }
                                })
                                .collect(),
                        )
                    })
                    .collect();
                Window {
                    center: center.to_vec(),
                    radius: self.radius,
                    shape: WindowShape::Separable { terms },
                    multiplier: self.multiplier.clone(),
                    center_value: self.center_value,
                    grid: None,
                }
            }
        };
        if let WindowShape::Radial { .. } = self.shape {
            w.multiplier = self.multiplier.clone();
            w.center_value = self.center_value;
        }
        w
    }

    /// Separable windows as test functions (normalization folded into the coefficients).
    pub fn as_test_function(&self) -> Option<TestFunction> {
        match &self.shape {
            WindowShape::Radial { .. } if self.dim() == 1 => {
                let WindowShape::Radial { sharpness } = self.shape else { unreachable!() };
                let base = Window::product(&self.center, self.radius, sharpness);
                let base = if self.multiplier == Multiplier::Identity {
                    base
                } else {
                    base.with_multiplier(&self.multiplier).ok()?
                };
                base.as_test_function()
            }
            WindowShape::Radial { .. } => None,
            WindowShape::Separable { terms } => Some(TestFunction::from_terms(
                self.dim(),
                terms
                    .iter()
                    .map(|(c, fs)| Term { coeff: C64::new(c / self.center_value, 0.0), factors: fs.clone() })
                    .collect(),
            )),
        }
    }

    /// Per-axis bandwidth bound.
    pub fn bandwidth(&self) -> Vec<f64> {
        match &self.shape {
            WindowShape::Radial { sharpness } => {
                let extra = match &self.multiplier {
                    Multiplier::Cosine { freq, .. } => freq.abs(),
                    _ => 0.0,
                };
                vec![unit_bump_bandwidth(*sharpness) / self.radius + extra; self.dim()]
            }
            WindowShape::Separable { terms } => {
                let mut out = vec![0.0f64; self.dim()];
                for (_, fs) in terms {
                    for (a, f) in fs.iter().enumerate() {
                        out[a] = out[a].max(f.bandwidth());
                    }
                }
                out
            }
        }
    }

    pub fn multiplier(&self) -> &Multiplier {
        &self.multiplier
    }
}
