//! Turning a λ-ladder of magnitudes into a Regular / Singular / Indeterminate verdict.

use crate::oscillatory::IntegralRecord;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, PartialOrd, Ord)]
pub enum Classification {
    Regular,
    Singular,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayThresholds {
    pub n_rapid: f64,
    pub n_sing: f64,
    /// Floor relative to the largest magnitude on the coarse half.
    pub floor_rel: f64,
}

impl Default for DecayThresholds {
    fn default() -> Self {
        DecayThresholds { n_rapid: 5.0, n_sing: 1.5, floor_rel: 1e-11 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DecayError {
    #[error("need at least 6 ladder points, got {0}")]
    TooShort(usize),
    #[error("non-finite magnitude at lambda = {0}")]
    NonFinite(f64),
    #[error("ladder and magnitudes differ in length")]
    LengthMismatch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub lambdas: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Least-squares slope of `log|I|` against `log λ` on the finest half; `+∞` when all magnitudes vanish.
    pub slope: f64,
    pub r2: f64,
    pub floor: f64,
    pub floor_hit: bool,
    pub trivial_order: f64,
    pub thresholds: DecayThresholds,
    /// All magnitudes were exactly zero.
    pub degenerate: bool,
    pub classification: Classification,
}

impl DecayFit {
    fn classify(&mut self) {
        let t = self.trivial_order;
        self.classification = if self.floor_hit || self.slope >= self.thresholds.n_rapid + t {
            Classification::Regular
        } else if self.slope <= self.thresholds.n_sing + t {
            Classification::Singular
        } else {
            Classification::Indeterminate
        };
    }

    /// Slope in excess of the trivial prefactor.
    pub fn excess_slope(&self) -> f64 {
        self.slope - self.trivial_order
    }
}

/// Fit the ladder. Regressors are `log(λ_j/λ_0)`, so rescaling the whole ladder by a
/// power of two leaves the fit bitwise unchanged.
pub fn fit_decay(lambdas: &[f64], magnitudes: &[f64], thresholds: DecayThresholds) -> Result<DecayFit, DecayError> {
    let n = lambdas.len();
    if magnitudes.len() != n {
        return Err(DecayError::LengthMismatch);
    }
    if n < 6 {
        return Err(DecayError::TooShort(n));
    }
    if let Some(i) = magnitudes.iter().position(|m| !m.is_finite()) {
        return Err(DecayError::NonFinite(lambdas[i]));
    }
    let coarse = &magnitudes[..n - n / 2];
    let fine_start = n - n / 2;
    let floor = (thresholds.floor_rel * coarse.iter().cloned().fold(0.0, f64::max)).max(1e-300);
    let mut fit = DecayFit {
        lambdas: lambdas.to_vec(),
        magnitudes: magnitudes.to_vec(),
        slope: f64::INFINITY,
        r2: 1.0,
        floor,
        floor_hit: false,
        trivial_order: 0.0,
        thresholds,
        degenerate: false,
        classification: Classification::Regular,
    };
    if magnitudes.iter().all(|&m| m == 0.0) {
        fit.degenerate = true;
        fit.floor_hit = true;
        return Ok(fit);
    }
    let fine = &magnitudes[fine_start..];
    fit.floor_hit = fine.iter().all(|&m| m < floor);
    let xs: Vec<f64> = lambdas[fine_start..].iter().map(|l| (l / lambdas[0]).ln()).collect();
    let ys: Vec<f64> = fine.iter().map(|m| m.max(1e-300).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    fit.slope = sxy / sxx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - my - fit.slope * (x - mx)).powi(2)).sum();
    fit.r2 = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };
    fit.classify();
    Ok(fit)
}

/// Shift both thresholds by `trivial_order`; the slope is untouched.
pub fn polynomial_prefactor_adjust(fit: &DecayFit, trivial_order: f64) -> DecayFit {
    let mut f = fit.clone();
    f.trivial_order = trivial_order;
    if !f.degenerate {
        f.classify();
    }
    f
}

/// Fit per-λ groups of records (one group per ladder entry) using the max over each cap.
pub fn fit_records(groups: &[Vec<IntegralRecord>], thresholds: DecayThresholds) -> Result<DecayFit, DecayError> {
    let lambdas: Vec<f64> = groups.iter().map(|g| g.first().map_or(f64::NAN, |r| r.lambda)).collect();
    let mags: Vec<f64> = groups.iter().map(|g| g.iter().map(|r| r.value.norm()).fold(0.0, f64::max)).collect();
    fit_decay(&lambdas, &mags, thresholds)
}

/// The fit, downgraded to Indeterminate when dropping the two coarsest entries
/// would flip Regular and Singular.
pub fn suffix_checked(fit: &DecayFit) -> DecayFit {
    let n = fit.lambdas.len();
    if n < 8 || fit.degenerate {
        return fit.clone();
    }
    let Ok(short) = fit_decay(&fit.lambdas[2..], &fit.magnitudes[2..], fit.thresholds) else {
        return fit.clone();
    };
    let short = polynomial_prefactor_adjust(&short, fit.trivial_order);
    let flip = matches!(
        (fit.classification, short.classification),
        (Classification::Regular, Classification::Singular) | (Classification::Singular, Classification::Regular)
    );
    let mut out = fit.clone();
    if flip {
        out.classification = Classification::Indeterminate;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::geometric;

    fn ladder() -> Vec<f64> {
        geometric(0.25, std::f64::consts::FRAC_1_SQRT_2, 12)
    }

    #[test]
    fn exact_power_law() {
        let l = ladder();
        let m: Vec<f64> = l.iter().map(|x| x * x).collect();
        let f = fit_decay(&l, &m, DecayThresholds::default()).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert_eq!(f.classification, Classification::Indeterminate);
    }

    #[test]
    fn constant_is_singular() {
        let l = ladder();
        let f = fit_decay(&l, &vec![1.0; 12], DecayThresholds::default()).unwrap();
        assert_eq!(f.slope, 0.0);
        assert_eq!(f.classification, Classification::Singular);
    }

    #[test]
    fn all_zero_is_degenerate_regular() {
        let l = ladder();
        let f = fit_decay(&l, &vec![0.0; 12], DecayThresholds::default()).unwrap();
        assert!(f.degenerate && f.slope == f64::INFINITY);
        assert_eq!(f.classification, Classification::Regular);
    }

    #[test]
    fn prefactor_examples() {
        let l = ladder();
        let mk = |s: f64| fit_decay(&l, &l.iter().map(|x| x.powf(s)).collect::<Vec<_>>(), DecayThresholds::default()).unwrap();
        assert_eq!(polynomial_prefactor_adjust(&mk(1.0), 1.0).classification, Classification::Singular);
        assert_eq!(polynomial_prefactor_adjust(&mk(7.0), 1.0).classification, Classification::Regular);
        assert_eq!(polynomial_prefactor_adjust(&mk(3.0), 0.0).classification, Classification::Indeterminate);
    }

    #[test]
    fn short_ladder_rejected() {
        assert_eq!(fit_decay(&[0.1; 5], &[1.0; 5], DecayThresholds::default()), Err(DecayError::TooShort(5)));
    }
}
