//! Test functions on ℝ^m represented as finite sums of tensor products of
//! one-dimensional factors.

use crate::func::{Factor, Fn1D, Interval, Modulated1D, Product1D, Scaled1D};
use crate::grid::Grid;
use crate::C64;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub struct Term {
    pub coeff: C64,
    pub factors: Vec<Factor>,
}

impl Term {
    pub fn eval(&self, x: &[f64]) -> C64 {
        let mut v = self.coeff;
        for (f, xi) in self.factors.iter().zip(x) {
            if v == C64::new(0.0, 0.0) {
                break;
            }
            v *= f.eval(*xi);
        }
        v
    }
}

#[derive(Debug, Clone)]
pub struct TestFunction {
    dim: usize,
    terms: Vec<Term>,
    grid: Option<Grid>,
}

impl TestFunction {
    pub fn separable(factors: Vec<Factor>) -> Self {
        let dim = factors.len();
        TestFunction { dim, terms: vec![Term { coeff: C64::new(1.0, 0.0), factors }], grid: None }
    }

    pub fn from_terms(dim: usize, terms: Vec<Term>) -> Self {
        assert!(terms.iter().all(|t| t.factors.len() == dim));
        TestFunction { dim, terms, grid: None }
    }

    pub fn zero(dim: usize) -> Self {
        TestFunction { dim, terms: Vec::new(), grid: None }
    }

    pub fn one_dim(f: impl Fn1D + 'static) -> Self {
        Self::separable(vec![Arc::new(f)])
    }

    /// Attach the grid the function is considered sampled on; pairings then
    /// use its spacing and refuse unresolved bandwidths.
    pub fn with_grid(mut self, grid: Grid) -> Self {
        assert_eq!(grid.dim(), self.dim);
        self.grid = Some(grid);
        self
    }

    pub fn grid(&self) -> Option<&Grid> {
        self.grid.as_ref()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: &[f64]) -> C64 {
        assert_eq!(x.len(), self.dim);
        self.terms.iter().map(|t| t.eval(x)).sum()
    }

    pub fn scaled(&self, c: C64) -> Self {
        let terms = self.terms.iter().map(|t| Term { coeff: t.coeff * c, factors: t.factors.clone() }).collect();
        TestFunction { dim: self.dim, terms, grid: self.grid.clone() }
    }

    pub fn add(&self, other: &TestFunction) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TestFunction { dim: self.dim, terms, grid: self.grid.clone().or_else(|| other.grid.clone()) }
    }

    /// `φ(· - s)`.
    pub fn translated(&self, s: &[f64]) -> Self {
        assert_eq!(s.len(), self.dim);
        self.map_factors(|_, a, f| if s[a] == 0.0 { f.clone() } else { Arc::new(Scaled1D::shifted(f.clone(), s[a])) })
    }

    /// `e^{-i ω·x} φ(x)`.
    pub fn modulated(&self, omega: &[f64]) -> Self {
        assert_eq!(omega.len(), self.dim);
        self.map_factors(|_, a, f| {
            if omega[a] == 0.0 {
                f.clone()
            } else {
                Arc::new(Modulated1D { base: f.clone(), omega: omega[a] })
            }
        })
    }

    /// Product with a separable multiplier given as terms of entire factors.
    pub fn multiplied(&self, mult: &[(f64, Vec<Factor>)]) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            for (c, mf) in mult {
                let factors = t
                    .factors
                    .iter()
                    .zip(mf)
                    .map(|(f, m)| Arc::new(Product1D { a: m.clone(), b: f.clone() }) as Factor)
                    .collect();
                terms.push(Term { coeff: t.coeff * *c, factors });
            }
        }
        TestFunction { dim: self.dim, terms, grid: None }
    }

    /// `φ ⊗ ψ` on ℝ^{m+m'}.
    pub fn tensor(&self, other: &TestFunction) -> Self {
        let mut terms = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Term { coeff: a.coeff * b.coeff, factors });
            }
        }
        TestFunction { dim: self.dim + other.dim, terms, grid: None }
    }

    fn map_factors(&self, f: impl Fn(usize, usize, &Factor) -> Factor) -> Self {
        let terms = self
            .terms
            .iter()
            .enumerate()
            .map(|(i, t)| Term { coeff: t.coeff, factors: t.factors.iter().enumerate().map(|(a, x)| f(i, a, x)).collect() })
            .collect();
        TestFunction { dim: self.dim, terms, grid: None }
    }

    /// Bounding box of the support, per axis.
    pub fn support_box(&self) -> Vec<Interval> {
        let mut out = vec![Interval::new(f64::INFINITY, f64::NEG_INFINITY); self.dim];
        for t in &self.terms {
            for (a, f) in t.factors.iter().enumerate() {
                let s = f.support();
                out[a] = Interval::new(out[a].lo.min(s.lo), out[a].hi.max(s.hi));
            }
        }
        out
    }

    /// Per-axis bandwidth bound.
    pub fn bandwidth(&self) -> Vec<f64> {
        let mut out = vec![0.0f64; self.dim];
        for t in &self.terms {
            for (a, f) in t.factors.iter().enumerate() {
                out[a] = out[a].max(f.bandwidth());
            }
        }
        out
    }

    pub fn sup_norm_bound(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm() * t.factors.iter().map(|f| f.sup_norm()).product::<f64>()).sum()
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.im == 0.0 && t.factors.iter().all(|f| f.is_real()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Bump1D;

    #[test]
    fn translation_and_modulation_act_pointwise() {
        let phi = TestFunction::separable(vec![Arc::new(Bump1D::new(0.0, 1.0, 1.0)), Arc::new(Bump1D::new(0.5, 0.7, 2.0))]);
        let x = [0.3, 0.4];
        let s = [0.1, -0.2];
        let t = phi.translated(&s);
        assert!((t.eval(&x) - phi.eval(&[0.2, 0.6])).norm() < 1e-15);
        let w = [3.0, -5.0];
        let m = phi.modulated(&w);
        let ph = C64::from_polar(1.0, -(3.0 * 0.3 - 5.0 * 0.4));
        assert!((m.eval(&x) - phi.eval(&x) * ph).norm() < 1e-14);
    }
}
