//! Translation-invariant n-point kernels `φ_n(f_1 ⊗ … ⊗ f_n) = ⟨w(y_1 - y_2), ⊗ f_j⟩`.

use super::{pair, Distribution, PairingError, PairingResult, Side};
use crate::testfn::TestFunction;
use crate::C64;

/// An n-point functional (n ≤ 2) given by a kernel of the difference variables.
#[derive(Debug, Clone)]
pub struct TranslationKernel {
    pub n: usize,
    pub d: usize,
    /// Kernel on ℝ^d (difference variable for n = 2, the point itself for n = 1).
    pub w: Distribution,
    pub hermitean: bool,
    pub local: bool,
    pub label: String,
    /// Extra translation of the functional, one vector per slot.
    shift: Vec<Vec<f64>>,
}

impl TranslationKernel {
    pub fn two_point(w: Distribution, label: &str) -> Self {
        let d = w.dim();
        let hermitean = hermitean_parity(&w).map_or(false, |e| (e - C64::new(1.0, 0.0)).norm() < 1e-12);
        TranslationKernel { n: 2, d, w, hermitean, local: false, label: label.to_string(), shift: vec![vec![0.0; d]; 2] }
    }

    pub fn one_point(w: Distribution, label: &str) -> Self {
        let d = w.dim();
        // φ(f*) = conj φ(f) for real distributions
        let hermitean = w.is_real();
        TranslationKernel { n: 1, d, w, hermitean, local: true, label: label.to_string(), shift: vec![vec![0.0; d]] }
    }

    pub fn with_local(mut self, local: bool) -> Self {
        self.local = local;
        self
    }

    /// The functional composed with translations: `φ_s(f_1 ⊗ … ) = φ(τ_{s_1} f_1 ⊗ …)`.
    pub fn shifted(&self, s: &[Vec<f64>]) -> Self {
        let mut k = self.clone();
        for (a, b) in k.shift.iter_mut().zip(s) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        k
    }

    pub fn dim(&self) -> usize {
        self.n * self.d
    }

    /// Sum of two kernels of the same arity.
    pub fn plus(&self, other: &TranslationKernel) -> Self {
        assert!(self.n == other.n && self.d == other.d);
        let mut k = self.clone();
        k.w = self.w.clone().plus(other.w.clone());
        k.label = format!("{} + {}", self.label, other.label);
        k.hermitean = self.hermitean && other.hermitean;
        k.local = self.local && other.local;
        k
    }

    /// The kernel as a distribution `W` on ℝ^{dn}.
    pub fn as_distribution(&self) -> Distribution {
        let base = match self.n {
            1 => self.w.clone(),
            _ => lift_difference(&self.w),
        };
        // φ(τ_s f) = ⟨W, τ_s f⟩ = ⟨W∘τ_{s}, f⟩: the distribution moves by -s
        let s: Vec<f64> = self.shift.iter().flatten().map(|v| -v).collect();
        if s.iter().all(|v| *v == 0.0) {
            base
        } else {
            base.translated(&s)
        }
    }
}

/// `W(y_1, y_2) = w(y_1 - y_2)` with coordinates ordered `(y_1, y_2)`.
fn lift_difference(w: &Distribution) -> Distribution {
    match w {
        Distribution::Ridge { normal, offset, profile } => {
            let mut a = normal.clone();
            a.extend(normal.iter().map(|v| -v));
            Distribution::Ridge { normal: a, offset: *offset, profile: profile.clone() }
        }
        Distribution::SmoothProfile { factors } if factors.len() > 1 => {
            let d = factors.len();
            Distribution::TensorProduct {
                groups: factors
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        (vec![i, d + i], lift_difference(&Distribution::SmoothProfile { factors: vec![f.clone()] }))
                    })
                    .collect(),
            }
        }
        Distribution::TensorProduct { groups } => {
            let d = w.dim();
            Distribution::TensorProduct {
                groups: groups
                    .iter()
                    .map(|(c, g)| {
                        let mut coords = c.clone();
                        coords.extend(c.iter().map(|i| i + d));
                        (coords, lift_difference(g))
                    })
                    .collect(),
            }
        }
        Distribution::Sum { terms } if w.dim() > 1 => {
            Distribution::Sum { terms: terms.iter().map(|(c, t)| (*c, lift_difference(t))).collect() }
        }
        one_dim => Distribution::Ridge { normal: vec![1.0, -1.0], offset: 0.0, profile: Box::new(one_dim.clone()) },
    }
}

/// `ε` with `w(-t) = ε conj(w(t))` when it can be read off the structure.
fn hermitean_parity(w: &Distribution) -> Option<C64> {
    let one = C64::new(1.0, 0.0);
    match w {
        Distribution::DeltaAt { x0 } if *x0 == 0.0 => Some(one),
        Distribution::DeltaDerivative { x0, order } if *x0 == 0.0 => Some(one * if order % 2 == 0 { 1.0 } else { -1.0 }),
        Distribution::PrincipalValue { x0 } if *x0 == 0.0 => Some(-one),
        // 1/(-t ∓ i0)^a = (-1)^a conj(1/(t ∓ i0)^a)
        Distribution::BoundaryValue { x0, power, side: Side::Minus | Side::Plus } if *x0 == 0.0 => {
            Some(one * if power % 2 == 0 { 1.0 } else { -1.0 })
        }
        Distribution::SmoothProfile { factors } => {
            // check numerically on a few points
            let pts = [0.13, 0.37, 0.71, 1.3];
            let mut eps: Option<C64> = None;
            for f in factors {
                for &t in &pts {
                    let (a, b) = (f.eval(-t), f.eval(t).conj());
                    if b.norm() < 1e-300 {
                        continue;
                    }
                    let e = a / b;
                    match eps {
                        None => eps = Some(e),
                        Some(p) if (p - e).norm() > 1e-12 => return None,
                        _ => {}
                    }
                }
            }
            eps.or(Some(one))
        }
        Distribution::Ridge { offset, profile, .. } if *offset == 0.0 => hermitean_parity(profile),
        Distribution::Sum { terms } => {
            let mut eps: Option<C64> = None;
            for (c, t) in terms {
                let e = hermitean_parity(t)? * (*c / c.conj());
                match eps {
                    None => eps = Some(e),
                    Some(p) if (p - e).norm() > 1e-12 => return None,
                    _ => {}
                }
            }
            eps
        }
        _ => None,
    }
}

/// `φ_n(φ_1 ⊗ … ⊗ φ_n)`.
pub fn kernel_pair_n(u: &TranslationKernel, phis: &[TestFunction]) -> Result<PairingResult, PairingError> {
    if phis.len() != u.n {
        return Err(PairingError::DimensionMismatch { expected: u.n, got: phis.len() });
    }
    let mut t = phis[0].clone();
    for p in &phis[1..] {
        t = t.tensor(p);
    }
    pair(&u.as_distribution(), &t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitean_flags() {
        let bv = Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 1 };
        assert!(!TranslationKernel::two_point(bv.clone(), "bv").hermitean);
        assert!(TranslationKernel::two_point(bv.scaled(C64::new(0.0, 1.0)), "ibv").hermitean);
        assert!(TranslationKernel::two_point(Distribution::DeltaAt { x0: 0.0 }, "d").hermitean);
        let chiral = Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 2 }.scaled(C64::new(-1.0, 0.0));
        assert!(TranslationKernel::two_point(chiral, "c").hermitean);
    }
}
