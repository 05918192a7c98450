//! Projection of a separable test function onto a ridge variable `s = a·y - c`.

use super::PairingError;
use crate::func::{integral, Factor, Fn1D, Interval};
use crate::quad::convolve;
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// `R(s) = ∫ ∏ φ_i(y_i) δ(a·y - c - s) dy`, so that `⟨F(a·y - c), φ⟩ = ⟨F, R⟩`.
///
/// With two or more active axes `R` is a convolution of the rescaled factors,
/// evaluated by discrete convolution on a lattice aligned with the requested
/// output nodes (trapezoid sums, spectrally accurate for compact smooth factors).
#[derive(Debug, Clone)]
pub struct RidgeProjection {
    active: Vec<(f64, Factor)>,
    constant: C64,
    offset: f64,
}

impl RidgeProjection {
    pub fn new(normal: &[f64], offset: f64, factors: &[Factor]) -> Result<Self, PairingError> {
        let mut active = Vec::new();
        let mut constant = C64::new(1.0, 0.0);
        for (&a, f) in normal.iter().zip(factors) {
            if a == 0.0 {
                if !f.support().is_bounded() {
                    return Err(PairingError::Unsupported("non-compact factor along a ridge".into()));
                }
                constant *= integral(f.as_ref());
            } else {
                active.push((a, f.clone()));
            }
        }
        if active.is_empty() {
            return Err(PairingError::Unsupported("ridge normal is zero".into()));
        }
        Ok(RidgeProjection { active, constant, offset })
    }

    pub fn is_zero(&self) -> bool {
        self.constant == ZERO || self.active.iter().any(|(_, f)| f.support().is_empty())
    }

    /// Density of `a_i y_i` at `z`.
    fn density(&self, i: usize, z: f64) -> C64 {
        let (a, f) = &self.active[i];
        f.eval(z / a) / a.abs()
    }

    fn density_support(&self, i: usize) -> Interval {
        let (a, f) = &self.active[i];
        let s = f.support();
        if *a > 0.0 {
            Interval::new(a * s.lo, a * s.hi)
        } else {
            Interval::new(a * s.hi, a * s.lo)
        }
    }

    fn lattice_step(&self) -> f64 {
        let bw: f64 = self.active.iter().map(|(a, f)| f.bandwidth() / a.abs()).sum();
        std::f64::consts::PI / (1.5 * bw.max(1e-12))
    }

    /// Convolution of densities `1..` sampled on `h·ℤ`; returns (first index, values).
    fn tail_convolution(&self, h: f64) -> (i64, Vec<C64>) {
        let mut lo = 0i64;
        let mut acc = vec![C64::new(1.0, 0.0)];
        let mut first = true;
        for i in 1..self.active.len() {
            let s = self.density_support(i);
            let j0 = (s.lo / h).floor() as i64;
            let j1 = (s.hi / h).ceil() as i64;
            let (a, f) = &self.active[i];
            let vals = density_on_lattice(*a, f, h, j0, j1);
            if first {
                lo = j0;
                acc = vals;
                first = false;
                continue;
            }
            lo += j0;
            acc = convolve(&acc, &vals).into_iter().map(|v| v * h).collect();
        }
        (lo, acc)
    }
}

/// `f(j h / a) / |a|` for `j0 ≤ j ≤ j1`, through one call to `sample`.
fn density_on_lattice(a: f64, f: &Factor, h: f64, j0: i64, j1: i64) -> Vec<C64> {
    let n = (j1 - j0 + 1) as usize;
    let step = h / a;
    let mut v = if step > 0.0 { f.sample(j0 as f64 * step, step, n) } else { f.sample(j1 as f64 * step, -step, n) };
    if step < 0.0 {
        v.reverse();
    }
    v.into_iter().map(|x| x / a.abs()).collect()
}

impl Fn1D for RidgeProjection {
    fn eval(&self, t: f64) -> C64 {
        self.sample(t, 1.0, 1)[0]
    }

    fn support(&self) -> Interval {
        let mut lo = 0.0;
        let mut hi = 0.0;
        for i in 0..self.active.len() {
            let s = self.density_support(i);
            lo += s.lo;
            hi += s.hi;
        }
        Interval::new(lo - self.offset, hi - self.offset)
    }

    fn bandwidth(&self) -> f64 {
        self.active.iter().map(|(a, f)| f.bandwidth() / a.abs()).fold(f64::INFINITY, f64::min)
    }

    fn sup_norm(&self) -> f64 {
        // crude: sup of the first density times the L1 mass of the others
        let mut b = self.constant.norm() * self.active[0].1.sup_norm() / self.active[0].0.abs();
        for (_, f) in &self.active[1..] {
            b *= f.sup_norm() * f.support().width();
        }
        b
    }

    fn sample(&self, t0: f64, dt: f64, n: usize) -> Vec<C64> {
        let sup = self.support();
        if self.active.len() == 1 {
            return (0..n)
                .map(|j| {
                    let s = t0 + j as f64 * dt;
                    if sup.contains(s) {
                        self.density(0, s + self.offset) * self.constant
                    } else {
                        ZERO
                    }
                })
                .collect();
        }
        let need = self.lattice_step();
        let (h, m) = if n > 1 {
            let m = (dt / need).ceil().max(1.0) as usize;
            (dt / m as f64, m)
        } else {
            (need, 1)
        };
        let (qlo, q) = self.tail_convolution(h);
        // R(s) = Σ_l ρ_0(s + c - v_l) Q(v_l) h with v_l = (qlo + l) h; the
        // arguments s_j + c - v_l lie on base + ℤh.
        let base = t0 + self.offset;
        let s0 = self.density_support(0);
        let (a0, f0) = &self.active[0];
        // index k ↔ base + (k - off)·h; enumerate needed range
        let kmin = ((s0.lo - base) / h).floor() as i64 - 1;
        let kmax = ((s0.hi - base) / h).ceil() as i64 + 1;
        let rho: Vec<C64> = if base == 0.0 {
            density_on_lattice(*a0, f0, h, kmin, kmax)
        } else {
            let step = h / a0;
            let (start, rev) = if step > 0.0 { (base + kmin as f64 * h, false) } else { (base + kmax as f64 * h, true) };
            let mut v = f0.sample(start / a0, step.abs(), (kmax - kmin + 1) as usize);
            if rev {
                v.reverse();
            }
            v.into_iter().map(|x| x / a0.abs()).collect()
        };
        // R(s_j) = h Σ_l rho[jm - qlo - l - kmin] q[l]
        let c = convolve(&rho, &q);
        (0..n)
            .map(|j| {
                let s = t0 + j as f64 * dt;
                if !sup.contains(s) {
                    return ZERO;
                }
                let idx = (j * m) as i64 - qlo - kmin;
                if idx < 0 || idx as usize >= c.len() {
                    return ZERO;
                }
                c[idx as usize] * h * self.constant
            })
            .collect()
    }

    fn is_real(&self) -> bool {
        self.constant.im == 0.0 && self.active.iter().all(|(_, f)| f.is_real())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Bump1D;
    use crate::quad::GaussLegendre;
    use std::sync::Arc;

    #[test]
    fn two_axis_projection_matches_direct_line_integral() {
        let f1: Factor = Arc::new(Bump1D::new(0.1, 0.5, 2.0));
        let f2: Factor = Arc::new(Bump1D::new(-0.2, 0.4, 3.0));
        let a = [0.6, -0.8];
        let r = RidgeProjection::new(&a, 0.05, &[f1.clone(), f2.clone()]).unwrap();
        let g = GaussLegendre::g16();
        for &s in &[-0.3, 0.0, 0.21] {
            // y2 = (a1 y1 - c - s)/(-a2)... integrate over y1
            let direct = g.integrate(
                |y1| f1.eval(y1) * f2.eval((s + 0.05 - a[0] * y1) / a[1]) / a[1].abs(),
                -0.4,
                0.6,
                64,
            );
            let v = r.eval(s);
            assert!((v - direct).norm() < 1e-12, "{v} {direct}");
            let w = r.sample(s - 0.01, 0.01, 3)[1];
            assert!((w - direct).norm() < 1e-12);
        }
    }
}
