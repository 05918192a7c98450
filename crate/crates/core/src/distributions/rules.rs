//! One-dimensional pairing rules against a single smooth factor.

use super::{Method, PairingError, PairingResult, Side};
use crate::func::{resolving_spacing, Fn1D, Interval};
use crate::quad::{neville_at_zero, GaussLegendre};
use crate::C64;
use std::f64::consts::PI;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

pub(crate) struct Ctx {
    /// Upper bound on the spacing imposed by an attached grid.
    pub dt_cap: Option<f64>,
}

impl Ctx {
    pub fn spacing(&self, f: &dyn Fn1D) -> Result<f64, PairingError> {
        let bw = f.bandwidth();
        if let Some(h) = self.dt_cap {
            if bw * h > PI {
                return Err(PairingError::UnresolvedOscillation { bandwidth: bw, spacing: h });
            }
        }
        let dt = resolving_spacing(bw);
        let w = f.support().width();
        if f.support().is_bounded() && w / dt > 4.0e6 {
            return Err(PairingError::UnresolvedOscillation { bandwidth: bw, spacing: w / 4.0e6 });
        }
        Ok(match self.dt_cap {
            Some(h) => dt.min(h),
            None => dt,
        })
    }
}

fn ensure_compact(f: &dyn Fn1D) -> Result<Interval, PairingError> {
    let s = f.support();
    if !s.is_bounded() {
        return Err(PairingError::Unsupported("test function without compact support".into()));
    }
    Ok(s)
}

pub(crate) fn delta(f: &dyn Fn1D, x0: f64) -> PairingResult {
    PairingResult::analytic(f.eval(x0))
}

pub(crate) fn delta_derivative(ctx: &Ctx, f: &dyn Fn1D, x0: f64, order: usize) -> Result<PairingResult, PairingError> {
    let sign = if order % 2 == 0 { 1.0 } else { -1.0 };
    if let Some(d) = f.derivative(order, x0) {
        return Ok(PairingResult::analytic(d * sign));
    }
    // symmetric finite differences of two widths
    let h = ctx.spacing(f)? * 0.25;
    let d1 = fd_derivative(f, x0, order, h, order / 2 + 4);
    let d2 = fd_derivative(f, x0, order, h, order / 2 + 3);
    Ok(PairingResult { value: d1 * sign, method: Method::Quadrature { order: 2 * (order / 2 + 4) as u32 }, error_estimate: (d1 - d2).norm() })
}

fn fd_derivative(f: &dyn Fn1D, x0: f64, order: usize, h: f64, half: usize) -> C64 {
    let nodes: Vec<f64> = (-(half as i64)..=half as i64).map(|j| j as f64).collect();
    let w = fornberg(&nodes, order);
    nodes.iter().zip(&w).map(|(&j, &c)| f.eval(x0 + j * h) * c).sum::<C64>() / h.powi(order as i32)
}

/// Finite-difference weights at 0 for the given nodes.
fn fornberg(x: &[f64], m: usize) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0];
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i];
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|r| r[m]).collect()
}

/// Trapezoid sum on a grid aligned to `anchor + (j + shift) dt`, covering `s`.
fn aligned_sum(f: &dyn Fn1D, s: Interval, anchor: f64, shift: f64, dt: f64, g: impl Fn(f64, C64) -> C64) -> C64 {
    let j0 = ((s.lo - anchor) / dt - shift).floor() as i64 - 1;
    let j1 = ((s.hi - anchor) / dt - shift).ceil() as i64 + 1;
    let n = (j1 - j0 + 1) as usize;
    let t0 = anchor + (j0 as f64 + shift) * dt;
    let vals = f.sample(t0, dt, n);
    let mut acc = ZERO;
    for (j, v) in vals.into_iter().enumerate() {
        if v != ZERO {
            acc += g(t0 + j as f64 * dt, v);
        }
    }
    acc * dt
}

pub(crate) fn integral(ctx: &Ctx, f: &dyn Fn1D) -> Result<PairingResult, PairingError> {
    let s = ensure_compact(f)?;
    if s.is_empty() {
        return Ok(PairingResult::analytic(ZERO));
    }
    let dt = ctx.spacing(f)?;
    let fine = aligned_sum(f, s, s.lo, 0.0, dt, |_, v| v);
    let coarse = aligned_sum(f, s, s.lo, 0.0, 2.0 * dt, |_, v| v);
    Ok(PairingResult::quadrature(fine, (fine - coarse).norm(), 2))
}

pub(crate) fn smooth(ctx: &Ctx, f: &dyn Fn1D, s: &dyn Fn1D) -> Result<PairingResult, PairingError> {
    let sup = ensure_compact(f)?.intersect(&s.support());
    if sup.is_empty() {
        return Ok(PairingResult::analytic(ZERO));
    }
    let bw = f.bandwidth() + s.bandwidth();
    let dt = resolving_spacing(bw).min(ctx.spacing(f)?);
    let fine = aligned_sum(f, sup, sup.lo, 0.0, dt, |t, v| v * s.eval(t));
    let coarse = aligned_sum(f, sup, sup.lo, 0.0, 2.0 * dt, |t, v| v * s.eval(t));
    Ok(PairingResult::quadrature(fine, (fine - coarse).norm(), 2))
}

pub(crate) fn heaviside(ctx: &Ctx, f: &dyn Fn1D, x0: f64) -> Result<PairingResult, PairingError> {
    let s = ensure_compact(f)?;
    if x0 >= s.hi {
        return Ok(PairingResult::analytic(ZERO));
    }
    if x0 <= s.lo {
        return integral(ctx, f);
    }
    let dt = ctx.spacing(f)?;
    let g = GaussLegendre::g16();
    let len = s.hi - x0;
    let fine_panels = ((len / (4.0 * dt)).ceil() as usize).max(1);
    let fine = g.integrate(|t| f.eval(t), x0, s.hi, 2 * fine_panels);
    let coarse = g.integrate(|t| f.eval(t), x0, s.hi, fine_panels);
    Ok(PairingResult::quadrature(fine, (fine - coarse).norm(), 16))
}

/// Principal value by the offset-midpoint rule `Σ φ(x0 + (j+½)h) / ((j+½)h) h`,
/// i.e. the symmetric excision of `(-h/2, h/2)` with its own midpoint
/// sum, which is spectrally accurate; refined against spacing `2h`.
pub(crate) fn principal_value(ctx: &Ctx, f: &dyn Fn1D, x0: f64) -> Result<PairingResult, PairingError> {
    let s = ensure_compact(f)?;
    if s.is_empty() {
        return Ok(PairingResult::analytic(ZERO));
    }
    let dt = ctx.spacing(f)?;
    let rule = |h: f64| aligned_sum(f, s, x0, 0.5, h, |t, v| v / (t - x0));
    let fine = rule(dt);
    let coarse = rule(2.0 * dt);
    Ok(PairingResult::quadrature(fine, (fine - coarse).norm(), 2))
}

/// `1/((x - x0) ∓ i0)^power`, sign per [`Side`].
pub(crate) fn boundary_value(
    ctx: &Ctx,
    f: &dyn Fn1D,
    x0: f64,
    side: Side,
    power: u32,
) -> Result<PairingResult, PairingError> {
    let s = ensure_compact(f)?;
    if s.is_empty() {
        return Ok(PairingResult::analytic(ZERO));
    }
    if power == 1 {
        let pv = principal_value(ctx, f, x0)?;
        let jump = C64::new(0.0, PI * side.i0_sign()) * f.eval(x0);
        return Ok(PairingResult { value: pv.value + jump, ..pv });
    }
    let dt = ctx.spacing(f)?;
    let a = power as i32;
    if x0 < s.lo || x0 > s.hi {
        // no singularity on the support
        let rule = |h: f64| aligned_sum(f, s, x0, 0.5, h, |t, v| v / (t - x0).powi(a));
        let fine = rule(dt);
        let coarse = rule(2.0 * dt);
        return Ok(PairingResult::quadrature(fine, (fine - coarse).norm(), 2));
    }
    epsilon_extrapolated(f, s, x0, side, power, dt)
}

fn epsilon_extrapolated(f: &dyn Fn1D, s: Interval, x0: f64, side: Side, power: u32, dt: f64) -> Result<PairingResult, PairingError> {
    let g = GaussLegendre::g16();
    let levels: usize = 6;
    let eps0 = 4.0 * dt;
    let eps: Vec<f64> = (0..levels).map(|j| eps0 * 0.5f64.powi(j as i32)).collect();
    let shift = C64::new(0.0, side.i0_sign());
    let mut vals = Vec::with_capacity(levels);
    for &e in &eps {
        // uniform panels of width <= 2 dt, refined geometrically towards x0
        let mut br: Vec<f64> = Vec::new();
        let n = ((s.width() / (2.0 * dt)).ceil() as usize).max(1);
        for j in 0..=n {
            br.push(s.lo + s.width() * j as f64 / n as f64);
        }
        let mut r = e / 8.0;
        while r < 4.0 * dt {
            for c in [x0 - r, x0 + r] {
                if c > s.lo && c < s.hi {
                    br.push(c);
                }
            }
            r *= 2.0;
        }
        br.push(x0);
        br.sort_by(|a, b| a.partial_cmp(b).unwrap());
        br.dedup();
        let mut acc = ZERO;
        for w in br.windows(2) {
            acc += g.integrate(|t| f.eval(t) / (C64::new(t - x0, 0.0) - shift * e).powu(power), w[0], w[1], 1);
        }
        vals.push(acc);
    }
    let (full, partial) = neville_at_zero(&eps, &vals);
    let rel = (full - partial).norm() / full.norm().max(1e-300);
    if rel > 1e-3 {
        return Err(PairingError::ExtrapolationDiverged { relative_change: rel });
    }
    Ok(PairingResult {
        value: full,
        method: Method::EpsilonExtrapolated { eps, order: levels - 1 },
        error_estimate: (full - partial).norm(),
    })
}
