//! One-dimensional smooth factors. Every multi-dimensional test function in the
//! crate is a finite sum of tensor products of these.

use crate::quad::GaussLegendre;
use crate::C64;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// Closed interval; `lo > hi` encodes the empty set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const EVERYWHERE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }
    pub fn is_empty(&self) -> bool {
        !(self.lo <= self.hi)
    }
    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
    pub fn width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.hi - self.lo
        }
    }
    pub fn contains(&self, t: f64) -> bool {
        t >= self.lo && t <= self.hi
    }
    pub fn intersect(&self, o: &Interval) -> Interval {
        Interval::new(self.lo.max(o.lo), self.hi.min(o.hi))
    }
    pub fn shift(&self, s: f64) -> Interval {
        Interval::new(self.lo + s, self.hi + s)
    }
}

/// A smooth complex function of one real variable.
///
/// `bandwidth` is an angular frequency beyond which the spectrum is negligible
/// (about 1e-13 relative); quadrature spacings are derived from it.
pub trait Fn1D: Send + Sync + fmt::Debug {
    fn eval(&self, t: f64) -> C64;
    fn support(&self) -> Interval;
    fn bandwidth(&self) -> f64;
    fn sup_norm(&self) -> f64;

    /// Analytic derivative when available.
    fn derivative(&self, _order: usize, _t: f64) -> Option<C64> {
        None
    }

    /// Values at `t0 + j*dt`, `j < n`.
    fn sample(&self, t0: f64, dt: f64, n: usize) -> Vec<C64> {
        (0..n).map(|j| self.eval(t0 + j as f64 * dt)).collect()
    }

    /// True when the function is known to be real valued.
    fn is_real(&self) -> bool {
        false
    }

    /// Integral over the line when it is available without quadrature.
    fn known_integral(&self) -> Option<C64> {
        None
    }
}

pub type Factor = Arc<dyn Fn1D>;

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// `exp(a(1 - 1/(1 - s^2)))` with `s = (t - center)/radius`; `a = 1` is the
/// standard bump, larger `a` trades a narrower core for a faster spectral tail.
#[derive(Debug, Clone)]
pub struct Bump1D {
    pub center: f64,
    pub radius: f64,
    pub sharpness: f64,
}

impl Bump1D {
    pub fn new(center: f64, radius: f64, sharpness: f64) -> Self {
        assert!(radius > 0.0 && sharpness > 0.0);
        Bump1D { center, radius, sharpness }
    }

    pub fn standard(center: f64, radius: f64) -> Self {
        Self::new(center, radius, 1.0)
    }

    /// Integral over the real line.
    pub fn integral(&self) -> f64 {
        self.radius * unit_bump_integral(self.sharpness)
    }

    /// Values and derivatives up to `order` at `t`.
    pub fn jet(&self, order: usize, t: f64) -> Vec<f64> {
        let x = t - self.center;
        let r = self.radius;
        let mut out = vec![0.0; order + 1];
        if x.abs() >= r {
            return out;
        }
        let a = self.sharpness;
        let q = r * r - x * x;
        let e = (a - a * r * r / q).exp();
        if e == 0.0 {
            return out;
        }
        // derivatives of F(x) = a - (a r / 2)(1/(r-x) + 1/(r+x))
        let mut fd = vec![0.0; order + 1];
        let (um, up) = (1.0 / (r - x), 1.0 / (r + x));
        let mut fact = 1.0;
        let (mut pm, mut pp) = (um, up);
        for k in 1..=order {
            fact *= k as f64;
            pm *= um;
            pp *= up;
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            fd[k] = -(a * r / 2.0) * fact * (pm + sgn * pp);
        }
        out[0] = e;
        for n in 1..=order {
            let mut s = 0.0;
            for j in 0..n {
                s += binom(n - 1, j) * fd[j + 1] * out[n - 1 - j];
            }
            out[n] = s;
        }
        out
    }
}

impl Fn1D for Bump1D {
    fn known_integral(&self) -> Option<C64> {
        Some(C64::new(self.integral(), 0.0))
    }
    fn eval(&self, t: f64) -> C64 {
        let x = (t - self.center) / self.radius;
        if x.abs() >= 1.0 {
            return C64::new(0.0, 0.0);
        }
        C64::new((self.sharpness * (1.0 - 1.0 / (1.0 - x * x))).exp(), 0.0)
    }
    fn support(&self) -> Interval {
        Interval::new(self.center - self.radius, self.center + self.radius)
    }
    fn bandwidth(&self) -> f64 {
        unit_bump_bandwidth(self.sharpness) / self.radius
    }
    fn sup_norm(&self) -> f64 {
        1.0
    }
    fn derivative(&self, order: usize, t: f64) -> Option<C64> {
        Some(C64::new(self.jet(order, t)[order], 0.0))
    }
    fn is_real(&self) -> bool {
        true
    }
}

fn unit_bump_fourier(a: f64, nu: f64, rule: &GaussLegendre, panels: usize) -> f64 {
    // 2 * int_0^1 cos(nu s) g(s) ds
    let b = Bump1D::new(0.0, 1.0, a);
    2.0 * rule.integrate(|s| b.eval(s) * (nu * s).cos(), 0.0, 1.0, panels).re
}

fn unit_bump_integral(a: f64) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&a.to_bits()) {
        return *v;
    }
    let v = unit_bump_fourier(a, 0.0, GaussLegendre::g16(), 64);
    cache.lock().unwrap().insert(a.to_bits(), v);
    v
}

/// Smallest angular frequency beyond which the unit bump's Fourier transform
/// stays below 1e-13 of its value at 0. Measured once per sharpness.
pub fn unit_bump_bandwidth(a: f64) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&a.to_bits()) {
        return *v;
    }
    let rule = GaussLegendre::g16();
    let g0 = unit_bump_integral(a);
    let nu_max = 4000.0;
    let panels = 800;
    let step = 2.0;
    let mut last = 0.0;
    let mut nu = nu_max;
    while nu > 0.0 {
        if unit_bump_fourier(a, nu, rule, panels).abs() >= 1e-13 * g0 {
            last = nu + step;
            break;
        }
        nu -= step;
    }
    cache.lock().unwrap().insert(a.to_bits(), last);
    last
}

/// `base((t - anchor) / scale)`.
#[derive(Debug, Clone)]
pub struct Scaled1D {
    pub base: Factor,
    pub anchor: f64,
    pub scale: f64,
}

impl Scaled1D {
    pub fn new(base: Factor, anchor: f64, scale: f64) -> Self {
        Scaled1D { base, anchor, scale }
    }
    /// Pure translation by `s`.
    pub fn shifted(base: Factor, s: f64) -> Self {
        Scaled1D { base, anchor: s, scale: 1.0 }
    }
}

impl Fn1D for Scaled1D {
    fn known_integral(&self) -> Option<C64> {
        self.base.known_integral().map(|v| v * self.scale.abs())
    }
    fn eval(&self, t: f64) -> C64 {
        self.base.eval((t - self.anchor) / self.scale)
    }
    fn support(&self) -> Interval {
        let s = self.base.support();
        Interval::new(self.anchor + self.scale * s.lo, self.anchor + self.scale * s.hi)
    }
    fn bandwidth(&self) -> f64 {
        self.base.bandwidth() / self.scale
    }
    fn sup_norm(&self) -> f64 {
        self.base.sup_norm()
    }
    fn derivative(&self, order: usize, t: f64) -> Option<C64> {
        self.base
            .derivative(order, (t - self.anchor) / self.scale)
            .map(|d| d / self.scale.powi(order as i32))
    }
    fn is_real(&self) -> bool {
        self.base.is_real()
    }
}

/// `e^{-i omega t} base(t)`.
#[derive(Debug, Clone)]
pub struct Modulated1D {
    pub base: Factor,
    pub omega: f64,
}

impl Fn1D for Modulated1D {
    fn eval(&self, t: f64) -> C64 {
        let b = self.base.eval(t);
        if b == C64::new(0.0, 0.0) {
            return b;
        }
        b * C64::from_polar(1.0, -self.omega * t)
    }
    fn support(&self) -> Interval {
        self.base.support()
    }
    fn bandwidth(&self) -> f64 {
        self.omega.abs() + self.base.bandwidth()
    }
    fn sup_norm(&self) -> f64 {
        self.base.sup_norm()
    }
    fn derivative(&self, order: usize, t: f64) -> Option<C64> {
        // Leibniz with d^j e^{-i w t} = (-i w)^j e^{-i w t}
        let ph = C64::from_polar(1.0, -self.omega * t);
        let miw = C64::new(0.0, -self.omega);
        let mut s = C64::new(0.0, 0.0);
        for j in 0..=order {
            let d = self.base.derivative(order - j, t)?;
            s += d * miw.powu(j as u32) * binom(order, j);
        }
        Some(s * ph)
    }
}

/// Pointwise product.
#[derive(Debug, Clone)]
pub struct Product1D {
    pub a: Factor,
    pub b: Factor,
}

impl Fn1D for Product1D {
    fn eval(&self, t: f64) -> C64 {
        let b = self.b.eval(t);
        if b == C64::new(0.0, 0.0) {
            return b;
        }
        self.a.eval(t) * b
    }
    fn support(&self) -> Interval {
        self.a.support().intersect(&self.b.support())
    }
    fn bandwidth(&self) -> f64 {
        self.a.bandwidth() + self.b.bandwidth()
    }
    fn sup_norm(&self) -> f64 {
        let s = self.support();
        // the non-compact factor is only evaluated on the compact one's support
        let bound = |f: &Factor| -> f64 {
            if f.support().is_bounded() {
                f.sup_norm()
            } else {
                let n = 64;
                (0..=n)
                    .map(|j| f.eval(s.lo + s.width() * j as f64 / n as f64).norm())
                    .fold(0.0, f64::max)
                    * 1.01
            }
        };
        bound(&self.a) * bound(&self.b)
    }
    fn derivative(&self, order: usize, t: f64) -> Option<C64> {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..=order {
            s += self.a.derivative(j, t)? * self.b.derivative(order - j, t)? * binom(order, j);
        }
        Some(s)
    }
    fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }
}

/// Entire multipliers used to perturb windows: polynomials and `1 + a cos(w t)`.
#[derive(Debug, Clone)]
pub enum Elementary1D {
    Polynomial(Vec<f64>),
    OnePlusCos { amp: f64, freq: f64, phase: f64 },
}

impl Fn1D for Elementary1D {
    fn eval(&self, t: f64) -> C64 {
        C64::new(
            match self {
                Elementary1D::Polynomial(c) => c.iter().rev().fold(0.0, |acc, ci| acc * t + ci),
                Elementary1D::OnePlusCos { amp, freq, phase } => 1.0 + amp * (freq * t + phase).cos(),
            },
            0.0,
        )
    }
    fn support(&self) -> Interval {
        Interval::EVERYWHERE
    }
    fn bandwidth(&self) -> f64 {
        match self {
            Elementary1D::Polynomial(_) => 0.0,
            Elementary1D::OnePlusCos { freq, .. } => freq.abs(),
        }
    }
    fn sup_norm(&self) -> f64 {
        match self {
            Elementary1D::Polynomial(_) => f64::INFINITY,
            Elementary1D::OnePlusCos { amp, .. } => 1.0 + amp.abs(),
        }
    }
    fn derivative(&self, order: usize, t: f64) -> Option<C64> {
        Some(C64::new(
            match self {
                Elementary1D::Polynomial(c) => {
                    let mut v = 0.0;
                    for (i, ci) in c.iter().enumerate().skip(order) {
                        let mut f = 1.0;
                        for j in 0..order {
                            f *= (i - j) as f64;
                        }
                        v += ci * f * t.powi((i - order) as i32);
                    }
                    v
                }
                Elementary1D::OnePlusCos { amp, freq, phase } => {
                    if order == 0 {
                        1.0 + amp * (freq * t + phase).cos()
                    } else {
                        let ph = freq * t + phase + order as f64 * std::f64::consts::FRAC_PI_2;
                        amp * freq.powi(order as i32) * ph.cos()
                    }
                }
            },
            0.0,
        ))
    }
    fn is_real(&self) -> bool {
        true
    }
}

/// Spacing for trapezoid sums of a product of functions with total bandwidth `bw`.
pub(crate) fn resolving_spacing(bw: f64) -> f64 {
    std::f64::consts::PI / (2.0 * bw.max(1e-12))
}

fn trapezoid_nodes(iv: Interval, bw: f64) -> (f64, f64, usize) {
    let dt0 = resolving_spacing(bw);
    let n = ((iv.width() / dt0).ceil() as usize).max(8);
    let dt = iv.width() / n as f64;
    (iv.lo, dt, n + 1)
}

/// `(k * f)(t) = int k(t - s) f(s) ds` for compactly supported smooth factors.
/// Both vanish smoothly at their support ends, so the trapezoid sum is spectral.
#[derive(Debug, Clone)]
pub struct Convolved1D {
    pub kernel: Factor,
    pub f: Factor,
}

impl Convolved1D {
    fn nodes(&self) -> (bool, f64, f64, usize) {
        let (sk, sf) = (self.kernel.support(), self.f.support());
        let bw = self.kernel.bandwidth() + self.f.bandwidth();
        // integrate over the narrower support
        let over_f = sf.width() <= sk.width();
        let iv = if over_f { sf } else { sk };
        let (t0, dt, n) = trapezoid_nodes(iv, bw);
        (over_f, t0, dt, n)
    }
}

impl Convolved1D {
    /// Inner nodes refined so that `dt` is a multiple of their spacing; then every
    /// outer argument lies on one lattice and the outer factor is sampled once.
    /// `None` when the shared lattice would be much larger than the direct sum.
    fn sample_aligned(&self, t0: f64, dt: f64, n: usize) -> Option<Vec<C64>> {
        let (over_f, s0, ds, m0) = self.nodes();
        let (inner, outer): (&Factor, &Factor) = if over_f { (&self.f, &self.kernel) } else { (&self.kernel, &self.f) };
        let r = (dt / ds).ceil().max(1.0) as usize;
        let h = dt / r as f64;
        let m = (inner.support().width() / h).ceil() as usize + 1;
        // outer argument for (j, i) is base + (j r - i) h
        let base = t0 - s0;
        let os = outer.support();
        let qlo = (((os.lo - base) / h).floor() as i64).max(-(m as i64));
        let qhi = (((os.hi - base) / h).ceil() as i64).min(((n - 1) * r) as i64 + 1);
        if qhi < qlo {
            return Some(vec![C64::new(0.0, 0.0); n]);
        }
        let count = (qhi - qlo + 1) as usize;
        if count > (1 << 16).max(4 * n * m0.min(64)) {
            return None;
        }
        let vals = inner.sample(s0, h, m);
        let ov = outer.sample(base + qlo as f64 * h, h, count);
        let sup = self.support();
        let c = crate::quad::convolve(&ov, &vals);
        (0..n)
            .map(|j| {
                let t = t0 + j as f64 * dt;
                if !sup.contains(t) {
                    return C64::new(0.0, 0.0);
                }
                // Σ_i ov[j r - i - qlo] vals[i]
                let idx = (j * r) as i64 - qlo;
                if idx < 0 || idx as usize >= c.len() {
                    return C64::new(0.0, 0.0);
                }
                c[idx as usize] * h
            })
            .collect::<Vec<_>>()
            .into()
    }
}

impl Fn1D for Convolved1D {
    // ∫(k * f) = ∫k · ∫f
    fn known_integral(&self) -> Option<C64> {
        Some(integral(self.kernel.as_ref()) * integral(self.f.as_ref()))
    }
    fn eval(&self, t: f64) -> C64 {
        self.sample(t, 1.0, 1)[0]
    }
    fn support(&self) -> Interval {
        let (a, b) = (self.kernel.support(), self.f.support());
        Interval::new(a.lo + b.lo, a.hi + b.hi)
    }
    fn bandwidth(&self) -> f64 {
        self.kernel.bandwidth().min(self.f.bandwidth())
    }
    fn sup_norm(&self) -> f64 {
        let (a, b) = (self.kernel.support(), self.f.support());
        self.kernel.sup_norm() * self.f.sup_norm() * a.width().min(b.width())
    }
    fn sample(&self, t0: f64, dt: f64, n: usize) -> Vec<C64> {
        if n > 1 && dt > 0.0 {
            if let Some(v) = self.sample_aligned(t0, dt, n) {
                return v;
            }
        }
        let (over_f, s0, ds, m) = self.nodes();
        let (inner, outer): (&Factor, &Factor) = if over_f { (&self.f, &self.kernel) } else { (&self.kernel, &self.f) };
        let vals: Vec<C64> = inner.sample(s0, ds, m);
        let sup = self.support();
        (0..n)
            .map(|j| {
                let t = t0 + j as f64 * dt;
                if !sup.contains(t) {
                    return C64::new(0.0, 0.0);
                }
                let os = outer.support();
                let mut acc = C64::new(0.0, 0.0);
                for (i, v) in vals.iter().enumerate() {
                    if *v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let x = t - (s0 + i as f64 * ds);
                    if os.contains(x) {
                        acc += outer.eval(x) * v;
                    }
                }
                acc * ds
            })
            .collect()
    }
}

/// `c(t) = int a(t + s) b(s) ds`.
#[derive(Debug, Clone)]
pub struct Correlation1D {
    pub a: Factor,
    pub b: Factor,
}

impl Fn1D for Correlation1D {
    fn eval(&self, t: f64) -> C64 {
        self.sample(t, 1.0, 1)[0]
    }
    fn support(&self) -> Interval {
        let (a, b) = (self.a.support(), self.b.support());
        Interval::new(a.lo - b.hi, a.hi - b.lo)
    }
    fn bandwidth(&self) -> f64 {
        self.a.bandwidth().min(self.b.bandwidth())
    }
    fn sup_norm(&self) -> f64 {
        let (a, b) = (self.a.support(), self.b.support());
        self.a.sup_norm() * self.b.sup_norm() * a.width().min(b.width())
    }
    fn sample(&self, t0: f64, dt: f64, n: usize) -> Vec<C64> {
        let (sa, sb) = (self.a.support(), self.b.support());
        let bw = self.a.bandwidth() + self.b.bandwidth();
        let sup = self.support();
        if sb.width() <= sa.width() {
            let (s0, ds, m) = trapezoid_nodes(sb, bw);
            let bv = self.b.sample(s0, ds, m);
            (0..n)
                .map(|j| {
                    let t = t0 + j as f64 * dt;
                    if !sup.contains(t) {
                        return C64::new(0.0, 0.0);
                    }
                    let mut acc = C64::new(0.0, 0.0);
                    for (i, v) in bv.iter().enumerate() {
                        let x = t + s0 + i as f64 * ds;
                        if *v != C64::new(0.0, 0.0) && sa.contains(x) {
                            acc += self.a.eval(x) * v;
                        }
                    }
                    acc * ds
                })
                .collect()
        } else {
            // substitute r = t + s: int a(r) b(r - t) dr
            let (r0, dr, m) = trapezoid_nodes(sa, bw);
            let av = self.a.sample(r0, dr, m);
            (0..n)
                .map(|j| {
                    let t = t0 + j as f64 * dt;
                    if !sup.contains(t) {
                        return C64::new(0.0, 0.0);
                    }
                    let mut acc = C64::new(0.0, 0.0);
                    for (i, v) in av.iter().enumerate() {
                        let x = r0 + i as f64 * dr - t;
                        if *v != C64::new(0.0, 0.0) && sb.contains(x) {
                            acc += self.b.eval(x) * v;
                        }
                    }
                    acc * dr
                })
                .collect()
        }
    }
}

/// Gaussian `amp * exp(-(t - center)^2 / (2 width^2))`; not compactly supported,
/// used only as a smooth distribution profile.
#[derive(Debug, Clone)]
pub struct Gaussian1D {
    pub center: f64,
    pub width: f64,
    pub amp: f64,
}

impl Fn1D for Gaussian1D {
    fn eval(&self, t: f64) -> C64 {
        let z = (t - self.center) / self.width;
        C64::new(self.amp * (-0.5 * z * z).exp(), 0.0)
    }
    fn support(&self) -> Interval {
        Interval::EVERYWHERE
    }
    fn bandwidth(&self) -> f64 {
        // exp(-w^2 nu^2 / 2) < 1e-14
        8.1 / self.width
    }
    fn sup_norm(&self) -> f64 {
        self.amp.abs()
    }
    fn is_real(&self) -> bool {
        true
    }
}

/// Integral of a compactly supported factor by the trapezoid rule.
pub fn integral(f: &dyn Fn1D) -> C64 {
    let s = f.support();
    assert!(s.is_bounded(), "integral of a non-compact factor");
    if s.is_empty() {
        return C64::new(0.0, 0.0);
    }
    if let Some(v) = f.known_integral() {
        return v;
    }
    let (t0, dt, n) = trapezoid_nodes(s, f.bandwidth());
    f.sample(t0, dt, n).iter().sum::<C64>() * dt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_jet_matches_finite_differences() {
        let b = Bump1D::new(0.2, 0.9, 3.0);
        let h = 1e-4;
        for &t in &[-0.5, 0.0, 0.3, 0.9, 1.05] {
            let j = b.jet(3, t);
            for k in 0..3 {
                let fd = (b.jet(k, t + h)[k] - b.jet(k, t - h)[k]) / (2.0 * h);
                assert!((fd - j[k + 1]).abs() < 1e-5 * (1.0 + j[k + 1].abs()), "t={t} k={k}");
            }
        }
    }

    #[test]
    fn bandwidth_decreases_with_sharpness_beyond_one() {
        let b1 = unit_bump_bandwidth(1.0);
        let b4 = unit_bump_bandwidth(4.0);
        assert!(b4 < b1, "{b4} {b1}");
        assert!(b4 > 50.0);
    }

    #[test]
    fn convolution_of_bumps_matches_gauss_legendre() {
        let k: Factor = Arc::new(Modulated1D { base: Arc::new(Bump1D::new(0.0, 0.4, 4.0)), omega: 30.0 });
        let f: Factor = Arc::new(Bump1D::new(0.1, 0.05, 8.0));
        let c = Convolved1D { kernel: k.clone(), f: f.clone() };
        let t = 0.23;
        let g = GaussLegendre::g16();
        let direct = g.integrate(|s| k.eval(t - s) * f.eval(s), 0.05, 0.15, 40);
        assert!((c.eval(t) - direct).norm() < 1e-13);
    }

    #[test]
    fn correlation_both_orientations_agree() {
        let a: Factor = Arc::new(Bump1D::new(0.0, 1.0, 2.0));
        let b: Factor = Arc::new(Bump1D::new(0.3, 0.2, 2.0));
        let c1 = Correlation1D { a: a.clone(), b: b.clone() };
        let c2 = Correlation1D { a: b.clone(), b: a.clone() };
        // c2(t) = c1(-t)
        for &t in &[-0.7, 0.0, 0.4] {
            assert!((c1.eval(t) - c2.eval(-t)).norm() < 1e-13);
        }
    }
}
