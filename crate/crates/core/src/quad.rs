//! Small quadrature toolbox: Gauss-Legendre panels and Neville extrapolation.

use crate::C64;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Chebyshev-like initial guess, then Newton on P_n
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared 16-point rule.
    pub fn g16() -> &'static GaussLegendre {
        static RULE: OnceLock<GaussLegendre> = OnceLock::new();
        RULE.get_or_init(|| GaussLegendre::new(16))
    }

    /// Composite rule over [a, b] with `panels` equal panels.
    pub fn integrate<F: Fn(f64) -> C64>(&self, f: F, a: f64, b: f64, panels: usize) -> C64 {
        if b <= a || panels == 0 {
            return C64::new(0.0, 0.0);
        }
        let h = (b - a) / panels as f64;
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            let mut s = C64::new(0.0, 0.0);
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                s += f(mid + 0.5 * h * x) * *w;
            }
            acc += s * (0.5 * h);
        }
        acc
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Neville tableau evaluated at 0. Returns the final extrapolant and the one
/// obtained without the finest point, so callers can judge convergence.
pub fn neville_at_zero(xs: &[f64], ys: &[C64]) -> (C64, C64) {
    let full = neville(xs, ys);
    let partial = if xs.len() > 1 { neville(&xs[..xs.len() - 1], &ys[..ys.len() - 1]) } else { full };
    (full, partial)
}

fn neville(xs: &[f64], ys: &[C64]) -> C64 {
    let n = xs.len();
    let mut p: Vec<C64> = ys.to_vec();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (xs[i], xs[i + m]);
            p[i] = (p[i] * (0.0 - xj) - p[i + 1] * (0.0 - xi)) / (xi - xj);
        }
    }
    p[0]
}

/// Lagrange interpolation weights for nodes 0..n-1 at fractional position t.
pub fn lagrange_weights(n: usize, t: f64) -> Vec<f64> {
    let mut w = vec![1.0; n];
    for (i, wi) in w.iter_mut().enumerate() {
        for j in 0..n {
            if i != j {
                *wi *= (t - j as f64) / (i as f64 - j as f64);
            }
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let g = GaussLegendre::new(8);
        let v = g.integrate(|x| C64::new(x.powi(15) + x.powi(14), 0.0), -1.0, 1.0, 1);
        assert!((v.re - 2.0 / 15.0).abs() < 1e-14);
        let s: f64 = g.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn neville_recovers_polynomial_limit() {
        let xs = [0.4, 0.2, 0.1, 0.05];
        let ys: Vec<C64> = xs.iter().map(|&e| C64::new(3.0 + 2.0 * e - e * e * e, e)).collect();
        let (v, _) = neville_at_zero(&xs, &ys);
        assert!((v - C64::new(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn lagrange_weights_partition_unity() {
        let w = lagrange_weights(6, 2.37);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-13);
    }
}

/// Full linear convolution `c[p] = Σ a[p - q] b[q]`; FFT based once the direct
/// sum would be large.
pub fn convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if a.len().min(b.len()) < 48 || a.len() * b.len() < 1 << 14 {
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (p, x) in a.iter().enumerate() {
            if *x == C64::new(0.0, 0.0) {
                continue;
            }
            for (q, y) in b.iter().enumerate() {
                out[p + q] += x * y;
            }
        }
        return out;
    }
    thread_local! {
        static PLANNER: std::cell::RefCell<rustfft::FftPlanner<f64>> = std::cell::RefCell::new(rustfft::FftPlanner::new());
    }
    let size = n.next_power_of_two();
    let (fwd, inv) = PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(size), p.plan_fft_inverse(size))
    });
    let mut fa = a.to_vec();
    fa.resize(size, C64::new(0.0, 0.0));
    let mut fb = b.to_vec();
    fb.resize(size, C64::new(0.0, 0.0));
    fwd.process(&mut fa);
    fwd.process(&mut fb);
    let scale = 1.0 / size as f64;
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y * scale;
    }
    inv.process(&mut fa);
    fa.truncate(n);
    fa
}
