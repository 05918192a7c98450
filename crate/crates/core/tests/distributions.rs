use microspec::distributions::{
    catalog_ground_truth, kernel_pair_n, pair, parse_key, CatalogEntry, Distribution, Method, Side, Side1D,
    TranslationKernel, WfDescriptor, BV_MINUS_SINGULAR_SIDE,
};
use microspec::func::{Bump1D, Correlation1D, Factor, Fn1D, Gaussian1D};
use microspec::quad::GaussLegendre;
use microspec::testfn::TestFunction;
use microspec::C64;
use proptest::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

fn bump(c: f64, r: f64) -> TestFunction {
    TestFunction::one_dim(Bump1D::standard(c, r))
}

/// Plain GL16 on a mesh graded geometrically towards `x0`, independent of the pairing engine.
fn graded_integral(f: impl Fn(f64) -> C64, lo: f64, hi: f64, x0: f64, finest: f64) -> C64 {
    let g = GaussLegendre::new(16);
    let mut br = vec![lo, hi];
    if x0 > lo && x0 < hi {
        br.push(x0);
        let mut r = finest;
        while r < (hi - lo) {
            for c in [x0 - r, x0 + r] {
                if c > lo && c < hi {
                    br.push(c);
                }
            }
            r *= 1.5;
        }
    }
    br.sort_by(|a, b| a.partial_cmp(b).unwrap());
    br.windows(2).map(|w| g.integrate(&f, w[0], w[1], 4)).sum()
}

/// Polynomial extrapolation to 0 through all points (Lagrange form).
fn extrapolate(xs: &[f64], ys: &[C64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..xs.len() {
        let mut w = 1.0;
        for j in 0..xs.len() {
            if i != j {
                w *= (0.0 - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += ys[i] * w;
    }
    acc
}

#[test]
fn delta_sifts() {
    let r = pair(&Distribution::DeltaAt { x0: 0.0 }, &bump(0.0, 1.0)).unwrap();
    assert_eq!(r.value, C64::new(1.0, 0.0));
    assert_eq!(r.method, Method::Analytic);
    assert_eq!(r.error_estimate, 0.0);
}

#[test]
fn principal_value_of_even_function_vanishes() {
    let r = pair(&Distribution::PrincipalValue { x0: 0.0 }, &bump(0.0, 1.0)).unwrap();
    assert!(r.value.norm() < 1e-10, "{}", r.value);
}

#[test]
fn heaviside_halves_even_integral() {
    let b = Bump1D::standard(0.0, 1.0);
    let phi = bump(0.0, 1.0).scaled(C64::new(2.0 / b.integral(), 0.0));
    let r = pair(&Distribution::Heaviside { x0: 0.0 }, &phi).unwrap();
    assert!((r.value - C64::new(1.0, 0.0)).norm() < 1e-12, "{}", r.value);
}

#[test]
fn delta_derivative_carries_sign() {
    let b = Bump1D::new(0.1, 0.8, 2.0);
    let jet = b.jet(2, 0.0);
    let phi = TestFunction::one_dim(b);
    let d1 = pair(&Distribution::DeltaDerivative { x0: 0.0, order: 1 }, &phi).unwrap();
    let d2 = pair(&Distribution::DeltaDerivative { x0: 0.0, order: 2 }, &phi).unwrap();
    assert!((d1.value.re + jet[1]).abs() < 1e-14);
    assert!((d2.value.re - jet[2]).abs() < 1e-14);
}

#[test]
fn boundary_value_minus_principal_value_is_i_pi() {
    let phi = bump(0.0, 1.0);
    let bv = pair(&Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 1 }, &phi).unwrap();
    let pv = pair(&Distribution::PrincipalValue { x0: 0.0 }, &phi).unwrap();
    assert!((bv.value - pv.value - C64::new(0.0, PI)).norm() < 1e-6);

    // independent route: ∫ φ(x)/(x - iε) dx, ε → 0
    let b = Bump1D::standard(0.0, 1.0);
    let eps = [1e-2, 1e-3, 1e-4, 1e-5];
    let vals: Vec<C64> = eps
        .iter()
        .map(|&e| graded_integral(|x| b.eval(x) / C64::new(x, -e), -1.0, 1.0, 0.0, e * 1e-2))
        .collect();
    let oracle = extrapolate(&eps, &vals);
    assert!((oracle - C64::new(0.0, PI)).norm() < 1e-6, "oracle {oracle}");
    assert!((bv.value - oracle).norm() < 1e-6, "{} vs {}", bv.value, oracle);
}

#[test]
fn boundary_value_square_matches_regularized_oracle() {
    let b = Bump1D::new(0.15, 0.9, 2.0);
    let phi = TestFunction::one_dim(b.clone());
    let r = pair(&Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 2 }, &phi).unwrap();
    assert!(matches!(r.method, Method::EpsilonExtrapolated { .. }));
    let eps = [1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4];
    let vals: Vec<C64> = eps
        .iter()
        .map(|&e| graded_integral(|x| b.eval(x) / C64::new(x, -e).powu(2), -0.75, 1.05, 0.0, e * 1e-2))
        .collect();
    let oracle = extrapolate(&eps, &vals);
    assert!((r.value - oracle).norm() < 1e-5 * oracle.norm().max(1.0), "{} vs {}", r.value, oracle);
}

/// ε-regularized Fourier transform of χ(x)/(x - iε): which sign of k keeps it from decaying.
#[test]
fn boundary_value_singular_side_from_regularized_transform() {
    let chi = Bump1D::standard(0.0, 1.0);
    let e = 1e-3;
    let ft = |k: f64| {
        graded_integral(|x| chi.eval(x) * C64::from_polar(1.0, -k * x) / C64::new(x, -e), -1.0, 1.0, 0.0, e * 1e-2)
    };
    let (neg, pos) = (ft(-60.0).norm(), ft(60.0).norm());
    assert!(neg > 1.0 && pos < 1e-3 * neg, "neg {neg} pos {pos}");
    assert_eq!(BV_MINUS_SINGULAR_SIDE, Side1D::Negative);
    let gt = catalog_ground_truth(&Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 1 }).unwrap();
    assert!(gt.contains(&[0.0], &[-1.0]) && !gt.contains(&[0.0], &[1.0]));
    let gt = catalog_ground_truth(&Distribution::BoundaryValue { x0: 0.0, side: Side::Plus, power: 1 }).unwrap();
    assert!(gt.contains(&[0.0], &[1.0]) && !gt.contains(&[0.0], &[-1.0]));
}

#[test]
fn ground_truth_examples() {
    let s = catalog_ground_truth(&Distribution::smooth1d(Gaussian1D { center: 0.0, width: 1.0, amp: 1.0 })).unwrap();
    assert_eq!(s, WfDescriptor::Empty);
    let d = catalog_ground_truth(&Distribution::DeltaAt { x0: 0.0 }).unwrap();
    assert!(d.contains(&[0.0], &[1.0]) && d.contains(&[0.0], &[-2.0]) && !d.contains(&[0.5], &[1.0]));
    let line = catalog_ground_truth(&Distribution::line_delta([1.0, 0.0], 0.0)).unwrap();
    assert!(line.contains(&[0.0, 0.3], &[1.0, 0.0]) && line.contains(&[0.0, -0.7], &[-1.0, 0.0]));
    assert!(!line.contains(&[0.0, 0.3], &[0.0, 1.0]) && !line.contains(&[0.2, 0.0], &[1.0, 0.0]));
}

#[test]
fn line_delta_is_a_line_integral() {
    let f1: Factor = Arc::new(Bump1D::new(0.1, 0.7, 2.0));
    let f2: Factor = Arc::new(Bump1D::new(-0.2, 0.6, 3.0));
    let phi = TestFunction::separable(vec![f1.clone(), f2.clone()]);
    let r = pair(&Distribution::line_delta([1.0, 0.0], 0.0), &phi).unwrap();
    let g = GaussLegendre::new(16);
    let direct = f1.eval(0.0) * g.integrate(|y| f2.eval(y), -0.8, 0.4, 32);
    assert!((r.value - direct).norm() < 1e-12, "{} vs {}", r.value, direct);
    // oblique line y0 + y1 = 0.2 with unit normal: arc length ds = √2 dy0
    let r = pair(&Distribution::line_delta([1.0, 1.0], 0.2), &phi).unwrap();
    let direct = g.integrate(|y0| f1.eval(y0) * f2.eval(0.2 - y0), -0.6, 0.8, 64) * 2f64.sqrt();
    assert!((r.value - direct).norm() < 1e-10, "{} vs {}", r.value, direct);
}

#[test]
fn kernel_with_constant_profile_factorizes() {
    let k = match parse_key("kernel:const").unwrap() {
        CatalogEntry::Kernel(k) => k,
        _ => unreachable!(),
    };
    let (b1, b2) = (Bump1D::new(0.2, 0.5, 2.0), Bump1D::new(-0.4, 0.8, 1.0));
    let r = kernel_pair_n(&k, &[TestFunction::one_dim(b1.clone()), TestFunction::one_dim(b2.clone())]).unwrap();
    let expect = b1.integral() * b2.integral();
    assert!((r.value - C64::new(expect, 0.0)).norm() < 1e-10 * expect, "{} vs {expect}", r.value);
}

#[test]
fn narrow_kernel_tends_to_overlap_integral() {
    let sigma = 2e-3;
    let w = Distribution::smooth1d(Gaussian1D { center: 0.0, width: sigma, amp: 1.0 / (sigma * (2.0 * PI).sqrt()) });
    let k = TranslationKernel::two_point(w, "narrow");
    let (b1, b2) = (Bump1D::new(0.1, 0.6, 1.0), Bump1D::new(-0.1, 0.5, 1.0));
    let r = kernel_pair_n(&k, &[TestFunction::one_dim(b1.clone()), TestFunction::one_dim(b2.clone())]).unwrap();
    let g = GaussLegendre::new(16);
    let overlap = g.integrate(|y| b1.eval(y) * b2.eval(y), -0.5, 0.4, 64);
    assert!((r.value - overlap).norm() < 1e-4, "{} vs {}", r.value, overlap);
}

#[test]
fn boundary_value_kernel_matches_correlation_route() {
    let k = TranslationKernel::two_point(Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 1 }, "bv");
    let f1: Factor = Arc::new(Bump1D::new(0.1, 0.6, 2.0));
    let f2: Factor = Arc::new(Bump1D::new(-0.2, 0.5, 3.0));
    let r = kernel_pair_n(&k, &[TestFunction::separable(vec![f1.clone()]), TestFunction::separable(vec![f2.clone()])]).unwrap();
    let corr = TestFunction::one_dim(Correlation1D { a: f1, b: f2 });
    let c = pair(&Distribution::BoundaryValue { x0: 0.0, side: Side::Minus, power: 1 }, &corr).unwrap();
    assert!((r.value - c.value).norm() < 1e-6, "{} vs {}", r.value, c.value);
}

#[test]
fn arity_mismatch_is_reported() {
    let k = TranslationKernel::two_point(Distribution::DeltaAt { x0: 0.0 }, "d");
    assert!(kernel_pair_n(&k, &[bump(0.0, 1.0)]).is_err());
    assert!(pair(&Distribution::line_delta([1.0, 0.0], 0.0), &bump(0.0, 1.0)).is_err());
}

fn catalog_1d() -> Vec<Distribution> {
    ["delta@0.1", "delta'@0", "delta''@-0.2", "heaviside@0.05", "pv@0", "bv:-i0@0", "bv2:+i0@0.1", "smooth:gauss@0"]
        .iter()
        .map(|k| match parse_key(k).unwrap() {
            CatalogEntry::Distribution(d) => d,
            _ => unreachable!(),
        })
        .collect()
}

fn test_fn(c: f64, r: f64, a: f64) -> TestFunction {
    TestFunction::one_dim(Bump1D::new(c, r, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pairing_is_linear(
        which in 0usize..8,
        c1 in -0.3f64..0.3, r1 in 0.4f64..1.0,
        c2 in -0.3f64..0.3, r2 in 0.4f64..1.0,
        are in -2.0f64..2.0, aim in -2.0f64..2.0,
    ) {
        let u = &catalog_1d()[which];
        let (phi, psi) = (test_fn(c1, r1, 1.0), test_fn(c2, r2, 2.0));
        let a = C64::new(are, aim);
        let lhs = pair(u, &phi.scaled(a).add(&psi)).unwrap().value;
        let rhs = a * pair(u, &phi).unwrap().value + pair(u, &psi).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(rhs.norm()).max(1e-300), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn pairing_is_translation_covariant(which in 0usize..8, s in -0.2f64..0.2, c in -0.2f64..0.2, r in 0.5f64..1.0) {
        let u = &catalog_1d()[which];
        let phi = test_fn(c, r, 1.0);
        let moved = pair(&u.translated(&[s]), &phi).unwrap();
        let pulled = pair(u, &phi.translated(&[-s])).unwrap();
        let tol = 10.0 * (moved.error_estimate + pulled.error_estimate) + 1e-9 * moved.value.norm().max(1.0);
        prop_assert!((moved.value - pulled.value).norm() <= tol, "{} vs {}", moved.value, pulled.value);
    }

    #[test]
    fn real_distributions_give_real_pairings(which in 0usize..8, c in -0.3f64..0.3, r in 0.4f64..1.0) {
        let u = &catalog_1d()[which];
        prop_assume!(u.is_real());
        let p = pair(u, &test_fn(c, r, 1.0)).unwrap();
        prop_assert!(p.value.im.abs() <= p.error_estimate, "{}", p.value);
    }
}
