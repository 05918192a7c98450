use microspec::func::{Bump1D, Factor, Fn1D};
use microspec::grid::{
    make_bump, make_direction_set, make_ladder, BoxRegion, Grid, GridError, Multiplier, TestingFamily, Window,
};
use proptest::prelude::*;
use std::sync::Arc;

fn unit_bump() -> Factor {
    Arc::new(Bump1D::standard(0.0, 1.0))
}

fn family(dim: usize, x: &[f64], p: f64) -> TestingFamily {
    TestingFamily::scaled_family(vec![unit_bump(); dim], x, p, BoxRegion::symmetric(dim, 1.25)).unwrap()
}

#[test]
fn scaled_family_substitution() {
    let f = family(1, &[0.0], 1.0);
    let m = f.member(0.5).unwrap().unwrap();
    let g = Bump1D::standard(0.0, 1.0);
    assert_eq!(m.eval(&[0.25]), g.eval(0.5));

    let f = family(1, &[1.0], 2.0);
    let m = f.member(0.5).unwrap().unwrap();
    for y in [0.8, 0.9, 1.0, 1.1, 1.2] {
        assert!((m.eval(&[y]) - g.eval(4.0 * (y - 1.0))).norm() < 1e-15);
    }
    assert_eq!(m.eval(&[1.25]).norm(), 0.0);
    assert_eq!(m.eval(&[0.75]).norm(), 0.0);
}

#[test]
fn profile_must_fit_the_region() {
    let r = TestingFamily::scaled_family(vec![unit_bump()], &[0.0], 1.0, BoxRegion::symmetric(1, 0.5));
    assert!(matches!(r, Err(GridError::SupportViolation(_))));
    assert!(TestingFamily::scaled_family(vec![unit_bump()], &[0.0], 0.5, BoxRegion::symmetric(1, 2.0)).is_err());
}

#[test]
fn bump_window_examples() {
    let grid = Grid::covering(&[0.0], 1.5, 0.01).unwrap();
    let h = make_bump(&[0.0], 1.0, &grid).unwrap();
    assert_eq!(h.eval(&[0.0]), 1.0);
    for y in [1.0, -1.0, 1.2, -7.0] {
        assert_eq!(h.eval(&[y]), 0.0);
    }
    let coarse = Grid::covering(&[0.0], 1.5, 0.5).unwrap();
    assert!(matches!(make_bump(&[0.0], 1.0, &coarse), Err(GridError::RadiusTooSmall { .. })));
}

#[test]
fn default_multipliers_keep_normalization() {
    for m in Multiplier::defaults() {
        let h = Window::product(&[0.3], 0.4, 12.0).with_multiplier(&m).unwrap();
        assert!((h.eval(&[0.3]) - 1.0).abs() < 1e-15, "{}", m.name());
        assert_eq!(h.eval(&[0.3 + 0.4]), 0.0);
    }
}

proptest! {
    #[test]
    fn ladder_is_geometric_and_decreasing(lmax in 0.01f64..0.99, ratio in 0.1f64..0.95, count in 6usize..20) {
        let l = make_ladder(lmax, ratio, count).unwrap();
        prop_assert_eq!(l.len(), count);
        prop_assert_eq!(l.values()[0], lmax);
        for w in l.values().windows(2) {
            prop_assert!(w[1] < w[0] && w[1] > 0.0);
            prop_assert!((w[1] / w[0] - ratio).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_coordinates_are_bit_exact(o in -5.0f64..5.0, h in 1e-3f64..1.0, i in 0usize..64) {
        let g = Grid::new(vec![o, -o], vec![h, 2.0 * h], vec![64, 64]).unwrap();
        prop_assert_eq!(g.coordinate(0, i), o + h * i as f64);
        prop_assert_eq!(g.point(&[i, i]), vec![o + h * i as f64, -o + 2.0 * h * i as f64]);
    }

    #[test]
    fn directions_are_unit(count in 2usize..16, radius in 0.01f64..0.3) {
        let d = make_direction_set(2, count, radius, 5).unwrap();
        for xi in &d.directions {
            let n = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((n - 1.0).abs() < 1e-14);
            for k in d.cap(xi) {
                let dist = k.iter().zip(xi).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
                prop_assert!(dist <= radius * (1.0 + 1e-12));
            }
        }
    }

    /// 64 random points outside `λO + x` give exactly zero.
    #[test]
    fn support_law(x in -2.0f64..2.0, y in -2.0f64..2.0, p in 1.0f64..3.0, seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let lambdas = make_ladder(0.25, 0.5f64.sqrt(), 8).unwrap().values().to_vec();
        let fams = [
            family(2, &[x, y], p),
            TestingFamily::random_modulated(2, &lambdas, &[x, y], seed, 1.0, 8.0),
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for f in &fams {
            for &l in &lambdas {
                let m = f.member(l).unwrap().unwrap();
                let o = f.region();
                let mut hits = 0;
                while hits < 64 {
                    let q = [x + rng.gen_range(-3.0..3.0) * l, y + rng.gen_range(-3.0..3.0) * l];
                    if o.contains_scaled(&q, l, &[x, y]) {
                        continue;
                    }
                    hits += 1;
                    prop_assert_eq!(m.eval(&q).norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn uniformly_bounded(x in -2.0f64..2.0, p in 1.0f64..3.0, seed in 0u64..1000, t in -1.0f64..1.0) {
        let lambdas = make_ladder(0.25, 0.5f64.sqrt(), 8).unwrap().values().to_vec();
        let fams = [family(1, &[x], p), TestingFamily::random_modulated(1, &lambdas, &[x], seed, 1.0, 8.0)];
        for f in &fams {
            for &l in &lambdas {
                let m = f.member(l).unwrap().unwrap();
                prop_assert!(m.eval(&[x + t * l]).norm() <= f.sup_bound() * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn scaled_member_is_pointwise_substitution(x in -2.0f64..2.0, p in 1.0f64..3.0, l in 0.01f64..0.5, t in -1.5f64..1.5) {
        let m = family(1, &[x], p).member(l).unwrap().unwrap();
        let y = x + t * l.powf(p);
        let expect = Bump1D::standard(0.0, 1.0).eval((y - x) / l.powf(p));
        prop_assert!((m.eval(&[y]) - expect).norm() < 1e-12);
    }
}
