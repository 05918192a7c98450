use microspec::decay::Classification::{self, Indeterminate, Regular, Singular};
use microspec::distributions::{parse_key, CatalogEntry, Distribution};
use microspec::grid::Multiplier;
use microspec::wavefront::{
    check_reflection, check_translation_covariance, cross_validate, default_directions, default_lattice, default_suite,
    estimate_wf, estimate_wf_classical, estimate_wf_scaling, estimate_wf_singlefamily, lattice_around,
    window_robustness_check, with_conic_closure, BumpProfile, Estimator, WavefrontEstimate, WfConfig,
};

fn dist(key: &str) -> Distribution {
    match parse_key(key).unwrap() {
        CatalogEntry::Distribution(u) => u,
        _ => unreachable!(),
    }
}

fn at(est: &WavefrontEstimate, x: f64, xi: f64) -> Classification {
    est.samples.iter().find(|s| s.point.x == [x] && s.point.xi == [xi]).expect("sampled").classification
}

fn g() -> BumpProfile {
    BumpProfile::new(0.0, 1.0, 8.0)
}

#[test]
fn classical_delta_on_three_points() {
    let cfg = WfConfig::default();
    let lattice = vec![vec![-1.0], vec![0.0], vec![1.0]];
    let e = estimate_wf_classical(&dist("delta@0"), &lattice, &default_directions(1).unwrap(), &cfg).unwrap();
    for x in [-1.0, 0.0, 1.0] {
        for xi in [1.0, -1.0] {
            assert_eq!(at(&e, x, xi), if x == 0.0 { Singular } else { Regular }, "x={x} xi={xi}");
        }
    }
}

#[test]
fn classical_heaviside_singular_only_at_jump() {
    let u = dist("heaviside@0");
    let e = estimate_wf_classical(&u, &default_lattice(&u), &default_directions(1).unwrap(), &WfConfig::default()).unwrap();
    for s in &e.samples {
        let want = if s.point.x == [0.0] { Singular } else { Regular };
        assert_eq!(s.classification, want, "{:?}", s.point);
    }
}

#[test]
fn scaling_and_single_family_see_the_delta() {
    let cfg = WfConfig::default();
    let u = dist("delta@0");
    let lattice = vec![vec![0.0], vec![0.5]];
    let dirs = default_directions(1).unwrap();
    let sc = estimate_wf_scaling(&u, &lattice, &dirs, &default_suite(), &cfg).unwrap();
    let sf = estimate_wf_singlefamily(&u, &lattice, &dirs, g(), &[1.0, 1.5, 2.0, 3.0], &cfg).unwrap();
    for xi in [1.0, -1.0] {
        assert_eq!(at(&sc, 0.0, xi), Singular);
        assert_eq!(at(&sf, 0.0, xi), Singular);
        assert_eq!(at(&sc, 0.5, xi), Regular);
        assert_eq!(at(&sf, 0.5, xi), Regular);
    }
    for s in sf.samples.iter().filter(|s| s.point.x == [0.0]) {
        assert_eq!(s.fits.len(), 4);
        assert!(s.fits.iter().all(|f| f.fit.classification == Singular), "every p sees the delta");
    }
}

#[test]
fn smooth_is_regular_for_every_estimator() {
    let cfg = WfConfig::default();
    let u = dist("smooth:bump@0");
    let lattice = lattice_around(&[vec![0.0]], 0.5, 3);
    let dirs = default_directions(1).unwrap();
    let ests: Vec<WavefrontEstimate> = [Estimator::Classical, Estimator::scaling_default(), Estimator::single_default()]
        .iter()
        .map(|e| estimate_wf(&u, &lattice, &dirs, e, &cfg).unwrap())
        .collect();
    for e in &ests {
        assert_eq!(e.count(Regular), e.samples.len(), "{}", e.estimator.name());
        let r = window_robustness_check(&u, e, &Multiplier::defaults(), &cfg).unwrap();
        assert!(r.failures.is_empty());
    }
    let a = cross_validate(&ests.iter().collect::<Vec<_>>()).unwrap();
    assert_eq!(a.disagreements, 0);
    assert!(a.points.iter().all(|p| p.classes.iter().all(|c| *c == Regular)));
}

/// `1/(x - i0)` is singular on the negative side only, and all estimators agree.
#[test]
fn boundary_value_is_one_sided_and_estimators_agree() {
    let cfg = WfConfig::default();
    let u = dist("bv:-i0@0");
    let lattice = vec![vec![0.0], vec![1.0]];
    let dirs = default_directions(1).unwrap();
    let cl = estimate_wf_classical(&u, &lattice, &dirs, &cfg).unwrap();
    let sc = estimate_wf_scaling(&u, &lattice, &dirs, &default_suite(), &cfg).unwrap();
    for e in [&cl, &sc] {
        assert_eq!(at(e, 0.0, -1.0), Singular);
        assert_eq!(at(e, 0.0, 1.0), Regular);
        assert_eq!(at(e, 1.0, -1.0), Regular);
    }
    let r = check_reflection(&cl);
    assert_eq!(r.asymmetric.len(), 1);
    assert_eq!(r.asymmetric[0].point.x, vec![0.0]);
}

#[test]
fn symmetric_entries_reflect() {
    let cfg = WfConfig::default();
    for key in ["delta@0", "pv@0"] {
        let u = dist(key);
        let e = estimate_wf_classical(&u, &lattice_around(&[vec![0.0]], 0.5, 2), &default_directions(1).unwrap(), &cfg).unwrap();
        let r = check_reflection(&e);
        assert!(r.asymmetric.is_empty() && r.missing == 0, "{key}: {r:?}");
    }
}

#[test]
fn identity_multiplier_never_flips() {
    let cfg = WfConfig::default();
    let u = dist("pv@0");
    let lattice = vec![vec![-1.0], vec![0.0], vec![1.0]];
    let e = estimate_wf_scaling(&u, &lattice, &default_directions(1).unwrap(), &default_suite(), &cfg).unwrap();
    let r = window_robustness_check(&u, &e, &[Multiplier::Identity], &cfg).unwrap();
    assert!(r.failures.is_empty());
    assert!(r.rechecked > 0);
}

#[test]
fn cosine_multiplier_keeps_delta_regular_off_origin() {
    let cfg = WfConfig::default();
    let u = dist("delta@0");
    let e = estimate_wf_scaling(&u, &lattice_around(&[vec![0.0]], 0.5, 3), &default_directions(1).unwrap(), &default_suite(), &cfg)
        .unwrap();
    let cos = Multiplier::Cosine { amp: 0.5, freq: 1.0, phase: 0.0 };
    let r = window_robustness_check(&u, &e, &[cos], &cfg).unwrap();
    assert!(r.failures.is_empty(), "{:?}", r.failures);
}

#[test]
fn self_comparison_has_no_disagreement() {
    let cfg = WfConfig::default();
    let u = dist("heaviside@0");
    let e = estimate_wf_classical(&u, &lattice_around(&[vec![0.0]], 0.5, 2), &default_directions(1).unwrap(), &cfg).unwrap();
    let a = cross_validate(&[&e, &e]).unwrap();
    assert_eq!(a.disagreements, 0);
    assert_eq!(a.disagreement_rate, 0.0);
}

#[test]
fn conic_copies_match_exactly() {
    let cfg = WfConfig::default();
    for key in ["delta@0", "bv:-i0@0", "heaviside@0"] {
        let u = dist(key);
        let lattice = lattice_around(&[vec![0.0]], 0.5, 1);
        for est in [Estimator::Classical, Estimator::scaling_default()] {
            let e = estimate_wf(&u, &lattice, &default_directions(1).unwrap(), &est, &cfg).unwrap();
            let (closed, r) = with_conic_closure(&u, &e, &cfg).unwrap();
            assert!(r.pass(), "{key} {}: {:?}", est.name(), r.mismatches);
            assert_eq!(closed.samples.len(), 3 * e.samples.len());
        }
    }
}

#[test]
fn translation_covariance_on_shifted_entries() {
    let cfg = WfConfig::default();
    for key in ["pv@0.5", "delta'@-0.5", "line-delta:n=(1,1),c=0.5"] {
        let u = dist(key);
        let dirs = default_directions(u.dim()).unwrap();
        let lattice: Vec<Vec<f64>> = default_lattice(&u).into_iter().step_by(7).collect();
        let e = estimate_wf(&u, &lattice, &dirs, &Estimator::Classical, &cfg).unwrap();
        let r = check_translation_covariance(&u, &e, &cfg).unwrap();
        assert!(r.pass(), "{key}: {:?}", r.mismatches);
        assert_eq!(r.checked, e.samples.len());
    }
}

/// On the one-dimensional catalog a single exponent already decides like the full grid.
#[test]
fn p_grid_size_does_not_matter_on_the_catalog() {
    let cfg = WfConfig::default();
    let dirs = default_directions(1).unwrap();
    for key in ["delta@0", "delta'@0", "heaviside@0", "pv@0", "bv:-i0@0", "smooth:bump@0"] {
        let u = dist(key);
        let lattice = default_lattice(&u);
        let one = estimate_wf_singlefamily(&u, &lattice, &dirs, g(), &[1.0], &cfg).unwrap();
        let three = estimate_wf_singlefamily(&u, &lattice, &dirs, g(), &[1.0, 2.0, 3.0], &cfg).unwrap();
        for (a, b) in one.samples.iter().zip(&three.samples) {
            assert_eq!(a.point, b.point);
            assert_eq!(a.classification, b.classification, "{key} at {:?}", a.point);
            assert_ne!(a.classification, Indeterminate, "{key} at {:?}", a.point);
        }
    }
}
