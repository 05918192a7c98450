use microspec::acs::{
    acs_directions, check_acs_conicity, check_cone_bound, check_diagonal_singularity, check_hermitean_symmetry,
    check_subadditivity, check_translation_covariance, check_wf_acs_inclusion, cone_membership, estimate_acs,
    kernel_wavefront, properly_acausal, salient_cone_filter, with_mirrors, AcsError, AcsEstimate, AcsSample, ConeSpec,
    MultiPhasePoint,
};
use microspec::decay::Classification::{self, Regular, Singular};
use microspec::distributions::{parse_key, CatalogEntry, TranslationKernel};
use microspec::wavefront::{default_directions, default_suite, estimate_wf_scaling, WfConfig};
use std::f64::consts::FRAC_1_SQRT_2 as S;
use std::sync::OnceLock;

fn kernel(key: &str) -> TranslationKernel {
    match parse_key(key).unwrap() {
        CatalogEntry::Kernel(k) => k,
        _ => unreachable!(),
    }
}

fn estimate(key: &str, tuples: &[Vec<Vec<f64>>]) -> AcsEstimate {
    let phi = kernel(key);
    let dirs = acs_directions(phi.d, phi.n).unwrap();
    estimate_acs(&phi, &with_mirrors(tuples), &dirs, &default_suite(), &WfConfig::default()).unwrap()
}

fn pair_tuples() -> Vec<Vec<Vec<f64>>> {
    vec![vec![vec![0.0], vec![0.0]], vec![vec![0.0], vec![2.0]]]
}

fn bv() -> &'static AcsEstimate {
    static E: OnceLock<AcsEstimate> = OnceLock::new();
    E.get_or_init(|| estimate("kernel:bv:-i0", &pair_tuples()))
}

fn ibv() -> &'static AcsEstimate {
    static E: OnceLock<AcsEstimate> = OnceLock::new();
    E.get_or_init(|| estimate("kernel:ibv:-i0", &pair_tuples()))
}

fn smooth() -> &'static AcsEstimate {
    static E: OnceLock<AcsEstimate> = OnceLock::new();
    E.get_or_init(|| estimate("kernel:smooth:gauss", &pair_tuples()))
}

fn at(est: &AcsEstimate, x: [f64; 2], k: [f64; 2]) -> Classification {
    let p = MultiPhasePoint::new(vec![vec![x[0]], vec![x[1]]], vec![vec![k[0]], vec![k[1]]]).unwrap();
    est.find(&p).expect("sampled").classification
}

#[test]
fn order_one_matches_the_wavefront_estimator() {
    let cfg = WfConfig::default();
    let xs = [-0.5, 0.0, 0.5];
    let tuples: Vec<Vec<Vec<f64>>> = xs.iter().map(|x| vec![vec![*x]]).collect();
    let a = estimate("functional:delta@0", &tuples);
    let lattice: Vec<Vec<f64>> = xs.iter().map(|x| vec![*x]).collect();
    let w = estimate_wf_scaling(&parse_delta(), &lattice, &default_directions(1).unwrap(), &default_suite(), &cfg).unwrap();
    assert_eq!(a.samples.len(), w.samples.len());
    for s in &w.samples {
        let p = MultiPhasePoint::new(vec![s.point.x.clone()], vec![s.point.xi.clone()]).unwrap();
        assert_eq!(a.find(&p).unwrap().classification, s.classification, "{:?}", s.point);
    }
}

fn parse_delta() -> microspec::distributions::Distribution {
    match parse_key("delta@0").unwrap() {
        CatalogEntry::Distribution(u) => u,
        _ => unreachable!(),
    }
}

/// Only the balanced direction with negative first slot is singular at coincidence.
#[test]
fn boundary_value_kernel_singular_on_one_balanced_direction() {
    let e = bv();
    for s in e.samples.iter().filter(|s| s.point.x == [vec![0.0], vec![0.0]]) {
        let k = s.point.flat_k();
        let want = (k[0] + S).abs() < 1e-12 && (k[1] - S).abs() < 1e-12;
        assert_eq!(s.classification == Singular, want, "{k:?}: {:?}", s.classification);
    }
    assert_eq!(at(e, [0.0, 0.0], [S, -S]), Regular);
}

#[test]
fn separated_points_and_smooth_kernels_are_regular() {
    for s in bv().samples.iter().filter(|s| s.point.x != [vec![0.0], vec![0.0]]) {
        assert_eq!(s.classification, Regular, "{:?}", s.point);
    }
    assert_eq!(smooth().count(Regular), smooth().samples.len());
}

#[test]
fn cone_bound_holds_and_catches_a_plant() {
    let tol = bv().dirs.cap_radius;
    let r = check_cone_bound(bv(), &ConeSpec { d: 1, n: 2 }, tol);
    assert!(r.pass() && r.singular_samples > 0, "{r:?}");
    assert!(check_cone_bound(smooth(), &ConeSpec { d: 1, n: 2 }, tol).pass());

    let mut planted = bv().clone();
    planted.d = 2;
    planted.samples = vec![AcsSample {
        point: MultiPhasePoint::new(vec![vec![0.0, 0.0]; 2], vec![vec![0.0, 1.0], vec![0.0, -1.0]]).unwrap(),
        classification: Singular,
        decisive: 0,
        fits: Vec::new(),
    }];
    assert_eq!(check_cone_bound(&planted, &ConeSpec { d: 2, n: 2 }, tol).violations.len(), 1);
}

#[test]
fn cone_membership_examples() {
    let c = ConeSpec { d: 2, n: 2 };
    assert!(cone_membership(&[vec![-1.0, 0.0], vec![1.0, 0.0]], &c, 0.0));
    assert!(!cone_membership(&[vec![1.0, 0.0], vec![1.0, 0.0]], &c, 0.0));
    assert!(!cone_membership(&[vec![0.0, 1.0], vec![0.0, -1.0]], &c, 0.0));
    assert!(properly_acausal(&[vec![0.0, 0.0], vec![0.0, 5.0]]));
    assert!(!properly_acausal(&[vec![0.0, 0.0], vec![5.0, 0.0]]));
    assert!(!properly_acausal(&[vec![0.0, 0.0], vec![5.0, 5.0]]));
}

#[test]
fn salience_of_the_momentum_cone() {
    let cone = ConeSpec { d: 1, n: 2 };
    let w = |k: &[Vec<f64>]| cone_membership(k, &cone, 1e-9) && k.iter().flatten().any(|v| *v != 0.0);
    let r = salient_cone_filter(bv(), &w, false).unwrap();
    assert!(r.salient);
    let everything = |_: &[Vec<f64>]| true;
    assert!(matches!(salient_cone_filter(bv(), &everything, false), Err(AcsError::NotSalient(_))));
}

#[test]
fn hermitean_mirror_pairs() {
    let d = estimate("functional:delta@0", &[vec![vec![0.0]]]);
    let r = check_hermitean_symmetry(&d).unwrap();
    assert!(r.applicable && r.pass() && r.pairs > 0);
    let p = |k: f64| MultiPhasePoint::new(vec![vec![0.0]], vec![vec![k]]).unwrap();
    assert_eq!(d.find(&p(1.0)).unwrap().classification, Singular);
    assert_eq!(d.find(&p(-1.0)).unwrap().classification, Singular);

    let r = check_hermitean_symmetry(ibv()).unwrap();
    assert!(r.applicable && r.pass(), "{r:?}");
    // at coincident points the mirror of (k, -k) is itself, so both sides are compared with themselves
    assert_eq!(at(ibv(), [0.0, 0.0], [-S, S]), Singular);
    assert_eq!(at(ibv(), [0.0, 0.0], [S, -S]), Regular);

    assert!(!check_hermitean_symmetry(bv()).unwrap().applicable);
}

#[test]
fn covariance_under_shifts() {
    let cfg = WfConfig::default();
    let phi = kernel("kernel:ibv:-i0");
    for s in [0.0, 1.0, -0.7] {
        let r = check_translation_covariance(&phi, ibv(), &[s], &cfg).unwrap();
        assert!(r.pass() && r.checked == ibv().samples.len(), "s={s}: {:?}", r.mismatches);
    }
    let r = check_acs_conicity(&phi, ibv(), &cfg, &[0.5, 2.0]).unwrap();
    assert!(r.pass(), "{:?}", r.mismatches);
}

/// The shifted functional `φ∘τ_s` is singular where `φ` is singular at `x + s`.
#[test]
fn shifted_delta_functional_moves() {
    let phi = kernel("functional:delta@0").shifted(&[vec![1.0]]);
    let dirs = acs_directions(1, 1).unwrap();
    let tuples: Vec<Vec<Vec<f64>>> = [-1.0, 0.0, 1.0].iter().map(|x| vec![vec![*x]]).collect();
    let e = estimate_acs(&phi, &tuples, &dirs, &default_suite(), &WfConfig::default()).unwrap();
    for s in &e.samples {
        let want = if s.point.x[0] == [-1.0] { Singular } else { Regular };
        assert_eq!(s.classification, want, "{:?}", s.point);
    }
}

#[test]
fn wavefront_inclusion() {
    let cfg = WfConfig::default();
    let phi = kernel("kernel:bv:-i0");
    let tuples = with_mirrors(&pair_tuples());
    let wf = kernel_wavefront(&phi, &tuples, &bv().dirs, &default_suite(), &cfg).unwrap();
    let r = check_wf_acs_inclusion(&wf, bv());
    assert!(r.pass() && r.unmatched == 0 && r.wf_singular > 0, "{r:?}");

    let sm = kernel_wavefront(&kernel("kernel:smooth:gauss"), &tuples, &smooth().dirs, &default_suite(), &cfg).unwrap();
    let r = check_wf_acs_inclusion(&sm, smooth());
    assert!(r.pass() && r.wf_singular == 0);

    let mut planted = sm.clone();
    planted.samples[0].classification = Singular;
    assert_eq!(check_wf_acs_inclusion(&planted, smooth()).violations.len(), 1);
}

#[test]
fn diagonal_singularity() {
    let cfg = WfConfig::default();
    let diag = vec![vec![vec![0.0], vec![0.0]]];
    let dirs = acs_directions(1, 2).unwrap();
    let wf = |key: &str| kernel_wavefront(&kernel(key), &diag, &dirs, &default_suite(), &cfg).unwrap();

    let b = wf("kernel:bv:-i0");
    assert_eq!(check_diagonal_singularity(&b, &[0.0]).unwrap().status, Singular);
    let sing: Vec<&Vec<f64>> = b.samples.iter().filter(|s| s.classification == Singular).map(|s| &s.point.xi).collect();
    assert_eq!(sing.len(), 1);
    assert!((sing[0][0] + S).abs() < 1e-12 && (sing[0][1] - S).abs() < 1e-12, "{sing:?}");

    let d = wf("kernel:delta@0");
    assert_eq!(check_diagonal_singularity(&d, &[0.0]).unwrap().status, Singular);
    for k in [[S, -S], [-S, S]] {
        let s = d.samples.iter().find(|s| (s.point.xi[0] - k[0]).abs() < 1e-12 && (s.point.xi[1] - k[1]).abs() < 1e-12).unwrap();
        assert_eq!(s.classification, Singular);
    }

    let g = wf("kernel:smooth:gauss");
    assert_eq!(check_diagonal_singularity(&g, &[0.0]).unwrap().status, Regular);
}

#[test]
fn subadditivity_spot_check() {
    let cfg = WfConfig::default();
    let a = kernel("kernel:ibv:-i0");
    let b = kernel("kernel:smooth:gauss");
    let dirs = acs_directions(1, 2).unwrap();
    let tuples = with_mirrors(&pair_tuples());
    let sum = estimate_acs(&a.plus(&b), &tuples, &dirs, &default_suite(), &cfg).unwrap();
    let r = check_subadditivity(ibv(), smooth(), &sum);
    assert!(r.pass() && r.checked == sum.samples.len(), "{r:?}");
}
