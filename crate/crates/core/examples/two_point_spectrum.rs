//! Correlation spectrum of the positive-frequency two-point kernel 1/(t - i0):
//! singular only at coinciding points, on one balanced direction, inside the
//! momentum cone.

use microspec::acs::{acs_directions, check_cone_bound, estimate_acs, with_mirrors, ConeSpec};
use microspec::decay::Classification;
use microspec::distributions::{parse_key, CatalogEntry};
use microspec::wavefront::{default_suite, WfConfig};

fn main() {
    let Ok(CatalogEntry::Kernel(phi)) = parse_key("kernel:bv:-i0") else { unreachable!() };
    let dirs = acs_directions(phi.d, phi.n).unwrap();
    let tuples = with_mirrors(&[vec![vec![0.0], vec![0.0]], vec![vec![0.0], vec![1.5]]]);
    let est = estimate_acs(&phi, &tuples, &dirs, &default_suite(), &WfConfig::default()).unwrap();
    for s in &est.samples {
        if s.classification != Classification::Regular {
            println!("x = {:?}  k = {:?}  {:?}", s.point.x, s.point.k, s.classification);
        }
    }
    let r = check_cone_bound(&est, &ConeSpec { d: 1, n: 2 }, dirs.cap_radius);
    println!(
        "{} samples, {} singular, {} outside the cone",
        est.samples.len(),
        r.singular_samples,
        r.violations.len()
    );
}
