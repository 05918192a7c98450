//! Sampled wavefront sets of a few catalog distributions, with all three estimators.
//!
//! cargo run --release --example wavefront_catalog -- "bv:-i0@0" heaviside@1

use microspec::decay::Classification;
use microspec::distributions::{parse_key, CatalogEntry};
use microspec::wavefront::{cross_validate, default_directions, estimate_wf, lattice_around, Estimator, WfConfig};

fn main() {
    let mut keys: Vec<String> = std::env::args().skip(1).collect();
    if keys.is_empty() {
        keys = vec!["delta@0".into(), "bv:-i0@0".into()];
    }
    let cfg = WfConfig::default();
    for key in keys {
        let u = match parse_key(&key) {
            Ok(CatalogEntry::Distribution(u)) if u.dim() == 1 => u,
            _ => {
                eprintln!("{key}: not a one-dimensional distribution");
                continue;
            }
        };
        let lattice = lattice_around(&[vec![0.0]], 0.5, 4);
        let dirs = default_directions(1).unwrap();
        let ests: Vec<_> = [Estimator::Classical, Estimator::scaling_default(), Estimator::single_default()]
            .iter()
            .map(|e| estimate_wf(&u, &lattice, &dirs, e, &cfg).unwrap())
            .collect();
        println!("{key}");
        println!("{:>6} {:>4}  {:<14} {:<14} {:<14}", "x", "xi", "classical", "scaling", "singlefamily");
        for (i, s) in ests[0].samples.iter().enumerate() {
            let c = |j: usize| format!("{:?}", ests[j].samples[i].classification);
            println!("{:>6} {:>4}  {:<14} {:<14} {:<14}", s.point.x[0], s.point.xi[0], c(0), c(1), c(2));
        }
        let a = cross_validate(&ests.iter().collect::<Vec<_>>()).unwrap();
        let singular = ests[1].count(Classification::Singular);
        println!("{singular} singular samples, {} disagreements over {} decided points\n", a.disagreements, a.decided);
    }
}
