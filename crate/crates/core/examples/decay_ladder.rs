//! The windowed scaled transform along a λ-ladder and the resulting decay fits:
//! the delta keeps the trivial λ¹ volume factor, a smooth bump falls off a cliff.

use microspec::decay::{fit_decay, polynomial_prefactor_adjust, DecayThresholds};
use microspec::distributions::{parse_key, CatalogEntry};
use microspec::func::Bump1D;
use microspec::grid::{make_ladder, BoxRegion, TestingFamily, Window};
use microspec::oscillatory::{windowed_scaled_ft, OscOptions};
use std::sync::Arc;

fn main() {
    let ladder = make_ladder(0.25, 0.5f64.sqrt(), 12).unwrap();
    let h = Window::product(&[0.0], 0.4, 12.0);
    let g = Arc::new(Bump1D::new(0.0, 1.0, 8.0));
    let fam = TestingFamily::scaled_family(vec![g], &[0.0], 1.0, BoxRegion::symmetric(1, 1.25)).unwrap();
    for key in ["delta@0", "pv@0", "smooth:bump@0"] {
        let Ok(CatalogEntry::Distribution(u)) = parse_key(key) else { unreachable!() };
        let mags: Vec<f64> = ladder
            .values()
            .iter()
            .map(|&l| windowed_scaled_ft(&u, &h, &fam, l, &[vec![1.0]], &OscOptions::default()).unwrap()[0].value.norm())
            .collect();
        let fit = polynomial_prefactor_adjust(&fit_decay(ladder.values(), &mags, DecayThresholds::default()).unwrap(), 1.0);
        println!("{key}");
        for (l, m) in ladder.values().iter().zip(&mags) {
            println!("  λ = {l:.5}  |I| = {m:.3e}");
        }
        println!("  slope {:.2}, floor hit {}, verdict {:?}\n", fit.slope, fit.floor_hit, fit.classification);
    }
}
