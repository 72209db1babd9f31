//! The left eigenfunctional l(x) = Σ w_i (A*x)_i strictly decreases along
//! every nonzero trajectory; its max variant only weakly.

use maxpres::analysis::StableMap;
use maxpres::instances::three_node_example;
use maxpres::mpmatrix::{apply, NonnegVector};
use maxpres::ratio::format;
use maxpres::spectral::{LeftEigenfunctional, LeftMode};

fn main() {
    let s = StableMap::new(three_node_example()).unwrap();
    let l = LeftEigenfunctional::new(&s, None, LeftMode::Sum).unwrap();
    let lmax = LeftEigenfunctional::new(&s, None, LeftMode::Max).unwrap();

    let mut x = NonnegVector::ones(3);
    for k in 0..6 {
        let d = l.descent(&x).unwrap();
        let dm = lmax.descent(&x).unwrap();
        println!(
            "k={k} x={x}  l: {} → {} (strict {})  l_max: {} → {}",
            format(&d.before),
            format(&d.after),
            d.strict,
            format(&dm.before),
            format(&dm.after)
        );
        assert!(d.strict && dm.after <= dm.before);
        x = apply(s.map(), &x).unwrap();
    }
}
