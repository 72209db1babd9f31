//! The right eigenvector r(t) = A*(t·v) and the max-separable Lyapunov
//! function V(x) = max_i r_i⁻¹(x_i) built from it.

use maxpres::analysis::StableMap;
use maxpres::instances::{self, three_node_example, EntryKind};
use maxpres::mpmatrix::{apply, NonnegVector};
use maxpres::ratio::{format, frac, int};
use maxpres::spectral::RightEigenvector;

fn main() {
    let s = StableMap::new(three_node_example()).unwrap();
    let r = RightEigenvector::new(&s, None).unwrap();
    for t in [int(1), frac(5, 2)] {
        let d = r.descent(&t).unwrap();
        println!(
            "t={}  r={}  A r={}  {:?}",
            format(&t),
            d.r,
            d.ar,
            d.relation
        );
    }
    let x = NonnegVector::from_ints(&[2, 2, 6]).unwrap();
    println!(
        "V({x}) = {}",
        format(&r.max_separable_lyapunov(&x).unwrap())
    );

    // strictly increasing piecewise-linear entries give invertible r_i
    let mut rng = instances::rng(8);
    let s = StableMap::new(instances::random_stable(
        &mut rng,
        3,
        EntryKind::PwlKinf,
        0.3,
    ))
    .unwrap();
    let r = RightEigenvector::new(&s, None).unwrap();
    for (i, f) in r.coordinate_functions().iter().enumerate() {
        println!("r_{i} = {f}");
    }
    let mut x = instances::positive_vector(&mut rng, 3, 20);
    for _ in 0..5 {
        let v = r.max_separable_lyapunov(&x).unwrap();
        println!("x={x}  V={}", format(&v));
        let next = apply(s.map(), &x).unwrap();
        assert!(r.max_separable_lyapunov(&next).unwrap() <= v);
        x = next;
    }
}
