//! The largest x with x ≤ Ax ⊕ b is A*b; iterating y ↦ Ay ⊕ b from b
//! reaches it within n - 1 steps.

use maxpres::analysis::StableMap;
use maxpres::instances::three_node_example;
use maxpres::mpmatrix::{apply, NonnegVector};

fn main() {
    let s = StableMap::new(three_node_example()).unwrap();
    let b = NonnegVector::ones(3);
    let x = s.maximal_solution(&b).unwrap();
    let (y, steps) = s.iterate_maximal_solution(&b).unwrap();
    println!(
        "x* = {x}, Ax* ⊕ b = {}",
        apply(s.map(), &x).unwrap().join(&b).unwrap()
    );
    println!("iteration from b: {y} after {steps} steps");
    assert_eq!(x, y);
}
