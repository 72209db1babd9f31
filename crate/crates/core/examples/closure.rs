//! The closure A* = id ⊕ A ⊕ A² ⊕ … of a stable map, computed symbolically.

use maxpres::analysis::{closure, StableMap};
use maxpres::instances::{self, three_node_example, EntryKind};
use maxpres::mpmatrix::{apply, NonnegVector};

fn main() {
    let c = closure(&three_node_example()).unwrap();
    println!(
        "A* =\n{}\nstabilises after degree {}",
        c.star, c.truncation_degree
    );

    let t = closure(&three_node_example().transpose()).unwrap();
    println!("closure of the transpose =\n{}", t.star);

    // symbolic closure of a map with piecewise-linear entries
    let mut rng = instances::rng(1);
    let s = StableMap::new(instances::random_stable(&mut rng, 3, EntryKind::Pwl, 0.3)).unwrap();
    println!("A =\n{}\nA* =\n{}", s.map(), s.closure().star);
    let x = NonnegVector::ones(3);
    assert_eq!(
        apply(&s.closure().star, &x).unwrap(),
        s.closure_apply(&x).unwrap()
    );
}
