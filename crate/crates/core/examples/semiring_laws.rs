//! Max-preserving maps compose and take pointwise maxima like matrices over
//! the (∘, ⊕) semiring.

use maxpres::instances::{self, EntryKind};
use maxpres::mpmatrix::{apply, compose_maps, oplus_maps, MpMap};

fn main() {
    let mut rng = instances::rng(5);
    let a = instances::random_stable(&mut rng, 3, EntryKind::Mixed, 0.2);
    let b = instances::random_stable(&mut rng, 3, EntryKind::Pwl, 0.2);
    let c = instances::random_stable(&mut rng, 3, EntryKind::Linear, 0.2);
    println!("A =\n{a}");

    let lhs = compose_maps(&a, &oplus_maps(&b, &c).unwrap()).unwrap();
    let rhs = oplus_maps(
        &compose_maps(&a, &b).unwrap(),
        &compose_maps(&a, &c).unwrap(),
    )
    .unwrap();
    let x = instances::positive_vector(&mut rng, 3, 20);
    let (l, r) = (apply(&lhs, &x).unwrap(), apply(&rhs, &x).unwrap());
    println!("A∘(B⊕C) at {x} = {l}");
    println!("A∘B ⊕ A∘C at {x} = {r}");
    assert_eq!(l, r);

    // (Ax)_i = max_j a_ij(x_j) preserves joins
    let y = instances::positive_vector(&mut rng, 3, 20);
    assert_eq!(
        apply(&a, &x.join(&y).unwrap()).unwrap(),
        apply(&a, &x)
            .unwrap()
            .join(&apply(&a, &y).unwrap())
            .unwrap()
    );
    assert_eq!(compose_maps(&a, &MpMap::identity(3)).unwrap(), a);
}
