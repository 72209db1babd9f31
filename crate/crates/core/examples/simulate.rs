//! Trajectories x_{k+1} = A x_k of a stable and an unstable map.

use maxpres::analysis::{check_stability, simulate};
use maxpres::instances::{self, three_node_example, EntryKind};
use maxpres::mpmatrix::{max_norm, NonnegVector};
use maxpres::ratio::{frac, to_decimal};

fn main() {
    let t = simulate(
        &three_node_example(),
        &NonnegVector::ones(3),
        1000,
        &frac(1, 1000),
    )
    .unwrap();
    println!(
        "stable: {:?} after {} steps, final norm ≈ {}",
        t.outcome,
        t.states.len() - 1,
        to_decimal(&max_norm(t.states.last().unwrap()), 6)
    );

    let mut rng = instances::rng(3);
    let base = instances::random_stable(&mut rng, 3, EntryKind::Mixed, 0.3);
    let (a, cycle) = instances::insert_expanding_cycle(&mut rng, &base);
    let report = check_stability(&a);
    let w = report.witness.unwrap();
    let t = simulate(&a, &w, 20, &frac(1, 1000)).unwrap();
    println!(
        "unstable (cycle {cycle:?}): witness {w}, {:?}, norm did not decrease: {}",
        t.outcome,
        t.norm_not_decreased()
    );
}
