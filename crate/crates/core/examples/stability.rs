//! Cycle-based stability certification, with an exact witness `Ax ≥ x` when
//! a cycle fails to contract.

use maxpres::analysis::{check_stability, Verdict};
use maxpres::fnalg::ScalarFn;
use maxpres::instances::three_node_example;
use maxpres::mpmatrix::{apply, MpMap};
use maxpres::ratio::int;

fn main() {
    let a = three_node_example();
    let report = check_stability(&a);
    for cv in &report.cycles {
        println!(
            "cycle {:?}: weight {} → {:?}",
            cv.cycle.nodes, cv.cycle.weight, cv.contraction
        );
    }
    assert_eq!(report.verdict, Verdict::Stable);

    let sq = ScalarFn::power(int(1), int(2)).unwrap();
    let b = MpMap::new(vec![
        vec![ScalarFn::Zero, sq.clone()],
        vec![sq, ScalarFn::Zero],
    ])
    .unwrap();
    let report = check_stability(&b);
    let w = report.witness.clone().unwrap();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());
    println!("witness {w}, Aw = {}", apply(&b, &w).unwrap());
    assert_eq!(report.verdict, Verdict::Unstable);
}
