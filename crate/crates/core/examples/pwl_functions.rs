//! Scalar building blocks: exact piecewise-linear functions, powers, and the
//! composition, maximum, dominance and contraction checks on them.

use maxpres::fnalg::{self, Contraction, ScalarFn};
use maxpres::ratio::{format, frac, int};

fn main() {
    // h(t) = t/2 on [0, 2], then slope 1/4
    let h = ScalarFn::pwl(vec![(int(0), int(0)), (int(2), int(1))], frac(1, 4)).unwrap();
    let g = ScalarFn::linear(int(3)).unwrap();

    let gh = fnalg::compose(&g, &h);
    println!("g = {g}\nh = {h}\ng∘h = {gh}");
    assert_eq!(fnalg::evaluate(&gh, &int(4)).unwrap(), frac(9, 2));

    let m = fnalg::max_of([h.clone(), ScalarFn::linear(frac(1, 3)).unwrap()]);
    println!("max(h, t/3) = {m}");
    println!(
        "h dominates t/3? {:?}",
        fnalg::dominates(&h, &ScalarFn::linear(frac(1, 3)).unwrap())
    );

    assert_eq!(fnalg::below_identity(&h), Contraction::Certified);
    assert_eq!(fnalg::below_identity(&gh), Contraction::Refuted(int(2)));
    println!(
        "h below identity: {:?}; g∘h: {:?}",
        fnalg::below_identity(&h),
        fnalg::below_identity(&gh)
    );

    // squares are not contractions: (t/2)^2 ≥ t at t = 4
    let p = ScalarFn::power(frac(1, 4), int(2)).unwrap();
    println!("{p}: {:?}", fnalg::below_identity(&p));

    let inv = fnalg::generalized_inverse(&h, &int(2)).unwrap();
    println!("h⁻(2) = {}", format(&inv));
    assert_eq!(inv, int(6));
}
