use proptest::prelude::*;

use super::*;
use crate::instances::{three_node_example, EntryKind};
use crate::ratio::frac;

fn ints(c: &[i64]) -> NonnegVector {
    NonnegVector::from_ints(c).unwrap()
}

fn vecq(c: &[Rational]) -> NonnegVector {
    NonnegVector::new(c.to_vec()).unwrap()
}

fn example() -> StableMap {
    StableMap::new(three_node_example()).unwrap()
}

/// `Σ_i w_i max_j s_ij x_j` with `s` the max-times closure of plain gains.
fn left_oracle(gains: &[Vec<Rational>], w: &[Rational], x: &[Rational]) -> Rational {
    let n = gains.len();
    let mut star: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        gains[i][j].clone().max(int(1))
                    } else {
                        gains[i][j].clone()
                    }
                })
                .collect()
        })
        .collect();
    // Floyd–Warshall in the max-times semiring; exact for contracting cycles
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &star[i][k] * &star[k][j];
                if via > star[i][j] {
                    star[i][j] = via;
                }
            }
        }
    }
    (0..n)
        .map(|i| &w[i] * (0..n).map(|j| &star[i][j] * &x[j]).max().unwrap())
        .sum()
}

#[test]
fn left_eval_examples() {
    let s = example();
    let l = LeftEigenfunctional::new(&s, None, LeftMode::Sum).unwrap();
    assert_eq!(l.eval(&NonnegVector::ones(3)).unwrap(), int(9));
    assert_eq!(l.eval(&NonnegVector::zeros(3)).unwrap(), int(0));
    assert_eq!(l.eval(&NonnegVector::unit(3, 1)).unwrap(), frac(31, 7));
    let gains = three_node_example().gains().unwrap();
    assert_eq!(
        left_oracle(&gains, &[int(1), int(1), int(1)], &[int(0), int(1), int(0)]),
        frac(31, 7)
    );
}

#[test]
fn left_descent_examples() {
    let s = example();
    let l = LeftEigenfunctional::new(&s, None, LeftMode::Sum).unwrap();
    assert_eq!(
        l.descent(&NonnegVector::ones(3)).unwrap(),
        LeftDescent {
            before: int(9),
            after: frac(62, 7),
            strict: true
        }
    );
    assert_eq!(
        l.descent(&NonnegVector::unit(3, 1)).unwrap(),
        LeftDescent {
            before: frac(31, 7),
            after: frac(30, 7),
            strict: true
        }
    );
    for mode in [LeftMode::Sum, LeftMode::Max] {
        let l = LeftEigenfunctional::new(&s, None, mode).unwrap();
        assert_eq!(
            l.descent(&NonnegVector::zeros(3)).unwrap(),
            LeftDescent {
                before: int(0),
                after: int(0),
                strict: false
            }
        );
    }
    let lm = LeftEigenfunctional::new(&s, None, LeftMode::Max).unwrap();
    // max(1, 2, 6) against max(6/7, 2, 6)
    let d = lm.descent(&NonnegVector::ones(3)).unwrap();
    assert_eq!((d.before, d.after, d.strict), (int(6), int(6), false));
}

#[test]
fn weights_and_direction_validation() {
    let s = example();
    assert_eq!(
        LeftEigenfunctional::new(&s, Some(ints(&[1, 0, 1])), LeftMode::Sum).unwrap_err(),
        SpectralError::NotPositive { what: "weights" }
    );
    assert!(matches!(
        RightEigenvector::new(&s, Some(ints(&[1, 1]))).unwrap_err(),
        SpectralError::Map(MapError::DimensionMismatch {
            expected: 3,
            actual: 2
        })
    ));
    let l = LeftEigenfunctional::new(&s, Some(ints(&[1, 2, 3])), LeftMode::Sum).unwrap();
    assert_eq!(l.eval(&NonnegVector::ones(3)).unwrap(), int(1 + 4 + 18));
}

#[test]
fn right_eval_examples() {
    let s = example();
    let r = RightEigenvector::new(&s, None).unwrap();
    assert_eq!(r.eval(&int(1)).unwrap(), ints(&[1, 2, 6]));
    assert_eq!(r.eval(&int(0)).unwrap(), NonnegVector::zeros(3));
    let z = StableMap::new(MpMap::zero(2)).unwrap();
    assert_eq!(
        RightEigenvector::new(&z, None)
            .unwrap()
            .eval(&int(5))
            .unwrap(),
        ints(&[5, 5])
    );
}

#[test]
fn right_descent_examples() {
    let s = example();
    let d = RightEigenvector::new(&s, None)
        .unwrap()
        .descent(&int(1))
        .unwrap();
    assert_eq!(d.ar, vecq(&[frac(6, 7), int(2), int(6)]));
    assert_eq!(d.r, ints(&[1, 2, 6]));
    assert_eq!(d.relation, OrderRelation::StrictlyLess);

    let z = StableMap::new(MpMap::zero(2)).unwrap();
    let d = RightEigenvector::new(&z, None)
        .unwrap()
        .descent(&int(1))
        .unwrap();
    assert_eq!(d.ar, NonnegVector::zeros(2));
    assert_eq!(d.relation, OrderRelation::ComponentwiseStrict);

    let half = frac(3, 6);
    let two = StableMap::new(
        MpMap::from_gains(&[vec![int(0), half.clone()], vec![half, int(0)]]).unwrap(),
    )
    .unwrap();
    let d = RightEigenvector::new(&two, None)
        .unwrap()
        .descent(&int(2))
        .unwrap();
    assert_eq!(d.r, ints(&[2, 2]));
    assert_eq!(d.ar, ints(&[1, 1]));
    assert_eq!(d.relation, OrderRelation::ComponentwiseStrict);
}

#[test]
fn max_separable_examples() {
    let s = example();
    let r = RightEigenvector::new(&s, None).unwrap();
    assert_eq!(
        r.coordinate_functions(),
        &[
            ScalarFn::Identity,
            ScalarFn::Linear(int(2)),
            ScalarFn::Linear(int(6))
        ]
    );
    assert_eq!(r.max_separable_lyapunov(&ints(&[1, 2, 6])).unwrap(), int(1));
    assert_eq!(
        r.max_separable_lyapunov(&NonnegVector::zeros(3)).unwrap(),
        int(0)
    );
    assert_eq!(r.max_separable_lyapunov(&ints(&[2, 2, 6])).unwrap(), int(2));
}

#[test]
fn left_functional_is_not_separable() {
    let q = frac(3, 4);
    let s = StableMap::new(MpMap::from_gains(&[vec![int(0), q.clone()], vec![q, int(0)]]).unwrap())
        .unwrap();
    let l = LeftEigenfunctional::new(&s, None, LeftMode::Sum).unwrap();
    let e1 = l.eval(&ints(&[1, 0])).unwrap();
    let e2 = l.eval(&ints(&[0, 1])).unwrap();
    let both = l.eval(&ints(&[1, 1])).unwrap();
    assert_eq!(
        (e1.clone(), e2.clone(), both.clone()),
        (frac(7, 4), frac(7, 4), int(2))
    );
    assert_ne!(both, &e1 + &e2);
    assert_ne!(both, e1.max(e2));
}

#[test]
fn certificate_examples() {
    let a = three_node_example();
    let c = build_descent_certificate(&a, CertificateMode::LeftSum, 100, 7).unwrap();
    assert!(c.all_strict);
    assert_eq!(c.samples.len(), 100);
    assert!(c
        .samples
        .iter()
        .all(|s| s.x.is_positive() && s.after < s.before));
    assert_eq!(
        c,
        build_descent_certificate(&a, CertificateMode::LeftSum, 100, 7).unwrap()
    );

    let m = build_descent_certificate(&a, CertificateMode::LeftMax, 100, 7).unwrap();
    assert!(m.samples.iter().all(|s| s.after <= s.before));

    let z = build_descent_certificate(&MpMap::zero(2), CertificateMode::LeftSum, 10, 1).unwrap();
    assert!(z.all_strict);
    assert!(z.samples.iter().all(|s| s.after == int(0)));

    assert_eq!(
        build_descent_certificate(&a, CertificateMode::LeftSum, 0, 7),
        Err(SpectralError::NoSamples)
    );
    assert!(matches!(
        build_descent_certificate(&MpMap::identity(1), CertificateMode::LeftSum, 5, 0),
        Err(SpectralError::Analysis(AnalysisError::NotStable(_)))
    ));
}

#[test]
fn certificate_json_shape() {
    let c = build_descent_certificate(&three_node_example(), CertificateMode::MaxSeparable, 2, 3)
        .unwrap();
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["mode"], "max-separable");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["sample_count"], 2);
    assert!(v["samples"][0]["before"].is_string());
    assert_eq!(v["samples"][0]["x"].as_array().unwrap().len(), 3);
}

fn arb_stable(kinds: Vec<EntryKind>) -> impl Strategy<Value = (StableMap, u64)> {
    (1usize..=4, any::<u64>(), prop::sample::select(kinds)).prop_map(|(n, seed, kind)| {
        let mut r = instances::rng(seed);
        (
            StableMap::new(instances::random_stable(&mut r, n, kind, 0.3)).unwrap(),
            seed,
        )
    })
}

fn all_kinds() -> Vec<EntryKind> {
    vec![
        EntryKind::Linear,
        EntryKind::Pwl,
        EntryKind::PwlKinf,
        EntryKind::Mixed,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sum_mode_descent_is_strict((s, seed) in arb_stable(all_kinds())) {
        let mut r = instances::rng(seed ^ 11);
        let x = instances::positive_vector(&mut r, s.dim(), 100);
        let d = LeftEigenfunctional::new(&s, None, LeftMode::Sum).unwrap().descent(&x).unwrap();
        prop_assert!(d.strict, "{:?}", d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn left_matches_oracle_on_linear_maps((s, seed) in arb_stable(vec![EntryKind::Linear])) {
        let mut r = instances::rng(seed ^ 12);
        let n = s.dim();
        let w = instances::positive_vector(&mut r, n, 9);
        let x = instances::nonneg_vector(&mut r, n, 50);
        let l = LeftEigenfunctional::new(&s, Some(w.clone()), LeftMode::Sum).unwrap();
        let gains = s.map().gains().unwrap();
        prop_assert_eq!(l.eval(&x).unwrap(), left_oracle(&gains, w.coords(), x.coords()));
    }

    #[test]
    fn left_is_monotone_and_radially_unbounded((s, seed) in arb_stable(all_kinds()), max_mode in any::<bool>()) {
        let mut r = instances::rng(seed ^ 13);
        let n = s.dim();
        let w = instances::positive_vector(&mut r, n, 9);
        let mode = if max_mode { LeftMode::Max } else { LeftMode::Sum };
        let l = LeftEigenfunctional::new(&s, Some(w.clone()), mode).unwrap();
        let x = instances::nonneg_vector(&mut r, n, 50);
        let y = x.join(&instances::nonneg_vector(&mut r, n, 50)).unwrap();
        prop_assert!(l.eval(&x).unwrap() <= l.eval(&y).unwrap());
        let wmin = w.coords().iter().min().unwrap().clone();
        for m in [1i64, 10, 1000, 1_000_000] {
            prop_assert!(l.eval(&NonnegVector::ones(n).scale(&int(m))).unwrap() >= &wmin * int(m));
        }
        let d = l.descent(&x).unwrap();
        prop_assert!(d.after <= d.before);
    }

    #[test]
    fn right_eigenvector_bounds((s, seed) in arb_stable(all_kinds())) {
        let mut r = instances::rng(seed ^ 14);
        let n = s.dim();
        let v = instances::positive_vector(&mut r, n, 9);
        let rv = RightEigenvector::new(&s, Some(v.clone())).unwrap();
        let t = instances::rational_in(&mut r, 100);
        let d = rv.descent(&t).unwrap();
        prop_assert!(v.scale(&t).le(&d.r));
        prop_assert!(matches!(d.relation, OrderRelation::StrictlyLess | OrderRelation::ComponentwiseStrict));
        for (f, ri) in rv.coordinate_functions().iter().zip(d.r.coords()) {
            prop_assert_eq!(&fnalg::evaluate(f, &t).unwrap(), ri);
        }
    }

    #[test]
    fn max_separable_is_nonincreasing((s, seed) in arb_stable(vec![EntryKind::Linear, EntryKind::PwlKinf])) {
        let mut r = instances::rng(seed ^ 15);
        let rv = RightEigenvector::new(&s, None).unwrap();
        let x = instances::nonneg_vector(&mut r, s.dim(), 50);
        let before = rv.max_separable_lyapunov(&x).unwrap();
        let after = rv.max_separable_lyapunov(&apply(s.map(), &x).unwrap()).unwrap();
        prop_assert!(after <= before);
        // the curve stays on the level sets: V(r(t)) = t
        let t = instances::rational_in(&mut r, 100);
        prop_assert_eq!(rv.max_separable_lyapunov(&rv.eval(&t).unwrap()).unwrap(), t);
    }

    #[test]
    fn certificates_are_deterministic((s, seed) in arb_stable(all_kinds())) {
        let a = s.map().clone();
        let c1 = certify(&s, CertificateMode::LeftSum, 5, seed).unwrap();
        let c2 = build_descent_certificate(&a, CertificateMode::LeftSum, 5, seed).unwrap();
        prop_assert!(c1.all_strict);
        prop_assert_eq!(c1, c2);
    }
}
