//! Named example maps and seeded random generators of stable and unstable
//! instances, shared by the examples, the test suites and the certificate
//! sampler.
//!
//! Stable instances are built around a random positive scaling vector `v`:
//! entry `a_ij(t) = v_i · h_ij(t / v_j)` with every `h_ij` strictly below the
//! identity. Around any cycle the scalings cancel, so every cycle weight is a
//! composition of contractions and the map is stable even though single
//! entries may have gains well above one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fnalg::{self, ScalarFn};
use crate::mpmatrix::{MpMap, NonnegVector};
use crate::ratio::{frac, int, Rational};

/// Seeded generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The 3×3 max-times matrix
///
/// ```text
/// 1/2  1/3  1/7
///  2   1/2   0
///  0    3   1/2
/// ```
///
/// with five simple cycles of gains 1/2, 1/2, 1/2, 2/3 and 6/7.
pub fn three_node_example() -> MpMap {
    MpMap::from_gains(&[
        vec![frac(1, 2), frac(1, 3), frac(1, 7)],
        vec![int(2), frac(1, 2), int(0)],
        vec![int(0), int(3), frac(1, 2)],
    ])
    .expect("valid example")
}

/// A rational `p/q` with `p, q` uniform in `[1, max]`.
pub fn rational_in(rng: &mut impl Rng, max: i64) -> Rational {
    frac(rng.random_range(1..=max), rng.random_range(1..=max))
}

/// Strictly positive vector with coordinates `p/q`, `p, q ∈ [1, max]`.
pub fn positive_vector(rng: &mut impl Rng, n: usize, max: i64) -> NonnegVector {
    NonnegVector::new((0..n).map(|_| rational_in(rng, max)).collect()).expect("positive")
}

/// Nonnegative vector; each coordinate is zero with probability 1/4.
pub fn nonneg_vector(rng: &mut impl Rng, n: usize, max: i64) -> NonnegVector {
    NonnegVector::new(
        (0..n)
            .map(|_| {
                if rng.random_bool(0.25) {
                    int(0)
                } else {
                    rational_in(rng, max)
                }
            })
            .collect(),
    )
    .expect("nonnegative")
}

/// A factor in `[1/10, 9/10]` with small denominator.
fn contraction_gain(rng: &mut impl Rng) -> Rational {
    let q = rng.random_range(2..=10);
    frac(rng.random_range(1..q), q)
}

/// Piecewise-linear `h` with `h(t) < t` for all `t > 0`. With `strict`
/// every segment slope is positive (a K∞ function).
pub fn contraction_pwl(rng: &mut impl Rng, strict: bool) -> ScalarFn {
    let segments = rng.random_range(1..=3);
    let mut points = vec![(int(0), int(0))];
    let (mut t, mut v) = (int(0), int(0));
    for _ in 0..segments {
        t += frac(rng.random_range(1..=4), rng.random_range(1..=2));
        // new value uniformly placed in [v, t) (or (v, t) when strict)
        let lo = if strict { 1 } else { 0 };
        let share = frac(rng.random_range(lo..8), 8);
        v = &v + (&t - &v) * share;
        points.push((t.clone(), v.clone()));
    }
    let final_slope = contraction_gain(rng).max(if rng.random_bool(0.3) { int(1) } else { int(0) });
    ScalarFn::pwl(points, final_slope).expect("valid pwl")
}

/// Which entry shapes a random instance uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Linear,
    Pwl,
    /// Strictly increasing piecewise-linear entries (K∞ ∪ {0}).
    PwlKinf,
    Mixed,
}

/// `t ↦ v_i · h(t / v_j)`.
fn rescale(h: &ScalarFn, vi: &Rational, vj: &Rational) -> ScalarFn {
    let inner = ScalarFn::linear_nonneg(vj.recip());
    let outer = ScalarFn::linear_nonneg(vi.clone());
    fnalg::compose(&outer, &fnalg::compose(h, &inner))
}

fn random_contraction(rng: &mut impl Rng, kind: EntryKind) -> ScalarFn {
    let pwl = match kind {
        EntryKind::Linear => false,
        EntryKind::Pwl | EntryKind::PwlKinf => true,
        EntryKind::Mixed => rng.random_bool(0.5),
    };
    if pwl {
        let strict = kind == EntryKind::PwlKinf || rng.random_bool(0.5);
        contraction_pwl(rng, strict)
    } else {
        ScalarFn::linear_nonneg(contraction_gain(rng))
    }
}

/// Random stable `n × n` map; each entry is zero with probability
/// `zero_prob`.
pub fn random_stable(rng: &mut impl Rng, n: usize, kind: EntryKind, zero_prob: f64) -> MpMap {
    let scale: Vec<Rational> = (0..n)
        .map(|_| frac(rng.random_range(1..=8), rng.random_range(1..=2)))
        .collect();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if rng.random_bool(zero_prob) {
                        ScalarFn::Zero
                    } else {
                        let h = random_contraction(rng, kind);
                        rescale(&h, &scale[i], &scale[j])
                    }
                })
                .collect()
        })
        .collect();
    MpMap::new(rows).expect("square")
}

/// Overwrites the edges of a random simple cycle so that its weight is
/// linear with gain at least 2. Returns the cycle nodes `(i_1, …, i_k)`;
/// the weight is `a_{i_1 i_2} ∘ … ∘ a_{i_k i_1}`.
pub fn insert_expanding_cycle(rng: &mut impl Rng, a: &MpMap) -> (MpMap, Vec<usize>) {
    let n = a.dim();
    let len = rng.random_range(1..=n);
    let mut nodes: Vec<usize> = (0..n).collect();
    for k in 0..len {
        let pick = rng.random_range(k..n);
        nodes.swap(k, pick);
    }
    nodes.truncate(len);
    let mut rows: Vec<Vec<ScalarFn>> = a.rows().to_vec();
    // gains g_1 … g_k with product >= 2
    let mut gains: Vec<Rational> = (0..len)
        .map(|_| frac(rng.random_range(1..=6), rng.random_range(1..=3)))
        .collect();
    let product: Rational = gains.iter().fold(int(1), |acc, g| acc * g);
    if product < int(2) {
        gains[0] = &gains[0] * int(2) / &product;
    }
    for k in 0..len {
        let (i, j) = (nodes[k], nodes[(k + 1) % len]);
        rows[i][j] = ScalarFn::linear_nonneg(gains[k].clone());
    }
    (MpMap::new(rows).expect("square"), nodes)
}
