//! Symbolic nondecreasing functions `ℝ₊ → ℝ₊` with `f(0) = 0`: the entries
//! `a_ij` of a max-preserving matrix.
//!
//! Every value built through the smart constructors ([`ScalarFn::linear`],
//! [`compose`], [`max_of`], …) is kept in a normal form:
//!
//! * `Linear(1)` is `Identity`, `Power(c, 1)` is `Linear(c)`, a `Pwl` that is
//!   a straight line through the origin is `Linear`/`Identity`/`Zero`;
//! * `Compose` is a right-nested chain of at least two atoms (`Linear`,
//!   `Power`, `Pwl`) in which no adjacent pair has a closed form;
//! * `Max` has at least two branches, none of them `Zero` or `Max`, at most
//!   one piecewise-linear branch, no branch provably dominated by another,
//!   and branches sorted.
//!
//! Composition distributes over `Max` on both sides (valid because every
//! function here is nondecreasing), so nested trees stay shallow.
//!
//! All order questions are answered exactly or not at all: [`dominates`] and
//! [`below_identity`] return `Unknown` / `Uncertified` instead of sampling.

mod descriptor;
mod pwl;

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::ratio::{self, Rational};

pub use descriptor::FnDescriptor;
pub use pwl::Pwl;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FnError {
    #[error("value is irrational (no exact rational root)")]
    IrrationalValue,
    #[error("value lies above the supremum of a bounded function")]
    OutOfRange,
    #[error("negative argument")]
    NegativeArgument,
    #[error("invalid piecewise-linear function: {0}")]
    InvalidPwl(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarFn {
    Zero,
    Identity,
    Linear(Rational),
    Power { coef: Rational, exp: Rational },
    Pwl(Pwl),
    Compose(Box<ScalarFn>, Box<ScalarFn>),
    Max(Vec<ScalarFn>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FnClass {
    Zero,
    /// Continuous, strictly increasing, unbounded, zero at zero.
    Kinf,
    NondecreasingOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dominance {
    Yes,
    No,
    Unknown,
}

/// Outcome of the contraction test `f(t) < t` for all `t > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Contraction {
    Certified,
    /// `f(witness) >= witness` holds exactly.
    Refuted(Rational),
    Uncertified,
}

impl Contraction {
    pub fn is_certified(&self) -> bool {
        matches!(self, Contraction::Certified)
    }
}

impl ScalarFn {
    pub fn linear(gain: Rational) -> Result<Self, FnError> {
        if !gain.is_positive() {
            return Err(FnError::InvalidParameter(
                "linear gain must be positive".into(),
            ));
        }
        Ok(Self::linear_nonneg(gain))
    }

    /// Like [`ScalarFn::linear`] but maps a zero gain to `Zero`.
    pub fn linear_nonneg(gain: Rational) -> Self {
        assert!(!gain.is_negative(), "negative gain");
        if gain.is_zero() {
            ScalarFn::Zero
        } else if gain.is_one() {
            ScalarFn::Identity
        } else {
            ScalarFn::Linear(gain)
        }
    }

    pub fn power(coef: Rational, exp: Rational) -> Result<Self, FnError> {
        if !coef.is_positive() || !exp.is_positive() {
            return Err(FnError::InvalidParameter(
                "power coefficient and exponent must be positive".into(),
            ));
        }
        if exp.is_one() {
            return Ok(Self::linear_nonneg(coef));
        }
        Ok(ScalarFn::Power { coef, exp })
    }

    pub fn pwl(points: Vec<(Rational, Rational)>, final_slope: Rational) -> Result<Self, FnError> {
        Ok(Self::from_pwl(Pwl::new(points, final_slope)?))
    }

    pub(crate) fn from_pwl(p: Pwl) -> Self {
        let p = p.simplified();
        match p.as_linear() {
            Some(g) => Self::linear_nonneg(g.clone()),
            None => ScalarFn::Pwl(p),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ScalarFn::Zero)
    }

    /// Piecewise-linear view of `Zero`, `Identity`, `Linear` and `Pwl`.
    pub fn as_pwl(&self) -> Option<Pwl> {
        match self {
            ScalarFn::Zero => Some(Pwl::linear(Rational::zero())),
            ScalarFn::Identity => Some(Pwl::linear(Rational::one())),
            ScalarFn::Linear(g) => Some(Pwl::linear(g.clone())),
            ScalarFn::Pwl(p) => Some(p.clone()),
            _ => None,
        }
    }

    /// Gain of a linear function (`Zero` has gain 0, `Identity` gain 1).
    pub fn as_gain(&self) -> Option<Rational> {
        match self {
            ScalarFn::Zero => Some(Rational::zero()),
            ScalarFn::Identity => Some(Rational::one()),
            ScalarFn::Linear(g) => Some(g.clone()),
            _ => None,
        }
    }

    /// Atoms of a composition chain, outermost first.
    fn chain(&self) -> Vec<&ScalarFn> {
        match self {
            ScalarFn::Compose(outer, inner) => {
                let mut c = outer.chain();
                c.extend(inner.chain());
                c
            }
            other => vec![other],
        }
    }

    /// Number of nodes in the expression tree.
    pub fn size(&self) -> usize {
        match self {
            ScalarFn::Compose(a, b) => 1 + a.size() + b.size(),
            ScalarFn::Max(bs) => 1 + bs.iter().map(ScalarFn::size).sum::<usize>(),
            _ => 1,
        }
    }

    /// Rebuilds the value through the smart constructors.
    pub fn normalize(&self) -> ScalarFn {
        match self {
            ScalarFn::Linear(g) => Self::linear_nonneg(g.clone()),
            ScalarFn::Power { coef, exp } => {
                Self::power(coef.clone(), exp.clone()).unwrap_or_else(|_| ScalarFn::Power {
                    coef: coef.clone(),
                    exp: exp.clone(),
                })
            }
            ScalarFn::Pwl(p) => Self::from_pwl(p.clone()),
            ScalarFn::Compose(a, b) => compose(&a.normalize(), &b.normalize()),
            ScalarFn::Max(bs) => max_of(bs.iter().map(ScalarFn::normalize)),
            other => other.clone(),
        }
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational, FnError> {
        evaluate(self, t)
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Zero => write!(f, "0"),
            ScalarFn::Identity => write!(f, "id"),
            ScalarFn::Linear(g) => write!(f, "{}·t", ratio::format(g)),
            ScalarFn::Power { coef, exp } => {
                write!(f, "{}·t^({})", ratio::format(coef), ratio::format(exp))
            }
            ScalarFn::Pwl(p) => {
                write!(f, "pwl[")?;
                for (k, (t, v)) in p.points().iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "({}, {})", ratio::format(t), ratio::format(v))?;
                }
                write!(f, "; {}]", ratio::format(p.final_slope()))
            }
            ScalarFn::Compose(a, b) => write!(f, "{a} ∘ {b}"),
            ScalarFn::Max(bs) => {
                write!(f, "max(")?;
                for (k, b) in bs.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{b}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn check_arg(t: &Rational) -> Result<(), FnError> {
    if t.is_negative() {
        Err(FnError::NegativeArgument)
    } else {
        Ok(())
    }
}

/// Exact value `f(t)`.
pub fn evaluate(f: &ScalarFn, t: &Rational) -> Result<Rational, FnError> {
    check_arg(t)?;
    Ok(match f {
        ScalarFn::Zero => Rational::zero(),
        ScalarFn::Identity => t.clone(),
        ScalarFn::Linear(g) => g * t,
        ScalarFn::Power { coef, exp } => {
            coef * ratio::pow_exact(t, exp).ok_or(FnError::IrrationalValue)?
        }
        ScalarFn::Pwl(p) => p.eval(t),
        ScalarFn::Compose(outer, inner) => evaluate(outer, &evaluate(inner, t)?)?,
        ScalarFn::Max(bs) => {
            let mut best = Rational::zero();
            for b in bs {
                best = best.max(evaluate(b, t)?);
            }
            best
        }
    })
}

/// Floating-point approximation of `f(t)`; never used by certified checks.
pub fn evaluate_approx(f: &ScalarFn, t: f64) -> f64 {
    match f {
        ScalarFn::Zero => 0.0,
        ScalarFn::Identity => t,
        ScalarFn::Linear(g) => ratio::to_f64(g) * t,
        ScalarFn::Power { coef, exp } => ratio::to_f64(coef) * t.powf(ratio::to_f64(exp)),
        ScalarFn::Pwl(p) => {
            let pts = p.points();
            let idx = pts.partition_point(|(s, _)| ratio::to_f64(s) <= t).max(1);
            let (t0, v0) = (
                ratio::to_f64(&pts[idx - 1].0),
                ratio::to_f64(&pts[idx - 1].1),
            );
            let slope = match pts.get(idx) {
                Some((t1, v1)) => (ratio::to_f64(v1) - v0) / (ratio::to_f64(t1) - t0),
                None => ratio::to_f64(p.final_slope()),
            };
            v0 + slope * (t - t0)
        }
        ScalarFn::Compose(outer, inner) => evaluate_approx(outer, evaluate_approx(inner, t)),
        ScalarFn::Max(bs) => bs.iter().map(|b| evaluate_approx(b, t)).fold(0.0, f64::max),
    }
}

/// Closed form of `outer ∘ inner` for two atoms, when one exists.
fn combine_atoms(outer: &ScalarFn, inner: &ScalarFn) -> Option<ScalarFn> {
    use ScalarFn::*;
    match (outer, inner) {
        (Linear(a), Linear(b)) => Some(ScalarFn::linear_nonneg(a * b)),
        (Linear(a), Power { coef, exp }) => ScalarFn::power(a * coef, exp.clone()).ok(),
        (Power { coef, exp }, Linear(a)) => {
            let scaled = ratio::pow_exact(a, exp)?;
            ScalarFn::power(coef * scaled, exp.clone()).ok()
        }
        (Power { coef: c1, exp: p1 }, Power { coef: c2, exp: p2 }) => {
            let scaled = ratio::pow_exact(c2, p1)?;
            ScalarFn::power(c1 * scaled, p1 * p2).ok()
        }
        _ => {
            let (o, i) = (outer.as_pwl()?, inner.as_pwl()?);
            Some(ScalarFn::from_pwl(o.compose(&i)))
        }
    }
}

fn rebuild_chain(mut atoms: Vec<ScalarFn>) -> ScalarFn {
    let mut acc = atoms.pop().expect("nonempty chain");
    while let Some(outer) = atoms.pop() {
        acc = ScalarFn::Compose(Box::new(outer), Box::new(acc));
    }
    acc
}

/// `outer ∘ inner`, normalized.
pub fn compose(outer: &ScalarFn, inner: &ScalarFn) -> ScalarFn {
    use ScalarFn::*;
    match (outer, inner) {
        (Zero, _) | (_, Zero) => Zero,
        (Identity, f) | (f, Identity) => f.clone(),
        (Max(bs), g) => max_of(bs.iter().map(|b| compose(b, g))),
        (f, Max(bs)) => max_of(bs.iter().map(|b| compose(f, b))),
        _ => {
            let mut atoms: Vec<ScalarFn> = outer.chain().into_iter().cloned().collect();
            atoms.extend(inner.chain().into_iter().cloned());
            // Merge the leftmost combinable pair until none is left.
            'outer: loop {
                for k in 0..atoms.len().saturating_sub(1) {
                    if let Some(c) = combine_atoms(&atoms[k], &atoms[k + 1]) {
                        match c {
                            Zero => return Zero,
                            Identity => {
                                atoms.drain(k..k + 2);
                                if atoms.is_empty() {
                                    return Identity;
                                }
                            }
                            c => {
                                atoms.splice(k..k + 2, [c]);
                            }
                        }
                        continue 'outer;
                    }
                }
                break;
            }
            rebuild_chain(atoms)
        }
    }
}

/// Composition of a sequence, outermost first. The empty chain is the
/// identity.
pub fn compose_all<'a>(fs: impl IntoIterator<Item = &'a ScalarFn>) -> ScalarFn {
    let fs: Vec<&ScalarFn> = fs.into_iter().collect();
    fs.into_iter()
        .rev()
        .fold(ScalarFn::Identity, |acc, f| compose(f, &acc))
}

/// Pointwise maximum, normalized (flattened, `Zero` dropped, piecewise-linear
/// branches merged exactly, dominated branches pruned).
pub fn max_of(fs: impl IntoIterator<Item = ScalarFn>) -> ScalarFn {
    let mut flat = Vec::new();
    for f in fs {
        match f {
            ScalarFn::Zero => {}
            ScalarFn::Max(bs) => flat.extend(bs),
            other => flat.push(other),
        }
    }
    let mut merged: Option<Pwl> = None;
    let mut rest = Vec::new();
    for f in flat {
        match f.as_pwl() {
            Some(p) => {
                merged = Some(match merged {
                    Some(m) => m.pointwise_max(&p),
                    None => p,
                })
            }
            None => rest.push(f),
        }
    }
    if let Some(m) = merged {
        let m = ScalarFn::from_pwl(m);
        if !m.is_zero() {
            rest.push(m);
        }
    }
    rest.sort();
    rest.dedup();
    let mut keep = vec![true; rest.len()];
    for i in 0..rest.len() {
        for j in 0..rest.len() {
            if i != j && keep[j] && dominates(&rest[j], &rest[i]) == Dominance::Yes {
                keep[i] = false;
                break;
            }
        }
    }
    let mut branches: Vec<ScalarFn> = rest
        .into_iter()
        .zip(keep)
        .filter_map(|(f, k)| k.then_some(f))
        .collect();
    match branches.len() {
        0 => ScalarFn::Zero,
        1 => branches.pop().unwrap(),
        _ => ScalarFn::Max(branches),
    }
}

/// Binary pointwise maximum.
pub fn max2(f: &ScalarFn, g: &ScalarFn) -> ScalarFn {
    max_of([f.clone(), g.clone()])
}

/// Analytic test for `f(t) >= g(t)` on all of `ℝ₊`.
pub fn dominates(f: &ScalarFn, g: &ScalarFn) -> Dominance {
    use ScalarFn::*;
    if g.is_zero() || f == g {
        return Dominance::Yes;
    }
    if f.is_zero() {
        return Dominance::No;
    }
    if let Max(gs) = g {
        let mut all = true;
        for gi in gs {
            match dominates(f, gi) {
                Dominance::Yes => {}
                Dominance::No => return Dominance::No,
                Dominance::Unknown => all = false,
            }
        }
        return if all {
            Dominance::Yes
        } else {
            Dominance::Unknown
        };
    }
    if let Max(fs) = f {
        return if fs.iter().any(|fi| dominates(fi, g) == Dominance::Yes) {
            Dominance::Yes
        } else {
            Dominance::Unknown
        };
    }
    if let (Some(p), Some(q)) = (f.as_pwl(), g.as_pwl()) {
        return if p.dominates(&q) {
            Dominance::Yes
        } else {
            Dominance::No
        };
    }
    match (f, g) {
        (Power { coef: c1, exp: p1 }, Power { coef: c2, exp: p2 }) if p1 == p2 => {
            if c1 >= c2 {
                Dominance::Yes
            } else {
                Dominance::No
            }
        }
        // t^p with p != 1 crosses every line through the origin.
        (Power { .. }, Identity | Linear(_)) | (Identity | Linear(_), Power { .. }) => {
            Dominance::No
        }
        _ => Dominance::Unknown,
    }
}

/// Class of `f` as far as it can be proven structurally.
pub fn classify(f: &ScalarFn) -> FnClass {
    match f {
        ScalarFn::Zero => FnClass::Zero,
        ScalarFn::Identity | ScalarFn::Linear(_) | ScalarFn::Power { .. } => FnClass::Kinf,
        ScalarFn::Pwl(p) => {
            if p.is_strictly_increasing_unbounded() {
                FnClass::Kinf
            } else {
                FnClass::NondecreasingOnly
            }
        }
        ScalarFn::Compose(a, b) => {
            if classify(a) == FnClass::Kinf && classify(b) == FnClass::Kinf {
                FnClass::Kinf
            } else {
                FnClass::NondecreasingOnly
            }
        }
        ScalarFn::Max(bs) => {
            if bs.iter().all(|b| classify(b) == FnClass::Kinf) {
                FnClass::Kinf
            } else {
                FnClass::NondecreasingOnly
            }
        }
    }
}

fn exponent_denominators(f: &ScalarFn, acc: &mut u64) {
    match f {
        ScalarFn::Power { exp, .. } => {
            let d = exp.denom().to_u64().unwrap_or(1);
            *acc = num_integer::lcm(*acc, d);
        }
        ScalarFn::Compose(a, b) => {
            exponent_denominators(a, acc);
            exponent_denominators(b, acc);
        }
        ScalarFn::Max(bs) => bs.iter().for_each(|b| exponent_denominators(b, acc)),
        _ => {}
    }
}

/// Some `T` with `f(T) > bound`, searched over `T = 2^(jL)` where `L` clears
/// every exponent denominator in the tree. `None` when `f` is not provably
/// unbounded or no exact witness was found.
pub fn unboundedness_witness(f: &ScalarFn, bound: &Rational) -> Option<Rational> {
    if classify(f) != FnClass::Kinf {
        return None;
    }
    let mut l = 1u64;
    exponent_denominators(f, &mut l);
    let step = i64::try_from(l.min(64)).ok()?;
    for j in 0..512 {
        let t = ratio::pow2(j * step);
        if let Ok(v) = evaluate(f, &t) {
            if &v > bound {
                return Some(t);
            }
        }
    }
    None
}

/// Exact witness `t` for `c·t^p >= t`, `p != 1`.
fn power_witness(coef: &Rational, exp: &Rational) -> Rational {
    let one = Rational::one();
    let (a, b) = ratio::exponent_parts(exp).unwrap_or((2, 1));
    // With t = 2^(±bk) the power t^p = 2^(±ak) is rational.
    let sign: i64 = if exp > &one { 1 } else { -1 };
    let (a, b) = (i64::from(a), i64::from(b));
    for k in 1.. {
        let t = ratio::pow2(sign * b * k);
        let value = coef * ratio::pow2(sign * a * k);
        if value >= t {
            return t;
        }
    }
    unreachable!()
}

/// Decides `f(t) < t` for every `t > 0`.
pub fn below_identity(f: &ScalarFn) -> Contraction {
    let one = Rational::one();
    match f {
        ScalarFn::Zero => Contraction::Certified,
        ScalarFn::Identity => Contraction::Refuted(one),
        ScalarFn::Linear(g) => {
            if g < &one {
                Contraction::Certified
            } else {
                Contraction::Refuted(one)
            }
        }
        ScalarFn::Power { coef, exp } => {
            if exp.is_one() {
                below_identity(&ScalarFn::linear_nonneg(coef.clone()))
            } else {
                Contraction::Refuted(power_witness(coef, exp))
            }
        }
        ScalarFn::Pwl(p) => match p.below_identity() {
            Ok(()) => Contraction::Certified,
            Err(w) => Contraction::Refuted(w),
        },
        ScalarFn::Max(bs) => {
            let mut all = true;
            for b in bs {
                match below_identity(b) {
                    Contraction::Certified => {}
                    Contraction::Refuted(w) => return Contraction::Refuted(w),
                    Contraction::Uncertified => all = false,
                }
            }
            if all {
                Contraction::Certified
            } else {
                Contraction::Uncertified
            }
        }
        ScalarFn::Compose(..) => {
            let normal = f.normalize();
            if !matches!(normal, ScalarFn::Compose(..)) {
                return below_identity(&normal);
            }
            if normal.chain().iter().all(|a| below_identity(a).is_certified()) {
                Contraction::Certified
            } else {
                Contraction::Uncertified
            }
        }
    }
}

/// Lower generalized inverse `inf { t >= 0 : f(t) >= y }`.
pub fn generalized_inverse(f: &ScalarFn, y: &Rational) -> Result<Rational, FnError> {
    check_arg(y)?;
    if y.is_zero() {
        return Ok(Rational::zero());
    }
    match f {
        ScalarFn::Zero => Err(FnError::OutOfRange),
        ScalarFn::Identity => Ok(y.clone()),
        ScalarFn::Linear(g) => Ok(y / g),
        ScalarFn::Power { coef, exp } => {
            ratio::pow_exact(&(y / coef), &exp.recip()).ok_or(FnError::IrrationalValue)
        }
        ScalarFn::Pwl(p) => p.lower_inverse(y),
        ScalarFn::Compose(outer, inner) => {
            // For continuous nondecreasing f: f(s) >= y iff s >= f⁻(y).
            generalized_inverse(inner, &generalized_inverse(outer, y)?)
        }
        ScalarFn::Max(bs) => {
            let mut best: Option<Rational> = None;
            for b in bs {
                match generalized_inverse(b, y) {
                    Ok(t) => best = Some(best.map_or(t.clone(), |m| m.min(t))),
                    Err(FnError::OutOfRange) => {}
                    Err(e) => return Err(e),
                }
            }
            best.ok_or(FnError::OutOfRange)
        }
    }
}
