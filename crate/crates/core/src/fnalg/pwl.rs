//! Continuous nondecreasing piecewise-linear functions on `[0, ∞)` with exact
//! rational breakpoints.
//!
//! A [`Pwl`] is given by breakpoints `(t_0, v_0) = (0, 0), (t_1, v_1), …` with
//! strictly increasing abscissae and nondecreasing values, linear
//! interpolation in between, and a final slope beyond the last breakpoint.
//! The class is closed under composition and pointwise maximum, and every
//! order question about it (dominance, staying below the identity, inverse)
//! is decided exactly at finitely many points.

use num_traits::{One, Signed, Zero};

use super::FnError;
use crate::ratio::Rational;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pwl {
    points: Vec<(Rational, Rational)>,
    final_slope: Rational,
}

impl Pwl {
    /// Validates the breakpoint invariants.
    pub fn new(points: Vec<(Rational, Rational)>, final_slope: Rational) -> Result<Self, FnError> {
        match points.first() {
            Some((t, v)) if t.is_zero() && v.is_zero() => {}
            _ => {
                return Err(FnError::InvalidPwl(
                    "first breakpoint must be (0, 0)".into(),
                ))
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(FnError::InvalidPwl(
                    "breakpoint abscissae must be strictly increasing".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(FnError::InvalidPwl(
                    "breakpoint values must be nondecreasing".into(),
                ));
            }
        }
        if final_slope.is_negative() {
            return Err(FnError::InvalidPwl(
                "final slope must be nonnegative".into(),
            ));
        }
        Ok(Pwl {
            points,
            final_slope,
        })
    }

    /// `t ↦ gain·t`.
    pub fn linear(gain: Rational) -> Self {
        Pwl {
            points: vec![(Rational::zero(), Rational::zero())],
            final_slope: gain,
        }
    }

    pub fn points(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn final_slope(&self) -> &Rational {
        &self.final_slope
    }

    fn last(&self) -> &(Rational, Rational) {
        self.points.last().expect("at least the origin")
    }

    /// Slope of every segment, the final slope included as the last entry.
    pub fn slopes(&self) -> Vec<Rational> {
        let mut s: Vec<Rational> = self
            .points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        s.push(self.final_slope.clone());
        s
    }

    /// Drops breakpoints whose neighbouring segments are collinear.
    pub fn simplified(mut self) -> Self {
        let slopes = self.slopes();
        let mut keep = vec![true; self.points.len()];
        for k in 1..self.points.len() {
            if slopes[k - 1] == slopes[k] {
                keep[k] = false;
            }
        }
        let mut i = 0;
        self.points.retain(|_| {
            i += 1;
            keep[i - 1]
        });
        self
    }

    /// Returns the gain when the function is `t ↦ gain·t`.
    pub fn as_linear(&self) -> Option<&Rational> {
        (self.points.len() == 1).then_some(&self.final_slope)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let idx = self.points.partition_point(|(p, _)| p <= t);
        // idx >= 1 because the first abscissa is 0 <= t.
        let (t0, v0) = &self.points[idx - 1];
        let slope = match self.points.get(idx) {
            Some((t1, v1)) => (v1 - v0) / (t1 - t0),
            None => self.final_slope.clone(),
        };
        v0 + slope * (t - t0)
    }

    pub fn is_bounded(&self) -> bool {
        self.final_slope.is_zero()
    }

    /// Supremum of the function when bounded.
    pub fn sup(&self) -> Option<&Rational> {
        self.is_bounded().then(|| &self.last().1)
    }

    pub fn is_strictly_increasing_unbounded(&self) -> bool {
        self.slopes().iter().all(|s| s.is_positive())
    }

    fn from_samples(
        ts: Vec<Rational>,
        f: impl Fn(&Rational) -> Rational,
        final_slope: Rational,
    ) -> Self {
        let points = ts.into_iter().map(|t| {
            let v = f(&t);
            (t, v)
        });
        Pwl {
            points: points.collect(),
            final_slope,
        }
        .simplified()
    }

    /// Sorted, deduplicated union of both breakpoint sets.
    fn merged_abscissae(&self, other: &Pwl) -> Vec<Rational> {
        let mut ts: Vec<Rational> = self
            .points
            .iter()
            .chain(other.points.iter())
            .map(|(t, _)| t.clone())
            .collect();
        ts.sort();
        ts.dedup();
        ts
    }

    /// Exact `self ∘ inner`.
    pub fn compose(&self, inner: &Pwl) -> Pwl {
        let mut ts: Vec<Rational> = inner.points.iter().map(|(t, _)| t.clone()).collect();
        for (s, _) in self.points.iter().skip(1) {
            if let Ok(t) = inner.lower_inverse(s) {
                ts.push(t);
            }
        }
        ts.sort();
        ts.dedup();
        let final_slope = if inner.final_slope.is_zero() {
            Rational::zero()
        } else {
            // All outer breakpoints have preimages, so beyond the last
            // abscissa the outer function is on its final segment.
            &self.final_slope * &inner.final_slope
        };
        Pwl::from_samples(ts, |t| self.eval(&inner.eval(t)), final_slope)
    }

    /// Exact pointwise maximum.
    pub fn pointwise_max(&self, other: &Pwl) -> Pwl {
        let base = self.merged_abscissae(other);
        let gap = |t: &Rational| self.eval(t) - other.eval(t);
        let mut ts = base.clone();
        for w in base.windows(2) {
            let (d0, d1) = (gap(&w[0]), gap(&w[1]));
            if (d0.is_positive() && d1.is_negative()) || (d0.is_negative() && d1.is_positive()) {
                ts.push(&w[0] + &d0 / (&d0 - &d1) * (&w[1] - &w[0]));
            }
        }
        let t_last = base.last().expect("nonempty").clone();
        let d_last = gap(&t_last);
        let ds = &self.final_slope - &other.final_slope;
        if (d_last.is_positive() && ds.is_negative()) || (d_last.is_negative() && ds.is_positive())
        {
            ts.push(&t_last - &d_last / &ds);
        }
        ts.sort();
        ts.dedup();
        // After the last abscissa the two functions no longer cross.
        let t_end = ts.last().expect("nonempty").clone();
        let d_end = gap(&t_end);
        let final_slope = if d_end.is_positive() {
            self.final_slope.clone()
        } else if d_end.is_negative() {
            other.final_slope.clone()
        } else {
            self.final_slope.clone().max(other.final_slope.clone())
        };
        Pwl::from_samples(ts, |t| self.eval(t).max(other.eval(t)), final_slope)
    }

    /// Whether `self(t) >= other(t)` for every `t >= 0`.
    pub fn dominates(&self, other: &Pwl) -> bool {
        let ts = self.merged_abscissae(other);
        ts.iter().all(|t| self.eval(t) >= other.eval(t)) && self.final_slope >= other.final_slope
    }

    /// Decides `f(t) < t` for all `t > 0`. `Err(w)` carries a witness
    /// `w > 0` with `f(w) >= w`.
    pub fn below_identity(&self) -> Result<(), Rational> {
        for (t, v) in self.points.iter().skip(1) {
            if v >= t {
                return Err(t.clone());
            }
        }
        let (t_last, v_last) = self.last();
        if t_last.is_zero() {
            return if self.final_slope < Rational::one() {
                Ok(())
            } else {
                Err(Rational::one())
            };
        }
        // Breakpoint gaps are all negative here; only the tail can fail.
        if self.final_slope > Rational::one() {
            let gap = t_last - v_last;
            return Err(t_last + gap / (&self.final_slope - Rational::one()));
        }
        Ok(())
    }

    /// `inf { t >= 0 : f(t) >= y }`.
    pub fn lower_inverse(&self, y: &Rational) -> Result<Rational, FnError> {
        if !y.is_positive() {
            return Ok(Rational::zero());
        }
        let idx = self.points.partition_point(|(_, v)| v < y);
        if idx < self.points.len() {
            let (t0, v0) = &self.points[idx - 1];
            let (t1, v1) = &self.points[idx];
            return Ok(t0 + (y - v0) * (t1 - t0) / (v1 - v0));
        }
        let (t_last, v_last) = self.last();
        if self.final_slope.is_zero() {
            return Err(FnError::OutOfRange);
        }
        Ok(t_last + (y - v_last) / &self.final_slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{frac, int};

    fn pwl(points: &[(i64, i64)], s: Rational) -> Pwl {
        Pwl::new(points.iter().map(|&(t, v)| (int(t), int(v))).collect(), s).unwrap()
    }

    #[test]
    fn rejects_bad_breakpoints() {
        assert!(Pwl::new(vec![(int(1), int(0))], int(1)).is_err());
        assert!(Pwl::new(
            vec![(int(0), int(0)), (int(2), int(1)), (int(1), int(3))],
            int(1)
        )
        .is_err());
        assert!(Pwl::new(
            vec![(int(0), int(0)), (int(1), int(2)), (int(2), int(1))],
            int(1)
        )
        .is_err());
        assert!(Pwl::new(vec![(int(0), int(0))], int(-1)).is_err());
    }

    #[test]
    fn eval_and_tail() {
        let f = pwl(&[(0, 0), (2, 1), (4, 1)], frac(1, 2));
        assert_eq!(f.eval(&int(1)), frac(1, 2));
        assert_eq!(f.eval(&int(3)), int(1));
        assert_eq!(f.eval(&int(8)), int(3));
    }

    #[test]
    fn compose_hits_outer_breakpoints() {
        // outer: slope 1 up to 1, then slope 3; inner: 2t
        let outer = pwl(&[(0, 0), (1, 1)], int(3));
        let inner = Pwl::linear(int(2));
        let c = outer.compose(&inner);
        assert_eq!(c.points(), &[(int(0), int(0)), (frac(1, 2), int(1))]);
        assert_eq!(c.final_slope(), &int(6));
        for k in 0..20 {
            let t = frac(k, 3);
            assert_eq!(c.eval(&t), outer.eval(&inner.eval(&t)));
        }
    }

    #[test]
    fn compose_with_bounded_inner() {
        let outer = pwl(&[(0, 0), (1, 1)], int(3));
        let inner = pwl(&[(0, 0), (1, 2)], int(0));
        let c = outer.compose(&inner);
        assert_eq!(c.final_slope(), &int(0));
        assert_eq!(c.eval(&int(5)), int(4));
        assert_eq!(c.eval(&frac(1, 2)), int(1));
    }

    #[test]
    fn max_inserts_crossings() {
        let a = pwl(&[(0, 0), (1, 2)], int(0));
        let b = Pwl::linear(int(1));
        let m = a.pointwise_max(&b);
        assert_eq!(m.eval(&int(1)), int(2));
        assert_eq!(m.eval(&int(3)), int(3));
        assert_eq!(m.eval(&int(2)), int(2));
        assert_eq!(m.final_slope(), &int(1));
        assert!(m.dominates(&a) && m.dominates(&b));
        assert!(!a.dominates(&b) && !b.dominates(&a));
    }

    #[test]
    fn below_identity_cases() {
        assert!(Pwl::linear(frac(1, 2)).below_identity().is_ok());
        assert_eq!(Pwl::linear(int(1)).below_identity(), Err(int(1)));
        // slope one tail with negative gap stays below
        let f = pwl(&[(0, 0), (2, 1)], int(1));
        assert!(f.below_identity().is_ok());
        // touches identity at a breakpoint
        let g = pwl(&[(0, 0), (2, 1), (3, 3)], int(0));
        assert_eq!(g.below_identity(), Err(int(3)));
        // steep tail crosses at t = 4
        let h = pwl(&[(0, 0), (2, 1)], int(2));
        let w = h.below_identity().unwrap_err();
        assert_eq!(w, int(3));
        assert!(h.eval(&w) >= w);
    }

    #[test]
    fn lower_inverse_flat_segment() {
        let f = pwl(&[(0, 0), (1, 1), (3, 1)], int(2));
        assert_eq!(f.lower_inverse(&int(1)).unwrap(), int(1));
        assert_eq!(f.lower_inverse(&int(3)).unwrap(), int(4));
        assert_eq!(f.lower_inverse(&frac(1, 2)).unwrap(), frac(1, 2));
        let bounded = pwl(&[(0, 0), (1, 1)], int(0));
        assert_eq!(bounded.lower_inverse(&int(2)), Err(FnError::OutOfRange));
    }
}
