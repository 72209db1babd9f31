//! Nonlinear left and right eigenvectors of a stable map and the Lyapunov
//! functions built from them.
//!
//! For a stable `A` with closure `A*`:
//!
//! * the left eigenfunctional `l(x) = Σ w_i (A*x)_i` satisfies `l(0) = 0`,
//!   grows without bound, and strictly decreases along trajectories:
//!   `l(Ax) < l(x)` for `x ≠ 0`. Replacing the sum by a maximum gives a
//!   weaker functional that only satisfies `l(Ax) ≤ l(x)`;
//! * the right eigenvector `r(t) = A*(t·v)` is a monotone curve with
//!   `r(0) = 0`, `r(t) ≥ t·v` and `A(r(t)) < r(t)` for `t > 0`, where `<`
//!   means `≤` and `≠`;
//! * `V(x) = max_i r_i⁻¹(x_i)` is a max-separable Lyapunov candidate.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{AnalysisError, StableMap};
use crate::fnalg::{self, FnError, ScalarFn};
use crate::instances;
use crate::mpmatrix::{apply, compare_vectors, MapError, MpMap, NonnegVector, OrderRelation};
use crate::ratio::{self, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("{what} must be strictly positive")]
    NotPositive { what: &'static str },
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("coordinate {index} of the right eigenvector: {source}")]
    Inverse { index: usize, source: FnError },
    #[error("descent violated at sample {index}: before {before}, after {after}")]
    DescentViolated {
        index: usize,
        before: String,
        after: String,
    },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LeftMode {
    Sum,
    Max,
}

/// `x ↦ Σ_i w_i (A*x)_i` (or the maximum instead of the sum).
#[derive(Debug, Clone)]
pub struct LeftEigenfunctional<'a> {
    map: &'a StableMap,
    weights: NonnegVector,
    mode: LeftMode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftDescent {
    pub before: Rational,
    pub after: Rational,
    pub strict: bool,
}

impl<'a> LeftEigenfunctional<'a> {
    /// `weights = None` means `𝟏`.
    pub fn new(
        map: &'a StableMap,
        weights: Option<NonnegVector>,
        mode: LeftMode,
    ) -> Result<Self, SpectralError> {
        let weights = weights.unwrap_or_else(|| NonnegVector::ones(map.dim()));
        check_direction(&weights, map.dim(), "weights")?;
        Ok(LeftEigenfunctional { map, weights, mode })
    }

    pub fn weights(&self) -> &NonnegVector {
        &self.weights
    }

    pub fn mode(&self) -> LeftMode {
        self.mode
    }

    pub fn eval(&self, x: &NonnegVector) -> Result<Rational, MapError> {
        let star_x = self.map.closure_apply(x)?;
        let terms = star_x
            .coords()
            .iter()
            .zip(self.weights.coords())
            .map(|(s, w)| s * w);
        Ok(match self.mode {
            LeftMode::Sum => terms.sum(),
            LeftMode::Max => terms.max().unwrap_or_else(|| int(0)),
        })
    }

    /// `l(x)` against `l(Ax)`.
    pub fn descent(&self, x: &NonnegVector) -> Result<LeftDescent, MapError> {
        let before = self.eval(x)?;
        let after = self.eval(&apply(self.map.map(), x)?)?;
        Ok(LeftDescent {
            strict: after < before,
            before,
            after,
        })
    }
}

/// `t ↦ A*(t·v)`.
#[derive(Debug)]
pub struct RightEigenvector<'a> {
    map: &'a StableMap,
    direction: NonnegVector,
    coordinates: OnceLock<Vec<ScalarFn>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RightDescent {
    pub ar: NonnegVector,
    pub r: NonnegVector,
    pub relation: OrderRelation,
}

impl<'a> RightEigenvector<'a> {
    /// `direction = None` means `𝟏`.
    pub fn new(map: &'a StableMap, direction: Option<NonnegVector>) -> Result<Self, SpectralError> {
        let direction = direction.unwrap_or_else(|| NonnegVector::ones(map.dim()));
        check_direction(&direction, map.dim(), "direction")?;
        Ok(RightEigenvector {
            map,
            direction,
            coordinates: OnceLock::new(),
        })
    }

    pub fn direction(&self) -> &NonnegVector {
        &self.direction
    }

    pub fn eval(&self, t: &Rational) -> Result<NonnegVector, MapError> {
        self.map.closure_apply(&self.direction.scale(t))
    }

    /// `A(r(t))` against `r(t)`.
    pub fn descent(&self, t: &Rational) -> Result<RightDescent, MapError> {
        let r = self.eval(t)?;
        let ar = apply(self.map.map(), &r)?;
        let relation = compare_vectors(&ar, &r)?;
        Ok(RightDescent { ar, r, relation })
    }

    /// Symbolic coordinates `r_i(t) = max_j a*_ij(v_j t)`.
    pub fn coordinate_functions(&self) -> &[ScalarFn] {
        self.coordinates.get_or_init(|| {
            let star = &self.map.closure().star;
            (0..self.map.dim())
                .map(|i| {
                    fnalg::max_of(self.direction.coords().iter().enumerate().map(|(j, v)| {
                        fnalg::compose(star.entry(i, j), &ScalarFn::linear_nonneg(v.clone()))
                    }))
                })
                .collect()
        })
    }

    /// `V(x) = max_i r_i⁻¹(x_i)` with the lower generalized inverse.
    pub fn max_separable_lyapunov(&self, x: &NonnegVector) -> Result<Rational, SpectralError> {
        if x.dim() != self.map.dim() {
            return Err(MapError::DimensionMismatch {
                expected: self.map.dim(),
                actual: x.dim(),
            }
            .into());
        }
        let mut best = int(0);
        for (index, (r, xi)) in self
            .coordinate_functions()
            .iter()
            .zip(x.coords())
            .enumerate()
        {
            let v = fnalg::generalized_inverse(r, xi)
                .map_err(|source| SpectralError::Inverse { index, source })?;
            if v > best {
                best = v;
            }
        }
        Ok(best)
    }
}

fn check_direction(v: &NonnegVector, n: usize, what: &'static str) -> Result<(), SpectralError> {
    if v.dim() != n {
        return Err(MapError::DimensionMismatch {
            expected: n,
            actual: v.dim(),
        }
        .into());
    }
    if !v.is_positive() {
        return Err(SpectralError::NotPositive { what });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    LeftSum,
    LeftMax,
    MaxSeparable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentSample {
    pub x: NonnegVector,
    #[serde(with = "ratio::serde_str")]
    pub before: Rational,
    #[serde(with = "ratio::serde_str")]
    pub after: Rational,
}

/// Exact before/after values of a Lyapunov candidate at seeded random points.
///
/// Sample coordinates are `p/q` with `p, q` uniform in `[1, 1000]`, drawn from
/// a ChaCha8 generator seeded with `seed`, coordinate by coordinate and
/// sample by sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentCertificate {
    pub mode: CertificateMode,
    pub seed: u64,
    pub sample_count: usize,
    pub all_strict: bool,
    pub samples: Vec<DescentSample>,
}

/// Samples `sample_count` strictly positive points and records the value of
/// the chosen candidate before and after one step of `A`.
///
/// Errors on any increase, and in `LeftSum` mode on any non-strict sample:
/// both contradict the construction and indicate a bug.
pub fn build_descent_certificate(
    a: &MpMap,
    mode: CertificateMode,
    sample_count: usize,
    seed: u64,
) -> Result<DescentCertificate, SpectralError> {
    let stable = StableMap::new(a.clone())?;
    certify(&stable, mode, sample_count, seed)
}

pub fn certify(
    stable: &StableMap,
    mode: CertificateMode,
    sample_count: usize,
    seed: u64,
) -> Result<DescentCertificate, SpectralError> {
    if sample_count == 0 {
        return Err(SpectralError::NoSamples);
    }
    let left_mode = if mode == CertificateMode::LeftMax {
        LeftMode::Max
    } else {
        LeftMode::Sum
    };
    let left = LeftEigenfunctional::new(stable, None, left_mode)?;
    let right = RightEigenvector::new(stable, None)?;
    let value = |x: &NonnegVector| -> Result<Rational, SpectralError> {
        match mode {
            CertificateMode::LeftSum | CertificateMode::LeftMax => Ok(left.eval(x)?),
            CertificateMode::MaxSeparable => right.max_separable_lyapunov(x),
        }
    };

    let mut rng = instances::rng(seed);
    let mut samples = Vec::with_capacity(sample_count);
    let mut all_strict = true;
    for index in 0..sample_count {
        let x = instances::positive_vector(&mut rng, stable.dim(), 1000);
        let before = value(&x)?;
        let after = value(&apply(stable.map(), &x)?)?;
        let strict = after < before;
        if after > before || (mode == CertificateMode::LeftSum && !strict) {
            return Err(SpectralError::DescentViolated {
                index,
                before: ratio::format(&before),
                after: ratio::format(&after),
            });
        }
        all_strict &= strict;
        samples.push(DescentSample { x, before, after });
    }
    Ok(DescentCertificate {
        mode,
        seed,
        sample_count,
        all_strict,
        samples,
    })
}

#[cfg(test)]
mod tests;
