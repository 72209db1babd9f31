//! JSON descriptor grammar for [`ScalarFn`].
//!
//! ```json
//! {"kind":"zero"} | {"kind":"identity"} | {"kind":"linear","gain":R}
//! {"kind":"power","coef":R,"exp":R}
//! {"kind":"pwl","points":[[R,R],...],"final_slope":R}
//! {"kind":"compose","outer":F,"inner":F} | {"kind":"max","of":[F,...]}
//! ```
//!
//! `R` is a string `"p/q"` or an integer (string or bare number).

use serde::{Deserialize, Serialize};

use super::{compose, max_of, FnError, ScalarFn};
use crate::ratio::{self, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FnDescriptor {
    Zero,
    Identity,
    Linear {
        #[serde(with = "ratio::serde_str")]
        gain: Rational,
    },
    Power {
        #[serde(with = "ratio::serde_str")]
        coef: Rational,
        #[serde(with = "ratio::serde_str")]
        exp: Rational,
    },
    Pwl {
        points: Vec<Point>,
        #[serde(with = "ratio::serde_str")]
        final_slope: Rational,
    },
    Compose {
        outer: Box<FnDescriptor>,
        inner: Box<FnDescriptor>,
    },
    Max {
        of: Vec<FnDescriptor>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(#[serde(with = "ratio::serde_str::vec")] pub Vec<Rational>);

impl FnDescriptor {
    /// Builds the normalized function, validating every invariant.
    pub fn to_fn(&self) -> Result<ScalarFn, FnError> {
        Ok(match self {
            FnDescriptor::Zero => ScalarFn::Zero,
            FnDescriptor::Identity => ScalarFn::Identity,
            FnDescriptor::Linear { gain } => ScalarFn::linear(gain.clone())?,
            FnDescriptor::Power { coef, exp } => ScalarFn::power(coef.clone(), exp.clone())?,
            FnDescriptor::Pwl {
                points,
                final_slope,
            } => {
                let pts = points
                    .iter()
                    .map(|p| match p.0.as_slice() {
                        [t, v] => Ok((t.clone(), v.clone())),
                        _ => Err(FnError::InvalidPwl(
                            "each point must be a pair [t, v]".into(),
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                ScalarFn::pwl(pts, final_slope.clone())?
            }
            FnDescriptor::Compose { outer, inner } => compose(&outer.to_fn()?, &inner.to_fn()?),
            FnDescriptor::Max { of } => {
                if of.is_empty() {
                    return Err(FnError::InvalidParameter(
                        "max needs at least one branch".into(),
                    ));
                }
                max_of(
                    of.iter()
                        .map(FnDescriptor::to_fn)
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
        })
    }
}

impl From<&ScalarFn> for FnDescriptor {
    fn from(f: &ScalarFn) -> Self {
        match f {
            ScalarFn::Zero => FnDescriptor::Zero,
            ScalarFn::Identity => FnDescriptor::Identity,
            ScalarFn::Linear(g) => FnDescriptor::Linear { gain: g.clone() },
            ScalarFn::Power { coef, exp } => FnDescriptor::Power {
                coef: coef.clone(),
                exp: exp.clone(),
            },
            ScalarFn::Pwl(p) => FnDescriptor::Pwl {
                points: p
                    .points()
                    .iter()
                    .map(|(t, v)| Point(vec![t.clone(), v.clone()]))
                    .collect(),
                final_slope: p.final_slope().clone(),
            },
            ScalarFn::Compose(a, b) => FnDescriptor::Compose {
                outer: Box::new(a.as_ref().into()),
                inner: Box::new(b.as_ref().into()),
            },
            ScalarFn::Max(bs) => FnDescriptor::Max {
                of: bs.iter().map(FnDescriptor::from).collect(),
            },
        }
    }
}

impl Serialize for ScalarFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FnDescriptor::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarFn {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FnDescriptor::deserialize(d)?
            .to_fn()
            .map_err(serde::de::Error::custom)
    }
}
