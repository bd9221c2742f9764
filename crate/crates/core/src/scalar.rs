//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All algorithms are written against [`Real`], which is implemented for
//! `f32` and `f64`. Each implementation also carries the numerical
//! tolerances appropriate to its precision; the `f64` values are the
//! reference ones, the `f32` values are scaled to what single precision can
//! actually resolve.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Tolerances used throughout the crate for a given precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Allowed deviation of a column norm from 1.
    pub column_norm: T,
    /// An entry counts as nonzero iff its magnitude exceeds this.
    pub zero: T,
    /// Relative singular-value cutoff used for rank decisions.
    pub rank: T,
    /// Relative score difference under which two selection scores tie.
    pub tie: T,
    /// Residual norms at or below this are treated as exactly zero.
    pub residual_zero: T,
    /// Smallest Gram eigenvalue accepted as positive semidefinite.
    pub psd: T,
    /// Slack allowed when checking an inequality that holds in exact arithmetic.
    pub inequality: T,
}

pub trait Real:
    'static
    + Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Default
    + Sum
    + Send
    + Sync
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Serialize
    + DeserializeOwned
{
    /// Name used in reports (`"f64"`, `"f32"`).
    const NAME: &'static str;

    fn tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal. Never fails for the implemented types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(v: usize) -> Self {
        Self::from_usize(v).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const NAME: &'static str = "f64";

    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            column_norm: 1e-10,
            zero: 1e-12,
            rank: 1e-10,
            tie: 1e-9,
            residual_zero: 1e-12,
            psd: 1e-12,
            inequality: 1e-9,
        }
    }
}

impl Real for f32 {
    const NAME: &'static str = "f32";

    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            column_norm: 1e-5,
            zero: 1e-6,
            rank: 1e-5,
            tie: 1e-5,
            residual_zero: 1e-6,
            psd: 1e-6,
            inequality: 1e-4,
        }
    }
}

/// Returns true when `a` and `b` are equal up to the tie tolerance,
/// measured against `1 + max(|a|, |b|)`.
#[inline]
pub fn scores_tie<T: Real>(a: T, b: T) -> bool {
    let scale = T::one() + a.abs().max(b.abs());
    (a - b).abs() <= T::tolerances().tie * scale
}
