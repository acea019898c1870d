//! Scalar abstraction for the formula-level bounds.
//!
//! Budgets, cubic gates and genus comparisons are written once against
//! [`Scalar`] and instantiated with an exact rational for every decision.
//! `f64` is supported for quick exploratory scans only.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed {
    fn from_int(v: i64) -> Self;

    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_int(numer) / Self::from_int(denom)
    }

    /// Greatest integer `<= self`.
    fn floor_int(&self) -> i64;

    /// Least integer `>= self`.
    fn ceil_int(&self) -> i64 {
        -(-self.clone()).floor_int()
    }

    /// Whether results of this type may be used to decide a verdict.
    const EXACT: bool;
}

macro_rules! impl_ratio_prim {
    ($t:ty) => {
        impl Scalar for Ratio<$t> {
            fn from_int(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }

            fn floor_int(&self) -> i64 {
                let (q, _) = self.numer().div_mod_floor(self.denom());
                q as i64
            }

            const EXACT: bool = true;
        }
    };
}

impl_ratio_prim!(i64);
impl_ratio_prim!(i128);

impl Scalar for Ratio<BigInt> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }

    fn floor_int(&self) -> i64 {
        let (q, _) = self.numer().div_mod_floor(self.denom());
        i64::try_from(q).expect("floor out of i64 range")
    }

    const EXACT: bool = true;
}

impl Scalar for f64 {
    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn floor_int(&self) -> i64 {
        f64::floor(*self) as i64
    }

    const EXACT: bool = false;
}

/// Generalised binomial `x (x-1) (x-2) / 6` for a scalar argument.
pub fn binom3<S: Scalar>(x: &S) -> S {
    let one = S::one();
    let two = S::from_int(2);
    x.clone() * (x.clone() - one) * (x.clone() - two) / S::from_int(6)
}
