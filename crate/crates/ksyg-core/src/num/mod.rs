//! Exact numeric kernel: rational helpers, rational-coefficient polynomials,
//! and real-root isolation producing exactly comparable event times.

pub mod poly;
pub mod rational;
pub mod roots;

pub use poly::QPoly;
pub use rational::{parse_decimal, simplest_between};
pub use roots::{Parity, RootLoc, SimTime};

pub type Rat = num::BigRational;

use num::bigint::BigInt;
use num::traits::{One, Zero};

pub fn rat_i64(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_frac(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Exact conversion of a finite f64 into a rational (binary expansion).
pub fn rat_from_f64(v: f64) -> Rat {
    Rat::from_float(v).expect("finite float")
}

pub fn rat_to_f64(v: &Rat) -> f64 {
    use num::ToPrimitive;
    v.to_f64().unwrap_or_else(|| {
        // Fall back on separate integer conversions for huge components.
        let n = v.numer().to_f64().unwrap_or(f64::MAX);
        let d = v.denom().to_f64().unwrap_or(f64::MAX);
        n / d
    })
}
