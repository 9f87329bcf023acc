//! Valid possibilistic inference for one of two normal means whose
//! difference is bounded, `|theta1 - theta2| <= B`.
//!
//! The crate is generic over the scalar type ([`Real`], i.e. `f32` or
//! `f64`); the `*64` aliases below fix it to `f64`, which is what the
//! command-line tool and the Monte Carlo audits use.

pub mod error;
pub mod im;
pub mod intervals;
pub mod optimize;
pub mod scalar;
pub mod specfun;
pub mod validate;

pub use error::{Error, Result};
pub use im::{HolderBound, MeanPair, Observation, PenaltyWeight};
pub use intervals::{Interval, IntervalRule, Method, TunedResult};
pub use optimize::{BracketConfig, Minimum};
pub use scalar::Real;
pub use specfun::{Noncentrality, Probability};

pub type Observation64 = Observation<f64>;
pub type MeanPair64 = MeanPair<f64>;
pub type PenaltyWeight64 = PenaltyWeight<f64>;
pub type HolderBound64 = HolderBound<f64>;
pub type Probability64 = Probability<f64>;
pub type Noncentrality64 = Noncentrality<f64>;
pub type Interval64 = Interval<f64>;
pub type TunedResult64 = TunedResult<f64>;
pub type IntervalRule64 = IntervalRule<f64>;
