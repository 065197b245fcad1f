//! General d-diameter games: the round-robin Maker, both Breaker
//! strategies and the numeric checks behind their parameters.

mod breaker;
mod claim2;
mod maker;
mod params;

pub use breaker::*;
pub use claim2::*;
pub use maker::*;
pub use params::*;
