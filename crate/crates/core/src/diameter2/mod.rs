//! Diameter-two games: parameter calculators and the dedicated strategies.

mod breaker;
mod maker;
mod params;

pub use breaker::*;
pub use maker::*;
pub use params::*;
