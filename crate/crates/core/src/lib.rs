//! Engine, strategies, solver and harness for biased Maker–Breaker diameter games on K_n.

pub mod degree;
pub mod diameter2;
pub mod diameter_d;
pub mod error;
pub mod expansion;
pub mod game;
pub mod graph;
pub mod harness;
pub mod heuristics;
pub mod play;
pub mod potential;
pub mod solver;

pub use error::{Error, Result};
pub use game::{Edge, GameState, Owner, Player};
pub use graph::{Dist, Graph};
pub use play::{run_match, MatchOptions, Notes, Strategy, TargetProperty, Transcript};
