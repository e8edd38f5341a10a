//! Expected Distance Imaging: probabilistic belief revision and update over
//! propositional possible worlds.

pub mod belief;
pub mod classical;
pub mod cli;
pub mod error;
pub mod imaging;
pub mod lab;
pub mod logic;
pub mod metric;
pub mod operators;
pub mod postulates;
pub mod rational;
pub mod weights;

pub use error::{EdiError, Result};
