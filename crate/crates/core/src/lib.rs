pub mod complexes;
pub mod error;
pub mod topology;
pub mod graph;
pub mod loop_spaces;
pub mod two_fundamental;
pub mod verify;

pub use error::{Caps, Error, Result};
