pub mod birkhoff;
pub mod error;
pub mod factor;
pub mod fincat;
pub mod kernel;
pub mod lemmas;
pub mod theory;
pub mod verdict;
pub mod workspace;

pub use error::{Error, Result};
pub use verdict::Verdict;
