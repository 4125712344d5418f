pub mod error;
pub mod exact;
pub mod goodpoints;
pub mod grassmann;
pub mod kernel;
pub mod linalg;
pub mod par;
pub mod pick;
pub mod reps;

pub use error::{Error, Result};
