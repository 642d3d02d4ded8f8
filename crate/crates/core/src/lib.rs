pub mod arith;
pub mod blowup;
pub mod corpus;
pub mod cycles;
pub mod error;
pub mod fgroup;
pub mod germ;
pub mod incidence;
pub mod wiring;

pub use error::{Error, Result};
