pub mod central;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod poisson;
pub mod rigid;
pub mod report;
pub mod sample;
pub mod son;
pub mod uea;
pub mod weyl;

pub use error::{Error, Result};
pub use exact::{ExactMatrix, Field, MultiPoly, RadicalElement, Rational, RationalFunction, Ring};
pub use report::{Check, Status, VerificationReport};
pub use son::{MomentSpec, SkewMatrix};
