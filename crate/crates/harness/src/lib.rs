//! Instance and certificate files, generators, independent verification,
//! Monte Carlo volume, SVG rendering and the `quantsel` command line.

pub mod certificate;
pub mod cli;
pub mod error;
pub mod generate;
pub mod instance;
pub mod io;
pub mod json;
pub mod mc;
pub mod render;
pub mod solve;
pub mod verify;

pub use certificate::{CertKind, Certificate};
pub use error::HarnessError;
pub use instance::{Instance, InstanceKind};
