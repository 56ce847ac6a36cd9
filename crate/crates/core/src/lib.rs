pub mod combin;
pub mod error;
pub mod gf2;

pub use error::{Error, Result};
pub mod trapscan;
pub mod bounds;
pub mod codecs;
pub mod construct;
pub mod oracle;
pub mod cli;
