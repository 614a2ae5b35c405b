pub mod cli;
pub mod error;
pub mod grpfin;
pub mod io;
pub mod matlin;
pub mod orbits;
pub mod oracle;
pub mod orders;
pub mod ring;
pub mod selftest;
pub mod strata;

pub use error::{Error, Result};

/// Default bound on enumerated state spaces.
pub const DEFAULT_GUARD: u64 = 1 << 24;
