pub mod audio;
pub mod cli;
pub mod decoder;
pub mod dsp;
pub mod error;
pub mod format;
pub mod io;
pub mod midlevel;
pub mod regression;
pub mod server;
pub mod synth;

pub use error::{Error, Result};
