//! Model files and the command-line front end for `ltlsn-core`.

pub mod cli;
pub mod modelfile;

pub use cli::{run, CommandResult};
pub use modelfile::{parse_model, parse_model_unchecked, ErrorKind, ModelFileError};
