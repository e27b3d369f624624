//! File formats, Graphviz export, the verification suite and the
//! command-line front end for `pisot-wfa`.

pub mod cli;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod verify;

pub use error::{Result, ToolError};
