//! Model files, reports and the `desguard` command line.

pub mod cli;
pub mod format;
pub mod report;

pub use cli::{run, Outcome};
pub use format::{parse_model, parse_model_with, serialize_model, Item, Model, ParseError};
