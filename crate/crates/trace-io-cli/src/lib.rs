//! `mcck-trace v1` text format and the `mcck` command-line interface.

pub mod cli;
pub mod format;

pub use cli::cli_main;
pub use format::{
    parse_trace, parse_trace_events, serialize_trace, ParseError, TraceEvent, HEADER,
};

#[cfg(test)]
mod tests;
