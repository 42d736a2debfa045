//! Experiment DSL for `gfa-core`: parser, validator, pretty-printer and a
//! runner that writes CSV reports.

pub mod ast;
pub mod diag;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod resolve;
pub mod runner;

pub use ast::ExperimentSpec;
pub use diag::{Diagnostic, Severity, Span};
pub use runner::{run_spec, RunConfig, RunReport, Status};

/// Parses and validates `src`. Warnings are dropped; use [`check_spec`] to keep them.
pub fn parse_spec(src: &str) -> Result<ExperimentSpec, Vec<Diagnostic>> {
    match check_spec(src) {
        (Some(spec), _) => Ok(spec),
        (None, diags) => Err(diags),
    }
}

/// Parses and validates `src`, returning the parsed experiment when there are no errors
/// together with every diagnostic (errors and warnings) in source order.
/// A syntax error stops parsing and is the only diagnostic reported.
pub fn check_spec(src: &str) -> (Option<ExperimentSpec>, Vec<Diagnostic>) {
    let spec = match parser::parse(src) {
        Ok(s) => s,
        Err(d) => return (None, vec![d]),
    };
    let (program, diags) = resolve::lower(&spec, Some(src));
    (program.map(|_| spec), diags)
}
