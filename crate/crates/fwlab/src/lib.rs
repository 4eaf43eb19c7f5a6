//! A line-oriented scenario language for framework analyses of small quantum
//! systems, with a parser, canonical formatter, interpreter and reports.
//!
//! ```
//! let text = "state s = [1, 0]\npdi F from X\nprob s F\n";
//! let ast = fwlab::parse_scenario(text).unwrap();
//! let report = fwlab::run_scenario(&ast, &fwlab::RunConfig::default()).unwrap();
//! assert_eq!(report.queries.len(), 1);
//! ```

pub mod ast;
pub mod error;
pub mod format;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod report;

pub use ast::ScenarioAst;
pub use error::{ErrorKind, SourceError};
pub use format::format_scenario;
pub use interp::{run_scenario, RunError};
pub use parser::parse_scenario;
pub use report::{Report, RunConfig};
