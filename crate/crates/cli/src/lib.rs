//! Script front end for `simploc-core`.
//!
//! A script declares a group, coefficient data and named trees, then asks
//! for computations:
//!
//! ```text
//! group torus 1
//! let x = P(1)
//! compute x table=unit degrees=-2..2
//! ```
//!
//! [`run_source`] returns the text table, the structured records and the
//! exit status (0 success, 1 invalid input, 2 computation not possible).

pub mod error;
pub mod resolve;
pub mod run;
pub mod script;
pub mod syntax;

pub use error::{exit_code, CliError};
pub use resolve::{print_tree, resolve, tree_to_term, Env};
pub use run::{check, check_source, describe_value, run, run_source, Options, Outcome, Record, Row, SCHEMA};
pub use script::{parse, CommandKind, Script, Statement};
