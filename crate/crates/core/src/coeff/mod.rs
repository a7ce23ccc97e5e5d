//! Finitely generated abelian groups, integer matrices and coefficient tables.

mod fgab;
mod matrix;
pub mod snf;
pub mod table;

pub use fgab::FgAbGroup;
pub use matrix::Matrix;
pub use snf::{snf, SmithForm};
pub use table::{
    builtin_table, parse_graded_values, parse_table, CoefficientTable, Extent, Generator, Periodicity, Support,
    BUILTIN_TABLES,
};
