//! Expression language, canonical printer, structure files and reports.

pub mod expr;
pub mod printer;
pub mod report;
pub mod structure_file;

pub use expr::{parse_expression, parse_polynomial, ExprError, Expression};
pub use printer::{print_polynomial, print_vector_field, EXP_SYMBOL};
pub use report::{Report, Verdict, REPORT_FORMAT, TOOL_VERSION};
pub use structure_file::{load_structure, parse_structure, LambdaTerm, LoadError, RTerm, StructureFile, FORMAT};
