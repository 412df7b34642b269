//! Text formats, the d-DNNF importer and the command-line driver for
//! [`mlmar_core`].

pub mod cli;
pub mod error;
pub mod nnf;
pub mod oracle;
pub mod report;
pub mod table;
pub mod text;
pub mod xorcsp;

pub use error::FormatError;
pub use nnf::import_dnnf;
pub use table::{parse_table, serialize_table};
pub use text::{parse_circuit, parse_circuit_unchecked, serialize_circuit};
pub use xorcsp::{parse_xorcsp, serialize_xorcsp};
