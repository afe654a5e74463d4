//! Partition regularity toolkit.
//!
//! * [`algebra`]: exact scalars and matrices over ℚ and ℤ/mℤ.
//! * [`columns`]: deciding the columns condition, with witness partitions.
//! * [`deuber`]: `S(m, F; t)` sets, `F`-independence, witness matrices built
//!   from a columns-condition partition, and Hales-Jewett line search.
//! * [`search`]: exhaustive colouring search for Rado and Schur numbers,
//!   the modular variant h_a(r), and DIMACS export.
//! * [`fourier`]: transforms on ℤ/Nℤ, monochromatic triple counting, Bohr sets
//!   and large spectra.
//! * [`cli`]: the command-line front end used by the `partreg` binary.

pub mod algebra;
pub mod cli;
pub mod cnf;
pub mod colouring;
pub mod columns;
pub mod deuber;
pub mod error;
pub mod fourier;
pub mod search;

pub use algebra::{rref, span_member, Field, IntMatrix, Matrix, Scalar};
pub use colouring::{Colouring, Ground};
pub use columns::{brauer_matrix, check_columns_condition, single_row_condition, ColumnPartition};
pub use error::{Error, Result};
