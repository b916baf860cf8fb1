//! Conversion bandwidth of split-regime MDS convertible codes.
//!
//! Finite-field linear algebra ([`gf`]), systematic MDS vector codes
//! ([`mds`]), a rank-based entropy oracle ([`entropy`]), conversion schemes
//! ([`convertible`]), closed-form bandwidth bounds ([`bounds`]) and an
//! exhaustive search that certifies them on small instances ([`search`]).

pub mod bounds;
pub mod cli;
pub mod convertible;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod gf;
pub mod mds;
pub mod search;

pub use error::{BoundError, CodeError, ConversionError, GfError, ParamError, SearchError};
pub use exec::Exec;
