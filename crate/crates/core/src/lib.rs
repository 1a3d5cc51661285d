//! Exact q-series arithmetic and machine checks of 2-color partition
//! congruences modulo powers of 5.

pub mod eta;
pub mod hh;
pub mod partitions;
pub mod report;
pub mod series;
pub mod verify;

pub use eta::{EtaQuotientSpec, ThetaMonomial};
pub use hh::{CoeffVector, HHMatrix, Valuation};
pub use partitions::{CountingKind, ResidueTable};
pub use report::{Outcome, VerificationReport, Witness};
pub use series::{LaurentSeries, SeriesError};
