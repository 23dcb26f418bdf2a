//! Exact and asymptotic arithmetic for k-colored partitions and their crank
//! statistics: integer generating-function tables, modular machinery
//! (Dedekind sums, exact root-of-unity phases, exponential sum frames),
//! arbitrary-precision special functions, convergent asymptotic series with
//! per-term breakdowns, and certified inequality ledgers.
//!
//! Layering, lowest first: `modular` and `qseries` are exact; `special`
//! introduces controlled rounding at explicit bit precision; `kloosterman`
//! and `asymptotics` build the exponential sums and the asymptotic series;
//! `inequalities` assembles bound ledgers, thresholds, and exact-table
//! verifications; `report` and `cache` handle serialization.

pub mod cache;
pub mod error;
pub mod inequalities;
pub mod kloosterman;
pub mod modular;
pub mod qseries;
pub mod report;
pub mod special;

pub mod asymptotics;

pub use error::{Error, Result};
