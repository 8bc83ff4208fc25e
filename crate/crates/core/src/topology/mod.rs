//! Effective topologies on a numbered set: Spreen, Lacombe, Nogina, Ershov
//! and metric opens, with the effective conversions between them.

mod inclusion;
pub use inclusion::*;
pub mod continuity;
pub mod equivalence;
pub mod ershov;
pub mod lacombe;
pub mod metric_open;
pub mod nogina;
pub mod spreen;

pub use ershov::*;
pub use lacombe::*;
pub use metric_open::*;
pub use nogina::*;
pub use spreen::*;
