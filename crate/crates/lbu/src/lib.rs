//! Min-max robust combinatorial optimization under locally budgeted
//! uncertainty sets.
//!
//! Items carry interval costs and are partitioned into regions, each with
//! its own deviation budget. The crate provides:
//!
//! - exact robust evaluation and worst-case scenario extraction ([`core`]);
//! - nominal solvers for selection, representative selection, shortest
//!   path, spanning tree, and minimum cut ([`nominal`]);
//! - exact robust solvers: certificate decomposition, a selection dynamic
//!   program, branch-and-bound, and a brute-force oracle ([`exact`]);
//! - data-driven fitting of classic and local sets from scenario samples
//!   ([`fitting`]);
//! - reproducible instance generators and a scenario sampler ([`sampling`]);
//! - file formats and the benchmark harness behind the `lbu` binary
//!   ([`io`], [`experiments`]).

pub mod core;
pub mod error;
pub mod exact;
pub mod experiments;
pub mod fitting;
pub mod io;
pub mod nominal;
pub mod sampling;

pub use error::{Error, Result};
