//! Bordered knot Floer computations for satellites of slice disks.

pub mod algebra;
pub mod builtins;
pub mod certificates;
pub mod cfk;
pub mod error;
pub mod io;
pub mod linalg;
pub mod pairing;
pub mod pipeline;
pub mod typea;
pub mod typed;

pub use error::{Error, Result};
