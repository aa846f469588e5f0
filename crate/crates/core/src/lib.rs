//! L2-Alexander torsion of knot exteriors in the abelian case: group rings,
//! Fuglede-Kadison determinants over `Z`, based chain complexes, knot
//! presentations and the torsion function `t -> tau(t)` with its symmetry.

pub mod alexl2;
pub mod chain;
pub mod cli;
pub mod error;
pub mod fkdet;
pub mod groupring;
pub mod knot;
pub mod verify;

pub use error::{Error, Result};
