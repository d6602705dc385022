//! Exact-arithmetic toolkit for anticyclotomic theta elements on the
//! Bruhat-Tits tree, finite-level Iwasawa group rings, and
//! Fitting-ideal membership verdicts on supplied module presentations.

pub mod cyclo;
pub mod error;
pub mod fitting;
pub mod group_ring;
pub mod linalg;
pub mod padic;
pub mod quad;
pub mod ramified;
pub mod ring;
pub mod serial;
pub mod theta;
pub mod torus;
pub mod tree;

pub use error::{Error, Result};
pub use padic::{PadicScalar, PrecisionProfile, ZpRing};
pub use ring::CoeffRing;
