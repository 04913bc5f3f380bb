//! Exact computations in the finite Siegel space.
//!
//! Over `F = GF(q)` (`q` an odd prime) and `E = GF(q²)`, this crate builds the
//! Lagrangian Grassmannian of `(E^{2n}, ω)`, the groups `Sp(n,F)`, `Sp(n,E)`
//! and `Sp_0(n,F) = U(E^{2n}, h_0) ∩ Sp(n,E)`, and verifies their orbit
//! structure by exhaustive enumeration.
//!
//! ```
//! use finite_siegel::{lagrangian, symplectic::SpaceParams};
//!
//! let space = SpaceParams::new(3, 1)?;
//! let points = lagrangian::enumerate_lagrangians(&space, 1_000)?;
//! assert_eq!(points.len(), 10);
//! # Ok::<(), finite_siegel::Error>(())
//! ```

pub mod cayley;
pub mod checks;
pub mod error;
pub mod field;
pub mod involution;
pub mod lagrangian;
pub mod linalg;
pub mod orbit;
pub mod report;
pub mod stabilizers;
pub mod symplectic;
pub mod witness;

pub use error::{Error, Result};
pub use field::{EScalar, FieldParams};
pub use lagrangian::{Lagrangian, StratumLabel};
pub use linalg::Mat;
pub use symplectic::{Group, GroupElement, SpaceParams};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/lagrangians.md")]
    mod lagrangians {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/cayley.md")]
    mod cayley {}
    #[doc = include_str!("../../../book/src/involutions.md")]
    mod involutions {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}
