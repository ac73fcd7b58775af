//! Exact invariants of complex hyperbolic lattices arising from cyclic
//! coverings of the projective line: Lyapunov spectra of the primitive
//! variation of Hodge structures, orbifold Euler numbers of the weighted
//! compactifications, and the resulting commensurability invariants.
//!
//! All arithmetic is over `Q`; nothing is approximated.

pub mod chow;
pub mod classify;
pub mod conditions;
pub mod covering;
pub mod dataset;
pub mod error;
pub mod euler;
pub mod lyapunov;
pub mod par;
pub mod rational;
pub mod record;
pub mod table;

pub use covering::{validate_type, CoveringType};
pub use error::{Error, Result, TypeRejection};
pub use par::ExecMode;
pub use rational::Q;
