//! Structure theory of noncompact semisimple matrix Lie algebras, the
//! harmonic Riemannian submersion from the Iwasawa solvable model onto the
//! rank-one subspace attached to a simple restricted root, and certified
//! checks (exact where possible, numerical otherwise) of the analytic
//! properties that come with it: harmonicity, minimal fibres, Laplacian
//! intertwining, explicit complex-valued harmonic morphisms, eigenfunction
//! and r-harmonic pullbacks.

pub mod algebra_core;
pub mod analysis;
pub mod catalog;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod morphisms;
pub mod octonions;
pub mod rankone;
pub mod roots;
pub mod verify;

pub use analysis::{AlgebraModel, RankOneBundle};
pub use catalog::{builtin_catalog, realize, AlgebraSpec, Family};
pub use error::{LieError, Result};
