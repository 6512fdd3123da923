//! Exact computations with graded quivers with relations.
//!
//! The crate is organized around a plain-text presentation format for graded
//! quivers with relations. On top of it sit:
//!
//! - [`reduce`]: truncated two-sided-ideal normal forms and hom-space bases,
//!   computed by sparse echelon reduction over an exact field,
//! - [`gentle`]: recognition of gentle and pinched gentle presentations,
//! - [`transforms`]: localization at a graded Kronecker pair, pinching,
//!   loop resolution, idempotent subalgebras and isomorphism verification,
//! - [`twisted`]: one-sided twisted complexes, band objects, hom complexes
//!   and their cohomology,
//! - [`drinfeld`]: hom complexes of the quotient by a band object, truncated
//!   by filtration level, with the spectral sequence of the filtration,
//! - [`surface`]: the combinatorial marked-surface model of a gentle
//!   presentation, boundary windings, conical singularities and contraction.
//!
//! All arithmetic is exact: rationals by default, an odd prime field on
//! request. There is no floating point anywhere in the crate.

pub mod drinfeld;
pub mod element;
pub mod oracle;
pub mod field;
pub mod fixtures;
pub mod generate;
pub mod gentle;
pub mod linalg;
pub mod parse;
pub mod presentation;
pub mod quiver;
pub mod reduce;
pub mod surface;
pub mod transforms;
pub mod twisted;

mod error;

pub use element::AlgebraElement;
pub use error::{Error, Result};
pub use field::{Field, PrimeField, Rationals};
pub use presentation::{PinchedDecomposition, Presentation};
pub use quiver::{ArrowId, GradedQuiver, Path, VertexId};
pub use reduce::{EnumLimits, PathBasis};

