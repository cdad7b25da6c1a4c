//! Exact geometry of ideal triples in rank-2 affine buildings over valued
//! fields: cross ratios and triple ratios in the projective plane at
//! infinity, building points as weighted bases, projections onto flats and
//! transverse trees, and the tripod / flat-triangle classification of
//! generic flag triples.

pub mod error;
pub mod linalg;
pub mod modelflat;
pub mod bpoints;
pub mod projplane;
pub mod report;
pub mod transverse;
pub mod triples;
pub mod verify;
pub mod valfield;

pub use error::{GeomError, Result};
pub use bpoints::{BuildingPoint, MarkedFlat};
pub use modelflat::FlatVector;
pub use projplane::{Flag, FlagTriple, ProjLine, ProjPoint, ProjScalar};
pub use transverse::{TreePoint, TwoSpace};
pub use triples::{FlatId, TripleContext, TripleKind, TripleReport};
pub use valfield::{Field, Scalar, Val};
