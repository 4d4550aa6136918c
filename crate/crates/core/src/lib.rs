//! Construction and verification engine for the BM quasi-Hermitian varieties
//! of PG(3,q²), q even, their collineation groups, their projective
//! equivalence, and the orthogonal arrays OA(q⁵, q⁴, q, 2) built from them.

pub mod error;
pub mod field;
pub mod geometry;
pub mod variety;
pub mod collineation;
pub mod equivalence;
pub mod oarray;

pub use error::{Error, Result};
pub use field::{Fe, FieldCtx};
pub use geometry::{Hyperplane, Line, ProjPoint};
pub use collineation::Collineation;
pub use variety::{PointSet, VarietyParams};
