//! Computational engine for finite presheaf toposes, truncated simplicial
//! presheaves over Reedy categories, internal equivalence objects and strict
//! micro-universes of well-ordered fibrations.

pub mod category;
pub mod equiv;
pub mod error;
pub mod fixtures;
pub mod lcc;
pub mod limits;
pub mod presheaf;
pub mod random;
pub mod reedy;
pub mod reedy_extend;
pub mod search;
pub mod simplicial;
pub mod soa;
pub mod universe;

pub use category::{FiniteCategory, MorId, Morphism, ObjId};
pub use error::{Error, Result};
pub use limits::{colimit, limit, Colimit, Diagram, Limit};
pub use presheaf::{NatMap, Presheaf};
pub use search::{hom_enumerate, MapSearch};
