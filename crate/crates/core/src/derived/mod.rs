//! Bounded complexes of representations and their derived category.

mod complex;
mod formality;
mod hom;
mod idempotent;
mod morphism;
mod replacement;
mod triangle;
mod truncation;

pub use complex::{direct_sum, ChainMap, Cohomology, Complex};
pub use formality::{formality_split, hom_dim_formal, Formality};
pub use hom::HomSpace;
pub use idempotent::{split_idempotent_derived, IdempotentSplit};
pub use morphism::{hom_derived, hom_derived_dim, DerivedHom, DerivedMorphism, DerivedObject};
pub use replacement::{proj_replace, GenImages, ProjComplex, Replacement};
pub use triangle::{cone_triangle, ses_triangle, triangle_from_exact_pair, zero_triangle, Triangle};
pub use truncation::{tau_ge, tau_le, truncation_triangle};
