//! Character spaces of the action 2-groupoid of a finite group.
//!
//! The crate builds the action groupoid `Γ²(G)` of a finite group (objects are
//! group elements, 1-maps are pairs `(u, v)` from `v⁻¹u` to `uv⁻¹`, and a single
//! 2-cell between any two parallel 1-maps), together with finitely presented
//! groupoids whose vertex groups are infinite. On either source it computes the
//! character spaces `X₀, X₁, X₂`, the boundary maps between them, checks that
//! `0 → ℚ → X₀ → X₁ → X₂ → 0` is exact on every totally connected component,
//! and lifts 2-characters back to 1-characters.
//!
//! The [`derivations`] module relates derivations of the rational group algebra
//! `ℚ[G]` to 1-characters of `Γ²(G)`, including the character bracket and the
//! weak-inner ideal.
//!
//! All arithmetic is exact over the rationals; see [`linalg`].

pub mod action;
pub mod complex;
pub mod derivations;
pub mod descriptor;
pub mod error;
pub mod group;
pub mod linalg;
pub mod presented;

pub use action::{ActionGroupoid, Morphism, TwoCell};
pub use complex::{CharacterSource, CharacterSpace, ComplexData, ExactnessReport, Limits};
pub use error::{Error, Result};
pub use group::{ConjugacyClassification, GroupElement, GroupTable};
pub use linalg::{Rational, SparseMatrix, Subspace};
pub use presented::{PresentedGroupoid, Quiver, RelationWord};
