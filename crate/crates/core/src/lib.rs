//! Cohomology of W-groups from k-invariant data.
//!
//! A W-group is presented by its k-invariants, a linearly independent list of
//! quadrics over F₂. From that data this crate builds the group as an explicit
//! central extension, the torus model with its `(ℤ/2)ⁿ`-action, and computes
//! Milnor K-theory dimensions, equivariant cohomology of the model, Koszul and
//! Tor homology, and the Young-diagram counts for the universal groups.

pub mod cellular;
pub mod error;
pub mod exactlin;
pub mod forms;
pub mod koszul;
pub mod milnor;
pub mod presets;
pub mod series;
pub mod torus;
pub mod verify;
pub mod wgroup;
pub mod young;

pub use error::{Error, Result};
