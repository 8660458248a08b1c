//! Geometry and invariant distances of the Lie ball `L_n`, its 2-proper
//! image `𝕃_n = Λ_n(L_n)` and the tetrablock `𝔼`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure
//! function of its inputs; IO, batch scheduling and file formats live in the
//! `lempertlab` companion crate.
//!
//! Module map:
//!
//! | module | contents |
//! |--------|----------|
//! | [`domain`] | points, the gauge `p`, membership predicates, `Λ_n`, `Π`, `Q` |
//! | [`rotations`] | real special orthogonal normal forms |
//! | [`automorphisms`] | the group `G(n)`, Möbius maps, descent to `𝕃_n`, normalization |
//! | [`metrics`] | closed-form Carathéodory and Kobayashi values at the origin |
//! | [`numerics`] | certified lower/upper bounds for `c` and `ℓ` between arbitrary points |
#![no_std]
// Float methods come from `num_traits::Float` (over libm). When something
// else in the build links std the inherent methods win and those imports
// look unused, hence the `allow`s next to them.

extern crate alloc;

pub mod automorphisms;
pub mod domain;
mod error;
pub mod metrics;
pub mod numerics;
pub mod rotations;

pub use domain::{DomainKind, Moduli, Point};
pub use error::{Error, Result};
pub use num_complex::Complex64;
