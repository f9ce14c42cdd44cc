//! Automorphic Lie algebras of `Γ`-equivariant `𝔰𝔩₂`-valued meromorphic maps
//! on complex tori `ℂ/Λ`.
//!
//! The crate builds the finite groups acting on a torus, the equivariant
//! elliptic functions and intertwining matrices that trivialise the action,
//! explicit normal forms `[H,E] = 2E`, `[H,F] = −2F`, `[E,F] = H⊗p`, and
//! classifies each case as a current algebra, the Onsager algebra or a member
//! of the `𝔖_τ` family by counting branch points.

pub mod classify;
pub mod elliptic;
pub mod error;
pub mod funcalg;
pub mod intertwine;
pub mod lattice;
pub mod normalform;
pub mod numeric;
pub mod sl2rep;
pub mod torusgroup;

pub use error::{Error, Result};
