//! Exact-arithmetic classification of characters of groups `G = L ⋉ U` over `Q`.
//!
//! Given a nilpotent Lie algebra with rational structure constants, a Levi
//! action by nilpotent derivation generators plus a finite table of central
//! elements, and an adelic character `λ` of the algebra, this crate computes
//! the invariant ideals `k_λ ⊆ p_λ`, the unitary character `χ_λ`, membership
//! in `L_λ`, the positive-type functions `Φ_(λ,φ)`, the orbit-direction
//! subspace dual to `p_λ`, and canonical quasi-orbit data — all over exact
//! rationals. A CLI (`adelic-chars`) drives the same engine on JSON system
//! descriptions; the `book/` directory of the repository walks through the
//! concepts chapter by chapter.

// index-based loops mirror the matrix arithmetic throughout
#![allow(clippy::needless_range_loop)]

pub mod adelic;
pub mod catalog;
pub mod chars;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod group;
pub mod nilpotent;
pub mod qmod1;
pub mod rat;
pub mod ratlinalg;
pub mod sample;
pub mod traces;
pub mod verify;

#[doc(hidden)]
pub mod docs;

pub use error::{Error, Result};
