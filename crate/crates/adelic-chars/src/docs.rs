//! Book chapters compiled as doc-tests.
//!
//! Each module's documentation is a chapter of `book/src`; `cargo test`
//! therefore runs every fenced code block in the book, keeping the guide
//! and the library in lockstep.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/subspaces.md")]
pub mod subspaces {}

#[doc = include_str!("../../../book/src/nilpotent.md")]
pub mod nilpotent {}

#[doc = include_str!("../../../book/src/phases.md")]
pub mod phases {}

#[doc = include_str!("../../../book/src/adelic.md")]
pub mod adelic {}

#[doc = include_str!("../../../book/src/group.md")]
pub mod group {}

#[doc = include_str!("../../../book/src/classification.md")]
pub mod classification {}

#[doc = include_str!("../../../book/src/positivity.md")]
pub mod positivity {}

#[doc = include_str!("../../../book/src/catalog.md")]
pub mod catalog {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
