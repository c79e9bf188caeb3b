//! Doc-test harness for the guide in `book/`.
//!
//! mdbook renders the chapters but cannot run their code fences as tests, so
//! this crate includes each chapter as a module's documentation and lets
//! `cargo test --doc` execute every ```rust fence. One module per chapter
//! keeps a failing snippet traceable to its source file.
//!
//! The crate exports nothing; it exists only so the book and the library can
//! never drift apart silently.

#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/superpotentials.md")]
pub mod superpotentials {}

#[doc = include_str!("../../../book/src/grids.md")]
pub mod grids {}

#[doc = include_str!("../../../book/src/operators.md")]
pub mod operators {}

#[doc = include_str!("../../../book/src/bases.md")]
pub mod bases {}

#[doc = include_str!("../../../book/src/transform.md")]
pub mod transform {}

#[doc = include_str!("../../../book/src/phase-space.md")]
pub mod phase_space {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}
