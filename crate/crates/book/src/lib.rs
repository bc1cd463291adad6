//! Compiles the guide's code listings as doc-tests, so the book cannot
//! drift from the library. mdbook alone cannot test snippets that depend
//! on a workspace crate; each chapter becomes a module here instead.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/potentials.md")]
pub mod potentials {}
#[doc = include_str!("../../../book/src/turning.md")]
pub mod turning {}
#[doc = include_str!("../../../book/src/wkb.md")]
pub mod wkb {}
#[doc = include_str!("../../../book/src/eigensolver.md")]
pub mod eigensolver {}
#[doc = include_str!("../../../book/src/measures.md")]
pub mod measures {}
#[doc = include_str!("../../../book/src/zeros.md")]
pub mod zeros {}
#[doc = include_str!("../../../book/src/orthopoly.md")]
pub mod orthopoly {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
