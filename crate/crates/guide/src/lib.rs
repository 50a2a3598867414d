//! The chapters of the guide under `book/`, compiled as doc modules so
//! `cargo test` runs every snippet.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/weights.md")]
pub mod weights {}
#[doc = include_str!("../../../book/src/construction.md")]
pub mod construction {}
#[doc = include_str!("../../../book/src/graph.md")]
pub mod graph {}
#[doc = include_str!("../../../book/src/properness.md")]
pub mod properness {}
#[doc = include_str!("../../../book/src/non_coprime.md")]
pub mod non_coprime {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
