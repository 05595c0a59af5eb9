//! The guide under `book/` compiled as doc-tests, one module per chapter, so
//! `cargo test` keeps every listing runnable.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/potential.md")]
pub mod potential {}
#[doc = include_str!("../../../book/src/tridiagonal.md")]
pub mod tridiagonal {}
#[doc = include_str!("../../../book/src/parameter-spectrum.md")]
pub mod parameter_spectrum {}
#[doc = include_str!("../../../book/src/diagonalization.md")]
pub mod diagonalization {}
#[doc = include_str!("../../../book/src/complex-scaling.md")]
pub mod complex_scaling {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
