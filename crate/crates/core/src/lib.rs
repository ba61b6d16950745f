//! Exact computation with modular forms on Γ0(N) as truncated q-expansions,
//! and machine checks of the Atkin–Lehner newform/oldform theory.

pub mod arith;
pub mod atkinlehner;
pub mod error;
pub mod exactlin;
pub mod grid;
pub mod hecke;
pub mod qseries;
pub mod rational;
pub mod report;
pub mod spaces;
pub mod tensor;

pub use error::{Error, ErrorKind, Result};
