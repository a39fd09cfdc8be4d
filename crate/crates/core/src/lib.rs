//! Exact computations for Hecke algebras acting on Lusztig-Vogan modules.
//!
//! The crate is organised bottom-up:
//!
//! * [`laurent`]: Laurent polynomials over `Z` in `v`, with `q = v^-2`.
//! * [`coxeter`]: Coxeter and Weyl groups, Bruhat order, twisted-fixed
//!   elements and coset representatives.
//! * [`hecke`]: the Hecke algebra in the standard basis and its
//!   Kazhdan-Lusztig basis.
//! * [`lv`]: orbit data, the `T_s` action, validation and blocks.
//! * [`klv`]: canonical classes of the trivial block by iterated `b_s`
//!   action and decomposition-theorem peeling.
//! * [`fiber`]: Poincaré polynomials of fibres of equivariant resolutions.
//! * [`bimod`]: polynomial rings, Demazure operators and the
//!   standard/Bott-Samelson bimodule checks.

pub mod bimod;
pub mod coxeter;
pub mod fiber;
pub mod hecke;
pub mod klv;
pub mod laurent;
pub mod lv;
mod unionfind;

pub use laurent::{Laurent, QPoly};
