//! Approximation quantities of discrete `S^p` and `BS^p` metrics.
//!
//! A function is represented by its spectrum, the list of nonzero Fourier
//! coefficients, and every norm is the `l_p` norm of those coefficients.
//!
//! - [`spectrum`]: spectra, norms, best and greedy `n`-term approximation.
//! - [`psi`]: psi-systems, characteristic sequences, psi-integrals.
//! - [`class`]: exact class values and widths, series identities.
//! - [`moduli`]: generalized and averaged moduli of smoothness.
//! - [`jackson`]: Jackson constants and their closed forms.
//! - [`inverse`]: inverse inequalities, the Bari condition, `H^omega` membership.
//! - [`oracle`]: brute-force counterparts used for cross-checks.
//! - [`cli`], [`parse`], [`report`], [`verify`]: the command-line tool.
//!
//! The `examples/` directory has one runnable program per area.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod class;
pub mod cli;
pub mod error;
pub mod inverse;
pub mod jackson;
pub mod ladder;
pub mod moduli;
pub mod numeric;
pub mod oracle;
pub mod parse;
pub mod psi;
pub mod quadrature;
pub mod report;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
