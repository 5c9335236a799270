//! Weight reduction for CSS stabilizer codes.
//!
//! The crate provides exact GF(2) linear algebra ([`f2`]), a CSS code and chain
//! complex model ([`code`]), exhaustive distance and soundness oracles
//! ([`distance`]), the elementary code transforms ([`transforms`]), copy
//! assignment for the thickening step ([`assignment`]), composed procedures and
//! exponent calculators ([`pipeline`], [`exponents`]) and a file format plus
//! command-line front end ([`io`], [`cli`]).

pub mod assignment;
pub mod cli;
pub mod code;
pub mod distance;
pub mod error;
pub mod exponents;
pub mod f2;
pub mod fixtures;
pub mod io;
pub mod pipeline;
pub mod transforms;

pub use code::{ChainComplex, CodeParams, CssCode, Labels};
pub use distance::Side;
pub use error::{Error, Result};
pub use f2::{BitMatrix, BitVector};
