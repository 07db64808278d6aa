//! Exact-arithmetic computation of universal deformation rings of mod-l
//! cuspidal representations of GL(2) over finite and local fields, together
//! with the deformation-level local Langlands map on the Galois side.
//!
//! Everything is exact: cyclotomic numbers are stored with arbitrary
//! precision rational coordinates, lattices are canonicalized over Z
//! localized at l, and finite coefficient rings (F_{l^d}, Galois rings
//! W(F_{l^d})/l^a, dual numbers) are enumerated outright. No floating point
//! is used anywhere.

pub mod coeff;
pub mod cyclo;
pub mod defring;
pub mod error;
pub mod fq;
pub mod langlands;
pub mod local;
pub mod presentation;
pub mod transport;

pub use error::{Error, Result};
