//! Exact computations in extended affine Weyl groups and their affine Hecke
//! algebras: lengths, minimal-length conjugacy representatives, class
//! polynomials, cocenter reduction, parabolic subalgebras and the
//! combinatorics of affine Deligne–Lusztig varieties.

pub mod adlv;
pub mod bernstein;
pub mod cache;
pub mod cocenter;
pub mod conjugacy;
pub mod datum;
pub mod element;
pub mod engine;
pub mod error;
pub mod group;
pub mod hecke;
pub mod linalg;
pub mod lp;
pub mod partial;
pub mod scan;
pub mod verify;

pub use error::{Error, Result};
