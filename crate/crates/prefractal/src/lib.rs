//! Finite-depth approximations of planar self-similar boundaries and the
//! scale-invariant constants attached to them.
//!
//! The pipeline is: an iterated function system ([`ifs`]) produces a
//! [`ifs::Scene`] holding the bounded complementary components carved out of a
//! seed region up to a chosen depth, together with the closed polylines that
//! approximate the boundary set E.  [`raster`] discretizes a scene onto a cell
//! grid (occupancy, complement labeling, exact distance transform).
//! [`metrics`] computes the constants: separation, porosity, component-in-ball,
//! boundary path constant, similarity classes, and measure summaries.
//! [`topology`] answers winding-number and homotopy questions about points off
//! the boundary.
//!
//! The crate is `no_std`-compatible (`alloc` is required); enable the `libm`
//! feature instead of `std` to build without the standard library.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("prefractal needs either the `std` or the `libm` feature");

mod math;

pub mod error;
pub mod geom;
pub mod ifs;
pub mod metrics;
pub mod raster;
pub mod topology;

pub use error::{Error, Result};
