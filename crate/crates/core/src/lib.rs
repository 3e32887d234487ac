//! Gravitational form-factor toolkit for oscillator geometry pairs.
//!
//! The form factor Λ(A, B, n) measures the tidal (gradient) part of the
//! Newtonian coupling between two equal-volume, uniform-density bodies A
//! and B oscillating along a unit direction n:
//!
//! Λ = | (1/V) ∫_A ∫_B (3(n·δ)² − |δ|²)/|δ|⁵ dr dr′ |,  δ = r − r′.
//!
//! It is dimensionless, scale- and translation-invariant, and bounded by
//! 2π over all valid geometries and directions; interleaved comb pairs
//! approach the bound arbitrarily closely.
//!
//! Modules:
//! - [`geometry`]: shapes, pair validation, comb construction, sampling;
//! - [`analytic`]: exact corner-sum evaluation for axis-aligned box
//!   unions, the comb and slab closed forms, sphere and lattice formulas;
//! - [`montecarlo`]: deterministic chunked estimation for arbitrary
//!   shapes and directions, tidal tensors, principal directions;
//! - [`studies`]: the parameter scans and the 2π bound audit;
//! - [`document`]: the JSON geometry-pair document format;
//! - [`sum`], [`linalg`]: compensated summation and a symmetric 3×3
//!   eigensolver, shared numerical utilities.

pub mod analytic;
pub mod document;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod montecarlo;
pub mod studies;
pub mod sum;

pub use error::{Error, Result};
pub use geometry::{
    build_comb, sample_uniform, separation_class, Axis, AxisBox, CombParams, CombSide,
    GeometryPair, Point3, SeparationClass, Shape,
};

/// The supremum of the form factor over all geometries and directions.
pub const LAMBDA_SUPREMUM: f64 = 2.0 * std::f64::consts::PI;
