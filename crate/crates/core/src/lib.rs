//! Forward electromagnetic scattering at a fixed frequency, with a
//! phaseless far-field data pipeline.
//!
//! The crate combines two forward solvers for time-harmonic Maxwell
//! scattering by bounded obstacles:
//!
//! - [`mie`]: the analytic partial-wave series for a single sphere
//!   (perfectly conducting, constant-impedance, or homogeneous dielectric);
//! - [`efie`]: a method-of-moments electric field integral equation solver
//!   on triangulated surfaces with RWG edge bases, for perfectly conducting
//!   bodies and multi-body scenes (obstacle plus reference ball).
//!
//! On top of the solvers sit:
//!
//! - [`farfield`]: far-field matrices, measurement grids on the unit sphere
//!   and the phaseless measurement operator `|e_m . E_inf|`;
//! - [`verify`]: executable checks of the identities the far-field theory
//!   rests on (tangentiality, reciprocity, the radiation integral closure,
//!   translation invariance and its breaking by two-wave superpositions);
//! - [`inverse`]: derivative-free recovery of a sphere (center and radius)
//!   from phaseless data, together with the translation-ambiguity scans.
//!
//! Units are normalized so the background permittivity and permeability are
//! one; the wavenumber equals the angular frequency and all lengths are in
//! units of `1/k` times the dimensionless `k L` products.

pub mod efie;
pub mod farfield;
pub mod geom;
pub mod inverse;
pub mod mesh;
pub mod mie;
pub mod scene;
pub mod specfun;
pub mod verify;
pub mod wave;

use thiserror::Error as ThisError;

/// Crate-wide error type.
#[derive(Debug, Clone, ThisError)]
pub enum Error {
    /// Tangent frame requested within the polar exclusion band.
    #[error("tangent frame undefined at theta = {theta} (pole)")]
    Pole { theta: f64 },

    /// Bessel recurrence left the representable range.
    #[error("spherical Bessel overflow at order {order}, argument {argument}")]
    BesselOverflow { order: usize, argument: f64 },

    /// A Mie modal denominator vanished (near an interior resonance).
    #[error("partial-wave denominator below threshold at order {order} (|den| = {magnitude:.3e})")]
    Resonance { order: usize, magnitude: f64 },

    /// Scene bodies overlap or violate the required separation.
    #[error("bodies overlap: {0}")]
    Overlap(String),

    /// Dense factorization failed.
    #[error("singular impedance matrix: {0}")]
    SingularMatrix(String),

    /// Near-field evaluation point too close to a source surface.
    #[error("evaluation point within {distance:.3e} of the surface (minimum {minimum:.3e})")]
    TooClose { distance: f64, minimum: f64 },

    /// Two sampled quantities live on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Invalid configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Geometric precondition violated.
    #[error("geometry error: {0}")]
    Geometry(String),

    /// Data file does not match the configuration that generated it.
    #[error("config hash mismatch: {0}")]
    HashMismatch(String),
}
