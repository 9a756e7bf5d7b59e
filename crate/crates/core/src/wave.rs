//! Wave context and incident electromagnetic plane waves.
//!
//! Units are normalized so that the vacuum permittivity and permeability are
//! both 1; the angular frequency then equals the wavenumber.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geom::{CVec3, UnitVector, Vec3};
use crate::Error;

/// Fixed-frequency context: the wavenumber `k > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveContext {
    k: f64,
}

impl WaveContext {
    pub fn new(k: f64) -> Result<Self, Error> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Config(format!("wavenumber must be positive, got {k}")));
        }
        Ok(WaveContext { k })
    }

    pub fn k(self) -> f64 {
        self.k
    }

    /// Angular frequency; equal to `k` in normalized units.
    pub fn omega(self) -> f64 {
        self.k
    }

    pub fn wavelength(self) -> f64 {
        2.0 * std::f64::consts::PI / self.k
    }
}

/// Polarization vector of an incident plane wave.
///
/// Not constrained to be transverse: the incident field formula projects
/// out the longitudinal part automatically, and several identities are
/// exercised with deliberately non-transverse polarizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarization(pub Vec3);

impl Polarization {
    pub fn new(v: Vec3) -> Self {
        Polarization(v)
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn is_transverse_to(self, d: UnitVector) -> bool {
        self.0.dot(d.vec()).abs() < 1e-12
    }

    /// Component orthogonal to `d`; this is what actually radiates.
    pub fn transverse_part(self, d: UnitVector) -> Vec3 {
        self.0 - d.vec() * self.0.dot(d.vec())
    }
}

fn plane_phase(x: Vec3, d: UnitVector, k: f64) -> Complex64 {
    Complex64::new(0.0, k * x.dot(d.vec())).exp()
}

/// Incident electric plane wave `ik (d x p) x d e^{ik x.d}`.
pub fn incident_electric(x: Vec3, d: UnitVector, p: Polarization, ctx: WaveContext) -> CVec3 {
    let k = ctx.k();
    let amp = p.transverse_part(d); // (d x p) x d
    let factor = Complex64::new(0.0, k) * plane_phase(x, d, k);
    amp * factor
}

/// Incident magnetic plane wave `ik (d x p) e^{ik x.d}`.
pub fn incident_magnetic(x: Vec3, d: UnitVector, p: Polarization, ctx: WaveContext) -> CVec3 {
    let k = ctx.k();
    let amp = d.vec().cross(p.vec());
    let factor = Complex64::new(0.0, k) * plane_phase(x, d, k);
    amp * factor
}

/// Superposition of two incident electric plane waves.
pub fn incident_electric_pair(
    x: Vec3,
    d1: UnitVector,
    d2: UnitVector,
    p1: Polarization,
    p2: Polarization,
    ctx: WaveContext,
) -> CVec3 {
    incident_electric(x, d1, p1, ctx) + incident_electric(x, d2, p2, ctx)
}
