//! Real and complex 3-vectors, unit directions, spherical angles and the
//! tangential measurement frame on the unit sphere.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Error;

/// Tolerance used when validating unit vectors and frame orthogonality.
pub const UNIT_TOL: f64 = 1e-12;

/// Half-width of the polar exclusion band: measurement grids keep
/// `theta` inside `[POLE_BAND, pi - POLE_BAND]`.
pub const POLE_BAND: f64 = 1e-3;

/// A real 3-vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * other.z - self.z * other.y,
            y: self.z * other.x - self.x * other.z,
            z: self.x * other.y - self.y * other.x,
        }
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector along `self`, or `None` for (near-)zero input.
    pub fn normalized(self) -> Option<UnitVector> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(UnitVector(self / n))
        }
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A direction on the unit sphere (`|v| = 1` within [`UNIT_TOL`]).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVector(Vec3);

impl UnitVector {
    pub const PLUS_X: UnitVector = UnitVector(Vec3 { x: 1.0, y: 0.0, z: 0.0 });
    pub const PLUS_Y: UnitVector = UnitVector(Vec3 { x: 0.0, y: 1.0, z: 0.0 });
    pub const PLUS_Z: UnitVector = UnitVector(Vec3 { x: 0.0, y: 0.0, z: 1.0 });

    /// Wraps `v`, requiring it to already be unit length.
    pub fn new(v: Vec3) -> Result<Self, Error> {
        let n = v.norm();
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::Geometry(format!(
                "vector ({}, {}, {}) has norm {n}, not a unit vector",
                v.x, v.y, v.z
            )));
        }
        Ok(UnitVector(v))
    }

    /// Rescales `v` to unit length.
    pub fn normalize(v: Vec3) -> Result<Self, Error> {
        v.normalized()
            .ok_or_else(|| Error::Geometry("cannot normalize the zero vector".into()))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn flipped(self) -> UnitVector {
        UnitVector(-self.0)
    }

    /// Spherical angles of this direction; `phi` is wrapped to `[0, 2pi)`.
    pub fn angles(self) -> SphericalAngles {
        let theta = self.0.z.clamp(-1.0, 1.0).acos();
        let mut phi = self.0.y.atan2(self.0.x);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        SphericalAngles { theta, phi }
    }

    /// Any unit vector orthogonal to `self`.
    pub fn any_orthogonal(self) -> UnitVector {
        let v = self.0;
        let trial = if v.x.abs() < 0.9 { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
        let w = trial - v * trial.dot(v);
        UnitVector(w / w.norm())
    }
}

/// Spherical coordinates `theta in [0, pi]`, `phi in [0, 2pi)` of a point
/// on the unit sphere: `(sin t cos p, sin t sin p, cos t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalAngles {
    pub theta: f64,
    pub phi: f64,
}

impl SphericalAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self, Error> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::Geometry(format!("theta = {theta} outside [0, pi]")));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::Geometry(format!("phi = {phi} outside [0, 2pi)")));
        }
        Ok(SphericalAngles { theta, phi })
    }

    /// `theta` within `pole_band` of a pole, where the tangent frame degenerates.
    pub fn near_pole(self, pole_band: f64) -> bool {
        self.theta < pole_band || self.theta > std::f64::consts::PI - pole_band
    }
}

/// Converts spherical angles to the Cartesian unit vector.
pub fn spherical_to_cartesian(a: SphericalAngles) -> UnitVector {
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    UnitVector(Vec3::new(st * cp, st * sp, ct))
}

/// Orthonormal tangential frame `(e_phi, e_theta)` at a point of the unit
/// sphere away from the poles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentFrame {
    pub e_phi: UnitVector,
    pub e_theta: UnitVector,
}

/// Builds the tangential frame
/// `e_phi = (-sin p, cos p, 0)`, `e_theta = (cos t cos p, cos t sin p, -sin t)`.
///
/// Fails with [`Error::Pole`] when `theta` is within `1e-9` of a pole.
pub fn tangent_frame(a: SphericalAngles) -> Result<TangentFrame, Error> {
    if a.near_pole(1e-9) {
        return Err(Error::Pole { theta: a.theta });
    }
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    Ok(TangentFrame {
        e_phi: UnitVector(Vec3::new(-sp, cp, 0.0)),
        e_theta: UnitVector(Vec3::new(ct * cp, ct * sp, -st)),
    })
}

/// A complex-valued field sample (three complex components).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl CVec3 {
    pub const ZERO: CVec3 = CVec3 {
        x: Complex64 { re: 0.0, im: 0.0 },
        y: Complex64 { re: 0.0, im: 0.0 },
        z: Complex64 { re: 0.0, im: 0.0 },
    };

    pub fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        CVec3 { x, y, z }
    }

    pub fn from_real(v: Vec3) -> Self {
        CVec3::new(v.x.into(), v.y.into(), v.z.into())
    }

    /// Bilinear (no conjugation) dot product with a real vector.
    pub fn dot_real(self, v: Vec3) -> Complex64 {
        self.x * v.x + self.y * v.y + self.z * v.z
    }

    /// Bilinear (no conjugation) dot product.
    pub fn dot(self, o: CVec3) -> Complex64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm_sq(self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn conj(self) -> CVec3 {
        CVec3::new(self.x.conj(), self.y.conj(), self.z.conj())
    }

    pub fn cross(self, o: CVec3) -> CVec3 {
        CVec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    /// `v x self` for a real `v`.
    pub fn cross_from_real(self, v: Vec3) -> CVec3 {
        CVec3::from_real(v).cross(self)
    }
}

impl Add for CVec3 {
    type Output = CVec3;
    fn add(self, o: CVec3) -> CVec3 {
        CVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for CVec3 {
    type Output = CVec3;
    fn sub(self, o: CVec3) -> CVec3 {
        CVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<Complex64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: Complex64) -> CVec3 {
        CVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<f64> for CVec3 {
    type Output = CVec3;
    fn mul(self, s: f64) -> CVec3 {
        CVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for CVec3 {
    type Output = CVec3;
    fn neg(self) -> CVec3 {
        CVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Complex64> for Vec3 {
    type Output = CVec3;
    fn mul(self, s: Complex64) -> CVec3 {
        CVec3::new(s * self.x, s * self.y, s * self.z)
    }
}
