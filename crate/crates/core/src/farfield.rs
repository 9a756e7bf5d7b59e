//! Far-field matrices, measurement grids on the unit sphere, and the
//! phaseless measurement operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geom::{
    spherical_to_cartesian, tangent_frame, CVec3, SphericalAngles, TangentFrame, UnitVector, Vec3,
    POLE_BAND,
};
use crate::specfun::gauss_legendre;
use crate::wave::Polarization;
use crate::Error;

/// The electric far-field pattern at one `(xhat, d)` pair, as the 3x3
/// complex matrix acting on polarization vectors: `M p = E_inf(xhat, d) p`.
///
/// Rows index the field component, columns the polarization component.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FarFieldMatrix(pub [[Complex64; 3]; 3]);

impl FarFieldMatrix {
    pub const ZERO: FarFieldMatrix = FarFieldMatrix([[Complex64 { re: 0.0, im: 0.0 }; 3]; 3]);

    /// Builds the matrix column-by-column from the pattern applied to the
    /// Cartesian basis vectors.
    pub fn from_columns(cols: [CVec3; 3]) -> Self {
        let mut m = [[Complex64::default(); 3]; 3];
        for (c, col) in cols.iter().enumerate() {
            m[0][c] = col.x;
            m[1][c] = col.y;
            m[2][c] = col.z;
        }
        FarFieldMatrix(m)
    }

    /// Rank-one update `self += s * a b^T` with real `a`, `b`.
    pub fn add_outer(&mut self, s: Complex64, a: Vec3, b: Vec3) {
        let av = a.as_array();
        let bv = b.as_array();
        for r in 0..3 {
            for c in 0..3 {
                self.0[r][c] += s * av[r] * bv[c];
            }
        }
    }

    pub fn apply(&self, p: Vec3) -> CVec3 {
        let pv = p.as_array();
        let mut out = [Complex64::default(); 3];
        for (r, row) in self.0.iter().enumerate() {
            out[r] = row[0] * pv[0] + row[1] * pv[1] + row[2] * pv[2];
        }
        CVec3::new(out[0], out[1], out[2])
    }

    pub fn transpose(&self) -> FarFieldMatrix {
        let mut m = [[Complex64::default(); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = self.0[c][r];
            }
        }
        FarFieldMatrix(m)
    }

    pub fn scaled(&self, s: Complex64) -> FarFieldMatrix {
        let mut m = self.0;
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        FarFieldMatrix(m)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn sub(&self, other: &FarFieldMatrix) -> FarFieldMatrix {
        let mut m = self.0;
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] -= other.0[r][c];
            }
        }
        FarFieldMatrix(m)
    }
}

/// Which tangential component a phaseless measurement records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrameComponent {
    Phi,
    Theta,
}

impl FrameComponent {
    pub const BOTH: [FrameComponent; 2] = [FrameComponent::Phi, FrameComponent::Theta];

    pub fn select(self, frame: &TangentFrame) -> UnitVector {
        match self {
            FrameComponent::Phi => frame.e_phi,
            FrameComponent::Theta => frame.e_theta,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FrameComponent::Phi => "phi",
            FrameComponent::Theta => "theta",
        }
    }
}

/// One phaseless far-field measurement
/// `|e_m(xhat) . (E_inf(xhat,d1) p1 + E_inf(xhat,d2) p2)|` with its index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaselessRecord {
    pub angles: SphericalAngles,
    pub d1: UnitVector,
    pub d2: UnitVector,
    pub p1: Polarization,
    pub p2: Polarization,
    pub component: FrameComponent,
    pub value: f64,
}

/// The phaseless measurement operator applied to two far-field cells
/// evaluated at the same observation direction.
pub fn phaseless_measure(
    m1: &FarFieldMatrix,
    m2: &FarFieldMatrix,
    p1: Polarization,
    p2: Polarization,
    component: FrameComponent,
    at: SphericalAngles,
) -> Result<f64, Error> {
    let frame = tangent_frame(at)?;
    let e_m = component.select(&frame).vec();
    let total = m1.apply(p1.vec()) + m2.apply(p2.vec());
    Ok(total.dot_real(e_m).norm())
}

/// Observation grid: Gauss-Legendre nodes in `cos(theta)` crossed with a
/// uniform grid in `phi`, excluding the polar band.
#[derive(Debug, Clone)]
pub struct MeasurementGrid {
    pub n_theta: usize,
    pub n_phi: usize,
    pub pole_band: f64,
    points: Vec<GridPoint>,
}

#[derive(Debug, Clone)]
pub struct GridPoint {
    pub angles: SphericalAngles,
    pub direction: UnitVector,
    pub frame: TangentFrame,
    /// Solid-angle quadrature weight (sums to ~4 pi over the grid).
    pub weight: f64,
}

impl MeasurementGrid {
    pub fn new(n_theta: usize, n_phi: usize, pole_band: f64) -> Result<Self, Error> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::Config("measurement grid counts must be positive".into()));
        }
        let (nodes, weights) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut points = Vec::with_capacity(n_theta * n_phi);
        // Theta-major ordering, descending cos(theta) = ascending theta.
        for (i, &mu) in nodes.iter().rev().enumerate() {
            let theta = mu.clamp(-1.0, 1.0).acos();
            let a_probe = SphericalAngles { theta, phi: 0.0 };
            if a_probe.near_pole(pole_band) {
                continue;
            }
            let w_theta = weights[nodes.len() - 1 - i];
            for jphi in 0..n_phi {
                let phi = jphi as f64 * dphi;
                let angles = SphericalAngles { theta, phi };
                let direction = spherical_to_cartesian(angles);
                let frame = tangent_frame(angles)?;
                points.push(GridPoint { angles, direction, frame, weight: w_theta * dphi });
            }
        }
        Ok(MeasurementGrid { n_theta, n_phi, pole_band, points })
    }

    /// The default 16 x 32 grid with the standard pole band.
    pub fn default_grid() -> Self {
        MeasurementGrid::new(16, 32, POLE_BAND).expect("default grid is valid")
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Relative L2 distance between two sampled far-field patterns over a grid,
/// using the grid's solid-angle weights:
/// `||a - b||_2 / ||b||_2`.
pub fn relative_l2_error(a: &[FarFieldMatrix], b: &[FarFieldMatrix], grid: &MeasurementGrid) -> Result<f64, Error> {
    if a.len() != b.len() || a.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "sample counts {} / {} vs grid {}",
            a.len(),
            b.len(),
            grid.len()
        )));
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for ((ma, mb), pt) in a.iter().zip(b).zip(grid.points()) {
        num += ma.sub(mb).norm().powi(2) * pt.weight;
        den += mb.norm().powi(2) * pt.weight;
    }
    Ok((num / den).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample_matrix(seed: u64) -> FarFieldMatrix {
        // Deterministic pseudo-random complex entries.
        let mut m = FarFieldMatrix::ZERO;
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for r in 0..3 {
            for c in 0..3 {
                m.0[r][c] = Complex64::new(next(), next());
            }
        }
        m
    }

    #[test]
    fn zero_polarizations_measure_zero() {
        let m1 = sample_matrix(1);
        let m2 = sample_matrix(2);
        let at = SphericalAngles::new(1.0, 2.0).unwrap();
        let v = phaseless_measure(
            &m1,
            &m2,
            Polarization::new(Vec3::ZERO),
            Polarization::new(Vec3::ZERO),
            FrameComponent::Phi,
            at,
        )
        .unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn opposite_polarizations_cancel() {
        // d1 = d2 and p1 = -p2: the two incident fields cancel by linearity.
        let m = sample_matrix(3);
        let at = SphericalAngles::new(0.7, 5.0).unwrap();
        let p = Polarization::new(Vec3::new(0.3, -0.2, 0.9));
        let v = phaseless_measure(&m, &m, p, Polarization::new(-p.vec()), FrameComponent::Theta, at).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
    }

    /// |a+b|^2 = |a|^2 + |b|^2 + 2 Re(a conj(b)) with a, b the two
    /// single-wave components of the measurement.
    #[test]
    fn expansion_identity() {
        let m1 = sample_matrix(4);
        let m2 = sample_matrix(5);
        let at = SphericalAngles::new(1.3, 0.4).unwrap();
        let p1 = Polarization::new(Vec3::new(1.0, 0.2, -0.4));
        let p2 = Polarization::new(Vec3::new(-0.3, 0.8, 0.5));
        for comp in FrameComponent::BOTH {
            let frame = tangent_frame(at).unwrap();
            let e_m = comp.select(&frame).vec();
            let a = m1.apply(p1.vec()).dot_real(e_m);
            let b = m2.apply(p2.vec()).dot_real(e_m);
            let lhs = phaseless_measure(&m1, &m2, p1, p2, comp, at).unwrap().powi(2);
            let rhs = a.norm_sqr() + b.norm_sqr() + 2.0 * (a * b.conj()).re;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn measure_rejects_poles() {
        let m = sample_matrix(6);
        let at = SphericalAngles::new(1e-12, 0.0).unwrap();
        let p = Polarization::new(Vec3::new(1.0, 0.0, 0.0));
        assert!(matches!(
            phaseless_measure(&m, &m, p, p, FrameComponent::Phi, at),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn default_grid_counts_and_weights() {
        let g = MeasurementGrid::default_grid();
        assert_eq!(g.len(), 16 * 32);
        let total: f64 = g.points().iter().map(|p| p.weight).sum();
        assert_abs_diff_eq!(total, 4.0 * std::f64::consts::PI, epsilon = 1e-10);
        for p in g.points() {
            assert!(!p.angles.near_pole(g.pole_band));
        }
    }

    #[test]
    fn grid_ordering_is_theta_major_ascending() {
        let g = MeasurementGrid::new(4, 6, POLE_BAND).unwrap();
        let mut last = (-1.0, -1.0);
        for p in g.points() {
            let key = (p.angles.theta, p.angles.phi);
            assert!(key > last, "grid not sorted: {key:?} after {last:?}");
            last = key;
        }
    }
}
