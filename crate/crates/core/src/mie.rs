//! Analytic partial-wave (Mie) solution for scattering of a plane wave by a
//! single sphere: perfectly conducting, constant-impedance, or homogeneous
//! dielectric.
//!
//! Coefficients follow the convention in which the scattered outgoing mode
//! amplitude is `a_n` (or `b_n`) times the incident regular mode amplitude,
//! so lossless spheres satisfy `|1 + 2 a_n| = |1 + 2 b_n| = 1`. The `a_n`
//! family multiplies the M-type (transverse-electric) modes and the `b_n`
//! family the N-type (transverse-magnetic) modes; for a perfectly conducting
//! sphere `a_n = -psi_n(ka)/xi_n(ka)` and `b_n = -psi'_n(ka)/xi'_n(ka)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::farfield::FarFieldMatrix;
use crate::geom::{CVec3, UnitVector, Vec3};
use crate::specfun::{pi_tau, riccati_bessel, riccati_psi_complex, BesselTable};
use crate::wave::{Polarization, WaveContext};
use crate::Error;

/// Boundary condition of a sphere obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BoundaryKind {
    /// Perfect electric conductor: `nu x E = 0`.
    Pec,
    /// Impedance condition `nu x curl E - i lambda (nu x E) x nu = 0`
    /// with constant `lambda >= 0`.
    Impedance { lambda: f64 },
    /// Homogeneous penetrable sphere of refractive index `n` (relative,
    /// `Re n > 0`, `Im n >= 0`); the interior wavenumber is `k sqrt(n)`.
    Dielectric { n_re: f64, n_im: f64 },
}

impl BoundaryKind {
    pub fn validate(&self) -> Result<(), Error> {
        match *self {
            BoundaryKind::Pec => Ok(()),
            BoundaryKind::Impedance { lambda } => {
                if lambda < 0.0 || !lambda.is_finite() {
                    Err(Error::Config(format!("impedance must satisfy lambda >= 0, got {lambda}")))
                } else {
                    Ok(())
                }
            }
            BoundaryKind::Dielectric { n_re, n_im } => {
                if n_re <= 0.0 || n_im < 0.0 || !n_re.is_finite() || !n_im.is_finite() {
                    Err(Error::Config(format!(
                        "refractive index must have Re n > 0 and Im n >= 0, got {n_re} + {n_im}i"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A sphere obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereObstacle {
    pub center: Vec3,
    pub radius: f64,
    pub bc: BoundaryKind,
}

impl SphereObstacle {
    pub fn new(center: Vec3, radius: f64, bc: BoundaryKind) -> Result<Self, Error> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("sphere radius must be positive, got {radius}")));
        }
        bc.validate()?;
        Ok(SphereObstacle { center, radius, bc })
    }

    pub fn pec(center: Vec3, radius: f64) -> Result<Self, Error> {
        SphereObstacle::new(center, radius, BoundaryKind::Pec)
    }
}

/// Truncated partial-wave scattering coefficients, orders `1..=len`.
#[derive(Debug, Clone)]
pub struct MieCoefficients {
    /// M-type (transverse-electric) coefficients, index 0 is order 1.
    pub a: Vec<Complex64>,
    /// N-type (transverse-magnetic) coefficients.
    pub b: Vec<Complex64>,
}

impl MieCoefficients {
    pub fn order(&self) -> usize {
        self.a.len()
    }

    /// Coefficients with the two mode families exchanged; the magnetic
    /// far-field pattern of a sphere is the electric pattern of the swapped
    /// coefficients applied to the rotated polarization `d x p`.
    pub fn swapped(&self) -> MieCoefficients {
        MieCoefficients { a: self.b.clone(), b: self.a.clone() }
    }
}

/// Truncation rule `ceil(ka + 4.05 (ka)^(1/3) + 8)`.
pub fn truncation_order(ka: f64) -> usize {
    (ka + 4.05 * ka.cbrt() + 8.0).ceil() as usize
}

const RESONANCE_THRESHOLD: f64 = 1e-13;

fn check_denominator(den: Complex64, order: usize) -> Result<Complex64, Error> {
    if den.norm() < RESONANCE_THRESHOLD {
        Err(Error::Resonance { order, magnitude: den.norm() })
    } else {
        Ok(den)
    }
}

/// Partial-wave coefficients of a sphere for `n = 1..=n_terms`.
pub fn mie_coefficients(s: &SphereObstacle, ctx: WaveContext, n_terms: usize) -> Result<MieCoefficients, Error> {
    s.bc.validate()?;
    let x = ctx.k() * s.radius;
    let n_terms = n_terms.max(1);
    let rt = riccati_bessel(n_terms, x)?;
    let mut a = Vec::with_capacity(n_terms);
    let mut b = Vec::with_capacity(n_terms);
    match s.bc {
        BoundaryKind::Pec => {
            for n in 1..=n_terms {
                let den_a = check_denominator(rt.xi[n], n)?;
                let den_b = check_denominator(rt.dxi[n], n)?;
                a.push(-Complex64::from(rt.psi[n]) / den_a);
                b.push(-Complex64::from(rt.dpsi[n]) / den_b);
            }
        }
        BoundaryKind::Impedance { lambda } => {
            // From nu x curl E = i lambda (nu x E) x nu imposed mode by mode:
            //   M-modes: a_n = -(l psi - i k psi') / (l xi - i k xi')
            //   N-modes: b_n = -(k psi - i l psi') / (k xi - i l xi')
            // evaluated at ka. lambda -> infinity recovers the PEC sphere.
            let k = ctx.k();
            let il = Complex64::new(0.0, lambda);
            let ik = Complex64::new(0.0, k);
            for n in 1..=n_terms {
                let num_a = lambda * rt.psi[n] - ik * rt.dpsi[n];
                let den_a = check_denominator(lambda * rt.xi[n] - ik * rt.dxi[n], n)?;
                let num_b = k * rt.psi[n] - il * rt.dpsi[n];
                let den_b = check_denominator(k * rt.xi[n] - il * rt.dxi[n], n)?;
                a.push(-num_a / den_a);
                b.push(-num_b / den_b);
            }
        }
        BoundaryKind::Dielectric { n_re, n_im } => {
            // Transmission conditions with mu = mu0: tangential E and H
            // continuous; relative refractive index m = sqrt(n).
            let m = Complex64::new(n_re, n_im).sqrt();
            let y = m * x;
            let (psi_y, dpsi_y) = riccati_psi_complex(n_terms, y)?;
            for n in 1..=n_terms {
                let psi_x = Complex64::from(rt.psi[n]);
                let dpsi_x = Complex64::from(rt.dpsi[n]);
                let xi_x = rt.xi[n];
                let dxi_x = rt.dxi[n];
                // M-type (TE) family
                let num_a = psi_y[n] * dpsi_x - m * psi_x * dpsi_y[n];
                let den_a = check_denominator(psi_y[n] * dxi_x - m * xi_x * dpsi_y[n], n)?;
                // N-type (TM) family
                let num_b = m * psi_y[n] * dpsi_x - psi_x * dpsi_y[n];
                let den_b = check_denominator(m * psi_y[n] * dxi_x - xi_x * dpsi_y[n], n)?;
                a.push(-num_a / den_a);
                b.push(-num_b / den_b);
            }
        }
    }
    Ok(MieCoefficients { a, b })
}

/// Scattering and extinction cross-sections from the coefficients.
///
/// For a lossless sphere the two agree (optical theorem).
pub fn cross_sections(coeffs: &MieCoefficients, ctx: WaveContext) -> (f64, f64) {
    let k = ctx.k();
    let mut c_sca = 0.0;
    let mut c_ext = 0.0;
    for (i, (&an, &bn)) in coeffs.a.iter().zip(&coeffs.b).enumerate() {
        let w = (2 * (i + 1) + 1) as f64;
        c_sca += w * (an.norm_sqr() + bn.norm_sqr());
        c_ext += -w * (an.re + bn.re);
    }
    let pref = 2.0 * std::f64::consts::PI / (k * k);
    (pref * c_sca, pref * c_ext)
}

/// Angular amplitudes of the pattern at `mu = cos(scattering angle)`:
/// returns `(t_par, t_perp)` where
/// `t_par = sum c_n (b_n tau_n + a_n pi_n)` multiplies the in-plane
/// polarization component and `t_perp = sum c_n (b_n pi_n + a_n tau_n)`
/// the out-of-plane component, `c_n = (2n+1)/(n(n+1))`.
fn angular_amplitudes(coeffs: &MieCoefficients, mu: f64) -> (Complex64, Complex64) {
    let n_max = coeffs.order();
    let (pi_n, tau_n) = pi_tau(n_max, mu);
    let mut t_par = Complex64::default();
    let mut t_perp = Complex64::default();
    for n in 1..=n_max {
        let nf = n as f64;
        let c = (2.0 * nf + 1.0) / (nf * (nf + 1.0));
        let (an, bn) = (coeffs.a[n - 1], coeffs.b[n - 1]);
        t_par += c * (bn * tau_n[n - 1] + an * pi_n[n - 1]);
        t_perp += c * (bn * pi_n[n - 1] + an * tau_n[n - 1]);
    }
    (t_par, t_perp)
}

/// The electric far-field matrix `E_inf(xhat, d)` of a sphere centered at
/// the origin. The result is tangential to `xhat` and annihilates `d` by
/// construction.
pub fn far_field_matrix(coeffs: &MieCoefficients, xhat: UnitVector, d: UnitVector) -> FarFieldMatrix {
    let mu = xhat.vec().dot(d.vec()).clamp(-1.0, 1.0);
    let cross = d.vec().cross(xhat.vec());
    let sin_sq = cross.norm_sq();
    let mut m = FarFieldMatrix::ZERO;
    if sin_sq < 1e-14 {
        // Forward/backward limits: the pattern degenerates to a multiple of
        // the transverse projector.
        let n_max = coeffs.order();
        let mut t = Complex64::default();
        for n in 1..=n_max {
            let w = (2.0 * n as f64 + 1.0) / 2.0;
            let (an, bn) = (coeffs.a[n - 1], coeffs.b[n - 1]);
            if mu > 0.0 {
                t += w * (an + bn);
            } else {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                // t_par(-1); the full backward matrix is -t_par(-1) * projector
                t += w * sign * (bn - an);
            }
        }
        let scalar = if mu > 0.0 { t } else { -t };
        let e1 = d.any_orthogonal().vec();
        let e2 = d.vec().cross(e1);
        m.add_outer(scalar, e1, e1);
        m.add_outer(scalar, e2, e2);
        return m;
    }
    let e_perp = cross / sin_sq.sqrt();
    let e_par_i = e_perp.cross(d.vec());
    let e_par_s = e_perp.cross(xhat.vec());
    let (t_par, t_perp) = angular_amplitudes(coeffs, mu);
    m.add_outer(t_par, e_par_s, e_par_i);
    m.add_outer(t_perp, e_perp, e_perp);
    m
}

/// The magnetic far-field matrix `H_inf(xhat, d)`, built independently from
/// the magnetic partial-wave series: it equals the electric pattern of the
/// swapped coefficient families applied to `d x p`.
pub fn magnetic_far_field_matrix(coeffs: &MieCoefficients, xhat: UnitVector, d: UnitVector) -> FarFieldMatrix {
    let swapped = coeffs.swapped();
    let e_of_swapped = far_field_matrix(&swapped, xhat, d);
    // Column j of the result is M_swapped (d x e_j).
    let dv = d.vec();
    let cols = [
        e_of_swapped.apply(dv.cross(Vec3::new(1.0, 0.0, 0.0))),
        e_of_swapped.apply(dv.cross(Vec3::new(0.0, 1.0, 0.0))),
        e_of_swapped.apply(dv.cross(Vec3::new(0.0, 0.0, 1.0))),
    ];
    FarFieldMatrix::from_columns(cols)
}

/// Far-field translation law: translating the scatterer by `z` multiplies
/// the pattern by the unimodular factor `e^{ik (d - xhat) . z}`.
pub fn translated_far_field(
    cell: &FarFieldMatrix,
    xhat: UnitVector,
    d: UnitVector,
    z: Vec3,
    ctx: WaveContext,
) -> FarFieldMatrix {
    let phase = Complex64::new(0.0, ctx.k() * (d.vec() - xhat.vec()).dot(z)).exp();
    cell.scaled(phase)
}

/// Scattered near field `(E^s, H^s)` of the sphere at an exterior point.
///
/// For a sphere centered at `c`, the fields are those of the origin-centered
/// sphere evaluated at `x - c`, times the incident carrier phase at `c`.
pub fn near_scattered_field(
    s: &SphereObstacle,
    coeffs: &MieCoefficients,
    x: Vec3,
    d: UnitVector,
    p: Polarization,
    ctx: WaveContext,
) -> Result<(CVec3, CVec3), Error> {
    let rel = x - s.center;
    if rel.norm() < s.radius * (1.0 - 1e-12) {
        return Err(Error::Geometry(format!(
            "evaluation point inside the sphere (|x - c| = {}, radius = {})",
            rel.norm(),
            s.radius
        )));
    }
    let p_t = p.transverse_part(d);
    let pt_norm = p_t.norm();
    if pt_norm < 1e-300 {
        return Ok((CVec3::ZERO, CVec3::ZERO));
    }
    // Rotate into the frame where the wave travels along +z with the
    // polarization along +x.
    let u = p_t / pt_norm;
    let v = d.vec().cross(u);
    let w = d.vec();
    let to_local = |q: Vec3| Vec3::new(q.dot(u), q.dot(v), q.dot(w));
    let to_global = |q: CVec3| {
        CVec3::new(
            q.x * u.x + q.y * v.x + q.z * w.x,
            q.x * u.y + q.y * v.y + q.z * w.y,
            q.x * u.z + q.y * v.z + q.z * w.z,
        )
    };

    let xl = to_local(rel);
    let r = xl.norm();
    let rho = ctx.k() * r;
    let cos_t = (xl.z / r).clamp(-1.0, 1.0);
    let sin_t = (1.0 - cos_t * cos_t).max(0.0).sqrt();
    let phi = xl.y.atan2(xl.x);
    let (sin_p, cos_p) = phi.sin_cos();

    let n_max = coeffs.order();
    let bt = BesselTable::build(n_max, rho)?;
    let (pi_n, tau_n) = pi_tau(n_max, cos_t);

    // Amplitude of the incident carrier: E^i = ik p_t e^{ik x.d}; an extra
    // phase accounts for the sphere center offset.
    let amp = Complex64::new(0.0, ctx.k() * pt_norm)
        * Complex64::new(0.0, ctx.k() * d.vec().dot(s.center)).exp();

    let mut e_sph = [Complex64::default(); 3]; // (r, theta, phi)
    let mut h_sph = [Complex64::default(); 3];
    let mut i_pow = Complex64::new(0.0, 1.0); // i^n starting at n = 1
    for n in 1..=n_max {
        let nf = n as f64;
        let en = i_pow * ((2.0 * nf + 1.0) / (nf * (nf + 1.0)));
        // Convert stored (M-type a, N-type b) to the series coefficients of
        // the outgoing expansion used here.
        let a_m = -coeffs.a[n - 1]; // multiplies M^(3) modes
        let b_n = -coeffs.b[n - 1]; // multiplies N^(3) modes
        let (h, dh) = bt.hankel1(n);
        let dxi_over_rho = (h + rho * dh) / rho;
        let pin = pi_n[n - 1];
        let taun = tau_n[n - 1];
        let i = Complex64::i();

        // E^s = sum E_n ( i b_n N_e1n^(3) - a_m M_o1n^(3) )
        e_sph[0] += en * (i * b_n) * cos_p * (nf * (nf + 1.0)) * sin_t * pin * h / rho;
        e_sph[1] += en * ((i * b_n) * cos_p * taun * dxi_over_rho - a_m * cos_p * pin * h);
        e_sph[2] += en * (-(i * b_n) * sin_p * pin * dxi_over_rho + a_m * sin_p * taun * h);

        // H^s = sum E_n ( i a_m N_o1n^(3) + b_n M_e1n^(3) )
        h_sph[0] += en * (i * a_m) * sin_p * (nf * (nf + 1.0)) * sin_t * pin * h / rho;
        h_sph[1] += en * ((i * a_m) * sin_p * taun * dxi_over_rho - b_n * sin_p * pin * h);
        h_sph[2] += en * ((i * a_m) * cos_p * pin * dxi_over_rho - b_n * cos_p * taun * h);

        i_pow *= Complex64::i();
    }

    // Spherical to local Cartesian.
    let er = Vec3::new(sin_t * cos_p, sin_t * sin_p, cos_t);
    let et = Vec3::new(cos_t * cos_p, cos_t * sin_p, -sin_t);
    let ep = Vec3::new(-sin_p, cos_p, 0.0);
    let assemble = |f: [Complex64; 3]| {
        CVec3::new(
            f[0] * er.x + f[1] * et.x + f[2] * ep.x,
            f[0] * er.y + f[1] * et.y + f[2] * ep.y,
            f[0] * er.z + f[1] * et.z + f[2] * ep.z,
        ) * amp
    };
    Ok((to_global(assemble(e_sph)), to_global(assemble(h_sph))))
}
