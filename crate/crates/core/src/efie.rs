//! Method-of-moments EFIE solver for perfectly conducting bodies.
//!
//! Galerkin discretization over RWG edge bases on closed triangle meshes.
//! The impedance matrix is
//!
//! `Z_mn = ik <f_m, G f_n> - (i/k) <div f_m, G div f_n>`
//!
//! with the Helmholtz kernel `G = e^{ikR}/(4 pi R)`. Singular and
//! near-singular interactions extract the static `1/(4 pi R)` kernel, which
//! is integrated analytically over source triangles; the smooth remainder
//! `(e^{ikR} - 1)/(4 pi R)` is handled by regular quadrature.
//!
//! Each unordered face pair is integrated once and mirrored, so the matrix
//! is complex-symmetric bitwise. Assembly runs parallel over ordered face
//! batches and is reproducible bit-for-bit regardless of thread count.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::geom::{CVec3, UnitVector, Vec3};
use crate::mesh::{gauss_points, RwgBasis, TriMesh};
use crate::wave::{incident_electric, Polarization, WaveContext};
use crate::Error;

const INV_4PI: f64 = 1.0 / (4.0 * std::f64::consts::PI);

/// Quadrature and near-interaction controls.
#[derive(Debug, Clone, Copy)]
pub struct AssemblyOptions {
    /// Triangle rule on the test side (point count in {1,3,4,7}).
    pub test_order: usize,
    /// Triangle rule on the source side.
    pub source_order: usize,
    /// Pairs closer than `near_factor * (r_p + r_q)` (centroid distance vs
    /// summed circumradii) use singularity extraction.
    pub near_factor: f64,
}

impl Default for AssemblyOptions {
    fn default() -> Self {
        AssemblyOptions { test_order: 3, source_order: 4, near_factor: 3.0 }
    }
}

/// Analytic integrals of the static kernel over a triangle:
/// `i0 = int 1/R dS'` and `iv = int (y - obs)/R dS'`.
///
/// Edge-wise closed forms for uniform and linear source distributions on
/// polygons; stable for observation points on, near, and off the plane.
pub fn static_triangle_potentials(v: &[Vec3; 3], obs: Vec3) -> (f64, Vec3) {
    let normal = {
        let n = (v[1] - v[0]).cross(v[2] - v[0]);
        n / n.norm()
    };
    let w0 = normal.dot(obs - v[0]);
    let rho = obs - normal * w0;
    let aw0 = w0.abs();

    let mut i0 = 0.0;
    let mut iv_plane = Vec3::ZERO;
    for e in 0..3 {
        let a = v[e];
        let b = v[(e + 1) % 3];
        let edge = b - a;
        let len = edge.norm();
        let s_hat = edge / len;
        let m_hat = s_hat.cross(normal);
        let lm = s_hat.dot(a - rho);
        let lp = s_hat.dot(b - rho);
        let p0 = m_hat.dot(a - rho);
        let rm = (obs - a).norm();
        let rp = (obs - b).norm();
        let r0_sq = p0 * p0 + w0 * w0;

        // log term; switch to the mirrored form when the direct one cancels
        let f = if (rm + lm) > (rp - lp).abs() * 1e-8 && (rm + lm) > 0.0 {
            ((rp + lp) / (rm + lm)).ln()
        } else if (rm - lm) > 0.0 && (rp - lp) > 0.0 {
            ((rm - lm) / (rp - lp)).ln()
        } else {
            0.0
        };

        if p0.abs() > 1e-14 * len || aw0 > 1e-14 * len {
            let beta = (p0 * lp).atan2(r0_sq + aw0 * rp) - (p0 * lm).atan2(r0_sq + aw0 * rm);
            i0 += p0 * f - aw0 * beta;
        }
        // int_edge R dl
        let k_edge = 0.5 * (lp * rp - lm * rm + r0_sq * f);
        iv_plane = iv_plane + m_hat * k_edge;
    }
    let iv = iv_plane - normal * (w0 * i0);
    (i0, iv)
}

/// `(e^{ikR} - 1) / (4 pi R)`, series-stabilized near R = 0.
#[inline]
fn smooth_kernel(k: f64, r: f64) -> Complex64 {
    let kr = k * r;
    if kr < 1e-3 {
        // (e^{ix}-1)/x * k = k(i - x/2 - i x^2/6 + x^3/24)
        let x = kr;
        Complex64::new(-x / 2.0 + x * x * x / 24.0, 1.0 - x * x / 6.0) * (k * INV_4PI)
    } else {
        (Complex64::new(0.0, kr).exp() - 1.0) / r * INV_4PI
    }
}

#[inline]
fn full_kernel(k: f64, r: f64) -> Complex64 {
    Complex64::new(0.0, k * r).exp() / r * INV_4PI
}

struct FaceGeom {
    vertices: [Vec3; 3],
    centroid: Vec3,
    radius: f64,
    area: f64,
}

fn face_geoms(mesh: &TriMesh) -> Vec<FaceGeom> {
    (0..mesh.num_faces())
        .map(|f| {
            let vertices = mesh.face_vertices(f);
            let centroid = mesh.face_centroid(f);
            let radius = vertices.iter().map(|v| (*v - centroid).norm()).fold(0.0, f64::max);
            FaceGeom { vertices, centroid, radius, area: mesh.face_area(f) }
        })
        .collect()
}

/// Assembles the dense EFIE impedance matrix.
pub fn assemble_matrix(
    mesh: &TriMesh,
    rwg: &RwgBasis,
    ctx: WaveContext,
    opts: AssemblyOptions,
) -> DMatrix<Complex64> {
    let n = rwg.len();
    let k = ctx.k();
    let faces = face_geoms(mesh);
    let n_faces = faces.len();
    let ik = Complex64::new(0.0, k);
    let i_over_k = Complex64::new(0.0, 1.0 / k);

    let mut z = DMatrix::<Complex64>::zeros(n, n);

    // One contribution: rows/cols of an unordered face pair block.
    type Contribution = (u32, u32, Complex64);

    let process_test_face = |tp: usize| -> Vec<Contribution> {
        let mut out = Vec::new();
        let fp = &faces[tp];
        let test_pts = gauss_points(&fp.vertices, opts.test_order);
        let test_edges = &rwg.face_edges[tp];
        for sq in tp..n_faces {
            let fq = &faces[sq];
            let near = (fp.centroid - fq.centroid).norm() <= opts.near_factor * (fp.radius + fq.radius);
            let src_pts = gauss_points(&fq.vertices, opts.source_order);
            let src_edges = &rwg.face_edges[sq];

            // Inner integrals per test point: g0 = int_Q G dS,
            // g1 = int_Q y G dS.
            let mut g0 = vec![Complex64::default(); test_pts.len()];
            let mut g1 = vec![CVec3::ZERO; test_pts.len()];
            for (qi, tq) in test_pts.iter().enumerate() {
                if near {
                    let (i0, iv) = static_triangle_potentials(&fq.vertices, tq.point);
                    let mut acc0 = Complex64::from(i0 * INV_4PI);
                    let mut acc1 = CVec3::from_real((iv + tq.point * i0) * INV_4PI);
                    for sp in &src_pts {
                        let r = (tq.point - sp.point).norm();
                        let ker = smooth_kernel(k, r) * sp.weight;
                        acc0 += ker;
                        acc1 = acc1 + sp.point * ker;
                    }
                    g0[qi] = acc0;
                    g1[qi] = acc1;
                } else {
                    let mut acc0 = Complex64::default();
                    let mut acc1 = CVec3::ZERO;
                    for sp in &src_pts {
                        let r = (tq.point - sp.point).norm();
                        let ker = full_kernel(k, r) * sp.weight;
                        acc0 += ker;
                        acc1 = acc1 + sp.point * ker;
                    }
                    g0[qi] = acc0;
                    g1[qi] = acc1;
                }
            }

            for &(me, ms) in test_edges {
                let m_edge = &rwg.edges[me];
                let m_free = mesh.vertices[rwg.free_vertex(me, tp)];
                let m_coef = ms * m_edge.length / (2.0 * fp.area);
                let m_div = ms * m_edge.length / fp.area;
                for &(ne, ns) in src_edges {
                    if sq == tp && ne < me {
                        continue; // self block: compute m <= n once, mirror
                    }
                    let n_edge = &rwg.edges[ne];
                    let n_free = mesh.vertices[rwg.free_vertex(ne, sq)];
                    let n_coef = ns * n_edge.length / (2.0 * fq.area);
                    let n_div = ns * n_edge.length / fq.area;

                    let mut vector_part = Complex64::default();
                    let mut scalar_part = Complex64::default();
                    for (qi, tq) in test_pts.iter().enumerate() {
                        // int_Q f_n G = n_coef (g1 - free_n g0)
                        let fm = (tq.point - m_free) * (m_coef * tq.weight);
                        let inner = (g1[qi] - CVec3::from_real(n_free) * g0[qi]) * n_coef;
                        vector_part += CVec3::from_real(fm).dot(inner);
                        scalar_part += g0[qi] * (tq.weight * m_div * n_div);
                    }
                    let val = ik * vector_part - i_over_k * scalar_part;
                    out.push((me as u32, ne as u32, val));
                    // A cross pair contributes through both orderings; when
                    // the same edge lives on both faces the diagonal entry
                    // takes the value twice (the merge only mirrors m != n).
                    if sq != tp && me == ne {
                        out.push((me as u32, ne as u32, val));
                    }
                }
            }
        }
        out
    };

    // Ordered batches keep the merge order fixed, so results are bitwise
    // identical for any thread count.
    const BATCH: usize = 32;
    let mut tp0 = 0;
    while tp0 < n_faces {
        let tp1 = (tp0 + BATCH).min(n_faces);
        let batch: Vec<Vec<Contribution>> = (tp0..tp1).into_par_iter().map(process_test_face).collect();
        for contributions in batch {
            for (m, ncol, val) in contributions {
                let (m, ncol) = (m as usize, ncol as usize);
                z[(m, ncol)] += val;
                if m != ncol {
                    z[(ncol, m)] += val;
                }
            }
        }
        tp0 = tp1;
    }
    z
}

/// Max relative asymmetry of a matrix (diagnostic; the assembly is
/// symmetric by construction).
pub fn symmetry_residual(z: &DMatrix<Complex64>) -> f64 {
    let mut max_entry = 0.0_f64;
    let mut max_diff = 0.0_f64;
    for i in 0..z.nrows() {
        for j in i..z.ncols() {
            max_entry = max_entry.max(z[(i, j)].norm());
            max_diff = max_diff.max((z[(i, j)] - z[(j, i)]).norm());
        }
    }
    if max_entry == 0.0 {
        0.0
    } else {
        max_diff / max_entry
    }
}

/// Surface current expressed in RWG coefficients.
#[derive(Debug, Clone)]
pub struct SurfaceCurrent {
    pub coeffs: DVector<Complex64>,
}

/// Current sampled at source quadrature points; weights folded in.
/// Far-field evaluation over observation grids reduces to phase sums.
#[derive(Debug, Clone)]
pub struct CurrentSamples {
    pub points: Vec<Vec3>,
    /// `w_s J(y_s)`
    pub currents: Vec<CVec3>,
    /// `w_s (div J)(y_s)`
    pub divergences: Vec<Complex64>,
}

/// An assembled and factorized EFIE system over a scene mesh.
pub struct EfieSystem {
    pub mesh: TriMesh,
    pub rwg: RwgBasis,
    pub ctx: WaveContext,
    pub options: AssemblyOptions,
    /// Asymmetry of the assembled matrix (should be exactly 0).
    pub symmetry_residual: f64,
    lu: nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl EfieSystem {
    /// Assembles and factorizes the impedance matrix of the mesh.
    pub fn assemble(mesh: TriMesh, ctx: WaveContext, opts: AssemblyOptions) -> Result<Self, Error> {
        let rwg = RwgBasis::build(&mesh)?;
        let z = assemble_matrix(&mesh, &rwg, ctx, opts);
        let sym = symmetry_residual(&z);
        let lu = z.lu();
        // A vanishing pivot signals an interior resonance or a degenerate mesh.
        let n = lu.u().nrows();
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot = 0.0_f64;
        for i in 0..n {
            let p = lu.u()[(i, i)].norm();
            min_pivot = min_pivot.min(p);
            max_pivot = max_pivot.max(p);
        }
        if min_pivot <= 1e-14 * max_pivot {
            return Err(Error::SingularMatrix(format!(
                "pivot ratio {:.3e}; wavenumber may be an interior Maxwell eigenvalue of a body",
                min_pivot / max_pivot
            )));
        }
        Ok(EfieSystem { mesh, rwg, ctx, options: opts, symmetry_residual: sym, lu })
    }

    pub fn num_unknowns(&self) -> usize {
        self.rwg.len()
    }

    /// Galerkin right-hand side `b_m = <f_m, E^i>` for one plane wave.
    pub fn rhs(&self, d: UnitVector, p: Polarization) -> DVector<Complex64> {
        let mut b = DVector::<Complex64>::zeros(self.rwg.len());
        for f in 0..self.mesh.num_faces() {
            let verts = self.mesh.face_vertices(f);
            let area = self.mesh.face_area(f);
            let pts = gauss_points(&verts, self.options.source_order);
            for &(e, s) in &self.rwg.face_edges[f] {
                let edge = &self.rwg.edges[e];
                let free = self.mesh.vertices[self.rwg.free_vertex(e, f)];
                let coef = s * edge.length / (2.0 * area);
                let mut acc = Complex64::default();
                for q in &pts {
                    let fm = (q.point - free) * (coef * q.weight);
                    acc += incident_electric(q.point, d, p, self.ctx).dot_real(fm);
                }
                b[e] += acc;
            }
        }
        b
    }

    /// Solves for the surface current of one incident plane wave.
    pub fn solve(&self, d: UnitVector, p: Polarization) -> Result<SurfaceCurrent, Error> {
        self.solve_rhs(self.rhs(d, p))
    }

    /// Solves for a superposition of two plane waves in one shot.
    pub fn solve_pair(
        &self,
        d1: UnitVector,
        p1: Polarization,
        d2: UnitVector,
        p2: Polarization,
    ) -> Result<SurfaceCurrent, Error> {
        self.solve_rhs(self.rhs(d1, p1) + self.rhs(d2, p2))
    }

    fn solve_rhs(&self, b: DVector<Complex64>) -> Result<SurfaceCurrent, Error> {
        let coeffs = self
            .lu
            .solve(&(-b))
            .ok_or_else(|| Error::SingularMatrix("LU solve failed".into()))?;
        Ok(SurfaceCurrent { coeffs })
    }

    /// Samples `J` and `div J` at source quadrature points of every face.
    pub fn sample_current(&self, cur: &SurfaceCurrent) -> CurrentSamples {
        let mut points = Vec::new();
        let mut currents = Vec::new();
        let mut divergences = Vec::new();
        for f in 0..self.mesh.num_faces() {
            let verts = self.mesh.face_vertices(f);
            let area = self.mesh.face_area(f);
            let pts = gauss_points(&verts, self.options.source_order);
            for q in &pts {
                let mut j = CVec3::ZERO;
                let mut div = Complex64::default();
                for &(e, s) in &self.rwg.face_edges[f] {
                    let edge = &self.rwg.edges[e];
                    let free = self.mesh.vertices[self.rwg.free_vertex(e, f)];
                    let coef = s * edge.length / (2.0 * area);
                    j = j + (q.point - free) * (cur.coeffs[e] * coef);
                    div += cur.coeffs[e] * (s * edge.length / area);
                }
                points.push(q.point);
                currents.push(j * q.weight);
                divergences.push(div * q.weight);
            }
        }
        CurrentSamples { points, currents, divergences }
    }

    /// Scattered near field `(E^s, H^s)` at an exterior point, by adaptive
    /// quadrature of the potentials of the solved current.
    pub fn near_field(&self, cur: &SurfaceCurrent, x: Vec3) -> Result<(CVec3, CVec3), Error> {
        let min_dist = self.mesh.average_edge_length();
        let k = self.ctx.k();
        let mut e_field = CVec3::ZERO;
        let mut h_field = CVec3::ZERO;
        for f in 0..self.mesh.num_faces() {
            let verts = self.mesh.face_vertices(f);
            let centroid = self.mesh.face_centroid(f);
            let circ = verts.iter().map(|v| (*v - centroid).norm()).fold(0.0, f64::max);
            let dist = (x - centroid).norm() - circ;
            if dist < min_dist {
                return Err(Error::TooClose { distance: dist.max(0.0), minimum: min_dist });
            }
            let area = self.mesh.face_area(f);
            // Linear current on this face and its constant divergence.
            let mut div = Complex64::default();
            let mut lin_a = CVec3::ZERO; // J(y) = lin_a + lin_b * y ... componentwise
            let mut lin_b = Complex64::default();
            for &(e, s) in &self.rwg.face_edges[f] {
                let edge = &self.rwg.edges[e];
                let free = self.mesh.vertices[self.rwg.free_vertex(e, f)];
                let coef = s * edge.length / (2.0 * area);
                lin_a = lin_a - CVec3::from_real(free) * (cur.coeffs[e] * coef);
                lin_b += cur.coeffs[e] * coef;
                div += cur.coeffs[e] * (s * edge.length / area);
            }
            let current_at = |y: Vec3| lin_a + CVec3::from_real(y) * lin_b;

            adaptive_panel(&verts, x, 0, &mut |q| {
                let rv = x - q.point;
                let r = rv.norm();
                let g = full_kernel(k, r) * q.weight;
                // grad_x G = (ikr - 1)/r^2 * G * (x - y)
                let gg = g * Complex64::new(-1.0 / (r * r), k / r);
                let j = current_at(q.point);
                e_field = e_field + j * (Complex64::new(0.0, k) * g) + rv * (gg * div * Complex64::new(0.0, 1.0 / k));
                h_field = h_field + CVec3::from_real(rv).cross(j) * gg;
            });
        }
        Ok((e_field, h_field))
    }

    /// Electric far-field pattern of three basis polarizations for incident
    /// direction `d`; returns the sampled current triple for grid evaluation.
    pub fn solve_basis(&self, d: UnitVector) -> Result<[CurrentSamples; 3], Error> {
        let px = self.solve(d, Polarization::new(Vec3::new(1.0, 0.0, 0.0)))?;
        let py = self.solve(d, Polarization::new(Vec3::new(0.0, 1.0, 0.0)))?;
        let pz = self.solve(d, Polarization::new(Vec3::new(0.0, 0.0, 1.0)))?;
        Ok([self.sample_current(&px), self.sample_current(&py), self.sample_current(&pz)])
    }
}

/// Recursive near-panel subdivision; leaves are 7-point rules.
fn adaptive_panel(v: &[Vec3; 3], x: Vec3, depth: usize, emit: &mut impl FnMut(crate::mesh::QuadPoint)) {
    let centroid = (v[0] + v[1] + v[2]) / 3.0;
    let size = v.iter().map(|p| (*p - centroid).norm()).fold(0.0, f64::max);
    let dist = (x - centroid).norm();
    if depth >= 5 || dist > 4.0 * size {
        for q in gauss_points(v, 7) {
            emit(q);
        }
        return;
    }
    let m01 = (v[0] + v[1]) * 0.5;
    let m12 = (v[1] + v[2]) * 0.5;
    let m20 = (v[2] + v[0]) * 0.5;
    adaptive_panel(&[v[0], m01, m20], x, depth + 1, emit);
    adaptive_panel(&[v[1], m12, m01], x, depth + 1, emit);
    adaptive_panel(&[v[2], m20, m12], x, depth + 1, emit);
    adaptive_panel(&[m01, m12, m20], x, depth + 1, emit);
}

/// Radiated far-field pattern of sampled currents:
/// `E_inf(xhat) = (ik/4pi) (F - xhat (xhat.F))`, `F = int J e^{-ik xhat.y}`.
pub fn far_field_from_currents(samples: &CurrentSamples, xhat: UnitVector, ctx: WaveContext) -> CVec3 {
    let k = ctx.k();
    let mut f = CVec3::ZERO;
    for (p, j) in samples.points.iter().zip(&samples.currents) {
        let phase = Complex64::new(0.0, -k * xhat.vec().dot(*p)).exp();
        f = f + *j * phase;
    }
    let radial = f.dot_real(xhat.vec());
    let tangential = f - CVec3::from_real(xhat.vec()) * radial;
    tangential * Complex64::new(0.0, k * INV_4PI)
}

/// Far-field matrix at `(xhat, d)` from the three basis-polarization
/// current solutions.
pub fn far_field_matrix_from_basis(
    basis: &[CurrentSamples; 3],
    xhat: UnitVector,
    ctx: WaveContext,
) -> crate::farfield::FarFieldMatrix {
    crate::farfield::FarFieldMatrix::from_columns([
        far_field_from_currents(&basis[0], xhat, ctx),
        far_field_from_currents(&basis[1], xhat, ctx),
        far_field_from_currents(&basis[2], xhat, ctx),
    ])
}
