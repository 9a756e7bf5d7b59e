//! Scene descriptions shared by the verification harness, the inverse
//! solver, and the command-line front end: obstacles, the optional
//! reference ball, incident-wave sets, and the end-to-end computation of
//! phaseless far-field records.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::efie::{far_field_matrix_from_basis, AssemblyOptions, EfieSystem};
use crate::farfield::{FarFieldMatrix, FrameComponent, MeasurementGrid, PhaselessRecord};
use crate::geom::{UnitVector, Vec3};
use crate::mesh::{icosphere, merge_scene, TriMesh};
use crate::mie::{self, BoundaryKind, SphereObstacle};
use crate::specfun::{default_scan_order, maxwell_eigenvalue_free, EigenvalueFreeReport};
use crate::wave::{Polarization, WaveContext};
use crate::Error;

/// A known perfectly conducting reference ball added to the scene.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBall {
    pub center: Vec3,
    pub radius: f64,
}

/// One incident excitation: a superposition of two plane waves.
/// Single-wave experiments set `p2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidentPair {
    pub d1: UnitVector,
    pub d2: UnitVector,
    pub p1: Polarization,
    pub p2: Polarization,
}

impl IncidentPair {
    pub fn single(d: UnitVector, p: Polarization) -> Self {
        IncidentPair { d1: d, d2: d, p1: p, p2: Polarization::new(Vec3::ZERO) }
    }

    pub fn is_single_wave(&self) -> bool {
        self.p2.vec().norm() == 0.0 || self.p1.vec().norm() == 0.0 || self.d1 == self.d2
    }
}

/// Forward-solver selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SolverSpec {
    /// Analytic series; single sphere, no reference ball.
    Mie,
    /// Boundary-integral solver on icosphere meshes; PEC bodies only.
    Efie {
        subdivisions: usize,
        #[serde(default = "default_test_order")]
        test_order: usize,
        #[serde(default = "default_source_order")]
        source_order: usize,
    },
}

fn default_test_order() -> usize {
    3
}

fn default_source_order() -> usize {
    4
}

impl SolverSpec {
    pub fn efie(subdivisions: usize) -> Self {
        SolverSpec::Efie { subdivisions, test_order: 3, source_order: 4 }
    }

    pub fn assembly_options(&self) -> AssemblyOptions {
        match *self {
            SolverSpec::Mie => AssemblyOptions::default(),
            SolverSpec::Efie { test_order, source_order, .. } => AssemblyOptions {
                test_order,
                source_order,
                ..AssemblyOptions::default()
            },
        }
    }
}

/// A scattering scene: obstacles, optional reference ball, and the
/// containment ball radius of the uniqueness setup.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scene {
    pub ctx: WaveContext,
    pub obstacles: Vec<SphereObstacle>,
    pub reference_ball: Option<ReferenceBall>,
    /// Radius of the origin-centered ball containing all obstacles.
    pub containment_radius: f64,
}

impl Scene {
    pub fn new(
        ctx: WaveContext,
        obstacles: Vec<SphereObstacle>,
        reference_ball: Option<ReferenceBall>,
        containment_radius: f64,
    ) -> Result<Self, Error> {
        let scene = Scene { ctx, obstacles, reference_ball, containment_radius };
        scene.validate()?;
        Ok(scene)
    }

    /// Checks the geometric hypotheses: obstacles inside the containment
    /// ball, pairwise disjoint, and the reference ball disjoint from it.
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.containment_radius > 0.0) {
            return Err(Error::Config("containment radius must be positive".into()));
        }
        for (i, s) in self.obstacles.iter().enumerate() {
            s.bc.validate()?;
            if s.center.norm() + s.radius > self.containment_radius * (1.0 + 1e-12) {
                return Err(Error::Geometry(format!(
                    "obstacle {i} leaves the containment ball (|c| + r = {} > {})",
                    s.center.norm() + s.radius,
                    self.containment_radius
                )));
            }
            for (j, t) in self.obstacles.iter().enumerate().skip(i + 1) {
                if (s.center - t.center).norm() <= s.radius + t.radius {
                    return Err(Error::Overlap(format!("obstacles {i} and {j} intersect")));
                }
            }
        }
        if let Some(ball) = &self.reference_ball {
            if !(ball.radius > 0.0) {
                return Err(Error::Config("reference ball radius must be positive".into()));
            }
            // closure(B) and closure(B_R) must be disjoint
            if ball.center.norm() - ball.radius <= self.containment_radius {
                return Err(Error::Geometry(format!(
                    "reference ball intersects the containment ball (|c| - r = {} <= {})",
                    ball.center.norm() - ball.radius,
                    self.containment_radius
                )));
            }
        }
        Ok(())
    }

    /// Admissibility of the reference ball: the wavenumber must not be a
    /// Maxwell eigenvalue of it.
    pub fn ball_admissibility(&self) -> Option<Result<EigenvalueFreeReport, Error>> {
        self.reference_ball.map(|b| {
            maxwell_eigenvalue_free(self.ctx, b.radius, default_scan_order(self.ctx.k() * b.radius))
        })
    }

    /// Sanity warnings for EFIE runs: spherical bodies whose radius sits
    /// near an interior Maxwell eigenvalue make the EFIE ill-conditioned.
    pub fn resonance_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        let mut check = |label: String, radius: f64| {
            if let Ok(rep) =
                maxwell_eigenvalue_free(self.ctx, radius, default_scan_order(self.ctx.k() * radius))
            {
                if !rep.admissible {
                    warnings.push(format!(
                        "{label}: kr = {:.6} has eigenvalue-criterion margin {:.3e} (order {}, {:?})",
                        rep.kr, rep.margin, rep.critical_order, rep.critical_kind
                    ));
                }
            }
        };
        for (i, s) in self.obstacles.iter().enumerate() {
            check(format!("obstacle {i}"), s.radius);
        }
        if let Some(b) = &self.reference_ball {
            check("reference ball".into(), b.radius);
        }
        warnings
    }

    /// Builds the merged scene mesh for the EFIE path.
    pub fn build_mesh(&self, subdivisions: usize) -> Result<TriMesh, Error> {
        let mut meshes = Vec::new();
        for s in &self.obstacles {
            if s.bc != BoundaryKind::Pec {
                return Err(Error::Config(
                    "the boundary-integral path handles perfectly conducting bodies only".into(),
                ));
            }
            meshes.push(icosphere(s.center, s.radius, subdivisions)?);
        }
        if let Some(b) = &self.reference_ball {
            meshes.push(icosphere(b.center, b.radius, subdivisions)?);
        }
        merge_scene(&meshes)
    }
}

/// Far-field matrices of one scene sampled over a grid for a set of
/// incident directions: `cells[i][g]` is the pattern at grid point `g` for
/// incident direction `i`.
pub struct FarFieldData {
    pub directions: Vec<UnitVector>,
    pub cells: Vec<Vec<FarFieldMatrix>>,
}

impl FarFieldData {
    pub fn direction_index(&self, d: UnitVector) -> Result<usize, Error> {
        self.directions
            .iter()
            .position(|&x| (x.vec() - d.vec()).norm() < 1e-14)
            .ok_or_else(|| Error::GridMismatch("incident direction not in the solved set".into()))
    }
}

fn unique_directions(incidents: &[IncidentPair]) -> Vec<UnitVector> {
    let mut dirs: Vec<UnitVector> = Vec::new();
    for pair in incidents {
        for d in [pair.d1, pair.d2] {
            if !dirs.iter().any(|&x| (x.vec() - d.vec()).norm() < 1e-14) {
                dirs.push(d);
            }
        }
    }
    dirs
}

/// Solves the scene for every unique incident direction and samples the
/// full far-field matrix over the grid.
pub fn compute_far_field_data(
    scene: &Scene,
    incidents: &[IncidentPair],
    grid: &MeasurementGrid,
    solver: SolverSpec,
) -> Result<FarFieldData, Error> {
    scene.validate()?;
    let directions = unique_directions(incidents);
    match solver {
        SolverSpec::Mie => {
            if scene.obstacles.len() != 1 || scene.reference_ball.is_some() {
                return Err(Error::Config(
                    "the analytic path needs exactly one sphere and no reference ball".into(),
                ));
            }
            let s = &scene.obstacles[0];
            let ka = scene.ctx.k() * s.radius;
            let coeffs = mie::mie_coefficients(s, scene.ctx, mie::truncation_order(ka))?;
            let cells = directions
                .par_iter()
                .map(|&d| {
                    grid.points()
                        .iter()
                        .map(|pt| {
                            let at_origin = mie::far_field_matrix(&coeffs, pt.direction, d);
                            mie::translated_far_field(&at_origin, pt.direction, d, s.center, scene.ctx)
                        })
                        .collect()
                })
                .collect();
            Ok(FarFieldData { directions, cells })
        }
        SolverSpec::Efie { subdivisions, .. } => {
            let mesh = scene.build_mesh(subdivisions)?;
            let sys = EfieSystem::assemble(mesh, scene.ctx, solver.assembly_options())?;
            let mut cells = Vec::with_capacity(directions.len());
            for &d in &directions {
                let basis = sys.solve_basis(d)?;
                let row: Vec<FarFieldMatrix> = grid
                    .points()
                    .par_iter()
                    .map(|pt| far_field_matrix_from_basis(&basis, pt.direction, scene.ctx))
                    .collect();
                cells.push(row);
            }
            Ok(FarFieldData { directions, cells })
        }
    }
}

/// Generates the full phaseless record set: grid x incident pair x both
/// tangential components, in deterministic order (grid-major, then incident
/// index, then phi before theta).
pub fn compute_phaseless_records(
    scene: &Scene,
    incidents: &[IncidentPair],
    grid: &MeasurementGrid,
    solver: SolverSpec,
) -> Result<Vec<PhaselessRecord>, Error> {
    let data = compute_far_field_data(scene, incidents, grid, solver)?;
    phaseless_records_from_data(&data, incidents, grid)
}

/// Assembles phaseless records from precomputed far-field data.
pub fn phaseless_records_from_data(
    data: &FarFieldData,
    incidents: &[IncidentPair],
    grid: &MeasurementGrid,
) -> Result<Vec<PhaselessRecord>, Error> {
    let mut records = Vec::with_capacity(grid.len() * incidents.len() * 2);
    let pair_indices: Vec<(usize, usize)> = incidents
        .iter()
        .map(|p| Ok((data.direction_index(p.d1)?, data.direction_index(p.d2)?)))
        .collect::<Result<_, Error>>()?;
    for (g, pt) in grid.points().iter().enumerate() {
        for (pair, &(i1, i2)) in incidents.iter().zip(&pair_indices) {
            for component in FrameComponent::BOTH {
                let e_m = component.select(&pt.frame).vec();
                let total = data.cells[i1][g].apply(pair.p1.vec()) + data.cells[i2][g].apply(pair.p2.vec());
                records.push(PhaselessRecord {
                    angles: pt.angles,
                    d1: pair.d1,
                    d2: pair.d2,
                    p1: pair.p1,
                    p2: pair.p2,
                    component,
                    value: total.dot_real(e_m).norm(),
                });
            }
        }
    }
    Ok(records)
}

/// The default incident set used by the verification and reconstruction
/// experiments: six direction pairs with two polarization pairs each.
pub fn default_incident_set() -> Vec<IncidentPair> {
    let dirs = [
        (UnitVector::PLUS_Z, UnitVector::PLUS_X),
        (UnitVector::PLUS_Z, UnitVector::PLUS_Y),
        (UnitVector::PLUS_X, UnitVector::PLUS_Y),
    ];
    let mut out = Vec::new();
    for (d1, d2) in dirs {
        let p1a = d1.any_orthogonal();
        let p1b = UnitVector::normalize(d1.vec().cross(p1a.vec())).unwrap();
        let p2a = d2.any_orthogonal();
        let p2b = UnitVector::normalize(d2.vec().cross(p2a.vec())).unwrap();
        out.push(IncidentPair { d1, d2, p1: Polarization::new(p1a.vec()), p2: Polarization::new(p2a.vec()) });
        out.push(IncidentPair { d1, d2, p1: Polarization::new(p1b.vec()), p2: Polarization::new(p2b.vec()) });
    }
    out
}

/// L-infinity and L2 distances between two record sets on the same index
/// set, plus the maximum record magnitude for scale.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RecordDistance {
    pub l_inf: f64,
    pub l2: f64,
    pub max_value: f64,
}

pub fn record_distance(a: &[PhaselessRecord], b: &[PhaselessRecord]) -> Result<RecordDistance, Error> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("record counts {} vs {}", a.len(), b.len())));
    }
    let mut l_inf = 0.0_f64;
    let mut l2 = 0.0_f64;
    let mut max_value = 0.0_f64;
    for (ra, rb) in a.iter().zip(b) {
        if (ra.angles.theta - rb.angles.theta).abs() > 1e-12
            || (ra.angles.phi - rb.angles.phi).abs() > 1e-12
            || ra.component != rb.component
        {
            return Err(Error::GridMismatch("record index sets differ".into()));
        }
        let d = (ra.value - rb.value).abs();
        l_inf = l_inf.max(d);
        l2 += d * d;
        max_value = max_value.max(ra.value.abs().max(rb.value.abs()));
    }
    Ok(RecordDistance { l_inf, l2: l2.sqrt(), max_value })
}

/// Unimodular translation factor `e^{ik (d - xhat) . z}`.
pub fn translation_phase(xhat: UnitVector, d: UnitVector, z: Vec3, ctx: WaveContext) -> Complex64 {
    Complex64::new(0.0, ctx.k() * (d.vec() - xhat.vec()).dot(z)).exp()
}
