//! Triangulated closed surfaces, icosphere generation, symmetric triangle
//! quadrature, multi-body scene assembly, and RWG edge bases.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::geom::Vec3;
use crate::Error;

/// An indexed triangle mesh, possibly carrying several closed bodies.
#[derive(Debug, Clone)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub triangles: Vec<[usize; 3]>,
    /// One id per triangle; RWG bases never straddle bodies.
    pub body_ids: Vec<u32>,
}

impl TriMesh {
    pub fn num_faces(&self) -> usize {
        self.triangles.len()
    }

    pub fn face_vertices(&self, f: usize) -> [Vec3; 3] {
        let t = self.triangles[f];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.face_vertices(f);
        (b - a).cross(c - a).norm() * 0.5
    }

    pub fn face_centroid(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_vertices(f);
        (a + b + c) / 3.0
    }

    /// Unit normal with the stored winding (outward for valid bodies).
    pub fn face_normal(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_vertices(f);
        let n = (b - a).cross(c - a);
        n / n.norm()
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_faces()).map(|f| self.face_area(f)).sum()
    }

    /// Signed volume of one body via the divergence theorem.
    pub fn body_signed_volume(&self, body: u32) -> f64 {
        let mut vol = 0.0;
        for (f, t) in self.triangles.iter().enumerate() {
            if self.body_ids[f] != body {
                continue;
            }
            let (a, b, c) = (self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]);
            vol += a.dot(b.cross(c)) / 6.0;
        }
        vol
    }

    pub fn num_bodies(&self) -> u32 {
        self.body_ids.iter().copied().max().map_or(0, |m| m + 1)
    }

    /// Representative length scale: average edge length.
    pub fn average_edge_length(&self) -> f64 {
        let mut sum = 0.0;
        let mut count = 0usize;
        for t in &self.triangles {
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                sum += (self.vertices[t[i]] - self.vertices[t[j]]).norm();
                count += 1;
            }
        }
        sum / count as f64
    }

    /// Checks closedness, orientation consistency, outwardness and
    /// non-degeneracy per body.
    pub fn validate(&self) -> Result<(), Error> {
        if self.triangles.len() != self.body_ids.len() {
            return Err(Error::Geometry("body id count differs from face count".into()));
        }
        let scale = self.average_edge_length();
        // Each undirected edge must appear in exactly two faces of the same
        // body, once in each direction.
        let mut edges: HashMap<(usize, usize), (i32, i32, u32)> = HashMap::new();
        for (f, t) in self.triangles.iter().enumerate() {
            if self.face_area(f) <= 1e-12 * scale * scale {
                return Err(Error::Geometry(format!("degenerate triangle {f}")));
            }
            for (i, j) in [(0, 1), (1, 2), (2, 0)] {
                let (a, b) = (t[i], t[j]);
                let key = (a.min(b), a.max(b));
                let entry = edges.entry(key).or_insert((0, 0, self.body_ids[f]));
                if entry.2 != self.body_ids[f] {
                    return Err(Error::Geometry(format!("edge {key:?} shared across bodies")));
                }
                if a < b {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        for (key, (fwd, bwd, _)) in &edges {
            if *fwd != 1 || *bwd != 1 {
                return Err(Error::Geometry(format!(
                    "edge {key:?} seen {fwd}+{bwd} times; surface not closed/orientable"
                )));
            }
        }
        for body in 0..self.num_bodies() {
            if self.body_signed_volume(body) <= 0.0 {
                return Err(Error::Geometry(format!("body {body} not outward oriented")));
            }
        }
        Ok(())
    }
}

/// Recursively subdivided icosahedron projected onto the sphere:
/// `20 * 4^s` triangles.
pub fn icosphere(center: Vec3, radius: f64, subdivisions: usize) -> Result<TriMesh, Error> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Geometry(format!("icosphere radius must be positive, got {radius}")));
    }
    if subdivisions > 6 {
        return Err(Error::Geometry(format!("subdivision level {subdivisions} exceeds 6")));
    }
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut vertices: Vec<Vec3> = [
        (-1.0, phi, 0.0),
        (1.0, phi, 0.0),
        (-1.0, -phi, 0.0),
        (1.0, -phi, 0.0),
        (0.0, -1.0, phi),
        (0.0, 1.0, phi),
        (0.0, -1.0, -phi),
        (0.0, 1.0, -phi),
        (phi, 0.0, -1.0),
        (phi, 0.0, 1.0),
        (-phi, 0.0, -1.0),
        (-phi, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| {
        let v = Vec3::new(x, y, z);
        v / v.norm()
    })
    .collect();

    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for t in &triangles {
            let mut mid = [0usize; 3];
            for (e, (i, j)) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])].iter().enumerate() {
                let key = (*i.min(j), *i.max(j));
                mid[e] = *midpoint.entry(key).or_insert_with(|| {
                    let m = (vertices[*i] + vertices[*j]) * 0.5;
                    vertices.push(m / m.norm());
                    vertices.len() - 1
                });
            }
            next.push([t[0], mid[0], mid[2]]);
            next.push([t[1], mid[1], mid[0]]);
            next.push([t[2], mid[2], mid[1]]);
            next.push([mid[0], mid[1], mid[2]]);
        }
        triangles = next;
    }

    let vertices = vertices.into_iter().map(|v| center + v * radius).collect();
    let body_ids = vec![0; triangles.len()];
    Ok(TriMesh { vertices, triangles, body_ids })
}

/// Bounding sphere of one body (centroid of vertices, max distance).
fn body_bounding_sphere(mesh: &TriMesh, body: u32) -> (Vec3, f64) {
    let mut used = vec![false; mesh.vertices.len()];
    for (f, t) in mesh.triangles.iter().enumerate() {
        if mesh.body_ids[f] == body {
            for &v in t {
                used[v] = true;
            }
        }
    }
    let pts: Vec<Vec3> = mesh
        .vertices
        .iter()
        .zip(&used)
        .filter_map(|(&v, &u)| u.then_some(v))
        .collect();
    let mut c = Vec3::ZERO;
    for &p in &pts {
        c = c + p;
    }
    c = c / pts.len() as f64;
    let r = pts.iter().map(|p| (*p - c).norm()).fold(0.0, f64::max);
    (c, r)
}

/// Concatenates meshes into one scene with distinct body ids.
///
/// Bodies must be pairwise disjoint; bounding spheres are required to keep a
/// positive gap.
pub fn merge_scene(meshes: &[TriMesh]) -> Result<TriMesh, Error> {
    if meshes.is_empty() {
        return Err(Error::Geometry("cannot merge an empty scene".into()));
    }
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    let mut body_ids = Vec::new();
    let mut body_offset = 0u32;
    for mesh in meshes {
        let vertex_offset = vertices.len();
        vertices.extend_from_slice(&mesh.vertices);
        for t in &mesh.triangles {
            triangles.push([t[0] + vertex_offset, t[1] + vertex_offset, t[2] + vertex_offset]);
        }
        for &b in &mesh.body_ids {
            body_ids.push(b + body_offset);
        }
        body_offset += mesh.num_bodies();
    }
    let merged = TriMesh { vertices, triangles, body_ids };
    let n_bodies = merged.num_bodies();
    let spheres: Vec<(Vec3, f64)> = (0..n_bodies).map(|b| body_bounding_sphere(&merged, b)).collect();
    let scale = merged.average_edge_length();
    for i in 0..spheres.len() {
        for j in (i + 1)..spheres.len() {
            let gap = (spheres[i].0 - spheres[j].0).norm() - spheres[i].1 - spheres[j].1;
            if gap <= 1e-6 * scale {
                return Err(Error::Overlap(format!(
                    "bodies {i} and {j} have bounding-sphere gap {gap:.3e}"
                )));
            }
        }
    }
    Ok(merged)
}

/// Weighted quadrature point on a triangle.
#[derive(Debug, Clone, Copy)]
pub struct QuadPoint {
    pub point: Vec3,
    /// Weight including the triangle area (weights sum to the area).
    pub weight: f64,
}

/// Symmetric Gauss rules on a triangle; `order` is the point count in
/// {1, 3, 4, 7} (polynomial degrees 1, 2, 3, 5).
pub fn gauss_points(v: &[Vec3; 3], order: usize) -> Vec<QuadPoint> {
    let area = (v[1] - v[0]).cross(v[2] - v[0]).norm() * 0.5;
    let bary: &[(f64, f64, f64, f64)] = match order {
        1 => &[(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0)],
        3 => &[
            (2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0),
            (1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0),
            (1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0),
        ],
        4 => &[
            (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, -27.0 / 48.0),
            (0.6, 0.2, 0.2, 25.0 / 48.0),
            (0.2, 0.6, 0.2, 25.0 / 48.0),
            (0.2, 0.2, 0.6, 25.0 / 48.0),
        ],
        7 => &[
            (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225),
            (0.059_715_871_789_770, 0.470_142_064_105_115, 0.470_142_064_105_115, 0.132_394_152_788_506),
            (0.470_142_064_105_115, 0.059_715_871_789_770, 0.470_142_064_105_115, 0.132_394_152_788_506),
            (0.470_142_064_105_115, 0.470_142_064_105_115, 0.059_715_871_789_770, 0.132_394_152_788_506),
            (0.797_426_985_353_087, 0.101_286_507_323_456, 0.101_286_507_323_456, 0.125_939_180_544_827),
            (0.101_286_507_323_456, 0.797_426_985_353_087, 0.101_286_507_323_456, 0.125_939_180_544_827),
            (0.101_286_507_323_456, 0.101_286_507_323_456, 0.797_426_985_353_087, 0.125_939_180_544_827),
        ],
        _ => panic!("unsupported triangle quadrature order {order} (use 1, 3, 4, or 7)"),
    };
    bary.iter()
        .map(|&(l1, l2, l3, w)| QuadPoint {
            point: v[0] * l1 + v[1] * l2 + v[2] * l3,
            weight: w * area,
        })
        .collect()
}

/// One RWG basis function: an interior edge with its two adjacent faces.
#[derive(Debug, Clone)]
pub struct RwgEdge {
    /// Edge endpoint vertex indices.
    pub v0: usize,
    pub v1: usize,
    pub plus_face: usize,
    pub minus_face: usize,
    /// Free (opposite) vertex index on each side.
    pub plus_free: usize,
    pub minus_free: usize,
    pub length: f64,
}

/// Divergence-conforming RWG basis over all interior edges of a mesh.
#[derive(Debug, Clone)]
pub struct RwgBasis {
    pub edges: Vec<RwgEdge>,
    /// For each face, the (edge index, sign) pairs it supports.
    pub face_edges: Vec<Vec<(usize, f64)>>,
}

impl RwgBasis {
    pub fn build(mesh: &TriMesh) -> Result<RwgBasis, Error> {
        mesh.validate()?;
        let mut by_edge: HashMap<(usize, usize), Vec<(usize, usize)>> = HashMap::new();
        for (f, t) in mesh.triangles.iter().enumerate() {
            for (i, j, opp) in [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])] {
                let key = (i.min(j), i.max(j));
                by_edge.entry(key).or_default().push((f, opp));
            }
        }
        let mut keys: Vec<(usize, usize)> = by_edge.keys().copied().collect();
        keys.sort_unstable();
        let mut edges = Vec::with_capacity(keys.len());
        let mut face_edges = vec![Vec::new(); mesh.num_faces()];
        for key in keys {
            let adj = &by_edge[&key];
            if adj.len() != 2 {
                return Err(Error::Geometry(format!("edge {key:?} has {} adjacent faces", adj.len())));
            }
            // Deterministic orientation: the lower face index is the plus side.
            let (mut plus, mut minus) = (adj[0], adj[1]);
            if plus.0 > minus.0 {
                std::mem::swap(&mut plus, &mut minus);
            }
            let length = (mesh.vertices[key.0] - mesh.vertices[key.1]).norm();
            let idx = edges.len();
            face_edges[plus.0].push((idx, 1.0));
            face_edges[minus.0].push((idx, -1.0));
            edges.push(RwgEdge {
                v0: key.0,
                v1: key.1,
                plus_face: plus.0,
                minus_face: minus.0,
                plus_free: plus.1,
                minus_free: minus.1,
                length,
            });
        }
        Ok(RwgBasis { edges, face_edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The free vertex of edge `e` on the side of face `f` (which must be
    /// one of its two adjacent faces).
    pub fn free_vertex(&self, e: usize, f: usize) -> usize {
        let edge = &self.edges[e];
        if edge.plus_face == f {
            edge.plus_free
        } else {
            debug_assert_eq!(edge.minus_face, f);
            edge.minus_free
        }
    }
}

/// Writes the mesh in the plain-text OFF format. Face lines carry the body
/// id as a trailing integer attribute.
pub fn write_off<W: Write>(mesh: &TriMesh, mut w: W) -> std::io::Result<()> {
    writeln!(w, "OFF")?;
    writeln!(w, "{} {} 0", mesh.vertices.len(), mesh.triangles.len())?;
    for v in &mesh.vertices {
        writeln!(w, "{} {} {}", v.x, v.y, v.z)?;
    }
    for (t, &b) in mesh.triangles.iter().zip(&mesh.body_ids) {
        writeln!(w, "3 {} {} {} {}", t[0], t[1], t[2], b)?;
    }
    Ok(())
}

/// Reads a mesh written by [`write_off`]; plain OFF files without the
/// trailing body attribute load as a single body.
pub fn read_off<R: BufRead>(r: R) -> Result<TriMesh, Error> {
    let bad = Error::Config;
    let mut lines = r
        .lines()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| bad(format!("io error: {e}")))?
        .into_iter()
        .map(|l| l.trim().to_string())
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| bad("empty OFF file".to_string()))?;
    if header != "OFF" {
        return Err(bad(format!("expected OFF header, got {header:?}")));
    }
    let counts = lines.next().ok_or_else(|| bad("missing counts line".to_string()))?;
    let c: Vec<usize> = counts
        .split_whitespace()
        .map(|t| t.parse().map_err(|e| bad(format!("bad count {t:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    if c.len() < 2 {
        return Err(bad("counts line needs at least vertex and face counts".to_string()));
    }
    let (nv, nf) = (c[0], c[1]);
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let line = lines.next().ok_or_else(|| bad(format!("missing vertex line {i}")))?;
        let xyz: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| bad(format!("bad coordinate {t:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        if xyz.len() != 3 {
            return Err(bad(format!("vertex line {i} has {} fields", xyz.len())));
        }
        vertices.push(Vec3::new(xyz[0], xyz[1], xyz[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    let mut body_ids = Vec::with_capacity(nf);
    for i in 0..nf {
        let line = lines.next().ok_or_else(|| bad(format!("missing face line {i}")))?;
        let f: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| bad(format!("bad face index {t:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        if f.len() < 4 || f[0] != 3 {
            return Err(bad(format!("face line {i} is not a triangle: {line:?}")));
        }
        let tri = [f[1] as usize, f[2] as usize, f[3] as usize];
        if tri.iter().any(|&v| v >= nv) {
            return Err(bad(format!("face line {i} references vertex out of range")));
        }
        triangles.push(tri);
        body_ids.push(if f.len() > 4 { f[4] as u32 } else { 0 });
    }
    Ok(TriMesh { vertices, triangles, body_ids })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn icosahedron_counts() {
        let m = icosphere(Vec3::ZERO, 1.0, 0).unwrap();
        assert_eq!(m.num_faces(), 20);
        assert_eq!(m.vertices.len(), 12);
        m.validate().unwrap();
    }

    #[test]
    fn subdivided_counts() {
        let m = icosphere(Vec3::ZERO, 1.0, 2).unwrap();
        assert_eq!(m.num_faces(), 320);
        assert_eq!(m.vertices.len(), 162); // V = 2 + F/2
        m.validate().unwrap();
        // Euler characteristic and edge count.
        let rwg = RwgBasis::build(&m).unwrap();
        assert_eq!(rwg.len(), 3 * m.num_faces() / 2);
        let euler = m.vertices.len() as i64 - rwg.len() as i64 + m.num_faces() as i64;
        assert_eq!(euler, 2);
    }

    /// Geometric convergence oracle: inscribed polyhedral area approaches
    /// the sphere area from below.
    #[test]
    fn area_converges_to_sphere() {
        let r = 1.7;
        let m = icosphere(Vec3::new(0.3, -0.2, 0.5), r, 4).unwrap();
        let exact = 4.0 * std::f64::consts::PI * r * r;
        let rel = (m.total_area() - exact).abs() / exact;
        assert!(rel < 1.3e-3, "area error {rel}");
        assert!(m.total_area() < exact);
    }

    #[test]
    fn merge_keeps_bodies_and_counts() {
        let a = icosphere(Vec3::ZERO, 1.0, 1).unwrap();
        let b = icosphere(Vec3::new(3.0, 0.0, 0.0), 1.0, 1).unwrap();
        let ea = RwgBasis::build(&a).unwrap().len();
        let eb = RwgBasis::build(&b).unwrap().len();
        let merged = merge_scene(&[a.clone(), b]).unwrap();
        assert_eq!(merged.num_bodies(), 2);
        merged.validate().unwrap();
        let rwg = RwgBasis::build(&merged).unwrap();
        assert_eq!(rwg.len(), ea + eb);
        // one body is the identity merge
        let single = merge_scene(&[a.clone()]).unwrap();
        assert_eq!(single.num_faces(), a.num_faces());
    }

    #[test]
    fn merge_rejects_overlap() {
        let a = icosphere(Vec3::ZERO, 1.0, 1).unwrap();
        let b = icosphere(Vec3::new(1.5, 0.0, 0.0), 1.0, 1).unwrap();
        assert!(matches!(merge_scene(&[a, b]), Err(Error::Overlap(_))));
    }

    #[test]
    fn quadrature_partition_of_unity() {
        let m = icosphere(Vec3::ZERO, 1.3, 2).unwrap();
        for order in [1usize, 3, 4, 7] {
            let mut total = 0.0;
            for f in 0..m.num_faces() {
                let vs = m.face_vertices(f);
                for q in gauss_points(&vs, order) {
                    total += q.weight;
                }
            }
            assert_relative_eq!(total, m.total_area(), max_relative = 1e-14);
        }
    }

    #[test]
    fn quadrature_centroid_symmetry() {
        // integral of x over a sphere mesh centered at c equals c * area.
        let c = Vec3::new(0.4, -1.0, 2.0);
        let m = icosphere(c, 0.9, 2).unwrap();
        let mut moment = Vec3::ZERO;
        for f in 0..m.num_faces() {
            let vs = m.face_vertices(f);
            for q in gauss_points(&vs, 4) {
                moment = moment + q.point * q.weight;
            }
        }
        let expected = c * m.total_area();
        assert!((moment - expected).norm() < 1e-12 * m.total_area());
    }

    #[test]
    fn quadrature_order_1_is_centroid() {
        let vs = [Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        let q = gauss_points(&vs, 1);
        assert_eq!(q.len(), 1);
        assert_abs_diff_eq!(q[0].weight, 0.5, epsilon = 1e-15);
        assert!((q[0].point - Vec3::new(1.0 / 3.0, 1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    /// Polynomial exactness of the 4-point and 7-point rules.
    #[test]
    fn quadrature_degree() {
        let vs = [Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)];
        // integral of x^2 y over the unit right triangle = 1/60
        let exact = 1.0 / 60.0;
        let num: f64 = gauss_points(&vs, 4)
            .iter()
            .map(|q| q.weight * q.point.x * q.point.x * q.point.y)
            .sum();
        assert_relative_eq!(num, exact, max_relative = 1e-14);
        // degree-5 monomial x^3 y^2: 3! 2! / 7! = 1/420
        let exact5 = 1.0 / 420.0;
        let num5: f64 = gauss_points(&vs, 7)
            .iter()
            .map(|q| q.weight * q.point.x.powi(3) * q.point.y.powi(2))
            .sum();
        assert_relative_eq!(num5, exact5, max_relative = 1e-12);
    }

    #[test]
    fn rwg_orientation_and_normals() {
        let m = icosphere(Vec3::ZERO, 1.0, 1).unwrap();
        let rwg = RwgBasis::build(&m).unwrap();
        for e in &rwg.edges {
            assert_ne!(e.plus_face, e.minus_face);
            assert!(e.length > 0.0);
            // free vertices are not edge endpoints
            assert!(e.plus_free != e.v0 && e.plus_free != e.v1);
            assert!(e.minus_free != e.v0 && e.minus_free != e.v1);
        }
        // all normals point outward for the unit sphere at the origin
        for f in 0..m.num_faces() {
            assert!(m.face_normal(f).dot(m.face_centroid(f)) > 0.0);
        }
    }

    #[test]
    fn off_roundtrip() {
        let a = icosphere(Vec3::ZERO, 1.0, 1).unwrap();
        let b = icosphere(Vec3::new(4.0, 0.0, 0.0), 0.5, 1).unwrap();
        let m = merge_scene(&[a, b]).unwrap();
        let mut buf = Vec::new();
        write_off(&m, &mut buf).unwrap();
        let back = read_off(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(back.num_faces(), m.num_faces());
        assert_eq!(back.body_ids, m.body_ids);
        assert_eq!(back.num_bodies(), 2);
        for (v, w) in back.vertices.iter().zip(&m.vertices) {
            assert!((*v - *w).norm() < 1e-15);
        }
        back.validate().unwrap();
    }

    #[test]
    fn off_rejects_malformed() {
        assert!(read_off(std::io::Cursor::new(b"not off\n1 1 0\n".as_slice())).is_err());
        assert!(read_off(std::io::Cursor::new(b"OFF\n1 1 0\n0 0 0\n3 0 0 5\n".as_slice())).is_err());
    }
}
