//! Euclidean geometry of inversive distance packings: edge lengths,
//! discriminants, per-face angles, the orthogonal circle, signed distances to
//! the power center, and planar development of a hinge.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::mesh::{Hinge, SplitEdge, Triangulation};

/// Inversive distances in `(1, 1 + BOUNDARY_EPS]` count as tangent.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// Whether inversive distances at or next to the tangency limit `I = 1` are
/// admitted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMode {
    #[default]
    Strict,
    /// Admits `I ∈ [1, 1 + BOUNDARY_EPS]`, for limit probes only.
    Tolerant,
}

/// Checks an inversive distance against the admissible range of `mode`.
pub fn check_inversive_distance(what: &'static str, value: f64, mode: BoundaryMode) -> Result<f64> {
    let ok = match mode {
        BoundaryMode::Strict => value > 1.0 + BOUNDARY_EPS,
        BoundaryMode::Tolerant => value >= 1.0,
    };
    if ok && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain { what, value })
    }
}

/// `(l² − r1² − r2²) / (2 r1 r2)`; the caller decides whether the result is
/// admissible.
pub fn inversive_distance(l: f64, r1: f64, r2: f64) -> Result<f64> {
    check_positive("length", l)?;
    check_positive("radius", r1)?;
    check_positive("radius", r2)?;
    Ok((l * l - r1 * r1 - r2 * r2) / (2.0 * r1 * r2))
}

/// Distance between the centers of two circles with inversive distance `i`.
pub fn edge_length(i: f64, r1: f64, r2: f64, mode: BoundaryMode) -> Result<f64> {
    check_inversive_distance("inversive distance", i, mode)?;
    check_positive("radius", r1)?;
    check_positive("radius", r2)?;
    Ok(length_unchecked(i, r1, r2))
}

#[inline]
pub(crate) fn length_unchecked(i: f64, r1: f64, r2: f64) -> f64 {
    (r1 * r1 + r2 * r2 + 2.0 * i * r1 * r2).sqrt()
}

/// `Δ_abc = a² + b² + c² + 2abc − 1`.
#[inline]
pub fn discriminant(a: f64, b: f64, c: f64) -> f64 {
    a * a + b * b + c * c + 2.0 * a * b * c - 1.0
}

/// Area by the sorted form of Heron's formula. Returns the triangle
/// inequality slack `y + z − x` (largest side `x`) on failure.
pub fn heron_area(l0: f64, l1: f64, l2: f64) -> std::result::Result<f64, f64> {
    let mut s = [l0, l1, l2];
    s.sort_by(|a, b| b.total_cmp(a));
    let [x, y, z] = s;
    let gap = z - (x - y);
    if !(gap > 0.0) {
        return Err((y + z) - x);
    }
    let prod = (x + (y + z)) * gap * (z + (x - y)) * (x + (y - z));
    Ok(0.25 * prod.sqrt())
}

/// Geometry of one face `f_ijk`, indexed by corner (0 = i, 1 = j, 2 = k).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleGeometry {
    /// `lengths[c]` is the side opposite corner `c`.
    pub lengths: [f64; 3],
    pub angles: [f64; 3],
    pub area: f64,
    /// Radius of the circle orthogonal to the three vertex circles.
    pub ortho_radius: f64,
    /// `dual[c]` is the signed distance from the power center to the side
    /// opposite `c`, positive on the side of corner `c`.
    pub dual: [f64; 3],
    pub discriminant: f64,
}

/// Geometry of a triangle with corner radii `r = [r_i, r_j, r_k]` and
/// inversive distances `inv = [I_jk, I_ki, I_ij]` (each opposite its corner).
pub fn triangle_geometry(inv: [f64; 3], r: [f64; 3]) -> Result<TriangleGeometry> {
    for &x in &inv {
        check_inversive_distance("inversive distance", x, BoundaryMode::Strict)?;
    }
    for &x in &r {
        check_positive("radius", x)?;
    }
    triangle_geometry_unchecked(inv, r)
}

pub(crate) fn triangle_geometry_unchecked(inv: [f64; 3], r: [f64; 3]) -> Result<TriangleGeometry> {
    let lengths = [0, 1, 2].map(|c| length_unchecked(inv[c], r[(c + 1) % 3], r[(c + 2) % 3]));
    let area = heron_area(lengths[0], lengths[1], lengths[2])
        .map_err(|slack| Error::TriangleInequalityViolated { face: None, slack })?;
    let sq = lengths.map(|l| l * l);
    let angles = [0, 1, 2].map(|c| {
        let (a, b) = ((c + 1) % 3, (c + 2) % 3);
        (4.0 * area).atan2(sq[a] + sq[b] - sq[c])
    });
    let disc = discriminant(inv[0], inv[1], inv[2]);
    let ortho_radius = r[0] * r[1] * r[2] * disc.sqrt() / (2.0 * area);
    // Side opposite corner c joins corners a and b.
    let dual = [0, 1, 2].map(|c| {
        let (a, b) = ((c + 1) % 3, (c + 2) % 3);
        let (ia, ib, ic) = (inv[a], inv[b], inv[c]);
        // ia = I_{b c}, ib = I_{c a}, ic = I_{a b}
        let num = (ib * ic + ia) * r[c] * r[a] + (ia * ic + ib) * r[c] * r[b]
            - (ic * ic - 1.0) * r[a] * r[b];
        r[a] * r[b] * num / (2.0 * lengths[c] * area)
    });
    Ok(TriangleGeometry {
        lengths,
        angles,
        area,
        ortho_radius,
        dual,
        discriminant: disc,
    })
}

/// The nine numbers around a hinge `◇_{ij;kl}`: inversive distances
/// `a = I_ki, b = I_il, c = I_lj, d = I_jk, e = I_ij` and radii
/// `p = r_k, q = r_i, r = r_l, s = r_j`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HingeData {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub s: f64,
}

impl HingeData {
    pub fn new(inv: [f64; 5], radii: [f64; 4]) -> Self {
        let [a, b, c, d, e] = inv;
        let [p, q, r, s] = radii;
        HingeData { a, b, c, d, e, p, q, r, s }
    }

    pub fn inv(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    pub fn radii(&self) -> [f64; 4] {
        [self.p, self.q, self.r, self.s]
    }

    pub fn validate(&self, mode: BoundaryMode) -> Result<()> {
        for x in self.inv() {
            check_inversive_distance("inversive distance", x, mode)?;
        }
        for x in self.radii() {
            check_positive("radius", x)?;
        }
        Ok(())
    }

    /// Same hinge with every radius multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Self {
        HingeData::new(self.inv(), self.radii().map(|x| t * x))
    }

    /// Geometry of the left face `f_ijk` in corner order `(i, j, k)`.
    pub fn left_face(&self) -> Result<TriangleGeometry> {
        triangle_geometry([self.d, self.a, self.e], [self.q, self.s, self.p])
    }

    /// Geometry of the right face `f_jil` in corner order `(j, i, l)`.
    pub fn right_face(&self) -> Result<TriangleGeometry> {
        triangle_geometry([self.b, self.c, self.e], [self.s, self.q, self.r])
    }
}

/// A hinge laid out in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HingeDevelopment {
    pub k: [f64; 2],
    pub i: [f64; 2],
    pub l: [f64; 2],
    pub j: [f64; 2],
    /// Distance between the centers of `v_k` and `v_l`.
    pub z: f64,
    /// Inversive distance of the circles at `v_k` and `v_l` in this layout.
    pub big_f: f64,
}

/// Places `v_i` at the origin, `v_j` on the positive first axis, `v_k` above
/// and `v_l` below.
pub fn develop_hinge(h: &HingeData) -> Result<HingeDevelopment> {
    h.validate(BoundaryMode::Strict)?;
    let lij = length_unchecked(h.e, h.q, h.s);
    let lki = length_unchecked(h.a, h.p, h.q);
    let ljk = length_unchecked(h.d, h.s, h.p);
    let lil = length_unchecked(h.b, h.q, h.r);
    let llj = length_unchecked(h.c, h.r, h.s);
    let apex = |di: f64, dj: f64, sign: f64| -> Result<[f64; 2]> {
        let area = heron_area(lij, di, dj)
            .map_err(|slack| Error::TriangleInequalityViolated { face: None, slack })?;
        let x = (di * di - dj * dj + lij * lij) / (2.0 * lij);
        Ok([x, sign * 2.0 * area / lij])
    };
    let k = apex(lki, ljk, 1.0)?;
    let l = apex(lil, llj, -1.0)?;
    let z = (k[0] - l[0]).hypot(k[1] - l[1]);
    let big_f = (z * z - h.p * h.p - h.r * h.r) / (2.0 * h.p * h.r);
    Ok(HingeDevelopment {
        k,
        i: [0.0, 0.0],
        l,
        j: [lij, 0.0],
        z,
        big_f,
    })
}

/// Inversive distances on the edges and radii on the vertices of a
/// triangulation.
#[derive(Clone, Debug, PartialEq)]
pub struct Packing {
    tri: Triangulation,
    inv_dist: Vec<f64>,
    radii: Vec<f64>,
}

impl Packing {
    pub fn new(tri: Triangulation, inv_dist: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if inv_dist.len() != tri.num_edges() {
            return Err(Error::LengthMismatch {
                what: "inv_dist",
                got: inv_dist.len(),
                expected: tri.num_edges(),
            });
        }
        if radii.len() != tri.num_vertices() {
            return Err(Error::LengthMismatch {
                what: "radii",
                got: radii.len(),
                expected: tri.num_vertices(),
            });
        }
        for &x in &inv_dist {
            check_inversive_distance("inversive distance", x, BoundaryMode::Strict)?;
        }
        for &x in &radii {
            check_positive("radius", x)?;
        }
        Ok(Packing { tri, inv_dist, radii })
    }

    /// Constant inversive distance and radius everywhere.
    pub fn uniform(tri: Triangulation, inv: f64, radius: f64) -> Result<Self> {
        let (ne, nv) = (tri.num_edges(), tri.num_vertices());
        Packing::new(tri, vec![inv; ne], vec![radius; nv])
    }

    pub fn tri(&self) -> &Triangulation {
        &self.tri
    }

    pub fn inv_dist(&self) -> &[f64] {
        &self.inv_dist
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn log_radii(&self) -> Vec<f64> {
        self.radii.iter().map(|r| r.ln()).collect()
    }

    pub fn with_radii(&self, radii: Vec<f64>) -> Result<Self> {
        Packing::new(self.tri.clone(), self.inv_dist.clone(), radii)
    }

    pub fn with_log_radii(&self, u: &[f64]) -> Result<Self> {
        self.with_radii(u.iter().map(|x| x.exp()).collect())
    }

    pub fn with_inv_dist(&self, inv_dist: Vec<f64>) -> Result<Self> {
        Packing::new(self.tri.clone(), inv_dist, self.radii.clone())
    }

    /// Replaces the triangulation and per-edge data together, as after a flip.
    pub(crate) fn replace(&mut self, tri: Triangulation, inv_dist: Vec<f64>) {
        self.tri = tri;
        self.inv_dist = inv_dist;
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let (u, v) = self.tri.edge_endpoints(e);
        length_unchecked(self.inv_dist[e], self.radii[u], self.radii[v])
    }

    pub fn hinge(&self, e: usize) -> Result<Hinge> {
        Ok(self.tri.hinge_at(e)?)
    }

    pub fn hinge_data(&self, e: usize) -> Result<HingeData> {
        let h = self.tri.hinge_at(e)?;
        Ok(self.hinge_data_of(&h))
    }

    pub(crate) fn hinge_data_of(&self, h: &Hinge) -> HingeData {
        let iv = |e: usize| self.inv_dist[e];
        let rv = |v: usize| self.radii[v];
        HingeData::new(
            [iv(h.e_ki), iv(h.e_il), iv(h.e_lj), iv(h.e_jk), iv(h.edge)],
            [rv(h.k), rv(h.i), rv(h.l), rv(h.j)],
        )
    }

    /// Inversive distances opposite each corner and corner radii of a face.
    pub fn face_data(&self, f: usize) -> ([f64; 3], [f64; 3]) {
        let faces = self.tri.faces();
        let inv = [1, 2, 0].map(|c| self.inv_dist[self.tri.edge(3 * f + c)]);
        let r = faces[f].map(|v| self.radii[v]);
        (inv, r)
    }

    pub fn face_geometry(&self, f: usize) -> Result<TriangleGeometry> {
        let (inv, r) = self.face_data(f);
        triangle_geometry_unchecked(inv, r).map_err(|err| match err {
            Error::TriangleInequalityViolated { slack, .. } => Error::TriangleInequalityViolated {
                face: Some(f),
                slack,
            },
            other => other,
        })
    }

    /// Rebuilds the triangulation so edge ids follow the canonical order of
    /// the current gluing, carrying inversive distances along.
    pub fn canonicalized(&self) -> Packing {
        let tri = Triangulation::build(
            self.tri.num_vertices(),
            self.tri.faces().to_vec(),
            self.tri.twins().to_vec(),
        )
        .expect("a valid triangulation rebuilds");
        let inv_dist = (0..tri.num_edges())
            .map(|e| self.inv_dist[self.tri.edge(tri.edge_half_edge(e))])
            .collect();
        Packing {
            tri,
            inv_dist,
            radii: self.radii.clone(),
        }
    }

    /// Cones a new vertex of radius `radius` into face `f`. `spokes[c]` is the
    /// inversive distance from the new vertex to corner `c` of the face.
    pub fn split_face(&self, f: usize, spokes: [f64; 3], radius: f64) -> Result<Packing> {
        let (tri, map) = self.tri.split_face(f)?;
        let inv_dist = map
            .iter()
            .map(|m| match *m {
                SplitEdge::Old(old) => self.inv_dist[old],
                SplitEdge::Spoke(c) => spokes[c],
            })
            .collect();
        let mut radii = self.radii.clone();
        radii.push(radius);
        Packing::new(tri, inv_dist, radii)
    }
}
