//! Labelled Δ-complex triangulations of closed oriented surfaces.
//!
//! Half-edge `h = 3·face + corner` runs from `faces[face][corner]` to
//! `faces[face][(corner + 1) % 3]`. Edges are twin pairs, so self-glued faces,
//! loops and multi-edges need no special handling. Vertex labels are fixed;
//! nothing here quotients by isotopy or relabelling.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while building or editing a [`Triangulation`].
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MeshError {
    #[error("triangulation has no faces")]
    NoFaces,
    #[error("twin array has length {got}, expected {expected}")]
    TwinLength { got: usize, expected: usize },
    #[error("face {face} references vertex {vertex}, but only {num_vertices} vertices exist")]
    VertexOutOfRange {
        face: usize,
        vertex: usize,
        num_vertices: usize,
    },
    #[error("twin matching is not a fixed-point-free involution at half-edge {half_edge}")]
    BadMatching { half_edge: usize },
    #[error("half-edges {half_edge} and {twin} are glued with mismatched endpoints")]
    OrientationMismatch { half_edge: usize, twin: usize },
    #[error("vertex {vertex} is not the origin of any half-edge")]
    DanglingVertex { vertex: usize },
    #[error("vertex {vertex} has a pinched link made of {cycles} corner cycles")]
    PinchedVertex { vertex: usize, cycles: usize },
    #[error("gluing has {components} connected components")]
    Disconnected { components: usize },
    #[error("Euler characteristic {chi} is inadmissible with {num_vertices} vertices")]
    EulerMismatch { chi: i64, num_vertices: usize },
    #[error("declared genus {declared} but the gluing has genus {actual}")]
    GenusMismatch { declared: u32, actual: u32 },
    #[error("edge {edge} out of range ({num_edges} edges)")]
    EdgeOutOfRange { edge: usize, num_edges: usize },
    #[error("face {face} out of range ({num_faces} faces)")]
    FaceOutOfRange { face: usize, num_faces: usize },
    #[error("edge {edge} has both sides on face {face} and cannot be flipped")]
    FoldedHinge { edge: usize, face: usize },
    #[error("triangulations have different sizes")]
    IncompatibleTriangulations,
    #[error("no flip path found within {cap} visited triangulations")]
    SearchCapExceeded { cap: usize },
}

impl MeshError {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            MeshError::NoFaces => "NoFaces",
            MeshError::TwinLength { .. } => "TwinLength",
            MeshError::VertexOutOfRange { .. } => "VertexOutOfRange",
            MeshError::BadMatching { .. } => "BadMatching",
            MeshError::OrientationMismatch { .. } => "OrientationMismatch",
            MeshError::DanglingVertex { .. } => "DanglingVertex",
            MeshError::PinchedVertex { .. } => "PinchedVertex",
            MeshError::Disconnected { .. } => "Disconnected",
            MeshError::EulerMismatch { .. } => "EulerMismatch",
            MeshError::GenusMismatch { .. } => "GenusMismatch",
            MeshError::EdgeOutOfRange { .. } => "EdgeOutOfRange",
            MeshError::FaceOutOfRange { .. } => "FaceOutOfRange",
            MeshError::FoldedHinge { .. } => "FoldedHinge",
            MeshError::IncompatibleTriangulations => "IncompatibleTriangulations",
            MeshError::SearchCapExceeded { .. } => "SearchCapExceeded",
        }
    }
}

/// A view of one half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HalfEdge {
    pub id: usize,
    pub face: usize,
    pub corner: usize,
    pub origin: usize,
    pub twin: usize,
}

/// The edge `e_ij` together with its two incident faces `f_ijk` (left) and
/// `f_ijl` (right). Vertex roles may repeat on self-glued hinges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hinge {
    pub edge: usize,
    /// Half-edge `i -> j` on the left face; always the lower id of the pair.
    pub half_edge: usize,
    pub left_face: usize,
    pub right_face: usize,
    pub k: usize,
    pub i: usize,
    pub l: usize,
    pub j: usize,
    pub e_ki: usize,
    pub e_il: usize,
    pub e_lj: usize,
    pub e_jk: usize,
}

/// Provenance of an edge after [`Triangulation::split_face`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitEdge {
    /// Continues this edge of the unsplit triangulation.
    Old(usize),
    /// Joins the new vertex to this corner of the split face.
    Spoke(usize),
}

/// Face descriptor used for label-faithful comparison: each corner as
/// `(origin vertex, edge id of the outgoing half-edge)`, rotated to its
/// lexicographically smallest form.
pub type FaceSignature = [(usize, usize); 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    num_vertices: usize,
    faces: Vec<[usize; 3]>,
    twins: Vec<usize>,
    edge_of: Vec<usize>,
    edge_half: Vec<usize>,
}

#[inline]
pub fn next(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 1) % 3
}

#[inline]
pub fn prev(h: usize) -> usize {
    3 * (h / 3) + (h % 3 + 2) % 3
}

impl Triangulation {
    /// Validates the gluing and assigns canonical edge ids (ascending by the
    /// lower half-edge of each twin pair).
    pub fn build(
        num_vertices: usize,
        faces: Vec<[usize; 3]>,
        twins: Vec<usize>,
    ) -> Result<Self, MeshError> {
        if faces.is_empty() {
            return Err(MeshError::NoFaces);
        }
        let nh = 3 * faces.len();
        if twins.len() != nh {
            return Err(MeshError::TwinLength {
                got: twins.len(),
                expected: nh,
            });
        }
        for (f, face) in faces.iter().enumerate() {
            if let Some(&v) = face.iter().find(|&&v| v >= num_vertices) {
                return Err(MeshError::VertexOutOfRange {
                    face: f,
                    vertex: v,
                    num_vertices,
                });
            }
        }
        for (h, &t) in twins.iter().enumerate() {
            if t >= nh || t == h || twins[t] != h {
                return Err(MeshError::BadMatching { half_edge: h });
            }
        }

        let mut edge_of = vec![usize::MAX; nh];
        let mut edge_half = Vec::with_capacity(nh / 2);
        for h in 0..nh {
            let t = twins[h];
            if h < t {
                edge_of[h] = edge_half.len();
                edge_of[t] = edge_half.len();
                edge_half.push(h);
            }
        }
        let tri = Triangulation {
            num_vertices,
            faces,
            twins,
            edge_of,
            edge_half,
        };
        tri.validate()?;
        Ok(tri)
    }

    fn validate(&self) -> Result<(), MeshError> {
        let nh = self.num_half_edges();
        for h in 0..nh {
            let t = self.twins[h];
            if self.origin(h) != self.dest(t) || self.dest(h) != self.origin(t) {
                return Err(MeshError::OrientationMismatch { half_edge: h, twin: t });
            }
        }

        let mut has_corner = vec![false; self.num_vertices];
        for h in 0..nh {
            has_corner[self.origin(h)] = true;
        }
        if let Some(v) = has_corner.iter().position(|&c| !c) {
            return Err(MeshError::DanglingVertex { vertex: v });
        }

        // Corner cycles around a vertex are the orbits of h -> next(twin(h)).
        let mut cycles = vec![0usize; self.num_vertices];
        let mut seen = vec![false; nh];
        for start in 0..nh {
            if seen[start] {
                continue;
            }
            cycles[self.origin(start)] += 1;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = next(self.twins[h]);
            }
        }
        if let Some(v) = cycles.iter().position(|&c| c > 1) {
            return Err(MeshError::PinchedVertex {
                vertex: v,
                cycles: cycles[v],
            });
        }

        let components = self.count_components();
        if components != 1 {
            return Err(MeshError::Disconnected { components });
        }

        let chi = self.euler_characteristic();
        if chi % 2 != 0 || chi - self.num_vertices as i64 >= 0 {
            return Err(MeshError::EulerMismatch {
                chi,
                num_vertices: self.num_vertices,
            });
        }
        Ok(())
    }

    fn count_components(&self) -> usize {
        let nf = self.faces.len();
        let mut comp = vec![usize::MAX; nf];
        let mut count = 0;
        for s in 0..nf {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut queue = VecDeque::from([s]);
            comp[s] = count;
            while let Some(f) = queue.pop_front() {
                for c in 0..3 {
                    let g = self.twins[3 * f + c] / 3;
                    if comp[g] == usize::MAX {
                        comp[g] = count;
                        queue.push_back(g);
                    }
                }
            }
            count += 1;
        }
        count
    }

    /// Checks that the gluing has the declared genus.
    pub fn check_genus(&self, declared: u32) -> Result<(), MeshError> {
        let actual = self.genus();
        if actual != declared {
            return Err(MeshError::GenusMismatch { declared, actual });
        }
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_half.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.twins.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn twins(&self) -> &[usize] {
        &self.twins
    }

    /// χ = n − |E| + |F|.
    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn genus(&self) -> u32 {
        ((2 - self.euler_characteristic()) / 2) as u32
    }

    pub fn half_edge(&self, h: usize) -> HalfEdge {
        HalfEdge {
            id: h,
            face: h / 3,
            corner: h % 3,
            origin: self.origin(h),
            twin: self.twins[h],
        }
    }

    #[inline]
    pub fn origin(&self, h: usize) -> usize {
        self.faces[h / 3][h % 3]
    }

    #[inline]
    pub fn dest(&self, h: usize) -> usize {
        self.origin(next(h))
    }

    #[inline]
    pub fn twin(&self, h: usize) -> usize {
        self.twins[h]
    }

    #[inline]
    pub fn edge(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    /// Lower half-edge id of an edge.
    #[inline]
    pub fn edge_half_edge(&self, e: usize) -> usize {
        self.edge_half[e]
    }

    /// Endpoints of an edge, oriented along its lower half-edge.
    pub fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let h = self.edge_half[e];
        (self.origin(h), self.dest(h))
    }

    fn check_edge(&self, e: usize) -> Result<(), MeshError> {
        if e >= self.num_edges() {
            return Err(MeshError::EdgeOutOfRange {
                edge: e,
                num_edges: self.num_edges(),
            });
        }
        Ok(())
    }

    /// The hinge around `edge`; the left face holds the lower half-edge.
    pub fn hinge_at(&self, edge: usize) -> Result<Hinge, MeshError> {
        self.check_edge(edge)?;
        let h = self.edge_half[edge];
        let t = self.twins[h];
        Ok(Hinge {
            edge,
            half_edge: h,
            left_face: h / 3,
            right_face: t / 3,
            k: self.origin(prev(h)),
            i: self.origin(h),
            l: self.origin(prev(t)),
            j: self.dest(h),
            e_ki: self.edge_of[prev(h)],
            e_il: self.edge_of[next(t)],
            e_lj: self.edge_of[prev(t)],
            e_jk: self.edge_of[next(h)],
        })
    }

    /// Replaces the hinge `◇_{ij;kl}` by `◇_{kl;ij}`. The edge keeps its id
    /// and now joins `k` and `l`; every other edge id is preserved as well.
    pub fn flip(&self, edge: usize) -> Result<Triangulation, MeshError> {
        let hinge = self.hinge_at(edge)?;
        let h = hinge.half_edge;
        let t = self.twins[h];
        let (f1, f2) = (h / 3, t / 3);
        if f1 == f2 {
            return Err(MeshError::FoldedHinge { edge, face: f1 });
        }
        let (ch, ct) = (h % 3, t % 3);
        let slot = |f: usize, c: usize, off: usize| 3 * f + (c + off) % 3;

        // Old side half-edges move to their slot in the rebuilt faces.
        let nh = self.num_half_edges();
        let mut phi: Vec<usize> = (0..nh).collect();
        phi[slot(f1, ch, 1)] = slot(f1, ch, 2); // j -> k
        phi[slot(f2, ct, 2)] = slot(f1, ch, 1); // l -> j
        phi[slot(f1, ch, 2)] = slot(f2, ct, 1); // k -> i
        phi[slot(f2, ct, 1)] = slot(f2, ct, 2); // i -> l

        let mut twins = vec![0; nh];
        let mut edge_of = vec![0; nh];
        for x in 0..nh {
            twins[phi[x]] = phi[self.twins[x]];
            edge_of[phi[x]] = self.edge_of[x];
        }

        let mut faces = self.faces.clone();
        let (i, j, k, l) = (hinge.i, hinge.j, hinge.k, hinge.l);
        faces[f1][ch] = k;
        faces[f1][(ch + 1) % 3] = l;
        faces[f1][(ch + 2) % 3] = j;
        faces[f2][ct] = l;
        faces[f2][(ct + 1) % 3] = k;
        faces[f2][(ct + 2) % 3] = i;

        let mut edge_half = vec![0; self.num_edges()];
        for x in 0..nh {
            if x < twins[x] {
                edge_half[edge_of[x]] = x;
            }
        }
        Ok(Triangulation {
            num_vertices: self.num_vertices,
            faces,
            twins,
            edge_of,
            edge_half,
        })
    }

    /// Inserts a new vertex (id `n`) inside `face` and cones it to the three
    /// corners. Edge ids are reassigned canonically; the returned map tells,
    /// for each new edge id, where the edge came from.
    pub fn split_face(&self, face: usize) -> Result<(Triangulation, Vec<SplitEdge>), MeshError> {
        if face >= self.num_faces() {
            return Err(MeshError::FaceOutOfRange {
                face,
                num_faces: self.num_faces(),
            });
        }
        let nh = self.num_half_edges();
        let v = self.num_vertices;
        let [a, b, c] = self.faces[face];
        let fb = self.num_faces();
        let fc = fb + 1;

        let mut phi: Vec<usize> = (0..nh).collect();
        phi[3 * face + 1] = 3 * fb;
        phi[3 * face + 2] = 3 * fc;

        let mut faces = self.faces.clone();
        faces[face] = [a, b, v];
        faces.push([b, c, v]);
        faces.push([c, a, v]);

        let mut twins = vec![usize::MAX; nh + 6];
        let mut origin = vec![SplitEdge::Spoke(0); nh + 6];
        for x in 0..nh {
            twins[phi[x]] = phi[self.twins[x]];
            origin[phi[x]] = SplitEdge::Old(self.edge_of[x]);
        }
        let mut glue = |x: usize, y: usize, corner: usize| {
            twins[x] = y;
            twins[y] = x;
            origin[x] = SplitEdge::Spoke(corner);
            origin[y] = SplitEdge::Spoke(corner);
        };
        glue(3 * face + 1, 3 * fb + 2, 1);
        glue(3 * face + 2, 3 * fc + 1, 0);
        glue(3 * fb + 1, 3 * fc + 2, 2);

        let tri = Triangulation::build(v + 1, faces, twins)?;
        let map = (0..tri.num_edges())
            .map(|e| origin[tri.edge_half[e]])
            .collect();
        Ok((tri, map))
    }

    /// Label-faithful description: faces as rotated corner cycles, sorted.
    pub fn signature(&self) -> Vec<FaceSignature> {
        let mut sig: Vec<FaceSignature> = (0..self.num_faces())
            .map(|f| {
                let corners = [0, 1, 2].map(|c| (self.origin(3 * f + c), self.edge_of[3 * f + c]));
                (0..3)
                    .map(|s| [corners[s], corners[(s + 1) % 3], corners[(s + 2) % 3]])
                    .min()
                    .unwrap()
            })
            .collect();
        sig.sort_unstable();
        sig
    }

    /// Breadth-first search for a flip sequence turning `self` into `target`
    /// (compared by [`signature`](Self::signature)). Intended for small
    /// complexes only.
    pub fn flip_distance_path(
        &self,
        target: &Triangulation,
        cap: usize,
    ) -> Result<Vec<usize>, MeshError> {
        if self.num_vertices != target.num_vertices
            || self.num_half_edges() != target.num_half_edges()
        {
            return Err(MeshError::IncompatibleTriangulations);
        }
        let goal = target.signature();
        let mut visited = HashSet::from([self.signature()]);
        let mut queue = VecDeque::from([(self.clone(), Vec::new())]);
        while let Some((tri, path)) = queue.pop_front() {
            if tri.signature() == goal {
                return Ok(path);
            }
            for e in 0..tri.num_edges() {
                let Ok(next_tri) = tri.flip(e) else { continue };
                if visited.len() >= cap {
                    return Err(MeshError::SearchCapExceeded { cap });
                }
                if visited.insert(next_tri.signature()) {
                    let mut p = path.clone();
                    p.push(e);
                    queue.push_back((next_tri, p));
                }
            }
        }
        Err(MeshError::SearchCapExceeded { cap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn one_vertex_torus_counts() {
        let t = fixtures::torus1();
        assert_eq!((t.num_edges(), t.num_faces(), t.euler_characteristic()), (3, 2, 0));
        assert_eq!(t.genus(), 1);
    }

    #[test]
    fn three_vertex_sphere_counts() {
        let t = Triangulation::build(3, vec![[0, 1, 2], [0, 2, 1]], vec![5, 4, 3, 2, 1, 0]).unwrap();
        assert_eq!(t.num_edges(), 3);
        assert_eq!(t.euler_characteristic(), 2);
        assert_eq!(t.genus(), 0);
    }

    #[test]
    fn fixed_point_twin_is_bad_matching() {
        let err = Triangulation::build(1, vec![[0, 0, 0], [0, 0, 0]], vec![0, 5, 3, 2, 4, 1]).unwrap_err();
        assert_eq!(err, MeshError::BadMatching { half_edge: 0 });
    }

    #[test]
    fn non_involutive_twin_is_bad_matching() {
        let err = Triangulation::build(1, vec![[0, 0, 0], [0, 0, 0]], vec![4, 5, 3, 2, 1, 0]).unwrap_err();
        assert!(matches!(err, MeshError::BadMatching { .. }));
    }

    #[test]
    fn unused_vertex_is_dangling() {
        let err = Triangulation::build(2, vec![[0, 0, 0], [0, 0, 0]], vec![4, 5, 3, 2, 0, 1]).unwrap_err();
        assert_eq!(err, MeshError::DanglingVertex { vertex: 1 });
    }

    #[test]
    fn mismatched_labels_are_rejected() {
        // Same gluing as the sphere but with a relabelled corner.
        let err = Triangulation::build(3, vec![[0, 1, 2], [0, 1, 2]], vec![5, 4, 3, 2, 1, 0]).unwrap_err();
        assert!(matches!(err, MeshError::OrientationMismatch { .. }));
    }

    #[test]
    fn wrong_twin_length() {
        let err = Triangulation::build(1, vec![[0, 0, 0]], vec![1, 0]).unwrap_err();
        assert_eq!(err, MeshError::TwinLength { got: 2, expected: 3 });
    }

    #[test]
    fn two_vertex_torus_hinge_roles() {
        let t = fixtures::torus2();
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_faces()), (2, 6, 4));
        for e in 0..t.num_edges() {
            let hg = t.hinge_at(e).unwrap();
            for v in [hg.i, hg.j, hg.k, hg.l] {
                assert!(v < 2);
            }
            assert_eq!(t.hinge_at(e).unwrap(), hg);
            assert_ne!(hg.left_face, hg.right_face);
        }
        // Edge 0 is the bottom edge v0 -> v1 of the first square.
        let hg = t.hinge_at(0).unwrap();
        assert_eq!((hg.i, hg.j, hg.k, hg.l), (0, 1, 1, 0));
    }

    #[test]
    fn torus1_hinges_collapse_to_one_vertex() {
        let t = fixtures::torus1();
        for e in 0..3 {
            let hg = t.hinge_at(e).unwrap();
            assert_eq!((hg.k, hg.i, hg.l, hg.j), (0, 0, 0, 0));
        }
        assert!(matches!(t.hinge_at(3), Err(MeshError::EdgeOutOfRange { .. })));
    }

    #[test]
    fn flip_preserves_counts_and_rebuilds() {
        for t in [fixtures::torus1(), fixtures::torus2(), fixtures::genus2(), fixtures::pentagon_pillow()] {
            for e in 0..t.num_edges() {
                let f = t.flip(e).unwrap();
                assert_eq!(f.num_vertices(), t.num_vertices());
                assert_eq!(f.num_edges(), t.num_edges());
                assert_eq!(f.num_faces(), t.num_faces());
                assert_eq!(f.euler_characteristic(), t.euler_characteristic());
                f.validate().unwrap();
                // Rebuilding from raw arrays must succeed.
                Triangulation::build(f.num_vertices(), f.faces().to_vec(), f.twins().to_vec()).unwrap();
                let mut ids: Vec<usize> = (0..f.num_half_edges()).map(|h| f.edge(h)).collect();
                ids.sort_unstable();
                let mut old: Vec<usize> = (0..t.num_half_edges()).map(|h| t.edge(h)).collect();
                old.sort_unstable();
                assert_eq!(ids, old);
            }
        }
    }

    #[test]
    fn double_flip_is_identity_up_to_face_order() {
        for t in [fixtures::torus1(), fixtures::torus2(), fixtures::genus2()] {
            for e in 0..t.num_edges() {
                let back = t.flip(e).unwrap().flip(e).unwrap();
                assert_eq!(back.signature(), t.signature());
            }
        }
    }

    #[test]
    fn flipped_diagonal_joins_opposite_corners() {
        let t = fixtures::torus2();
        let hg = t.hinge_at(0).unwrap();
        let f = t.flip(0).unwrap();
        let (a, b) = f.edge_endpoints(0);
        let mut got = [a, b];
        got.sort();
        let mut want = [hg.k, hg.l];
        want.sort();
        assert_eq!(got, want);

        let p = fixtures::pentagon_pillow();
        let hg = p.hinge_at(0).unwrap();
        let (a, b) = p.flip(0).unwrap().edge_endpoints(0);
        assert_eq!((a, b), (hg.k, hg.l));
    }

    #[test]
    fn flip_paths() {
        let t = fixtures::torus2();
        assert!(t.flip_distance_path(&t, 100).unwrap().is_empty());
        assert_eq!(t.flip_distance_path(&t.flip(3).unwrap(), 1000).unwrap(), vec![3]);
        let target = t.flip(1).unwrap().flip(4).unwrap();
        let path = t.flip_distance_path(&target, 10_000).unwrap();
        assert!(path.len() <= 2);
        let mut replay = t.clone();
        for e in &path {
            replay = replay.flip(*e).unwrap();
        }
        assert_eq!(replay.signature(), target.signature());
    }

    #[test]
    fn flip_path_cap() {
        let t = fixtures::torus2();
        let far = t.flip(0).unwrap().flip(2).unwrap().flip(5).unwrap().flip(1).unwrap();
        assert_eq!(
            t.flip_distance_path(&far, 3),
            Err(MeshError::SearchCapExceeded { cap: 3 })
        );
    }

    #[test]
    fn split_face_adds_a_vertex() {
        let t = fixtures::torus2();
        let (s, map) = t.split_face(1).unwrap();
        assert_eq!(s.num_vertices(), 3);
        assert_eq!(s.num_faces(), 6);
        assert_eq!(s.num_edges(), 9);
        assert_eq!(s.euler_characteristic(), 0);
        let mut spokes: Vec<usize> = map
            .iter()
            .filter_map(|m| match m {
                SplitEdge::Spoke(c) => Some(*c),
                SplitEdge::Old(_) => None,
            })
            .collect();
        spokes.sort();
        assert_eq!(spokes, vec![0, 1, 2]);
        let mut kept: Vec<usize> = map
            .iter()
            .filter_map(|m| match m {
                SplitEdge::Old(e) => Some(*e),
                SplitEdge::Spoke(_) => None,
            })
            .collect();
        kept.sort();
        assert_eq!(kept, (0..6).collect::<Vec<_>>());
    }
}
