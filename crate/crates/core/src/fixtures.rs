//! Small closed triangulations used by tests, examples and the CLI.

use crate::mesh::Triangulation;
use crate::packing::{inversive_distance, Packing};
use crate::Result;

/// Glues each half-edge `u -> v` to the unique half-edge `v -> u`.
///
/// # Panics
/// If some directed edge is missing or repeated; use
/// [`Triangulation::build`] with explicit twins for multi-edges.
pub fn from_faces(num_vertices: usize, faces: Vec<[usize; 3]>) -> Triangulation {
    use std::collections::HashMap;
    let mut by_dir = HashMap::new();
    for (f, face) in faces.iter().enumerate() {
        for c in 0..3 {
            let key = (face[c], face[(c + 1) % 3]);
            assert!(by_dir.insert(key, 3 * f + c).is_none(), "repeated directed edge {key:?}");
        }
    }
    let twins = (0..3 * faces.len())
        .map(|h| {
            let face = faces[h / 3];
            let (u, v) = (face[h % 3], face[(h % 3 + 1) % 3]);
            by_dir[&(v, u)]
        })
        .collect();
    Triangulation::build(num_vertices, faces, twins).expect("fixture gluing is valid")
}

/// Two triangles glued into a torus with a single vertex.
pub fn torus1() -> Triangulation {
    Triangulation::build(1, vec![[0, 0, 0], [0, 0, 0]], vec![4, 5, 3, 2, 0, 1]).unwrap()
}

/// A torus with two vertices: two unit squares side by side, each cut by a
/// diagonal, with opposite sides of the 2×1 rectangle identified.
pub fn torus2() -> Triangulation {
    Triangulation::build(
        2,
        vec![[0, 1, 1], [0, 1, 0], [1, 0, 0], [1, 0, 1]],
        vec![4, 11, 3, 2, 0, 7, 10, 5, 9, 8, 6, 1],
    )
    .unwrap()
}

/// Two triangles glued along their boundary.
pub fn sphere3() -> Triangulation {
    Triangulation::build(3, vec![[0, 1, 2], [0, 2, 1]], vec![5, 4, 3, 2, 1, 0]).unwrap()
}

/// Genus-two surface with one vertex: the octagon `a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹`
/// fanned from one corner into six triangles.
pub fn genus2() -> Triangulation {
    Triangulation::build(
        1,
        vec![[0, 0, 0]; 6],
        vec![4, 7, 3, 2, 0, 6, 5, 1, 9, 8, 16, 12, 11, 17, 15, 14, 10, 13],
    )
    .unwrap()
}

/// A sphere made of two pentagons glued along their rim. The top pentagon
/// `0 1 2 3 4` is fanned from vertex 0; the bottom is fanned from vertex 1.
pub fn pentagon_pillow() -> Triangulation {
    from_faces(
        5,
        vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [1, 0, 4],
            [1, 4, 3],
            [1, 3, 2],
        ],
    )
}

/// Vertex positions and radii of a planar regular pentagon used with
/// [`pentagon_pillow`].
pub fn pentagon_circles() -> ([[f64; 2]; 5], [f64; 5]) {
    let pos = std::array::from_fn(|i| {
        let t = std::f64::consts::TAU * i as f64 / 5.0;
        [t.cos(), t.sin()]
    });
    (pos, [0.30, 0.25, 0.35, 0.20, 0.28])
}

/// Inversive distances of the pentagon circles on [`pentagon_pillow`].
pub fn pentagon_packing() -> Result<Packing> {
    let tri = pentagon_pillow();
    let (pos, radii) = pentagon_circles();
    let inv = (0..tri.num_edges())
        .map(|e| {
            let (u, v) = tri.edge_endpoints(e);
            let l = (pos[u][0] - pos[v][0]).hypot(pos[u][1] - pos[v][1]);
            inversive_distance(l, radii[u], radii[v])
        })
        .collect::<Result<Vec<_>>>()?;
    Packing::new(tri, inv, radii.to_vec())
}

/// The 2-vertex torus with every face equilateral.
pub fn torus2_equilateral() -> Packing {
    Packing::uniform(torus2(), 2.0, 1.0).unwrap()
}
