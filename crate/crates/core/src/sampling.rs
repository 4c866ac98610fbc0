//! Seeded random generators of hinges and packings for the self-test suites
//! and property tests.

use rand::Rng;

use crate::delaunay::{delaunay_equality_p0, delaunayize, is_local_delaunay, slack_scale, DelaunayConfig};
use crate::mesh::Triangulation;
use crate::packing::{HingeData, Packing};
use crate::Result;

/// Uniform on `(lo, hi]`.
pub fn open_closed<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    hi - rng.random_range(0.0..(hi - lo))
}

/// Log-uniform radius in `[lo, hi)`.
pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Five inversive distances in `(1, hi]`.
pub fn inversive_five<R: Rng>(rng: &mut R, hi: f64) -> [f64; 5] {
    std::array::from_fn(|_| open_closed(rng, 1.0, hi).max(f64::from_bits(1f64.to_bits() + 1)))
}

/// Any hinge: inversive distances in `(1, hi]`, radii log-uniform in
/// `[0.2, 5)`. Triangle inequalities may fail.
pub fn raw_hinge<R: Rng>(rng: &mut R, hi: f64) -> HingeData {
    let inv = inversive_five(rng, hi);
    let radii = std::array::from_fn(|_| log_uniform(rng, 0.2, 5.0));
    HingeData::new(inv, radii)
}

/// A hinge whose two faces satisfy the triangle inequality.
pub fn valid_hinge<R: Rng>(rng: &mut R, hi: f64) -> HingeData {
    loop {
        let h = raw_hinge(rng, hi);
        if h.left_face().is_ok() && h.right_face().is_ok() {
            return h;
        }
    }
}

/// A hinge on the Delaunay wall: `p` is set so the slack vanishes. Inputs
/// are kept away from `I = 1` so finite differences stay in the domain.
pub fn wall_hinge<R: Rng>(rng: &mut R) -> HingeData {
    loop {
        let inv: [f64; 5] = std::array::from_fn(|_| rng.random_range(1.1..6.0));
        let [q, r, s] = std::array::from_fn(|_| log_uniform(rng, 0.3, 3.0));
        let [a, b, c, d, e] = inv;
        let Ok(p) = delaunay_equality_p0(q, r, s, a, b, c, d, e) else {
            continue;
        };
        let h = HingeData::new(inv, [p, q, r, s]);
        // Keep clear of collapsed faces, where F is not smooth.
        let fat = |g: crate::Result<crate::TriangleGeometry>| {
            g.map(|g| g.angles.iter().all(|&t| t > 0.05)).unwrap_or(false)
        };
        if p > 0.05 && fat(h.left_face()) && fat(h.right_face()) {
            return h;
        }
    }
}

/// Random inversive distances in `(1, hi]` and log-uniform radii in
/// `[rlo, rhi)` on `tri`.
pub fn random_packing<R: Rng>(rng: &mut R, tri: &Triangulation, hi: f64, rlo: f64, rhi: f64) -> Packing {
    let inv = (0..tri.num_edges()).map(|_| rng.random_range(1.05..hi)).collect();
    let radii = (0..tri.num_vertices()).map(|_| log_uniform(rng, rlo, rhi)).collect();
    Packing::new(tri.clone(), inv, radii).expect("sampled data lies in the domain")
}

/// Smallest relative slack `slack / scale` over all edges.
pub fn min_relative_slack(pk: &Packing) -> Result<f64> {
    let mut m = f64::INFINITY;
    for e in 0..pk.tri().num_edges() {
        let h = pk.hinge_data(e)?;
        m = m.min(is_local_delaunay(&h)? / slack_scale(&h));
    }
    Ok(m)
}

/// A Delaunay packing whose every edge has relative slack above `margin`,
/// so small perturbations of the radii keep the triangulation.
pub fn interior_packing<R: Rng>(rng: &mut R, tri: &Triangulation, margin: f64) -> Packing {
    loop {
        let pk = random_packing(rng, tri, 3.0, 0.5, 2.0);
        let Ok((pk, _)) = delaunayize(&pk, &DelaunayConfig::default()) else {
            continue;
        };
        if min_relative_slack(&pk).map(|m| m > margin).unwrap_or(false) {
            return pk;
        }
    }
}
