//! Hyperbolic length coordinates `x_e = arcch I_e` of a Delaunay packing, the
//! right-angled hexagon law, and conformal-class comparison through a
//! canonical representative.

use crate::delaunay::{delaunayize, first_violation, is_local_delaunay};
use crate::error::{check_positive, Error, Result};
use crate::flow::{flow_newton, normalize_scale, packings_agree, uniform_target, FlowConfig};
use crate::mesh::Triangulation;
use crate::packing::{HingeData, Packing};

/// Per-edge hyperbolic lengths and per-vertex radii on a triangulation.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperbolicCoords {
    tri: Triangulation,
    lengths: Vec<f64>,
    radii: Vec<f64>,
}

impl HyperbolicCoords {
    pub fn new(tri: Triangulation, lengths: Vec<f64>, radii: Vec<f64>) -> Result<Self> {
        if lengths.len() != tri.num_edges() {
            return Err(Error::LengthMismatch {
                what: "lengths",
                got: lengths.len(),
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
        for &x in &lengths {
            check_positive("hyperbolic length", x)?;
        }
        for &r in &radii {
            check_positive("radius", r)?;
        }
        Ok(HyperbolicCoords { tri, lengths, radii })
    }

    pub fn tri(&self) -> &Triangulation {
        &self.tri
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// `(x_a, x_b, x_c, x_d, x_e)` and `(p, q, r, s)` around `edge`.
    pub fn hinge_values(&self, edge: usize) -> Result<([f64; 5], [f64; 4])> {
        let h = self.tri.hinge_at(edge)?;
        let x = |e: usize| self.lengths[e];
        let r = |v: usize| self.radii[v];
        Ok((
            [x(h.e_ki), x(h.e_il), x(h.e_lj), x(h.e_jk), x(h.edge)],
            [r(h.k), r(h.i), r(h.l), r(h.j)],
        ))
    }

    /// Packing with `I_e = cosh x_e`, without any Delaunay check.
    pub fn to_packing_unchecked(&self) -> Result<Packing> {
        Packing::new(
            self.tri.clone(),
            self.lengths.iter().map(|x| x.cosh()).collect(),
            self.radii.clone(),
        )
    }

    /// Flips `edge`, computing the new length from the hexagon law: the
    /// boundary arcs at `v_i` of the two old hexagons add up to the boundary
    /// arc of the new one.
    pub fn flip(&self, edge: usize) -> Result<HyperbolicCoords> {
        let (x, _) = self.hinge_values(edge)?;
        let xf = hexagon_flip_length(x)?;
        let tri = self.tri.flip(edge)?;
        let mut lengths = self.lengths.clone();
        lengths[edge] = xf;
        Ok(HyperbolicCoords {
            tri,
            lengths,
            radii: self.radii.clone(),
        })
    }
}

/// Length coordinates of a weighted Delaunay packing.
pub fn to_hyperbolic(pk: &Packing, tol: f64) -> Result<HyperbolicCoords> {
    if let Some((edge, slack)) = first_violation(pk, tol)? {
        return Err(Error::NotDelaunay { edge, slack });
    }
    Ok(HyperbolicCoords {
        tri: pk.tri().clone(),
        lengths: pk.inv_dist().iter().map(|i| i.acosh()).collect(),
        radii: pk.radii().to_vec(),
    })
}

/// Inverse of [`to_hyperbolic`].
pub fn from_hyperbolic(hc: &HyperbolicCoords, tol: f64) -> Result<Packing> {
    let pk = hc.to_packing_unchecked()?;
    if let Some((edge, slack)) = first_violation(&pk, tol)? {
        return Err(Error::NotDelaunay { edge, slack });
    }
    Ok(pk)
}

/// The weighted Delaunay slack evaluated on `a = cosh x_a, …`.
pub fn hyperbolic_is_local_delaunay(x: [f64; 5], radii: [f64; 4]) -> Result<f64> {
    for v in x {
        check_positive("hyperbolic length", v)?;
    }
    is_local_delaunay(&HingeData::new(x.map(f64::cosh), radii))
}

/// Side of a right-angled hexagon opposite the side `x`, when `x, y, z` are
/// the alternate sides: `arcch((cosh y cosh z + cosh x) / (sinh y sinh z))`.
pub fn hexagon_side(x: f64, y: f64, z: f64) -> Result<f64> {
    for v in [x, y, z] {
        check_positive("hexagon side", v)?;
    }
    Ok(((y.cosh() * z.cosh() + x.cosh()) / (y.sinh() * z.sinh())).acosh())
}

/// Length of the new diagonal `e_kl` from the hexagon law alone.
pub fn hexagon_flip_length(x: [f64; 5]) -> Result<f64> {
    let [xa, xb, xc, xd, xe] = x;
    let alpha = hexagon_side(xd, xa, xe)?;
    let beta = hexagon_side(xc, xb, xe)?;
    let cosh_f = (alpha + beta).cosh() * xa.sinh() * xb.sinh() - xa.cosh() * xb.cosh();
    if !(cosh_f > 1.0) {
        return Err(Error::Domain {
            what: "cosh of flipped length",
            value: cosh_f,
        });
    }
    Ok(cosh_f.acosh())
}

/// Representative of the conformal class of `pk`: the Delaunay packing with
/// uniform curvature `2πχ/n` and `Σ log r_i = 0`, with canonical edge ids.
/// Edges on a Delaunay wall are left unflipped.
pub fn canonical_form(pk: &Packing, cfg: &FlowConfig) -> Result<Packing> {
    let (d, _) = delaunayize(pk, &cfg.flips)?;
    let target = uniform_target(d.tri());
    let (sol, _) = flow_newton(&d, &target, cfg)?;
    Ok(normalize_scale(&sol).canonicalized())
}

/// Whether two packings on the same labelled surface are discretely
/// conformally equivalent, by comparing canonical forms to `tol`.
pub fn equivalent(a: &Packing, b: &Packing, tol: f64, cfg: &FlowConfig) -> Result<bool> {
    if a.tri().num_vertices() != b.tri().num_vertices() || a.tri().genus() != b.tri().genus() {
        return Ok(false);
    }
    Ok(packings_agree(
        &canonical_form(a, cfg)?,
        &canonical_form(b, cfg)?,
        tol,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::ptolemy_f;
    use crate::fixtures;
    use approx::assert_relative_eq;

    #[test]
    fn uniform_lengths() {
        let pk = fixtures::torus2_equilateral();
        let hc = to_hyperbolic(&pk, 1e-12).unwrap();
        for &x in hc.lengths() {
            assert_relative_eq!(x, 1.316957896924816, epsilon = 1e-14);
        }
        let back = from_hyperbolic(&hc, 1e-12).unwrap();
        for (a, b) in back.inv_dist().iter().zip(pk.inv_dist()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn non_delaunay_is_rejected() {
        let mut inv = vec![2.0; 6];
        inv[0] = 10.0;
        let pk = Packing::new(fixtures::torus2(), inv.clone(), vec![1.0, 1.0]).unwrap();
        assert!(matches!(to_hyperbolic(&pk, 1e-12), Err(Error::NotDelaunay { edge: 0, .. })));
        let hc = HyperbolicCoords::new(
            fixtures::torus2(),
            inv.iter().map(|i| i.acosh()).collect(),
            vec![1.0, 1.0],
        )
        .unwrap();
        assert!(matches!(from_hyperbolic(&hc, 1e-12), Err(Error::NotDelaunay { .. })));
    }

    #[test]
    fn hyperbolic_slack_spot_values() {
        let x2 = 2f64.acosh();
        let s = hyperbolic_is_local_delaunay([x2; 5], [1.0; 4]).unwrap();
        assert_relative_eq!(s, 2.0 * 432f64.sqrt() - 2.0 * 27f64.sqrt(), epsilon = 1e-9);
        let s3 = hyperbolic_is_local_delaunay([x2; 5], [3.0; 4]).unwrap();
        assert!(s3 > 0.0);
        let neg = hyperbolic_is_local_delaunay([x2, x2, x2, x2, 10f64.acosh()], [1.0; 4]).unwrap();
        assert!(neg < 0.0);
    }

    #[test]
    fn symmetric_hexagon() {
        let x = 2f64.acosh();
        assert_relative_eq!(hexagon_side(x, x, x).unwrap(), x, epsilon = 1e-14);
        assert!(hexagon_side(0.0, x, x).is_err());
        let mut last = 0.0;
        for k in 1..10 {
            let a = hexagon_side(0.3 * k as f64, 1.0, 1.5).unwrap();
            assert!(a > last);
            last = a;
        }
    }

    #[test]
    fn boundary_arc_closed_form() {
        let (a, d, e) = (2.5f64, 3.0f64, 1.7f64);
        let alpha = hexagon_side(d.acosh(), a.acosh(), e.acosh()).unwrap();
        let want = (a * e + d) / ((a * a - 1.0).sqrt() * (e * e - 1.0).sqrt());
        assert_relative_eq!(alpha.cosh(), want, max_relative = 1e-13);
    }

    #[test]
    fn hexagon_flip_agrees_with_flip_value() {
        let v = [2.0, 3.0, 4.0, 5.0, 6.0];
        let x = hexagon_flip_length(v.map(f64::acosh)).unwrap();
        let f = ptolemy_f(2.0, 3.0, 4.0, 5.0, 6.0).unwrap();
        assert_relative_eq!(x, f.acosh(), max_relative = 1e-12);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let pk = fixtures::torus2_equilateral().with_radii(vec![1.0, 1.4]).unwrap();
        let cfg = FlowConfig::default();
        let c = canonical_form(&pk, &cfg).unwrap();
        let cc = canonical_form(&c, &cfg).unwrap();
        assert!(packings_agree(&c, &cc, 1e-9));
        assert!(equivalent(&pk, &c, 1e-8, &cfg).unwrap());
    }
}
