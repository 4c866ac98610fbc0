//! The weighted Delaunay predicate, the Ptolemy-type flip value for inversive
//! distances, boundary loci of the predicate, and the flip loop that makes a
//! packing weighted Delaunay.
//!
//! Hinge notation follows [`HingeData`]: `a = I_ki, b = I_il, c = I_lj,
//! d = I_jk, e = I_ij` and radii `p = r_k, q = r_i, r = r_l, s = r_j`. The
//! flip replaces `e` by the value `f` on the other diagonal `e_kl`.

use serde::{Deserialize, Serialize};

use crate::error::{check_above_one, check_positive, Error, Result};
use crate::packing::{discriminant, BoundaryMode, HingeData, Packing, BOUNDARY_EPS};

fn check_five(vals: [f64; 5]) -> Result<()> {
    for v in vals {
        check_above_one("inversive distance", v)?;
    }
    Ok(())
}

/// Inversive distance of the new diagonal after flipping a hinge:
/// `(ab + cd + ace + bde + √Δ_ade √Δ_bce) / (e² − 1)`.
pub fn ptolemy_f(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<f64> {
    check_five([a, b, c, d, e])?;
    Ok(ptolemy_f_unchecked(a, b, c, d, e))
}

#[inline]
fn ptolemy_f_unchecked(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    let root = (discriminant(a, d, e) * discriminant(b, c, e)).sqrt();
    (a * b + c * d + a * c * e + b * d * e + root) / ((e - 1.0) * (e + 1.0))
}

fn residual_terms(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> [f64; 17] {
    [
        a * a,
        b * b,
        c * c,
        d * d,
        e * e,
        f * f,
        2.0 * a * d * e,
        2.0 * b * c * e,
        2.0 * a * b * f,
        2.0 * c * d * f,
        2.0 * a * b * c * d,
        2.0 * a * c * e * f,
        2.0 * b * d * e * f,
        -(a * a * c * c),
        -(b * b * d * d),
        -(e * e * f * f),
        -1.0,
    ]
}

/// Left side of the polynomial relation satisfied by the six inversive
/// distances of a hinge and its flip; zero exactly when `f` is the flip value.
pub fn ptolemy_residual(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> f64 {
    residual_terms(a, b, c, d, e, f).iter().sum()
}

/// Largest term magnitude of [`ptolemy_residual`], for relative tolerances.
pub fn ptolemy_residual_scale(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> f64 {
    residual_terms(a, b, c, d, e, f)
        .iter()
        .fold(0.0, |m, t| m.max(t.abs()))
}

/// `(√Δ_abf, √Δ_cdf)` expressed through the discriminants of the old faces.
pub fn delta_propagation(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<(f64, f64)> {
    check_five([a, b, c, d, e])?;
    Ok(delta_propagation_unchecked(a, b, c, d, e))
}

#[inline]
fn delta_propagation_unchecked(a: f64, b: f64, c: f64, d: f64, e: f64) -> (f64, f64) {
    let sb = discriminant(b, c, e).sqrt();
    let sa = discriminant(a, d, e).sqrt();
    let den = (e - 1.0) * (e + 1.0);
    (
        ((d + a * e) * sb + (c + b * e) * sa) / den,
        ((a + d * e) * sb + (b + c * e) * sa) / den,
    )
}

/// The four terms of the weighted Delaunay inequality,
/// `[√Δ_cdf/q, √Δ_abf/s, √Δ_bce/p, √Δ_ade/r]`.
fn slack_terms(h: &HingeData) -> [f64; 4] {
    let (abf, cdf) = delta_propagation_unchecked(h.a, h.b, h.c, h.d, h.e);
    [
        cdf / h.q,
        abf / h.s,
        discriminant(h.b, h.c, h.e).sqrt() / h.p,
        discriminant(h.a, h.d, h.e).sqrt() / h.r,
    ]
}

/// Signed slack of the weighted Delaunay inequality
/// `√Δ_cdf/q + √Δ_abf/s − √Δ_bce/p − √Δ_ade/r`; non-negative means the
/// hinge is locally weighted Delaunay. Triangle inequalities are not needed.
pub fn is_local_delaunay(h: &HingeData) -> Result<f64> {
    check_five(h.inv())?;
    for x in h.radii() {
        check_positive("radius", x)?;
    }
    let [t0, t1, t2, t3] = slack_terms(h);
    Ok((t0 + t1) - (t2 + t3))
}

/// Magnitude against which a slack is compared.
pub fn slack_scale(h: &HingeData) -> f64 {
    slack_terms(h).iter().fold(0.0, |m, t| m.max(t.abs()))
}

/// The radius `p = r_k` placing the hinge exactly on the Delaunay wall.
pub fn delaunay_equality_p0(
    q: f64,
    r: f64,
    s: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
) -> Result<f64> {
    check_five([a, b, c, d, e])?;
    for x in [q, r, s] {
        check_positive("radius", x)?;
    }
    let (abf, cdf) = delta_propagation_unchecked(a, b, c, d, e);
    let denominator = cdf / q + abf / s - discriminant(a, d, e).sqrt() / r;
    if !(denominator > 0.0) {
        return Err(Error::NonpositiveDenominator { denominator });
    }
    Ok(discriminant(b, c, e).sqrt() / denominator)
}

/// The radius `p = r_k` at which the face `f_ijk` collapses
/// (`|v_k v_i| + |v_k v_j| = |v_i v_j|`).
pub fn degenerate_p0(q: f64, s: f64, a: f64, d: f64, e: f64) -> Result<f64> {
    for v in [a, d, e] {
        check_above_one("inversive distance", v)?;
    }
    check_positive("radius", q)?;
    check_positive("radius", s)?;
    let qs = (q * q + s * s + 2.0 * e * q * s).sqrt();
    let den = qs * discriminant(a, d, e).sqrt() + (a * e + d) * q + (d * e + a) * s;
    Ok((e * e - 1.0) * q * s / den)
}

/// Four Delaunay expressions for equal weights, each written as left side
/// minus right side:
///
/// 0. `(1+a+d−e)√((1+b)(1+c)) + (1+b+c−e)√((1+a)(1+d))`
/// 1. `(1+a+d−e)√Δ_bce + (1+b+c−e)√Δ_ade`
/// 2. `√((1+a)(1+d)) + √((1+b)(1+c)) − √((1+e)(1+f))`
/// 3. `√Δ_abf + √Δ_cdf − √Δ_ade − √Δ_bce`
///
/// Expressions 0, 1 and 3 share their sign. Expression 2 vanishes in the
/// symmetric equality case but is not equivalent to the others: when
/// `a = b = c = d` it is symmetric under exchanging `e` and `f`, which the
/// flip does, so it cannot change sign across the wall.
pub fn ushijima_values(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<[f64; 4]> {
    check_five([a, b, c, d, e])?;
    let f = ptolemy_f_unchecked(a, b, c, d, e);
    let (abf, cdf) = delta_propagation_unchecked(a, b, c, d, e);
    let sade = discriminant(a, d, e).sqrt();
    let sbce = discriminant(b, c, e).sqrt();
    let rad = ((1.0 + a) * (1.0 + d)).sqrt();
    let rbc = ((1.0 + b) * (1.0 + c)).sqrt();
    Ok([
        (1.0 + a + d - e) * rbc + (1.0 + b + c - e) * rad,
        (1.0 + a + d - e) * sbce + (1.0 + b + c - e) * sade,
        rad + rbc - ((1.0 + e) * (1.0 + f)).sqrt(),
        (abf + cdf) - (sade + sbce),
    ])
}

/// Signs (`-1`, `0`, `1`) of [`ushijima_values`].
pub fn ushijima_signs(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<[i8; 4]> {
    Ok(ushijima_values(a, b, c, d, e)?.map(|v| {
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    }))
}

/// One flip performed by [`delaunayize`]: the edge id and its inversive
/// distance before and after.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipRecord {
    pub edge: usize,
    pub old: f64,
    pub new: f64,
}

/// Flips `edge`, giving the new diagonal the Ptolemy flip value.
pub fn flip_edge(pk: &Packing, edge: usize) -> Result<(Packing, FlipRecord)> {
    let h = pk.hinge_data(edge)?;
    let f = ptolemy_f(h.a, h.b, h.c, h.d, h.e)?;
    if !(f > 1.0 + BOUNDARY_EPS) {
        return Err(Error::Domain {
            what: "flipped inversive distance",
            value: f,
        });
    }
    let tri = pk.tri().flip(edge)?;
    let mut inv = pk.inv_dist().to_vec();
    inv[edge] = f;
    let mut out = pk.clone();
    out.replace(tri, inv);
    Ok((
        out,
        FlipRecord {
            edge,
            old: h.e,
            new: f,
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DelaunayConfig {
    /// An edge flips when its slack is below `−tol · scale`, where `scale`
    /// is the largest term of its inequality.
    pub tol: f64,
    /// Maximum number of flips; `None` means `100 · |E|`.
    pub budget: Option<usize>,
}

impl Default for DelaunayConfig {
    fn default() -> Self {
        DelaunayConfig {
            tol: 1e-12,
            budget: None,
        }
    }
}

/// First edge whose slack is below `−tol · scale`, with that slack.
pub fn first_violation(pk: &Packing, tol: f64) -> Result<Option<(usize, f64)>> {
    for e in 0..pk.tri().num_edges() {
        let h = pk.hinge_data(e)?;
        let slack = is_local_delaunay(&h)?;
        if slack < -tol * slack_scale(&h) {
            return Ok(Some((e, slack)));
        }
    }
    Ok(None)
}

/// Flips edges in ascending id order, restarting the scan after every flip,
/// until no edge violates the weighted Delaunay inequality. Every face of the
/// result is then checked against the triangle inequality.
pub fn delaunayize(pk: &Packing, cfg: &DelaunayConfig) -> Result<(Packing, Vec<FlipRecord>)> {
    let budget = cfg.budget.unwrap_or(100 * pk.tri().num_edges());
    let mut cur = pk.clone();
    let mut log = Vec::new();
    while let Some((edge, _)) = first_violation(&cur, cfg.tol)? {
        if log.len() >= budget {
            return Err(Error::FlipBudgetExceeded { budget });
        }
        let (next, rec) = flip_edge(&cur, edge)?;
        cur = next;
        log.push(rec);
    }
    for f in 0..cur.tri().num_faces() {
        cur.face_geometry(f)?;
    }
    Ok((cur, log))
}

fn central_gradient(x: [f64; 9], step: f64, g: impl Fn(&HingeData) -> Result<f64>) -> Result<[f64; 9]> {
    // Fourth-order central stencil; the wall sits where F is strongly curved
    // in p, so the second-order one is dominated by truncation error.
    let mut out = [0.0; 9];
    for (m, o) in out.iter_mut().enumerate() {
        let at = |k: f64| {
            let mut y = x;
            y[m] += k * step;
            g(&from_vars(y))
        };
        *o = (8.0 * (at(1.0)? - at(-1.0)?) - (at(2.0)? - at(-2.0)?)) / (12.0 * step);
    }
    Ok(out)
}

fn to_vars(h: &HingeData) -> [f64; 9] {
    [h.p, h.q, h.r, h.s, h.a, h.b, h.c, h.d, h.e]
}

fn from_vars(x: [f64; 9]) -> HingeData {
    HingeData::new([x[4], x[5], x[6], x[7], x[8]], [x[0], x[1], x[2], x[3]])
}

/// Largest componentwise gap between central-difference gradients of the
/// developed inversive distance `F` and of the flip value `f`, over the
/// variables `(p, q, r, s, a, b, c, d, e)`.
pub fn gradient_deviation(h: &HingeData, step: f64) -> Result<f64> {
    h.validate(BoundaryMode::Strict)?;
    check_positive("finite-difference step", step)?;
    let x = to_vars(h);
    let big = central_gradient(x, step, |hd| Ok(crate::packing::develop_hinge(hd)?.big_f))?;
    let small = central_gradient(x, step, |hd| ptolemy_f(hd.a, hd.b, hd.c, hd.d, hd.e))?;
    Ok(big
        .iter()
        .zip(&small)
        .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

/// [`gradient_deviation`] evaluated on the Delaunay wall, with `p` set by
/// [`delaunay_equality_p0`].
#[allow(non_snake_case)]
pub fn dF_df_check(
    q: f64,
    r: f64,
    s: f64,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    step: f64,
) -> Result<f64> {
    let p = delaunay_equality_p0(q, r, s, a, b, c, d, e)?;
    gradient_deviation(&HingeData::new([a, b, c, d, e], [p, q, r, s]), step)
}
