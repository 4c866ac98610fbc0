//! Discrete curvature, its Jacobian in log-radius coordinates, the Ricci
//! potential, and the discrete Ricci flow with Delaunay surgery.
//!
//! Variables are `u_i = log r_i`. After every accepted step the packing is
//! made weighted Delaunay again by flipping, which keeps the conformal class.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delaunay::{delaunayize, DelaunayConfig};
use crate::error::{Error, Result};
use crate::mesh::Triangulation;
use crate::packing::Packing;

/// Cone angles and curvatures `K_i = 2π − φ_i`, with the Jacobian `∂K/∂u`
/// when requested.
#[derive(Clone, Debug)]
pub struct CurvatureState {
    pub cone_angles: Vec<f64>,
    pub curvatures: Vec<f64>,
    pub jacobian: Option<CsrMatrix<f64>>,
}

/// Sums corner angles per vertex; a self-glued face contributes once per
/// corner.
pub fn curvature(pk: &Packing) -> Result<CurvatureState> {
    let n = pk.tri().num_vertices();
    let mut cone = vec![0.0; n];
    for (f, face) in pk.tri().faces().iter().enumerate() {
        let g = pk.face_geometry(f)?;
        for c in 0..3 {
            cone[face[c]] += g.angles[c];
        }
    }
    let curvatures = cone.iter().map(|phi| TAU - phi).collect();
    Ok(CurvatureState {
        cone_angles: cone,
        curvatures,
        jacobian: None,
    })
}

/// [`curvature`] together with [`curvature_jacobian`].
pub fn curvature_with_jacobian(pk: &Packing) -> Result<CurvatureState> {
    let mut st = curvature(pk)?;
    st.jacobian = Some(curvature_jacobian(pk)?);
    Ok(st)
}

/// `∂K/∂u` assembled from per-face blocks. For corners `a ≠ b` of a face
/// with third corner `c`, the block entry is `−h_c / l_c`, where `l_c` is the
/// side joining `a` and `b` and `h_c` its signed distance to the power
/// center; diagonals complete each row to zero. The matrix is symmetric and
/// positive semidefinite with the constants in its kernel.
pub fn curvature_jacobian(pk: &Packing) -> Result<CsrMatrix<f64>> {
    let n = pk.tri().num_vertices();
    let mut coo = CooMatrix::new(n, n);
    for (f, face) in pk.tri().faces().iter().enumerate() {
        let g = pk.face_geometry(f)?;
        let w = [0, 1, 2].map(|c| g.dual[c] / g.lengths[c]);
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let c = 3 - a - b;
                coo.push(face[a], face[b], -w[c]);
                coo.push(face[a], face[a], w[c]);
            }
        }
    }
    Ok(CsrMatrix::from(&coo))
}

pub(crate) fn dense(m: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for (i, j, v) in m.triplet_iter() {
        out[(i, j)] += *v;
    }
    out
}

/// `Σ K_i − 2πχ`.
pub fn gauss_bonnet_residual(tri: &Triangulation, curvatures: &[f64]) -> f64 {
    curvatures.iter().sum::<f64>() - TAU * tri.euler_characteristic() as f64
}

/// `K̄_i = 2πχ / n` at every vertex.
pub fn uniform_target(tri: &Triangulation) -> Vec<f64> {
    let n = tri.num_vertices();
    vec![TAU * tri.euler_characteristic() as f64 / n as f64; n]
}

/// Accepts a target with one entry per vertex, every entry below `2π`, and
/// total `2πχ` within `1e-9`.
pub fn validate_target(tri: &Triangulation, target: &[f64]) -> Result<()> {
    let invalid = |reason: String| Err(Error::TargetInvalid { reason });
    if target.len() != tri.num_vertices() {
        return invalid(format!(
            "{} entries for {} vertices",
            target.len(),
            tri.num_vertices()
        ));
    }
    if let Some(i) = target.iter().position(|k| !k.is_finite() || *k >= TAU) {
        return invalid(format!("entry {i} is {} but must be below 2π", target[i]));
    }
    let gb = gauss_bonnet_residual(tri, target);
    if gb.abs() > 1e-9 {
        return invalid(format!("total differs from 2πχ by {gb:e}"));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Euler,
    #[default]
    Newton,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "euler" => Ok(Method::Euler),
            "newton" => Ok(Method::Newton),
            other => Err(format!("unknown method {other:?}; expected euler or newton")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowConfig {
    pub method: Method,
    /// Initial Euler step; Newton always starts from the full step.
    pub step: f64,
    /// Stop once `max |K − K̄|` falls below this.
    pub tol: f64,
    pub max_iters: usize,
    /// Sufficient-decrease constant of the backtracking line search.
    pub armijo: f64,
    /// Smallest step tried before giving up.
    pub min_step: f64,
    pub flips: DelaunayConfig,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            method: Method::Newton,
            step: 0.2,
            tol: 1e-10,
            max_iters: 200,
            armijo: 1e-4,
            min_step: 1e-12,
            flips: DelaunayConfig::default(),
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("step", self.step),
            ("tol", self.tol),
            ("armijo", self.armijo),
            ("min_step", self.min_step),
            ("flip tol", self.flips.tol),
        ] {
            crate::error::check_positive(what, v)?;
        }
        Ok(())
    }
}

/// One iteration of a flow run. Record 0 describes the starting packing
/// after its initial surgery.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iter: usize,
    pub max_err: f64,
    pub merit: f64,
    pub flips: usize,
    pub step: f64,
    pub edges: usize,
    pub gauss_bonnet: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FlowTrace {
    pub records: Vec<TraceRecord>,
}

impl FlowTrace {
    /// Number of accepted steps.
    pub fn iterations(&self) -> usize {
        self.records.last().map_or(0, |r| r.iter)
    }

    pub fn total_flips(&self) -> usize {
        self.records.iter().map(|r| r.flips).sum()
    }

    pub fn final_error(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.max_err)
    }

    /// Columns `iter,max_err,merit,flips,step`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["iter", "max_err", "merit", "flips", "step"]).unwrap();
        for r in &self.records {
            w.write_record([
                r.iter.to_string(),
                r.max_err.to_string(),
                r.merit.to_string(),
                r.flips.to_string(),
                r.step.to_string(),
            ])
            .unwrap();
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap()
    }
}

struct Eval {
    pk: Packing,
    grad: Vec<f64>,
    merit: f64,
    max_err: f64,
    gauss_bonnet: f64,
    flips: usize,
}

fn evaluate(base: &Packing, u: &[f64], target: &[f64], flips: &DelaunayConfig) -> Result<Eval> {
    let (pk, log) = delaunayize(&base.with_log_radii(u)?, flips)?;
    let k = curvature(&pk)?.curvatures;
    let grad: Vec<f64> = k.iter().zip(target).map(|(k, t)| k - t).collect();
    Ok(Eval {
        merit: 0.5 * grad.iter().map(|g| g * g).sum::<f64>(),
        max_err: grad.iter().fold(0.0, |m, g| m.max(g.abs())),
        gauss_bonnet: gauss_bonnet_residual(pk.tri(), &k),
        flips: log.len(),
        grad,
        pk,
    })
}

fn record(trace: &mut FlowTrace, iter: usize, ev: &Eval, step: f64) {
    trace.records.push(TraceRecord {
        iter,
        max_err: ev.max_err,
        merit: ev.merit,
        flips: ev.flips,
        step,
        edges: ev.pk.tri().num_edges(),
        gauss_bonnet: ev.gauss_bonnet,
    });
}

fn newton_direction(pk: &Packing, grad: &[f64]) -> Result<Vec<f64>> {
    let n = grad.len();
    let mut a = dense(&curvature_jacobian(pk)?);
    a.add_scalar_mut(1.0 / n as f64);
    let rhs = DVector::from_iterator(n, grad.iter().map(|g| -g));
    let delta = match a.clone().cholesky() {
        Some(ch) => ch.solve(&rhs),
        None => {
            let eig = a.clone().symmetric_eigen();
            let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
            let dim = eig.eigenvalues.iter().filter(|&&l| l <= 1e-12 * scale).count();
            if dim > 0 {
                return Err(Error::SingularBeyondKernel { dim });
            }
            a.lu().solve(&rhs).ok_or(Error::SingularBeyondKernel { dim: 1 })?
        }
    };
    let mean = delta.sum() / n as f64;
    Ok(delta.iter().map(|d| d - mean).collect())
}

fn run(pk: &Packing, target: &[f64], cfg: &FlowConfig, method: Method) -> Result<(Packing, FlowTrace)> {
    cfg.validate()?;
    validate_target(pk.tri(), target)?;
    let mut u = pk.log_radii();
    let mut cur = evaluate(pk, &u, target, &cfg.flips)?;
    let mut trace = FlowTrace::default();
    record(&mut trace, 0, &cur, 0.0);
    let mut iter = 0;
    while cur.max_err >= cfg.tol {
        if iter >= cfg.max_iters {
            return Err(Error::MaxIterations {
                iterations: iter,
                max_err: cur.max_err,
            });
        }
        let (dir, mut t) = match method {
            Method::Newton => (newton_direction(&cur.pk, &cur.grad)?, 1.0),
            Method::Euler => (cur.grad.iter().map(|g| -g).collect(), cfg.step),
        };
        let accepted = loop {
            let trial_u: Vec<f64> = u.iter().zip(&dir).map(|(x, d)| x + t * d).collect();
            let trial = evaluate(&cur.pk, &trial_u, target, &cfg.flips)?;
            let ok = match method {
                Method::Newton => trial.merit <= (1.0 - 2.0 * cfg.armijo * t) * cur.merit,
                Method::Euler => trial.merit <= cur.merit,
            };
            if ok {
                u = trial_u;
                break trial;
            }
            t *= 0.5;
            if t < cfg.min_step {
                return Err(Error::LineSearchFailed {
                    iteration: iter,
                    max_err: cur.max_err,
                });
            }
        };
        iter += 1;
        record(&mut trace, iter, &accepted, t);
        cur = accepted;
    }
    Ok((cur.pk, trace))
}

/// Explicit Euler steps `u ← u − step (K − K̄)`, halving the step whenever
/// the merit `½‖K − K̄‖²` would increase.
pub fn flow_euler(pk: &Packing, target: &[f64], cfg: &FlowConfig) -> Result<(Packing, FlowTrace)> {
    run(pk, target, cfg, Method::Euler)
}

/// Damped Newton iteration on the Jacobian of the current triangulation.
/// The constants are removed from the kernel by solving with
/// `J + 11ᵀ/n` and projecting the step to `Σ δ_i = 0`.
pub fn flow_newton(pk: &Packing, target: &[f64], cfg: &FlowConfig) -> Result<(Packing, FlowTrace)> {
    run(pk, target, cfg, Method::Newton)
}

/// Runs the method selected in `cfg`.
pub fn flow(pk: &Packing, target: &[f64], cfg: &FlowConfig) -> Result<(Packing, FlowTrace)> {
    run(pk, target, cfg, cfg.method)
}

/// Shifts log radii so they sum to zero.
pub fn normalize_scale(pk: &Packing) -> Packing {
    let u = pk.log_radii();
    let mean = u.iter().sum::<f64>() / u.len() as f64;
    let shifted: Vec<f64> = u.iter().map(|x| x - mean).collect();
    pk.with_log_radii(&shifted).expect("finite radii stay valid")
}

const GAUSS3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// Change of the Ricci potential `∫ Σ (K_i − K̄_i) du_i` along the straight
/// segment from `u_from` to `u_to`, by three-point Gauss–Legendre rules on
/// `segments` equal pieces. Surgery runs at every node. Returns the value and
/// the packing reached at the last node.
pub fn ricci_potential_delta(
    pk: &Packing,
    target: &[f64],
    u_from: &[f64],
    u_to: &[f64],
    segments: usize,
) -> Result<f64> {
    Ok(potential_segment(pk, target, u_from, u_to, segments, &DelaunayConfig::default())?.0)
}

fn potential_segment(
    pk: &Packing,
    target: &[f64],
    u_from: &[f64],
    u_to: &[f64],
    segments: usize,
    flips: &DelaunayConfig,
) -> Result<(f64, Packing)> {
    let n = pk.tri().num_vertices();
    for (what, v) in [("u_from", u_from), ("u_to", u_to), ("target", target)] {
        if v.len() != n {
            return Err(Error::LengthMismatch {
                what,
                got: v.len(),
                expected: n,
            });
        }
    }
    let du: Vec<f64> = u_to.iter().zip(u_from).map(|(b, a)| b - a).collect();
    let mut cur = pk.clone();
    if du.iter().all(|d| *d == 0.0) || segments == 0 {
        return Ok((0.0, cur));
    }
    let width = 1.0 / segments as f64;
    let mut total = 0.0;
    for s in 0..segments {
        let mid = (s as f64 + 0.5) * width;
        for (x, w) in GAUSS3 {
            let t = mid + 0.5 * width * x;
            let u: Vec<f64> = u_from.iter().zip(&du).map(|(a, d)| a + t * d).collect();
            let ev = evaluate(&cur, &u, target, flips)?;
            let dot: f64 = ev.grad.iter().zip(&du).map(|(g, d)| g * d).sum();
            total += 0.5 * width * w * dot;
            cur = ev.pk;
        }
    }
    Ok((total, cur))
}

/// Ricci potential change along a polyline through `points`, carrying the
/// packing, and hence its triangulation, from one segment to the next.
pub fn ricci_potential_polyline(
    pk: &Packing,
    target: &[f64],
    points: &[Vec<f64>],
    segments: usize,
) -> Result<f64> {
    let mut cur = pk.clone();
    let mut total = 0.0;
    for w in points.windows(2) {
        let (v, next) = potential_segment(&cur, target, &w[0], &w[1], segments, &DelaunayConfig::default())?;
        total += v;
        cur = next;
    }
    Ok(total)
}

/// How starting packings are drawn in [`verify_uniqueness`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    /// Multiply each radius by `exp(U(−spread, spread))`; stays in the class.
    Radii { spread: f64 },
    /// Multiply each inversive distance by `1 + U(−rel, rel)`; leaves the class.
    InversiveDistances { rel: f64 },
}

/// Whether two packings on the same labelled surface have matching radii and
/// the same faces with matching inversive distances, up to `tol`. Faces are
/// matched as corner cycles, so different edge numberings compare equal.
pub fn packings_agree(a: &Packing, b: &Packing, tol: f64) -> bool {
    let (ta, tb) = (a.tri(), b.tri());
    if ta.num_vertices() != tb.num_vertices() || ta.num_faces() != tb.num_faces() {
        return false;
    }
    if a.radii().iter().zip(b.radii()).any(|(x, y)| (x - y).abs() > tol) {
        return false;
    }
    let corners = |p: &Packing, f: usize| {
        [0, 1, 2].map(|c| (p.tri().origin(3 * f + c), p.inv_dist()[p.tri().edge(3 * f + c)]))
    };
    let mut used = vec![false; tb.num_faces()];
    'faces: for fa in 0..ta.num_faces() {
        let ca = corners(a, fa);
        for (fb, taken) in used.iter_mut().enumerate() {
            if *taken {
                continue;
            }
            let cb = corners(b, fb);
            let hit = (0..3).any(|rot| {
                (0..3).all(|c| {
                    let (va, ia) = ca[c];
                    let (vb, ib) = cb[(c + rot) % 3];
                    va == vb && (ia - ib).abs() <= tol * ia.abs().max(1.0)
                })
            });
            if hit {
                *taken = true;
                continue 'faces;
            }
        }
        return false;
    }
    true
}

/// Solves from `trials` perturbed starts and checks that the normalized
/// solutions agree to `tol`.
pub fn verify_uniqueness(
    pk: &Packing,
    target: &[f64],
    trials: usize,
    tol: f64,
    perturbation: Perturbation,
    seed: u64,
    cfg: &FlowConfig,
) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first: Option<Packing> = None;
    for _ in 0..trials {
        let start = match perturbation {
            Perturbation::Radii { spread } => {
                let r = pk
                    .radii()
                    .iter()
                    .map(|r| r * rng.random_range(-spread..=spread).exp())
                    .collect();
                pk.with_radii(r)?
            }
            Perturbation::InversiveDistances { rel } => {
                let inv = pk
                    .inv_dist()
                    .iter()
                    .map(|i| (i * (1.0 + rng.random_range(-rel..=rel))).max(1.0 + 1e-6))
                    .collect();
                pk.with_inv_dist(inv)?
            }
        };
        let (sol, _) = flow_newton(&start, target, cfg)?;
        let sol = normalize_scale(&sol);
        match &first {
            None => first = Some(sol),
            Some(f) => {
                if !packings_agree(f, &sol, tol) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
