//! Randomized residual suites: the Ptolemy relation, the discriminant
//! update, the wall gradient identity and the curvature Jacobian against
//! finite differences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::delaunay::{delta_propagation, gradient_deviation, ptolemy_f, ptolemy_residual, ptolemy_residual_scale};
use crate::flow::{curvature, curvature_jacobian, dense};
use crate::packing::{discriminant, Packing};
use crate::sampling;
use crate::{fixtures, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub samples: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

fn suite(name: &'static str, samples: usize, max_residual: f64, threshold: f64) -> SuiteResult {
    SuiteResult {
        name,
        samples,
        max_residual,
        threshold,
        passed: max_residual < threshold,
    }
}

/// Worst relative Ptolemy residual over `samples` hinges with entries in `(1, 50]`.
pub fn ptolemy_suite(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let [a, b, c, d, e] = sampling::inversive_five(rng, 50.0);
        let f = ptolemy_f(a, b, c, d, e)?;
        let rel = ptolemy_residual(a, b, c, d, e, f).abs() / ptolemy_residual_scale(a, b, c, d, e, f);
        worst = worst.max(rel);
    }
    Ok(worst)
}

/// Worst relative gap between the propagated discriminants and those of the
/// flipped faces.
pub fn delta_suite(rng: &mut ChaCha8Rng, samples: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let [a, b, c, d, e] = sampling::inversive_five(rng, 50.0);
        let f = ptolemy_f(a, b, c, d, e)?;
        let (x, y) = delta_propagation(a, b, c, d, e)?;
        let rx = discriminant(a, b, f).sqrt();
        let ry = discriminant(c, d, f).sqrt();
        worst = worst.max(((x - rx) / rx).abs()).max(((y - ry) / ry).abs());
    }
    Ok(worst)
}

/// Worst gradient gap between the developed and flipped inversive distances
/// at random wall hinges.
pub fn wall_gradient_suite(rng: &mut ChaCha8Rng, samples: usize, step: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let h = sampling::wall_hinge(rng);
        worst = worst.max(gradient_deviation(&h, step)?);
    }
    Ok(worst)
}

/// Meshes with several vertices (so the Jacobian has off-diagonal terms).
pub fn jacobian_meshes() -> Vec<crate::Triangulation> {
    let t2 = fixtures::torus2();
    vec![
        t2.split_face(0).unwrap().0,
        t2.split_face(0).unwrap().0.split_face(3).unwrap().0,
        fixtures::genus2().split_face(2).unwrap().0,
        fixtures::sphere3().split_face(0).unwrap().0.split_face(1).unwrap().0,
    ]
}

/// `max |J_fd − J| / max |J|` with central differences of step `step`.
pub fn jacobian_deviation(pk: &Packing, step: f64) -> Result<f64> {
    let j = dense(&curvature_jacobian(pk)?);
    let u = pk.log_radii();
    let n = u.len();
    let mut worst: f64 = 0.0;
    for col in 0..n {
        let mut hi = u.clone();
        let mut lo = u.clone();
        hi[col] += step;
        lo[col] -= step;
        let kh = curvature(&pk.with_log_radii(&hi)?)?.curvatures;
        let kl = curvature(&pk.with_log_radii(&lo)?)?.curvatures;
        for row in 0..n {
            let fd = (kh[row] - kl[row]) / (2.0 * step);
            worst = worst.max((fd - j[(row, col)]).abs());
        }
    }
    Ok(worst / j.amax().max(f64::MIN_POSITIVE))
}

/// Worst Jacobian deviation over random Delaunay-interior packings.
pub fn jacobian_suite(rng: &mut ChaCha8Rng, samples: usize, step: f64) -> Result<f64> {
    let meshes = jacobian_meshes();
    let mut worst: f64 = 0.0;
    for s in 0..samples {
        let pk = sampling::interior_packing(rng, &meshes[s % meshes.len()], 1e-3);
        worst = worst.max(jacobian_deviation(&pk, step)?);
    }
    Ok(worst)
}

/// Runs every suite. The geometric suites use at most 100 samples each.
pub fn run_selftest(samples: usize, seed: u64) -> Result<SelftestReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let heavy = samples.min(100);
    Ok(SelftestReport {
        seed,
        suites: vec![
            suite("ptolemy_residual", samples, ptolemy_suite(&mut rng, samples)?, 1e-10),
            suite("delta_propagation", samples, delta_suite(&mut rng, samples)?, 1e-10),
            suite("wall_gradient", heavy, wall_gradient_suite(&mut rng, heavy, 1e-5)?, 1e-4),
            suite("jacobian_fd", heavy, jacobian_suite(&mut rng, heavy, 1e-6)?, 1e-5),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_selftest_passes() {
        let report = run_selftest(50, 7).unwrap();
        for s in &report.suites {
            assert!(s.passed, "{} failed: {:e}", s.name, s.max_residual);
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = run_selftest(20, 3).unwrap();
        let b = run_selftest(20, 3).unwrap();
        for (x, y) in a.suites.iter().zip(&b.suites) {
            assert_eq!(x.max_residual, y.max_residual);
        }
    }
}
