//! Brute-force grid oracles: slow, independent reference answers used to
//! cross-validate every exact routine.
//!
//! Membership along a grid direction is decided by LP feasibility over the
//! raw generators — deliberately not the cached halfspace description or the
//! face/vertex enumeration that the exact paths use. Grids are dense angular
//! sweeps in 2D and Fibonacci sphere lattices in 3D; base samples and the
//! normalized generators are appended so thin pieces (single rays) are never
//! missed.

use std::f64::consts::PI;

use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::augmented::AugPair;
use crate::base::sample_base;
use crate::cones::ConeUnion;
use crate::geometry::{Tolerances, Vector};
use crate::{lp, Error, Result};

/// Grid resolution and seed for the oracles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    pub grid_count: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            grid_count: 100_000,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn with_grid(grid_count: usize, seed: u64) -> Result<Self> {
        if grid_count < 1000 {
            return Err(Error::InvalidInput(
                "oracle grids need at least 1000 points".into(),
            ));
        }
        Ok(OracleConfig { grid_count, seed })
    }

    /// Default resolutions: 10⁵ points in 2D, 10⁶ (the cap) in 3D.
    pub fn default_for_dim(dim: usize, seed: u64) -> Self {
        let grid_count = if dim <= 2 { 100_000 } else { 1_000_000 };
        OracleConfig { grid_count, seed }
    }
}

/// Base points of a cone found by a dense direction grid; reusable across
/// many functional queries against the same cone.
pub struct GridBase {
    points: Vec<Vector>,
}

impl GridBase {
    pub fn new(k: &ConeUnion, cfg: &OracleConfig, tol: &Tolerances) -> Result<Self> {
        if cfg.grid_count < 1000 {
            return Err(Error::InvalidInput(
                "oracle grids need at least 1000 points".into(),
            ));
        }
        let ns = k.norm_spec();
        let n = ns.dim();
        let dirs: Vec<Vector> = match n {
            2 => (0..cfg.grid_count)
                .map(|i| {
                    let t = 2.0 * PI * (i as f64) / (cfg.grid_count as f64);
                    DVector::from_column_slice(&[t.cos(), t.sin()])
                })
                .collect(),
            3 => {
                let golden = PI * (3.0 - 5.0_f64.sqrt());
                (0..cfg.grid_count)
                    .map(|i| {
                        let z = 1.0 - 2.0 * (i as f64 + 0.5) / (cfg.grid_count as f64);
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        let t = golden * i as f64;
                        DVector::from_column_slice(&[r * t.cos(), r * t.sin(), z])
                    })
                    .collect()
            }
            _ => {
                return Err(Error::UnsupportedScale(
                    "grid oracles cover dimensions 2 and 3 only".into(),
                ))
            }
        };

        let mut points = Vec::new();
        for d in dirs {
            let mut member = false;
            for p in k.pieces() {
                if lp::in_generated_cone(p.generators(), &d, tol.eps_mem, tol.max_iter)? {
                    member = true;
                    break;
                }
            }
            if member {
                let nd = ns.norm(&d)?;
                points.push(d / nd);
            }
        }
        // Thin pieces (rays, low-dimensional cones) can slip between grid
        // directions; base samples and generators plug the holes.
        points.extend(sample_base(k, 2048, cfg.seed.wrapping_add(1), tol)?);
        Ok(GridBase { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min_of(&self, c: &Vector) -> f64 {
        self.points
            .iter()
            .map(|p| c.dot(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Grid minimum of `⟨c, ·⟩` over the base — an upper bound on the true
/// minimum that tightens with grid size.
pub fn oracle_mu(k: &ConeUnion, c: &Vector, cfg: &OracleConfig, tol: &Tolerances) -> Result<f64> {
    let grid = GridBase::new(k, cfg, tol)?;
    Ok(grid.min_of(c))
}

/// Exhaustive sign check of the separating function on the sampled bases of
/// `A` and `−K`: true iff no violation of the strictness margins.
pub fn oracle_separation(
    k: &ConeUnion,
    a: &ConeUnion,
    xstar: &Vector,
    alpha: f64,
    cfg: &OracleConfig,
    tol: &Tolerances,
) -> Result<bool> {
    let grid_a = GridBase::new(a, cfg, tol)?;
    let grid_k = GridBase::new(k, cfg, tol)?;
    let min_a = grid_a
        .points
        .iter()
        .map(|p| xstar.dot(p) + alpha)
        .fold(f64::INFINITY, f64::min);
    let max_k = grid_k
        .points
        .iter()
        .map(|p| {
            let q = -p;
            xstar.dot(&q) + alpha
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(min_a > tol.eps_sep && max_k < -tol.eps_sep)
}

/// Direct grid test of membership in the algebraic interior of the
/// augmented dual cone: the pair must survive perturbation along every
/// sampled dual direction for some step from a shrinking schedule.
pub fn oracle_cor_test(
    k: &ConeUnion,
    p: &AugPair,
    cfg: &OracleConfig,
    tol: &Tolerances,
) -> Result<bool> {
    let grid = GridBase::new(k, cfg, tol)?;
    oracle_cor_test_on_grid(&grid, k, p, cfg, tol)
}

/// Same as [`oracle_cor_test`] but reusing a precomputed grid (the grid does
/// not depend on the pair).
pub fn oracle_cor_test_on_grid(
    grid: &GridBase,
    k: &ConeUnion,
    p: &AugPair,
    cfg: &OracleConfig,
    tol: &Tolerances,
) -> Result<bool> {
    let _ = (k, tol);
    let n = p.xstar.len();
    // The pair itself must lie in the augmented dual cone.
    if grid.min_of(&p.xstar) < p.alpha {
        return Ok(false);
    }

    let mut dirs: Vec<(Vector, f64)> = vec![
        (DVector::zeros(n), 1.0),
        (DVector::zeros(n), -1.0),
    ];
    let xnorm = p.xstar.norm();
    if xnorm > 0.0 {
        dirs.push((&p.xstar / xnorm, 0.0));
        dirs.push((-&p.xstar / xnorm, 0.0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(17));
    for _ in 0..32 {
        let y: Vector = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let beta: f64 = rng.gen_range(-1.0..1.0);
        let scale = (y.norm() + beta.abs()).max(1e-9);
        dirs.push((y / scale, beta / scale));
    }

    let schedule = [0.5, 0.1, 0.02, 4e-3, 8e-4, 1e-4];
    for (y, beta) in &dirs {
        let mut ok = false;
        for &eps in &schedule {
            let alpha2 = p.alpha + eps * beta;
            if alpha2 < 0.0 {
                continue;
            }
            let x2 = &p.xstar + y * eps;
            if grid.min_of(&x2) >= alpha2 {
                ok = true;
                break;
            }
        }
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
