//! Norms, dual norms and the small dense numerics shared by every module.
//!
//! The scene norm is one of `ℓ1`, `ℓ2`, `ℓ∞`; elements of the space and
//! functionals on it are both plain coordinate vectors, paired through the
//! standard inner product, so the dual norm is just the norm of the dual
//! family (`ℓ1 ↔ ℓ∞`, `ℓ2 ↔ ℓ2`). Euclidean projection onto a finitely
//! generated cone is computed by nonnegative least squares over the
//! generators and is used by the `ℓ2` support oracles regardless of the
//! scene norm.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cones::FinGenCone;
use crate::{Error, Result};

/// Coordinate vector; used both for points `x ∈ E` and functionals `x* ∈ E*`.
pub type Vector = DVector<f64>;

/// Norm family of a scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l2")]
    L2,
    #[serde(rename = "linf")]
    Linf,
}

impl Norm {
    /// Dual norm family. The mapping is an involution.
    pub fn dual(self) -> Norm {
        match self {
            Norm::L1 => Norm::Linf,
            Norm::L2 => Norm::L2,
            Norm::Linf => Norm::L1,
        }
    }

    fn eval(self, v: &Vector) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.norm(),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }
}

/// Norm family plus ambient dimension; owns norm and dual-norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSpec {
    mode: Norm,
    dim: usize,
}

impl NormSpec {
    /// Requires `dim ≥ 2`; one-dimensional scenes are rejected.
    pub fn new(mode: Norm, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidInput(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        Ok(NormSpec { mode, dim })
    }

    pub fn mode(&self) -> Norm {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        Ok(())
    }

    /// `‖v‖` in the scene norm. Zero exactly when `v = 0`.
    pub fn norm(&self, v: &Vector) -> Result<f64> {
        self.check_dim(v)?;
        Ok(self.mode.eval(v))
    }

    /// `‖f‖_* = sup { ⟨f, x⟩ : ‖x‖ ≤ 1 }`, evaluated through the dual family.
    pub fn dual_norm(&self, f: &Vector) -> Result<f64> {
        self.check_dim(f)?;
        Ok(self.mode.dual().eval(f))
    }

    /// `v / ‖v‖`; errors on (numerically) zero vectors.
    pub fn normalize(&self, v: &Vector, eps: f64) -> Result<Vector> {
        let n = self.norm(v)?;
        if n <= eps {
            return Err(Error::InvalidInput("cannot normalize a zero vector".into()));
        }
        Ok(v / n)
    }
}

/// Central numerical margin policy. The strict inequalities of the theory
/// need an explicit tolerance: `eps_mem` bounds membership/feasibility
/// residuals, `eps_sep` is the strictness margin below which a separation is
/// not certified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_mem: f64,
    pub eps_sep: f64,
    pub max_iter: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_mem: 1e-9,
            eps_sep: 1e-7,
            max_iter: 10_000,
        }
    }
}

/// Nonnegative least squares: minimize `‖A λ − b‖₂` subject to `λ ≥ 0`.
///
/// Lawson-Hanson active set iteration. Returns the coefficient vector;
/// optimality holds when `Aᵀ(b − Aλ) ≤ 0` on the inactive set with
/// complementarity on the active one.
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>, max_iter: usize) -> Result<DVector<f64>> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = 1.0 + b.norm();
    let tol = 1e-12 * scale * (1.0 + a.amax());

    for _ in 0..max_iter.max(3 * n + 10) {
        let w = a.transpose() * (b - a * &x);
        // Entering index: most positive gradient among the active set.
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if !passive[i] && w[i] > tol && best.is_none_or(|(_, v)| w[i] > v) {
                best = Some((i, w[i]));
            }
        }
        let Some((enter, _)) = best else {
            return Ok(x);
        };
        passive[enter] = true;

        // Inner loop: least squares on the passive set, stepping back when a
        // coefficient would turn negative.
        loop {
            let cols: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = a.select_columns(cols.iter());
            let z_sub = sub
                .clone()
                .svd(true, true)
                .solve(b, 1e-13)
                .map_err(|e| Error::NumericalFailure(format!("nnls least squares: {e}")))?;
            let mut z = DVector::zeros(n);
            for (j, &i) in cols.iter().enumerate() {
                z[i] = z_sub[j];
            }
            if cols.iter().all(|&i| z[i] > tol) {
                x = z;
                break;
            }
            // Largest feasible step from x toward z.
            let mut alpha = f64::INFINITY;
            let mut drop_idx = None;
            for &i in &cols {
                if z[i] <= tol {
                    let t = x[i] / (x[i] - z[i]);
                    if t < alpha {
                        alpha = t;
                        drop_idx = Some(i);
                    }
                }
            }
            let alpha = alpha.clamp(0.0, 1.0);
            x = &x + (z - &x) * alpha;
            if let Some(i) = drop_idx {
                passive[i] = false;
                x[i] = 0.0;
            }
            for i in 0..n {
                if passive[i] && x[i] <= tol {
                    passive[i] = false;
                    x[i] = 0.0;
                }
            }
            if !cols.iter().any(|&i| passive[i]) {
                break;
            }
        }
    }
    Err(Error::NumericalFailure(
        "nnls did not converge within the iteration cap".into(),
    ))
}

/// Euclidean projection `argmin { ‖c − x‖₂ : x ∈ K }` onto a finitely
/// generated cone, via NNLS over the generators. The projection is always
/// Euclidean, whatever the scene norm; it backs the `ℓ2` support oracles.
pub fn project_onto_cone(c: &Vector, cone: &FinGenCone, tol: &Tolerances) -> Result<Vector> {
    cone.norm_spec().check_dim(c)?;
    let g = cone.generators();
    let lambda = nnls(g, c, tol.max_iter)?;
    let p = g * lambda;
    // Complementarity certificate for the residual.
    let r = c - &p;
    let grad = g.transpose() * &r;
    let viol = grad.iter().cloned().fold(0.0f64, f64::max);
    if viol > tol.eps_mem * (1.0 + c.norm()) * 100.0 {
        return Err(Error::NumericalFailure(format!(
            "cone projection failed the complementarity check (violation {viol:.3e})"
        )));
    }
    Ok(p)
}
