//! The normlinear function `φ_{x*,α}(x) = ⟨x*, x⟩ + α‖x‖` and its sublevel
//! cones — the Bishop-Phelps cones that do the separating.
//!
//! `C≤ = {x : φ(x) ≤ 0}` is a closed convex cone; for `α > 0` it is pointed,
//! and for `‖x*‖_* > α` it is nontrivial with interior `{x : φ(x) < 0}`.
//! After rescaling, `C≤_{x*,α} = C(−α⁻¹x*)` for the classical cone
//! `C(y*) = {x : ⟨y*, x⟩ ≥ ‖x‖}`.

use serde::{Deserialize, Serialize};

use crate::geometry::{NormSpec, Tolerances, Vector};
use crate::{Error, Result};

/// Sublevel cone `C≤_{x*,α}` of the normlinear function, tied to its norm
/// space.
#[derive(Debug, Clone, PartialEq)]
pub struct BPCone {
    pub ns: NormSpec,
    pub xstar: Vector,
    pub alpha: f64,
}

/// Position of a point relative to a Bishop-Phelps cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    Interior,
    Boundary,
    Exterior,
}

/// `φ_{x*,α}(x) = ⟨x*, x⟩ + α‖x‖`.
pub fn phi_eval(ns: &NormSpec, xstar: &Vector, alpha: f64, x: &Vector) -> Result<f64> {
    ns.check_dim(xstar)?;
    Ok(xstar.dot(x) + alpha * ns.norm(x)?)
}

impl BPCone {
    pub fn new(ns: NormSpec, xstar: Vector, alpha: f64) -> Result<Self> {
        ns.check_dim(&xstar)?;
        if alpha < 0.0 || alpha.is_nan() {
            return Err(Error::InvalidInput(format!(
                "alpha must be nonnegative, got {alpha}"
            )));
        }
        Ok(BPCone { ns, xstar, alpha })
    }

    pub fn phi(&self, x: &Vector) -> Result<f64> {
        phi_eval(&self.ns, &self.xstar, self.alpha, x)
    }
}

/// Classifies a point against the cone. Requires `‖x*‖_* > α` so that the
/// strict sublevel set is the interior; the boundary band has width
/// `eps_mem`, and strict-separation checks treat `Boundary` as failure.
pub fn bp_classify(c: &BPCone, x: &Vector, tol: &Tolerances) -> Result<Region> {
    let dual = c.ns.dual_norm(&c.xstar)?;
    if dual <= c.alpha {
        return Err(Error::DegenerateCone {
            dual_norm: dual,
            alpha: c.alpha,
        });
    }
    let phi = c.phi(x)?;
    Ok(if phi < -tol.eps_mem {
        Region::Interior
    } else if phi <= tol.eps_mem {
        Region::Boundary
    } else {
        Region::Exterior
    })
}

/// Structural flags of the sublevel cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpProperties {
    pub nontrivial: bool,
    pub pointed: bool,
    pub solid: bool,
}

/// `α > 0` makes the cone pointed; `‖x*‖_* > α` makes it nontrivial and
/// topologically solid.
pub fn bp_properties(c: &BPCone, tol: &Tolerances) -> Result<BpProperties> {
    let dual = c.ns.dual_norm(&c.xstar)?;
    let solid = dual > c.alpha + tol.eps_sep;
    Ok(BpProperties {
        nontrivial: solid,
        pointed: c.alpha > tol.eps_sep,
        solid,
    })
}

/// The classical Bishop-Phelps cone `C(y*) = {x : ⟨y*, x⟩ ≥ ‖x‖}` as a
/// sublevel cone: `C(y*) = C≤_{−y*,1}`.
pub fn bp_from_functional(ns: &NormSpec, ystar: &Vector) -> Result<BPCone> {
    BPCone::new(*ns, -ystar, 1.0)
}
