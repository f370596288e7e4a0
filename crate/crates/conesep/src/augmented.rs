//! Augmented dual cones: classification of pairs `(x*, α)` and construction
//! of strictly positive pairs.
//!
//! The augmented dual cone of `K` collects the pairs with
//! `⟨x*, y⟩ − α‖y‖ ≥ 0` on `K`; over the norm-base this is just
//! `⟨x*, y⟩ ≥ α` on `B_K`, so one exact base minimum `μ = min_{B_K} ⟨x*, ·⟩`
//! decides every variant:
//!
//! * `K^{a+}`: `μ ≥ α`;
//! * `K^{a#}`: strict on the base, `μ > α`;
//! * `K^{aw#}`: strict on the weak closure of the base — in finite dimension
//!   with closed pieces the base is weakly closed, so the test coincides
//!   with the `K^{a#}` one (the field is kept separate so reports can cite
//!   the set actually certified);
//! * `cor K^{a+}`: the algebraic interior, `μ > α` together with `α > 0`.

use crate::base::mu_base;
use crate::cones::ConeUnion;
use crate::geometry::{Tolerances, Vector};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Candidate pair `(x*, α)` with `α ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AugPair {
    pub xstar: Vector,
    pub alpha: f64,
}

impl AugPair {
    pub fn new(xstar: Vector, alpha: f64) -> Result<Self> {
        if alpha < 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidInput(format!(
                "alpha must be a nonnegative finite real, got {alpha}"
            )));
        }
        if xstar.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("functional is not finite".into()));
        }
        Ok(AugPair { xstar, alpha })
    }
}

/// Membership of one pair in the four augmented dual sets, plus the base
/// minimum that decided it. The memberships form a chain:
/// `cor K^{a+} ⊆ K^{aw#} ⊆ K^{a#} ⊆ K^{a+}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugClassification {
    pub in_a_plus: bool,
    pub in_a_sharp: bool,
    pub in_aw_sharp: bool,
    pub in_cor_a_plus: bool,
    /// `min { ⟨x*, y⟩ : y ∈ B_K }`.
    pub mu: f64,
}

/// Classifies `(x*, α)` against `K^{a+}`, `K^{a#}`, `K^{aw#}` and
/// `cor K^{a+}`. Ties within the strictness margin classify as non-strict.
pub fn classify_aug_pair(k: &ConeUnion, p: &AugPair, tol: &Tolerances) -> Result<AugClassification> {
    let mu = mu_base(k, &p.xstar, tol)?.value;
    let in_a_plus = mu >= p.alpha - tol.eps_mem;
    let strict = mu > p.alpha + tol.eps_sep;
    let cls = AugClassification {
        in_a_plus,
        in_a_sharp: strict,
        in_aw_sharp: strict,
        in_cor_a_plus: strict && p.alpha > tol.eps_sep,
        mu,
    };
    debug_assert!(!cls.in_cor_a_plus || cls.in_aw_sharp);
    debug_assert!(!cls.in_aw_sharp || cls.in_a_sharp);
    debug_assert!(!cls.in_a_sharp || cls.in_a_plus);
    Ok(cls)
}

/// For a sharp functional, the largest `α` keeping `(x*, α)` in `K^{a+}` is
/// the base minimum itself; this returns `(x*, μ)`, which has `α > 0`.
/// Fails with the `0 ∈ cl S_K` obstruction when the functional is not
/// strictly positive on the base.
pub fn construct_positive_pair(k: &ConeUnion, xstar: &Vector, tol: &Tolerances) -> Result<AugPair> {
    let mu = mu_base(k, xstar, tol)?.value;
    if mu <= tol.eps_sep {
        return Err(Error::NoPositivePair { mu });
    }
    AugPair::new(xstar.clone(), mu)
}
