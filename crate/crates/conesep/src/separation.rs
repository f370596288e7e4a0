//! Constructive separation engines and the verifiers for every separation
//! predicate.
//!
//! The solver realizes the hull characterization: `−K` and `A` are strictly
//! separable by a Bishop-Phelps cone exactly when the compact convex hulls
//! `cl S_A⁰ = conv({0} ∪ B_A)` and `cl S_{−K} = conv(B_{−K})` are disjoint.
//! A closest-pair run over support oracles either exhibits a (near-)common
//! point — the obstruction — or a separating direction `x*`. The certificate
//! is then rebuilt from exact base extrema: `β = inf ⟨x*, cl S_A⁰⟩`,
//! `γ = sup ⟨x*, cl S_{−K}⟩`, and `α = −(β + γ)/2` picks the midpoint of the
//! admissible slab, so `γ < −α < β ≤ 0` holds with margin whenever the hulls
//! have positive distance.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::augmented::{classify_aug_pair, AugClassification, AugPair};
use crate::base::{boundary_base_sample, mu_base, sample_base, sigma_base, zero_in_cl_s};
use crate::bp::phi_eval;
use crate::cones::{cones_intersect_trivially, conv_hull_cone, is_pointed, ConeUnion, FinGenCone};
use crate::geometry::{project_onto_cone, Tolerances, Vector};
use crate::mnp::{closest_pair, SupportOracle};
use crate::{Error, Result};

/// Support oracle of `conv(B_K)` (optionally with the origin adjoined), fed
/// by exact base maxima.
pub struct BaseHullOracle<'a> {
    cone: &'a ConeUnion,
    with_zero: bool,
    tol: &'a Tolerances,
}

impl<'a> BaseHullOracle<'a> {
    pub fn new(cone: &'a ConeUnion, with_zero: bool, tol: &'a Tolerances) -> Self {
        BaseHullOracle {
            cone,
            with_zero,
            tol,
        }
    }
}

impl SupportOracle for BaseHullOracle<'_> {
    fn dim(&self) -> usize {
        self.cone.norm_spec().dim()
    }

    fn support(&self, d: &Vector) -> Result<(f64, Vector)> {
        let s = sigma_base(self.cone, d, self.tol)?;
        if self.with_zero && s.value < 0.0 {
            return Ok((0.0, DVector::zeros(d.len())));
        }
        Ok((s.value, s.argpoint))
    }
}

/// Support oracle of `K ∩ 𝔹₂` for a convex cone: by the Moreau
/// decomposition the maximum of `⟨d, ·⟩` over the Euclidean-ball slice is
/// `‖Π_K(d)‖₂`, attained at the normalized projection.
pub struct ConeBallOracle<'a> {
    cone: &'a FinGenCone,
    tol: &'a Tolerances,
}

impl SupportOracle for ConeBallOracle<'_> {
    fn dim(&self) -> usize {
        self.cone.norm_spec().dim()
    }

    fn support(&self, d: &Vector) -> Result<(f64, Vector)> {
        let p = project_onto_cone(d, self.cone, self.tol)?;
        let np = p.norm();
        if np <= 1e-12 * (1.0 + d.norm()) {
            return Ok((0.0, DVector::zeros(d.len())));
        }
        Ok((np, &p / np))
    }
}

/// Separating data for two compact convex bodies, oriented so that the
/// first ("upper") body lies strictly above the second along `xstar`.
#[derive(Debug, Clone)]
pub struct BodySeparation {
    pub xstar: Vector,
    /// `min ⟨x*, ·⟩` over the upper body.
    pub min_upper: f64,
    /// `max ⟨x*, ·⟩` over the lower body.
    pub max_lower: f64,
    pub distance: f64,
    /// Closest pair found by the engine (upper, lower).
    pub upper_point: Vector,
    pub lower_point: Vector,
}

/// Outcome of the closest-pair engine.
#[derive(Debug, Clone)]
pub enum BodiesOutcome {
    Separated(BodySeparation),
    Touching { witness: Vector, distance: f64 },
}

/// Closest pair between two compact convex bodies given by support oracles;
/// conditional-gradient (min-norm-point) iteration driven to a duality gap
/// of `eps_sep²`. Distances at or below `eps_sep` report `Touching`.
pub fn separate_convex_bodies(
    upper: &dyn SupportOracle,
    lower: &dyn SupportOracle,
    tol: &Tolerances,
) -> Result<BodiesOutcome> {
    let gap_tol = tol.eps_sep * tol.eps_sep;
    let pair = closest_pair(upper, lower, gap_tol, tol.max_iter)?;
    if pair.distance <= tol.eps_sep {
        let witness = (&pair.u + &pair.v) * 0.5;
        return Ok(BodiesOutcome::Touching {
            witness,
            distance: pair.distance,
        });
    }
    let xstar = &pair.u - &pair.v;
    // Exact extrema along the found direction.
    let (neg_min_upper, _) = upper.support(&(-&xstar))?;
    let (max_lower, _) = lower.support(&xstar)?;
    let min_upper = -neg_min_upper;
    if max_lower >= min_upper {
        return Err(Error::NumericalFailure(format!(
            "closest-pair direction failed exact validation \
             (min_upper {min_upper:.6e} vs max_lower {max_lower:.6e})"
        )));
    }
    Ok(BodiesOutcome::Separated(BodySeparation {
        xstar,
        min_upper,
        max_lower,
        distance: pair.distance,
        upper_point: pair.u,
        lower_point: pair.v,
    }))
}

/// Why a separation attempt failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ObstructionReason {
    /// `cl S_A⁰` and `cl S_{−K}` share a point (the witness).
    HullsIntersect,
    /// `0 ∈ cl S_K`, so no positive pair exists at all; the hulls then meet
    /// at the origin.
    ZeroInClS,
    /// Reserved for degenerate cones; construction-time validation rejects
    /// them before a verdict is formed.
    TrivialCone,
}

#[derive(Debug, Clone)]
pub struct Obstruction {
    pub witness_point: Vector,
    pub reason: ObstructionReason,
}

/// Machine-checkable separation certificate.
#[derive(Debug, Clone)]
pub struct SeparationCertificate {
    /// Separating functional, scaled to unit maximum coordinate.
    pub xstar: Vector,
    /// `α > 0`; midpoint choice `α = −(β + γ)/2`.
    pub alpha: f64,
    /// `min ⟨x*, ·⟩` over `cl S_A⁰` (never positive: the hull contains 0).
    pub beta: f64,
    /// `max ⟨x*, ·⟩` over `cl S_{−K}`.
    pub gamma: f64,
    pub hull_distance: f64,
    /// Admissible open interval of `α` values for this `x*`, when nonempty.
    pub alpha_interval: Option<(f64, f64)>,
    /// Classification of `(x*, α)` against the augmented dual cones of `K`.
    pub aug_class: AugClassification,
}

/// Verdict of the strict separation solver: exactly one of certificate and
/// obstruction is present.
#[derive(Debug, Clone)]
pub struct SeparationVerdict {
    pub separated: bool,
    pub certificate: Option<SeparationCertificate>,
    pub obstruction: Option<Obstruction>,
    /// Set when the hulls are distinct but closer than the certifiable
    /// margin `eps_sep`.
    pub low_margin: bool,
}

fn normalize_maxabs(v: &Vector) -> Vector {
    let m = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    v / m
}

/// Strict separation of `−K` and `A` by a Bishop-Phelps cone.
///
/// Builds support oracles for `cl S_A⁰` and `cl S_{−K}`, runs the
/// closest-pair engine, and on success assembles the certificate from exact
/// base extrema. The resulting pair always satisfies the strict base test
/// with `α > 0`; `α = 0` certificates are never produced (they are accepted
/// by the verifier only).
pub fn strict_bp_separation(
    k: &ConeUnion,
    a: &ConeUnion,
    tol: &Tolerances,
) -> Result<SeparationVerdict> {
    if k.norm_spec() != a.norm_spec() {
        return Err(Error::InvalidInput(
            "the two cones live in different norm spaces".into(),
        ));
    }
    let dim = k.norm_spec().dim();
    if zero_in_cl_s(k, tol)? {
        // 0 ∈ cl S_{−K} and 0 ∈ cl S_A⁰ always: the hulls meet at the origin.
        return Ok(SeparationVerdict {
            separated: false,
            certificate: None,
            obstruction: Some(Obstruction {
                witness_point: DVector::zeros(dim),
                reason: ObstructionReason::ZeroInClS,
            }),
            low_margin: false,
        });
    }

    let neg_k = k.neg();
    let upper = BaseHullOracle::new(a, true, tol);
    let lower = BaseHullOracle::new(&neg_k, false, tol);
    match separate_convex_bodies(&upper, &lower, tol)? {
        BodiesOutcome::Touching { witness, distance } => Ok(SeparationVerdict {
            separated: false,
            certificate: None,
            obstruction: Some(Obstruction {
                witness_point: witness,
                reason: ObstructionReason::HullsIntersect,
            }),
            low_margin: distance > 1e-12,
        }),
        BodiesOutcome::Separated(body) => {
            let xstar = normalize_maxabs(&body.xstar);
            let beta = mu_base(a, &xstar, tol)?.value.min(0.0);
            let gamma = sigma_base(&neg_k, &xstar, tol)?.value;
            if beta - gamma <= 2.0 * tol.eps_sep {
                // The exact slab is too thin to certify strictness.
                return Ok(SeparationVerdict {
                    separated: false,
                    certificate: None,
                    obstruction: Some(Obstruction {
                        witness_point: (&body.upper_point + &body.lower_point) * 0.5,
                        reason: ObstructionReason::HullsIntersect,
                    }),
                    low_margin: true,
                });
            }
            let alpha = -(beta + gamma) / 2.0;
            let aug_class = classify_aug_pair(k, &AugPair::new(xstar.clone(), alpha)?, tol)?;
            if !(aug_class.in_aw_sharp && alpha > 0.0) {
                return Err(Error::NumericalFailure(format!(
                    "certificate failed the strict base test (mu {} vs alpha {alpha})",
                    aug_class.mu
                )));
            }
            let alpha_interval = alpha_interval_of(k, a, &xstar, tol)?;
            Ok(SeparationVerdict {
                separated: true,
                certificate: Some(SeparationCertificate {
                    xstar,
                    alpha,
                    beta,
                    gamma,
                    hull_distance: body.distance,
                    alpha_interval,
                    aug_class,
                }),
                obstruction: None,
                low_margin: false,
            })
        }
    }
}

/// Linear separation of a cone from `−K` by a hyperplane through the origin:
/// a functional with `⟨x*, a⟩ ≥ 0` on `A` and `⟨x*, k⟩ < 0` on `−K \ {0}`.
///
/// Works on the convex hull of `A` (a hyperplane cannot help a genuinely
/// nonconvex `A`): the closest pair between `conv(A) ∩ 𝔹₂` and `cl S_{−K}`
/// yields `x* = Π_{conv A}(v) − v`, whose cone-side inequality is exact by
/// projection complementarity. Returns `None` when the bodies touch.
pub fn separate_cone_hyperplane(
    a: &ConeUnion,
    k: &FinGenCone,
    tol: &Tolerances,
) -> Result<Option<Vector>> {
    if zero_in_cl_s(&k.clone().into_union(), tol)? {
        return Err(Error::InvalidInput(
            "0 lies in the closed hull of the base of K; no hyperplane separation exists".into(),
        ));
    }
    let hull_a = conv_hull_cone(a, tol)?;
    let neg_k = k.neg().into_union();
    let upper = ConeBallOracle {
        cone: &hull_a,
        tol,
    };
    let lower = BaseHullOracle::new(&neg_k, false, tol);
    let body = match separate_convex_bodies(&upper, &lower, tol)? {
        BodiesOutcome::Touching { .. } => return Ok(None),
        BodiesOutcome::Separated(b) => b,
    };
    // Polish: replace u by the exact projection of the engine's closest
    // lower point onto the cone, which makes ⟨x*, ·⟩ ≥ 0 on conv(A) hold by
    // complementarity.
    let v = body.lower_point;
    let u = project_onto_cone(&v, &hull_a, tol)?;
    let xstar = normalize_maxabs(&(&u - &v));

    // Exact validation on both sides.
    for g in a.all_normalized_generators() {
        if xstar.dot(&g) < -tol.eps_mem {
            return Err(Error::NumericalFailure(
                "hyperplane candidate is negative on a generator of A".into(),
            ));
        }
    }
    let sigma = sigma_base(&neg_k, &xstar, tol)?.value;
    if sigma >= -tol.eps_sep {
        return Err(Error::NumericalFailure(format!(
            "hyperplane candidate is not strictly negative on the base of -K (sup {sigma:.3e})"
        )));
    }
    Ok(Some(xstar))
}

/// Admissible `α`-interval for a fixed separating functional:
/// `δ₂ = min ⟨x*, B_{cl conv K}⟩` (upper end from the algebraic-interior
/// characterization) and `δ₁ = max(0, −min ⟨x*, B_A⟩)` nudged up by
/// `eps_sep` (lower end from the `A`-side strictness). Empty unless
/// `δ₂ > δ₁ > 0`.
pub fn alpha_interval_of(
    k: &ConeUnion,
    a: &ConeUnion,
    xstar: &Vector,
    tol: &Tolerances,
) -> Result<Option<(f64, f64)>> {
    let hull_k = conv_hull_cone(k, tol)?.into_union();
    let delta2 = mu_base(&hull_k, xstar, tol)?.value;
    let mu_a = mu_base(a, xstar, tol)?.value;
    let delta1 = (-mu_a).max(0.0) + tol.eps_sep;
    if delta2 > delta1 {
        Ok(Some((delta1, delta2)))
    } else {
        Ok(None)
    }
}

/// Outcome of a sampled certificate check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    /// Worst `φ` value on the `A`-side samples (must exceed `eps_sep`).
    pub min_margin_a: f64,
    /// Worst `φ` value on the `−K`-side samples (must fall below `−eps_sep`).
    pub max_margin_k: f64,
    /// Agreement between the normlinear check `φ(x) ≷ 0` and the base form
    /// `⟨x*, ·⟩ ≷ −α` on every sample.
    pub base_form_agrees: bool,
    pub samples_a: usize,
    pub samples_k: usize,
}

fn verify_on_points(
    k: &ConeUnion,
    a_points: &[Vector],
    xstar: &Vector,
    alpha: f64,
    sample_count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    if a_points.is_empty() {
        // Happens only for boundary checks on unions without a boundary;
        // erroring keeps the report margins finite.
        return Err(Error::InvalidInput(
            "no points to verify on the A side (empty boundary?)".into(),
        ));
    }
    let ns = k.norm_spec();
    let k_points = sample_base(k, sample_count, seed.wrapping_add(1), tol)?;

    let mut min_margin_a = f64::INFINITY;
    let mut agrees = true;
    for p in a_points {
        let phi = phi_eval(ns, xstar, alpha, p)?;
        min_margin_a = min_margin_a.min(phi);
        let phi_ok = phi > tol.eps_sep;
        let base_ok = xstar.dot(p) + alpha > tol.eps_sep;
        agrees &= phi_ok == base_ok;
    }
    let mut max_margin_k = f64::NEG_INFINITY;
    for p in &k_points {
        let q = -p; // a point of −K with unit norm
        let phi = phi_eval(ns, xstar, alpha, &q)?;
        max_margin_k = max_margin_k.max(phi);
        let phi_ok = phi < -tol.eps_sep;
        let base_ok = xstar.dot(&q) + alpha < -tol.eps_sep;
        agrees &= phi_ok == base_ok;
    }
    Ok(VerificationReport {
        ok: min_margin_a > tol.eps_sep && max_margin_k < -tol.eps_sep,
        min_margin_a,
        max_margin_k,
        base_form_agrees: agrees,
        samples_a: a_points.len(),
        samples_k: k_points.len(),
    })
}

/// Re-checks a certificate by evaluating `φ_{x*,α}` on sampled bases plus
/// all generators: strictly positive on `A \ {0}`, strictly negative on
/// `−K \ {0}`. Independently re-runs the equivalent base-form inequalities
/// `⟨x*, a⟩ > −α > ⟨x*, k⟩` and reports whether the two checks agreed.
pub fn verify_strict_separation(
    k: &ConeUnion,
    a: &ConeUnion,
    xstar: &Vector,
    alpha: f64,
    sample_count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let a_points = sample_base(a, sample_count, seed, tol)?;
    verify_on_points(k, &a_points, xstar, alpha, sample_count, seed, tol)
}

/// Boundary variant: the `A` side runs over samples of `B_{bd A}` instead of
/// the full base, so interior overlap between `A` and the separating cone is
/// tolerated. Limited to dimensions 2 and 3.
pub fn verify_boundary_separation(
    k: &ConeUnion,
    a: &ConeUnion,
    xstar: &Vector,
    alpha: f64,
    sample_count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<VerificationReport> {
    let a_points = boundary_base_sample(a, sample_count, seed, tol)?;
    verify_on_points(k, &a_points, xstar, alpha, sample_count, seed, tol)
}

/// The necessary-condition panel for strict separation, plus the hull
/// distance so the convex-`A` equivalence can be asserted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// `A ∩ cl(conv(−K)) = {0}`.
    pub a_meets_neg_hull_trivially: bool,
    /// `0 ∈ cl S_{−K}` (equivalently `0 ∈ cl S_K`).
    pub zero_in_cl_s_neg_k: bool,
    pub zero_in_cl_s_a: bool,
    pub conv_k_pointed: bool,
    pub conv_a_pointed: bool,
    /// Both necessary conditions hold.
    pub necessary_conditions: bool,
    pub hull_distance: f64,
    pub hulls_disjoint: bool,
    /// For closed convex `A` (a single piece), the necessary conditions are
    /// also sufficient: this records `necessary_conditions == hulls_disjoint`.
    pub convex_a_equivalence: Option<bool>,
}

/// Evaluates the necessary conditions `A ∩ cl(conv(−K)) = {0}` and
/// `0 ∉ cl S_{−K}`, the pointedness of the convex hulls, and compares with
/// the hull-disjointness test that characterizes separability.
pub fn check_necessary_conditions(
    k: &ConeUnion,
    a: &ConeUnion,
    tol: &Tolerances,
) -> Result<AnalysisReport> {
    let neg_k = k.neg();
    let neg_hull = conv_hull_cone(&neg_k, tol)?;
    let a_trivial = cones_intersect_trivially(a, &neg_hull, tol)?;
    let zero_k = zero_in_cl_s(&neg_k, tol)?;
    let zero_a = zero_in_cl_s(a, tol)?;
    let conv_k_pointed = is_pointed(&conv_hull_cone(k, tol)?, tol)?.pointed;
    let conv_a_pointed = is_pointed(&conv_hull_cone(a, tol)?, tol)?.pointed;
    let necessary = a_trivial && !zero_k;

    let (hull_distance, hulls_disjoint) = if zero_k {
        (0.0, false)
    } else {
        let upper = BaseHullOracle::new(a, true, tol);
        let lower = BaseHullOracle::new(&neg_k, false, tol);
        match separate_convex_bodies(&upper, &lower, tol)? {
            BodiesOutcome::Separated(b) => (b.distance, true),
            BodiesOutcome::Touching { distance, .. } => (distance, false),
        }
    };
    let convex_a_equivalence =
        (a.pieces().len() == 1).then_some(necessary == hulls_disjoint);
    Ok(AnalysisReport {
        a_meets_neg_hull_trivially: a_trivial,
        zero_in_cl_s_neg_k: zero_k,
        zero_in_cl_s_a: zero_a,
        conv_k_pointed,
        conv_a_pointed,
        necessary_conditions: necessary,
        hull_distance,
        hulls_disjoint,
        convex_a_equivalence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Norm, NormSpec};
    use crate::lp;
    use crate::mnp::PointSet;
    use approx::assert_relative_eq;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn v(s: &[f64]) -> Vector {
        DVector::from_column_slice(s)
    }

    fn cone(mode: Norm, cols: &[Vec<f64>]) -> FinGenCone {
        let ns = NormSpec::new(mode, 2).unwrap();
        FinGenCone::from_columns(&ns, cols, &tol()).unwrap()
    }

    /// The two-ray scene: −K is the nonnegative quadrant, A the rays through
    /// (−1,2)/√5 and (2,−1)/√5, Euclidean norm.
    fn two_rays_scene() -> (ConeUnion, ConeUnion) {
        let k = cone(Norm::L2, &[vec![-1.0, 0.0], vec![0.0, -1.0]]).into_union();
        let a = ConeUnion::new(vec![
            cone(Norm::L2, &[vec![-1.0, 2.0]]),
            cone(Norm::L2, &[vec![2.0, -1.0]]),
        ])
        .unwrap();
        (k, a)
    }

    /// The worked ℓ1 example: Ω¹, Ω², Ω³ from x(λ) = (1−λ, λ).
    fn three_sectors_scene() -> (ConeUnion, ConeUnion) {
        let k = cone(Norm::L1, &[vec![-0.6, -0.4], vec![-0.4, -0.6]]).into_union(); // −Ω²
        let a = ConeUnion::new(vec![
            cone(Norm::L1, &[vec![1.0, 0.0], vec![0.8, 0.2]]),
            cone(Norm::L1, &[vec![0.2, 0.8], vec![0.0, 1.0]]),
        ])
        .unwrap();
        (k, a)
    }

    #[test]
    fn convex_bodies_parallel_faces() {
        let lower = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let upper = [v(&[3.0, 0.0]), v(&[0.0, 3.0])];
        let out = separate_convex_bodies(&PointSet(&upper), &PointSet(&lower), &tol()).unwrap();
        let BodiesOutcome::Separated(b) = out else {
            panic!("bodies at distance √2 must separate");
        };
        assert_relative_eq!(b.distance, 2.0_f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(b.xstar[0], b.xstar[1], epsilon = 1e-9);
        assert_relative_eq!(b.min_upper, 3.0 * b.xstar[0], epsilon = 1e-8);
        assert_relative_eq!(b.max_lower, 1.0 * b.xstar[0], epsilon = 1e-8);
    }

    #[test]
    fn convex_bodies_touching() {
        let p = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let out = separate_convex_bodies(&PointSet(&p), &PointSet(&p), &tol()).unwrap();
        assert!(matches!(out, BodiesOutcome::Touching { .. }));
    }

    #[test]
    fn e2_separates_with_the_expected_certificate() {
        let (k, a) = two_rays_scene();
        let verdict = strict_bp_separation(&k, &a, &tol()).unwrap();
        assert!(verdict.separated);
        let cert = verdict.certificate.unwrap();
        // Max-abs normalization puts the functional at exactly (−1, −1).
        assert_relative_eq!(cert.xstar[0], -1.0, epsilon = 1e-7);
        assert_relative_eq!(cert.xstar[1], -1.0, epsilon = 1e-7);
        // β = −1/√5 on the A rays, γ = −1 on the quarter arc.
        assert_relative_eq!(cert.beta, -1.0 / 5.0_f64.sqrt(), epsilon = 1e-7);
        assert_relative_eq!(cert.gamma, -1.0, epsilon = 1e-7);
        assert!(cert.gamma < -cert.alpha && -cert.alpha < cert.beta && cert.beta <= 0.0);
        let (d1, d2) = cert.alpha_interval.unwrap();
        assert_relative_eq!(d1, 1.0 / 5.0_f64.sqrt(), epsilon = 1e-6);
        assert_relative_eq!(d2, 1.0, epsilon = 1e-6);
        assert!(d1 < cert.alpha && cert.alpha < d2);
        assert!(cert.aug_class.in_aw_sharp && cert.alpha > 0.0);
    }

    #[test]
    fn e2_verification_margins() {
        let (k, a) = two_rays_scene();
        // The hand-checkable certificate ((−1,−1), 0.7).
        let r =
            verify_strict_separation(&k, &a, &v(&[-1.0, -1.0]), 0.7, 2000, 7, &tol()).unwrap();
        assert!(r.ok);
        assert!(r.base_form_agrees);
        assert_relative_eq!(r.min_margin_a, 0.7 - 1.0 / 5.0_f64.sqrt(), epsilon = 1e-9);
        assert_relative_eq!(r.max_margin_k, -0.3, epsilon = 1e-9);

        // Tampered α: the −K side flips sign at e1.
        let r =
            verify_strict_separation(&k, &a, &v(&[-1.0, -1.0]), 1.1, 2000, 7, &tol()).unwrap();
        assert!(!r.ok);
        assert!(r.max_margin_k > 0.0);
    }

    #[test]
    fn three_sectors_scene_obstruction() {
        let (k, a) = three_sectors_scene();
        let verdict = strict_bp_separation(&k, &a, &tol()).unwrap();
        assert!(!verdict.separated);
        let obs = verdict.obstruction.unwrap();
        assert_eq!(obs.reason, ObstructionReason::HullsIntersect);
        // The witness lies in both hulls (checked by an independent LP).
        let w = &obs.witness_point;
        let mut a_hull_pts: Vec<Vector> = a.all_normalized_generators();
        a_hull_pts.push(DVector::zeros(2));
        assert!(lp::point_in_convex_hull(&a_hull_pts, w, 1e-9, 10_000).unwrap());
        let neg_k_pts = k.neg().all_normalized_generators();
        assert!(lp::point_in_convex_hull(&neg_k_pts, w, 1e-9, 10_000).unwrap());
    }

    #[test]
    fn opposite_rays_touch() {
        let k = cone(Norm::L2, &[vec![0.0, -1.0]]).into_union();
        let a = cone(Norm::L2, &[vec![0.0, 1.0]]).into_union();
        let verdict = strict_bp_separation(&k, &a, &tol()).unwrap();
        assert!(!verdict.separated);
    }

    #[test]
    fn zero_in_base_is_reported_as_such() {
        let k = cone(Norm::L2, &[vec![1.0, 0.0], vec![-1.0, 0.0]]).into_union();
        let a = cone(Norm::L2, &[vec![0.0, 1.0]]).into_union();
        let verdict = strict_bp_separation(&k, &a, &tol()).unwrap();
        assert!(!verdict.separated);
        assert_eq!(
            verdict.obstruction.unwrap().reason,
            ObstructionReason::ZeroInClS
        );
    }

    #[test]
    fn hyperplane_separation_examples() {
        // A = ray e1, K = ray (−1,1): x* ∝ (0,1) works.
        let a = cone(Norm::L2, &[vec![1.0, 0.0]]).into_union();
        let k = cone(Norm::L2, &[vec![-1.0, 1.0]]);
        let x = separate_cone_hyperplane(&a, &k, &tol()).unwrap().unwrap();
        assert!(x[0].abs() < 1e-6);
        assert_relative_eq!(x[1], 1.0, epsilon = 1e-9);

        // A the quadrant, −K = the quadrant: no separation.
        let a = cone(Norm::L2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).into_union();
        let k = cone(Norm::L2, &[vec![-1.0, 0.0], vec![0.0, -1.0]]);
        assert!(separate_cone_hyperplane(&a, &k, &tol()).unwrap().is_none());

        // The ℓ1 union scene: conv A swallows −K, no hyperplane exists.
        let (k, a) = three_sectors_scene();
        let k_piece = k.pieces()[0].clone();
        assert!(separate_cone_hyperplane(&a, &k_piece, &tol())
            .unwrap()
            .is_none());

        // Precondition: 0 must avoid the closed hull of the base of K.
        let line = cone(Norm::L2, &[vec![1.0, 0.0], vec![-1.0, 0.0]]);
        let a = cone(Norm::L2, &[vec![0.0, 1.0]]).into_union();
        assert!(matches!(
            separate_cone_hyperplane(&a, &line, &tol()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn alpha_interval_cases() {
        let (k, a) = two_rays_scene();
        let (d1, d2) = alpha_interval_of(&k, &a, &v(&[-1.0, -1.0]), &tol())
            .unwrap()
            .unwrap();
        assert_relative_eq!(d1, 1.0 / 5.0_f64.sqrt(), epsilon = 1e-6);
        assert_relative_eq!(d2, 1.0, epsilon = 1e-9);

        // δ₁ above δ₂: empty.
        let k = cone(Norm::L2, &[vec![1.0, 0.0], vec![0.0, 1.0]]).into_union();
        let a = cone(Norm::L2, &[vec![-1.0, -1.0]]).into_union();
        assert!(alpha_interval_of(&k, &a, &v(&[1.0, 1.0]), &tol())
            .unwrap()
            .is_none());

        // Zero functional: empty.
        let (k, a) = two_rays_scene();
        assert!(alpha_interval_of(&k, &a, &v(&[0.0, 0.0]), &tol())
            .unwrap()
            .is_none());
    }

    #[test]
    fn boundary_check_tolerates_interior_overlap() {
        // A is the sector [0°, 90°] split in two pieces; −K is the ray
        // through (1,1), strictly inside A. The certificate ((−1,−1), 1.2)
        // separates bd A from −K although the full check must fail.
        let a = ConeUnion::new(vec![
            cone(Norm::L2, &[vec![1.0, 0.0], vec![1.0, 1.0]]),
            cone(Norm::L2, &[vec![1.0, 1.0], vec![0.0, 1.0]]),
        ])
        .unwrap();
        let k = cone(Norm::L2, &[vec![-1.0, -1.0]]).into_union();
        let xstar = v(&[-1.0, -1.0]);
        let full = verify_strict_separation(&k, &a, &xstar, 1.2, 500, 3, &tol()).unwrap();
        assert!(!full.ok, "the diagonal direction of A violates the full check");
        let boundary = verify_boundary_separation(&k, &a, &xstar, 1.2, 500, 3, &tol()).unwrap();
        assert!(boundary.ok, "margins: {boundary:?}");
        // Tampering spoils the boundary check too.
        let bad = verify_boundary_separation(&k, &a, &xstar, 1.5, 500, 3, &tol()).unwrap();
        assert!(!bad.ok);
    }

    #[test]
    fn four_dimensional_euclidean_scene() {
        // The ℓ2 face-enumeration path has no dimension cap; a 4D scene runs
        // end to end.
        let ns = NormSpec::new(Norm::L2, 4).unwrap();
        let mk = |cols: &[Vec<f64>]| FinGenCone::from_columns(&ns, cols, &tol()).unwrap();
        let k = mk(&[
            vec![-1.0, 0.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0, 0.0],
            vec![0.0, 0.0, -1.0, 0.0],
            vec![0.0, 0.0, 0.0, -1.0],
        ])
        .into_union();
        let a = ConeUnion::new(vec![
            mk(&[vec![-1.0, 2.0, 0.5, 0.5]]),
            mk(&[vec![2.0, -1.0, 0.5, 0.5]]),
        ])
        .unwrap();
        let verdict = strict_bp_separation(&k, &a, &tol()).unwrap();
        assert!(verdict.separated);
        let cert = verdict.certificate.unwrap();
        let check =
            verify_strict_separation(&k, &a, &cert.xstar, cert.alpha, 3000, 11, &tol()).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn necessary_conditions_panel() {
        // The worked ℓ1 example: both necessary conditions hold, yet the
        // hulls intersect.
        let (k, a) = three_sectors_scene();
        let r = check_necessary_conditions(&k, &a, &tol()).unwrap();
        assert!(r.a_meets_neg_hull_trivially);
        assert!(!r.zero_in_cl_s_neg_k);
        assert!(r.necessary_conditions);
        assert!(!r.hulls_disjoint);
        assert!(r.convex_a_equivalence.is_none());

        // E2: everything holds and the solver agrees.
        let (k, a) = two_rays_scene();
        let r = check_necessary_conditions(&k, &a, &tol()).unwrap();
        assert!(r.necessary_conditions && r.hulls_disjoint);

        // Convex A overlapping −K: conditions fail and the hulls touch.
        let k = cone(Norm::L2, &[vec![-1.0, 0.0], vec![0.0, -1.0]]).into_union();
        let a = cone(Norm::L2, &[vec![1.0, 0.2], vec![0.2, 1.0]]).into_union();
        let r = check_necessary_conditions(&k, &a, &tol()).unwrap();
        assert!(!r.a_meets_neg_hull_trivially);
        assert!(!r.hulls_disjoint);
        assert_eq!(r.convex_a_equivalence, Some(true));
    }
}
