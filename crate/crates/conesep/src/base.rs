//! Exact and sampled queries over the norm-base `B_K = K ∩ S` and its hulls
//! `S_K = conv(B_K)`, `S_K⁰ = conv({0} ∪ B_K)`.
//!
//! `mu_base`/`sigma_base` are the extreme values of a linear functional on
//! the base. Under `ℓ2` they come from face enumeration (the stationary
//! point of a linear functional on the unit sphere of a face span is the
//! negated normalized projection of the functional) and, for the maximum,
//! from the Moreau decomposition through the Euclidean cone projection.
//! Under `ℓ1`/`ℓ∞` the extrema are attained at unit-norm vertices of the
//! polytope `K ∩ 𝔹`, which are enumerated once per cone. Everything here is
//! exact at desk scale; the grid oracles cross-check it independently.

use nalgebra::DVector;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::cones::{ConeUnion, FinGenCone};
use crate::geometry::{project_onto_cone, Norm, Tolerances, Vector};
use crate::{lp, mnp, Error, Result};

/// An extreme value of a linear functional over the norm-base, together with
/// a base point attaining it.
#[derive(Debug, Clone)]
pub struct BaseQueryResult {
    pub value: f64,
    pub argpoint: Vector,
    /// True when produced by an exact enumeration path (all paths here are).
    pub exact: bool,
}

fn unsupported(piece: &FinGenCone) -> Error {
    Error::UnsupportedScale(format!(
        "exact base enumeration needs at most 12 generators per piece and a \
         tractable vertex budget (piece has {} generators in dimension {})",
        piece.gen_count(),
        piece.norm_spec().dim()
    ))
}

fn piece_extremum(
    piece: &FinGenCone,
    c: &Vector,
    minimize: bool,
    tol: &Tolerances,
) -> Result<(f64, Vector)> {
    let ns = piece.norm_spec();
    let mut best: Option<(f64, Vector)> = None;
    let mut offer = |val: f64, point: Vector| {
        let better = match &best {
            None => true,
            Some((bv, _)) => {
                if minimize {
                    val < *bv
                } else {
                    val > *bv
                }
            }
        };
        if better {
            best = Some((val, point));
        }
    };

    match ns.mode() {
        Norm::L2 => {
            // Normalized generators are always candidates.
            for j in 0..piece.gen_count() {
                let g: Vector = piece.normalized_generators().column(j).into();
                offer(c.dot(&g), g);
            }
            let bases = piece.face_basis_cache().ok_or_else(|| unsupported(piece))?;
            for b in bases {
                let p = b * (b.transpose() * c);
                let np = p.norm();
                if np <= 1e-13 * (1.0 + c.norm()) {
                    // The functional vanishes on this face span; generators
                    // inside the face already realize the value 0.
                    continue;
                }
                let cand = if minimize { -&p / np } else { &p / np };
                if piece.contains(&cand, tol.eps_mem) {
                    offer(c.dot(&cand), cand);
                }
            }
        }
        Norm::L1 | Norm::Linf => {
            let vertices = piece.base_vertex_cache().ok_or_else(|| unsupported(piece))?;
            for v in vertices {
                offer(c.dot(v), v.clone());
            }
        }
    }
    best.ok_or_else(|| Error::NumericalFailure("base extremum found no candidate".into()))
}

/// `min { ⟨c, x⟩ : x ∈ B_K }`; for unions, the minimum over the pieces.
pub fn mu_base(k: &ConeUnion, c: &Vector, tol: &Tolerances) -> Result<BaseQueryResult> {
    k.norm_spec().check_dim(c)?;
    let mut best: Option<(f64, Vector)> = None;
    for piece in k.pieces() {
        let (v, p) = piece_extremum(piece, c, true, tol)?;
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, p));
        }
    }
    let (value, argpoint) = best.expect("unions are nonempty");
    Ok(BaseQueryResult {
        value,
        argpoint,
        exact: true,
    })
}

/// `max { ⟨c, x⟩ : x ∈ B_K }`, the support of `S_K`. The `ℓ2` route goes
/// through the Moreau decomposition: when the Euclidean projection `Π_K(c)`
/// is nonzero the maximum is `‖Π_K(c)‖₂` at its normalization; otherwise it
/// falls back to `−mu_base(K, −c)`.
pub fn sigma_base(k: &ConeUnion, c: &Vector, tol: &Tolerances) -> Result<BaseQueryResult> {
    k.norm_spec().check_dim(c)?;
    let mut best: Option<(f64, Vector)> = None;
    for piece in k.pieces() {
        let (v, p) = match piece.norm_spec().mode() {
            Norm::L2 => {
                let proj = project_onto_cone(c, piece, tol)?;
                let np = proj.norm();
                if np > 1e-7 * (1.0 + c.norm()) {
                    let point = &proj / np;
                    (np, point)
                } else {
                    let (v, p) = piece_extremum(piece, &(-c), true, tol)?;
                    (-v, p)
                }
            }
            _ => piece_extremum(piece, c, false, tol)?,
        };
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, p));
        }
    }
    let (value, argpoint) = best.expect("unions are nonempty");
    Ok(BaseQueryResult {
        value,
        argpoint,
        exact: true,
    })
}

/// Does `0 ∈ cl S_K` hold? Equivalent to `0 ∈ conv{ĝᵢ}` over all normalized
/// generators: any base point is a nonnegative generator combination of
/// total weight at least one (triangle inequality), so a vanishing convex
/// combination of base points rescales to one of normalized generators, and
/// conversely the normalized generators are base points.
pub fn zero_in_cl_s(k: &ConeUnion, tol: &Tolerances) -> Result<bool> {
    let gens = k.all_normalized_generators();
    Ok(lp::zero_in_convex_hull(&gens, tol.eps_mem, tol.max_iter)?.is_some())
}

/// Deterministic pseudo-random base points: all normalized generators first,
/// then per-piece combinations with exponential weights, normalized to unit
/// scene norm. Coverage, not uniformity, is the goal.
pub fn sample_base(k: &ConeUnion, count: usize, seed: u64, tol: &Tolerances) -> Result<Vec<Vector>> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be at least 1".into()));
    }
    let ns = *k.norm_spec();
    let mut out = k.all_normalized_generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pieces = k.pieces();
    let mut piece_idx = 0usize;
    let mut guard = 0usize;
    while out.len() < count {
        let piece = &pieces[piece_idx % pieces.len()];
        piece_idx += 1;
        let gens = piece.normalized_generators();
        let mut x = DVector::zeros(ns.dim());
        for j in 0..gens.ncols() {
            let w: f64 = -(rng.gen_range(1e-12..1.0f64)).ln();
            let g: Vector = gens.column(j).into();
            x += g * w;
        }
        let nx = ns.norm(&x)?;
        if nx > tol.eps_mem {
            out.push(x / nx);
        } else {
            guard += 1;
            if guard > 100 * count {
                return Err(Error::NumericalFailure(
                    "base sampling kept collapsing to zero".into(),
                ));
            }
        }
    }
    Ok(out)
}

/// Samples the base of the topological boundary of a union: per piece the
/// facet sub-cones are sampled, and points interior to the union are
/// discarded. Exact interval arithmetic decides interiority in 2D; in 3D a
/// probe heuristic is used, so the result is reported as approximate there.
pub fn boundary_base_sample(
    a: &ConeUnion,
    count: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<Vec<Vector>> {
    let n = a.norm_spec().dim();
    if n > 3 {
        return Err(Error::UnsupportedScale(
            "boundary sampling is limited to dimensions 2 and 3".into(),
        ));
    }
    let mut facet_cones: Vec<FinGenCone> = Vec::new();
    for piece in a.pieces() {
        facet_cones.extend(piece.facet_subcones(tol)?);
    }
    if facet_cones.is_empty() {
        return Err(Error::InvalidCone(
            "the union covers the whole space and has no boundary".into(),
        ));
    }
    let per_facet = count.div_ceil(facet_cones.len()).max(1);
    let mut out = Vec::new();
    for (i, fc) in facet_cones.iter().enumerate() {
        let pts = sample_base(
            &fc.clone().into_union(),
            per_facet,
            seed.wrapping_add(i as u64),
            tol,
        )?;
        for x in pts {
            if !interior_to_union(a, &x) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

/// Is a unit vector interior to the union (as a subset of the ambient
/// space)? Shared facets of adjacent pieces are interior even though they
/// are boundaries of each piece alone.
pub fn interior_to_union(a: &ConeUnion, x: &Vector) -> bool {
    if a.norm_spec().dim() == 2 {
        let theta = x[1].atan2(x[0]);
        return angular_cover(a).contains_interior(theta);
    }
    if a.pieces().iter().any(|p| p.contains_interior(x, 1e-9)) {
        return true;
    }
    // Probe outward along every active facet normal.
    let delta = 1e-5;
    let mut probes: Vec<Vector> = Vec::new();
    let mut active_sum: Vector = DVector::zeros(x.len());
    for p in a.pieces() {
        if !p.contains(x, 1e-9) {
            continue;
        }
        for f in p.facet_normals() {
            if f.dot(x).abs() <= 1e-7 * (1.0 + x.norm()) {
                probes.push(x - f * delta);
                active_sum += f;
            }
        }
    }
    if probes.is_empty() {
        // Not on any facet of a containing piece: x sits on a
        // lower-dimensional piece, which has no ambient interior.
        return false;
    }
    if active_sum.norm() > 1e-12 {
        probes.push(x - active_sum.normalize() * delta);
    }
    probes.iter().all(|q| a.contains(q, 1e-9))
}

// 2D angular-interval bookkeeping for exact union-interior tests.

struct AngularCover {
    // Merged closed intervals [lo, hi], unrolled so hi can exceed 2π.
    merged: Vec<(f64, f64)>,
    full_circle: bool,
}

impl AngularCover {
    fn contains_interior(&self, theta: f64) -> bool {
        if self.full_circle {
            return true;
        }
        let eps = 1e-7;
        let t = normalize_angle(theta);
        self.merged.iter().any(|&(lo, hi)| {
            for shift in [-2.0 * std::f64::consts::PI, 0.0, 2.0 * std::f64::consts::PI] {
                let tt = t + shift;
                if tt > lo + eps && tt < hi - eps {
                    return true;
                }
            }
            false
        })
    }
}

fn normalize_angle(t: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = t % two_pi;
    if a < 0.0 {
        a += two_pi;
    }
    a
}

fn angular_cover(a: &ConeUnion) -> AngularCover {
    let mut raw: Vec<(f64, f64)> = Vec::new();
    let mut full_circle = false;
    for piece in a.pieces() {
        match piece_intervals(piece) {
            None => full_circle = true,
            Some(ivs) => raw.extend(ivs),
        }
    }
    if full_circle {
        return AngularCover {
            merged: Vec::new(),
            full_circle: true,
        };
    }
    // Merge on the circle by unrolling every interval twice.
    let mut unrolled: Vec<(f64, f64)> = Vec::new();
    let two_pi = 2.0 * std::f64::consts::PI;
    for &(lo, hi) in &raw {
        let lo_n = normalize_angle(lo);
        let hi_n = lo_n + (hi - lo);
        unrolled.push((lo_n, hi_n));
        unrolled.push((lo_n + two_pi, hi_n + two_pi));
    }
    unrolled.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let glue = 1e-9;
    for (lo, hi) in unrolled {
        match merged.last_mut() {
            Some((_, mhi)) if lo <= *mhi + glue => {
                *mhi = mhi.max(hi);
            }
            _ => merged.push((lo, hi)),
        }
    }
    if merged
        .iter()
        .any(|&(lo, hi)| hi - lo >= two_pi - 1e-9)
    {
        return AngularCover {
            merged: Vec::new(),
            full_circle: true,
        };
    }
    AngularCover {
        merged,
        full_circle: false,
    }
}

/// Angular support of a 2D piece as closed intervals, or `None` for the
/// whole plane. Width is below π for pointed full-dimensional sectors, π for
/// halfplanes, zero for rays; a line is two isolated directions.
fn piece_intervals(piece: &FinGenCone) -> Option<Vec<(f64, f64)>> {
    if piece.span_dim() == 2 && piece.facet_normals().is_empty() {
        return None; // whole plane
    }
    if piece.span_dim() == 1 {
        let g0: Vector = piece.normalized_generators().column(0).into();
        let t0 = g0[1].atan2(g0[0]);
        // A line piece covers the opposite direction too; a ray only itself.
        let is_line = (1..piece.gen_count()).any(|j| {
            let g: Vector = piece.normalized_generators().column(j).into();
            g.dot(&g0) < 0.0
        });
        return Some(if is_line {
            vec![(t0, t0), (t0 + std::f64::consts::PI, t0 + std::f64::consts::PI)]
        } else {
            vec![(t0, t0)]
        });
    }
    if piece.facet_normals().len() == 1 {
        // Halfplane: directions within ±π/2 of the inward normal.
        let a = &piece.facet_normals()[0];
        let t = a[1].atan2(a[0]);
        return Some(vec![(
            t - std::f64::consts::FRAC_PI_2,
            t + std::f64::consts::FRAC_PI_2,
        )]);
    }
    // Pointed sector: fold all generator angles around the first.
    let g0: Vector = piece.normalized_generators().column(0).into();
    let t0 = g0[1].atan2(g0[0]);
    let mut lo = t0;
    let mut hi = t0;
    for j in 1..piece.gen_count() {
        let g: Vector = piece.normalized_generators().column(j).into();
        let mut t = g[1].atan2(g[0]);
        while t < t0 - std::f64::consts::PI {
            t += 2.0 * std::f64::consts::PI;
        }
        while t > t0 + std::f64::consts::PI {
            t -= 2.0 * std::f64::consts::PI;
        }
        lo = lo.min(t);
        hi = hi.max(t);
    }
    Some(vec![(lo, hi)])
}

/// A functional strictly positive on the base, when one exists: the min-norm
/// point `w` of `conv{ĝᵢ}` satisfies `⟨w, ĝᵢ⟩ ≥ ‖w‖² > 0` whenever `0` is
/// outside the hull, which is exactly the `0 ∉ cl S_K` condition.
pub fn find_sharp_functional(k: &ConeUnion, tol: &Tolerances) -> Result<Option<Vector>> {
    if zero_in_cl_s(k, tol)? {
        return Ok(None);
    }
    let gens = k.all_normalized_generators();
    let w = mnp::min_norm_point(&gens, 1e-16, tol.max_iter)?;
    let nw = w.norm();
    if nw <= tol.eps_mem {
        return Err(Error::NumericalFailure(
            "min-norm sharp functional collapsed although 0 is outside the hull".into(),
        ));
    }
    Ok(Some(w / nw))
}
