//! Cone data model: finitely generated convex cones, finite unions of them
//! (the nonconvex cones of this crate), pointedness, dual-cone and sharp-set
//! membership.
//!
//! A `FinGenCone` is `cone(G) = { Gλ : λ ≥ 0 }` for a generator matrix `G`
//! with nonzero columns; such cones are closed, so the closure operators of
//! the theory act trivially on pieces. At construction we precompute what the
//! exact base-extremum queries need: an orthonormal basis of the linear span,
//! the facet description of the cone inside that span, and — for the
//! polyhedral norms — the unit-norm vertices of `K ∩ 𝔹`.

use nalgebra::{DMatrix, DVector};

use crate::geometry::{Norm, NormSpec, Tolerances, Vector};
use crate::{lp, Error, Result};

/// Generator cap per piece for the exact face/vertex enumeration paths.
pub const MAX_EXACT_GENERATORS: usize = 12;

/// Budget on `C(#inequalities, d)` for polyhedral vertex enumeration.
const VERTEX_ENUM_BUDGET: u128 = 200_000;

/// Finitely generated convex cone with cached exact-query structure.
#[derive(Debug, Clone, PartialEq)]
pub struct FinGenCone {
    ns: NormSpec,
    generators: DMatrix<f64>,
    normalized: DMatrix<f64>,
    span_basis: DMatrix<f64>,
    span_complement: DMatrix<f64>,
    facets: Vec<Vector>,
    whole_span: bool,
    base_vertices: Option<Vec<Vector>>,
    face_bases: Option<Vec<DMatrix<f64>>>,
}

impl FinGenCone {
    /// Validates and builds a cone from generator columns: rejects zero
    /// columns and dimension mismatches, normalizes under the scene norm and
    /// merges parallel generators (Euclidean cosine `≥ 1 − eps_mem`).
    pub fn new(ns: &NormSpec, raw: &DMatrix<f64>, tol: &Tolerances) -> Result<Self> {
        if raw.ncols() == 0 {
            return Err(Error::InvalidCone("empty generator list".into()));
        }
        if raw.nrows() != ns.dim() {
            return Err(Error::DimensionMismatch {
                expected: ns.dim(),
                got: raw.nrows(),
            });
        }

        let mut kept: Vec<Vector> = Vec::new();
        let mut kept_normalized: Vec<Vector> = Vec::new();
        for j in 0..raw.ncols() {
            let g: Vector = raw.column(j).into();
            if g.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidCone(format!("generator {j} is not finite")));
            }
            let scene_norm = ns.norm(&g)?;
            if scene_norm <= tol.eps_mem {
                return Err(Error::InvalidCone(format!("generator {j} is (near) zero")));
            }
            let unit = &g / scene_norm;
            let dup = kept_normalized.iter().any(|u| {
                let cosine = u.dot(&unit) / (u.norm() * unit.norm());
                cosine >= 1.0 - tol.eps_mem
            });
            if !dup {
                kept.push(g);
                kept_normalized.push(unit);
            }
        }

        let generators = DMatrix::from_columns(&kept);
        let normalized = DMatrix::from_columns(&kept_normalized);
        let (span_basis, span_complement) = span_and_complement(&kept_normalized, ns.dim());
        let d = span_basis.ncols();

        // Facets of the cone inside its span, mapped back to ambient normals.
        let reduced: Vec<Vector> = kept_normalized
            .iter()
            .map(|g| span_basis.transpose() * g)
            .collect();
        let reduced_facets = enumerate_facets(&reduced, d);
        let whole_span = reduced_facets.is_empty();
        let facets: Vec<Vector> = reduced_facets.iter().map(|h| &span_basis * h).collect();

        let mut cone = FinGenCone {
            ns: *ns,
            generators,
            normalized,
            span_basis,
            span_complement,
            facets,
            whole_span,
            base_vertices: None,
            face_bases: None,
        };
        cone.base_vertices = cone.enumerate_base_vertices(tol);
        cone.face_bases = cone.enumerate_face_bases();
        Ok(cone)
    }

    /// Convenience constructor from coordinate slices.
    pub fn from_columns(ns: &NormSpec, cols: &[Vec<f64>], tol: &Tolerances) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::InvalidCone("empty generator list".into()));
        }
        for c in cols {
            if c.len() != ns.dim() {
                return Err(Error::DimensionMismatch {
                    expected: ns.dim(),
                    got: c.len(),
                });
            }
        }
        let m = DMatrix::from_fn(ns.dim(), cols.len(), |i, j| cols[j][i]);
        Self::new(ns, &m, tol)
    }

    pub fn norm_spec(&self) -> &NormSpec {
        &self.ns
    }

    pub fn generators(&self) -> &DMatrix<f64> {
        &self.generators
    }

    /// Unit scene-norm copies of the generators, same column order.
    pub fn normalized_generators(&self) -> &DMatrix<f64> {
        &self.normalized
    }

    pub fn gen_count(&self) -> usize {
        self.generators.ncols()
    }

    /// Dimension of the linear span of the generators.
    pub fn span_dim(&self) -> usize {
        self.span_basis.ncols()
    }

    /// Ambient facet normals: `⟨a, x⟩ ≥ 0` holds on the cone for each.
    /// Empty exactly when the cone equals its span.
    pub fn facet_normals(&self) -> &[Vector] {
        &self.facets
    }

    /// Unit-norm vertices of `K ∩ 𝔹` under the polyhedral norms; `None` under
    /// `ℓ2` or when enumeration is out of budget.
    pub(crate) fn base_vertex_cache(&self) -> Option<&[Vector]> {
        self.base_vertices.as_deref()
    }

    /// Orthonormal bases of the candidate face spans (`ℓ2` face enumeration).
    pub(crate) fn face_basis_cache(&self) -> Option<&[DMatrix<f64>]> {
        self.face_bases.as_deref()
    }

    /// Membership via the cached halfspace description.
    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        let scale = 1.0 + x.norm();
        for j in 0..self.span_complement.ncols() {
            if self.span_complement.column(j).dot(x).abs() > eps * scale {
                return false;
            }
        }
        if self.whole_span {
            return true;
        }
        self.facets.iter().all(|a| a.dot(x) >= -eps * scale)
    }

    /// Ambient interior membership: full-dimensional and strictly inside
    /// every facet.
    pub fn contains_interior(&self, x: &Vector, eps: f64) -> bool {
        if self.span_dim() != self.ns.dim() {
            return false;
        }
        if self.whole_span {
            return true;
        }
        let scale = 1.0 + x.norm();
        self.facets.iter().all(|a| a.dot(x) > eps * scale)
    }

    /// The reflected cone `−K`, with all caches carried over.
    pub fn neg(&self) -> FinGenCone {
        FinGenCone {
            ns: self.ns,
            generators: -&self.generators,
            normalized: -&self.normalized,
            span_basis: self.span_basis.clone(),
            span_complement: self.span_complement.clone(),
            facets: self.facets.iter().map(|a| -a).collect(),
            whole_span: self.whole_span,
            base_vertices: self
                .base_vertices
                .as_ref()
                .map(|vs| vs.iter().map(|v| -v).collect()),
            face_bases: self.face_bases.clone(),
        }
    }

    /// Sub-cones spanning the facets; the boundary of a full-dimensional
    /// piece. Lower-dimensional pieces are their own boundary; a piece that
    /// covers the whole space has none.
    pub fn facet_subcones(&self, tol: &Tolerances) -> Result<Vec<FinGenCone>> {
        if self.span_dim() < self.ns.dim() {
            return Ok(vec![self.clone()]);
        }
        if self.whole_span {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for a in &self.facets {
            let cols: Vec<Vec<f64>> = (0..self.gen_count())
                .filter(|&j| {
                    let g: Vector = self.normalized.column(j).into();
                    a.dot(&g).abs() <= 1e-9
                })
                .map(|j| self.generators.column(j).iter().cloned().collect())
                .collect();
            if !cols.is_empty() {
                out.push(FinGenCone::from_columns(&self.ns, &cols, tol)?);
            }
        }
        Ok(out)
    }

    pub fn into_union(self) -> ConeUnion {
        ConeUnion { pieces: vec![self] }
    }

    fn enumerate_base_vertices(&self, tol: &Tolerances) -> Option<Vec<Vector>> {
        if self.ns.mode() == Norm::L2 || self.gen_count() > MAX_EXACT_GENERATORS {
            return None;
        }
        let n = self.ns.dim();
        let d = self.span_dim();
        // The ℓ1 ball has 2^n facets; refuse before materializing them.
        if self.ns.mode() == Norm::L1 && n > 16 {
            return None;
        }

        let mut ineq: Vec<(Vector, f64)> = Vec::new();
        for a in &self.facets {
            ineq.push((-a, 0.0)); // ⟨a,x⟩ ≥ 0 as ⟨−a,x⟩ ≤ 0
        }
        match self.ns.mode() {
            Norm::L1 => {
                // All sign patterns: σᵀx ≤ 1.
                for mask in 0..(1u32 << n) {
                    let s = DVector::from_fn(n, |i, _| {
                        if mask >> i & 1 == 1 {
                            1.0
                        } else {
                            -1.0
                        }
                    });
                    ineq.push((s, 1.0));
                }
            }
            Norm::Linf => {
                for i in 0..n {
                    let mut e = DVector::zeros(n);
                    e[i] = 1.0;
                    ineq.push((e.clone(), 1.0));
                    ineq.push((-e, 1.0));
                }
            }
            Norm::L2 => unreachable!(),
        }

        if binomial(ineq.len(), d) > VERTEX_ENUM_BUDGET {
            return None;
        }

        let mut vertices: Vec<Vector> = Vec::new();
        let mut active = vec![0usize; d];
        let consider = |chosen: &[usize], vertices: &mut Vec<Vector>| {
            let mut sys = DMatrix::zeros(n, n);
            let mut rhs = DVector::zeros(n);
            let k = self.span_complement.ncols();
            for j in 0..k {
                sys.row_mut(j)
                    .copy_from(&self.span_complement.column(j).transpose());
            }
            for (r, &ci) in chosen.iter().enumerate() {
                sys.row_mut(k + r).copy_from(&ineq[ci].0.transpose());
                rhs[k + r] = ineq[ci].1;
            }
            let lu = sys.full_piv_lu();
            let Some(x) = lu.solve(&rhs) else {
                return;
            };
            if x.iter().any(|v| !v.is_finite()) {
                return;
            }
            let feas = ineq.iter().all(|(a, b)| a.dot(&x) <= b + 1e-9);
            if !feas {
                return;
            }
            let nx = self.ns.norm(&x).unwrap_or(f64::NAN);
            if (nx - 1.0).abs() > 10.0 * tol.eps_mem.max(1e-9) {
                return;
            }
            if !vertices.iter().any(|v| (v - &x).norm() <= 1e-8) {
                vertices.push(x);
            }
        };
        combinations(ineq.len(), d, &mut active, 0, 0, &mut |chosen| {
            consider(chosen, &mut vertices)
        });
        Some(vertices)
    }

    fn enumerate_face_bases(&self) -> Option<Vec<DMatrix<f64>>> {
        if self.ns.mode() != Norm::L2 || self.gen_count() > MAX_EXACT_GENERATORS {
            return None;
        }
        let m = self.gen_count();
        let d = self.span_dim();
        let mut bases = Vec::new();
        for mask in 1u32..(1 << m) {
            if (mask.count_ones() as usize) > d {
                continue;
            }
            let cols: Vec<Vector> = (0..m)
                .filter(|&j| mask >> j & 1 == 1)
                .map(|j| self.normalized.column(j).into())
                .collect();
            let basis = orthonormalize(&cols);
            // Rank-deficient subsets duplicate the span of a smaller subset.
            if basis.len() == cols.len() {
                bases.push(DMatrix::from_columns(&basis));
            }
        }
        Some(bases)
    }
}

/// Finite union of finitely generated cones; models the nonconvex cones.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeUnion {
    pieces: Vec<FinGenCone>,
}

impl ConeUnion {
    pub fn new(pieces: Vec<FinGenCone>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidCone("a cone union needs at least one piece".into()));
        };
        let ns = *first.norm_spec();
        if pieces.iter().any(|p| *p.norm_spec() != ns) {
            return Err(Error::InvalidCone(
                "all pieces of a union must share the norm space".into(),
            ));
        }
        Ok(ConeUnion { pieces })
    }

    pub fn pieces(&self) -> &[FinGenCone] {
        &self.pieces
    }

    pub fn norm_spec(&self) -> &NormSpec {
        self.pieces[0].norm_spec()
    }

    pub fn contains(&self, x: &Vector, eps: f64) -> bool {
        self.pieces.iter().any(|p| p.contains(x, eps))
    }

    pub fn neg(&self) -> ConeUnion {
        ConeUnion {
            pieces: self.pieces.iter().map(FinGenCone::neg).collect(),
        }
    }

    /// All normalized generators across pieces.
    pub fn all_normalized_generators(&self) -> Vec<Vector> {
        let mut out = Vec::new();
        for p in &self.pieces {
            for j in 0..p.gen_count() {
                out.push(p.normalized_generators().column(j).into());
            }
        }
        out
    }

    pub fn total_generators(&self) -> usize {
        self.pieces.iter().map(FinGenCone::gen_count).sum()
    }
}

impl From<FinGenCone> for ConeUnion {
    fn from(c: FinGenCone) -> Self {
        c.into_union()
    }
}

/// Pointedness verdict with a lineality witness when the test fails.
#[derive(Debug, Clone)]
pub struct Pointedness {
    pub pointed: bool,
    /// A nonzero `x` with both `x ∈ K` and `−x ∈ K`.
    pub lineality_witness: Option<Vector>,
}

/// Pointedness of a convex cone: `K ∩ (−K) = {0}` iff `0` is not a convex
/// combination of the normalized generators, decided by LP feasibility.
pub fn is_pointed(k: &FinGenCone, tol: &Tolerances) -> Result<Pointedness> {
    let gens: Vec<Vector> = (0..k.gen_count())
        .map(|j| k.normalized_generators().column(j).into())
        .collect();
    let comb = lp::zero_in_convex_hull(&gens, tol.eps_mem, tol.max_iter)?;
    match comb {
        None => Ok(Pointedness {
            pointed: true,
            lineality_witness: None,
        }),
        Some(lambda) => {
            // 0 = Σ λᵢ ĝᵢ with simplex weights: splitting off the heaviest
            // term gives x ∈ K with −x ∈ K.
            let j = lambda.argmax().0;
            Ok(Pointedness {
                pointed: false,
                lineality_witness: Some(k.normalized_generators().column(j).into()),
            })
        }
    }
}

/// Dual-cone membership `y ∈ K⁺`: nonnegative against every generator of
/// every piece (sufficient by positive-combination closure; the dual cone of
/// the union equals the dual cone of its convex hull).
pub fn dual_cone_membership(k: &ConeUnion, y: &Vector, tol: &Tolerances) -> Result<bool> {
    k.norm_spec().check_dim(y)?;
    for p in k.pieces() {
        for j in 0..p.gen_count() {
            let g: Vector = p.generators().column(j).into();
            if y.dot(&g) < -tol.eps_mem {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sharp-set membership `y ∈ K^#`: strictly positive on every nonzero cone
/// element. Checked both through the normalized generators and through the
/// exact base minimum; the two tests coincide for finitely generated cones.
pub fn sharp_membership(k: &ConeUnion, y: &Vector, tol: &Tolerances) -> Result<bool> {
    k.norm_spec().check_dim(y)?;
    let gen_ok = k
        .all_normalized_generators()
        .iter()
        .all(|g| y.dot(g) > tol.eps_mem);
    if !gen_ok {
        return Ok(false);
    }
    let mu = crate::base::mu_base(k, y, tol)?;
    Ok(mu.value > tol.eps_mem)
}

/// Convex hull of a union as one finitely generated cone: the concatenated
/// generator list (parallel duplicates merge during validation, nothing else
/// is reduced). Finitely generated hulls are closed, so this also represents
/// `cl(conv A)`.
pub fn conv_hull_cone(a: &ConeUnion, tol: &Tolerances) -> Result<FinGenCone> {
    let ns = *a.norm_spec();
    let cols: Vec<Vec<f64>> = a
        .pieces()
        .iter()
        .flat_map(|p| {
            (0..p.gen_count()).map(|j| p.generators().column(j).iter().cloned().collect())
        })
        .collect();
    FinGenCone::from_columns(&ns, &cols, tol)
}

/// Does `A ∩ B = {0}` hold for every piece of `A`? Decided piecewise by the
/// LP "find λ, μ ≥ 0 with Σλ = 1 and `P λ = B μ`": feasibility exhibits a
/// unit-weight element of the piece inside `B`.
pub fn cones_intersect_trivially(
    a: &ConeUnion,
    b: &FinGenCone,
    tol: &Tolerances,
) -> Result<bool> {
    let n = a.norm_spec().dim();
    for piece in a.pieces() {
        let mp = piece.gen_count();
        let mb = b.gen_count();
        let mut sys = DMatrix::zeros(n + 1, mp + mb);
        for j in 0..mp {
            for i in 0..n {
                sys[(i, j)] = piece.normalized_generators()[(i, j)];
            }
            sys[(n, j)] = 1.0;
        }
        for j in 0..mb {
            for i in 0..n {
                sys[(i, mp + j)] = -b.normalized_generators()[(i, j)];
            }
        }
        let mut rhs = DVector::zeros(n + 1);
        rhs[n] = 1.0;
        if lp::eq_feasibility(&sys, &rhs, tol.eps_mem, tol.max_iter)?.feasible {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Membership by LP feasibility over the raw generators (the route used by
/// the brute-force oracles; independent of the cached halfspace description).
pub fn contains_by_lp(k: &ConeUnion, x: &Vector, tol: &Tolerances) -> Result<bool> {
    for p in k.pieces() {
        if lp::in_generated_cone(p.generators(), x, tol.eps_mem, tol.max_iter)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn span_and_complement(cols: &[Vector], n: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let basis = orthonormalize(cols);
    let mut full = basis.clone();
    for i in 0..n {
        if full.len() == n {
            break;
        }
        let mut e = DVector::zeros(n);
        e[i] = 1.0;
        let ext = orthonormalize_against(&full, &e);
        if let Some(v) = ext {
            full.push(v);
        }
    }
    let d = basis.len();
    let span = DMatrix::from_columns(&basis);
    let comp = if d == n {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&full[d..])
    };
    (span, comp)
}

fn orthonormalize(cols: &[Vector]) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for c in cols {
        if let Some(v) = orthonormalize_against(&basis, c) {
            basis.push(v);
        }
    }
    basis
}

fn orthonormalize_against(basis: &[Vector], c: &Vector) -> Option<Vector> {
    let mut r = c.clone();
    // Two Gram-Schmidt passes for numerical stability.
    for _ in 0..2 {
        for b in basis {
            let proj = b.dot(&r);
            r -= b * proj;
        }
    }
    let nr = r.norm();
    if nr > 1e-10 * (1.0 + c.norm()) {
        Some(r / nr)
    } else {
        None
    }
}

/// Facet normals of a full-dimensional cone in reduced coordinates. Each
/// facet of a finitely generated cone is spanned by `d − 1` linearly
/// independent generators lying on it, so scanning those subsets is complete.
fn enumerate_facets(reduced: &[Vector], d: usize) -> Vec<Vector> {
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        let pos = reduced.iter().any(|g| g[0] > 0.0);
        let neg = reduced.iter().any(|g| g[0] < 0.0);
        return match (pos, neg) {
            (true, false) => vec![DVector::from_column_slice(&[1.0])],
            (false, true) => vec![DVector::from_column_slice(&[-1.0])],
            _ => Vec::new(), // a line: the cone is the whole span
        };
    }

    let m = reduced.len();
    let mut normals: Vec<Vector> = Vec::new();
    let mut chosen = vec![0usize; d - 1];
    combinations(m, d - 1, &mut chosen, 0, 0, &mut |subset| {
        let rows: Vec<Vector> = subset.iter().map(|&i| reduced[i].clone()).collect();
        let basis = orthonormalize(&rows);
        if basis.len() < d - 1 {
            return; // generators in the subset are linearly dependent
        }
        // The candidate normal spans the 1-dimensional orthogonal complement.
        let mut candidate = None;
        for i in 0..d {
            let mut e = DVector::zeros(d);
            e[i] = 1.0;
            if let Some(v) = orthonormalize_against(&basis, &e) {
                candidate = Some(v);
                break;
            }
        }
        let Some(h) = candidate else {
            return;
        };
        let mut all_nonneg = true;
        let mut all_nonpos = true;
        for g in reduced {
            let s = h.dot(g);
            if s < -1e-10 {
                all_nonneg = false;
            }
            if s > 1e-10 {
                all_nonpos = false;
            }
        }
        let keep = if all_nonneg {
            Some(h.clone())
        } else if all_nonpos {
            Some(-h)
        } else {
            None
        };
        if let Some(h) = keep {
            if !normals.iter().any(|u| u.dot(&h) >= 1.0 - 1e-9) {
                normals.push(h);
            }
        }
    });
    normals
}

fn combinations(
    n: usize,
    k: usize,
    buf: &mut Vec<usize>,
    start: usize,
    depth: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(buf);
        return;
    }
    for i in start..n {
        buf[depth] = i;
        combinations(n, k, buf, i + 1, depth + 1, f);
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}
