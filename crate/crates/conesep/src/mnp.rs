//! Closest pair of two compact convex sets given by support oracles.
//!
//! Wolfe's min-norm-point method applied to the Minkowski difference: the
//! linear minimization oracle pulls one extreme point from each set, the
//! corral keeps an affinely independent set of difference atoms, and the
//! affine min-norm subproblem is solved exactly through its KKT system. On
//! polytopal hulls this terminates finitely; on smooth hulls (Euclidean base
//! arcs) it converges with a duality gap we drive below the caller's
//! tolerance. The engine only has to find a good direction — all
//! certificates are re-derived afterwards from exact base extrema.

use nalgebra::{DMatrix, DVector};

use crate::geometry::Vector;
use crate::{Error, Result};

/// Support oracle of a nonempty compact convex set: for a direction `d`
/// return `max ⟨d, x⟩` over the set together with a point attaining it.
pub trait SupportOracle {
    fn dim(&self) -> usize;
    fn support(&self, d: &Vector) -> Result<(f64, Vector)>;
}

/// Finite point set (its convex hull).
pub struct PointSet<'a>(pub &'a [Vector]);

impl SupportOracle for PointSet<'_> {
    fn dim(&self) -> usize {
        self.0[0].len()
    }

    fn support(&self, d: &Vector) -> Result<(f64, Vector)> {
        let mut best = 0usize;
        let mut best_v = f64::NEG_INFINITY;
        for (i, p) in self.0.iter().enumerate() {
            let v = d.dot(p);
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        Ok((best_v, self.0[best].clone()))
    }
}

/// Result of a closest-pair computation between sets `P` (upper) and `Q`
/// (lower).
#[derive(Debug, Clone)]
pub struct ClosestPair {
    /// Euclidean distance estimate `‖u − v‖₂`.
    pub distance: f64,
    /// Attaining point in `P`.
    pub u: Vector,
    /// Attaining point in `Q`.
    pub v: Vector,
    /// Final duality gap `‖w‖² − min ⟨w, P − Q⟩`; a certified lower bound on
    /// the squared distance defect.
    pub gap: f64,
}

struct Atom {
    diff: Vector,
    p: Vector,
    q: Vector,
}

/// Computes the closest pair `argmin ‖p − q‖₂` over `p ∈ P, q ∈ Q`.
pub fn closest_pair(
    p_set: &dyn SupportOracle,
    q_set: &dyn SupportOracle,
    gap_tol: f64,
    max_iter: usize,
) -> Result<ClosestPair> {
    let n = p_set.dim();
    assert_eq!(n, q_set.dim(), "support oracles must share the ambient dimension");

    let lmo = |d: &Vector| -> Result<Atom> {
        // Minimize ⟨d, p − q⟩: support of P at −d, support of Q at d.
        let (_, p) = p_set.support(&(-d))?;
        let (_, q) = q_set.support(d)?;
        Ok(Atom {
            diff: &p - &q,
            p,
            q,
        })
    };

    let mut atoms: Vec<Atom> = vec![lmo(&DVector::from_element(n, 1.0))?];
    let mut weights: Vec<f64> = vec![1.0];
    let mut w = atoms[0].diff.clone();

    let mut gap = f64::INFINITY;
    for _ in 0..max_iter {
        if w.norm_squared() <= 1e-28 {
            gap = 0.0;
            break;
        }
        let s = lmo(&w)?;
        gap = w.norm_squared() - w.dot(&s.diff);
        if gap <= gap_tol {
            break;
        }
        // An atom we already hold cannot improve the corral.
        let dup_tol = 1e-14 * (1.0 + s.diff.norm());
        if atoms.iter().any(|a| (&a.diff - &s.diff).norm() <= dup_tol) {
            break;
        }
        atoms.push(s);
        weights.push(0.0);

        // Inner loop: exact min-norm point over the affine hull of the
        // corral, stepping back to the boundary of the simplex when a weight
        // would turn negative.
        for _ in 0..16 * (n + 2) {
            let alpha = affine_min_norm(&atoms)?;
            if alpha.iter().all(|&a| a >= -1e-12) {
                weights = alpha.iter().map(|&a| a.max(0.0)).collect();
                renormalize(&mut weights);
                break;
            }
            let mut theta = 1.0f64;
            for i in 0..weights.len() {
                if alpha[i] < weights[i] {
                    let t = weights[i] / (weights[i] - alpha[i]);
                    if alpha[i] < 0.0 {
                        theta = theta.min(t);
                    }
                }
            }
            for i in 0..weights.len() {
                weights[i] = (1.0 - theta) * weights[i] + theta * alpha[i];
            }
            let mut i = 0;
            while i < atoms.len() {
                if weights[i] <= 1e-13 {
                    atoms.remove(i);
                    weights.remove(i);
                } else {
                    i += 1;
                }
            }
            renormalize(&mut weights);
            if atoms.len() <= 1 {
                break;
            }
        }
        w = combine(&atoms, &weights, |a| &a.diff);
    }

    let u = combine(&atoms, &weights, |a| &a.p);
    let v = combine(&atoms, &weights, |a| &a.q);
    Ok(ClosestPair {
        distance: (&u - &v).norm(),
        u,
        v,
        gap: gap.max(0.0),
    })
}

/// Min-norm point of the convex hull of a finite point set, with the
/// optimality property `⟨w, p⟩ ≥ ‖w‖²` for every input point.
pub fn min_norm_point(points: &[Vector], gap_tol: f64, max_iter: usize) -> Result<Vector> {
    let n = points[0].len();
    let origin = [DVector::zeros(n)];
    let pair = closest_pair(&PointSet(points), &PointSet(&origin), gap_tol, max_iter)?;
    Ok(pair.u)
}

fn renormalize(weights: &mut [f64]) {
    let s: f64 = weights.iter().sum();
    if s > 0.0 {
        for wgt in weights.iter_mut() {
            *wgt /= s;
        }
    }
}

fn combine<'a, F>(atoms: &'a [Atom], weights: &[f64], f: F) -> Vector
where
    F: Fn(&'a Atom) -> &'a Vector,
{
    let n = f(&atoms[0]).len();
    let mut out = DVector::zeros(n);
    for (a, &wgt) in atoms.iter().zip(weights) {
        out += f(a) * wgt;
    }
    out
}

/// Min-norm point over the affine hull of the atoms: solve the KKT system
/// `[2G 1; 1ᵀ 0] [α; ν] = [0; 1]` with `G` the Gram matrix of the diffs.
fn affine_min_norm(atoms: &[Atom]) -> Result<Vec<f64>> {
    let k = atoms.len();
    let mut kkt = DMatrix::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            kkt[(i, j)] = 2.0 * atoms[i].diff.dot(&atoms[j].diff);
        }
        kkt[(i, k)] = 1.0;
        kkt[(k, i)] = 1.0;
    }
    let mut rhs = DVector::zeros(k + 1);
    rhs[k] = 1.0;

    let solved = kkt
        .clone()
        .full_piv_lu()
        .solve(&rhs)
        .or_else(|| kkt.svd(true, true).solve(&rhs, 1e-12).ok())
        .ok_or_else(|| Error::NumericalFailure("min-norm KKT system is singular".into()))?;
    Ok(solved.iter().take(k).cloned().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(s: &[f64]) -> Vector {
        DVector::from_column_slice(s)
    }

    #[test]
    fn closest_pair_of_parallel_segments() {
        let p = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let q = [v(&[3.0, 0.0]), v(&[0.0, 3.0])];
        let cp = closest_pair(&PointSet(&p), &PointSet(&q), 1e-14, 1000).unwrap();
        assert_relative_eq!(cp.distance, 2.0_f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn touching_sets_report_zero_distance() {
        let p = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let cp = closest_pair(&PointSet(&p), &PointSet(&p), 1e-14, 1000).unwrap();
        assert!(cp.distance <= 1e-12);
    }

    #[test]
    fn point_to_triangle() {
        let tri = [v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let pt = [v(&[1.0, 1.0])];
        let cp = closest_pair(&PointSet(&tri), &PointSet(&pt), 1e-14, 1000).unwrap();
        assert_relative_eq!(cp.distance, 0.5_f64.sqrt(), epsilon = 1e-10);
        assert_relative_eq!(cp.u[0], 0.5, epsilon = 1e-9);
        assert_relative_eq!(cp.u[1], 0.5, epsilon = 1e-9);
    }

    #[test]
    fn min_norm_point_optimality() {
        let pts = [v(&[1.0, 0.2]), v(&[0.3, 1.0]), v(&[0.9, 0.9])];
        let w = min_norm_point(&pts, 1e-14, 1000).unwrap();
        let w2 = w.norm_squared();
        for p in &pts {
            assert!(w.dot(p) >= w2 - 1e-9, "min-norm optimality violated");
        }
    }
}
