//! Dense phase-one simplex for small feasibility problems.
//!
//! Everything cone-logical in this crate reduces to the question "does
//! `A x = b, x ≥ 0` have a solution": pointedness, `0 ∈ conv(·)`, point-in-hull
//! rechecks and trivial-intersection tests. Problems are tiny (a handful of
//! rows, at most a few dozen columns), so a flat tableau with Bland's rule is
//! exact enough and immune to cycling.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Outcome of a feasibility solve.
#[derive(Debug, Clone)]
pub struct Feasibility {
    /// Phase-one optimum scaled by the data magnitude; feasible iff this is
    /// below the caller's tolerance.
    pub residual: f64,
    pub feasible: bool,
    /// A feasible point when one exists.
    pub point: Option<DVector<f64>>,
}

/// Decides feasibility of `A x = b, x ≥ 0` by minimizing the sum of
/// artificial variables.
pub fn eq_feasibility(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<Feasibility> {
    let m = a.nrows();
    let n = a.ncols();
    assert_eq!(b.len(), m, "rhs length must match the row count");

    let scale = 1.0 + a.amax().max(b.amax());
    let pivot_tol = 1e-11 * scale;

    // Tableau: columns [x (n) | artificials (m) | rhs]; final row is the
    // phase-one objective in reduced-cost form.
    let cols = n + m + 1;
    let mut t = vec![0.0f64; (m + 1) * cols];
    let idx = |r: usize, c: usize| r * cols + c;

    for i in 0..m {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            t[idx(i, j)] = flip * a[(i, j)];
        }
        t[idx(i, n + i)] = 1.0;
        t[idx(i, n + m)] = flip * b[i];
    }
    // Objective row: cost of each x column is the column sum (artificials
    // start basic with unit cost).
    for j in 0..=n + m {
        let mut s = 0.0;
        for i in 0..m {
            s += t[idx(i, j)];
        }
        if j >= n && j < n + m {
            s -= 1.0;
        }
        t[idx(m, j)] = s;
    }

    let mut basis: Vec<usize> = (n..n + m).collect();
    let iter_cap = max_iter.max(50 * (m + n) + 100);

    for _ in 0..iter_cap {
        // Bland's rule: smallest-index column with positive reduced cost.
        let mut enter = None;
        for j in 0..n + m {
            if t[idx(m, j)] > pivot_tol {
                enter = Some(j);
                break;
            }
        }
        let Some(enter) = enter else {
            return Ok(extract(&t, &basis, m, n, cols, tol, scale));
        };

        // Ratio test, ties broken by smallest basis variable.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let aij = t[idx(i, enter)];
            if aij > pivot_tol {
                let ratio = t[idx(i, n + m)] / aij;
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - 1e-14 || (ratio < lr + 1e-14 && basis[i] < basis[li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((leave, _)) = leave else {
            // Unbounded phase-one objective cannot happen with artificials;
            // reaching this means the tableau degenerated numerically.
            return Err(Error::NumericalFailure(
                "phase-one simplex lost boundedness".into(),
            ));
        };

        // Pivot.
        let piv = t[idx(leave, enter)];
        for j in 0..cols {
            t[idx(leave, j)] /= piv;
        }
        for r in 0..=m {
            if r != leave {
                let f = t[idx(r, enter)];
                if f != 0.0 {
                    for j in 0..cols {
                        t[idx(r, j)] -= f * t[idx(leave, j)];
                    }
                }
            }
        }
        basis[leave] = enter;
    }
    Err(Error::NumericalFailure(
        "phase-one simplex exceeded the iteration cap".into(),
    ))
}

fn extract(
    t: &[f64],
    basis: &[usize],
    m: usize,
    n: usize,
    cols: usize,
    tol: f64,
    scale: f64,
) -> Feasibility {
    let mut residual = 0.0;
    for (i, &bv) in basis.iter().enumerate() {
        if bv >= n {
            residual += t[i * cols + n + m].max(0.0);
        }
    }
    residual /= scale;
    let feasible = residual <= tol;
    let point = feasible.then(|| {
        let mut x = DVector::zeros(n);
        for (i, &bv) in basis.iter().enumerate() {
            if bv < n {
                x[bv] = t[i * cols + n + m].max(0.0);
            }
        }
        x
    });
    Feasibility {
        residual,
        feasible,
        point,
    }
}

/// Is `0` a convex combination of the given points? Decided by the LP
/// `P λ = 0, Σλ = 1, λ ≥ 0`; returns the combination when feasible.
pub fn zero_in_convex_hull(
    points: &[DVector<f64>],
    tol: f64,
    max_iter: usize,
) -> Result<Option<DVector<f64>>> {
    let Some(first) = points.first() else {
        return Ok(None);
    };
    let n = first.len();
    let m = points.len();
    let mut a = DMatrix::zeros(n + 1, m);
    for (j, p) in points.iter().enumerate() {
        for i in 0..n {
            a[(i, j)] = p[i];
        }
        a[(n, j)] = 1.0;
    }
    let mut b = DVector::zeros(n + 1);
    b[n] = 1.0;
    let f = eq_feasibility(&a, &b, tol, max_iter)?;
    Ok(f.point)
}

/// Is `x` a convex combination of the given points?
pub fn point_in_convex_hull(
    points: &[DVector<f64>],
    x: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<bool> {
    let Some(first) = points.first() else {
        return Ok(false);
    };
    let n = first.len();
    let m = points.len();
    let mut a = DMatrix::zeros(n + 1, m);
    for (j, p) in points.iter().enumerate() {
        for i in 0..n {
            a[(i, j)] = p[i];
        }
        a[(n, j)] = 1.0;
    }
    let mut b = DVector::zeros(n + 1);
    for i in 0..n {
        b[i] = x[i];
    }
    b[n] = 1.0;
    Ok(eq_feasibility(&a, &b, tol, max_iter)?.feasible)
}

/// Is `x` a nonnegative combination of the columns of `g`?
pub fn in_generated_cone(
    g: &DMatrix<f64>,
    x: &DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<bool> {
    Ok(eq_feasibility(g, x, tol, max_iter)?.feasible)
}
