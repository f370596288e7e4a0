//! Strict separation of cones in finite-dimensional real normed spaces.
//!
//! Two (possibly nonconvex) cones `A` and `-K` are *strictly separated* by a
//! closed convex cone `C` when `-K \ {0}` lies in the interior of `C` and
//! `A \ {0}` lies outside its closure. This crate decides and constructs such
//! separations with `C` a Bishop-Phelps cone, i.e. the sublevel cone of a
//! normlinear function `x ↦ ⟨x*, x⟩ + α‖x‖`. The output is a machine-checkable
//! certificate `(x*, α)` together with the hull margins and the admissible
//! `α`-interval, and every separation predicate can be re-verified
//! independently (by exact base extrema, by sampling, and by brute-force grid
//! oracles).
//!
//! Cones are finitely generated convex cones or finite unions thereof, in
//! `ℝⁿ` (`n ≥ 2`) under the `ℓ1`, `ℓ2` or `ℓ∞` norm.
//!
//! ```
//! use conesep::geometry::{Norm, NormSpec, Tolerances};
//! use conesep::cones::{ConeUnion, FinGenCone};
//! use conesep::separation::strict_bp_separation;
//!
//! let ns = NormSpec::new(Norm::L2, 2)?;
//! let tol = Tolerances::default();
//! // -K is the nonnegative quadrant; A is a pair of rays avoiding it.
//! let k = FinGenCone::from_columns(&ns, &[vec![-1.0, 0.0], vec![0.0, -1.0]], &tol)?;
//! let a = ConeUnion::new(vec![
//!     FinGenCone::from_columns(&ns, &[vec![-1.0, 2.0]], &tol)?,
//!     FinGenCone::from_columns(&ns, &[vec![2.0, -1.0]], &tol)?,
//! ])?;
//! let verdict = strict_bp_separation(&k.clone().into_union(), &a, &tol)?;
//! let cert = verdict.certificate.expect("these cones separate");
//! assert!(cert.alpha > 0.0);
//! # Ok::<(), conesep::Error>(())
//! ```

pub mod augmented;
pub mod base;
pub mod bp;
pub mod cones;
pub mod geometry;
pub mod lp;
pub mod mnp;
pub mod oracle;
pub mod scene;
pub mod separation;

mod error;

pub use error::{Error, Result};

/// Tool version embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

// The guide chapters double as doc-tests so the book cannot drift from the
// API. `cargo test` runs every fenced Rust block below.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/norms-and-cones.md")]
    mod norms_and_cones {}
    #[doc = include_str!("../../../book/src/bases-and-hulls.md")]
    mod bases_and_hulls {}
    #[doc = include_str!("../../../book/src/augmented-dual-cones.md")]
    mod augmented_dual_cones {}
    #[doc = include_str!("../../../book/src/bishop-phelps-cones.md")]
    mod bishop_phelps_cones {}
    #[doc = include_str!("../../../book/src/separation.md")]
    mod separation_chapter {}
    #[doc = include_str!("../../../book/src/scenes-and-cli.md")]
    mod scenes_and_cli {}
}
