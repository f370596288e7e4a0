//! Property suites for the geometric primitives: norm axioms, duality
//! bounds, projection laws, and agreement between the exact base queries and
//! plain sampling.

use conesep::base::{mu_base, sample_base, sigma_base};
use conesep::cones::{conv_hull_cone, dual_cone_membership, ConeUnion, FinGenCone};
use conesep::geometry::{project_onto_cone, Norm, NormSpec, Tolerances, Vector};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng as _, SeedableRng as _};
use rand_chacha::ChaCha8Rng;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn v(s: &[f64]) -> Vector {
    DVector::from_column_slice(s)
}

fn random_cone(rng: &mut ChaCha8Rng, ns: &NormSpec, pieces: usize) -> ConeUnion {
    let n = ns.dim();
    let mut built = Vec::new();
    for _ in 0..pieces {
        let m = rng.gen_range(1..=4);
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                loop {
                    let g: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    if g.iter().map(|x| x * x).sum::<f64>() > 0.05 {
                        return g;
                    }
                }
            })
            .collect();
        built.push(FinGenCone::from_columns(ns, &cols, &tol()).unwrap());
    }
    ConeUnion::new(built).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_axioms(
        a in proptest::array::uniform3(-100.0f64..100.0),
        b in proptest::array::uniform3(-100.0f64..100.0),
        lam in -10.0f64..10.0,
    ) {
        for mode in [Norm::L1, Norm::L2, Norm::Linf] {
            let ns = NormSpec::new(mode, 3).unwrap();
            let x = v(&a);
            let y = v(&b);
            let nx = ns.norm(&x).unwrap();
            let ny = ns.norm(&y).unwrap();
            prop_assert!(ns.norm(&(&x + &y)).unwrap() <= nx + ny + 1e-9);
            prop_assert!((ns.norm(&(&x * lam)).unwrap() - lam.abs() * nx).abs() <= 1e-9 * (1.0 + nx));
            // Pairing bound against the dual norm.
            prop_assert!(x.dot(&y).abs() <= ns.dual_norm(&x).unwrap() * ny + 1e-9);
        }
    }

    #[test]
    fn normlinear_scaling(
        xs in proptest::array::uniform2(-3.0f64..3.0),
        alpha in 0.0f64..2.0,
        pt in proptest::array::uniform2(-3.0f64..3.0),
        lam in 0.01f64..50.0,
    ) {
        let ns = NormSpec::new(Norm::L2, 2).unwrap();
        let xstar = v(&xs);
        let x = v(&pt);
        let f = conesep::bp::phi_eval(&ns, &xstar, alpha, &x).unwrap();
        // Scaling (x*, α) by λ scales φ by λ, so sublevel membership is
        // scale-invariant.
        let f2 = conesep::bp::phi_eval(&ns, &(&xstar * lam), alpha * lam, &x).unwrap();
        prop_assert!((f2 - lam * f).abs() <= 1e-9 * (1.0 + f.abs() * lam));
    }
}

#[test]
fn projection_examples_and_laws() {
    let ns = NormSpec::new(Norm::L2, 2).unwrap();
    let quadrant =
        FinGenCone::from_columns(&ns, &[vec![1.0, 0.0], vec![0.0, 1.0]], &tol()).unwrap();
    let p = project_onto_cone(&v(&[1.0, -2.0]), &quadrant, &tol()).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-9 && p[1].abs() < 1e-9);
    let p = project_onto_cone(&v(&[-1.0, -2.0]), &quadrant, &tol()).unwrap();
    assert!(p.norm() < 1e-9);
    let diag = FinGenCone::from_columns(&ns, &[vec![1.0, 1.0]], &tol()).unwrap();
    let p = project_onto_cone(&v(&[1.0, 0.0]), &diag, &tol()).unwrap();
    assert!((p[0] - 0.5).abs() < 1e-9 && (p[1] - 0.5).abs() < 1e-9);

    // Firm nonexpansiveness on random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for dim in [2usize, 3] {
        let ns = NormSpec::new(Norm::L2, dim).unwrap();
        let k = random_cone(&mut rng, &ns, 1);
        let piece = &k.pieces()[0];
        for _ in 0..300 {
            let a = DVector::from_fn(dim, |_, _| rng.gen_range(-3.0..3.0));
            let b = DVector::from_fn(dim, |_, _| rng.gen_range(-3.0..3.0));
            let pa = project_onto_cone(&a, piece, &tol()).unwrap();
            let pb = project_onto_cone(&b, piece, &tol()).unwrap();
            assert!(
                (pa.clone() - &pb).norm() <= (a - b).norm() + 1e-9,
                "projection expanded a pair"
            );
        }
    }
}

#[test]
fn dual_cone_agrees_with_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for mode in [Norm::L1, Norm::L2, Norm::Linf] {
        let ns = NormSpec::new(mode, 2).unwrap();
        let k = random_cone(&mut rng, &ns, 2);
        let points = sample_base(&k, 1000, 9, &tol()).unwrap();
        for _ in 0..1000 {
            let y = DVector::from_fn(2, |_, _| rng.gen_range(-2.0..2.0));
            if dual_cone_membership(&k, &y, &tol()).unwrap() {
                for x in &points {
                    assert!(y.dot(x) >= -1e-6, "dual membership contradicted by a sample");
                }
            }
        }
    }
}

#[test]
fn dual_cone_of_union_equals_dual_of_hull() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let ns = NormSpec::new(Norm::L2, 3).unwrap();
    for _ in 0..20 {
        let k = random_cone(&mut rng, &ns, 2);
        let hull = conv_hull_cone(&k, &tol()).unwrap().into_union();
        for _ in 0..200 {
            let y = DVector::from_fn(3, |_, _| rng.gen_range(-2.0..2.0));
            assert_eq!(
                dual_cone_membership(&k, &y, &tol()).unwrap(),
                dual_cone_membership(&hull, &y, &tol()).unwrap(),
            );
        }
    }
}

#[test]
fn base_extrema_hold_in_three_dimensions() {
    // Stress for the 3D enumeration paths: exact μ/σ bound the sampled
    // values from the correct side under all three norms, and agree with the
    // independent grid oracle up to its resolution.
    use conesep::oracle::{GridBase, OracleConfig};
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = OracleConfig {
        grid_count: 20_000,
        seed: 1,
    };
    for mode in [Norm::L1, Norm::L2, Norm::Linf] {
        let ns = NormSpec::new(mode, 3).unwrap();
        for _ in 0..12 {
            let pieces = rng.gen_range(1..=2);
            let k = random_cone(&mut rng, &ns, pieces);
            let samples = sample_base(&k, 4000, 3, &tol()).unwrap();
            let grid = GridBase::new(&k, &cfg, &tol()).unwrap();
            for _ in 0..10 {
                let c = DVector::from_fn(3, |_, _| rng.gen_range(-2.0..2.0));
                let mu = mu_base(&k, &c, &tol()).unwrap().value;
                let sigma = sigma_base(&k, &c, &tol()).unwrap().value;
                let smin = samples.iter().map(|p| c.dot(p)).fold(f64::INFINITY, f64::min);
                let smax = samples
                    .iter()
                    .map(|p| c.dot(p))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!(mu <= smin + 1e-9, "exact minimum above a sampled value");
                assert!(sigma >= smax - 1e-9, "exact maximum below a sampled value");
                // Grid agreement: the grid minimum over-estimates μ (and the
                // grid maximum under-estimates σ) by at most the angular
                // resolution times the functional scale.
                let slack = 5e-2 * (1.0 + c.norm());
                let gmin = grid.min_of(&c);
                let gmax = -grid.min_of(&(-&c));
                assert!(mu <= gmin + 1e-9 && gmin - mu <= slack, "μ vs grid: {mu} / {gmin}");
                assert!(sigma >= gmax - 1e-9 && sigma - gmax <= slack, "σ vs grid: {sigma} / {gmax}");
                let dual = ns.dual_norm(&c).unwrap();
                assert!(-dual - 1e-9 <= mu && sigma <= dual + 1e-9);
            }
        }
    }
}
