//! Scene ingestion, task dispatch, report emission and 2D plot-data export.
//!
//! A scene is a UTF-8 JSON file fixing the dimension, the norm, the two
//! cones as generator lists, the task, and optionally a certificate, custom
//! tolerances and a seed. Reports round-trip losslessly: floats are written
//! with 17 significant digits.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::augmented::{classify_aug_pair, AugClassification, AugPair};
use crate::base::{mu_base, sample_base};
use crate::bp::phi_eval;
use crate::cones::{ConeUnion, FinGenCone};
use crate::geometry::{Norm, NormSpec, Tolerances, Vector};
use crate::oracle::{oracle_cor_test_on_grid, GridBase, OracleConfig};
use crate::separation::{
    check_necessary_conditions, strict_bp_separation, verify_boundary_separation,
    verify_strict_separation, AnalysisReport, ObstructionReason, SeparationVerdict,
    VerificationReport,
};
use crate::{Error, Result};

/// Task selector; the CLI subcommands mirror this.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "analyze")]
    Analyze,
    #[serde(rename = "separate")]
    Separate,
    #[serde(rename = "certify")]
    Certify,
    #[serde(rename = "oracle-check")]
    OracleCheck,
    #[serde(rename = "export-plot")]
    ExportPlot,
}

/// Generator pieces of one cone: `pieces[p][g]` is a coordinate vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConePieces {
    pub pieces: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateInput {
    pub xstar: Vec<f64>,
    pub alpha: f64,
}

/// On-disk scene description. Unknown fields are rejected so that typos
/// surface as input errors instead of silently changed defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub dimension: usize,
    pub norm: Norm,
    #[serde(rename = "K")]
    pub k: ConePieces,
    #[serde(rename = "A")]
    pub a: ConePieces,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateInput>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Scene> {
        Scene::from_json(&std::fs::read_to_string(path)?)
    }

    fn build_cone(&self, ns: &NormSpec, pieces: &ConePieces, which: &str) -> Result<ConeUnion> {
        if pieces.pieces.is_empty() {
            return Err(Error::InvalidInput(format!("cone {which} has no pieces")));
        }
        let mut built = Vec::new();
        for (i, cols) in pieces.pieces.iter().enumerate() {
            let piece = FinGenCone::from_columns(ns, cols, &self.tolerances).map_err(|e| {
                Error::InvalidInput(format!("cone {which}, piece {i}: {e}"))
            })?;
            built.push(piece);
        }
        ConeUnion::new(built)
    }

    /// Validates the scene and materializes the cones.
    pub fn materialize(&self) -> Result<(NormSpec, ConeUnion, ConeUnion)> {
        let ns = NormSpec::new(self.norm, self.dimension)?;
        let k = self.build_cone(&ns, &self.k, "K")?;
        let a = self.build_cone(&ns, &self.a, "A")?;
        if self.task == Task::Certify && self.certificate.is_none() {
            return Err(Error::InvalidInput(
                "task 'certify' requires a certificate in the scene".into(),
            ));
        }
        if let Some(c) = &self.certificate {
            if c.xstar.len() != self.dimension {
                return Err(Error::DimensionMismatch {
                    expected: self.dimension,
                    got: c.xstar.len(),
                });
            }
            if c.alpha < 0.0 || c.alpha.is_nan() {
                return Err(Error::InvalidInput("certificate alpha must be ≥ 0".into()));
            }
        }
        Ok((ns, k, a))
    }
}

// Report DTOs: plain JSON shapes for the verdict types that carry vectors.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub xstar: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub hull_distance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_interval: Option<(f64, f64)>,
    pub aug_class: AugClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub witness_point: Vec<f64>,
    pub reason: ObstructionReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub separated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionReport>,
    pub low_margin: bool,
}

impl From<&SeparationVerdict> for VerdictReport {
    fn from(v: &SeparationVerdict) -> Self {
        VerdictReport {
            separated: v.separated,
            certificate: v.certificate.as_ref().map(|c| CertificateReport {
                xstar: c.xstar.iter().cloned().collect(),
                alpha: c.alpha,
                beta: c.beta,
                gamma: c.gamma,
                hull_distance: c.hull_distance,
                alpha_interval: c.alpha_interval,
                aug_class: c.aug_class,
            }),
            obstruction: v.obstruction.as_ref().map(|o| ObstructionReport {
                witness_point: o.witness_point.iter().cloned().collect(),
                reason: o.reason,
            }),
            low_margin: v.low_margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub strict: VerificationReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<VerificationReport>,
    pub aug_class: AugClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub directions_checked: usize,
    pub mu_max_abs_err: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation_agrees: Option<bool>,
    pub cor_agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSummary {
    pub rows: usize,
    pub labels: Vec<String>,
}

/// Full run report. Identical scene and seed yield byte-identical reports
/// except for the wall-time field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scene: Scene,
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certification: Option<CertificationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PlotSummary>,
    pub wall_time_ms: f64,
    pub version: String,
}

/// Exit code contract of the command-line driver.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NOT_SEPARATED: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Maps an error to the documented process exit code.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NumericalFailure(_) => EXIT_NUMERICAL,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Runs a scene file with its embedded task.
pub fn run_scene(path: &Path) -> Result<(Report, i32)> {
    let scene = Scene::from_file(path)?;
    execute(&scene, None, None, None, None)
}

/// Runs a scene with optional command-line overrides. `plot_out` receives
/// the CSV for the export-plot task.
pub fn execute(
    scene: &Scene,
    task_override: Option<Task>,
    samples_override: Option<usize>,
    seed_override: Option<u64>,
    plot_out: Option<&Path>,
) -> Result<(Report, i32)> {
    let started = Instant::now();
    let task = task_override.unwrap_or(scene.task);
    let samples = samples_override.unwrap_or(10_000);
    let seed = seed_override.unwrap_or(scene.seed);
    let tol = scene.tolerances;

    let mut effective = scene.clone();
    effective.task = task;
    effective.seed = seed;
    if effective.task == Task::Certify && effective.certificate.is_none() {
        return Err(Error::InvalidInput(
            "task 'certify' requires a certificate in the scene".into(),
        ));
    }
    let (ns, k, a) = effective.materialize()?;

    let mut report = Report {
        scene: effective.clone(),
        task,
        analysis: None,
        verdict: None,
        certification: None,
        oracle: None,
        plot: None,
        wall_time_ms: 0.0,
        version: crate::VERSION.to_string(),
    };

    let exit = match task {
        Task::Analyze => {
            report.analysis = Some(check_necessary_conditions(&k, &a, &tol)?);
            EXIT_OK
        }
        Task::Separate => {
            let verdict = strict_bp_separation(&k, &a, &tol)?;
            report.analysis = Some(check_necessary_conditions(&k, &a, &tol)?);
            if let Some(cert) = &verdict.certificate {
                let strict = verify_strict_separation(
                    &k, &a, &cert.xstar, cert.alpha, samples, seed, &tol,
                )?;
                let boundary = if ns.dim() <= 3 {
                    Some(verify_boundary_separation(
                        &k, &a, &cert.xstar, cert.alpha, samples, seed, &tol,
                    )?)
                } else {
                    None
                };
                report.certification = Some(CertificationReport {
                    strict,
                    boundary,
                    aug_class: cert.aug_class,
                });
            }
            let separated = verdict.separated;
            report.verdict = Some(VerdictReport::from(&verdict));
            if separated {
                EXIT_OK
            } else {
                EXIT_NOT_SEPARATED
            }
        }
        Task::Certify => {
            let cert = effective.certificate.as_ref().expect("validated above");
            let xstar = DVector::from_column_slice(&cert.xstar);
            let pair = AugPair::new(xstar.clone(), cert.alpha)?;
            let strict =
                verify_strict_separation(&k, &a, &xstar, cert.alpha, samples, seed, &tol)?;
            let boundary = if ns.dim() <= 3 {
                Some(verify_boundary_separation(
                    &k, &a, &xstar, cert.alpha, samples, seed, &tol,
                )?)
            } else {
                None
            };
            let aug_class = classify_aug_pair(&k, &pair, &tol)?;
            let ok = strict.ok;
            report.certification = Some(CertificationReport {
                strict,
                boundary,
                aug_class,
            });
            if ok {
                EXIT_OK
            } else {
                EXIT_NOT_SEPARATED
            }
        }
        Task::OracleCheck => {
            let (oracle, agree) = oracle_check(&ns, &k, &a, &effective, samples, seed, &tol)?;
            report.oracle = Some(oracle);
            if agree {
                EXIT_OK
            } else {
                EXIT_NUMERICAL
            }
        }
        Task::ExportPlot => {
            let csv = export_plot(&effective)?;
            let rows = csv.lines().count().saturating_sub(1);
            let mut labels: Vec<String> = csv
                .lines()
                .skip(1)
                .filter_map(|l| l.split(',').next().map(str::to_owned))
                .collect();
            labels.sort();
            labels.dedup();
            if let Some(out) = plot_out {
                let mut f = std::fs::File::create(out)?;
                f.write_all(csv.as_bytes())?;
            }
            report.plot = Some(PlotSummary { rows, labels });
            EXIT_OK
        }
    };

    report.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok((report, exit))
}

fn oracle_check(
    ns: &NormSpec,
    k: &ConeUnion,
    a: &ConeUnion,
    scene: &Scene,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<(OracleReport, bool)> {
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    let grid_count = if ns.dim() == 2 { 100_000 } else { 40_000 };
    let cfg = OracleConfig {
        grid_count,
        seed,
    };
    let grid_k = GridBase::new(k, &cfg, tol)?;
    let grid_a = GridBase::new(a, &cfg, tol)?;
    let mu_tol = if ns.dim() == 2 { 5e-3 } else { 2e-2 };

    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let mut max_err = 0.0f64;
    let dirs = 16usize;
    for _ in 0..dirs {
        let c = DVector::from_fn(ns.dim(), |_, _| rng.gen_range(-1.0..1.0));
        let err_k = (mu_base(k, &c, tol)?.value - grid_k.min_of(&c)).abs();
        let err_a = (mu_base(a, &c, tol)?.value - grid_a.min_of(&c)).abs();
        max_err = max_err.max(err_k).max(err_a);
    }
    let mu_agrees = max_err <= mu_tol;

    let separation_agrees = match &scene.certificate {
        None => None,
        Some(cert) => {
            let xstar = DVector::from_column_slice(&cert.xstar);
            let verdict =
                verify_strict_separation(k, a, &xstar, cert.alpha, samples, seed, tol)?;
            let by_grid = crate::oracle::oracle_separation(k, a, &xstar, cert.alpha, &cfg, tol)?;
            Some(verdict.ok == by_grid)
        }
    };

    // Augmented-dual interior agreement on a handful of derived pairs.
    let mut cor_agrees = true;
    for margin in [0.5, 0.1, -0.1] {
        let xstar = grid_sharp_candidate(k, &mut rng);
        let mu = mu_base(k, &xstar, tol)?.value;
        let alpha = (mu - margin).max(0.0);
        let pair = AugPair::new(xstar, alpha)?;
        let exact = classify_aug_pair(k, &pair, tol)?.in_cor_a_plus;
        let grid = oracle_cor_test_on_grid(&grid_k, k, &pair, &cfg, tol)?;
        cor_agrees &= exact == grid;
    }

    let agree = mu_agrees && separation_agrees.unwrap_or(true) && cor_agrees;
    Ok((
        OracleReport {
            directions_checked: dirs,
            mu_max_abs_err: max_err,
            separation_agrees,
            cor_agrees,
        },
        agree,
    ))
}

fn grid_sharp_candidate(k: &ConeUnion, rng: &mut impl rand::Rng) -> Vector {
    // A direction biased toward the cone's generators, so derived pairs hit
    // all classification outcomes.
    let gens = k.all_normalized_generators();
    let mut x = DVector::zeros(k.norm_spec().dim());
    for g in &gens {
        x += g * rng.gen_range(0.2..1.0);
    }
    let n = x.norm();
    if n > 1e-12 {
        x / n
    } else {
        DVector::from_element(k.norm_spec().dim(), 1.0)
    }
}

/// Plot-data export for 2D scenes: CSV rows `label,x,y` with the piece rays,
/// sampled bases of `A` and `−K`, sampled hull extreme points, and — when a
/// certificate is present — the Bishop-Phelps boundary rays and the
/// hyperplane chord `{⟨x*,·⟩ = −α} ∩ 𝔹`.
pub fn export_plot(scene: &Scene) -> Result<String> {
    if scene.dimension != 2 {
        return Err(Error::UnsupportedScale(
            "plot export is only available for 2D scenes".into(),
        ));
    }
    let (ns, k, a) = scene.materialize()?;
    let tol = scene.tolerances;
    let neg_k = k.neg();
    let mut out = String::from("label,x,y\n");
    let mut push = |label: &str, p: &Vector| {
        out.push_str(&format!("{label},{:.17e},{:.17e}\n", p[0], p[1]));
    };

    let zero = DVector::zeros(2);
    for (cone, label) in [(&a, "A_ray"), (&neg_k, "K_ray")] {
        for piece in cone.pieces() {
            // Boundary rays only: the facet sub-cones of a 2D piece are its
            // extreme rays (a ray piece is its own boundary).
            for sub in piece.facet_subcones(&tol)? {
                for j in 0..sub.gen_count() {
                    let g: Vector = sub.normalized_generators().column(j).into();
                    push(label, &zero);
                    push(label, &g);
                }
            }
        }
    }

    for (cone, label) in [(&a, "A_base"), (&neg_k, "K_base")] {
        for p in sample_base(cone, 192, scene.seed, &tol)? {
            push(label, &p);
        }
    }

    // Hull extreme points probed by support directions.
    for (cone, with_zero, label) in [(&a, true, "A_hull"), (&neg_k, false, "K_hull")] {
        for i in 0..96 {
            let t = 2.0 * std::f64::consts::PI * (i as f64) / 96.0;
            let d = DVector::from_column_slice(&[t.cos(), t.sin()]);
            let s = crate::base::sigma_base(cone, &d, &tol)?;
            if with_zero && s.value < 0.0 {
                push(label, &zero);
            } else {
                push(label, &s.argpoint);
            }
        }
    }

    if let Some(cert) = &scene.certificate {
        let xstar = DVector::from_column_slice(&cert.xstar);
        // Boundary rays of the separating cone: sign changes of φ over the
        // angular sweep, sharpened by bisection.
        let n_angles = 512;
        let phi_at = |t: f64| -> Result<f64> {
            let d = DVector::from_column_slice(&[t.cos(), t.sin()]);
            phi_eval(&ns, &xstar, cert.alpha, &d)
        };
        let step = 2.0 * std::f64::consts::PI / n_angles as f64;
        for i in 0..n_angles {
            let t0 = i as f64 * step;
            let t1 = t0 + step;
            let f0 = phi_at(t0)?;
            let f1 = phi_at(t1)?;
            if f0 == 0.0 || f0 * f1 < 0.0 {
                let (mut lo, mut hi) = (t0, t1);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if phi_at(lo)? * phi_at(mid)? <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                let t = 0.5 * (lo + hi);
                let d = DVector::from_column_slice(&[t.cos(), t.sin()]);
                push("BP_boundary", &zero);
                push("BP_boundary", &d);
            }
        }

        // Hyperplane chord inside the unit ball of the scene norm.
        let nx2 = xstar.norm_squared();
        if nx2 > 0.0 {
            let x0 = &xstar * (-cert.alpha / nx2);
            let t = DVector::from_column_slice(&[-xstar[1], xstar[0]]).normalize();
            let inside = |s: f64| ns.norm(&(&x0 + &t * s)).map(|v| v <= 1.0);
            if inside(0.0)? {
                let mut endpoints = Vec::new();
                for dir in [1.0, -1.0] {
                    let (mut lo, mut hi) = (0.0f64, 4.0f64);
                    for _ in 0..80 {
                        let mid = 0.5 * (lo + hi);
                        if inside(dir * mid)? {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    endpoints.push(&x0 + &t * (dir * lo));
                }
                for p in &endpoints {
                    push("hyperplane", p);
                }
            }
        }
    }

    Ok(out)
}

// 17-significant-digit float formatting for reports.

struct SigDigits;

impl serde_json::ser::Formatter for SigDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes a report with floats at 17 significant digits (lossless for
/// `f64`, stable for diffing).
pub fn report_to_json(report: &Report) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    report
        .serialize(&mut ser)
        .map_err(Error::Format)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn report_from_json(text: &str) -> Result<Report> {
    Ok(serde_json::from_str(text)?)
}
