use nalgebra::DMatrix;
use serde_json::json;

use nframes_core::certify::{certify, CertifyConfig};
use nframes_core::frames::{self, FrameSystem};
use nframes_core::linalg;
use nframes_core::nspace::{induced_inner, n_inner, n_norm, project};
use nframes_core::optheory::{
    combine, combined_analysis, dual_pair_check, image_frame, image_frame_operator,
    is_bounded_below, perturb_identity, surjectivity_frame_test,
};
use nframes_core::{Instance, InstanceFile, Result};

use crate::report::Report;
use crate::{Command, InstanceArgs};

fn load(args: &InstanceArgs) -> Result<Instance> {
    InstanceFile::load(&args.instance)?.build()
}

fn rows(fs: &FrameSystem) -> Vec<Vec<f64>> {
    fs.vectors().iter().map(|v| v.to_vec()).collect()
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn coords(v: &nalgebra::DVector<f64>) -> Vec<f64> {
    v.iter().copied().collect()
}

fn instance_echo(args: &InstanceArgs) -> serde_json::Value {
    json!({ "instance": args.instance.display().to_string(), "tol": args.tol })
}

/// Adds bounds and the frame verdict; returns whether the system is a frame.
fn frame_summary(report: &mut Report, fs: &FrameSystem, tol: f64) -> bool {
    let s = frames::frame_operator(fs);
    let b = s.bounds();
    let frame = frames::is_frame(fs, tol);
    report
        .result("gamma", fs.gamma())
        .result("induced_dim", fs.space().k())
        .result("frame_len", fs.len())
        .result("lower_bound", b.lower)
        .result("upper_bound", b.upper)
        .result("eigenvalues", coords(s.eigenvalues()))
        .tolerance("frame", tol)
        .verdict("frame", frame);
    frame
}

pub(crate) fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Check {
            inst,
            bessel_bound,
            tight_tol,
        } => check(inst, *bessel_bound, *tight_tol),
        Command::Inner { inst, x, y } => inner(inst, x, y),
        Command::Norm { inst, x } => norm(inst, x),
        Command::Bounds { inst } => bounds(inst),
        Command::Dual { inst, recon_tol } => dual(inst, *recon_tol),
        Command::Tight { inst, tight_tol } => tight(inst, *tight_tol),
        Command::Reconstruct { inst, x, recon_tol } => reconstruct(inst, x.as_deref(), *recon_tol),
        Command::Image {
            inst,
            op,
            perturb,
            conj_tol,
        } => image(inst, op, *perturb, *conj_tol),
        Command::Combine { inst, l1, l2 } => combine_cmd(inst, l1, l2),
        Command::Certify {
            seed,
            trials,
            max_dim,
            max_order,
            max_len,
            sup_samples,
            oracle_samples,
        } => certify_cmd(CertifyConfig {
            seed: *seed,
            trials: *trials,
            max_dim: *max_dim,
            max_order: *max_order,
            max_len: *max_len,
            sup_samples: *sup_samples,
            oracle_samples: *oracle_samples,
        }),
    }
}

fn check(inst: &InstanceArgs, bessel_bound: Option<f64>, tight_tol: f64) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let mut report = Report::new(
        "check",
        json!({ "instance": inst.instance.display().to_string(), "tol": inst.tol,
                "bessel_bound": bessel_bound, "tight_tol": tight_tol }),
    );
    frame_summary(&mut report, fs, inst.tol);
    let bound = bessel_bound.unwrap_or_else(|| frames::optimal_bounds(fs).upper);
    let (tight, common) = frames::is_tight(fs, tight_tol);
    report
        .result("bessel_bound", bound)
        .result("is_bessel", frames::is_bessel(fs, bound))
        .result("is_tight", tight)
        .result("tight_bound", if tight { Some(common) } else { None })
        .tolerance("tight", tight_tol)
        .tolerance("bessel", frames::BESSEL_TOL);
    Ok(report)
}

fn inner(inst: &InstanceArgs, x: &str, y: &str) -> Result<Report> {
    let instance = load(inst)?;
    let (xv, yv) = (instance.vector(x)?, instance.vector(y)?);
    let space = &instance.space;
    let value = n_inner(xv, yv, space.anchors())?;
    let induced = induced_inner(&project(xv, space)?, &project(yv, space)?, space)?;
    let mut report = Report::new(
        "inner",
        json!({ "instance": inst.instance.display().to_string(), "x": x, "y": y }),
    );
    report
        .result("n_inner", value)
        .result("induced_inner", induced)
        .result("gamma", space.gamma())
        .result("discrepancy", (value - induced).abs());
    Ok(report)
}

fn norm(inst: &InstanceArgs, x: &str) -> Result<Report> {
    let instance = load(inst)?;
    let xv = instance.vector(x)?;
    let space = &instance.space;
    let value = n_norm(xv, space.anchors())?;
    let u = project(xv, space)?;
    let mut report = Report::new(
        "norm",
        json!({ "instance": inst.instance.display().to_string(), "x": x }),
    );
    report
        .result("n_norm", value)
        .result("induced_norm", space.gamma().sqrt() * u.coords().norm())
        .result("projection", coords(u.coords()));
    Ok(report)
}

fn bounds(inst: &InstanceArgs) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let mut report = Report::new("bounds", instance_echo(inst));
    frame_summary(&mut report, fs, inst.tol);
    let (onto, lower) = surjectivity_frame_test(fs);
    report
        .result(
            "frame_operator",
            matrix_rows(frames::frame_operator(fs).matrix()),
        )
        .result("synthesis_onto", onto)
        .result("pinv_lower_bound", lower);
    // bounds are informative even for non-frames
    report.verdicts.clear();
    Ok(report)
}

/// Largest coordinate residual of both canonical expansions over the named
/// vectors; `None` when the instance has none.
fn reconstruction_residual(instance: &Instance, names: &[String]) -> Result<Option<f64>> {
    let mut worst: Option<f64> = None;
    for name in names {
        let f = instance.vector(name)?;
        let target = project(f, &instance.space)?;
        for got in [
            frames::reconstruct(f, &instance.frame)?,
            frames::reconstruct_swapped(f, &instance.frame)?,
        ] {
            let r = (got.coords() - target.coords()).amax() / target.coords().amax().max(1.0);
            worst = Some(worst.map_or(r, |w: f64| w.max(r)));
        }
    }
    Ok(worst)
}

fn dual(inst: &InstanceArgs, recon_tol: f64) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let mut report = Report::new(
        "dual",
        json!({ "instance": inst.instance.display().to_string(), "tol": inst.tol, "recon_tol": recon_tol }),
    );
    if !frame_summary(&mut report, fs, inst.tol) {
        return Ok(report);
    }
    let b = frames::optimal_bounds(fs);
    let dual = frames::canonical_dual(fs)?;
    let db = frames::optimal_bounds(&dual);
    report
        .result("dual_vectors", rows(&dual))
        .result("dual_lower_bound", db.lower)
        .result("dual_upper_bound", db.upper)
        .result("expected_dual_bounds", [1.0 / b.upper, 1.0 / b.lower])
        .tolerance("reconstruction", recon_tol);
    let names: Vec<String> = instance.vectors.keys().cloned().collect();
    let residual = reconstruction_residual(&instance, &names)?;
    report.result("max_reconstruction_residual", residual);
    if let Some(r) = residual {
        report.verdict("reconstruction", r <= recon_tol);
    }
    Ok(report)
}

fn tight(inst: &InstanceArgs, tight_tol: f64) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let mut report = Report::new(
        "tight",
        json!({ "instance": inst.instance.display().to_string(), "tol": inst.tol, "tight_tol": tight_tol }),
    );
    if !frame_summary(&mut report, fs, inst.tol) {
        return Ok(report);
    }
    let t = frames::canonical_tight(fs)?;
    let s = frames::frame_operator(&t);
    let k = s.matrix().nrows();
    let deviation = linalg::spectral_norm(&(s.matrix() - DMatrix::identity(k, k)));
    let tb = s.bounds();
    report
        .result("tight_vectors", rows(&t))
        .result("tight_lower_bound", tb.lower)
        .result("tight_upper_bound", tb.upper)
        .result("identity_deviation", deviation)
        .tolerance("tight", tight_tol)
        .verdict("normalized_tight", deviation <= tight_tol);
    Ok(report)
}

fn reconstruct(inst: &InstanceArgs, x: Option<&str>, recon_tol: f64) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let mut report = Report::new(
        "reconstruct",
        json!({ "instance": inst.instance.display().to_string(), "tol": inst.tol, "x": x, "recon_tol": recon_tol }),
    );
    if !frame_summary(&mut report, fs, inst.tol) {
        return Ok(report);
    }
    let names: Vec<String> = match x {
        Some(name) => vec![name.to_string()],
        None => instance.vectors.keys().cloned().collect(),
    };
    let mut per_vector = serde_json::Map::new();
    for name in &names {
        let f = instance.vector(name)?;
        per_vector.insert(
            name.clone(),
            json!({
                "target": coords(project(f, &instance.space)?.coords()),
                "dual_coefficients": coords(frames::reconstruct(f, fs)?.coords()),
                "frame_coefficients": coords(frames::reconstruct_swapped(f, fs)?.coords()),
            }),
        );
    }
    let residual = reconstruction_residual(&instance, &names)?;
    report
        .result("reconstructions", per_vector)
        .result("max_reconstruction_residual", residual)
        .tolerance("reconstruction", recon_tol);
    if let Some(r) = residual {
        report.verdict("reconstruction", r <= recon_tol);
    }
    Ok(report)
}

fn image(inst: &InstanceArgs, op: &str, perturb: bool, conj_tol: f64) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let u = instance.operator(op)?;
    let effective = if perturb {
        u.plus_identity()
    } else {
        u.clone()
    };
    let family = if perturb {
        perturb_identity(u, fs)?
    } else {
        image_frame(u, fs)?
    };
    let direct = frames::frame_operator(&family);
    let conj = image_frame_operator(&effective, fs)?;
    let conj_residual = linalg::max_abs_diff(direct.matrix(), conj.matrix())
        / linalg::max_abs(conj.matrix()).max(1.0);
    let mut report = Report::new(
        "image",
        json!({ "instance": inst.instance.display().to_string(), "tol": inst.tol, "op": op,
                "perturb": perturb, "conj_tol": conj_tol }),
    );
    report
        .result("operator_invertible", effective.is_invertible())
        .result("image_vectors", rows(&family))
        .result("conjugation_residual", conj_residual)
        .tolerance("conjugation", conj_tol);
    frame_summary(&mut report, &family, inst.tol);
    report.verdict("conjugation", conj_residual <= conj_tol);
    Ok(report)
}

fn combine_cmd(inst: &InstanceArgs, l1: &str, l2: &str) -> Result<Report> {
    let instance = load(inst)?;
    let fs = &instance.frame;
    let gs = instance.second_frame.as_ref().ok_or_else(|| {
        nframes_core::Error::Input("combine needs second_frame in the instance".into())
    })?;
    let (op1, op2) = (instance.operator(l1)?, instance.operator(l2)?);
    let family = combine(op1, fs, op2, gs)?;
    let below = is_bounded_below(&combined_analysis(op1, fs, op2, gs)?);
    let mut report = Report::new(
        "combine",
        json!({ "instance": inst.instance.display().to_string(), "tol": inst.tol, "l1": l1, "l2": l2 }),
    );
    report
        .result("combined_vectors", rows(&family))
        .result("analysis_bounded_below", below)
        .result("dual_pair", dual_pair_check(fs, gs)?);
    frame_summary(&mut report, &family, inst.tol);
    Ok(report)
}

fn certify_cmd(cfg: CertifyConfig) -> Result<Report> {
    let outcome = certify(&cfg)?;
    let mut report = Report::new(
        "certify",
        json!({ "seed": cfg.seed, "trials": cfg.trials, "max_dim": cfg.max_dim, "max_order": cfg.max_order,
                "max_len": cfg.max_len, "sup_samples": cfg.sup_samples, "oracle_samples": cfg.oracle_samples }),
    );
    for suite in &outcome.suites {
        report
            .tolerance(suite.name, suite.tolerance)
            .verdict(suite.name, suite.ok());
    }
    report
        .result("kernel", outcome.kernel)
        .result("suites", &outcome.suites)
        .result("all_passed", outcome.all_passed());
    Ok(report)
}
