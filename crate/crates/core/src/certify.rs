//! Randomized certification of every property the library promises.
//!
//! Each trial draws a frame over random anchors plus vectors and operators,
//! then runs every suite on it. Trials are independent (per-trial seeds) and
//! run in parallel; results are reduced in trial order, so the report does
//! not depend on the thread count. The first failing trial of a suite is kept
//! as a counterexample in instance-file form.

use std::time::Instant;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{
    analysis, canonical_dual, canonical_tight, frame_operator, is_frame, is_tight, optimal_bounds,
    reconstruct, reconstruct_swapped, FrameSystem, FRAME_TOL,
};
use crate::instance::InstanceFile;
use crate::linalg::{self, SymSpectrum};
use crate::nspace::{self, induced_inner, project, sqrt_radicand, AmbientVector, AnchorSet};
use crate::optheory::{
    combine, combined_analysis, dual_pair_check, image_frame, image_frame_operator,
    is_bounded_below, perturb_identity, pseudo_inverse, sqrt_psd, surjectivity_frame_test,
    synthesis_map, LinearMap,
};
use crate::testkit::{self, derive_seed, GenConfig, OperatorKind};

pub type InnerFn = fn(&AmbientVector, &AmbientVector, &AnchorSet) -> Result<f64>;

/// The n-inner product the n-space suites evaluate. Swapping it lets the
/// harness itself be tested against a deliberately broken implementation.
#[derive(Debug, Clone, Copy)]
pub struct Kernel {
    pub name: &'static str,
    pub n_inner: InnerFn,
}

impl Default for Kernel {
    fn default() -> Self {
        Self {
            name: "gram-determinant",
            n_inner: nspace::n_inner,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifyConfig {
    pub seed: u64,
    pub trials: usize,
    /// Largest ambient dimension drawn.
    pub max_dim: usize,
    /// Largest order `n` drawn.
    pub max_order: usize,
    /// Largest frame length drawn.
    pub max_len: usize,
    /// Random unit vectors per trial for the sup-formula check.
    pub sup_samples: usize,
    /// Random vectors per trial for the bound-sampling oracle.
    pub oracle_samples: usize,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 200,
            max_dim: 6,
            max_order: 4,
            max_len: 20,
            sup_samples: 1000,
            oracle_samples: 1000,
        }
    }
}

impl CertifyConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Precondition("trials must be at least 1".into()));
        }
        if self.max_dim < 2 {
            return Err(Error::Precondition(
                "max dimension must be at least 2".into(),
            ));
        }
        if self.max_order < 2 {
            return Err(Error::Precondition("max order must be at least 2".into()));
        }
        if self.max_len == 0 || self.sup_samples == 0 || self.oracle_samples == 0 {
            return Err(Error::Precondition(
                "sample and length caps must be positive".into(),
            ));
        }
        Ok(())
    }

    fn gen_config(&self, trial: usize) -> GenConfig {
        GenConfig {
            seed: derive_seed(self.seed, trial as u64),
            dims: 2..=self.max_dim,
            orders: 2..=self.max_order,
            lengths: 1..=self.max_len,
            ..GenConfig::default()
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub message: String,
    pub instance: InstanceFile,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub property: &'static str,
    pub tolerance: f64,
    pub trials: usize,
    pub passed: usize,
    pub worst_residual: f64,
    pub counterexample: Option<Counterexample>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifyReport {
    pub seed: u64,
    pub trials: usize,
    pub kernel: &'static str,
    pub suites: Vec<SuiteReport>,
    pub wall_time_ms: f64,
}

impl CertifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

/// Everything one trial works on.
struct TrialCase {
    seed: u64,
    frame: FrameSystem,
    second: FrameSystem,
    x: AmbientVector,
    y: AmbientVector,
    alpha: f64,
    u_inv: LinearMap,
    u_sing: LinearMap,
    psd: LinearMap,
    l1: LinearMap,
    l2: LinearMap,
}

impl TrialCase {
    fn generate(gen: &GenConfig) -> Result<Self> {
        let frame = testkit::gen_sized_frame(&gen.child(0))?;
        let space = frame.space().clone();
        let (d, k) = (space.dim(), space.k());
        let second = testkit::gen_frame(&gen.child(1), &space, frame.len())?;
        let alpha = 3.0 * testkit::gen_vector(&gen.child(4), 1).as_slice()[0];
        Ok(Self {
            seed: gen.seed,
            x: testkit::gen_vector(&gen.child(2), d),
            y: testkit::gen_vector(&gen.child(3), d),
            alpha,
            u_inv: testkit::gen_operator(&gen.child(5), k, OperatorKind::Invertible),
            u_sing: testkit::gen_operator(&gen.child(6), k, OperatorKind::Singular),
            psd: testkit::gen_psd(&gen.child(7), k),
            l1: testkit::gen_operator(&gen.child(8), k, OperatorKind::Invertible),
            l2: testkit::gen_operator(&gen.child(9), k, OperatorKind::Invertible),
            frame,
            second,
        })
    }

    fn instance(&self) -> InstanceFile {
        let operators = [
            ("U", &self.u_inv),
            ("U_singular", &self.u_sing),
            ("M", &self.psd),
            ("L1", &self.l1),
            ("L2", &self.l2),
        ]
        .into_iter()
        .map(|(n, op)| (n.to_string(), op.clone()))
        .collect();
        let vectors = [("x", &self.x), ("y", &self.y)]
            .into_iter()
            .map(|(n, v)| (n.to_string(), v.clone()))
            .collect();
        InstanceFile::from_parts(&self.frame, Some(&self.second), &operators, &vectors)
    }

    fn anchors(&self) -> &AnchorSet {
        self.frame.space().anchors()
    }
}

struct Ctx<'a> {
    kernel: &'a Kernel,
    cfg: &'a CertifyConfig,
}

impl Ctx<'_> {
    fn inner(&self, x: &AmbientVector, y: &AmbientVector, a: &AnchorSet) -> Result<f64> {
        (self.kernel.n_inner)(x, y, a)
    }

    fn norm(&self, x: &AmbientVector, a: &AnchorSet) -> Result<f64> {
        sqrt_radicand(self.inner(x, x, a)?, x, a)
    }

    fn norm_sq(&self, x: &AmbientVector, a: &AnchorSet) -> Result<f64> {
        let n = self.norm(x, a)?;
        Ok(n * n)
    }
}

type SuiteFn = fn(&TrialCase, &Ctx) -> Result<f64>;

struct Suite {
    name: &'static str,
    property: &'static str,
    tolerance: f64,
    run: SuiteFn,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

fn rel(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

fn max_abs_coords(a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>) -> f64 {
    (a - b).amax()
}

// --- n-space -----------------------------------------------------------------

fn gram_projection(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let v = ctx.inner(&c.x, &c.y, a)?;
    let space = c.frame.space();
    let w = induced_inner(&project(&c.x, space)?, &project(&c.y, space)?, space)?;
    Ok((v - w).abs() / (1.0 + v.abs()))
}

fn cauchy_schwarz(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let lhs = ctx.inner(&c.x, &c.y, a)?.abs();
    let rhs = ctx.norm(&c.x, a)? * ctx.norm(&c.y, a)?;
    Ok((lhs - rhs).max(0.0))
}

fn polarization(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let v = ctx.inner(&c.x, &c.y, a)?;
    let plus = ctx.norm_sq(&(&c.x + &c.y), a)?;
    let minus = ctx.norm_sq(&(&c.x - &c.y), a)?;
    Ok(rel(v, 0.25 * (plus - minus), 0.25 * (plus + minus)))
}

fn parallelogram(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let plus = ctx.norm_sq(&(&c.x + &c.y), a)?;
    let minus = ctx.norm_sq(&(&c.x - &c.y), a)?;
    let rhs = 2.0 * (ctx.norm_sq(&c.x, a)? + ctx.norm_sq(&c.y, a)?);
    Ok(rel(plus + minus, rhs, rhs))
}

fn sup_formula(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let space = c.frame.space();
    let norm_x = ctx.norm(&c.x, a)?;
    let Some(best) = space.norming_vector(&c.x)? else {
        return Ok(0.0);
    };
    let scale = norm_x.max(1.0);
    let mut worst = (ctx.inner(&c.x, &best, a)?.abs() - norm_x).abs() / scale;
    let gen = GenConfig::with_seed(derive_seed(c.seed, 0x5A));
    for i in 0..ctx.cfg.sup_samples {
        let y = testkit::gen_vector(&gen.child(i as u64), space.dim());
        let ny = ctx.norm(&y, a)?;
        if ny * ny <= testkit::SAMPLE_SIN2_FLOOR * a.gamma() * y.dot(&y) {
            continue;
        }
        let unit = &y * (1.0 / ny);
        let attained = ctx.inner(&c.x, &unit, a)?.abs();
        worst = worst.max((attained - norm_x).max(0.0) / scale);
    }
    Ok(worst)
}

fn anchor_permutation(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let count = a.anchors().len();
    let v = ctx.inner(&c.x, &c.y, a)?;
    let mut worst: f64 = 0.0;
    let reversed: Vec<usize> = (0..count).rev().collect();
    let rotated: Vec<usize> = (0..count).map(|i| (i + 1) % count).collect();
    for perm in [reversed, rotated] {
        let p = a.permuted(&perm)?;
        worst = worst.max(rel(ctx.inner(&c.x, &c.y, &p)?, v, v.abs().max(1.0)));
    }
    Ok(worst)
}

fn homogeneity(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let base = c.alpha.abs() * ctx.norm(&c.x, a)?;
    let scaled = ctx.norm(&(&c.x * c.alpha), a)?;
    Ok(rel(scaled, base, base.max(1e-300)))
}

// --- frames ------------------------------------------------------------------

fn kernel_energy(f: &AmbientVector, fs: &FrameSystem, ctx: &Ctx) -> Result<f64> {
    let a = fs.space().anchors();
    fs.vectors().iter().try_fold(0.0, |acc, fi| {
        let v = ctx.inner(f, fi, a)?;
        Ok(acc + v * v)
    })
}

fn frame_inequality(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let b = optimal_bounds(&c.frame);
    let norm2 = ctx.norm_sq(&c.x, c.anchors())?;
    let energy = kernel_energy(&c.x, &c.frame, ctx)?;
    let scale = (b.upper * norm2).max(f64::MIN_POSITIVE);
    let below = (b.lower * norm2 - energy).max(0.0);
    let above = (energy - b.upper * norm2).max(0.0);
    Ok(below.max(above) / scale)
}

fn quadratic_form(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let s = frame_operator(&c.frame);
    let u = project(&c.x, c.frame.space())?;
    let q = s.quadratic_form(&u, c.frame.gamma());
    let energy = kernel_energy(&c.x, &c.frame, ctx)?;
    Ok(rel(q, energy, energy.abs().max(q.abs())))
}

fn operator_sandwich(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let s = frame_operator(&c.frame);
    let b = s.bounds();
    let k = s.matrix().nrows();
    let id = DMatrix::<f64>::identity(k, k);
    let low = SymSpectrum::new(&(s.matrix() - &id * b.lower)).min();
    let high = SymSpectrum::new(&(&id * b.upper - s.matrix())).min();
    Ok((-low).max(-high).max(0.0))
}

fn inverse_sandwich(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let s = frame_operator(&c.frame);
    let b = s.bounds();
    let inv = SymSpectrum::new(&s.inverse()?);
    let below = (1.0 / b.upper - inv.min()).max(0.0);
    let above = (inv.max() - 1.0 / b.lower).max(0.0);
    Ok(below.max(above))
}

fn dual_reciprocity(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let b = optimal_bounds(&c.frame);
    let d = optimal_bounds(&canonical_dual(&c.frame)?);
    Ok(rel(d.lower, 1.0 / b.upper, 1.0 / b.upper).max(rel(d.upper, 1.0 / b.lower, 1.0 / b.lower)))
}

fn reconstruction(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let target = project(&c.x, c.frame.space())?;
    let scale = target.coords().amax().max(1.0);
    let r1 = reconstruct(&c.x, &c.frame)?;
    let r2 = reconstruct_swapped(&c.x, &c.frame)?;
    Ok(max_abs_coords(r1.coords(), target.coords())
        .max(max_abs_coords(r2.coords(), target.coords()))
        / scale)
}

fn canonical_tight_suite(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let t = canonical_tight(&c.frame)?;
    let s = frame_operator(&t);
    let k = s.matrix().nrows();
    let deviation = linalg::spectral_norm(&(s.matrix() - DMatrix::identity(k, k)));
    // f = Σ ⟨f, S^{-1/2} f_i | a⟩ S^{-1/2} f_i
    let target = project(&c.x, c.frame.space())?;
    let coeffs = analysis(&c.x, &t)?;
    let back = crate::frames::synthesis(&coeffs, &t)?;
    let scale = target.coords().amax().max(1.0);
    Ok(deviation.max(max_abs_coords(back.coords(), target.coords()) / scale))
}

fn tight_scaling(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let factor = 0.5 + c.alpha.abs();
    let tight = canonical_tight(&c.frame)?.scaled(factor)?;
    let (is, a) = is_tight(&tight, 1e-9);
    if !is {
        return Err(fail("scaled canonical tight frame is not tight"));
    }
    let b = optimal_bounds(&tight.scaled(1.0 / a.sqrt())?);
    Ok((b.lower - 1.0).abs().max((b.upper - 1.0).abs()))
}

fn vanishing_on_anchor_span(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let a = c.anchors();
    let weights = testkit::gen_vector(
        &GenConfig::with_seed(derive_seed(c.seed, 0x1F)),
        a.anchors().len(),
    );
    let mut f = AmbientVector::zeros(a.dim());
    for (w, v) in weights.as_slice().iter().zip(a.anchors()) {
        f = &f + &(v * *w);
    }
    let coeffs = analysis(&f, &c.frame)?;
    let u = project(&f, c.frame.space())?;
    let norm = induced_inner(&u, &u, c.frame.space())?.max(0.0).sqrt();
    Ok(coeffs.values().amax().max(norm))
}

// --- operators ---------------------------------------------------------------

fn sqrt_uniqueness(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let m = c.psd.matrix();
    let v = sqrt_psd(&c.psd)?;
    let v = v.matrix();
    let scale = linalg::max_abs(m).max(1.0);
    let square = linalg::max_abs_diff(&(v * v), m) / scale;
    let commute = linalg::max_abs_diff(&(v * m), &(m * v)) / scale;
    let poly = m * m + m * 2.0;
    let commute_poly =
        linalg::max_abs_diff(&(v * &poly), &(&poly * v)) / linalg::max_abs(&poly).max(1.0);
    Ok(square.max(commute).max(commute_poly))
}

fn pinv_consistency(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let t = synthesis_map(&c.frame);
    let p = pseudo_inverse(&t);
    let (t, p) = (t.matrix(), p.matrix());
    let k = t.nrows();
    let right = linalg::max_abs_diff(&(t * p), &DMatrix::identity(k, k));
    // minimal norm: T†·T·T† = T† puts the range of T† in the row space of T
    let minimal = linalg::max_abs_diff(&(p * t * p), p) / linalg::max_abs(p).max(1.0);
    Ok(right.max(minimal))
}

fn image_equivalence(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let k = c.frame.space().k();
    let shift = |u: &LinearMap| LinearMap::new(u.matrix() - DMatrix::identity(k, k));
    let checks = [
        (is_frame(&image_frame(&c.u_inv, &c.frame)?, FRAME_TOL), true),
        (
            is_frame(&image_frame(&c.u_sing, &c.frame)?, FRAME_TOL),
            false,
        ),
        // I + (U - I) = U
        (
            is_frame(&perturb_identity(&shift(&c.u_inv)?, &c.frame)?, FRAME_TOL),
            true,
        ),
        (
            is_frame(&perturb_identity(&shift(&c.u_sing)?, &c.frame)?, FRAME_TOL),
            false,
        ),
    ];
    Ok(checks.iter().filter(|(got, want)| got != want).count() as f64)
}

fn image_conjugation(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let s = frame_operator(&c.frame);
    let mut worst: f64 = 0.0;
    for u in [&c.u_inv, &c.u_sing] {
        let direct = frame_operator(&image_frame(u, &c.frame)?);
        let conj = image_frame_operator(u, &c.frame)?;
        let scale = linalg::max_abs(conj.matrix()).max(1.0);
        worst = worst.max(linalg::max_abs_diff(direct.matrix(), conj.matrix()) / scale);
    }
    let ipu = c.u_inv.plus_identity();
    let direct = frame_operator(&perturb_identity(&c.u_inv, &c.frame)?);
    let expected = ipu.matrix() * s.matrix() * ipu.matrix().transpose();
    Ok(worst.max(
        linalg::max_abs_diff(direct.matrix(), &expected) / linalg::max_abs(&expected).max(1.0),
    ))
}

fn image_bounds(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let b = optimal_bounds(&c.frame);
    let image = optimal_bounds(&image_frame(&c.u_inv, &c.frame)?);
    let inv = c
        .u_inv
        .matrix()
        .clone()
        .try_inverse()
        .ok_or_else(|| fail("invertible operator failed to invert"))?;
    let inv_norm = linalg::spectral_norm(&inv);
    let u_norm = c.u_inv.norm();
    // A·‖U⁻¹‖⁻² ≤ A' and B' ≤ B·‖U‖²
    let lower_gap = (b.lower / (inv_norm * inv_norm) - image.lower).max(0.0) / image.lower;
    let upper_gap = (image.upper - b.upper * u_norm * u_norm).max(0.0) / image.upper;
    Ok(lower_gap.max(upper_gap))
}

fn combination_criterion(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let zero = LinearMap::zeros(c.frame.space().k());
    let cases = [
        (&c.l1, &c.frame, &c.l2, &c.second),
        (&c.u_sing, &c.frame, &zero, &c.second),
        (&c.l1, &c.frame, &c.l1.scaled(-1.0), &c.frame),
    ];
    let mut misses = 0.0;
    for (l1, fs, l2, gs) in cases {
        let family = combine(l1, fs, l2, gs)?;
        let below = is_bounded_below(&combined_analysis(l1, fs, l2, gs)?);
        if below != is_frame(&family, FRAME_TOL) {
            misses += 1.0;
        }
    }
    Ok(misses)
}

fn lower_bound_identity(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let b = optimal_bounds(&c.frame);
    let p = pseudo_inverse(&synthesis_map(&c.frame)).norm();
    let identity = (b.lower * p * p - 1.0).abs();
    let (onto, lower) = surjectivity_frame_test(&c.frame);
    if !onto {
        return Err(fail("synthesis of a generated frame is not onto"));
    }
    Ok(identity.max(rel(lower, b.lower, b.lower)))
}

fn dual_pair_bounds(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let gen = GenConfig::with_seed(derive_seed(c.seed, 0xD2));
    let gs = testkit::gen_alternate_dual(&gen, &c.frame)?;
    if !dual_pair_check(&c.frame, &gs)? {
        return Err(fail("constructed dual pair rejected"));
    }
    let bf = optimal_bounds(&c.frame);
    let bg = optimal_bounds(&gs);
    let (cb, db) = (bf.upper, bg.upper);
    Ok((1.0 / db - bf.lower).max(1.0 / cb - bg.lower).max(0.0))
}

fn oracle_sandwich(c: &TrialCase, ctx: &Ctx) -> Result<f64> {
    let b = optimal_bounds(&c.frame);
    let (lo, hi) =
        testkit::oracle_bounds(&c.frame, ctx.cfg.oracle_samples, derive_seed(c.seed, 0x0B))?;
    Ok((b.lower - lo).max(hi - b.upper).max(0.0))
}

fn instance_round_trip(c: &TrialCase, _: &Ctx) -> Result<f64> {
    let file = c.instance();
    let back = InstanceFile::from_json(&file.to_json())?.build()?;
    let b0 = optimal_bounds(&c.frame);
    let b1 = optimal_bounds(&back.frame);
    let phi = linalg::max_abs_diff(c.frame.phi(), back.frame.phi());
    let u0 = project(&c.x, c.frame.space())?;
    let u1 = project(back.vector("x")?, &back.space)?;
    Ok(phi
        .max((b0.lower - b1.lower).abs())
        .max((b0.upper - b1.upper).abs())
        .max(max_abs_coords(u0.coords(), u1.coords())))
}

const SUITES: &[Suite] = &[
    Suite {
        name: "gram_projection",
        property: "bordered Gram determinant equals γ·(Qx·Qy)",
        tolerance: 1e-9,
        run: gram_projection,
    },
    Suite {
        name: "cauchy_schwarz",
        property: "|⟨x,y|a⟩| ≤ ‖x,a‖·‖y,a‖",
        tolerance: 1e-9,
        run: cauchy_schwarz,
    },
    Suite {
        name: "polarization",
        property: "⟨x,y|a⟩ = (‖x+y‖² − ‖x−y‖²)/4",
        tolerance: 1e-9,
        run: polarization,
    },
    Suite {
        name: "parallelogram",
        property: "‖x+y‖² + ‖x−y‖² = 2(‖x‖² + ‖y‖²)",
        tolerance: 1e-9,
        run: parallelogram,
    },
    Suite {
        name: "sup_formula",
        property: "‖x,a‖ = sup over unit y of |⟨x,y|a⟩|",
        tolerance: 1e-9,
        run: sup_formula,
    },
    Suite {
        name: "anchor_permutation",
        property: "n-inner product invariant under anchor order",
        tolerance: 1e-12,
        run: anchor_permutation,
    },
    Suite {
        name: "homogeneity",
        property: "‖αx,a‖ = |α|·‖x,a‖",
        tolerance: 1e-12,
        run: homogeneity,
    },
    Suite {
        name: "frame_inequality",
        property: "A‖f‖² ≤ Σ|⟨f,f_i|a⟩|² ≤ B‖f‖²",
        tolerance: 1e-9,
        run: frame_inequality,
    },
    Suite {
        name: "quadratic_form",
        property: "⟨S f, f⟩ = Σ|⟨f,f_i|a⟩|²",
        tolerance: 1e-9,
        run: quadratic_form,
    },
    Suite {
        name: "operator_sandwich",
        property: "A·I ≤ S ≤ B·I",
        tolerance: 1e-9,
        run: operator_sandwich,
    },
    Suite {
        name: "inverse_sandwich",
        property: "I/B ≤ S⁻¹ ≤ I/A",
        tolerance: 1e-9,
        run: inverse_sandwich,
    },
    Suite {
        name: "dual_reciprocity",
        property: "canonical dual has optimal bounds (1/B, 1/A)",
        tolerance: 1e-8,
        run: dual_reciprocity,
    },
    Suite {
        name: "reconstruction",
        property: "both canonical-dual expansions recover f",
        tolerance: 1e-8,
        run: reconstruction,
    },
    Suite {
        name: "canonical_tight",
        property: "{S^{-1/2} f_i} is a normalized tight frame",
        tolerance: 1e-8,
        run: canonical_tight_suite,
    },
    Suite {
        name: "tight_scaling",
        property: "tight frame scaled by 1/√A has bounds (1, 1)",
        tolerance: 1e-10,
        run: tight_scaling,
    },
    Suite {
        name: "vanishing_on_anchor_span",
        property: "analysis and induced norm vanish on span(anchors)",
        tolerance: 1e-12,
        run: vanishing_on_anchor_span,
    },
    Suite {
        name: "sqrt_uniqueness",
        property: "√M² = M and √M commutes with M",
        tolerance: 1e-9,
        run: sqrt_uniqueness,
    },
    Suite {
        name: "pinv_consistency",
        property: "T·T† = I on W for onto synthesis",
        tolerance: 1e-9,
        run: pinv_consistency,
    },
    Suite {
        name: "image_equivalence",
        property: "{U f_i} is a frame iff U is invertible",
        tolerance: 0.0,
        run: image_equivalence,
    },
    Suite {
        name: "image_conjugation",
        property: "frame operator of {U f_i} is U·S·Uᵀ",
        tolerance: 1e-10,
        run: image_conjugation,
    },
    Suite {
        name: "image_bounds",
        property: "A·‖U⁻¹‖⁻² ≤ A' and B' ≤ B·‖U‖²",
        tolerance: 1e-9,
        run: image_bounds,
    },
    Suite {
        name: "combination_criterion",
        property: "{L1 f_i + L2 g_i} is a frame iff its analysis map is bounded below",
        tolerance: 0.0,
        run: combination_criterion,
    },
    Suite {
        name: "lower_bound_identity",
        property: "A·‖T†‖² = 1",
        tolerance: 1e-7,
        run: lower_bound_identity,
    },
    Suite {
        name: "dual_pair_bounds",
        property: "dual pairs have lower bounds ≥ 1/D and ≥ 1/C",
        tolerance: 1e-8,
        run: dual_pair_bounds,
    },
    Suite {
        name: "oracle_sandwich",
        property: "sampled frame ratios lie in [A, B]",
        tolerance: 1e-9,
        run: oracle_sandwich,
    },
    Suite {
        name: "instance_round_trip",
        property: "serialized instances reproduce all computations",
        tolerance: 1e-15,
        run: instance_round_trip,
    },
];

/// Names of all suites, in report order.
/// Residual on success; message, residual and offending instance on failure.
type TrialOutcome = std::result::Result<f64, (String, f64, Box<InstanceFile>)>;

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name).collect()
}

pub fn certify(cfg: &CertifyConfig) -> Result<CertifyReport> {
    certify_with(cfg, &Kernel::default())
}

pub fn certify_with(cfg: &CertifyConfig, kernel: &Kernel) -> Result<CertifyReport> {
    cfg.validate()?;
    let start = Instant::now();
    let ctx = Ctx { kernel, cfg };

    let per_trial: Vec<Vec<TrialOutcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let case = TrialCase::generate(&cfg.gen_config(trial))?;
            Ok(SUITES
                .iter()
                .map(|suite| match (suite.run)(&case, &ctx) {
                    Ok(r) if r <= suite.tolerance => Ok(r),
                    Ok(r) => Err((
                        format!("residual {r:e} exceeds {:e}", suite.tolerance),
                        r,
                        Box::new(case.instance()),
                    )),
                    Err(e) => Err((e.to_string(), f64::INFINITY, Box::new(case.instance()))),
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let suites = SUITES
        .iter()
        .enumerate()
        .map(|(i, suite)| {
            let mut report = SuiteReport {
                name: suite.name,
                property: suite.property,
                tolerance: suite.tolerance,
                trials: cfg.trials,
                passed: 0,
                worst_residual: 0.0,
                counterexample: None,
            };
            for (trial, results) in per_trial.iter().enumerate() {
                match &results[i] {
                    Ok(r) => {
                        report.passed += 1;
                        report.worst_residual = report.worst_residual.max(*r);
                    }
                    Err((message, r, instance)) => {
                        report.worst_residual = report.worst_residual.max(*r);
                        report.counterexample.get_or_insert_with(|| Counterexample {
                            trial,
                            message: message.clone(),
                            instance: (**instance).clone(),
                        });
                    }
                }
            }
            report
        })
        .collect();

    Ok(CertifyReport {
        seed: cfg.seed,
        trials: cfg.trials,
        kernel: kernel.name,
        suites,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> CertifyConfig {
        CertifyConfig {
            seed,
            trials: 12,
            sup_samples: 50,
            oracle_samples: 50,
            ..CertifyConfig::default()
        }
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = CertifyConfig {
            trials: 0,
            ..CertifyConfig::default()
        };
        assert!(matches!(certify(&cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn small_run_passes() {
        let report = certify(&small(3)).unwrap();
        for s in &report.suites {
            assert!(s.ok(), "{} failed: {:?}", s.name, s.counterexample);
        }
        assert_eq!(report.suites.len(), suite_names().len());
    }

    #[test]
    fn report_independent_of_thread_count() {
        let cfg = small(9);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| certify(&cfg)).unwrap();
        let parallel = certify(&cfg).unwrap();
        for (a, b) in serial.suites.iter().zip(&parallel.suites) {
            assert_eq!(a.passed, b.passed);
            assert_eq!(a.worst_residual.to_bits(), b.worst_residual.to_bits());
        }
    }
}
