//! Seeded generators for anchor sets, frames and operators, plus the sampling
//! oracle for frame bounds.
//!
//! Every generator is a pure function of its [`GenConfig`] and arguments.
//! Entries are drawn uniformly from `[-1, 1]` with ChaCha8, seeded by mixing
//! the configuration seed with a per-generator tag through SplitMix64. Use
//! [`GenConfig::child`] to get independent streams for distinct objects.

use std::ops::RangeInclusive;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frames::{frame_operator, optimal_bounds, FrameSystem};
use crate::nspace::{n_inner, AmbientSpace, AmbientVector, AnchorSet, InducedSpace};
use crate::optheory::LinearMap;

/// Bound on resampling loops.
pub const MAX_ATTEMPTS: usize = 1000;

/// Smallest anchor Gram determinant ever accepted by [`gen_anchor_set`].
pub const GAMMA_FLOOR: f64 = 1e-6;

/// Smallest lower frame bound ever accepted by [`gen_frame`].
pub const LOWER_BOUND_FLOOR: f64 = 1e-6;

/// Samples whose squared sine to the anchor span, `⟨f,f|a⟩ / (γ·⟨f,f⟩)`,
/// falls below this are redrawn: normalizing them inflates the Euclidean
/// length and with it the determinant's rounding error.
pub const SAMPLE_SIN2_FLOOR: f64 = 1e-2;

const TAG_ANCHORS: u64 = 0xA1;
const TAG_FRAME: u64 = 0xF2;
const TAG_VECTOR: u64 = 0x73;
const TAG_OPERATOR: u64 = 0x0F;
const TAG_PSD: u64 = 0x9D;
const TAG_SIZES: u64 = 0x5E;
const TAG_DUAL: u64 = 0xD7;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Ambient dimension `d`.
    pub dims: RangeInclusive<usize>,
    /// Order `n`.
    pub orders: RangeInclusive<usize>,
    /// Frame length `m`; the lower end is raised to `k` when needed.
    pub lengths: RangeInclusive<usize>,
    /// Condition-number cap for generated operators.
    pub cond_cap: f64,
    /// Cap on `B / A` for generated frames.
    pub frame_cond_cap: f64,
    /// Minimum anchor Gram determinant (never below [`GAMMA_FLOOR`]).
    pub min_gamma: f64,
    /// Minimum optimal lower bound (never below [`LOWER_BOUND_FLOOR`]).
    pub min_lower_bound: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dims: 3..=8,
            orders: 2..=4,
            lengths: 1..=20,
            cond_cap: 1e3,
            frame_cond_cap: 1e2,
            min_gamma: 1e-3,
            min_lower_bound: 1e-3,
        }
    }
}

impl GenConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    /// Configuration for the `index`-th independent object.
    pub fn child(&self, index: u64) -> Self {
        Self {
            seed: derive_seed(self.seed, index),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.orders.is_empty() || self.lengths.is_empty() {
            return Err(Error::Precondition("empty size range".into()));
        }
        if *self.orders.start() < 2 {
            return Err(Error::Precondition("order must be at least 2".into()));
        }
        if *self.orders.start() > *self.dims.start() {
            return Err(Error::Precondition(
                "need d >= n for every size choice".into(),
            ));
        }
        if !(self.cond_cap >= 1.0) || !(self.frame_cond_cap >= 1.0) {
            return Err(Error::Precondition("condition caps must be >= 1".into()));
        }
        Ok(())
    }

    fn rng(&self, tag: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(derive_seed(self.seed, tag))
    }
}

/// SplitMix64 finalizer applied to `master ⊕ golden·(index + 1)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn uniform_vec(rng: &mut ChaCha8Rng, len: usize) -> DVector<f64> {
    DVector::from_fn(len, |_, _| rng.random_range(-1.0..=1.0))
}

fn uniform_mat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
}

fn ambient(coords: DVector<f64>) -> AmbientVector {
    AmbientVector::from_dvector(coords).expect("uniform draws are finite")
}

/// `n - 1` random anchors in `R^d` with Gram determinant above
/// `max(GAMMA_FLOOR, cfg.min_gamma)`.
pub fn gen_anchor_set(cfg: &GenConfig, d: usize, n: usize) -> Result<AnchorSet> {
    AmbientSpace::new(d, n)?;
    let floor = cfg.min_gamma.max(GAMMA_FLOOR);
    let mut rng = cfg.rng(TAG_ANCHORS);
    for _ in 0..MAX_ATTEMPTS {
        let anchors = (0..n - 1)
            .map(|_| ambient(uniform_vec(&mut rng, d)))
            .collect();
        if let Ok(set) = AnchorSet::new(anchors) {
            if set.gamma() > floor {
                return Ok(set);
            }
        }
    }
    Err(Error::Generation {
        what: format!("anchor set d={d} n={n}"),
        attempts: MAX_ATTEMPTS,
    })
}

/// `m ≥ k` random vectors forming a frame with lower bound above
/// `max(LOWER_BOUND_FLOOR, cfg.min_lower_bound)` and `B / A ≤ cfg.frame_cond_cap`.
pub fn gen_frame(cfg: &GenConfig, space: &Arc<InducedSpace>, m: usize) -> Result<FrameSystem> {
    let k = space.k();
    if m < k {
        return Err(Error::Precondition(format!(
            "frame length {m} is below induced dimension {k}"
        )));
    }
    let floor = cfg.min_lower_bound.max(LOWER_BOUND_FLOOR);
    let d = space.dim();
    let mut rng = cfg.rng(TAG_FRAME);
    for _ in 0..MAX_ATTEMPTS {
        let vectors = (0..m).map(|_| ambient(uniform_vec(&mut rng, d))).collect();
        let fs = FrameSystem::new(space.clone(), vectors)?;
        let b = optimal_bounds(&fs);
        if b.lower > floor && b.upper <= cfg.frame_cond_cap * b.lower {
            return Ok(fs);
        }
    }
    Err(Error::Generation {
        what: format!("frame m={m} k={k}"),
        attempts: MAX_ATTEMPTS,
    })
}

/// Picks `d`, `n`, `m` from the configured ranges and generates anchors and a
/// frame over them.
pub fn gen_sized_frame(cfg: &GenConfig) -> Result<FrameSystem> {
    cfg.validate()?;
    let mut rng = cfg.rng(TAG_SIZES);
    let d = rng.random_range(cfg.dims.clone());
    let n_hi = (*cfg.orders.end()).min(d);
    let n = rng.random_range(*cfg.orders.start()..=n_hi);
    let k = d + 1 - n;
    let m_lo = (*cfg.lengths.start()).max(k);
    let m_hi = (*cfg.lengths.end()).max(m_lo);
    let m = rng.random_range(m_lo..=m_hi);
    let anchors = gen_anchor_set(&cfg.child(1), d, n)?;
    let space = Arc::new(InducedSpace::new(anchors)?);
    gen_frame(&cfg.child(2), &space, m)
}

pub fn gen_vector(cfg: &GenConfig, d: usize) -> AmbientVector {
    ambient(uniform_vec(&mut cfg.rng(TAG_VECTOR), d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Singular values log-uniform in `[cap^{-1/2}, cap^{1/2}]`.
    Invertible,
    /// As `Invertible` with one singular value set to zero.
    Singular,
}

fn random_orthogonal(rng: &mut ChaCha8Rng, k: usize) -> DMatrix<f64> {
    loop {
        let a = uniform_mat(rng, k, k);
        let qr = a.qr();
        if qr.r().diagonal().iter().all(|x| x.abs() > 1e-8) {
            return qr.q();
        }
    }
}

/// `k × k` operator `Q1·diag(σ)·Q2ᵀ` with random orthogonal factors.
pub fn gen_operator(cfg: &GenConfig, k: usize, kind: OperatorKind) -> LinearMap {
    let mut rng = cfg.rng(TAG_OPERATOR);
    let q1 = random_orthogonal(&mut rng, k);
    let q2 = random_orthogonal(&mut rng, k);
    let half = cfg.cond_cap.max(1.0).ln() / 2.0;
    let mut sigma: Vec<f64> = (0..k)
        .map(|_| rng.random_range(-half..=half).exp())
        .collect();
    if kind == OperatorKind::Singular {
        let i = rng.random_range(0..k);
        sigma[i] = 0.0;
    }
    let s = DMatrix::from_diagonal(&DVector::from_vec(sigma));
    LinearMap::new(q1 * s * q2.transpose()).expect("finite product")
}

/// Random symmetric PSD `k × k` operator with eigenvalues in `[0, 2]`;
/// roughly one in four draws has a zero eigenvalue.
pub fn gen_psd(cfg: &GenConfig, k: usize) -> LinearMap {
    let mut rng = cfg.rng(TAG_PSD);
    let q = random_orthogonal(&mut rng, k);
    let mut lambda: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..=2.0)).collect();
    if rng.random_range(0..4) == 0 {
        let i = rng.random_range(0..k);
        lambda[i] = 0.0;
    }
    let l = DMatrix::from_diagonal(&DVector::from_vec(lambda));
    let m = &q * l * q.transpose();
    LinearMap::new((&m + m.transpose()) * 0.5).expect("finite product")
}

/// A dual of `fs` other than the canonical one (unless `m = k`):
/// `psi = phi·S^{-1} + (I - γ·phi·S^{-1}·phiᵀ)·Z` for random `Z`.
pub fn gen_alternate_dual(cfg: &GenConfig, fs: &FrameSystem) -> Result<FrameSystem> {
    let s_inv = frame_operator(fs).inverse()?;
    let phi = fs.phi();
    let (m, k) = phi.shape();
    let dual = phi * &s_inv;
    let complement = DMatrix::identity(m, m) - &dual * phi.transpose() * fs.gamma();
    let z = uniform_mat(&mut cfg.rng(TAG_DUAL), m, k);
    FrameSystem::from_coords(fs.space().clone(), dual + complement * z)
}

/// Sampled extremes of `Σ|⟨f, f_i | a⟩|² / ‖f, a‖²` over random unit vectors
/// of the induced norm. Every quantity comes straight from Gram determinants.
pub fn oracle_bounds(fs: &FrameSystem, samples: usize, seed: u64) -> Result<(f64, f64)> {
    if samples == 0 {
        return Err(Error::Precondition(
            "oracle needs at least one sample".into(),
        ));
    }
    let anchors = fs.space().anchors();
    let d = fs.space().dim();
    let gamma = anchors.gamma();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, TAG_VECTOR));
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut taken = 0;
    let mut attempts = 0;
    while taken < samples {
        attempts += 1;
        if attempts > samples.saturating_mul(100) {
            return Err(Error::Generation {
                what: "oracle samples".into(),
                attempts,
            });
        }
        let raw = ambient(uniform_vec(&mut rng, d));
        let norm2 = n_inner(&raw, &raw, anchors)?;
        if norm2 <= SAMPLE_SIN2_FLOOR * gamma * raw.dot(&raw) {
            continue;
        }
        let f = &raw * (1.0 / norm2.sqrt());
        let mut sum = 0.0;
        for fi in fs.vectors() {
            let c = n_inner(&f, fi, anchors)?;
            sum += c * c;
        }
        let norm2 = n_inner(&f, &f, anchors)?;
        let ratio = sum / norm2;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        taken += 1;
    }
    Ok((lo, hi))
}
