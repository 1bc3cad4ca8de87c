//! Operators on the induced space and how frames transform under them.
//!
//! A [`LinearMap`] acts on `W`-coordinates. The induced inner product is a
//! positive multiple of the coordinate dot product, so the adjoint of a
//! `k × k` map is its transpose.
//!
//! Maps between the coefficient space and the induced space are different:
//! there the scale does not cancel. [`synthesis_map`] therefore expresses the
//! synthesis operator in coordinates that are orthonormal for `⟨·,·⟩_F`
//! (`sqrt(γ)·u`), where it is `sqrt(γ)·phiᵀ` and its ordinary operator norm is
//! the one the frame bounds refer to.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frames::{frame_operator, FrameOperator, FrameSystem, FRAME_TOL};
use crate::linalg::{self, SymSpectrum};
use crate::nspace::InducedVector;

/// Invertibility threshold: `σ_min > INVERTIBLE_TOL·max(1, σ_max)`.
pub const INVERTIBLE_TOL: f64 = 1e-9;

/// Bounded-below threshold for analysis maps: `σ_min > tol·σ_max`.
pub const BOUNDED_BELOW_TOL: f64 = 1e-9;

/// Singular values at or below `PINV_RTOL·σ_max` count as zero.
pub const PINV_RTOL: f64 = 1e-10;

/// Symmetry and negativity slack accepted by [`sqrt_psd`].
pub const PSD_TOL: f64 = 1e-10;

/// Residual allowed in `γ·phiᵀ·psi = I` by [`dual_pair_check`].
pub const DUAL_PAIR_TOL: f64 = 1e-9;

/// Bounded operator on `W`-coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap(DMatrix<f64>);

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Input(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !linalg::all_finite(&matrix) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(Self(matrix))
    }

    pub fn identity(k: usize) -> Self {
        Self(DMatrix::identity(k, k))
    }

    pub fn zeros(k: usize) -> Self {
        Self(DMatrix::zeros(k, k))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self(&self.0 * alpha)
    }

    /// `I + self`.
    pub fn plus_identity(&self) -> Self {
        Self(&self.0 + DMatrix::identity(self.dim(), self.dim()))
    }

    pub fn apply(&self, u: &InducedVector) -> Result<InducedVector> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.len(),
            });
        }
        Ok(InducedVector::new(&self.0 * u.coords()))
    }

    pub fn norm(&self) -> f64 {
        linalg::spectral_norm(&self.0)
    }

    pub fn is_invertible(&self) -> bool {
        let s = linalg::singular_values(&self.0);
        match (s.first(), s.last()) {
            (Some(&lo), Some(&hi)) => lo > INVERTIBLE_TOL * hi.max(1.0),
            _ => true,
        }
    }
}

/// Rectangular map between the coefficient space and the induced space.
#[derive(Debug, Clone, PartialEq)]
pub struct RectMap(DMatrix<f64>);

impl RectMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !linalg::all_finite(&matrix) {
            return Err(Error::NonFinite("rectangular map"));
        }
        Ok(Self(matrix))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn norm(&self) -> f64 {
        linalg::spectral_norm(&self.0)
    }

    /// Ascending.
    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(&self.0)
    }
}

/// Unique symmetric PSD square root.
pub fn sqrt_psd(m: &LinearMap) -> Result<LinearMap> {
    let a = m.matrix();
    let scale = linalg::max_abs(a).max(1.0);
    if !linalg::is_symmetric(a, PSD_TOL * scale) {
        return Err(Error::Domain(
            "square root needs a symmetric operator".into(),
        ));
    }
    let spectrum = SymSpectrum::new(a);
    if !spectrum.values.is_empty() && spectrum.min() < -PSD_TOL * spectrum.max().abs().max(1.0) {
        return Err(Error::Domain(format!(
            "square root needs a positive operator, found eigenvalue {:e}",
            spectrum.min()
        )));
    }
    Ok(LinearMap(spectrum.map(|x| x.max(0.0).sqrt())))
}

pub fn pseudo_inverse(t: &RectMap) -> RectMap {
    pseudo_inverse_with_tol(t, PINV_RTOL)
}

/// Moore–Penrose inverse `V Σ⁺ Uᵀ` from the singular value decomposition.
/// Singular values at or below `rtol·σ_max` are treated as zero.
pub fn pseudo_inverse_with_tol(t: &RectMap, rtol: f64) -> RectMap {
    let a = t.matrix();
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return RectMap(DMatrix::zeros(cols, rows));
    }
    let svd = a.clone().svd(true, true);
    let (u, v_t) = (svd.u.expect("requested U"), svd.v_t.expect("requested Vᵀ"));
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cutoff = rtol * sigma_max;
    let mut out = DMatrix::zeros(cols, rows);
    for (i, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma > cutoff && sigma > 0.0 {
            out += (v_t.row(i).transpose() * u.column(i).transpose()) / sigma;
        }
    }
    RectMap(out)
}

/// Synthesis operator `T_F: c ↦ Σ c_i f_i` as a `k × m` matrix, in
/// coordinates orthonormal for the induced inner product.
pub fn synthesis_map(fs: &FrameSystem) -> RectMap {
    RectMap(fs.phi().transpose() * fs.gamma().sqrt())
}

/// Analysis operator `T_F*`, the adjoint of [`synthesis_map`].
pub fn analysis_map(fs: &FrameSystem) -> RectMap {
    synthesis_map(fs).adjoint()
}

fn check_operator(u: &LinearMap, fs: &FrameSystem) -> Result<()> {
    let k = fs.space().k();
    if u.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: u.dim(),
        });
    }
    Ok(())
}

/// `{U f_i}`; a frame exactly when `U` is invertible.
pub fn image_frame(u: &LinearMap, fs: &FrameSystem) -> Result<FrameSystem> {
    check_operator(u, fs)?;
    FrameSystem::from_coords(fs.space().clone(), fs.phi() * u.matrix().transpose())
}

/// `U·S·Uᵀ`, the frame operator of [`image_frame`].
pub fn image_frame_operator(u: &LinearMap, fs: &FrameSystem) -> Result<FrameOperator> {
    check_operator(u, fs)?;
    let s = frame_operator(fs);
    FrameOperator::from_matrix(u.matrix() * s.matrix() * u.matrix().transpose())
}

/// `{f_i + U f_i}`; a frame exactly when `I + U` is invertible.
pub fn perturb_identity(u: &LinearMap, fs: &FrameSystem) -> Result<FrameSystem> {
    check_operator(u, fs)?;
    image_frame(&u.plus_identity(), fs)
}

fn check_pair(fs: &FrameSystem, gs: &FrameSystem) -> Result<()> {
    if !fs.shares_space(gs) {
        return Err(Error::Input(
            "frame systems use different anchor sets".into(),
        ));
    }
    if fs.len() != gs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            found: gs.len(),
        });
    }
    Ok(())
}

/// `{L1 f_i + L2 g_i}`.
pub fn combine(
    l1: &LinearMap,
    fs: &FrameSystem,
    l2: &LinearMap,
    gs: &FrameSystem,
) -> Result<FrameSystem> {
    check_pair(fs, gs)?;
    check_operator(l1, fs)?;
    check_operator(l2, gs)?;
    let phi = fs.phi() * l1.matrix().transpose() + gs.phi() * l2.matrix().transpose();
    FrameSystem::from_coords(fs.space().clone(), phi)
}

/// `T_F* L1* + T_G* L2*` as an `m × k` matrix (induced-orthonormal input
/// coordinates).
pub fn combined_analysis(
    l1: &LinearMap,
    fs: &FrameSystem,
    l2: &LinearMap,
    gs: &FrameSystem,
) -> Result<RectMap> {
    check_pair(fs, gs)?;
    check_operator(l1, fs)?;
    check_operator(l2, gs)?;
    let lhs = analysis_map(fs).0 * l1.matrix().transpose();
    let rhs = analysis_map(gs).0 * l2.matrix().transpose();
    Ok(RectMap(lhs + rhs))
}

/// Full column rank with `σ_min > BOUNDED_BELOW_TOL·σ_max`.
pub fn is_bounded_below(t: &RectMap) -> bool {
    let (rows, cols) = t.matrix().shape();
    if cols > rows {
        return false;
    }
    let s = t.singular_values();
    match (s.first(), s.last()) {
        (Some(&lo), Some(&hi)) => lo > BOUNDED_BELOW_TOL * hi,
        _ => true,
    }
}

/// Whether the synthesis operator is onto `W`, and the lower bound
/// `1 / ‖T†‖²` it certifies (`0` when not onto).
pub fn surjectivity_frame_test(fs: &FrameSystem) -> (bool, f64) {
    let t = synthesis_map(fs);
    let k = fs.space().k();
    let s = t.singular_values();
    let onto = match (s.first(), s.last()) {
        (Some(&lo), Some(&hi)) => s.len() == k && lo * lo > FRAME_TOL * (hi * hi).max(1.0),
        _ => false,
    };
    if !onto {
        return (false, 0.0);
    }
    let pinv_norm = pseudo_inverse(&t).norm();
    (true, 1.0 / (pinv_norm * pinv_norm))
}

/// Largest entry of `γ·phiᵀ·psi - I`.
pub fn dual_pair_residual(fs: &FrameSystem, gs: &FrameSystem) -> Result<f64> {
    check_pair(fs, gs)?;
    let k = fs.space().k();
    let product = fs.phi().tr_mul(gs.phi()) * fs.gamma();
    Ok(linalg::max_abs_diff(&product, &DMatrix::identity(k, k)))
}

/// `T_F·T_G* = I_F` within `DUAL_PAIR_TOL`.
pub fn dual_pair_check(fs: &FrameSystem, gs: &FrameSystem) -> Result<bool> {
    Ok(dual_pair_residual(fs, gs)? <= DUAL_PAIR_TOL)
}
