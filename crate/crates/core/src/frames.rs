//! Frames associated to an anchor set.
//!
//! A [`FrameSystem`] keeps the ambient vectors `f_i` alongside their
//! `W`-coordinates `phi` (row `i` is `Q·f_i`). With `γ` the anchor Gram
//! determinant, the analysis coefficients are `γ·phi·u`, synthesis is
//! `phiᵀ·c`, and the frame operator is `S = γ·phiᵀ·phi` in `W`-coordinates.
//! Optimal frame bounds are the extreme eigenvalues of `S`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{self, SymSpectrum};
use crate::nspace::{project, AmbientVector, InducedSpace, InducedVector};

/// Relative threshold of the frame test: `A > FRAME_TOL·max(1, B)`.
pub const FRAME_TOL: f64 = 1e-9;

/// Relative slack of the Bessel test.
pub const BESSEL_TOL: f64 = 1e-9;

/// Symmetry slack accepted when wrapping a matrix as a frame operator.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct FrameSystem {
    space: Arc<InducedSpace>,
    vectors: Vec<AmbientVector>,
    phi: DMatrix<f64>,
}

impl FrameSystem {
    pub fn new(space: Arc<InducedSpace>, vectors: Vec<AmbientVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::Input(
                "a frame system needs at least one vector".into(),
            ));
        }
        let k = space.k();
        let mut phi = DMatrix::zeros(vectors.len(), k);
        for (i, f) in vectors.iter().enumerate() {
            let u = project(f, &space)?;
            phi.row_mut(i).copy_from(&u.coords().transpose());
        }
        Ok(Self {
            space,
            vectors,
            phi,
        })
    }

    /// Builds the family whose `W`-coordinates are the rows of `phi`; the
    /// ambient vectors are the canonical representatives `Qᵀ·phi_i`.
    pub fn from_coords(space: Arc<InducedSpace>, phi: DMatrix<f64>) -> Result<Self> {
        if phi.nrows() == 0 {
            return Err(Error::Input(
                "a frame system needs at least one vector".into(),
            ));
        }
        if phi.ncols() != space.k() {
            return Err(Error::DimensionMismatch {
                expected: space.k(),
                found: phi.ncols(),
            });
        }
        if !linalg::all_finite(&phi) {
            return Err(Error::NonFinite("frame coordinates"));
        }
        let lifted = &phi * space.basis();
        let vectors = lifted
            .row_iter()
            .map(|r| AmbientVector::from_dvector(r.transpose()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            space,
            vectors,
            phi,
        })
    }

    pub fn space(&self) -> &Arc<InducedSpace> {
        &self.space
    }

    pub fn vectors(&self) -> &[AmbientVector] {
        &self.vectors
    }

    /// `m × k` projected coordinates.
    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn gamma(&self) -> f64 {
        self.space.gamma()
    }

    /// `{α·f_i}`.
    pub fn scaled(&self, alpha: f64) -> Result<Self> {
        Self::new(
            self.space.clone(),
            self.vectors.iter().map(|f| f * alpha).collect(),
        )
    }

    /// True when both systems live over the same induced space.
    pub fn shares_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space
    }
}

/// Finite coefficient sequence `{c_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSeq(DVector<f64>);

impl CoefficientSeq {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(values))
    }

    pub fn from_dvector(values: DVector<f64>) -> Result<Self> {
        if values.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("coefficient sequence"));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }
}

/// Symmetric positive semidefinite `k × k` matrix of `S_F`, with its spectrum.
#[derive(Debug, Clone)]
pub struct FrameOperator {
    matrix: DMatrix<f64>,
    spectrum: SymSpectrum,
}

impl FrameOperator {
    /// Wraps a symmetric PSD matrix. The matrix is symmetrized; asymmetry or
    /// negative eigenvalues beyond `SYMMETRY_TOL` (relative) are rejected.
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Domain("frame operator must be square".into()));
        }
        if !linalg::all_finite(&matrix) {
            return Err(Error::NonFinite("frame operator"));
        }
        let scale = linalg::max_abs(&matrix).max(1.0);
        if !linalg::is_symmetric(&matrix, SYMMETRY_TOL * scale) {
            return Err(Error::Domain("frame operator is not symmetric".into()));
        }
        let matrix = linalg::symmetrize(&matrix);
        let spectrum = SymSpectrum::new(&matrix);
        if !spectrum.values.is_empty() && spectrum.min() < -SYMMETRY_TOL * scale {
            return Err(Error::Domain(format!(
                "frame operator has negative eigenvalue {:e}",
                spectrum.min()
            )));
        }
        Ok(Self { matrix, spectrum })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.spectrum.values
    }

    pub fn spectrum(&self) -> &SymSpectrum {
        &self.spectrum
    }

    pub fn bounds(&self) -> FrameBounds {
        let n = self.spectrum.values.len();
        if n == 0 {
            return FrameBounds {
                lower: 0.0,
                upper: 0.0,
                optimal: true,
            };
        }
        let upper = self.spectrum.max().max(0.0);
        let lower = self.spectrum.min().clamp(0.0, upper);
        FrameBounds {
            lower,
            upper,
            optimal: true,
        }
    }

    fn require_invertible(&self) -> Result<()> {
        let b = self.bounds();
        if b.lower > FRAME_TOL * b.upper.max(1.0) {
            Ok(())
        } else {
            Err(Error::SingularFrameOperator {
                lower: b.lower,
                upper: b.upper,
            })
        }
    }

    /// `S^{-1}`.
    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        self.require_invertible()?;
        Ok(self.spectrum.map(|x| 1.0 / x))
    }

    /// `S^{-1/2}`, the inverse of the positive square root.
    pub fn inverse_sqrt(&self) -> Result<DMatrix<f64>> {
        self.require_invertible()?;
        Ok(self.spectrum.map(|x| 1.0 / x.sqrt()))
    }

    /// `⟨S u, u⟩_F = γ·(S u)·u`.
    pub fn quadratic_form(&self, u: &InducedVector, gamma: f64) -> f64 {
        gamma * (&self.matrix * u.coords()).dot(u.coords())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub optimal: bool,
}

fn check_ambient(f: &AmbientVector, fs: &FrameSystem) -> Result<InducedVector> {
    project(f, fs.space())
}

/// `{⟨f, f_i | a⟩}` computed as `γ·phi·Qf`.
pub fn analysis(f: &AmbientVector, fs: &FrameSystem) -> Result<CoefficientSeq> {
    let u = check_ambient(f, fs)?;
    CoefficientSeq::from_dvector(fs.phi() * u.coords() * fs.gamma())
}

/// Analysis of an induced vector (coordinates already in `W`).
pub fn analysis_coords(u: &InducedVector, fs: &FrameSystem) -> Result<CoefficientSeq> {
    if u.len() != fs.space().k() {
        return Err(Error::DimensionMismatch {
            expected: fs.space().k(),
            found: u.len(),
        });
    }
    CoefficientSeq::from_dvector(fs.phi() * u.coords() * fs.gamma())
}

/// `project(Σ c_i f_i) = phiᵀ·c`.
pub fn synthesis(c: &CoefficientSeq, fs: &FrameSystem) -> Result<InducedVector> {
    if c.len() != fs.len() {
        return Err(Error::DimensionMismatch {
            expected: fs.len(),
            found: c.len(),
        });
    }
    Ok(InducedVector::new(fs.phi().tr_mul(c.values())))
}

/// `S = γ·phiᵀ·phi`.
pub fn frame_operator(fs: &FrameSystem) -> FrameOperator {
    let s = fs.phi().tr_mul(fs.phi()) * fs.gamma();
    FrameOperator::from_matrix(s).expect("Gram product is symmetric PSD")
}

pub fn optimal_bounds(fs: &FrameSystem) -> FrameBounds {
    frame_operator(fs).bounds()
}

pub fn is_frame(fs: &FrameSystem, tol: f64) -> bool {
    let b = optimal_bounds(fs);
    b.lower > tol * b.upper.max(1.0)
}

/// `λ_max(S) ≤ bound` up to `BESSEL_TOL` relative slack.
pub fn is_bessel(fs: &FrameSystem, bound: f64) -> bool {
    optimal_bounds(fs).upper <= bound + BESSEL_TOL * bound.max(1.0)
}

/// Canonical dual `{S^{-1} f_i}`, returned as canonical coset representatives.
pub fn canonical_dual(fs: &FrameSystem) -> Result<FrameSystem> {
    let s_inv = frame_operator(fs).inverse()?;
    FrameSystem::from_coords(fs.space().clone(), fs.phi() * s_inv)
}

/// `Σ ⟨f, S^{-1} f_i | a⟩ f_i`, in `W`-coordinates.
pub fn reconstruct(f: &AmbientVector, fs: &FrameSystem) -> Result<InducedVector> {
    let dual = canonical_dual(fs)?;
    let c = analysis(f, &dual)?;
    synthesis(&c, fs)
}

/// `Σ ⟨f, f_i | a⟩ S^{-1} f_i`, in `W`-coordinates.
pub fn reconstruct_swapped(f: &AmbientVector, fs: &FrameSystem) -> Result<InducedVector> {
    let dual = canonical_dual(fs)?;
    let c = analysis(f, fs)?;
    synthesis(&c, &dual)
}

/// `(true, A)` when `B - A ≤ tol·max(1, B)`; the second entry is always the
/// optimal lower bound.
pub fn is_tight(fs: &FrameSystem, tol: f64) -> (bool, f64) {
    let b = optimal_bounds(fs);
    (b.upper - b.lower <= tol * b.upper.max(1.0), b.lower)
}

/// `(1/A)·Σ ⟨f, f_i | a⟩ f_i` for a tight frame with bound `A`.
pub fn tight_reconstruct(f: &AmbientVector, fs: &FrameSystem, bound: f64) -> Result<InducedVector> {
    if !(bound > 0.0) {
        return Err(Error::Precondition(format!(
            "tight bound {bound} must be positive"
        )));
    }
    let c = analysis(f, fs)?;
    let u = synthesis(&c, fs)?;
    Ok(InducedVector::new(u.coords() / bound))
}

/// Normalized tight frame `{S^{-1/2} f_i}`.
pub fn canonical_tight(fs: &FrameSystem) -> Result<FrameSystem> {
    let s_inv_half = frame_operator(fs).inverse_sqrt()?;
    FrameSystem::from_coords(fs.space().clone(), fs.phi() * s_inv_half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nspace::AnchorSet;

    fn v(c: &[f64]) -> AmbientVector {
        AmbientVector::new(c.to_vec()).unwrap()
    }

    fn space(anchor: &[f64]) -> Arc<InducedSpace> {
        Arc::new(InducedSpace::new(AnchorSet::new(vec![v(anchor)]).unwrap()).unwrap())
    }

    fn system(anchor: &[f64], vecs: &[&[f64]]) -> FrameSystem {
        FrameSystem::new(space(anchor), vecs.iter().map(|c| v(c)).collect()).unwrap()
    }

    fn mb() -> FrameSystem {
        system(
            &[0.0, 0.0, 1.0],
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[1.0, 1.0, 0.0]],
        )
    }

    fn ortho(anchor: &[f64]) -> FrameSystem {
        system(anchor, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]])
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn empty_system_rejected() {
        assert!(FrameSystem::new(space(&[0.0, 0.0, 1.0]), vec![]).is_err());
    }

    #[test]
    fn analysis_examples() {
        let e1 = AmbientVector::basis(3, 0);
        assert_close(
            analysis(&e1, &mb()).unwrap().values().as_slice(),
            &[1.0, 0.0, 1.0],
            1e-15,
        );
        let e3 = AmbientVector::basis(3, 2);
        assert_close(
            analysis(&e3, &mb()).unwrap().values().as_slice(),
            &[0.0; 3],
            1e-15,
        );
        let scaled = ortho(&[0.0, 0.0, 2.0]);
        assert_close(
            analysis(&e1, &scaled).unwrap().values().as_slice(),
            &[4.0, 0.0],
            1e-15,
        );
    }

    #[test]
    fn synthesis_examples() {
        let fs = mb();
        let c = |x: &[f64]| CoefficientSeq::new(x.to_vec()).unwrap();
        assert_close(
            synthesis(&c(&[1.0, 0.0, 0.0]), &fs)
                .unwrap()
                .coords()
                .as_slice(),
            &[1.0, 0.0],
            0.0,
        );
        assert_close(
            synthesis(&c(&[0.0, 0.0, 0.0]), &fs)
                .unwrap()
                .coords()
                .as_slice(),
            &[0.0, 0.0],
            0.0,
        );
        assert_close(
            synthesis(&c(&[1.0, 1.0, -1.0]), &fs)
                .unwrap()
                .coords()
                .as_slice(),
            &[0.0, 0.0],
            0.0,
        );
        assert!(synthesis(&c(&[1.0]), &fs).is_err());
    }

    #[test]
    fn frame_operator_examples() {
        let s = frame_operator(&mb());
        assert_close(s.matrix().as_slice(), &[2.0, 1.0, 1.0, 2.0], 1e-15);
        assert_close(
            frame_operator(&ortho(&[0.0, 0.0, 1.0])).matrix().as_slice(),
            &[1.0, 0.0, 0.0, 1.0],
            0.0,
        );
        assert_close(
            frame_operator(&ortho(&[0.0, 0.0, 2.0])).matrix().as_slice(),
            &[4.0, 0.0, 0.0, 4.0],
            0.0,
        );
    }

    #[test]
    fn bounds_and_frame_checks() {
        let b = optimal_bounds(&mb());
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 3.0).abs() < 1e-12 && b.optimal);
        let b = optimal_bounds(&ortho(&[0.0, 0.0, 1.0]));
        assert_eq!((b.lower, b.upper), (1.0, 1.0));
        let single = system(&[0.0, 0.0, 1.0], &[&[1.0, 0.0, 0.0]]);
        let b = optimal_bounds(&single);
        assert!(b.lower.abs() < 1e-15 && (b.upper - 1.0).abs() < 1e-15);

        assert!(is_frame(&mb(), FRAME_TOL));
        assert!(!is_frame(&single, FRAME_TOL));
        let in_span = system(&[0.0, 0.0, 1.0], &[&[0.0, 0.0, 1.0]]);
        assert!(!is_frame(&in_span, FRAME_TOL));
    }

    #[test]
    fn bessel_examples() {
        assert!(is_bessel(&mb(), 3.0));
        assert!(!is_bessel(&mb(), 2.9));
        let in_span = system(&[0.0, 0.0, 1.0], &[&[0.0, 0.0, 1.0]]);
        assert!(is_bessel(&in_span, 1e-3));
    }

    #[test]
    fn canonical_dual_of_fixture() {
        let dual = canonical_dual(&mb()).unwrap();
        let expected: [&[f64]; 3] = [
            &[2.0 / 3.0, -1.0 / 3.0, 0.0],
            &[-1.0 / 3.0, 2.0 / 3.0, 0.0],
            &[1.0 / 3.0, 1.0 / 3.0, 0.0],
        ];
        for (got, want) in dual.vectors().iter().zip(expected) {
            assert_close(got.as_slice(), want, 1e-12);
        }
        let b = optimal_bounds(&dual);
        assert!((b.lower - 1.0 / 3.0).abs() < 1e-10 && (b.upper - 1.0).abs() < 1e-10);

        let o = ortho(&[0.0, 0.0, 1.0]);
        let od = canonical_dual(&o).unwrap();
        for (a, b) in od.vectors().iter().zip(o.vectors()) {
            assert_close(a.as_slice(), b.as_slice(), 1e-15);
        }
    }

    #[test]
    fn dual_of_non_frame_fails() {
        let single = system(&[0.0, 0.0, 1.0], &[&[1.0, 0.0, 0.0]]);
        assert!(matches!(
            canonical_dual(&single),
            Err(Error::SingularFrameOperator { .. })
        ));
        assert!(matches!(
            canonical_tight(&single),
            Err(Error::SingularFrameOperator { .. })
        ));
        assert!(reconstruct(&AmbientVector::basis(3, 0), &single).is_err());
    }

    #[test]
    fn reconstruction_examples() {
        let fs = mb();
        let f = v(&[5.0, -2.0, 7.0]);
        assert_close(
            reconstruct(&f, &fs).unwrap().coords().as_slice(),
            &[5.0, -2.0],
            1e-12,
        );
        assert_close(
            reconstruct_swapped(&f, &fs).unwrap().coords().as_slice(),
            &[5.0, -2.0],
            1e-12,
        );
        let e3 = AmbientVector::basis(3, 2);
        assert_close(
            reconstruct(&e3, &fs).unwrap().coords().as_slice(),
            &[0.0, 0.0],
            1e-15,
        );
        let e1 = AmbientVector::basis(3, 0);
        assert_close(
            reconstruct(&e1, &ortho(&[0.0, 0.0, 1.0]))
                .unwrap()
                .coords()
                .as_slice(),
            &[1.0, 0.0],
            1e-15,
        );
    }

    #[test]
    fn tightness_examples() {
        assert_eq!(is_tight(&ortho(&[0.0, 0.0, 1.0]), 1e-9), (true, 1.0));
        assert!(!is_tight(&mb(), 1e-9).0);
        let (tight, a) = is_tight(&ortho(&[0.0, 0.0, 2.0]), 1e-9);
        assert!(tight && (a - 4.0).abs() < 1e-12);

        let fs = ortho(&[0.0, 0.0, 2.0]);
        let f = v(&[3.0, -1.0, 2.0]);
        let u = tight_reconstruct(&f, &fs, a).unwrap();
        assert_close(u.coords().as_slice(), &[3.0, -1.0], 1e-12);
    }

    #[test]
    fn canonical_tight_examples() {
        let o = ortho(&[0.0, 0.0, 1.0]);
        let t = canonical_tight(&o).unwrap();
        for (a, b) in t.vectors().iter().zip(o.vectors()) {
            assert_close(a.as_slice(), b.as_slice(), 1e-15);
        }

        let t = canonical_tight(&mb()).unwrap();
        let s = frame_operator(&t);
        assert!((s.matrix() - DMatrix::identity(2, 2)).abs().max() < 1e-10);

        let t = canonical_tight(&ortho(&[0.0, 0.0, 2.0])).unwrap();
        assert_close(t.vectors()[0].as_slice(), &[0.5, 0.0, 0.0], 1e-15);
        assert_close(t.vectors()[1].as_slice(), &[0.0, 0.5, 0.0], 1e-15);
        let b = optimal_bounds(&t);
        assert!((b.lower - 1.0).abs() < 1e-12 && (b.upper - 1.0).abs() < 1e-12);
    }

    #[test]
    fn frame_operator_rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(FrameOperator::from_matrix(m).is_err());
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(FrameOperator::from_matrix(m).is_err());
    }
}
