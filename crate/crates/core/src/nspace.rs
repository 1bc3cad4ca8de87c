//! n-inner products realized by Gram determinants, and the induced space.
//!
//! The n-inner product of `x` and `y` relative to anchors `a_2, …, a_n` is the
//! determinant of the bordered Gram matrix
//!
//! ```text
//! | ⟨x,y⟩    ⟨x,a_2⟩   …  ⟨x,a_n⟩   |
//! | ⟨a_2,y⟩  ⟨a_2,a_2⟩ …  ⟨a_2,a_n⟩ |
//! |   ⋮          ⋮      ⋱     ⋮     |
//! | ⟨a_n,y⟩  ⟨a_n,a_2⟩ …  ⟨a_n,a_n⟩ |
//! ```
//!
//! By the Schur complement this equals `γ·⟨Px, Py⟩` where `γ` is the Gram
//! determinant of the anchors and `P` the orthogonal projection onto
//! `W = span(anchors)^⊥`. [`InducedSpace`] stores an orthonormal basis of `W`
//! so vectors can be handled through their `W`-coordinates, where the induced
//! inner product is `γ` times the dot product.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative factor of the anchor rank test.
pub const RANK_TOL: f64 = 1e-10;

/// Relative size of a negative n-norm radicand that is still treated as zero.
pub const RADICAND_TOL: f64 = 1e-12;

/// Ambient dimension `d` and order `n` of the n-inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmbientSpace {
    dim: usize,
    order: usize,
}

impl AmbientSpace {
    pub fn new(dim: usize, order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Precondition(format!(
                "order n = {order} must be at least 2"
            )));
        }
        if order > dim {
            return Err(Error::Precondition(format!(
                "order n = {order} needs n - 1 < d = {dim}"
            )));
        }
        Ok(Self { dim, order })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Dimension of the induced space, `d - (n - 1)`.
    pub fn induced_dim(&self) -> usize {
        self.dim + 1 - self.order
    }
}

/// A point of the ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVector(DVector<f64>);

impl AmbientVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(coords))
    }

    pub fn from_dvector(coords: DVector<f64>) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("ambient vector"));
        }
        Ok(Self(coords))
    }

    /// The `i`-th standard basis vector (zero based) of `R^d`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[i] = 1.0;
        Self(v)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DVector::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.iter().copied().collect()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.0.dot(&other.0)
    }
}

impl Add for &AmbientVector {
    type Output = AmbientVector;
    fn add(self, rhs: &AmbientVector) -> AmbientVector {
        AmbientVector(&self.0 + &rhs.0)
    }
}

impl Sub for &AmbientVector {
    type Output = AmbientVector;
    fn sub(self, rhs: &AmbientVector) -> AmbientVector {
        AmbientVector(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &AmbientVector {
    type Output = AmbientVector;
    fn mul(self, rhs: f64) -> AmbientVector {
        AmbientVector(&self.0 * rhs)
    }
}

/// The fixed anchors `a_2, …, a_n` together with their Gram determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    anchors: Vec<AmbientVector>,
    gram: DMatrix<f64>,
    gamma: f64,
}

impl AnchorSet {
    /// Fails if the list is empty, the lengths differ, or the anchors are
    /// linearly dependent under the scale-aware rank test.
    pub fn new(anchors: Vec<AmbientVector>) -> Result<Self> {
        let Some(first) = anchors.first() else {
            return Err(Error::Input(
                "anchor set must contain at least one vector".into(),
            ));
        };
        check_dims(first.dim(), &anchors)?;
        let gram = gram_matrix(&anchors);
        let gamma = gram.determinant();
        let threshold = rank_threshold(&gram);
        if !(gamma > threshold) {
            return Err(Error::DegenerateAnchors { gamma, threshold });
        }
        Ok(Self {
            anchors,
            gram,
            gamma,
        })
    }

    pub fn anchors(&self) -> &[AmbientVector] {
        &self.anchors
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.anchors[0].dim()
    }

    /// Order `n` of the n-inner product (number of anchors plus one).
    pub fn order(&self) -> usize {
        self.anchors.len() + 1
    }

    /// Same anchors in a different order; `perm[i]` is the old index of the
    /// new `i`-th anchor.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.anchors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.anchors.len(),
                found: perm.len(),
            });
        }
        Self::new(perm.iter().map(|&i| self.anchors[i].clone()).collect())
    }
}

fn check_dims(dim: usize, vectors: &[AmbientVector]) -> Result<()> {
    match vectors.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        }),
        None => Ok(()),
    }
}

fn gram_matrix(vectors: &[AmbientVector]) -> DMatrix<f64> {
    let m = vectors.len();
    DMatrix::from_fn(m, m, |p, q| vectors[p].dot(&vectors[q]))
}

fn rank_threshold(gram: &DMatrix<f64>) -> f64 {
    RANK_TOL * gram.diagonal().product().max(1.0)
}

/// Determinant of the Gram matrix `[⟨v_p, v_q⟩]`; `1` for an empty list.
pub fn gram_det(vectors: &[AmbientVector]) -> Result<f64> {
    let Some(first) = vectors.first() else {
        return Ok(1.0);
    };
    check_dims(first.dim(), vectors)?;
    Ok(gram_matrix(vectors).determinant())
}

/// `⟨x, y | a_2, …, a_n⟩` as the bordered Gram determinant.
pub fn n_inner(x: &AmbientVector, y: &AmbientVector, anchors: &AnchorSet) -> Result<f64> {
    let d = anchors.dim();
    for v in [x, y] {
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
    }
    let a = anchors.anchors();
    let n = a.len() + 1;
    let mut m = DMatrix::zeros(n, n);
    m[(0, 0)] = x.dot(y);
    for j in 1..n {
        m[(0, j)] = x.dot(&a[j - 1]);
        m[(j, 0)] = a[j - 1].dot(y);
    }
    m.view_mut((1, 1), (n - 1, n - 1)).copy_from(anchors.gram());
    Ok(m.determinant())
}

/// `‖x, a_2, …, a_n‖ = sqrt(⟨x, x | a_2, …, a_n⟩)`.
///
/// Negative radicands within `RADICAND_TOL` of the Hadamard bound
/// `⟨x,x⟩·Π⟨a_i,a_i⟩` are rounding noise near `span(anchors)` and clamp to 0.
pub fn n_norm(x: &AmbientVector, anchors: &AnchorSet) -> Result<f64> {
    let radicand = n_inner(x, x, anchors)?;
    sqrt_radicand(radicand, x, anchors)
}

/// Square root with the same clamping rule as [`n_norm`], for a radicand
/// already evaluated for `x`.
pub fn sqrt_radicand(radicand: f64, x: &AmbientVector, anchors: &AnchorSet) -> Result<f64> {
    if radicand >= 0.0 {
        return Ok(radicand.sqrt());
    }
    let tolerance = RADICAND_TOL * (x.dot(x) * anchors.gram().diagonal().product()).max(1.0);
    if radicand >= -tolerance {
        Ok(0.0)
    } else {
        Err(Error::NumericalInstability {
            radicand,
            tolerance,
        })
    }
}

/// Coordinates of a coset representative in the orthonormal basis of `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedVector(DVector<f64>);

impl InducedVector {
    pub fn new(coords: DVector<f64>) -> Self {
        Self(coords)
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// The quotient `X / span(anchors)` realized as `W = span(anchors)^⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedSpace {
    anchors: AnchorSet,
    space: AmbientSpace,
    /// `k × d`, rows orthonormal and orthogonal to every anchor.
    basis: DMatrix<f64>,
}

impl InducedSpace {
    /// Shorthand for [`build_induced_space`] with the ambient space implied by
    /// the anchors.
    pub fn new(anchors: AnchorSet) -> Result<Self> {
        let space = AmbientSpace::new(anchors.dim(), anchors.order())?;
        build_induced_space(anchors, space)
    }

    pub fn anchors(&self) -> &AnchorSet {
        &self.anchors
    }

    pub fn space(&self) -> AmbientSpace {
        self.space
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn gamma(&self) -> f64 {
        self.anchors.gamma()
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Induced dimension `k`.
    pub fn k(&self) -> usize {
        self.basis.nrows()
    }

    pub fn project(&self, x: &AmbientVector) -> Result<InducedVector> {
        project(x, self)
    }

    /// Canonical representative (zero anchor component) of a coset.
    pub fn lift(&self, u: &InducedVector) -> Result<AmbientVector> {
        if u.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: u.len(),
            });
        }
        Ok(AmbientVector(self.basis.tr_mul(u.coords())))
    }

    /// Unit vector `y*` of the induced norm that attains
    /// `|⟨x, y* | a⟩| = ‖x, a‖`; `None` when `x` lies in the anchor span.
    pub fn norming_vector(&self, x: &AmbientVector) -> Result<Option<AmbientVector>> {
        let u = project(x, self)?;
        let len = u.coords().norm();
        if len <= 1e-12 * x.coords().norm() {
            return Ok(None);
        }
        let scaled = InducedVector(u.coords() / (len * self.gamma().sqrt()));
        self.lift(&scaled).map(Some)
    }
}

/// Orthonormal basis of `span(anchors)^⊥`.
///
/// The anchors are orthonormalized first (in order). Standard basis vectors
/// are then added by column pivoting: each round takes the candidate with the
/// largest residual, lowest index on ties. Every projection is applied twice.
pub fn build_induced_space(anchors: AnchorSet, space: AmbientSpace) -> Result<InducedSpace> {
    let d = space.dim();
    if anchors.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: anchors.dim(),
        });
    }
    if anchors.order() != space.order() {
        return Err(Error::DimensionMismatch {
            expected: space.order() - 1,
            found: anchors.order() - 1,
        });
    }
    let threshold = rank_threshold(anchors.gram());
    if !(anchors.gamma() > threshold) {
        return Err(Error::DegenerateAnchors {
            gamma: anchors.gamma(),
            threshold,
        });
    }

    let mut ortho: Vec<DVector<f64>> = Vec::with_capacity(d);
    for a in anchors.anchors() {
        let mut r = a.coords().clone();
        reorthogonalize(&mut r, &ortho);
        let norm = r.norm();
        if norm <= f64::EPSILON * a.coords().norm() {
            return Err(Error::DegenerateAnchors {
                gamma: anchors.gamma(),
                threshold,
            });
        }
        ortho.push(r / norm);
    }

    let k = space.induced_dim();
    let mut used = vec![false; d];
    let mut rows: Vec<DVector<f64>> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for j in (0..d).filter(|&j| !used[j]) {
            let mut r = DVector::zeros(d);
            r[j] = 1.0;
            reorthogonalize(&mut r, &ortho);
            let norm = r.norm();
            if best.as_ref().is_none_or(|(_, _, n)| norm > *n) {
                best = Some((j, r, norm));
            }
        }
        let (j, r, norm) = best.expect("fewer basis candidates than induced dimension");
        used[j] = true;
        let q = r / norm;
        ortho.push(q.clone());
        rows.push(q);
    }

    let basis = DMatrix::from_fn(k, d, |i, j| rows[i][j]);
    Ok(InducedSpace {
        anchors,
        space,
        basis,
    })
}

fn reorthogonalize(v: &mut DVector<f64>, ortho: &[DVector<f64>]) {
    for _ in 0..2 {
        for q in ortho {
            let c = q.dot(v);
            v.axpy(-c, q, 1.0);
        }
    }
}

/// `W`-coordinates `Q·x`; constant on cosets of the anchor span.
pub fn project(x: &AmbientVector, space: &InducedSpace) -> Result<InducedVector> {
    if x.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: x.dim(),
        });
    }
    Ok(InducedVector(space.basis() * x.coords()))
}

/// `⟨u, v⟩_F = γ·(u·v)`.
pub fn induced_inner(u: &InducedVector, v: &InducedVector, space: &InducedSpace) -> Result<f64> {
    for w in [u, v] {
        if w.len() != space.k() {
            return Err(Error::DimensionMismatch {
                expected: space.k(),
                found: w.len(),
            });
        }
    }
    Ok(space.gamma() * u.coords().dot(v.coords()))
}
