//! Frames relative to an anchor set in finite-dimensional n-inner product
//! spaces.
//!
//! The n-inner product is realized by bordered Gram determinants
//! ([`nspace`]). Fixing anchors `a_2, …, a_n` turns the ambient space into an
//! ordinary inner product space `X_F`, on which [`frames`] computes frame
//! operators, optimal bounds, canonical duals and tight frames, and
//! [`optheory`] handles operator images, perturbations and combinations.
//! [`testkit`] and [`certify`] generate random instances and check every
//! property the library promises.

// `!(x > t)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certify;
pub mod error;
pub mod frames;
pub mod instance;
pub mod linalg;
pub mod nspace;
pub mod optheory;
pub mod testkit;

pub use error::{Error, Result};
pub use frames::{
    analysis, canonical_dual, canonical_tight, frame_operator, is_bessel, is_frame, is_tight,
    optimal_bounds, reconstruct, reconstruct_swapped, synthesis, CoefficientSeq, FrameBounds,
    FrameOperator, FrameSystem,
};
pub use instance::{Instance, InstanceFile};

pub use nspace::{
    build_induced_space, gram_det, induced_inner, n_inner, n_norm, project, AmbientSpace,
    AmbientVector, AnchorSet, InducedSpace, InducedVector,
};
pub use optheory::{
    combine, dual_pair_check, image_frame, image_frame_operator, perturb_identity, pseudo_inverse,
    sqrt_psd, surjectivity_frame_test, LinearMap, RectMap,
};
