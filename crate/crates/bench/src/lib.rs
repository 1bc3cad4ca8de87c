//! Shared fixtures for the benchmarks.

use nframes_core::testkit::{gen_sized_frame, GenConfig};
use nframes_core::FrameSystem;

/// A random frame with fixed sizes: ambient dimension `d`, order `n`, `m`
/// vectors.
pub fn fixture(seed: u64, d: usize, n: usize, m: usize) -> FrameSystem {
    let cfg = GenConfig {
        dims: d..=d,
        orders: n..=n,
        lengths: m..=m,
        ..GenConfig::with_seed(seed)
    };
    gen_sized_frame(&cfg).expect("benchmark fixture generates")
}
