//! Global operation counters used by the benchmark harness.

use std::sync::atomic::{AtomicU64, Ordering};

static MAT_VEC: AtomicU64 = AtomicU64::new(0);
static MAT_MAT: AtomicU64 = AtomicU64::new(0);
static MAX_BITS: AtomicU64 = AtomicU64::new(0);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct OpCounts {
    pub mat_vec: u64,
    pub mat_mat: u64,
    pub max_bits: u64,
}

impl OpCounts {
    pub fn since(self, earlier: OpCounts) -> OpCounts {
        OpCounts {
            mat_vec: self.mat_vec - earlier.mat_vec,
            mat_mat: self.mat_mat - earlier.mat_mat,
            max_bits: self.max_bits,
        }
    }
}

pub fn snapshot() -> OpCounts {
    OpCounts {
        mat_vec: MAT_VEC.load(Ordering::Relaxed),
        mat_mat: MAT_MAT.load(Ordering::Relaxed),
        max_bits: MAX_BITS.load(Ordering::Relaxed),
    }
}

/// Resets the running bit-length maximum; the product counters are monotone.
pub fn reset_max_bits() {
    MAX_BITS.store(0, Ordering::Relaxed);
}

pub(crate) fn count_mat_vec() {
    MAT_VEC.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn count_mat_mat() {
    MAT_MAT.fetch_add(1, Ordering::Relaxed);
}

pub(crate) fn observe_bits(bits: u64) {
    MAX_BITS.fetch_max(bits, Ordering::Relaxed);
}
