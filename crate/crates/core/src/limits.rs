//! Process-wide cap on the size of dense allocations.
//!
//! Dense materializations (Kronecker products, densified TT tensors, frame matrices)
//! grow exponentially with the order, so every one of them is checked against this cap
//! before any memory is touched.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};

/// Default cap: 1 GiB.
pub const DEFAULT_MEMORY_CAP: u64 = 1 << 30;

static MEMORY_CAP: AtomicU64 = AtomicU64::new(DEFAULT_MEMORY_CAP);

pub fn memory_cap() -> u64 {
    MEMORY_CAP.load(Ordering::Relaxed)
}

pub fn set_memory_cap(bytes: u64) {
    MEMORY_CAP.store(bytes, Ordering::Relaxed);
}

/// Checks that `elements` f64 values fit under the cap.
pub fn check_elements(elements: u128) -> Result<()> {
    let requested = elements.saturating_mul(std::mem::size_of::<f64>() as u128);
    let cap = memory_cap();
    if requested > cap as u128 {
        return Err(Error::MemoryCap { requested, cap });
    }
    Ok(())
}

/// Product of `dims` as an exact integer, for cap checks before allocation.
pub fn element_count(dims: &[usize]) -> u128 {
    dims.iter().fold(1u128, |acc, &d| acc.saturating_mul(d as u128))
}
