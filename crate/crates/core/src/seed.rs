//! Deterministic seed derivation and per-edge Bernoulli decisions.
//!
//! Everything random in the crate flows from a 64-bit master seed through
//! [`finalize`], the SplitMix64 output function. Trial seeds depend only on
//! `(master, cell, trial)`, never on scheduling.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Stafford variant 13).
#[inline]
pub fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn absorb(state: u64, word: u64) -> u64 {
    finalize(state.wrapping_add(GOLDEN) ^ word)
}

/// Hashes `(seed, a, b)` to 64 well-mixed bits.
#[inline]
pub fn mix3(seed: u64, a: u64, b: u64) -> u64 {
    absorb(absorb(absorb(0, seed), a), b)
}

/// Seed for trial `trial` of grid cell `cell` under `master`.
pub fn trial_seed(master: u64, cell: u64, trial: u64) -> u64 {
    mix3(master, cell, trial)
}

/// Uniform in `[0, 1)` from the top 53 bits.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw attached to the unordered edge `{a, b}` under `seed`.
#[inline]
pub fn edge_uniform(seed: u64, a: u64, b: u64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    unit_f64(mix3(seed, lo, hi))
}

/// Whether edge `{a, b}` is present at probability `lambda`. For a fixed seed
/// the kept set grows monotonically with `lambda`.
#[inline]
pub fn edge_present(seed: u64, a: u64, b: u64, lambda: f64) -> bool {
    edge_uniform(seed, a, b) < lambda
}

/// A seed for runs that were not given one.
pub fn fresh_seed() -> u64 {
    use std::time::{SystemTime, UNIX_EPOCH};
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    finalize(nanos as u64 ^ (u64::from(std::process::id()) << 32))
}
