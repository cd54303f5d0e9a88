//! Seed derivation for reproducible parallel sampling.

/// Derive an independent child seed from `(seed, index)` with a
/// splitmix64 finalizer.  Samplers seed one generator per sample index
/// so results do not depend on execution order.
pub fn derive(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
