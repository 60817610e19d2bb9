//! Deterministic derivation of per-task RNG seeds.
//!
//! Every randomized task (bootstrap tree, training run, fold) derives its own
//! seed from the master seed plus a textual tag and an index, so results are
//! independent of execution order.

/// FNV-1a over the master seed, a tag, and an index.
pub fn derive_seed(master: u64, tag: &str, index: u64) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    for b in master
        .to_le_bytes()
        .iter()
        .chain(tag.as_bytes())
        .chain(index.to_le_bytes().iter())
    {
        h ^= u64::from(*b);
        h = h.wrapping_mul(PRIME);
    }
    h
}
