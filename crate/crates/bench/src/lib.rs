//! Chains shared by the benchmarks.

use aklt_core::ChainSpec;

/// Every bond carries `m` valence bonds, so bulk spins are `m/2 + m/2`.
pub fn homogeneous(m: u32, bulk: usize) -> ChainSpec {
    ChainSpec::uniform(m, bulk).expect("uniform chains are valid")
}

/// `(1/2, 3/2, 2, 2, 3/2, 1/2)`.
pub fn staircase() -> ChainSpec {
    ChainSpec::from_spins_twice(&[1, 3, 4, 4, 3, 1]).expect("valid chain")
}
