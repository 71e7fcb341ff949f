//! Counter-based node seeding.
//!
//! A node's key is a pure function of the master seed and its path from the
//! root, so deepening the truncation extends a game instead of resampling it.
//! Keys use the SplitMix64 finalizer; marks are three 53-bit uniforms taken
//! from the key with fixed stream offsets.

use crate::model::{Player, PrimitiveDistribution};

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const ROOT_SALT: u64 = 0x5250_4947_726f_6f74;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[inline]
pub fn root_key(seed: u64) -> u64 {
    mix64(seed ^ ROOT_SALT)
}

/// Key of the `ordinal`-th child (0-based) of the node with key `parent`.
#[inline]
pub fn child_key(parent: u64, ordinal: u32) -> u64 {
    mix64(parent.wrapping_add(GOLDEN.wrapping_mul(u64::from(ordinal) + 1)))
}

#[inline]
fn uniform(key: u64, stream: u64) -> f64 {
    let bits = mix64(key ^ stream.wrapping_mul(GOLDEN)) >> 11;
    bits as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Marks `(player, capacity, offspring)` of the node with key `key`.
#[inline]
pub fn draw_marks(p: &PrimitiveDistribution, key: u64) -> (Player, f64, u32) {
    p.draw(uniform(key, 1), uniform(key, 2), uniform(key, 3))
}

/// Seed of the `index`-th game of an experiment.
#[inline]
pub fn game_seed(master_seed: u64, index: u64) -> u64 {
    mix64(master_seed ^ mix64(index.wrapping_add(GOLDEN)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniforms_in_unit_interval() {
        for key in 0..1000u64 {
            for s in 1..4 {
                let u = uniform(mix64(key), s);
                assert!((0.0..1.0).contains(&u));
            }
        }
    }

    #[test]
    fn siblings_differ() {
        let r = root_key(7);
        assert_ne!(child_key(r, 0), child_key(r, 1));
        assert_ne!(child_key(r, 0), r);
    }
}
