//! Counter-based random streams.
//!
//! Every random draw in a run is addressed by `(seed, role, index)`, where
//! the index is a slot or block number. The address is hashed into the
//! starting state of a short SplitMix64 sequence, so any slot can be
//! regenerated in isolation and results do not depend on evaluation order.

use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

/// What a stream is used for. Each role gets an independent family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    AliceBits,
    BobBasis,
    Schedule,
    AliceSource,
    Eve,
    EveResend,
    Channel,
}

impl Role {
    fn salt(self) -> u64 {
        match self {
            Role::AliceBits => 0x243f_6a88_85a3_08d3,
            Role::BobBasis => 0x1319_8a2e_0370_7344,
            Role::Schedule => 0xa409_3822_299f_31d0,
            Role::AliceSource => 0x082e_fa98_ec4e_6c89,
            Role::Eve => 0x4528_21e6_38d0_1377,
            Role::EveResend => 0xbe54_66cf_34e9_0c6c,
            Role::Channel => 0xc0ac_29b7_c97c_50dd,
        }
    }
}

// SplitMix64 output finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotStreams {
    seed: u64,
}

impl SlotStreams {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn rng(&self, role: Role, index: u64) -> SplitMix64 {
        let family = mix64(self.seed ^ role.salt());
        let key = mix64(family ^ mix64(index.wrapping_add(0x9e37_79b9_7f4a_7c15)));
        SplitMix64::seed_from_u64(key)
    }
}
