use rand::RngCore;

use super::encode::AliceBits;
use super::ProtocolError;
use crate::ledger::Quadrature;
use crate::streams::{Role, SlotStreams};

pub const DEFAULT_BLOCK: usize = 256;

/// Which quadrature serves as the public test, block by block.
///
/// Slots `k * block_len .. (k + 1) * block_len` use `roles[k]` as the test
/// quadrature; the other quadrature is key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestSchedule {
    block_len: usize,
    roles: Vec<Quadrature>,
}

impl TestSchedule {
    pub fn new(block_len: usize, roles: Vec<Quadrature>) -> Self {
        Self { block_len, roles }
    }

    /// Pseudo-random roles covering `n_slots`.
    pub fn random(n_slots: usize, block_len: usize, streams: &SlotStreams) -> Self {
        let blocks = n_slots.div_ceil(block_len.max(1));
        let roles = (0..blocks as u64)
            .map(|k| {
                if streams.rng(Role::Schedule, k).next_u64() >> 63 == 1 {
                    Quadrature::Minus
                } else {
                    Quadrature::Plus
                }
            })
            .collect();
        Self { block_len, roles }
    }

    pub fn is_empty(&self) -> bool {
        self.block_len == 0 || self.roles.is_empty()
    }

    pub fn slots_covered(&self) -> usize {
        self.block_len * self.roles.len()
    }

    pub fn test_quadrature(&self, slot: usize) -> Option<Quadrature> {
        self.roles.get(slot.checked_div(self.block_len)?).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyBit {
    pub slot: usize,
    pub quadrature: Quadrature,
    pub alice: bool,
    pub bob: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiftOutcome {
    pub key: Vec<KeyBit>,
    pub test_errors: usize,
    pub test_count: usize,
}

impl SiftOutcome {
    pub fn test_ber(&self) -> Option<f64> {
        (self.test_count > 0).then(|| self.test_errors as f64 / self.test_count as f64)
    }

    /// Alice's side of the sifted key.
    pub fn key_bits(&self) -> Vec<bool> {
        self.key.iter().map(|k| k.alice).collect()
    }

    pub fn key_ber(&self) -> Option<f64> {
        let errs = self.key.iter().filter(|k| k.alice != k.bob).count();
        (!self.key.is_empty()).then(|| errs as f64 / self.key.len() as f64)
    }
}

/// Public discussion after transmission.
///
/// Bob announces his bases. Slots where he looked at the scheduled test
/// quadrature are compared openly; the rest become key.
pub fn sift(
    alice: &AliceBits,
    bob_results: &[bool],
    bases: &[Quadrature],
    schedule: &TestSchedule,
) -> Result<SiftOutcome, ProtocolError> {
    let n = alice.len();
    if alice.minus.len() != n || bob_results.len() != n || bases.len() != n {
        return Err(ProtocolError::LengthMismatch);
    }
    if schedule.is_empty() {
        return Err(ProtocolError::EmptySchedule);
    }
    if schedule.slots_covered() < n {
        return Err(ProtocolError::ScheduleTooShort {
            covered: schedule.slots_covered(),
            needed: n,
        });
    }
    let mut out = SiftOutcome {
        key: Vec::with_capacity(n / 2 + 1),
        test_errors: 0,
        test_count: 0,
    };
    for (slot, (&basis, &bob)) in bases.iter().zip(bob_results).enumerate() {
        let sent = alice.bit(slot, basis);
        if schedule.test_quadrature(slot) == Some(basis) {
            out.test_count += 1;
            out.test_errors += (sent != bob) as usize;
        } else {
            out.key.push(KeyBit {
                slot,
                quadrature: basis,
                alice: sent,
                bob,
            });
        }
    }
    Ok(out)
}
