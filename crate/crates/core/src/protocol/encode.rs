use rand::RngCore;

use super::ProtocolError;
use crate::ledger::Quadrature;
use crate::streams::{Role, SlotStreams};

/// Alice's two independent data strings, one per quadrature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliceBits {
    pub plus: Vec<bool>,
    pub minus: Vec<bool>,
}

impl AliceBits {
    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    pub fn bit(&self, slot: usize, quad: Quadrature) -> bool {
        match quad {
            Quadrature::Plus => self.plus[slot],
            Quadrature::Minus => self.minus[slot],
        }
    }
}

/// Alice's bits for one slot, `[plus, minus]`.
pub fn alice_slot_bits(streams: &SlotStreams, slot: u64) -> [bool; 2] {
    let x = streams.rng(Role::AliceBits, slot).next_u64();
    [x >> 63 == 1, (x >> 62) & 1 == 1]
}

pub fn bob_slot_basis(streams: &SlotStreams, slot: u64) -> Quadrature {
    if streams.rng(Role::BobBasis, slot).next_u64() >> 63 == 1 {
        Quadrature::Minus
    } else {
        Quadrature::Plus
    }
}

pub fn alice_encode(n_bits: usize, streams: &SlotStreams) -> Result<AliceBits, ProtocolError> {
    if n_bits == 0 {
        return Err(ProtocolError::NoBits);
    }
    let (plus, minus) = (0..n_bits as u64)
        .map(|i| {
            let [p, m] = alice_slot_bits(streams, i);
            (p, m)
        })
        .unzip();
    Ok(AliceBits { plus, minus })
}

pub fn bob_choose_bases(
    n_bits: usize,
    streams: &SlotStreams,
) -> Result<Vec<Quadrature>, ProtocolError> {
    if n_bits == 0 {
        return Err(ProtocolError::NoBits);
    }
    Ok((0..n_bits as u64)
        .map(|i| bob_slot_basis(streams, i))
        .collect())
}
