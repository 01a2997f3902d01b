//! Party secrets and the pre-shared key material.

use rand::Rng;

use crate::error::ProtocolError;

/// A party's private bit string, least-significant bit first: bit `j`
/// of the integer value lives at index `j`, and round `i` compares index
/// `i − 1`. Both parties must use the same convention, and do.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Secret {
    bits: Vec<u8>,
}

impl Secret {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self, ProtocolError> {
        if bits.is_empty() {
            return Err(ProtocolError::EmptySecret);
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(ProtocolError::InvalidSecretBit);
        }
        Ok(Secret { bits })
    }

    /// Parse a bit string such as "0110", least-significant bit first.
    pub fn from_bit_str(text: &str) -> Result<Self, ProtocolError> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(ProtocolError::InvalidSecretBit),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Secret::from_bits(bits)
    }

    pub fn random(len: usize, rng: &mut impl Rng) -> Result<Self, ProtocolError> {
        if len == 0 {
            return Err(ProtocolError::EmptySecret);
        }
        Ok(Secret {
            bits: (0..len).map(|_| rng.random_range(0..=1)).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at 0-based index `j`.
    pub fn bit(&self, j: usize) -> u8 {
        self.bits[j]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn flip_bit(&mut self, j: usize) {
        self.bits[j] ^= 1;
    }

    pub fn to_bit_str(&self) -> String {
        self.bits.iter().map(|b| (b'0' + b) as char).collect()
    }
}

/// The two key sequences Alice and Bob share ahead of time. Both users hold
/// both sequences; the trusted party never sees either, and nothing in the
/// engine hands a `KeyPair` to TP-side code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyPair {
    key_a: Vec<u8>,
    key_b: Vec<u8>,
}

impl KeyPair {
    pub fn new(key_a: Vec<u8>, key_b: Vec<u8>) -> Result<Self, ProtocolError> {
        if key_a.is_empty() || key_b.is_empty() {
            return Err(ProtocolError::EmptySecret);
        }
        if key_a.len() != key_b.len() {
            return Err(ProtocolError::SecretLengthMismatch {
                left: key_a.len(),
                right: key_b.len(),
            });
        }
        Ok(KeyPair { key_a, key_b })
    }

    pub fn len(&self) -> usize {
        self.key_a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.key_a.is_empty()
    }

    pub fn key_a(&self, j: usize) -> u8 {
        self.key_a[j]
    }

    pub fn key_b(&self, j: usize) -> u8 {
        self.key_b[j]
    }
}

/// Idealized stand-in for the key agreement the users run beforehand:
/// two independent uniform bit strings of the given length.
pub fn simulate_qkd_keys(len: usize, rng: &mut impl Rng) -> Result<KeyPair, ProtocolError> {
    if len == 0 {
        return Err(ProtocolError::EmptySecret);
    }
    let key_a = (0..len).map(|_| rng.random_range(0..=1)).collect();
    let key_b = (0..len).map(|_| rng.random_range(0..=1)).collect();
    KeyPair::new(key_a, key_b)
}
