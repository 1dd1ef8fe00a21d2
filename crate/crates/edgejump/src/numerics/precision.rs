use rug::Float;
use serde::{Deserialize, Serialize};

use crate::numerics::BigComplex;

/// Mantissa precision shared by every big-float value built under it.
///
/// Rounding is always to nearest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionCtx {
    bits: u32,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("precision must be at least 64 bits, got {0}")]
pub struct PrecisionTooLow(pub u32);

impl PrecisionCtx {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self, PrecisionTooLow> {
        if bits < Self::MIN_BITS {
            return Err(PrecisionTooLow(bits));
        }
        Ok(Self { bits })
    }

    /// Default precision for Hankel work with matrices of size `n`.
    pub fn for_hankel(n: usize) -> Self {
        let bits = (64 + 12 * n as u64).max(192).min(u32::MAX as u64) as u32;
        Self { bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn doubled(&self) -> Self {
        Self { bits: self.bits.saturating_mul(2) }
    }

    pub fn with_extra(&self, extra: u32) -> Self {
        Self { bits: self.bits.saturating_add(extra) }
    }

    /// Relative unit roundoff, 2^(−bits).
    pub fn epsilon(&self) -> Float {
        Float::with_val(self.bits, 1u32) >> self.bits
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits)
    }

    pub fn real<T>(&self, v: T) -> Float
    where
        Float: rug::Assign<T>,
    {
        Float::with_val(self.bits, v)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits, rug::float::Constant::Pi)
    }

    pub fn complex(&self, re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(re, im, self.bits)
    }
}
