//! Rational linear forms scaled to a common integer denominator, with an
//! `i128` fast path when every partial sum provably fits.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::rational::{self, Rational};

pub(crate) trait Int:
    Clone + Ord + Signed + Integer + AddAssign + SubAssign + From<i64> + core::fmt::Debug
{
}
impl Int for i128 {}
impl Int for BigInt {}

const SMALL_LIMIT_BITS: u64 = 124;

/// `value(x) = sum_i coeffs[i] * x_i + offset` over integers.
#[derive(Debug, Clone)]
pub(crate) enum ScaledForm {
    Small { coeffs: Vec<i128>, offset: i128 },
    Big { coeffs: Vec<BigInt>, offset: BigInt },
}

impl ScaledForm {
    pub fn new(coeffs: Vec<BigInt>, offset: BigInt) -> Self {
        let total: BigInt = coeffs.iter().map(|c| c.abs()).sum::<BigInt>() + offset.abs();
        if total.bits() < SMALL_LIMIT_BITS {
            ScaledForm::Small {
                coeffs: coeffs.iter().map(|c| c.to_i128().unwrap()).collect(),
                offset: offset.to_i128().unwrap(),
            }
        } else {
            ScaledForm::Big { coeffs, offset }
        }
    }

    /// Scales `coeffs` and `offset` (and any `extra` values sharing the scale) to integers.
    /// Returns the form, the scaled extras, and the common scale.
    pub fn from_rationals(
        coeffs: &[Rational],
        offset: &Rational,
        extra: &[&Rational],
    ) -> (Self, Vec<BigInt>, BigInt) {
        let all: Vec<&Rational> = coeffs
            .iter()
            .chain(core::iter::once(offset))
            .chain(extra.iter().copied())
            .collect();
        let (ints, scale) = rational::common_integers(all.iter().copied());
        let n = coeffs.len();
        let c = ints[..n].to_vec();
        let o = ints[n].clone();
        let ex = ints[n + 1..].to_vec();
        (ScaledForm::new(c, o), ex, scale)
    }

    pub fn len(&self) -> usize {
        match self {
            ScaledForm::Small { coeffs, .. } => coeffs.len(),
            ScaledForm::Big { coeffs, .. } => coeffs.len(),
        }
    }

    /// True iff `value(point(index)) >= 0`.
    pub fn nonneg_at(&self, index: u64) -> bool {
        match self {
            ScaledForm::Small { coeffs, offset } => !value_at(coeffs, offset, index).is_negative(),
            ScaledForm::Big { coeffs, offset } => !value_at(coeffs, offset, index).is_negative(),
        }
    }

    pub fn value_big(&self, index: u64) -> BigInt {
        match self {
            ScaledForm::Small { coeffs, offset } => BigInt::from(value_at(coeffs, offset, index)),
            ScaledForm::Big { coeffs, offset } => value_at(coeffs, offset, index),
        }
    }

    /// Packed sign table: bit `index` set iff `value >= 0`.
    pub fn sign_words(&self) -> Vec<u64> {
        let n = self.len();
        let mut words = vec![0u64; words_for(n)];
        let mut set = |idx: u64, neg: bool| {
            if !neg {
                words[(idx >> 6) as usize] |= 1u64 << (idx & 63);
            }
        };
        match self {
            ScaledForm::Small { coeffs, offset } => {
                gray_walk(coeffs, offset, |i, v| set(i, v.is_negative()))
            }
            ScaledForm::Big { coeffs, offset } => {
                gray_walk(coeffs, offset, |i, v| set(i, v.is_negative()))
            }
        }
        words
    }
}

pub(crate) fn words_for(n: usize) -> usize {
    if n >= 6 {
        1usize << (n - 6)
    } else {
        1
    }
}

/// Value of the form at the point encoded by `index` (bit i set means x_i = +1).
pub(crate) fn value_at<T: Int>(coeffs: &[T], offset: &T, index: u64) -> T {
    let mut s = offset.clone();
    for (i, c) in coeffs.iter().enumerate() {
        if index >> i & 1 == 1 {
            s += c.clone();
        } else {
            s -= c.clone();
        }
    }
    s
}

/// Visits every point of the cube in Gray-code order with the running value of the form.
pub(crate) fn gray_walk<T: Int>(coeffs: &[T], offset: &T, mut visit: impl FnMut(u64, &T)) {
    let n = coeffs.len();
    let doubled: Vec<T> = coeffs.iter().map(|c| c.clone() + c.clone()).collect();
    let mut s = offset.clone();
    for c in coeffs {
        s -= c.clone();
    }
    let mut idx: u64 = 0;
    visit(idx, &s);
    let total: u64 = 1u64 << n;
    for step in 1..total {
        let j = step.trailing_zeros() as usize;
        idx ^= 1u64 << j;
        if idx >> j & 1 == 1 {
            s += doubled[j].clone();
        } else {
            s -= doubled[j].clone();
        }
        visit(idx, &s);
    }
}
