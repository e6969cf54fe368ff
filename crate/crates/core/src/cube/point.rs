//! Point encoding: bit i of an index is coordinate x_i, with 1 for +1 and 0 for -1.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

pub fn encode(x: &[i8]) -> Result<u64> {
    if x.len() > 63 {
        return Err(invalid("points with more than 63 coordinates cannot be indexed"));
    }
    let mut idx = 0u64;
    for (i, &v) in x.iter().enumerate() {
        match v {
            1 => idx |= 1 << i,
            -1 => {}
            _ => return Err(invalid("coordinates must be +1 or -1")),
        }
    }
    Ok(idx)
}

pub fn decode(index: u64, n: usize) -> Vec<i8> {
    (0..n).map(|i| coordinate(index, i)).collect()
}

#[inline]
pub fn coordinate(index: u64, i: usize) -> i8 {
    if index >> i & 1 == 1 {
        1
    } else {
        -1
    }
}

/// Index of the antipodal point -x.
#[inline]
pub fn negate(index: u64, n: usize) -> u64 {
    !index & mask(n)
}

#[inline]
pub fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_exhaustive() {
        for n in 0..=10 {
            for idx in 0..(1u64 << n) {
                let x = decode(idx, n);
                assert_eq!(encode(&x).unwrap(), idx);
            }
        }
    }

    #[test]
    fn rejects_bad_coordinates() {
        assert!(encode(&[1, 0]).is_err());
    }

    #[test]
    fn antipode() {
        assert_eq!(negate(0b101, 3), 0b010);
        assert_eq!(decode(negate(5, 4), 4), decode(5, 4).iter().map(|v| -v).collect::<Vec<_>>());
    }
}
