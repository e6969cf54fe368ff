use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::point;
use super::Restriction;
use crate::error::{invalid, Error, Result};
use crate::scaled::words_for;

/// Largest supported table arity.
pub const MAX_TABLE_N: usize = 30;

/// Packed values of f on all 2^n points; bit set means f(x) = +1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> bool) -> Result<Self> {
        let mut t = Self::constant(n, false)?;
        for idx in 0..t.len() {
            if f(idx) {
                t.set(idx, true);
            }
        }
        Ok(t)
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        if n > MAX_TABLE_N {
            return Err(Error::CapExceeded { n, cap: MAX_TABLE_N });
        }
        let mut t = TruthTable {
            n,
            words: vec![if value { u64::MAX } else { 0 }; words_for(n)],
        };
        t.clear_padding();
        Ok(t)
    }

    /// Builds a table from packed words; bits past 2^n must be zero.
    pub fn from_words(n: usize, words: Vec<u64>) -> Result<Self> {
        if n > MAX_TABLE_N {
            return Err(Error::CapExceeded { n, cap: MAX_TABLE_N });
        }
        if words.len() != words_for(n) {
            return Err(invalid(format!(
                "table for n = {n} needs {} words, got {}",
                words_for(n),
                words.len()
            )));
        }
        let t = TruthTable { n, words };
        if n < 6 && t.words[0] >> (1u64 << n) != 0 {
            return Err(invalid("bits set past the end of the table"));
        }
        Ok(t)
    }

    fn clear_padding(&mut self) {
        if self.n < 6 {
            self.words[0] &= point::mask(1 << self.n);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        1u64 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: u64) -> bool {
        self.words[(index >> 6) as usize] >> (index & 63) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: u64, value: bool) {
        let w = &mut self.words[(index >> 6) as usize];
        if value {
            *w |= 1 << (index & 63);
        } else {
            *w &= !(1 << (index & 63));
        }
    }

    /// f(x) as +1 / -1.
    #[inline]
    pub fn value(&self, index: u64) -> i8 {
        if self.get(index) {
            1
        } else {
            -1
        }
    }

    pub fn eval(&self, x: &[i8]) -> Result<i8> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.value(point::encode(x)?))
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Number of points where the two tables differ.
    pub fn disagreements(&self, other: &TruthTable) -> Result<u64> {
        self.check_same(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as u64)
            .sum())
    }

    pub(crate) fn check_same(&self, other: &TruthTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// The table of -f.
    pub fn negated(&self) -> TruthTable {
        let mut t = TruthTable {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        t.clear_padding();
        t
    }

    pub fn is_constant(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.len() => Some(true),
            _ => None,
        }
    }

    /// f(-x) = -f(x) at every point.
    pub fn is_odd(&self) -> bool {
        let n = self.n;
        (0..self.len()).all(|i| self.get(i) != self.get(point::negate(i, n)))
    }

    /// Number of points x with f(x) != f(x with coordinate i flipped).
    pub fn flip_count(&self, i: usize) -> u64 {
        assert!(i < self.n);
        if i >= 6 {
            let stride = 1usize << (i - 6);
            let mut c = 0u64;
            for (w, &word) in self.words.iter().enumerate() {
                if w & stride == 0 {
                    c += (word ^ self.words[w | stride]).count_ones() as u64;
                }
            }
            2 * c
        } else {
            const LOW: [u64; 6] = [
                0x5555_5555_5555_5555,
                0x3333_3333_3333_3333,
                0x0f0f_0f0f_0f0f_0f0f,
                0x00ff_00ff_00ff_00ff,
                0x0000_ffff_0000_ffff,
                0x0000_0000_ffff_ffff,
            ];
            let shift = 1u32 << i;
            let valid = point::mask(1 << self.n.min(6));
            let c: u64 = self
                .words
                .iter()
                .map(|&w| (((w >> shift) ^ w) & LOW[i] & valid).count_ones() as u64)
                .sum();
            2 * c
        }
    }

    pub fn relevant_variables(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.flip_count(i) > 0).collect()
    }

    /// The function of the variables in `keep` (in that order) obtained by
    /// fixing every other variable to -1.
    pub fn project(&self, keep: &[usize]) -> Result<TruthTable> {
        let base = Restriction::new(
            (0..self.n)
                .filter(|i| !keep.contains(i))
                .map(|i| (i, -1))
                .collect::<BTreeMap<_, _>>(),
        );
        let t = self.restrict(&base)?;
        let mut order: Vec<usize> = keep.to_vec();
        order.sort_unstable();
        if order == keep {
            return Ok(t);
        }
        let pos: Vec<usize> = keep
            .iter()
            .map(|k| order.iter().position(|o| o == k).unwrap())
            .collect();
        TruthTable::from_fn(keep.len(), |idx| {
            let mut src = 0u64;
            for (j, &p) in pos.iter().enumerate() {
                src |= (idx >> j & 1) << p;
            }
            t.get(src)
        })
    }

    /// Restriction of f; free variables keep their relative order.
    pub fn restrict(&self, rho: &Restriction) -> Result<TruthTable> {
        rho.check(self.n)?;
        let free: Vec<usize> = (0..self.n).filter(|i| !rho.fixes(*i)).collect();
        let mut base = 0u64;
        for (&i, &v) in rho.fixed() {
            if v == 1 {
                base |= 1 << i;
            }
        }
        TruthTable::from_fn(free.len(), |idx| {
            let mut src = base;
            for (j, &f) in free.iter().enumerate() {
                src |= (idx >> j & 1) << f;
            }
            self.get(src)
        })
    }

    /// Hex string of the packed bits: bit i lives in byte i/8 at position i%8.
    pub fn to_hex(&self) -> String {
        let nbytes = (self.len() as usize).div_ceil(8);
        let mut s = String::with_capacity(2 * nbytes);
        for k in 0..nbytes {
            let b = (self.words[k / 8] >> (8 * (k % 8))) as u8;
            s.push_str(&format!("{b:02x}"));
        }
        s
    }

    pub fn from_hex(n: usize, hex: &str) -> Result<TruthTable> {
        let mut t = Self::constant(n, false)?;
        let nbytes = (t.len() as usize).div_ceil(8);
        let hex = hex.trim();
        if hex.len() != 2 * nbytes {
            return Err(Error::Parse(format!(
                "bits_hex for n = {n} needs {} hex digits, got {}",
                2 * nbytes,
                hex.len()
            )));
        }
        for k in 0..nbytes {
            let b = u8::from_str_radix(&hex[2 * k..2 * k + 2], 16)
                .map_err(|_| Error::Parse(format!("bad hex byte at {k}")))?;
            t.words[k / 8] |= (b as u64) << (8 * (k % 8));
        }
        if n < 3 && t.words[0] >> (1u64 << n) != 0 {
            return Err(Error::Parse("bits set past the end of the table".into()));
        }
        Ok(t)
    }

    /// Points where f = +1, as indices.
    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len()).filter(move |&i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj3() -> TruthTable {
        TruthTable::from_fn(3, |i| i.count_ones() >= 2).unwrap()
    }

    #[test]
    fn hex_round_trip() {
        let t = maj3();
        assert_eq!(t.to_hex(), "e8");
        assert_eq!(TruthTable::from_hex(3, "e8").unwrap(), t);
        let d = TruthTable::from_fn(1, |i| i == 1).unwrap();
        assert_eq!(d.to_hex(), "02");
        assert!(TruthTable::from_hex(1, "0f").is_err());
        let big = TruthTable::from_fn(8, |i| i % 3 == 0).unwrap();
        assert_eq!(TruthTable::from_hex(8, &big.to_hex()).unwrap(), big);
    }

    #[test]
    fn flip_counts_match_naive() {
        for n in 1..=8 {
            let t = TruthTable::from_fn(n, |i| (i.wrapping_mul(2654435761) >> 7) & 1 == 1).unwrap();
            for v in 0..n {
                let naive = (0..t.len())
                    .filter(|&x| t.get(x) != t.get(x ^ (1 << v)))
                    .count() as u64;
                assert_eq!(t.flip_count(v), naive, "n={n} v={v}");
            }
        }
    }

    #[test]
    fn odd_and_constant() {
        assert!(maj3().is_odd());
        assert!(!TruthTable::constant(3, true).unwrap().is_odd());
        assert_eq!(TruthTable::constant(2, true).unwrap().is_constant(), Some(true));
        assert_eq!(maj3().negated().count_ones(), 4);
    }

    #[test]
    fn projection_reorders() {
        // f = x0 AND NOT x2 on three variables; keep (2, 0).
        let t = TruthTable::from_fn(3, |i| i & 1 == 1 && i & 4 == 0).unwrap();
        let p = t.project(&[2, 0]).unwrap();
        // new var 0 is old x2, new var 1 is old x0.
        assert!(p.get(0b10));
        assert!(!p.get(0b11));
        assert!(!p.get(0b01));
    }
}
