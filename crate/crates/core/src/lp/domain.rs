//! Finite product domains closed under negation.
//!
//! A coordinate is either a sign in {-1, 1} or an integer in [-R, R].
//! Points are indexed in mixed radix with coordinate 0 varying fastest, so a
//! domain made only of sign coordinates uses the same encoding as the cube.

use alloc::vec;
use alloc::vec::Vec;

use crate::caps::Caps;
use crate::cube::TruthTable;
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    Sign,
    /// Integers in [-R, R].
    Range(i64),
}

impl Coord {
    pub fn radix(self) -> u64 {
        match self {
            Coord::Sign => 2,
            Coord::Range(r) => 2 * r as u64 + 1,
        }
    }

    fn value(self, digit: u64) -> i64 {
        match self {
            Coord::Sign => 2 * digit as i64 - 1,
            Coord::Range(r) => digit as i64 - r,
        }
    }

    fn digit(self, value: i64) -> Option<u64> {
        match self {
            Coord::Sign if value == 1 || value == -1 => Some(((value + 1) / 2) as u64),
            Coord::Range(r) if value.abs() <= r => Some((value + r) as u64),
            _ => None,
        }
    }

    pub fn max_abs(self) -> i64 {
        match self {
            Coord::Sign => 1,
            Coord::Range(r) => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricDomain {
    coords: Vec<Coord>,
    strides: Vec<u64>,
    size: u64,
}

impl SymmetricDomain {
    pub fn new(coords: Vec<Coord>, caps: &Caps) -> Result<Self> {
        let mut strides = Vec::with_capacity(coords.len());
        let mut size: u64 = 1;
        for c in &coords {
            if let Coord::Range(r) = c {
                if *r < 0 || *r > (1 << 20) {
                    return Err(invalid("range coordinate must lie in [0, 2^20]"));
                }
            }
            strides.push(size);
            size = size
                .checked_mul(c.radix())
                .filter(|s| *s <= caps.work.min(1 << 40))
                .ok_or_else(|| Error::WorkCap(alloc::format!("domain with {} coordinates is too large", coords.len())))?;
        }
        Ok(SymmetricDomain { coords, strides, size })
    }

    pub fn cube(n: usize, caps: &Caps) -> Result<Self> {
        caps.check_n(n)?;
        Self::new(vec![Coord::Sign; n], caps)
    }

    /// k - 1 sign coordinates followed by one integer coordinate in [-R, R].
    pub fn extended(k: usize, r: i64, caps: &Caps) -> Result<Self> {
        if k == 0 {
            return Err(invalid("extended domain needs k >= 1"));
        }
        let mut c = vec![Coord::Sign; k - 1];
        c.push(Coord::Range(r));
        Self::new(c, caps)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_cube(&self) -> bool {
        self.coords.iter().all(|c| *c == Coord::Sign)
    }

    pub fn coordinate(&self, index: u64, c: usize) -> i64 {
        let d = (index / self.strides[c]) % self.coords[c].radix();
        self.coords[c].value(d)
    }

    pub fn decode(&self, index: u64) -> Vec<i64> {
        (0..self.dim()).map(|c| self.coordinate(index, c)).collect()
    }

    pub fn encode(&self, point: &[i64]) -> Result<u64> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: point.len(),
            });
        }
        let mut idx = 0;
        for (c, (&v, coord)) in point.iter().zip(&self.coords).enumerate() {
            let d = coord.digit(v).ok_or_else(|| invalid("point outside the domain"))?;
            idx += d * self.strides[c];
        }
        Ok(idx)
    }

    /// Index of -y. Every digit d maps to radix - 1 - d.
    pub fn negate(&self, index: u64) -> u64 {
        self.size - 1 - index
    }

    /// Index of y with coordinate c replaced by the next larger value, if any.
    fn step(&self, index: u64, c: usize) -> Option<u64> {
        let d = (index / self.strides[c]) % self.coords[c].radix();
        (d + 1 < self.coords[c].radix()).then(|| index + self.strides[c])
    }
}

/// A Boolean-valued function on a symmetric domain; true means +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainFunction {
    domain: SymmetricDomain,
    values: Vec<bool>,
}

impl DomainFunction {
    pub fn from_fn(domain: SymmetricDomain, mut f: impl FnMut(&[i64]) -> bool) -> Self {
        let mut point = vec![0i64; domain.dim()];
        let values = (0..domain.size())
            .map(|i| {
                for (c, p) in point.iter_mut().enumerate() {
                    *p = domain.coordinate(i, c);
                }
                f(&point)
            })
            .collect();
        DomainFunction { domain, values }
    }

    pub fn from_table(t: &TruthTable, caps: &Caps) -> Result<Self> {
        let domain = SymmetricDomain::cube(t.n(), caps)?;
        let values = (0..t.len()).map(|i| t.get(i)).collect();
        Ok(DomainFunction { domain, values })
    }

    pub fn domain(&self) -> &SymmetricDomain {
        &self.domain
    }

    pub fn get(&self, index: u64) -> bool {
        self.values[index as usize]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn eval(&self, point: &[i64]) -> Result<i8> {
        let i = self.domain.encode(point)?;
        Ok(if self.get(i) { 1 } else { -1 })
    }

    /// h(-y) = -h(y) everywhere.
    pub fn is_odd(&self) -> bool {
        (0..self.domain.size()).all(|i| self.get(i) != self.get(self.domain.negate(i)))
    }

    pub fn is_relevant(&self, c: usize) -> bool {
        (0..self.domain.size()).any(|i| match self.domain.step(i, c) {
            Some(j) => self.get(i) != self.get(j),
            None => false,
        })
    }

    pub fn relevant_coords(&self) -> Vec<usize> {
        (0..self.domain.dim()).filter(|&c| self.is_relevant(c)).collect()
    }

    /// Restriction to the listed coordinates, in that order. The others are
    /// fixed at their smallest value, which is harmless when they are irrelevant.
    pub fn project(&self, keep: &[usize], caps: &Caps) -> Result<DomainFunction> {
        let coords: Vec<Coord> = keep.iter().map(|&c| self.domain.coords[c]).collect();
        let domain = SymmetricDomain::new(coords, caps)?;
        let values = (0..domain.size())
            .map(|i| {
                let idx: u64 = keep
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| ((i / domain.strides[k]) % domain.coords[k].radix()) * self.domain.strides[c])
                    .sum();
                self.get(idx)
            })
            .collect();
        Ok(DomainFunction { domain, values })
    }

    /// The odd function g(y, s) = s * h(s y) with the new sign coordinate last.
    pub fn lift(&self, caps: &Caps) -> Result<DomainFunction> {
        let mut coords = self.domain.coords.clone();
        coords.push(Coord::Sign);
        let domain = SymmetricDomain::new(coords, caps)?;
        let half = self.domain.size();
        let values = (0..domain.size())
            .map(|i| {
                if i >= half {
                    self.get(i - half)
                } else {
                    !self.get(self.domain.negate(i))
                }
            })
            .collect();
        Ok(DomainFunction { domain, values })
    }

    /// Sum over the domain of h(y) * y_c.
    pub fn correlation(&self, c: usize) -> i128 {
        (0..self.domain.size())
            .map(|i| {
                let v = self.domain.coordinate(i, c) as i128;
                if self.get(i) {
                    v
                } else {
                    -v
                }
            })
            .sum()
    }

    /// Number of points whose value changes when coordinate c is negated.
    pub fn flip_count(&self, c: usize) -> u64 {
        (0..self.domain.size())
            .filter(|&i| {
                let v = self.domain.coordinate(i, c);
                let digit_now = (i / self.domain.strides[c]) % self.domain.coords[c].radix();
                let mirror = self.domain.coords[c].radix() - 1 - digit_now;
                let j = i - digit_now * self.domain.strides[c] + mirror * self.domain.strides[c];
                v != 0 && self.get(i) != self.get(j)
            })
            .count() as u64
    }
}
