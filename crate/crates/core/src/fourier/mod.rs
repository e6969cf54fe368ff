//! Walsh–Hadamard spectra, influences, regularity, margins and the critical index.

pub(crate) mod regularity;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::caps::Caps;
use crate::cube::TruthTable;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use regularity::{
    critical_index, margin_stats, regularity, CriticalIndex, CriticalIndexReport, MarginStats,
    Regularity,
};

/// In-place unnormalized Walsh–Hadamard butterfly.
pub fn wht_in_place(values: &mut [i64]) {
    let len = values.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in values.chunks_mut(2 * h) {
            let (a, b) = block.split_at_mut(h);
            for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                let (u, v) = (*x, *y);
                *x = u + v;
                *y = u - v;
            }
        }
        h *= 2;
    }
}

// The butterfly uses (-1)^{|x & S|}; with bit 1 meaning +1 the character is
// chi_S(x) = (-1)^{|S|} (-1)^{|x & S|}.
fn flip_odd_masks(v: &mut [i64]) {
    for (mask, x) in v.iter_mut().enumerate() {
        if mask.count_ones() % 2 == 1 {
            *x = -*x;
        }
    }
}

/// Dense Fourier spectrum stored as integers c_S = 2^n f^(S).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    n: usize,
    scaled: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumStats {
    pub total_influence: Rational,
    pub degree: usize,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    /// 2^n f^(S) for every mask S.
    pub fn scaled(&self) -> &[i64] {
        &self.scaled
    }

    pub fn coeff(&self, mask: u64) -> Rational {
        Rational::new(self.scaled[mask as usize].into(), BigInt::from(1u64) << self.n)
    }

    /// f^({i}) for each variable.
    pub fn degree_one(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.coeff(1 << i)).collect()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(0)
    }

    /// Sum over S of f^(S)^2 (equals 1 for Boolean functions).
    pub fn sum_of_squares(&self) -> Rational {
        let s: i128 = self.scaled.iter().map(|&c| (c as i128) * (c as i128)).sum();
        Rational::new(s.into(), BigInt::from(1u64) << (2 * self.n))
    }

    pub fn stats(&self) -> SpectrumStats {
        let mut total: i128 = 0;
        let mut degree = 0;
        for (mask, &c) in self.scaled.iter().enumerate() {
            if c != 0 {
                let size = (mask as u64).count_ones() as usize;
                total += size as i128 * (c as i128) * (c as i128);
                degree = degree.max(size);
            }
        }
        SpectrumStats {
            total_influence: Rational::new(total.into(), BigInt::from(1u64) << (2 * self.n)),
            degree,
        }
    }

    /// sum over S containing i of f^(S)^2, per variable.
    pub fn spectral_influences(&self) -> Vec<Rational> {
        let mut acc = alloc::vec![0i128; self.n];
        for (mask, &c) in self.scaled.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sq = (c as i128) * (c as i128);
            for (i, a) in acc.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    *a += sq;
                }
            }
        }
        acc.into_iter()
            .map(|v| Rational::new(v.into(), BigInt::from(1u64) << (2 * self.n)))
            .collect()
    }

    /// Inverse transform back to a truth table.
    pub fn to_table(&self) -> Result<TruthTable> {
        let mut v = self.scaled.clone();
        flip_odd_masks(&mut v);
        wht_in_place(&mut v);
        let scale = 1i64 << self.n;
        let mut t = TruthTable::constant(self.n, false)?;
        for (i, &x) in v.iter().enumerate() {
            match x / scale {
                1 if x % scale == 0 => t.set(i as u64, true),
                -1 if x % scale == 0 => {}
                _ => return Err(Error::Internal("spectrum is not Boolean".into())),
            }
        }
        Ok(t)
    }
}

/// Exact Fourier transform of a truth table.
pub fn wht(t: &TruthTable, caps: &Caps) -> Result<Spectrum> {
    caps.check_n(t.n())?;
    let mut v: Vec<i64> = (0..t.len()).map(|i| t.value(i) as i64).collect();
    wht_in_place(&mut v);
    flip_odd_masks(&mut v);
    Ok(Spectrum { n: t.n(), scaled: v })
}

/// Influences by flip counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfluenceProfile {
    n: usize,
    flips: Vec<u64>,
}

impl InfluenceProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of points x with f(x) != f(x with bit i flipped).
    pub fn flip_counts(&self) -> &[u64] {
        &self.flips
    }

    pub fn influence(&self, i: usize) -> Rational {
        Rational::new(self.flips[i].into(), BigInt::from(1u64) << self.n)
    }

    pub fn all(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.influence(i)).collect()
    }

    pub fn total(&self) -> Rational {
        let s: u128 = self.flips.iter().map(|&c| c as u128).sum();
        Rational::new(s.into(), BigInt::from(1u64) << self.n)
    }

    /// Cross-check against the spectral formula; a mismatch is an internal error.
    pub fn check_against(&self, s: &Spectrum) -> Result<()> {
        if s.n() != self.n || s.spectral_influences() != self.all() {
            return Err(Error::Internal(
                "flip-count influences disagree with the spectrum".into(),
            ));
        }
        Ok(())
    }
}

pub fn influences(t: &TruthTable, caps: &Caps) -> Result<InfluenceProfile> {
    caps.check_n(t.n())?;
    Ok(InfluenceProfile {
        n: t.n(),
        flips: (0..t.n()).map(|i| t.flip_count(i)).collect(),
    })
}

/// Influences computed both ways and cross-checked.
pub fn influences_checked(t: &TruthTable, caps: &Caps) -> Result<(InfluenceProfile, Spectrum)> {
    let p = influences(t, caps)?;
    let s = wht(t, caps)?;
    p.check_against(&s)?;
    Ok((p, s))
}

/// Pointwise correlation E[f g] computed from two tables.
pub fn correlation(f: &TruthTable, g: &TruthTable) -> Result<Rational> {
    let d = f.disagreements(g)?;
    let agree = f.len() - d;
    Ok(Rational::new(
        (agree as i128 - d as i128).into(),
        BigInt::from(f.len()),
    ))
}

/// Sum over S of f^(S) g^(S).
pub fn spectral_inner(a: &Spectrum, b: &Spectrum) -> Rational {
    let s: i128 = a
        .scaled
        .iter()
        .zip(&b.scaled)
        .map(|(&x, &y)| x as i128 * y as i128)
        .sum();
    if s.is_zero() {
        return Rational::zero();
    }
    Rational::new(s.into(), BigInt::from(1u64) << (2 * a.n))
}
