//! ODD-MAX-BIT, minimum-weight search and small threshold-function enumeration.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::caps::Caps;
use crate::cube::{Ltf, TruthTable};
use crate::error::{invalid, Error, Result};
use crate::fourier;

/// The definitional table: the output is (-1)^i for the first i (1-based)
/// with x_i = +1, and +1 when there is none.
pub fn omb_table(n: usize, caps: &Caps) -> Result<TruthTable> {
    caps.check_n(n)?;
    TruthTable::from_fn(n, |idx| {
        if idx == 0 {
            true
        } else {
            let first = idx.trailing_zeros() as usize + 1;
            first.is_multiple_of(2)
        }
    })
}

/// Weights (-1)^i 2^(n-i) and threshold (2^n - (-1)^n)/3 - 1.
pub fn omb_witness(n: usize) -> Result<Ltf> {
    if n == 0 || n > 62 {
        return Err(invalid("omb_witness needs 1 <= n <= 62"));
    }
    let weights: Vec<i64> = (1..=n)
        .map(|i| {
            let mag = 1i64 << (n - i);
            if i % 2 == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect();
    let sign_n: i128 = if n.is_multiple_of(2) { 1 } else { -1 };
    let theta = ((1i128 << n) - sign_n) / 3 - 1;
    Ok(Ltf::from_ints(&weights, theta as i64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    /// Least W such that some integer representation has max |w_i| <= W.
    pub weight: u64,
    pub weights: Vec<i64>,
    pub threshold: i64,
}

/// Exhaustive search over integer weight vectors by increasing max weight.
///
/// Weights of ignored variables are fixed to 0 and the others take the sign
/// of their degree-one Fourier coefficient, which loses no representation.
/// Returns None when no W up to `w_max` works.
pub fn min_weight_search(t: &TruthTable, w_max: u64, caps: &Caps) -> Result<Option<MinWeight>> {
    let n = t.n();
    caps.check_n(n)?;
    if let Some(v) = t.is_constant() {
        return Ok(Some(MinWeight {
            weight: 0,
            weights: vec![0; n],
            threshold: if v { 0 } else { 1 },
        }));
    }
    let spectrum = fourier::wht(t, caps)?;
    let chow = spectrum.degree_one();
    let relevant = t.relevant_variables();
    let signs: Vec<i64> = relevant
        .iter()
        .map(|&i| if chow[i] < num_rational::Ratio::from_integer(0.into()) { -1 } else { 1 })
        .collect();
    let r = relevant.len();
    let points = t.len();
    let mut work: u64 = 0;
    let mut mags = vec![1u64; r];
    for w in 1..=w_max {
        // Odometer over [1, w]^r keeping vectors that touch w.
        mags.iter_mut().for_each(|m| *m = 1);
        loop {
            if mags.contains(&w) {
                work = work.saturating_add(points);
                if work > caps.work {
                    return Err(Error::WorkCap(format!("min_weight_search exceeded {} point evaluations", caps.work)));
                }
                let mut full = vec![0i64; n];
                for (k, &i) in relevant.iter().enumerate() {
                    full[i] = signs[k] * mags[k] as i64;
                }
                if let Some(theta) = separating_threshold(t, &full) {
                    return Ok(Some(MinWeight {
                        weight: w,
                        weights: full,
                        threshold: theta,
                    }));
                }
            }
            let mut k = 0;
            while k < r && mags[k] == w {
                mags[k] = 1;
                k += 1;
            }
            if k == r {
                break;
            }
            mags[k] += 1;
        }
    }
    Ok(None)
}

/// An integer theta with t(x) = [w . x >= theta], if one exists.
fn separating_threshold(t: &TruthTable, w: &[i64]) -> Option<i64> {
    let mut max_neg = i64::MIN;
    let mut min_pos = i64::MAX;
    for idx in 0..t.len() {
        let s: i64 = w
            .iter()
            .enumerate()
            .map(|(i, &wi)| if idx >> i & 1 == 1 { wi } else { -wi })
            .sum();
        if t.get(idx) {
            min_pos = min_pos.min(s);
        } else {
            max_neg = max_neg.max(s);
        }
        if max_neg >= min_pos {
            return None;
        }
    }
    Some(min_pos)
}

/// All threshold functions on n <= 5 variables, as distinct tables.
///
/// Integer weights in [-n, n] with every threshold cut suffice for n <= 5.
pub fn enumerate_threshold_functions(n: usize, caps: &Caps) -> Result<Vec<TruthTable>> {
    if n == 0 || n > 5 {
        return Err(invalid("enumeration supports 1 <= n <= 5"));
    }
    let bound = n as i64;
    let side = (2 * bound + 1) as u64;
    let grid = side.pow(n as u32);
    if grid.saturating_mul(1 << n) > caps.work {
        return Err(Error::WorkCap("threshold enumeration grid too large".into()));
    }
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut out = Vec::new();
    let points = 1u64 << n;
    for g in 0..grid {
        let mut rest = g;
        let w: Vec<i64> = (0..n)
            .map(|_| {
                let d = (rest % side) as i64 - bound;
                rest /= side;
                d
            })
            .collect();
        let sums: Vec<i64> = (0..points)
            .map(|idx| {
                w.iter()
                    .enumerate()
                    .map(|(i, &wi)| if idx >> i & 1 == 1 { wi } else { -wi })
                    .sum()
            })
            .collect();
        let mut cuts: Vec<i64> = sums.clone();
        cuts.sort_unstable();
        cuts.dedup();
        cuts.push(cuts[cuts.len() - 1] + 1);
        for theta in cuts {
            let t = TruthTable::from_fn(n, |idx| sums[idx as usize] >= theta)?;
            if seen.insert(t.words().to_vec()) {
                out.push(t);
            }
        }
    }
    out.sort_by(|a, b| a.words().cmp(b.words()));
    Ok(out)
}
