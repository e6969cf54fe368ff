use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::distribution::Measure;
use super::{point, Distribution};
use crate::caps::Caps;
use crate::error::{invalid, Error, Result};
use crate::rational::{bigint_of, Rational};

/// A marginal that is not uniform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalViolation {
    /// Coordinates of the marginal (0-based, increasing).
    pub coordinates: Vec<usize>,
    /// Pattern on those coordinates whose mass is not 2^-|S|.
    pub pattern: Vec<i8>,
    pub mass: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KwiseReport {
    pub k: usize,
    pub independent: bool,
    pub violation: Option<MarginalViolation>,
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Visits every k-subset of 0..n in lexicographic order; stops when `f` returns false.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Checks that every marginal on at most `k` coordinates is uniform.
pub fn validate_kwise(d: &Distribution, n: usize, k: usize, caps: &Caps) -> Result<KwiseReport> {
    if !matches!(d, Distribution::Explicit(_)) {
        return Err(Error::InvalidDistribution(
            "k-wise validation takes an explicit support".into(),
        ));
    }
    if k > n {
        return Err(invalid(format!("K = {k} exceeds n = {n}")));
    }
    let work = binomial(n, k).saturating_mul(1u128 << k.min(100));
    if work > caps.work as u128 {
        return Err(Error::WorkCap(format!(
            "C({n},{k}) * 2^{k} = {work} exceeds {}",
            caps.work
        )));
    }
    let measure = Measure::new(d, n)?;
    let support = measure.support();
    let denom = measure.denom();
    for size in 1..=k {
        let target_times = &denom;
        let mut violation = None;
        for_each_subset(n, size, |s| {
            let mut masses = vec![BigUint::default(); 1 << size];
            for (idx, m) in &support {
                let mut pat = 0usize;
                for (j, &c) in s.iter().enumerate() {
                    pat |= ((idx >> c & 1) as usize) << j;
                }
                masses[pat] += m;
            }
            for (pat, m) in masses.iter().enumerate() {
                if &(m << size) != target_times {
                    violation = Some(MarginalViolation {
                        coordinates: s.to_vec(),
                        pattern: point::decode(pat as u64, size),
                        mass: Rational::new(bigint_of(m.clone()), bigint_of(denom.clone())),
                    });
                    return false;
                }
            }
            true
        });
        if violation.is_some() {
            return Ok(KwiseReport {
                k,
                independent: false,
                violation,
            });
        }
    }
    Ok(KwiseReport {
        k,
        independent: true,
        violation: None,
    })
}

/// Uniform distribution on {x : x_1 x_2 ... x_n = 1}; (n-1)-wise independent.
pub fn parity_support(n: usize) -> Result<Distribution> {
    if n == 0 || n > 20 {
        return Err(invalid("parity support needs 1 <= n <= 20"));
    }
    let pts: Vec<Vec<i8>> = (0..1u64 << n)
        .filter(|i| (n as u32 - i.count_ones()).is_multiple_of(2))
        .map(|i| point::decode(i, n))
        .collect();
    let q = Rational::new(One::one(), (pts.len() as u64).into());
    Ok(Distribution::Explicit(pts.into_iter().map(|x| (x, q.clone())).collect()))
}

/// Pairwise-independent support from the rows of a Hadamard matrix:
/// n = 2^s - 1 coordinates indexed by nonzero b, points x_b = (-1)^{a.b} for a in {0,1}^s.
pub fn hadamard_support(s: usize) -> Result<Distribution> {
    if s == 0 || s > 6 {
        return Err(invalid("hadamard support needs 1 <= s <= 6"));
    }
    let n = (1usize << s) - 1;
    let q = Rational::new(One::one(), (1u64 << s).into());
    let pts = (0..1u64 << s)
        .map(|a| {
            let x: Vec<i8> = (1..=n as u64)
                .map(|b| if (a & b).count_ones() % 2 == 0 { 1 } else { -1 })
                .collect();
            (x, q.clone())
        })
        .collect();
    Ok(Distribution::Explicit(pts))
}
