use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::caps::Caps;
use crate::cube::Ltf;
use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};
use crate::scaled::{gray_walk, Int, ScaledForm};

/// max_i w_i^2 / sum_j w_j^2, i.e. the squared regularity of the unit-norm representation.
#[derive(Clone, Debug, PartialEq)]
pub struct Regularity {
    pub tau_sq: Rational,
    pub tau: f64,
}

pub fn regularity(f: &Ltf) -> Result<Regularity> {
    regularity_of(f.weights())
}

pub(crate) fn regularity_of(w: &[Rational]) -> Result<Regularity> {
    let total: Rational = w.iter().map(|v| v * v).sum();
    if total.is_zero() {
        return Err(Error::ZeroWeights);
    }
    let max = w.iter().map(|v| v * v).max().unwrap();
    let tau_sq = max / total;
    let tau = libm::sqrt(rational::to_f64(&tau_sq));
    Ok(Regularity { tau_sq, tau })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarginStats {
    pub tau: Rational,
    /// Points with margin strictly below tau.
    pub below: u64,
    pub total: u64,
    pub fraction_below: Rational,
    /// Smallest squared margin over the cube.
    pub min_margin_sq: Rational,
    pub regularity: Regularity,
    /// The representation is tau-regular.
    pub regular: bool,
    /// fraction_below <= 4 tau.
    pub within_four_tau: bool,
}

/// Exact distribution of margins |w.x - theta| / ||w|| against tau.
pub fn margin_stats(f: &Ltf, tau: &Rational, caps: &Caps) -> Result<MarginStats> {
    caps.check_n(f.n())?;
    if tau.is_negative() {
        return Err(invalid("tau must be nonnegative"));
    }
    let reg = regularity(f)?;
    let (form, _, _) = ScaledForm::from_rationals(f.weights(), &-f.theta().clone(), &[]);
    let norm_sq: BigInt = match &form {
        ScaledForm::Small { coeffs, .. } => coeffs.iter().map(|&c| BigInt::from(c) * c).sum(),
        ScaledForm::Big { coeffs, .. } => coeffs.iter().map(|c| c * c).sum(),
    };
    let bound = tau * tau * Rational::from_integer(norm_sq.clone());
    let cut = rational::isqrt_strict_below(&bound);
    let (below, min_abs) = match &form {
        ScaledForm::Small { coeffs, offset } => {
            let c = if cut.bits() < 126 {
                i128::try_from(&cut).unwrap()
            } else {
                i128::MAX
            };
            count_small(coeffs, offset, &c)
        }
        ScaledForm::Big { coeffs, offset } => count_small(coeffs, offset, &cut),
    };
    let total = 1u64 << f.n();
    let fraction_below = Rational::new(below.into(), total.into());
    let four_tau = tau * rational::int(4);
    Ok(MarginStats {
        tau: tau.clone(),
        below,
        total,
        within_four_tau: fraction_below <= four_tau,
        fraction_below,
        min_margin_sq: Rational::new(&min_abs * &min_abs, norm_sq),
        regular: reg.tau_sq <= tau * tau,
        regularity: reg,
    })
}

fn count_small<T: Int + Into<BigInt>>(coeffs: &[T], offset: &T, cut: &T) -> (u64, BigInt) {
    let mut below = 0u64;
    let mut min: Option<T> = None;
    gray_walk(coeffs, offset, |_, v| {
        let a = v.abs();
        if &a <= cut {
            below += 1;
        }
        if min.as_ref().is_none_or(|m| &a < m) {
            min = Some(a);
        }
    });
    (below, min.unwrap().into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalIndex {
    /// 1-based position in the sorted order.
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalIndexReport {
    pub tau: Rational,
    pub index: CriticalIndex,
    /// Original variable indices sorted by |w| descending, ties by index.
    pub order: Vec<usize>,
    /// Squared sorted weights.
    pub sorted_sq: Vec<Rational>,
    /// sigma_i^2 = sum over j >= i of sorted w_j^2.
    pub tail_sq: Vec<Rational>,
}

/// Indices sorted by |w| descending with index order breaking ties.
pub(crate) fn magnitude_order(w: &[Rational]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..w.len()).collect();
    order.sort_by(|&a, &b| w[b].abs().cmp(&w[a].abs()).then(a.cmp(&b)));
    order
}

/// Smallest i with |w_i| <= tau * sigma_i on the magnitude-sorted weights.
pub fn critical_index(f: &Ltf, tau: &Rational) -> Result<CriticalIndexReport> {
    critical_index_of(f.weights(), tau)
}

pub(crate) fn critical_index_of(w: &[Rational], tau: &Rational) -> Result<CriticalIndexReport> {
    if w.iter().all(Zero::is_zero) {
        return Err(Error::ZeroWeights);
    }
    if tau.is_negative() {
        return Err(invalid("tau must be nonnegative"));
    }
    let order = magnitude_order(w);
    let sorted_sq: Vec<Rational> = order.iter().map(|&i| &w[i] * &w[i]).collect();
    let mut tail_sq = alloc::vec![Rational::zero(); w.len()];
    let mut acc = Rational::zero();
    for i in (0..w.len()).rev() {
        acc += &sorted_sq[i];
        tail_sq[i] = acc.clone();
    }
    let tau_sq = tau * tau;
    let index = (0..w.len())
        .find(|&i| sorted_sq[i] <= &tau_sq * &tail_sq[i])
        .map_or(CriticalIndex::Infinite, |i| CriticalIndex::Finite(i + 1));
    Ok(CriticalIndexReport {
        tau: tau.clone(),
        index,
        order,
        sorted_sq,
        tail_sq,
    })
}
