//! Lévy anti-concentration p_r(a, D) = sup_v Pr_{x ~ D}[|a.x - v| <= r] and
//! checks of the classical bounds built on it.

mod checks;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::caps::Caps;
use crate::cube::{Distribution, Mass, MassTable, Measure, PointSampler};
use crate::error::{invalid, Error, Result};
use crate::rational::{bigint_of, Rational};
use crate::scaled::{gray_walk, value_at, Int, ScaledForm};

pub use checks::{
    erdos_check, extension_check, gaussian_band, halasz_probe, kwise_transfer_check, normal_cdf,
    ErdosCheck, ExtensionCheck, GaussianBand, HalaszRow, KwiseTransfer, BERRY_ESSEEN_C,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevyMode {
    Exact,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levy {
    /// Maximum mass of a closed window of radius r.
    pub p: Rational,
    /// A center v attaining it (midpoint of the optimal window).
    pub center: Rational,
    pub exact: bool,
}

/// One row per radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub r: Rational,
    pub p: Rational,
    pub center: Rational,
}

pub fn levy(a: &[Rational], r: &Rational, d: &Distribution, mode: LevyMode, caps: &Caps) -> Result<Levy> {
    if r.is_negative() {
        return Err(invalid("radius must be nonnegative"));
    }
    let n = a.len();
    d.validate(n)?;
    let (form, extra, scale) = ScaledForm::from_rationals(a, &Rational::zero(), &[r]);
    let width = &extra[0] * 2;
    let (best_num, best_den, left) = match mode {
        LevyMode::Exact => {
            let measure = Measure::new(d, n)?;
            if !measure.is_explicit() {
                caps.check_n(n)?;
            }
            match (&form, &measure) {
                (ScaledForm::Small { coeffs, .. }, Measure::Small(t)) => {
                    exact_window(coeffs, t, &i128::try_from(&width).unwrap_or(i128::MAX))
                }
                (ScaledForm::Small { coeffs, .. }, Measure::Big(t)) => {
                    exact_window(coeffs, t, &i128::try_from(&width).unwrap_or(i128::MAX))
                }
                (ScaledForm::Big { coeffs, .. }, Measure::Small(t)) => exact_window(coeffs, t, &width),
                (ScaledForm::Big { coeffs, .. }, Measure::Big(t)) => exact_window(coeffs, t, &width),
            }
        }
        LevyMode::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(invalid("sample count must be positive"));
            }
            let sampler = PointSampler::new(d, n)?;
            let mut rng = crate::rng::seeded(seed);
            let mut vals: Vec<BigInt> = (0..samples)
                .map(|_| form.value_big(sampler.sample(&mut rng)))
                .collect();
            vals.sort();
            let (count, left) = sorted_window(&vals, &width);
            (BigInt::from(count), BigInt::from(samples), left)
        }
    };
    let center = Rational::new(left, scale) + r;
    Ok(Levy {
        p: Rational::new(best_num, best_den),
        center,
        exact: matches!(mode, LevyMode::Exact),
    })
}

/// Best window over sorted sample values: (count, left edge).
fn sorted_window(vals: &[BigInt], width: &BigInt) -> (u64, BigInt) {
    let mut best = (0u64, vals[0].clone());
    let mut hi = 0;
    for lo in 0..vals.len() {
        if lo > 0 && vals[lo] == vals[lo - 1] {
            continue;
        }
        let edge = &vals[lo] + width;
        while hi < vals.len() && vals[hi] <= edge {
            hi += 1;
        }
        let c = (hi - lo) as u64;
        if c > best.0 {
            best = (c, vals[lo].clone());
        }
    }
    best
}

fn exact_window<T: Int + Into<BigInt>, M: Mass>(
    coeffs: &[T],
    table: &MassTable<M>,
    width: &T,
) -> (BigInt, BigInt, BigInt) {
    let mut pts: Vec<(T, M)> = Vec::new();
    let zero = T::zero();
    if matches!(table.kind, crate::cube::MassKind::Explicit(_)) {
        table.for_each(|idx, m| pts.push((value_at(coeffs, &zero, idx), m.clone())));
    } else {
        pts.reserve(1usize << table.n);
        gray_walk(coeffs, &zero, |idx, v| pts.push((v.clone(), table.mass(idx))));
    }
    pts.sort_by(|x, y| x.0.cmp(&y.0));
    // Merge equal values.
    let mut merged: Vec<(T, M)> = Vec::with_capacity(pts.len());
    for (v, m) in pts {
        match merged.last_mut() {
            Some((lv, lm)) if *lv == v => *lm += m,
            _ => merged.push((v, m)),
        }
    }
    let mut best = M::zero();
    let mut best_left = merged[0].0.clone();
    let mut hi = 0;
    let mut acc = M::zero();
    let mut prefix: Vec<M> = Vec::with_capacity(merged.len() + 1);
    prefix.push(M::zero());
    for (_, m) in &merged {
        acc += m.clone();
        prefix.push(acc.clone());
    }
    for lo in 0..merged.len() {
        let edge = merged[lo].0.clone() + width.clone();
        if hi < lo {
            hi = lo;
        }
        while hi < merged.len() && merged[hi].0 <= edge {
            hi += 1;
        }
        let mass = prefix[hi].clone() - prefix[lo].clone();
        if mass > best {
            best = mass;
            best_left = merged[lo].0.clone();
        }
    }
    (
        bigint_of(best.to_big()),
        bigint_of(table.denom.to_big()),
        best_left.into(),
    )
}

pub fn profile(a: &[Rational], radii: &[Rational], d: &Distribution, caps: &Caps) -> Result<Vec<ProfileRow>> {
    let mut out = Vec::with_capacity(radii.len());
    for r in radii {
        let l = levy(a, r, d, LevyMode::Exact, caps)?;
        out.push(ProfileRow {
            r: r.clone(),
            p: l.p,
            center: l.center,
        });
    }
    Ok(out)
}

/// Mass of the closed window |a.x - v| <= r, computed directly.
pub fn window_probability(a: &[Rational], v: &Rational, r: &Rational, d: &Distribution, caps: &Caps) -> Result<Rational> {
    let n = a.len();
    let measure = Measure::new(d, n)?;
    if !measure.is_explicit() {
        caps.check_n(n)?;
    }
    let (form, extra, _) = ScaledForm::from_rationals(a, &Rational::zero(), &[v, r]);
    let (lo, hi) = (&extra[0] - &extra[1], &extra[0] + &extra[1]);
    Ok(measure.probability_where(|i| {
        let s = form.value_big(i);
        s >= lo && s <= hi
    }))
}

pub(crate) fn require_exact_feasible(n: usize, d: &Distribution, caps: &Caps) -> Result<()> {
    if !matches!(d, Distribution::Explicit(_)) && n > caps.enum_n {
        return Err(Error::CapExceeded { n, cap: caps.enum_n });
    }
    Ok(())
}
