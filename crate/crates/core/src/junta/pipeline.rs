//! Junta approximation of LTFs: best junta on the head, or head plus a
//! sampled linear form on the regular tail, whichever measures closer.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use rand::RngCore;

use super::sampler::{default_draws, sample_linear_form};
use super::split::{default_cutoff, split_with_chow, HeadTailSplit, SQRT_BITS};
use crate::caps::Caps;
use crate::cube::{distance, DistanceMode, DistanceReport, Distribution, Function, Ltf, TruthTable};
use crate::error::{invalid, Error, Result};
use crate::fourier;
use crate::rational::{self, Rational};

/// The sign of the conditional mean of f on each assignment to `set` (ties
/// give +1), with its exact uniform distance to f.
pub fn best_junta_on_set(t: &TruthTable, set: &[usize], caps: &Caps) -> Result<(TruthTable, Rational)> {
    let n = t.n();
    if set.iter().any(|&i| i >= n) {
        return Err(invalid("junta coordinate out of range"));
    }
    if set.len() > caps.enum_n {
        return Err(Error::CapExceeded {
            n: set.len(),
            cap: caps.enum_n,
        });
    }
    let pattern = |idx: u64| -> usize {
        set.iter()
            .enumerate()
            .map(|(k, &i)| ((idx >> i & 1) as usize) << k)
            .sum()
    };
    let mut ones = vec![0u64; 1 << set.len()];
    let mut total = vec![0u64; 1 << set.len()];
    for idx in 0..t.len() {
        let p = pattern(idx);
        total[p] += 1;
        if t.get(idx) {
            ones[p] += 1;
        }
    }
    let choice: Vec<bool> = ones.iter().zip(&total).map(|(o, t)| 2 * o >= *t).collect();
    let bad: u64 = choice
        .iter()
        .zip(ones.iter().zip(&total))
        .map(|(&c, (o, t))| if c { t - o } else { *o })
        .sum();
    let g = TruthTable::from_fn(n, |idx| choice[pattern(idx)])?;
    Ok((g, Rational::new(bad.into(), t.len().into())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct JuntaOptions {
    pub eps: Rational,
    /// Head cutoff on |f^(i)|; chosen from `tau` when absent.
    pub cutoff: Option<Rational>,
    /// Target regularity of the tail; defaults to eps.
    pub tau: Option<Rational>,
    /// Maximum number of sampled candidates.
    pub budget: u32,
    pub draws_override: Option<u64>,
    pub mode: DistanceMode,
}

impl JuntaOptions {
    pub fn new(eps: Rational) -> Self {
        JuntaOptions {
            eps,
            cutoff: None,
            tau: None,
            budget: 32,
            draws_override: None,
            mode: DistanceMode::Exact,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JuntaCase {
    /// f^(empty) is within eps of +-1.
    Constant,
    /// Best junta on the head.
    Head,
    /// Head plus sampled tail.
    SampledTail,
}

#[derive(Clone, Debug, PartialEq)]
pub enum JuntaFunction {
    Ltf(Ltf),
    Table(TruthTable),
}

impl JuntaFunction {
    pub fn as_function(&self) -> Function<'_> {
        match self {
            JuntaFunction::Ltf(l) => Function::Ltf(l),
            JuntaFunction::Table(t) => Function::Table(t),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JuntaApproximator {
    pub g: JuntaFunction,
    pub relevant: Vec<usize>,
    pub distance: DistanceReport,
    pub case: JuntaCase,
    pub head_size: usize,
    /// Draw count N of each sampled form, when the tail was sampled.
    pub sample_size: Option<u64>,
    pub draws_used: u32,
    /// Whether the measured distance is at most eps.
    pub met: bool,
    pub split: Option<HeadTailSplit>,
    /// ||u||_1^2 of the unit tail vector and the bound Inf(f)^2 / sigma_T^2 on it.
    pub l1_sq: Option<Rational>,
    pub influence_bound_sq: Option<Rational>,
}

/// Theorem-1 style junta approximation with measured distance.
pub fn theorem1_pipeline(
    f: &Ltf,
    opts: &JuntaOptions,
    rng: &mut impl RngCore,
    caps: &Caps,
) -> Result<JuntaApproximator> {
    let eps = &opts.eps;
    if !(eps.is_positive() && *eps < Rational::one()) {
        return Err(invalid("eps must lie in (0, 1)"));
    }
    let n = f.n();
    let t = f.truth_table(caps)?;
    let spectrum = fourier::wht(&t, caps)?;
    let bias = spectrum.constant_term();
    let measure = |g: &JuntaFunction| distance(Function::Table(&t), g.as_function(), &Distribution::Uniform, opts.mode, caps);

    if rational::abs(&bias) >= Rational::one() - eps {
        let g = JuntaFunction::Table(TruthTable::constant(n, !bias.is_negative())?);
        let d = measure(&g)?;
        return Ok(JuntaApproximator {
            met: d.value <= *eps,
            g,
            relevant: Vec::new(),
            distance: d,
            case: JuntaCase::Constant,
            head_size: 0,
            sample_size: None,
            draws_used: 0,
            split: None,
            l1_sq: None,
            influence_bound_sq: None,
        });
    }

    let chow = spectrum.degree_one();
    let tau = opts.tau.clone().unwrap_or_else(|| eps.clone());
    let cutoff = opts.cutoff.clone().unwrap_or_else(|| default_cutoff(&chow, &tau));
    let split = split_with_chow(f, chow.clone(), &cutoff);

    let (head_table, _) = best_junta_on_set(&t, &split.head, caps)?;
    let head_g = JuntaFunction::Table(head_table);
    let head_d = measure(&head_g)?;
    let mut best = (head_g, head_d, JuntaCase::Head, split.head.clone());
    let mut draws_used = 0;
    let mut sample_size = None;
    let mut l1_sq = None;
    let mut influence_bound_sq = None;

    if let (Some(reg_sq), true) = (&split.tail_regularity_sq, best.1.value > *eps) {
        // Sample with the larger of the target and the actual tail regularity.
        let (actual, _) = rational::sqrt_approx(reg_sq, SQRT_BITS);
        let ulp = Rational::new(1.into(), num_bigint::BigInt::one() << SQRT_BITS as usize);
        let actual = actual + ulp;
        let tau_s = if actual > tau { actual } else { tau.clone() };
        if tau_s < Rational::one() {
            let mut v = vec![Rational::zero(); n];
            for &i in &split.tail {
                v[i] = chow[i].clone();
            }
            let v_l1: Rational = v.iter().map(rational::abs).sum();
            let lsq = &v_l1 * &v_l1 / &split.sigma_t_sq;
            let total_inf: Rational = chow.iter().map(rational::abs).sum();
            influence_bound_sq = Some(&total_inf * &total_inf / &split.sigma_t_sq);
            let draws = opts
                .draws_override
                .unwrap_or_else(|| default_draws(&lsq, rational::to_f64(&tau_s)));
            l1_sq = Some(lsq);
            sample_size = Some(draws);
            for _ in 0..opts.budget {
                draws_used += 1;
                let form = sample_linear_form(&v, &tau_s, rng, Some(draws), caps)?;
                let step = &v_l1 / Rational::from_integer(draws.into());
                let mut w = vec![Rational::zero(); n];
                for &i in &split.head {
                    w[i] = &split.scale * &f.weights()[i];
                }
                for (&i, &c) in &form.counts {
                    w[i] = &step * Rational::from_integer(c.into());
                }
                let g = JuntaFunction::Ltf(Ltf::new(w, &split.scale * f.theta()));
                let d = measure(&g)?;
                let better = d.value < best.1.value;
                let done = d.value <= *eps;
                if better {
                    let mut rel: Vec<usize> = split.head.iter().copied().chain(form.relevant()).collect();
                    rel.sort_unstable();
                    rel.dedup();
                    best = (g, d, JuntaCase::SampledTail, rel);
                }
                if done {
                    break;
                }
            }
        }
    }
    let (g, d, case, mut relevant) = best;
    if case == JuntaCase::Head {
        relevant = match &g {
            JuntaFunction::Table(t) => t.relevant_variables(),
            JuntaFunction::Ltf(_) => relevant,
        };
    }
    Ok(JuntaApproximator {
        met: d.value <= *eps,
        g,
        relevant,
        distance: d,
        case,
        head_size: split.head.len(),
        sample_size,
        draws_used,
        split: Some(split),
        l1_sq,
        influence_bound_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn best_junta_examples() {
        let caps = Caps::default();
        let maj = Ltf::majority(3).truth_table(&caps).unwrap();
        let (g, d) = best_junta_on_set(&maj, &[0], &caps).unwrap();
        assert_eq!(g, Ltf::dictator(3, 0).truth_table(&caps).unwrap());
        assert_eq!(d, ratio(1, 4));
        let (g, d) = best_junta_on_set(&maj, &[0, 1, 2], &caps).unwrap();
        assert_eq!((g, d), (maj, int(0)));
        let parity = TruthTable::from_fn(3, |i| i.count_ones() % 2 == 1).unwrap();
        assert_eq!(best_junta_on_set(&parity, &[0], &caps).unwrap().1, ratio(1, 2));
    }

    #[test]
    fn dictator_is_exact() {
        let caps = Caps::default();
        let mut r = crate::rng::seeded(5);
        let out = theorem1_pipeline(&Ltf::dictator(4, 2), &JuntaOptions::new(ratio(1, 10)), &mut r, &caps).unwrap();
        assert_eq!(out.distance.value, int(0));
        assert_eq!(out.relevant, alloc::vec![2]);
    }

    #[test]
    fn near_constant_accepts_constant() {
        let caps = Caps::default();
        // sign(x1 + x2 + x3 + x4 + 3.5): only the all -1 point is negative.
        let f = Ltf::new(alloc::vec![int(1); 4], ratio(-7, 2));
        let mut r = crate::rng::seeded(6);
        let out = theorem1_pipeline(&f, &JuntaOptions::new(ratio(1, 5)), &mut r, &caps).unwrap();
        assert_eq!(out.case, JuntaCase::Constant);
        assert_eq!(out.distance.value, ratio(1, 16));
    }
}
