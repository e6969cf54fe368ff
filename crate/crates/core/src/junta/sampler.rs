//! Random linear forms built from repeated single-coordinate draws.
//!
//! The source vector v is taken up to scale: the normalized vector is
//! u = v / ||v||_2 and every quantity below is stated in terms of v so it
//! stays rational. Each draw picks index i with probability |v_i| / ||v||_1
//! and adds sign(v_i) x_i to the form.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng as _, RngCore};

use crate::caps::Caps;
use crate::cube::ceil_snapped;
use crate::cube::Ltf;
use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledLinearForm {
    /// Signed accumulated coefficient per index; |counts| sum to `draws`.
    pub counts: BTreeMap<usize, i64>,
    pub draws: u64,
    /// ||u||_1^2 for the normalized source vector.
    pub l1_sq: Rational,
    source: Vec<Rational>,
    source_l1: Rational,
}

impl SampledLinearForm {
    pub fn n(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self) -> &[Rational] {
        &self.source
    }

    /// ||v||_1 of the unnormalized source.
    pub fn source_l1(&self) -> &Rational {
        &self.source_l1
    }

    pub fn l1(&self) -> f64 {
        libm::sqrt(rational::to_f64(&self.l1_sq))
    }

    /// L(x) for x in {-1,1}^n.
    pub fn eval(&self, x: &[i8]) -> i64 {
        self.counts.iter().map(|(&i, &c)| c * x[i] as i64).sum()
    }

    /// E[L(z)] = (N / ||u||_1) (u . z) = N (v . z) / ||v||_1.
    pub fn expectation(&self, z: &[i8]) -> Result<Rational> {
        if z.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: z.len(),
            });
        }
        let dot: Rational = self
            .source
            .iter()
            .zip(z)
            .map(|(v, &s)| if s > 0 { v.clone() } else { -v.clone() })
            .sum();
        Ok(dot * Rational::from_integer(self.draws.into()) / &self.source_l1)
    }

    pub fn relevant(&self) -> Vec<usize> {
        self.counts.iter().filter(|(_, c)| **c != 0).map(|(&i, _)| i).collect()
    }
}

/// N = ceil(2 ||u||_1^2 ln(2/tau) / tau^2).
pub fn default_draws(l1_sq: &Rational, tau: f64) -> u64 {
    let x = 2.0 * rational::to_f64(l1_sq) * libm::log(2.0 / tau) / (tau * tau);
    ceil_snapped(x) as u64
}

/// Checks |u_i| <= tau for u = v / ||v||_2, exactly.
pub fn is_regular(v: &[Rational], tau: &Rational) -> bool {
    let total: Rational = v.iter().map(|x| x * x).sum();
    let bound = tau * tau * total;
    v.iter().all(|x| x * x <= bound)
}

pub fn sample_linear_form(
    v: &[Rational],
    tau: &Rational,
    rng: &mut impl RngCore,
    draws_override: Option<u64>,
    caps: &Caps,
) -> Result<SampledLinearForm> {
    if !(tau.is_positive() && *tau < Rational::from_integer(1.into())) {
        return Err(invalid("tau must lie in (0, 1)"));
    }
    let norm_sq: Rational = v.iter().map(|x| x * x).sum();
    if norm_sq.is_zero() {
        return Err(Error::ZeroWeights);
    }
    if !is_regular(v, tau) {
        return Err(Error::Hypothesis("source vector is not tau-regular".into()));
    }
    let source_l1: Rational = v.iter().map(rational::abs).sum();
    let l1_sq = &source_l1 * &source_l1 / &norm_sq;
    let draws = draws_override.unwrap_or_else(|| default_draws(&l1_sq, rational::to_f64(tau)));
    if draws > caps.work {
        return Err(Error::WorkCap(alloc::format!("{draws} draws exceed the work cap")));
    }
    let mags: Vec<Rational> = v.iter().map(rational::abs).collect();
    let (ints, _) = rational::common_integers(mags.iter());
    let mut cumulative: Vec<BigUint> = Vec::with_capacity(ints.len());
    let mut acc = BigUint::zero();
    for x in &ints {
        acc += rational::biguint_of(x);
        cumulative.push(acc.clone());
    }
    let small: Option<Vec<u64>> = cumulative.iter().map(|c| c.to_u64()).collect();
    let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
    for _ in 0..draws {
        let i = match &small {
            Some(c) => {
                let r = rng.gen_range(0..*c.last().unwrap());
                c.partition_point(|&x| x <= r)
            }
            None => {
                let r = crate::rng::below(rng, &acc);
                cumulative.partition_point(|x| *x <= r)
            }
        };
        let s = if v[i].is_negative() { -1 } else { 1 };
        *counts.entry(i).or_insert(0) += s;
    }
    Ok(SampledLinearForm {
        counts,
        draws,
        l1_sq,
        source: v.to_vec(),
        source_l1,
    })
}

/// sign(theta + (||v||_1 / N) L(x)), with theta in the units of the source
/// vector; for a unit-norm source this is sign(theta + (||u||_1/N) L(x)).
pub fn build_g_theta(form: &SampledLinearForm, theta: &Rational) -> Result<Ltf> {
    if form.draws == 0 {
        return Err(Error::Degenerate("sampled form has no draws".into()));
    }
    let scale = &form.source_l1 / Rational::from_integer(form.draws.into());
    let mut w = alloc::vec![Rational::zero(); form.n()];
    for (&i, &c) in &form.counts {
        w[i] = &scale * Rational::from_integer(c.into());
    }
    Ok(Ltf::new(w, -theta.clone()))
}

/// sign(theta + v . x), the function the sampled forms approximate.
pub fn h_theta(v: &[Rational], theta: &Rational) -> Ltf {
    Ltf::new(v.to_vec(), -theta.clone())
}
