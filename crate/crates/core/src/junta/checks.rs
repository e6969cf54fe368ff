//! Empirical checks of the sampled-form approximation guarantees.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::RngCore;

use super::sampler::{build_g_theta, h_theta, sample_linear_form};
use crate::caps::Caps;
use crate::cube::{distance, DistanceMode, Distribution, Function};
use crate::error::Result;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct PointwiseReport {
    /// Points with margin at least tau.
    pub points: u64,
    pub draws: u32,
    /// Largest disagreement frequency over those points.
    pub max_frequency: f64,
    /// tau + 3 sqrt(tau / draws).
    pub bound: f64,
    pub pass: bool,
}

/// For every z with |theta + u . z| >= tau, how often a sampled g_theta
/// disagrees with h_theta at z. `theta` is in the units of `v`.
pub fn sampled_form_pointwise_check(
    v: &[Rational],
    theta: &Rational,
    tau: &Rational,
    draws: u32,
    rng: &mut impl RngCore,
    caps: &Caps,
) -> Result<PointwiseReport> {
    let h = h_theta(v, theta).truth_table(caps)?;
    let norm_sq: Rational = v.iter().map(|x| x * x).sum();
    let floor = tau * tau * norm_sq;
    let marginal: Vec<u64> = (0..h.len())
        .filter(|&idx| {
            let s: Rational = v
                .iter()
                .enumerate()
                .map(|(i, w)| if idx >> i & 1 == 1 { w.clone() } else { -w.clone() })
                .sum::<Rational>()
                + theta;
            &s * &s >= floor
        })
        .collect();
    let mut wrong = vec![0u32; marginal.len()];
    for _ in 0..draws {
        let form = sample_linear_form(v, tau, rng, None, caps)?;
        let g = build_g_theta(&form, theta)?.truth_table(caps)?;
        for (k, &idx) in marginal.iter().enumerate() {
            if g.get(idx) != h.get(idx) {
                wrong[k] += 1;
            }
        }
    }
    let max_frequency = wrong.iter().copied().max().unwrap_or(0) as f64 / draws.max(1) as f64;
    let t = rational::to_f64(tau);
    let bound = t + 3.0 * libm::sqrt(t / draws.max(1) as f64);
    Ok(PointwiseReport {
        points: marginal.len() as u64,
        draws,
        max_frequency,
        bound,
        pass: max_frequency <= bound,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeanDistanceReport {
    pub draws: u32,
    pub mean: Rational,
    pub std_err: f64,
    /// 5 tau + 3 standard errors.
    pub bound: f64,
    pub pass: bool,
}

/// Mean exact distance between h_theta and sampled g_theta.
pub fn sampled_junta_distance_check(
    v: &[Rational],
    theta: &Rational,
    tau: &Rational,
    draws: u32,
    rng: &mut impl RngCore,
    caps: &Caps,
) -> Result<MeanDistanceReport> {
    let h = h_theta(v, theta);
    let ht = h.truth_table(caps)?;
    let mut dists = Vec::with_capacity(draws as usize);
    for _ in 0..draws {
        let form = sample_linear_form(v, tau, rng, None, caps)?;
        let g = build_g_theta(&form, theta)?;
        let d = distance(Function::Table(&ht), Function::Ltf(&g), &Distribution::Uniform, DistanceMode::Exact, caps)?;
        dists.push(d.value);
    }
    let k = Rational::from_integer(draws.max(1).into());
    let mean: Rational = dists.iter().cloned().sum::<Rational>() / &k;
    let m = rational::to_f64(&mean);
    let var = if draws > 1 {
        dists.iter().map(|d| { let e = rational::to_f64(d) - m; e * e }).sum::<f64>() / (draws as f64 - 1.0)
    } else {
        0.0
    };
    let std_err = libm::sqrt(var / draws.max(1) as f64);
    let bound = 5.0 * rational::to_f64(tau) + 3.0 * std_err;
    Ok(MeanDistanceReport {
        draws,
        pass: m <= bound,
        mean: if dists.is_empty() { Rational::zero() } else { mean },
        std_err,
        bound,
    })
}
