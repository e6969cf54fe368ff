//! Splitting an LTF into high-influence head variables and a regular tail.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::caps::Caps;
use crate::cube::Ltf;
use crate::error::Result;
use crate::fourier;
use crate::rational::{self, Rational};

/// Bits of precision used when a square root is irrational.
pub const SQRT_BITS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitCase {
    /// Close to a junta over the head.
    Junta,
    /// The tail is regular and can be replaced by a sampled linear form.
    RegularTail,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeadTailSplit {
    pub head: Vec<usize>,
    pub tail: Vec<usize>,
    /// Head membership threshold on |f^(i)| (this is kappa squared).
    pub cutoff: Rational,
    /// Degree-one Fourier coefficients of f.
    pub chow: Vec<Rational>,
    /// sigma_T^2 = sum over the tail of f^(i)^2.
    pub sigma_t_sq: Rational,
    /// Sum over the tail of w_i^2 for the input weights.
    pub tail_weight_sq: Rational,
    /// sigma_T / sqrt(tail_weight_sq), exact or rounded to SQRT_BITS bits.
    pub scale: Rational,
    pub scale_exact: bool,
    /// In tail units: head weights scale * w_i, tail weights f^(i), threshold scale * theta.
    pub f_prime: Option<Ltf>,
    /// max over the tail of f^(i)^2 / sigma_T^2.
    pub tail_regularity_sq: Option<Rational>,
    pub case: SplitCase,
}

impl HeadTailSplit {
    /// Tail weights of f' after normalizing the tail to unit length, squared.
    pub fn tail_unit_weights_sq(&self) -> Vec<Rational> {
        if self.sigma_t_sq.is_zero() {
            return Vec::new();
        }
        self.tail.iter().map(|&i| &self.chow[i] * &self.chow[i] / &self.sigma_t_sq).collect()
    }
}

/// H = {i : |f^(i)| >= cutoff}, T the rest.
pub fn head_tail_split(f: &Ltf, cutoff: &Rational, caps: &Caps) -> Result<HeadTailSplit> {
    let t = f.truth_table(caps)?;
    let chow = fourier::wht(&t, caps)?.degree_one();
    Ok(split_with_chow(f, chow, cutoff))
}

pub(crate) fn split_with_chow(f: &Ltf, chow: Vec<Rational>, cutoff: &Rational) -> HeadTailSplit {
    let n = f.n();
    let (head, tail): (Vec<usize>, Vec<usize>) = (0..n).partition(|&i| rational::abs(&chow[i]) >= *cutoff);
    let sigma_t_sq: Rational = tail.iter().map(|&i| &chow[i] * &chow[i]).sum();
    let tail_weight_sq: Rational = tail.iter().map(|&i| &f.weights()[i] * &f.weights()[i]).sum();
    let regular = sigma_t_sq.is_positive() && tail_weight_sq.is_positive();
    let (scale, scale_exact) = if regular {
        rational::sqrt_approx(&(&sigma_t_sq / &tail_weight_sq), SQRT_BITS)
    } else {
        (Rational::zero(), true)
    };
    let f_prime = regular.then(|| {
        let mut w = Vec::with_capacity(n);
        for i in 0..n {
            w.push(if head.contains(&i) { &scale * &f.weights()[i] } else { chow[i].clone() });
        }
        Ltf::new(w, &scale * f.theta())
    });
    let tail_regularity_sq = regular.then(|| {
        let max = tail.iter().map(|&i| &chow[i] * &chow[i]).max().unwrap_or_default();
        max / &sigma_t_sq
    });
    HeadTailSplit {
        head,
        tail,
        cutoff: cutoff.clone(),
        chow,
        sigma_t_sq,
        tail_weight_sq,
        scale,
        scale_exact,
        f_prime,
        tail_regularity_sq,
        case: if regular { SplitCase::RegularTail } else { SplitCase::Junta },
    }
}

/// The largest cutoff whose tail has regularity at most tau (squared
/// comparison). Falls back to putting every relevant variable in the head.
pub fn default_cutoff(chow: &[Rational], tau: &Rational) -> Rational {
    let mut levels: Vec<Rational> = chow.iter().map(rational::abs).filter(|v| v.is_positive()).collect();
    levels.sort();
    levels.dedup();
    let tau_sq = tau * tau;
    // The tail for cutoff c is {|f^(i)| < c}. Scan cutoffs from large to small.
    let mut best: Option<Rational> = None;
    let mut candidates = levels.clone();
    if let Some(top) = levels.last() {
        candidates.push(top + Rational::from_integer(1.into()));
    }
    for cut in candidates.iter().rev() {
        let tail: Vec<Rational> = chow.iter().map(rational::abs).filter(|v| v < cut && v.is_positive()).collect();
        let sigma: Rational = tail.iter().map(|v| v * v).sum();
        if sigma.is_zero() {
            continue;
        }
        let max = tail.iter().max().cloned().unwrap_or_default();
        if &max * &max <= &tau_sq * &sigma {
            best = Some(cut.clone());
            break;
        }
    }
    best.unwrap_or_else(|| levels.first().cloned().unwrap_or_else(|| Rational::from_integer(1.into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn majority_all_tail() {
        let caps = Caps::default();
        let s = head_tail_split(&Ltf::majority(9), &int(1), &caps).unwrap();
        assert!(s.head.is_empty());
        assert_eq!(s.tail.len(), 9);
        assert_eq!(s.case, SplitCase::RegularTail);
        assert!(s.scale_exact);
        assert_eq!(s.scale, ratio(35, 128));
        let fp = s.f_prime.clone().unwrap();
        assert!(fp.weights().iter().all(|w| *w == ratio(35, 128)));
        assert_eq!(s.tail_unit_weights_sq().iter().sum::<Rational>(), int(1));
        assert_eq!(s.tail_regularity_sq, Some(ratio(1, 9)));
    }

    #[test]
    fn dictator_is_junta_case() {
        let caps = Caps::default();
        let s = head_tail_split(&Ltf::dictator(3, 0), &ratio(1, 2), &caps).unwrap();
        assert_eq!(s.head, alloc::vec![0]);
        assert_eq!(s.case, SplitCase::Junta);
    }
}
