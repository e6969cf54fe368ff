//! Rounding real weights to a grid and truncating to the heaviest variables.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cube::{Distribution, Ltf};
use crate::error::{invalid, Error, Result};
use crate::fourier::regularity::magnitude_order;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundingMode {
    /// Grid r / sqrt(n ln(2/eps)); rounding errors are controlled by Hoeffding.
    Uniform,
    /// Grid r / n; the total rounding error is below r at every point.
    General,
}

impl RoundingMode {
    pub fn for_distribution(d: &Distribution) -> Self {
        match d {
            Distribution::Uniform => RoundingMode::Uniform,
            _ => RoundingMode::General,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundingSpec {
    pub r: Rational,
    pub eps: Rational,
    pub alpha: Rational,
    pub mode: RoundingMode,
}

impl RoundingSpec {
    /// alpha = 1/M with M = ceil(sqrt(n ln(2/eps)) / r) or ceil(n / r), which is
    /// never coarser than the nominal grid.
    pub fn new(r: &Rational, eps: &Rational, n: usize, mode: RoundingMode) -> Result<Self> {
        if !r.is_positive() {
            return Err(invalid("radius must be positive"));
        }
        if !(eps.is_positive() && *eps < Rational::one()) {
            return Err(invalid("eps must lie in (0, 1)"));
        }
        let n = n.max(1);
        let m = match mode {
            RoundingMode::Uniform => {
                let s = libm::sqrt(n as f64 * libm::log(2.0 / rational::to_f64(eps)));
                // Round the square root up on a 2^-32 grid so the grid is never too coarse.
                let s = rational::from_f64(s)? + Rational::new(BigInt::one(), BigInt::one() << 32usize);
                rational::ceil_int(&(s / r))
            }
            RoundingMode::General => rational::ceil_int(&(Rational::from_integer(n.into()) / r)),
        };
        let m = m.max(BigInt::one());
        Ok(RoundingSpec {
            r: r.clone(),
            eps: eps.clone(),
            alpha: Rational::new(BigInt::one(), m),
            mode,
        })
    }

    pub fn with_alpha(r: &Rational, eps: &Rational, alpha: Rational, mode: RoundingMode) -> Self {
        RoundingSpec {
            r: r.clone(),
            eps: eps.clone(),
            alpha,
            mode,
        }
    }

    /// The same spec on a grid twice as fine.
    pub fn refined(&self) -> Self {
        RoundingSpec {
            alpha: &self.alpha / Rational::from_integer(2.into()),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rounded {
    pub ltf: Ltf,
    pub weights: Vec<BigInt>,
    /// ceil(theta / alpha); equivalent to theta / alpha since v . x is an integer.
    pub threshold: BigInt,
    pub max_weight: BigInt,
    /// ceil(max |w_i| / alpha).
    pub ceiling: BigInt,
    /// sum |w_i - alpha v_i|.
    pub error_l1: Rational,
}

/// v_i = round(w_i / alpha) with ties to even.
pub fn round_weights(g: &Ltf, spec: &RoundingSpec) -> Result<Rounded> {
    if !spec.alpha.is_positive() {
        return Err(invalid("alpha must be positive"));
    }
    let alpha = &spec.alpha;
    let weights: Vec<BigInt> = g.weights().iter().map(|w| rational::round_half_even(&(w / alpha))).collect();
    if weights.iter().all(Zero::is_zero) {
        return Err(Error::Degenerate("all rounded weights are zero".into()));
    }
    let threshold = rational::ceil_int(&(g.theta() / alpha));
    let max_weight = weights.iter().map(|v| v.abs()).max().unwrap_or_default();
    let ceiling = rational::ceil_int(&(g.max_abs_weight() / alpha));
    let error_l1 = g
        .weights()
        .iter()
        .zip(&weights)
        .map(|(w, v)| rational::abs(&(w - alpha * Rational::from_integer(v.clone()))))
        .sum();
    let ltf = Ltf::new(
        weights.iter().cloned().map(Rational::from_integer).collect(),
        Rational::from_integer(threshold.clone()),
    );
    Ok(Rounded {
        ltf,
        weights,
        threshold,
        max_weight,
        ceiling,
        error_l1,
    })
}

/// Keeps the `keep` largest-magnitude weights (ties by index) and zeroes the rest.
pub fn truncate_to_junta(f: &Ltf, keep: usize) -> Result<Ltf> {
    if keep == 0 {
        return Err(invalid("junta size must be at least 1"));
    }
    let order = magnitude_order(f.weights());
    let mut w = alloc::vec![Rational::zero(); f.n()];
    for &i in order.iter().take(keep) {
        w[i] = f.weights()[i].clone();
    }
    Ok(Ltf::new(w, f.theta().clone()))
}

/// Integer form of an exact representation: scaled by the common denominator
/// and divided by the gcd of the weights.
pub fn integer_form(f: &Ltf) -> Ltf {
    let (mut w, theta) = f.integer_scaled();
    let g = w.iter().fold(BigInt::zero(), |acc, v| num_integer::Integer::gcd(&acc, v));
    let theta = if g > BigInt::one() {
        w.iter_mut().for_each(|v| *v /= &g);
        // v . x >= theta/g  iff  v . x >= ceil(theta/g) for integer v . x.
        rational::ceil_int(&Rational::new(theta, g))
    } else {
        theta
    };
    Ltf::new(
        w.into_iter().map(Rational::from_integer).collect(),
        Rational::from_integer(theta),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::rational::{int, ratio};
    use alloc::vec;

    #[test]
    fn rounding_majority_like() {
        let caps = Caps::default();
        let g = Ltf::new(vec![int(1), ratio(98, 100), ratio(101, 100)], int(0));
        let spec = RoundingSpec::with_alpha(&ratio(1, 10), &ratio(1, 10), ratio(1, 10), RoundingMode::Uniform);
        let r = round_weights(&g, &spec).unwrap();
        assert_eq!(r.weights, vec![BigInt::from(10); 3]);
        assert_eq!(r.ltf.truth_table(&caps).unwrap(), Ltf::majority(3).truth_table(&caps).unwrap());
        assert!(r.max_weight <= r.ceiling);
    }

    #[test]
    fn integers_fixed_by_unit_grid() {
        let g = Ltf::from_ints(&[3, -2, 5], 1);
        let spec = RoundingSpec::with_alpha(&int(1), &ratio(1, 2), int(1), RoundingMode::General);
        let r = round_weights(&g, &spec).unwrap();
        assert_eq!(r.ltf, g);
        assert_eq!(r.error_l1, int(0));
    }

    #[test]
    fn grid_sizes() {
        let s = RoundingSpec::new(&ratio(1, 2), &ratio(1, 10), 4, RoundingMode::General).unwrap();
        assert_eq!(s.alpha, ratio(1, 8));
        // sqrt(4 ln 20) = 3.4616..., divided by 1/2 gives 6.92 -> 7.
        let u = RoundingSpec::new(&ratio(1, 2), &ratio(1, 10), 4, RoundingMode::Uniform).unwrap();
        assert_eq!(u.alpha, ratio(1, 7));
        assert!(RoundingSpec::new(&int(0), &ratio(1, 10), 4, RoundingMode::Uniform).is_err());
    }

    #[test]
    fn truncation() {
        let mut w = vec![int(4)];
        w.extend(vec![int(1); 16]);
        let f = Ltf::new(w, int(1));
        let t = truncate_to_junta(&f, 1).unwrap();
        assert_eq!(t.weights()[0], int(4));
        assert!(t.weights()[1..].iter().all(Zero::is_zero));
        assert_eq!(truncate_to_junta(&f, 17).unwrap(), f);
        assert!(truncate_to_junta(&f, 0).is_err());
    }

    #[test]
    fn zero_output_rejected() {
        let g = Ltf::new(vec![ratio(1, 100)], int(0));
        let spec = RoundingSpec::with_alpha(&int(1), &ratio(1, 2), int(1), RoundingMode::General);
        assert!(matches!(round_weights(&g, &spec), Err(Error::Degenerate(_))));
    }
}
