use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::point;
use super::TruthTable;
use crate::caps::Caps;
use crate::error::{invalid, Error, Result};
use crate::rational::{int, Rational};
use crate::scaled::ScaledForm;

/// Variables fixed to +1 or -1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Restriction {
    fixed: BTreeMap<usize, i8>,
}

impl Restriction {
    pub fn new(fixed: BTreeMap<usize, i8>) -> Self {
        Restriction { fixed }
    }

    pub fn from_pairs(pairs: &[(usize, i8)]) -> Self {
        Restriction {
            fixed: pairs.iter().copied().collect(),
        }
    }

    pub fn fixed(&self) -> &BTreeMap<usize, i8> {
        &self.fixed
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.fixed.contains_key(&i)
    }

    pub(crate) fn check(&self, n: usize) -> Result<()> {
        for (&i, &v) in &self.fixed {
            if i >= n {
                return Err(invalid(alloc::format!("restricted index {i} out of range for n = {n}")));
            }
            if v != 1 && v != -1 {
                return Err(invalid("restriction values must be +1 or -1"));
            }
        }
        Ok(())
    }
}

/// sign(w . x - theta) with sign(0) = +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ltf {
    weights: Vec<Rational>,
    theta: Rational,
}

impl Ltf {
    pub fn new(weights: Vec<Rational>, theta: Rational) -> Self {
        Ltf { weights, theta }
    }

    pub fn from_ints(weights: &[i64], theta: i64) -> Self {
        Ltf::new(weights.iter().map(|&w| int(w)).collect(), int(theta))
    }

    pub fn majority(n: usize) -> Self {
        Ltf::from_ints(&alloc::vec![1; n], 0)
    }

    pub fn dictator(n: usize, i: usize) -> Self {
        let mut w = alloc::vec![0; n];
        w[i] = 1;
        Ltf::from_ints(&w, 0)
    }

    pub fn constant(n: usize, value: bool) -> Self {
        Ltf::from_ints(&alloc::vec![0; n], if value { -1 } else { 1 })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    /// w . x - theta.
    pub fn affine_value(&self, x: &[i8]) -> Result<Rational> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: x.len(),
            });
        }
        let mut s = -self.theta.clone();
        for (w, &v) in self.weights.iter().zip(x) {
            match v {
                1 => s += w,
                -1 => s -= w,
                _ => return Err(invalid("coordinates must be +1 or -1")),
            }
        }
        Ok(s)
    }

    pub fn eval(&self, x: &[i8]) -> Result<i8> {
        Ok(if self.affine_value(x)?.is_negative() { -1 } else { 1 })
    }

    /// Integer-scaled form for repeated evaluation.
    pub fn evaluator(&self) -> Evaluator {
        let (form, _, _) = ScaledForm::from_rationals(&self.weights, &-self.theta.clone(), &[]);
        Evaluator { form }
    }

    pub fn truth_table(&self, caps: &Caps) -> Result<TruthTable> {
        caps.check_n(self.n())?;
        let words = self.evaluator().form.sign_words();
        TruthTable::from_words(self.n(), words)
    }

    /// The Ltf on the free variables (in increasing order) with threshold
    /// theta - sum of fixed w_i * rho_i.
    pub fn restrict(&self, rho: &Restriction) -> Result<Ltf> {
        rho.check(self.n())?;
        let mut theta = self.theta.clone();
        let mut weights = Vec::new();
        for (i, w) in self.weights.iter().enumerate() {
            match rho.fixed.get(&i) {
                Some(&1) => theta -= w,
                Some(_) => theta += w,
                None => weights.push(w.clone()),
            }
        }
        Ok(Ltf::new(weights, theta))
    }

    /// Number of points where w . x = theta exactly.
    pub fn zero_margin_points(&self, caps: &Caps) -> Result<u64> {
        caps.check_n(self.n())?;
        let e = self.evaluator();
        Ok((0..1u64 << self.n())
            .filter(|&i| e.form.value_big(i).is_zero())
            .count() as u64)
    }

    pub fn is_integer(&self) -> bool {
        self.weights.iter().all(|w| w.is_integer()) && self.theta.is_integer()
    }

    pub fn max_abs_weight(&self) -> Rational {
        self.weights
            .iter()
            .map(|w| w.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn sum_sq_weights(&self) -> Rational {
        self.weights.iter().map(|w| w * w).sum()
    }

    pub fn relevant_weight_count(&self) -> usize {
        self.weights.iter().filter(|w| !w.is_zero()).count()
    }

    /// Same function with weights and threshold multiplied by the common denominator.
    pub fn integer_scaled(&self) -> (Vec<BigInt>, BigInt) {
        let all: Vec<&Rational> = self.weights.iter().chain(core::iter::once(&self.theta)).collect();
        let (ints, _) = crate::rational::common_integers(all.iter().copied());
        let n = self.n();
        (ints[..n].to_vec(), ints[n].clone())
    }
}

/// Fast pointwise evaluation of an [`Ltf`].
#[derive(Clone, Debug)]
pub struct Evaluator {
    pub(crate) form: ScaledForm,
}

impl Evaluator {
    #[inline]
    pub fn eval_index(&self, index: u64) -> bool {
        self.form.nonneg_at(index)
    }

    pub fn eval(&self, x: &[i8]) -> Result<bool> {
        if x.len() != self.form.len() {
            return Err(Error::DimensionMismatch {
                expected: self.form.len(),
                got: x.len(),
            });
        }
        Ok(self.eval_index(point::encode(x)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn eval_examples() {
        assert_eq!(Ltf::majority(3).eval(&[1, 1, -1]).unwrap(), 1);
        assert_eq!(Ltf::from_ints(&[1, 1], 0).eval(&[1, -1]).unwrap(), 1);
        let omb3 = Ltf::from_ints(&[-4, 2, -1], 2);
        assert_eq!(omb3.eval(&[-1, -1, 1]).unwrap(), -1);
        assert!(Ltf::majority(3).eval(&[1, 1]).is_err());
    }

    #[test]
    fn table_examples() {
        let caps = Caps::default();
        let t = Ltf::majority(3).truth_table(&caps).unwrap();
        assert_eq!(t.count_ones(), 4);
        let d = Ltf::dictator(3, 0).truth_table(&caps).unwrap();
        for i in 0..8 {
            assert_eq!(d.get(i), i & 1 == 1);
        }
        let c = Ltf::constant(4, true).truth_table(&caps).unwrap();
        assert_eq!(c.count_ones(), 16);
    }

    #[test]
    fn restrict_maj3_gives_or() {
        let caps = Caps::default();
        let r = Ltf::majority(3)
            .restrict(&Restriction::from_pairs(&[(0, 1)]))
            .unwrap();
        assert_eq!(r.weights(), &[int(1), int(1)]);
        assert_eq!(r.theta(), &int(-1));
        let t = r.truth_table(&caps).unwrap();
        let or = TruthTable::from_fn(2, |i| i != 0).unwrap();
        assert_eq!(t, or);
        let full = Ltf::majority(3).truth_table(&caps).unwrap();
        assert_eq!(full.restrict(&Restriction::from_pairs(&[(0, 1)])).unwrap(), or);
    }

    #[test]
    fn empty_restriction_is_identity() {
        let f = Ltf::new(alloc::vec![ratio(1, 3), ratio(-2, 5)], ratio(1, 7));
        assert_eq!(f.restrict(&Restriction::default()).unwrap(), f);
    }

    #[test]
    fn zero_margins() {
        let caps = Caps::default();
        assert_eq!(Ltf::majority(2).zero_margin_points(&caps).unwrap(), 2);
        assert_eq!(Ltf::majority(3).zero_margin_points(&caps).unwrap(), 0);
    }
}
