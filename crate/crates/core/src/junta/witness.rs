//! Lower-bound witnesses and structural checks.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng as _, RngCore};

use crate::caps::Caps;
use crate::cube::{Ltf, TruthTable};
use crate::error::{invalid, Error, Result};
use crate::fourier;
use crate::rational::{int, ratio, Rational};

/// sign(x_1 + ... + x_a + (x_{a+1} + ... + x_{a+b}) / (2b) - a).
pub fn prop14_witness(a: usize, b: usize) -> Result<Ltf> {
    if a == 0 || b == 0 {
        return Err(invalid("prop14_witness needs a, b >= 1"));
    }
    if b.is_multiple_of(2) {
        return Err(invalid("b must be odd so the restricted majority has no ties"));
    }
    let mut w = vec![int(1); a];
    w.extend(core::iter::repeat_n(ratio(1, 2 * b as i64), b));
    Ok(Ltf::new(w, int(a as i64)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JuntaDegreeCheck {
    pub degree: usize,
    pub relevant: usize,
    /// 2 * degree - 1, or 0 for constants.
    pub bound: usize,
    pub holds: bool,
}

/// Whether an LTF of Fourier degree k depends on at most 2k - 1 variables.
pub fn prop17_check(t: &TruthTable, caps: &Caps) -> Result<JuntaDegreeCheck> {
    let degree = fourier::wht(t, caps)?.stats().degree;
    let relevant = t.relevant_variables().len();
    let bound = (2 * degree).saturating_sub(1);
    Ok(JuntaDegreeCheck {
        degree,
        relevant,
        bound,
        holds: relevant <= bound,
    })
}

/// Random integer weights whose unit normalization is tau-regular.
///
/// No such vector exists when tau^2 < 1/n; that case is reported as a
/// hypothesis error rather than searched for.
pub fn random_regular_weights(rng: &mut impl RngCore, n: usize, tau: &Rational, max_weight: i64) -> Result<Vec<i64>> {
    if n == 0 || max_weight < 1 {
        return Err(invalid("need n >= 1 and max_weight >= 1"));
    }
    if tau * tau * Rational::from_integer(n.into()) < int(1) {
        return Err(Error::Hypothesis(alloc::format!(
            "no tau-regular unit vector exists in dimension {n} when tau^2 < 1/n"
        )));
    }
    let tries = 400;
    for attempt in 0..tries {
        // Narrow the magnitude range as attempts fail; equal magnitudes are always regular here.
        let low = 1 + (max_weight - 1) * attempt / (tries - 1);
        let w: Vec<i64> = (0..n)
            .map(|_| {
                let m = rng.gen_range(low..=max_weight);
                if rng.gen_bool(0.5) {
                    m
                } else {
                    -m
                }
            })
            .collect();
        let total: i128 = w.iter().map(|&x| (x as i128) * (x as i128)).sum();
        let max: i128 = w.iter().map(|&x| (x as i128) * (x as i128)).max().unwrap();
        if Rational::new(max.into(), total.into()) <= tau * tau {
            return Ok(w);
        }
    }
    Err(Error::Internal("regular weight generator did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Restriction;

    #[test]
    fn witness_restricts_to_majority() {
        let caps = Caps::default();
        let f = prop14_witness(2, 9).unwrap();
        assert_eq!(f.n(), 11);
        let r = f.restrict(&Restriction::from_pairs(&[(0, 1), (1, 1)])).unwrap();
        let t = r.truth_table(&caps).unwrap();
        let maj = Ltf::majority(9).truth_table(&caps).unwrap();
        let full = f.truth_table(&caps).unwrap();
        assert_eq!(full.restrict(&Restriction::from_pairs(&[(0, 1), (1, 1)])).unwrap(), maj);
        assert_eq!(t, maj);
    }

    #[test]
    fn small_witness_is_and() {
        let caps = Caps::default();
        let t = prop14_witness(1, 1).unwrap().truth_table(&caps).unwrap();
        assert_eq!(t, TruthTable::from_fn(2, |i| i == 3).unwrap());
    }

    #[test]
    fn witness_head_dominates() {
        let caps = Caps::default();
        let t = prop14_witness(2, 9).unwrap().truth_table(&caps).unwrap();
        let inf = fourier::influences(&t, &caps).unwrap();
        let all = inf.all();
        assert!(all[..2].iter().all(|h| all[2..].iter().all(|x| h > x)));
    }

    #[test]
    fn degree_bound() {
        let caps = Caps::default();
        let d = prop17_check(&Ltf::dictator(3, 1).truth_table(&caps).unwrap(), &caps).unwrap();
        assert_eq!((d.degree, d.relevant, d.holds), (1, 1, true));
        let m = prop17_check(&Ltf::majority(3).truth_table(&caps).unwrap(), &caps).unwrap();
        assert_eq!((m.degree, m.relevant, m.holds), (3, 3, true));
        let m5 = prop17_check(&Ltf::majority(5).truth_table(&caps).unwrap(), &caps).unwrap();
        assert_eq!((m5.degree, m5.bound, m5.holds), (5, 9, true));
    }

    #[test]
    fn regular_generator() {
        let mut r = crate::rng::seeded(9);
        let w = random_regular_weights(&mut r, 16, &ratio(3, 10), 50).unwrap();
        let total: i64 = w.iter().map(|x| x * x).sum();
        assert!(w.iter().all(|x| 100 * x * x <= 9 * total));
        assert!(matches!(
            random_regular_weights(&mut r, 8, &ratio(1, 5), 50),
            Err(Error::Hypothesis(_))
        ));
    }
}
