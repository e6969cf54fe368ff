use alloc::borrow::Cow;

use num_bigint::BigUint;
use num_traits::Zero;

use super::distribution::{Mass, MassKind, MassTable, Measure, PointSampler};
use super::{Distribution, Evaluator, Ltf, TruthTable};
use crate::caps::Caps;
use crate::error::{invalid, Error, Result};
use crate::rational::{bigint_of, Rational};

/// Either representation of a Boolean function.
#[derive(Clone, Copy, Debug)]
pub enum Function<'a> {
    Table(&'a TruthTable),
    Ltf(&'a Ltf),
}

impl<'a> From<&'a TruthTable> for Function<'a> {
    fn from(t: &'a TruthTable) -> Self {
        Function::Table(t)
    }
}

impl<'a> From<&'a Ltf> for Function<'a> {
    fn from(f: &'a Ltf) -> Self {
        Function::Ltf(f)
    }
}

impl<'a> Function<'a> {
    pub fn n(&self) -> usize {
        match self {
            Function::Table(t) => t.n(),
            Function::Ltf(f) => f.n(),
        }
    }

    fn table(&self, caps: &Caps) -> Result<Cow<'a, TruthTable>> {
        match self {
            Function::Table(t) => Ok(Cow::Borrowed(*t)),
            Function::Ltf(f) => Ok(Cow::Owned(f.truth_table(caps)?)),
        }
    }

    fn oracle(&self) -> Oracle<'a> {
        match self {
            Function::Table(t) => Oracle::Table(t),
            Function::Ltf(f) => Oracle::Eval(f.evaluator()),
        }
    }
}

enum Oracle<'a> {
    Table(&'a TruthTable),
    Eval(Evaluator),
}

impl Oracle<'_> {
    fn at(&self, idx: u64) -> bool {
        match self {
            Oracle::Table(t) => t.get(idx),
            Oracle::Eval(e) => e.eval_index(idx),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DistanceMode {
    Exact,
    /// Sampled estimate within `delta` of the truth with probability at least `1 - confidence`.
    MonteCarlo {
        delta: f64,
        confidence: f64,
        seed: u64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceReport {
    /// Exact probability, or the empirical disagreement frequency in sampled mode.
    pub value: Rational,
    pub exact: bool,
    /// Number of samples drawn (0 in exact mode).
    pub samples: u64,
    pub mode: DistanceMode,
}

/// Pr_{x ~ D}[f(x) != g(x)].
pub fn distance(
    f: Function<'_>,
    g: Function<'_>,
    d: &Distribution,
    mode: DistanceMode,
    caps: &Caps,
) -> Result<DistanceReport> {
    let n = f.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: g.n(),
        });
    }
    match mode {
        DistanceMode::Exact => {
            let value = exact_distance(f, g, d, caps)?;
            Ok(DistanceReport {
                value,
                exact: true,
                samples: 0,
                mode,
            })
        }
        DistanceMode::MonteCarlo {
            delta,
            confidence,
            seed,
        } => {
            let sampler = PointSampler::new(d, n)?;
            let samples = hoeffding_samples(delta, confidence)?;
            let (fo, go) = (f.oracle(), g.oracle());
            let mut rng = crate::rng::seeded(seed);
            let mut bad = 0u64;
            for _ in 0..samples {
                let x = sampler.sample(&mut rng);
                if fo.at(x) != go.at(x) {
                    bad += 1;
                }
            }
            Ok(DistanceReport {
                value: Rational::new(bad.into(), samples.into()),
                exact: false,
                samples,
                mode,
            })
        }
    }
}

fn exact_distance(f: Function<'_>, g: Function<'_>, d: &Distribution, caps: &Caps) -> Result<Rational> {
    let n = f.n();
    let measure = Measure::new(d, n)?;
    if measure.is_explicit() {
        let (fo, go) = (f.oracle(), g.oracle());
        return Ok(measure.probability_where(|i| fo.at(i) != go.at(i)));
    }
    caps.check_n(n)?;
    let (tf, tg) = (f.table(caps)?, g.table(caps)?);
    let words = tf.words();
    let other = tg.words();
    match &measure {
        Measure::Small(t) => Ok(table_mass(t, words, other)),
        Measure::Big(t) => Ok(table_mass(t, words, other)),
    }
}

fn table_mass<M: Mass>(t: &MassTable<M>, a: &[u64], b: &[u64]) -> Rational {
    let num: BigUint = match t.kind {
        MassKind::Uniform => {
            let c: u64 = a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as u64).sum();
            BigUint::from(c)
        }
        _ => {
            let mut acc = M::zero();
            for (w, (x, y)) in a.iter().zip(b).enumerate() {
                let mut diff = x ^ y;
                while diff != 0 {
                    let bit = diff.trailing_zeros() as u64;
                    acc += t.mass((w as u64) << 6 | bit);
                    diff &= diff - 1;
                }
            }
            acc.to_big()
        }
    };
    if num.is_zero() {
        return Rational::zero();
    }
    Rational::new(bigint_of(num), bigint_of(t.denom.to_big()))
}

/// N = ceil(ln(2/confidence) / (2 delta^2)), the Hoeffding sample size.
pub fn hoeffding_samples(delta: f64, confidence: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta must lie in (0,1)"));
    }
    // Values in [1, 2) give a vacuous guarantee but keep the formula defined.
    if !(confidence > 0.0 && confidence < 2.0) {
        return Err(invalid("confidence must lie in (0,2)"));
    }
    let x = libm::log(2.0 / confidence) / (2.0 * delta * delta);
    Ok(ceil_snapped(x).max(1.0) as u64)
}

/// Ceiling that treats values within 1e-9 of an integer as that integer.
pub(crate) fn ceil_snapped(x: f64) -> f64 {
    let r = libm::round(x);
    if libm::fabs(x - r) <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        libm::ceil(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_samples(0.01, 0.05).unwrap(), 18445);
        assert_eq!(hoeffding_samples(0.1, 0.1).unwrap(), 150);
        let c = 2.0 * libm::exp(-0.5);
        assert_eq!(hoeffding_samples(0.5, c).unwrap(), 1);
        assert!(hoeffding_samples(0.0, 0.5).is_err());
        assert!(hoeffding_samples(0.5, 2.0).is_err());
    }

    #[test]
    fn distance_examples() {
        let caps = Caps::default();
        let maj = Ltf::majority(3);
        let dict = Ltf::dictator(3, 0);
        let d = |d: &Distribution| {
            distance((&maj).into(), (&dict).into(), d, DistanceMode::Exact, &caps)
                .unwrap()
                .value
        };
        assert_eq!(d(&Distribution::Uniform), ratio(1, 4));
        assert_eq!(d(&Distribution::product_constant(3, ratio(3, 4))), ratio(3, 16));
        let same = distance((&maj).into(), (&maj).into(), &Distribution::Uniform, DistanceMode::Exact, &caps)
            .unwrap();
        assert_eq!(same.value, Rational::zero());
    }

    #[test]
    fn explicit_uses_support_only() {
        let caps = Caps::default();
        let d = Distribution::Explicit(alloc::vec![
            (alloc::vec![1, -1, -1], ratio(1, 2)),
            (alloc::vec![1, 1, 1], ratio(1, 2)),
        ]);
        let v = distance(
            (&Ltf::majority(3)).into(),
            (&Ltf::dictator(3, 0)).into(),
            &d,
            DistanceMode::Exact,
            &caps,
        )
        .unwrap();
        assert_eq!(v.value, ratio(1, 2));
    }

    #[test]
    fn monte_carlo_rejects_explicit() {
        let caps = Caps::default();
        let d = Distribution::Explicit(alloc::vec![(alloc::vec![1], Rational::from_integer(1.into()))]);
        let f = Ltf::dictator(1, 0);
        let mode = DistanceMode::MonteCarlo {
            delta: 0.1,
            confidence: 0.1,
            seed: 1,
        };
        assert!(matches!(
            distance((&f).into(), (&f).into(), &d, mode, &caps),
            Err(Error::Unsampleable(_))
        ));
    }
}
