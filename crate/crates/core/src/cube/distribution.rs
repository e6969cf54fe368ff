use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Sub};

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng as _, RngCore};

use super::point;
use crate::error::{Error, Result};
use crate::rational::{self, bigint_of, Rational};

/// Measure on {-1,1}^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    Uniform,
    /// `p[i]` is Pr[x_i = +1], strictly between 0 and 1.
    Product(Vec<Rational>),
    /// Weighted support; probabilities are nonnegative and sum to exactly 1.
    Explicit(Vec<(Vec<i8>, Rational)>),
}

impl Distribution {
    pub fn product_constant(n: usize, p: Rational) -> Self {
        Distribution::Product(alloc::vec![p; n])
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Distribution::Uniform => Ok(()),
            Distribution::Product(ps) => {
                if ps.len() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        got: ps.len(),
                    });
                }
                for p in ps {
                    if !p.is_positive() || *p >= Rational::one() {
                        return Err(Error::InvalidDistribution(format!(
                            "product bias {} outside (0,1)",
                            rational::to_string(p)
                        )));
                    }
                }
                Ok(())
            }
            Distribution::Explicit(support) => {
                if support.is_empty() {
                    return Err(Error::InvalidDistribution("empty support".into()));
                }
                let mut total = Rational::zero();
                for (x, q) in support {
                    if x.len() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            got: x.len(),
                        });
                    }
                    point::encode(x)?;
                    if q.is_negative() {
                        return Err(Error::InvalidDistribution("negative probability".into()));
                    }
                    total += q;
                }
                if total != Rational::one() {
                    return Err(Error::InvalidDistribution(format!(
                        "probabilities sum to {} instead of 1",
                        rational::to_string(&total)
                    )));
                }
                Ok(())
            }
        }
    }

    /// p = min_j min(p_j, 1 - p_j); 1/2 for uniform. Explicit uses its one-dimensional marginals.
    pub fn bias(&self, n: usize) -> Result<Rational> {
        self.validate(n)?;
        let half = rational::ratio(1, 2);
        let marginals: Vec<Rational> = match self {
            Distribution::Uniform => return Ok(half),
            Distribution::Product(ps) => ps.clone(),
            Distribution::Explicit(support) => (0..n)
                .map(|i| {
                    support
                        .iter()
                        .filter(|(x, _)| x[i] == 1)
                        .map(|(_, q)| q.clone())
                        .sum()
                })
                .collect(),
        };
        Ok(marginals
            .iter()
            .map(|p| core::cmp::min(p.clone(), Rational::one() - p))
            .min()
            .unwrap_or(half))
    }

    pub fn is_sampleable(&self) -> bool {
        !matches!(self, Distribution::Explicit(_))
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Distribution::Uniform => "uniform",
            Distribution::Product(_) => "product",
            Distribution::Explicit(_) => "explicit",
        }
    }

    /// Marginal on the first k coordinates (uniform and product only).
    pub fn prefix(&self, k: usize) -> Result<Distribution> {
        match self {
            Distribution::Uniform => Ok(Distribution::Uniform),
            Distribution::Product(ps) if k <= ps.len() => Ok(Distribution::Product(ps[..k].to_vec())),
            Distribution::Product(_) => Err(Error::DimensionMismatch {
                expected: k,
                got: 0,
            }),
            Distribution::Explicit(_) => Err(Error::InvalidDistribution(
                "prefix marginals are only defined here for uniform and product".into(),
            )),
        }
    }
}

/// Integer point masses over a common denominator.
pub(crate) trait Mass:
    Clone + Ord + Zero + One + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + AddAssign
{
    fn to_big(&self) -> BigUint;
}

impl Mass for u128 {
    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Mass for BigUint {
    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

#[derive(Clone, Debug)]
pub(crate) enum MassKind<M> {
    Uniform,
    Product {
        low: Vec<M>,
        high: Vec<M>,
        low_bits: usize,
    },
    Explicit(Vec<(u64, M)>),
}

#[derive(Clone, Debug)]
pub(crate) struct MassTable<M> {
    pub n: usize,
    pub denom: M,
    pub kind: MassKind<M>,
}

impl<M: Mass> MassTable<M> {
    /// Mass of a cube point (uniform/product only).
    #[inline]
    pub fn mass(&self, index: u64) -> M {
        match &self.kind {
            MassKind::Uniform => M::one(),
            MassKind::Product {
                low,
                high,
                low_bits,
            } => {
                let lo = (index & point::mask(*low_bits)) as usize;
                let hi = (index >> low_bits) as usize;
                low[lo].clone() * high[hi].clone()
            }
            MassKind::Explicit(_) => unreachable!("explicit masses are not indexed"),
        }
    }

    /// Visits every point of positive mass.
    pub fn for_each(&self, mut f: impl FnMut(u64, &M)) {
        match &self.kind {
            MassKind::Explicit(support) => {
                for (i, m) in support {
                    f(*i, m);
                }
            }
            _ => {
                for i in 0..1u64 << self.n {
                    let m = self.mass(i);
                    f(i, &m);
                }
            }
        }
    }

    pub fn total_where(&self, mut pred: impl FnMut(u64) -> bool) -> M {
        let mut acc = M::zero();
        match &self.kind {
            MassKind::Uniform => {
                let mut c: u64 = 0;
                for i in 0..1u64 << self.n {
                    if pred(i) {
                        c += 1;
                    }
                }
                acc = count_to_mass::<M>(c);
            }
            _ => self.for_each(|i, m| {
                if pred(i) {
                    acc += m.clone();
                }
            }),
        }
        acc
    }
}

fn count_to_mass<M: Mass>(c: u64) -> M {
    // Binary expansion keeps this generic over both mass types.
    let mut acc = M::zero();
    let mut pow = M::one();
    let mut c = c;
    while c > 0 {
        if c & 1 == 1 {
            acc += pow.clone();
        }
        pow = pow.clone() + pow;
        c >>= 1;
    }
    acc
}

/// Exact measure of a distribution on a fixed dimension.
#[derive(Clone, Debug)]
pub(crate) enum Measure {
    Small(MassTable<u128>),
    Big(MassTable<BigUint>),
}

fn build<M: Mass>(
    n: usize,
    denom: BigUint,
    kind: &RawKind,
    conv: impl Fn(&BigUint) -> M,
) -> MassTable<M> {
    let kind = match kind {
        RawKind::Uniform => MassKind::Uniform,
        RawKind::Product(pairs) => {
            let low_bits = n / 2;
            let table = |lo: usize, hi: usize| -> Vec<M> {
                let k = hi - lo;
                let mut out = Vec::with_capacity(1 << k);
                for idx in 0..1u64 << k {
                    let mut m = M::one();
                    for j in 0..k {
                        let (a, b) = &pairs[lo + j];
                        m = m * if idx >> j & 1 == 1 {
                            conv(a)
                        } else {
                            conv(&(b - a))
                        };
                    }
                    out.push(m);
                }
                out
            };
            MassKind::Product {
                low: table(0, low_bits),
                high: table(low_bits, n),
                low_bits,
            }
        }
        RawKind::Explicit(pts) => MassKind::Explicit(pts.iter().map(|(i, m)| (*i, conv(m))).collect()),
    };
    MassTable {
        n,
        denom: conv(&denom),
        kind,
    }
}

enum RawKind {
    Uniform,
    Product(Vec<(BigUint, BigUint)>),
    Explicit(Vec<(u64, BigUint)>),
}

impl Measure {
    pub fn new(d: &Distribution, n: usize) -> Result<Measure> {
        d.validate(n)?;
        let (raw, denom) = match d {
            Distribution::Uniform => {
                if n > 62 {
                    return Err(Error::CapExceeded { n, cap: 62 });
                }
                (RawKind::Uniform, BigUint::one() << n)
            }
            Distribution::Product(ps) => {
                let pairs: Vec<(BigUint, BigUint)> = ps
                    .iter()
                    .map(|p| (p.numer().magnitude().clone(), p.denom().magnitude().clone()))
                    .collect();
                let denom = pairs.iter().fold(BigUint::one(), |acc, (_, b)| acc * b);
                (RawKind::Product(pairs), denom)
            }
            Distribution::Explicit(support) => {
                let (ints, denom) = rational::common_integers(support.iter().map(|(_, q)| q));
                let mut merged: BTreeMap<u64, BigUint> = BTreeMap::new();
                for ((x, _), m) in support.iter().zip(ints) {
                    if m.is_zero() {
                        continue;
                    }
                    *merged.entry(point::encode(x)?).or_default() += m.magnitude();
                }
                (
                    RawKind::Explicit(merged.into_iter().collect()),
                    denom.magnitude().clone(),
                )
            }
        };
        if denom.bits() < 127 {
            Ok(Measure::Small(build(n, denom, &raw, |b| b.to_u128().unwrap())))
        } else {
            Ok(Measure::Big(build(n, denom, &raw, |b| b.clone())))
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(
            self,
            Measure::Small(MassTable {
                kind: MassKind::Explicit(_),
                ..
            }) | Measure::Big(MassTable {
                kind: MassKind::Explicit(_),
                ..
            })
        )
    }

    pub fn denom(&self) -> BigUint {
        match self {
            Measure::Small(t) => t.denom.to_big(),
            Measure::Big(t) => t.denom.clone(),
        }
    }

    pub fn probability_where(&self, pred: impl FnMut(u64) -> bool) -> Rational {
        let (num, den) = match self {
            Measure::Small(t) => (t.total_where(pred).to_big(), t.denom.to_big()),
            Measure::Big(t) => (t.total_where(pred), t.denom.clone()),
        };
        Rational::new(bigint_of(num), bigint_of(den))
    }

    /// Support indices with their masses as big integers.
    pub fn support(&self) -> Vec<(u64, BigUint)> {
        let mut out = Vec::new();
        match self {
            Measure::Small(t) => t.for_each(|i, m| out.push((i, m.to_big()))),
            Measure::Big(t) => t.for_each(|i, m| out.push((i, m.clone()))),
        }
        out
    }
}

/// Exact sampler for uniform and product distributions.
#[derive(Clone, Debug)]
pub struct PointSampler {
    n: usize,
    product: Option<Vec<Bias>>,
}

#[derive(Clone, Debug)]
enum Bias {
    Small(u64, u64),
    Big(BigUint, BigUint),
}

impl PointSampler {
    pub fn new(d: &Distribution, n: usize) -> Result<Self> {
        d.validate(n)?;
        if n > 63 {
            return Err(Error::CapExceeded { n, cap: 63 });
        }
        let product = match d {
            Distribution::Uniform => None,
            Distribution::Product(ps) => Some(
                ps.iter()
                    .map(|p| {
                        let a = p.numer().magnitude().clone();
                        let b = p.denom().magnitude().clone();
                        match (a.to_u64(), b.to_u64()) {
                            (Some(a), Some(b)) => Bias::Small(a, b),
                            _ => Bias::Big(a, b),
                        }
                    })
                    .collect(),
            ),
            Distribution::Explicit(_) => {
                return Err(Error::Unsampleable(
                    "explicit distributions are enumerated, not sampled".into(),
                ))
            }
        };
        Ok(PointSampler { n, product })
    }

    pub fn sample(&self, rng: &mut impl RngCore) -> u64 {
        match &self.product {
            None => rng.next_u64() & point::mask(self.n),
            Some(biases) => {
                let mut idx = 0u64;
                for (i, b) in biases.iter().enumerate() {
                    let plus = match b {
                        Bias::Small(a, b) => rng.gen_range(0..*b) < *a,
                        Bias::Big(a, b) => crate::rng::bernoulli(rng, a, b),
                    };
                    if plus {
                        idx |= 1 << i;
                    }
                }
                idx
            }
        }
    }
}
