use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{levy, require_exact_feasible, LevyMode};
use crate::caps::Caps;
use crate::cube::{binomial, validate_kwise, Distribution, Measure};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};
use crate::scaled::ScaledForm;

/// Berry–Esséen constant recorded in Gaussian band reports.
pub const BERRY_ESSEEN_C: f64 = 0.7915;

/// Standard normal CDF via libm's erfc (relative error well below 1e-10 on the reals).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / core::f64::consts::SQRT_2)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErdosCheck {
    pub p: Rational,
    /// C(k, floor(k/2)) / 2^k for the uniform distribution.
    pub bound: Option<Rational>,
    /// p * sqrt(k), the normalized trend value.
    pub normalized: f64,
    pub pass: Option<bool>,
}

pub fn erdos_check(a: &[Rational], r: &Rational, d: &Distribution, caps: &Caps) -> Result<ErdosCheck> {
    if let Some(i) = a.iter().position(|v| &v.abs() < r) {
        return Err(Error::Hypothesis(format!(
            "|a_{}| = {} is below r = {}",
            i + 1,
            rational::to_string(&a[i].abs()),
            rational::to_string(r)
        )));
    }
    let k = a.len();
    let p = levy(a, r, d, LevyMode::Exact, caps)?.p;
    let normalized = rational::to_f64(&p) * libm::sqrt(k as f64);
    let (bound, pass) = if matches!(d, Distribution::Uniform) {
        let b = Rational::new(BigInt::from(binomial(k, k / 2)), BigInt::from(1u8) << k);
        let pass = p <= b;
        (Some(b), Some(pass))
    } else {
        (None, None)
    };
    Ok(ErdosCheck {
        p,
        bound,
        normalized,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalaszRow {
    pub k: usize,
    pub p: Rational,
    /// p * k^{3/2}.
    pub normalized: f64,
}

fn check_separated(a: &[Rational], r: &Rational) -> Result<()> {
    let mut s: Vec<&Rational> = a.iter().collect();
    s.sort();
    for w in s.windows(2) {
        if &(w[1] - w[0]) < r {
            return Err(Error::Hypothesis(format!(
                "weights {} and {} are closer than r = {}",
                rational::to_string(w[0]),
                rational::to_string(w[1]),
                rational::to_string(r)
            )));
        }
    }
    Ok(())
}

/// Exact p_r for each family member; `bias` None means uniform, Some(p) the product with all p_i = p.
pub fn halasz_probe(
    family: &dyn Fn(usize) -> Vec<Rational>,
    r: &Rational,
    ks: impl IntoIterator<Item = usize>,
    bias: Option<&Rational>,
    caps: &Caps,
) -> Result<Vec<HalaszRow>> {
    let mut rows = Vec::new();
    for k in ks {
        let a = family(k);
        check_separated(&a, r)?;
        let d = match bias {
            None => Distribution::Uniform,
            Some(p) => Distribution::product_constant(a.len(), p.clone()),
        };
        let p = levy(&a, r, &d, LevyMode::Exact, caps)?.p;
        let normalized = rational::to_f64(&p) * libm::pow(k as f64, 1.5);
        rows.push(HalaszRow { k, p, normalized });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCheck {
    pub p_prefix: Rational,
    pub p_extension: Rational,
    pub pass: bool,
}

/// p_r(a') <= p_r(a) for a' extending a; `d` is the distribution on a'.
pub fn extension_check(
    prefix: &[Rational],
    extension: &[Rational],
    r: &Rational,
    d: &Distribution,
    caps: &Caps,
) -> Result<ExtensionCheck> {
    if extension.len() < prefix.len() || &extension[..prefix.len()] != prefix {
        return Err(invalid("second vector does not extend the first"));
    }
    if matches!(d, Distribution::Explicit(_)) {
        return Err(invalid("extension checks take uniform or product distributions"));
    }
    let p_prefix = levy(prefix, r, &d.prefix(prefix.len())?, LevyMode::Exact, caps)?.p;
    let p_extension = levy(extension, r, d, LevyMode::Exact, caps)?.p;
    Ok(ExtensionCheck {
        pass: p_extension <= p_prefix,
        p_prefix,
        p_extension,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaussianBand {
    pub exact: Rational,
    pub band: f64,
    pub residual: f64,
    /// 2 * max|w_i| / sigma.
    pub two_tau: f64,
    pub pass: bool,
    pub berry_esseen_c: f64,
}

/// Exact Pr[alpha <= w.x <= beta] under uniform x against the Gaussian value.
pub fn gaussian_band(w: &[Rational], alpha: &Rational, beta: &Rational, caps: &Caps) -> Result<GaussianBand> {
    let sigma_sq: Rational = w.iter().map(|v| v * v).sum();
    if sigma_sq.is_zero() {
        return Err(Error::ZeroWeights);
    }
    caps.check_n(w.len())?;
    let sigma = libm::sqrt(rational::to_f64(&sigma_sq));
    let max = w.iter().map(|v| v.abs()).max().unwrap();
    let two_tau = 2.0 * rational::to_f64(&max) / sigma;
    let (exact, band) = if alpha > beta {
        (Rational::zero(), 0.0)
    } else {
        let (form, extra, _) = ScaledForm::from_rationals(w, &Rational::zero(), &[alpha, beta]);
        let m = Measure::new(&Distribution::Uniform, w.len())?;
        let exact = m.probability_where(|i| {
            let s = form.value_big(i);
            s >= extra[0] && s <= extra[1]
        });
        let band = normal_cdf(rational::to_f64(beta) / sigma) - normal_cdf(rational::to_f64(alpha) / sigma);
        (exact, band)
    };
    let residual = libm::fabs(rational::to_f64(&exact) - band);
    Ok(GaussianBand {
        exact,
        band,
        residual,
        two_tau,
        pass: residual <= two_tau,
        berry_esseen_c: BERRY_ESSEEN_C,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KwiseTransfer {
    pub p_kwise: Rational,
    pub p_uniform: Rational,
    /// p_kwise - p_uniform.
    pub gap: Rational,
}

pub fn kwise_transfer_check(
    a: &[Rational],
    r: &Rational,
    d: &Distribution,
    k: usize,
    caps: &Caps,
) -> Result<KwiseTransfer> {
    let report = validate_kwise(d, a.len(), k, caps)?;
    if !report.independent {
        return Err(Error::InvalidDistribution(format!(
            "support is not {k}-wise independent"
        )));
    }
    require_exact_feasible(a.len(), &Distribution::Uniform, caps)?;
    let p_kwise = levy(a, r, d, LevyMode::Exact, caps)?.p;
    let p_uniform = levy(a, r, &Distribution::Uniform, LevyMode::Exact, caps)?.p;
    Ok(KwiseTransfer {
        gap: &p_kwise - &p_uniform,
        p_kwise,
        p_uniform,
    })
}
