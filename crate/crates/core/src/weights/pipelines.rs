//! The anti-concentration based weight pipelines.
//!
//! Each pipeline takes a representation with useful structure, bounds the
//! anti-concentration of its weights at some radius r, rounds to a grid
//! fine enough relative to r and then measures the distance it actually
//! achieved, refining the grid while the target 2 eps is missed.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::rounding::{integer_form, round_weights, Rounded, RoundingMode, RoundingSpec};
use crate::anticonc::{levy, LevyMode};
use crate::caps::{Caps, PipelineConstants};
use crate::cube::{distance, DistanceMode, DistanceReport, Distribution, Function, Ltf, TruthTable};
use crate::error::{invalid, Error, Result};
use crate::fourier::regularity::magnitude_order;
use crate::fourier::CriticalIndex;
use crate::lp;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Erdos,
    Halasz,
    Critical,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Erdos => "ser07",
            Method::Halasz => "thm25",
            Method::Critical => "thm2",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[derive(Default)]
pub struct PipelineOptions {
    pub constants: PipelineConstants,
    /// Seed for sampled distance checks.
    pub seed: u64,
    /// Overrides the default verification mode.
    pub mode: Option<DistanceMode>,
}


#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CriticalBranch {
    /// Critical index above L: truncate to the L heaviest weights.
    Truncated,
    /// Critical index at most L: round the tail and go through the extended domain.
    SmallIndex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalTrace {
    pub ell: CriticalIndex,
    /// L = ceil(l_c ln(1/eps)^2 / eps^2).
    pub junta_size: usize,
    /// K = k_c / eps^(2/3).
    pub head_target: f64,
    pub branch: CriticalBranch,
    /// Tail scaling c = sqrt(n ln(1/eps)) / (eps sigma_ell).
    pub scale: Option<Rational>,
    /// R0 = ceil(r_c sqrt(n) ln(1/eps) / eps) and the range actually used.
    pub r0: Option<i64>,
    pub r_used: Option<i64>,
    /// Whether the range was lowered to fit the LP cap.
    pub range_capped: bool,
    pub inner: Option<Box<PipelineReport>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineReport {
    pub method: Method,
    pub distribution: &'static str,
    /// Integer weights and threshold, divided by the gcd of the weights.
    pub output: Ltf,
    pub max_weight: BigInt,
    /// Largest rounded weight before the gcd division.
    pub grid_max_weight: Option<BigInt>,
    pub sum_sq: BigInt,
    /// ceil(max |w_i| / alpha) for the final grid.
    pub ceiling: Option<BigInt>,
    pub distance: DistanceReport,
    /// 2 eps.
    pub target: Rational,
    pub met: bool,
    /// Number of anti-concentrated weights used for the radius.
    pub k: Option<usize>,
    pub r: Option<Rational>,
    pub alpha: Option<Rational>,
    pub refinements: u32,
    /// p_r of the normalized weights that were rounded, when computable exactly.
    pub anticoncentration: Option<Rational>,
    /// The exact representation was returned instead of a rounded one.
    pub fallback: bool,
    pub trace: Option<CriticalTrace>,
    pub seed: u64,
    pub constants: PipelineConstants,
}

/// A representation normalized so the largest |w_i| is 1, with the nonzero
/// coordinates in decreasing magnitude.
#[derive(Clone, Debug, PartialEq)]
pub struct SortedRepresentation {
    pub ltf: Ltf,
    pub order: Vec<usize>,
    pub sorted: Vec<Rational>,
}

impl SortedRepresentation {
    pub fn from_ltf(f: &Ltf) -> Self {
        let max = f.max_abs_weight();
        let ltf = if max.is_zero() {
            f.clone()
        } else {
            Ltf::new(f.weights().iter().map(|w| w / &max).collect(), f.theta() / &max)
        };
        let order: Vec<usize> = magnitude_order(ltf.weights())
            .into_iter()
            .filter(|&i| !ltf.weights()[i].is_zero())
            .collect();
        let sorted = order.iter().map(|&i| rational::abs(&ltf.weights()[i])).collect();
        SortedRepresentation { ltf, order, sorted }
    }

    pub fn is_constant(&self) -> bool {
        self.order.is_empty()
    }
}

/// The gap-structured LP vertex representation of a threshold table.
pub fn vertex_representation(t: &TruthTable, caps: &Caps) -> Result<SortedRepresentation> {
    let s = lp::ltf_vertex(t, caps)?;
    Ok(SortedRepresentation::from_ltf(&s.representation.to_ltf()))
}

pub(crate) fn verification_mode(n: usize, d: &Distribution, eps: &Rational, opts: &PipelineOptions, caps: &Caps) -> DistanceMode {
    if let Some(m) = opts.mode {
        return m;
    }
    if matches!(d, Distribution::Explicit(_)) || n <= caps.enum_n {
        DistanceMode::Exact
    } else {
        DistanceMode::MonteCarlo {
            delta: rational::to_f64(eps) / 4.0,
            confidence: 0.01,
            seed: opts.seed,
        }
    }
}

pub(crate) fn check_eps(eps: &Rational) -> Result<()> {
    if eps.is_positive() && *eps < Rational::one() {
        Ok(())
    } else {
        Err(invalid("eps must lie in (0, 1)"))
    }
}

/// ceil(1/eps^2), exactly.
pub fn erdos_k(eps: &Rational) -> usize {
    let k = rational::ceil_int(&(Rational::one() / (eps * eps)));
    usize::try_from(k).unwrap_or(usize::MAX)
}

/// ceil(1/eps^(2/3)): the least k with k^3 >= 1/eps^2, exactly.
pub fn halasz_k(eps: &Rational) -> usize {
    let target = Rational::one() / (eps * eps);
    let mut k = libm::floor(libm::cbrt(rational::to_f64(&target))).max(1.0) as usize;
    while k > 1 && Rational::from_integer(((k - 1) as u64).pow(3).into()) >= target {
        k -= 1;
    }
    while Rational::from_integer((k as u64).pow(3).into()) < target {
        k += 1;
    }
    k
}

struct Rounding {
    rounded: Rounded,
    spec: RoundingSpec,
    distance: DistanceReport,
    refinements: u32,
    anticoncentration: Option<Rational>,
}

/// Rounds the normalized `source` on the grid for radius r and refines the
/// grid within the budget until dist_D(target, rounded) <= 2 eps.
#[allow(clippy::too_many_arguments)]
fn round_and_verify(
    target: Function<'_>,
    source: &Ltf,
    r: &Rational,
    eps: &Rational,
    d: &Distribution,
    mode: DistanceMode,
    opts: &PipelineOptions,
    caps: &Caps,
) -> Result<Rounding> {
    let n = source.n();
    let rmode = RoundingMode::for_distribution(d);
    let mut spec = RoundingSpec::new(r, eps, n, rmode)?;
    let goal = eps * Rational::from_integer(2.into());
    let anticoncentration = levy(source.weights(), r, d, LevyMode::Exact, caps).ok().map(|l| l.p);
    let mut refinements = 0;
    loop {
        let rounded = round_weights(source, &spec)?;
        let dist = distance(target, Function::Ltf(&rounded.ltf), d, mode, caps)?;
        if dist.value <= goal || refinements >= opts.constants.budget {
            return Ok(Rounding {
                rounded,
                spec,
                distance: dist,
                refinements,
                anticoncentration,
            });
        }
        spec = spec.refined();
        refinements += 1;
    }
}

fn weight_stats(f: &Ltf) -> (BigInt, BigInt) {
    let (w, _) = f.integer_scaled();
    let max = w.iter().map(|v| v.abs()).max().unwrap_or_default();
    let sum_sq = w.iter().map(|v| v * v).sum();
    (max, sum_sq)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn exact_report(
    method: Method,
    target: Function<'_>,
    rep: &SortedRepresentation,
    eps: &Rational,
    d: &Distribution,
    mode: DistanceMode,
    opts: &PipelineOptions,
    caps: &Caps,
) -> Result<PipelineReport> {
    let output = integer_form(&rep.ltf);
    let dist = distance(target, Function::Ltf(&output), d, mode, caps)?;
    let (max_weight, sum_sq) = weight_stats(&output);
    let goal = eps * Rational::from_integer(2.into());
    Ok(PipelineReport {
        method,
        distribution: d.kind_name(),
        met: dist.value <= goal,
        output,
        grid_max_weight: None,
        max_weight,
        sum_sq,
        ceiling: None,
        distance: dist,
        target: goal,
        k: None,
        r: None,
        alpha: None,
        refinements: 0,
        anticoncentration: None,
        fallback: true,
        trace: None,
        seed: opts.seed,
        constants: opts.constants,
    })
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn rounded_report(
    method: Method,
    target: Function<'_>,
    source: &Ltf,
    k: usize,
    r: Rational,
    eps: &Rational,
    d: &Distribution,
    mode: DistanceMode,
    opts: &PipelineOptions,
    caps: &Caps,
) -> Result<PipelineReport> {
    let rd = round_and_verify(target, source, &r, eps, d, mode, opts, caps)?;
    let output = integer_form(&rd.rounded.ltf);
    let (max_weight, sum_sq) = weight_stats(&output);
    let goal = eps * Rational::from_integer(2.into());
    Ok(PipelineReport {
        method,
        distribution: d.kind_name(),
        met: rd.distance.value <= goal,
        output,
        grid_max_weight: Some(rd.rounded.max_weight),
        max_weight,
        sum_sq,
        ceiling: Some(rd.rounded.ceiling),
        distance: rd.distance,
        target: goal,
        k: Some(k),
        r: Some(r),
        alpha: Some(rd.spec.alpha),
        refinements: rd.refinements,
        anticoncentration: rd.anticoncentration,
        fallback: false,
        trace: None,
        seed: opts.seed,
        constants: opts.constants,
    })
}

/// Erdos-based pipeline: radius r = |w_k| for k = min(ceil(1/eps^2), n).
pub fn pipeline_erdos(f: &Ltf, eps: &Rational, d: &Distribution, opts: &PipelineOptions, caps: &Caps) -> Result<PipelineReport> {
    check_eps(eps)?;
    d.validate(f.n())?;
    let t = f.truth_table(caps)?;
    let rep = vertex_representation(&t, caps)?;
    pipeline_erdos_from(Function::Table(&t), &rep, eps, d, opts, caps)
}

pub fn pipeline_erdos_from(
    target: Function<'_>,
    rep: &SortedRepresentation,
    eps: &Rational,
    d: &Distribution,
    opts: &PipelineOptions,
    caps: &Caps,
) -> Result<PipelineReport> {
    check_eps(eps)?;
    let mode = verification_mode(rep.ltf.n(), d, eps, opts, caps);
    if rep.is_constant() {
        return exact_report(Method::Erdos, target, rep, eps, d, mode, opts, caps);
    }
    let k = erdos_k(eps).min(rep.sorted.len());
    let r = rep.sorted[k - 1].clone();
    rounded_report(Method::Erdos, target, &rep.ltf, k, r, eps, d, mode, opts, caps)
}

/// Halasz-based pipeline: r is the largest radius for which k = ceil(1/eps^(2/3))
/// of the weights are pairwise r-separated and at least r in magnitude.
pub fn pipeline_halasz(f: &Ltf, eps: &Rational, d: &Distribution, opts: &PipelineOptions, caps: &Caps) -> Result<PipelineReport> {
    check_eps(eps)?;
    d.validate(f.n())?;
    let t = f.truth_table(caps)?;
    let rep = vertex_representation(&t, caps)?;
    pipeline_halasz_from(Function::Table(&t), &rep, eps, d, opts, caps)
}

/// The k largest gaps between consecutive sorted weights; returns their minimum.
pub fn separation_radius(sorted: &[Rational], k: usize) -> Option<Rational> {
    let mut gaps: Vec<Rational> = sorted.windows(2).map(|p| &p[0] - &p[1]).collect();
    if k == 0 || gaps.len() < k {
        return None;
    }
    gaps.sort_by(|a, b| b.cmp(a));
    Some(gaps[k - 1].clone()).filter(|g| g.is_positive())
}

/// Largest r such that some k of the sorted weights have |w| >= r and
/// pairwise differences >= r, with the chosen weights.
pub fn spread_radius(sorted: &[Rational], k: usize) -> Option<(Rational, Vec<usize>)> {
    if k == 0 || sorted.len() < k {
        return None;
    }
    let pick = |r: &Rational| {
        let mut chosen: Vec<usize> = Vec::new();
        for (i, w) in sorted.iter().enumerate() {
            if w < r {
                break;
            }
            if chosen.last().is_none_or(|&j| &sorted[j] - w >= *r) {
                chosen.push(i);
            }
        }
        chosen
    };
    let mut candidates: Vec<Rational> = sorted.to_vec();
    for (i, a) in sorted.iter().enumerate() {
        candidates.extend(sorted[i + 1..].iter().map(|b| a - b));
    }
    candidates.retain(|c| c.is_positive());
    candidates.sort();
    candidates.dedup();
    // Feasibility is monotone in r.
    let (mut lo, mut hi) = (0usize, candidates.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pick(&candidates[mid]).len() >= k {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let r = candidates.get(lo.checked_sub(1)?)?.clone();
    let mut chosen = pick(&r);
    chosen.truncate(k);
    Some((r, chosen))
}

pub fn pipeline_halasz_from(
    target: Function<'_>,
    rep: &SortedRepresentation,
    eps: &Rational,
    d: &Distribution,
    opts: &PipelineOptions,
    caps: &Caps,
) -> Result<PipelineReport> {
    check_eps(eps)?;
    let mode = verification_mode(rep.ltf.n(), d, eps, opts, caps);
    let k = halasz_k(eps);
    let n_rel = rep.sorted.len();
    if n_rel < k + 2 {
        let mut rep_out = exact_report(Method::Halasz, target, rep, eps, d, mode, opts, caps)?;
        rep_out.k = Some(k);
        return Ok(rep_out);
    }
    match spread_radius(&rep.sorted, k) {
        Some((r, _)) => rounded_report(Method::Halasz, target, &rep.ltf, k, r, eps, d, mode, opts, caps),
        None => exact_report(Method::Halasz, target, rep, eps, d, mode, opts, caps),
    }
}

pub(crate) fn relabel(mut report: PipelineReport, method: Method) -> PipelineReport {
    report.method = method;
    report
}

pub(crate) fn require_table(f: &Ltf, caps: &Caps) -> Result<TruthTable> {
    f.truth_table(caps).map_err(|e| match e {
        Error::CapExceeded { .. } => Error::Hypothesis("the representation step needs a truth table within the cap".into()),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn k_values() {
        assert_eq!(erdos_k(&ratio(1, 5)), 25);
        assert_eq!(erdos_k(&ratio(3, 10)), 12);
        assert_eq!(halasz_k(&ratio(1, 5)), 3);
        assert_eq!(halasz_k(&ratio(1, 2)), 2);
        assert_eq!(halasz_k(&ratio(9, 10)), 2);
        assert_eq!(halasz_k(&ratio(1, 8)), 4);
    }

    #[test]
    fn separation() {
        let s = [int(1), ratio(3, 4), ratio(1, 4), int(0)];
        assert_eq!(separation_radius(&s, 2), Some(ratio(1, 4)));
        assert_eq!(separation_radius(&s, 1), Some(ratio(1, 2)));
        assert_eq!(separation_radius(&s, 4), None);
    }

    fn spread_oracle(sorted: &[Rational], k: usize) -> Option<Rational> {
        let n = sorted.len();
        let mut best: Option<Rational> = None;
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != k {
                continue;
            }
            let chosen: Vec<&Rational> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| &sorted[i]).collect();
            let mut r = chosen.iter().map(|w| (*w).clone()).min().unwrap();
            for a in 0..k {
                for b in a + 1..k {
                    r = r.min(rational::abs(&(chosen[a] - chosen[b])));
                }
            }
            if r.is_positive() && best.as_ref().is_none_or(|b| r > *b) {
                best = Some(r);
            }
        }
        best
    }

    #[test]
    fn spread_matches_subset_oracle() {
        let nine: Vec<Rational> = (1..=9).rev().map(|i| ratio(i, 9)).collect();
        assert_eq!(spread_radius(&nine, 3).unwrap().0, ratio(1, 3));
        let mut rng = crate::rng::seeded(11);
        for _ in 0..200 {
            let n = 1 + (rand::RngCore::next_u32(&mut rng) % 7) as usize;
            let mut s: Vec<Rational> = (0..n).map(|_| ratio(rand::RngCore::next_u32(&mut rng) as i64 % 12, 11)).collect();
            s.sort_by(|a, b| b.cmp(a));
            for k in 1..=n {
                assert_eq!(spread_radius(&s, k).map(|x| x.0), spread_oracle(&s, k), "{s:?} k={k}");
            }
        }
    }

    #[test]
    fn dictator_erdos() {
        let caps = Caps::default();
        let r = pipeline_erdos(&Ltf::dictator(3, 1), &ratio(3, 10), &Distribution::Uniform, &PipelineOptions::default(), &caps)
            .unwrap();
        assert_eq!(r.distance.value, int(0));
        assert_eq!(r.max_weight, BigInt::one());
        assert_eq!(r.output.truth_table(&caps).unwrap(), Ltf::dictator(3, 1).truth_table(&caps).unwrap());
    }
}
