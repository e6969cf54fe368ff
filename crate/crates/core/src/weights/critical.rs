//! The critical-index pipeline.
//!
//! With ell the eps-critical index of the sorted weights: if ell exceeds
//! L, the function is close to its L heaviest variables and the Halasz
//! pipeline runs on that junta. Otherwise the tail is scaled and rounded to
//! integers so that its sum takes few values, the head together with that
//! sum becomes a threshold function on {-1,1}^(ell-1) x [-R, R], and the
//! gap-structured representation of that function supplies the head weights.

use alloc::boxed::Box;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::pipelines::{
    check_eps, exact_report, halasz_k, pipeline_halasz_from, relabel, require_table, rounded_report, spread_radius,
    verification_mode, vertex_representation, CriticalBranch, CriticalTrace, Method, PipelineOptions, PipelineReport,
    SortedRepresentation,
};
use crate::caps::Caps;
use crate::cube::{Distribution, Function, Ltf};
use crate::error::{Error, Result};
use crate::fourier::regularity::critical_index_of;
use crate::fourier::CriticalIndex;
use crate::lp::{extended_domain_repr, DomainFunction, SymmetricDomain};
use crate::rational::{self, Rational};

/// L = ceil(l_c ln(1/eps)^2 / eps^2), at least 1.
pub fn junta_size(eps: f64, l_c: f64) -> usize {
    let l = libm::log(1.0 / eps);
    let v = l_c * l * l / (eps * eps);
    libm::ceil(v - 1e-9).clamp(1.0, 1e15) as usize
}

pub fn pipeline_critical(f: &Ltf, eps: &Rational, d: &Distribution, opts: &PipelineOptions, caps: &Caps) -> Result<PipelineReport> {
    check_eps(eps)?;
    d.validate(f.n())?;
    let n = f.n();
    let eps_f = rational::to_f64(eps);
    let consts = opts.constants;
    let rep = SortedRepresentation::from_ltf(f);
    let mode = verification_mode(n, d, eps, opts, caps);
    let target = Function::Ltf(f);
    let big_l = junta_size(eps_f, consts.l_c);

    let ell = if rep.is_constant() {
        CriticalIndex::Infinite
    } else {
        let nonzero: Vec<Rational> = rep.order.iter().map(|&i| rep.ltf.weights()[i].clone()).collect();
        critical_index_of(&nonzero, eps)?.index
    };
    let mut trace = CriticalTrace {
        ell,
        junta_size: big_l,
        head_target: consts.k_c / libm::pow(eps_f, 2.0 / 3.0),
        branch: CriticalBranch::Truncated,
        scale: None,
        r0: None,
        r_used: None,
        range_capped: false,
        inner: None,
    };
    if rep.is_constant() {
        let mut out = exact_report(Method::Critical, target, &rep, eps, d, mode, opts, caps)?;
        out.trace = Some(trace);
        return Ok(out);
    }
    let ell = match ell {
        CriticalIndex::Finite(l) if l <= big_l => l,
        _ => {
            let junta = junta_representation(&rep, big_l, caps)?;
            let inner = pipeline_halasz_from(target, &junta, eps, d, opts, caps)?;
            let mut out = relabel(inner.clone(), Method::Critical);
            trace.inner = Some(Box::new(inner));
            out.trace = Some(trace);
            return Ok(out);
        }
    };
    trace.branch = CriticalBranch::SmallIndex;

    // Scale so the tail has standard deviation sqrt(n ln(1/eps)) / eps, then
    // round the tail to integers.
    let head: Vec<usize> = rep.order[..ell - 1].to_vec();
    let tail: Vec<usize> = rep.order[ell - 1..].to_vec();
    let weights = rep.ltf.weights();
    let sigma_sq: Rational = tail.iter().map(|&i| &weights[i] * &weights[i]).sum();
    let log = libm::log(1.0 / eps_f);
    let scale_f = libm::sqrt(n as f64 * log) / (eps_f * libm::sqrt(rational::to_f64(&sigma_sq)));
    let scale = rational::approx_f64(scale_f, 40)?;
    trace.scale = Some(scale.clone());
    let head_v: Vec<Rational> = head.iter().map(|&i| &scale * &weights[i]).collect();
    let tail_v: Vec<BigInt> = tail.iter().map(|&i| rational::round_half_even(&(&scale * &weights[i]))).collect();
    let theta_v = &scale * rep.ltf.theta();
    let tail_span = tail_v
        .iter()
        .map(|v| v.abs().to_i64().unwrap_or(i64::MAX))
        .fold(0i64, i64::saturating_add);

    let r0 = libm::ceil(consts.r_c * libm::sqrt(n as f64) * log / eps_f).clamp(1.0, (1u64 << 20) as f64) as i64;
    trace.r0 = Some(r0);
    if ell - 1 > 40 {
        return Err(Error::LpCapExceeded { rows: usize::MAX, cap: caps.lp_rows });
    }
    let head_points = 1u64 << (ell - 1);
    let rows = |r: i64| head_points.saturating_mul(2 * r as u64 + 1);
    let mut range = r0.min(tail_span.max(1));
    if rows(range) > caps.lp_rows as u64 {
        trace.range_capped = true;
        range = ((caps.lp_rows as u64 / head_points).saturating_sub(1) / 2).max(1) as i64;
    }
    if rows(range) > caps.lp_rows as u64 {
        return Err(Error::LpCapExceeded { rows: rows(range) as usize, cap: caps.lp_rows });
    }
    trace.r_used = Some(range);

    let domain = SymmetricDomain::extended(ell, range, caps)?;
    let h = DomainFunction::from_fn(domain, |y| {
        let head_sum: Rational = head_v.iter().zip(y).map(|(w, &s)| if s > 0 { w.clone() } else { -w.clone() }).sum();
        head_sum + Rational::from_integer(y[ell - 1].into()) >= theta_v
    });
    let solved = extended_domain_repr(&h, caps)?;
    let u = &solved.representation.weights;
    let mut composed = alloc::vec![Rational::zero(); n];
    for (j, &i) in head.iter().enumerate() {
        composed[i] = u[j].clone();
    }
    for (v, &i) in tail_v.iter().zip(&tail) {
        composed[i] = &u[ell - 1] * Rational::from_integer(v.clone());
    }
    let composed = Ltf::new(composed, solved.representation.threshold.clone());
    let norm = SortedRepresentation::from_ltf(&composed);

    // Separation of the head weights, measured in the normalization of the
    // composed vector.
    let mut u_sorted: Vec<Rational> = u.iter().map(rational::abs).filter(|x| !x.is_zero()).collect();
    u_sorted.sort_by(|a, b| b.cmp(a));
    let j = halasz_k(eps).min(u_sorted.len().saturating_sub(1));
    let radius = spread_radius(&u_sorted, j).map(|(gap, _)| gap / composed.max_abs_weight());

    let mut report = match radius {
        Some(r) if !norm.is_constant() => rounded_report(Method::Critical, target, &norm.ltf, j, r, eps, d, mode, opts, caps)?,
        _ => exact_report(Method::Critical, target, &norm, eps, d, mode, opts, caps)?,
    };
    report.trace = Some(trace);
    Ok(report)
}

/// Vertex representation of the junta on the `keep` heaviest coordinates,
/// embedded back into the full dimension.
fn junta_representation(rep: &SortedRepresentation, keep: usize, caps: &Caps) -> Result<SortedRepresentation> {
    let kept: Vec<usize> = rep.order.iter().copied().take(keep).collect();
    let sub = Ltf::new(kept.iter().map(|&i| rep.ltf.weights()[i].clone()).collect(), rep.ltf.theta().clone());
    let table = require_table(&sub, caps)?;
    let sub_rep = vertex_representation(&table, caps)?;
    let mut w = alloc::vec![Rational::zero(); rep.ltf.n()];
    for (j, &i) in kept.iter().enumerate() {
        w[i] = sub_rep.ltf.weights()[j].clone();
    }
    Ok(SortedRepresentation::from_ltf(&Ltf::new(w, sub_rep.ltf.theta().clone())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn junta_size_values() {
        assert_eq!(junta_size(0.5, 1.0), 2);
        assert_eq!(junta_size(0.1, 1.0), 531);
    }

    #[test]
    fn dictator_is_exact() {
        let f = Ltf::dictator(6, 2);
        let r = pipeline_critical(&f, &ratio(1, 5), &Distribution::Uniform, &PipelineOptions::default(), &Caps::default()).unwrap();
        assert!(r.distance.value.is_zero());
        assert_eq!(r.max_weight, BigInt::from(1));
    }

    #[test]
    fn small_index_branch_on_a_heavy_head() {
        // ell = 2: w_1 = 4 dominates, the sixteen unit weights form the tail.
        let mut w = alloc::vec![4i64];
        w.extend(core::iter::repeat_n(1, 16));
        let f = Ltf::from_ints(&w, 0);
        let r = pipeline_critical(&f, &ratio(2, 5), &Distribution::Uniform, &PipelineOptions::default(), &Caps::default()).unwrap();
        let t = r.trace.as_ref().unwrap();
        assert_eq!(t.ell, CriticalIndex::Finite(2));
        assert_eq!(t.branch, CriticalBranch::SmallIndex);
        assert!(r.met, "distance {}", r.distance.value);
    }
}
