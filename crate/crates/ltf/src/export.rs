//! JSON and CSV renderings of core reports.
//!
//! Exact quantities are rational strings `"num/den"`; floating-point values
//! only appear under keys ending in `_decimal` or in fields documented as
//! closed-form estimates.

use std::fmt::Write as _;

use ltf_core::anticonc::{HalaszRow, Levy, ProfileRow};
use ltf_core::cube::{DistanceMode, DistanceReport, KwiseReport};
use ltf_core::fourier::{CriticalIndex, CriticalIndexReport, InfluenceProfile, MarginStats, Spectrum};
use ltf_core::junta::{HeadTailSplit, JuntaApproximator, JuntaFunction};
use ltf_core::lp::{GapReport, LiftRecord, MinWeight, RowTag, SolvedRepresentation};
use ltf_core::rational::{self, Rational};
use ltf_core::weights::{ComposedReport, CriticalTrace, PipelineReport};
use ltf_core::{Ltf, PipelineConstants};
use serde_json::{json, Value};

use crate::format::{LtfFile, TableFile};

pub fn q(r: &Rational) -> Value {
    Value::String(rational::to_string(r))
}

fn qs(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn opt_q(r: &Option<Rational>) -> Value {
    r.as_ref().map(q).unwrap_or(Value::Null)
}

pub fn ltf(f: &Ltf) -> Value {
    serde_json::to_value(LtfFile::from_ltf(f)).expect("serializable")
}

pub fn mode(m: &DistanceMode) -> Value {
    match m {
        DistanceMode::Exact => json!({ "kind": "exact" }),
        DistanceMode::MonteCarlo {
            delta,
            confidence,
            seed,
        } => json!({ "kind": "mc", "delta": delta, "confidence": confidence, "seed": seed }),
    }
}

pub fn distance(d: &DistanceReport) -> Value {
    json!({
        "value": q(&d.value),
        "value_decimal": rational::to_f64(&d.value),
        "exact": d.exact,
        "samples": d.samples,
        "mode": mode(&d.mode),
    })
}

pub fn kwise(r: &KwiseReport) -> Value {
    json!({
        "k": r.k,
        "independent": r.independent,
        "violation": r.violation.as_ref().map(|v| json!({
            "coordinates": v.coordinates,
            "pattern": v.pattern,
            "mass": q(&v.mass),
        })),
    })
}

/// One row per mask: `mask,numerator,denominator`.
pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from("mask,numerator,denominator\n");
    for mask in 0..s.scaled().len() as u64 {
        let c = s.coeff(mask);
        let _ = writeln!(out, "{mask},{},{}", c.numer(), c.denom());
    }
    out
}

pub fn spectrum(s: &Spectrum, inf: &InfluenceProfile) -> Value {
    let stats = s.stats();
    let coefficients: Vec<Value> = (0..s.scaled().len() as u64)
        .map(|m| json!({ "mask": m, "value": q(&s.coeff(m)) }))
        .collect();
    json!({
        "n": s.n(),
        "coefficients": coefficients,
        "influences": qs(&inf.all()),
        "total_influence": q(&stats.total_influence),
        "degree": stats.degree,
    })
}

pub fn critical_index(r: &CriticalIndexReport) -> Value {
    json!({
        "tau": q(&r.tau),
        "index": match r.index {
            CriticalIndex::Finite(i) => json!(i),
            CriticalIndex::Infinite => json!("infinite"),
        },
        "order": r.order,
        "sorted_sq": qs(&r.sorted_sq),
        "tail_sq": qs(&r.tail_sq),
    })
}

pub fn margins(m: &MarginStats) -> Value {
    json!({
        "tau": q(&m.tau),
        "below": m.below,
        "total": m.total,
        "fraction_below": q(&m.fraction_below),
        "min_margin_sq": q(&m.min_margin_sq),
        "regularity_sq": q(&m.regularity.tau_sq),
        "regularity_decimal": m.regularity.tau,
        "regular": m.regular,
        "within_four_tau": m.within_four_tau,
    })
}

pub fn split(s: &HeadTailSplit) -> Value {
    json!({
        "head": s.head,
        "tail": s.tail,
        "cutoff": q(&s.cutoff),
        "sigma_t_sq": q(&s.sigma_t_sq),
        "scale": q(&s.scale),
        "scale_exact": s.scale_exact,
        "f_prime": s.f_prime.as_ref().map(ltf),
        "tail_regularity_sq": opt_q(&s.tail_regularity_sq),
        "case": format!("{:?}", s.case).to_lowercase(),
    })
}

pub fn junta(j: &JuntaApproximator, seed: u64) -> Value {
    let g = match &j.g {
        JuntaFunction::Ltf(f) => json!({ "ltf": ltf(f) }),
        JuntaFunction::Table(t) => json!({ "table": serde_json::to_value(TableFile::from_table(t)).expect("serializable") }),
    };
    json!({
        "case": format!("{:?}", j.case).to_lowercase(),
        "head_size": j.head_size,
        "sample_size": j.sample_size,
        "junta_size": j.relevant.len(),
        "relevant": j.relevant,
        "distance": distance(&j.distance),
        "met": j.met,
        "draws_used": j.draws_used,
        "l1_sq": opt_q(&j.l1_sq),
        "influence_bound_sq": opt_q(&j.influence_bound_sq),
        "split": j.split.as_ref().map(split),
        "g": g,
        "seed": seed,
    })
}

pub fn levy(l: &Levy, r: &Rational) -> Value {
    json!({ "r": q(r), "p": q(&l.p), "p_decimal": rational::to_f64(&l.p), "center": q(&l.center), "exact": l.exact })
}

/// `r,p_r_num,p_r_den,v_star`.
pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("r,p_r_num,p_r_den,v_star\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{},{}", rational::to_string(&row.r), row.p.numer(), row.p.denom(), rational::to_string(&row.center));
    }
    out
}

/// `k,p_r,p_r_k32` with the normalized value as a decimal rendering.
pub fn probe_csv(rows: &[HalaszRow]) -> String {
    let mut out = String::from("k,p_r,p_r_k32\n");
    for row in rows {
        let _ = writeln!(out, "{},{},{:.6}", row.k, rational::to_string(&row.p), row.normalized);
    }
    out
}

fn tag(t: &RowTag) -> Value {
    match t {
        RowTag::HypercubePoint(i) => json!({ "kind": "point", "index": i }),
        RowTag::GapRow(k) => json!({ "kind": "gap", "k": k }),
        RowTag::ExtendedPoint(i) => json!({ "kind": "extended_point", "index": i }),
        RowTag::Other => json!({ "kind": "other" }),
    }
}

fn lift(r: &LiftRecord) -> Value {
    json!({
        "source_dim": r.source_dim,
        "kept": r.kept,
        "dropped": r.dropped,
        "lifted": r.lifted,
        "orientation": r.orientation,
        "order": r.order,
    })
}

/// Certificate export: weights, tight rows with their provenance, objective.
pub fn certificate(s: &SolvedRepresentation) -> Value {
    let c = &s.certificate;
    let lp = &s.instance.problem;
    let tight: Vec<Value> = c
        .tight_rows
        .iter()
        .map(|&j| {
            json!({
                "row": j,
                "tag": tag(lp.tag(j)),
                "coefficients": lp.row(j),
                "rhs": lp.rhs(j),
            })
        })
        .collect();
    json!({
        "lp_weights": qs(&c.weights),
        "objective": q(&c.objective),
        "pivots": c.pivots,
        "tight_rows": tight,
        "rows": lp.rows(),
        "vars": lp.vars(),
        "lift": lift(&s.instance.record),
        "representation": {
            "weights": qs(&s.representation.weights),
            "threshold": q(&s.representation.threshold),
        },
        "gaps_pass": s.gaps.passes(),
        "strictly_decreasing": s.gaps.strictly_decreasing,
    })
}

/// `k,gap_num,gap_den,bound,pass`.
pub fn gaps_csv(g: &GapReport) -> String {
    g.to_csv()
}

pub fn min_weight(m: &Option<MinWeight>, budget: u64) -> Value {
    match m {
        Some(m) => json!({ "found": true, "budget": budget, "weight": m.weight, "weights": m.weights, "threshold": m.threshold }),
        None => json!({ "found": false, "budget": budget }),
    }
}

pub fn constants(c: &PipelineConstants) -> Value {
    json!({ "l_c": c.l_c, "k_c": c.k_c, "r_c": c.r_c, "budget": c.budget })
}

fn trace(t: &CriticalTrace) -> Value {
    json!({
        "ell": match t.ell {
            CriticalIndex::Finite(i) => json!(i),
            CriticalIndex::Infinite => json!("infinite"),
        },
        "L": t.junta_size,
        "K": t.head_target,
        "branch": format!("{:?}", t.branch).to_lowercase(),
        "scale": opt_q(&t.scale),
        "R0": t.r0,
        "R_used": t.r_used,
        "range_capped": t.range_capped,
        "inner": t.inner.as_deref().map(pipeline),
    })
}

pub fn pipeline(r: &PipelineReport) -> Value {
    let bi = |v: &num_bigint::BigInt| Value::String(v.to_string());
    json!({
        "method": r.method.name(),
        "distribution": r.distribution,
        "output": ltf(&r.output),
        "max_weight": bi(&r.max_weight),
        "grid_max_weight": r.grid_max_weight.as_ref().map(bi),
        "ceiling": r.ceiling.as_ref().map(bi),
        "sum_sq": bi(&r.sum_sq),
        "distance": distance(&r.distance),
        "target": q(&r.target),
        "met": r.met,
        "k": r.k,
        "r": opt_q(&r.r),
        "alpha": opt_q(&r.alpha),
        "refinements": r.refinements,
        "anticoncentration": opt_q(&r.anticoncentration),
        "fallback": r.fallback,
        "trace": r.trace.as_ref().map(trace),
        "seed": r.seed,
        "constants": constants(&r.constants),
    })
}

pub fn composed(r: &ComposedReport, seed: u64) -> Value {
    json!({
        "method": "cor13",
        "eps": q(&r.eps),
        "junta": junta(&r.junta, seed),
        "junta_source": format!("{:?}", r.source).to_lowercase(),
        "junta_ltf": ltf(&r.junta_ltf),
        "rounding": pipeline(&r.rounding),
        "output": ltf(&r.output),
        "sum_sq": r.sum_sq.to_string(),
        "total_influence_sq": q(&r.total_influence_sq),
        "distance": distance(&r.distance),
        "met": r.met,
        "seed": seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltf_core::fourier::{influences, wht};
    use ltf_core::Caps;

    #[test]
    fn majority_spectrum_csv() {
        let caps = Caps::default();
        let t = Ltf::majority(3).truth_table(&caps).unwrap();
        let csv = spectrum_csv(&wht(&t, &caps).unwrap());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[1], "0,0,1");
        assert_eq!(lines[2], "1,1,2");
        assert_eq!(lines[8], "7,-1,2");
        let v = spectrum(&wht(&t, &caps).unwrap(), &influences(&t, &caps).unwrap());
        assert_eq!(v["total_influence"], "3/2");
    }
}
