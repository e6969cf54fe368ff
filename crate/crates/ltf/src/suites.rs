//! Named verification suites. Each runs an invariant family at a given scale
//! and reports pass/fail counts, the worst margin and every failing instance
//! with the seed that regenerates it.

use ltf_core::anticonc::{erdos_check, extension_check, gaussian_band, halasz_probe, levy, LevyMode};
use ltf_core::cube::random::{random_integer_ltf, random_positive_weights};
use ltf_core::cube::{distance, DistanceMode, Distribution, Function};
use ltf_core::fourier::margin_stats;
use ltf_core::junta::{sampled_junta_distance_check, prop14_witness, prop17_check, random_regular_weights};
use ltf_core::lp::{
    enumerate_threshold_functions, extended_domain_repr, ltf_vertex, weight_floor_check, DomainFunction, FloorMode,
    SymmetricDomain,
};
use ltf_core::rational::{self, int, ratio, Rational};
use ltf_core::rng::{self, Rng};
use ltf_core::weights::{junta_then_weights, round_weights, PipelineOptions, RoundingMode, RoundingSpec};
use ltf_core::{Caps, Ltf, TruthTable};
use rand::Rng as _;
use serde::Serialize;
use serde_json::{json, Value};

use crate::export;
use crate::format::TableFile;
use crate::CliError;

pub const SUITES: [&str; 12] = [
    "lemma9",
    "lemma10",
    "erdos",
    "halasz",
    "extension",
    "lemma26",
    "lemma29",
    "lemma22",
    "claim40",
    "berryesseen",
    "prop17",
    "corollary13",
];

/// Frozen band for p_1(1,...,k) k^{3/2} over k = 6..16, from exact enumeration.
pub const HALASZ_BAND: (f64, f64) = (2.296_396_633_859_23, 2.565_429_687_5);

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteParams {
    pub nmin: usize,
    pub nmax: usize,
    pub instances: usize,
    pub seed: u64,
    pub taus: Vec<Rational>,
    pub eps: Rational,
    /// Draws per instance for sampled checks.
    pub draws: u32,
    /// (k, R) pairs for extended-domain checks.
    pub extended: Vec<(usize, i64)>,
    pub caps: Caps,
}

impl SuiteParams {
    pub fn new(seed: u64) -> Self {
        SuiteParams {
            nmin: 1,
            nmax: 8,
            instances: 20,
            seed,
            taus: vec![ratio(3, 10)],
            eps: ratio(1, 10),
            draws: 200,
            extended: vec![(3, 4), (4, 6), (4, 8)],
            caps: Caps::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub instance: Value,
    pub seed: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub instances: usize,
    pub passed: usize,
    pub failed: usize,
    /// Smallest slack (bound minus observed) over the passing and failing instances.
    pub worst_margin: Option<String>,
    pub worst_margin_decimal: Option<f64>,
    pub seed: u64,
    /// Distinct instance seeds, in first-use order.
    pub seeds: Vec<u64>,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn new(suite: &str, seed: u64) -> Self {
        VerifyReport {
            suite: suite.into(),
            instances: 0,
            passed: 0,
            failed: 0,
            worst_margin: None,
            worst_margin_decimal: None,
            seed,
            seeds: Vec::new(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.instances > 0
    }

    fn margin(&mut self, m: &Rational) {
        let m_f = rational::to_f64(m);
        if self.worst_margin_decimal.is_none_or(|w| m_f < w) {
            self.worst_margin = Some(rational::to_string(m));
            self.worst_margin_decimal = Some(m_f);
        }
    }

    fn margin_f64(&mut self, m: f64) {
        if self.worst_margin_decimal.is_none_or(|w| m < w) {
            self.worst_margin = None;
            self.worst_margin_decimal = Some(m);
        }
    }

    fn record(&mut self, seed: u64, pass: bool, instance: impl FnOnce() -> Value, reason: impl FnOnce() -> String) {
        self.instances += 1;
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(Failure {
                instance: instance(),
                seed,
                reason: reason(),
            });
        }
    }

    fn error(&mut self, seed: u64, instance: Value, e: impl std::fmt::Display) {
        self.record(seed, false, || instance, || e.to_string());
    }
}

fn instance_rng(base: u64, i: u64) -> (u64, Rng) {
    let s = base.wrapping_add(i.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (s, rng::seeded(s))
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn table_json(t: &TruthTable) -> Value {
    serde_json::to_value(TableFile::from_table(t)).expect("serializable")
}

pub fn run(name: &str, p: &SuiteParams) -> Result<VerifyReport, CliError> {
    let report = match name {
        "lemma9" => regular_margins(p),
        "lemma10" => sampled_junta_distance(p),
        "erdos" => erdos_bound(p),
        "halasz" => halasz_band(p),
        "extension" => extension_monotone(p),
        "lemma26" => vertex_gaps(p),
        "lemma29" => extended_domain_gaps(p),
        "lemma22" => rounding_contract(p),
        "claim40" => weight_floors(p),
        "berryesseen" => gaussian_band_residual(p),
        "prop17" => degree_vs_relevant(p),
        "corollary13" => junta_then_weights_total(p),
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(report)
}

fn random_theta(r: &mut Rng, w: &[i64]) -> i64 {
    let total: i64 = w.iter().map(|v| v.abs()).sum();
    r.gen_range(-total / 2..=total / 2)
}

/// A unit vector in dimension n has some |w_i| >= 1/sqrt(n), so tau-regular
/// instances need tau^2 n >= 1. Unattainable pairs are skipped with a note.
fn regular_exists(n: usize, tau: &Rational, rep: &mut VerifyReport) -> bool {
    let ok = tau * tau * int(n as i64) >= int(1);
    if !ok {
        rep.notes.push(format!("n={n} tau={}: no tau-regular unit vector exists, skipped", rational::to_string(tau)));
    }
    ok
}

/// Pr[margin < tau] <= 4 tau on random tau-regular threshold functions.
pub fn regular_margins(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("lemma9", p.seed);
    let mut counter = 0u64;
    for n in p.nmin.max(1)..=p.nmax {
        for tau in &p.taus {
            if !regular_exists(n, tau, &mut rep) {
                continue;
            }
            for _ in 0..p.instances {
                counter += 1;
                let (seed, mut r) = instance_rng(p.seed, counter);
                let inst = json!({ "n": n, "tau": export::q(tau) });
                let w = match random_regular_weights(&mut r, n, tau, 1000) {
                    Ok(w) => w,
                    Err(e) => {
                        rep.error(seed, inst, e);
                        continue;
                    }
                };
                let theta = random_theta(&mut r, &w);
                let f = Ltf::from_ints(&w, theta);
                match margin_stats(&f, tau, &p.caps) {
                    Ok(m) => {
                        let slack = tau * int(4) - &m.fraction_below;
                        rep.margin(&slack);
                        let pass = m.regular && m.within_four_tau;
                        rep.record(seed, pass, || json!({ "ltf": export::ltf(&f), "tau": export::q(tau) }), || {
                            format!("fraction below tau {} exceeds 4 tau", rational::to_string(&m.fraction_below))
                        });
                    }
                    Err(e) => rep.error(seed, inst, e),
                }
            }
        }
    }
    rep
}

/// Mean exact distance between h_theta and sampled g_theta stays below
/// 5 tau plus three standard errors.
pub fn sampled_junta_distance(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("lemma10", p.seed);
    let m = p.nmax;
    let mut counter = 0u64;
    for tau in &p.taus {
        if !regular_exists(m, tau, &mut rep) {
            continue;
        }
        for _ in 0..p.instances {
            counter += 1;
            let (seed, mut r) = instance_rng(p.seed, counter);
            let inst = json!({ "m": m, "tau": export::q(tau), "draws": p.draws });
            let w = match random_regular_weights(&mut r, m, tau, 1000) {
                Ok(w) => w,
                Err(e) => {
                    rep.error(seed, inst, e);
                    continue;
                }
            };
            let v = ints(&w);
            let theta = int(random_theta(&mut r, &w));
            match sampled_junta_distance_check(&v, &theta, tau, p.draws, &mut r, &p.caps) {
                Ok(c) => {
                    rep.margin_f64(c.bound - rational::to_f64(&c.mean));
                    rep.record(seed, c.pass, || json!({ "weights": w, "theta": export::q(&theta), "tau": export::q(tau) }), || {
                        format!("mean distance {} above bound {:.6}", rational::render(&c.mean), c.bound)
                    });
                }
                Err(e) => rep.error(seed, inst, e),
            }
        }
    }
    rep
}

/// Exact p_r(a) <= C(k, k/2) / 2^k for vectors with every |a_i| >= r, plus
/// the equality case a = (1, ..., 1), r = 1/2.
pub fn erdos_bound(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("erdos", p.seed);
    let mut counter = 0u64;
    for k in p.nmin.max(1)..=p.nmax {
        let ones = vec![int(1); k];
        match erdos_check(&ones, &ratio(1, 2), &Distribution::Uniform, &p.caps) {
            Ok(c) => {
                let equal = Some(&c.p) == c.bound.as_ref();
                rep.record(p.seed, equal, || json!({ "k": k, "all_ones": true }), || "equality case not attained".into());
            }
            Err(e) => rep.error(p.seed, json!({ "k": k }), e),
        }
        for _ in 0..p.instances {
            counter += 1;
            let (seed, mut r) = instance_rng(p.seed, counter);
            let a: Vec<i64> = (0..k)
                .map(|_| {
                    let m = r.gen_range(2..=40);
                    if r.gen_bool(0.5) { m } else { -m }
                })
                .collect();
            let radius = ratio(r.gen_range(1..=4), 2).min(int(a.iter().map(|v| v.abs()).min().unwrap()));
            match erdos_check(&ints(&a), &radius, &Distribution::Uniform, &p.caps) {
                Ok(c) => {
                    let bound = c.bound.clone().unwrap();
                    rep.margin(&(&bound - &c.p));
                    rep.record(seed, c.pass == Some(true), || json!({ "a": a, "r": export::q(&radius) }), || {
                        format!("p_r = {} exceeds {}", rational::to_string(&c.p), rational::to_string(&bound))
                    });
                }
                Err(e) => rep.error(seed, json!({ "a": a }), e),
            }
        }
    }
    rep
}

/// p_1(1, ..., k) k^{3/2} inside the frozen band for k = 6..16.
pub fn halasz_band(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("halasz", p.seed);
    let ks: Vec<usize> = (6..=p.nmax.clamp(6, 16)).collect();
    let family = |k: usize| (1..=k as i64).map(int).collect::<Vec<_>>();
    match halasz_probe(&family, &int(1), ks, None, &p.caps) {
        Ok(rows) => {
            for row in rows {
                let slack = (row.normalized - HALASZ_BAND.0).min(HALASZ_BAND.1 - row.normalized);
                rep.margin_f64(slack);
                rep.record(p.seed, slack >= -1e-9, || json!({ "k": row.k, "p": export::q(&row.p) }), || {
                    format!("normalized value {:.5} outside the band", row.normalized)
                });
            }
        }
        Err(e) => rep.error(p.seed, json!({}), e),
    }
    rep.notes.push(format!("band [{}, {}]", HALASZ_BAND.0, HALASZ_BAND.1));
    rep
}

/// p_r(prefix) >= p_r(extension) under uniform and product(7/10).
pub fn extension_monotone(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("extension", p.seed);
    for i in 0..p.instances as u64 {
        let (seed, mut r) = instance_rng(p.seed, i + 1);
        let n = r.gen_range(p.nmin.max(2)..=p.nmax.max(2));
        let cut = r.gen_range(1..n);
        let a: Vec<i64> = (0..n).map(|_| r.gen_range(-12..=12)).collect();
        let radius = ratio(r.gen_range(0..=8), 2);
        for d in [Distribution::Uniform, Distribution::product_constant(n, ratio(7, 10))] {
            let av = ints(&a);
            match extension_check(&av[..cut], &av, &radius, &d, &p.caps) {
                Ok(c) => {
                    rep.margin(&(&c.p_prefix - &c.p_extension));
                    rep.record(seed, c.pass, || json!({ "a": a, "prefix": cut, "r": export::q(&radius), "dist": d.kind_name() }), || {
                        "extension concentrates more than its prefix".into()
                    });
                }
                Err(e) => rep.error(seed, json!({ "a": a }), e),
            }
        }
    }
    rep
}

fn vertex_instance(rep: &mut VerifyReport, seed: u64, t: &TruthTable, caps: &Caps) {
    match ltf_vertex(t, caps) {
        Ok(s) => {
            let represents = s.representation.to_ltf().truth_table(caps).map(|u| &u == t).unwrap_or(false);
            let verified = s.certificate.verify(&s.instance.problem).is_ok();
            for row in s.gaps.rows.iter().filter(|r| r.required) {
                if let Some(b) = &row.bound {
                    rep.margin(&(&row.gap - b));
                }
            }
            rep.record(seed, represents && verified && s.gaps.passes(), || table_json(t), || {
                format!("represents={represents} certificate={verified} gaps={}", s.gaps.passes())
            });
        }
        Err(e) => rep.error(seed, table_json(t), e),
    }
}

/// Vertex representations: exact on every point, certificate re-solves,
/// gaps above 1/(2n+2)^{2k+8}. All threshold functions up to n = 4 plus
/// random LTFs at n in [max(nmin, 6), nmax].
pub fn vertex_gaps(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("lemma26", p.seed);
    for n in 1..=p.nmax.min(4) {
        match enumerate_threshold_functions(n, &p.caps) {
            Ok(all) => all.iter().for_each(|t| vertex_instance(&mut rep, p.seed, t, &p.caps)),
            Err(e) => rep.error(p.seed, json!({ "n": n }), e),
        }
    }
    let lo = p.nmin.max(6);
    if lo <= p.nmax {
        for i in 0..p.instances as u64 {
            let (seed, mut r) = instance_rng(p.seed, i + 1);
            let n = r.gen_range(lo..=p.nmax);
            let f = random_integer_ltf(&mut r, n, 30);
            match f.truth_table(&p.caps) {
                Ok(t) => vertex_instance(&mut rep, seed, &t, &p.caps),
                Err(e) => rep.error(seed, export::ltf(&f), e),
            }
        }
    }
    rep
}

/// Random threshold function on {-1,1}^{k-1} x {-R..R}.
pub fn random_extended_threshold(r: &mut Rng, k: usize, range: i64, caps: &Caps) -> ltf_core::Result<(DomainFunction, Vec<i64>, Rational)> {
    let domain = SymmetricDomain::extended(k, range, caps)?;
    let mut w: Vec<i64> = (0..k).map(|_| r.gen_range(-6..=6)).collect();
    if w.iter().all(|&v| v == 0) {
        w[k - 1] = 1;
    }
    let theta = ratio(r.gen_range(-8..=8), 2);
    let h = DomainFunction::from_fn(domain, |y| {
        let s: i64 = w.iter().zip(y).map(|(a, b)| a * b).sum();
        int(s) >= theta
    });
    Ok((h, w, theta))
}

/// Extended-domain representations with the (2k+2R)(2k+2)^{2j+8} floors.
pub fn extended_domain_gaps(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("lemma29", p.seed);
    let mut counter = 0u64;
    for &(k, range) in &p.extended {
        let target = rep.instances + p.instances;
        let mut constants = 0usize;
        while rep.instances < target && constants < 10 * p.instances.max(1) {
            counter += 1;
            let (seed, mut r) = instance_rng(p.seed, counter);
            let (h, w, theta) = match random_extended_threshold(&mut r, k, range, &p.caps) {
                Ok(x) => x,
                Err(e) => {
                    rep.error(seed, json!({ "k": k, "R": range }), e);
                    continue;
                }
            };
            let inst = || json!({ "k": k, "R": range, "weights": w, "theta": export::q(&theta) });
            if h.values().iter().all(|&v| v) || h.values().iter().all(|&v| !v) {
                constants += 1;
                continue;
            }
            match extended_domain_repr(&h, &p.caps) {
                Ok(s) => {
                    let represents = s.representation.represents(&h);
                    for row in s.gaps.rows.iter().filter(|r| r.required) {
                        if let Some(b) = &row.bound {
                            rep.margin(&(&row.gap - b));
                        }
                    }
                    rep.record(seed, represents && s.gaps.passes(), inst, || {
                        format!("represents={represents} gaps={}", s.gaps.passes())
                    });
                }
                Err(e) => rep.error(seed, inst(), e),
            }
        }
        if constants > 0 {
            rep.notes.push(format!("k={k} R={range}: {constants} constant draws redrawn"));
        }
    }
    rep
}

/// Normalized `f` with the largest radius 2^-j (j <= 16) whose exact p_r is at most eps.
pub fn radius_with_small_levy(g: &Ltf, eps: &Rational, caps: &Caps) -> ltf_core::Result<Option<(Rational, Rational)>> {
    let mut radius = int(1);
    for _ in 0..=16 {
        let p = levy(g.weights(), &radius, &Distribution::Uniform, LevyMode::Exact, caps)?.p;
        if p <= *eps {
            return Ok(Some((radius, p)));
        }
        radius /= int(2);
    }
    Ok(None)
}

pub fn normalized(f: &Ltf) -> Ltf {
    let max = f.max_abs_weight();
    Ltf::new(f.weights().iter().map(|w| w / &max).collect(), f.theta() / &max)
}

/// Rounding with exact p_r <= eps verified keeps the exact distance below
/// 2 eps, and the grid max weight equals ceil(max |w_i| / alpha).
pub fn rounding_contract(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("lemma22", p.seed);
    let mut attempts = 0u64;
    let mut skipped = 0usize;
    while rep.instances < p.instances && attempts < 50 * p.instances as u64 {
        attempts += 1;
        let (seed, mut r) = instance_rng(p.seed, attempts);
        let n = r.gen_range(p.nmin.max(4)..=p.nmax.max(4));
        let w = random_positive_weights(&mut r, n, 40)
            .into_iter()
            .map(|v| if r.gen_bool(0.5) { v } else { -v })
            .collect::<Vec<_>>();
        let theta = random_theta(&mut r, &w);
        let g = normalized(&Ltf::from_ints(&w, theta));
        let (radius, pr) = match radius_with_small_levy(&g, &p.eps, &p.caps) {
            Ok(Some(x)) => x,
            Ok(None) => {
                skipped += 1;
                continue;
            }
            Err(e) => {
                rep.error(seed, export::ltf(&g), e);
                continue;
            }
        };
        let spec = match RoundingSpec::new(&radius, &p.eps, n, RoundingMode::Uniform) {
            Ok(s) => s,
            Err(e) => {
                rep.error(seed, export::ltf(&g), e);
                continue;
            }
        };
        let outcome = round_weights(&g, &spec).and_then(|h| {
            let d = distance(Function::Ltf(&g), Function::Ltf(&h.ltf), &Distribution::Uniform, DistanceMode::Exact, &p.caps)?;
            Ok((h, d))
        });
        match outcome {
            Ok((h, d)) => {
                let goal = &p.eps * int(2);
                rep.margin(&(&goal - &d.value));
                let weight_ok = h.max_weight == h.ceiling;
                rep.record(seed, d.value <= goal && weight_ok, || {
                    json!({ "g": export::ltf(&g), "r": export::q(&radius), "p_r": export::q(&pr), "alpha": export::q(&spec.alpha) })
                }, || format!("distance {} max weight {} ceiling {}", rational::to_string(&d.value), h.max_weight, h.ceiling));
            }
            Err(e) => rep.error(seed, export::ltf(&g), e),
        }
    }
    if skipped > 0 {
        rep.notes.push(format!("{skipped} draws had no radius 2^-j with p_r <= eps and were redrawn"));
    }
    rep
}

/// Exact-mode weight floors 1/(4 k^k n) on vertex representations. These
/// floors hold for some representation, so failures are reported, not fatal.
pub fn weight_floors(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("claim40", p.seed);
    let mut tables = Vec::new();
    for n in 1..=p.nmax.min(4) {
        if let Ok(all) = enumerate_threshold_functions(n, &p.caps) {
            tables.extend(all.into_iter().map(|t| (p.seed, t)));
        }
    }
    for i in 0..p.instances as u64 {
        let (seed, mut r) = instance_rng(p.seed, i + 1);
        let n = r.gen_range(p.nmin.max(2)..=p.nmax.max(2));
        if let Ok(t) = random_integer_ltf(&mut r, n, 30).truth_table(&p.caps) {
            tables.push((seed, t));
        }
    }
    for (seed, t) in tables {
        if t.is_constant().is_some() {
            continue;
        }
        let result = ltf_vertex(&t, &p.caps).and_then(|s| weight_floor_check(&s.representation.nonzero_weights(), FloorMode::Exact));
        match result {
            Ok(rows) => {
                for row in &rows {
                    if let Some(f) = &row.floor_exact {
                        rep.margin(&(&row.weight - f));
                    }
                }
                let pass = rows.iter().all(|r| r.pass);
                rep.record(seed, pass, || table_json(&t), || "a sorted weight is below 1/(4 k^k n)".into());
            }
            Err(e) => rep.error(seed, table_json(&t), e),
        }
    }
    rep.notes.push("floors assert existence of some representation; a failure is not a counterexample".into());
    rep
}

/// |exact band probability - Gaussian band| <= 2 max|w_i| / sigma.
pub fn gaussian_band_residual(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("berryesseen", p.seed);
    for i in 0..p.instances as u64 {
        let (seed, mut r) = instance_rng(p.seed, i + 1);
        let n = r.gen_range(p.nmin.max(1)..=p.nmax.max(1));
        let w: Vec<i64> = (0..n).map(|_| r.gen_range(-20..=20)).map(|v: i64| if v == 0 { 1 } else { v }).collect();
        let sigma = w.iter().map(|v| (v * v) as f64).sum::<f64>().sqrt();
        let a = r.gen_range(-2.0..2.0) * sigma;
        let b = a + r.gen_range(0.0..2.0) * sigma;
        let (alpha, beta) = match (rational::approx_f64(a, 20), rational::approx_f64(b, 20)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => continue,
        };
        match gaussian_band(&ints(&w), &alpha, &beta, &p.caps) {
            Ok(g) => {
                rep.margin_f64(g.two_tau - g.residual);
                rep.record(seed, g.pass, || json!({ "w": w, "alpha": export::q(&alpha), "beta": export::q(&beta) }), || {
                    format!("residual {:.6} above 2 tau {:.6}", g.residual, g.two_tau)
                });
            }
            Err(e) => rep.error(seed, json!({ "w": w }), e),
        }
    }
    rep
}

/// Fourier degree against the number of relevant variables for every
/// threshold function up to n = min(nmax, 4).
pub fn degree_vs_relevant(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("prop17", p.seed);
    for n in 1..=p.nmax.min(4) {
        match enumerate_threshold_functions(n, &p.caps) {
            Ok(all) => {
                for t in all {
                    match prop17_check(&t, &p.caps) {
                        Ok(c) => rep.record(p.seed, c.holds, || table_json(&t), || {
                            format!("degree {} with {} relevant variables", c.degree, c.relevant)
                        }),
                        Err(e) => rep.error(p.seed, table_json(&t), e),
                    }
                }
            }
            Err(e) => rep.error(p.seed, json!({ "n": n }), e),
        }
    }
    rep
}

/// Junta then low weight: total measured distance at most eps.
pub fn junta_then_weights_total(p: &SuiteParams) -> VerifyReport {
    let mut rep = VerifyReport::new("corollary13", p.seed);
    let mut family: Vec<(String, Ltf)> = Vec::new();
    for (a, b) in [(2, 9), (3, 7), (1, 5)] {
        if a + b <= p.nmax.max(6) {
            if let Ok(f) = prop14_witness(a, b) {
                family.push((format!("witness({a},{b})"), f));
            }
        }
    }
    family.push(("majority(9)".into(), Ltf::majority(9.min(p.nmax | 1))));
    family.push(("dictator".into(), Ltf::dictator(4, 0)));
    let opts = PipelineOptions {
        seed: p.seed,
        ..PipelineOptions::default()
    };
    for (i, (name, f)) in family.iter().enumerate() {
        let (seed, mut r) = instance_rng(p.seed, i as u64 + 1);
        match junta_then_weights(f, &p.eps, &opts, &mut r, &p.caps) {
            Ok(c) => {
                rep.margin(&(&p.eps - &c.distance.value));
                rep.record(seed, c.met, || json!({ "name": name, "ltf": export::ltf(f) }), || {
                    format!("total distance {} above eps", rational::to_string(&c.distance.value))
                });
                rep.notes.push(format!(
                    "{name}: sum of squared weights {} against Inf(f)^2 {}",
                    c.sum_sq,
                    rational::render(&c.total_influence_sq)
                ));
            }
            Err(e) => rep.error(seed, json!({ "name": name }), e),
        }
    }
    rep
}

