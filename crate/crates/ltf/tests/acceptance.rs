//! Acceptance criteria, one test each. Every test prints a single
//! `criterion NN ... PASS|FAIL` line to stderr (outside the test harness
//! capture) and then asserts the criterion.

use std::io::Write as _;
use std::sync::OnceLock;
use std::time::Instant;

use ltf::suites::{self, SuiteParams, VerifyReport, HALASZ_BAND};
use ltf_core::anticonc::{levy, LevyMode};
use ltf_core::cube::random::{random_integer_ltf, random_table};
use ltf_core::cube::{hadamard_support, parity_support, Distribution, Function, TruthTable};
use ltf_core::fourier::{influences, wht};
use ltf_core::junta::prop14_witness;
use ltf_core::lp::{min_weight_search, omb_table};
use ltf_core::rational::{int, ratio, Rational};
use ltf_core::weights::{
    pipeline_critical, pipeline_erdos_from, pipeline_halasz_from, vertex_representation, PipelineOptions, PipelineReport,
    SortedRepresentation,
};
use ltf_core::{rng, Caps, Ltf};
use num_bigint::BigInt;
use num_traits::{One, Signed};

const SEED: u64 = 20_240_601;

fn caps() -> Caps {
    Caps::default()
}

fn report(number: u32, name: &str, pass: bool, detail: &str, started: Instant) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {number:02} {name:<34} {verdict}  {detail} [{:.1}s]\n", started.elapsed().as_secs_f64());
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn suite_summary(r: &VerifyReport) -> String {
    let first = r.failures.first().map(|f| format!("; first failure: {}", f.reason)).unwrap_or_default();
    let note = r.notes.first().map(|n| format!("; note: {n}")).unwrap_or_default();
    format!("{} instances, {} passed, {} failed{first}{note}", r.instances, r.passed, r.failed)
}

// Brute-force oracles.

fn point(idx: u64, n: usize) -> Vec<i64> {
    (0..n).map(|i| if idx >> i & 1 == 1 { 1 } else { -1 }).collect()
}

fn ltf_value(f: &Ltf, x: &[i64]) -> bool {
    let s: Rational = f.weights().iter().zip(x).map(|(w, &v)| w * int(v)).sum();
    s >= *f.theta()
}

fn table_value(t: &TruthTable, x: &[i64]) -> bool {
    let idx = x.iter().enumerate().filter(|(_, &v)| v == 1).fold(0u64, |acc, (i, _)| acc | 1 << i);
    t.get(idx)
}

fn point_mass(d: &Distribution, x: &[i64]) -> Rational {
    match d {
        Distribution::Uniform => Rational::new(BigInt::one(), BigInt::one() << x.len()),
        Distribution::Product(p) => p
            .iter()
            .zip(x)
            .map(|(p, &v)| if v == 1 { p.clone() } else { Rational::one() - p })
            .product(),
        Distribution::Explicit(_) => unreachable!("explicit supports are summed directly"),
    }
}

fn oracle_distance(f: &TruthTable, g: &Ltf, d: &Distribution) -> Rational {
    if let Distribution::Explicit(support) = d {
        return support
            .iter()
            .filter(|(x, _)| {
                let x: Vec<i64> = x.iter().map(|&v| v as i64).collect();
                table_value(f, &x) != ltf_value(g, &x)
            })
            .map(|(_, p)| p.clone())
            .sum();
    }
    let n = f.n();
    (0..1u64 << n)
        .map(|i| point(i, n))
        .filter(|x| table_value(f, x) != ltf_value(g, x))
        .map(|x| point_mass(d, &x))
        .sum()
}

#[test]
fn criterion_01_fourier_exactness() {
    let started = Instant::now();
    let mut r = rng::seeded(SEED);
    let mut problems = Vec::new();
    for i in 0..1000 {
        let n = 4 + i % 9;
        let t = random_table(&mut r, n);
        if wht(&t, &caps()).unwrap().sum_of_squares() != int(1) {
            problems.push(format!("Parseval fails on a table at n={n}"));
        }
    }
    for n in 1..=12 {
        for _ in 0..100 {
            let f = random_integer_ltf(&mut r, n, 20);
            let t = f.truth_table(&caps()).unwrap();
            let spec = wht(&t, &caps()).unwrap();
            let inf = influences(&t, &caps()).unwrap();
            for i in 0..n {
                // Correlation with x_i, summed directly.
                let corr: i64 = (0..1u64 << n).map(|idx| t.value(idx) as i64 * if idx >> i & 1 == 1 { 1 } else { -1 }).sum();
                let chow = Rational::new(corr.into(), (1i64 << n).into());
                if spec.coeff(1 << i) != chow || inf.influence(i) != chow.abs() {
                    problems.push(format!("influence mismatch at n={n} i={i}"));
                }
            }
        }
    }
    let pass = problems.is_empty() && started.elapsed().as_secs() < 60;
    let detail = format!("1000 tables, 1200 LTFs; {} mismatches", problems.len());
    report(1, "Fourier exactness", pass, &detail, started);
    assert!(pass, "{problems:?}");
}

#[test]
fn criterion_02_margin_lemma() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmin = 8;
    p.nmax = 14;
    p.instances = 100;
    p.taus = vec![ratio(1, 20), ratio(1, 10), ratio(1, 5)];
    let r = suites::regular_margins(&p);
    let expected = 7 * 3 * 100;
    let pass = r.instances == expected && r.failed == 0;
    report(2, "margin <= 4 tau on regular LTFs", pass, &format!("expected {expected}; {}", suite_summary(&r)), started);
    assert!(pass, "{}", suite_summary(&r));
}

#[test]
fn criterion_03_sampled_junta_distance() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmax = 12;
    p.instances = 20;
    p.taus = vec![ratio(1, 10)];
    p.draws = 200;
    let r = suites::sampled_junta_distance(&p);
    let pass = r.instances == 20 && r.failed == 0 && started.elapsed().as_secs() < 300;
    report(3, "sampled g_theta mean distance", pass, &suite_summary(&r), started);
    assert!(pass, "{}", suite_summary(&r));
}

#[test]
fn criterion_04_erdos_bound() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmin = 4;
    p.nmax = 16;
    p.instances = 200;
    let r = suites::erdos_bound(&p);
    let ones = vec![int(1); 4];
    let p4 = levy(&ones, &ratio(1, 2), &Distribution::Uniform, LevyMode::Exact, &caps()).unwrap().p;
    let expected = 13 * 201;
    let pass = r.instances == expected && r.failed == 0 && p4 == ratio(6, 16);
    let detail = format!("p_1/2(1,1,1,1) = {p4}; {}", suite_summary(&r));
    report(4, "Erdos bound, equality at all ones", pass, &detail, started);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_05_halasz_trend() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmax = 16;
    let r = suites::halasz_band(&p);
    let width_ok = HALASZ_BAND.1 - HALASZ_BAND.0 <= 2.0 * HALASZ_BAND.0;
    let pass = r.instances == 11 && r.failed == 0 && width_ok;
    let detail = format!("band [{:.5}, {:.5}]; {}", HALASZ_BAND.0, HALASZ_BAND.1, suite_summary(&r));
    report(5, "Halasz p_1 k^(3/2) band", pass, &detail, started);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_06_extension() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmin = 2;
    p.nmax = 14;
    p.instances = 500;
    let r = suites::extension_monotone(&p);
    let pass = r.instances == 1000 && r.failed == 0;
    report(6, "extension never concentrates", pass, &suite_summary(&r), started);
    assert!(pass, "{}", suite_summary(&r));
}

#[test]
fn criterion_07_vertex_gaps() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmin = 6;
    p.nmax = 10;
    p.instances = 50;
    let r = suites::vertex_gaps(&p);
    let pass = r.instances > 50 && r.failed == 0 && started.elapsed().as_secs() < 600;
    report(7, "vertex representation gaps", pass, &suite_summary(&r), started);
    assert!(pass, "{}", suite_summary(&r));
}

#[test]
fn criterion_08_extended_domain_gaps() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.instances = 20;
    p.extended = vec![(3, 4), (4, 6), (4, 8)];
    let r = suites::extended_domain_gaps(&p);
    let pass = r.instances == 60 && r.failed == 0;
    report(8, "extended-domain gaps", pass, &suite_summary(&r), started);
    assert!(pass, "{}", suite_summary(&r));
}

#[test]
fn criterion_09_rounding_contract() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmin = 4;
    p.nmax = 14;
    p.instances = 50;
    p.eps = ratio(1, 10);
    let r = suites::rounding_contract(&p);
    let pass = r.instances == 50 && r.failed == 0;
    report(9, "rounding keeps distance <= 2 eps", pass, &suite_summary(&r), started);
    assert!(pass, "{}", suite_summary(&r));
}

// Frozen pipeline family.

struct Member {
    name: &'static str,
    f: Ltf,
    table: TruthTable,
    rep: SortedRepresentation,
}

fn family() -> &'static [Member] {
    static FAMILY: OnceLock<Vec<Member>> = OnceLock::new();
    FAMILY.get_or_init(|| {
        let mut r = rng::seeded(2024);
        let _ = random_integer_ltf(&mut r, 8, 20);
        let random10 = random_integer_ltf(&mut r, 10, 20);
        let members = vec![
            ("majority(9)", Ltf::majority(9)),
            ("majority(15)", Ltf::majority(15)),
            ("witness(2,9)", prop14_witness(2, 9).unwrap()),
            ("witness(4,13)", prop14_witness(4, 13).unwrap()),
            ("random(10)", random10),
        ];
        members
            .into_iter()
            .map(|(name, f)| {
                let table = f.truth_table(&caps()).unwrap();
                let rep = vertex_representation(&table, &caps()).unwrap();
                Member { name, f, table, rep }
            })
            .collect()
    })
}

fn eps_list() -> [Rational; 3] {
    [ratio(1, 2), ratio(3, 10), ratio(1, 5)]
}

/// Runs the three pipelines and checks each report against the oracle.
fn run_pipelines(m: &Member, eps: &Rational, d: &Distribution, problems: &mut Vec<String>) -> [PipelineReport; 3] {
    let opts = PipelineOptions::default();
    let g = Function::Table(&m.table);
    let reports = [
        pipeline_erdos_from(g, &m.rep, eps, d, &opts, &caps()).unwrap(),
        pipeline_halasz_from(g, &m.rep, eps, d, &opts, &caps()).unwrap(),
        pipeline_critical(&m.f, eps, d, &opts, &caps()).unwrap(),
    ];
    for r in &reports {
        let oracle = oracle_distance(&m.table, &r.output, d);
        let goal = eps * int(2);
        if r.distance.value != oracle || oracle > goal || !r.met {
            problems.push(format!(
                "{} {} eps={eps} under {}: distance {} (oracle {oracle})",
                m.name,
                r.method.name(),
                d.kind_name(),
                r.distance.value
            ));
        }
        if !r.output.weights().iter().all(|w| w.is_integer()) {
            problems.push(format!("{} {}: non-integer output", m.name, r.method.name()));
        }
    }
    reports
}

/// (erdos, halasz, critical) max weights.
type MaxWeights = (i64, i64, i64);

/// Per member, for eps = 1/2, 3/10, 1/5.
const BASELINES: [(&str, [MaxWeights; 3]); 5] = [
    ("majority(9)", [(5, 12, 1), (7, 26, 26), (7, 29, 29)]),
    ("majority(15)", [(5, 21, 1), (7, 49, 1), (8, 54, 54)]),
    ("witness(2,9)", [(16, 15, 12), (26, 55, 55), (29, 61, 61)]),
    ("witness(4,13)", [(5, 29, 0), (39, 134, 108), (48, 148, 148)]),
    ("random(10)", [(9, 9, 3), (85, 17, 17), (94, 19, 19)]),
];

#[test]
fn criterion_10_pipelines_end_to_end() {
    let started = Instant::now();
    let mut problems = Vec::new();
    let mut trend_violations = Vec::new();
    let to = |v: &BigInt| i64::try_from(v).unwrap();
    for (m, (name, baseline)) in family().iter().zip(BASELINES) {
        assert_eq!(m.name, name);
        let mut got = Vec::new();
        for eps in eps_list() {
            let [e, h, c] = run_pipelines(m, &eps, &Distribution::Uniform, &mut problems);
            got.push((to(&e.max_weight), to(&h.max_weight), to(&c.max_weight)));
            if eps == ratio(1, 5) && h.max_weight > e.max_weight {
                trend_violations.push(format!("{name}: halasz {} > erdos {}", h.max_weight, e.max_weight));
            }
        }
        if got != baseline {
            problems.push(format!("{name}: max weights {got:?} differ from baseline {baseline:?}"));
        }
    }
    let pass = problems.is_empty() && trend_violations.is_empty();
    let detail = format!(
        "{} distance/baseline problems; trend at eps=1/5: {}",
        problems.len(),
        if trend_violations.is_empty() { "holds".to_string() } else { trend_violations.join(", ") }
    );
    report(10, "pipelines end to end", pass, &detail, started);
    assert!(problems.is_empty(), "{problems:#?}");
    assert!(trend_violations.is_empty(), "halasz above erdos at eps = 1/5: {trend_violations:?}");
}

#[test]
fn criterion_11_distributional_variants() {
    let started = Instant::now();
    let mut problems = Vec::new();
    let mut runs = 0;
    for m in family() {
        let n = m.f.n();
        let mut dists = vec![Distribution::product_constant(n, ratio(3, 4)), parity_support(n).unwrap()];
        if (n + 1).is_power_of_two() {
            dists.push(hadamard_support((n + 1).trailing_zeros() as usize).unwrap());
        }
        for d in &dists {
            for eps in eps_list() {
                let reports = run_pipelines(m, &eps, d, &mut problems);
                runs += 3;
                if matches!(d, Distribution::Explicit(_)) && reports.iter().any(|r| !r.distance.exact) {
                    problems.push(format!("{}: k-wise distance not an exact support sum", m.name));
                }
            }
        }
    }
    let pass = problems.is_empty();
    report(11, "product and k-wise variants", pass, &format!("{runs} pipeline runs, {} problems", problems.len()), started);
    assert!(pass, "{problems:#?}");
}

/// Smallest max |w_i| over integer weights and half-integer thresholds.
fn oracle_min_weight(t: &TruthTable) -> u64 {
    let n = t.n();
    for w_max in 1i64.. {
        let range = 2 * w_max + 1;
        for code in 0..range.pow(n as u32) {
            let w: Vec<i64> = (0..n).map(|i| code / range.pow(i as u32) % range - w_max).collect();
            if w.iter().map(|v| v.abs()).max() != Some(w_max) {
                continue;
            }
            let bound = n as i64 * w_max + 1;
            for twice_theta in (-2 * bound..=2 * bound).filter(|v| v % 2 != 0) {
                let fits = (0..1u64 << n).all(|idx| {
                    let s: i64 = point(idx, n).iter().zip(&w).map(|(x, w)| x * w).sum();
                    (2 * s >= twice_theta) == t.get(idx)
                });
                if fits {
                    return w_max as u64;
                }
            }
        }
    }
    unreachable!()
}

#[test]
fn criterion_12_odd_max_bit_growth() {
    let started = Instant::now();
    let mut weights = Vec::new();
    let mut agree = true;
    for n in 2..=4 {
        let t = omb_table(n, &caps()).unwrap();
        let found = (1..=16).find_map(|w| min_weight_search(&t, w, &caps()).unwrap()).expect("found within 16");
        agree &= found.weight == oracle_min_weight(&t);
        weights.push(found.weight);
    }
    let increasing = weights.windows(2).all(|w| w[0] < w[1]);
    let pass = agree && increasing;
    let detail = format!("min max-weights at n=2,3,4: {weights:?}; oracle agrees: {agree}; strictly increasing: {increasing}");
    report(12, "ODD-MAX-BIT weight growth", pass, &detail, started);
    assert!(agree, "search disagrees with the exhaustive oracle");
    assert!(increasing, "{detail}");
}

#[test]
fn criterion_13_gaussian_band() {
    let started = Instant::now();
    let mut p = SuiteParams::new(SEED);
    p.nmin = 8;
    p.nmax = 16;
    p.instances = 200;
    let r = suites::gaussian_band_residual(&p);
    let pass = r.instances == 200 && r.failed == 0;
    report(13, "Gaussian band residual <= 2 tau", pass, &suite_summary(&r), started);
    assert!(pass, "{}", suite_summary(&r));
}
