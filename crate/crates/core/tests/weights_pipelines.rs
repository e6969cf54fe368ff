use ltf_core::anticonc::{levy, LevyMode};
use ltf_core::cube::{hadamard_support, parity_support};
use ltf_core::cube::random::random_integer_ltf;
use ltf_core::cube::{Distribution, Function};
use ltf_core::fourier::CriticalIndex;
use ltf_core::junta::prop14_witness;
use ltf_core::rational::{int, ratio, Rational};
use ltf_core::weights::{
    junta_then_weights, pipeline_critical, pipeline_erdos, pipeline_erdos_from, pipeline_halasz, pipeline_halasz_from,
    round_weights, truncate_to_junta, vertex_representation, CriticalBranch, PipelineOptions, PipelineReport, RoundingMode,
    RoundingSpec,
};
use ltf_core::{rng, Caps, Ltf};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn caps() -> Caps {
    Caps::default()
}

fn point(idx: u64, n: usize) -> Vec<Rational> {
    (0..n).map(|i| if idx >> i & 1 == 1 { int(1) } else { int(-1) }).collect()
}

fn sign_of(f: &Ltf, x: &[Rational]) -> bool {
    let s: Rational = f.weights().iter().zip(x).map(|(w, v)| w * v).sum();
    s >= *f.theta()
}

fn mass(d: &Distribution, x: &[Rational]) -> Rational {
    match d {
        Distribution::Uniform => Rational::new(BigInt::one(), BigInt::one() << x.len()),
        Distribution::Product(p) => p
            .iter()
            .zip(x)
            .map(|(p, v)| if v.is_positive() { p.clone() } else { Rational::one() - p })
            .product(),
        Distribution::Explicit(_) => unreachable!(),
    }
}

/// Brute-force Pr_D[f != g] over every point, or over the explicit support.
fn oracle_distance(f: &Ltf, g: &Ltf, d: &Distribution) -> Rational {
    let n = f.n();
    if let Distribution::Explicit(support) = d {
        return support
            .iter()
            .filter(|(x, _)| {
                let x: Vec<Rational> = x.iter().map(|&v| int(v as i64)).collect();
                sign_of(f, &x) != sign_of(g, &x)
            })
            .map(|(_, p)| p.clone())
            .sum();
    }
    (0..1u64 << n)
        .map(|i| point(i, n))
        .filter(|x| sign_of(f, x) != sign_of(g, x))
        .map(|x| mass(d, &x))
        .sum()
}

fn check_report(f: &Ltf, r: &PipelineReport, eps: &Rational, d: &Distribution) {
    assert!(r.output.weights().iter().all(|w| w.is_integer()));
    assert_eq!(r.distance.value, oracle_distance(f, &r.output, d));
    assert_eq!(r.met, r.distance.value <= eps * int(2));
    let max = r.output.weights().iter().map(|w| w.abs().to_integer()).max().unwrap();
    assert_eq!(r.max_weight, max);
}

fn max_weights(f: &Ltf, eps_list: &[Rational], d: &Distribution) -> Vec<(i64, i64, i64)> {
    let t = f.truth_table(&caps()).unwrap();
    let rep = vertex_representation(&t, &caps()).unwrap();
    let opts = PipelineOptions::default();
    eps_list
        .iter()
        .map(|eps| {
            let e = pipeline_erdos_from(Function::Table(&t), &rep, eps, d, &opts, &caps()).unwrap();
            let h = pipeline_halasz_from(Function::Table(&t), &rep, eps, d, &opts, &caps()).unwrap();
            let c = pipeline_critical(f, eps, d, &opts, &caps()).unwrap();
            for r in [&e, &h, &c] {
                check_report(f, r, eps, d);
                assert!(r.met);
            }
            let to = |v: &BigInt| i64::try_from(v).unwrap();
            (to(&e.max_weight), to(&h.max_weight), to(&c.max_weight))
        })
        .collect()
}

fn eps_family() -> Vec<Rational> {
    vec![ratio(1, 2), ratio(3, 10), ratio(1, 5)]
}

#[test]
fn majority9_weights_frozen() {
    assert_eq!(
        max_weights(&Ltf::majority(9), &eps_family(), &Distribution::Uniform),
        vec![(5, 12, 1), (7, 26, 26), (7, 29, 29)]
    );
}

#[test]
fn witness_weights_frozen() {
    assert_eq!(
        max_weights(&prop14_witness(2, 9).unwrap(), &eps_family(), &Distribution::Uniform),
        vec![(16, 15, 12), (26, 55, 55), (29, 61, 61)]
    );
}

#[test]
fn random_ltf_weights_frozen() {
    let mut r = rng::seeded(2024);
    let _ = random_integer_ltf(&mut r, 8, 20);
    let f = random_integer_ltf(&mut r, 10, 20);
    assert_eq!(
        max_weights(&f, &eps_family(), &Distribution::Uniform),
        vec![(9, 9, 3), (85, 17, 17), (94, 19, 19)]
    );
}

#[test]
fn majority9_erdos_uniform_and_product() {
    let f = Ltf::majority(9);
    let eps = ratio(3, 10);
    for d in [Distribution::Uniform, Distribution::product_constant(9, ratio(7, 10))] {
        let r = pipeline_erdos(&f, &eps, &d, &PipelineOptions::default(), &caps()).unwrap();
        check_report(&f, &r, &eps, &d);
        assert!(r.distance.value <= ratio(3, 5));
    }
}

#[test]
fn kwise_supports_use_exact_support_sums() {
    let f = Ltf::majority(7);
    let eps = ratio(3, 10);
    let hadamard = hadamard_support(3).unwrap();
    for d in [parity_support(7).unwrap(), hadamard] {
        let r = pipeline_erdos(&f, &eps, &d, &PipelineOptions::default(), &caps()).unwrap();
        assert!(r.distance.exact);
        check_report(&f, &r, &eps, &d);
    }
}

#[test]
fn halasz_ceiling_on_random_ltf() {
    let mut r = rng::seeded(5);
    let f = random_integer_ltf(&mut r, 10, 30);
    let eps = ratio(2, 5);
    let rep = pipeline_halasz(&f, &eps, &Distribution::Uniform, &PipelineOptions::default(), &caps()).unwrap();
    check_report(&f, &rep, &eps, &Distribution::Uniform);
    assert!(rep.met);
    let alpha = rep.alpha.clone().unwrap();
    let ceiling = (Rational::one() / &alpha).ceil().to_integer();
    assert_eq!(rep.ceiling, Some(ceiling.clone()));
    assert!(rep.max_weight <= ceiling);
}

#[test]
fn halasz_small_n_falls_back() {
    let f = Ltf::majority(3);
    let r = pipeline_halasz(&f, &ratio(9, 10), &Distribution::Uniform, &PipelineOptions::default(), &caps()).unwrap();
    assert!(r.fallback);
    assert_eq!(r.k, Some(2));
    assert!(r.distance.value.is_zero());
}

#[test]
fn dictator_everywhere_weight_one() {
    let f = Ltf::dictator(5, 3);
    let opts = PipelineOptions::default();
    let eps = ratio(1, 4);
    for r in [
        pipeline_erdos(&f, &eps, &Distribution::Uniform, &opts, &caps()).unwrap(),
        pipeline_halasz(&f, &eps, &Distribution::Uniform, &opts, &caps()).unwrap(),
        pipeline_critical(&f, &eps, &Distribution::Uniform, &opts, &caps()).unwrap(),
    ] {
        assert_eq!(r.max_weight, BigInt::one());
        assert!(r.distance.value.is_zero());
    }
}

#[test]
fn critical_small_index_on_heavy_head() {
    let mut w = vec![4i64];
    w.extend(std::iter::repeat_n(1, 16));
    let f = Ltf::from_ints(&w, 0);
    let eps = ratio(2, 5);
    let r = pipeline_critical(&f, &eps, &Distribution::Uniform, &PipelineOptions::default(), &caps()).unwrap();
    let trace = r.trace.clone().unwrap();
    assert_eq!(trace.ell, CriticalIndex::Finite(2));
    assert_eq!(trace.branch, CriticalBranch::SmallIndex);
    assert!(trace.r_used.unwrap() <= trace.r0.unwrap());
    check_report(&f, &r, &eps, &Distribution::Uniform);
    assert!(r.met);
}

#[test]
fn critical_geometric_weights_truncate() {
    let w: Vec<Rational> = (0..10).map(|i| Rational::new(BigInt::one(), BigInt::one() << i)).collect();
    let f = Ltf::new(w, ratio(1, 3));
    let eps = ratio(2, 5);
    let r = pipeline_critical(&f, &eps, &Distribution::Uniform, &PipelineOptions::default(), &caps()).unwrap();
    let trace = r.trace.clone().unwrap();
    assert_eq!(trace.ell, CriticalIndex::Infinite);
    assert_eq!(trace.branch, CriticalBranch::Truncated);
    assert!(trace.inner.is_some());
    check_report(&f, &r, &eps, &Distribution::Uniform);
}

#[test]
fn rounding_contract_on_regular_forms() {
    let mut r = rng::seeded(17);
    let eps = ratio(1, 10);
    let mut checked = 0;
    while checked < 10 {
        let f = random_integer_ltf(&mut r, 12, 6);
        if f.weights().iter().any(Zero::is_zero) {
            continue;
        }
        let max = f.max_abs_weight();
        let g = Ltf::new(f.weights().iter().map(|w| w / &max).collect(), f.theta() / &max);
        let mut radius = ratio(1, 1);
        let p = loop {
            let p = levy(g.weights(), &radius, &Distribution::Uniform, LevyMode::Exact, &caps()).unwrap().p;
            if p <= eps || radius < ratio(1, 1 << 12) {
                break p;
            }
            radius /= int(2);
        };
        if p > eps {
            continue;
        }
        let spec = RoundingSpec::new(&radius, &eps, 12, RoundingMode::Uniform).unwrap();
        let rounded = round_weights(&g, &spec).unwrap();
        assert!(oracle_distance(&g, &rounded.ltf, &Distribution::Uniform) <= &eps * int(2));
        assert_eq!(rounded.max_weight, (Rational::one() / &spec.alpha).ceil().to_integer());
        checked += 1;
    }
}

#[test]
fn general_mode_error_below_radius() {
    let g = Ltf::new(vec![ratio(1, 1), ratio(2, 3), ratio(-3, 7), ratio(1, 5)], ratio(1, 9));
    let r = ratio(1, 10);
    let spec = RoundingSpec::new(&r, &ratio(1, 10), 4, RoundingMode::General).unwrap();
    let rounded = round_weights(&g, &spec).unwrap();
    assert!(rounded.error_l1 <= &spec.alpha * int(4) / int(2));
    assert!(rounded.error_l1 < r);
}

#[test]
fn truncation_keeps_heaviest() {
    let mut w = vec![4i64];
    w.extend(std::iter::repeat_n(1, 16));
    let f = Ltf::from_ints(&w, 1);
    let g = truncate_to_junta(&f, 1).unwrap();
    assert_eq!(g.weights()[0], int(4));
    assert!(g.weights()[1..].iter().all(Zero::is_zero));
    assert_eq!(truncate_to_junta(&f, 17).unwrap(), f);
    assert!(truncate_to_junta(&f, 0).is_err());
}

#[test]
fn composition_reports_influence() {
    let opts = PipelineOptions::default();
    let f = prop14_witness(2, 9).unwrap();
    let r = junta_then_weights(&f, &ratio(3, 10), &opts, &mut rng::seeded(3), &caps()).unwrap();
    assert!(r.met);
    assert_eq!(r.distance.value, oracle_distance(&f, &r.output, &Distribution::Uniform));
    assert!(r.total_influence_sq.is_positive());

    let maj = Ltf::majority(9);
    let r = junta_then_weights(&maj, &ratio(3, 10), &opts, &mut rng::seeded(3), &caps()).unwrap();
    assert_eq!(r.distance.value, oracle_distance(&maj, &r.output, &Distribution::Uniform));

    let d = Ltf::dictator(4, 0);
    let r = junta_then_weights(&d, &ratio(3, 10), &opts, &mut rng::seeded(3), &caps()).unwrap();
    assert_eq!(r.sum_sq, BigInt::one());
    assert_eq!(r.total_influence_sq, int(1));
}
