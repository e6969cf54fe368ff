use ltf_core::cube::random::random_integer_ltf;
use ltf_core::lp::{
    self, build_ltf_lp, enumerate_threshold_functions, extended_domain_repr, is_threshold, ltf_vertex,
    ltf_vertex_with, min_weight_search, omb_table, BasisRow, Coord, DomainFunction, LpOptions, LpProblem,
    RowTag, SymmetricDomain,
};
use ltf_core::rational::{int, Rational};
use ltf_core::{rng, Caps, Error, Ltf, TruthTable};
use num_traits::{Signed, Zero};

fn caps() -> Caps {
    Caps::default()
}

fn table(l: &Ltf) -> TruthTable {
    l.truth_table(&caps()).unwrap()
}

/// Minimum of the objective over all vertices, by solving every square subsystem.
fn vertex_enumeration_optimum(lp: &LpProblem) -> Option<Rational> {
    let m = lp.vars();
    let total = lp.rows() + m;
    let mut best: Option<Rational> = None;
    let mut pick = vec![0usize; m];
    fn rec(
        lp: &LpProblem,
        start: usize,
        depth: usize,
        total: usize,
        pick: &mut Vec<usize>,
        best: &mut Option<Rational>,
    ) {
        let m = lp.vars();
        if depth == m {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for &p in pick.iter() {
                if p < lp.rows() {
                    a.push(lp.row(p).iter().map(|&c| int(c)).collect::<Vec<_>>());
                    b.push(int(lp.rhs(p)));
                } else {
                    let mut r = vec![int(0); m];
                    r[p - lp.rows()] = int(1);
                    a.push(r);
                    b.push(int(0));
                }
            }
            if let Some(x) = lp::simplex::solve_square(a, b) {
                let feasible = x.iter().all(|v| !v.is_negative())
                    && (0..lp.rows()).all(|j| lp.row_value(j, &x) >= int(lp.rhs(j)));
                if feasible {
                    let obj: Rational = lp.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
                    if best.as_ref().is_none_or(|b| obj < *b) {
                        *best = Some(obj);
                    }
                }
            }
            return;
        }
        for p in start..total {
            pick[depth] = p;
            rec(lp, p + 1, depth + 1, total, pick, best);
        }
    }
    rec(lp, 0, 0, total, &mut pick, &mut best);
    best
}

#[test]
fn majority_instance_rows() {
    let inst = build_ltf_lp(&table(&Ltf::majority(3)), &LpOptions::default(), &caps()).unwrap();
    let p = &inst.problem;
    assert_eq!(p.vars(), 3);
    let points = (0..p.rows()).filter(|&j| matches!(p.tag(j), RowTag::HypercubePoint(_))).count();
    let gaps = (0..p.rows()).filter(|&j| matches!(p.tag(j), RowTag::GapRow(_))).count();
    assert_eq!((points, gaps), (4, 3));
    assert!(!inst.record.lifted);
}

#[test]
fn majority_vertex() {
    let s = ltf_vertex(&table(&Ltf::majority(3)), &caps()).unwrap();
    assert_eq!(s.certificate.weights, vec![int(4), int(3), int(2)]);
    let p = &s.instance.problem;
    let mut tight: Vec<(Vec<i64>, i64)> = s.certificate.tight_rows.iter().map(|&j| (p.row(j).to_vec(), p.rhs(j))).collect();
    tight.sort();
    let mut expect = vec![(vec![-1, 1, 1], 1), (vec![1, -1, 0], 1), (vec![0, 1, -1], 1)];
    expect.sort();
    assert_eq!(tight, expect);
    assert_eq!(s.representation.weights, vec![int(4), int(3), int(2)]);
    assert_eq!(s.representation.threshold, int(0));
    assert!(s.gaps.passes());
}

#[test]
fn dictator_drops_ignored_variables() {
    let t = table(&Ltf::dictator(3, 0));
    let inst = build_ltf_lp(&t, &LpOptions::default(), &caps()).unwrap();
    assert_eq!(inst.problem.vars(), 1);
    assert_eq!(inst.record.dropped, vec![1, 2]);
    let s = ltf_vertex(&t, &caps()).unwrap();
    assert_eq!(s.representation.weights, vec![int(1), int(0), int(0)]);
}

#[test]
fn dictator_with_ignored_variables_kept() {
    let t = table(&Ltf::dictator(3, 0));
    let opts = LpOptions {
        gap_rows: true,
        keep_irrelevant: true,
    };
    let s = ltf_vertex_with(&t, &opts, &caps()).unwrap();
    assert_eq!(s.certificate.weights, vec![int(4), int(2), int(1)]);
    let p = &s.instance.problem;
    let mut tight: Vec<Vec<i64>> = s.certificate.tight_rows.iter().map(|&j| p.row(j).to_vec()).collect();
    tight.sort();
    assert_eq!(tight, vec![vec![0, 0, 1], vec![0, 1, -1], vec![1, -1, -1]]);
}

#[test]
fn single_variable() {
    let t = TruthTable::from_fn(1, |i| i == 1).unwrap();
    let s = ltf_vertex(&t, &caps()).unwrap();
    assert_eq!(s.certificate.weights, vec![int(1)]);
    assert_eq!(s.certificate.basis.len(), 1);
    assert!(s.certificate.tight_rows.len() == 2);
}

#[test]
fn and_is_lifted() {
    let t = table(&Ltf::from_ints(&[1, 1], 1));
    let inst = build_ltf_lp(&t, &LpOptions::default(), &caps()).unwrap();
    assert!(inst.record.lifted);
    assert_eq!(inst.problem.vars(), 3);
    let d = &inst.record.domain;
    for j in 0..inst.problem.rows() {
        if let Some(y) = inst.row_point(j) {
            // The lifted function at y is +1, at -y it is -1: check through the original.
            let s = y[2];
            let x: Vec<i8> = y[..2].iter().map(|v| (s * v) as i8).collect();
            assert_eq!(s as i8 * t.eval(&x).unwrap(), 1);
            assert!(d.encode(&y).is_ok());
        }
    }
    let s = ltf_vertex(&t, &caps()).unwrap();
    assert_eq!(table(&s.representation.to_ltf()), t);
}

#[test]
fn parity_is_rejected() {
    let xor = TruthTable::from_fn(2, |i| i.count_ones() % 2 == 0).unwrap();
    assert_eq!(ltf_vertex(&xor, &caps()).unwrap_err(), Error::NotThreshold);
    assert_eq!(is_threshold(&xor, &caps()).unwrap(), None);
}

#[test]
fn simplex_matches_vertex_enumeration_up_to_three() {
    for n in 1..=3 {
        for t in enumerate_threshold_functions(n, &caps()).unwrap() {
            let inst = build_ltf_lp(&t, &LpOptions::default(), &caps()).unwrap();
            let c = lp::solve_vertex(&inst.problem).unwrap();
            assert_eq!(Some(c.objective.clone()), vertex_enumeration_optimum(&inst.problem), "{}", t.to_hex());
        }
    }
}

#[test]
fn threshold_counts_small_n() {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_threshold_functions(n, &caps()).unwrap().len()).collect();
    assert_eq!(counts, vec![4, 14, 104, 1882]);
}

#[test]
fn every_small_threshold_function_has_gapped_vertex() {
    for n in 1..=4 {
        for t in enumerate_threshold_functions(n, &caps()).unwrap() {
            let s = ltf_vertex(&t, &caps()).unwrap();
            assert_eq!(table(&s.representation.to_ltf()), t);
            assert!(s.gaps.passes(), "{}", t.to_hex());
            let again = ltf_vertex(&t, &caps()).unwrap();
            assert_eq!(again.certificate, s.certificate);
        }
    }
}

#[test]
fn random_ltfs_up_to_ten() {
    let mut r = rng::seeded(26);
    for n in [6usize, 8, 10] {
        for _ in 0..5 {
            let t = table(&random_integer_ltf(&mut r, n, 12));
            let s = ltf_vertex(&t, &caps()).unwrap();
            s.certificate.verify(&s.instance.problem).unwrap();
            assert_eq!(table(&s.representation.to_ltf()), t);
            assert!(s.gaps.passes());
            assert!(s.certificate.basis.iter().all(|b| matches!(b, BasisRow::Constraint(_))));
        }
    }
}

#[test]
fn extended_examples() {
    let c = caps();
    let d = SymmetricDomain::extended(2, 3, &c).unwrap();
    assert_eq!(d.size(), 14);
    let h = DomainFunction::from_fn(d, |y| 5 * y[0] + y[1] >= 0);
    let s = extended_domain_repr(&h, &c).unwrap();
    assert!(s.representation.represents(&h));

    let d = SymmetricDomain::extended(1, 2, &c).unwrap();
    let h = DomainFunction::from_fn(d, |y| y[0] >= 0);
    let s = extended_domain_repr(&h, &c).unwrap();
    assert!(s.representation.weights[0].is_positive());
    let ratio = &s.representation.threshold / &s.representation.weights[0];
    assert!(ratio > int(-1) && ratio <= int(0));

    let mut r = rng::seeded(29);
    let d = SymmetricDomain::extended(3, 5, &c).unwrap();
    assert_eq!(d.coords(), &[Coord::Sign, Coord::Sign, Coord::Range(5)]);
    for _ in 0..5 {
        let l = random_integer_ltf(&mut r, 3, 9);
        let w: Vec<Rational> = l.weights().to_vec();
        let theta = l.theta().clone();
        let h = DomainFunction::from_fn(d.clone(), |y| {
            let s: Rational = w.iter().zip(y).map(|(a, &v)| a * int(v)).sum();
            s >= theta
        });
        let s = extended_domain_repr(&h, &c).unwrap();
        assert!(s.representation.represents(&h));
        assert!(s.gaps.passes());
    }
}

#[test]
fn omb_minimal_weights_frozen() {
    let c = caps();
    let w: Vec<u64> = (1..=4)
        .map(|n| min_weight_search(&omb_table(n, &c).unwrap(), 64, &c).unwrap().unwrap().weight)
        .collect();
    assert_eq!(w, vec![1, 1, 2, 2]);
}

#[test]
fn zero_objective_is_allowed() {
    let mut p = LpProblem::with_objective(vec![Rational::zero()]);
    p.push_row(&[1], 1, RowTag::Other).unwrap();
    assert!(lp::solve_vertex(&p).is_ok());
}
