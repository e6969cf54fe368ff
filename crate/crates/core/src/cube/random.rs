//! Random instance generators used by tests and verification suites.

use alloc::vec::Vec;

use rand::Rng as _;
use rand::RngCore;

use super::{Ltf, TruthTable};
use crate::rational::{int, ratio, Rational};

/// Integer weights uniform in [-max_weight, max_weight] (not all zero) and a
/// threshold uniform in [-(sum |w|)/2, (sum |w|)/2].
pub fn random_integer_ltf(rng: &mut impl RngCore, n: usize, max_weight: i64) -> Ltf {
    loop {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-max_weight..=max_weight)).collect();
        let total: i64 = w.iter().map(|v| v.abs()).sum();
        if total == 0 {
            continue;
        }
        let theta = rng.gen_range(-total / 2..=total / 2);
        return Ltf::from_ints(&w, theta);
    }
}

/// Rational weights num/den with small numerators and denominators.
pub fn random_rational_ltf(rng: &mut impl RngCore, n: usize) -> Ltf {
    let mut draw = || ratio(rng.gen_range(-20..=20), rng.gen_range(1..=7));
    let w: Vec<Rational> = (0..n).map(|_| draw()).collect();
    let theta = draw() / int(2);
    Ltf::new(w, theta)
}

/// Positive integer weights in [1, max_weight].
pub fn random_positive_weights(rng: &mut impl RngCore, n: usize, max_weight: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(1..=max_weight)).collect()
}

pub fn random_table(rng: &mut impl RngCore, n: usize) -> TruthTable {
    let mut t = TruthTable::constant(n, false).expect("small n");
    for i in 0..t.len() {
        t.set(i, rng.next_u32() & 1 == 1);
    }
    t
}
