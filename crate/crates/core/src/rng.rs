//! The single named generator used for every randomized operation.
//!
//! `Rng` is ChaCha8 seeded from a `u64`; identical seeds give identical
//! streams on every platform.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng as _, RngCore, SeedableRng};

pub type Rng = rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Uniform integer in `[0, bound)`, exact for any size.
pub fn below(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    if let Some(b) = bound.to_u64() {
        return BigUint::from(rng.gen_range(0..b));
    }
    let bits = bound.bits();
    let words = bits.div_ceil(32) as usize;
    let top = bits - 32 * (words as u64 - 1);
    loop {
        let mut digits: alloc::vec::Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
        if top < 32 {
            digits[words - 1] &= (1u32 << top) - 1;
        }
        let v = BigUint::new(digits);
        if &v < bound {
            return v;
        }
    }
}

/// True with probability exactly `num/den`.
pub fn bernoulli(rng: &mut impl RngCore, num: &BigUint, den: &BigUint) -> bool {
    &below(rng, den) < num
}
