//! Gap structure of sorted weight vectors and weight floors.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::rational::{self, Rational};

/// Which floor the sorted gaps are compared against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapBound {
    None,
    /// 1/(2n+2)^(2k+8) with n the number of weights.
    Hypercube,
    /// 1/((2k+2R)(2k+2)^(2j+8)) with k the number of weights, last one ranging over [-R, R].
    Extended { range: i64 },
}

impl GapBound {
    /// The floor for the j-th largest gap (1-based) among `len` weights.
    pub fn value(&self, len: usize, j: usize) -> Option<Rational> {
        let len = len as i64;
        match *self {
            GapBound::None => None,
            GapBound::Hypercube => {
                let base = BigInt::from(2 * len + 2);
                Some(Rational::new(BigInt::one(), base.pow((2 * j + 8) as u32)))
            }
            GapBound::Extended { range } => {
                let base = BigInt::from(2 * len + 2);
                let den = BigInt::from(2 * len + 2 * range) * base.pow((2 * j + 8) as u32);
                Some(Rational::new(BigInt::one(), den))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapRow {
    /// Rank of the gap, 1 = largest.
    pub k: usize,
    pub gap: Rational,
    pub bound: Option<Rational>,
    /// Whether the floor is asserted for this rank (k <= n - 2).
    pub required: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    /// Magnitudes divided by the largest one, sorted descending.
    pub normalized: Vec<Rational>,
    /// normalized[i] - normalized[i+1].
    pub deltas: Vec<Rational>,
    /// The deltas sorted descending.
    pub sorted_gaps: Vec<Rational>,
    pub rows: Vec<GapRow>,
    pub strictly_decreasing: bool,
}

impl GapReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().filter(|r| r.required).all(|r| r.pass)
    }

    /// CSV with columns k, gap_num, gap_den, bound, pass.
    pub fn to_csv(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut out = alloc::string::String::from("k,gap_num,gap_den,bound,pass\n");
        for r in &self.rows {
            let bound = r.bound.as_ref().map(rational::to_string).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.k, r.gap.numer(), r.gap.denom(), bound, r.pass);
        }
        out
    }
}

pub fn gap_report(weights: &[Rational], bound: GapBound) -> Result<GapReport> {
    let mut mags: Vec<Rational> = weights.iter().map(rational::abs).collect();
    mags.sort_by(|a, b| b.cmp(a));
    let Some(top) = mags.first().cloned().filter(|t| !t.is_zero()) else {
        return Err(Error::ZeroWeights);
    };
    let normalized: Vec<Rational> = mags.iter().map(|m| m / &top).collect();
    let deltas: Vec<Rational> = normalized.windows(2).map(|p| &p[0] - &p[1]).collect();
    let mut sorted_gaps = deltas.clone();
    sorted_gaps.sort_by(|a, b| b.cmp(a));
    let n = normalized.len();
    let rows = sorted_gaps
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let k = i + 1;
            let b = bound.value(n, k);
            let pass = b.as_ref().is_none_or(|b| g >= b);
            GapRow {
                k,
                gap: g.clone(),
                bound: b,
                required: k + 2 <= n,
                pass,
            }
        })
        .collect();
    let strictly_decreasing = deltas.iter().all(|d| d.is_positive());
    Ok(GapReport {
        normalized,
        deltas,
        sorted_gaps,
        rows,
        strictly_decreasing,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FloorMode {
    /// 1/(k^k sqrt(3 n ln(2/eps))).
    Approx { eps: f64 },
    /// 1/(4 k^k n).
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloorRow {
    pub k: usize,
    pub weight: Rational,
    pub floor: f64,
    /// Present in exact mode, where the floor is rational.
    pub floor_exact: Option<Rational>,
    pub pass: bool,
}

/// Compares each sorted normalized weight against its floor.
///
/// The floors hold for some representation of the function, not for every
/// one, so a failing row says nothing about the function itself.
pub fn weight_floor_check(weights: &[Rational], mode: FloorMode) -> Result<Vec<FloorRow>> {
    let report = gap_report(weights, GapBound::None)?;
    let n = report.normalized.len();
    if let FloorMode::Approx { eps } = mode {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid("eps must lie in (0, 1)"));
        }
    }
    Ok(report
        .normalized
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let k = i + 1;
            let kk = BigInt::from(k).pow(k as u32);
            match mode {
                FloorMode::Exact => {
                    let f = Rational::new(BigInt::one(), BigInt::from(4 * n) * kk);
                    FloorRow {
                        k,
                        weight: w.clone(),
                        floor: rational::to_f64(&f),
                        pass: *w >= f,
                        floor_exact: Some(f),
                    }
                }
                FloorMode::Approx { eps } => {
                    let kk = rational::to_f64(&Rational::from_integer(kk));
                    let f = 1.0 / (kk * libm::sqrt(3.0 * n as f64 * libm::log(2.0 / eps)));
                    FloorRow {
                        k,
                        weight: w.clone(),
                        floor: f,
                        pass: rational::to_f64(w) >= f,
                        floor_exact: None,
                    }
                }
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    #[test]
    fn majority_vertex_gaps() {
        let r = gap_report(&[int(4), int(3), int(2)], GapBound::Hypercube).unwrap();
        assert_eq!(r.normalized, vec![int(1), ratio(3, 4), ratio(1, 2)]);
        assert_eq!(r.deltas, vec![ratio(1, 4), ratio(1, 4)]);
        assert_eq!(r.rows[0].bound, Some(Rational::new(1.into(), BigInt::from(8).pow(10u32))));
        assert!(r.rows[0].required && !r.rows[1].required);
        assert!(r.passes() && r.strictly_decreasing);
    }

    #[test]
    fn equal_weights_flagged() {
        let r = gap_report(&[int(1), int(1)], GapBound::Hypercube).unwrap();
        assert_eq!(r.deltas, vec![int(0)]);
        assert!(!r.rows[0].pass);
        assert!(!r.strictly_decreasing);
    }

    #[test]
    fn dictator_vertex_gaps() {
        let r = gap_report(&[int(4), int(2), int(1)], GapBound::Hypercube).unwrap();
        assert_eq!(r.deltas, vec![ratio(1, 2), ratio(1, 4)]);
        assert!(r.rows.iter().all(|r| r.pass));
    }

    #[test]
    fn extended_bound_value() {
        // k = 3, R = 4, j = 1: 1/((6 + 8) * 8^10).
        let b = GapBound::Extended { range: 4 }.value(3, 1).unwrap();
        assert_eq!(b, Rational::new(1.into(), BigInt::from(14) * BigInt::from(8).pow(10u32)));
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(gap_report(&[int(0)], GapBound::None), Err(Error::ZeroWeights));
    }

    #[test]
    fn floors() {
        let rows = weight_floor_check(&[int(4), int(3), int(2)], FloorMode::Exact).unwrap();
        assert!(rows.iter().all(|r| r.pass));
        assert_eq!(rows[1].floor_exact, Some(ratio(1, 48)));
        let tiny = weight_floor_check(&[int(1), ratio(1, 1_000_000_000)], FloorMode::Exact).unwrap();
        assert_eq!(tiny[1].floor_exact, Some(ratio(1, 32)));
        assert!(!tiny[1].pass);
        let approx =
            weight_floor_check(&[int(1), ratio(3, 4), ratio(1, 2)], FloorMode::Approx { eps: 0.1 }).unwrap();
        let expect = 1.0 / (4.0 * (9.0f64 * (20.0f64).ln()).sqrt());
        assert!((approx[1].floor - expect).abs() < 1e-15);
        assert!(approx.iter().all(|r| r.pass));
    }
}
