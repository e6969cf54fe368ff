//! Gap-structured representations of threshold functions via the LP.
//!
//! The input function is reduced to its relevant coordinates, made odd by
//! the lift g(y, s) = s * h(s y) when needed, oriented so it is increasing in
//! every coordinate and ordered by decreasing importance. The LP then asks for
//! w >= 0 with w . y >= 1 on the positive points and w_k - w_{k+1} >= 1,
//! w_last >= 1. The result is mapped back to a representation of the input.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::caps::Caps;
use crate::cube::{Ltf, TruthTable};
use crate::error::{Error, Result};
use crate::lp::domain::{DomainFunction, SymmetricDomain};
use crate::lp::gaps::{gap_report, GapBound, GapReport};
use crate::lp::simplex::{self, LpOutcome, LpProblem, RowTag, VertexCertificate};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpOptions {
    pub gap_rows: bool,
    /// Keep coordinates the function ignores instead of dropping them.
    pub keep_irrelevant: bool,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            gap_rows: true,
            keep_irrelevant: false,
        }
    }
}

/// How the LP variables relate to the input coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftRecord {
    pub source_dim: usize,
    /// Input coordinates carried into the odd function, in its coordinate order.
    pub kept: Vec<usize>,
    /// Input coordinates dropped because the function ignores them.
    pub dropped: Vec<usize>,
    /// Whether a sign coordinate standing for the threshold was appended.
    pub lifted: bool,
    /// +1 or -1 per coordinate of the odd function.
    pub orientation: Vec<i8>,
    /// LP variable k corresponds to coordinate order[k] of the odd function.
    pub order: Vec<usize>,
    /// Domain of the odd function; row tags index into it.
    pub domain: SymmetricDomain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpInstance {
    pub problem: LpProblem,
    pub record: LiftRecord,
}

/// h(y) = sign(w . y - threshold) with sign(0) = +1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub weights: Vec<Rational>,
    pub threshold: Rational,
}

impl Representation {
    pub fn eval(&self, y: &[i64]) -> i8 {
        let s: Rational = self
            .weights
            .iter()
            .zip(y)
            .filter(|(_, v)| **v != 0)
            .map(|(w, &v)| w * Rational::from_integer(v.into()))
            .sum();
        if s >= self.threshold {
            1
        } else {
            -1
        }
    }

    pub fn to_ltf(&self) -> Ltf {
        Ltf::new(self.weights.clone(), self.threshold.clone())
    }

    /// Whether this represents h on every point of its domain.
    pub fn represents(&self, h: &DomainFunction) -> bool {
        let d = h.domain();
        (0..d.size()).all(|i| (self.eval(&d.decode(i)) == 1) == h.get(i))
    }

    /// Weights on the coordinates the function depends on.
    pub fn nonzero_weights(&self) -> Vec<Rational> {
        self.weights.iter().filter(|w| !w.is_zero()).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedRepresentation {
    pub instance: LpInstance,
    pub certificate: VertexCertificate,
    pub representation: Representation,
    pub gaps: GapReport,
}

/// The odd, oriented function together with its bookkeeping (order still unset).
struct Prepared {
    odd: DomainFunction,
    kept: Vec<usize>,
    dropped: Vec<usize>,
    lifted: bool,
    orientation: Vec<i8>,
}

fn prepare(h: &DomainFunction, opts: &LpOptions, caps: &Caps) -> Result<Prepared> {
    let dim = h.domain().dim();
    let relevant = h.relevant_coords();
    let kept: Vec<usize> = if opts.keep_irrelevant { (0..dim).collect() } else { relevant.clone() };
    let dropped: Vec<usize> = (0..dim).filter(|c| !kept.contains(c)).collect();
    let projected = if dropped.is_empty() { h.clone() } else { h.project(&kept, caps)? };
    let lifted = !projected.is_odd();
    let odd = if lifted { projected.lift(caps)? } else { projected };
    let orientation = (0..odd.domain().dim())
        .map(|c| if odd.correlation(c) < 0 { -1 } else { 1 })
        .collect();
    Ok(Prepared {
        odd,
        kept,
        dropped,
        lifted,
        orientation,
    })
}

fn emit(p: &Prepared, order: &[usize], gap_rows: bool, caps: &Caps) -> Result<LpProblem> {
    let d = p.odd.domain();
    let m = order.len();
    let positives = p.odd.values().iter().filter(|v| **v).count();
    let rows = positives + if gap_rows { m } else { 0 };
    caps.check_rows(rows)?;
    let cube = d.is_cube();
    let mut lp = LpProblem::new(m);
    let mut row = vec![0i64; m];
    for i in 0..d.size() {
        if !p.odd.get(i) {
            continue;
        }
        for (k, &c) in order.iter().enumerate() {
            row[k] = p.orientation[c] as i64 * d.coordinate(i, c);
        }
        let tag = if cube { RowTag::HypercubePoint(i) } else { RowTag::ExtendedPoint(i) };
        lp.push_row(&row, 1, tag)?;
    }
    if gap_rows {
        for k in 0..m {
            row.iter_mut().for_each(|v| *v = 0);
            row[k] = 1;
            if k + 1 < m {
                row[k + 1] = -1;
            }
            lp.push_row(&row, 1, RowTag::GapRow(k))?;
        }
    }
    Ok(lp)
}

fn record(p: &Prepared, order: Vec<usize>, source_dim: usize) -> LiftRecord {
    LiftRecord {
        source_dim,
        kept: p.kept.clone(),
        dropped: p.dropped.clone(),
        lifted: p.lifted,
        orientation: p.orientation.clone(),
        order,
        domain: p.odd.domain().clone(),
    }
}

/// Builds the gap LP for h. The feasibility pre-check without gap rows runs
/// first and rejects functions that are not threshold functions.
pub fn build_domain_lp(h: &DomainFunction, opts: &LpOptions, caps: &Caps) -> Result<LpInstance> {
    let p = prepare(h, opts, caps)?;
    let m = p.odd.domain().dim();
    let identity: Vec<usize> = (0..m).collect();
    let pre = emit(&p, &identity, false, caps)?;
    let pre_weights = match simplex::solve(&pre)? {
        LpOutcome::Optimal(c) => c.weights,
        LpOutcome::Infeasible(_) => return Err(Error::NotThreshold),
    };
    if !opts.gap_rows {
        return Ok(LpInstance {
            problem: pre,
            record: record(&p, identity, h.domain().dim()),
        });
    }
    let mut order = identity;
    if p.odd.domain().is_cube() {
        let flips: Vec<u64> = (0..m).map(|c| p.odd.flip_count(c)).collect();
        order.sort_by(|&a, &b| flips[b].cmp(&flips[a]).then(a.cmp(&b)));
    } else {
        order.sort_by(|&a, &b| pre_weights[b].cmp(&pre_weights[a]).then(a.cmp(&b)));
    }
    let problem = emit(&p, &order, true, caps)?;
    Ok(LpInstance {
        problem,
        record: record(&p, order, h.domain().dim()),
    })
}

pub fn build_ltf_lp(t: &TruthTable, opts: &LpOptions, caps: &Caps) -> Result<LpInstance> {
    build_domain_lp(&DomainFunction::from_table(t, caps)?, opts, caps)
}

impl LpInstance {
    /// Maps an LP solution back to the input coordinates.
    pub fn representation(&self, w: &[Rational]) -> Representation {
        let r = &self.record;
        let mut odd = vec![Rational::zero(); r.order.len()];
        for (k, &c) in r.order.iter().enumerate() {
            odd[c] = if r.orientation[c] < 0 { -w[k].clone() } else { w[k].clone() };
        }
        let mut weights = vec![Rational::zero(); r.source_dim];
        for (j, &c) in r.kept.iter().enumerate() {
            weights[c] = odd[j].clone();
        }
        let threshold = if r.lifted { -odd[r.kept.len()].clone() } else { Rational::zero() };
        Representation { weights, threshold }
    }

    /// Domain point behind a row, in the odd function's coordinates.
    pub fn row_point(&self, j: usize) -> Option<Vec<i64>> {
        match self.problem.tag(j) {
            RowTag::HypercubePoint(i) | RowTag::ExtendedPoint(i) => Some(self.record.domain.decode(*i)),
            _ => None,
        }
    }
}

fn solve_with(h: &DomainFunction, opts: &LpOptions, bound: GapBound, caps: &Caps) -> Result<SolvedRepresentation> {
    let instance = build_domain_lp(h, opts, caps)?;
    let certificate = match simplex::solve(&instance.problem)? {
        LpOutcome::Optimal(c) => c,
        // The pre-check succeeded, so the gap system is feasible.
        LpOutcome::Infeasible(_) => return Err(Error::Internal("gap LP infeasible after pre-check".into())),
    };
    certificate.verify(&instance.problem)?;
    let representation = instance.representation(&certificate.weights);
    if !representation.represents(h) {
        return Err(Error::Internal("LP vertex does not represent the input".into()));
    }
    let nonzero = representation.nonzero_weights();
    let gaps = if nonzero.is_empty() {
        GapReport {
            normalized: Vec::new(),
            deltas: Vec::new(),
            sorted_gaps: Vec::new(),
            rows: Vec::new(),
            strictly_decreasing: true,
        }
    } else {
        gap_report(&nonzero, bound)?
    };
    Ok(SolvedRepresentation {
        instance,
        certificate,
        representation,
        gaps,
    })
}

/// Vertex representation of a threshold function on the cube, with gap checks.
pub fn ltf_vertex(t: &TruthTable, caps: &Caps) -> Result<SolvedRepresentation> {
    let h = DomainFunction::from_table(t, caps)?;
    solve_with(&h, &LpOptions::default(), GapBound::Hypercube, caps)
}

pub fn ltf_vertex_with(t: &TruthTable, opts: &LpOptions, caps: &Caps) -> Result<SolvedRepresentation> {
    let h = DomainFunction::from_table(t, caps)?;
    solve_with(&h, opts, GapBound::Hypercube, caps)
}

/// Vertex representation over {-1,1}^(k-1) x [-R, R], with the extended gap floors.
pub fn extended_domain_repr(h: &DomainFunction, caps: &Caps) -> Result<SolvedRepresentation> {
    let coords = h.domain().coords();
    let range = match coords.last() {
        Some(crate::lp::domain::Coord::Range(r)) => *r,
        _ => 1,
    };
    solve_with(h, &LpOptions::default(), GapBound::Extended { range }, caps)
}

/// Exact threshold test. Returns a representation when one exists.
pub fn is_threshold(t: &TruthTable, caps: &Caps) -> Result<Option<Ltf>> {
    let h = DomainFunction::from_table(t, caps)?;
    let opts = LpOptions {
        gap_rows: false,
        keep_irrelevant: false,
    };
    let inst = match build_domain_lp(&h, &opts, caps) {
        Ok(i) => i,
        Err(Error::NotThreshold) => return Ok(None),
        Err(e) => return Err(e),
    };
    let c = simplex::solve_vertex(&inst.problem)?;
    let rep = inst.representation(&c.weights);
    Ok(Some(rep.to_ltf()))
}

/// Integer weights of a representation, scaled by the common denominator.
pub fn integer_representation(rep: &Representation) -> (Vec<num_bigint::BigInt>, num_bigint::BigInt) {
    let all: Vec<&Rational> = rep.weights.iter().chain(core::iter::once(&rep.threshold)).collect();
    let (mut ints, _) = rational::common_integers(all.iter().copied());
    let theta = ints.pop().unwrap_or_default();
    (ints, theta)
}

