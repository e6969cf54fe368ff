//! Junta approximation followed by low-weight rounding of the junta.

use alloc::vec::Vec;

use num_bigint::BigInt;
use rand::RngCore;

use super::pipelines::{pipeline_erdos_from, vertex_representation, PipelineOptions, PipelineReport, SortedRepresentation};
use crate::caps::Caps;
use crate::cube::{distance, DistanceReport, Distribution, Function, Ltf, TruthTable};
use crate::error::Result;
use crate::fourier;
use crate::junta::{theorem1_pipeline, JuntaApproximator, JuntaFunction, JuntaOptions};
use crate::lp::is_threshold;
use crate::rational::{self, Rational};

/// Where the threshold function handed to the rounding step came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JuntaSource {
    /// The junta approximator itself is a threshold function on its relevant set.
    Approximator,
    /// The approximator was not a threshold function; f restricted in weight
    /// to the same coordinates is used instead.
    TruncatedWeights,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComposedReport {
    pub junta: JuntaApproximator,
    pub source: JuntaSource,
    pub junta_ltf: Ltf,
    /// Rounding of the junta, verified against the junta.
    pub rounding: PipelineReport,
    pub output: Ltf,
    pub sum_sq: BigInt,
    /// Inf(f)^2 with Inf(f) the total influence.
    pub total_influence_sq: Rational,
    pub distance: DistanceReport,
    pub eps: Rational,
    pub met: bool,
}

/// Junta step at eps/2, then the Erdos pipeline on the junta verified to
/// eps/2, and the measured distance of the composition to f.
pub fn junta_then_weights(
    f: &Ltf,
    eps: &Rational,
    opts: &PipelineOptions,
    rng: &mut impl RngCore,
    caps: &Caps,
) -> Result<ComposedReport> {
    let half = eps / Rational::from_integer(2.into());
    let mut jopts = JuntaOptions::new(half.clone());
    jopts.mode = opts.mode.unwrap_or(jopts.mode);
    let junta = theorem1_pipeline(f, &jopts, rng, caps)?;
    let t = f.truth_table(caps)?;
    let total: Rational = fourier::wht(&t, caps)?.degree_one().iter().map(rational::abs).sum();

    let (junta_ltf, source) = junta_as_ltf(f, &junta, caps)?;
    let rep = SortedRepresentation::from_ltf(&junta_ltf);
    let inner_rep = if rep.is_constant() { rep } else { embedded_vertex(&junta_ltf, &rep.order, caps)? };
    // The Erdos pipeline verifies to twice its parameter.
    let quarter = &half / Rational::from_integer(2.into());
    let rounding = pipeline_erdos_from(Function::Ltf(&junta_ltf), &inner_rep, &quarter, &Distribution::Uniform, opts, caps)?;
    let output = rounding.output.clone();
    let mode = opts.mode.unwrap_or(crate::cube::DistanceMode::Exact);
    let dist = distance(Function::Table(&t), Function::Ltf(&output), &Distribution::Uniform, mode, caps)?;
    let (w, _) = output.integer_scaled();
    Ok(ComposedReport {
        met: dist.value <= *eps,
        junta,
        source,
        junta_ltf,
        rounding,
        sum_sq: w.iter().map(|v| v * v).sum(),
        output,
        total_influence_sq: &total * &total,
        distance: dist,
        eps: eps.clone(),
    })
}

fn junta_as_ltf(f: &Ltf, junta: &JuntaApproximator, caps: &Caps) -> Result<(Ltf, JuntaSource)> {
    match &junta.g {
        JuntaFunction::Ltf(g) => Ok((g.clone(), JuntaSource::Approximator)),
        JuntaFunction::Table(g) => {
            let keep = &junta.relevant;
            let projected = g.project(keep)?;
            if let Some(rep) = is_threshold(&projected, caps)? {
                return Ok((embed(rep.weights(), rep.theta(), keep, f.n()), JuntaSource::Approximator));
            }
            let w: Vec<Rational> = keep.iter().map(|&i| f.weights()[i].clone()).collect();
            Ok((embed(&w, f.theta(), keep, f.n()), JuntaSource::TruncatedWeights))
        }
    }
}

fn embed(w: &[Rational], theta: &Rational, coords: &[usize], n: usize) -> Ltf {
    let mut full = alloc::vec![Rational::from_integer(0.into()); n];
    for (v, &i) in w.iter().zip(coords) {
        full[i] = v.clone();
    }
    Ltf::new(full, theta.clone())
}

/// Vertex representation computed on the given coordinates only.
fn embedded_vertex(g: &Ltf, coords: &[usize], caps: &Caps) -> Result<SortedRepresentation> {
    let sub = Ltf::new(coords.iter().map(|&i| g.weights()[i].clone()).collect(), g.theta().clone());
    let table: TruthTable = sub.truth_table(caps)?;
    let rep = vertex_representation(&table, caps)?;
    Ok(SortedRepresentation::from_ltf(&embed(rep.ltf.weights(), rep.ltf.theta(), coords, g.n())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::rng::seeded;

    #[test]
    fn dictator_composes_trivially() {
        let f = Ltf::dictator(5, 1);
        let r = junta_then_weights(&f, &ratio(3, 10), &PipelineOptions::default(), &mut seeded(1), &Caps::default()).unwrap();
        assert_eq!(r.sum_sq, BigInt::from(1));
        assert_eq!(r.total_influence_sq, ratio(1, 1));
        assert!(r.met);
    }

    #[test]
    fn witness_composition() {
        let f = crate::junta::prop14_witness(2, 9).unwrap();
        let r = junta_then_weights(&f, &ratio(3, 10), &PipelineOptions::default(), &mut seeded(3), &Caps::default()).unwrap();
        assert!(r.met, "distance {}", r.distance.value);
    }
}
