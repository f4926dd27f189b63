//! Seeded random instances with a planted contraction sequence.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ReductionError;
use crate::graph::{sequence_to_witness, ContractionSequence, InstancePair, Label, LabeledGraph, WitnessStructure};

/// Probability of each non-tree edge in the random connected graph.
pub const EXTRA_EDGE_PROBABILITY: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RandomMode {
    /// H = G / S for the planted sequence S.
    Yes,
    /// As `Yes`, then one pair of H vertices is toggled; the answer is unknown.
    Perturbed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomInstance {
    pub inst: InstancePair,
    /// The planted sequence; it reproduces H only in `Yes` mode.
    pub sequence: ContractionSequence,
    /// Witness of the planted sequence, present in `Yes` mode.
    pub certificate: Option<WitnessStructure>,
    /// The toggled H pair in `Perturbed` mode.
    pub toggled: Option<(Label, Label)>,
}

/// Random connected G on labels 1..=n (random spanning tree plus independent extra edges), then
/// `k` random contractions of existing edges with random orientation.
pub fn gen_random(n: usize, k: usize, seed: u64, mode: RandomMode) -> Result<RandomInstance, ReductionError> {
    if k == 0 || k >= n {
        return Err(ReductionError::InvalidParameters(format!("need 1 <= k < n, got n={n}, k={k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels: Vec<Label> = (1..=n as Label).collect();
    let mut g = LabeledGraph::with_vertices(labels.iter().copied());
    for i in 1..n {
        let parent = labels[rng.gen_range(0..i)];
        g.add_edge(labels[i], parent)?;
    }
    for i in 0..n {
        for j in i + 1..n {
            if !g.has_edge(labels[i], labels[j]) && rng.gen_bool(EXTRA_EDGE_PROBABILITY) {
                g.add_edge(labels[i], labels[j])?;
            }
        }
    }
    let mut h = g.clone();
    let mut pairs = Vec::with_capacity(k);
    for _ in 0..k {
        let edges = h.edges();
        let &(a, b) = edges.choose(&mut rng).expect("connected graph with two or more vertices has an edge");
        let (keep, remove) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        h = h.contract_edge(keep, remove)?;
        pairs.push((keep, remove));
    }
    let sequence = ContractionSequence::new(pairs);
    match mode {
        RandomMode::Yes => {
            let inst = InstancePair::new(g, h)?;
            let certificate = Some(sequence_to_witness(&inst, &sequence)?);
            Ok(RandomInstance { inst, sequence, certificate, toggled: None })
        }
        RandomMode::Perturbed => {
            let hv: Vec<Label> = h.vertices().collect();
            let picked: Vec<Label> = hv.choose_multiple(&mut rng, 2).copied().collect();
            let (a, b) = (picked[0].min(picked[1]), picked[0].max(picked[1]));
            if !h.remove_edge(a, b) {
                h.add_edge(a, b)?;
            }
            let inst = InstancePair::new(g, h)?;
            Ok(RandomInstance { inst, sequence, certificate: None, toggled: Some((a, b)) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{apply_sequence, check_witness};

    #[test]
    fn yes_mode_certificate_validates() {
        for seed in 0..20 {
            let r = gen_random(8, 3, seed, RandomMode::Yes).unwrap();
            assert!(r.inst.g().is_connected());
            assert_eq!(r.inst.k(), 3);
            assert_eq!(&apply_sequence(r.inst.g(), &r.sequence).unwrap(), r.inst.h());
            assert!(check_witness(&r.inst, r.certificate.as_ref().unwrap()).unwrap().is_valid());
        }
    }

    #[test]
    fn deterministic_in_seed() {
        for mode in [RandomMode::Yes, RandomMode::Perturbed] {
            assert_eq!(gen_random(10, 4, 7, mode).unwrap(), gen_random(10, 4, 7, mode).unwrap());
        }
        assert_ne!(gen_random(10, 4, 7, RandomMode::Yes).unwrap(), gen_random(10, 4, 8, RandomMode::Yes).unwrap());
    }

    #[test]
    fn perturbed_differs_in_one_pair() {
        let y = gen_random(6, 2, 1, RandomMode::Yes).unwrap();
        let p = gen_random(6, 2, 1, RandomMode::Perturbed).unwrap();
        assert_eq!(y.inst.g(), p.inst.g());
        let (a, b) = p.toggled.unwrap();
        assert_ne!(y.inst.h().has_edge(a, b), p.inst.h().has_edge(a, b));
    }

    #[test]
    fn parameter_checks() {
        assert!(gen_random(5, 0, 1, RandomMode::Yes).is_err());
        assert!(gen_random(5, 5, 1, RandomMode::Yes).is_err());
    }
}
