//! Edge-overlap statistics for pairs of configurations and empirical
//! comparisons of local neighborhood laws against the tree measure.

use std::collections::HashMap;

use serde::Serialize;

use crate::dynamics::{ChainState, Variant};
use crate::graph::{neighborhood, Pairing, SpinConfig};
use crate::rng::CounterRng;
use crate::tree::{field_for_magnetization, TreeMeasure};
use crate::{Error, Result};

/// Edge types in index order: ++ = 0, +− = 1, −+ = 2, −− = 3.
fn edge_type(a: i8, b: i8) -> usize {
    match (a, b) {
        (1, 1) => 0,
        (1, -1) => 1,
        (-1, 1) => 2,
        _ => 3,
    }
}

/// 4×4 cross-tabulation of edge types under two configurations; entries are
/// fractions of the dn/2 edges. Edge orientation is fixed by clone index
/// order (lower clone first) for both configurations.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OverlapMatrix {
    pub m: [[f64; 4]; 4],
}

impl OverlapMatrix {
    pub fn sum(&self) -> f64 {
        self.m.iter().flatten().sum()
    }

    pub fn frobenius_distance(&self, other: &OverlapMatrix) -> f64 {
        let mut total = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                total += (self.m[i][j] - other.m[i][j]).powi(2);
            }
        }
        total.sqrt()
    }

    /// Fraction of vertices that are plus in both configurations, recovered
    /// from edge statistics on a d-regular graph. Each vertex contributes d
    /// edge endpooints, so the fraction is the orientation-symmetrized mass
    /// of endpoint classes whose first coordinate is (+, +):
    /// R₊₊,₊₊ + ½(R₊₊,₊₋ + R₊₊,₋₊ + R₊₋,₊₊ + R₋₊,₊₊ + R₊₋,₊₋ + R₋₊,₋₊).
    pub fn plus_plus_vertex_fraction(&self) -> f64 {
        self.m[0][0]
            + 0.5
                * (self.m[0][1] + self.m[0][2] + self.m[1][0] + self.m[2][0] + self.m[1][1]
                    + self.m[2][2])
    }
}

pub fn edge_overlap(pairing: &Pairing, sigma: &[i8], sigma_prime: &[i8]) -> OverlapMatrix {
    debug_assert_eq!(sigma.len(), pairing.n());
    debug_assert_eq!(sigma_prime.len(), pairing.n());
    let mut counts = [[0usize; 4]; 4];
    for (c, m) in pairing.edges() {
        let u = pairing.vertex_of(c);
        let v = pairing.vertex_of(m);
        counts[edge_type(sigma[u], sigma[v])][edge_type(sigma_prime[u], sigma_prime[v])] += 1;
    }
    let total = pairing.num_edges() as f64;
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = counts[i][j] as f64 / total;
        }
    }
    OverlapMatrix { m }
}

/// Single-edge type probabilities under a tree measure.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EdgeTypeProbs {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl EdgeTypeProbs {
    pub fn as_array(&self) -> [f64; 4] {
        [self.pp, self.pm, self.mp, self.mm]
    }
}

pub fn edge_type_probs(measure: &TreeMeasure) -> EdgeTypeProbs {
    let p_plus = measure.root_plus_prob();
    let b = measure.broadcast;
    EdgeTypeProbs {
        pp: p_plus * b[0][0],
        pm: p_plus * b[0][1],
        mp: (1.0 - p_plus) * b[1][0],
        mm: (1.0 - p_plus) * b[1][1],
    }
}

/// The 4×4 reference overlap for two independent samples from the measure:
/// the outer product of the edge-type probabilities with themselves.
pub fn tree_reference_overlap(measure: &TreeMeasure) -> OverlapMatrix {
    let p = edge_type_probs(measure).as_array();
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = p[i] * p[j];
        }
    }
    OverlapMatrix { m }
}

/// Mean and standard error of ‖R_{σ,σ'} − ρ⊗ρ‖_F over pairs of independent
/// fixed-magnetization samples, each produced by its own Kawasaki chain run
/// for `sweeps` sweeps from an independent uniform slice configuration.
pub fn overlap_deviation(
    pairing: &Pairing,
    beta: f64,
    k_plus: usize,
    num_pairs: usize,
    sweeps: usize,
    rng: &CounterRng,
) -> Result<(f64, f64)> {
    if num_pairs == 0 {
        return Err(Error::invalid_parameter("need at least one pair"));
    }
    let n = pairing.n();
    let eta = 2.0 * k_plus as f64 / n as f64 - 1.0;
    let reference = tree_reference_overlap(&field_for_magnetization(
        pairing.d() as u32,
        beta,
        eta.clamp(-1.0 + 1e-9, 1.0 - 1e-9),
    )?);
    let mut stats = crate::numeric::RunningStats::new();
    for pair in 0..num_pairs {
        let draw = |stream: u64| -> Result<SpinConfig> {
            let mut chain_rng = rng.substream(stream);
            let config = SpinConfig::uniform_with_k_plus(pairing, k_plus, &mut chain_rng)?;
            let mut chain = ChainState::new(pairing.clone(), config, beta, Variant::Kawasaki, chain_rng);
            for _ in 0..sweeps {
                chain.sweep();
            }
            Ok(chain.config().clone())
        };
        let sigma = draw(2 * pair as u64)?;
        let sigma_prime = draw(2 * pair as u64 + 1)?;
        let overlap = edge_overlap(pairing, sigma.spins(), sigma_prime.spins());
        stats.push(overlap.frobenius_distance(&reference));
    }
    Ok((stats.mean(), stats.stderr().unwrap_or(0.0)))
}

/// Outcome of an empirical local-law comparison.
#[derive(Clone, Debug, Serialize)]
pub struct LocalLawReport {
    /// TV distance between the empirical distribution of rooted-ball spin
    /// patterns (tree balls only) and the exact broadcast law.
    pub tv: f64,
    pub sampled_vertices: usize,
    pub tree_balls: usize,
    pub non_tree_balls: usize,
}

/// Canonical pattern of a spin-labelled rooted tree ball together with its
/// exact probability under the broadcast measure. Children are sorted by
/// their canonical subtree encoding, and the probability of the canonical
/// class multiplies in the multinomial number of labelled arrangements.
fn canonical_pattern(
    ball: &crate::graph::Ball,
    spins: &[i8],
    measure: &TreeMeasure,
) -> (String, f64) {
    fn rec(
        node: usize,
        ball: &crate::graph::Ball,
        spins: &[i8],
        measure: &TreeMeasure,
    ) -> (String, f64) {
        let spin = spins[ball.vertices[node]];
        let mut encoded: Vec<(String, f64)> = ball.children[node]
            .iter()
            .map(|&c| {
                let (enc, prob) = rec(c, ball, spins, measure);
                let child_spin = spins[ball.vertices[c]];
                let row = measure.transition(spin);
                let trans = if child_spin == 1 { row[0] } else { row[1] };
                (enc, trans * prob)
            })
            .collect();
        encoded.sort_by(|a, b| a.0.cmp(&b.0));
        // multinomial factor: arrangements of children with identical
        // canonical encodings are the same labelled pattern class
        let mut prob = 1.0f64;
        let mut arrangements = 1.0f64;
        let mut run = 1usize;
        for (i, (enc, p)) in encoded.iter().enumerate() {
            prob *= p;
            arrangements *= (i + 1) as f64;
            if i > 0 && *enc == encoded[i - 1].0 {
                run += 1;
            } else {
                run = 1;
            }
            arrangements /= run as f64;
        }
        let mut key = String::with_capacity(2 + encoded.len() * 8);
        key.push(if spin == 1 { '+' } else { '-' });
        key.push('(');
        for (enc, _) in &encoded {
            key.push_str(enc);
        }
        key.push(')');
        (key, prob * arrangements)
    }
    let (key, below) = rec(0, ball, spins, measure);
    let root_spin = spins[ball.vertices[0]];
    let prior = if root_spin == 1 {
        measure.root_plus_prob()
    } else {
        1.0 - measure.root_plus_prob()
    };
    (key, prior * below)
}

/// Compare the empirical law of depth-`radius` ball spin patterns under one
/// fixed-magnetization sample against the exact broadcast law on the tree.
/// Only tree-isomorphic balls enter the comparison; their count is reported.
pub fn local_law_tv(
    pairing: &Pairing,
    beta: f64,
    k_plus: usize,
    radius: usize,
    num_vertices: usize,
    sweeps: usize,
    rng: &CounterRng,
) -> Result<LocalLawReport> {
    if radius > 3 {
        return Err(Error::invalid_parameter("radius must be at most 3"));
    }
    let n = pairing.n();
    let eta = 2.0 * k_plus as f64 / n as f64 - 1.0;
    let measure = field_for_magnetization(
        pairing.d() as u32,
        beta,
        eta.clamp(-1.0 + 1e-9, 1.0 - 1e-9),
    )?;

    let mut chain_rng = rng.substream(0);
    let config = SpinConfig::uniform_with_k_plus(pairing, k_plus, &mut chain_rng)?;
    let mut chain = ChainState::new(pairing.clone(), config, beta, Variant::Kawasaki, chain_rng);
    for _ in 0..sweeps {
        chain.sweep();
    }
    let spins = chain.config().spins().to_vec();

    let mut pick_rng = rng.substream(1);
    let vertices: Vec<usize> = if num_vertices >= n {
        (0..n).collect()
    } else {
        pick_rng.sample_distinct(n, num_vertices)
    };

    let mut counts: HashMap<String, (usize, f64)> = HashMap::new();
    let mut tree_balls = 0usize;
    let mut non_tree = 0usize;
    for &v in &vertices {
        let ball = neighborhood(pairing, v, radius);
        if !ball.is_tree {
            non_tree += 1;
            continue;
        }
        tree_balls += 1;
        let (key, prob) = canonical_pattern(&ball, &spins, &measure);
        let entry = counts.entry(key).or_insert((0, prob));
        entry.0 += 1;
    }
    if tree_balls == 0 {
        return Err(Error::InvalidInput("no tree-isomorphic balls sampled".into()));
    }
    let mut tv = 0.0;
    let mut seen_mass = 0.0;
    for (_, (count, prob)) in &counts {
        let emp = *count as f64 / tree_balls as f64;
        tv += (emp - prob).abs();
        seen_mass += prob;
    }
    tv += 1.0 - seen_mass; // exact mass on unobserved patterns
    Ok(LocalLawReport {
        tv: tv / 2.0,
        sampled_vertices: vertices.len(),
        tree_balls,
        non_tree_balls: non_tree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Pairing {
        Pairing::from_edges(4, 3, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn self_overlap_is_diagonal() {
        let g = k4();
        let sigma = vec![1i8, 1, -1, -1];
        let overlap = edge_overlap(&g, &sigma, &sigma);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(overlap.m[i][j], 0.0);
                }
            }
        }
        assert!((overlap.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negated_overlap_permutes_columns() {
        let g = k4();
        let sigma = vec![1i8, 1, -1, -1];
        let flipped: Vec<i8> = sigma.iter().map(|s| -s).collect();
        let overlap = edge_overlap(&g, &sigma, &flipped);
        let self_overlap = edge_overlap(&g, &sigma, &sigma);
        // type swap: ++ ↔ −−, +− ↔ −+
        let swap = [3, 2, 1, 0];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(overlap.m[i][j], self_overlap.m[i][swap[j]]);
            }
        }
    }

    #[test]
    fn k4_hand_computed_table() {
        // σ = (+,+,−,−), σ' = (+,−,+,−); K₄ edges in clone order:
        // (0,1), (0,2), (0,3), (1,2), (1,3), (2,3)
        let g = k4();
        let sigma = vec![1i8, 1, -1, -1];
        let sigma_prime = vec![1i8, -1, 1, -1];
        let overlap = edge_overlap(&g, &sigma, &sigma_prime);
        let sixth = 1.0 / 6.0;
        let mut expect = [[0.0f64; 4]; 4];
        expect[edge_type(1, 1)][edge_type(1, -1)] += sixth; // (0,1)
        expect[edge_type(1, -1)][edge_type(1, 1)] += sixth; // (0,2)
        expect[edge_type(1, -1)][edge_type(1, -1)] += sixth; // (0,3)
        expect[edge_type(1, -1)][edge_type(-1, 1)] += sixth; // (1,2)
        expect[edge_type(1, -1)][edge_type(-1, -1)] += sixth; // (1,3)
        expect[edge_type(-1, -1)][edge_type(1, -1)] += sixth; // (2,3)
        for i in 0..4 {
            for j in 0..4 {
                assert!((overlap.m[i][j] - expect[i][j]).abs() < 1e-15, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn vertex_fraction_recovery_fuzzed() {
        let mut rng = CounterRng::new(1, 0);
        for trial in 0..1000 {
            let n = 4 + 2 * rng.index(5); // 4..12 even
            let g = Pairing::sample_uniform(n, 3, &mut rng).unwrap();
            let sigma: Vec<i8> = (0..n).map(|_| rng.spin()).collect();
            let sigma_prime: Vec<i8> = (0..n).map(|_| rng.spin()).collect();
            let overlap = edge_overlap(&g, &sigma, &sigma_prime);
            let direct = sigma
                .iter()
                .zip(&sigma_prime)
                .filter(|(&a, &b)| a == 1 && b == 1)
                .count() as f64
                / n as f64;
            assert!(
                (overlap.plus_plus_vertex_fraction() - direct).abs() < 1e-12,
                "trial {trial}: {} vs {direct}",
                overlap.plus_plus_vertex_fraction()
            );
        }
    }

    #[test]
    fn edge_type_probs_consistent_with_rho() {
        for &(beta, eta) in &[(0.4, 0.0), (0.9, 0.3), (1.2, -0.6), (0.0, 0.2)] {
            let m = field_for_magnetization(5, beta, eta).unwrap();
            let p = edge_type_probs(&m);
            assert!((p.pp + p.pm + p.mp + p.mm - 1.0).abs() < 1e-12);
            assert!((p.pm - p.mp).abs() < 1e-12, "beta={beta} eta={eta}");
            assert!((p.pp + p.mm - m.rho).abs() < 1e-12);
            assert!((p.pp - m.root_plus_prob() * m.broadcast[0][0]).abs() < 1e-15);
        }
    }

    #[test]
    fn reference_overlap_outer_product() {
        let m = field_for_magnetization(4, 0.7, 0.2).unwrap();
        let reference = tree_reference_overlap(&m);
        assert!((reference.sum() - 1.0).abs() < 1e-12);
        let p = edge_type_probs(&m).as_array();
        for i in 0..4 {
            let row: f64 = reference.m[i].iter().sum();
            assert!((row - p[i]).abs() < 1e-12);
        }
        // β = 0, η = 0: all entries 1/16
        let m0 = field_for_magnetization(4, 0.0, 0.0).unwrap();
        let r0 = tree_reference_overlap(&m0);
        for row in r0.m {
            for x in row {
                assert!((x - 1.0 / 16.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn correlated_pairs_detected() {
        // forcing σ' = σ produces a detectable deviation from the
        // independent-pair reference
        let mut rng = CounterRng::new(2, 0);
        let n = 60usize;
        let g = Pairing::sample_uniform(n, 3, &mut rng).unwrap();
        let beta = 1.5;
        let mut chain_rng = rng.substream(7);
        let config = SpinConfig::uniform_with_k_plus(&g, n / 2, &mut chain_rng).unwrap();
        let mut chain = ChainState::new(g.clone(), config, beta, Variant::Kawasaki, chain_rng);
        for _ in 0..400 {
            chain.sweep();
        }
        let sigma = chain.config().spins();
        let overlap = edge_overlap(&g, sigma, sigma);
        let reference =
            tree_reference_overlap(&field_for_magnetization(3, beta, 0.0).unwrap());
        assert!(overlap.frobenius_distance(&reference) > 0.1);
    }

    #[test]
    fn local_law_radius_zero_fixed_magnetization() {
        let mut rng = CounterRng::new(3, 0);
        let n = 200usize;
        let g = Pairing::sample_uniform(n, 3, &mut rng).unwrap();
        let k = 120usize;
        let report = local_law_tv(&g, 0.5, k, 0, n, 50, &rng.substream(1)).unwrap();
        // radius 0: TV = |k/n − (1+η)/2| = 0 with η = 2k/n − 1 exactly
        assert!(report.tv < 1e-12, "tv = {}", report.tv);
        assert_eq!(report.tree_balls, n);
    }

    #[test]
    fn local_law_beta_zero_product_law() {
        // multinomial noise over the 8 radius-1 pattern classes floors the
        // expected TV at ~2.5/√N, so the 0.02 budget needs N ≳ 4000 balls
        let mut rng = CounterRng::new(4, 0);
        let n = 4000usize;
        let g = Pairing::sample_uniform(n, 3, &mut rng).unwrap();
        let report = local_law_tv(&g, 0.0, n / 2, 1, n, 100, &rng.substream(2)).unwrap();
        assert!(report.tv < 0.02, "tv = {}", report.tv);
    }
}
