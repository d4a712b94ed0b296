//! Distributional tests of the configuration-model sampler and switch
//! machinery against exhaustive enumeration.

use std::collections::HashMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use fixmag::graph::{apply_switch, count_mono, Pairing, Switch, SwitchMode};
use fixmag::oracle;
use fixmag::CounterRng;

fn chi2_p_value(chi2: f64, dof: usize) -> f64 {
    1.0 - ChiSquared::new(dof as f64).unwrap().cdf(chi2)
}

#[test]
fn uniform_sampler_chi_squared() {
    let draws = 150_000usize;
    let mut rng = CounterRng::new(0xC0FFEE, 0);
    let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
    for _ in 0..draws {
        let g = Pairing::sample_uniform(2, 3, &mut rng).unwrap();
        *counts.entry(g.key()).or_insert(0) += 1;
    }
    assert_eq!(counts.len(), 15);
    let expect = draws as f64 / 15.0;
    let chi2: f64 = counts.values().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    let p = chi2_p_value(chi2, 14);
    assert!(p > 0.001, "chi2 = {chi2}, p = {p}");
}

#[test]
fn uniform_sampler_tv_small_instances() {
    // every instance with dn ≤ 8: empirical TV to uniform below 0.01
    for (n, d) in [(2usize, 1usize), (2, 2), (4, 2), (2, 4), (8, 1)] {
        let space = oracle::all_pairings(n, d).unwrap();
        let draws = 200_000usize;
        let mut rng = CounterRng::new(0xDADA + (n * 31 + d) as u64, 0);
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for _ in 0..draws {
            let g = Pairing::sample_uniform(n, d, &mut rng).unwrap();
            *counts.entry(g.key()).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), space.len());
        let uniform = 1.0 / space.len() as f64;
        let tv: f64 = counts
            .values()
            .map(|&c| (c as f64 / draws as f64 - uniform).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.01, "(n,d) = ({n},{d}): tv = {tv}");
    }
}

#[test]
fn switch_energy_change_bounded_by_two_exhaustively() {
    // max |ΔH| over all (pairing, switch, config) at n = 2, d = 3 is 2
    let pairings = oracle::all_pairings(2, 3).unwrap();
    let mut max_abs = 0i64;
    for g in &pairings {
        let edges: Vec<(u32, u32)> = g.edges().collect();
        for i in 0..edges.len() {
            for j in 0..edges.len() {
                if i == j {
                    continue;
                }
                for mode in [SwitchMode::Cross, SwitchMode::Parallel] {
                    let sw = Switch {
                        first: edges[i],
                        second: edges[j],
                        mode,
                    };
                    let g2 = apply_switch(g, &sw).unwrap();
                    for mask in 0u32..4 {
                        let spins: Vec<i8> =
                            (0..2).map(|v| if mask >> v & 1 == 1 { 1 } else { -1 }).collect();
                        let dh = count_mono(&g2, &spins) as i64 - count_mono(g, &spins) as i64;
                        max_abs = max_abs.max(dh.abs());
                    }
                }
            }
        }
    }
    assert_eq!(max_abs, 2);
}

#[test]
fn switch_fuzz_incremental_consistency() {
    // ΔH bookkeeping across random switches matches full recounts
    let mut rng = CounterRng::new(0xFACE, 0);
    let mut g = Pairing::sample_uniform(20, 3, &mut rng).unwrap();
    let spins: Vec<i8> = (0..20).map(|_| rng.spin()).collect();
    let mut h = count_mono(&g, &spins);
    for _ in 0..10_000 {
        let edges: Vec<(u32, u32)> = g.edges().collect();
        let i = rng.index(edges.len());
        let mut j = rng.index(edges.len());
        while j == i {
            j = rng.index(edges.len());
        }
        let mode = if rng.bernoulli(0.5) { SwitchMode::Cross } else { SwitchMode::Parallel };
        let sw = Switch {
            first: edges[i],
            second: edges[j],
            mode,
        };
        let g2 = apply_switch(&g, &sw).unwrap();
        let h2 = count_mono(&g2, &spins);
        assert!((h2 as i64 - h as i64).abs() <= 2);
        g = g2;
        h = h2;
    }
}

#[test]
fn locally_treelike_at_scale() {
    // d=3, n=10⁴: under 1% of radius-2 balls contain a cycle
    let mut rng = CounterRng::new(0xB0BA, 0);
    let n = 10_000usize;
    let g = Pairing::sample_uniform(n, 3, &mut rng).unwrap();
    let mut non_tree = 0usize;
    for v in 0..n {
        let ball = fixmag::graph::neighborhood(&g, v, 2);
        if !ball.is_tree {
            non_tree += 1;
        }
        let bound = 3 * 2usize.pow(1);
        let boundary = ball.boundary_size(2);
        assert!(boundary <= bound);
        if ball.is_tree {
            assert_eq!(boundary, bound, "tree ball with deficient boundary at v = {v}");
        }
    }
    assert!(
        (non_tree as f64) < 0.01 * n as f64,
        "non-tree fraction {}",
        non_tree as f64 / n as f64
    );
}

#[test]
fn boundary_equality_iff_tree_fuzzed() {
    let mut rng = CounterRng::new(0xA11A, 0);
    for _ in 0..300 {
        let n = 8 + 2 * rng.index(8);
        let g = Pairing::sample_uniform(n, 3, &mut rng).unwrap();
        let v = rng.index(n);
        let r = 1 + rng.index(2);
        let ball = fixmag::graph::neighborhood(&g, v, r);
        let bound = 3 * 2usize.pow(r as u32 - 1);
        let boundary = ball.boundary_size(r);
        assert!(boundary <= bound);
        assert_eq!(ball.is_tree, boundary == bound, "v = {v}, r = {r}");
    }
}
