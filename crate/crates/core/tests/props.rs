//! Property tests over randomized instances.

use proptest::prelude::*;

use fixmag::annealed::{b_count_log, bichromatic_support};
use fixmag::graph::{apply_switch, count_mono, Pairing, SpinConfig, Switch, SwitchMode};
use fixmag::numeric::ln_double_factorial_odd;
use fixmag::planted::{planted_from_text, planted_to_text, sample_planted};
use fixmag::stats::edge_overlap;
use fixmag::CounterRng;

fn arb_pairing(max_n: usize) -> impl Strategy<Value = Pairing> {
    (2usize..=max_n, 1usize..=4, any::<u64>()).prop_map(|(half_n, d, seed)| {
        let n = 2 * half_n;
        let mut rng = CounterRng::new(seed, 0);
        Pairing::sample_uniform(n, d, &mut rng).unwrap()
    })
}

proptest! {
    #[test]
    fn pairing_text_round_trip(g in arb_pairing(10)) {
        let text = g.to_text();
        prop_assert_eq!(Pairing::from_text(&text).unwrap(), g);
    }

    #[test]
    fn energy_invariant_under_global_flip(g in arb_pairing(10), seed in any::<u64>()) {
        let mut rng = CounterRng::new(seed, 1);
        let spins: Vec<i8> = (0..g.n()).map(|_| rng.spin()).collect();
        let flipped: Vec<i8> = spins.iter().map(|s| -s).collect();
        prop_assert_eq!(count_mono(&g, &spins), count_mono(&g, &flipped));
    }

    #[test]
    fn switch_involution(g in arb_pairing(10), seed in any::<u64>()) {
        let mut rng = CounterRng::new(seed, 2);
        let edges: Vec<(u32, u32)> = g.edges().collect();
        prop_assume!(edges.len() >= 2);
        let i = rng.index(edges.len());
        let mut j = rng.index(edges.len());
        while j == i { j = rng.index(edges.len()); }
        let mode = if rng.bernoulli(0.5) { SwitchMode::Cross } else { SwitchMode::Parallel };
        let sw = Switch { first: edges[i], second: edges[j], mode };
        let g2 = apply_switch(&g, &sw).unwrap();
        prop_assert_eq!(apply_switch(&g2, &sw.inverse()).unwrap(), g);
    }

    #[test]
    fn incremental_energy_matches_recount(g in arb_pairing(8), seed in any::<u64>()) {
        let mut rng = CounterRng::new(seed, 3);
        let mut cfg = SpinConfig::uniform(&g, &mut rng);
        for _ in 0..50 {
            let v = rng.index(g.n());
            cfg.flip(v, &g);
        }
        prop_assert_eq!(cfg.h(), count_mono(&g, cfg.spins()));
        prop_assert_eq!(cfg.k_plus(), cfg.spins().iter().filter(|&&s| s == 1).count());
    }

    #[test]
    fn bichromatic_counts_sum_to_all_matchings(a in 1usize..14, b in 1usize..14) {
        // force matching parity so the support is non-empty
        let n_plus = a;
        let n_minus = if a % 2 == b % 2 { b } else { b + 1 };
        let total: f64 = bichromatic_support(n_plus, n_minus)
            .iter()
            .map(|&k| b_count_log(n_plus, n_minus, k).unwrap().exp())
            .sum();
        let expect = ln_double_factorial_odd((n_plus + n_minus) / 2).exp();
        prop_assert!(((total - expect) / expect).abs() < 1e-9);
    }

    #[test]
    fn planted_sample_round_trip(seed in any::<u64>(), k in 0usize..=6) {
        let mut rng = CounterRng::new(seed, 4);
        let s = sample_planted(6, 3, 0.5, k, &mut rng).unwrap();
        let back = planted_from_text(&planted_to_text(&s)).unwrap();
        prop_assert_eq!(back.pairing, s.pairing);
        prop_assert_eq!(back.config.spins(), s.config.spins());
        prop_assert_eq!(back.bichromatic, s.bichromatic);
    }

    #[test]
    fn overlap_mass_and_vertex_recovery(g in arb_pairing(8), seed in any::<u64>()) {
        let mut rng = CounterRng::new(seed, 5);
        let a: Vec<i8> = (0..g.n()).map(|_| rng.spin()).collect();
        let b: Vec<i8> = (0..g.n()).map(|_| rng.spin()).collect();
        let overlap = edge_overlap(&g, &a, &b);
        prop_assert!((overlap.sum() - 1.0).abs() < 1e-12);
        let direct = a.iter().zip(&b).filter(|(&x, &y)| x == 1 && y == 1).count() as f64
            / g.n() as f64;
        prop_assert!((overlap.plus_plus_vertex_fraction() - direct).abs() < 1e-12);
    }
}
