//! Shared fixtures for the criterion benches.

use fixmag::graph::{Pairing, SpinConfig};
use fixmag::CounterRng;

pub fn bench_graph(n: usize, d: usize, seed: u64) -> Pairing {
    Pairing::sample_uniform(n, d, &mut CounterRng::new(seed, 0)).expect("valid size")
}

pub fn bench_config(pairing: &Pairing, k_plus: usize, seed: u64) -> SpinConfig {
    SpinConfig::uniform_with_k_plus(pairing, k_plus, &mut CounterRng::new(seed, 1)).expect("valid k")
}
