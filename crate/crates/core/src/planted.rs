//! Exact sampling from the planted model: a spin assignment uniform at a
//! fixed plus-count, then a pairing drawn with probability proportional to
//! e^{βH} by (1) drawing the bichromatic edge count B from its exact pmf
//! and (2) filling a fixed slot sequence of edge types with uniformly
//! chosen unmatched clones of the required spins. Conditional on B all
//! pairings with that count are equiprobable, and the slot order does not
//! matter, so the two stages compose to the exact planted law.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::annealed::edge_count_pmf;
use crate::graph::{count_mono, Pairing, SpinConfig};
use crate::oracle;
use crate::rng::CounterRng;
use crate::{Error, Result};

/// One draw from the planted model.
#[derive(Clone, Debug)]
pub struct PlantedSample {
    pub config: SpinConfig,
    pub pairing: Pairing,
    /// Bichromatic edge count; equals dn/2 − H by construction.
    pub bichromatic: usize,
}

/// Edge type of one matching slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotKind {
    Bichromatic,
    MonoPlus,
    MonoMinus,
}

/// Fill a slot sequence with uniformly chosen unmatched clones of the
/// required spins. `plus_clones`/`minus_clones` list the clone ids of each
/// spin class; the slot counts must consume them exactly.
pub fn sample_pairing_slots(
    n: usize,
    d: usize,
    plus_clones: &[u32],
    minus_clones: &[u32],
    slots: &[SlotKind],
    rng: &mut CounterRng,
) -> Result<Pairing> {
    let mut plus = plus_clones.to_vec();
    let mut minus = minus_clones.to_vec();
    let mut mate = vec![u32::MAX; n * d];
    let take_uniform = |pool: &mut Vec<u32>, rng: &mut CounterRng| -> u32 {
        let j = rng.index(pool.len());
        pool.swap_remove(j)
    };
    for slot in slots {
        match slot {
            SlotKind::Bichromatic => {
                if plus.is_empty() || minus.is_empty() {
                    return Err(Error::InvalidInput("slot sequence exhausts a clone class".into()));
                }
                let a = take_uniform(&mut plus, rng);
                let b = take_uniform(&mut minus, rng);
                mate[a as usize] = b;
                mate[b as usize] = a;
            }
            SlotKind::MonoPlus | SlotKind::MonoMinus => {
                let pool = if *slot == SlotKind::MonoPlus { &mut plus } else { &mut minus };
                if pool.len() < 2 {
                    return Err(Error::InvalidInput("slot sequence exhausts a clone class".into()));
                }
                let a = take_uniform(pool, rng);
                let b = take_uniform(pool, rng);
                mate[a as usize] = b;
                mate[b as usize] = a;
            }
        }
    }
    if !(plus.is_empty() && minus.is_empty()) {
        return Err(Error::InvalidInput("slot sequence leaves unmatched clones".into()));
    }
    Pairing::from_mates(n, d, mate)
}

/// Canonical slot order: all bichromatic slots first, then monochromatic
/// plus, then monochromatic minus.
pub fn canonical_slots(n_plus: usize, n_minus: usize, bichromatic: usize) -> Vec<SlotKind> {
    let mut slots = vec![SlotKind::Bichromatic; bichromatic];
    slots.extend(std::iter::repeat(SlotKind::MonoPlus).take((n_plus - bichromatic) / 2));
    slots.extend(std::iter::repeat(SlotKind::MonoMinus).take((n_minus - bichromatic) / 2));
    slots
}

/// Draw (σ̂, Ĝ) with k_plus plus spins: σ̂ is a uniform arrangement of the
/// spins over vertex labels, B comes from the exact bichromatic pmf, and
/// the pairing is uniform among those with exactly B bichromatic edges.
pub fn sample_planted(
    n: usize,
    d: u32,
    beta: f64,
    k_plus: usize,
    rng: &mut CounterRng,
) -> Result<PlantedSample> {
    let d = d as usize;
    let dn = n * d;
    if dn % 2 != 0 {
        return Err(Error::invalid_parameter(format!("dn = {dn} is odd")));
    }
    if k_plus > n {
        return Err(Error::invalid_parameter(format!("k_plus = {k_plus} exceeds n = {n}")));
    }
    let n_plus = d * k_plus;
    let n_minus = dn - n_plus;
    let pmf = edge_count_pmf(n_plus, n_minus, beta)?;

    let mut spins = vec![-1i8; n];
    for s in spins.iter_mut().take(k_plus) {
        *s = 1;
    }
    rng.shuffle(&mut spins);

    let bichromatic = pmf.sample(rng);
    let mut plus_clones = Vec::with_capacity(n_plus);
    let mut minus_clones = Vec::with_capacity(n_minus);
    for (v, &s) in spins.iter().enumerate() {
        for c in (v * d) as u32..((v + 1) * d) as u32 {
            if s == 1 {
                plus_clones.push(c);
            } else {
                minus_clones.push(c);
            }
        }
    }
    let slots = canonical_slots(n_plus, n_minus, bichromatic);
    let pairing = sample_pairing_slots(n, d, &plus_clones, &minus_clones, &slots, rng)?;
    let config = SpinConfig::new(spins, &pairing)?;
    debug_assert_eq!(bichromatic, pairing.num_edges() - config.h());
    Ok(PlantedSample {
        config,
        pairing,
        bichromatic,
    })
}

/// Summary of the monochromatic-edge fraction across planted samples.
#[derive(Clone, Debug)]
pub struct ConcentrationReport {
    pub num_samples: usize,
    pub n: usize,
    pub d: usize,
    pub k_plus: usize,
    pub beta: f64,
    pub mean_rho: f64,
    /// None with fewer than two samples.
    pub std_rho: Option<f64>,
    /// std · √n, compared against the ceiling.
    pub scaled_std: Option<f64>,
    pub ceiling: f64,
    pub failed: bool,
}

/// Mean and dispersion of ρ̂ = H/(dn/2) over samples drawn at common
/// parameters. The edge fraction concentrates at rate 1/√n, so the flag
/// trips when std·√n exceeds `ceiling` (an empirical knob, not a derived
/// constant).
pub fn edge_concentration_report(
    samples: &[PlantedSample],
    beta: f64,
    ceiling: f64,
) -> Result<ConcentrationReport> {
    let first = samples
        .first()
        .ok_or_else(|| Error::InvalidInput("need at least one sample".into()))?;
    let (n, d, k_plus) = (
        first.pairing.n(),
        first.pairing.d(),
        first.config.k_plus(),
    );
    let mut stats = crate::numeric::RunningStats::new();
    for s in samples {
        if s.pairing.n() != n || s.pairing.d() != d || s.config.k_plus() != k_plus {
            return Err(Error::InvalidInput("samples drawn at mixed parameters".into()));
        }
        stats.push(s.config.h() as f64 / s.pairing.num_edges() as f64);
    }
    let std_rho = stats.std_dev();
    let scaled_std = std_rho.map(|s| s * (n as f64).sqrt());
    Ok(ConcentrationReport {
        num_samples: samples.len(),
        n,
        d,
        k_plus,
        beta,
        mean_rho: stats.mean(),
        std_rho,
        scaled_std,
        ceiling,
        failed: scaled_std.map(|s| s > ceiling).unwrap_or(false),
    })
}

#[derive(Clone, Debug)]
pub struct NishimoriReport {
    pub tv: f64,
    pub outcomes: usize,
    pub samples: usize,
}

/// Compare the empirical law of `sample_planted` against the exact joint
/// P(G)·e^{βH(σ)} / normalizer, enumerated over every (pairing, config)
/// pair. Exact regime only: dn ≤ 8.
pub fn nishimori_consistency(
    n: usize,
    d: u32,
    beta: f64,
    k_plus: usize,
    num_samples: usize,
    rng: &mut CounterRng,
) -> Result<NishimoriReport> {
    let dusize = d as usize;
    if n * dusize > 8 {
        return Err(Error::TooLarge(format!(
            "dn = {} exceeds the exact enumeration budget of 8",
            n * dusize
        )));
    }
    let pairings = oracle::all_pairings(n, dusize)?;
    let configs = configs_with_k_plus(n, k_plus);
    // exact joint law
    let mut weights: HashMap<(Vec<u32>, Vec<i8>), f64> = HashMap::new();
    let mut total = 0.0;
    for g in &pairings {
        for spins in &configs {
            let w = (beta * count_mono(g, spins) as f64).exp();
            total += w;
            weights.insert((g.key(), spins.clone()), w);
        }
    }
    // empirical
    let mut counts: HashMap<(Vec<u32>, Vec<i8>), usize> = HashMap::new();
    for _ in 0..num_samples {
        let s = sample_planted(n, d, beta, k_plus, rng)?;
        *counts
            .entry((s.pairing.key(), s.config.spins().to_vec()))
            .or_insert(0) += 1;
    }
    let mut tv = 0.0;
    for (key, w) in &weights {
        let exact = w / total;
        let emp = counts.get(key).map(|&c| c as f64 / num_samples as f64).unwrap_or(0.0);
        tv += (exact - emp).abs();
    }
    // outcomes never produced by the exact law but seen empirically would be
    // a bug; count them into the distance as well
    for (key, &c) in &counts {
        if !weights.contains_key(key) {
            tv += c as f64 / num_samples as f64;
        }
    }
    Ok(NishimoriReport {
        tv: tv / 2.0,
        outcomes: weights.len(),
        samples: num_samples,
    })
}

fn configs_with_k_plus(n: usize, k_plus: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize == k_plus {
            out.push((0..n).map(|v| if mask >> v & 1 == 1 { 1i8 } else { -1 }).collect());
        }
    }
    out
}

/// PlantedSample text format: the pairing format followed by one spin line
/// `s <±±…±>`.
pub fn planted_to_text(sample: &PlantedSample) -> String {
    let mut out = sample.pairing.to_text();
    let _ = write!(out, "s ");
    for &s in sample.config.spins() {
        out.push(if s == 1 { '+' } else { '-' });
    }
    out.push('\n');
    out
}

pub fn planted_from_text(text: &str) -> Result<PlantedSample> {
    let spin_line = text
        .lines()
        .find(|l| l.starts_with("s "))
        .ok_or_else(|| Error::Parse("missing spin line".into()))?;
    let pairing_text: String = text
        .lines()
        .filter(|l| !l.starts_with("s "))
        .map(|l| format!("{l}\n"))
        .collect();
    let pairing = Pairing::from_text(&pairing_text)?;
    let spins: Vec<i8> = spin_line[2..]
        .trim()
        .chars()
        .map(|c| match c {
            '+' => Ok(1i8),
            '-' => Ok(-1i8),
            other => Err(Error::Parse(format!("bad spin character {other:?}"))),
        })
        .collect::<Result<_>>()?;
    let config = SpinConfig::new(spins, &pairing)?;
    let bichromatic = pairing.num_edges() - config.h();
    Ok(PlantedSample {
        config,
        pairing,
        bichromatic,
    })
}
