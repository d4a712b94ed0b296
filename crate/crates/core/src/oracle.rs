//! Brute-force ground truth on tiny instances: exact partition functions,
//! exact first moments, dense transition kernels with spectra, and exact
//! total-variation mixing curves.
//!
//! Everything here is exponential-time by design and guarded by size
//! limits; the rest of the crate is validated against it.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::graph::{neighbor_counts, Pairing};
use crate::{Error, Result};

/// All (dn−1)!! pairings of the clones of n degree-d vertices. Guarded at
/// dn ≤ 12 (10395 pairings).
pub fn all_pairings(n: usize, d: usize) -> Result<Vec<Pairing>> {
    let clones = n * d;
    if clones % 2 != 0 {
        return Err(Error::invalid_parameter(format!("dn = {clones} is odd")));
    }
    if clones > 12 {
        return Err(Error::TooLarge(format!("dn = {clones} exceeds the enumeration budget of 12")));
    }
    let mut out = Vec::new();
    let mut mate = vec![u32::MAX; clones];
    fn recurse(mate: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let first = match mate.iter().position(|&m| m == u32::MAX) {
            Some(c) => c,
            None => {
                out.push(mate.clone());
                return;
            }
        };
        for partner in first + 1..mate.len() {
            if mate[partner] == u32::MAX {
                mate[first] = partner as u32;
                mate[partner] = first as u32;
                recurse(mate, out);
                mate[first] = u32::MAX;
                mate[partner] = u32::MAX;
            }
        }
    }
    let mut raw = Vec::new();
    recurse(&mut mate, &mut raw);
    for m in raw {
        out.push(Pairing::from_mates(n, d, m)?);
    }
    Ok(out)
}

fn mono_edges_of_mask(edges: &[(usize, usize)], mask: u32) -> usize {
    edges
        .iter()
        .filter(|&&(u, v)| (mask >> u) & 1 == (mask >> v) & 1)
        .count()
}

fn vertex_edges(pairing: &Pairing) -> Vec<(usize, usize)> {
    pairing
        .edges()
        .map(|(c, m)| (pairing.vertex_of(c), pairing.vertex_of(m)))
        .collect()
}

/// z_k = Σ_{σ: k pluses} e^{βH(σ)} for a single k.
pub fn enumerate_z(pairing: &Pairing, beta: f64, k_plus: usize) -> Result<f64> {
    let n = pairing.n();
    if n > 24 {
        return Err(Error::TooLarge(format!("n = {n} exceeds the 2^n enumeration budget of 24")));
    }
    let edges = vertex_edges(pairing);
    let mut z = 0.0;
    for mask in 0u32..1u32 << n {
        if mask.count_ones() as usize == k_plus {
            z += (beta * mono_edges_of_mask(&edges, mask) as f64).exp();
        }
    }
    Ok(z)
}

/// The full table (z_0, …, z_n); Σ_k z_k is the Ising partition function.
pub fn z_table(pairing: &Pairing, beta: f64) -> Result<Vec<f64>> {
    let n = pairing.n();
    if n > 24 {
        return Err(Error::TooLarge(format!("n = {n} exceeds the 2^n enumeration budget of 24")));
    }
    let edges = vertex_edges(pairing);
    let mut table = vec![0.0f64; n + 1];
    for mask in 0u32..1u32 << n {
        table[mask.count_ones() as usize] +=
            (beta * mono_edges_of_mask(&edges, mask) as f64).exp();
    }
    Ok(table)
}

/// Exact 𝔼[Z(k_plus)] over all pairings, no asymptotics. Guarded at dn ≤ 12.
pub fn enumerate_first_moment(n: usize, d: usize, beta: f64, k_plus: usize) -> Result<f64> {
    let pairings = all_pairings(n, d)?;
    let mut total = 0.0;
    for g in &pairings {
        total += enumerate_z(g, beta, k_plus)?;
    }
    Ok(total / pairings.len() as f64)
}

/// Exact value of (1/(k+1)) 𝔼_{π_k}[Σ_v 1{σ_v = −1} e^{β Σ_{w∼v} σ_w}]
/// by enumeration over the slice; equals z_{k+1}/z_k on every multigraph.
/// The inner sum ranges over non-loop incident edges (the energy change of
/// flipping v), so the identity is exact in the presence of loops too.
pub fn ratio_identity_rhs(pairing: &Pairing, beta: f64, k_plus: usize) -> Result<f64> {
    let n = pairing.n();
    if n > 24 {
        return Err(Error::TooLarge(format!("n = {n} exceeds the 2^n enumeration budget of 24")));
    }
    let edges = vertex_edges(pairing);
    let mut zk = 0.0;
    let mut weighted = 0.0;
    let mut spins = vec![-1i8; n];
    for mask in 0u32..1u32 << n {
        if mask.count_ones() as usize != k_plus {
            continue;
        }
        for (v, s) in spins.iter_mut().enumerate() {
            *s = if mask >> v & 1 == 1 { 1 } else { -1 };
        }
        let w = (beta * mono_edges_of_mask(&edges, mask) as f64).exp();
        zk += w;
        let mut stat = 0.0;
        for v in 0..n {
            if spins[v] == -1 {
                stat += (beta * crate::graph::local_field(pairing, &spins, v) as f64).exp();
            }
        }
        weighted += w * stat;
    }
    if zk == 0.0 {
        return Err(Error::invalid_parameter(format!("empty slice k = {k_plus}")));
    }
    Ok(weighted / zk / (k_plus as f64 + 1.0))
}

/// Which one-step kernel to realize as a dense matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainKind {
    Glauber,
    GlauberPlus,
    Kawasaki { k_plus: usize },
    Hybrid,
    HybridPlus,
}

/// A fully enumerated reversible chain: states, kernel, stationary law, and
/// modulus-sorted spectrum.
#[derive(Clone, Debug)]
pub struct DenseChain {
    /// Spin-vector states as bitmasks (bit v set ⇔ σ_v = +1), ascending;
    /// within a fixed plus-count this is colex order over the subsets.
    pub labels: Vec<u32>,
    pub kernel: DMatrix<f64>,
    pub stationary: DVector<f64>,
    /// Eigenvalues sorted by decreasing modulus; `eigenvalues[0] == 1`.
    pub eigenvalues: Vec<f64>,
}

impl DenseChain {
    /// Wrap an explicit kernel. When `stationary` is `None` it is computed
    /// from the kernel; the spectrum comes from the π-weighted symmetrized
    /// similarity transform, so reversible kernels get real spectra.
    pub fn from_rows(
        labels: Vec<u32>,
        rows: Vec<Vec<f64>>,
        stationary: Option<Vec<f64>>,
    ) -> Result<DenseChain> {
        let m = labels.len();
        if rows.len() != m || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidInput("kernel shape mismatch".into()));
        }
        let kernel = DMatrix::from_fn(m, m, |i, j| rows[i][j]);
        for i in 0..m {
            let s: f64 = kernel.row(i).iter().sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput(format!("row {i} sums to {s}")));
            }
        }
        let stationary = match stationary {
            Some(pi) => {
                let total: f64 = pi.iter().sum();
                DVector::from_iterator(m, pi.into_iter().map(|p| p / total))
            }
            None => solve_stationary(&kernel)?,
        };
        let eigenvalues = symmetrized_spectrum(&kernel, &stationary);
        Ok(DenseChain {
            labels,
            kernel,
            stationary,
            eigenvalues,
        })
    }

    /// Spectral gap 1 − |λ₂|.
    pub fn gap(&self) -> f64 {
        1.0 - self.eigenvalues.get(1).map(|l| l.abs()).unwrap_or(0.0)
    }

    /// max over pairs of |π_i P_ij − π_j P_ji|.
    pub fn reversibility_defect(&self) -> f64 {
        let m = self.labels.len();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let d =
                    (self.stationary[i] * self.kernel[(i, j)] - self.stationary[j] * self.kernel[(j, i)]).abs();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// max_j |(πP)_j − π_j|.
    pub fn stationarity_defect(&self) -> f64 {
        let prod = self.kernel.transpose() * &self.stationary;
        (prod - &self.stationary).abs().max()
    }

    /// Restriction chain on a subset of states: off-diagonal entries are
    /// kept, lost mass moves to the diagonal.
    pub fn restriction(&self, keep: &[bool]) -> DenseChain {
        let idx: Vec<usize> = (0..self.labels.len()).filter(|&i| keep[i]).collect();
        let m = idx.len();
        let mut rows = vec![vec![0.0; m]; m];
        for (a, &i) in idx.iter().enumerate() {
            let mut off_sum = 0.0;
            for (b, &j) in idx.iter().enumerate() {
                if a != b {
                    rows[a][b] = self.kernel[(i, j)];
                    off_sum += rows[a][b];
                }
            }
            rows[a][a] = 1.0 - off_sum;
        }
        let labels: Vec<u32> = idx.iter().map(|&i| self.labels[i]).collect();
        let pi: Vec<f64> = idx.iter().map(|&i| self.stationary[i]).collect();
        DenseChain::from_rows(labels, rows, Some(pi)).expect("restriction of a valid kernel")
    }

    /// Index of a state mask.
    pub fn position(&self, label: u32) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }
}

fn solve_stationary(kernel: &DMatrix<f64>) -> Result<DVector<f64>> {
    let m = kernel.nrows();
    // (Pᵀ − I) π = 0 with the last balance row replaced by normalization
    let mut a = kernel.transpose() - DMatrix::<f64>::identity(m, m);
    for j in 0..m {
        a[(m - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(m);
    b[m - 1] = 1.0;
    a.lu()
        .solve(&b)
        .ok_or_else(|| Error::InvalidInput("kernel has no unique stationary vector".into()))
}

fn symmetrized_spectrum(kernel: &DMatrix<f64>, pi: &DVector<f64>) -> Vec<f64> {
    let m = kernel.nrows();
    let mut s = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            s[(i, j)] = kernel[(i, j)] * (pi[i] / pi[j]).sqrt();
        }
    }
    let sym = (&s + s.transpose()) * 0.5;
    let mut eigs: Vec<f64> = sym.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
    eigs
}

fn ceil_half(n: usize) -> usize {
    n.div_ceil(2)
}

fn spins_of_mask(n: usize, mask: u32) -> Vec<i8> {
    (0..n).map(|v| if mask >> v & 1 == 1 { 1i8 } else { -1 }).collect()
}

/// Exact one-step kernel of the requested dynamics variant, with its
/// stationary law e^{βH} restricted to the variant's state space.
pub fn build_dense_chain(pairing: &Pairing, beta: f64, kind: ChainKind) -> Result<DenseChain> {
    let n = pairing.n();
    if n > 20 {
        return Err(Error::TooLarge(format!("n = {n} state space does not fit dense analysis")));
    }
    let labels: Vec<u32> = match kind {
        ChainKind::Glauber | ChainKind::Hybrid => (0u32..1 << n).collect(),
        ChainKind::GlauberPlus | ChainKind::HybridPlus => {
            (0u32..1 << n).filter(|m| m.count_ones() as usize >= ceil_half(n)).collect()
        }
        ChainKind::Kawasaki { k_plus } => {
            if k_plus > n {
                return Err(Error::invalid_parameter(format!("k_plus = {k_plus} exceeds n = {n}")));
            }
            (0u32..1 << n).filter(|m| m.count_ones() as usize == k_plus).collect()
        }
    };
    if labels.len() > 20_000 {
        return Err(Error::TooLarge(format!("{} states exceed the dense budget", labels.len())));
    }
    let index: std::collections::HashMap<u32, usize> =
        labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let edges = vertex_edges(pairing);
    let m = labels.len();
    let mut rows = vec![vec![0.0f64; m]; m];

    let restricted = matches!(kind, ChainKind::GlauberPlus | ChainKind::HybridPlus);
    let glauber_weight = match kind {
        ChainKind::Glauber | ChainKind::GlauberPlus => 1.0,
        ChainKind::Hybrid | ChainKind::HybridPlus => 0.5,
        ChainKind::Kawasaki { .. } => 0.0,
    };
    let kawasaki_weight = match kind {
        ChainKind::Kawasaki { .. } => 1.0,
        ChainKind::Hybrid | ChainKind::HybridPlus => 0.5,
        _ => 0.0,
    };

    for (i, &mask) in labels.iter().enumerate() {
        let spins = spins_of_mask(n, mask);
        if glauber_weight > 0.0 {
            for v in 0..n {
                let (mp, mm) = neighbor_counts(pairing, &spins, v);
                let wp = (beta * mp as f64).exp();
                let wm = (beta * mm as f64).exp();
                let p_plus = wp / (wp + wm);
                for (s_new, prob) in [(1i8, p_plus), (-1, 1.0 - p_plus)] {
                    let target = if s_new == 1 { mask | 1 << v } else { mask & !(1 << v) };
                    let dest = if restricted && (target.count_ones() as usize) < ceil_half(n) {
                        i // rejected moves hold in place
                    } else {
                        index[&target]
                    };
                    rows[i][dest] += glauber_weight * prob / n as f64;
                }
            }
        }
        if kawasaki_weight > 0.0 {
            let k = mask.count_ones() as usize;
            if k == 0 || k == n {
                rows[i][i] += kawasaki_weight;
            } else {
                let h_here = mono_edges_of_mask(&edges, mask) as f64;
                let pair_prob = 1.0 / (k as f64 * (n - k) as f64);
                for x in 0..n {
                    if mask >> x & 1 == 0 {
                        continue;
                    }
                    for y in 0..n {
                        if mask >> y & 1 == 1 {
                            continue;
                        }
                        let target = (mask & !(1 << x)) | 1 << y;
                        let dh = mono_edges_of_mask(&edges, target) as f64 - h_here;
                        let accept = 1.0 / (1.0 + (-beta * dh).exp());
                        let dest = index[&target];
                        rows[i][dest] += kawasaki_weight * pair_prob * accept;
                        rows[i][i] += kawasaki_weight * pair_prob * (1.0 - accept);
                    }
                }
            }
        }
    }

    let pi: Vec<f64> = labels
        .iter()
        .map(|&mask| (beta * mono_edges_of_mask(&edges, mask) as f64).exp())
        .collect();
    DenseChain::from_rows(labels, rows, Some(pi))
}

/// Exact TV distance to stationarity after each step, by distribution-vector
/// iteration.
pub fn exact_tv_curve(chain: &DenseChain, init: &[f64], horizon: usize) -> Vec<(usize, f64)> {
    let m = chain.labels.len();
    assert_eq!(init.len(), m);
    let mut dist = DVector::from_column_slice(init);
    let mut out = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        let tv = 0.5
            * dist
                .iter()
                .zip(chain.stationary.iter())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        out.push((t, tv));
        if t < horizon {
            dist = chain.kernel.transpose() * dist;
        }
    }
    out
}

/// Golden-file record for regression tests: exact z-table, variant spectral
/// gaps, and the Glauber stationary law.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoldenRecord {
    pub n: usize,
    pub d: usize,
    pub beta: f64,
    pub z_table: Vec<f64>,
    /// (variant name, spectral gap); Kawasaki taken at k = ⌈n/2⌉.
    pub gaps: Vec<(String, f64)>,
    pub stationary: Vec<f64>,
}

pub fn golden_record(pairing: &Pairing, beta: f64) -> Result<GoldenRecord> {
    let n = pairing.n();
    let z = z_table(pairing, beta)?;
    let kinds = [
        ("glauber", ChainKind::Glauber),
        ("glauber_plus", ChainKind::GlauberPlus),
        ("kawasaki", ChainKind::Kawasaki { k_plus: ceil_half(n) }),
        ("hybrid", ChainKind::Hybrid),
        ("hybrid_plus", ChainKind::HybridPlus),
    ];
    let mut gaps = Vec::new();
    let mut stationary = Vec::new();
    for (name, kind) in kinds {
        let chain = build_dense_chain(pairing, beta, kind)?;
        gaps.push((name.to_string(), chain.gap()));
        if kind == ChainKind::Glauber {
            stationary = chain.stationary.iter().cloned().collect();
        }
    }
    Ok(GoldenRecord {
        n,
        d: pairing.d(),
        beta,
        z_table: z,
        gaps,
        stationary,
    })
}
