//! Translation-invariant Ising measures on the infinite d-regular tree.
//!
//! A measure is parametrized by the positive ratio R of plus to minus
//! likelihoods on the (d−1)-ary subtree. R is a fixed point of the scalar
//! recursion Φ; each fixed point yields a top-down broadcast process with a
//! 2×2 row-stochastic transition matrix and a stationary root law, whose
//! vertex marginal η and monochromatic-edge probability ρ have closed forms.

use crate::numeric::{bisect, central_diff};
use crate::rng::CounterRng;
use crate::{Error, ModelParams, Result};

/// Uniqueness and reconstruction thresholds (β_c, β_r) for degree d.
///
/// β_c = 2·atanh(1/(d−1)) marks the onset of multiple BP fixed points at
/// zero field; β_r = log((√(d−1)+1)/(√(d−1)−1)) is the Kesten–Stigum point
/// where (d−1)·λ₂² crosses one.
pub fn thresholds(d: u32) -> Result<(f64, f64)> {
    if d < 3 {
        return Err(Error::invalid_parameter(format!("degree d = {d} must be at least 3")));
    }
    let dm1 = (d - 1) as f64;
    let beta_c = 2.0 * (1.0 / dm1).atanh();
    let s = dm1.sqrt();
    let beta_r = ((s + 1.0) / (s - 1.0)).ln();
    Ok((beta_c, beta_r))
}

/// One translation-invariant tree measure: a BP ratio R at field h together
/// with its derived statistics.
#[derive(Clone, Copy, Debug)]
pub struct TreeMeasure {
    pub d: u32,
    pub beta: f64,
    /// Positive BP ratio.
    pub r: f64,
    /// Field at which `r` is a fixed point of the recursion.
    pub h: f64,
    /// Vertex magnetization in (−1, 1).
    pub eta: f64,
    /// Monochromatic-edge probability.
    pub rho: f64,
    /// Row-stochastic broadcast matrix, rows indexed by parent spin (+, −),
    /// columns by child spin (+, −).
    pub broadcast: [[f64; 2]; 2],
    /// |Φ'(R)| < 1 at this fixed point.
    pub stable: bool,
}

/// The BP recursion map Φ(R) = e^{2h} ((R e^β + 1)/(R + e^β))^{d−1}.
pub fn recursion_map(d: u32, beta: f64, h: f64, r: f64) -> f64 {
    let eb = beta.exp();
    (2.0 * h).exp() * ((r * eb + 1.0) / (r + eb)).powi(d as i32 - 1)
}

/// Magnetization of the measure with ratio R: (R²−1)/(R²+2e^{−β}R+1).
pub fn magnetization_of_ratio(beta: f64, r: f64) -> f64 {
    (r * r - 1.0) / (r * r + 2.0 * (-beta).exp() * r + 1.0)
}

fn broadcast_matrix(beta: f64, r: f64) -> [[f64; 2]; 2] {
    let eb = beta.exp();
    [
        [eb * r / (eb * r + 1.0), 1.0 / (eb * r + 1.0)],
        [r / (eb + r), eb / (eb + r)],
    ]
}

impl TreeMeasure {
    /// Assemble the measure for a ratio R known to be a fixed point at h.
    fn from_ratio(d: u32, beta: f64, h: f64, r: f64) -> TreeMeasure {
        let eta = magnetization_of_ratio(beta, r);
        let broadcast = broadcast_matrix(beta, r);
        let rho = 0.5 * (1.0 + eta) * broadcast[0][0] + 0.5 * (1.0 - eta) * broadcast[1][1];
        let step = 1e-6 * r.max(1.0);
        let phi_prime = central_diff(|x| recursion_map(d, beta, h, x), r, step);
        TreeMeasure {
            d,
            beta,
            r,
            h,
            eta,
            rho,
            broadcast,
            stable: phi_prime.abs() < 1.0,
        }
    }

    /// P(root = +) = (1+η)/2.
    pub fn root_plus_prob(&self) -> f64 {
        0.5 * (1.0 + self.eta)
    }

    /// Broadcast row for a parent spin: [P(child = +), P(child = −)].
    pub fn transition(&self, parent: i8) -> [f64; 2] {
        if parent == 1 {
            self.broadcast[0]
        } else {
            self.broadcast[1]
        }
    }
}

/// All positive fixed points of the recursion at the given parameters (one
/// or three), sorted by R. In log coordinates the residual x ↦ log Φ(e^x) − x
/// has at most three zeros; they are bracketed on a grid over
/// R ∈ [1e−12, 1e12] and refined by bisection.
pub fn bp_fixed_points(params: &ModelParams) -> Vec<TreeMeasure> {
    let ModelParams { d, beta, h } = *params;
    let resid = |x: f64| {
        let eb = beta.exp();
        let ex = x.exp();
        2.0 * h + (d as f64 - 1.0) * (((ex * eb + 1.0) / (ex + eb)).ln()) - x
    };
    let lo = -12.0 * std::f64::consts::LN_10;
    let hi = 12.0 * std::f64::consts::LN_10;
    let grid = 20_001usize;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev_x = lo;
    let mut prev_f = resid(lo);
    for i in 1..grid {
        let x = lo + (hi - lo) * i as f64 / (grid - 1) as f64;
        let fx = resid(x);
        if prev_f == 0.0 {
            roots.push(prev_x);
        } else if (prev_f < 0.0) != (fx < 0.0) {
            roots.push(bisect(resid, prev_x, x, 1e-15));
        }
        prev_x = x;
        prev_f = fx;
    }
    if prev_f == 0.0 {
        roots.push(prev_x);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    roots
        .into_iter()
        .map(|x| TreeMeasure::from_ratio(d, beta, h, x.exp()))
        .collect()
}

/// The unique tree measure with magnetization η: inverts the magnetization
/// formula for R (positive root of a quadratic), then solves the recursion
/// for h in closed form.
pub fn field_for_magnetization(d: u32, beta: f64, eta: f64) -> Result<TreeMeasure> {
    if !(eta > -1.0 && eta < 1.0) {
        return Err(Error::invalid_parameter(format!(
            "magnetization eta = {eta} must lie in (-1, 1)"
        )));
    }
    if d < 3 {
        return Err(Error::invalid_parameter(format!("degree d = {d} must be at least 3")));
    }
    if !(beta >= 0.0) {
        return Err(Error::invalid_parameter(format!("beta = {beta} must be nonnegative")));
    }
    let eb = beta.exp();
    // (1−η) R² − 2η e^{−β} R − (1+η) = 0, positive root
    let disc = (eta * eta) + eb * eb * (1.0 - eta * eta);
    let r = (eta + disc.sqrt()) / (eb * (1.0 - eta));
    // h = ½ [ log R − (d−1) log((R e^β + 1)/(R + e^β)) ]
    let h = 0.5 * (r.ln() - (d as f64 - 1.0) * ((r * eb + 1.0) / (r + eb)).ln());
    Ok(TreeMeasure::from_ratio(d, beta, h, r))
}

/// Monochromatic-edge probability of the magnetization-η tree measure.
/// Independent of d; the β = 0 singularity is handled by its analytic limit
/// (1+η²)/2. At |η| = 1 the continuous extension 1 is returned.
pub fn rho_eta(beta: f64, eta: f64) -> f64 {
    debug_assert!(beta >= 0.0);
    debug_assert!(eta.abs() <= 1.0);
    if eta.abs() >= 1.0 {
        return 1.0;
    }
    let e2b = (2.0 * beta).exp();
    if e2b - 1.0 < 1e-8 {
        return 0.5 * (1.0 + eta * eta);
    }
    (e2b - (e2b * (1.0 - eta * eta) + eta * eta).sqrt()) / (e2b - 1.0)
}

/// The non-unit eigenvalue of the 2×2 broadcast matrix: trace − 1.
///
/// (d−1)·λ₂² > 1 is the Kesten–Stigum reconstruction condition; for η ≠ 0
/// it is reported as a diagnostic only, not as the reconstruction threshold.
pub fn second_eigenvalue(measure: &TreeMeasure) -> f64 {
    measure.broadcast[0][0] + measure.broadcast[1][1] - 1.0
}

/// Spins generated level by level down the d-regular tree.
#[derive(Clone, Debug)]
pub struct TreeSample {
    pub d: u32,
    /// levels[0] is the root; level ℓ ≥ 1 has d(d−1)^{ℓ−1} spins. Children
    /// of the root are levels[1][0..d]; children of node j at level ℓ ≥ 1
    /// are levels[ℓ+1][j(d−1)..(j+1)(d−1)].
    pub levels: Vec<Vec<i8>>,
}

impl TreeSample {
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn boundary(&self) -> &[i8] {
        self.levels.last().unwrap()
    }
}

/// Size of level ℓ of the d-regular tree.
pub fn level_size(d: u32, level: usize) -> usize {
    if level == 0 {
        1
    } else {
        d as usize * (d as usize - 1).pow(level as u32 - 1)
    }
}

/// Top-down broadcast sample: the root from the stationary law, every child
/// from its parent's broadcast row. Deterministic given the RNG stream.
pub fn sample_broadcast(measure: &TreeMeasure, depth: usize, rng: &mut CounterRng) -> TreeSample {
    let d = measure.d;
    let root = if rng.bernoulli(measure.root_plus_prob()) { 1i8 } else { -1 };
    let mut levels = vec![vec![root]];
    for level in 1..=depth {
        let arity = if level == 1 { d as usize } else { d as usize - 1 };
        let prev = &levels[level - 1];
        let mut cur = Vec::with_capacity(prev.len() * arity);
        for &parent in prev {
            let row = measure.transition(parent);
            for _ in 0..arity {
                cur.push(if rng.bernoulli(row[0]) { 1i8 } else { -1 });
            }
        }
        levels.push(cur);
    }
    TreeSample { d, levels }
}

/// Exact conditional law of the root given a full level-`depth` boundary:
/// [P(+|ξ), P(−|ξ)], by leaf-to-root likelihood recursion with the
/// broadcast transitions. No sampling involved.
pub fn root_posterior(measure: &TreeMeasure, depth: usize, boundary: &[i8]) -> Result<[f64; 2]> {
    let d = measure.d as usize;
    if boundary.len() != level_size(measure.d, depth) {
        return Err(Error::invalid_parameter(format!(
            "boundary has {} spins; level {depth} of the {d}-regular tree has {}",
            boundary.len(),
            level_size(measure.d, depth)
        )));
    }
    if depth == 0 {
        return Ok(if boundary[0] == 1 { [1.0, 0.0] } else { [0.0, 1.0] });
    }
    // likelihoods[j] = P(boundary below node j | node j spin), normalized per
    // node; only ratios reach the root.
    let m = measure.broadcast;
    let mut likelihoods: Vec<[f64; 2]> = boundary
        .iter()
        .map(|&s| if s == 1 { [1.0, 0.0] } else { [0.0, 1.0] })
        .collect();
    for level in (1..depth).rev() {
        let arity = d - 1; // children per node at levels 1..depth−1
        let size = level_size(measure.d, level);
        let mut next: Vec<[f64; 2]> = Vec::with_capacity(size);
        for j in 0..size {
            let mut lik = [1.0f64, 1.0];
            for child in likelihoods[j * arity..(j + 1) * arity].iter() {
                for (s, l) in lik.iter_mut().enumerate() {
                    *l *= m[s][0] * child[0] + m[s][1] * child[1];
                }
            }
            let norm = lik[0] + lik[1];
            next.push([lik[0] / norm, lik[1] / norm]);
        }
        likelihoods = next;
    }
    let mut root = [measure.root_plus_prob(), 1.0 - measure.root_plus_prob()];
    for child in &likelihoods {
        for (s, p) in root.iter_mut().enumerate() {
            *p *= m[s][0] * child[0] + m[s][1] * child[1];
        }
    }
    let norm = root[0] + root[1];
    Ok([root[0] / norm, root[1] / norm])
}

/// Monte Carlo estimate (mean, stderr) of the expected total-variation
/// distance between the root posterior given a depth-r boundary and the
/// root prior, under boundaries drawn from the measure itself.
pub fn reconstruction_tv(
    d: u32,
    beta: f64,
    eta: f64,
    depth: usize,
    num_samples: usize,
    rng: &mut CounterRng,
) -> Result<(f64, f64)> {
    if depth < 1 || num_samples < 1 {
        return Err(Error::invalid_parameter(
            "reconstruction_tv needs depth ≥ 1 and num_samples ≥ 1",
        ));
    }
    let measure = field_for_magnetization(d, beta, eta)?;
    let prior_plus = measure.root_plus_prob();
    let mut stats = crate::numeric::RunningStats::new();
    for _ in 0..num_samples {
        let sample = sample_broadcast(&measure, depth, rng);
        let post = root_posterior(&measure, depth, sample.boundary())?;
        stats.push((post[0] - prior_plus).abs());
    }
    Ok((stats.mean(), stats.stderr().unwrap_or(0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_match_closed_forms() {
        let (bc, br) = thresholds(3).unwrap();
        assert!((bc - 3.0f64.ln()).abs() < 1e-12);
        assert!((br - (3.0 + 2.0 * 2.0f64.sqrt()).ln()).abs() < 1e-12);
        let (bc10, br10) = thresholds(10).unwrap();
        assert!((bc10 - (10.0f64 / 8.0).ln()).abs() < 1e-12);
        assert!((br10 - 2.0f64.ln()).abs() < 1e-12);
        // the Figure-1 temperature sits strictly between them
        assert!(bc10 < 0.32 && 0.32 < br10);
        assert!(bc < br);
        assert!(thresholds(2).is_err());
    }

    #[test]
    fn beta_r_large_d_asymptotics() {
        let d = 1_000_000u32;
        let (_, br) = thresholds(d).unwrap();
        assert!((br * ((d - 1) as f64).sqrt() - 2.0).abs() < 0.01);
    }

    #[test]
    fn high_temperature_single_fixed_point() {
        let params = ModelParams::new(3, 0.5).unwrap();
        let fps = bp_fixed_points(&params);
        assert_eq!(fps.len(), 1);
        assert!((fps[0].r - 1.0).abs() < 1e-9);
        assert!(fps[0].eta.abs() < 1e-12);
    }

    #[test]
    fn low_temperature_three_fixed_points_symmetric() {
        let params = ModelParams::new(3, 1.5).unwrap();
        let fps = bp_fixed_points(&params);
        assert_eq!(fps.len(), 3);
        assert!((fps[0].r * fps[2].r - 1.0).abs() < 1e-9);
        assert!((fps[1].r - 1.0).abs() < 1e-9);
        assert!(!fps[1].stable);
        assert!(fps[0].stable && fps[2].stable);
        for fp in &fps {
            let resid = recursion_map(3, 1.5, 0.0, fp.r) - fp.r;
            assert!(resid.abs() < 1e-10, "residual {resid}");
        }
    }

    #[test]
    fn broadcast_rows_stochastic() {
        let m = field_for_magnetization(5, 0.7, 0.4).unwrap();
        for row in m.broadcast {
            assert!((row[0] + row[1] - 1.0).abs() < 1e-12);
            assert!(row[0] >= 0.0 && row[1] >= 0.0);
        }
    }

    #[test]
    fn zero_magnetization_is_zero_field() {
        let m = field_for_magnetization(7, 0.9, 0.0).unwrap();
        assert!((m.r - 1.0).abs() < 1e-12);
        assert!(m.h.abs() < 1e-12);
        assert!(m.eta.abs() < 1e-12);
    }

    #[test]
    fn field_round_trips_through_fixed_points() {
        let m = field_for_magnetization(10, 0.32, 0.3).unwrap();
        let params = ModelParams::with_field(10, 0.32, m.h).unwrap();
        let fps = bp_fixed_points(&params);
        assert!(
            fps.iter().any(|fp| (fp.r - m.r).abs() < 1e-8 * m.r.max(1.0)),
            "returned ratio should be among the fixed points at its field"
        );
        assert!((m.eta - 0.3).abs() < 1e-10);
    }

    #[test]
    fn extreme_magnetizations_give_finite_fields() {
        for eta in [0.999, -0.999] {
            let m = field_for_magnetization(10, 0.32, eta).unwrap();
            assert!(m.h.is_finite());
            assert!(m.h.abs() > 1.0);
            assert!((m.eta - eta).abs() < 1e-10);
        }
    }

    #[test]
    fn rho_matches_simplifications() {
        // η = 0: ρ = e^β/(1+e^β)
        for beta in [0.1f64, 0.5, 1.3] {
            let expect = beta.exp() / (1.0 + beta.exp());
            assert!((rho_eta(beta, 0.0) - expect).abs() < 1e-12);
        }
        // β → 0 limit
        assert!((rho_eta(1e-8, 0.5) - 0.625).abs() < 1e-6);
        assert!((rho_eta(0.0, 0.3) - 0.5 * 1.09).abs() < 1e-12);
    }

    #[test]
    fn rho_agrees_with_broadcast_diagonal() {
        for &(beta, eta) in &[(0.3, 0.2), (0.9, -0.5), (1.4, 0.7), (0.05, 0.0)] {
            let m = field_for_magnetization(6, beta, eta).unwrap();
            let direct = rho_eta(beta, eta);
            let from_matrix =
                0.5 * (1.0 + eta) * m.broadcast[0][0] + 0.5 * (1.0 - eta) * m.broadcast[1][1];
            assert!((direct - from_matrix).abs() < 1e-10);
            assert!(direct > eta.abs() && direct < 1.0);
        }
    }

    #[test]
    fn second_eigenvalue_closed_forms() {
        for beta in [0.2, 0.7, 1.3] {
            let m = field_for_magnetization(4, beta, 0.0).unwrap();
            assert!((second_eigenvalue(&m) - (beta / 2.0).tanh()).abs() < 1e-12);
        }
        let m0 = field_for_magnetization(5, 0.0, 0.25).unwrap();
        assert!(second_eigenvalue(&m0).abs() < 1e-12);
        // Kesten–Stigum product is exactly one at β_r
        for d in [3u32, 6, 10] {
            let (_, br) = thresholds(d).unwrap();
            let m = field_for_magnetization(d, br, 0.0).unwrap();
            let ks = (d as f64 - 1.0) * second_eigenvalue(&m).powi(2);
            assert!((ks - 1.0).abs() < 1e-10, "d={d}: {ks}");
        }
    }

    #[test]
    fn broadcast_level_sizes() {
        let m = field_for_magnetization(3, 0.8, 0.1).unwrap();
        let mut rng = CounterRng::new(2, 0);
        let t = sample_broadcast(&m, 4, &mut rng);
        assert_eq!(t.levels[0].len(), 1);
        assert_eq!(t.levels[1].len(), 3);
        assert_eq!(t.levels[2].len(), 6);
        assert_eq!(t.levels[3].len(), 12);
        assert_eq!(t.levels[4].len(), 24);
    }

    #[test]
    fn root_marginal_empirical() {
        let m = field_for_magnetization(3, 0.6, 0.4).unwrap();
        let mut rng = CounterRng::new(8, 0);
        let n = 1_000_000usize;
        let mut plus = 0usize;
        for _ in 0..n {
            if sample_broadcast(&m, 0, &mut rng).levels[0][0] == 1 {
                plus += 1;
            }
        }
        let p = plus as f64 / n as f64;
        let sigma = (m.root_plus_prob() * (1.0 - m.root_plus_prob()) / n as f64).sqrt();
        assert!((p - m.root_plus_prob()).abs() < 3.0 * sigma + 1e-9);
    }

    #[test]
    fn independent_spins_at_beta_zero() {
        let m = field_for_magnetization(3, 0.0, 0.2).unwrap();
        let mut rng = CounterRng::new(4, 0);
        let samples = 100_000usize;
        let mut cov = crate::numeric::RunningStats::new();
        for _ in 0..samples {
            let t = sample_broadcast(&m, 3, &mut rng);
            cov.push((t.levels[0][0] as f64 - m.eta) * (t.levels[3][0] as f64 - m.eta));
        }
        assert!(cov.mean().abs() < 3.0 * cov.stderr().unwrap());
    }

    #[test]
    fn level_one_edges_match_rho() {
        let m = field_for_magnetization(3, 0.9, 0.3).unwrap();
        let mut rng = CounterRng::new(6, 0);
        let trees = 100_000usize;
        let mut stats = crate::numeric::RunningStats::new();
        for _ in 0..trees {
            let t = sample_broadcast(&m, 1, &mut rng);
            let root = t.levels[0][0];
            let mono =
                t.levels[1].iter().filter(|&&s| s == root).count() as f64 / t.levels[1].len() as f64;
            stats.push(mono);
        }
        assert!((stats.mean() - m.rho).abs() < 3.0 * stats.stderr().unwrap());
    }

    #[test]
    fn posterior_is_prior_at_beta_zero() {
        let m = field_for_magnetization(3, 0.0, 0.3).unwrap();
        let boundary = vec![1i8, -1, 1, 1, -1, 1]; // level 2 of the 3-regular tree
        let post = root_posterior(&m, 2, &boundary).unwrap();
        assert!((post[0] - m.root_plus_prob()).abs() < 1e-14);
    }

    #[test]
    fn posterior_one_step_bayes() {
        let m = field_for_magnetization(3, 0.8, 0.0).unwrap();
        let post = root_posterior(&m, 1, &[1, 1, 1]).unwrap();
        let up = m.broadcast[0][0].powi(3);
        let down = m.broadcast[1][0].powi(3);
        assert!((post[0] - up / (up + down)).abs() < 1e-13);
    }

    #[test]
    fn posterior_marginalizes_to_prior() {
        let m = field_for_magnetization(3, 1.0, 0.2).unwrap();
        let mut rng = CounterRng::new(10, 0);
        let mut stats = crate::numeric::RunningStats::new();
        for _ in 0..100_000 {
            let t = sample_broadcast(&m, 3, &mut rng);
            let post = root_posterior(&m, 3, t.boundary()).unwrap();
            stats.push(post[0]);
        }
        assert!((stats.mean() - m.root_plus_prob()).abs() < 3.0 * stats.stderr().unwrap());
    }

    #[test]
    fn posterior_matches_brute_force_enumeration() {
        // exact check of the likelihood recursion against summation over all
        // interior configurations, depth 2 and 3, d = 3
        let m = field_for_magnetization(3, 0.7, 0.25).unwrap();
        for depth in [2usize, 3] {
            let mut rng = CounterRng::new(20 + depth as u64, 0);
            let t = sample_broadcast(&m, depth, &mut rng);
            let boundary = t.boundary();
            let post = root_posterior(&m, depth, boundary).unwrap();

            // enumerate interior levels 1..depth−1 explicitly
            let interior_sizes: Vec<usize> = (1..depth).map(|l| level_size(3, l)).collect();
            let interior_total: usize = interior_sizes.iter().sum();
            let mut weight = [0.0f64; 2];
            for mask in 0u64..(1 << interior_total) {
                let mut levels: Vec<Vec<i8>> = Vec::new();
                let mut bit = 0;
                for &size in &interior_sizes {
                    let mut lvl = Vec::with_capacity(size);
                    for _ in 0..size {
                        lvl.push(if mask >> bit & 1 == 1 { 1 } else { -1 });
                        bit += 1;
                    }
                    levels.push(lvl);
                }
                levels.push(boundary.to_vec());
                for (ridx, root) in [(0usize, 1i8), (1, -1i8)] {
                    let mut p = 1.0f64;
                    let mut parents = vec![root];
                    for (li, lvl) in levels.iter().enumerate() {
                        let arity = if li == 0 { 3 } else { 2 };
                        for (j, &s) in lvl.iter().enumerate() {
                            let parent = parents[j / arity];
                            let row = m.transition(parent);
                            p *= if s == 1 { row[0] } else { row[1] };
                        }
                        parents = lvl.clone();
                    }
                    weight[ridx] += p;
                }
            }
            let exact =
                m.root_plus_prob() * weight[0]
                    / (m.root_plus_prob() * weight[0] + (1.0 - m.root_plus_prob()) * weight[1]);
            assert!(
                (post[0] - exact).abs() < 1e-12,
                "depth {depth}: {} vs {exact}",
                post[0]
            );
        }
    }

    #[test]
    fn reconstruction_tv_zero_at_beta_zero() {
        let mut rng = CounterRng::new(1, 0);
        let (tv, _) = reconstruction_tv(3, 0.0, 0.1, 4, 200, &mut rng).unwrap();
        assert_eq!(tv, 0.0);
    }

    #[test]
    fn kesten_stigum_sign_change_localized() {
        // bisection on (d−1)λ₂²−1 recovers β_r to 1e−8
        for d in [3u32, 10] {
            let (_, br) = thresholds(d).unwrap();
            let ks = |beta: f64| {
                let m = field_for_magnetization(d, beta, 0.0).unwrap();
                (d as f64 - 1.0) * second_eigenvalue(&m).powi(2) - 1.0
            };
            let root = bisect(ks, 0.05, 5.0, 1e-12);
            assert!((root - br).abs() < 1e-8, "d={d}");
        }
    }
}
