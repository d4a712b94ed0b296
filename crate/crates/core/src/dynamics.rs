//! Single-site and spin-exchange Markov chains on a fixed multigraph:
//! heat-bath (Glauber) dynamics, magnetization-conserving Kawasaki
//! dynamics, their 50/50 hybrid, and the positive-magnetization restricted
//! versions. Plus the one-dimensional projection chain over plus-counts
//! driven by partition-function ratio estimates.
//!
//! Every chain owns its RNG stream; a step draws a fixed number of
//! variates, so trajectories are reproducible from (seed, stream) alone.

use crate::graph::{local_field, neighbor_counts, Pairing, SpinConfig};
use crate::numeric::batch_means_stderr;
use crate::rng::CounterRng;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Glauber,
    Kawasaki,
    Hybrid,
    GlauberPlus,
    HybridPlus,
}

impl Variant {
    pub fn conserves_magnetization(&self) -> bool {
        matches!(self, Variant::Kawasaki)
    }

    /// Restricted variants reject moves leaving {σ : Σσ ≥ 0}.
    pub fn restricted(&self) -> bool {
        matches!(self, Variant::GlauberPlus | Variant::HybridPlus)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Glauber => "glauber",
            Variant::Kawasaki => "kawasaki",
            Variant::Hybrid => "hybrid",
            Variant::GlauberPlus => "glauber_plus",
            Variant::HybridPlus => "hybrid_plus",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "glauber" => Ok(Variant::Glauber),
            "kawasaki" => Ok(Variant::Kawasaki),
            "hybrid" => Ok(Variant::Hybrid),
            "glauber_plus" => Ok(Variant::GlauberPlus),
            "hybrid_plus" => Ok(Variant::HybridPlus),
            other => Err(Error::invalid_parameter(format!("unknown variant {other:?}"))),
        }
    }
}

/// A (graph, configuration, RNG stream, step counter) bundle for one chain.
pub struct ChainState {
    pairing: Pairing,
    config: SpinConfig,
    beta: f64,
    variant: Variant,
    rng: CounterRng,
    steps: u64,
    // vertex membership lists for O(1) uniform picks
    plus: Vec<u32>,
    minus: Vec<u32>,
    pos: Vec<u32>,
}

impl ChainState {
    pub fn new(
        pairing: Pairing,
        config: SpinConfig,
        beta: f64,
        variant: Variant,
        rng: CounterRng,
    ) -> Self {
        let n = pairing.n();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        let mut pos = vec![0u32; n];
        for (v, &s) in config.spins().iter().enumerate() {
            if s == 1 {
                pos[v] = plus.len() as u32;
                plus.push(v as u32);
            } else {
                pos[v] = minus.len() as u32;
                minus.push(v as u32);
            }
        }
        ChainState {
            pairing,
            config,
            beta,
            variant,
            rng,
            steps: 0,
            plus,
            minus,
            pos,
        }
    }

    pub fn pairing(&self) -> &Pairing {
        &self.pairing
    }

    pub fn config(&self) -> &SpinConfig {
        &self.config
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k_plus(&self) -> usize {
        self.config.k_plus()
    }

    pub fn magnetization(&self) -> f64 {
        self.config.magnetization()
    }

    /// Monochromatic edge count of the current configuration.
    pub fn energy(&self) -> usize {
        self.config.h()
    }

    fn membership_flip(&mut self, v: usize, new_spin: i8) {
        let (from, to) = if new_spin == 1 {
            (&mut self.minus, &mut self.plus)
        } else {
            (&mut self.plus, &mut self.minus)
        };
        let p = self.pos[v] as usize;
        let moved = *from.last().unwrap();
        from.swap_remove(p);
        if p < from.len() {
            self.pos[moved as usize] = p as u32;
        }
        self.pos[v] = to.len() as u32;
        to.push(v as u32);
    }

    fn set_spin(&mut self, v: usize, s: i8) {
        if self.config.spin(v) != s {
            self.config.set_spin(v, s, &self.pairing);
            self.membership_flip(v, s);
        }
    }

    /// One heat-bath update at a uniform vertex. Restricted chains turn any
    /// move that would drop the plus-count below ⌈n/2⌉ into a lazy hold.
    fn glauber_substep(&mut self, restricted: bool) {
        let n = self.pairing.n();
        let v = self.rng.index(n);
        let (mp, mm) = neighbor_counts(&self.pairing, self.config.spins(), v);
        let wp = (self.beta * mp as f64).exp();
        let wm = (self.beta * mm as f64).exp();
        let new_spin = if self.rng.next_f64() < wp / (wp + wm) { 1i8 } else { -1 };
        if restricted && new_spin == -1 && self.config.spin(v) == 1 {
            let floor = n.div_ceil(2);
            if self.config.k_plus() - 1 < floor {
                return; // lazy hold
            }
        }
        self.set_spin(v, new_spin);
    }

    /// One spin-exchange proposal: a uniform plus vertex and a uniform minus
    /// vertex, swapped with the heat-bath ratio. Frozen (no-move) when the
    /// magnetization is extreme; steps still count.
    fn kawasaki_substep(&mut self) {
        let k = self.config.k_plus();
        let n = self.pairing.n();
        if k == 0 || k == n {
            return;
        }
        let x = self.plus[self.rng.index(self.plus.len())] as usize;
        let y = self.minus[self.rng.index(self.minus.len())] as usize;
        let h0 = self.config.h() as f64;
        self.config.swap(x, y, &self.pairing);
        let dh = self.config.h() as f64 - h0;
        let accept = 1.0 / (1.0 + (-self.beta * dh).exp());
        if self.rng.next_f64() < accept {
            self.membership_flip(x, -1);
            self.membership_flip(y, 1);
        } else {
            self.config.swap(y, x, &self.pairing);
        }
    }

    pub fn step(&mut self) {
        match self.variant {
            Variant::Glauber => self.glauber_substep(false),
            Variant::GlauberPlus => self.glauber_substep(true),
            Variant::Kawasaki => self.kawasaki_substep(),
            Variant::Hybrid | Variant::HybridPlus => {
                let restricted = self.variant == Variant::HybridPlus;
                if self.rng.next_f64() < 0.5 {
                    self.glauber_substep(restricted);
                } else {
                    self.kawasaki_substep();
                }
            }
        }
        self.steps += 1;
    }

    /// n steps.
    pub fn sweep(&mut self) {
        for _ in 0..self.pairing.n() {
            self.step();
        }
    }
}

/// The per-configuration statistic whose slice average is z_{k+1}/z_k:
/// Σ_v 1{σ_v = −1} e^{β Σ_{w∼v} σ_w}, the inner sum over non-loop incident
/// edges (the exact energy change of flipping v).
pub fn ratio_statistic(pairing: &Pairing, spins: &[i8], beta: f64) -> f64 {
    let mut total = 0.0;
    for v in 0..pairing.n() {
        if spins[v] == -1 {
            total += (beta * local_field(pairing, spins, v) as f64).exp();
        }
    }
    total
}

/// Estimate z_{k+1}/z_k by time-averaging `ratio_statistic`/(k+1) along a
/// Kawasaki chain at plus-count k; standard error by batch means. k = n is
/// degenerate (no minus vertices) and returns (0, 0).
pub fn ratio_estimator(
    pairing: &Pairing,
    beta: f64,
    k_plus: usize,
    num_sweeps: usize,
    burn_in_sweeps: usize,
    rng: CounterRng,
) -> Result<(f64, f64)> {
    let n = pairing.n();
    if k_plus > n {
        return Err(Error::invalid_parameter(format!("k_plus = {k_plus} exceeds n = {n}")));
    }
    if k_plus == n {
        return Ok((0.0, 0.0));
    }
    if num_sweeps == 0 {
        return Err(Error::invalid_parameter("num_sweeps must be positive"));
    }
    let mut rng = rng;
    let config = SpinConfig::uniform_with_k_plus(pairing, k_plus, &mut rng)?;
    let mut chain = ChainState::new(pairing.clone(), config, beta, Variant::Kawasaki, rng);
    for _ in 0..burn_in_sweeps {
        chain.sweep();
    }
    let scale = 1.0 / (k_plus as f64 + 1.0);
    let mut series = Vec::with_capacity(num_sweeps);
    for _ in 0..num_sweeps {
        chain.sweep();
        series.push(scale * ratio_statistic(&chain.pairing, chain.config.spins(), beta));
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let stderr = batch_means_stderr(&series, 32);
    Ok((mean, stderr))
}

/// The birth–death projection chain on plus-counts k ∈ [k_min, k_max],
/// built from ratio estimates r_k ≈ z_{k+1}/z_k for k ∈ [k_min, k_max].
/// With slices A_k = Ω_k ∪ Ω_{k+1} and overlap multiplicity 2, the kernel is
/// up(k) = ½ r_k/(1+r_k), down(k) = ½ 1/(1+r_k), lazy remainder ½ on the
/// diagonal, and its stationary law is proportional to z_k + z_{k+1}.
///
/// `up_display`/`down_display` expose the alternative convention
/// up(k) = ½ 1/(1+r_k) (the two conventions swap the roles of up and down);
/// only the primary one satisfies the z_k + z_{k+1} stationarity identity.
#[derive(Clone, Debug)]
pub struct ProjectionChain {
    pub n: usize,
    pub k_min: usize,
    /// (estimate, stderr) for r_k, k = k_min..=k_max.
    pub ratios: Vec<(f64, f64)>,
}

pub fn projection_chain(n: usize, k_min: usize, ratios: Vec<(f64, f64)>) -> Result<ProjectionChain> {
    if ratios.is_empty() {
        return Err(Error::InvalidInput("no ratio estimates supplied".into()));
    }
    if k_min + ratios.len() - 1 >= n {
        return Err(Error::InvalidInput(format!(
            "ratio range k ∈ [{k_min}, {}] must stay below n = {n}",
            k_min + ratios.len() - 1
        )));
    }
    if ratios.iter().any(|&(r, _)| !(r >= 0.0) || !r.is_finite()) {
        return Err(Error::InvalidInput("ratio estimates must be finite and nonnegative".into()));
    }
    Ok(ProjectionChain { n, k_min, ratios })
}

impl ProjectionChain {
    pub fn k_max(&self) -> usize {
        self.k_min + self.ratios.len() - 1
    }

    pub fn ratio(&self, k: usize) -> f64 {
        self.ratios[k - self.k_min].0
    }

    /// P_H(k, k+1) = ½ r_k/(1+r_k); zero at the top state.
    pub fn up(&self, k: usize) -> f64 {
        if k >= self.k_max() {
            return 0.0;
        }
        let r = self.ratio(k);
        0.5 * r / (1.0 + r)
    }

    /// P_H(k, k−1) = ½ / (1+r_k); zero at the bottom state.
    pub fn down(&self, k: usize) -> f64 {
        if k <= self.k_min {
            return 0.0;
        }
        0.5 / (1.0 + self.ratio(k))
    }

    pub fn drift(&self, k: usize) -> f64 {
        let r = self.ratio(k);
        0.5 * (r - 1.0) / (r + 1.0)
    }

    /// The alternative (swapped) convention for comparison.
    pub fn up_display(&self, k: usize) -> f64 {
        if k >= self.k_max() {
            return 0.0;
        }
        0.5 / (1.0 + self.ratio(k))
    }

    pub fn down_display(&self, k: usize) -> f64 {
        if k <= self.k_min {
            return 0.0;
        }
        let r = self.ratio(k);
        0.5 * r / (1.0 + r)
    }

    /// Dense kernel rows over states k_min..=k_max.
    pub fn kernel_rows(&self) -> Vec<Vec<f64>> {
        let m = self.ratios.len();
        let mut rows = vec![vec![0.0; m]; m];
        for i in 0..m {
            let k = self.k_min + i;
            let up = self.up(k);
            let down = self.down(k);
            if up > 0.0 {
                rows[i][i + 1] = up;
            }
            if down > 0.0 {
                rows[i][i - 1] = down;
            }
            rows[i][i] = 1.0 - up - down;
        }
        rows
    }

    /// Stationary law from the detailed-balance recursion.
    pub fn stationary(&self) -> Vec<f64> {
        let m = self.ratios.len();
        let mut pi = vec![0.0f64; m];
        pi[0] = 1.0;
        for i in 1..m {
            let k = self.k_min + i;
            pi[i] = pi[i - 1] * self.up(k - 1) / self.down(k);
        }
        let total: f64 = pi.iter().sum();
        for p in &mut pi {
            *p /= total;
        }
        pi
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Init {
    Uniform,
    AllPlus,
    AllMinus,
}

impl std::str::FromStr for Init {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Init::Uniform),
            "all_plus" => Ok(Init::AllPlus),
            "all_minus" => Ok(Init::AllMinus),
            other => Err(Error::invalid_parameter(format!("unknown init {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectoryPoint {
    /// Elapsed steps (t = sweep · n).
    pub t: u64,
    pub k_plus: usize,
    pub magnetization: f64,
    pub h: usize,
}

/// Run a chain from an explicit starting configuration for `max_sweeps`
/// sweeps, recording (t, k_plus, m, H) at t = 0 and after every sweep.
pub fn trajectory(
    pairing: &Pairing,
    beta: f64,
    variant: Variant,
    config: SpinConfig,
    max_sweeps: usize,
    rng: CounterRng,
) -> Vec<TrajectoryPoint> {
    let mut chain = ChainState::new(pairing.clone(), config, beta, variant, rng);
    let mut out = Vec::with_capacity(max_sweeps + 1);
    let record = |chain: &ChainState| TrajectoryPoint {
        t: chain.steps(),
        k_plus: chain.k_plus(),
        magnetization: chain.magnetization(),
        h: chain.energy(),
    };
    out.push(record(&chain));
    for _ in 0..max_sweeps {
        chain.sweep();
        out.push(record(&chain));
    }
    out
}

/// Trajectory from one of the named initializations. Deterministic given
/// the RNG stream.
pub fn mixing_experiment(
    pairing: &Pairing,
    beta: f64,
    variant: Variant,
    init: Init,
    max_sweeps: usize,
    mut rng: CounterRng,
) -> Vec<TrajectoryPoint> {
    let config = match init {
        Init::Uniform => SpinConfig::uniform(pairing, &mut rng),
        Init::AllPlus => SpinConfig::all_plus(pairing),
        Init::AllMinus => SpinConfig::all_minus(pairing),
    };
    trajectory(pairing, beta, variant, config, max_sweeps, rng)
}
