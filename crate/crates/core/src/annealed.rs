//! Annealed free energy of the fixed-magnetization model and its exact
//! finite-n combinatorics.
//!
//! The density f(d,β,η) is the maximum over the monochromatic-edge fraction
//! ρ of a strictly concave function g; the maximizer is the closed-form
//! tree statistic ρ_η, which is the dual-route check exercised by the test
//! suite. The same counting, kept exact instead of passed to the
//! exponential scale, yields b(k), the first moment at finite n, and the
//! probability mass function of the bichromatic edge count under the
//! β-weighted pairing model.

use crate::numeric::{
    bisect, central_diff2, golden_max, ln_choose, ln_double_factorial_odd, ln_factorial,
    log_sum_exp,
};
use crate::rng::CounterRng;
use crate::tree::{rho_eta, thresholds};
use crate::{Error, Result};

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// The edge-statistic free-energy function g_{d,β,η}(ρ), defined for
/// ρ ∈ (|η|, 1); strictly concave in ρ with unique maximizer ρ_η.
pub fn g(d: u32, beta: f64, eta: f64, rho: f64) -> Result<f64> {
    if !(rho > eta.abs() && rho < 1.0) {
        return Err(Error::Domain(format!(
            "rho = {rho} outside ({}, 1) for eta = {eta}",
            eta.abs()
        )));
    }
    let df = d as f64;
    let ln2 = std::f64::consts::LN_2;
    let vertex_entropy = xlnx(1.0 + eta) + xlnx(1.0 - eta);
    let edge_terms =
        xlnx(1.0 - rho) + 0.5 * xlnx(rho + eta) + 0.5 * xlnx(rho - eta) + ln2;
    Ok(beta * rho * df / 2.0 + ln2 + (df - 1.0) / 2.0 * vertex_entropy - df / 2.0 * edge_terms)
}

/// dg/dρ in closed form (used to polish the numeric maximizer).
pub fn g_prime(d: u32, beta: f64, eta: f64, rho: f64) -> f64 {
    let df = d as f64;
    df / 2.0 * (beta + (1.0 - rho).ln() - 0.5 * (rho + eta).ln() - 0.5 * (rho - eta).ln())
}

/// Numeric argmax of g over ρ: golden section to 1e−10, then a bisection
/// polish on g′ so the returned point is limited by the derivative rather
/// than by the flat top of g.
pub fn argmax_g(d: u32, beta: f64, eta: f64) -> f64 {
    let lo = eta.abs() + 1e-13 + 1e-12 * eta.abs();
    let hi = 1.0 - 1e-13;
    let x = golden_max(
        |rho| g(d, beta, eta, rho).unwrap_or(f64::NEG_INFINITY),
        lo,
        hi,
        1e-10,
    );
    let a = (x - 1e-6).max(lo);
    let b = (x + 1e-6).min(hi);
    let (ga, gb) = (g_prime(d, beta, eta, a), g_prime(d, beta, eta, b));
    if ga > 0.0 && gb < 0.0 {
        bisect(|rho| g_prime(d, beta, eta, rho), a, b, 1e-13)
    } else {
        x
    }
}

/// Annealed free energy density f(d,β,η) = g evaluated at ρ_η, extended
/// continuously to η = ±1 where its value is βd/2.
pub fn f(d: u32, beta: f64, eta: f64) -> f64 {
    debug_assert!(eta.abs() <= 1.0);
    if eta.abs() >= 1.0 {
        return beta * d as f64 / 2.0;
    }
    let rho = rho_eta(beta, eta);
    if rho <= eta.abs() {
        // ρ−η underflows only within ~1e−9 of |η| = 1, where f has
        // converged to its endpoint value
        return beta * d as f64 / 2.0;
    }
    g(d, beta, eta, rho).expect("rho_eta lies in the domain of g")
}

/// Location of the global maximum of f over [0, 1] (f is even in η).
/// On [0, 1] the function is unimodal for every β, so a coarse scan plus a
/// golden-section refinement suffices.
pub fn eta_star(d: u32, beta: f64) -> f64 {
    let grid = 2048usize;
    let mut best = (f(d, beta, 0.0), 0.0);
    for i in 1..=grid {
        let eta = i as f64 / grid as f64;
        let v = f(d, beta, eta);
        if v > best.0 {
            best = (v, eta);
        }
    }
    if best.1 == 0.0 {
        return 0.0;
    }
    let step = 1.0 / grid as f64;
    let lo = (best.1 - step).max(0.0);
    let hi = (best.1 + step).min(1.0);
    golden_max(|eta| f(d, beta, eta), lo, hi, 1e-12)
}

/// Large-deviation rate function: f(η) − max f ≤ 0, zero at η = ±η*.
pub fn rate_function(d: u32, beta: f64, eta: f64) -> f64 {
    let star = eta_star(d, beta);
    let fmax = f(d, beta, star).max(f(d, beta, 0.0)).max(f(d, beta, 1.0));
    f(d, beta, eta) - fmax
}

/// Smallest positive inflection point of f (the spinodal), present only in
/// the non-uniqueness regime β > β_c. Located by a sign change of a
/// central-difference second derivative on a 10⁴-point grid, refined by
/// bisection.
pub fn spinodal(d: u32, beta: f64) -> Option<f64> {
    let (beta_c, _) = thresholds(d).ok()?;
    if beta <= beta_c {
        return None;
    }
    let fpp = |eta: f64| central_diff2(|x| f(d, beta, x), eta, 1e-4);
    let grid = 10_000usize;
    let lo = 1e-3;
    let hi = 0.999;
    let mut prev = (lo, fpp(lo));
    for i in 1..=grid {
        let eta = lo + (hi - lo) * i as f64 / grid as f64;
        let v = fpp(eta);
        if prev.1 > 0.0 && v <= 0.0 {
            return Some(bisect(fpp, prev.0, eta, 1e-8));
        }
        prev = (eta, v);
    }
    None
}

/// A sampled η-grid of the free energy with its maximizer and spinodal.
#[derive(Clone, Debug)]
pub struct FreeEnergyCurve {
    pub d: u32,
    pub beta: f64,
    /// (η, f(η), ρ_η) over an inclusive uniform grid on [−1, 1].
    pub points: Vec<(f64, f64, f64)>,
    pub eta_star: f64,
    pub eta_s: Option<f64>,
}

pub fn free_energy_curve(d: u32, beta: f64, num_points: usize) -> Result<FreeEnergyCurve> {
    if num_points < 3 {
        return Err(Error::invalid_parameter("curve needs at least 3 points"));
    }
    let points = (0..num_points)
        .map(|i| {
            let eta = -1.0 + 2.0 * i as f64 / (num_points - 1) as f64;
            (eta, f(d, beta, eta), rho_eta(beta, eta))
        })
        .collect();
    Ok(FreeEnergyCurve {
        d,
        beta,
        points,
        eta_star: eta_star(d, beta),
        eta_s: spinodal(d, beta),
    })
}

/// Limiting partition-function ratio z_{k+1}/z_k at magnetization η: the
/// drift function of the one-dimensional projection chain. Defined on
/// (−1, 1); equals 1 at η = 0 and, for β ∈ (β_c, β_r), at exactly one other
/// point m* ∈ (0, 1).
pub fn drift_ratio(d: u32, beta: f64, eta: f64) -> f64 {
    debug_assert!(eta.abs() <= 1.0);
    if eta >= 1.0 {
        return 0.0;
    }
    let rho = rho_eta(beta, eta);
    let base = ((rho - eta) * (-beta).exp() + (1.0 - rho) * beta.exp()) / (1.0 - eta);
    (1.0 - eta) / (1.0 + eta) * base.powi(d as i32)
}

/// The unique m* ∈ (0, 1) with drift_ratio(m*) = 1, by bisection to 1e−10.
/// Requires β > β_c (otherwise the ratio dips below 1 immediately and there
/// is no interior root).
pub fn drift_ratio_root(d: u32, beta: f64) -> Result<f64> {
    let (beta_c, _) = thresholds(d)?;
    if beta <= beta_c {
        return Err(Error::NoInteriorRoot(format!(
            "beta = {beta} ≤ beta_c = {beta_c}: drift ratio has no root in (0, 1)"
        )));
    }
    let fun = |eta: f64| drift_ratio(d, beta, eta) - 1.0;
    let mut lo = 1e-6;
    if fun(lo) <= 0.0 {
        return Err(Error::NoInteriorRoot(format!(
            "drift ratio does not exceed 1 near 0 at beta = {beta}"
        )));
    }
    let mut hi = None;
    let mut eta = 0.05f64;
    while eta < 1.0 {
        let candidate = eta.min(1.0 - 1e-9);
        if fun(candidate) < 0.0 {
            hi = Some(candidate);
            break;
        }
        lo = candidate;
        eta += 0.05;
    }
    let hi = hi.ok_or_else(|| {
        Error::NoInteriorRoot(format!("drift ratio stays above 1 on (0,1) at beta = {beta}"))
    })?;
    Ok(bisect(fun, lo, hi, 1e-10))
}

/// log b(k): the number of pairings of n₊ plus and n₋ minus clones with
/// exactly k bichromatic edges,
/// C(n₊,k)·C(n₋,k)·k!·(n₊−k−1)!!·(n₋−k−1)!!, with (−1)!! = 1.
pub fn b_count_log(n_plus: usize, n_minus: usize, k: usize) -> Result<f64> {
    if k > n_plus || k > n_minus || (n_plus - k) % 2 != 0 || (n_minus - k) % 2 != 0 {
        return Err(Error::invalid_parameter(format!(
            "bichromatic count k = {k} violates parity for (n₊, n₋) = ({n_plus}, {n_minus})"
        )));
    }
    Ok(ln_choose(n_plus, k)
        + ln_choose(n_minus, k)
        + ln_factorial(k)
        + ln_double_factorial_odd((n_plus - k) / 2)
        + ln_double_factorial_odd((n_minus - k) / 2))
}

/// Valid bichromatic counts for clone classes of sizes (n₊, n₋): k ranges
/// over min(n₊,n₋) down to 0 with both n₊−k and n₋−k even.
pub fn bichromatic_support(n_plus: usize, n_minus: usize) -> Vec<usize> {
    if (n_plus + n_minus) % 2 != 0 || n_plus % 2 != n_minus % 2 {
        return Vec::new();
    }
    let start = n_plus % 2;
    (start..=n_plus.min(n_minus)).step_by(2).collect()
}

/// log 𝔼[Z] restricted to plus-count k_plus, exact up to floating point:
/// log [ C(n,k₊) Σ_B e^{β(dn/2−B)} b(B) / (dn−1)!! ].
pub fn first_moment_log(n: usize, d: u32, beta: f64, k_plus: usize) -> Result<f64> {
    let dn = n * d as usize;
    if dn % 2 != 0 {
        return Err(Error::invalid_parameter(format!("dn = {dn} is odd")));
    }
    if k_plus > n {
        return Err(Error::invalid_parameter(format!("k_plus = {k_plus} exceeds n = {n}")));
    }
    let n_plus = d as usize * k_plus;
    let n_minus = dn - n_plus;
    let support = bichromatic_support(n_plus, n_minus);
    if support.is_empty() {
        return Err(Error::invalid_parameter(format!(
            "empty bichromatic support for (n₊, n₋) = ({n_plus}, {n_minus})"
        )));
    }
    let terms: Vec<f64> = support
        .iter()
        .map(|&b| beta * (dn as f64 / 2.0 - b as f64) + b_count_log(n_plus, n_minus, b).unwrap())
        .collect();
    Ok(ln_choose(n, k_plus) + log_sum_exp(&terms) - ln_double_factorial_odd(dn / 2))
}

/// Exact pmf of the bichromatic edge count under the β-weighted pairing
/// model, with the smooth-surrogate mode μ and curvature ς².
#[derive(Clone, Debug)]
pub struct EdgeCountPmf {
    pub n_plus: usize,
    pub n_minus: usize,
    pub beta: f64,
    pub support: Vec<usize>,
    pub log_weights: Vec<f64>,
    pub probs: Vec<f64>,
    /// Argmax of the Stirling surrogate ℓ(k) over real k.
    pub mu: f64,
    /// −1/ℓ''(μ).
    pub sigma2: f64,
}

impl EdgeCountPmf {
    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.probs)
            .map(|(&k, &p)| k as f64 * p)
            .sum()
    }

    /// Inverse-CDF draw over the full support: exact, no rejection.
    pub fn sample(&self, rng: &mut CounterRng) -> usize {
        let u = rng.next_f64();
        let mut acc = 0.0;
        for (&k, &p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return k;
            }
        }
        *self.support.last().unwrap()
    }
}

/// Stirling surrogate for log p(k) extended to real k, up to the constant
/// −log Z (irrelevant for its mode and curvature). Includes the ½·log
/// correction terms.
fn pmf_surrogate(n_plus: f64, n_minus: f64, beta: f64, k: f64) -> f64 {
    let n = n_plus + n_minus;
    beta * (n / 2.0 - k) + n_plus * n_plus.ln() + n_minus * n_minus.ln() - k * k.ln()
        - (n_plus - k) / 2.0 * ((n_plus - k) / 2.0).ln()
        - (n_minus - k) / 2.0 * ((n_minus - k) / 2.0).ln()
        + 0.5
            * (2.0 * n_plus * n_minus / (std::f64::consts::PI * k * (n_plus - k) * (n_minus - k)))
                .ln()
        + (k - n / 2.0) * std::f64::consts::LN_2
        - n / 2.0
}

pub fn edge_count_pmf(n_plus: usize, n_minus: usize, beta: f64) -> Result<EdgeCountPmf> {
    let support = bichromatic_support(n_plus, n_minus);
    if support.is_empty() {
        return Err(Error::invalid_parameter(format!(
            "no valid bichromatic count for (n₊, n₋) = ({n_plus}, {n_minus})"
        )));
    }
    let total = (n_plus + n_minus) as f64;
    let log_weights: Vec<f64> = support
        .iter()
        .map(|&k| beta * (total / 2.0 - k as f64) + b_count_log(n_plus, n_minus, k).unwrap())
        .collect();
    let log_z = log_sum_exp(&log_weights);
    let probs: Vec<f64> = log_weights.iter().map(|w| (w - log_z).exp()).collect();

    let (mu, sigma2) = if n_plus.min(n_minus) >= 1 {
        let (np, nm) = (n_plus as f64, n_minus as f64);
        let lo = 0.25;
        let hi = n_plus.min(n_minus) as f64 - 0.25;
        let ell = |k: f64| pmf_surrogate(np, nm, beta, k);
        // coarse scan dodges the logarithmic spikes at the interval ends,
        // then golden section inside the bracketing window
        let scan = 512usize;
        let mut best = (ell(lo), lo);
        for i in 1..=scan {
            let k = lo + (hi - lo) * i as f64 / scan as f64;
            let v = ell(k);
            if v > best.0 {
                best = (v, k);
            }
        }
        let step = (hi - lo) / scan as f64;
        let mu = golden_max(ell, (best.1 - step).max(lo), (best.1 + step).min(hi), 1e-9);
        let h = (0.01 * (hi - lo)).clamp(1e-3, 1.0);
        let curvature = central_diff2(ell, mu.clamp(lo + h, hi - h), h);
        let sigma2 = if curvature < 0.0 { -1.0 / curvature } else { 0.0 };
        (mu, sigma2)
    } else {
        (support[0] as f64, 0.0)
    };

    Ok(EdgeCountPmf {
        n_plus,
        n_minus,
        beta,
        support,
        log_weights,
        probs,
        mu,
        sigma2,
    })
}
