use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::json;

use fixmag::annealed;
use fixmag::dynamics::{self, Variant};
use fixmag::graph::{Pairing, SpinConfig};
use fixmag::oracle;
use fixmag::planted;
use fixmag::tree;
use fixmag::CounterRng;

use crate::config::{resolve, resolve_optional, FileConfig};
use crate::output::{write_text, Report};
use crate::{Command, Common};

/// Stream id reserved for sampling the graph itself; replicas use
/// streams 0, 1, … per their index.
const GRAPH_STREAM: u64 = u64::MAX;

pub fn run(command: Command) -> Result<u8> {
    match command {
        Command::Thresholds(common) => thresholds(common),
        Command::FreeEnergyCurve { common, points } => free_energy_curve(common, points),
        Command::Bp { common, field } => bp(common, field),
        Command::Reconstruction {
            common,
            depth,
            samples,
        } => reconstruction(common, depth, samples),
        Command::SamplePlanted(common) => sample_planted(common),
        Command::RunDynamics {
            common,
            variant,
            init,
        } => run_dynamics(common, variant, init),
        Command::Projection {
            common,
            k_min,
            k_max,
        } => projection(common, k_min, k_max),
        Command::OracleValidate(common) => oracle_validate(common),
        Command::ZbCheck { common, tol } => zb_check(common, tol),
    }
}

struct Resolved {
    file: FileConfig,
    out: Option<PathBuf>,
}

impl Resolved {
    fn load(common: &Common) -> Result<Resolved> {
        let file = FileConfig::load(common.config.as_deref())?;
        file.check_keys()?;
        let out = match &common.out {
            Some(p) => Some(p.clone()),
            None => file.get::<PathBuf>("out")?,
        };
        Ok(Resolved { file, out })
    }
}

fn thresholds(common: Common) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let (beta_c, beta_r) = tree::thresholds(d)?;
    println!("beta_c {beta_c}");
    println!("beta_r {beta_r}");
    if r.out.is_some() {
        let mut report = Report::new("thresholds", json!({ "d": d }), "d,beta_c,beta_r");
        report.push_row(format!("{d},{beta_c},{beta_r}"));
        report.write(r.out.as_deref())?;
    }
    Ok(0)
}

fn free_energy_curve(common: Common, points: Option<usize>) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let beta = resolve(common.beta, &r.file, "beta", None)?;
    let points = resolve(points, &r.file, "points", Some(2001))?;
    let curve = annealed::free_energy_curve(d, beta, points)?;
    let f_max = annealed::f(d, beta, curve.eta_star)
        .max(annealed::f(d, beta, 0.0))
        .max(annealed::f(d, beta, 1.0));
    let mut report = Report::new(
        "free-energy-curve",
        json!({
            "d": d, "beta": beta, "points": points,
            "eta_star": curve.eta_star, "eta_s": curve.eta_s,
        }),
        "eta,f,rho,drift_ratio,rate",
    );
    for (eta, f, rho) in &curve.points {
        let drift = annealed::drift_ratio(d, beta, *eta);
        let rate = f - f_max;
        report.push_row(format!("{eta},{f},{rho},{drift},{rate}"));
    }
    report.write(r.out.as_deref())?;
    Ok(0)
}

fn bp(common: Common, field: Option<f64>) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let beta = resolve(common.beta, &r.file, "beta", None)?;
    let field = resolve(field, &r.file, "field", Some(0.0))?;
    let params = fixmag::ModelParams::with_field(d, beta, field)?;
    let fixed_points = tree::bp_fixed_points(&params);
    let mut report = Report::new(
        "bp",
        json!({ "d": d, "beta": beta, "field": field }),
        "r,h,eta,rho,lambda2,stable",
    );
    for fp in &fixed_points {
        report.push_row(format!(
            "{},{},{},{},{},{}",
            fp.r,
            fp.h,
            fp.eta,
            fp.rho,
            tree::second_eigenvalue(fp),
            fp.stable
        ));
    }
    report.write(r.out.as_deref())?;
    Ok(0)
}

fn reconstruction(common: Common, depth: Option<usize>, samples: Option<usize>) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let beta = resolve(common.beta, &r.file, "beta", None)?;
    let eta = resolve(common.eta, &r.file, "eta", Some(0.0))?;
    let depth = resolve(depth, &r.file, "depth", Some(8))?;
    let samples = resolve(samples, &r.file, "samples", Some(2000))?;
    let seed = resolve(common.seed, &r.file, "seed", Some(0))?;
    if depth == 0 {
        bail!("depth must be at least 1");
    }
    let rows: Vec<String> = (1..=depth)
        .into_par_iter()
        .map(|r| {
            let mut rng = CounterRng::new(seed, r as u64);
            let (tv, se) = tree::reconstruction_tv(d, beta, eta, r, samples, &mut rng)?;
            Ok(format!("{r},{tv},{se}"))
        })
        .collect::<Result<_>>()?;
    let mut report = Report::new(
        "reconstruction",
        json!({ "d": d, "beta": beta, "eta": eta, "depth": depth, "samples": samples, "seed": seed }),
        "depth,tv,stderr",
    );
    report.extend(rows);
    report.write(r.out.as_deref())?;
    Ok(0)
}

fn k_from_eta(n: usize, eta: f64) -> usize {
    (((1.0 + eta) / 2.0 * n as f64).round() as isize).clamp(0, n as isize) as usize
}

fn sample_planted(common: Common) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let n = resolve(common.n, &r.file, "n", None)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let beta = resolve(common.beta, &r.file, "beta", None)?;
    let seed = resolve(common.seed, &r.file, "seed", Some(0))?;
    let k = match resolve_optional(common.k, &r.file, "k")? {
        Some(k) => k,
        None => {
            let eta: f64 = resolve(common.eta, &r.file, "eta", None)
                .context("either --k or --eta is required")?;
            k_from_eta(n, eta)
        }
    };
    let mut rng = CounterRng::new(seed, 0);
    let sample = planted::sample_planted(n, d, beta, k, &mut rng)?;
    let meta = json!({
        "subcommand": "sample-planted",
        "params": { "n": n, "d": d, "beta": beta, "k": k, "seed": seed },
        "bichromatic": sample.bichromatic,
        "rng": fixmag::rng::ALGORITHM,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let text = format!("# {meta}\n{}", planted::planted_to_text(&sample));
    write_text(r.out.as_deref(), &text)?;
    Ok(0)
}

fn run_dynamics(common: Common, variant: Option<String>, init: Option<String>) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let n = resolve(common.n, &r.file, "n", None)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let beta = resolve(common.beta, &r.file, "beta", None)?;
    let variant: Variant = resolve(variant, &r.file, "variant", Some("glauber".to_string()))?
        .parse()?;
    let init_name = resolve(init, &r.file, "init", Some("uniform".to_string()))?;
    let k = resolve_optional(common.k, &r.file, "k")?;
    let sweeps = resolve(common.sweeps, &r.file, "sweeps", Some(1000))?;
    let replicas = resolve(common.replicas, &r.file, "replicas", Some(1))?;
    let seed = resolve(common.seed, &r.file, "seed", Some(0))?;
    if replicas == 0 {
        bail!("replicas must be positive");
    }

    let pairing = Pairing::sample_uniform(n, d as usize, &mut CounterRng::new(seed, GRAPH_STREAM))?;
    let trajectories: Vec<Vec<dynamics::TrajectoryPoint>> = (0..replicas)
        .into_par_iter()
        .map(|replica| {
            let mut rng = CounterRng::new(seed, replica as u64);
            let traj = match k {
                Some(k) => {
                    let config = SpinConfig::uniform_with_k_plus(&pairing, k, &mut rng)?;
                    dynamics::trajectory(&pairing, beta, variant, config, sweeps, rng)
                }
                None => {
                    let init: dynamics::Init = init_name.parse()?;
                    dynamics::mixing_experiment(&pairing, beta, variant, init, sweeps, rng)
                }
            };
            Ok(traj)
        })
        .collect::<Result<_>>()?;

    let mut report = Report::new(
        "run-dynamics",
        json!({
            "n": n, "d": d, "beta": beta, "variant": variant.name(), "init": init_name,
            "k": k, "sweeps": sweeps, "replicas": replicas, "seed": seed,
            "graph_stream": GRAPH_STREAM,
        }),
        if replicas > 1 { "replica,t,k_plus,magnetization,H" } else { "t,k_plus,magnetization,H" },
    );
    for (replica, traj) in trajectories.iter().enumerate() {
        for p in traj {
            if replicas > 1 {
                report.push_row(format!("{replica},{},{},{},{}", p.t, p.k_plus, p.magnetization, p.h));
            } else {
                report.push_row(format!("{},{},{},{}", p.t, p.k_plus, p.magnetization, p.h));
            }
        }
    }
    report.write(r.out.as_deref())?;
    Ok(0)
}

fn projection(common: Common, k_min: Option<usize>, k_max: Option<usize>) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let n = resolve(common.n, &r.file, "n", None)?;
    let d = resolve(common.d, &r.file, "d", None)?;
    let beta = resolve(common.beta, &r.file, "beta", None)?;
    let k_min = resolve(k_min, &r.file, "k_min", Some(n / 2))?;
    let k_max = resolve(k_max, &r.file, "k_max", Some(n - 1))?;
    let sweeps = resolve(common.sweeps, &r.file, "sweeps", Some(2000))?;
    let burn_in = resolve(common.burn_in, &r.file, "burn_in", Some(500))?;
    let seed = resolve(common.seed, &r.file, "seed", Some(0))?;
    if k_min > k_max || k_max >= n {
        bail!("need k_min ≤ k_max < n, got [{k_min}, {k_max}] with n = {n}");
    }

    let pairing = Pairing::sample_uniform(n, d as usize, &mut CounterRng::new(seed, GRAPH_STREAM))?;
    let ratios: Vec<(f64, f64)> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| {
            dynamics::ratio_estimator(&pairing, beta, k, sweeps, burn_in, CounterRng::new(seed, k as u64))
                .map_err(anyhow::Error::from)
        })
        .collect::<Result<_>>()?;
    let chain = dynamics::projection_chain(n, k_min, ratios)?;

    let mut report = Report::new(
        "projection",
        json!({
            "n": n, "d": d, "beta": beta, "k_min": k_min, "k_max": k_max,
            "sweeps": sweeps, "burn_in": burn_in, "seed": seed, "graph_stream": GRAPH_STREAM,
        }),
        "k,eta,ratio,stderr,drift_ratio_limit,up,down,drift,up_alt,down_alt",
    );
    for k in k_min..=k_max {
        let eta = 2.0 * k as f64 / n as f64 - 1.0;
        let (ratio, stderr) = chain.ratios[k - k_min];
        let limit = annealed::drift_ratio(d, beta, eta);
        report.push_row(format!(
            "{k},{eta},{ratio},{stderr},{limit},{},{},{},{},{}",
            chain.up(k),
            chain.down(k),
            chain.drift(k),
            chain.up_display(k),
            chain.down_display(k)
        ));
    }
    report.write(r.out.as_deref())?;
    Ok(0)
}

struct Checker {
    failures: usize,
}

impl Checker {
    fn new() -> Self {
        Checker { failures: 0 }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("ok   {name}");
        } else {
            println!("FAIL {name}: {detail}");
            self.failures += 1;
        }
    }

    fn close(&mut self, name: &str, got: f64, want: f64, tol: f64) {
        let ok = (got - want).abs() <= tol;
        self.check(name, ok, format!("got {got}, want {want} (tol {tol})"));
    }
}

fn oracle_validate(common: Common) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let mut c = Checker::new();
    let k4 = Pairing::from_edges(4, 3, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;

    // exact z-table closed forms on K4
    for beta in [0.0, 0.5, 1.5] {
        let z = oracle::z_table(&k4, beta)?;
        c.close(&format!("k4 z0 beta={beta}"), z[0], (6.0 * beta).exp(), 1e-12 * z[0]);
        c.close(&format!("k4 z1 beta={beta}"), z[1], 4.0 * (3.0 * beta).exp(), 1e-12 * z[1]);
        c.close(&format!("k4 z2 beta={beta}"), z[2], 6.0 * (2.0 * beta).exp(), 1e-12 * z[2]);
    }

    // first-moment equality on every instance with dn ≤ 12
    let mut worst = 0.0f64;
    for d in 1..=6usize {
        for n in 2..=12usize {
            if d * n > 12 || (d * n) % 2 != 0 {
                continue;
            }
            for beta in [0.0, 0.5, 1.5] {
                for k in 0..=n {
                    let exact = oracle::enumerate_first_moment(n, d, beta, k)?;
                    let formula = annealed::first_moment_log(n, d as u32, beta, k)?.exp();
                    worst = worst.max(((formula - exact) / exact).abs());
                }
            }
        }
    }
    c.check(
        "first-moment formula vs enumeration (dn ≤ 12)",
        worst < 1e-10,
        format!("worst relative deviation {worst}"),
    );

    // detailed balance of all five variants on K4 and seeded loopy pairings
    let mut instances = vec![k4.clone()];
    let mut rng = CounterRng::new(0x0DDC0DE, 0);
    for _ in 0..2 {
        instances.push(Pairing::sample_uniform(4, 3, &mut rng)?);
    }
    for (i, g) in instances.iter().enumerate() {
        for kind in [
            oracle::ChainKind::Glauber,
            oracle::ChainKind::GlauberPlus,
            oracle::ChainKind::Kawasaki { k_plus: 2 },
            oracle::ChainKind::Hybrid,
            oracle::ChainKind::HybridPlus,
        ] {
            let chain = oracle::build_dense_chain(g, 0.8, kind)?;
            c.check(
                &format!("detailed balance instance {i} {kind:?}"),
                chain.reversibility_defect() < 1e-12,
                format!("defect {}", chain.reversibility_defect()),
            );
        }
    }

    // partition-ratio identity
    for beta in [0.2, 0.7, 1.5] {
        let z = oracle::z_table(&k4, beta)?;
        let rhs = oracle::ratio_identity_rhs(&k4, beta, 1)?;
        c.close(&format!("k4 ratio identity beta={beta}"), rhs, 1.5 * (-beta).exp(), 1e-12);
        c.close(&format!("k4 ratio z2/z1 beta={beta}"), rhs, z[2] / z[1], 1e-12);
    }
    let mut worst = 0.0f64;
    for g in oracle::all_pairings(2, 3)? {
        let z = oracle::z_table(&g, 0.7)?;
        for k in 0..2 {
            let rhs = oracle::ratio_identity_rhs(&g, 0.7, k)?;
            worst = worst.max(((z[k + 1] / z[k] - rhs) / rhs).abs());
        }
    }
    let mut rng = CounterRng::new(0x1DEA, 0);
    for _ in 0..10 {
        let g = Pairing::sample_uniform(6, 3, &mut rng)?;
        let z = oracle::z_table(&g, 0.5)?;
        for k in 0..6 {
            let rhs = oracle::ratio_identity_rhs(&g, 0.5, k)?;
            worst = worst.max(((z[k + 1] / z[k] - rhs) / rhs).abs());
        }
    }
    c.check(
        "ratio identity over enumerated and sampled instances",
        worst < 1e-10,
        format!("worst relative deviation {worst}"),
    );

    // comparison inequality and projection-restriction bound on K4
    let plus = oracle::build_dense_chain(&k4, 0.5, oracle::ChainKind::GlauberPlus)?;
    let hybrid = oracle::build_dense_chain(&k4, 0.5, oracle::ChainKind::HybridPlus)?;
    let bound = hybrid.gap() / (3.0 * 4.0 * 1.5f64.exp());
    c.check(
        "restricted-vs-hybrid gap comparison",
        plus.gap() >= bound,
        format!("gap {} < bound {bound}", plus.gap()),
    );
    {
        let z = oracle::z_table(&k4, 0.5)?;
        let keep_a2: Vec<bool> =
            hybrid.labels.iter().map(|m| (2..=3).contains(&m.count_ones())).collect();
        let keep_a3: Vec<bool> =
            hybrid.labels.iter().map(|m| (3..=4).contains(&m.count_ones())).collect();
        let p2 = hybrid.restriction(&keep_a2);
        let p3 = hybrid.restriction(&keep_a3);
        let up = z[3] / (2.0 * (z[2] + z[3]));
        let down = z[3] / (2.0 * (z[3] + z[4]));
        let ph = oracle::DenseChain::from_rows(
            vec![2, 3],
            vec![vec![1.0 - up, up], vec![down, 1.0 - down]],
            Some(vec![z[2] + z[3], z[3] + z[4]]),
        )?;
        let bound = 0.25 * ph.gap() * p2.gap().min(p3.gap());
        c.check(
            "projection-restriction decomposition bound",
            hybrid.gap() >= bound,
            format!("gap {} < bound {bound}", hybrid.gap()),
        );
    }

    // projection chain stationary law from exact ratios
    {
        let z = oracle::z_table(&k4, 0.6)?;
        let ratios: Vec<(f64, f64)> = (0..4).map(|k| (z[k + 1] / z[k], 0.0)).collect();
        let pc = dynamics::projection_chain(4, 0, ratios)?;
        let pi = pc.stationary();
        let total: f64 = (0..4).map(|k| z[k] + z[k + 1]).sum();
        let worst = (0..4)
            .map(|k| (pi[k] - (z[k] + z[k + 1]) / total).abs())
            .fold(0.0f64, f64::max);
        c.check(
            "projection stationary ∝ z_k + z_{k+1}",
            worst < 1e-12,
            format!("worst deviation {worst}"),
        );
    }

    // exact TV curve sanity
    {
        let chain = oracle::build_dense_chain(&k4, 1.0, oracle::ChainKind::Glauber)?;
        let pi: Vec<f64> = chain.stationary.iter().cloned().collect();
        let at_stationary = oracle::exact_tv_curve(&chain, &pi, 10);
        c.check(
            "tv curve vanishes from stationary start",
            at_stationary.iter().all(|&(_, tv)| tv < 1e-12),
            "nonzero TV".to_string(),
        );
        let mut init = vec![0.0; chain.labels.len()];
        init[0] = 1.0;
        let curve = oracle::exact_tv_curve(&chain, &init, 50);
        c.check(
            "tv curve non-increasing",
            curve.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12),
            "increase detected".to_string(),
        );
    }

    // closed-form identity suite on the tree side
    {
        let mut worst_f = 0.0f64;
        for d in 3..=22u32 {
            for i in 0..20 {
                let beta = 0.05 + 0.1 * i as f64;
                let expect =
                    std::f64::consts::LN_2 + d as f64 / 2.0 * ((1.0 + beta.exp()) / 2.0).ln();
                worst_f = worst_f.max((annealed::f(d, beta, 0.0) - expect).abs());
            }
        }
        c.check("f(d,β,0) closed form on 20×20 grid", worst_f < 1e-12, format!("worst {worst_f}"));
        let mut worst_ks = 0.0f64;
        for d in 3..=22u32 {
            let (_, beta_r) = tree::thresholds(d)?;
            let m = tree::field_for_magnetization(d, beta_r, 0.0)?;
            worst_ks = worst_ks
                .max(((d as f64 - 1.0) * tree::second_eigenvalue(&m).powi(2) - 1.0).abs());
        }
        c.check("Kesten–Stigum product at β_r", worst_ks < 1e-10, format!("worst {worst_ks}"));
        let mut worst_drift = 0.0f64;
        for d in 3..=12u32 {
            for i in 0..8 {
                let beta = 0.1 + 0.2 * i as f64;
                worst_drift = worst_drift.max((annealed::drift_ratio(d, beta, 0.0) - 1.0).abs());
            }
        }
        c.check("drift ratio equals 1 at η = 0", worst_drift < 1e-12, format!("worst {worst_drift}"));
    }

    if let Some(out) = &r.out {
        let record = oracle::golden_record(&k4, 0.5)?;
        std::fs::write(out, serde_json::to_string_pretty(&record)?)
            .with_context(|| format!("writing {}", out.display()))?;
        println!("ok   golden record written");
    }

    if c.failures == 0 {
        println!("oracle-validate: all checks passed");
        Ok(0)
    } else {
        println!("oracle-validate: {} check(s) FAILED", c.failures);
        Ok(1)
    }
}

fn zb_check(common: Common, tol: Option<f64>) -> Result<u8> {
    let r = Resolved::load(&common)?;
    let n = resolve(common.n, &r.file, "n", Some(400))?;
    let d = resolve(common.d, &r.file, "d", Some(3))?;
    let beta = resolve(common.beta, &r.file, "beta", Some(0.5))?;
    let sweeps = resolve(common.sweeps, &r.file, "sweeps", Some(4000))?;
    let burn_in = resolve(common.burn_in, &r.file, "burn_in", Some(1000))?;
    let replicas = resolve(common.replicas, &r.file, "replicas", Some(4))?;
    let seed = resolve(common.seed, &r.file, "seed", Some(0))?;
    let tol = resolve(tol, &r.file, "tol", Some(0.03))?;
    if n % 2 != 0 {
        bail!("zero magnetization needs even n");
    }

    let pairing = Pairing::sample_uniform(n, d as usize, &mut CounterRng::new(seed, GRAPH_STREAM))?;
    let edges = pairing.num_edges() as f64;

    // mean energy density (1/n)·E[H] under a chain, averaged over replicas
    let mean_energy = |variant: Variant, chain_beta: f64, fixed_k: Option<usize>, stream0: u64| -> Result<f64> {
        let totals: Vec<f64> = (0..replicas)
            .into_par_iter()
            .map(|rep| {
                let mut rng = CounterRng::new(seed, stream0 + rep as u64);
                let config = match fixed_k {
                    Some(k) => SpinConfig::uniform_with_k_plus(&pairing, k, &mut rng)?,
                    None => SpinConfig::uniform(&pairing, &mut rng),
                };
                let mut chain =
                    dynamics::ChainState::new(pairing.clone(), config, chain_beta, variant, rng);
                for _ in 0..burn_in {
                    chain.sweep();
                }
                let mut acc = 0.0f64;
                for _ in 0..sweeps {
                    chain.sweep();
                    acc += chain.energy() as f64;
                }
                Ok(acc / sweeps as f64)
            })
            .collect::<Result<_>>()?;
        Ok(totals.iter().sum::<f64>() / replicas as f64 / n as f64)
    };

    // fixed-magnetization ferromagnet at η = 0 (Kawasaki conserves k = n/2)
    let fix = mean_energy(Variant::Kawasaki, beta, Some(n / 2), 0)?;
    // anti-ferromagnet = negated inverse temperature in the heat bath
    let anti = mean_energy(Variant::Glauber, -beta, None, replicas as u64)?;

    let target_fix = d as f64 / 2.0 * beta.exp() / (1.0 + beta.exp());
    let target_anti = d as f64 / 2.0 / (1.0 + beta.exp());
    let target_sum = d as f64 / 2.0;
    let sum = fix + anti;
    let dev_fix = ((fix - target_fix) / target_fix).abs();
    let dev_anti = ((anti - target_anti) / target_anti).abs();
    let dev_sum = ((sum - target_sum) / target_sum).abs();

    println!("fixed-magnetization energy density {fix} (closed form {target_fix}, rel dev {dev_fix})");
    println!("anti-ferromagnetic energy density  {anti} (closed form {target_anti}, rel dev {dev_anti})");
    println!("sum {sum} vs d/2 = {target_sum} (rel dev {dev_sum})");

    if r.out.is_some() {
        let mut report = Report::new(
            "zb-check",
            json!({
                "n": n, "d": d, "beta": beta, "sweeps": sweeps, "burn_in": burn_in,
                "replicas": replicas, "seed": seed, "tol": tol, "edges": edges,
            }),
            "side,estimate,target,rel_dev",
        );
        report.push_row(format!("fixed,{fix},{target_fix},{dev_fix}"));
        report.push_row(format!("anti,{anti},{target_anti},{dev_anti}"));
        report.push_row(format!("sum,{sum},{target_sum},{dev_sum}"));
        report.write(r.out.as_deref())?;
    }

    if dev_fix <= tol && dev_anti <= tol && dev_sum <= tol {
        println!("zb-check: within tolerance {tol}");
        Ok(0)
    } else {
        println!("zb-check: OUTSIDE tolerance {tol}");
        Ok(1)
    }
}
