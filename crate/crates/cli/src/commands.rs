//! Subcommand implementations shared by the binary and the acceptance suite.

use std::fs;
use std::path::Path;

use banditgv::bco2p::{run_sphere_sgd, run_two_point, TwoPointOptions};
use banditgv::blo1p::{run_one_point, OnePointOptions};
use banditgv::ensemble::{run_dynamic, run_universal, EnsembleOptions};
use banditgv::estimator2p::{coupon_collector_mean, rho_statistics};
use banditgv::game::run_game;
use banditgv::metrics::{mean_se, slope_fit};
use banditgv::{Domain, Rng};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{AdversarySpec, Algorithm, ConfigError, ExperimentConfig};
use crate::output::{
    fmt_f64, one_point_rows, summary_line, two_point_rows, weight_rows, SUMMARY_HEADER,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Library(#[from] banditgv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} acceptance criteria failed")]
    Acceptance(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Library(banditgv::Error::Config(_)) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Worker count from `BANDITGV_THREADS`, or rayon's default when unset.
pub fn worker_count() -> CliResult<Option<usize>> {
    match std::env::var("BANDITGV_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError {
                line: 0,
                message: format!("BANDITGV_THREADS must be a positive integer, found `{v}`"),
            }
            .into()),
        },
    }
}

/// Runs `f` inside a pool sized by [`worker_count`].
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = worker_count()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| banditgv::Error::InvalidInput(e.to_string()))?;
    Ok(pool.install(f))
}

fn missing(key: &str) -> CliError {
    ConfigError {
        line: 0,
        message: format!("missing key `{key}`"),
    }
    .into()
}

struct Setup<'a> {
    algorithm: Algorithm,
    domain: &'a Domain,
    adversary: &'a AdversarySpec,
}

fn setup(cfg: &ExperimentConfig) -> CliResult<Setup<'_>> {
    Ok(Setup {
        algorithm: cfg.algorithm.ok_or_else(|| missing("algorithm"))?,
        domain: cfg.domain.as_ref().ok_or_else(|| missing("domain.kind"))?,
        adversary: cfg
            .adversary
            .as_ref()
            .ok_or_else(|| missing("adversary.family"))?,
    })
}

fn two_point_options(cfg: &ExperimentConfig) -> TwoPointOptions {
    TwoPointOptions {
        delta: cfg.overrides.delta,
        shrink: cfg.overrides.shrink,
        eta: cfg.overrides.eta,
        wallclock: cfg.wallclock,
    }
}

/// Everything one seed contributes to the output files.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub rows: String,
    pub weights: Option<String>,
    pub summary: String,
    /// Played-point regret for one-point runs, center regret otherwise.
    pub regret: f64,
}

pub fn run_seed(cfg: &ExperimentConfig, horizon: usize, seed: u64) -> CliResult<SeedRun> {
    let s = setup(cfg)?;
    let d = s.domain.dim();
    let seq = s.adversary.build(seed, horizon, s.domain)?;
    let opts = two_point_options(cfg);
    let finish_two_point = |mut rec: banditgv::record::RunRecord, weights: Option<String>| {
        rec.summary.config_hash = cfg.hash.clone();
        let sm = &rec.summary;
        let summary = summary_line(
            seed,
            sm.regret_avg,
            sm.regret_center,
            sm.v_t,
            Some(sm.vbar_t),
            sm.f_t,
            sm.wallclock_ms,
            &sm.config_hash,
        );
        SeedRun {
            seed,
            rows: two_point_rows(&rec, d),
            weights,
            summary,
            regret: sm.regret_center,
        }
    };
    Ok(match s.algorithm {
        Algorithm::TwoPoint(v) => {
            finish_two_point(run_two_point(v, &seq, s.domain, seed, &opts)?, None)
        }
        Algorithm::Sphere => finish_two_point(run_sphere_sgd(&seq, s.domain, seed, &opts)?, None),
        Algorithm::Dynamic | Algorithm::Universal => {
            let eo = EnsembleOptions {
                pool: opts.eta.map(|e| vec![e]),
                two_point: TwoPointOptions { eta: None, ..opts },
                lambda_grid: None,
            };
            let rec = if s.algorithm == Algorithm::Dynamic {
                run_dynamic(&seq, s.domain, seed, &eo)?
            } else {
                run_universal(&seq, s.domain, seed, &eo)?
            };
            let w = weight_rows(&rec.meta, rec.summary.experts);
            finish_two_point(rec.run, Some(w))
        }
        Algorithm::OnePoint => {
            let oo = OnePointOptions {
                eta: cfg.overrides.eta,
                v_t: cfg.overrides.v_t,
                tol: cfg.overrides.tol,
                wallclock: cfg.wallclock,
            };
            let rec = run_one_point(&seq, s.domain, seed, &oo)?;
            let sm = &rec.summary;
            let summary = summary_line(
                seed,
                sm.regret,
                sm.regret_center,
                Some(sm.v_t),
                None,
                None,
                sm.wallclock_ms,
                &cfg.hash,
            );
            SeedRun {
                seed,
                rows: one_point_rows(&rec, d),
                weights: None,
                summary,
                regret: sm.regret,
            }
        }
    })
}

fn run_seeds(cfg: &ExperimentConfig, horizon: usize) -> CliResult<Vec<SeedRun>> {
    with_pool(|| {
        cfg.seeds
            .par_iter()
            .map(|&seed| run_seed(cfg, horizon, seed))
            .collect::<CliResult<Vec<_>>>()
    })?
}

/// Writes `rows_seed<k>.csv` (plus `weights_seed<k>.csv` for ensembles) and
/// `summary.csv` into `out`.
pub fn cmd_run_to(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let runs = run_seeds(cfg, cfg.horizon())?;
    fs::create_dir_all(out)?;
    let mut summary = String::from(SUMMARY_HEADER);
    summary.push('\n');
    for r in &runs {
        fs::write(out.join(format!("rows_seed{}.csv", r.seed)), &r.rows)?;
        if let Some(w) = &r.weights {
            fs::write(out.join(format!("weights_seed{}.csv", r.seed)), w)?;
        }
        summary.push_str(&r.summary);
        summary.push('\n');
    }
    fs::write(out.join("summary.csv"), summary)?;
    Ok(())
}

pub fn cmd_run(path: &Path) -> CliResult<()> {
    let cfg = ExperimentConfig::load(path)?;
    cmd_run_to(&cfg, &cfg.output_dir)
}

/// Mean regret per horizon and the log-log slope across horizons.
pub fn cmd_sweep_to(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let mut table = String::from("horizon,seeds,mean_regret,se_regret\n");
    let mut points = Vec::new();
    for &t in &cfg.horizons {
        let regrets: Vec<f64> = run_seeds(cfg, t)?.iter().map(|r| r.regret).collect();
        let (mean, se) = mean_se(&regrets);
        table.push_str(&format!(
            "{t},{},{},{}\n",
            regrets.len(),
            fmt_f64(mean),
            fmt_f64(se)
        ));
        points.push((t as f64, mean));
    }
    fs::create_dir_all(out)?;
    fs::write(out.join("sweep.csv"), table)?;
    let fit = slope_fit(&points)?;
    fs::write(
        out.join("slope.csv"),
        format!(
            "slope,half_width,intercept,points_used,points_excluded\n{},{},{},{},{}\n",
            fmt_f64(fit.slope),
            fmt_f64(fit.half_width),
            fmt_f64(fit.intercept),
            fit.used,
            fit.excluded
        ),
    )?;
    Ok(())
}

pub fn cmd_sweep(path: &Path) -> CliResult<()> {
    let cfg = ExperimentConfig::load(path)?;
    cmd_sweep_to(&cfg, &cfg.output_dir)
}

/// Per-seed gap trajectories in `gaps.csv` and the seed mean in `gap_mean.csv`.
pub fn cmd_game_to(cfg: &ExperimentConfig, out: &Path) -> CliResult<()> {
    let spec = cfg.game.as_ref().ok_or_else(|| missing("game.matrix"))?;
    let game = spec.config(cfg.horizon(), cfg.overrides.tol)?;
    let records = with_pool(|| {
        cfg.seeds
            .par_iter()
            .map(|&s| run_game(&game, s))
            .collect::<banditgv::Result<Vec<_>>>()
    })??;
    let mut gaps = String::from("seed,t,gap,reg_x,reg_y,identity_residual\n");
    for r in &records {
        for c in &r.checkpoints {
            gaps.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.seed,
                c.t,
                fmt_f64(c.gap),
                fmt_f64(c.reg_x),
                fmt_f64(c.reg_y),
                fmt_f64(c.identity_residual)
            ));
        }
    }
    let mut mean = String::from("t,mean_gap,se_gap\n");
    if let Some(first) = records.first() {
        for (k, c) in first.checkpoints.iter().enumerate() {
            let vals: Vec<f64> = records.iter().map(|r| r.checkpoints[k].gap).collect();
            let (m, se) = mean_se(&vals);
            mean.push_str(&format!("{},{},{}\n", c.t, fmt_f64(m), fmt_f64(se)));
        }
    }
    fs::create_dir_all(out)?;
    fs::write(out.join("gaps.csv"), gaps)?;
    fs::write(out.join("gap_mean.csv"), mean)?;
    Ok(())
}

pub fn cmd_game(path: &Path) -> CliResult<()> {
    let cfg = ExperimentConfig::load(path)?;
    cmd_game_to(&cfg, &cfg.output_dir)
}

/// Pooled sampling-gap statistics over uniformly drawn coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnosis {
    pub dim: usize,
    pub rounds: usize,
    pub sequences: usize,
    pub mean_wait: f64,
    pub mean_collection: f64,
    pub collections: usize,
    pub mean_rho: f64,
    pub mean_max_rho: f64,
    pub coupon_oracle: f64,
}

/// Simulates `trials` rounds split into sequences of `horizon` rounds (one
/// sequence when `horizon` is `None`).
pub fn diagnose(
    dim: usize,
    trials: usize,
    horizon: Option<usize>,
    seed: u64,
) -> CliResult<(Diagnosis, String, String)> {
    if dim == 0 || trials == 0 {
        return Err(ConfigError {
            line: 0,
            message: "diagnose needs dim >= 1 and trials >= 1".into(),
        }
        .into());
    }
    let len = horizon.unwrap_or(trials).clamp(1, trials);
    let sequences = trials.div_ceil(len);
    let mut rng = Rng::new(seed);
    let (mut wait, mut coll, mut rho, mut maxr) = (0.0, 0.0, 0.0, 0.0);
    let (mut rounds, mut collections) = (0usize, 0usize);
    let mut hist = std::collections::BTreeMap::new();
    for k in 0..sequences {
        let n = len.min(trials - k * len);
        let coords: Vec<usize> = (0..n).map(|_| rng.sample_coordinate(dim)).collect();
        let s = rho_statistics(&coords, dim);
        wait += s.mean_wait * n as f64;
        rho += s.mean_rho * n as f64;
        maxr += s.mean_max_rho * n as f64;
        coll += s.mean_collection * s.collections as f64;
        rounds += n;
        collections += s.collections;
        for (r, c) in s.histogram {
            *hist.entry(r).or_insert(0usize) += c;
        }
    }
    let diag = Diagnosis {
        dim,
        rounds,
        sequences,
        mean_wait: wait / rounds as f64,
        mean_collection: if collections > 0 {
            coll / collections as f64
        } else {
            f64::NAN
        },
        collections,
        mean_rho: rho / rounds as f64,
        mean_max_rho: maxr / rounds as f64,
        coupon_oracle: coupon_collector_mean(dim),
    };
    let table = format!(
        "dim,rounds,sequences,mean_wait,mean_collection,collections,coupon_oracle,mean_rho,mean_max_rho\n{},{},{},{},{},{},{},{},{}\n",
        diag.dim,
        diag.rounds,
        diag.sequences,
        fmt_f64(diag.mean_wait),
        fmt_f64(diag.mean_collection),
        diag.collections,
        fmt_f64(diag.coupon_oracle),
        fmt_f64(diag.mean_rho),
        fmt_f64(diag.mean_max_rho)
    );
    let mut histogram = String::from("rho,count\n");
    for (r, c) in hist {
        histogram.push_str(&format!("{r},{c}\n"));
    }
    Ok((diag, table, histogram))
}

pub fn cmd_diagnose(
    dim: usize,
    trials: usize,
    horizon: Option<usize>,
    seed: u64,
    out: &Path,
) -> CliResult<Diagnosis> {
    let (diag, table, histogram) = diagnose(dim, trials, horizon, seed)?;
    fs::create_dir_all(out)?;
    fs::write(out.join("diagnose.csv"), table)?;
    fs::write(out.join("rho_histogram.csv"), histogram)?;
    Ok(diag)
}
