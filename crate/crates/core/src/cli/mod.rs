//! Run configuration and the `generate`, `reconstruct`, `evaluate` and
//! `bench` commands.
//!
//! A [`RunConfig`] is read from a `key=value` file and then patched with
//! overrides (command-line flags), later values winning. Every command writes
//! a `manifest` in the same format that reparses to the config it ran with.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::bench::{self, BenchConfig, Scenario, Suite};
use crate::dynamics::{DynamicsDataset, KuramotoConfig, ModelTag};
use crate::error::{Error, Result};
use crate::graph::{er_generate, load_edge_list, save_edge_list, AdjacencyMatrix, Directedness, EdgeScoreMatrix};
use crate::metrics::{self, MetricsReport};
use crate::recon::{binarize, reconstruct_palms, Method, ReconConfig, Tuning};
use crate::seed;
use crate::textio;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,
    pub workers: usize,

    pub dgp: ModelTag,
    pub n: usize,
    pub rounds: usize,
    pub density: f64,
    pub noise_std: f64,
    pub coupling: f64,
    pub step: f64,
    /// Edge list to simulate on instead of a random graph.
    pub network: Option<PathBuf>,

    pub data: Option<PathBuf>,
    pub method: Method,
    pub k: usize,
    pub m: usize,
    pub tau: f64,
    /// Fixed λ; `None` selects λ per regression from `lambda_grid`.
    pub lambda: Option<f64>,
    pub lambda_grid: Vec<f64>,
    pub lambda2: f64,
    pub gamma: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub directed: bool,
    pub concurrent_splits: bool,
    pub progress: bool,

    pub truth: Option<PathBuf>,
    pub estimate: Option<PathBuf>,

    pub suite: String,
    /// Methods of the `custom` and `table5` suites.
    pub methods: Vec<Method>,
    pub reps: usize,
    pub rep_workers: usize,
    pub memory_budget: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let recon = ReconConfig::default();
        let kuramoto = KuramotoConfig::default();
        RunConfig {
            seed: 0,
            out: PathBuf::from("out"),
            workers: 1,
            dgp: ModelTag::Ultimatum,
            n: 50,
            rounds: 5,
            density: 0.1,
            noise_std: 1.0,
            coupling: kuramoto.coupling,
            step: kuramoto.step,
            network: None,
            data: None,
            method: Method::Palms,
            k: recon.n_groups,
            m: recon.n_splits,
            tau: recon.binarize_threshold,
            lambda: None,
            lambda_grid: Tuning::default_grid(),
            lambda2: recon.solver.lambda2,
            gamma: recon.solver.weight_gamma,
            tol: recon.solver.tol,
            max_iters: recon.solver.max_iters,
            directed: false,
            concurrent_splits: false,
            progress: false,
            truth: None,
            estimate: None,
            suite: "table4".into(),
            methods: Method::ALL.to_vec(),
            reps: 50,
            rep_workers: 1,
            memory_budget: BenchConfig::default().memory_budget_bytes,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::param(format!("bad value {v:?} for {key}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::param(format!("bad value {v:?} for {key} (expected true or false)"))),
    }
}

fn parse_path(v: &str) -> Option<PathBuf> {
    (!v.is_empty()).then(|| PathBuf::from(v))
}

fn parse_list<T>(v: &str, item: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

fn show_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map(|p| p.display().to_string()).unwrap_or_default()
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Apply one `key=value` setting. Unknown keys are errors.
    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "seed" => self.seed = parse_num(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "workers" => self.workers = parse_num(key, v)?,
            "dgp" => self.dgp = v.parse()?,
            "n" => self.n = parse_num(key, v)?,
            "r" => self.rounds = parse_num(key, v)?,
            "density" => self.density = parse_num(key, v)?,
            "noise_std" => self.noise_std = parse_num(key, v)?,
            "coupling" => self.coupling = parse_num(key, v)?,
            "step" => self.step = parse_num(key, v)?,
            "network" => self.network = parse_path(v),
            "data" => self.data = parse_path(v),
            "method" => self.method = v.parse()?,
            "k" => self.k = parse_num(key, v)?,
            "m" => self.m = parse_num(key, v)?,
            "tau" => self.tau = parse_num(key, v)?,
            "lambda" => {
                self.lambda = match v {
                    "cv" => None,
                    _ => Some(parse_num(key, v)?),
                }
            }
            "lambda_grid" => self.lambda_grid = parse_list(v, |s| parse_num(key, s))?,
            "lambda2" => self.lambda2 = parse_num(key, v)?,
            "gamma" => self.gamma = parse_num(key, v)?,
            "tol" => self.tol = parse_num(key, v)?,
            "max_iters" => self.max_iters = parse_num(key, v)?,
            "directed" => self.directed = parse_bool(key, v)?,
            "concurrent_splits" => self.concurrent_splits = parse_bool(key, v)?,
            "progress" => self.progress = parse_bool(key, v)?,
            "truth" => self.truth = parse_path(v),
            "estimate" => self.estimate = parse_path(v),
            "suite" => self.suite = v.to_string(),
            "methods" => self.methods = parse_list(v, str::parse)?,
            "reps" => self.reps = parse_num(key, v)?,
            "rep_workers" => self.rep_workers = parse_num(key, v)?,
            "memory_budget" => self.memory_budget = parse_num(key, v)?,
            other => return Err(Error::param(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Parse `key=value` text on top of the defaults.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (k, v) in textio::parse_key_values(text, origin)? {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// Defaults, then the optional file, then `overrides` in order.
    pub fn load(file: Option<&Path>, overrides: &[(String, String)]) -> Result<Self> {
        let mut cfg = match file {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(|e| Error::io(format!("reading {}", p.display()), e))?;
                RunConfig::parse(&text, p)?
            }
            None => RunConfig::default(),
        };
        for (k, v) in overrides {
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    /// Every key, in a fixed order, with round-trip exact numbers.
    pub fn to_manifest(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("seed", self.seed.to_string());
        kv("out", self.out.display().to_string());
        kv("workers", self.workers.to_string());
        kv("dgp", self.dgp.to_string());
        kv("n", self.n.to_string());
        kv("r", self.rounds.to_string());
        kv("density", self.density.to_string());
        kv("noise_std", self.noise_std.to_string());
        kv("coupling", self.coupling.to_string());
        kv("step", self.step.to_string());
        kv("network", show_path(&self.network));
        kv("data", show_path(&self.data));
        kv("method", self.method.to_string());
        kv("k", self.k.to_string());
        kv("m", self.m.to_string());
        kv("tau", self.tau.to_string());
        kv("lambda", self.lambda.map_or_else(|| "cv".into(), |l| l.to_string()));
        kv("lambda_grid", join(&self.lambda_grid));
        kv("lambda2", self.lambda2.to_string());
        kv("gamma", self.gamma.to_string());
        kv("tol", self.tol.to_string());
        kv("max_iters", self.max_iters.to_string());
        kv("directed", self.directed.to_string());
        kv("concurrent_splits", self.concurrent_splits.to_string());
        kv("progress", self.progress.to_string());
        kv("truth", show_path(&self.truth));
        kv("estimate", show_path(&self.estimate));
        kv("suite", self.suite.clone());
        kv("methods", join(&self.methods));
        kv("reps", self.reps.to_string());
        kv("rep_workers", self.rep_workers.to_string());
        kv("memory_budget", self.memory_budget.to_string());
        s
    }

    pub fn directedness(&self) -> Directedness {
        if self.directed {
            Directedness::Directed
        } else {
            Directedness::Undirected
        }
    }

    /// Reconstruction settings for the configured method.
    pub fn recon_config(&self) -> Result<ReconConfig> {
        let mut base = ReconConfig {
            n_groups: self.k,
            n_splits: self.m,
            workers: self.workers,
            binarize_threshold: self.tau,
            master_seed: self.seed,
            directedness: self.directedness(),
            concurrent_splits: self.concurrent_splits,
            progress: self.progress,
            tuning: match self.lambda {
                Some(l) => Tuning::Fixed(l),
                None => Tuning::CrossValidated(self.lambda_grid.clone()),
            },
            ..ReconConfig::default()
        };
        base.solver.lambda2 = self.lambda2;
        base.solver.weight_gamma = self.gamma;
        base.solver.tol = self.tol;
        base.solver.max_iters = self.max_iters;
        let cfg = self.method.configure(&base);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn kuramoto(&self) -> Result<KuramotoConfig> {
        let k = KuramotoConfig {
            step: self.step,
            coupling: self.coupling,
            init_phase_seed: 0,
        };
        k.validate()?;
        Ok(k)
    }

    pub fn bench_config(&self) -> Result<BenchConfig> {
        Ok(BenchConfig {
            recon: self.recon_config()?,
            kuramoto: self.kuramoto()?,
            memory_budget_bytes: self.memory_budget,
            rep_workers: self.rep_workers,
        })
    }

    /// Simulation settings shared by `generate` and `bench`.
    pub fn validate_simulation(&self) -> Result<()> {
        if self.network.is_none() && self.n < 2 {
            return Err(Error::param(format!("n must be >= 2, got {}", self.n)));
        }
        if self.rounds == 0 {
            return Err(Error::param("r must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::param(format!("density must lie in [0, 1], got {}", self.density)));
        }
        crate::dynamics::NoiseSpec::new(self.noise_std, 0)?;
        self.kuramoto()?;
        Ok(())
    }

    fn scenario(&self) -> Scenario {
        Scenario {
            model: self.dgp,
            n: self.n,
            rounds: self.rounds,
            density: self.density,
            noise_std: self.noise_std,
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

fn write_manifest(cfg: &RunConfig) -> Result<()> {
    write(&cfg.out.join("manifest"), &cfg.to_manifest())
}

/// The truth network of `generate`: the configured edge list, or an ER graph.
fn truth_network(cfg: &RunConfig) -> Result<(AdjacencyMatrix, Option<Vec<u64>>)> {
    match &cfg.network {
        Some(p) => {
            let el = load_edge_list(p, cfg.directedness())?;
            Ok((el.adjacency, Some(el.node_ids)))
        }
        None => {
            let a = er_generate(cfg.n, cfg.density, seed::derive(cfg.seed, &[0]))?;
            Ok(if cfg.directed {
                (AdjacencyMatrix::from_edges(cfg.n, Directedness::Directed, a.edges())?, None)
            } else {
                (a, None)
            })
        }
    }
}

/// Simulate a dataset into `cfg.out`: the dataset files, `truth.txt`,
/// `node_ids.txt` when the network came from a file, and `manifest`.
pub fn cmd_generate(cfg: &RunConfig) -> Result<PathBuf> {
    cfg.validate_simulation()?;
    let (truth, ids) = truth_network(cfg)?;
    let data = bench::simulate(&truth, cfg.dgp, cfg.rounds, cfg.noise_std, &cfg.kuramoto()?, cfg.seed)?;
    create_dir(&cfg.out)?;
    data.save(&cfg.out)?;
    save_edge_list(&cfg.out.join("truth.txt"), &truth)?;
    if let Some(ids) = ids {
        let body: String = ids.iter().map(|id| format!("{id}\n")).collect();
        write(&cfg.out.join("node_ids.txt"), &body)?;
    }
    write_manifest(cfg)?;
    Ok(cfg.out.clone())
}

/// Reconstruct the dataset in `cfg.data`, writing `scores.csv`,
/// `estimate.txt`, `report` and `manifest` to `cfg.out`. When the dataset
/// directory holds a `truth.txt`, the report includes its metrics.
pub fn cmd_reconstruct(cfg: &RunConfig) -> Result<Option<MetricsReport>> {
    let rc = cfg.recon_config()?;
    let dir = cfg
        .data
        .as_ref()
        .ok_or_else(|| Error::param("reconstruct needs a dataset directory (data=...)"))?;
    let data = DynamicsDataset::load(dir)?;
    let report = reconstruct_palms(&data, &rc)?;
    create_dir(&cfg.out)?;
    report.scores.write_csv(&cfg.out.join("scores.csv"))?;
    save_edge_list(&cfg.out.join("estimate.txt"), &report.binary)?;

    let mut body = String::new();
    let _ = writeln!(body, "method={}", cfg.method);
    let _ = writeln!(body, "n={}", data.n_nodes());
    let _ = writeln!(body, "r={}", data.n_rounds());
    let _ = writeln!(body, "k={}", rc.n_groups);
    let _ = writeln!(body, "m={}", rc.n_splits);
    let _ = writeln!(body, "edges={}", report.binary.edge_count());
    let _ = writeln!(body, "blocks_total={}", report.blocks_total);
    let _ = writeln!(body, "blocks_unconverged={}", report.blocks_unconverged);
    let _ = writeln!(body, "split_residual_ss={}", join(&report.split_residual_ss));
    let _ = writeln!(body, "wall_time_s={}", report.wall_time_s);
    let truth_path = dir.join("truth.txt");
    let metrics = if truth_path.exists() {
        let truth = load_edge_list(&truth_path, rc.directedness)?.adjacency;
        let m = metrics::evaluate(
            &truth,
            &report.scores,
            &report.binary,
            Some(report.wall_time_s),
            cfg.method.name(),
        )?;
        let _ = writeln!(body, "mse={}", m.mse);
        let _ = writeln!(body, "srnl={}", na(m.srnl));
        let _ = writeln!(body, "srel={}", na(m.srel));
        Some(m)
    } else {
        None
    };
    write(&cfg.out.join("report"), &body)?;
    write_manifest(cfg)?;
    Ok(metrics)
}

fn na(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".into(), |v| v.to_string())
}

pub const EVALUATION_HEADER: &str = "method,mse,srnl,srel,cpu_time";

pub fn evaluation_csv(m: &MetricsReport) -> String {
    format!(
        "{EVALUATION_HEADER}\n{},{},{},{},{}\n",
        m.method_tag,
        m.mse,
        na(m.srnl),
        na(m.srel),
        na(m.cpu_time_s)
    )
}

/// Load an estimate: a `.csv` is a score matrix (binarised at `tau`),
/// anything else an edge list (scores are its 0/1 entries).
pub fn load_estimate(
    path: &Path,
    n: usize,
    tau: f64,
    directedness: Directedness,
) -> Result<(EdgeScoreMatrix, AdjacencyMatrix)> {
    if path.extension().is_some_and(|e| e == "csv") {
        let scores = EdgeScoreMatrix::read_csv(path)?;
        if scores.n_nodes() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: scores.n_nodes(),
            });
        }
        let binary = binarize(&scores, tau, directedness)?;
        return Ok((scores, binary));
    }
    let el = load_edge_list(path, directedness)?;
    let a = el.adjacency;
    if a.n_nodes() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.n_nodes(),
        });
    }
    if el.node_ids.iter().enumerate().any(|(i, &id)| id != i as u64) {
        return Err(Error::data(format!(
            "{}: node ids must be 0..N to align with the truth",
            path.display()
        )));
    }
    let dense = (0..n * n)
        .map(|x| if a.get(x / n, x % n) { 1.0 } else { 0.0 })
        .collect();
    Ok((EdgeScoreMatrix::from_dense(n, dense)?, a))
}

/// Compare `cfg.truth` with `cfg.estimate`; writes `evaluation.csv` to `cfg.out`.
pub fn cmd_evaluate(cfg: &RunConfig) -> Result<MetricsReport> {
    if !(cfg.tau > 0.0 && cfg.tau < 1.0) {
        return Err(Error::param(format!("tau must lie in (0, 1), got {}", cfg.tau)));
    }
    let truth_path = cfg.truth.as_ref().ok_or_else(|| Error::param("evaluate needs truth=..."))?;
    let est_path = cfg.estimate.as_ref().ok_or_else(|| Error::param("evaluate needs estimate=..."))?;
    let truth = load_edge_list(truth_path, cfg.directedness())?.adjacency;
    let (scores, binary) = load_estimate(est_path, truth.n_nodes(), cfg.tau, cfg.directedness())?;
    let tag = est_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let m = metrics::evaluate(&truth, &scores, &binary, None, &tag)?;
    create_dir(&cfg.out)?;
    write(&cfg.out.join("evaluation.csv"), &evaluation_csv(&m))?;
    Ok(m)
}

/// Methods of the empirical comparison when none are configured.
pub const EMPIRICAL_METHODS: [Method; 4] = [Method::Lasso, Method::PLasso, Method::PSignalLasso, Method::Palms];

/// Run the configured suite. `table2`..`table4` and `custom` write
/// `comparison.csv`, `raw.csv` and SVG figures; `table5` reconstructs the
/// `network` edge list and writes `table5.csv`.
pub fn cmd_bench(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let bc = cfg.bench_config()?;
    cfg.validate_simulation()?;
    let mut written = Vec::new();
    if cfg.suite == "table5" {
        let p = cfg
            .network
            .as_ref()
            .ok_or_else(|| Error::param("suite table5 needs network=<edge list>"))?;
        if cfg.methods.is_empty() {
            return Err(Error::param("suite table5 has no methods"));
        }
        let el = load_edge_list(p, cfg.directedness())?;
        let name = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let rows = bench::run_empirical(&name, &el.adjacency, &cfg.methods, cfg.rounds, cfg.noise_std, cfg.seed, &bc)?;
        create_dir(&cfg.out)?;
        let path = cfg.out.join("table5.csv");
        write(&path, &bench::empirical_csv(&rows))?;
        written.push(path);
    } else {
        let suite = match cfg.suite.as_str() {
            "custom" => Suite::custom("custom", &cfg.methods, &[cfg.scenario()], cfg.k),
            name => Suite::named(name)?,
        };
        suite.validate()?;
        let cmp = bench::run_comparison(&suite, cfg.reps, cfg.seed, &bc)?;
        create_dir(&cfg.out)?;
        let path = cfg.out.join("comparison.csv");
        write(&path, &cmp.to_csv())?;
        written.push(path);
        let path = cfg.out.join("raw.csv");
        write(&path, &cmp.raw_csv(&suite))?;
        written.push(path);
        written.extend(cmp.write_figures(&cfg.out)?);
    }
    write_manifest(cfg)?;
    written.push(cfg.out.join("manifest"));
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips() {
        let mut cfg = RunConfig::default();
        cfg.set("lambda", "0.3").unwrap();
        cfg.set("network", "some/file.txt").unwrap();
        cfg.set("methods", "palms,p_lasso").unwrap();
        cfg.set("density", "0.1").unwrap();
        let back = RunConfig::parse(&cfg.to_manifest(), Path::new("manifest")).unwrap();
        assert_eq!(back, cfg);
        let default = RunConfig::default();
        assert_eq!(RunConfig::parse(&default.to_manifest(), Path::new("m")).unwrap(), default);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::parse("colour=blue\n", Path::new("c")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(RunConfig::parse("k=five\n", Path::new("c")).is_err());
        assert!(RunConfig::parse("method=ridge\n", Path::new("c")).is_err());
    }

    #[test]
    fn overrides_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        fs::write(&p, "# settings\nk=3\nm=2\n").unwrap();
        let cfg = RunConfig::load(Some(&p), &[("k".into(), "4".into())]).unwrap();
        assert_eq!((cfg.k, cfg.m), (4, 2));
    }

    #[test]
    fn non_distributed_methods_force_one_group() {
        let mut cfg = RunConfig::default();
        cfg.set("method", "alms").unwrap();
        let rc = cfg.recon_config().unwrap();
        assert_eq!((rc.n_groups, rc.n_splits), (1, 1));
    }

    #[test]
    fn invalid_values_fail_before_work() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = RunConfig::default();
        cfg.out = dir.path().join("never");
        cfg.tau = 1.5;
        assert_eq!(cmd_bench(&cfg).unwrap_err().exit_code(), 2);
        assert!(!cfg.out.exists());
    }
}
