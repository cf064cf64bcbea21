//! Command-line front end: `dist`, `cluster`, `synth` and `demo-figure1`.
//!
//! Every command is also callable as a function so that the examples and
//! tests can drive the same code paths without spawning a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::ensemble::{pairwise_distances, Ensemble, OtMethod, PairwiseParams, PairwiseResult};
use crate::error::{Error, Result};
use crate::eval::{ari, cluster_with, frobenius_distance, ClusterAlgorithm, ClusterReport, Partition};
use crate::graph::DEFAULT_ALPHA;
use crate::io::{self, Manifest, ManifestEntry};
use crate::metrics::{HittingSolver, LyapunovMethod, MetricOptions, NodeMetric, RegularizationPolicy, DEFAULT_BETA};
use crate::ot::GwOptions;
use crate::synth::{dsbm_ensemble, flip_triple, DsbmSpec, FlipTriple, WeightDist};

#[derive(Debug, Parser)]
#[command(name = "digraph-ot", version, about = "Optimal-transport distances between directed weighted graphs")]
pub struct Cli {
    /// Worker threads for pairwise computations (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pairwise distance matrix for the graphs listed in a manifest.
    Dist(DistArgs),
    /// Cluster one or more distance matrices and score them against labels.
    Cluster(ClusterArgs),
    /// Write a synthetic ensemble (edge lists and a manifest).
    Synth(SynthArgs),
    /// Distances between a cycle of cycles and its local and global flips.
    #[command(name = "demo-figure1")]
    DemoFigure1(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Wasserstein,
    Gw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Grd,
    Htd,
}

#[derive(Debug, Clone, Args)]
pub struct OtArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Wasserstein)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = MetricArg::Grd)]
    pub metric: MetricArg,
    /// Stationary weighting exponent of the hitting-time distance.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    pub beta: f64,
    /// Teleportation weight, used when a graph lacks the reachability the
    /// metric needs.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Regularize every graph, not only those that need it.
    #[arg(long)]
    pub force_alpha: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub gw_starts: usize,
    #[arg(long, default_value_t = 1000)]
    pub gw_max_iter: usize,
    #[arg(long, value_enum, default_value_t = LyapunovArg::Schur)]
    pub lyapunov: LyapunovArg,
    #[arg(long, value_enum, default_value_t = HittingArg::Auto)]
    pub hitting: HittingArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LyapunovArg {
    Schur,
    Kronecker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HittingArg {
    Auto,
    Absorbing,
    Fundamental,
}

#[derive(Debug, Clone, Args)]
pub struct DistArgs {
    /// Ensemble manifest (JSON).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output CSV; metadata goes to `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub ot: OtArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    Pam,
    MdsKmeans,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    /// Distance matrix CSV written by `dist`; repeat for a comparison table.
    #[arg(long = "distances", required = true)]
    pub distances: Vec<PathBuf>,
    /// Manifest whose `label` fields hold the true classes.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Pam)]
    pub algorithm: AlgorithmArg,
    /// Results JSON (an object for one input, an array for several).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// ARI table as CSV.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    /// Generator spec (JSON).
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Seed for classes whose spec does not set one.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 4)]
    pub n_cycles: usize,
    #[arg(long, default_value_t = 4)]
    pub cycle_len: usize,
    /// Also write the three graphs, a manifest and the table here.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub ot: OtArgs,
}

/// Validated settings shared by the commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: OtMethod,
    pub metric: NodeMetric,
    pub alpha: f64,
    pub force_alpha: bool,
    pub seed: u64,
    pub gw_starts: usize,
    pub gw_max_iter: usize,
    pub lyapunov: LyapunovMethod,
    pub hitting: HittingSolver,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method: OtMethod::Wasserstein,
            metric: NodeMetric::Grd,
            alpha: DEFAULT_ALPHA,
            force_alpha: false,
            seed: 0,
            gw_starts: 4,
            gw_max_iter: 1000,
            lyapunov: LyapunovMethod::Schur,
            hitting: HittingSolver::Auto,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::invalid("alpha", format!("{} is not in (0, 1]", self.alpha)));
        }
        if let NodeMetric::Htd { beta } = self.metric {
            if !beta.is_finite() {
                return Err(Error::invalid("beta", format!("{beta} is not finite")));
            }
        }
        if self.gw_starts == 0 {
            return Err(Error::invalid("gw-starts", "at least one start is required"));
        }
        if self.gw_max_iter == 0 {
            return Err(Error::invalid("gw-max-iter", "at least one iteration is required"));
        }
        Ok(())
    }

    pub fn params(&self) -> PairwiseParams {
        PairwiseParams {
            metric_opts: MetricOptions {
                regularization: RegularizationPolicy {
                    alpha: self.alpha,
                    force: self.force_alpha,
                },
                lyapunov: self.lyapunov,
                hitting: self.hitting,
            },
            gw: GwOptions {
                max_iter: self.gw_max_iter,
                n_starts: self.gw_starts,
                seed: self.seed,
                ..GwOptions::default()
            },
        }
    }
}

impl From<&OtArgs> for RunConfig {
    fn from(a: &OtArgs) -> Self {
        Self {
            method: match a.method {
                MethodArg::Wasserstein => OtMethod::Wasserstein,
                MethodArg::Gw => OtMethod::GromovWasserstein,
            },
            metric: match a.metric {
                MetricArg::Grd => NodeMetric::Grd,
                MetricArg::Htd => NodeMetric::Htd { beta: a.beta },
            },
            alpha: a.alpha,
            force_alpha: a.force_alpha,
            seed: a.seed,
            gw_starts: a.gw_starts,
            gw_max_iter: a.gw_max_iter,
            lyapunov: match a.lyapunov {
                LyapunovArg::Schur => LyapunovMethod::Schur,
                LyapunovArg::Kronecker => LyapunovMethod::Kronecker,
            },
            hitting: match a.hitting {
                HittingArg::Auto => HittingSolver::Auto,
                HittingArg::Absorbing => HittingSolver::Absorbing,
                HittingArg::Fundamental => HittingSolver::Fundamental,
            },
        }
    }
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn base_dir(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new(""))
}

/// Loads the manifest's graphs as an ensemble.
pub fn load_ensemble(manifest: &Path) -> Result<(Manifest, Ensemble)> {
    let m = Manifest::load(manifest)?;
    let graphs = m.load_graphs(base_dir(manifest))?;
    let ensemble = Ensemble::new(m.ids(), graphs)?;
    Ok((m, ensemble))
}

/// Computes and writes the pairwise distance matrix (`out`) and its
/// metadata (`out.json`).
pub fn cmd_dist(manifest: &Path, out: &Path, cfg: &RunConfig) -> Result<PairwiseResult> {
    cfg.validate()?;
    let (_, ensemble) = load_ensemble(manifest)?;
    let result = pairwise_distances(cfg.method, cfg.metric, &ensemble, &cfg.params())?;
    io::save_labeled_matrix(&result.ids, &result.values, out)?;
    io::write_json(&result.meta, &sidecar_path(out))?;
    Ok(result)
}

fn describe_matrix(path: &Path) -> (String, Option<String>) {
    let fallback = || {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        (stem.unwrap_or_else(|| path.display().to_string()), None)
    };
    let Ok(text) = std::fs::read_to_string(sidecar_path(path)) else {
        return fallback();
    };
    let Ok(value) = serde_json::from_str::<serde_json::Value>(&text) else {
        return fallback();
    };
    let method = serde_json::from_value::<OtMethod>(value["method"].clone());
    let metric = serde_json::from_value::<NodeMetric>(value["metric"].clone());
    match (method, metric) {
        (Ok(method), Ok(metric)) => (method.to_string(), Some(metric.name())),
        _ => fallback(),
    }
}

/// Clusters each distance matrix and, when `manifest` carries labels,
/// scores the partition by ARI. Rows and columns are matched to manifest
/// entries by id.
pub fn cmd_cluster(
    distances: &[PathBuf],
    manifest: Option<&Path>,
    k: usize,
    seed: u64,
    restarts: usize,
    algorithm: ClusterAlgorithm,
) -> Result<Vec<ClusterReport>> {
    let truth = match manifest {
        Some(path) => {
            let m = Manifest::load(path)?;
            let labels = m
                .labels()
                .ok_or_else(|| Error::invalid("manifest", format!("{}: every entry needs a label", path.display())))?;
            Some((m.ids(), labels))
        }
        None => None,
    };
    let mut reports = Vec::new();
    for path in distances {
        let (ids, d) = io::load_labeled_matrix(path)?;
        let clustering = cluster_with(&d, k, seed, restarts, algorithm)?;
        let score = match &truth {
            Some((truth_ids, names)) => {
                let ordered = ids
                    .iter()
                    .map(|id| {
                        truth_ids
                            .iter()
                            .position(|t| t == id)
                            .map(|i| names[i].clone())
                            .ok_or_else(|| Error::invalid("manifest", format!("no entry for graph `{id}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(ari(&clustering.partition, &Partition::from_names(&ordered))?)
            }
            None => None,
        };
        let (method, metric) = describe_matrix(path);
        reports.push(ClusterReport {
            method,
            metric,
            k,
            seed,
            ari: score,
            labels: clustering.partition.labels,
            medoids: clustering.medoids,
        });
    }
    Ok(reports)
}

fn column_name(r: &ClusterReport) -> String {
    match &r.metric {
        Some(m) => format!("{}({m})", r.method),
        None => r.method.clone(),
    }
}

/// One row of ARI values with one column per method.
pub fn ari_table(reports: &[ClusterReport]) -> (Vec<String>, Vec<Option<f64>>) {
    (reports.iter().map(column_name).collect(), reports.iter().map(|r| r.ari).collect())
}

fn render_ari_table(reports: &[ClusterReport]) -> String {
    let (names, values) = ari_table(reports);
    let cells: Vec<String> = values
        .iter()
        .map(|v| v.map_or("-".to_string(), |v| format!("{v:.6}")))
        .collect();
    let widths: Vec<usize> = names.iter().zip(&cells).map(|(n, c)| n.len().max(c.len())).collect();
    let mut out = String::new();
    let _ = write!(out, "{:<6}", "");
    for (n, w) in names.iter().zip(&widths) {
        let _ = write!(out, "  {n:>w$}");
    }
    let _ = write!(out, "\n{:<6}", "ARI");
    for (c, w) in cells.iter().zip(&widths) {
        let _ = write!(out, "  {c:>w$}");
    }
    out.push('\n');
    out
}

fn write_ari_csv(reports: &[ClusterReport], path: &Path) -> Result<()> {
    let (names, values) = ari_table(reports);
    let mut text = String::from("measure");
    for n in &names {
        text.push(',');
        text.push_str(n);
    }
    text.push_str("\nARI");
    for v in values {
        text.push(',');
        if let Some(v) = v {
            text.push_str(&v.to_string());
        }
    }
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Generator input for `synth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SynthSpec {
    CycleOfCycles {
        #[serde(default = "four")]
        n_cycles: usize,
        #[serde(default = "four")]
        cycle_len: usize,
    },
    Dsbm { classes: Vec<DsbmClass> },
}

fn four() -> usize {
    4
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DsbmClass {
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub block_sizes: Vec<usize>,
    pub p_intra: f64,
    pub p_inter: f64,
    pub direction_bias: f64,
    #[serde(default = "unit_weights")]
    pub weight_dist: WeightDist,
    #[serde(default = "yes")]
    pub intra_reciprocal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn unit_weights() -> WeightDist {
    WeightDist::Unit
}

impl DsbmClass {
    pub fn to_spec(&self, default_seed: u64) -> DsbmSpec {
        DsbmSpec {
            block_sizes: self.block_sizes.clone(),
            p_intra: self.p_intra,
            p_inter: self.p_inter,
            direction_bias: self.direction_bias,
            weight_dist: self.weight_dist,
            intra_reciprocal: self.intra_reciprocal,
            seed: self.seed.unwrap_or(default_seed),
        }
    }
}

pub fn load_synth_spec(path: &Path) -> Result<SynthSpec> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::invalid("synth spec", format!("{}: {e}", path.display())))
}

/// Writes the generated edge lists and `manifest.json` into `out_dir`.
pub fn cmd_synth(spec: &SynthSpec, out_dir: &Path, seed: u64) -> Result<Manifest> {
    let mut entries = Vec::new();
    let mut write = |id: String, label: Option<String>, graph: &crate::DiGraph| -> Result<()> {
        let file = format!("{id}.csv");
        io::save_edge_list(graph, &out_dir.join(&file))?;
        entries.push(ManifestEntry { id, path: file, label });
        Ok(())
    };
    match spec {
        SynthSpec::CycleOfCycles { n_cycles, cycle_len } => {
            let t = flip_triple(*n_cycles, *cycle_len)?;
            for (id, g) in FlipTriple::ids().iter().zip(t.graphs()) {
                write(id.to_string(), None, &g)?;
            }
        }
        SynthSpec::Dsbm { classes } => {
            if classes.is_empty() {
                return Err(Error::invalid("classes", "at least one class is required"));
            }
            let specs: Vec<(DsbmSpec, usize)> = classes.iter().map(|c| (c.to_spec(seed), c.count)).collect();
            let (graphs, labels) = dsbm_ensemble(&specs)?;
            let width = graphs.len().saturating_sub(1).to_string().len().max(2);
            for (t, (g, l)) in graphs.iter().zip(labels).enumerate() {
                let label = classes[l].label.clone().unwrap_or_else(|| format!("class{l}"));
                write(format!("g{t:0width$}"), Some(label), g)?;
            }
        }
    }
    let manifest = Manifest { graphs: entries };
    manifest.save(&out_dir.join("manifest.json"))?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub method: String,
    pub metric: Option<String>,
    pub local: f64,
    pub global: f64,
    /// `|global - local| / max(local, global)`.
    pub relative_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Table {
    pub local_edge: (String, String),
    pub global_edge: (String, String),
    /// Whether `A + A^T` coincides for all three graphs.
    pub undirected_identical: bool,
    pub rows: Vec<Figure1Row>,
}

fn row(method: String, metric: Option<String>, local: f64, global: f64) -> Figure1Row {
    let scale = local.abs().max(global.abs());
    Figure1Row {
        method,
        metric,
        local,
        global,
        relative_difference: if scale > 0.0 { (global - local).abs() / scale } else { 0.0 },
    }
}

/// Distances from the original ring of cycles to its local and global
/// flips: Frobenius, then every method and metric combination.
pub fn figure1_table(n_cycles: usize, cycle_len: usize, cfg: &RunConfig) -> Result<(FlipTriple, Figure1Table)> {
    cfg.validate()?;
    let t = flip_triple(n_cycles, cycle_len)?;
    let ids = FlipTriple::ids().iter().map(|s| s.to_string()).collect();
    let ensemble = Ensemble::new(ids, t.graphs())?;
    let mut rows = vec![row(
        "Frobenius".to_string(),
        None,
        frobenius_distance(&t.original, &t.local),
        frobenius_distance(&t.original, &t.global),
    )];
    let beta = match cfg.metric {
        NodeMetric::Htd { beta } => beta,
        NodeMetric::Grd => DEFAULT_BETA,
    };
    for method in [OtMethod::Wasserstein, OtMethod::GromovWasserstein] {
        for metric in [NodeMetric::Grd, NodeMetric::Htd { beta }] {
            let r = pairwise_distances(method, metric, &ensemble, &cfg.params())?;
            rows.push(row(method.to_string(), Some(metric.name()), r.values[(0, 1)], r.values[(0, 2)]));
        }
    }
    let sym = t.original.symmetrized();
    let undirected_identical = t.local.symmetrized() == sym && t.global.symmetrized() == sym;
    let table = Figure1Table {
        local_edge: t.local_edge.clone(),
        global_edge: t.global_edge.clone(),
        undirected_identical,
        rows,
    };
    Ok((t, table))
}

pub fn render_figure1(table: &Figure1Table) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "local flip {} -> {}, global flip {} -> {}",
        table.local_edge.0, table.local_edge.1, table.global_edge.0, table.global_edge.1
    );
    let _ = writeln!(out, "{:<20} {:>12} {:>12} {:>10}", "distance", "local", "global", "rel.diff");
    for r in &table.rows {
        let name = match &r.metric {
            Some(m) => format!("{}({m})", r.method),
            None => r.method.clone(),
        };
        let _ = writeln!(
            out,
            "{:<20} {:>12.6} {:>12.6} {:>9.2}%",
            name,
            r.local,
            r.global,
            100.0 * r.relative_difference
        );
    }
    let _ = writeln!(out, "undirected views identical: {}", table.undirected_identical);
    out
}

fn write_figure1(dir: &Path, t: &FlipTriple, table: &Figure1Table) -> Result<()> {
    let mut entries = Vec::new();
    for (id, g) in FlipTriple::ids().iter().zip(t.graphs()) {
        let file = format!("{id}.csv");
        io::save_edge_list(&g, &dir.join(&file))?;
        entries.push(ManifestEntry {
            id: id.to_string(),
            path: file,
            label: None,
        });
    }
    Manifest { graphs: entries }.save(&dir.join("manifest.json"))?;
    let mut csv = String::from("method,metric,local,global,relative_difference\n");
    for r in &table.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            r.method,
            r.metric.as_deref().unwrap_or(""),
            r.local,
            r.global,
            r.relative_difference
        );
    }
    let path = dir.join("figure1.csv");
    std::fs::write(&path, csv).map_err(|source| Error::File { path, source })
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dist(a) => {
            let cfg = RunConfig::from(&a.ot);
            let r = cmd_dist(&a.manifest, &a.out, &cfg)?;
            if !r.meta.non_converged_pairs.is_empty() {
                eprintln!("warning: {} pairs did not converge", r.meta.non_converged_pairs.len());
            }
            println!("wrote {} ({} graphs)", a.out.display(), r.ids.len());
        }
        Command::Cluster(a) => {
            let algorithm = match a.algorithm {
                AlgorithmArg::Pam => ClusterAlgorithm::Pam,
                AlgorithmArg::MdsKmeans => ClusterAlgorithm::MdsKmeans,
            };
            let reports = cmd_cluster(&a.distances, a.manifest.as_deref(), a.k, a.seed, a.restarts, algorithm)?;
            print!("{}", render_ari_table(&reports));
            if let Some(out) = &a.out {
                if let [single] = reports.as_slice() {
                    io::write_json(single, out)?;
                } else {
                    io::write_json(&reports, out)?;
                }
            }
            if let Some(path) = &a.table {
                write_ari_csv(&reports, path)?;
            }
        }
        Command::Synth(a) => {
            let spec = load_synth_spec(&a.spec)?;
            let m = cmd_synth(&spec, &a.out_dir, a.seed)?;
            println!("wrote {} graphs to {}", m.graphs.len(), a.out_dir.display());
        }
        Command::DemoFigure1(a) => {
            let cfg = RunConfig::from(&a.ot);
            let (t, table) = figure1_table(a.n_cycles, a.cycle_len, &cfg)?;
            print!("{}", render_figure1(&table));
            if let Some(dir) = &a.out_dir {
                write_figure1(dir, &t, &table)?;
            }
        }
    }
    Ok(())
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: invalid jobs: at least one worker is required");
            return 2;
        }
        pool = pool.num_threads(jobs);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
