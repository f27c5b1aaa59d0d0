//! Monte Carlo sweep over a (precision, recall) grid: how many of the top-k
//! central nodes of the ground truth survive in its noisy reconstruction.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::centrality::{compute, Metric};
use crate::error::{param, Error, Result};
use crate::generate::{generate, GenSpec, LfrParams, Topology, TopologyKind};
use crate::graph::{from_edge_list, largest_connected_component, Graph};
use crate::overlap::{overlap, top_k, TopKSet};
use crate::perturb::{perturb, ErrorModel};
use crate::rng::derive_seed;

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySource {
    Generated(GenSpec),
    EdgeList { path: PathBuf, lcc: bool },
}

impl TopologySource {
    pub fn name(&self) -> String {
        match self {
            TopologySource::Generated(spec) => spec.topology.kind().to_string(),
            TopologySource::EdgeList { path, .. } => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into()),
        }
    }

    pub fn load(&self) -> Result<Graph> {
        match self {
            TopologySource::Generated(spec) => Ok(generate(spec)?.graph),
            TopologySource::EdgeList { path, lcc } => {
                let text = std::fs::read_to_string(path)?;
                let (g, _) = from_edge_list(&text)?;
                Ok(if *lcc { largest_connected_component(&g) } else { g })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub name: String,
    pub precision: f64,
    pub recall: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub source: TopologySource,
    pub metric: Metric,
    pub k: usize,
    pub precision_grid: Vec<f64>,
    pub recall_grid: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub markers: Vec<Marker>,
}

/// 0.30, 0.35, ..., 1.00
pub fn default_grid() -> Vec<f64> {
    (0..=14).map(|i| (30 + 5 * i) as f64 / 100.0).collect()
}

pub const DEFAULT_TRIALS: usize = 10;
pub const DEFAULT_K: usize = 20;

impl SweepConfig {
    pub fn new(source: TopologySource, metric: Metric, master_seed: u64) -> Self {
        SweepConfig {
            source,
            metric,
            k: DEFAULT_K,
            precision_grid: default_grid(),
            recall_grid: default_grid(),
            trials: DEFAULT_TRIALS,
            master_seed,
            markers: Vec::new(),
        }
    }

    /// `<topology>_<metric>`, used to name plot-data files.
    pub fn label(&self) -> String {
        format!("{}_{}", self.source.name(), self.metric)
    }

    pub fn validate(&self) -> Result<()> {
        let in_unit = |x: f64| x > 0.0 && x <= 1.0;
        if self.precision_grid.is_empty() || self.recall_grid.is_empty() {
            return Err(param("precision and recall grids must be nonempty"));
        }
        if let Some(x) = self
            .precision_grid
            .iter()
            .chain(&self.recall_grid)
            .find(|&&x| !in_unit(x))
        {
            return Err(param(format!("grid value {x} outside (0, 1]")));
        }
        for m in &self.markers {
            if !in_unit(m.precision) || !in_unit(m.recall) {
                return Err(param(format!("marker '{}' outside (0, 1]", m.name)));
            }
        }
        if self.trials == 0 {
            return Err(param("trials must be at least 1"));
        }
        if self.k == 0 {
            return Err(param("k must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub precision: f64,
    pub recall: f64,
    pub mean_overlap: f64,
    pub std_overlap: f64,
    pub trials: usize,
    pub marker: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub k: usize,
    pub rows: Vec<SweepRow>,
}

pub const SWEEP_CSV_HEADER: &str = "precision,recall,mean_overlap,std_overlap,trials,marker_name";

impl SweepTable {
    pub fn grid_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.marker.is_none())
    }

    pub fn marker_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.marker.is_some())
    }

    pub fn cell(&self, precision: f64, recall: f64) -> Option<&SweepRow> {
        self.grid_rows()
            .find(|r| r.precision == precision && r.recall == recall)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(SWEEP_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.precision,
                r.recall,
                r.mean_overlap,
                r.std_overlap,
                r.trials,
                r.marker.as_deref().unwrap_or("")
            );
        }
        out
    }

    /// Mean overlap as a matrix: one row per precision, one column per
    /// recall, ready for contouring.
    pub fn to_matrix_csv(&self) -> String {
        let mut precisions: Vec<f64> = self.grid_rows().map(|r| r.precision).collect();
        let mut recalls: Vec<f64> = self.grid_rows().map(|r| r.recall).collect();
        for v in [&mut precisions, &mut recalls] {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let mut out = String::from("precision\\recall");
        for r in &recalls {
            let _ = write!(out, ",{r}");
        }
        out.push('\n');
        for &p in &precisions {
            let _ = write!(out, "{p}");
            for &r in &recalls {
                match self.cell(p, r) {
                    Some(row) => {
                        let _ = write!(out, ",{}", row.mean_overlap);
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

struct Cell {
    precision: f64,
    recall: f64,
    marker: Option<String>,
}

fn mean_std(values: &[usize]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<usize>() as f64 / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values
        .iter()
        .map(|&v| (v as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    (mean, var.sqrt())
}

pub fn sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let truth = cfg.source.load()?;
    sweep_graph(&truth, cfg)
}

/// Run the sweep against an already-loaded ground truth.
///
/// Trial `t` of cell `c` (grid cells numbered row-major in sorted order,
/// markers after them) perturbs with seed `derive_seed(master, [c, t])`, so
/// the table does not depend on how work is scheduled.
pub fn sweep_graph(truth: &Graph, cfg: &SweepConfig) -> Result<SweepTable> {
    cfg.validate()?;
    let mut precisions = cfg.precision_grid.clone();
    let mut recalls = cfg.recall_grid.clone();
    for v in [&mut precisions, &mut recalls] {
        v.sort_by(f64::total_cmp);
        v.dedup();
    }
    let mut cells: Vec<Cell> = Vec::new();
    for &precision in &precisions {
        for &recall in &recalls {
            cells.push(Cell {
                precision,
                recall,
                marker: None,
            });
        }
    }
    cells.extend(cfg.markers.iter().map(|m| Cell {
        precision: m.precision,
        recall: m.recall,
        marker: Some(m.name.clone()),
    }));

    let reference = top_k(&compute(truth, cfg.metric)?, cfg.k)?;

    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..cfg.trials).map(move |t| (c, t)))
        .collect();
    let overlaps: Vec<usize> = jobs
        .par_iter()
        .map(|&(c, t)| {
            let cell = &cells[c];
            trial_overlap(truth, &reference, cfg, cell, c, t).map_err(|e| Error::Cell {
                precision: cell.precision,
                recall: cell.recall,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let rows = cells
        .into_iter()
        .zip(overlaps.chunks(cfg.trials))
        .map(|(cell, values)| {
            let (mean_overlap, std_overlap) = mean_std(values);
            SweepRow {
                precision: cell.precision,
                recall: cell.recall,
                mean_overlap,
                std_overlap,
                trials: values.len(),
                marker: cell.marker,
            }
        })
        .collect();
    Ok(SweepTable { k: cfg.k, rows })
}

fn trial_overlap(
    truth: &Graph,
    reference: &TopKSet,
    cfg: &SweepConfig,
    cell: &Cell,
    cell_index: usize,
    trial: usize,
) -> Result<usize> {
    let seed = derive_seed(cfg.master_seed, &[cell_index as u64, trial as u64]);
    let model = ErrorModel::new(cell.precision, cell.recall, seed)?;
    let noisy = perturb(truth, &model)?;
    let scores = compute(&noisy.graph, cfg.metric)?;
    overlap(reference, &top_k(&scores, cfg.k)?)
}

// ---------------------------------------------------------------------------
// config files

fn parse_list<T, F>(value: &str, f: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> Result<T>,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(f)
        .collect()
}

fn parse_f64(key: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| param(format!("{key}: '{s}' is not a number")))
}

fn parse_usize(key: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| param(format!("{key}: '{s}' is not a nonnegative integer")))
}

fn round_grid(x: f64) -> f64 {
    (x * 1e10).round() / 1e10
}

/// `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_grid(key: &str, value: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = value.split(':').collect();
    match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, s) = (
                parse_f64(key, start)?,
                parse_f64(key, stop)?,
                parse_f64(key, step)?,
            );
            if !(s > 0.0) || b < a {
                return Err(param(format!("{key}: bad range '{value}'")));
            }
            let count = ((b - a) / s + 1e-9).floor() as usize + 1;
            Ok((0..count).map(|i| round_grid(a + i as f64 * s)).collect())
        }
        [_] => parse_list(value, |s| parse_f64(key, s)),
        _ => Err(param(format!("{key}: expected start:stop:step or a list, got '{value}'"))),
    }
}

/// Parse a sweep config file. `topology`/`edges` and `metric` may list
/// several values; one [`SweepConfig`] is returned per combination, sources
/// first. `base_dir` resolves relative edge-list paths; `seed_override`
/// replaces the file's `seed`.
pub fn parse_sweep_config(
    text: &str,
    base_dir: &Path,
    seed_override: Option<u64>,
) -> Result<Vec<SweepConfig>> {
    let mut topologies: Vec<TopologyKind> = Vec::new();
    let mut edge_files: Vec<PathBuf> = Vec::new();
    let mut metrics: Vec<Metric> = Vec::new();
    let mut nodes = crate::generate::DEFAULT_NODES;
    let mut avg = crate::generate::DEFAULT_AVG_DEGREE;
    let mut m_attach: Option<usize> = None;
    let mut ring: Option<usize> = None;
    let mut beta = 0.1;
    let mut lfr = LfrParams::default();
    let mut graph_seed: Option<u64> = None;
    let mut lcc = true;
    let mut k = DEFAULT_K;
    let mut precision_grid = default_grid();
    let mut recall_grid = default_grid();
    let mut trials = DEFAULT_TRIALS;
    let mut seed: Option<u64> = None;
    let mut markers = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |e: Error| match e {
            Error::Parameter(m) => Error::Parse {
                line: idx + 1,
                message: m,
            },
            other => other,
        };
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: idx + 1,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let u64_of = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| param(format!("{key}: '{v}' is not an unsigned integer")))
        };
        let parsed: Result<()> = (|| {
            match key {
                "topology" => topologies = parse_list(value, str::parse)?,
                "edges" => {
                    edge_files = parse_list(value, |s| Ok(base_dir.join(s)))?;
                }
                "metric" => metrics = parse_list(value, str::parse)?,
                "nodes" => nodes = parse_usize(key, value)?,
                "avg_degree" => avg = parse_f64(key, value)?,
                "m_attach" => m_attach = Some(parse_usize(key, value)?),
                "ring" => ring = Some(parse_usize(key, value)?),
                "beta" => beta = parse_f64(key, value)?,
                "tau1" => lfr.tau1 = parse_f64(key, value)?,
                "tau2" => lfr.tau2 = parse_f64(key, value)?,
                "mu" => lfr.mu = parse_f64(key, value)?,
                "max_degree" => lfr.max_degree = parse_usize(key, value)?,
                "min_community" => lfr.min_community = parse_usize(key, value)?,
                "max_community" => lfr.max_community = parse_usize(key, value)?,
                "max_sweeps" => lfr.max_sweeps = parse_usize(key, value)?,
                "graph_seed" => graph_seed = Some(u64_of(value)?),
                "lcc" => {
                    lcc = value
                        .parse()
                        .map_err(|_| param(format!("lcc: '{value}' is not true/false")))?
                }
                "k" => k = parse_usize(key, value)?,
                "precision" => precision_grid = parse_grid(key, value)?,
                "recall" => recall_grid = parse_grid(key, value)?,
                "trials" => trials = parse_usize(key, value)?,
                "seed" => seed = Some(u64_of(value)?),
                "marker" => {
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    let [name, p, r] = parts.as_slice() else {
                        return Err(param(format!(
                            "marker: expected 'name, precision, recall', got '{value}'"
                        )));
                    };
                    markers.push(Marker {
                        name: name.to_string(),
                        precision: parse_f64(key, p)?,
                        recall: parse_f64(key, r)?,
                    });
                }
                other => return Err(param(format!("unknown key '{other}'"))),
            }
            Ok(())
        })();
        parsed.map_err(at)?;
    }

    let master_seed = seed_override
        .or(seed)
        .ok_or_else(|| param("sweep needs a seed (config 'seed' or --seed)"))?;
    let graph_seed = graph_seed.unwrap_or(master_seed);
    if metrics.is_empty() {
        return Err(param("config must set 'metric'"));
    }
    let mut sources = Vec::new();
    for kind in topologies {
        let mut spec = GenSpec::default_for(kind, nodes, avg, graph_seed);
        match &mut spec.topology {
            Topology::Ba { m_attach: m } => {
                if let Some(v) = m_attach {
                    *m = v;
                }
            }
            Topology::Ws { k_ring, beta: b } => {
                if let Some(v) = ring {
                    *k_ring = v;
                }
                *b = beta;
            }
            Topology::Lfr(p) => *p = lfr.clone(),
            Topology::Er => {}
        }
        spec.validate()?;
        sources.push(TopologySource::Generated(spec));
    }
    sources.extend(
        edge_files
            .into_iter()
            .map(|path| TopologySource::EdgeList { path, lcc }),
    );
    if sources.is_empty() {
        return Err(param("config must set 'topology' or 'edges'"));
    }

    let mut configs = Vec::new();
    for source in &sources {
        for &metric in &metrics {
            let cfg = SweepConfig {
                source: source.clone(),
                metric,
                k,
                precision_grid: precision_grid.clone(),
                recall_grid: recall_grid.clone(),
                trials,
                master_seed,
                markers: markers.clone(),
            };
            cfg.validate()?;
            configs.push(cfg);
        }
    }
    Ok(configs)
}
