use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{metric_values, CsvRow, TrajectoryRow};
use super::{geo_mean, normalize, BenchError, Baselines, NormalizedRecord, RawRecord};
use crate::dist::{run_protocol_with_orders, Mode, ProtocolConfig, ProtocolError};
use crate::graph::{block_partition, build_rank_views, Graph, Partition};
use crate::metrics::RunMetrics;
use crate::recolor::{
    recolor_iterations, PermutationKind, PermutationSchedule, RecolorConfig, RecolorError, RecolorFlavor,
};
use crate::seq::{check_validity, local_order, Coloring, OrderingKind, SelectionKind};
use crate::Color;

/// Metrics normalized against the single-rank Natural run.
pub const NORMALIZED_METRICS: [&str; 2] = ["num_colors", "ticks"];

#[derive(Clone, Debug)]
pub struct BenchGraph {
    pub name: String,
    pub graph: Graph,
}

/// One point of the parameter space: rank count, coloring protocol and
/// the recoloring that follows it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub ranks: usize,
    pub protocol: ProtocolConfig,
    pub recolor_iterations: usize,
    pub schedule: PermutationSchedule,
    pub recolor_selection: SelectionKind,
    pub piggyback: bool,
    pub recolor_async: bool,
}

impl ExperimentConfig {
    fn preset(ranks: usize, selection: SelectionKind, iterations: usize) -> Self {
        Self {
            ranks,
            protocol: ProtocolConfig {
                ordering: OrderingKind::InternalFirst,
                selection,
                mode: Mode::Synchronous,
                ..Default::default()
            },
            recolor_iterations: iterations,
            schedule: PermutationSchedule::fixed(PermutationKind::NonDecreasing),
            recolor_selection: SelectionKind::FirstFit,
            piggyback: false,
            recolor_async: false,
        }
    }

    /// First Fit, internal vertices first, synchronous, no recoloring.
    pub fn speed(ranks: usize) -> Self {
        Self::preset(ranks, SelectionKind::FirstFit, 0)
    }

    /// Random-`x` Fit, internal vertices first, synchronous, one ND
    /// recoloring iteration.
    pub fn quality(ranks: usize, x: Color) -> Self {
        Self::preset(ranks, SelectionKind::RandomX(x), 1)
    }

    /// Sequential Natural-order First Fit, the normalization reference.
    pub fn baseline() -> Self {
        Self {
            protocol: ProtocolConfig::default(),
            ..Self::speed(1)
        }
    }

    /// Compact name: selection, ordering, mode, permutation, iterations,
    /// then rank count, e.g. `R5IsND1-p8`.
    pub fn label(&self) -> String {
        let mode = match self.protocol.mode {
            Mode::Synchronous => 's',
            Mode::Asynchronous => 'a',
        };
        let mut perm = self.schedule.base.short_name().to_string();
        match self.schedule.injection {
            crate::recolor::RandomInjection::Never => {}
            crate::recolor::RandomInjection::Every(x) => perm.push_str(&format!("r{x}")),
            crate::recolor::RandomInjection::PowersOfTwo => perm.push_str("r2^i"),
        }
        let mut label = format!(
            "{}{}{}{}{}-p{}",
            self.protocol.selection.short_name(),
            self.protocol.ordering.short_name(),
            mode,
            perm,
            self.recolor_iterations,
            self.ranks
        );
        if self.recolor_iterations > 0 && self.recolor_async {
            label.push_str("-arc");
        }
        if self.piggyback {
            label.push_str("-pb");
        }
        label
    }
}

/// Colors `g` under `cfg` with the given seed on a block partition, then
/// recolors. Rank count is capped at the vertex count.
pub fn run_cell(g: &Graph, cfg: &ExperimentConfig, seed: u64) -> Result<(Coloring, RunMetrics), RecolorError> {
    let ranks = cfg.ranks.clamp(1, g.num_vertices().max(1));
    let part = block_partition(g, ranks).map_err(ProtocolError::from)?;
    run_partitioned(g, &part, cfg, seed)
}

/// Like [`run_cell`] with an explicit partition; `cfg.ranks` is ignored.
/// The trajectory starts with the protocol's color count.
pub fn run_partitioned(
    g: &Graph,
    part: &Partition,
    cfg: &ExperimentConfig,
    seed: u64,
) -> Result<(Coloring, RunMetrics), RecolorError> {
    let views = build_rank_views(g, part).map_err(ProtocolError::from)?;
    let protocol = ProtocolConfig {
        seed,
        ..cfg.protocol.clone()
    };
    let orders = views
        .iter()
        .map(|v| local_order(v, protocol.ordering))
        .collect();
    let (coloring, mut metrics, views) = run_protocol_with_orders(g, views, &protocol, orders)?;
    metrics.trajectory = vec![coloring.num_colors()];
    if cfg.recolor_iterations == 0 {
        return Ok((coloring, metrics));
    }

    let rc = RecolorConfig {
        schedule: cfg.schedule,
        iterations: cfg.recolor_iterations,
        selection: cfg.recolor_selection,
        piggyback: cfg.piggyback,
        seed,
        flavor: if cfg.recolor_async {
            RecolorFlavor::Asynchronous(protocol.clone())
        } else {
            RecolorFlavor::Synchronous
        },
    };
    let (recolored, rc_metrics, _) = recolor_iterations(g, views, &coloring, &rc)?;
    let bad = check_validity(g, &recolored)
        .map_err(|_| ProtocolError::InvalidResult(0))?
        .len();
    if bad > 0 {
        return Err(ProtocolError::InvalidResult(bad).into());
    }
    metrics.absorb(&rc_metrics);
    metrics.trajectory = rc_metrics.trajectory;
    metrics.num_colors = recolored.num_colors();
    Ok((recolored, metrics))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    pub result: Result<RunMetrics, String>,
}

/// All seeds of one (graph, config) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellResult {
    pub graph: String,
    pub config: String,
    pub runs: Vec<SeedRun>,
}

impl CellResult {
    /// First failure among the seeds, if any.
    pub fn error(&self) -> Option<&str> {
        self.runs.iter().find_map(|r| r.result.as_ref().err().map(String::as_str))
    }

    /// Arithmetic mean over seeds of every metric column, or `None` when a
    /// seed failed.
    pub fn means(&self) -> Option<[f64; 9]> {
        if self.error().is_some() || self.runs.is_empty() {
            return None;
        }
        let mut sums = [0f64; 9];
        for run in &self.runs {
            let values = metric_values(run.result.as_ref().unwrap());
            for (s, v) in sums.iter_mut().zip(values) {
                *s += v as f64;
            }
        }
        Some(sums.map(|s| s / self.runs.len() as f64))
    }

    pub fn mean(&self, metric: &str) -> Option<f64> {
        let i = super::METRICS_HEADER[3..].iter().position(|&h| h == metric)?;
        self.means().map(|m| m[i])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    /// One entry per (graph, config) cell, graphs outer.
    pub cells: Vec<CellResult>,
    pub baselines: Baselines<f64>,
}

impl SweepTable {
    /// Per-seed rows, plus a `mean` row for cells with several seeds.
    pub fn csv_rows(&self) -> Vec<CsvRow> {
        let mut rows = Vec::new();
        for cell in &self.cells {
            for run in &cell.runs {
                rows.push(match &run.result {
                    Ok(m) => CsvRow::from_metrics(&cell.graph, &cell.config, run.seed, m),
                    Err(e) => CsvRow::failed(&cell.graph, &cell.config, run.seed.to_string(), e.clone()),
                });
            }
            if cell.runs.len() > 1 {
                rows.push(match cell.means() {
                    Some(means) => CsvRow::mean(&cell.graph, &cell.config, means),
                    None => CsvRow::failed(
                        &cell.graph,
                        &cell.config,
                        "mean".into(),
                        cell.error().unwrap_or("no runs").to_string(),
                    ),
                });
            }
        }
        rows
    }

    pub fn trajectory_rows(&self) -> Vec<TrajectoryRow> {
        self.cells
            .iter()
            .flat_map(|cell| {
                cell.runs.iter().flat_map(move |run| match &run.result {
                    Ok(m) => TrajectoryRow::from_metrics(&cell.graph, &cell.config, run.seed, m),
                    Err(_) => Vec::new(),
                })
            })
            .collect()
    }

    /// Seed means of `metric` divided by the graph's baseline, for every
    /// cell without errors.
    pub fn normalized(&self, metric: &str) -> Result<Vec<NormalizedRecord<f64>>, BenchError> {
        let records: Vec<RawRecord<f64>> = self
            .cells
            .iter()
            .filter_map(|cell| {
                cell.mean(metric).map(|value| RawRecord {
                    graph: cell.graph.clone(),
                    config: cell.config.clone(),
                    metric: metric.to_string(),
                    value,
                })
            })
            .collect();
        normalize(&records, &self.baselines)
    }

    /// Geometric mean across graphs of the normalized `metric`, per config.
    pub fn geo_mean_by_config(&self, metric: &str) -> Result<Vec<(String, f64)>, BenchError> {
        let normalized = self.normalized(metric)?;
        let mut configs: Vec<String> = Vec::new();
        for r in &normalized {
            if !configs.contains(&r.config) {
                configs.push(r.config.clone());
            }
        }
        configs
            .into_iter()
            .map(|c| {
                let values: Vec<f64> = normalized
                    .iter()
                    .filter(|r| r.config == c)
                    .map(|r| r.normalized)
                    .collect();
                geo_mean(&values).map(|g| (c, g))
            })
            .collect()
    }
}

/// Runs every (graph, config, seed) combination in parallel. Failed runs
/// are kept as annotated rows.
pub fn sweep(graphs: &[BenchGraph], configs: &[ExperimentConfig], seeds: &[u64]) -> Result<SweepTable, BenchError> {
    if graphs.is_empty() || configs.is_empty() || seeds.is_empty() {
        return Err(BenchError::EmptyGrid);
    }
    let baselines: Baselines<f64> = graphs
        .par_iter()
        .map(|bg| {
            let values = run_cell(&bg.graph, &ExperimentConfig::baseline(), 0)
                .map(|(_, m)| metric_values(&m))
                .unwrap_or([0; 9]);
            NORMALIZED_METRICS
                .iter()
                .map(|&metric| {
                    let i = super::METRICS_HEADER[3..].iter().position(|&h| h == metric).unwrap();
                    ((bg.name.clone(), metric.to_string()), values[i] as f64)
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect();

    let jobs: Vec<(usize, usize, u64)> = (0..graphs.len())
        .flat_map(|gi| (0..configs.len()).flat_map(move |ci| seeds.iter().map(move |&s| (gi, ci, s))))
        .collect();
    let results: Vec<Result<RunMetrics, String>> = jobs
        .par_iter()
        .map(|&(gi, ci, seed)| {
            run_cell(&graphs[gi].graph, &configs[ci], seed)
                .map(|(_, m)| m)
                .map_err(|e| e.to_string())
        })
        .collect();

    let mut cells = Vec::with_capacity(graphs.len() * configs.len());
    let mut results = results.into_iter();
    for bg in graphs {
        for cfg in configs {
            let runs = seeds
                .iter()
                .map(|&seed| SeedRun {
                    seed,
                    result: results.next().unwrap(),
                })
                .collect();
            cells.push(CellResult {
                graph: bg.name.clone(),
                config: cfg.label(),
                runs,
            });
        }
    }
    Ok(SweepTable { cells, baselines })
}
