use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::metrics::RunMetrics;

pub const METRICS_HEADER: [&str; 12] = [
    "graph",
    "config",
    "seed",
    "num_colors",
    "rounds",
    "conflicts",
    "msgs",
    "nonempty_msgs",
    "pairs",
    "bytes",
    "precomm_msgs",
    "ticks",
];

pub const TRAJECTORY_HEADER: [&str; 5] = ["graph", "config", "seed", "iteration", "num_colors"];

/// Integer for single runs, fractional for seed means.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MetricValue {
    Int(u64),
    Mean(f64),
}

impl MetricValue {
    pub fn as_f64(self) -> f64 {
        match self {
            MetricValue::Int(v) => v as f64,
            MetricValue::Mean(v) => v,
        }
    }
}

/// One line of the metrics table. Metric fields are empty when the run
/// failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub graph: String,
    pub config: String,
    /// Seed, or `mean` for the average over a cell's seeds.
    pub seed: String,
    pub num_colors: Option<MetricValue>,
    pub rounds: Option<MetricValue>,
    pub conflicts: Option<MetricValue>,
    pub msgs: Option<MetricValue>,
    pub nonempty_msgs: Option<MetricValue>,
    pub pairs: Option<MetricValue>,
    pub bytes: Option<MetricValue>,
    pub precomm_msgs: Option<MetricValue>,
    pub ticks: Option<MetricValue>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Values of `m` in header order, after `graph,config,seed`.
pub(crate) fn metric_values(m: &RunMetrics) -> [u64; 9] {
    [
        m.num_colors as u64,
        m.rounds as u64,
        m.conflicts,
        m.traffic.messages,
        m.traffic.nonempty_messages,
        m.traffic.pairs,
        m.traffic.bytes,
        m.precomm_messages,
        m.ticks,
    ]
}

impl CsvRow {
    fn with_values(graph: &str, config: &str, seed: String, values: Option<[MetricValue; 9]>) -> Self {
        let v = |i: usize| values.map(|vs| vs[i]);
        Self {
            graph: graph.to_string(),
            config: config.to_string(),
            seed,
            num_colors: v(0),
            rounds: v(1),
            conflicts: v(2),
            msgs: v(3),
            nonempty_msgs: v(4),
            pairs: v(5),
            bytes: v(6),
            precomm_msgs: v(7),
            ticks: v(8),
            error: None,
        }
    }

    pub fn from_metrics(graph: &str, config: &str, seed: u64, m: &RunMetrics) -> Self {
        let values = metric_values(m).map(MetricValue::Int);
        Self::with_values(graph, config, seed.to_string(), Some(values))
    }

    pub fn failed(graph: &str, config: &str, seed: String, error: String) -> Self {
        Self {
            error: Some(error),
            ..Self::with_values(graph, config, seed, None)
        }
    }

    pub fn mean(graph: &str, config: &str, means: [f64; 9]) -> Self {
        Self::with_values(graph, config, "mean".into(), Some(means.map(MetricValue::Mean)))
    }

    pub fn value(&self, metric: &str) -> Option<f64> {
        let v = match metric {
            "num_colors" => self.num_colors,
            "rounds" => self.rounds,
            "conflicts" => self.conflicts,
            "msgs" => self.msgs,
            "nonempty_msgs" => self.nonempty_msgs,
            "pairs" => self.pairs,
            "bytes" => self.bytes,
            "precomm_msgs" => self.precomm_msgs,
            "ticks" => self.ticks,
            _ => None,
        };
        v.map(MetricValue::as_f64)
    }

    fn record(&self) -> Vec<String> {
        let f = |v: Option<MetricValue>| match v {
            None => String::new(),
            Some(MetricValue::Int(i)) => i.to_string(),
            Some(MetricValue::Mean(x)) => format!("{x:.4}"),
        };
        vec![
            self.graph.clone(),
            self.config.clone(),
            self.seed.clone(),
            f(self.num_colors),
            f(self.rounds),
            f(self.conflicts),
            f(self.msgs),
            f(self.nonempty_msgs),
            f(self.pairs),
            f(self.bytes),
            f(self.precomm_msgs),
            f(self.ticks),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub graph: String,
    pub config: String,
    pub seed: u64,
    pub iteration: usize,
    pub num_colors: u32,
}

impl TrajectoryRow {
    pub fn from_metrics(graph: &str, config: &str, seed: u64, m: &RunMetrics) -> Vec<Self> {
        m.trajectory
            .iter()
            .enumerate()
            .map(|(iteration, &num_colors)| Self {
                graph: graph.to_string(),
                config: config.to_string(),
                seed,
                iteration,
                num_colors,
            })
            .collect()
    }
}

/// Writes the metrics table; the header is written even with no rows.
pub fn write_metrics_csv<W: Write>(w: W, rows: &[CsvRow]) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(METRICS_HEADER)?;
    for row in rows {
        out.write_record(row.record())?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_trajectory_csv<W: Write>(w: W, rows: &[TrajectoryRow]) -> csv::Result<()> {
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

/// JSON array mirroring the metrics table; failed rows carry an `error`.
pub fn write_json<W: Write>(mut w: W, rows: &[CsvRow]) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    w.write_all(b"\n").map_err(serde_json::Error::io)
}
