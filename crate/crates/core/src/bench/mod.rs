//! Experiment harness: runs configuration grids over graphs and seeds,
//! normalizes against a single-rank Natural-order run, aggregates with
//! geometric means, and writes CSV/JSON result files.

mod output;
mod sweep;

use std::collections::BTreeMap;

use num_traits::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use output::{
    write_json, write_metrics_csv, write_trajectory_csv, CsvRow, MetricValue, TrajectoryRow, METRICS_HEADER,
    TRAJECTORY_HEADER,
};
pub use sweep::{run_cell, run_partitioned, sweep, BenchGraph, CellResult, ExperimentConfig, SeedRun, SweepTable};

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("no baseline for graph {graph:?}, metric {metric:?}")]
    MissingBaseline { graph: String, metric: String },
    #[error("baseline for graph {graph:?}, metric {metric:?} is not positive")]
    ZeroBaseline { graph: String, metric: String },
    #[error("geometric mean needs positive values, got {0}")]
    NonPositive(f64),
    #[error("geometric mean of no values")]
    Empty,
    #[error("empty sweep grid")]
    EmptyGrid,
}

/// One measured value before normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawRecord<T> {
    pub graph: String,
    pub config: String,
    pub metric: String,
    pub value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedRecord<T> {
    pub graph: String,
    pub config: String,
    pub metric: String,
    pub raw: T,
    pub baseline: T,
    pub normalized: T,
}

/// Baseline values keyed by `(graph, metric)`.
pub type Baselines<T> = BTreeMap<(String, String), T>;

/// Divides every record by the baseline of its graph and metric.
pub fn normalize<T: Float>(
    records: &[RawRecord<T>],
    baselines: &Baselines<T>,
) -> Result<Vec<NormalizedRecord<T>>, BenchError> {
    records
        .iter()
        .map(|r| {
            let key = (r.graph.clone(), r.metric.clone());
            let baseline = *baselines.get(&key).ok_or_else(|| BenchError::MissingBaseline {
                graph: r.graph.clone(),
                metric: r.metric.clone(),
            })?;
            if !(baseline > T::zero()) {
                return Err(BenchError::ZeroBaseline {
                    graph: r.graph.clone(),
                    metric: r.metric.clone(),
                });
            }
            Ok(NormalizedRecord {
                graph: r.graph.clone(),
                config: r.config.clone(),
                metric: r.metric.clone(),
                raw: r.value,
                baseline,
                normalized: r.value / baseline,
            })
        })
        .collect()
}

/// `exp(mean(ln v))`.
pub fn geo_mean<T: Float>(values: &[T]) -> Result<T, BenchError> {
    if values.is_empty() {
        return Err(BenchError::Empty);
    }
    if let [v] = values {
        return if *v > T::zero() {
            Ok(*v)
        } else {
            Err(BenchError::NonPositive(v.to_f64().unwrap_or(f64::NAN)))
        };
    }
    let mut sum = T::zero();
    for &v in values {
        if !(v > T::zero()) {
            return Err(BenchError::NonPositive(v.to_f64().unwrap_or(f64::NAN)));
        }
        sum = sum + v.ln();
    }
    Ok((sum / T::from(values.len()).unwrap()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rec(graph: &str, value: f64) -> RawRecord<f64> {
        RawRecord {
            graph: graph.into(),
            config: "c".into(),
            metric: "num_colors".into(),
            value,
        }
    }

    fn base(graph: &str, value: f64) -> Baselines<f64> {
        [((graph.to_string(), "num_colors".to_string()), value)].into()
    }

    #[test]
    fn normalize_divides() {
        let out = normalize(&[rec("g", 10.0)], &base("g", 13.0)).unwrap();
        assert_abs_diff_eq!(out[0].normalized, 0.769_230_769_2, epsilon = 1e-9);
        let out = normalize(&[rec("g", 13.0)], &base("g", 13.0)).unwrap();
        assert_eq!(out[0].normalized, 1.0);
    }

    #[test]
    fn normalize_errors() {
        assert!(matches!(
            normalize(&[rec("g", 1.0)], &base("g", 0.0)),
            Err(BenchError::ZeroBaseline { .. })
        ));
        assert!(matches!(
            normalize(&[rec("h", 1.0)], &base("g", 2.0)),
            Err(BenchError::MissingBaseline { .. })
        ));
    }

    #[test]
    fn geo_mean_values() {
        assert_abs_diff_eq!(geo_mean(&[1.0, 1.0, 1.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(geo_mean(&[2.0, 8.0]).unwrap(), 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(geo_mean(&[0.96, 0.78]).unwrap(), 0.8654, epsilon = 1e-3);
        assert_abs_diff_eq!(geo_mean(&[2.0f32, 8.0]).unwrap(), 4.0f32, epsilon = 1e-5);
        assert_eq!(geo_mean(&[5.5]).unwrap(), 5.5);
        assert_eq!(geo_mean(&[1.0, 0.0]), Err(BenchError::NonPositive(0.0)));
        assert_eq!(geo_mean::<f64>(&[]), Err(BenchError::Empty));
    }

    #[test]
    fn all_baseline_inputs_give_one() {
        let records: Vec<_> = [3.0, 7.0, 11.0]
            .iter()
            .enumerate()
            .map(|(i, &v)| rec(&format!("g{i}"), v))
            .collect();
        let baselines: Baselines<f64> = records
            .iter()
            .map(|r| ((r.graph.clone(), r.metric.clone()), r.value))
            .collect();
        let norm: Vec<f64> = normalize(&records, &baselines)
            .unwrap()
            .iter()
            .map(|r| r.normalized)
            .collect();
        assert_eq!(geo_mean(&norm).unwrap(), 1.0);
    }
}
