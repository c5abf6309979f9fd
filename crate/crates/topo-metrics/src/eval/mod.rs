//! Evaluation protocol: correlate unsupervised metric values with
//! downstream task scores across a set of runs, and score each metric by
//! the downstream quality of the run it would select.

mod correlation;
mod scaling;

pub use correlation::{average_ranks, pearson, spearman};
pub use scaling::{scaling_experiment, ScalingFitResult};

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether larger or smaller metric values indicate a better run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    #[default]
    HigherBetter,
    LowerBetter,
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "higher_better" => Ok(Orientation::HigherBetter),
            "lower_better" => Ok(Orientation::LowerBetter),
            other => Err(Error::BadParams(format!(
                "unknown orientation {other:?}; expected higher_better or lower_better"
            ))),
        }
    }
}

/// Whether correlations are reported as-is or as absolute values (the
/// convention for settings where lower metric values track better runs).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrelationMode {
    #[default]
    Signed,
    Absolute,
}

impl FromStr for CorrelationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signed" => Ok(CorrelationMode::Signed),
            "absolute" => Ok(CorrelationMode::Absolute),
            other => Err(Error::BadParams(format!(
                "unknown correlation mode {other:?}; expected signed or absolute"
            ))),
        }
    }
}

/// How per-task numbers are combined into each metric's summary line:
/// arithmetic mean or plain sum over task columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    Mean,
    Sum,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Aggregation::Mean),
            "sum" => Ok(Aggregation::Sum),
            other => Err(Error::BadParams(format!(
                "unknown aggregation {other:?}; expected mean or sum"
            ))),
        }
    }
}

/// One training run: its unsupervised metric values and downstream task
/// scores.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub run_id: String,
    pub unsup: BTreeMap<String, f64>,
    pub downstream: BTreeMap<String, f64>,
}

/// All runs under evaluation plus the conventions to apply to them.
/// Metrics without an explicit orientation default to higher-is-better.
#[derive(Clone, Debug)]
pub struct RunTable {
    records: Vec<RunRecord>,
    orientation: BTreeMap<String, Orientation>,
    correlation_mode: CorrelationMode,
}

impl RunTable {
    pub fn new(
        records: Vec<RunRecord>,
        orientation: BTreeMap<String, Orientation>,
        correlation_mode: CorrelationMode,
    ) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::BadParams("run table has no records".to_owned()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for record in &records {
            if !seen.insert(record.run_id.as_str()) {
                return Err(Error::BadParams(format!(
                    "duplicate run_id {:?}",
                    record.run_id
                )));
            }
            for (name, value) in record.unsup.iter().chain(&record.downstream) {
                if !value.is_finite() {
                    return Err(Error::BadParams(format!(
                        "run {:?} has non-finite value for {name:?}",
                        record.run_id
                    )));
                }
            }
        }
        Ok(RunTable {
            records,
            orientation,
            correlation_mode,
        })
    }

    pub fn records(&self) -> &[RunRecord] {
        &self.records
    }

    pub fn correlation_mode(&self) -> CorrelationMode {
        self.correlation_mode
    }

    pub fn orientation_of(&self, metric: &str) -> Orientation {
        self.orientation.get(metric).copied().unwrap_or_default()
    }

    /// Metric values in record order; every record must carry the column.
    pub fn metric_column(&self, metric: &str) -> Result<Vec<f64>> {
        self.records
            .iter()
            .map(|r| {
                r.unsup.get(metric).copied().ok_or_else(|| Error::MissingColumn {
                    name: metric.to_owned(),
                })
            })
            .collect()
    }

    /// Task scores in record order; every record must carry the column.
    pub fn task_column(&self, task: &str) -> Result<Vec<f64>> {
        self.records
            .iter()
            .map(|r| {
                r.downstream.get(task).copied().ok_or_else(|| Error::MissingColumn {
                    name: task.to_owned(),
                })
            })
            .collect()
    }
}

/// Downstream score of the run the metric would select: argmax under
/// higher-is-better, argmin under lower-is-better, ties broken by
/// lexicographically smallest run_id.
pub fn selection_quality(table: &RunTable, metric: &str, task: &str) -> Result<f64> {
    let values = table.metric_column(metric)?;
    let scores = table.task_column(task)?;
    let orientation = table.orientation_of(metric);

    let mut best = 0;
    for i in 1..values.len() {
        let better = match orientation {
            Orientation::HigherBetter => values[i] > values[best],
            Orientation::LowerBetter => values[i] < values[best],
        };
        let tied = values[i] == values[best]
            && table.records[i].run_id < table.records[best].run_id;
        if better || tied {
            best = i;
        }
    }
    Ok(scores[best])
}

/// Correlations and selection quality for one (metric, task) pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricTaskRow {
    pub metric: String,
    pub task: String,
    pub pearson: f64,
    pub spearman: f64,
    pub selection_quality: f64,
    pub best_possible: f64,
}

/// One metric's numbers aggregated across all tasks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MetricAggregate {
    pub metric: String,
    pub pearson: f64,
    pub spearman: f64,
    pub selection_quality: f64,
    pub best_possible: f64,
}

/// Full evaluation output. Metrics are ordered by descending aggregate
/// Spearman (ties by name), the ordering used for reported tables; rows
/// follow the same metric order with tasks in the order requested.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EvaluationSummary {
    pub rows: Vec<MetricTaskRow>,
    pub aggregates: Vec<MetricAggregate>,
    pub correlation_mode: CorrelationMode,
    pub aggregation: Aggregation,
}

/// Evaluate every requested metric against every requested task.
pub fn evaluate(
    table: &RunTable,
    metrics: &[String],
    tasks: &[String],
    aggregation: Aggregation,
) -> Result<EvaluationSummary> {
    if metrics.is_empty() || tasks.is_empty() {
        return Err(Error::BadParams(
            "evaluation needs at least one metric and one task".to_owned(),
        ));
    }

    let mut blocks: Vec<(MetricAggregate, Vec<MetricTaskRow>)> =
        Vec::with_capacity(metrics.len());
    for metric in metrics {
        let values = table.metric_column(metric)?;
        let mut agg = MetricAggregate {
            metric: metric.clone(),
            pearson: 0.0,
            spearman: 0.0,
            selection_quality: 0.0,
            best_possible: 0.0,
        };
        let mut rows = Vec::with_capacity(tasks.len());
        for task in tasks {
            let scores = table.task_column(task)?;
            let mut p = pearson(&values, &scores)?;
            let mut s = spearman(&values, &scores)?;
            if table.correlation_mode() == CorrelationMode::Absolute {
                p = p.abs();
                s = s.abs();
            }
            let quality = selection_quality(table, metric, task)?;
            let best_possible = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            debug_assert!(quality <= best_possible);
            agg.pearson += p;
            agg.spearman += s;
            agg.selection_quality += quality;
            agg.best_possible += best_possible;
            rows.push(MetricTaskRow {
                metric: metric.clone(),
                task: task.clone(),
                pearson: p,
                spearman: s,
                selection_quality: quality,
                best_possible,
            });
        }
        if aggregation == Aggregation::Mean {
            let count = tasks.len() as f64;
            agg.pearson /= count;
            agg.spearman /= count;
            agg.selection_quality /= count;
            agg.best_possible /= count;
        }
        blocks.push((agg, rows));
    }

    blocks.sort_by(|a, b| {
        b.0.spearman
            .total_cmp(&a.0.spearman)
            .then_with(|| a.0.metric.cmp(&b.0.metric))
    });
    let mut rows = Vec::with_capacity(metrics.len() * tasks.len());
    let mut aggregates = Vec::with_capacity(metrics.len());
    for (agg, block_rows) in blocks {
        aggregates.push(agg);
        rows.extend(block_rows);
    }

    Ok(EvaluationSummary {
        rows,
        aggregates,
        correlation_mode: table.correlation_mode(),
        aggregation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn table(
        metric: &[f64],
        task: &[f64],
        orientation: Orientation,
        mode: CorrelationMode,
    ) -> RunTable {
        let records = metric
            .iter()
            .zip(task)
            .enumerate()
            .map(|(i, (&m, &t))| RunRecord {
                run_id: format!("r{i}"),
                unsup: BTreeMap::from([("m".to_owned(), m)]),
                downstream: BTreeMap::from([("t".to_owned(), t)]),
            })
            .collect();
        RunTable::new(
            records,
            BTreeMap::from([("m".to_owned(), orientation)]),
            mode,
        )
        .unwrap()
    }

    #[test]
    fn selection_follows_orientation() {
        let metric = [0.1, 0.9, 0.5];
        let task = [0.6, 0.8, 0.7];
        let higher = table(&metric, &task, Orientation::HigherBetter, CorrelationMode::Signed);
        assert_eq!(selection_quality(&higher, "m", "t").unwrap(), 0.8);
        let lower = table(&metric, &task, Orientation::LowerBetter, CorrelationMode::Signed);
        assert_eq!(selection_quality(&lower, "m", "t").unwrap(), 0.6);
    }

    #[test]
    fn selection_breaks_ties_by_run_id() {
        // r0 and r2 tie on the metric; r0 wins lexicographically
        let t = table(
            &[0.9, 0.1, 0.9],
            &[0.5, 0.6, 0.7],
            Orientation::HigherBetter,
            CorrelationMode::Signed,
        );
        assert_eq!(selection_quality(&t, "m", "t").unwrap(), 0.5);
    }

    #[test]
    fn missing_columns_are_reported_by_name() {
        let t = table(
            &[0.1, 0.2, 0.3],
            &[0.4, 0.5, 0.6],
            Orientation::HigherBetter,
            CorrelationMode::Signed,
        );
        assert!(matches!(
            selection_quality(&t, "nope", "t"),
            Err(Error::MissingColumn { name }) if name == "nope"
        ));
        assert!(matches!(
            selection_quality(&t, "m", "missing_task"),
            Err(Error::MissingColumn { name }) if name == "missing_task"
        ));
    }

    #[test]
    fn absolute_mode_reports_magnitudes() {
        // metric perfectly anti-correlated with the task
        let metric = [3.0, 2.0, 1.0];
        let task = [0.1, 0.2, 0.3];
        let signed = table(&metric, &task, Orientation::LowerBetter, CorrelationMode::Signed);
        let summary =
            evaluate(&signed, &["m".to_owned()], &["t".to_owned()], Aggregation::Mean).unwrap();
        assert_abs_diff_eq!(summary.rows[0].pearson, -1.0, epsilon = 1e-14);

        let absolute =
            table(&metric, &task, Orientation::LowerBetter, CorrelationMode::Absolute);
        let summary =
            evaluate(&absolute, &["m".to_owned()], &["t".to_owned()], Aggregation::Mean)
                .unwrap();
        assert_abs_diff_eq!(summary.rows[0].pearson, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(summary.rows[0].spearman, 1.0, epsilon = 1e-14);
        // lower-better selection picks the best run here
        assert_eq!(summary.rows[0].selection_quality, 0.3);
        assert_eq!(summary.rows[0].best_possible, 0.3);
    }

    #[test]
    fn perfect_ranking_gives_unit_spearman_and_best_selection() {
        let t = table(
            &[0.2, 0.5, 0.9, 0.7],
            &[0.52, 0.60, 0.81, 0.74],
            Orientation::HigherBetter,
            CorrelationMode::Signed,
        );
        let summary =
            evaluate(&t, &["m".to_owned()], &["t".to_owned()], Aggregation::Mean).unwrap();
        let row = &summary.rows[0];
        assert_abs_diff_eq!(row.spearman, 1.0, epsilon = 1e-14);
        assert_eq!(row.selection_quality, row.best_possible);
    }

    #[test]
    fn aggregation_means_or_sums_across_tasks() {
        let records = (0..3)
            .map(|i| RunRecord {
                run_id: format!("r{i}"),
                unsup: BTreeMap::from([("m".to_owned(), i as f64)]),
                downstream: BTreeMap::from([
                    ("a".to_owned(), i as f64 * 0.1),
                    ("b".to_owned(), 1.0 - i as f64 * 0.1),
                ]),
            })
            .collect();
        let table =
            RunTable::new(records, BTreeMap::new(), CorrelationMode::Signed).unwrap();
        let tasks = ["a".to_owned(), "b".to_owned()];
        let mean =
            evaluate(&table, &["m".to_owned()], &tasks, Aggregation::Mean).unwrap();
        let sum = evaluate(&table, &["m".to_owned()], &tasks, Aggregation::Sum).unwrap();
        assert_abs_diff_eq!(
            mean.aggregates[0].selection_quality * 2.0,
            sum.aggregates[0].selection_quality,
            epsilon = 1e-14
        );
        // pearson(m, a) = 1, pearson(m, b) = -1
        assert_abs_diff_eq!(mean.aggregates[0].pearson, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sum.aggregates[0].pearson, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn summary_orders_metrics_by_descending_spearman() {
        let records = (0..4)
            .map(|i| RunRecord {
                run_id: format!("r{i}"),
                unsup: BTreeMap::from([
                    ("worse".to_owned(), 4.0 - i as f64),
                    ("better".to_owned(), i as f64),
                ]),
                downstream: BTreeMap::from([("t".to_owned(), i as f64 * 0.1)]),
            })
            .collect();
        let table =
            RunTable::new(records, BTreeMap::new(), CorrelationMode::Signed).unwrap();
        let summary = evaluate(
            &table,
            &["worse".to_owned(), "better".to_owned()],
            &["t".to_owned()],
            Aggregation::Mean,
        )
        .unwrap();
        // "better" correlates at +1, "worse" at -1, so the summary reorders.
        assert_eq!(summary.aggregates[0].metric, "better");
        assert_eq!(summary.aggregates[1].metric, "worse");
        assert_eq!(summary.rows[0].metric, "better");
        assert_eq!(summary.rows[1].metric, "worse");
    }

    #[test]
    fn duplicate_run_ids_are_rejected() {
        let record = RunRecord {
            run_id: "same".to_owned(),
            unsup: BTreeMap::new(),
            downstream: BTreeMap::new(),
        };
        assert!(matches!(
            RunTable::new(
                vec![record.clone(), record],
                BTreeMap::new(),
                CorrelationMode::Signed
            ),
            Err(Error::BadParams(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn selection_is_invariant_under_increasing_maps_and_negation(
            pairs in proptest::collection::vec((-10.0f64..10.0, 0.0f64..1.0), 3..12),
            shift in -5.0f64..5.0,
        ) {
            // coarse grid so the exp map below keeps distinct values distinct
            let metric: Vec<f64> = pairs.iter().map(|p| (p.0 * 4.0).round() / 4.0).collect();
            let task: Vec<f64> = pairs.iter().map(|p| p.1).collect();

            let base = table(
                &metric, &task, Orientation::HigherBetter, CorrelationMode::Signed,
            );
            let base_pick = selection_quality(&base, "m", "t").unwrap();

            // strictly increasing transform of the metric column
            let mapped: Vec<f64> =
                metric.iter().map(|v| (v / 10.0).exp() * 2.0 + shift).collect();
            let mapped_table = table(
                &mapped, &task, Orientation::HigherBetter, CorrelationMode::Signed,
            );
            prop_assert_eq!(
                base_pick,
                selection_quality(&mapped_table, "m", "t").unwrap()
            );

            // negating values and flipping orientation changes nothing
            let negated: Vec<f64> = metric.iter().map(|v| -v).collect();
            let negated_table = table(
                &negated, &task, Orientation::LowerBetter, CorrelationMode::Signed,
            );
            prop_assert_eq!(
                base_pick,
                selection_quality(&negated_table, "m", "t").unwrap()
            );
        }
    }
}
