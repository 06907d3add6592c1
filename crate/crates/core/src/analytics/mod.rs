//! Correlation statistics, scatter series, the scatter occlusion metric and
//! validation scoring.

mod correlation;
mod occlusion;
mod report;
mod scoring;
mod series;

pub use correlation::{average_ranks, pearson_r, spearman_r};
pub use occlusion::{occlusion_score, to_viewport};
pub use report::{correlation_report, write_correlation_csv, CorrelationRow};
pub use scoring::{
    confidence_value, normalize_clicks, normalize_times, score_task1, score_task2, ConfidenceLabel,
    LabStudyRecord, ScoreWeights,
};
pub use series::{
    detail_series, series_for_task1, series_for_task3, AxisMeaning, ScatterSeries, Task3Groups,
};
