//! Sampling, bound auditing, level-set geometry and dataset output.

pub mod audit;
pub mod csvio;
pub mod sampling;
pub mod scan;
pub mod tangency;

pub use audit::{audit_bounds, row_slacks, slack_threshold, AuditReport, BoundId, SlackRecord};
pub use sampling::{
    cycle_row, sample_points, stroke_relaxation_number, Dataset, SampleConfig, SampleMode, SampleRow, SampleSource,
    REGIME_THRESHOLD,
};
pub use scan::{
    bound_curves, entropy_scan, log_grid, log_log_slope, stroke_entropy, unit_grid, CurveRow, EntropyRow,
    StrokeTemplate,
};
pub use tangency::{eta_curve_approach, tangency_probe, EtaCurveApproach, Intersection, TangencyReport};
