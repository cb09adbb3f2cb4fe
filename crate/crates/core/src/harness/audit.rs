use std::collections::BTreeMap;

use super::sampling::{Dataset, SampleMode, SampleRow};
use crate::bounds::{
    eta_lower_detailed, eta_upper, universal_constraint_slack, universal_lower_slack, EngineSpec, NormalizedPoint,
};
use crate::error::{Error, Result};

/// The inequalities checked on every sample. Slack is positive when the
/// inequality holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundId {
    /// `P <= P_max`, slack `1 - P~`.
    MaxPower,
    /// Universal upper curve, slack `eta~_univ(P~) - eta~`.
    UniversalUpper,
    /// Quadratic time window `P tau^2 - eta_C Q tau + M <= 0`, slack scaled by `1/M`.
    TimeWindow,
    /// `2 eta~ + sqrt(1 - P~) - 1 >= 0`.
    UniversalLower,
    /// `eta~ - eta~_-(P~, zeta)`.
    DetailedLower,
    /// `eta~_+(P~, zeta) - eta~`.
    ZetaUpper,
}

impl BoundId {
    pub const ALL: [BoundId; 6] = [
        BoundId::MaxPower,
        BoundId::UniversalUpper,
        BoundId::TimeWindow,
        BoundId::UniversalLower,
        BoundId::DetailedLower,
        BoundId::ZetaUpper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::MaxPower => "max_power",
            BoundId::UniversalUpper => "universal_upper",
            BoundId::TimeWindow => "time_window",
            BoundId::UniversalLower => "universal_lower",
            BoundId::DetailedLower => "detailed_lower",
            BoundId::ZetaUpper => "zeta_upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackRecord {
    pub sample_id: usize,
    pub bound: BoundId,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub n_checked: usize,
    /// Simulated rows outside the low-dissipation regime, kept but not audited.
    pub n_skipped: usize,
    pub threshold: f64,
    pub violations: Vec<SlackRecord>,
    pub min_slack_per_bound: BTreeMap<BoundId, f64>,
    /// Every evaluated slack, in sample order.
    pub records: Vec<SlackRecord>,
}

impl AuditReport {
    pub fn min_slack(&self, bound: BoundId) -> Option<f64> {
        self.min_slack_per_bound.get(&bound).copied()
    }
}

/// Slack threshold for each sampling mode: rounding only for closed-form
/// samples, integration error for simulated ones.
pub fn slack_threshold(mode: SampleMode) -> f64 {
    match mode {
        SampleMode::Phenomenological => -1e-12,
        SampleMode::Simulated => -1e-6,
    }
}

/// Slacks of every bound at one sample.
pub fn row_slacks(row: &SampleRow, spec: &EngineSpec) -> Result<Vec<(BoundId, f64)>> {
    let mut out = vec![(BoundId::MaxPower, 1.0 - row.p_norm)];
    let tau = row.t_h + row.t_c;
    let m = spec.total_dissipation();
    let window = (spec.reversible_work() * tau - row.power * tau * tau - m) / m;
    out.push((BoundId::TimeWindow, window));
    if row.p_norm > 1.0 || row.p_norm < 0.0 {
        return Ok(out);
    }
    let eta_c = spec.carnot_efficiency();
    let zeta = spec.zeta();
    let point = NormalizedPoint::new(row.p_norm, row.eta_norm)?;
    out.push((BoundId::UniversalUpper, universal_constraint_slack(point, eta_c)?));
    out.push((BoundId::UniversalLower, universal_lower_slack(point)?));
    out.push((
        BoundId::DetailedLower,
        row.eta_norm - eta_lower_detailed(row.p_norm, zeta, eta_c)?,
    ));
    out.push((BoundId::ZetaUpper, eta_upper(row.p_norm, zeta, eta_c)? - row.eta_norm));
    Ok(out)
}

/// Evaluates every bound on every in-regime row of `dataset`.
pub fn audit_bounds(dataset: &Dataset) -> Result<AuditReport> {
    if dataset.rows.is_empty() {
        return Err(Error::EmptyDataset("no samples survived the discard rules".into()));
    }
    let threshold = slack_threshold(dataset.mode);
    let mut report = AuditReport {
        n_checked: 0,
        n_skipped: 0,
        threshold,
        violations: Vec::new(),
        min_slack_per_bound: BTreeMap::new(),
        records: Vec::new(),
    };
    for row in &dataset.rows {
        if !row.regime_flag {
            report.n_skipped += 1;
            continue;
        }
        report.n_checked += 1;
        for (bound, slack) in row_slacks(row, &dataset.spec)? {
            if !slack.is_finite() {
                return Err(Error::Degenerate(format!(
                    "non-finite slack for {} at sample {}",
                    bound.as_str(),
                    row.sample_id
                )));
            }
            let rec = SlackRecord {
                sample_id: row.sample_id,
                bound,
                slack,
            };
            if slack < threshold {
                report.violations.push(rec);
            }
            let e = report.min_slack_per_bound.entry(bound).or_insert(f64::INFINITY);
            *e = e.min(slack);
            report.records.push(rec);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::sampling::{sample_points, SampleConfig, SampleSource};

    #[test]
    fn emp_row_sits_between_half_and_curzon_ahlborn_like_value() {
        let spec = EngineSpec::new(9.0, 1.0, 10.0, 4.0, 10.0).unwrap();
        let t = spec.emp_times().unwrap();
        let (q_h, q_c) = spec.heats(t);
        let work = q_h + q_c;
        let row = SampleRow {
            sample_id: 0,
            mode: SampleMode::Phenomenological,
            t_h: t.t_h,
            t_c: t.t_c,
            q_h,
            q_c,
            work,
            eta: work / q_h,
            power: work / t.total(),
            p_norm: work / t.total() / spec.p_max(),
            eta_norm: work / q_h / 0.6,
            regime_flag: true,
        };
        assert!((row.p_norm - 1.0).abs() < 1e-12);
        assert!(row.eta_norm >= 0.5 && row.eta_norm <= 1.0 / (2.0 - 0.6));
        let data = Dataset {
            mode: SampleMode::Phenomenological,
            spec,
            rows: vec![row],
            discarded_no_heat: 0,
            discarded_no_work: 0,
            failed: vec![],
        };
        let r = audit_bounds(&data).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }

    #[test]
    fn empty_dataset_is_an_error() {
        let data = Dataset {
            mode: SampleMode::Phenomenological,
            spec: EngineSpec::new(1.0, 1.0, 2.0, 1.0, 1.0).unwrap(),
            rows: vec![],
            discarded_no_heat: 3,
            discarded_no_work: 0,
            failed: vec![],
        };
        assert!(matches!(audit_bounds(&data), Err(Error::EmptyDataset(_))));
    }

    #[test]
    fn random_phenomenological_samples_respect_all_bounds() {
        let spec = EngineSpec::with_carnot(2.0, 0.3, 0.35, 4.0).unwrap();
        let cfg = SampleConfig {
            n_samples: 3000,
            t_range_h: (0.01, 1000.0),
            t_range_c: (0.01, 1000.0),
            seed: 11,
            mode: SampleMode::Phenomenological,
        };
        let d = sample_points(&cfg, &SampleSource::Engine(spec)).unwrap();
        let r = audit_bounds(&d).unwrap();
        assert!(
            r.violations.is_empty(),
            "{:?}",
            &r.violations[..r.violations.len().min(5)]
        );
        assert_eq!(r.records.len(), 6 * r.n_checked);
    }
}
