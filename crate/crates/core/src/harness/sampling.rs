use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{EngineSpec, StrokeTimes};
use crate::error::{invalid, Error, Result};
use crate::tla::{find_steady_cycle, AtomState, BathCoupling, CycleProtocol, CycleResult, SteadyCycleOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Heats from the low-dissipation ansatz `Q_x = Q_x^(r) - M_x / t_x`.
    Phenomenological,
    /// Heats from the steady cycle of the master equation.
    Simulated,
}

impl SampleMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleMode::Phenomenological => "phenomenological",
            SampleMode::Simulated => "simulated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleConfig {
    pub n_samples: usize,
    /// Log-uniform range of the hot stroke duration.
    pub t_range_h: (f64, f64),
    pub t_range_c: (f64, f64),
    pub seed: u64,
    pub mode: SampleMode,
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(invalid("n_samples", "must be at least 1"));
        }
        for (name, (lo, hi)) in [("t_range_h", self.t_range_h), ("t_range_c", self.t_range_c)] {
            if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
                return Err(invalid(name, format!("need 0 < lo <= hi, got ({lo}, {hi})")));
            }
        }
        Ok(())
    }

    /// Stroke times of sample `index`. Each sample owns the ChaCha stream
    /// `index` of the seed, so results do not depend on evaluation order.
    pub fn times(&self, index: usize) -> StrokeTimes {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        let draw = |rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)| {
            let u: f64 = rng.gen();
            (lo.ln() + u * (hi.ln() - lo.ln())).exp()
        };
        let t_h = draw(&mut rng, self.t_range_h);
        let t_c = draw(&mut rng, self.t_range_c);
        StrokeTimes { t_h, t_c }
    }
}

/// What the samples are drawn from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSource {
    Engine(EngineSpec),
    Cycle {
        protocol: CycleProtocol,
        coupling: BathCoupling,
        options: SteadyCycleOptions,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleRow {
    pub sample_id: usize,
    pub mode: SampleMode,
    pub t_h: f64,
    pub t_c: f64,
    pub q_h: f64,
    pub q_c: f64,
    pub work: f64,
    pub eta: f64,
    pub power: f64,
    pub p_norm: f64,
    pub eta_norm: f64,
    /// Both strokes are long compared with the relaxation time
    /// (`gamma~ t >= 10`); always true for phenomenological samples.
    pub regime_flag: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub mode: SampleMode,
    /// Low-dissipation parameters used for normalization and auditing.
    pub spec: EngineSpec,
    pub rows: Vec<SampleRow>,
    pub discarded_no_heat: usize,
    pub discarded_no_work: usize,
    pub failed: Vec<(usize, String)>,
}

/// Smallest `gamma~ t` below which a simulated sample is flagged out of regime.
pub const REGIME_THRESHOLD: f64 = 10.0;

/// `2 gamma t / (beta omega)` for a stroke, with `omega` the larger endpoint
/// so that the slowest relaxation along the stroke is used.
pub fn stroke_relaxation_number(beta: f64, gamma: f64, omega: (f64, f64), t: f64) -> f64 {
    2.0 * gamma * t / (beta * omega.0.max(omega.1))
}

enum Outcome {
    Row(SampleRow),
    NoHeat,
    NoWork,
    Failed(String),
}

fn classify(row: SampleRow) -> Outcome {
    if !(row.q_h > 0.0) {
        Outcome::NoHeat
    } else if !(row.work > 0.0) {
        Outcome::NoWork
    } else {
        Outcome::Row(row)
    }
}

fn phenomenological(spec: &EngineSpec, id: usize, t: StrokeTimes) -> Outcome {
    let (q_h, q_c) = spec.heats(t);
    let work = q_h + q_c;
    let power = work / t.total();
    classify(SampleRow {
        sample_id: id,
        mode: SampleMode::Phenomenological,
        t_h: t.t_h,
        t_c: t.t_c,
        q_h,
        q_c,
        work,
        eta: work / q_h,
        power,
        p_norm: power / spec.p_max(),
        eta_norm: work / q_h / spec.carnot_efficiency(),
        regime_flag: true,
    })
}

/// Sample row of a converged cycle of `protocol`.
pub fn cycle_row(
    spec: &EngineSpec,
    protocol: &CycleProtocol,
    coupling: &BathCoupling,
    result: &CycleResult,
    id: usize,
) -> SampleRow {
    let x_h = stroke_relaxation_number(
        coupling.beta_h,
        coupling.gamma_h,
        (protocol.omega_h_start, protocol.omega_h_end()),
        protocol.t_h,
    );
    let x_c = stroke_relaxation_number(
        coupling.beta_c,
        coupling.gamma_c,
        (protocol.omega_c_start, protocol.omega_c_end()),
        protocol.t_c,
    );
    let eta = result.work_out / result.q_h;
    SampleRow {
        sample_id: id,
        mode: SampleMode::Simulated,
        t_h: protocol.t_h,
        t_c: protocol.t_c,
        q_h: result.q_h,
        q_c: result.q_c,
        work: result.work_out,
        eta,
        power: result.power,
        p_norm: result.power / spec.p_max(),
        eta_norm: eta / spec.carnot_efficiency(),
        regime_flag: x_h >= REGIME_THRESHOLD && x_c >= REGIME_THRESHOLD,
    }
}

fn simulated(
    spec: &EngineSpec,
    protocol: &CycleProtocol,
    coupling: &BathCoupling,
    options: &SteadyCycleOptions,
    id: usize,
    t: StrokeTimes,
) -> Outcome {
    let run = || -> Result<SampleRow> {
        let proto = protocol.with_times(t.t_h, t.t_c)?;
        let start = AtomState::thermal(coupling.beta_h, proto.omega_h_start);
        let r = find_steady_cycle(&proto, coupling, start, options)?;
        Ok(cycle_row(spec, &proto, coupling, &r, id))
    };
    match run() {
        Ok(row) => classify(row),
        Err(e) => Outcome::Failed(e.to_string()),
    }
}

#[cfg(feature = "parallel")]
fn evaluate<F: Fn(usize) -> Outcome + Sync + Send>(n: usize, f: F) -> Vec<Outcome> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn evaluate<F: Fn(usize) -> Outcome>(n: usize, f: F) -> Vec<Outcome> {
    (0..n).map(f).collect()
}

/// Draws `n_samples` stroke-time pairs and evaluates the engine at each.
///
/// Samples without heat intake or without positive work are discarded and
/// counted; failed simulations are listed in `failed`.
pub fn sample_points(config: &SampleConfig, source: &SampleSource) -> Result<Dataset> {
    config.validate()?;
    let (spec, outcomes) = match (config.mode, source) {
        (SampleMode::Phenomenological, SampleSource::Engine(spec)) => {
            let out = evaluate(config.n_samples, |i| phenomenological(spec, i, config.times(i)));
            (*spec, out)
        }
        (
            SampleMode::Simulated,
            SampleSource::Cycle {
                protocol,
                coupling,
                options,
            },
        ) => {
            let spec = protocol.engine_spec(coupling)?;
            let out = evaluate(config.n_samples, |i| {
                simulated(&spec, protocol, coupling, options, i, config.times(i))
            });
            (spec, out)
        }
        _ => {
            return Err(Error::InvalidParameter {
                name: "mode",
                reason: "phenomenological mode needs an engine spec, simulated mode a cycle".into(),
            })
        }
    };
    let mut data = Dataset {
        mode: config.mode,
        spec,
        rows: Vec::new(),
        discarded_no_heat: 0,
        discarded_no_work: 0,
        failed: Vec::new(),
    };
    for (i, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Row(r) => data.rows.push(r),
            Outcome::NoHeat => data.discarded_no_heat += 1,
            Outcome::NoWork => data.discarded_no_work += 1,
            Outcome::Failed(e) => data.failed.push((i, e)),
        }
    }
    Ok(data)
}
