use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use lowdiss::bounds::{eta_lower_detailed, eta_upper, universal_lower, universal_upper, StrokeTimes};
use lowdiss::harness::csvio::{append_samples, write_audit, write_curves, write_entropy, write_samples};
use lowdiss::harness::{
    audit_bounds, bound_curves, cycle_row, log_grid, sample_points, stroke_relaxation_number, unit_grid, SampleConfig,
    SampleMode, SampleSource, StrokeTemplate,
};
use lowdiss::tla::{effective_rate, find_steady_cycle, AtomState, SteadyCycleOptions, StepControl};

use crate::config::{usage, RunConfig};

/// Shortest round-trip form, in exponent notation for very small or large values.
fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn output_file(cfg: &RunConfig, name: &str) -> anyhow::Result<PathBuf> {
    let dir = &cfg.output.directory;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    Ok(dir.join(name))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn bounds(p_norm: f64, zeta: f64, eta_c: f64) -> anyhow::Result<()> {
    let upper = eta_upper(p_norm, zeta, eta_c)?;
    let lower = eta_lower_detailed(p_norm, zeta, eta_c)?;
    println!("eta_upper = {}", num(upper));
    println!("eta_lower = {}", num(lower));
    println!("eq1_upper = {}", num(universal_upper(p_norm, eta_c)?));
    println!("eq14_lower = {}", num(universal_lower(p_norm)?));
    Ok(())
}

/// Number of data rows already in a samples file, used to continue its ids.
fn existing_rows(path: &Path) -> anyhow::Result<usize> {
    if !path.exists() {
        return Ok(0);
    }
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().filter(|l| !l.is_empty()).count().saturating_sub(1))
}

pub fn simulate(cfg: &RunConfig) -> anyhow::Result<()> {
    let protocol = cfg.protocol()?;
    let coupling = cfg.coupling(&protocol)?;
    let spec = protocol.engine_spec(&coupling)?;
    let start = AtomState::thermal(coupling.beta_h, protocol.omega_h_start);
    let r = find_steady_cycle(&protocol, &coupling, start, &SteadyCycleOptions::default())?;
    let path = output_file(cfg, "samples.csv")?;
    let row = cycle_row(&spec, &protocol, &coupling, &r, existing_rows(&path)?);

    println!("t_h = {}", num(protocol.t_h));
    println!("t_c = {}", num(protocol.t_c));
    println!("gamma_c = {}", num(coupling.gamma_c));
    println!("zeta = {}", num(spec.zeta()));
    println!("cycles = {}", r.cycles_to_converge);
    println!("p_start = {}", num(r.p_start));
    println!("q_h = {}", num(r.q_h));
    println!("q_c = {}", num(r.q_c));
    println!("work = {}", num(r.work_out));
    println!("power = {}", num(r.power));
    match r.eta {
        Some(eta) => println!("eta = {}", num(eta)),
        None => println!("eta = undefined (no heat taken from the hot bath)"),
    }
    println!("p_norm = {}", num(row.p_norm));
    println!("eta_norm = {}", num(row.eta_norm));
    println!("s_irr_hot = {}", num(r.hot_ledger.s_irr));
    println!("s_irr_cold = {}", num(r.cold_ledger.s_irr));
    println!("first_law_residual = {}", num(r.first_law_residual));
    println!("in_regime = {}", row.regime_flag);

    append_samples(&path, &[row])?;
    println!("appended to {}", path.display());
    Ok(())
}

fn parse_mode(s: &str) -> anyhow::Result<SampleMode> {
    match s {
        "phenomenological" => Ok(SampleMode::Phenomenological),
        "simulated" => Ok(SampleMode::Simulated),
        other => Err(usage(format!(
            "[sampling] mode = {other:?}; expected \"phenomenological\" or \"simulated\""
        ))),
    }
}

fn range(r: Option<[f64; 2]>, default: (f64, f64)) -> (f64, f64) {
    r.map_or(default, |[a, b]| (a, b))
}

pub fn sample(cfg: &RunConfig) -> anyhow::Result<()> {
    let mode = parse_mode(&cfg.sampling.mode)?;
    let (source, default_h, default_c) = match mode {
        SampleMode::Phenomenological => {
            let spec = cfg.engine_spec()?;
            let s = spec.total_dissipation() / spec.reversible_work();
            (SampleSource::Engine(spec), (0.01 * s, 100.0 * s), (0.01 * s, 100.0 * s))
        }
        SampleMode::Simulated => {
            let protocol = cfg.protocol()?;
            let coupling = cfg.coupling(&protocol)?;
            let unit_h = stroke_relaxation_number(
                coupling.beta_h,
                coupling.gamma_h,
                (protocol.omega_h_start, protocol.omega_h_end()),
                1.0,
            );
            let unit_c = stroke_relaxation_number(
                coupling.beta_c,
                coupling.gamma_c,
                (protocol.omega_c_start, protocol.omega_c_end()),
                1.0,
            );
            (
                SampleSource::Cycle {
                    protocol,
                    coupling,
                    options: SteadyCycleOptions::default(),
                },
                (10.0 / unit_h, 300.0 / unit_h),
                (10.0 / unit_c, 300.0 / unit_c),
            )
        }
    };
    let config = SampleConfig {
        n_samples: cfg.sampling.n,
        t_range_h: range(cfg.sampling.t_h_range, default_h),
        t_range_c: range(cfg.sampling.t_c_range, default_c),
        seed: cfg.sampling.seed,
        mode,
    };
    let data = sample_points(&config, &source)?;
    let samples = output_file(cfg, "samples.csv")?;
    let mut out = create(&samples)?;
    write_samples(&mut out, &data.rows)?;
    out.flush()?;

    println!("kept = {}", data.rows.len());
    println!("discarded_no_heat = {}", data.discarded_no_heat);
    println!("discarded_no_work = {}", data.discarded_no_work);
    println!("failed = {}", data.failed.len());
    for (id, e) in &data.failed {
        eprintln!("sample {id}: {e}");
    }
    println!("wrote {}", samples.display());

    let report = audit_bounds(&data)?;
    let audit = output_file(cfg, "audit.csv")?;
    let mut out = create(&audit)?;
    write_audit(&mut out, &report)?;
    out.flush()?;
    println!("audited = {}", report.n_checked);
    println!("out_of_regime = {}", report.n_skipped);
    println!(
        "violations = {} (threshold {})",
        report.violations.len(),
        num(report.threshold)
    );
    for (bound, slack) in &report.min_slack_per_bound {
        println!("min_slack {} = {}", bound.as_str(), num(*slack));
    }
    println!("wrote {}", audit.display());
    Ok(())
}

pub fn entropy_scan(cfg: &RunConfig) -> anyhow::Result<()> {
    let s = &cfg.scan;
    if s.betas.is_empty() {
        return Err(usage("[scan] betas is empty"));
    }
    let control = StepControl::default();
    let mut rows = Vec::new();
    for &beta in &s.betas {
        let template = StrokeTemplate {
            beta,
            omega0: s.omega0,
            eps: s.eps,
            gamma: s.gamma,
        };
        template.stroke(1.0)?;
        let rate = effective_rate(beta, s.omega0, s.gamma);
        let grid: Vec<f64> = log_grid(s.x_min, s.x_max, s.points)?
            .into_iter()
            .map(|x| x / rate)
            .collect();
        rows.extend(lowdiss::harness::entropy_scan(&template, &grid, &control)?);
    }
    let path = output_file(cfg, "entropy.csv")?;
    let mut out = create(&path)?;
    write_entropy(&mut out, &rows)?;
    out.flush()?;
    println!("rows = {}", rows.len());
    println!("wrote {}", path.display());
    Ok(())
}

pub fn curves(cfg: &RunConfig) -> anyhow::Result<()> {
    let c = &cfg.curves;
    if c.points < 2 {
        return Err(usage("[curves] points must be at least 2"));
    }
    let rows = bound_curves(c.eta_c, &c.zetas, &unit_grid(c.points - 1))?;
    let path = output_file(cfg, "curves.csv")?;
    let mut out = create(&path)?;
    write_curves(&mut out, &rows)?;
    out.flush()?;
    println!("rows = {}", rows.len());
    println!("wrote {}", path.display());
    Ok(())
}

pub fn mni_compare(cfg: &RunConfig, points: usize, decades: f64) -> anyhow::Result<()> {
    if points < 1 || !(decades.is_finite() && decades >= 0.0) {
        return Err(usage("--points must be positive and --decades non-negative"));
    }
    let spec = cfg.engine_spec()?;
    let emp = spec.emp_times()?;
    let p_max = spec.p_max();
    let factors: Vec<f64> = if points == 1 {
        vec![1.0]
    } else {
        (0..points)
            .map(|i| 10f64.powf(decades * (2.0 * i as f64 / (points - 1) as f64 - 1.0)))
            .collect()
    };
    println!("t_h\tt_c\tp_max\tmni_pmax\tratio");
    for &a in &factors {
        for &b in &factors {
            let t = StrokeTimes::new(emp.t_h * a, emp.t_c * b)?;
            let mni = spec.mni_pmax(t);
            println!(
                "{}\t{}\t{}\t{}\t{}",
                num(t.t_h),
                num(t.t_c),
                num(p_max),
                num(mni),
                num(mni / p_max)
            );
        }
    }
    Ok(())
}
