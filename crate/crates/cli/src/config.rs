//! Run configuration read from a TOML file. Every key is optional; unknown
//! keys are rejected.

use std::path::{Path, PathBuf};

use lowdiss::bounds::EngineSpec;
use lowdiss::tla::{couplings_for_zeta, BathCoupling, CycleProtocol};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub engine: EngineSection,
    pub protocol: ProtocolSection,
    pub coupling: CouplingSection,
    pub sampling: SamplingSection,
    pub output: OutputSection,
    pub scan: ScanSection,
    pub curves: CurvesSection,
}

/// Phenomenological engine. Defaults: `M_h = 9`, `M_c = 1`, `T_h = 1`,
/// `T_c = 0.4`, `Q_rev = 10`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineSection {
    #[serde(rename = "M_h")]
    pub m_h: f64,
    #[serde(rename = "M_c")]
    pub m_c: f64,
    #[serde(rename = "T_h")]
    pub temp_h: f64,
    #[serde(rename = "T_c")]
    pub temp_c: f64,
    #[serde(rename = "Q_rev")]
    pub q_rev: f64,
}

impl Default for EngineSection {
    fn default() -> Self {
        Self {
            m_h: 9.0,
            m_c: 1.0,
            temp_h: 1.0,
            temp_c: 0.4,
            q_rev: 10.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolSection {
    pub omega_h_i: f64,
    pub omega_h_f: f64,
    pub omega_c_i: f64,
    pub omega_c_f: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub delta: f64,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        let p = CycleProtocol::default_cycle();
        Self {
            omega_h_i: p.omega_h_start,
            omega_h_f: p.omega_h_end(),
            omega_c_i: p.omega_c_start,
            omega_c_f: p.omega_c_end(),
            t_h: 100.0,
            t_c: 100.0,
            delta: p.delta,
        }
    }
}

/// Bath parameters. `gamma_c` may be given directly or derived from a target
/// `zeta`; without either, `zeta = 0.5` is used.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingSection {
    pub beta_h: f64,
    pub beta_c: f64,
    pub gamma_h: f64,
    pub gamma_c: Option<f64>,
    pub zeta: Option<f64>,
}

impl Default for CouplingSection {
    fn default() -> Self {
        Self {
            beta_h: 0.1,
            beta_c: 1.0 / 9.0,
            gamma_h: 0.1,
            gamma_c: None,
            zeta: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingSection {
    pub n: usize,
    pub seed: u64,
    /// `"simulated"` or `"phenomenological"`.
    pub mode: String,
    /// Stroke-time ranges. When absent, phenomenological samples span
    /// `[0.01, 100] M / W_rev` and simulated ones `gamma~ t` in `[10, 300]`.
    pub t_h_range: Option<[f64; 2]>,
    pub t_c_range: Option<[f64; 2]>,
}

impl Default for SamplingSection {
    fn default() -> Self {
        Self {
            n: 500,
            seed: 1,
            mode: "simulated".into(),
            t_h_range: None,
            t_c_range: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("."),
        }
    }
}

/// Entropy scan of a single stroke. The time grid is logarithmic in
/// `x = gamma~ t_f` with `gamma~ = 2 gamma / (beta omega0)`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    pub betas: Vec<f64>,
    pub omega0: f64,
    pub eps: f64,
    pub gamma: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            betas: vec![0.1, 1.0 / 9.0],
            omega0: 1.0,
            eps: 0.1,
            gamma: 1.0,
            x_min: 1e-3,
            x_max: 1e3,
            points: 61,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CurvesSection {
    pub eta_c: f64,
    pub zetas: Vec<f64>,
    pub points: usize,
}

impl Default for CurvesSection {
    fn default() -> Self {
        Self {
            eta_c: 0.1,
            zetas: vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            points: 101,
        }
    }
}

/// A configuration problem: reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text =
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn engine_spec(&self) -> lowdiss::Result<EngineSpec> {
        let e = &self.engine;
        EngineSpec::new(e.m_h, e.m_c, e.temp_h, e.temp_c, e.q_rev)
    }

    pub fn protocol(&self) -> lowdiss::Result<CycleProtocol> {
        let p = &self.protocol;
        let proto = CycleProtocol::from_endpoints(
            (p.omega_h_i, p.omega_h_f),
            (p.omega_c_i, p.omega_c_f),
            p.t_h,
            p.t_c,
            p.delta,
        )?;
        proto.validate()?;
        Ok(proto)
    }

    pub fn coupling(&self, protocol: &CycleProtocol) -> anyhow::Result<BathCoupling> {
        let c = &self.coupling;
        match (c.gamma_c, c.zeta) {
            (Some(_), Some(_)) => Err(usage("[coupling] sets both gamma_c and zeta; give one")),
            (Some(gamma_c), None) => Ok(BathCoupling::new(c.beta_h, c.beta_c, c.gamma_h, gamma_c)?),
            (None, zeta) => Ok(couplings_for_zeta(
                protocol,
                c.beta_h,
                c.beta_c,
                zeta.unwrap_or(0.5),
                c.gamma_h,
            )?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c.engine.m_h, 9.0);
        assert_eq!(c.sampling.n, 500);
        assert_eq!(c.curves.zetas.len(), 5);
    }

    #[test]
    fn partial_sections_keep_other_defaults() {
        let c = RunConfig::parse("[engine]\nM_h = 4.0\n\n[coupling]\nzeta = 0.2\n").unwrap();
        assert_eq!(c.engine.m_h, 4.0);
        assert_eq!(c.engine.m_c, 1.0);
        assert_eq!(c.coupling.zeta, Some(0.2));
        assert_eq!(c.coupling.beta_h, 0.1);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        assert!(RunConfig::parse("[engine]\nm_hot = 1.0\n").is_err());
        assert!(RunConfig::parse("[plot]\nx = 1\n").is_err());
    }

    #[test]
    fn coupling_needs_at_most_one_of_gamma_c_and_zeta() {
        let c = RunConfig::parse("[coupling]\ngamma_c = 0.2\nzeta = 0.3\n").unwrap();
        let p = c.protocol().unwrap();
        assert!(c.coupling(&p).is_err());
    }
}
