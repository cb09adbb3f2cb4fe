//! Numerical oracles for the closed-form bounds.
//!
//! These never call the closed forms they are meant to check: they evaluate
//! the power and efficiency of the phenomenological engine directly and
//! search over stroke times.

use super::{EngineSpec, StrokeTimes};
use crate::error::{invalid, Error, Result};
use crate::optimize::{golden_max, scan_then_golden_max};

/// Brute-force maximum of the cycle power.
///
/// A 512 x 512 log-spaced grid over `t_x in [1e-3, 1e3] * M/(eta_C Q)` is
/// refined by alternating golden-section searches in `ln t_h` and `ln t_c`.
pub fn brute_force_p_max(spec: &EngineSpec) -> (f64, StrokeTimes) {
    let scale = spec.total_dissipation() / spec.reversible_work();
    let n = 512;
    let (lo, hi) = ((1e-3 * scale).ln(), (1e3 * scale).ln());
    let at = |i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let power = |x: f64, y: f64| {
        spec.power(StrokeTimes {
            t_h: x.exp(),
            t_c: y.exp(),
        })
    };

    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (at(i), at(j));
            let p = power(x, y);
            if p > best.0 {
                best = (p, x, y);
            }
        }
    }
    let cell = (hi - lo) / (n - 1) as f64;
    let (mut x, mut y, mut p) = (best.1, best.2, best.0);
    let mut width = 2.0 * cell;
    for _ in 0..60 {
        let (nx, _) = golden_max(|x| power(x, y), x - width, x + width, 1e-13);
        let (ny, np) = golden_max(|y| power(nx, y), y - width, y + width, 1e-13);
        let moved = (nx - x).abs().max((ny - y).abs());
        x = nx;
        y = ny;
        p = p.max(np);
        if moved < 1e-12 {
            break;
        }
        width = (4.0 * moved).clamp(1e-9, 2.0 * cell);
    }
    (
        p,
        StrokeTimes {
            t_h: x.exp(),
            t_c: y.exp(),
        },
    )
}

/// Extremes of the normalized efficiency along the power level set `P = p`.
#[derive(Debug, Clone, Copy)]
pub struct LevelSetExtrema {
    pub max_eta_norm: f64,
    pub max_at: StrokeTimes,
    pub min_eta_norm: f64,
    pub min_at: StrokeTimes,
}

/// Closed power level curve `P(t_h, t_c) = p` parametrized by a periodic
/// coordinate `phi in [0, 2)`.
///
/// Along the ray `t_c = r t_h` the power condition is a quadratic in `t_h`
/// with two roots (inner and outer branch) for `r` in `[r_lo, r_hi]`; the rays
/// are swept with `ln r = c - d cos(pi phi)` so both branches join smoothly.
pub struct PowerLevelCurve {
    spec: EngineSpec,
    p: f64,
    center: f64,
    half_width: f64,
}

impl PowerLevelCurve {
    pub fn new(spec: &EngineSpec, p: f64) -> Result<Self> {
        let p_max = spec.p_max();
        if !(p > 0.0 && p < p_max) {
            return Err(Error::PowerOutOfRange { power: p, p_max });
        }
        if spec.m_hot <= 0.0 || spec.m_cold <= 0.0 {
            return Err(invalid("m_hot", "level-set oracle needs M_h > 0 and M_c > 0"));
        }
        let u = spec.reversible_work();
        let k = u * u / (4.0 * p) - spec.m_hot - spec.m_cold;
        let disc = (k * k - 4.0 * spec.m_hot * spec.m_cold).max(0.0).sqrt();
        let r_lo = (k - disc) / (2.0 * spec.m_hot);
        let r_hi = (k + disc) / (2.0 * spec.m_hot);
        Ok(Self {
            spec: *spec,
            p,
            center: 0.5 * (r_lo.ln() + r_hi.ln()),
            half_width: 0.5 * (r_hi.ln() - r_lo.ln()),
        })
    }

    pub fn point(&self, phi: f64) -> StrokeTimes {
        let phi = phi.rem_euclid(2.0);
        let r = (self.center - self.half_width * (std::f64::consts::PI * phi).cos()).exp();
        let u = self.spec.reversible_work();
        let disc = (u * u - 4.0 * self.p * (1.0 + r) * (self.spec.m_hot + self.spec.m_cold / r)).max(0.0);
        let sign = if phi < 1.0 { -1.0 } else { 1.0 };
        let t_h = (u + sign * disc.sqrt()) / (2.0 * self.p * (1.0 + r));
        StrokeTimes { t_h, t_c: r * t_h }
    }

    pub fn eta_norm(&self, phi: f64) -> f64 {
        let t = self.point(phi);
        match self.spec.efficiency(t) {
            Ok(e) => e / self.spec.carnot_efficiency(),
            Err(_) => f64::NEG_INFINITY,
        }
    }
}

/// Maximum and minimum normalized efficiency over all stroke times delivering
/// power `p` exactly (`0 < p < P_max`).
pub fn level_set_extrema(spec: &EngineSpec, p: f64) -> Result<LevelSetExtrema> {
    let curve = PowerLevelCurve::new(spec, p)?;
    let n = 20_001;
    let (phi_max, max_eta_norm) = scan_then_golden_max(|phi| curve.eta_norm(phi), 0.0, 2.0, n, 1e-13);
    let (phi_min, neg_min) = scan_then_golden_max(
        |phi| {
            let e = curve.eta_norm(phi);
            if e.is_finite() {
                -e
            } else {
                f64::NEG_INFINITY
            }
        },
        0.0,
        2.0,
        n,
        1e-13,
    );
    Ok(LevelSetExtrema {
        max_eta_norm,
        max_at: curve.point(phi_max),
        min_eta_norm: -neg_min,
        min_at: curve.point(phi_min),
    })
}

/// Maximum normalized efficiency over the admissible window
/// `t_h + t_c <= tau_+(p)`.
///
/// Efficiency increases in both stroke times, so the search runs along the
/// line `t_h + t_c = tau_+` over the split `t_c / tau_+`.
pub fn window_max_efficiency(spec: &EngineSpec, p: f64) -> Result<(f64, StrokeTimes)> {
    let tau = spec.tau_window(p)?.tau_plus;
    let eta_c = spec.carnot_efficiency();
    let eval = |frac: f64| {
        let t = StrokeTimes {
            t_h: tau * (1.0 - frac),
            t_c: tau * frac,
        };
        match spec.efficiency(t) {
            Ok(e) if t.t_h > 0.0 && t.t_c > 0.0 => e / eta_c,
            _ => f64::NEG_INFINITY,
        }
    };
    let (frac, eta) = scan_then_golden_max(eval, 0.0, 1.0, 100_001, 1e-14);
    Ok((
        eta,
        StrokeTimes {
            t_h: tau * (1.0 - frac),
            t_c: tau * frac,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_engine() -> EngineSpec {
        EngineSpec::new(9.0, 1.0, 10.0, 4.0, 10.0).unwrap()
    }

    #[test]
    fn brute_force_recovers_p_max() {
        let s = reference_engine();
        let (p, t) = brute_force_p_max(&s);
        assert!(((p - 0.5625) / 0.5625).abs() < 1e-6, "{p}");
        assert!((t.t_h - 4.0).abs() < 1e-3 && (t.t_c - 4.0 / 3.0).abs() < 1e-3, "{t:?}");
    }

    #[test]
    fn level_curve_points_have_requested_power() {
        let s = reference_engine();
        let p = 0.6 * s.p_max();
        let c = PowerLevelCurve::new(&s, p).unwrap();
        for i in 0..200 {
            let phi = i as f64 / 100.0;
            let t = c.point(phi);
            assert!(((s.power(t) - p) / p).abs() < 1e-11, "phi={phi}");
        }
        // continuity across the branch joins
        for phi in [0.0, 1.0] {
            let a = c.point(phi - 1e-7);
            let b = c.point(phi + 1e-7);
            assert!((a.t_h - b.t_h).abs() < 1e-4 && (a.t_c - b.t_c).abs() < 1e-4);
        }
    }

    #[test]
    fn extrema_bracket_the_emp_efficiency_near_p_max() {
        let s = reference_engine();
        let p = 0.999_999 * s.p_max();
        let e = level_set_extrema(&s, p).unwrap();
        let emp = s.efficiency(s.emp_times().unwrap()).unwrap() / 0.6;
        assert!(e.min_eta_norm <= emp + 1e-3 && e.max_eta_norm >= emp - 1e-3);
        assert!(e.max_eta_norm - e.min_eta_norm < 1e-2);
    }

    #[test]
    fn window_max_dominates_level_set_max() {
        let s = reference_engine();
        for k in 1..10 {
            let p = k as f64 / 10.0 * s.p_max();
            let (w, _) = window_max_efficiency(&s, p).unwrap();
            let e = level_set_extrema(&s, p).unwrap();
            assert!(w >= e.max_eta_norm - 1e-12);
        }
    }
}
