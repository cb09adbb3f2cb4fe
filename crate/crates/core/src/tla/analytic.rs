//! Closed-form approximations for a single isothermal stroke, the
//! dissipation coefficients of the low-dissipation mapping and the formal
//! solution of the master equation.

use super::{equilibrium_population, BathCoupling, CycleProtocol, IsothermalStroke};
use crate::error::{invalid, Error, Result};
use crate::quad;

/// High-temperature relaxation rate `2 gamma / (beta omega0)`.
pub fn effective_rate(beta: f64, omega0: f64, gamma: f64) -> f64 {
    2.0 * gamma / (beta * omega0)
}

/// High-temperature irreversible entropy of a stroke started in equilibrium,
/// with `x = gamma~ t_f`:
/// `(beta eps)^2/(4x) [1 - (1-e^-x)/x (1 + (1-e^-x)/(4 p_g p_e))]`,
/// populations taken at the final frequency.
pub fn si_high_t(beta: f64, omega0: f64, eps: f64, gamma: f64, t_f: f64) -> f64 {
    let x = effective_rate(beta, omega0, gamma) * t_f;
    let g = -(-x).exp_m1();
    let pe = equilibrium_population(beta, omega0 + eps);
    let pg = 1.0 - pe;
    (beta * eps).powi(2) / (4.0 * x) * (1.0 - g / x * (1.0 + g / (4.0 * pg * pe)))
}

/// Leading long-time form `(beta eps)^2 / (4 gamma~ t_f)`.
pub fn si_high_t_leading(beta: f64, omega0: f64, eps: f64, gamma: f64, t_f: f64) -> f64 {
    (beta * eps).powi(2) / (4.0 * effective_rate(beta, omega0, gamma) * t_f)
}

/// Sudden-quench limit `(beta eps)^2 / 8`.
pub fn si_high_t_plateau(beta: f64, eps: f64) -> f64 {
    (beta * eps).powi(2) / 8.0
}

/// Low-temperature irreversible entropy of a stroke started in equilibrium.
///
/// The expression has a removable `0/0` at `gamma t_f = beta eps`; within
/// `1e-12` of it a `NearSingular` error is returned.
pub fn si_low_t(beta: f64, omega0: f64, eps: f64, gamma: f64, t_f: f64) -> Result<f64> {
    let gt = gamma * t_f;
    let be = beta * eps;
    let denom = gt - be;
    if denom.abs() < 1e-12 {
        return Err(Error::NearSingular(format!(
            "gamma t_f = {gt} is within 1e-12 of beta eps = {be}"
        )));
    }
    let pe = equilibrium_population(beta, omega0 + eps);
    let pg = 1.0 - pe;
    let boltz = (-beta * omega0).exp();
    let bracket =
        -(-be).exp_m1() / be + (-gt).exp_m1() / gt - ((-be).exp() - (-gt).exp()).powi(2) / (pe * pg) * boltz / denom;
    Ok(be * be * boltz / denom * bracket)
}

/// Long-time form `(beta eps / gamma t_f) e^{-beta omega0} (1 - e^{-beta eps})`.
pub fn si_low_t_long(beta: f64, omega0: f64, eps: f64, gamma: f64, t_f: f64) -> f64 {
    let be = beta * eps;
    be / (gamma * t_f) * (-beta * omega0).exp() * -(-be).exp_m1()
}

/// Short-time limit `e^{-beta omega0} (beta eps + e^{-beta eps} - 1)`.
pub fn si_low_t_short(beta: f64, omega0: f64, eps: f64) -> f64 {
    let be = beta * eps;
    (-beta * omega0).exp() * (be + (-be).exp_m1())
}

/// High-temperature dissipation coefficient `beta^2 omega_i eps^2 / (8 gamma)`.
pub fn m_coefficient(beta: f64, omega_start: f64, eps: f64, gamma: f64) -> f64 {
    beta * beta * omega_start * eps * eps / (8.0 * gamma)
}

/// Exact coefficient of the `1/t` tail of `T * s_irr` for a linear ramp,
/// `eps (sech^2(beta omega_i / 2) - sech^2(beta omega_f / 2)) / (4 gamma)`.
///
/// Reduces to [`m_coefficient`] when `beta omega << 1` and `|eps| << omega`.
pub fn dissipation_coefficient(beta: f64, omega_start: f64, eps: f64, gamma: f64) -> f64 {
    if eps == 0.0 {
        return 0.0;
    }
    let sech2 = |w: f64| {
        let c = (0.5 * beta * w).cosh();
        1.0 / (c * c)
    };
    // sech^2(a) - sech^2(b) = (cosh^2 b - cosh^2 a) / (cosh^2 a cosh^2 b)
    //                       = sinh(b - a) sinh(b + a) sech^2(a) sech^2(b)
    let a = 0.5 * beta * omega_start;
    let b = 0.5 * beta * (omega_start + eps);
    let diff = (b - a).sinh() * (b + a).sinh() * sech2(omega_start) * sech2(omega_start + eps);
    eps * diff / (4.0 * gamma)
}

/// Couplings giving the cycle an asymmetry parameter `target_zeta`.
///
/// `gamma_h` is kept and `gamma_c` is chosen so that the dissipation
/// coefficients of the two strokes satisfy
/// `M_h / M_c = ((1 + zeta) / (1 - zeta))^2`.
pub fn couplings_for_zeta(
    protocol: &CycleProtocol,
    beta_h: f64,
    beta_c: f64,
    target_zeta: f64,
    gamma_h: f64,
) -> Result<BathCoupling> {
    if !(target_zeta.abs() < 1.0) {
        return Err(Error::Infeasible(format!(
            "zeta = {target_zeta} needs a vanishing or infinite dissipation coefficient"
        )));
    }
    protocol.validate()?;
    let m_h = dissipation_coefficient(beta_h, protocol.omega_h_start, protocol.eps_h, gamma_h);
    let unit_c = dissipation_coefficient(beta_c, protocol.omega_c_start, protocol.eps_c, 1.0);
    if !(m_h > 0.0 && unit_c > 0.0) {
        return Err(Error::Infeasible("both strokes must change the frequency".into()));
    }
    let ratio = ((1.0 + target_zeta) / (1.0 - target_zeta)).powi(2);
    let gamma_c = unit_c * ratio / m_h;
    BathCoupling::new(beta_h, beta_c, gamma_h, gamma_c)
}

/// `int_0^s kappa`, from `kappa = gamma coth(beta omega / 2)` and
/// `int coth(beta omega / 2) d omega = (2 / beta) ln sinh(beta omega / 2)`.
fn kappa_integral(st: &IsothermalStroke, s: f64) -> f64 {
    let a0 = 0.5 * st.beta * st.omega0;
    if st.eps == 0.0 {
        return st.gamma * s / a0.tanh();
    }
    let v = st.eps / st.duration;
    // ln sinh a = a - ln 2 + ln(1 - e^{-2a}); the log-ratio below is evaluated
    // without cancellation.
    let bvs = st.beta * v * s;
    let ratio = (-2.0 * a0).exp() * (-bvs).exp_m1() / (-2.0 * a0).exp_m1();
    st.gamma * s + 2.0 * st.gamma / (st.beta * v) * ratio.ln_1p()
}

/// Excited population at time `s` into the stroke from the integrating-factor
/// solution, with the remaining integral done by adaptive quadrature.
pub fn formal_solution(p_e0: f64, stroke: &IsothermalStroke, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_e0) {
        return Err(invalid("p_e0", "population must lie in [0, 1]"));
    }
    if !(s >= 0.0 && s <= stroke.duration * (1.0 + 1e-12)) {
        return Err(Error::TimeOutOfRange {
            t: s,
            period: stroke.duration,
        });
    }
    let k_s = kappa_integral(stroke, s);
    let integrand = |u: f64| (kappa_integral(stroke, u) - k_s).exp() * stroke.rates_at(u).1;
    // the integrand lives within a few 1/kappa of the upper limit
    let kappa = stroke.rates_at(s).0;
    let mut breaks = vec![s];
    let mut w = 0.25 / kappa;
    while w < s {
        breaks.push(s - w);
        w *= 4.0;
    }
    breaks.push(0.0);
    breaks.reverse();
    let driven = quad::integrate_with_breaks(integrand, &breaks, 1e-13)?;
    Ok(p_e0 * (-k_s).exp() + driven)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_coefficient_hand_value() {
        assert!((m_coefficient(0.1, 1.0, 0.1, 1.0) - 1.25e-5).abs() < 1e-18);
    }

    #[test]
    fn exact_coefficient_reduces_at_high_temperature() {
        let (b, w, e, g) = (1e-3, 1.0, 1e-3, 2.0);
        let exact = dissipation_coefficient(b, w, e, g);
        let high_t = m_coefficient(b, w, e, g);
        assert!(((exact - high_t) / high_t).abs() < 1e-3);
        assert!(dissipation_coefficient(0.1, 1.0, -0.4, 0.1) > 0.0);
    }

    #[test]
    fn kappa_integral_matches_quadrature() {
        for &(b, g, w0, e, t) in &[
            (0.1, 1.0, 1.0, 0.1, 3.0),
            (2.0, 0.3, 0.7, -0.5, 10.0),
            (1.0, 1.0, 1.0, 1e-9, 2.0),
        ] {
            let st = IsothermalStroke::new(b, g, w0, e, t).unwrap();
            let q = quad::integrate(|u| st.rates_at(u).0, 0.0, t, 1e-13).unwrap();
            let k = kappa_integral(&st, t);
            assert!(((k - q) / q).abs() < 1e-12, "{k} {q}");
        }
    }

    #[test]
    fn limits_of_analytic_forms() {
        let (b, w, e, g) = (0.1, 1.0, 0.1, 1.0);
        let tf_long = 1e6;
        let ratio = si_high_t(b, w, e, g, tf_long) / si_high_t_leading(b, w, e, g, tf_long);
        assert!((ratio - 1.0).abs() < 1e-5);
        assert!((si_high_t_plateau(b, e) - 1.25e-5).abs() < 1e-18);

        let be: f64 = 0.1;
        let long = si_low_t(1.0, 1.0, 0.1, 1.0, 1e6).unwrap();
        assert!((long / si_low_t_long(1.0, 1.0, 0.1, 1.0, 1e6) - 1.0).abs() < 1e-4);
        let expect = (-1.0f64).exp() * (be + (-be).exp() - 1.0);
        assert!((si_low_t_short(1.0, 1.0, 0.1) - expect).abs() < 1e-16);
        assert!(matches!(si_low_t(1.0, 1.0, 0.1, 1.0, 0.1), Err(Error::NearSingular(_))));
    }

    #[test]
    fn zeta_tuning() {
        let p = CycleProtocol::default_cycle();
        for z in [0.0, 0.5, -0.3] {
            let c = couplings_for_zeta(&p, 0.1, 1.0 / 9.0, z, 0.1).unwrap();
            let mh = dissipation_coefficient(c.beta_h, p.omega_h_start, p.eps_h, c.gamma_h);
            let mc = dissipation_coefficient(c.beta_c, p.omega_c_start, p.eps_c, c.gamma_c);
            let zeta = (mh.sqrt() - mc.sqrt()) / (mh.sqrt() + mc.sqrt());
            assert!((zeta - z).abs() < 1e-12);
        }
        assert!(couplings_for_zeta(&p, 0.1, 1.0 / 9.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn formal_solution_limits() {
        let st = IsothermalStroke::new(0.4, 0.5, 1.0, 0.0, 4.0).unwrap();
        assert_eq!(formal_solution(0.3, &st, 0.0).unwrap(), 0.3);
        let (k, c) = st.rates_at(0.0);
        let exact = c / k + (0.3 - c / k) * (-k * 4.0).exp();
        assert!((formal_solution(0.3, &st, 4.0).unwrap() - exact).abs() < 1e-13);
        assert!(formal_solution(0.3, &st, 4.1).is_err());
    }
}
