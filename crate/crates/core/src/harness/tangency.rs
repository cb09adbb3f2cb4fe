use crate::bounds::{BoundWindow, EngineSpec, StrokeTimes};
use crate::error::{invalid, Result};

/// Grid resolution of the contour tracer.
pub const GRID_CELLS: usize = 1024;
/// Points closer than this (in time units) are the same intersection.
pub const DEDUP_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Intersection {
    pub times: StrokeTimes,
    /// The two level curves touch without crossing.
    pub tangential: bool,
}

/// Closest approach of the efficiency level curve to the origin in the
/// `t_h + t_c` direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaCurveApproach {
    pub min_total: f64,
    pub at: StrokeTimes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangencyReport {
    pub p: f64,
    pub eta: f64,
    pub window: BoundWindow,
    pub intersections: Vec<Intersection>,
    /// Range of `t_h + t_c` over the traced power level curve.
    pub power_span: (f64, f64),
    /// `None` when the efficiency level set is empty (`eta >= eta_C`).
    pub eta_curve: Option<EtaCurveApproach>,
}

impl TangencyReport {
    pub fn count(&self) -> usize {
        self.intersections.len()
    }

    /// Whether the efficiency level curve touches `t_h + t_c = tau_+`.
    pub fn eta_touches_upper_line(&self, rel_tol: f64) -> bool {
        self.eta_curve
            .map(|c| (c.min_total - self.window.tau_plus).abs() <= rel_tol * self.window.tau_plus)
            .unwrap_or(false)
    }
}

struct Fields<'a> {
    spec: &'a EngineSpec,
    p: f64,
    eta: f64,
}

impl Fields<'_> {
    fn f(&self, x: f64, y: f64) -> f64 {
        self.spec.power(StrokeTimes { t_h: x, t_c: y }) - self.p
    }

    fn g(&self, x: f64, y: f64) -> f64 {
        let s = self.spec;
        let intake = s.q_rev - s.m_hot / x;
        let work = s.reversible_work() - s.m_hot / x - s.m_cold / y;
        if intake > 0.0 {
            work / intake - self.eta
        } else {
            f64::NEG_INFINITY
        }
    }

    fn grad_f(&self, x: f64, y: f64) -> (f64, f64) {
        let tau = x + y;
        let pw = self.f(x, y) + self.p;
        (
            (self.spec.m_hot / (x * x) - pw) / tau,
            (self.spec.m_cold / (y * y) - pw) / tau,
        )
    }

    fn grad_g(&self, x: f64, y: f64) -> (f64, f64) {
        let s = self.spec;
        let d = s.q_rev - s.m_hot / x;
        let n = s.reversible_work() - s.m_hot / x - s.m_cold / y;
        (s.m_hot / (x * x) * (d - n) / (d * d), s.m_cold / (y * y) / d)
    }

    fn cross(&self, x: f64, y: f64) -> f64 {
        let (fx, fy) = self.grad_f(x, y);
        let (gx, gy) = self.grad_g(x, y);
        fx * gy - fy * gx
    }

    fn parallel(&self, x: f64, y: f64) -> f64 {
        let (fx, fy) = self.grad_f(x, y);
        let (gx, gy) = self.grad_g(x, y);
        (fx * gy - fy * gx).abs() / ((fx * fx + fy * fy).sqrt() * (gx * gx + gy * gy).sqrt())
    }

    /// Newton iteration for `f = 0, g = 0`.
    fn newton_crossing(&self, mut x: f64, mut y: f64, scale: f64) -> Option<(f64, f64)> {
        for _ in 0..60 {
            let (f, g) = (self.f(x, y), self.g(x, y));
            let (fx, fy) = self.grad_f(x, y);
            let (gx, gy) = self.grad_g(x, y);
            let det = fx * gy - fy * gx;
            if !(det.abs() > 0.0) || !g.is_finite() {
                return None;
            }
            let dx = (f * gy - fy * g) / det;
            let dy = (fx * g - f * gx) / det;
            x -= dx;
            y -= dy;
            if !(x > 0.0 && y > 0.0) {
                return None;
            }
            if dx.abs().max(dy.abs()) < 1e-14 * scale {
                return Some((x, y));
            }
        }
        None
    }

    /// Newton iteration for `f = 0` with parallel gradients (a touching point);
    /// the Jacobian of the cross product is taken by central differences.
    fn newton_touch(&self, mut x: f64, mut y: f64, scale: f64) -> Option<(f64, f64)> {
        for _ in 0..60 {
            let (f, c) = (self.f(x, y), self.cross(x, y));
            let (fx, fy) = self.grad_f(x, y);
            let h = 1e-7 * scale;
            let cx = (self.cross(x + h, y) - self.cross(x - h, y)) / (2.0 * h);
            let cy = (self.cross(x, y + h) - self.cross(x, y - h)) / (2.0 * h);
            let det = fx * cy - fy * cx;
            if !(det.abs() > 0.0) {
                return None;
            }
            let dx = (f * cy - fy * c) / det;
            let dy = (fx * c - f * cx) / det;
            x -= dx;
            y -= dy;
            if !(x > 0.0 && y > 0.0) {
                return None;
            }
            if dx.abs().max(dy.abs()) < 1e-12 * scale {
                return Some((x, y));
            }
        }
        None
    }
}

fn push_unique(out: &mut Vec<Intersection>, cand: Intersection) {
    let close = out.iter_mut().find(|o| {
        let dx = o.times.t_h - cand.times.t_h;
        let dy = o.times.t_c - cand.times.t_c;
        (dx * dx + dy * dy).sqrt() < DEDUP_DISTANCE
    });
    match close {
        Some(o) => o.tangential |= cand.tangential,
        None => out.push(cand),
    }
}

/// Closed-form closest approach of `eta(t_h, t_c) = eta` to the origin along
/// `t_h + t_c`: on that curve `t_c = M_c / (a - b / t_h)` with
/// `a = eta_C Q - eta Q`, `b = (1 - eta) M_h`, and the minimum of the total
/// time is `(sqrt(b) + sqrt(M_c))^2 / a`.
pub fn eta_curve_approach(spec: &EngineSpec, eta: f64) -> Option<EtaCurveApproach> {
    let a = spec.reversible_work() - eta * spec.q_rev;
    let b = (1.0 - eta) * spec.m_hot;
    if !(a > 0.0 && b >= 0.0) {
        return None;
    }
    let y = (spec.m_cold * b).sqrt();
    let t_h = (y + b) / a;
    let min_total = (b.sqrt() + spec.m_cold.sqrt()).powi(2) / a;
    Some(EtaCurveApproach {
        min_total,
        at: StrokeTimes {
            t_h,
            t_c: min_total - t_h,
        },
    })
}

/// Intersections of the level sets `P(t_h, t_c) = p` and `eta(t_h, t_c) = eta`.
///
/// The power level curve is traced by marching squares on a
/// `GRID_CELLS x GRID_CELLS` grid covering `(0, 1.05 tau_+]^2`. Sign changes
/// of `eta - eta_target` along the traced segments are bisected and polished
/// by Newton's method on both equations; segments where the efficiency comes
/// close without changing sign are tested for a touching point.
pub fn tangency_probe(spec: &EngineSpec, p: f64, eta: f64) -> Result<TangencyReport> {
    let window = spec.tau_window(p)?;
    if !eta.is_finite() {
        return Err(invalid("eta", "must be finite"));
    }
    let fields = Fields { spec, p, eta };
    let scale = window.tau_plus;
    let mut intersections = Vec::new();
    let eta_curve = eta_curve_approach(spec, eta);

    if spec.normalized_power(p) > 1.0 - 1e-12 {
        // the power level set has collapsed onto the maximum-power point
        let t = spec.emp_times()?;
        if fields.g(t.t_h, t.t_c).abs() < 1e-9 {
            intersections.push(Intersection {
                times: t,
                tangential: true,
            });
        }
        return Ok(TangencyReport {
            p,
            eta,
            window,
            intersections,
            power_span: (t.total(), t.total()),
            eta_curve,
        });
    }

    let n = GRID_CELLS;
    let hi = 1.05 * window.tau_plus;
    let lo = 1e-6 * hi;
    let step = (hi - lo) / n as f64;
    let coord = |i: usize| lo + step * i as f64;
    let mut grid = vec![0.0; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            grid[i * (n + 1) + j] = fields.f(coord(i), coord(j));
        }
    }
    let at = |i: usize, j: usize| grid[i * (n + 1) + j];
    let mut span = (f64::INFINITY, f64::NEG_INFINITY);

    for i in 0..n {
        for j in 0..n {
            let c = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            let inside = c.map(|v| v >= 0.0);
            if inside.iter().all(|&b| b) || inside.iter().all(|&b| !b) {
                continue;
            }
            let corners = [
                (coord(i), coord(j)),
                (coord(i + 1), coord(j)),
                (coord(i + 1), coord(j + 1)),
                (coord(i), coord(j + 1)),
            ];
            // edges: bottom, right, top, left
            let mut cross_pts: [Option<(f64, f64)>; 4] = [None; 4];
            for (e, slot) in cross_pts.iter_mut().enumerate() {
                let (a, b) = (e, (e + 1) % 4);
                if inside[a] != inside[b] {
                    let s = c[a] / (c[a] - c[b]);
                    *slot = Some((
                        corners[a].0 + s * (corners[b].0 - corners[a].0),
                        corners[a].1 + s * (corners[b].1 - corners[a].1),
                    ));
                }
            }
            let hits: Vec<usize> = (0..4).filter(|&e| cross_pts[e].is_some()).collect();
            let pairs: Vec<(usize, usize)> = if hits.len() == 2 {
                vec![(hits[0], hits[1])]
            } else {
                let center = c.iter().sum::<f64>() / 4.0;
                if (center >= 0.0) == inside[0] {
                    vec![(0, 1), (2, 3)]
                } else {
                    vec![(3, 0), (1, 2)]
                }
            };
            for (ea, eb) in pairs {
                let (pa, pb) = (cross_pts[ea].unwrap(), cross_pts[eb].unwrap());
                for q in [pa, pb] {
                    span.0 = span.0.min(q.0 + q.1);
                    span.1 = span.1.max(q.0 + q.1);
                }
                probe_segment(&fields, pa, pb, scale, step, &mut intersections);
            }
        }
    }
    intersections.sort_by(|a, b| a.times.t_h.total_cmp(&b.times.t_h));
    Ok(TangencyReport {
        p,
        eta,
        window,
        intersections,
        power_span: span,
        eta_curve,
    })
}

fn probe_segment(fields: &Fields, pa: (f64, f64), pb: (f64, f64), scale: f64, cell: f64, out: &mut Vec<Intersection>) {
    let ga = fields.g(pa.0, pa.1);
    let gb = fields.g(pb.0, pb.1);
    if !(ga.is_finite() && gb.is_finite()) {
        return;
    }
    let lerp = |s: f64| (pa.0 + s * (pb.0 - pa.0), pa.1 + s * (pb.1 - pa.1));
    if (ga >= 0.0) != (gb >= 0.0) {
        let (mut s0, mut s1, mut g0) = (0.0, 1.0, ga);
        for _ in 0..60 {
            let m = 0.5 * (s0 + s1);
            let q = lerp(m);
            let gm = fields.g(q.0, q.1);
            if (gm >= 0.0) == (g0 >= 0.0) {
                s0 = m;
                g0 = gm;
            } else {
                s1 = m;
            }
        }
        let q = lerp(0.5 * (s0 + s1));
        let polished = fields.newton_crossing(q.0, q.1, scale).unwrap_or(q);
        let tangential = fields.parallel(polished.0, polished.1) < 1e-6;
        push_unique(
            out,
            Intersection {
                times: StrokeTimes {
                    t_h: polished.0,
                    t_c: polished.1,
                },
                tangential,
            },
        );
        return;
    }
    // no sign change: a touching point is possible if g could reach zero here
    let q = lerp(0.5);
    let (gx, gy) = fields.grad_g(q.0, q.1);
    let reach = 2.0 * cell * (gx * gx + gy * gy).sqrt();
    if ga.abs().min(gb.abs()) > reach {
        return;
    }
    if let Some((x, y)) = fields.newton_touch(q.0, q.1, scale) {
        let inside_cell = (x - q.0).abs() <= 2.0 * cell && (y - q.1).abs() <= 2.0 * cell;
        if inside_cell && fields.g(x, y).abs() < 1e-10 && fields.f(x, y).abs() < 1e-10 * fields.p.max(1e-300) {
            push_unique(
                out,
                Intersection {
                    times: StrokeTimes { t_h: x, t_c: y },
                    tangential: true,
                },
            );
        }
    }
}
