//! One-dimensional search helpers shared by the numerical oracles.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x, f(x))` at the best point seen.
pub fn golden_max<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > x_tol && iters < 400 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Dense scan of `n` evenly spaced points on `[a, b]` followed by a golden
/// section on the bracket around the best sample.
pub fn scan_then_golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, n: usize, x_tol: f64) -> (f64, f64) {
    assert!(n >= 3, "scan needs at least 3 points");
    let step = (b - a) / (n - 1) as f64;
    let mut best = (a, f64::NEG_INFINITY);
    let mut best_i = 0;
    for i in 0..n {
        let x = a + step * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = a + step * best_i.saturating_sub(1) as f64;
    let hi = a + step * (best_i + 1).min(n - 1) as f64;
    let refined = golden_max(&mut f, lo, hi, x_tol);
    if refined.1 >= best.1 {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_parabola_peak() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scan_handles_multimodal_start() {
        let f = |x: f64| (3.0 * x).sin() + 0.1 * x;
        let (_, v) = scan_then_golden_max(f, 0.0, 6.0, 200, 1e-10);
        let brute = (0..=1_000_000)
            .map(|i| f(6.0 * i as f64 / 1e6))
            .fold(f64::MIN, f64::max);
        assert!(v >= brute - 1e-12);
    }
}
