//! Composite Gauss–Legendre quadrature on an interval.

/// Five-point Gauss–Legendre nodes on `[-1, 1]`.
const NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];

const WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

/// Integrates `f` over `[a, b]` with `panels` equal panels of five-point
/// Gauss–Legendre. The integrand may fail; the first error is returned.
pub fn composite_gauss<F, E>(a: f64, b: f64, panels: usize, mut f: F) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        let mut panel = 0.0;
        for (x, w) in NODES.iter().zip(WEIGHTS) {
            panel += w * f(mid + half * x)?;
        }
        total += half * panel;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_degree_nine() {
        let got: f64 = composite_gauss::<_, ()>(0.0, 2.0, 1, |x| Ok(x.powi(9))).unwrap();
        assert_abs_diff_eq!(got, 2f64.powi(10) / 10.0, epsilon = 1e-11);
    }

    #[test]
    fn smooth_integrand() {
        let got: f64 = composite_gauss::<_, ()>(0.0, 3.0, 8, |x| Ok(x.sin())).unwrap();
        assert_abs_diff_eq!(got, 1.0 - 3f64.cos(), epsilon = 1e-14);
    }

    #[test]
    fn propagates_errors() {
        let got = composite_gauss(0.0, 1.0, 4, |x| if x > 0.5 { Err(x) } else { Ok(1.0) });
        assert!(got.is_err());
    }
}
