//! Fixed-step ODE integration and grid quadrature.
//!
//! Determinism is a requirement throughout the crate (identical inputs must
//! reproduce identical output bytes), so integration uses the classical
//! fourth-order Runge–Kutta scheme on a caller-supplied grid — no adaptive
//! step control. Accuracy is certified downstream by Richardson half-step
//! comparison and by back-substitution into the equations being solved.
//!
//! Quadrature of sampled integrands uses composite Simpson panels on the same
//! grid, falling back to a trapezoid on the final panel when the panel count
//! is odd.

use crate::error::{Error, Result};

/// Uniform grid with `panels` equal steps spanning `[t0, t1]`
/// (`panels + 1` nodes, endpoints exact).
pub fn uniform_grid(t0: f64, t1: f64, panels: usize) -> Vec<f64> {
    assert!(panels >= 1, "uniform_grid needs at least one panel");
    let mut g = Vec::with_capacity(panels + 1);
    for i in 0..=panels {
        let frac = i as f64 / panels as f64;
        g.push(t0 + (t1 - t0) * frac);
    }
    g[panels] = t1;
    g
}

/// Split every panel of `grid` into `factor` equal sub-panels, keeping the
/// original nodes. Used for Richardson comparisons and convergence studies.
pub fn refine_grid(grid: &[f64], factor: usize) -> Vec<f64> {
    assert!(factor >= 1);
    let mut out = Vec::with_capacity((grid.len() - 1) * factor + 1);
    for w in grid.windows(2) {
        for k in 0..factor {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / factor as f64);
        }
    }
    out.push(*grid.last().expect("non-empty grid"));
    out
}

/// Integrate `y' = rhs(t, y)` with classical RK4 over the nodes of `grid`,
/// returning the state at every node (including the initial one).
///
/// The right-hand side is fallible so coordinate-singularity guards can abort
/// integration mid-step with a precise time stamp.
pub fn rk4_path<const N: usize>(
    mut rhs: impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    grid: &[f64],
    y0: [f64; N],
) -> Result<Vec<[f64; N]>> {
    if grid.len() < 2 {
        return Err(Error::InvalidArgument(
            "rk4_path: grid needs at least two nodes".into(),
        ));
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidArgument(format!(
                "rk4_path: grid must be strictly increasing (saw {} then {})",
                w[0], w[1]
            )));
        }
    }
    let mut path = Vec::with_capacity(grid.len());
    let mut y = y0;
    path.push(y);
    for w in grid.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = rhs(t, &y)?;
        let y2 = add_scaled(&y, &k1, h / 2.0);
        let k2 = rhs(t + h / 2.0, &y2)?;
        let y3 = add_scaled(&y, &k2, h / 2.0);
        let k3 = rhs(t + h / 2.0, &y3)?;
        let y4 = add_scaled(&y, &k3, h);
        let k4 = rhs(t + h, &y4)?;
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        path.push(y);
    }
    Ok(path)
}

fn add_scaled<const N: usize>(y: &[f64; N], k: &[f64; N], s: f64) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        out[i] += s * k[i];
    }
    out
}

/// Largest component-wise gap between a path and its half-step refinement at
/// the shared (coarse) nodes: a Richardson-style global-error estimate.
pub fn half_step_gap<const N: usize>(coarse: &[[f64; N]], fine: &[[f64; N]]) -> f64 {
    assert_eq!(
        (coarse.len() - 1) * 2 + 1,
        fine.len(),
        "half_step_gap expects a 2× refinement"
    );
    let mut gap = 0.0_f64;
    for (i, y) in coarse.iter().enumerate() {
        let z = &fine[2 * i];
        for k in 0..N {
            gap = gap.max((y[k] - z[k]).abs());
        }
    }
    gap
}

/// Cumulative integral of samples `fs` over the nodes `ts`, one value per
/// node, starting from 0.
///
/// Node pairs are integrated with the (generally non-uniform) Simpson rule;
/// an odd trailing panel — and every odd-indexed intermediate node — is
/// reached by a trapezoid step from its even neighbor.
pub fn cumulative_simpson(ts: &[f64], fs: &[f64]) -> Vec<f64> {
    assert_eq!(ts.len(), fs.len(), "cumulative_simpson: length mismatch");
    let n = ts.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    let mut i = 0;
    while i + 2 < n + 1 {
        if i + 2 < n {
            // Simpson over the panel pair [t_i, t_{i+2}] via the quadratic
            // through the three nodes.
            let (t0, t1, t2) = (ts[i], ts[i + 1], ts[i + 2]);
            let (f0, f1, f2) = (fs[i], fs[i + 1], fs[i + 2]);
            let h1 = t1 - t0;
            let h2 = t2 - t1;
            let big_h = h1 + h2;
            let pair = big_h / 6.0
                * ((2.0 - h2 / h1) * f0 + big_h * big_h / (h1 * h2) * f1 + (2.0 - h1 / h2) * f2);
            out[i + 2] = out[i] + pair;
            // The intermediate node gets a trapezoid from the left edge.
            out[i + 1] = out[i] + 0.5 * h1 * (f0 + f1);
            i += 2;
        } else {
            // Odd trailing panel: trapezoid fallback.
            let h = ts[i + 1] - ts[i];
            out[i + 1] = out[i] + 0.5 * h * (fs[i] + fs[i + 1]);
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rk4_matches_exponential_decay_at_fourth_order() {
        let rhs = |_t: f64, y: &[f64; 1]| Ok([-y[0]]);
        let mut errs = Vec::new();
        for panels in [20usize, 40, 80] {
            let grid = uniform_grid(0.0, 2.0, panels);
            let path = rk4_path(rhs, &grid, [1.0]).unwrap();
            errs.push((path.last().unwrap()[0] - (-2.0f64).exp()).abs());
        }
        let order1 = (errs[0] / errs[1]).log2();
        let order2 = (errs[1] / errs[2]).log2();
        assert!(
            (3.5..=4.5).contains(&order1) && (3.5..=4.5).contains(&order2),
            "orders {order1:.2}, {order2:.2} outside [3.5, 4.5]"
        );
    }

    #[test]
    fn rk4_conserves_harmonic_oscillator_energy() {
        let rhs = |_t: f64, y: &[f64; 2]| Ok([y[1], -y[0]]);
        let grid = uniform_grid(0.0, 20.0, 2000);
        let path = rk4_path(rhs, &grid, [1.0, 0.0]).unwrap();
        for y in &path {
            let e = y[0] * y[0] + y[1] * y[1];
            assert!((e - 1.0).abs() < 1e-9, "energy drift {:.3e}", (e - 1.0).abs());
        }
    }

    #[test]
    fn rk4_propagates_rhs_errors() {
        let rhs = |t: f64, _y: &[f64; 1]| {
            if t > 0.5 {
                Err(crate::error::Error::Singular {
                    t,
                    why: "test guard".into(),
                })
            } else {
                Ok([1.0])
            }
        };
        let grid = uniform_grid(0.0, 1.0, 10);
        assert!(matches!(
            rk4_path(rhs, &grid, [0.0]),
            Err(crate::error::Error::Singular { .. })
        ));
    }

    #[test]
    fn rk4_rejects_non_increasing_grid() {
        let rhs = |_t: f64, y: &[f64; 1]| Ok([y[0]]);
        assert!(rk4_path(rhs, &[0.0, 0.0, 1.0], [1.0]).is_err());
        assert!(rk4_path(rhs, &[0.0], [1.0]).is_err());
    }

    #[test]
    fn half_step_gap_shrinks_sixteen_fold() {
        let rhs = |t: f64, y: &[f64; 1]| Ok([t.sin() * y[0]]);
        let g1 = uniform_grid(0.0, 3.0, 30);
        let g2 = refine_grid(&g1, 2);
        let g4 = refine_grid(&g1, 4);
        let p1 = rk4_path(rhs, &g1, [1.0]).unwrap();
        let p2 = rk4_path(rhs, &g2, [1.0]).unwrap();
        let p4 = rk4_path(rhs, &g4, [1.0]).unwrap();
        let gap12 = half_step_gap(&p1, &p2);
        let p2_at_coarse: Vec<[f64; 1]> = p2.iter().copied().collect();
        let gap24 = half_step_gap(&p2_at_coarse, &p4);
        let ratio = gap12 / gap24;
        assert!(
            (10.0..=24.0).contains(&ratio),
            "half-step gap ratio {ratio:.2} not ≈ 16"
        );
    }

    #[test]
    fn simpson_integrates_cubic_exactly_on_uniform_grid() {
        let grid = uniform_grid(0.0, 2.0, 10);
        let fs: Vec<f64> = grid.iter().map(|&t| t * t * t - t).collect();
        let cum = cumulative_simpson(&grid, &fs);
        // ∫₀² (t³ − t) dt = 4 − 2 = 2, and Simpson is exact for cubics.
        assert!((cum.last().unwrap() - 2.0).abs() < 1e-13);
        // Interior even nodes are exact too.
        let t = grid[6];
        let exact = t.powi(4) / 4.0 - t * t / 2.0;
        assert!((cum[6] - exact).abs() < 1e-13);
    }

    #[test]
    fn simpson_fourth_order_on_smooth_integrand() {
        let exact = 1.0 - 2.0f64.cos();
        let mut errs = Vec::new();
        for panels in [8usize, 16, 32] {
            let grid = uniform_grid(0.0, 2.0, panels);
            let fs: Vec<f64> = grid.iter().map(|&t| t.sin()).collect();
            let cum = cumulative_simpson(&grid, &fs);
            errs.push((cum.last().unwrap() - exact).abs());
        }
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order > 3.5, "Simpson order {order:.2} too low");
    }

    #[test]
    fn odd_panel_count_falls_back_to_trapezoid_on_last_panel() {
        let grid = uniform_grid(0.0, 1.0, 9);
        let fs: Vec<f64> = grid.iter().map(|&t| t).collect();
        let cum = cumulative_simpson(&grid, &fs);
        // Linear integrand: both Simpson and trapezoid are exact.
        assert!((cum.last().unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn cumulative_simpson_is_additive_at_even_splits() {
        let grid = uniform_grid(0.0, 4.0, 16);
        let fs: Vec<f64> = grid.iter().map(|&t| (0.8 * t).cos() + 0.3 * t).collect();
        let whole = cumulative_simpson(&grid, &fs);
        let left = cumulative_simpson(&grid[..9], &fs[..9]);
        let right = cumulative_simpson(&grid[8..], &fs[8..]);
        let stitched = left[8] + right.last().unwrap();
        assert!(
            (whole.last().unwrap() - stitched).abs() < 1e-12,
            "additivity gap {:.3e}",
            (whole.last().unwrap() - stitched).abs()
        );
    }
}
