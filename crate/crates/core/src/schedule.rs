//! Time-dependent coefficient schedules.
//!
//! A driven Hamiltonian in this crate is described by smooth real coefficient
//! functions of time: an overall frequency ω(t), polar/azimuthal mixing
//! angles θ(t), φ(t), and an optional scalar offset c₀(t) multiplying the
//! identity. [`TimeFunction`] covers the supported shapes — constant, linear
//! ramp, sinusoidal sweep, and tabulated samples interpolated by a natural
//! cubic spline (derivatives come from the spline as well).
//!
//! [`CoefficientSchedule`] bundles the four coefficient functions with the
//! time interval on which they are meant to be evaluated.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Natural cubic spline through strictly increasing sample points.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    ts: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the nodes (natural boundary: zero at both ends).
    m2: Vec<f64>,
}

impl CubicSpline {
    /// Fit a natural cubic spline. Requires at least two nodes with strictly
    /// increasing abscissae.
    pub fn new(ts: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if ts.len() != ys.len() {
            return Err(Error::InvalidArgument(format!(
                "spline: {} abscissae vs {} ordinates",
                ts.len(),
                ys.len()
            )));
        }
        if ts.len() < 2 {
            return Err(Error::InvalidArgument(
                "spline: need at least two sample points".into(),
            ));
        }
        for w in ts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument(format!(
                    "spline: abscissae must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        let n = ts.len();
        let mut m2 = vec![0.0; n];
        if n > 2 {
            // Thomas solve of the tridiagonal natural-spline system for the
            // interior second derivatives.
            let mut diag = vec![0.0; n - 2];
            let mut upper = vec![0.0; n - 2];
            let mut rhs = vec![0.0; n - 2];
            for i in 1..n - 1 {
                let h0 = ts[i] - ts[i - 1];
                let h1 = ts[i + 1] - ts[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
            }
            for i in 1..n - 2 {
                let lower = ts[i + 1] - ts[i]; // h of the previous row
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            for i in (0..n - 2).rev() {
                let next = if i + 1 < n - 2 { m2[i + 2] } else { 0.0 };
                m2[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
            }
        }
        Ok(Self { ts, ys, m2 })
    }

    fn segment(&self, t: f64) -> usize {
        // Clamp outside the table to the boundary segments (linear-ish
        // extrapolation through the end cubic).
        let n = self.ts.len();
        if t <= self.ts[0] {
            return 0;
        }
        if t >= self.ts[n - 1] {
            return n - 2;
        }
        match self
            .ts
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(i) => i - 1,
        }
    }

    /// Spline value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let a = (self.ts[i + 1] - t) / h;
        let b = (t - self.ts[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m2[i] + (b * b * b - b) * self.m2[i + 1]) * h * h / 6.0
    }

    /// Spline derivative at `t`.
    pub fn deriv(&self, t: f64) -> f64 {
        let i = self.segment(t);
        let h = self.ts[i + 1] - self.ts[i];
        let a = (self.ts[i + 1] - t) / h;
        let b = (t - self.ts[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            - (3.0 * a * a - 1.0) / 6.0 * h * self.m2[i]
            + (3.0 * b * b - 1.0) / 6.0 * h * self.m2[i + 1]
    }

    /// The sample abscissae.
    pub fn nodes(&self) -> &[f64] {
        &self.ts
    }
}

/// Scalar coefficient as a function of time.
#[derive(Debug, Clone)]
pub enum TimeFunction {
    /// Fixed value.
    Constant(f64),
    /// Linear interpolation from `(t0, v0)` to `(t1, v1)`, extended linearly
    /// outside.
    Ramp { t0: f64, v0: f64, t1: f64, v1: f64 },
    /// `offset + amplitude · sin(angular_frequency · t + phase)`.
    Sinusoid {
        offset: f64,
        amplitude: f64,
        angular_frequency: f64,
        phase: f64,
    },
    /// Tabulated samples with natural cubic spline interpolation.
    Tabulated(CubicSpline),
}

impl TimeFunction {
    /// Fixed value.
    pub fn constant(v: f64) -> Self {
        TimeFunction::Constant(v)
    }

    /// Linear ramp from `v0` at `t0` to `v1` at `t1`.
    pub fn ramp(t0: f64, v0: f64, t1: f64, v1: f64) -> Result<Self> {
        if !(t1 > t0) {
            return Err(Error::InvalidArgument(format!(
                "ramp: t1 = {t1} must exceed t0 = {t0}"
            )));
        }
        Ok(TimeFunction::Ramp { t0, v0, t1, v1 })
    }

    /// Sinusoidal sweep `offset + amplitude·sin(ω_sweep·t + phase)`.
    pub fn sinusoid(offset: f64, amplitude: f64, angular_frequency: f64, phase: f64) -> Self {
        TimeFunction::Sinusoid {
            offset,
            amplitude,
            angular_frequency,
            phase,
        }
    }

    /// Tabulated samples with spline interpolation.
    pub fn tabulated(ts: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Ok(TimeFunction::Tabulated(CubicSpline::new(ts, ys)?))
    }

    /// Value at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant(v) => *v,
            TimeFunction::Ramp { t0, v0, t1, v1 } => v0 + (v1 - v0) * (t - t0) / (t1 - t0),
            TimeFunction::Sinusoid {
                offset,
                amplitude,
                angular_frequency,
                phase,
            } => offset + amplitude * (angular_frequency * t + phase).sin(),
            TimeFunction::Tabulated(s) => s.eval(t),
        }
    }

    /// Time derivative at `t`.
    pub fn deriv(&self, t: f64) -> f64 {
        match self {
            TimeFunction::Constant(_) => 0.0,
            TimeFunction::Ramp { t0, v0, t1, v1 } => (v1 - v0) / (t1 - t0),
            TimeFunction::Sinusoid {
                amplitude,
                angular_frequency,
                phase,
                ..
            } => amplitude * angular_frequency * (angular_frequency * t + phase).cos(),
            TimeFunction::Tabulated(s) => s.deriv(t),
        }
    }

    /// True when the function is a literal constant.
    pub fn is_constant(&self) -> bool {
        matches!(self, TimeFunction::Constant(_))
    }
}

/// Complex coefficient built from independent real and imaginary parts.
#[derive(Debug, Clone)]
pub struct ComplexTimeFunction {
    pub re: TimeFunction,
    pub im: TimeFunction,
}

impl ComplexTimeFunction {
    pub fn new(re: TimeFunction, im: TimeFunction) -> Self {
        Self { re, im }
    }

    pub fn constant(z: Complex64) -> Self {
        Self {
            re: TimeFunction::constant(z.re),
            im: TimeFunction::constant(z.im),
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        Complex64::new(self.re.eval(t), self.im.eval(t))
    }

    pub fn is_constant(&self) -> bool {
        self.re.is_constant() && self.im.is_constant()
    }
}

/// Coefficient schedule (ω, θ, φ, c₀) over a fixed time interval.
#[derive(Debug, Clone)]
pub struct CoefficientSchedule {
    pub omega: TimeFunction,
    pub theta: TimeFunction,
    pub phi: TimeFunction,
    pub c0: TimeFunction,
    pub t_start: f64,
    pub t_end: f64,
}

impl CoefficientSchedule {
    /// Bundle coefficient functions over `[t_start, t_end]`.
    pub fn new(
        omega: TimeFunction,
        theta: TimeFunction,
        phi: TimeFunction,
        c0: TimeFunction,
        t_start: f64,
        t_end: f64,
    ) -> Result<Self> {
        if !(t_end > t_start) {
            return Err(Error::InvalidArgument(format!(
                "schedule: t_end = {t_end} must exceed t_start = {t_start}"
            )));
        }
        Ok(Self {
            omega,
            theta,
            phi,
            c0,
            t_start,
            t_end,
        })
    }

    /// Constant-coefficient schedule.
    pub fn constant(omega: f64, theta: f64, phi: f64, c0: f64, t_start: f64, t_end: f64) -> Self {
        Self::new(
            TimeFunction::constant(omega),
            TimeFunction::constant(theta),
            TimeFunction::constant(phi),
            TimeFunction::constant(c0),
            t_start,
            t_end,
        )
        .expect("constant schedule interval")
    }

    /// Replace the identity-offset coefficient.
    pub fn with_c0(mut self, c0: TimeFunction) -> Self {
        self.c0 = c0;
        self
    }

    pub fn omega(&self, t: f64) -> f64 {
        self.omega.eval(t)
    }

    pub fn theta(&self, t: f64) -> f64 {
        self.theta.eval(t)
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.phi.eval(t)
    }

    pub fn c0(&self, t: f64) -> f64 {
        self.c0.eval(t)
    }

    /// Is `t` inside the schedule domain (with a small slack for grid-edge
    /// rounding)?
    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-9 * (self.t_end - self.t_start).abs().max(1.0);
        t >= self.t_start - slack && t <= self.t_end + slack
    }

    /// Error unless `t` lies inside the schedule domain.
    pub fn check_domain(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                t_start: self.t_start,
                t_end: self.t_end,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_interpolates_nodes_exactly() {
        let ts: Vec<f64> = (0..9).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = ts.iter().map(|&t| (1.3 * t).sin() + 0.2 * t).collect();
        let s = CubicSpline::new(ts.clone(), ys.clone()).unwrap();
        for (t, y) in ts.iter().zip(ys.iter()) {
            assert!((s.eval(*t) - y).abs() < 1e-13, "node value off at t={t}");
        }
    }

    #[test]
    fn spline_converges_to_smooth_function() {
        // sin on [0, π] has vanishing curvature at both endpoints, so the
        // natural boundary condition is exact and the full h⁴ rate shows.
        let err_for = |n: usize| -> f64 {
            let ts: Vec<f64> = (0..=n).map(|i| std::f64::consts::PI * i as f64 / n as f64).collect();
            let ys: Vec<f64> = ts.iter().map(|&t| t.sin()).collect();
            let s = CubicSpline::new(ts, ys).unwrap();
            let mut worst = 0.0_f64;
            for k in 0..(4 * n) {
                let t = std::f64::consts::PI * (k as f64 + 0.5) / (4 * n) as f64;
                worst = worst.max((s.eval(t) - t.sin()).abs());
            }
            worst
        };
        let e1 = err_for(24);
        let e2 = err_for(48);
        assert!(e2 < e1 / 8.0, "spline error {e1:.3e} → {e2:.3e} not ≈ h⁴");
    }

    #[test]
    fn spline_derivative_tracks_cosine() {
        let n = 60;
        let ts: Vec<f64> = (0..=n).map(|i| 3.0 * i as f64 / n as f64).collect();
        let ys: Vec<f64> = ts.iter().map(|&t| t.sin()).collect();
        let s = CubicSpline::new(ts, ys).unwrap();
        for k in 8..=52 {
            let t = 3.0 * k as f64 / n as f64;
            assert!(
                (s.deriv(t) - t.cos()).abs() < 5e-5,
                "derivative off by {:.3e} at t={t}",
                (s.deriv(t) - t.cos()).abs()
            );
        }
    }

    #[test]
    fn two_point_spline_is_linear() {
        let s = CubicSpline::new(vec![0.0, 2.0], vec![1.0, 5.0]).unwrap();
        assert!((s.eval(0.5) - 2.0).abs() < 1e-14);
        assert!((s.deriv(1.7) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn spline_rejects_bad_tables() {
        assert!(CubicSpline::new(vec![0.0], vec![1.0]).is_err());
        assert!(CubicSpline::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn ramp_interpolates_and_differentiates() {
        let r = TimeFunction::ramp(0.0, 1.0, 2.0, 5.0).unwrap();
        assert!((r.eval(1.0) - 3.0).abs() < 1e-14);
        assert!((r.deriv(0.3) - 2.0).abs() < 1e-14);
        assert!(TimeFunction::ramp(1.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn sinusoid_matches_closed_form() {
        let s = TimeFunction::sinusoid(0.5, 0.2, 3.0, 0.7);
        let t = 1.234;
        assert!((s.eval(t) - (0.5 + 0.2 * (3.0 * t + 0.7).sin())).abs() < 1e-15);
        assert!((s.deriv(t) - 0.6 * (3.0 * t + 0.7).cos()).abs() < 1e-15);
    }

    #[test]
    fn schedule_domain_checks() {
        let sched = CoefficientSchedule::constant(1.0, 0.4, 0.0, 0.0, 0.0, 2.0);
        assert!(sched.check_domain(1.999999999).is_ok());
        assert!(sched.check_domain(2.0).is_ok());
        assert!(matches!(
            sched.check_domain(2.1),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(CoefficientSchedule::new(
            TimeFunction::constant(1.0),
            TimeFunction::constant(0.0),
            TimeFunction::constant(0.0),
            TimeFunction::constant(0.0),
            1.0,
            1.0
        )
        .is_err());
    }
}
