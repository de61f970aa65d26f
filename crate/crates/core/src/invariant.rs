//! Dynamical invariants and the auxiliary angle flow.
//!
//! For a Hamiltonian on the generator triple, a Hermitian invariant I(t)
//! satisfying ∂I/∂t + (1/i)[I, H] = 0 can be taken of the form
//!
//! ```text
//! I(t) = y·( ½ sin a_c e^{−ib} A + ½ sin a_c e^{ib} B ) + cos a_c · C
//! ```
//!
//! with constants κ = √(mn/2), x = 1/κ, y = m/κ. On the trigonometric branch
//! (mn > 0) the angle a_c = a is real; on the hyperbolic branch (mn < 0) it
//! continues to a_c = iα with α real, which keeps every matrix element of I
//! real-phased and I itself Hermitian for Hermitian generator pairs. The
//! invariant condition collapses to two coupled real equations for (a, b) —
//! the auxiliary system — solved here with classical fourth-order
//! Runge–Kutta plus half-step Richardson certification, and certified again
//! after the fact by back-substituting into the coefficient-space form of
//! the invariant condition.

use num_complex::Complex64;

use crate::algebra::{AlgebraSpec, Branch, Representation};
use crate::error::{Error, Result};
use crate::linalg::{commutator, cre, max_abs, CMat};
use crate::ode::{half_step_gap, refine_grid, rk4_path, uniform_grid};
use crate::schedule::CoefficientSchedule;

/// Coupling-strength threshold below which the angular-velocity term of the
/// auxiliary flow is dropped entirely (its prefactor ω sinθ vanishes, so the
/// otherwise-singular cotangent never enters).
const SIN_THETA_FLOOR: f64 = 1e-14;

/// Minimum |sin a| (or |sinh α|) at which the cotangent term is still
/// evaluated; below it the flow is genuinely singular.
const SIN_A_FLOOR: f64 = 1e-8;

/// Scalar constants of the invariant construction, fixed by the structure
/// constants alone.
#[derive(Debug, Clone, Copy)]
pub struct InvariantConstants {
    /// κ = √(mn/2), principal branch: real for mn > 0, i·|κ| for mn < 0.
    pub kappa: Complex64,
    /// |κ| = √(|mn|/2).
    pub kappa_modulus: f64,
    /// x = 1/κ; scales the ladder coefficients of the diagonalizing map.
    pub x: Complex64,
    /// y = m/κ; scales the ladder coefficients of the invariant.
    pub y: Complex64,
}

/// Constants κ, x, y from the structure constants.
pub fn kappa_constants(spec: &AlgebraSpec) -> InvariantConstants {
    let kappa = Complex64::new(spec.m * spec.n / 2.0, 0.0).sqrt();
    InvariantConstants {
        kappa,
        kappa_modulus: kappa.norm(),
        x: kappa.inv(),
        y: cre(spec.m) / kappa,
    }
}

/// Right-hand side of the auxiliary angle system at one point.
///
/// Trigonometric branch (state `a` is the polar angle a):
///   ȧ = −κ ω sinθ sin(b−φ),
///   ḃ = m ω cosθ − κ ω sinθ cot(a) cos(b−φ).
/// Hyperbolic branch (state `a` is the rapidity α, from a = iα):
///   α̇ = −|κ| ω sinθ sin(b−φ),
///   ḃ = m ω cosθ − |κ| ω sinθ coth(α) cos(b−φ).
///
/// When ω sinθ vanishes the (co)tangent term carries a zero prefactor and is
/// skipped, so the decoupled fixed point a = 0 is legal; otherwise a
/// near-zero sin a (or sinh α) is reported as a genuine singularity.
pub fn auxiliary_rates(
    spec: &AlgebraSpec,
    branch: Branch,
    t: f64,
    omega: f64,
    theta: f64,
    phi: f64,
    a: f64,
    b: f64,
) -> Result<[f64; 2]> {
    let kmod = kappa_constants(spec).kappa_modulus;
    let st = theta.sin();
    let adot = -kmod * omega * st * (b - phi).sin();
    let mut bdot = spec.m * omega * theta.cos();
    if (omega * st).abs() > SIN_THETA_FLOOR {
        let (sin_a, cos_a) = match branch {
            Branch::Trigonometric => (a.sin(), a.cos()),
            Branch::Hyperbolic => (a.sinh(), a.cosh()),
        };
        if sin_a.abs() < SIN_A_FLOOR {
            return Err(Error::Singular {
                t,
                why: format!(
                    "auxiliary angle passes through the pole (|sin a| = {:.3e} with active coupling)",
                    sin_a.abs()
                ),
            });
        }
        bdot -= kmod * omega * st * (cos_a / sin_a) * (b - phi).cos();
    }
    Ok([adot, bdot])
}

/// Initial angles that make the invariant commute with H at the initial
/// time (the adiabatic or "static" start).
///
/// Trigonometric branch: (a₀, b₀) = (θ(t₀), φ(t₀)). Hyperbolic branch:
/// b₀ = φ(t₀) and tanh α₀ = (|κ|/m)·tanθ(t₀), which exists only in the
/// elliptic regime |tanθ| < m/|κ|.
pub fn static_start(spec: &AlgebraSpec, sched: &CoefficientSchedule) -> Result<(f64, f64)> {
    let t0 = sched.t_start;
    let theta0 = sched.theta(t0);
    let phi0 = sched.phi(t0);
    match spec.branch() {
        Branch::Trigonometric => Ok((theta0, phi0)),
        Branch::Hyperbolic => {
            let kmod = kappa_constants(spec).kappa_modulus;
            let ratio = kmod / spec.m * theta0.tan();
            if !(ratio.abs() < 1.0) {
                return Err(Error::HyperbolicRegime {
                    t: t0,
                    why: format!(
                        "no static rapidity: (|κ|/m)·tanθ = {ratio:.6} lies outside (−1, 1)"
                    ),
                });
            }
            Ok((ratio.atanh(), phi0))
        }
    }
}

/// Solved auxiliary angles on a time grid.
#[derive(Debug, Clone)]
pub struct AuxiliaryTrajectory {
    pub branch: Branch,
    pub grid: Vec<f64>,
    /// Polar angle a (trigonometric) or rapidity α (hyperbolic) per node.
    pub a: Vec<f64>,
    /// Phase angle b per node.
    pub b: Vec<f64>,
    /// Time derivative of `a` per node, from the right-hand side.
    pub adot: Vec<f64>,
    /// Time derivative of `b` per node, from the right-hand side.
    pub bdot: Vec<f64>,
    /// Half-step Richardson estimate of the worst-case solution error.
    pub richardson_err: f64,
    /// Largest back-substitution residual of the coefficient-space invariant
    /// condition along the trajectory (representation-independent check).
    pub defining_residual: f64,
}

impl AuxiliaryTrajectory {
    /// Number of grid nodes.
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Complex angle a_c at node `k`: a on the trigonometric branch, iα on
    /// the hyperbolic branch.
    pub fn a_complex(&self, k: usize) -> Complex64 {
        match self.branch {
            Branch::Trigonometric => cre(self.a[k]),
            Branch::Hyperbolic => Complex64::new(0.0, self.a[k]),
        }
    }
}

/// Ladder coefficient p (on A; its conjugate multiplies B) and diagonal
/// coefficient q (on C) of the invariant at angles (a, b).
///
/// Both are built from the complex angle, and p's prefactor y·½·sin a_c is
/// real on either branch, so q is real and I is Hermitian whenever B = A†.
pub fn invariant_coefficients(spec: &AlgebraSpec, a: f64, b: f64) -> (Complex64, f64) {
    let consts = kappa_constants(spec);
    let a_c = match spec.branch() {
        Branch::Trigonometric => cre(a),
        Branch::Hyperbolic => Complex64::new(0.0, a),
    };
    let radial = consts.y * 0.5 * a_c.sin();
    debug_assert!(radial.im.abs() <= 1e-12 * radial.norm().max(1.0));
    let p = cre(radial.re) * Complex64::from_polar(1.0, -b);
    let q = a_c.cos().re;
    (p, q)
}

/// Invariant matrix I = p A + p̄ B + q C at angles (a, b).
pub fn invariant_matrix(rep: &Representation, a: f64, b: f64) -> CMat {
    let (p, q) = invariant_coefficients(&rep.spec, a, b);
    rep.a.mapv(|z| z * p) + rep.b.mapv(|z| z * p.conj()) + rep.c.mapv(|z| z * cre(q))
}

/// Analytic time derivative ∂I/∂t at angles (a, b) with rates (ȧ, ḃ).
pub fn invariant_time_derivative(
    rep: &Representation,
    a: f64,
    b: f64,
    adot: f64,
    bdot: f64,
) -> CMat {
    let consts = kappa_constants(&rep.spec);
    let (a_c, adot_c) = match rep.spec.branch() {
        Branch::Trigonometric => (cre(a), cre(adot)),
        Branch::Hyperbolic => (Complex64::new(0.0, a), Complex64::new(0.0, adot)),
    };
    let phase = Complex64::from_polar(1.0, -b);
    // d/dt [ y·½ sin a_c e^{−ib} ] = y·½ (cos a_c · ȧ_c − i ḃ sin a_c) e^{−ib}
    let pdot = consts.y * 0.5 * (a_c.cos() * adot_c - Complex64::i() * cre(bdot) * a_c.sin())
        * phase;
    // d/dt cos a_c = −sin a_c · ȧ_c (real on both branches)
    let qdot = (-a_c.sin() * adot_c).re;
    rep.a.mapv(|z| z * pdot) + rep.b.mapv(|z| z * pdot.conj()) + rep.c.mapv(|z| z * cre(qdot))
}

/// Back-substitution residual of the invariant condition in coefficient
/// space at one time, given angles and their rates.
///
/// Writing I = p A + p̄ B + q C and the traceless part of H as
/// u A + ū B + v C, the condition ∂I/∂t + (1/i)[I, H] = 0 is equivalent to
/// the two scalar equations ṗ = i m (q u − p v) and q̇ = −2 n Im(p ū).
/// Returns |ṗ − i m (q u − p v)| + |q̇ + 2 n Im(p ū)|.
pub fn defining_residual_at(
    spec: &AlgebraSpec,
    sched: &CoefficientSchedule,
    t: f64,
    a: f64,
    b: f64,
    adot: f64,
    bdot: f64,
) -> f64 {
    let consts = kappa_constants(spec);
    let (a_c, adot_c) = match spec.branch() {
        Branch::Trigonometric => (cre(a), cre(adot)),
        Branch::Hyperbolic => (Complex64::new(0.0, a), Complex64::new(0.0, adot)),
    };
    let phase = Complex64::from_polar(1.0, -b);
    let p = consts.y * 0.5 * a_c.sin() * phase;
    let q = a_c.cos();
    let pdot = consts.y * 0.5 * (a_c.cos() * adot_c - Complex64::i() * cre(bdot) * a_c.sin())
        * phase;
    let qdot = -a_c.sin() * adot_c;

    let omega = sched.omega(t);
    let theta = sched.theta(t);
    let phi = sched.phi(t);
    let u = Complex64::from_polar(0.5 * omega * theta.sin(), -phi);
    let v = cre(omega * theta.cos());

    let r_a = pdot - Complex64::i() * cre(spec.m) * (q * u - p * v);
    let r_c = qdot + cre(2.0 * spec.n * (p * u.conj()).im);
    r_a.norm() + r_c.norm()
}

/// Integrate the auxiliary system over the schedule's domain.
///
/// `panels` uniform Runge–Kutta panels (raised to the next even count). The
/// solution is certified two ways: a half-step Richardson comparison must
/// estimate the error below `accuracy_goal`, and the coefficient-space
/// invariant condition is back-substituted at every node. Failure of the
/// Richardson certificate is reported as [`Error::IntegrationAccuracy`].
pub fn solve_auxiliary(
    spec: &AlgebraSpec,
    sched: &CoefficientSchedule,
    a0: f64,
    b0: f64,
    panels: usize,
    accuracy_goal: f64,
) -> Result<AuxiliaryTrajectory> {
    if panels < 2 {
        return Err(Error::InvalidArgument(format!(
            "auxiliary solve needs at least 2 panels, got {panels}"
        )));
    }
    let panels = panels + panels % 2;
    let branch = spec.branch();
    let grid = uniform_grid(sched.t_start, sched.t_end, panels);
    let rhs = |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        auxiliary_rates(
            spec,
            branch,
            t,
            sched.omega(t),
            sched.theta(t),
            sched.phi(t),
            y[0],
            y[1],
        )
    };
    let coarse = rk4_path(&rhs, &grid, [a0, b0])?;
    let fine_grid = refine_grid(&grid, 2);
    let fine = rk4_path(&rhs, &fine_grid, [a0, b0])?;
    let richardson_err = half_step_gap(&coarse, &fine);
    if !(richardson_err <= accuracy_goal) {
        return Err(Error::IntegrationAccuracy(format!(
            "auxiliary solve: Richardson error estimate {richardson_err:.3e} exceeds goal {accuracy_goal:.3e} \
             with {panels} panels; refine the grid"
        )));
    }

    let mut a = Vec::with_capacity(grid.len());
    let mut b = Vec::with_capacity(grid.len());
    let mut adot = Vec::with_capacity(grid.len());
    let mut bdot = Vec::with_capacity(grid.len());
    let mut defining_residual = 0.0_f64;
    for (k, &t) in grid.iter().enumerate() {
        let y = fine[2 * k];
        let rates = rhs(t, &y)?;
        defining_residual =
            defining_residual.max(defining_residual_at(spec, sched, t, y[0], y[1], rates[0], rates[1]));
        a.push(y[0]);
        b.push(y[1]);
        adot.push(rates[0]);
        bdot.push(rates[1]);
    }
    Ok(AuxiliaryTrajectory {
        branch,
        grid,
        a,
        b,
        adot,
        bdot,
        richardson_err,
        defining_residual,
    })
}

/// Relative matrix residual of the invariant condition at trajectory node
/// `k`: ‖∂I/∂t − i[I, H]‖ / max(1, ‖H‖) in the entrywise max norm,
/// restricted to the leading subspace on which truncated ladder products
/// are exact.
pub fn invariant_residual(
    rep: &Representation,
    sched: &CoefficientSchedule,
    traj: &AuxiliaryTrajectory,
    k: usize,
) -> Result<f64> {
    let t = traj.grid[k];
    let h = crate::hamiltonian::assemble(rep, sched, t)?;
    let i_mat = invariant_matrix(rep, traj.a[k], traj.b[k]);
    let didt = invariant_time_derivative(rep, traj.a[k], traj.b[k], traj.adot[k], traj.bdot[k]);
    let comm = commutator(&i_mat, &h);
    let resid = didt - comm.mapv(|z| z * Complex64::i());
    let w = rep.interior_dim;
    let r = max_abs(&Representation::leading_block(&resid, w));
    let scale = max_abs(&Representation::leading_block(&h, w)).max(1.0);
    Ok(r / scale)
}
