//! Invariant-diagonalizing transformation, phase decomposition, and exact
//! solution states.
//!
//! The unitary V = exp(βA − β*B) with β = −(a_c/2)·x·e^{−ib} maps the
//! invariant onto the diagonal generator, V†IV = C, on both branches (the
//! product a_c·x is real either way, so the exponent is anti-Hermitian for
//! Hermitian generator pairs). In the transformed frame the Hamiltonian
//! collapses onto C as well:
//!
//! ```text
//! V†HV − iV†(∂V/∂t) = h_V(t)·C + c₀(t)·1,
//! h_V = ω[cos a_c cosθ + (κ/m) sin a_c sinθ cos(b−φ)] + (ḃ/m)(1 − cos a_c),
//! ```
//!
//! so each invariant eigenvector λ evolves with the pure phase
//! exp[−i(λ·φ_d + λ·φ_g + φ_c)]: a dynamical part from the ω-term, a
//! geometric part λ∫(ḃ/m)(1−cos a_c)dt fixed by the swept solid angle
//! rather than the schedule's speed, and the c-number part ∫c₀ dt. The exact
//! solutions are those phases times V applied to the eigenvectors of C.

use num_complex::Complex64;

use crate::algebra::{AlgebraSpec, Branch, Representation};
use crate::error::{Error, Result};
use crate::invariant::{auxiliary_rates, kappa_constants, AuxiliaryTrajectory};
use crate::linalg::{adjoint, cre, matrix_exp, max_abs, CMat, CVec};
use crate::ode::cumulative_simpson;
use crate::schedule::CoefficientSchedule;

/// Complex angle for a branch: a (trigonometric) or iα (hyperbolic).
fn complex_angle(branch: Branch, a: f64) -> Complex64 {
    match branch {
        Branch::Trigonometric => cre(a),
        Branch::Hyperbolic => Complex64::new(0.0, a),
    }
}

/// The invariant-diagonalizing unitary V = exp(βA − β*B) at angles (a, b),
/// with β = −(a_c/2)·x·e^{−ib}.
pub fn unitary_v(rep: &Representation, a: f64, b: f64) -> Result<CMat> {
    let consts = kappa_constants(&rep.spec);
    let a_c = complex_angle(rep.spec.branch(), a);
    let radial = a_c * consts.x * 0.5;
    debug_assert!(radial.im.abs() <= 1e-12 * radial.norm().max(1.0));
    let beta = -cre(radial.re) * Complex64::from_polar(1.0, -b);
    let gen = rep.a.mapv(|z| z * beta) - rep.b.mapv(|z| z * beta.conj());
    matrix_exp(&gen)
}

/// V†IV at angles (a, b): equals C up to truncation leakage.
pub fn transformed_invariant(rep: &Representation, a: f64, b: f64) -> Result<CMat> {
    let v = unitary_v(rep, a, b)?;
    let i_mat = crate::invariant::invariant_matrix(rep, a, b);
    Ok(adjoint(&v).dot(&i_mat).dot(&v))
}

/// Relative deviation ‖V†IV − C‖ / max(1, ‖C‖) in the entrywise max norm on
/// the certification window ([`Representation::contract_dim`]).
pub fn invariant_contract_deviation(rep: &Representation, a: f64, b: f64) -> Result<f64> {
    let w = rep.contract_dim();
    let diff = transformed_invariant(rep, a, b)? - &rep.c;
    let dev = max_abs(&Representation::leading_block(&diff, w));
    let scale = max_abs(&Representation::leading_block(&rep.c, w)).max(1.0);
    Ok(dev / scale)
}

/// Check the diagonalization contract V†IV = C to tolerance `tol`
/// (relative, on the certification window); error on violation.
pub fn check_invariant_contract(rep: &Representation, a: f64, b: f64, tol: f64) -> Result<f64> {
    let dev = invariant_contract_deviation(rep, a, b)?;
    if !(dev <= tol) {
        return Err(Error::ContractViolation(format!(
            "V†IV deviates from the diagonal generator by {dev:.3e} (tolerance {tol:.3e}) \
             at angles a = {a:.6}, b = {b:.6}"
        )));
    }
    Ok(dev)
}

/// Dynamical phase rate per unit invariant eigenvalue:
/// ω[cos a_c cosθ + (κ/m) sin a_c sinθ cos(b−φ)].
pub fn dynamical_rate(spec: &AlgebraSpec, sched: &CoefficientSchedule, t: f64, a: f64, b: f64) -> f64 {
    let consts = kappa_constants(spec);
    let a_c = complex_angle(spec.branch(), a);
    let omega = sched.omega(t);
    let theta = sched.theta(t);
    let phi = sched.phi(t);
    let cross = consts.kappa / cre(spec.m) * a_c.sin();
    debug_assert!(cross.im.abs() <= 1e-12 * cross.norm().max(1.0));
    omega * (a_c.cos().re * theta.cos() + cross.re * theta.sin() * (b - phi).cos())
}

/// Geometric phase rate per unit invariant eigenvalue: (ḃ/m)(1 − cos a_c).
/// Integrated over a closed loop of the auxiliary angles this depends only
/// on the loop geometry, not on the traversal speed.
pub fn geometric_rate(spec: &AlgebraSpec, a: f64, bdot: f64) -> f64 {
    let a_c = complex_angle(spec.branch(), a);
    bdot / spec.m * (1.0 - a_c.cos().re)
}

/// Coefficient h_V of C in the transformed Hamiltonian at trajectory node
/// `k` (the dynamical and geometric rates combined).
pub fn transformed_hamiltonian_coefficient(
    spec: &AlgebraSpec,
    sched: &CoefficientSchedule,
    traj: &AuxiliaryTrajectory,
    k: usize,
) -> f64 {
    dynamical_rate(spec, sched, traj.grid[k], traj.a[k], traj.b[k])
        + geometric_rate(spec, traj.a[k], traj.bdot[k])
}

/// Advance the auxiliary angles from node `k` by a (possibly negative)
/// offset `delta` with a few fixed Runge–Kutta substeps. Used to form
/// centered differences of V without re-solving the whole trajectory.
fn angles_at_offset(
    spec: &AlgebraSpec,
    sched: &CoefficientSchedule,
    traj: &AuxiliaryTrajectory,
    k: usize,
    delta: f64,
) -> Result<(f64, f64)> {
    const SUBSTEPS: usize = 16;
    let branch = traj.branch;
    let mut t = traj.grid[k];
    let mut y = [traj.a[k], traj.b[k]];
    let h = delta / SUBSTEPS as f64;
    let rhs = |t: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        auxiliary_rates(spec, branch, t, sched.omega(t), sched.theta(t), sched.phi(t), y[0], y[1])
    };
    for _ in 0..SUBSTEPS {
        let k1 = rhs(t, &y)?;
        let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
        let k2 = rhs(t + 0.5 * h, &y2)?;
        let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
        let k3 = rhs(t + 0.5 * h, &y3)?;
        let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
        let k4 = rhs(t + h, &y4)?;
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
    }
    Ok((y[0], y[1]))
}

/// Transformed-frame Hamiltonian matrix V†HV − iV†(∂V/∂t) at trajectory
/// node `k`, with ∂V/∂t formed by a centered difference of half-width
/// `delta` (choose `k` away from the endpoints so t_k ± δ stays in domain).
///
/// Up to the O(δ²) differencing error this equals h_V·C + c₀·1 on the
/// certification window; halving `delta` should shrink the off-diagonal
/// leakage fourfold.
pub fn transformed_hamiltonian_matrix(
    rep: &Representation,
    sched: &CoefficientSchedule,
    traj: &AuxiliaryTrajectory,
    k: usize,
    delta: f64,
) -> Result<CMat> {
    let t = traj.grid[k];
    sched.check_domain(t - delta)?;
    sched.check_domain(t + delta)?;
    let (a_m, b_m) = angles_at_offset(&rep.spec, sched, traj, k, -delta)?;
    let (a_p, b_p) = angles_at_offset(&rep.spec, sched, traj, k, delta)?;
    let v = unitary_v(rep, traj.a[k], traj.b[k])?;
    let v_m = unitary_v(rep, a_m, b_m)?;
    let v_p = unitary_v(rep, a_p, b_p)?;
    let vdot = (v_p - v_m).mapv(|z| z / cre(2.0 * delta));
    let h = crate::hamiltonian::assemble(rep, sched, t)?;
    let vh = adjoint(&v).dot(&h).dot(&v);
    let gauge = adjoint(&v).dot(&vdot).mapv(|z| z * Complex64::i());
    Ok(vh - gauge)
}

/// Accumulated phase integrals along a trajectory. The dynamical and
/// geometric parts are stored per unit invariant eigenvalue (they scale
/// linearly with it); the c-number part is eigenvalue-independent.
#[derive(Debug, Clone)]
pub struct PhaseDecomposition {
    pub grid: Vec<f64>,
    /// ∫ ω[cos a_c cosθ + (κ/m) sin a_c sinθ cos(b−φ)] dt per node.
    pub phi_d_unit: Vec<f64>,
    /// ∫ (ḃ/m)(1 − cos a_c) dt per node.
    pub phi_g_unit: Vec<f64>,
    /// ∫ c₀ dt per node.
    pub phi_c: Vec<f64>,
}

impl PhaseDecomposition {
    pub fn phi_d(&self, k: usize, lambda: f64) -> f64 {
        lambda * self.phi_d_unit[k]
    }

    pub fn phi_g(&self, k: usize, lambda: f64) -> f64 {
        lambda * self.phi_g_unit[k]
    }

    /// Total accumulated phase λ·φ_d + λ·φ_g + φ_c at node `k`; the solution
    /// carries exp(−i·total).
    pub fn total(&self, k: usize, lambda: f64) -> f64 {
        lambda * (self.phi_d_unit[k] + self.phi_g_unit[k]) + self.phi_c[k]
    }
}

/// Integrate the three phase rates along a solved trajectory (cumulative
/// Simpson on the trajectory grid).
pub fn phases(
    spec: &AlgebraSpec,
    sched: &CoefficientSchedule,
    traj: &AuxiliaryTrajectory,
) -> PhaseDecomposition {
    let n = traj.len();
    let mut rate_d = Vec::with_capacity(n);
    let mut rate_g = Vec::with_capacity(n);
    let mut rate_c = Vec::with_capacity(n);
    for k in 0..n {
        let t = traj.grid[k];
        rate_d.push(dynamical_rate(spec, sched, t, traj.a[k], traj.b[k]));
        rate_g.push(geometric_rate(spec, traj.a[k], traj.bdot[k]));
        rate_c.push(sched.c0(t));
    }
    PhaseDecomposition {
        grid: traj.grid.clone(),
        phi_d_unit: cumulative_simpson(&traj.grid, &rate_d),
        phi_g_unit: cumulative_simpson(&traj.grid, &rate_g),
        phi_c: cumulative_simpson(&traj.grid, &rate_c),
    }
}

/// Invariant eigenvalue attached to basis index `idx` (the diagonal entry
/// of C; V maps the basis vector to the corresponding eigenvector of I).
pub fn invariant_eigenvalue(rep: &Representation, idx: usize) -> f64 {
    rep.c[[idx, idx]].re
}

/// Exact solution state for invariant eigenvector `idx` at trajectory node
/// `k`: exp[−i(λφ_d + λφ_g + φ_c)]·V(t_k)·e_idx.
///
/// For truncated representations prefer low `idx` (the column of V decays
/// along the ladder before the cutoff corrupts it).
pub fn solution_state(
    rep: &Representation,
    traj: &AuxiliaryTrajectory,
    ph: &PhaseDecomposition,
    k: usize,
    idx: usize,
) -> Result<CVec> {
    if idx >= rep.dim {
        return Err(Error::InvalidArgument(format!(
            "eigenvector index {idx} out of range for dimension {}",
            rep.dim
        )));
    }
    let lambda = invariant_eigenvalue(rep, idx);
    let v = unitary_v(rep, traj.a[k], traj.b[k])?;
    let phase = Complex64::from_polar(1.0, -ph.total(k, lambda));
    Ok(v.column(idx).mapv(|z| z * phase))
}

/// General solution: superposition Σ_idx coeff[idx]·ψ_idx(t_k) with
/// time-independent coefficients over the selected eigenvector indices.
pub fn general_solution(
    rep: &Representation,
    traj: &AuxiliaryTrajectory,
    ph: &PhaseDecomposition,
    k: usize,
    selection: &[(usize, Complex64)],
) -> Result<CVec> {
    let mut out = CVec::zeros(rep.dim);
    for &(idx, coeff) in selection {
        let psi = solution_state(rep, traj, ph, k, idx)?;
        out = out + psi.mapv(|z| z * coeff);
    }
    Ok(out)
}

/// Closed-loop geometric phase for one full revolution of b at fixed a:
/// (λ/m)·2π·(1 − cos a_c). On the hyperbolic branch (1 − cosh α) makes it
/// negative — the sign distinguishes the branches experimentally.
pub fn berry_limit(spec: &AlgebraSpec, a: f64, lambda: f64) -> f64 {
    let a_c = complex_angle(spec.branch(), a);
    lambda / spec.m * std::f64::consts::TAU * (1.0 - a_c.cos().re)
}
