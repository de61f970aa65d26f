//! Supersymmetric multi-photon atom–field model on its invariant blocks.
//!
//! A two-level atom exchanging k photons at a time with one field mode
//! conserves the supersymmetric number operator N′ = a†a + k·|e⟩⟨e|, whose
//! eigenspaces are the two-dimensional blocks spanned by |m⟩⊗|e⟩ and
//! |m+k⟩⊗|g⟩. On such a block the supercharge Q = (a†)^k σ₋ acts as
//! √λ_m·σ₋ with λ_m = (m+k)!/m!, and the full problem reduces to a driven
//! two-level system. The invariant is parameterized on the unit sphere,
//!
//! ```text
//! I = −(sinθ/√λ_m)[e^{−iφ}Q + e^{iφ}Q†] + cosθ·σ_z,   eigenvalues ±1,
//! ```
//!
//! equivalently I = c·Q + c*·Q† + b·σ_z with c = −sinθ·e^{−iφ}/√λ_m and
//! b = cosθ. The invariant condition closes on the complex-linear pair
//! ċ = −i(cδ + 2bg), ḃ = iλ_m(c*g − cg*) with detuning δ = kω − ω₀, and
//! conserves λ_m|c|² + b², which pins the trajectory to the sphere. The
//! diagonalizing unitary V = exp[βQ − β*Q†] with β = −(θ/2)e^{−iφ}/√λ_m
//! yields solutions that are pure phases (dynamical + geometric) on the
//! rotating invariant eigenvectors, one per branch σ = ±1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{adjoint, c64, cre, fock_lowering, matrix_exp, CMat};
use crate::ode::{cumulative_simpson, half_step_gap, refine_grid, rk4_path, uniform_grid};
use crate::schedule::{ComplexTimeFunction, CubicSpline, TimeFunction};

/// λ_m values beyond 2^53 lose integer precision in f64.
const LAMBDA_EXACT_LIMIT: u128 = 1 << 53;

/// Ladder eigenvalue λ_m = (m+k)!/m! = (m+1)(m+2)···(m+k).
///
/// Computed in exact integer arithmetic; values that no longer fit exactly
/// in an f64 are rejected rather than silently rounded.
pub fn lambda_m(m_fock: u32, k: u32) -> Result<f64> {
    let mut acc: u128 = 1;
    for j in 1..=k as u128 {
        acc = acc
            .checked_mul(m_fock as u128 + j)
            .ok_or_else(|| Error::Overflow(format!("λ_m overflows for m = {m_fock}, k = {k}")))?;
        if acc > LAMBDA_EXACT_LIMIT {
            return Err(Error::Overflow(format!(
                "λ_m = (m+k)!/m! exceeds 2^53 for m = {m_fock}, k = {k}; not exactly representable"
            )));
        }
    }
    Ok(acc as f64)
}

/// The k-photon exchange model: field frequency ω(t), atomic splitting
/// ω₀(t), complex coupling g(t), restricted to the block with lower Fock
/// index `m_fock`.
#[derive(Debug, Clone)]
pub struct SusyJCConfig {
    pub k: u32,
    pub m_fock: u32,
    pub omega: TimeFunction,
    pub omega0: TimeFunction,
    pub g: ComplexTimeFunction,
    pub t_start: f64,
    pub t_end: f64,
    lambda: f64,
}

impl SusyJCConfig {
    pub fn new(
        k: u32,
        m_fock: u32,
        omega: TimeFunction,
        omega0: TimeFunction,
        g: ComplexTimeFunction,
        t_start: f64,
        t_end: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument(
                "photon exchange number k must be ≥ 1".into(),
            ));
        }
        if !(t_end > t_start) {
            return Err(Error::InvalidArgument(format!(
                "time window must be nonempty: [{t_start}, {t_end}]"
            )));
        }
        let lambda = lambda_m(m_fock, k)?;
        Ok(Self {
            k,
            m_fock,
            omega,
            omega0,
            g,
            t_start,
            t_end,
            lambda,
        })
    }

    /// Ladder eigenvalue λ_m of this block.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Detuning δ(t) = k·ω(t) − ω₀(t).
    pub fn delta(&self, t: f64) -> f64 {
        self.k as f64 * self.omega.eval(t) - self.omega0.eval(t)
    }
}

/// Block restriction of the operator algebra: basis (|m⟩⊗|e⟩, |m+k⟩⊗|g⟩).
#[derive(Debug, Clone)]
pub struct SubspaceBlock {
    pub lambda_m: f64,
    /// Supercharge block: √λ_m times the lowering Pauli matrix.
    pub q: CMat,
    pub q_dag: CMat,
    pub sigma_z: CMat,
    /// Supersymmetric number operator block: diag(m + k/2, m + k/2 + 1).
    pub n_block: CMat,
}

impl SubspaceBlock {
    pub fn new(k: u32, m_fock: u32) -> Result<Self> {
        let lam = lambda_m(m_fock, k)?;
        let root = lam.sqrt();
        let mut q = CMat::zeros((2, 2));
        q[[1, 0]] = cre(root);
        let q_dag = adjoint(&q);
        let mut sigma_z = CMat::zeros((2, 2));
        sigma_z[[0, 0]] = cre(1.0);
        sigma_z[[1, 1]] = cre(-1.0);
        let mut n_block = CMat::zeros((2, 2));
        let base = m_fock as f64 + k as f64 / 2.0;
        n_block[[0, 0]] = cre(base);
        n_block[[1, 1]] = cre(base + 1.0);
        Ok(Self {
            lambda_m: lam,
            q,
            q_dag,
            sigma_z,
            n_block,
        })
    }
}

/// Block Hamiltonian H = ω·N + ((ω−δ)/2)·σ_z + g·Q + g*·Q† − (ω/2)·1.
pub fn block_hamiltonian(cfg: &SusyJCConfig, t: f64) -> Result<CMat> {
    let block = SubspaceBlock::new(cfg.k, cfg.m_fock)?;
    let w = cfg.omega.eval(t);
    let d = cfg.delta(t);
    let g = cfg.g.eval(t);
    let mut h = block.n_block.mapv(|z| z * cre(w));
    h = h + block.sigma_z.mapv(|z| z * cre(0.5 * (w - d)));
    h = h + block.q.mapv(|z| z * g) + block.q_dag.mapv(|z| z * g.conj());
    h[[0, 0]] -= cre(0.5 * w);
    h[[1, 1]] -= cre(0.5 * w);
    Ok(h)
}

/// Invariant coefficient flow: ċ = −i(cδ + 2bg), ḃ = iλ_m(c*g − cg*).
pub fn susy_auxiliary_rhs(cfg: &SusyJCConfig, t: f64, c: Complex64, b: f64) -> (Complex64, f64) {
    let d = cfg.delta(t);
    let g = cfg.g.eval(t);
    let cdot = -Complex64::i() * (c * cre(d) + cre(2.0 * b) * g);
    // iλ(c*g − cg*) = −2λ·Im(c*g), manifestly real.
    let bdot = -2.0 * cfg.lambda * (c.conj() * g).im;
    (cdot, bdot)
}

/// Stationary invariant direction of the instantaneous Hamiltonian at the
/// initial time: c₀ = g/R, b₀ = −δ/(2R) with R = √(δ²/4 + λ_m|g|²). Both
/// rates vanish there exactly. Degenerate drives (δ = g = 0) fall back to
/// the decoupled direction (c, b) = (0, 1).
pub fn adiabatic_start(cfg: &SusyJCConfig) -> (Complex64, f64) {
    let t = cfg.t_start;
    let d = cfg.delta(t);
    let g = cfg.g.eval(t);
    let r = (0.25 * d * d + cfg.lambda * g.norm_sqr()).sqrt();
    if r <= 0.0 {
        return (cre(0.0), 1.0);
    }
    (g / cre(r), -0.5 * d / r)
}

/// Solved invariant coefficients on the unit sphere, with the extracted
/// spherical angles and the spline-differentiated azimuth rate.
#[derive(Debug, Clone)]
pub struct SusyAuxiliary {
    pub grid: Vec<f64>,
    pub c: Vec<Complex64>,
    pub b: Vec<f64>,
    /// Polar angle θ = arccos b per node.
    pub theta: Vec<f64>,
    /// Azimuth φ = −arg(−c√λ_m) per node, unwrapped continuously.
    pub phi: Vec<f64>,
    /// dφ/dt per node, from differentiating a spline through `phi`.
    pub phi_dot: Vec<f64>,
    /// Half-step Richardson estimate of the integration error.
    pub richardson_err: f64,
    /// Worst deviation of λ_m|c|² + b² from 1 before renormalization.
    pub conservation_drift: f64,
}

/// Integrate the coefficient flow over the configured window.
///
/// Initial data is rescaled onto the unit sphere λ_m|c|² + b² = 1 (the
/// overall scale of the invariant is unphysical). Along the trajectory the
/// conserved radius must stay within 1e−6 of 1 — a larger drift fails
/// certification — and nodes are renormalized onto the sphere afterwards,
/// so c = −sinθ·e^{−iφ}/√λ_m and b = cosθ hold by construction.
pub fn solve_susy_auxiliary(
    cfg: &SusyJCConfig,
    c0: Complex64,
    b0: f64,
    panels: usize,
    accuracy_goal: f64,
) -> Result<SusyAuxiliary> {
    if panels < 2 {
        return Err(Error::InvalidArgument(format!(
            "auxiliary solve needs at least 2 panels, got {panels}"
        )));
    }
    let r0 = (cfg.lambda * c0.norm_sqr() + b0 * b0).sqrt();
    if !(r0 > 0.0) {
        return Err(Error::InvalidArgument(
            "initial invariant coefficients must not all vanish".into(),
        ));
    }
    let c0 = c0 / cre(r0);
    let b0 = b0 / r0;

    let panels = panels + panels % 2;
    let grid = uniform_grid(cfg.t_start, cfg.t_end, panels);
    let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let (cdot, bdot) = susy_auxiliary_rhs(cfg, t, c64(y[0], y[1]), y[2]);
        Ok([cdot.re, cdot.im, bdot])
    };
    let y0 = [c0.re, c0.im, b0];
    let coarse = rk4_path(&rhs, &grid, y0)?;
    let fine = rk4_path(&rhs, &refine_grid(&grid, 2), y0)?;
    let richardson_err = half_step_gap(&coarse, &fine);
    if !(richardson_err <= accuracy_goal) {
        return Err(Error::IntegrationAccuracy(format!(
            "coefficient flow: Richardson error estimate {richardson_err:.3e} exceeds goal \
             {accuracy_goal:.3e} with {panels} panels"
        )));
    }

    let root_lam = cfg.lambda.sqrt();
    let n = grid.len();
    let mut c_v = Vec::with_capacity(n);
    let mut b_v = Vec::with_capacity(n);
    let mut theta_v = Vec::with_capacity(n);
    let mut phi_v: Vec<f64> = Vec::with_capacity(n);
    let mut drift = 0.0_f64;
    for k in 0..n {
        let y = fine[2 * k];
        let c = c64(y[0], y[1]);
        let b = y[2];
        let r = (cfg.lambda * c.norm_sqr() + b * b).sqrt();
        drift = drift.max((r - 1.0).abs());
        let (c, b) = (c / cre(r), b / r);
        let theta = b.clamp(-1.0, 1.0).acos();
        let phi_raw = if c.norm() * root_lam > 1e-12 {
            -(-c * cre(root_lam)).arg()
        } else {
            *phi_v.last().unwrap_or(&0.0)
        };
        let phi = match phi_v.last() {
            Some(&prev) => {
                let mut p = phi_raw;
                while p - prev > std::f64::consts::PI {
                    p -= std::f64::consts::TAU;
                }
                while prev - p > std::f64::consts::PI {
                    p += std::f64::consts::TAU;
                }
                p
            }
            None => phi_raw,
        };
        c_v.push(c);
        b_v.push(b);
        theta_v.push(theta);
        phi_v.push(phi);
    }
    if drift > 1e-6 {
        return Err(Error::IntegrationAccuracy(format!(
            "conserved radius drifted by {drift:.3e} (> 1e−6) off the unit sphere; refine the grid"
        )));
    }
    let spline = CubicSpline::new(grid.clone(), phi_v.clone())?;
    let phi_dot = grid.iter().map(|&t| spline.deriv(t)).collect();
    Ok(SusyAuxiliary {
        grid,
        c: c_v,
        b: b_v,
        theta: theta_v,
        phi: phi_v,
        phi_dot,
        richardson_err,
        conservation_drift: drift,
    })
}

/// Analytic azimuth rate φ̇ = δ + 2b·Re(g/c), valid away from the poles.
/// Cross-checks the spline-differentiated rate.
pub fn analytic_phi_dot(cfg: &SusyJCConfig, t: f64, c: Complex64, b: f64) -> Option<f64> {
    if c.norm() < 1e-10 {
        return None;
    }
    Some(cfg.delta(t) + 2.0 * b * (cfg.g.eval(t) / c).re)
}

/// Block invariant I = −(sinθ/√λ_m)[e^{−iφ}Q + e^{iφ}Q†] + cosθ·σ_z.
pub fn susy_invariant(theta: f64, phi: f64, lambda_m: f64) -> CMat {
    let root = lambda_m.sqrt();
    let mut i_mat = CMat::zeros((2, 2));
    let off = -theta.sin() / root;
    i_mat[[0, 0]] = cre(theta.cos());
    i_mat[[1, 1]] = cre(-theta.cos());
    // Q = √λ σ₋ contributes at [1,0]; Q† at [0,1]; the √λ cancels.
    i_mat[[1, 0]] = cre(off * root) * Complex64::from_polar(1.0, -phi);
    i_mat[[0, 1]] = cre(off * root) * Complex64::from_polar(1.0, phi);
    i_mat
}

/// Diagonalizing unitary V = exp[βQ − β*Q†] with β = −(θ/2)e^{−iφ}/√λ_m.
///
/// Explicitly V = [[cos(θ/2), e^{iφ}sin(θ/2)], [−e^{−iφ}sin(θ/2), cos(θ/2)]];
/// its columns are the invariant eigenvectors for σ = +1 and σ = −1.
pub fn susy_v(theta: f64, phi: f64, lambda_m: f64) -> Result<CMat> {
    let block = {
        let root = lambda_m.sqrt();
        let mut q = CMat::zeros((2, 2));
        q[[1, 0]] = cre(root);
        q
    };
    let beta = cre(-0.5 * theta / lambda_m.sqrt()) * Complex64::from_polar(1.0, -phi);
    let gen = block.mapv(|z| z * beta) - adjoint(&block).mapv(|z| z * beta.conj());
    matrix_exp(&gen)
}

/// Residuals of the closed-form angle identities linking β, the sphere
/// coefficients (c, b), and λ_m: with Θ = √(4ββ*λ_m),
/// sin Θ = λ_m(cβ* + c*β)/Θ and cos Θ = b. Returns the two absolute
/// residuals; both vanish on a normalized trajectory.
pub fn angle_identity_residuals(
    theta: f64,
    phi: f64,
    c: Complex64,
    b: f64,
    lambda_m: f64,
) -> (f64, f64) {
    let beta = cre(-0.5 * theta / lambda_m.sqrt()) * Complex64::from_polar(1.0, -phi);
    let big_theta = (4.0 * beta.norm_sqr() * lambda_m).sqrt();
    if big_theta < 1e-300 {
        // θ = 0: both identities degenerate to sin 0 = 0, cos 0 = b.
        return (0.0, (1.0 - b).abs());
    }
    let lhs_sin = big_theta.sin();
    let rhs_sin = lambda_m * (c * beta.conj() + c.conj() * beta).re / big_theta;
    let r1 = (lhs_sin - rhs_sin).abs();
    let r2 = (big_theta.cos() - b).abs();
    (r1, r2)
}

/// Invariant eigenvector branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaSign {
    Plus,
    Minus,
}

impl SigmaSign {
    pub fn value(self) -> f64 {
        match self {
            SigmaSign::Plus => 1.0,
            SigmaSign::Minus => -1.0,
        }
    }

    /// Column of V holding this branch's eigenvector.
    pub fn column(self) -> usize {
        match self {
            SigmaSign::Plus => 0,
            SigmaSign::Minus => 1,
        }
    }
}

/// Phase rates for branch σ at one time:
///
/// ```text
/// φ̇_d = (m + k/2)·ω + σ·[ −½√λ_m(g e^{iφ} + g* e^{−iφ})sinθ − (δ/2)cosθ ]
/// φ̇_g = −σ·(φ̇/2)(1 − cosθ)
/// ```
pub fn susy_phase_rates(
    cfg: &SusyJCConfig,
    theta: f64,
    phi: f64,
    phi_dot: f64,
    t: f64,
    sigma: SigmaSign,
) -> (f64, f64) {
    let s = sigma.value();
    let w = cfg.omega.eval(t);
    let d = cfg.delta(t);
    let g = cfg.g.eval(t);
    // ½(g e^{iφ} + g* e^{−iφ}) = Re(g e^{iφ})
    let coupling = (g * Complex64::from_polar(1.0, phi)).re;
    let phid = (cfg.m_fock as f64 + cfg.k as f64 / 2.0) * w
        + s * (-cfg.lambda.sqrt() * coupling * theta.sin() - 0.5 * d * theta.cos());
    let phig = -s * 0.5 * phi_dot * (1.0 - theta.cos());
    (phid, phig)
}

/// One exact block solution: accumulated phases and the state per node.
#[derive(Debug, Clone)]
pub struct SusyBlockSolution {
    pub sigma: SigmaSign,
    pub grid: Vec<f64>,
    pub phi_d: Vec<f64>,
    pub phi_g: Vec<f64>,
    /// ψ_σ(t) = exp[−i(φ_d + φ_g)]·V(t)·e_σ per node.
    pub states: Vec<[Complex64; 2]>,
}

/// Build the branch-σ solution along a solved trajectory: integrate the
/// phase rates (cumulative Simpson) and rotate the branch eigenvector.
pub fn susy_solution(
    cfg: &SusyJCConfig,
    aux: &SusyAuxiliary,
    sigma: SigmaSign,
) -> Result<SusyBlockSolution> {
    let n = aux.grid.len();
    let mut rate_d = Vec::with_capacity(n);
    let mut rate_g = Vec::with_capacity(n);
    for k in 0..n {
        let (pd, pg) = susy_phase_rates(
            cfg,
            aux.theta[k],
            aux.phi[k],
            aux.phi_dot[k],
            aux.grid[k],
            sigma,
        );
        rate_d.push(pd);
        rate_g.push(pg);
    }
    let phi_d = cumulative_simpson(&aux.grid, &rate_d);
    let phi_g = cumulative_simpson(&aux.grid, &rate_g);
    let col = sigma.column();
    let mut states = Vec::with_capacity(n);
    for k in 0..n {
        let v = susy_v(aux.theta[k], aux.phi[k], cfg.lambda)?;
        let phase = Complex64::from_polar(1.0, -(phi_d[k] + phi_g[k]));
        states.push([v[[0, col]] * phase, v[[1, col]] * phase]);
    }
    Ok(SusyBlockSolution {
        sigma,
        grid: aux.grid.clone(),
        phi_d,
        phi_g,
        states,
    })
}

/// Normalization of the composite ladder charge on the oscillator
/// realization: χ = ⟨m+k|(a†)^k a^k|m+k⟩, computed from explicit truncated
/// oscillator matrices. Coincides with λ_m = (m+k)!/m!, confirming that the
/// √λ_m block scaling of Q matches the composite-operator normalization.
pub fn sigma_block_normalization(k: u32, m_fock: u32) -> Result<f64> {
    let dim = (m_fock + k + 2) as usize;
    let a = fock_lowering(dim);
    let mut ak = CMat::eye(dim);
    for _ in 0..k {
        ak = ak.dot(&a);
    }
    let prod = adjoint(&ak).dot(&ak);
    let idx = (m_fock + k) as usize;
    Ok(prod[[idx, idx]].re)
}
