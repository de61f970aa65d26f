//! Hamiltonian assembly and coefficient parameterization.
//!
//! Driven Hamiltonians are expressed on a generator triple as
//!
//! ```text
//! H(t) = ω(t)·( ½ sinθ(t) e^{−iφ(t)} A + ½ sinθ(t) e^{iφ(t)} B + cosθ(t) C ) + c₀(t)·1
//! ```
//!
//! [`assemble`] turns a [`CoefficientSchedule`] into the matrix at one time.
//! The `parameterize_*` functions do the reverse direction for the physical
//! coupled-mode models: given laboratory coefficients (mode frequencies and a
//! complex coupling) they produce the polar coefficients (ω, θ, φ) by exact
//! pointwise matching — in closed form when every input is constant, and by
//! dense sampling plus spline tabulation otherwise. [`split_conserved`]
//! separates a two-mode Hamiltonian into the part generated by the triple and
//! the c-number piece proportional to a conserved quantum number, which later
//! contributes only an overall phase.

use num_complex::Complex64;

use crate::algebra::Representation;
use crate::error::{Error, Result};
use crate::linalg::{cre, identity, CMat};
use crate::schedule::{CoefficientSchedule, ComplexTimeFunction, TimeFunction};

/// Effective frequencies below this threshold are treated as degenerate: the
/// mixing angles are undefined there.
const OMEGA_FLOOR: f64 = 1e-12;

/// Hamiltonian matrix at time `t` from a coefficient schedule.
///
/// Errors when `t` lies outside the schedule domain. The result is Hermitian
/// whenever the representation is a Hermitian pair and the coefficients are
/// real, which all shipped constructors guarantee.
pub fn assemble(rep: &Representation, sched: &CoefficientSchedule, t: f64) -> Result<CMat> {
    sched.check_domain(t)?;
    let omega = sched.omega(t);
    let theta = sched.theta(t);
    let phi = sched.phi(t);
    let c0 = sched.c0(t);
    let half_sin = 0.5 * omega * theta.sin();
    let coeff_a = Complex64::from_polar(half_sin, -phi);
    let coeff_b = Complex64::from_polar(half_sin, phi);
    let coeff_c = cre(omega * theta.cos());
    let mut h = rep.a.mapv(|z| z * coeff_a) + rep.b.mapv(|z| z * coeff_b);
    h = h + rep.c.mapv(|z| z * coeff_c);
    if c0 != 0.0 {
        h = h + identity(rep.dim).mapv(|z| z * cre(c0));
    }
    Ok(h)
}

/// Pointwise polar match for Lie coefficients: given the complex coefficient
/// `c_a` of A (its conjugate multiplies B) and the real coefficient `c_c` of
/// C, find (ω, θ, φ) with ½ω sinθ e^{−iφ} = c_a and ω cosθ = c_c.
///
/// Convention: ω > 0, θ ∈ [0, π], φ = −arg(c_a) ∈ (−π, π]; φ = 0 where the
/// coupling vanishes. Degenerate when both coefficients vanish.
fn polar_match(c_a: Complex64, c_c: f64, t: f64) -> Result<(f64, f64, f64)> {
    let coupling = 2.0 * c_a.norm();
    let omega = (c_c * c_c + coupling * coupling).sqrt();
    if omega <= OMEGA_FLOOR {
        return Err(Error::DegenerateParameterization {
            t,
            why: "all generator coefficients vanish; mixing angles undefined".into(),
        });
    }
    let theta = (c_c / omega).clamp(-1.0, 1.0).acos();
    let phi = if c_a.norm() > OMEGA_FLOOR {
        -c_a.arg()
    } else {
        0.0
    };
    Ok((omega, theta, phi))
}

/// Continuous unwrap: shift `phi` by multiples of 2π to land within π of
/// `prev`.
fn unwrap_phase(prev: f64, phi: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut out = phi;
    while out - prev > std::f64::consts::PI {
        out -= two_pi;
    }
    while prev - out > std::f64::consts::PI {
        out += two_pi;
    }
    out
}

/// Shared sampling machinery for the `parameterize_*` family.
///
/// `elliptic_gap`: for pseudo-rotation targets, the match is restricted to
/// the elliptic regime |c_c| > 2|c_a| (rotation-like effective dynamics);
/// passing `true` enforces it pointwise.
fn parameterize_sampled(
    c_a: &dyn Fn(f64) -> Complex64,
    c_c: &dyn Fn(f64) -> f64,
    constant_inputs: bool,
    elliptic: bool,
    t_start: f64,
    t_end: f64,
    samples: usize,
) -> Result<CoefficientSchedule> {
    if !(t_end > t_start) {
        return Err(Error::InvalidArgument(format!(
            "parameterize: t_end = {t_end} must exceed t_start = {t_start}"
        )));
    }
    let check_elliptic = |t: f64| -> Result<()> {
        if elliptic {
            let gap = c_c(t) - 2.0 * c_a(t).norm();
            if gap <= 0.0 {
                return Err(Error::HyperbolicRegime {
                    t,
                    why: format!(
                        "diagonal coefficient {:.6} does not dominate coupling magnitude {:.6}",
                        c_c(t),
                        c_a(t).norm()
                    ),
                });
            }
        }
        Ok(())
    };

    if constant_inputs {
        check_elliptic(t_start)?;
        let (omega, theta, phi) = polar_match(c_a(t_start), c_c(t_start), t_start)?;
        return CoefficientSchedule::new(
            TimeFunction::constant(omega),
            TimeFunction::constant(theta),
            TimeFunction::constant(phi),
            TimeFunction::constant(0.0),
            t_start,
            t_end,
        );
    }

    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "parameterize: need at least 2 sample panels, got {samples}"
        )));
    }
    let grid = crate::ode::uniform_grid(t_start, t_end, samples);
    let mut omega_v = Vec::with_capacity(grid.len());
    let mut theta_v = Vec::with_capacity(grid.len());
    let mut phi_v: Vec<f64> = Vec::with_capacity(grid.len());
    for &t in &grid {
        check_elliptic(t)?;
        let (omega, theta, phi) = polar_match(c_a(t), c_c(t), t)?;
        let phi = match phi_v.last() {
            Some(&prev) => unwrap_phase(prev, phi),
            None => phi,
        };
        omega_v.push(omega);
        theta_v.push(theta);
        phi_v.push(phi);
    }
    CoefficientSchedule::new(
        TimeFunction::tabulated(grid.clone(), omega_v)?,
        TimeFunction::tabulated(grid.clone(), theta_v)?,
        TimeFunction::tabulated(grid, phi_v)?,
        TimeFunction::constant(0.0),
        t_start,
        t_end,
    )
}

/// Polar coefficients for two linearly coupled modes on the rotation-like
/// triple (beam-splitter coupling): coefficient `g` on A, `g*` on B, and the
/// detuning ω₁ − ω₂ on C.
///
/// Matching gives ω = √((ω₁−ω₂)² + 4|g|²), cosθ = (ω₁−ω₂)/ω, φ = −arg g.
pub fn parameterize_su2_coupled_oscillators(
    omega1: &TimeFunction,
    omega2: &TimeFunction,
    g: &ComplexTimeFunction,
    t_start: f64,
    t_end: f64,
    samples: usize,
) -> Result<CoefficientSchedule> {
    let constant = omega1.is_constant() && omega2.is_constant() && g.is_constant();
    parameterize_sampled(
        &|t| g.eval(t),
        &|t| omega1.eval(t) - omega2.eval(t),
        constant,
        false,
        t_start,
        t_end,
        samples,
    )
}

/// Polar coefficients for two parametrically coupled modes on the
/// pseudo-rotation triple (two-mode squeezing coupling): coefficient `g*` on
/// A = K₊, `g` on B = K₋, and the frequency sum ω₁ + ω₂ on C.
///
/// Restricted to the elliptic regime (ω₁+ω₂)² > 4|g|², where the effective
/// dynamics stays bounded; outside it the match is rejected.
pub fn parameterize_su11_coupled_oscillators(
    omega1: &TimeFunction,
    omega2: &TimeFunction,
    g: &ComplexTimeFunction,
    t_start: f64,
    t_end: f64,
    samples: usize,
) -> Result<CoefficientSchedule> {
    let constant = omega1.is_constant() && omega2.is_constant() && g.is_constant();
    parameterize_sampled(
        &|t| g.eval(t).conj(),
        &|t| omega1.eval(t) + omega2.eval(t),
        constant,
        true,
        t_start,
        t_end,
        samples,
    )
}

/// Polar coefficients for the general one-mode quadratic Hamiltonian
/// ½(X q² + Y (qp+pq) + Z p²) on the one-mode pseudo-rotation triple:
/// coefficient (X−Z)/2 + iY on K₊ and X + Z on K₃.
///
/// Restricted to the elliptic regime X·Z > Y² (equivalently
/// (X+Z)² > (X−Z)² + 4Y²), i.e. a genuine oscillator rather than an inverted
/// or free-particle quadratic form.
pub fn parameterize_general_oscillator(
    x: &TimeFunction,
    y: &TimeFunction,
    z: &TimeFunction,
    t_start: f64,
    t_end: f64,
    samples: usize,
) -> Result<CoefficientSchedule> {
    let constant = x.is_constant() && y.is_constant() && z.is_constant();
    parameterize_sampled(
        &|t| Complex64::new(0.5 * (x.eval(t) - z.eval(t)), y.eval(t)),
        &|t| x.eval(t) + z.eval(t),
        constant,
        true,
        t_start,
        t_end,
        samples,
    )
}

/// Polar coefficients for a driven two-level transition: splitting ω₀ on
/// 2C = σ_z and complex drive g on the lowering side (g* multiplies the
/// raising generator A).
pub fn parameterize_two_level(
    omega0: &TimeFunction,
    g: &ComplexTimeFunction,
    t_start: f64,
    t_end: f64,
    samples: usize,
) -> Result<CoefficientSchedule> {
    let constant = omega0.is_constant() && g.is_constant();
    parameterize_sampled(
        &|t| g.eval(t).conj(),
        &|t| omega0.eval(t),
        constant,
        false,
        t_start,
        t_end,
        samples,
    )
}

/// Which conserved-generator split to perform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConservedModel {
    /// Beam-splitter coupling; conserved total quantum number n₁ + n₂,
    /// c-number part ½(n₁+n₂)(ω₁+ω₂).
    CoupledSu2,
    /// Two-mode squeezing coupling; conserved imbalance n₁ − n₂,
    /// c-number part ½(n₁−n₂)(ω₁−ω₂) − ½(ω₁+ω₂).
    CoupledSu11,
}

/// Split a two-mode Hamiltonian into its Lie part (as a polar coefficient
/// schedule on the matching triple) and the scalar c-number coefficient
/// multiplying the identity on the chosen conserved subspace.
///
/// `subspace_eigenvalue` is the eigenvalue of the conserved combination on
/// the subspace: ½(n₁+n₂) for [`ConservedModel::CoupledSu2`] and ½(n₁−n₂)
/// for [`ConservedModel::CoupledSu11`]; both must be half-integers ≥ 0.
pub fn split_conserved(
    model: ConservedModel,
    omega1: &TimeFunction,
    omega2: &TimeFunction,
    g: &ComplexTimeFunction,
    subspace_eigenvalue: f64,
    t_start: f64,
    t_end: f64,
    samples: usize,
) -> Result<(CoefficientSchedule, TimeFunction)> {
    let doubled = 2.0 * subspace_eigenvalue;
    if subspace_eigenvalue < 0.0 || (doubled - doubled.round()).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "conserved-subspace eigenvalue must be a half-integer ≥ 0, got {subspace_eigenvalue}"
        )));
    }
    let lie = match model {
        ConservedModel::CoupledSu2 => {
            parameterize_su2_coupled_oscillators(omega1, omega2, g, t_start, t_end, samples)?
        }
        ConservedModel::CoupledSu11 => {
            parameterize_su11_coupled_oscillators(omega1, omega2, g, t_start, t_end, samples)?
        }
    };
    let c0_of = |t: f64| -> f64 {
        let (w1, w2) = (omega1.eval(t), omega2.eval(t));
        match model {
            ConservedModel::CoupledSu2 => subspace_eigenvalue * (w1 + w2),
            ConservedModel::CoupledSu11 => subspace_eigenvalue * (w1 - w2) - 0.5 * (w1 + w2),
        }
    };
    let c0 = if omega1.is_constant() && omega2.is_constant() {
        TimeFunction::constant(c0_of(t_start))
    } else {
        let grid = crate::ode::uniform_grid(t_start, t_end, samples.max(2));
        let vals = grid.iter().map(|&t| c0_of(t)).collect();
        TimeFunction::tabulated(grid, vals)?
    };
    Ok((lie, c0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{schwinger_su2, su11_two_mode, su2_spin};
    use crate::linalg::{adjoint, c64, fro_norm, max_abs};

    #[test]
    fn spin_half_constant_schedule_has_half_eigenvalues() {
        let rep = su2_spin(0.5).unwrap();
        let sched = CoefficientSchedule::constant(1.0, std::f64::consts::FRAC_PI_3, 0.0, 0.0, 0.0, 1.0);
        let h = assemble(&rep, &sched, 0.0).unwrap();
        // ω = 1, θ = π/3 → H = (√3/4)σx + (1/4)σz with eigenvalues ±1/2.
        let (vals, _) = crate::linalg::eigh(&h).unwrap();
        assert!((vals[0] + 0.5).abs() < 1e-14, "low eigenvalue {}", vals[0]);
        assert!((vals[1] - 0.5).abs() < 1e-14, "high eigenvalue {}", vals[1]);
        assert!((h[[0, 1]].re - 3f64.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn assemble_is_hermitian_for_hermitian_pairs() {
        let rep = schwinger_su2(3).unwrap();
        let sched = CoefficientSchedule::new(
            TimeFunction::sinusoid(1.2, 0.3, 2.0, 0.4),
            TimeFunction::sinusoid(0.9, 0.5, 1.1, 0.0),
            TimeFunction::ramp(0.0, 0.0, 2.0, 3.0).unwrap(),
            TimeFunction::constant(0.7),
            0.0,
            2.0,
        )
        .unwrap();
        for k in 0..=10 {
            let t = 0.2 * k as f64;
            let h = assemble(&rep, &sched, t).unwrap();
            let dev = fro_norm(&(&h - &adjoint(&h)));
            assert!(dev < 1e-12 * fro_norm(&h).max(1.0), "hermiticity {dev:.3e} at t={t}");
        }
    }

    #[test]
    fn assemble_rejects_out_of_domain_times() {
        let rep = su2_spin(0.5).unwrap();
        let sched = CoefficientSchedule::constant(1.0, 0.3, 0.0, 0.0, 0.0, 1.0);
        assert!(matches!(
            assemble(&rep, &sched, 1.5),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn coupled_mode_match_detuned_real_coupling() {
        // ω₁ = 2, ω₂ = 1, g = 0.5 → ω = √2, θ = π/4, φ = 0.
        let sched = parameterize_su2_coupled_oscillators(
            &TimeFunction::constant(2.0),
            &TimeFunction::constant(1.0),
            &ComplexTimeFunction::constant(cre(0.5)),
            0.0,
            1.0,
            16,
        )
        .unwrap();
        assert!((sched.omega(0.0) - 2f64.sqrt()).abs() < 1e-14);
        assert!((sched.theta(0.0) - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        assert!(sched.phi(0.0).abs() < 1e-14);
    }

    #[test]
    fn coupled_mode_match_imaginary_coupling_on_resonance() {
        // ω₁ = ω₂, g = i/2 → ω = 1, θ = π/2; the defining identity
        // ½ω sinθ e^{−iφ} = g forces e^{−iφ} = i, i.e. φ = −π/2.
        let g = c64(0.0, 0.5);
        let sched = parameterize_su2_coupled_oscillators(
            &TimeFunction::constant(1.0),
            &TimeFunction::constant(1.0),
            &ComplexTimeFunction::constant(g),
            0.0,
            1.0,
            16,
        )
        .unwrap();
        assert!((sched.omega(0.0) - 1.0).abs() < 1e-14);
        assert!((sched.theta(0.0) - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        assert!((sched.phi(0.0) + std::f64::consts::FRAC_PI_2).abs() < 1e-14);
        let rebuilt = Complex64::from_polar(0.5 * sched.omega(0.0) * sched.theta(0.0).sin(), -sched.phi(0.0));
        assert!((rebuilt - g).norm() < 1e-14, "defining identity violated");
    }

    #[test]
    fn fully_degenerate_coefficients_are_rejected() {
        let err = parameterize_su2_coupled_oscillators(
            &TimeFunction::constant(1.0),
            &TimeFunction::constant(1.0),
            &ComplexTimeFunction::constant(cre(0.0)),
            0.0,
            1.0,
            8,
        );
        assert!(matches!(err, Err(Error::DegenerateParameterization { .. })));
    }

    #[test]
    fn squeezing_match_rejects_dominant_coupling() {
        let err = parameterize_su11_coupled_oscillators(
            &TimeFunction::constant(1.0),
            &TimeFunction::constant(1.0),
            &ComplexTimeFunction::constant(cre(1.1)),
            0.0,
            1.0,
            8,
        );
        assert!(matches!(err, Err(Error::HyperbolicRegime { .. })));
    }

    /// Direct two-mode build of the beam-splitter Hamiltonian on the fixed
    /// total subspace: diag ω₁r + ω₂(total−r), coupling g√((r+1)(total−r)).
    fn direct_beam_splitter(total: u32, w1: f64, w2: f64, g: Complex64) -> CMat {
        let dim = total as usize + 1;
        let mut h = CMat::zeros((dim, dim));
        for r in 0..dim {
            let rf = r as f64;
            h[[r, r]] = cre(w1 * rf + w2 * (total as f64 - rf));
            if r + 1 < dim {
                let amp = ((rf + 1.0) * (total as f64 - rf)).sqrt();
                h[[r + 1, r]] = g * cre(amp);
                h[[r, r + 1]] = g.conj() * cre(amp);
            }
        }
        h
    }

    #[test]
    fn split_recombines_to_direct_two_mode_matrix() {
        let total = 2u32;
        let rep = schwinger_su2(total).unwrap();
        let w1 = TimeFunction::sinusoid(2.0, 0.3, 1.3, 0.2);
        let w2 = TimeFunction::constant(1.0);
        let g = ComplexTimeFunction::new(
            TimeFunction::sinusoid(0.4, 0.1, 0.9, 0.0),
            TimeFunction::constant(0.2),
        );
        let samples = 64;
        let (lie, c0) = split_conserved(
            ConservedModel::CoupledSu2,
            &w1,
            &w2,
            &g,
            total as f64 / 2.0,
            0.0,
            2.0,
            samples,
        )
        .unwrap();
        // At tabulation nodes the spline passes through the exact values.
        for k in 0..=samples {
            let t = 2.0 * k as f64 / samples as f64;
            let rebuilt = assemble(&rep, &lie, t).unwrap()
                + crate::linalg::identity(rep.dim).mapv(|z| z * cre(c0.eval(t)));
            let direct = direct_beam_splitter(total, w1.eval(t), w2.eval(t), g.eval(t));
            let dev = max_abs(&(&rebuilt - &direct));
            assert!(dev < 1e-12, "recombination deviation {dev:.3e} at t={t}");
        }
    }

    #[test]
    fn split_constant_case_reproduces_total_times_mean_frequency() {
        // ω₁ = 2, ω₂ = 1, n₁+n₂ = 2 → c-number part 3.
        let (_, c0) = split_conserved(
            ConservedModel::CoupledSu2,
            &TimeFunction::constant(2.0),
            &TimeFunction::constant(1.0),
            &ComplexTimeFunction::constant(cre(0.5)),
            1.0,
            0.0,
            1.0,
            8,
        )
        .unwrap();
        assert!((c0.eval(0.5) - 3.0).abs() < 1e-14);
    }

    /// Direct two-mode build of the squeezing Hamiltonian on the fixed
    /// imbalance ladder: diag ω₁(r+d) + ω₂r, coupling g on the lowering side.
    fn direct_squeezer(delta_n: u32, cutoff: usize, w1: f64, w2: f64, g: Complex64) -> CMat {
        let d = delta_n as f64;
        let mut h = CMat::zeros((cutoff, cutoff));
        for r in 0..cutoff {
            let rf = r as f64;
            h[[r, r]] = cre(w1 * (rf + d) + w2 * rf);
            if r + 1 < cutoff {
                let amp = ((rf + d + 1.0) * (rf + 1.0)).sqrt();
                // g·a₁a₂ lowers rung r+1 → r; g*·a₁†a₂† raises.
                h[[r, r + 1]] = g * cre(amp);
                h[[r + 1, r]] = g.conj() * cre(amp);
            }
        }
        h
    }

    #[test]
    fn su11_split_recombines_on_the_imbalance_ladder() {
        let (delta_n, cutoff) = (1u32, 8usize);
        let rep = su11_two_mode(delta_n, cutoff).unwrap();
        let w1 = TimeFunction::constant(1.4);
        let w2 = TimeFunction::constant(1.0);
        let g = ComplexTimeFunction::constant(c64(0.3, -0.2));
        let (lie, c0) = split_conserved(
            ConservedModel::CoupledSu11,
            &w1,
            &w2,
            &g,
            delta_n as f64 / 2.0,
            0.0,
            1.0,
            8,
        )
        .unwrap();
        let rebuilt = assemble(&rep, &lie, 0.5).unwrap()
            + crate::linalg::identity(cutoff).mapv(|z| z * cre(c0.eval(0.5)));
        let direct = direct_squeezer(delta_n, cutoff, 1.4, 1.0, c64(0.3, -0.2));
        let dev = max_abs(&(&rebuilt - &direct));
        assert!(dev < 1e-12, "squeezer recombination deviation {dev:.3e}");
        // Constant inputs with n₁ = n₂ + 1: c₀ = ½(ω₁−ω₂) − ½(ω₁+ω₂) = −ω₂.
        assert!((c0.eval(0.3) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn split_rejects_non_half_integer_subspace_labels() {
        let err = split_conserved(
            ConservedModel::CoupledSu2,
            &TimeFunction::constant(1.0),
            &TimeFunction::constant(1.0),
            &ComplexTimeFunction::constant(cre(0.1)),
            0.3,
            0.0,
            1.0,
            8,
        );
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn winding_coupling_unwraps_continuously() {
        // g(t) = 0.5 e^{i·3t} winds; the tabulated φ must not jump by 2π.
        let g = ComplexTimeFunction::new(
            TimeFunction::tabulated(
                (0..=64).map(|k| 4.0 * k as f64 / 64.0).collect(),
                (0..=64).map(|k| 0.5 * (3.0 * 4.0 * k as f64 / 64.0).cos()).collect(),
            )
            .unwrap(),
            TimeFunction::tabulated(
                (0..=64).map(|k| 4.0 * k as f64 / 64.0).collect(),
                (0..=64).map(|k| 0.5 * (3.0 * 4.0 * k as f64 / 64.0).sin()).collect(),
            )
            .unwrap(),
        );
        let sched = parameterize_su2_coupled_oscillators(
            &TimeFunction::constant(1.0),
            &TimeFunction::constant(1.0),
            &g,
            0.0,
            4.0,
            64,
        )
        .unwrap();
        let mut prev = sched.phi(0.0);
        for k in 1..=64 {
            let t = 4.0 * k as f64 / 64.0;
            let cur = sched.phi(t);
            assert!(
                (cur - prev).abs() < 1.0,
                "phase jump {:.3} at t={t}",
                (cur - prev).abs()
            );
            prev = cur;
        }
        // Total winding ≈ −3·4 = −12 rad.
        assert!((prev - sched.phi(0.0) + 12.0).abs() < 0.2);
    }
}
