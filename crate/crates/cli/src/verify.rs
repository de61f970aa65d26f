//! The `verify` subcommand: property suites for the configured model.
//!
//! For the polar-schedule models: generator closure, the invariant
//! equation (on the configured schedule and on seeded random smooth
//! schedules), spectrum constancy, the diagonalization contract V†IV = C,
//! diagonality of the transformed-frame Hamiltonian under δ-halving, and
//! the integrator convergence orders.  For the ladder model: the ladder
//! normalization identity, sphere conservation, the angle identities,
//! block-vs-projection agreement, subspace leakage, and the same order
//! checks.  Verdicts are deterministic for a given seed, and the tolerances
//! carry enough margin that they do not depend on it.
//!
//! `--inject-structure-error` corrupts the structure constants fed to the
//! closure (or normalization) check by 10% — a negative control that must
//! produce a FAIL report and exit code 1.

use std::path::Path;

use liedyn::algebra::{verify_closure, Branch, Representation};
use liedyn::evolution::{
    invariant_contract_deviation, phases, solution_state, transformed_hamiltonian_matrix,
};
use liedyn::hamiltonian::assemble;
use liedyn::invariant::{invariant_matrix, invariant_residual, solve_auxiliary, static_start};
use liedyn::linalg::{eigh, max_abs};
use liedyn::oracle::{order_estimate, overlap, propagate_grid, SusyEmbedding};
use liedyn::susy_jc::{
    adiabatic_start, angle_identity_residuals, block_hamiltonian, lambda_m,
    sigma_block_normalization, solve_susy_auxiliary, susy_solution, SusyJCConfig,
};
use liedyn::{AlgebraSpec, CoefficientSchedule, ComplexTimeFunction, TimeFunction};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{numerical_err, CliError, ScenarioConfig};
use crate::output::{collect_indexed, parallel_indexed, render_report, write_text, CheckLine};
use crate::scenario::{self, GenericScenario, GridPlan, LadderScenario, Scenario};

const RANDOM_SCHEDULES: usize = 4;
const CLOSURE_TOL: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-10;
const PROJECTION_TOL: f64 = 1e-12;
const LEAKAGE_TOL: f64 = 1e-12;
const CONSERVATION_TOL: f64 = 1e-8;

pub fn execute(
    config: &ScenarioConfig,
    out_dir: &Path,
    jobs: usize,
    inject: bool,
) -> Result<bool, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let (built, plan) = scenario::build(config)?;
    let checks = match &built {
        Scenario::Generic(sc) => verify_generic(config, sc, plan, jobs, inject)?,
        Scenario::Ladder(sc) => verify_ladder(config, sc, plan, jobs, inject)?,
    };
    let preamble = vec![
        format!("verification target: {}", config.model),
        format!("seed: {}", config.seed),
        format!(
            "structure-constant injection: {}",
            if inject { "ACTIVE" } else { "off" }
        ),
    ];
    let (report, pass) = render_report(&preamble, &checks);
    if config.outputs.report {
        let path = out_dir.join("verify_report.txt");
        write_text(&path, &report)?;
        print!("{report}");
        println!("wrote {}", path.display());
    } else {
        print!("{report}");
    }
    Ok(pass)
}

/// A random smooth schedule over [0, 3].  On the boost branch the axis and
/// the azimuth sweep stay gentle so the mixing rapidity remains inside the
/// window certified for truncated ladders.
fn random_schedule(rng: &mut ChaCha8Rng, gentle_axis: bool) -> CoefficientSchedule {
    let omega = TimeFunction::sinusoid(
        rng.gen_range(0.7..1.3),
        rng.gen_range(0.05..0.25),
        rng.gen_range(0.5..1.5),
        rng.gen_range(0.0..6.28),
    );
    let theta = if gentle_axis {
        TimeFunction::sinusoid(
            rng.gen_range(0.18..0.26),
            rng.gen_range(0.01..0.03),
            rng.gen_range(0.5..1.5),
            rng.gen_range(0.0..6.28),
        )
    } else {
        TimeFunction::sinusoid(
            rng.gen_range(0.6..1.1),
            rng.gen_range(0.05..0.25),
            rng.gen_range(0.5..1.5),
            rng.gen_range(0.0..6.28),
        )
    };
    let phi_span = if gentle_axis { 0.6 } else { 2.0 };
    let phi = if rng.gen_bool(0.5) {
        TimeFunction::ramp(0.0, 0.0, 3.0, rng.gen_range(-phi_span..phi_span)).unwrap()
    } else {
        TimeFunction::sinusoid(
            rng.gen_range(0.0..6.28),
            rng.gen_range(0.05..0.15),
            rng.gen_range(0.5..1.5),
            rng.gen_range(0.0..6.28),
        )
    };
    let c0 = TimeFunction::sinusoid(
        rng.gen_range(-0.3..0.3),
        rng.gen_range(0.0..0.1),
        1.0,
        rng.gen_range(0.0..6.28),
    );
    CoefficientSchedule::new(omega, theta, phi, c0, 0.0, 3.0).unwrap()
}

/// Driven test schedule for order measurements, matched to the branch so
/// the trajectory stays in its regime of validity.
fn driven_schedule(branch: Branch) -> CoefficientSchedule {
    match branch {
        Branch::Trigonometric => CoefficientSchedule::new(
            TimeFunction::sinusoid(1.0, 0.2, 1.1, 0.3),
            TimeFunction::sinusoid(0.9, 0.2, 0.8, 0.0),
            TimeFunction::ramp(0.0, 0.0, 3.0, 2.0).unwrap(),
            TimeFunction::constant(0.0),
            0.0,
            3.0,
        )
        .unwrap(),
        Branch::Hyperbolic => CoefficientSchedule::new(
            TimeFunction::sinusoid(1.0, 0.15, 0.9, 0.2),
            TimeFunction::sinusoid(0.25, 0.05, 1.2, 0.5),
            TimeFunction::ramp(0.0, 0.0, 3.0, 1.0).unwrap(),
            TimeFunction::constant(0.2),
            0.0,
            3.0,
        )
        .unwrap(),
    }
}

/// Drift of the lowest `window` invariant eigenvalues between node 0 and a
/// set of later nodes — the spectrum-constancy face of the invariant.
fn spectrum_drift(
    rep: &Representation,
    traj: &liedyn::invariant::AuxiliaryTrajectory,
    probe_nodes: &[usize],
) -> Result<f64, CliError> {
    let w = rep.contract_dim();
    let (reference, _) = eigh(&invariant_matrix(rep, traj.a[0], traj.b[0])).map_err(numerical_err)?;
    let mut worst: f64 = 0.0;
    for &k in probe_nodes {
        let (evals, _) = eigh(&invariant_matrix(rep, traj.a[k], traj.b[k])).map_err(numerical_err)?;
        for i in 0..w {
            worst = worst.max((evals[i] - reference[i]).abs());
        }
    }
    Ok(worst)
}

/// Auxiliary-integrator convergence order from endpoint self-differences at
/// panel counts (16, 32, 64).
fn auxiliary_order(spec: &AlgebraSpec, sched: &CoefficientSchedule) -> Result<f64, CliError> {
    let (a0, b0) = static_start(spec, sched).map_err(numerical_err)?;
    let endpoint = |panels: usize| -> Result<(f64, f64), CliError> {
        let traj =
            solve_auxiliary(spec, sched, a0, b0, panels, 1.0).map_err(numerical_err)?;
        Ok((*traj.a.last().unwrap(), *traj.b.last().unwrap()))
    };
    let coarse = endpoint(16)?;
    let mid = endpoint(32)?;
    let fine = endpoint(64)?;
    let d1 = ((coarse.0 - mid.0).powi(2) + (coarse.1 - mid.1).powi(2)).sqrt();
    let d2 = ((mid.0 - fine.0).powi(2) + (mid.1 - fine.1).powi(2)).sqrt();
    Ok((d1 / d2.max(1e-300)).log2())
}

fn oracle_order_check<F>(h_of: F, t0: f64, t1: f64) -> Result<CheckLine, CliError>
where
    F: Fn(f64) -> liedyn::Result<liedyn::linalg::CMat>,
{
    let order = order_estimate(h_of, t0, t1, 8).map_err(numerical_err)?;
    if order.is_nan() {
        return Ok(CheckLine::noted_pass(
            "oracle propagator order",
            "substep differences at roundoff (the product is exact here)",
        ));
    }
    Ok(CheckLine::interval("oracle propagator order", order, 1.7, 2.3))
}

fn verify_generic(
    config: &ScenarioConfig,
    sc: &GenericScenario,
    plan: GridPlan,
    jobs: usize,
    inject: bool,
) -> Result<Vec<CheckLine>, CliError> {
    let rep = &sc.preset.rep;
    let sched = &sc.preset.schedule;
    let spec = &rep.spec;
    let tol = &config.tolerances;
    let mut checks = Vec::new();

    // 1. Generator closure, optionally with corrupted structure constants.
    let closure_rep = if inject {
        let mut bad = rep.clone();
        bad.spec = AlgebraSpec::new(spec.m, spec.n * 1.1)
            .expect("scaled structure constants stay admissible");
        bad
    } else {
        rep.clone()
    };
    let closure = verify_closure(&closure_rep, CLOSURE_TOL);
    checks.push(CheckLine::upper(
        if inject {
            "generator closure residual (structure constants corrupted by 10%)"
        } else {
            "generator closure residual"
        },
        closure.worst(),
        CLOSURE_TOL,
    ));

    // 2. The configured schedule: solve and certify.
    let traj = solve_auxiliary(
        spec,
        sched,
        sc.start.0,
        sc.start.1,
        plan.aux_panels,
        tol.integration,
    )
    .map_err(numerical_err)?;
    let n = traj.grid.len();
    checks.push(CheckLine::upper(
        "auxiliary Richardson error",
        traj.richardson_err,
        tol.integration,
    ));
    checks.push(CheckLine::upper(
        "coefficient back-substitution residual",
        traj.defining_residual,
        1e-8,
    ));

    let mut worst_resid: f64 = 0.0;
    for k in 0..n {
        worst_resid = worst_resid.max(invariant_residual(rep, sched, &traj, k).map_err(numerical_err)?);
    }
    checks.push(CheckLine::upper(
        "invariant equation residual (configured schedule)",
        worst_resid,
        tol.invariant_residual,
    ));
    checks.push(CheckLine::upper(
        "invariant spectrum drift (configured schedule)",
        spectrum_drift(rep, &traj, &[n / 4, n / 2, 3 * n / 4, n - 1])?,
        tol.invariant_residual,
    ));

    // 3. Diagonalization contract and transformed-frame diagonality.
    let mut worst_contract: f64 = 0.0;
    for k in [n / 3, n / 2, 2 * n / 3] {
        worst_contract = worst_contract
            .max(invariant_contract_deviation(rep, traj.a[k], traj.b[k]).map_err(numerical_err)?);
    }
    checks.push(CheckLine::upper(
        "diagonalization contract deviation",
        worst_contract,
        tol.contract,
    ));

    let mid = n / 2;
    let w = rep.contract_dim();
    let offdiag = |delta: f64| -> Result<f64, CliError> {
        let m = transformed_hamiltonian_matrix(rep, sched, &traj, mid, delta)
            .map_err(numerical_err)?;
        let mut worst = 0.0f64;
        for r in 0..w {
            for s in 0..w {
                if r != s {
                    worst = worst.max(m[[r, s]].norm());
                }
            }
        }
        Ok(worst)
    };
    let coarse = offdiag(1e-3)?;
    let fine = offdiag(5e-4)?;
    if coarse <= 1e-12 && fine <= 1e-12 {
        checks.push(CheckLine::noted_pass(
            "transformed-frame off-diagonal leakage",
            "at roundoff for this schedule (stationary transform)",
        ));
    } else {
        checks.push(CheckLine::upper(
            "transformed-frame off-diagonal leakage",
            coarse,
            1e-5,
        ));
        let ratio = coarse / fine.max(1e-300);
        checks.push(CheckLine {
            name: "off-diagonal leakage shrinks under delta-halving".into(),
            detail: format!("factor {ratio:.2} (expected >= 2.5)"),
            pass: ratio >= 2.5,
        });
    }

    // 4. Seeded random smooth schedules: invariant residual and spectrum
    // constancy away from the configured operating point.
    let gentle = matches!(spec.branch(), Branch::Hyperbolic);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let randoms: Vec<CoefficientSchedule> = (0..RANDOM_SCHEDULES)
        .map(|_| random_schedule(&mut rng, gentle))
        .collect();
    let random_results = collect_indexed(parallel_indexed(jobs, randoms.len(), |i| {
        let rsched = &randoms[i];
        let (a0, b0) = static_start(spec, rsched).map_err(numerical_err)?;
        let rtraj = solve_auxiliary(spec, rsched, a0, b0, 512, 1e-8).map_err(numerical_err)?;
        let rn = rtraj.grid.len();
        let mut resid: f64 = 0.0;
        for k in 0..rn {
            resid = resid.max(invariant_residual(rep, rsched, &rtraj, k).map_err(numerical_err)?);
        }
        let drift = spectrum_drift(rep, &rtraj, &[rn / 2, rn - 1])?;
        Ok((resid, drift))
    }))?;
    let rand_resid = random_results.iter().map(|r| r.0).fold(0.0, f64::max);
    let rand_drift = random_results.iter().map(|r| r.1).fold(0.0, f64::max);
    checks.push(CheckLine::upper(
        "invariant equation residual (random schedules)",
        rand_resid,
        tol.invariant_residual,
    ));
    checks.push(CheckLine::upper(
        "invariant spectrum drift (random schedules)",
        rand_drift,
        tol.invariant_residual,
    ));

    // 5. Exact solution against the brute-force propagator at t_end.
    let ph = phases(spec, sched, &traj);
    let psi0 = solution_state(rep, &traj, &ph, 0, sc.indices[0]).map_err(numerical_err)?;
    let h_of = |t: f64| assemble(rep, sched, t);
    let coarse_nodes: Vec<f64> = (0..=64).map(|i| {
        traj.grid[i * (n - 1) / 64]
    }).collect();
    let states = propagate_grid(&h_of, &coarse_nodes, &psi0, plan.substeps).map_err(numerical_err)?;
    let psi_end = solution_state(rep, &traj, &ph, n - 1, sc.indices[0]).map_err(numerical_err)?;
    let ov = overlap(&psi_end, states.last().unwrap());
    checks.push(CheckLine::lower(
        "oracle overlap modulus at t_end",
        ov.norm(),
        1.0 - tol.fidelity_deficit,
    ));
    checks.push(CheckLine::upper(
        "oracle phase error at t_end (rad)",
        ov.arg().abs(),
        tol.phase_error,
    ));

    // 6. Convergence orders.
    let driven = driven_schedule(spec.branch());
    checks.push(CheckLine::interval(
        "auxiliary integrator order",
        auxiliary_order(spec, &driven)?,
        3.5,
        4.5,
    ));
    let t0 = sched.t_start;
    let t1 = t0 + (sched.t_end - t0).min(1.0);
    checks.push(oracle_order_check(h_of, t0, t1)?);

    Ok(checks)
}

fn verify_ladder(
    config: &ScenarioConfig,
    sc: &LadderScenario,
    plan: GridPlan,
    jobs: usize,
    inject: bool,
) -> Result<Vec<CheckLine>, CliError> {
    let cfg = &sc.cfg;
    let tol = &config.tolerances;
    let mut checks = Vec::new();

    // 1. Ladder normalization identity λ_m = (m+k)!/m! against the
    // composite-charge matrix element, across a small battery.
    let mut worst_rel: f64 = 0.0;
    for k in 1..=4u32 {
        for m in 0..=4u32 {
            let exact = lambda_m(m, k).map_err(numerical_err)?;
            let mut computed = sigma_block_normalization(k, m).map_err(numerical_err)?;
            if inject {
                computed *= 1.1;
            }
            worst_rel = worst_rel.max((computed - exact).abs() / exact);
        }
    }
    checks.push(CheckLine::upper(
        if inject {
            "ladder normalization identity (normalization corrupted by 10%)"
        } else {
            "ladder normalization identity"
        },
        worst_rel,
        1e-12,
    ));

    // 2. Configured flow: conservation and certification.
    let aux = solve_susy_auxiliary(cfg, sc.start.0, sc.start.1, plan.aux_panels, tol.integration)
        .map_err(numerical_err)?;
    let n = aux.grid.len();
    checks.push(CheckLine::upper(
        "auxiliary Richardson error",
        aux.richardson_err,
        tol.integration,
    ));
    checks.push(CheckLine::upper(
        "coefficient-sphere conservation drift",
        aux.conservation_drift,
        CONSERVATION_TOL,
    ));

    // 3. Angle identities along the trajectory.
    let mut worst_identity: f64 = 0.0;
    for k in 0..n {
        let (r1, r2) =
            angle_identity_residuals(aux.theta[k], aux.phi[k], aux.c[k], aux.b[k], cfg.lambda());
        worst_identity = worst_identity.max(r1).max(r2);
    }
    checks.push(CheckLine::upper(
        "sphere-angle identities",
        worst_identity,
        IDENTITY_TOL,
    ));

    // 4. The block Hamiltonian equals the two-row projection of the full
    // Fock-space Hamiltonian.
    let cutoff = (cfg.m_fock + cfg.k + 4) as usize;
    let embedding = SusyEmbedding::new(cfg, cutoff).map_err(numerical_err)?;
    let mut worst_gap: f64 = 0.0;
    for t in [
        cfg.t_start,
        0.5 * (cfg.t_start + cfg.t_end),
        cfg.t_end,
    ] {
        let block = block_hamiltonian(cfg, t).map_err(numerical_err)?;
        let projected = embedding.projected_block_hamiltonian(cfg, t);
        worst_gap = worst_gap.max(max_abs(&(block - projected)));
    }
    checks.push(CheckLine::upper(
        "block vs projected Hamiltonian",
        worst_gap,
        PROJECTION_TOL,
    ));

    // 5. Leakage out of the two-dimensional block under full-space
    // propagation of the embedded exact solution.
    let sol = susy_solution(cfg, &aux, sc.sigmas[0]).map_err(numerical_err)?;
    let stride = ((n - 1) / 64).max(1);
    let probe_grid: Vec<f64> = (0..n).step_by(stride).map(|k| aux.grid[k]).collect();
    let full_h = |t: f64| Ok(embedding.hamiltonian(cfg, t));
    let psi0_full = embedding.embed_block(sol.states[0]);
    let full_states = propagate_grid(&full_h, &probe_grid, &psi0_full, 4).map_err(numerical_err)?;
    let worst_leakage = full_states
        .iter()
        .map(|s| embedding.leakage(s))
        .fold(0.0, f64::max);
    checks.push(CheckLine::upper(
        "block leakage under full-space propagation",
        worst_leakage,
        LEAKAGE_TOL,
    ));

    // 6. Exact block solution against the brute-force block propagator.
    let h_of = |t: f64| block_hamiltonian(cfg, t);
    let psi0 = liedyn::linalg::CVec::from_vec(vec![sol.states[0][0], sol.states[0][1]]);
    let grid2: Vec<f64> = (0..=64).map(|i| aux.grid[i * (n - 1) / 64]).collect();
    let states = propagate_grid(&h_of, &grid2, &psi0, plan.substeps).map_err(numerical_err)?;
    let psi_end =
        liedyn::linalg::CVec::from_vec(vec![sol.states[n - 1][0], sol.states[n - 1][1]]);
    let ov = overlap(&psi_end, states.last().unwrap());
    checks.push(CheckLine::lower(
        "oracle overlap modulus at t_end",
        ov.norm(),
        1.0 - tol.fidelity_deficit,
    ));
    checks.push(CheckLine::upper(
        "oracle phase error at t_end (rad)",
        ov.arg().abs(),
        tol.phase_error,
    ));

    // 7. Seeded random drive variations: conservation and identities must
    // hold for any smooth inputs, not just the configured ones.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let variants: Vec<SusyJCConfig> = (0..2)
        .map(|_| {
            SusyJCConfig::new(
                cfg.k,
                cfg.m_fock,
                TimeFunction::constant(rng.gen_range(0.9..1.1)),
                TimeFunction::sinusoid(
                    rng.gen_range(0.5..1.5),
                    rng.gen_range(0.05..0.2),
                    rng.gen_range(0.6..1.4),
                    rng.gen_range(0.0..6.28),
                ),
                ComplexTimeFunction::new(
                    TimeFunction::sinusoid(
                        rng.gen_range(0.15..0.3),
                        rng.gen_range(0.03..0.08),
                        rng.gen_range(0.6..1.4),
                        rng.gen_range(0.0..6.28),
                    ),
                    TimeFunction::sinusoid(
                        0.0,
                        rng.gen_range(0.0..0.1),
                        rng.gen_range(0.6..1.4),
                        rng.gen_range(0.0..6.28),
                    ),
                ),
                0.0,
                3.0,
            )
            .expect("randomized drive parameters are admissible")
        })
        .collect();
    let variant_results = collect_indexed(parallel_indexed(jobs, variants.len(), |i| {
        let vcfg = &variants[i];
        let (c0, b0) = adiabatic_start(vcfg);
        let vaux = solve_susy_auxiliary(vcfg, c0, b0, 512, 1e-8).map_err(numerical_err)?;
        let mut ident: f64 = 0.0;
        for k in 0..vaux.grid.len() {
            let (r1, r2) = angle_identity_residuals(
                vaux.theta[k],
                vaux.phi[k],
                vaux.c[k],
                vaux.b[k],
                vcfg.lambda(),
            );
            ident = ident.max(r1).max(r2);
        }
        Ok((vaux.conservation_drift, ident))
    }))?;
    let v_drift = variant_results.iter().map(|r| r.0).fold(0.0, f64::max);
    let v_ident = variant_results.iter().map(|r| r.1).fold(0.0, f64::max);
    checks.push(CheckLine::upper(
        "conservation drift (random drives)",
        v_drift,
        CONSERVATION_TOL,
    ));
    checks.push(CheckLine::upper(
        "sphere-angle identities (random drives)",
        v_ident,
        IDENTITY_TOL,
    ));

    // 8. Convergence orders of the flow integrator and the oracle.
    let endpoint = |panels: usize| -> Result<(f64, f64, f64), CliError> {
        let a = solve_susy_auxiliary(cfg, sc.start.0, sc.start.1, panels, 1.0)
            .map_err(numerical_err)?;
        let c = *a.c.last().unwrap();
        Ok((c.re, c.im, *a.b.last().unwrap()))
    };
    let c16 = endpoint(16)?;
    let c32 = endpoint(32)?;
    let c64 = endpoint(64)?;
    let d1 = ((c16.0 - c32.0).powi(2) + (c16.1 - c32.1).powi(2) + (c16.2 - c32.2).powi(2)).sqrt();
    let d2 = ((c32.0 - c64.0).powi(2) + (c32.1 - c64.1).powi(2) + (c32.2 - c64.2).powi(2)).sqrt();
    checks.push(CheckLine::interval(
        "auxiliary integrator order",
        (d1 / d2.max(1e-300)).log2(),
        3.5,
        4.5,
    ));
    let t0 = cfg.t_start;
    let t1 = t0 + (cfg.t_end - t0).min(1.0);
    checks.push(oracle_order_check(h_of, t0, t1)?);

    Ok(checks)
}
