//! The `berry` subcommand: a driven adiabatic sweep of the closed-loop
//! geometric phase.  The invariant cone angle is held (through the schedule
//! tilt) while the azimuth winds through 2π over each configured period;
//! the accumulated geometric phase is compared against the closed-form
//! solid-angle value (λ/m)·2π·(1 − cos a), which the sweep approaches as
//! the period grows.
//!
//! Output: `berry.csv` with columns (sweep_period, phi_g, target, error),
//! plus `berry_report.txt` checking that the error falls as the period
//! grows and that the final row is inside tolerance.

use std::f64::consts::TAU;
use std::path::Path;

use liedyn::algebra::Branch;
use liedyn::evolution::{berry_limit, invariant_eigenvalue, phases};
use liedyn::invariant::{kappa_constants, solve_auxiliary, static_start};
use liedyn::{CoefficientSchedule, TimeFunction};

use crate::config::{numerical_err, BerryConfig, CliError, ScenarioConfig};
use crate::output::{
    collect_indexed, parallel_indexed, render_report, sci, short, write_csv, write_text, CheckLine,
};
use crate::scenario::{self, Scenario};

/// Residual integration error can leave a tiny floor under the sweep error;
/// two rows both at the floor still count as converged.
const ERROR_FLOOR: f64 = 1e-5;

/// Schedule tilt θ that pins the held cone angle `a` as the aligned
/// (adiabatic) direction: on the rotation branch the cone is the tilt
/// itself; on the boost branch the static rapidity solves
/// tanh α = (|κ|/m)·tanθ, so θ = atan((m/|κ|)·tanh a).
fn tilt_for_cone(spec: &liedyn::AlgebraSpec, cone: f64) -> Result<f64, CliError> {
    match spec.branch() {
        Branch::Trigonometric => {
            if cone >= std::f64::consts::PI {
                return Err(CliError::Config(format!(
                    "berry.cone_angle must stay below pi on the rotation branch, got {cone}"
                )));
            }
            Ok(cone)
        }
        Branch::Hyperbolic => {
            if cone > 5.0 {
                return Err(CliError::Config(format!(
                    "berry.cone_angle (a mixing rapidity on this branch) must stay \
                     at or below 5, got {cone}"
                )));
            }
            let kmod = kappa_constants(spec).kappa_modulus;
            Ok((spec.m / kmod * cone.tanh()).atan())
        }
    }
}

pub fn execute(config: &ScenarioConfig, out_dir: &Path, jobs: usize) -> Result<bool, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", out_dir.display())))?;
    let berry = config.berry.clone().unwrap_or_default();
    let (built, _) = scenario::build(config)?;
    let sc = match built {
        Scenario::Generic(sc) => sc,
        Scenario::Ladder(_) => {
            return Err(CliError::Config(
                "the berry sweep drives the polar-schedule pipeline; pick one of \
                 the spin or oscillator models"
                    .into(),
            ));
        }
    };
    let spec = sc.preset.rep.spec.clone();
    let lambda = invariant_eigenvalue(&sc.preset.rep, sc.indices[0]);
    let theta = tilt_for_cone(&spec, berry.cone_angle)?;

    // One full 2π azimuth winding per period, solved independently.
    let results = collect_indexed(parallel_indexed(jobs, berry.periods.len(), |i| {
        sweep_point(&spec, &berry, theta, lambda, berry.periods[i])
    }))?;

    let mut rows = Vec::with_capacity(results.len());
    for (i, &(phi_g, target, error)) in results.iter().enumerate() {
        rows.push(vec![
            sci(berry.periods[i]),
            sci(phi_g),
            sci(target),
            sci(error),
        ]);
    }
    let csv_path = out_dir.join("berry.csv");
    write_csv(&csv_path, "sweep_period,phi_g,target,error", &rows)?;

    let mut checks = Vec::new();
    for w in results.windows(2) {
        let (e0, e1) = (w[0].2, w[1].2);
        checks.push(CheckLine {
            name: "sweep error falls with the period".into(),
            detail: format!("{} -> {}", short(e0), short(e1)),
            pass: e1 < e0 || (e0 <= ERROR_FLOOR && e1 <= ERROR_FLOOR),
        });
    }
    let final_error = results.last().map(|r| r.2).unwrap_or(f64::INFINITY);
    checks.push(CheckLine::upper(
        "final sweep error (rad)",
        final_error,
        berry.tolerance,
    ));

    let preamble = vec![
        format!("adiabatic sweep on model: {}", sc.preset.name),
        format!(
            "held cone angle a = {}, drive strength {}, lambda = {}",
            sci(berry.cone_angle),
            sci(berry.field),
            sci(lambda)
        ),
        format!(
            "closed-loop target (lambda/m)*2*pi*(1 - cos a) = {}",
            sci(results.first().map(|r| r.1).unwrap_or(f64::NAN))
        ),
        format!("periods: {}", berry.periods.len()),
    ];
    let (report, pass) = render_report(&preamble, &checks);
    print!("{report}");
    println!("wrote {}", csv_path.display());
    if config.outputs.report {
        let report_path = out_dir.join("berry_report.txt");
        write_text(&report_path, &report)?;
        println!("wrote {}", report_path.display());
    }
    Ok(pass)
}

/// Run one sweep: tilt held, azimuth ramped 0 → 2π over `period`, solved
/// from the aligned start.  Returns (phi_g, target, |phi_g − target|).
fn sweep_point(
    spec: &liedyn::AlgebraSpec,
    berry: &BerryConfig,
    theta: f64,
    lambda: f64,
    period: f64,
) -> Result<(f64, f64, f64), CliError> {
    let sched = CoefficientSchedule::new(
        TimeFunction::constant(berry.field),
        TimeFunction::constant(theta),
        TimeFunction::ramp(0.0, 0.0, period, TAU).map_err(numerical_err)?,
        TimeFunction::constant(0.0),
        0.0,
        period,
    )
    .map_err(numerical_err)?;
    let (a0, b0) = static_start(spec, &sched).map_err(numerical_err)?;
    let mut panels = ((16.0 * period).ceil() as usize).max(512);
    panels += panels % 2;
    let traj = solve_auxiliary(spec, &sched, a0, b0, panels, 1e-6).map_err(numerical_err)?;
    let ph = phases(spec, &sched, &traj);
    let phi_g = ph.phi_g(traj.grid.len() - 1, lambda);
    let target = berry_limit(spec, a0, lambda);
    Ok((phi_g, target, (phi_g - target).abs()))
}
