//! Turn a validated configuration into a runnable scenario: a concrete
//! model (representation + coefficient schedule, or a ladder block), the
//! initial auxiliary data, the resolved branch selection, and the derived
//! integration plan for the requested output grid.

use liedyn::catalog::{
    coupled_oscillators_su11, coupled_oscillators_su2, general_harmonic_oscillator, spin_model,
    two_level_atom, ModelPreset,
};
use liedyn::evolution::invariant_eigenvalue;
use liedyn::invariant::static_start;
use liedyn::susy_jc::{adiabatic_start, SigmaSign, SusyJCConfig};
use num_complex::Complex64;

use crate::config::{CliError, ModelKind, ScenarioConfig};

/// Integration counts derived from the output grid.  The auxiliary solver
/// runs on `steps · refine` panels (at least ~1024, always even so the
/// solver keeps the node layout), and every `refine`-th node is an output
/// row.  The oracle uses `substeps` exponential-product steps per output
/// panel, keeping the total near 8192 regardless of grid resolution.
#[derive(Debug, Clone, Copy)]
pub struct GridPlan {
    pub steps: usize,
    pub refine: usize,
    pub aux_panels: usize,
    pub substeps: usize,
}

pub fn grid_plan(steps: usize) -> GridPlan {
    let mut refine = (1023 + steps) / steps;
    if (steps * refine) % 2 == 1 {
        refine += 1;
    }
    GridPlan {
        steps,
        refine,
        aux_panels: steps * refine,
        substeps: ((8191 + steps) / steps).max(4),
    }
}

/// A polar-schedule scenario: model preset plus start angles and the
/// selected invariant eigenbranches (basis indices).
#[derive(Debug)]
pub struct GenericScenario {
    pub preset: ModelPreset,
    pub start: (f64, f64),
    pub indices: Vec<usize>,
}

impl GenericScenario {
    pub fn lambdas(&self) -> Vec<f64> {
        self.indices
            .iter()
            .map(|&i| invariant_eigenvalue(&self.preset.rep, i))
            .collect()
    }
}

/// A ladder-block scenario: block configuration plus the initial invariant
/// coefficients and the selected σ branches.
#[derive(Debug)]
pub struct LadderScenario {
    pub cfg: SusyJCConfig,
    pub start: (Complex64, f64),
    pub sigmas: Vec<SigmaSign>,
}

#[derive(Debug)]
pub enum Scenario {
    Generic(GenericScenario),
    Ladder(LadderScenario),
}

fn resolve_indices(config: &ScenarioConfig, dim: usize) -> Result<Vec<usize>, CliError> {
    if config.lambda.select == "all" {
        return Ok((0..dim).collect());
    }
    for &i in &config.lambda.indices {
        if i >= dim {
            return Err(CliError::Config(format!(
                "lambda index {i} out of range for a {dim}-dimensional representation"
            )));
        }
    }
    Ok(config.lambda.indices.clone())
}

fn build_generic(config: &ScenarioConfig, kind: ModelKind) -> Result<GenericScenario, CliError> {
    let (t0, t1) = (config.grid.t_start, config.grid.t_end);
    let preset = match kind {
        ModelKind::Spin => {
            let p = config.spin.clone().unwrap_or_default();
            spin_model(
                p.field.build(t0, t1)?,
                p.theta.build(t0, t1)?,
                p.phi.build(t0, t1)?,
                p.two_j,
                t0,
                t1,
            )
            .map_err(crate::config::config_err)?
        }
        ModelKind::BeamSplitter => {
            let p = config.beam_splitter.clone().unwrap_or_default();
            coupled_oscillators_su2(
                p.omega1.build(t0, t1)?,
                p.omega2.build(t0, t1)?,
                p.g.build(t0, t1)?,
                p.total_excitation,
                t0,
                t1,
            )
            .map_err(crate::config::config_err)?
        }
        ModelKind::Parametric => {
            let p = config.parametric.clone().unwrap_or_default();
            coupled_oscillators_su11(
                p.omega1.build(t0, t1)?,
                p.omega2.build(t0, t1)?,
                p.g.build(t0, t1)?,
                p.excitation_difference,
                p.cutoff,
                t0,
                t1,
            )
            .map_err(crate::config::config_err)?
        }
        ModelKind::Oscillator => {
            let p = config.oscillator.clone().unwrap_or_default();
            general_harmonic_oscillator(
                p.x.build(t0, t1)?,
                p.y.build(t0, t1)?,
                p.z.build(t0, t1)?,
                &p.drive.build(t0, t1)?,
                p.cutoff,
                t0,
                t1,
            )
            .map_err(crate::config::config_err)?
        }
        ModelKind::TwoLevel => {
            let p = config.two_level.clone().unwrap_or_default();
            two_level_atom(p.omega0.build(t0, t1)?, p.g.build(t0, t1)?, t0, t1)
                .map_err(crate::config::config_err)?
        }
        ModelKind::Ladder => unreachable!("ladder scenarios take the other branch"),
    };
    let start = match &config.initial {
        Some(init) => (init.a0, init.b0),
        None => static_start(&preset.rep.spec, &preset.schedule)
            .map_err(crate::config::config_err)?,
    };
    let indices = resolve_indices(config, preset.rep.dim)?;
    Ok(GenericScenario {
        preset,
        start,
        indices,
    })
}

fn build_ladder(config: &ScenarioConfig) -> Result<LadderScenario, CliError> {
    let (t0, t1) = (config.grid.t_start, config.grid.t_end);
    let p = config.ladder.clone().unwrap_or_default();
    let cfg = SusyJCConfig::new(
        p.k,
        p.m,
        p.omega.build(t0, t1)?,
        p.omega0.build(t0, t1)?,
        p.g.build(t0, t1)?,
        t0,
        t1,
    )
    .map_err(crate::config::config_err)?;
    let start = match &config.initial {
        Some(init) => {
            // Read (a0, b0) as the invariant sphere angles (θ₀, φ₀) and map
            // them onto the coefficient sphere λ|c|² + b² = 1.
            let (theta0, phi0) = (init.a0, init.b0);
            let c0 = Complex64::from_polar(-theta0.sin() / cfg.lambda().sqrt(), -phi0);
            (c0, theta0.cos())
        }
        None => adiabatic_start(&cfg),
    };
    // Branch indices: 0 is σ = +, 1 is σ = −.
    let dim = 2;
    let sigmas = resolve_indices(config, dim)?
        .into_iter()
        .map(|i| if i == 0 { SigmaSign::Plus } else { SigmaSign::Minus })
        .collect();
    Ok(LadderScenario { cfg, start, sigmas })
}

/// Build the scenario and the integration plan for a validated config.
pub fn build(config: &ScenarioConfig) -> Result<(Scenario, GridPlan), CliError> {
    let kind = config.model_kind()?;
    let plan = grid_plan(config.grid.steps);
    let scenario = match kind {
        ModelKind::Ladder => Scenario::Ladder(build_ladder(config)?),
        _ => Scenario::Generic(build_generic(config, kind)?),
    };
    Ok((scenario, plan))
}
