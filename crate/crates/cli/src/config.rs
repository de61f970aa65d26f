//! Scenario configuration: a TOML document selecting a model, its control
//! schedules, the time grid, branch selection, tolerances and outputs.
//!
//! Every field beyond `model` and `[grid]` has a default, so a minimal
//! scenario is three lines.  Unknown keys are rejected rather than ignored —
//! a typo in a tolerance name must not silently loosen a check.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};
use std::fmt;
use std::path::Path;

use liedyn::{ComplexTimeFunction, TimeFunction};
use serde::Deserialize;

/// Driver-level failure, partitioned by exit code: configuration problems
/// (unreadable file, bad grammar, invalid parameters) exit with 2, numerical
/// certification failures (uncertified integration, violated tolerance,
/// coordinate singularity hit at runtime) exit with 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

/// Configuration-stage wrapper for library errors: anything raised while a
/// scenario is being assembled (domain violations, non-elliptic couplings,
/// degenerate parameterizations) is a problem with the inputs.
pub fn config_err(e: liedyn::Error) -> CliError {
    CliError::Config(e.to_string())
}

/// Runtime-stage wrapper: the scenario was well formed but a solve or a
/// certification failed while executing it.
pub fn numerical_err(e: liedyn::Error) -> CliError {
    CliError::Numerical(e.to_string())
}

fn require_finite(x: f64, what: &str) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Config(format!("{what} must be finite, got {x}")))
    }
}

/// One real control curve.  Ramp endpoints default to the grid window, so
/// `{ kind = "ramp", from = 0.0, to = 6.28 }` sweeps across the whole
/// scenario regardless of its duration.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ScheduleRecipe {
    Constant {
        value: f64,
    },
    Ramp {
        from: f64,
        to: f64,
        #[serde(default)]
        t0: Option<f64>,
        #[serde(default)]
        t1: Option<f64>,
    },
    Sinusoid {
        offset: f64,
        amplitude: f64,
        angular_frequency: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl ScheduleRecipe {
    pub fn constant(value: f64) -> Self {
        ScheduleRecipe::Constant { value }
    }

    pub fn ramp(from: f64, to: f64) -> Self {
        ScheduleRecipe::Ramp {
            from,
            to,
            t0: None,
            t1: None,
        }
    }

    pub fn sinusoid(offset: f64, amplitude: f64, angular_frequency: f64, phase: f64) -> Self {
        ScheduleRecipe::Sinusoid {
            offset,
            amplitude,
            angular_frequency,
            phase,
        }
    }

    /// Materialize the curve over the scenario window `[t_start, t_end]`.
    pub fn build(&self, t_start: f64, t_end: f64) -> Result<TimeFunction, CliError> {
        match *self {
            ScheduleRecipe::Constant { value } => {
                Ok(TimeFunction::constant(require_finite(value, "constant value")?))
            }
            ScheduleRecipe::Ramp { from, to, t0, t1 } => {
                let lo = require_finite(t0.unwrap_or(t_start), "ramp start time")?;
                let hi = require_finite(t1.unwrap_or(t_end), "ramp end time")?;
                TimeFunction::ramp(
                    lo,
                    require_finite(from, "ramp start value")?,
                    hi,
                    require_finite(to, "ramp end value")?,
                )
                .map_err(config_err)
            }
            ScheduleRecipe::Sinusoid {
                offset,
                amplitude,
                angular_frequency,
                phase,
            } => Ok(TimeFunction::sinusoid(
                require_finite(offset, "sinusoid offset")?,
                require_finite(amplitude, "sinusoid amplitude")?,
                require_finite(angular_frequency, "sinusoid angular frequency")?,
                require_finite(phase, "sinusoid phase")?,
            )),
        }
    }
}

/// A complex control curve from independent real and imaginary recipes; an
/// omitted imaginary part means a real curve.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexRecipe {
    pub re: ScheduleRecipe,
    #[serde(default)]
    pub im: Option<ScheduleRecipe>,
}

impl ComplexRecipe {
    pub fn new(re: ScheduleRecipe, im: ScheduleRecipe) -> Self {
        ComplexRecipe { re, im: Some(im) }
    }

    pub fn build(&self, t_start: f64, t_end: f64) -> Result<ComplexTimeFunction, CliError> {
        let re = self.re.build(t_start, t_end)?;
        let im = match &self.im {
            Some(r) => r.build(t_start, t_end)?,
            None => TimeFunction::constant(0.0),
        };
        Ok(ComplexTimeFunction::new(re, im))
    }
}

/// Output time grid: `steps` uniform panels over `[t_start, t_end]`, one CSV
/// row per node.  The internal integrator refines this grid; the rows land
/// exactly on these nodes.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub t_start: f64,
    pub t_end: f64,
    pub steps: usize,
}

impl GridConfig {
    fn validate(&self) -> Result<(), CliError> {
        require_finite(self.t_start, "grid.t_start")?;
        require_finite(self.t_end, "grid.t_end")?;
        if !(self.t_end > self.t_start) {
            return Err(CliError::Config(format!(
                "grid window must be nonempty: [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        if self.steps < 8 {
            return Err(CliError::Config(format!(
                "grid.steps must be at least 8, got {}",
                self.steps
            )));
        }
        Ok(())
    }
}

/// Optional explicit initial angles.  For the polar-schedule models these
/// are the auxiliary angles (a₀, b₀); for the ladder model they are read as
/// the invariant sphere angles (θ₀, φ₀).  Absent, the aligned (adiabatic)
/// start at t_start is used.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialConfig {
    pub a0: f64,
    pub b0: f64,
}

/// Which invariant eigenbranches to solve: every basis index, or an explicit
/// index list (for the ladder model the two indices are the σ = ± branches).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaConfig {
    pub select: String,
    #[serde(default)]
    pub indices: Vec<usize>,
}

impl Default for LambdaConfig {
    fn default() -> Self {
        LambdaConfig {
            select: "list".into(),
            indices: vec![0],
        }
    }
}

impl LambdaConfig {
    fn validate(&self) -> Result<(), CliError> {
        match self.select.as_str() {
            "all" => {
                if !self.indices.is_empty() {
                    return Err(CliError::Config(
                        "lambda.select = \"all\" does not take an index list".into(),
                    ));
                }
            }
            "list" => {
                if self.indices.is_empty() {
                    return Err(CliError::Config(
                        "lambda.select = \"list\" needs a nonempty lambda.indices".into(),
                    ));
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "lambda.select must be \"all\" or \"list\", got \"{other}\""
                )));
            }
        }
        Ok(())
    }
}

fn d_invariant() -> f64 {
    1e-7
}
fn d_contract() -> f64 {
    1e-8
}
fn d_fidelity() -> f64 {
    1e-6
}
fn d_phase() -> f64 {
    1e-4
}
fn d_integration() -> f64 {
    1e-8
}

/// Certification tolerances; all strictly positive.
///
/// `fidelity_deficit` bounds 1 − |⟨oracle|exact⟩|, `phase_error` bounds the
/// overlap argument in radians, `integration` is the Richardson accuracy
/// goal handed to the auxiliary integrator.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default = "d_invariant")]
    pub invariant_residual: f64,
    #[serde(default = "d_contract")]
    pub contract: f64,
    #[serde(default = "d_fidelity")]
    pub fidelity_deficit: f64,
    #[serde(default = "d_phase")]
    pub phase_error: f64,
    #[serde(default = "d_integration")]
    pub integration: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            invariant_residual: d_invariant(),
            contract: d_contract(),
            fidelity_deficit: d_fidelity(),
            phase_error: d_phase(),
            integration: d_integration(),
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), CliError> {
        for (name, v) in [
            ("invariant_residual", self.invariant_residual),
            ("contract", self.contract),
            ("fidelity_deficit", self.fidelity_deficit),
            ("phase_error", self.phase_error),
            ("integration", self.integration),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Config(format!(
                    "tolerances.{name} must be a positive finite number, got {v}"
                )));
            }
        }
        Ok(())
    }
}

fn d_true() -> bool {
    true
}

/// Which artifacts to write into the output directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default = "d_true")]
    pub phases: bool,
    #[serde(default = "d_true")]
    pub states: bool,
    #[serde(default = "d_true")]
    pub report: bool,
}

impl Default for OutputsConfig {
    fn default() -> Self {
        OutputsConfig {
            phases: true,
            states: true,
            report: true,
        }
    }
}

/// Spin j in a classical field: strength `field`, direction (θ, φ).
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinParams {
    pub two_j: u32,
    pub field: ScheduleRecipe,
    pub theta: ScheduleRecipe,
    pub phi: ScheduleRecipe,
}

impl Default for SpinParams {
    fn default() -> Self {
        SpinParams {
            two_j: 1,
            field: ScheduleRecipe::constant(1.0),
            theta: ScheduleRecipe::constant(FRAC_PI_4),
            phi: ScheduleRecipe::ramp(0.0, 2.0 * PI),
        }
    }
}

/// Two linearly coupled modes (beam-splitter exchange) restricted to a
/// fixed total excitation number.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamSplitterParams {
    pub omega1: ScheduleRecipe,
    pub omega2: ScheduleRecipe,
    pub g: ComplexRecipe,
    pub total_excitation: u32,
}

impl Default for BeamSplitterParams {
    fn default() -> Self {
        BeamSplitterParams {
            omega1: ScheduleRecipe::constant(1.3),
            omega2: ScheduleRecipe::constant(1.0),
            g: ComplexRecipe::new(
                ScheduleRecipe::ramp(0.1, 0.4),
                ScheduleRecipe::constant(0.1),
            ),
            total_excitation: 2,
        }
    }
}

/// Two modes under a parametric pair coupling, restricted to a fixed
/// excitation difference and truncated at `cutoff` ladder rungs.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParametricParams {
    pub omega1: ScheduleRecipe,
    pub omega2: ScheduleRecipe,
    pub g: ComplexRecipe,
    pub excitation_difference: u32,
    pub cutoff: usize,
}

impl Default for ParametricParams {
    fn default() -> Self {
        ParametricParams {
            omega1: ScheduleRecipe::constant(1.3),
            omega2: ScheduleRecipe::constant(1.1),
            g: ComplexRecipe::new(
                ScheduleRecipe::sinusoid(0.2, 0.12, 1.0, 0.0),
                ScheduleRecipe::constant(0.08),
            ),
            excitation_difference: 1,
            cutoff: 32,
        }
    }
}

/// Generalized harmonic oscillator H = ½[X q² + Y(qp+pq) + Z p²] on the
/// even Fock ladder.  The q-linear drive must vanish (it would need the
/// displacement generators, which live outside the closed triple).
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillatorParams {
    pub x: ScheduleRecipe,
    pub y: ScheduleRecipe,
    pub z: ScheduleRecipe,
    pub drive: ScheduleRecipe,
    pub cutoff: usize,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams {
            x: ScheduleRecipe::sinusoid(1.2, 0.2, 1.0, 0.0),
            y: ScheduleRecipe::sinusoid(0.0, 0.1, 1.0, FRAC_PI_2),
            z: ScheduleRecipe::constant(0.8),
            drive: ScheduleRecipe::constant(0.0),
            cutoff: 32,
        }
    }
}

/// Two-level atom: splitting ω₀(t), complex drive g(t) on the lowering
/// transition.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoLevelParams {
    pub omega0: ScheduleRecipe,
    pub g: ComplexRecipe,
}

impl Default for TwoLevelParams {
    fn default() -> Self {
        TwoLevelParams {
            omega0: ScheduleRecipe::constant(1.0),
            g: ComplexRecipe::new(
                ScheduleRecipe::ramp(0.2, 0.5),
                ScheduleRecipe::sinusoid(0.0, 0.1, 2.0, 0.0),
            ),
        }
    }
}

/// k-photon atom–field ladder block: photon exchange number `k`, lower Fock
/// index `m`, mode frequency ω(t), splitting ω₀(t), coupling g(t).
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderParams {
    pub k: u32,
    pub m: u32,
    pub omega: ScheduleRecipe,
    pub omega0: ScheduleRecipe,
    pub g: ComplexRecipe,
}

impl Default for LadderParams {
    fn default() -> Self {
        LadderParams {
            k: 1,
            m: 0,
            omega: ScheduleRecipe::constant(1.0),
            omega0: ScheduleRecipe::constant(0.7),
            g: ComplexRecipe::new(
                ScheduleRecipe::ramp(0.2, 0.35),
                ScheduleRecipe::sinusoid(0.0, 0.08, 0.9, 0.4),
            ),
        }
    }
}

fn d_periods() -> Vec<f64> {
    vec![80.0, 800.0, 8000.0]
}
fn d_field() -> f64 {
    1.0
}
fn d_cone() -> f64 {
    FRAC_PI_6
}
fn d_berry_tol() -> f64 {
    1e-3
}

/// Adiabatic sweep description for the `berry` subcommand: the invariant
/// cone angle to hold, the list of sweep periods (one full 2π winding of the
/// azimuth each), the drive strength, and the final-row error tolerance.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BerryConfig {
    pub cone_angle: f64,
    pub periods: Vec<f64>,
    pub field: f64,
    pub tolerance: f64,
}

impl Default for BerryConfig {
    fn default() -> Self {
        BerryConfig {
            cone_angle: d_cone(),
            periods: d_periods(),
            field: d_field(),
            tolerance: d_berry_tol(),
        }
    }
}

impl BerryConfig {
    fn validate(&self) -> Result<(), CliError> {
        require_finite(self.cone_angle, "berry.cone_angle")?;
        if self.cone_angle < 0.0 {
            return Err(CliError::Config(
                "berry.cone_angle must be nonnegative".into(),
            ));
        }
        if self.periods.is_empty() {
            return Err(CliError::Config("berry.periods must be nonempty".into()));
        }
        for w in self.periods.windows(2) {
            if !(w[1] > w[0]) {
                return Err(CliError::Config(
                    "berry.periods must be strictly increasing".into(),
                ));
            }
        }
        if !(self.periods[0] > 0.0 && self.periods[0].is_finite()) {
            return Err(CliError::Config("berry.periods must be positive".into()));
        }
        if !self.periods.iter().all(|p| p.is_finite()) {
            return Err(CliError::Config("berry.periods must be finite".into()));
        }
        if !(self.field.is_finite() && self.field > 0.0) {
            return Err(CliError::Config("berry.field must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Config("berry.tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// The six model families the driver can run.  The first five reuse the
/// catalog presets' vocabulary; the last is the k-photon ladder block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Spin,
    BeamSplitter,
    Parametric,
    Oscillator,
    TwoLevel,
    Ladder,
}

impl ModelKind {
    pub fn from_name(name: &str) -> Option<ModelKind> {
        match name {
            "spin-precession" => Some(ModelKind::Spin),
            "coupled-modes-beam-splitter" => Some(ModelKind::BeamSplitter),
            "coupled-modes-parametric" => Some(ModelKind::Parametric),
            "general-quadratic-oscillator" => Some(ModelKind::Oscillator),
            "driven-two-level-atom" => Some(ModelKind::TwoLevel),
            "k-photon-ladder" => Some(ModelKind::Ladder),
            _ => None,
        }
    }

    /// The TOML section holding this model's parameters.
    pub fn section(self) -> &'static str {
        match self {
            ModelKind::Spin => "spin",
            ModelKind::BeamSplitter => "beam-splitter",
            ModelKind::Parametric => "parametric",
            ModelKind::Oscillator => "oscillator",
            ModelKind::TwoLevel => "two-level",
            ModelKind::Ladder => "ladder",
        }
    }

    pub fn all_names() -> [&'static str; 6] {
        [
            "spin-precession",
            "coupled-modes-beam-splitter",
            "coupled-modes-parametric",
            "general-quadratic-oscillator",
            "driven-two-level-atom",
            "k-photon-ladder",
        ]
    }
}

/// A full scenario document.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub model: String,
    #[serde(default)]
    pub seed: u64,
    pub grid: GridConfig,
    #[serde(default)]
    pub initial: Option<InitialConfig>,
    #[serde(default)]
    pub lambda: LambdaConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub outputs: OutputsConfig,
    #[serde(default)]
    pub spin: Option<SpinParams>,
    #[serde(default, rename = "beam-splitter")]
    pub beam_splitter: Option<BeamSplitterParams>,
    #[serde(default)]
    pub parametric: Option<ParametricParams>,
    #[serde(default)]
    pub oscillator: Option<OscillatorParams>,
    #[serde(default, rename = "two-level")]
    pub two_level: Option<TwoLevelParams>,
    #[serde(default)]
    pub ladder: Option<LadderParams>,
    #[serde(default)]
    pub berry: Option<BerryConfig>,
}

impl ScenarioConfig {
    /// Parse and validate a scenario file.
    pub fn load(path: &Path) -> Result<ScenarioConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let cfg: ScenarioConfig = toml::from_str(&text)
            .map_err(|e| CliError::Config(format!("cannot parse {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn model_kind(&self) -> Result<ModelKind, CliError> {
        ModelKind::from_name(&self.model).ok_or_else(|| {
            CliError::Config(format!(
                "unknown model \"{}\"; available: {}",
                self.model,
                ModelKind::all_names().join(", ")
            ))
        })
    }

    fn validate(&self) -> Result<(), CliError> {
        let kind = self.model_kind()?;
        self.grid.validate()?;
        self.lambda.validate()?;
        self.tolerances.validate()?;
        if let Some(init) = &self.initial {
            require_finite(init.a0, "initial.a0")?;
            require_finite(init.b0, "initial.b0")?;
        }
        if let Some(berry) = &self.berry {
            berry.validate()?;
        }
        // A parameter section for a different model is almost certainly a
        // mistake; reject it instead of quietly ignoring it.
        let sections: [(&str, bool); 6] = [
            ("spin", self.spin.is_some()),
            ("beam-splitter", self.beam_splitter.is_some()),
            ("parametric", self.parametric.is_some()),
            ("oscillator", self.oscillator.is_some()),
            ("two-level", self.two_level.is_some()),
            ("ladder", self.ladder.is_some()),
        ];
        for (name, present) in sections {
            if present && name != kind.section() {
                return Err(CliError::Config(format!(
                    "parameter section [{name}] does not belong to model \
                     \"{}\" (expected [{}] or none)",
                    self.model,
                    kind.section()
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
        let cfg: ScenarioConfig =
            toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn minimal_scenario_parses_with_defaults() {
        let cfg = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 6.0\nsteps = 64\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.lambda.select, "list");
        assert_eq!(cfg.lambda.indices, vec![0]);
        assert!(cfg.outputs.phases && cfg.outputs.states && cfg.outputs.report);
        assert!((cfg.tolerances.invariant_residual - 1e-7).abs() < 1e-20);
        assert!(cfg.initial.is_none());
        assert_eq!(cfg.model_kind().unwrap(), ModelKind::Spin);
    }

    #[test]
    fn recipe_ramp_defaults_to_grid_window() {
        let r = ScheduleRecipe::ramp(0.0, 2.0);
        let f = r.build(1.0, 3.0).unwrap();
        assert!((f.eval(1.0) - 0.0).abs() < 1e-15);
        assert!((f.eval(3.0) - 2.0).abs() < 1e-15);
        assert!((f.eval(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse(
            "model = \"spin-precession\"\nbogus = 1\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 8\n",
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let err = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 4\n",
        )
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("steps"));
    }

    #[test]
    fn nonpositive_tolerances_are_rejected() {
        let err = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 8\n\
             [tolerances]\nphase_error = 0.0\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("phase_error"));
    }

    #[test]
    fn mismatched_parameter_section_is_rejected() {
        let err = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 8\n\
             [ladder]\nk = 2\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("[ladder]"));
    }

    #[test]
    fn lambda_selection_grammar() {
        let all = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 8\n\
             [lambda]\nselect = \"all\"\n",
        )
        .unwrap();
        assert_eq!(all.lambda.select, "all");
        let err = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 8\n\
             [lambda]\nselect = \"list\"\nindices = []\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("indices"));
    }

    #[test]
    fn ladder_params_partial_override_keeps_other_defaults() {
        let cfg = parse(
            "model = \"k-photon-ladder\"\n[grid]\nt_start = 0.0\nt_end = 3.0\nsteps = 8\n\
             [ladder]\nk = 2\nm = 1\n",
        )
        .unwrap();
        let ladder = cfg.ladder.unwrap();
        assert_eq!((ladder.k, ladder.m), (2, 1));
        // Untouched fields keep their defaults.
        match ladder.omega {
            ScheduleRecipe::Constant { value } => assert!((value - 1.0).abs() < 1e-15),
            ref other => panic!("expected constant omega default, got {other:?}"),
        }
    }

    #[test]
    fn berry_period_ordering_is_enforced() {
        let err = parse(
            "model = \"spin-precession\"\n[grid]\nt_start = 0.0\nt_end = 1.0\nsteps = 8\n\
             [berry]\nperiods = [100.0, 10.0]\n",
        )
        .unwrap_err();
        assert!(err.to_string().contains("increasing"));
    }
}
