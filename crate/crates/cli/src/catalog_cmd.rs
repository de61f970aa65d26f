//! The `catalog` subcommand: list the model presets this tool can run and
//! the families that fall outside the three-generator construction.

use liedyn::algebra::Branch;
use liedyn::catalog::list_models;

use crate::config::{config_err, CliError, LadderParams, ModelKind};

/// Print one row per `--model` name with the facts a user needs to pick a
/// scenario, then the families the construction does not cover.  Output
/// order is fixed, so the listing is byte-stable run to run.
pub fn execute() -> Result<(), CliError> {
    let listing = list_models().map_err(config_err)?;
    println!("models (pass to --model):");
    for name in ModelKind::all_names() {
        let kind = ModelKind::from_name(name).expect("vocabulary names resolve");
        if kind == ModelKind::Ladder {
            let p = LadderParams::default();
            println!(
                "  {name:32} dim   2 (paired blocks)  defaults k={} m={}  \
                 two-level k-photon ladder, one 2x2 block per pair index",
                p.k, p.m
            );
            continue;
        }
        let preset = listing
            .presets
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| CliError::Config(format!("catalog preset `{name}` is missing")))?;
        let branch = match preset.rep.spec.branch() {
            Branch::Trigonometric => "rotation-like",
            Branch::Hyperbolic => "boost-like",
        };
        println!(
            "  {name:32} dim {:3} ({branch})  window [{:.1}, {:.1}]  {}",
            preset.rep.dim,
            preset.schedule.t_start,
            preset.schedule.t_end,
            preset.note
        );
    }
    println!();
    println!("outside this construction:");
    for ex in &listing.excluded {
        println!("  - {}: {}", ex.name, ex.note);
    }
    Ok(())
}
