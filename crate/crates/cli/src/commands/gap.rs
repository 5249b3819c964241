use std::path::PathBuf;

use ambicon::gap::{ambiguity_gap, GapRatio};
use ambicon::Rational;
use clap::Args;
use num_traits::Zero;
use serde_json::Value;

use crate::error::CliResult;
use crate::io::{action_number, parse_instance, read_json};
use crate::output::{Doc, Rendered};

#[derive(Debug, Args)]
pub struct GapArgs {
    /// Also report the first-best action and its welfare.
    #[arg(long)]
    pub first_best: bool,
    pub file: PathBuf,
}

/// Writes a gap ratio; `0 / 0` is reported as null.
fn ratio(d: &mut Doc, key: &str, numerator: &Rational, r: &GapRatio) {
    match r {
        GapRatio::Finite(v) => {
            d.rat(key, v);
        }
        GapRatio::Unbounded if numerator.is_zero() => {
            d.set(key, Value::Null);
        }
        GapRatio::Unbounded => {
            d.set(key, "inf").set(&format!("{key}_decimal"), "inf");
        }
    }
}

pub fn run(args: &GapArgs) -> CliResult<Rendered> {
    let inst = parse_instance(&read_json(&args.file)?)?;
    let report = ambiguity_gap(&inst)?;
    let status = match (&report.rho, report.ambiguous_utility.is_zero()) {
        (GapRatio::Finite(_), _) => "ok",
        (GapRatio::Unbounded, true) => "degenerate",
        (GapRatio::Unbounded, false) => "unbounded",
    };
    let mut d = Doc::new();
    d.set("status", status);
    ratio(&mut d, "rho", &report.ambiguous_utility, &report.rho);
    ratio(&mut d, "rho_hat", &report.first_best_welfare, &report.rho_hat);
    d.rat("single_utility", &report.single_utility)
        .set("single_action", action_number(&inst, report.single_action))
        .rat("ambiguous_utility", &report.ambiguous_utility)
        .set("ambiguous_action", action_number(&inst, report.ambiguous_action));
    if args.first_best {
        d.set("first_best_action", action_number(&inst, report.first_best_action))
            .rat("first_best_welfare", &report.first_best_welfare);
    }
    Ok(Rendered::Doc(d))
}
