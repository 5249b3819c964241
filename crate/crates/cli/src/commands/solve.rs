use std::path::PathBuf;

use ambicon::ambiguous::{
    solve_general, solve_general_for_action, solve_mlrp, solve_mlrp_for_action, solve_mlrp_monotone,
    solve_mlrp_monotone_for_action, solve_monotone, solve_monotone_for_action, MonotoneOutcome,
};
use ambicon::lp::{min_payment, optimal_single};
use ambicon::model::{dedupe_actions, DedupeReport};
use ambicon::{AmbiguousContract, Instance, Rational, SolveResult};
use clap::{Args, ValueEnum};
use rayon::prelude::*;

use super::result_doc;
use crate::error::{CliError, CliResult};
use crate::io::{action_index, action_number, parse_instance, read_json};
use crate::output::{Doc, Format, Rendered};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Single,
    Ambiguous,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Restrict to monotone (non-decreasing) contracts.
    #[arg(long)]
    pub monotone: bool,
    /// Use the two-contract MLRP solver; the instance must satisfy MLRP.
    #[arg(long)]
    pub mlrp_fast: bool,
    /// Incentivise this action (1-based, input order) instead of optimising.
    #[arg(long, value_name = "K")]
    pub action: Option<usize>,
    pub file: PathBuf,
}

enum Outcome {
    Solved(Box<SolveResult>),
    NotImplementable { reason: String, witness: Option<usize> },
}

struct Solver<'a> {
    inst: &'a Instance,
    reduced: Instance,
    report: DedupeReport,
    args: &'a SolveArgs,
}

impl<'a> Solver<'a> {
    fn new(inst: &'a Instance, args: &'a SolveArgs) -> CliResult<Self> {
        let (reduced, report) = dedupe_actions(inst)?;
        Ok(Self { inst, reduced, report, args })
    }

    fn single_for(&self, i: usize) -> CliResult<Outcome> {
        Ok(match min_payment(self.inst, i, self.args.monotone)? {
            Some(mp) => Outcome::Solved(Box::new(SolveResult::evaluate(
                self.inst,
                AmbiguousContract::single(mp.contract),
                i,
            ))),
            None => Outcome::NotImplementable {
                reason: "no single contract implements the action".into(),
                witness: None,
            },
        })
    }

    /// Solves on the deduplicated instance and re-checks on the input.
    fn ambiguous_for(&self, i: usize) -> CliResult<Outcome> {
        let k = (0..self.reduced.n())
            .find(|&k| self.inst.row(self.report.original(k)) == self.inst.row(i))
            .expect("every row survives deduplication once");
        let solution = match (self.args.mlrp_fast, self.args.monotone) {
            (true, false) => solve_mlrp_for_action(&self.reduced, k)?,
            (true, true) => solve_mlrp_monotone_for_action(&self.reduced, k)?,
            (false, false) => solve_general_for_action(&self.reduced, k)?,
            (false, true) => match solve_monotone_for_action(&self.reduced, k)? {
                MonotoneOutcome::Solved(s) => s,
                MonotoneOutcome::NotImplementable { dominated_by } => {
                    return Ok(Outcome::NotImplementable {
                        reason: "a cheaper action dominates every tail sum".into(),
                        witness: Some(self.report.original(dominated_by)),
                    })
                }
            },
        };
        let res = SolveResult::evaluate(self.inst, solution.result.contracts, i);
        if !res.certificate.passed() {
            if self.report.original(k) == i {
                return Err(CliError::Domain("solver output failed validation".into()));
            }
            return Ok(Outcome::NotImplementable {
                reason: "a cheaper action has the same outcome distribution".into(),
                witness: Some(self.report.original(k)),
            });
        }
        Ok(Outcome::Solved(Box::new(res)))
    }

    fn for_action(&self, i: usize) -> CliResult<Outcome> {
        match self.args.mode {
            Mode::Single => self.single_for(i),
            Mode::Ambiguous => self.ambiguous_for(i),
        }
    }

    fn optimum(&self) -> CliResult<SolveResult> {
        if self.args.mode == Mode::Single {
            return Ok(optimal_single(self.inst, self.args.monotone)?);
        }
        let best = match (self.args.mlrp_fast, self.args.monotone) {
            (true, false) => solve_mlrp(&self.reduced)?,
            (true, true) => solve_mlrp_monotone(&self.reduced)?,
            (false, false) => solve_general(&self.reduced)?,
            (false, true) => solve_monotone(&self.reduced)?,
        };
        let i = self.report.original(best.incentivized_action);
        Ok(SolveResult::evaluate(self.inst, best.contracts, i))
    }
}

fn header(args: &SolveArgs) -> Doc {
    let mut d = Doc::new();
    d.set("mode", if args.mode == Mode::Single { "single" } else { "ambiguous" })
        .set("monotone", args.monotone)
        .set("mlrp_fast", args.mlrp_fast);
    d
}

fn outcome_doc(inst: &Instance, args: &SolveArgs, i: usize, outcome: Outcome) -> Doc {
    let mut d = header(args);
    match outcome {
        Outcome::Solved(res) => {
            for (k, v) in result_doc(inst, &res).into_map() {
                d.set(&k, v);
            }
        }
        Outcome::NotImplementable { reason, witness } => {
            d.set("status", "not_implementable")
                .set("action", action_number(inst, i))
                .set("action_label", inst.action_label(i))
                .set("reason", reason);
            if let Some(w) = witness {
                d.set("witness_action", action_number(inst, w));
            }
        }
    }
    d
}

const CSV_HEADER: [&str; 6] = ["action", "R", "W", "min_payment_single", "payment_ambiguous", "U_P"];

fn cell(r: Option<&Rational>) -> String {
    r.map(ToString::to_string).unwrap_or_default()
}

fn table(solver: &Solver<'_>, actions: &[usize]) -> CliResult<Rendered> {
    let inst = solver.inst;
    let payments = |o: Outcome| match o {
        Outcome::Solved(res) => Some(res.expected_payment),
        Outcome::NotImplementable { .. } => None,
    };
    let mut rows = actions
        .par_iter()
        .map(|&i| {
            let single = payments(solver.single_for(i)?);
            let amb = payments(solver.ambiguous_for(i)?);
            let chosen = if solver.args.mode == Mode::Single { &single } else { &amb };
            let reward = inst.expected_reward(i);
            let up = chosen.as_ref().map(|p| &reward - p);
            Ok((
                inst.action_origin(i),
                vec![
                    action_number(inst, i).to_string(),
                    reward.to_string(),
                    inst.welfare(i).to_string(),
                    cell(single.as_ref()),
                    cell(amb.as_ref()),
                    cell(up.as_ref()),
                ],
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by_key(|(origin, _)| *origin);
    Ok(Rendered::Table { header: CSV_HEADER.to_vec(), rows: rows.into_iter().map(|(_, r)| r).collect() })
}

pub fn run(args: &SolveArgs, format: Format) -> CliResult<Rendered> {
    if args.mlrp_fast && args.mode == Mode::Single {
        return Err(CliError::input("--mlrp-fast applies to --mode ambiguous only"));
    }
    let inst = parse_instance(&read_json(&args.file)?)?;
    let solver = Solver::new(&inst, args)?;
    let target = args.action.map(|k| action_index(&inst, k)).transpose()?;
    if format == Format::Csv {
        let actions: Vec<usize> = match target {
            Some(i) => vec![i],
            None => (0..inst.n()).collect(),
        };
        return table(&solver, &actions);
    }
    let doc = match target {
        Some(i) => outcome_doc(&inst, args, i, solver.for_action(i)?),
        None => {
            let best = solver.optimum()?;
            let i = best.incentivized_action;
            outcome_doc(&inst, args, i, Outcome::Solved(Box::new(best)))
        }
    };
    Ok(Rendered::Doc(doc))
}
