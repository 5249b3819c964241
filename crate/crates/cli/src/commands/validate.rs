use std::path::PathBuf;

use ambicon::ambiguous::validate;
use ambicon::model::{largest_payment, worst_case_utility};
use clap::Args;

use super::{certificate_doc, contracts_value};
use crate::error::CliResult;
use crate::io::{action_index, parse_instance, parse_tau, read_json};
use crate::output::{Doc, Rendered};

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
    /// Contract set `{"contracts": [[rat, …], …]}` in input outcome order.
    #[arg(long, value_name = "TAU.json")]
    pub tau: PathBuf,
    /// Action to check (1-based, input order).
    #[arg(long, value_name = "K")]
    pub action: usize,
}

pub fn run(args: &ValidateArgs) -> CliResult<Rendered> {
    let inst = parse_instance(&read_json(&args.file)?)?;
    let tau = parse_tau(&read_json(&args.tau)?, &inst)?;
    let i = action_index(&inst, args.action)?;
    let cert = validate(&inst, &tau, i);
    let mut d = Doc::new();
    d.set("status", if cert.passed() { "valid" } else { "invalid" })
        .set("action", args.action)
        .set("action_label", inst.action_label(i))
        .set("contracts", contracts_value(&inst, &tau))
        .rat("worst_case_utility", &worst_case_utility(&inst, i, &tau))
        .rat("largest_payment", &largest_payment(&inst, i, &tau))
        .child("certificate", certificate_doc(&inst, &cert));
    Ok(Rendered::Doc(d))
}
