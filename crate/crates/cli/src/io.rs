//! Reading and writing instance, contract-set and class documents.
//!
//! A rational is accepted as a JSON integer, a JSON number, an integer or
//! decimal string, or a `"p/q"` string; all conversions are exact.

use std::fs;
use std::path::Path;

use ambicon::rational::parse_rational;
use ambicon::{AmbiguousContract, Contract, Instance, Rational};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

/// Reads a document from a file, from stdin for `-`, or inline when the
/// argument itself starts with `{`.
pub fn read_json(path: &Path) -> CliResult<Value> {
    let arg = path.to_string_lossy();
    let text = if arg.trim_start().starts_with('{') {
        arg.into_owned()
    } else if arg == "-" {
        std::io::read_to_string(std::io::stdin())
            .map_err(|e| CliError::input(format!("cannot read stdin: {e}")))?
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?
    };
    serde_json::from_str(&text)
        .map_err(|e| CliError::input(format!("{} is not valid JSON: {e}", path.display())))
}

pub fn parse_rat(v: &Value, at: &str) -> CliResult<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(CliError::input(format!("{at}: expected a number, found {v}"))),
    };
    parse_rational(&text).map_err(|e| CliError::input(format!("{at}: {e}")))
}

fn as_array<'a>(v: &'a Value, at: &str) -> CliResult<&'a [Value]> {
    v.as_array().map(Vec::as_slice).ok_or_else(|| CliError::input(format!("{at}: expected an array")))
}

pub fn parse_rat_list(v: &Value, at: &str) -> CliResult<Vec<Rational>> {
    as_array(v, at)?.iter().enumerate().map(|(k, x)| parse_rat(x, &format!("{at}[{k}]"))).collect()
}

fn as_object<'a>(v: &'a Value, what: &str) -> CliResult<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| CliError::input(format!("{what} must be a JSON object")))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<&'a Value> {
    obj.get(key).ok_or_else(|| CliError::input(format!("missing field \"{key}\"")))
}

fn labels(obj: &Map<String, Value>, key: &str) -> CliResult<Option<Vec<String>>> {
    let Some(v) = obj.get(key) else { return Ok(None) };
    as_array(v, key)?
        .iter()
        .enumerate()
        .map(|(k, x)| match x {
            Value::String(s) => Ok(s.clone()),
            Value::Number(n) => Ok(n.to_string()),
            _ => Err(CliError::input(format!("{key}[{k}]: expected a string"))),
        })
        .collect::<CliResult<Vec<_>>>()
        .map(Some)
}

/// Builds an instance; keys other than the instance fields are ignored, so
/// generator output can be fed back directly.
pub fn parse_instance(doc: &Value) -> CliResult<Instance> {
    let obj = as_object(doc, "instance")?;
    let costs = parse_rat_list(field(obj, "costs")?, "costs")?;
    let rewards = parse_rat_list(field(obj, "rewards")?, "rewards")?;
    let probs = as_array(field(obj, "probs")?, "probs")?
        .iter()
        .enumerate()
        .map(|(i, row)| parse_rat_list(row, &format!("probs[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Instance::with_labels(
        costs,
        rewards,
        probs,
        labels(obj, "action_labels")?,
        labels(obj, "outcome_labels")?,
    )?)
}

/// Contract set with payments listed in the instance's input outcome order.
pub fn parse_tau(doc: &Value, inst: &Instance) -> CliResult<AmbiguousContract> {
    let obj = as_object(doc, "contract set")?;
    let rows = as_array(field(obj, "contracts")?, "contracts")?;
    let mut contracts = Vec::with_capacity(rows.len());
    for (k, row) in rows.iter().enumerate() {
        let at = format!("contracts[{k}]");
        let payments = parse_rat_list(row, &at)?;
        if payments.len() != inst.m() {
            return Err(CliError::input(format!(
                "{at} has {} payments, the instance has {} outcomes",
                payments.len(),
                inst.m()
            )));
        }
        contracts.push(Contract::new(inst.payments_from_original(&payments))?);
    }
    Ok(AmbiguousContract::new(contracts)?)
}

pub fn rat_value(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rat_array(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(rat_value).collect())
}

fn is_default(labels: &[String]) -> bool {
    labels.iter().enumerate().all(|(k, l)| *l == (k + 1).to_string())
}

/// The instance in its input order, with exact rationals only.
pub fn instance_value(inst: &Instance) -> Map<String, Value> {
    let layout = inst.original_layout();
    let mut out = Map::new();
    out.insert("costs".into(), rat_array(&layout.costs));
    out.insert("rewards".into(), rat_array(&layout.rewards));
    out.insert("probs".into(), Value::Array(layout.probs.iter().map(|r| rat_array(r)).collect()));
    if !is_default(&layout.action_labels) {
        out.insert("action_labels".into(), layout.action_labels.into());
    }
    if !is_default(&layout.outcome_labels) {
        out.insert("outcome_labels".into(), layout.outcome_labels.into());
    }
    out
}

/// 1-based position of a sorted action in the input order.
pub fn action_number(inst: &Instance, i: usize) -> usize {
    inst.action_origin(i) + 1
}

/// Sorted index of a 1-based input action number.
pub fn action_index(inst: &Instance, k: usize) -> CliResult<usize> {
    k.checked_sub(1)
        .and_then(|k| inst.action_position(k))
        .ok_or_else(|| CliError::input(format!("action {k} is out of range 1..={}", inst.n())))
}
