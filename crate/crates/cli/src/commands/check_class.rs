use std::path::PathBuf;

use ambicon::manipulability::{
    default_grid, npc_check, witness_from_grid, ContractClass, ContractCurve, NpcVerdict, Witness,
};
use ambicon::rational::int;
use ambicon::Rational;
use clap::Args;
use serde_json::{Map, Value};

use super::{certificate_doc, contracts_value};
use crate::error::{CliError, CliResult};
use crate::io::{action_number, instance_value, parse_rat, parse_rat_list, read_json};
use crate::output::{Doc, Rendered};

#[derive(Debug, Args)]
pub struct CheckClassArgs {
    /// Class description: `{"kind": "linear" | "power" | "polynomial" | "table", …, "grid": [rat]}`.
    pub spec: PathBuf,
}

fn list<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<Option<&'a Vec<Value>>> {
    match obj.get(key) {
        None => Ok(None),
        Some(Value::Array(a)) => Ok(Some(a)),
        Some(_) => Err(CliError::input(format!("\"{key}\" must be an array"))),
    }
}

fn required<'a>(obj: &'a Map<String, Value>, key: &str) -> CliResult<&'a Vec<Value>> {
    list(obj, key)?.ok_or_else(|| CliError::input(format!("missing field \"{key}\"")))
}

fn degree(v: &Value, at: &str) -> CliResult<u32> {
    v.as_u64()
        .and_then(|d| u32::try_from(d).ok())
        .ok_or_else(|| CliError::input(format!("{at}: expected a non-negative integer degree")))
}

fn table_curve(v: &Value, at: &str) -> CliResult<ContractCurve> {
    let points = v
        .as_array()
        .ok_or_else(|| CliError::input(format!("{at}: expected an array of [reward, payment] pairs")))?
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let pair = parse_rat_list(p, &format!("{at}[{k}]"))?;
            match <[Rational; 2]>::try_from(pair) {
                Ok([x, t]) => Ok((x, t)),
                Err(_) => Err(CliError::input(format!("{at}[{k}]: expected [reward, payment]"))),
            }
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ContractCurve::table(points)?)
}

/// Parses a class description into its kind, class and evaluation grid.
pub fn parse_class(doc: &Value) -> CliResult<(String, ContractClass, Vec<Rational>)> {
    let obj = doc.as_object().ok_or_else(|| CliError::input("class spec must be a JSON object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::input("missing string field \"kind\""))?;
    let class = match kind {
        "linear" => match list(obj, "slopes")? {
            None => ContractClass::Linear,
            Some(slopes) => ContractClass::Curves(
                slopes
                    .iter()
                    .enumerate()
                    .map(|(k, a)| Ok(ContractCurve::linear(parse_rat(a, &format!("slopes[{k}]"))?)?))
                    .collect::<CliResult<_>>()?,
            ),
        },
        "power" => match (obj.get("degree"), list(obj, "degrees")?) {
            (Some(d), None) => ContractClass::Power { degree: degree(d, "degree")? },
            (None, Some(ds)) => ContractClass::Curves(
                ds.iter()
                    .enumerate()
                    .map(|(k, d)| {
                        Ok(ContractCurve::power(int(1), degree(d, &format!("degrees[{k}]"))?)?)
                    })
                    .collect::<CliResult<_>>()?,
            ),
            _ => return Err(CliError::input("power classes need exactly one of \"degree\" or \"degrees\"")),
        },
        "polynomial" => ContractClass::Curves(
            required(obj, "curves")?
                .iter()
                .enumerate()
                .map(|(k, c)| Ok(ContractCurve::polynomial(parse_rat_list(c, &format!("curves[{k}]"))?)?))
                .collect::<CliResult<_>>()?,
        ),
        "table" => ContractClass::Curves(
            required(obj, "curves")?
                .iter()
                .enumerate()
                .map(|(k, c)| table_curve(c, &format!("curves[{k}]")))
                .collect::<CliResult<_>>()?,
        ),
        other => return Err(CliError::input(format!("unknown class kind \"{other}\""))),
    };
    let grid = match obj.get("grid") {
        Some(g) => parse_rat_list(g, "grid")?,
        None => default_grid(),
    };
    Ok((kind.to_string(), class, grid))
}

fn witness_doc(w: &Witness) -> Doc {
    let inst = &w.instance;
    let mut d = Doc::from_map(instance_value(inst));
    d.set("target_action", action_number(inst, w.target))
        .rat("target_cost", &w.target_cost)
        .set("target_implementable", w.target_implementable)
        .set("tau", contracts_value(inst, &w.tau))
        .child("certificate", certificate_doc(inst, &w.certificate));
    d
}

pub fn run(args: &CheckClassArgs) -> CliResult<Rendered> {
    let (kind, class, grid) = parse_class(&read_json(&args.spec)?)?;
    let verdict = npc_check(&class, &grid)?;
    let mut d = Doc::new();
    d.set("kind", kind).rats("grid", &grid);
    match verdict {
        NpcVerdict::HoldsAnalytically => {
            d.set("npc", "holds_analytically").set("conclusion", "non_manipulable");
        }
        NpcVerdict::HoldsOnGrid => {
            d.set("npc", "holds_on_grid").set("conclusion", "no_crossing_on_grid");
        }
        NpcVerdict::Violated { first, second, above, below } => {
            d.set("npc", "violated")
                .set("conclusion", "manipulable")
                .set("first_curve", first + 1)
                .set("second_curve", second + 1)
                .rat("first_above_at", &above)
                .rat("first_below_at", &below);
            let ContractClass::Curves(curves) = &class else {
                unreachable!("only finite curve lists can cross")
            };
            if let Some(w) = witness_from_grid(&curves[first], &curves[second], &grid)? {
                d.child("witness", witness_doc(&w));
            }
        }
    }
    Ok(Rendered::Doc(d))
}
