pub mod check_class;
pub mod gap;
pub mod gen;
pub mod solve;
pub mod validate;

use ambicon::model::{Certificate, Condition};
use ambicon::{AmbiguousContract, Instance, SolveResult};
use serde_json::Value;

use crate::io::{action_number, rat_value};
use crate::output::Doc;

/// Members of `τ` as payment vectors in input outcome order.
pub fn contracts_value(inst: &Instance, tau: &AmbiguousContract) -> Value {
    tau.iter()
        .map(|t| inst.payments_to_original(t.payments()).iter().map(rat_value).collect::<Value>())
        .collect()
}

pub fn certificate_doc(inst: &Instance, cert: &Certificate) -> Doc {
    let items: Vec<Value> = cert
        .items
        .iter()
        .map(|item| {
            let mut d = Doc::new();
            match &item.condition {
                Condition::Consistency => d.set("condition", "consistency"),
                Condition::IndividualRationality => d.set("condition", "individual_rationality"),
                Condition::IncentiveCompatibility { against } => d
                    .set("condition", "incentive_compatibility")
                    .set("against", action_number(inst, *against)),
                Condition::TieBreak { chosen } => {
                    d.set("condition", "tie_break").set("chosen", action_number(inst, *chosen))
                }
            };
            d.set("passed", item.passed);
            d.into()
        })
        .collect();
    let mut d = Doc::new();
    d.set("passed", cert.passed())
        .set("tie_break_confirmed", cert.tie_break_confirmed())
        .set("items", items);
    d
}

pub fn result_doc(inst: &Instance, res: &SolveResult) -> Doc {
    let i = res.incentivized_action;
    let mut d = Doc::new();
    d.set("status", "ok")
        .set("action", action_number(inst, i))
        .set("action_label", inst.action_label(i))
        .rat("payment", &res.expected_payment)
        .rat("principal_utility", &res.principal_utility)
        .rat("agent_utility", &res.agent_utility)
        .rat("expected_reward", &inst.expected_reward(i))
        .set("contracts", contracts_value(inst, &res.contracts))
        .child("certificate", certificate_doc(inst, &res.certificate));
    d
}
