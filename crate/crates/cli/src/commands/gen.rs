use ambicon::gap::{
    delta_for_target, gen_diagonal, gen_fixture, gen_two_effort_gap, gen_unbounded_gap, Fixture,
    FixtureSpec, UnboundedSpec,
};
use ambicon::rational::{int, parse_rational, rat};
use ambicon::{Instance, Rational};
use clap::Subcommand;

use super::contracts_value;
use crate::error::CliResult;
use crate::io::{action_number, instance_value};
use crate::output::{Doc, Rendered};

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
#[command(rename_all = "snake_case")]
pub enum GenKind {
    /// Three actions where ambiguity lifts the principal from 2 to 3.
    Example1,
    /// Costly target that needs one SOP contract per outcome.
    SopTight {
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value = "1/100", value_parser = rational_arg)]
        delta: Rational,
    },
    /// Monotone instance whose monotone gap grows with `n`.
    MonotoneOmega {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value = "1/10", value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value = "1/100", value_parser = rational_arg)]
        gamma: Rational,
        #[arg(long, default_value = "1/100", value_parser = rational_arg)]
        delta: Rational,
    },
    /// Four actions over six outcomes satisfying MLRP.
    MlrpB4,
    /// Zero-cost diagonal actions plus one costly action; gap `2 − ε`.
    TwoEffort {
        #[arg(long, default_value = "1/10", value_parser = rational_arg)]
        eps: Rational,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        delta: Rational,
    },
    /// Harmonic-cost layers around a target no single contract implements.
    Unbounded {
        #[arg(long, default_value_t = 4)]
        x: u32,
        /// Target welfare; defaults to 1/4.
        #[arg(long, value_parser = rational_arg, conflicts_with = "z")]
        delta: Option<Rational>,
        /// Pick the welfare so that the targeted gap is at least `z`.
        #[arg(long)]
        z: Option<f64>,
    },
    /// Diagonal actions of common welfare `W` and cost `c`.
    Diagonal {
        /// Rewards, comma separated, starting at 0.
        #[arg(long, value_delimiter = ',', value_parser = rational_arg, required = true)]
        rewards: Vec<Rational>,
        #[arg(long, value_parser = rational_arg)]
        welfare: Rational,
        #[arg(long, default_value = "0", value_parser = rational_arg)]
        cost: Rational,
    },
}

fn document(name: &str, inst: &Instance, reference: Doc) -> Doc {
    let mut d = Doc::new();
    d.set("generator", name);
    for (k, v) in instance_value(inst) {
        d.set(&k, v);
    }
    d.child("reference", reference);
    d
}

fn fixture(spec: FixtureSpec) -> CliResult<Doc> {
    let Fixture { name, instance, reference } = gen_fixture(&spec)?;
    let mut r = Doc::new();
    for (k, v) in &reference {
        r.rat(k, v);
    }
    Ok(document(&name, &instance, r))
}

pub fn run(kind: &GenKind) -> CliResult<Rendered> {
    let doc = match kind {
        GenKind::Example1 => fixture(FixtureSpec::Example1)?,
        GenKind::SopTight { m, delta } => fixture(FixtureSpec::SopTight { m: *m, delta: delta.clone() })?,
        GenKind::MonotoneOmega { n, eps, gamma, delta } => fixture(FixtureSpec::MonotoneOmega {
            n: *n,
            eps: eps.clone(),
            gamma: gamma.clone(),
            delta: delta.clone(),
        })?,
        GenKind::MlrpB4 => fixture(FixtureSpec::MlrpB4)?,
        GenKind::TwoEffort { eps, delta } => {
            let inst = gen_two_effort_gap(eps, delta)?;
            let two = int(2);
            let mut r = Doc::new();
            r.rat("single_utility", eps)
                .rat("ambiguous_utility", &(eps * (&two - eps)))
                .rat("rho", &(&two - eps))
                .set("costly_action", inst.n())
                .rat("costly_min_payment", &(int(1) - eps));
            document("two_effort", &inst, r)
        }
        GenKind::Unbounded { x, delta, z } => {
            let delta = match (delta, z) {
                (Some(d), _) => d.clone(),
                (None, Some(z)) => delta_for_target(*z, *x)?,
                (None, None) => rat(1, 4),
            };
            let gap = gen_unbounded_gap(&UnboundedSpec::new(*x, delta.clone()))?;
            let inst = &gap.instance;
            let utility = gap.target_utility();
            let mut r = Doc::new();
            r.rat("delta", &delta)
                .set("target_action", action_number(inst, gap.target))
                .rat("target_cost", &gap.target_cost)
                .rat("target_utility", &utility)
                .rat("u_bar", &gap.u_bar)
                .rat("rho_lower", &(&utility / &gap.u_bar))
                .set("tau", contracts_value(inst, &gap.tau));
            document("unbounded", inst, r)
        }
        GenKind::Diagonal { rewards, welfare, cost } => {
            let rows = gen_diagonal(rewards, welfare, cost)?;
            let inst = Instance::new(
                rows.iter().map(|r| r.cost.clone()).collect(),
                rewards.clone(),
                rows.into_iter().map(|r| r.probs).collect(),
            )?;
            let mut r = Doc::new();
            r.rat("welfare", welfare).rat("cost", cost);
            document("diagonal", &inst, r)
        }
    };
    Ok(Rendered::Doc(doc))
}
