//! Browser bindings: check a committee, run a rule, and connect two committees.
//!
//! Every function takes the instance in the text format and returns the same
//! JSON the command-line tool prints.

use committee_reconfig::axioms::Axiom;
use committee_reconfig::reconfig::{bfs_connect, connect_ejr_4approx, connect_two_jr, BfsOutcome, Predicate};
use committee_reconfig::rules::Rule;
use committee_reconfig::{Alpha, CandidateSet, Instance};
use serde_json::json;
use wasm_bindgen::prelude::*;

const BFS_BUDGET: usize = 200_000;

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn parse_committee(inst: &Instance, text: &str) -> Result<CandidateSet, JsError> {
    let members = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| err(format!("invalid candidate index {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let w = inst.committee(&members).map_err(err)?;
    if w.count() != members.len() {
        return Err(err("duplicate candidate in committee"));
    }
    Ok(w)
}

fn parse_axiom(name: &str, alpha: &str) -> Result<Axiom, JsError> {
    let a: Alpha = if alpha.trim().is_empty() { Alpha::one() } else { alpha.trim().parse().map_err(err)? };
    match name {
        "jr" => Ok(Axiom::Jr(a)),
        "ejr" => Ok(Axiom::Ejr(a)),
        "ejr+" => Ok(Axiom::EjrPlus),
        _ => Err(err(format!("unknown axiom {name:?}"))),
    }
}

/// `{"satisfied": bool, "witness"?: {...}}` for `committee` under `axiom` (jr, ejr, ejr+).
#[wasm_bindgen(js_name = checkCommittee)]
pub fn check_committee(instance: &str, committee: &str, axiom: &str, alpha: &str) -> Result<String, JsError> {
    let inst = Instance::parse(instance).map_err(err)?;
    let w = parse_committee(&inst, committee)?;
    let out = match parse_axiom(axiom, alpha)?.check(&inst, &w) {
        None => json!({ "satisfied": true }),
        Some(wit) => json!({ "satisfied": false, "witness": wit }),
    };
    Ok(out.to_string())
}

/// Committee, core, payments and trace of a voting rule.
#[wasm_bindgen(js_name = runRule)]
pub fn run_rule(instance: &str, rule: &str) -> Result<String, JsError> {
    let inst = Instance::parse(instance).map_err(err)?;
    let rule: Rule = rule.parse().map_err(err)?;
    serde_json::to_string(&rule.run(&inst).map_err(err)?).map_err(err)
}

/// A path from `from` to `to` by `method`: `bfs` (shortest JR path),
/// `two-jr` or `four-ejr`.
#[wasm_bindgen(js_name = connectCommittees)]
pub fn connect_committees(instance: &str, from: &str, to: &str, method: &str) -> Result<String, JsError> {
    let inst = Instance::parse(instance).map_err(err)?;
    let (w, w2) = (parse_committee(&inst, from)?, parse_committee(&inst, to)?);
    let path = match method {
        "bfs" => match bfs_connect(&inst, &w, &w2, &Predicate::jr(), BFS_BUDGET).map_err(err)? {
            BfsOutcome::Found { path } => path,
            other => return serde_json::to_string(&other).map_err(err),
        },
        "two-jr" => connect_two_jr(&inst, &w, &w2).map_err(err)?,
        "four-ejr" => connect_ejr_4approx(&inst, &w, &w2).map_err(err)?,
        _ => return Err(err(format!("unknown method {method:?}"))),
    };
    Ok(json!({ "method": method, "length": path.len(), "path": path }).to_string())
}
