//! Distance-1 neighbours of PAV, MES and GJCR outputs that keep EJR or EJR+.

use serde::Serialize;

use super::{require, Predicate};
use crate::axioms::{ejr_plus_violators, Alpha, Axiom};
use crate::rules::{pav_exact, pav_score, Rule};
use crate::{CandidateSet, Error, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonIsolation {
    /// A committee one swap away that satisfies the axiom.
    Neighbor { committee: CandidateSet, method: &'static str },
    /// No other committee satisfies the axiom, so isolation is vacuous.
    Vacuous { reason: String },
}

impl NonIsolation {
    pub fn neighbor(&self) -> Option<&CandidateSet> {
        match self {
            NonIsolation::Neighbor { committee, .. } => Some(committee),
            NonIsolation::Vacuous { .. } => None,
        }
    }
}

fn scan(inst: &Instance, w: &CandidateSet, pred: &Predicate) -> Option<CandidateSet> {
    for out in w.iter() {
        for inc in 0..inst.m() {
            if w.contains(inc) {
                continue;
            }
            let x = w.swapped(out, inc);
            if pred.holds(inst, &x) {
                return Some(x);
            }
        }
    }
    None
}

/// A committee at distance 1 from the rule output `w` satisfying `axiom`
/// (EJR or EJR+), built from the rule's structure and verified before it is
/// returned.
pub fn non_isolation_witness(inst: &Instance, w: &CandidateSet, rule: Rule, axiom: &Axiom) -> Result<NonIsolation, Error> {
    match axiom {
        Axiom::Ejr(a) if *a == Alpha::one() => {}
        Axiom::EjrPlus => {}
        _ => return Err(Error::InvalidInput(format!("axiom must be ejr or ejr+, got {}", axiom.name()))),
    }
    if !matches!(rule, Rule::Pav | Rule::Mes | Rule::Gjcr) {
        return Err(Error::InvalidInput(format!("rule must be pav, mes or gjcr, got {rule}")));
    }
    let pred = Predicate::from_axiom(axiom.clone());
    require(inst, w, &pred, "committee")?;
    let (m, k) = (inst.m(), inst.k());
    if m == k {
        return Ok(NonIsolation::Vacuous { reason: "the committee contains every candidate".into() });
    }
    let accept = |x: CandidateSet, method: &'static str| -> Option<NonIsolation> {
        pred.holds(inst, &x).then_some(NonIsolation::Neighbor { committee: x, method })
    };
    let outside = |x: &CandidateSet| (0..m).find(|c| !x.contains(*c)).expect("m > k");

    // a member whose removal keeps the axiom can be traded for anything
    if let Some(c) = w.iter().find(|&c| axiom.holds(inst, &w.without(c))) {
        if let Some(r) = accept(w.swapped(c, outside(w)), "redundant-member") {
            return Ok(r);
        }
    }
    let approved: Vec<usize> = (0..m).filter(|&c| inst.support_size(c) > 0).collect();
    if approved.len() <= k {
        if let Some(c) = w.iter().find(|&c| inst.support_size(c) == 0) {
            if let Some(r) = accept(w.swapped(c, outside(w)), "unapproved-member") {
                return Ok(r);
            }
        }
        // any other satisfying committee implies a satisfying neighbour, so the scan is complete
        return Ok(match scan(inst, w, &pred) {
            Some(x) => NonIsolation::Neighbor { committee: x, method: "scan" },
            None => NonIsolation::Vacuous { reason: "no other committee satisfies the axiom".into() },
        });
    }

    let built = match rule {
        Rule::Pav => pav_neighbor(inst, w)?,
        _ => budget_neighbor(inst, w, rule)?,
    };
    if let Some((x, method)) = built {
        if let Some(r) = accept(x, method) {
            return Ok(r);
        }
    }
    match scan(inst, w, &pred) {
        Some(x) => Ok(NonIsolation::Neighbor { committee: x, method: "scan" }),
        None => Err(Error::Construction(format!("no neighbour of {:?} satisfies {}", w.to_vec(), axiom.name()))),
    }
}

fn pav_neighbor(inst: &Instance, w: &CandidateSet) -> Result<Option<(CandidateSet, &'static str)>, Error> {
    let best = pav_exact(inst)?;
    if pav_score(inst, &best[0]) != pav_score(inst, w) {
        return Err(Error::Mismatch(format!("{:?} is not a PAV committee", w.to_vec())));
    }
    let Some(c_star) = (0..inst.m()).find(|&c| !w.contains(c) && inst.support_size(c) > 0) else {
        return Ok(None);
    };
    let v_star = inst.supporters(c_star).next().expect("approved candidate");
    let Some(c) = w.iter().find(|&c| inst.approves(v_star, c)) else {
        return Ok(None);
    };
    let rest = w.without(c);
    let other = ejr_plus_violators(inst, &rest).into_iter().map(|x| x.candidate).find(|&d| d != c);
    Ok(Some(match other {
        Some(d) => (w.swapped(c, d), "pav-violator-swap"),
        None => (w.swapped(c, c_star), "pav-approved-swap"),
    }))
}

fn budget_neighbor(inst: &Instance, w: &CandidateSet, rule: Rule) -> Result<Option<(CandidateSet, &'static str)>, Error> {
    let out = rule.run(inst)?;
    if out.committee != *w {
        return Err(Error::Mismatch(format!("{rule} returns {:?}, not {:?}", out.committee.to_vec(), w.to_vec())));
    }
    let Some(pay) = out.payments.as_ref() else {
        return Ok(None);
    };
    // the latest purchase with a payer who approves a non-member
    for c_t in out.order().into_iter().rev() {
        for v in 0..inst.n() {
            if pay.get(v, c_t).is_zero() {
                continue;
            }
            if let Some(c) = inst.ballot(v).into_iter().find(|&c| !w.contains(c)) {
                return Ok(Some((w.swapped(c_t, c), "payer-swap")));
            }
        }
    }
    Ok(None)
}
