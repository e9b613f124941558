//! Paths through the committee graph: exact search, isolation radii and
//! constructive connectors that keep every intermediate committee inside a
//! predicate.
//!
//! Constructive connectors re-check every committee they emit. A step that
//! fails its predicate aborts with [`Error::Construction`] instead of being
//! returned.

mod affordable;
mod ejr4;
mod isolation;
mod search;
mod two_jr;
mod walk;

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::axioms::{Alpha, Axiom, Witness};
use crate::bitset::distance;
use crate::rules::Rule;
use crate::{CandidateSet, Error, Instance};

pub use affordable::{connect_affordable, connect_rule_outputs, connect_to_affordable_jr, extend_to_affordable, AffordableEnd};
pub use ejr4::{connect_ejr_4approx, four_ejr_core, relative_pav_score};
pub use isolation::{non_isolation_witness, NonIsolation};
pub use search::{bfs_connect, committee_graph, isolation_radius, BfsOutcome, CommitteeGraph, IsolationReport, ISOLATION_LIMIT};
pub use two_jr::{connect_two_jr, two_jr_greedy_side, GreedySide};
pub use walk::{removal_order, removal_order_bound_holds};

/// Test applied to every committee on a path.
#[derive(Clone)]
pub enum Predicate {
    Jr(Alpha),
    Ejr(Alpha),
    EjrPlus,
    /// Membership in a fixed set of committees, such as a rule's choice set.
    ChoiceSet { label: String, members: Arc<HashSet<CandidateSet>> },
    Custom { label: String, test: Arc<dyn Fn(&Instance, &CandidateSet) -> bool + Send + Sync> },
}

/// Result of evaluating a predicate on one committee.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub satisfied: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Predicate {
    pub fn jr() -> Predicate {
        Predicate::Jr(Alpha::one())
    }

    pub fn ejr() -> Predicate {
        Predicate::Ejr(Alpha::one())
    }

    pub fn from_axiom(a: Axiom) -> Predicate {
        match a {
            Axiom::Jr(x) => Predicate::Jr(x),
            Axiom::Ejr(x) => Predicate::Ejr(x),
            Axiom::EjrPlus => Predicate::EjrPlus,
        }
    }

    /// The committees a rule may return. Exhaustive rules contribute every
    /// optimum, the others their single output.
    pub fn rule_choice_set(inst: &Instance, rule: Rule) -> Result<Predicate, Error> {
        let members: HashSet<CandidateSet> = match rule {
            Rule::Pav => crate::rules::pav_exact(inst)?.into_iter().collect(),
            Rule::Ccav => crate::rules::ccav_exact(inst)?.into_iter().collect(),
            r => std::iter::once(r.run(inst)?.committee).collect(),
        };
        Ok(Predicate::ChoiceSet { label: format!("{rule}-choice-set"), members: Arc::new(members) })
    }

    pub fn custom(label: impl Into<String>, test: impl Fn(&Instance, &CandidateSet) -> bool + Send + Sync + 'static) -> Predicate {
        Predicate::Custom { label: label.into(), test: Arc::new(test) }
    }

    pub fn label(&self) -> String {
        match self {
            Predicate::Jr(a) => Axiom::Jr(a.clone()).name(),
            Predicate::Ejr(a) => Axiom::Ejr(a.clone()).name(),
            Predicate::EjrPlus => Axiom::EjrPlus.name(),
            Predicate::ChoiceSet { label, .. } | Predicate::Custom { label, .. } => label.clone(),
        }
    }

    pub fn evaluate(&self, inst: &Instance, w: &CandidateSet) -> Verdict {
        let axiom = match self {
            Predicate::Jr(a) => Axiom::Jr(a.clone()),
            Predicate::Ejr(a) => Axiom::Ejr(a.clone()),
            Predicate::EjrPlus => Axiom::EjrPlus,
            Predicate::ChoiceSet { members, .. } => return Verdict { satisfied: members.contains(w), witness: None },
            Predicate::Custom { test, .. } => return Verdict { satisfied: test(inst, w), witness: None },
        };
        let witness = axiom.check(inst, w);
        Verdict { satisfied: witness.is_none(), witness }
    }

    pub fn holds(&self, inst: &Instance, w: &CandidateSet) -> bool {
        self.evaluate(inst, w).satisfied
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.label())
    }
}

/// A committee sequence with unit steps, each recorded with its verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub predicate: String,
    pub steps: Vec<CandidateSet>,
    pub log: Vec<Verdict>,
}

impl Path {
    /// Number of swaps.
    pub fn len(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.steps.len() <= 1
    }

    pub fn first(&self) -> &CandidateSet {
        &self.steps[0]
    }

    pub fn last(&self) -> &CandidateSet {
        self.steps.last().expect("paths are nonempty")
    }

    /// Re-checks unit steps, sizes and the predicate on every step.
    pub fn validate(&self, inst: &Instance, pred: &Predicate) -> Result<(), Error> {
        if self.steps.is_empty() {
            return Err(Error::Construction("empty path".into()));
        }
        for (i, w) in self.steps.iter().enumerate() {
            if w.count() != inst.k() {
                return Err(Error::NotACommittee { size: w.count(), k: inst.k() });
            }
            if let Some(Verdict { satisfied: false, witness }) = Some(pred.evaluate(inst, w)) {
                return Err(Error::PredicateViolated(format!("step {i} {:?} violates {}: {witness:?}", w.to_vec(), pred.label())));
            }
            if i > 0 && distance(&self.steps[i - 1], w)? != 1 {
                return Err(Error::Construction(format!("steps {} and {i} are not adjacent", i - 1)));
            }
        }
        Ok(())
    }

    /// Same path walked backwards.
    pub fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.steps.reverse();
        p.log.reverse();
        p
    }
}

/// Accumulates a path while checking every new step.
pub(crate) struct PathBuilder<'a> {
    inst: &'a Instance,
    pred: &'a Predicate,
    steps: Vec<CandidateSet>,
    log: Vec<Verdict>,
}

impl<'a> PathBuilder<'a> {
    pub fn start(inst: &'a Instance, pred: &'a Predicate, w: &CandidateSet) -> Result<PathBuilder<'a>, Error> {
        let mut b = PathBuilder { inst, pred, steps: Vec::new(), log: Vec::new() };
        b.push(w.clone())?;
        Ok(b)
    }

    pub fn current(&self) -> &CandidateSet {
        self.steps.last().expect("builder is nonempty")
    }

    pub fn push(&mut self, w: CandidateSet) -> Result<(), Error> {
        if w.count() != self.inst.k() {
            return Err(Error::Construction(format!("intermediate set of size {} (k = {})", w.count(), self.inst.k())));
        }
        if let Some(prev) = self.steps.last() {
            if *prev == w {
                return Ok(());
            }
            if distance(prev, &w)? != 1 {
                return Err(Error::Construction(format!("{:?} -> {:?} is not a single swap", prev.to_vec(), w.to_vec())));
            }
        }
        let verdict = self.pred.evaluate(self.inst, &w);
        if !verdict.satisfied {
            return Err(Error::Construction(format!("{:?} violates {}: {:?}", w.to_vec(), self.pred.label(), verdict.witness)));
        }
        self.steps.push(w);
        self.log.push(verdict);
        Ok(())
    }

    pub fn swap(&mut self, out: usize, inc: usize) -> Result<(), Error> {
        let next = self.current().swapped(out, inc);
        self.push(next)
    }

    /// Appends another path that starts at the current committee.
    pub fn extend(&mut self, p: &Path) -> Result<(), Error> {
        if p.first() != self.current() {
            return Err(Error::Construction("spliced path does not start at the current committee".into()));
        }
        for w in &p.steps[1..] {
            self.push(w.clone())?;
        }
        Ok(())
    }

    pub fn finish(self) -> Path {
        let mut p = Path { predicate: self.pred.label(), steps: self.steps, log: self.log };
        shortcut(&mut p);
        p
    }
}

/// Removes cycles: whenever a committee reappears, the loop between the visits is cut.
fn shortcut(p: &mut Path) {
    let mut seen: std::collections::HashMap<CandidateSet, usize> = std::collections::HashMap::new();
    let mut steps: Vec<CandidateSet> = Vec::with_capacity(p.steps.len());
    let mut log: Vec<Verdict> = Vec::with_capacity(p.log.len());
    for (w, v) in p.steps.drain(..).zip(p.log.drain(..)) {
        if let Some(&i) = seen.get(&w) {
            for old in steps.drain(i + 1..) {
                seen.remove(&old);
            }
            log.truncate(i + 1);
            continue;
        }
        seen.insert(w.clone(), steps.len());
        steps.push(w);
        log.push(v);
    }
    p.steps = steps;
    p.log = log;
}

/// Fails unless `w` is a committee satisfying `pred`.
pub(crate) fn require(inst: &Instance, w: &CandidateSet, pred: &Predicate, what: &str) -> Result<(), Error> {
    if w.universe() != inst.m() {
        return Err(Error::InvalidInput(format!("{what} has universe {} but m = {}", w.universe(), inst.m())));
    }
    if w.count() != inst.k() {
        return Err(Error::NotACommittee { size: w.count(), k: inst.k() });
    }
    let v = pred.evaluate(inst, w);
    if !v.satisfied {
        return Err(Error::PredicateViolated(format!("{what} {:?} violates {}: {:?}", w.to_vec(), pred.label(), v.witness)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortcut_removes_loops() {
        let inst = Instance::parse("2 4 2\n0 1\n2 3\n").unwrap();
        let pred = Predicate::custom("any", |_, _| true);
        let c = |v: &[usize]| inst.committee(v).unwrap();
        let mut b = PathBuilder::start(&inst, &pred, &c(&[0, 1])).unwrap();
        for w in [c(&[0, 2]), c(&[0, 3]), c(&[0, 1]), c(&[1, 2])] {
            b.push(w).unwrap();
        }
        let p = b.finish();
        assert_eq!(p.steps, vec![c(&[0, 1]), c(&[1, 2])]);
        p.validate(&inst, &pred).unwrap();
    }

    #[test]
    fn builder_rejects_long_jumps() {
        let inst = Instance::parse("2 4 2\n0 1\n2 3\n").unwrap();
        let pred = Predicate::custom("any", |_, _| true);
        let mut b = PathBuilder::start(&inst, &pred, &inst.committee(&[0, 1]).unwrap()).unwrap();
        assert!(b.push(inst.committee(&[2, 3]).unwrap()).is_err());
    }
}
