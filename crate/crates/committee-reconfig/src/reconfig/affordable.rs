//! JR paths between rule outputs, routed through affordable JR subcommittees.

use serde::Serialize;

use super::walk::{remove_and_repair, walk_adds, walk_to};
use super::{require, Path, PathBuilder, Predicate};
use crate::axioms::{check_jr, Alpha};
use crate::rules::{ccav_exact, is_affordable, pav_exact, pav_marginal, PaymentSystem, Rule, RuleOutput};
use crate::{CandidateSet, Error, Instance, Rational};

/// A committee together with an affordable JR subcommittee it contains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffordableEnd {
    pub committee: CandidateSet,
    pub core: CandidateSet,
    pub payments: PaymentSystem,
}

impl AffordableEnd {
    /// Checks containment, the payment certificate and JR of the core.
    pub fn verify(&self, inst: &Instance) -> Result<(), Error> {
        if self.committee.count() != inst.k() {
            return Err(Error::NotACommittee { size: self.committee.count(), k: inst.k() });
        }
        if !self.core.is_subset(&self.committee) {
            return Err(Error::InvalidInput("core is not contained in the committee".into()));
        }
        self.payments.verify(inst, &self.core)?;
        if let Some(w) = check_jr(inst, &self.core, &Alpha::one()) {
            return Err(Error::PredicateViolated(format!("core violates JR via candidate {}", w.candidate)));
        }
        Ok(())
    }
}

fn certify(inst: &Instance, committee: CandidateSet, core: CandidateSet) -> Result<AffordableEnd, Error> {
    let payments = is_affordable(inst, &core)
        .ok_or_else(|| Error::Certificate(format!("subcommittee {:?} is not affordable", core.to_vec())))?;
    let end = AffordableEnd { committee, core, payments };
    end.verify(inst)?;
    Ok(end)
}

fn jr_repair(inst: &Instance) -> impl FnMut(&CandidateSet) -> Option<usize> + '_ {
    let one = Alpha::one();
    move |cur| check_jr(inst, cur, &one).map(|w| w.candidate)
}

/// From a committee `q` containing a JR subcommittee `w_sub` with
/// `|N_{w_sub}| >= (|w_sub| - 1) n / k`, reaches a committee containing an
/// affordable JR subcommittee that includes the affordable set `x ⊆ w_sub`.
pub fn extend_to_affordable(
    inst: &Instance,
    q: &CandidateSet,
    w_sub: &CandidateSet,
    x: &CandidateSet,
) -> Result<(Path, AffordableEnd), Error> {
    let (n, k) = (inst.n(), inst.k());
    if !x.is_subset(w_sub) || !w_sub.is_subset(q) {
        return Err(Error::InvalidInput("expected x ⊆ w_sub ⊆ q".into()));
    }
    if check_jr(inst, w_sub, &Alpha::one()).is_some() {
        return Err(Error::PredicateViolated("subcommittee to extend violates JR".into()));
    }
    if inst.coverage(w_sub).count() * k + n < w_sub.count() * n {
        return Err(Error::InvalidInput("subcommittee covers too few voters".into()));
    }
    if is_affordable(inst, x).is_none() {
        return Err(Error::Certificate("base set is not affordable".into()));
    }
    // inclusion-maximal affordable set between x and w_sub; one pass suffices
    // because affordability is closed under subsets
    let mut xs = x.clone();
    for c in w_sub.difference(x).iter() {
        let t = xs.with(c);
        if is_affordable(inst, &t).is_some() {
            xs = t;
        }
    }
    let cs: Vec<usize> = w_sub.difference(&xs).to_vec();
    let repair = remove_and_repair(w_sub, &cs, jr_repair(inst), k)?;
    let pred = Predicate::jr();
    let mut b = PathBuilder::start(inst, &pred, q)?;
    let mut removes: Vec<usize> = q.difference(w_sub).to_vec();
    removes.extend(&cs);
    walk_adds(&mut b, &repair.added, &removes, &xs)?;
    let committee = b.current().clone();
    let end = certify(inst, committee, repair.result)?;
    Ok((b.finish(), end))
}

/// JR path between committees containing two affordable JR subcommittees.
pub fn connect_affordable(inst: &Instance, from: &AffordableEnd, to: &AffordableEnd) -> Result<Path, Error> {
    from.verify(inst)?;
    to.verify(inst)?;
    let (n, k) = (inst.n(), inst.k());
    let pred = Predicate::jr();
    let mut b = PathBuilder::start(inst, &pred, &from.committee)?;
    let mut core = from.core.clone();
    let target = &to.core;
    for _ in 0..=k {
        if core.is_subset(target) || target.is_subset(&core) {
            walk_to(&mut b, &to.committee)?;
            return Ok(b.finish());
        }
        let x = core.intersection(target);
        let c_new = target.difference(&x).first().expect("target has a member outside the intersection");
        let w_sub = if core.count() < k {
            if !b.current().contains(c_new) {
                let out = b.current().difference(&core).first().expect("committee is larger than its core");
                b.swap(out, c_new)?;
            }
            core.with(c_new)
        } else {
            // evict the member that is the only representative, within core \ x,
            // of the fewest voters not covered by x + c_new
            let base = inst.coverage(&x.with(c_new));
            let rest = core.difference(&x);
            let loss = |c: usize| {
                inst.supporters(c)
                    .filter(|&v| !base.contains(v) && rest.iter().filter(|&d| inst.approves(v, d)).count() == 1)
                    .count()
            };
            let out = rest.iter().min_by_key(|&c| (loss(c), c)).expect("core has a member outside the intersection");
            if loss(out) * k >= n {
                return Err(Error::Construction("no member can be exchanged".into()));
            }
            b.swap(out, c_new)?;
            core.swapped(out, c_new)
        };
        let q = b.current().clone();
        let (step, end) = extend_to_affordable(inst, &q, &w_sub, &x.with(c_new))?;
        b.extend(&step)?;
        if end.core.intersection(target).count() <= x.count() {
            return Err(Error::Construction("intersection with the target core did not grow".into()));
        }
        core = end.core;
    }
    Err(Error::Construction("affordable connection did not converge".into()))
}

fn expect_output(inst: &Instance, w: &CandidateSet, rule: Rule) -> Result<RuleOutput, Error> {
    let out = rule.run(inst)?;
    if out.committee != *w {
        return Err(Error::Mismatch(format!("{rule} returns {:?}, not {:?}", out.committee.to_vec(), w.to_vec())));
    }
    Ok(out)
}

fn expect_member(w: &CandidateSet, rule: Rule, all: Vec<CandidateSet>) -> Result<(), Error> {
    if all.iter().any(|x| x == w) {
        Ok(())
    } else {
        Err(Error::Mismatch(format!("{:?} is not among the {rule} committees", w.to_vec())))
    }
}

fn prefix(inst: &Instance, out: &RuleOutput, keep: impl Fn(&crate::rules::TraceEntry) -> bool) -> CandidateSet {
    CandidateSet::from_indices(inst.m(), out.trace.iter().take_while(|t| keep(t)).map(|t| t.candidate))
}

/// JR path from a rule output to a committee containing an affordable JR subcommittee.
pub fn connect_to_affordable_jr(inst: &Instance, w: &CandidateSet, rule: Rule) -> Result<(Path, AffordableEnd), Error> {
    let pred = Predicate::jr();
    require(inst, w, &pred, "committee")?;
    let (n, k) = (inst.n(), inst.k());
    let trivial = |core: CandidateSet| -> Result<(Path, AffordableEnd), Error> {
        let end = certify(inst, w.clone(), core)?;
        Ok((PathBuilder::start(inst, &pred, w)?.finish(), end))
    };
    match rule {
        Rule::Mes | Rule::Gjcr | Rule::GreedyEjr => {
            let out = expect_output(inst, w, rule)?;
            trivial(out.core)
        }
        Rule::SeqPhragmen => {
            let out = expect_output(inst, w, rule)?;
            let limit = Rational::new(k as i64, n as i64);
            trivial(prefix(inst, &out, |t| t.time.as_ref().is_some_and(|x| *x <= limit)))
        }
        Rule::SeqCcav => {
            let out = expect_output(inst, w, rule)?;
            trivial(prefix(inst, &out, |t| t.gain.is_some_and(|g| g * k >= n)))
        }
        Rule::Ccav => {
            expect_member(w, rule, ccav_exact(inst)?)?;
            // removal order by fewest uniquely covered voters; s is the last
            // position whose unique coverage is below n/k
            let mut left = w.clone();
            let mut order = Vec::with_capacity(k);
            let mut s = 0;
            while !left.is_empty() {
                let counts = inst.approval_counts(&left);
                let (u, c) = left
                    .iter()
                    .map(|c| (inst.supporters(c).filter(|&v| counts[v] == 1).count(), c))
                    .min()
                    .expect("nonempty");
                left.remove(c);
                order.push(c);
                if u * k < n {
                    s = order.len();
                }
            }
            let repair = remove_and_repair(w, &order[..s], jr_repair(inst), k)?;
            let mut b = PathBuilder::start(inst, &pred, w)?;
            walk_adds(&mut b, &repair.added, &order, &CandidateSet::new(inst.m()))?;
            let end = certify(inst, b.current().clone(), repair.result)?;
            Ok((b.finish(), end))
        }
        Rule::Pav => {
            expect_member(w, rule, pav_exact(inst)?)?;
            let mut cur = w.clone();
            let mut order = Vec::new();
            while inst.coverage(&cur).count() * k + n < cur.count() * n {
                let c = cur.iter().map(|c| (pav_marginal(inst, &cur, c), c)).min().map(|(_, c)| c).expect("nonempty");
                cur.remove(c);
                order.push(c);
            }
            let repair = remove_and_repair(w, &order, jr_repair(inst), k)?;
            let mut b = PathBuilder::start(inst, &pred, w)?;
            walk_adds(&mut b, &repair.added, &order, &CandidateSet::new(inst.m()))?;
            let q = b.current().clone();
            let (rest, end) = extend_to_affordable(inst, &q, &repair.result, &CandidateSet::new(inst.m()))?;
            b.extend(&rest)?;
            Ok((b.finish(), end))
        }
    }
}

/// JR path between an output of `f` and an output of `f2`.
pub fn connect_rule_outputs(inst: &Instance, w: &CandidateSet, f: Rule, w2: &CandidateSet, f2: Rule) -> Result<Path, Error> {
    let pred = Predicate::jr();
    let (pa, ea) = connect_to_affordable_jr(inst, w, f)?;
    let (pb, eb) = connect_to_affordable_jr(inst, w2, f2)?;
    let mid = connect_affordable(inst, &ea, &eb)?;
    let mut b = PathBuilder::start(inst, &pred, w)?;
    b.extend(&pa)?;
    b.extend(&mid)?;
    b.extend(&pb.reversed())?;
    Ok(b.finish())
}
