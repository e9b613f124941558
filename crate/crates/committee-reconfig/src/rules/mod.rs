//! Approval-based committee rules with deterministic tie-breaking.
//!
//! Every argmin/argmax breaks ties toward the smallest candidate index.
//! Rules that may stop short of `k` candidates report their pre-completion
//! selection as `core`; completion appends the smallest unselected indices.

mod flow;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::axioms::{eligible_words, find_common, Alpha};
use crate::bitset::{count_and, CandidateSet};
use crate::combin::{binomial, worker_count};
use crate::rational::harmonic;
use crate::{Error, Instance, Rational};

pub(crate) use flow::FlowNetwork;

/// Largest `C(m, k)` the exhaustive rules will enumerate.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Gjcr,
    Mes,
    Pav,
    Ccav,
    SeqCcav,
    GreedyEjr,
    SeqPhragmen,
}

impl Rule {
    pub const ALL: [Rule; 7] = [Rule::Mes, Rule::SeqCcav, Rule::Ccav, Rule::Pav, Rule::Gjcr, Rule::GreedyEjr, Rule::SeqPhragmen];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Gjcr => "gjcr",
            Rule::Mes => "mes",
            Rule::Pav => "pav",
            Rule::Ccav => "ccav",
            Rule::SeqCcav => "seqccav",
            Rule::GreedyEjr => "greedyejr",
            Rule::SeqPhragmen => "seqphragmen",
        }
    }

    /// Runs the rule. Exhaustive rules return their lexicographically first optimum.
    pub fn run(self, inst: &Instance) -> Result<RuleOutput, Error> {
        Ok(match self {
            Rule::Gjcr => gjcr(inst),
            Rule::Mes => mes(inst),
            Rule::Pav => pav(inst)?,
            Rule::Ccav => ccav(inst)?,
            Rule::SeqCcav => seq_ccav(inst),
            Rule::GreedyEjr => greedy_ejr(inst),
            Rule::SeqPhragmen => seq_phragmen(inst),
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rule, Error> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == key)
            .ok_or_else(|| Error::InvalidInput(format!("unknown rule {s:?}")))
    }
}

impl Serialize for Rule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Per-(voter, candidate) payments.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PaymentSystem {
    pub payments: BTreeMap<(usize, usize), Rational>,
}

#[derive(Serialize)]
struct PaymentJson<'a> {
    voter: usize,
    candidate: usize,
    amount: &'a Rational,
}

impl Serialize for PaymentSystem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.payments.iter().map(|(&(voter, candidate), amount)| PaymentJson { voter, candidate, amount }))
    }
}

impl PaymentSystem {
    pub fn pay(&mut self, voter: usize, candidate: usize, amount: &Rational) {
        if amount.is_zero() {
            return;
        }
        *self.payments.entry((voter, candidate)).or_insert_with(Rational::zero) += amount;
    }

    pub fn get(&self, voter: usize, candidate: usize) -> Rational {
        self.payments.get(&(voter, candidate)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total spent by each voter.
    pub fn spent(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (&(v, _), p) in &self.payments {
            out[v] += p;
        }
        out
    }

    /// Keeps only payments toward members of `w`.
    pub fn restricted(&self, w: &CandidateSet) -> PaymentSystem {
        PaymentSystem { payments: self.payments.iter().filter(|((_, c), _)| w.contains(*c)).map(|(k, v)| (*k, v.clone())).collect() }
    }

    /// Checks the certificate: payments are positive and go to approved
    /// candidates, each voter spends at most `k/n`, each member of `w` gets exactly 1
    /// and nothing outside `w` is paid for.
    pub fn verify(&self, inst: &Instance, w: &CandidateSet) -> Result<(), Error> {
        let budget = Rational::new(inst.k() as i64, inst.n() as i64);
        let mut received: BTreeMap<usize, Rational> = BTreeMap::new();
        for (&(v, c), p) in &self.payments {
            if v >= inst.n() || c >= inst.m() {
                return Err(Error::Certificate(format!("payment ({v}, {c}) out of range")));
            }
            if p.is_negative() || p.is_zero() {
                return Err(Error::Certificate(format!("voter {v} pays {p} for candidate {c}")));
            }
            if !inst.approves(v, c) {
                return Err(Error::Certificate(format!("voter {v} pays for unapproved candidate {c}")));
            }
            if !w.contains(c) {
                return Err(Error::Certificate(format!("candidate {c} is paid for but not in the subcommittee")));
            }
            *received.entry(c).or_insert_with(Rational::zero) += p;
        }
        for (v, s) in self.spent(inst.n()).iter().enumerate() {
            if *s > budget {
                return Err(Error::Certificate(format!("voter {v} spends {s} > {budget}")));
            }
        }
        for c in w.iter() {
            let got = received.get(&c).cloned().unwrap_or_else(Rational::zero);
            if got != Rational::one() {
                return Err(Error::Certificate(format!("candidate {c} receives {got}, not 1")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Charge {
    pub voter: usize,
    pub amount: Rational,
}

/// One selection step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub candidate: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    /// Purchase time (seqPhragmén) or per-voter price (MES).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<Rational>,
    /// Coverage gain (seqCCAV).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gain: Option<usize>,
    pub charges: Vec<Charge>,
}

impl TraceEntry {
    fn new(candidate: usize) -> TraceEntry {
        TraceEntry { candidate, ell: None, time: None, gain: None, charges: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleOutput {
    pub rule: Rule,
    pub committee: CandidateSet,
    pub core: CandidateSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payments: Option<PaymentSystem>,
    pub trace: Vec<TraceEntry>,
}

impl RuleOutput {
    /// Core members in selection order.
    pub fn order(&self) -> Vec<usize> {
        self.trace.iter().map(|t| t.candidate).collect()
    }
}

/// Fills `core` up to `k` with the smallest unselected indices.
pub fn complete(inst: &Instance, core: &CandidateSet) -> CandidateSet {
    let mut w = core.clone();
    let mut c = 0;
    while w.count() < inst.k() {
        w.insert(c);
        c += 1;
    }
    w
}

fn finish(inst: &Instance, rule: Rule, core: CandidateSet, payments: Option<PaymentSystem>, trace: Vec<TraceEntry>) -> RuleOutput {
    RuleOutput { rule, committee: complete(inst, &core), core, payments, trace }
}

/// Greedy Justified Candidate Rule: for `ell` from `k` down to 1, repeatedly
/// add the candidate with the largest group of supporters that approve fewer
/// than `ell` members, while that group is `ell`-large. The group splits the unit cost.
pub fn gjcr(inst: &Instance) -> RuleOutput {
    let (n, k) = (inst.n(), inst.k());
    let one = Alpha::one();
    let mut w = inst.empty_committee();
    let mut counts = vec![0u32; n];
    let mut pay = PaymentSystem::default();
    let mut trace = Vec::new();
    for ell in (1..=k).rev() {
        let g = one.min_group(ell, n, k);
        if g > n {
            continue;
        }
        while w.count() < k {
            let eligible = eligible_words(inst, &counts, ell);
            let mut best: Option<(usize, usize)> = None;
            for c in 0..inst.m() {
                if w.contains(c) || inst.support_size(c) < g {
                    continue;
                }
                let size = count_and(inst.support(c), &eligible);
                if size >= g && best.is_none_or(|(_, s)| size > s) {
                    best = Some((c, size));
                }
            }
            let Some((c, size)) = best else { break };
            w.insert(c);
            let share = Rational::new(1, size as i64);
            let mut entry = TraceEntry::new(c);
            entry.ell = Some(ell);
            for v in inst.supporters(c) {
                if eligible[v / 64] >> (v % 64) & 1 == 1 {
                    counts[v] += 1;
                    pay.pay(v, c, &share);
                    entry.charges.push(Charge { voter: v, amount: share.clone() });
                }
            }
            trace.push(entry);
        }
    }
    finish(inst, Rule::Gjcr, w, Some(pay), trace)
}

/// Smallest `q` with `sum_v min(b_v, q) >= 1`, given the supporters' budgets.
/// `None` when the budgets sum to less than 1.
pub fn mes_price(budgets: &[Rational]) -> Option<Rational> {
    let mut b: Vec<&Rational> = budgets.iter().filter(|x| !x.is_zero()).collect();
    b.sort();
    let s = b.len();
    let mut prefix = Rational::zero();
    let one = Rational::one();
    for (j, bj) in b.iter().enumerate() {
        let q = (&one - &prefix) / Rational::from(s - j);
        if q <= **bj {
            return Some(q);
        }
        prefix += bj;
    }
    None
}

/// Method of Equal Shares with budgets `k/n`.
pub fn mes(inst: &Instance) -> RuleOutput {
    let (n, k) = (inst.n(), inst.k());
    let mut budget = vec![Rational::new(k as i64, n as i64); n];
    let mut w = inst.empty_committee();
    let mut pay = PaymentSystem::default();
    let mut trace = Vec::new();
    loop {
        let mut best: Option<(usize, Rational)> = None;
        for c in 0..inst.m() {
            if w.contains(c) || inst.support_size(c) == 0 {
                continue;
            }
            let bs: Vec<Rational> = inst.supporters(c).map(|v| budget[v].clone()).collect();
            if let Some(q) = mes_price(&bs) {
                if best.as_ref().is_none_or(|(_, b)| q < *b) {
                    best = Some((c, q));
                }
            }
        }
        let Some((c, q)) = best else { break };
        w.insert(c);
        let mut entry = TraceEntry::new(c);
        entry.time = Some(q.clone());
        for v in inst.supporters(c) {
            let amount = budget[v].clone().min(q.clone());
            if amount.is_zero() {
                continue;
            }
            budget[v] -= &amount;
            pay.pay(v, c, &amount);
            entry.charges.push(Charge { voter: v, amount });
        }
        trace.push(entry);
    }
    finish(inst, Rule::Mes, w, Some(pay), trace)
}

/// Sequential Phragmén: budgets grow at unit speed; a candidate is bought as
/// soon as its supporters hold 1 in total, and their budgets reset.
pub fn seq_phragmen(inst: &Instance) -> RuleOutput {
    let (n, k) = (inst.n(), inst.k());
    let mut reset = vec![Rational::zero(); n];
    let mut w = inst.empty_committee();
    let mut trace = Vec::new();
    while w.count() < k {
        let mut best: Option<(usize, Rational)> = None;
        for c in 0..inst.m() {
            let s = inst.support_size(c);
            if w.contains(c) || s == 0 {
                continue;
            }
            let mut total = Rational::one();
            for v in inst.supporters(c) {
                total += &reset[v];
            }
            let t = total / Rational::from(s);
            if best.as_ref().is_none_or(|(_, b)| t < *b) {
                best = Some((c, t));
            }
        }
        let Some((c, t)) = best else { break };
        w.insert(c);
        let mut entry = TraceEntry::new(c);
        for v in inst.supporters(c) {
            entry.charges.push(Charge { voter: v, amount: &t - &reset[v] });
            reset[v] = t.clone();
        }
        entry.time = Some(t);
        trace.push(entry);
    }
    finish(inst, Rule::SeqPhragmen, w, None, trace)
}

/// Sequential Chamberlin–Courant: repeatedly add the candidate covering the most new voters.
pub fn seq_ccav(inst: &Instance) -> RuleOutput {
    let mut w = inst.empty_committee();
    let mut cov = crate::VoterSet::new(inst.n());
    let mut trace = Vec::new();
    while w.count() < inst.k() {
        let mut best: Option<(usize, usize)> = None;
        for c in 0..inst.m() {
            if w.contains(c) {
                continue;
            }
            let gain = crate::bitset::count_and_not(inst.support(c), cov.words());
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((c, gain));
            }
        }
        let (c, gain) = best.expect("k <= m leaves a candidate");
        w.insert(c);
        cov.union_words(inst.support(c));
        let mut entry = TraceEntry::new(c);
        entry.gain = Some(gain);
        trace.push(entry);
    }
    finish(inst, Rule::SeqCcav, w, None, trace)
}

/// GreedyEJR: while some remaining group of voters is `ell`-cohesive, take the
/// largest such `ell`, add `ell` of the group's common candidates and drop the group.
pub fn greedy_ejr(inst: &Instance) -> RuleOutput {
    greedy_cohesive(inst, &Alpha::one()).0
}

/// GreedyEJR with group threshold `alpha * ell * n / k`. Also returns whether
/// any candidate had to be skipped because the committee was full.
pub(crate) fn greedy_cohesive(inst: &Instance, alpha: &Alpha) -> (RuleOutput, bool) {
    let (n, m, k) = (inst.n(), inst.m(), inst.k());
    let mut remaining = crate::VoterSet::full(n);
    let mut w = inst.empty_committee();
    let mut pay = PaymentSystem::default();
    let mut trace = Vec::new();
    let pool: Vec<usize> = (0..m).collect();
    let mut overflow = false;
    'outer: loop {
        for ell in (1..=k).rev() {
            let g = alpha.min_group(ell, n, k);
            if g > remaining.count() {
                continue;
            }
            let Some((_, group)) = find_common(inst, remaining.words(), ell, g, &pool) else { continue };
            let group = crate::VoterSet::from_words(n, &group);
            let size = group.count();
            let common: Vec<usize> = (0..m).filter(|&c| group.is_subset(&inst.support_set(c))).take(ell).collect();
            let share = Rational::new(1, size as i64);
            for c in common {
                if w.contains(c) {
                    continue;
                }
                if w.count() == k {
                    overflow = true;
                    continue;
                }
                w.insert(c);
                let mut entry = TraceEntry::new(c);
                entry.ell = Some(ell);
                for v in group.iter() {
                    pay.pay(v, c, &share);
                    entry.charges.push(Charge { voter: v, amount: share.clone() });
                }
                trace.push(entry);
            }
            remaining.difference_with(&group);
            continue 'outer;
        }
        break;
    }
    (finish(inst, Rule::GreedyEjr, w, Some(pay), trace), overflow)
}

/// `PAV(W) = sum_v H(|A_v ∩ W|)`.
pub fn pav_score(inst: &Instance, w: &CandidateSet) -> Rational {
    let counts = inst.approval_counts(w);
    let mut by_count = BTreeMap::new();
    for c in counts {
        *by_count.entry(c as usize).or_insert(0usize) += 1;
    }
    let mut total = Rational::zero();
    for (c, times) in by_count {
        total += &(harmonic(c) * Rational::from(times));
    }
    total
}

/// `PAV(W) - PAV(W \ {c})` for a member `c`.
pub fn pav_marginal(inst: &Instance, w: &CandidateSet, c: usize) -> Rational {
    let counts = inst.approval_counts(w);
    let mut total = Rational::zero();
    for v in inst.supporters(c) {
        total += &Rational::new(1, counts[v] as i64);
    }
    total
}

/// Coverage `|N_W|`.
pub fn cc_score(inst: &Instance, w: &CandidateSet) -> usize {
    inst.coverage(w).count()
}

fn lcm_upto(k: usize) -> Option<u128> {
    let mut l: u128 = 1;
    for i in 1..=k as u128 {
        let g = num_integer::gcd(l, i);
        l = (l / g).checked_mul(i)?;
    }
    Some(l)
}

/// All size-`k` committees maximizing `sum_v sum_{y <= |A_v ∩ W|} weight[y]`,
/// in lexicographic order.
fn exhaustive(inst: &Instance, weight: &[u128], what: &'static str) -> Result<Vec<CandidateSet>, Error> {
    let (m, k) = (inst.m(), inst.k());
    let total = binomial(m as u64, k as u64);
    if total > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { what, size: total, limit: EXHAUSTIVE_LIMIT });
    }
    let supporters: Vec<Vec<usize>> = (0..m).map(|c| inst.supporters(c).collect()).collect();
    let first_max = m - k;
    let workers = worker_count().min(first_max + 1).max(1);
    let run = |wid: usize| -> (u128, Vec<Vec<usize>>) {
        let mut st = Search { supporters: &supporters, weight, counts: vec![0; inst.n()], chosen: Vec::with_capacity(k), k, m, best: 0, found: Vec::new() };
        for first in (wid..=first_max).step_by(workers) {
            let gain = st.add(first);
            st.dfs(first + 1, gain);
            st.remove(first);
        }
        (st.best, st.found)
    };
    let results: Vec<(u128, Vec<Vec<usize>>)> = if workers == 1 {
        vec![run(0)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers).map(|wid| s.spawn(move || run(wid))).collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let best = results.iter().map(|r| r.0).max().unwrap_or(0);
    let mut all: Vec<Vec<usize>> = results.into_iter().filter(|r| r.0 == best).flat_map(|r| r.1).collect();
    all.sort();
    Ok(all.into_iter().map(|v| CandidateSet::from_indices(m, v)).collect())
}

struct Search<'a> {
    supporters: &'a [Vec<usize>],
    weight: &'a [u128],
    counts: Vec<u32>,
    chosen: Vec<usize>,
    k: usize,
    m: usize,
    best: u128,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn add(&mut self, c: usize) -> u128 {
        self.chosen.push(c);
        let mut g = 0;
        for &v in &self.supporters[c] {
            self.counts[v] += 1;
            g += self.weight[self.counts[v] as usize];
        }
        g
    }

    fn remove(&mut self, c: usize) {
        self.chosen.pop();
        for &v in &self.supporters[c] {
            self.counts[v] -= 1;
        }
    }

    fn dfs(&mut self, start: usize, score: u128) {
        if self.chosen.len() == self.k {
            if score > self.best || self.found.is_empty() {
                self.best = score;
                self.found.clear();
            }
            if score == self.best {
                self.found.push(self.chosen.clone());
            }
            return;
        }
        let need = self.k - self.chosen.len();
        for c in start..=self.m - need {
            let g = self.add(c);
            self.dfs(c + 1, score + g);
            self.remove(c);
        }
    }
}

/// Every committee with maximum PAV score.
pub fn pav_exact(inst: &Instance) -> Result<Vec<CandidateSet>, Error> {
    let k = inst.k();
    let l = lcm_upto(k).filter(|_| k <= 60).ok_or(Error::TooLarge { what: "committee size for exact PAV", size: k as u128, limit: 60 })?;
    let mut weight = vec![0u128; k + 1];
    for (y, w) in weight.iter_mut().enumerate().skip(1) {
        *w = l / y as u128;
    }
    exhaustive(inst, &weight, "number of committees")
}

/// Every committee with maximum coverage.
pub fn ccav_exact(inst: &Instance) -> Result<Vec<CandidateSet>, Error> {
    let mut weight = vec![0u128; inst.k() + 1];
    weight[1] = 1;
    exhaustive(inst, &weight, "number of committees")
}

fn exhaustive_output(rule: Rule, all: Vec<CandidateSet>) -> RuleOutput {
    let w = all.into_iter().next().expect("at least one committee");
    let trace = w.iter().map(TraceEntry::new).collect();
    RuleOutput { rule, committee: w.clone(), core: w, payments: None, trace }
}

/// PAV, returning the lexicographically first optimal committee.
pub fn pav(inst: &Instance) -> Result<RuleOutput, Error> {
    Ok(exhaustive_output(Rule::Pav, pav_exact(inst)?))
}

/// CCAV, returning the lexicographically first optimal committee.
pub fn ccav(inst: &Instance) -> Result<RuleOutput, Error> {
    Ok(exhaustive_output(Rule::Ccav, ccav_exact(inst)?))
}

/// Decides affordability of `w` by maximum flow and returns a payment system if one exists.
///
/// Amounts are in units of `1/n`: every voter holds `k` units and every member costs `n`.
pub fn is_affordable(inst: &Instance, w: &CandidateSet) -> Option<PaymentSystem> {
    let (n, k) = (inst.n(), inst.k());
    let members = w.to_vec();
    if members.is_empty() {
        return Some(PaymentSystem::default());
    }
    let src = 0;
    let sink = 1 + n + members.len();
    let mut g = FlowNetwork::new(sink + 1);
    for v in 0..n {
        g.add_edge(src, 1 + v, k as u64);
    }
    let mut arcs = Vec::new();
    for (i, &c) in members.iter().enumerate() {
        for v in inst.supporters(c) {
            arcs.push((v, c, g.add_edge(1 + v, 1 + n + i, n as u64)));
        }
        g.add_edge(1 + n + i, sink, n as u64);
    }
    let flow = g.max_flow(src, sink);
    if flow != (members.len() * n) as u64 {
        return None;
    }
    let mut pay = PaymentSystem::default();
    for (v, c, h) in arcs {
        let f = g.flow_on(h);
        if f > 0 {
            pay.pay(v, c, &Rational::new(f as i64, n as i64));
        }
    }
    Some(pay)
}
