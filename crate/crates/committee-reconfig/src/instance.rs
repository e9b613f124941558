//! The election: voters, candidates, approval ballots and the committee size.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bitset::{words_for, CandidateSet, Ones, VoterSet, WORD};
use crate::Error;

/// An approval election with committee size `k`.
///
/// The incidence matrix is stored once, as one voter bitset per candidate.
/// Ballots are recovered from it on demand.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    m: usize,
    k: usize,
    vw: usize,
    supports: Vec<u64>,
    support_len: Vec<u32>,
}

/// JSON mirror of the text format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceJson {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub approvals: Vec<Vec<usize>>,
}

/// Incremental construction for large generated instances.
pub struct InstanceBuilder {
    n: usize,
    m: usize,
    k: usize,
    vw: usize,
    supports: Vec<u64>,
}

impl InstanceBuilder {
    pub fn new(n: usize, m: usize, k: usize) -> Self {
        let vw = words_for(n);
        InstanceBuilder { n, m, k, vw, supports: vec![0; m * vw] }
    }

    #[inline]
    pub fn approve(&mut self, voter: usize, candidate: usize) {
        assert!(voter < self.n && candidate < self.m);
        self.supports[candidate * self.vw + voter / WORD] |= 1u64 << (voter % WORD);
    }

    pub fn build(self) -> Result<Instance, Error> {
        Instance::from_raw(self.n, self.m, self.k, self.supports)
    }
}

impl Instance {
    /// Builds an instance from per-voter ballots.
    pub fn new(n: usize, m: usize, k: usize, approvals: &[Vec<usize>]) -> Result<Instance, Error> {
        if approvals.len() != n {
            return Err(Error::InvalidInstance(format!("expected {n} ballots, got {}", approvals.len())));
        }
        let mut b = InstanceBuilder::new(n, m, k);
        for (v, ballot) in approvals.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for &c in ballot {
                if c >= m {
                    return Err(Error::InvalidInstance(format!("voter {v}: candidate {c} out of range (m = {m})")));
                }
                if !seen.insert(c) {
                    return Err(Error::InvalidInstance(format!("voter {v}: duplicate candidate {c}")));
                }
                b.approve(v, c);
            }
        }
        b.build()
    }

    fn from_raw(n: usize, m: usize, k: usize, supports: Vec<u64>) -> Result<Instance, Error> {
        if n == 0 {
            return Err(Error::InvalidInstance("need at least one voter".into()));
        }
        if k == 0 || k > m {
            return Err(Error::InvalidInstance(format!("committee size must satisfy 1 <= k <= m (k = {k}, m = {m})")));
        }
        let vw = words_for(n);
        let support_len = supports.chunks(vw).map(|c| c.iter().map(|w| w.count_ones()).sum()).collect();
        Ok(Instance { n, m, k, vw, supports, support_len })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Words per voter set.
    pub fn voter_words(&self) -> usize {
        self.vw
    }

    /// Raw words of the support `N_c`.
    #[inline]
    pub fn support(&self, c: usize) -> &[u64] {
        &self.supports[c * self.vw..(c + 1) * self.vw]
    }

    pub fn support_set(&self, c: usize) -> VoterSet {
        VoterSet::from_words(self.n, self.support(c))
    }

    pub fn supporters(&self, c: usize) -> Ones<'_> {
        Ones::new(self.support(c))
    }

    #[inline]
    pub fn support_size(&self, c: usize) -> usize {
        self.support_len[c] as usize
    }

    #[inline]
    pub fn approves(&self, v: usize, c: usize) -> bool {
        self.support(c)[v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn ballot(&self, v: usize) -> Vec<usize> {
        (0..self.m).filter(|&c| self.approves(v, c)).collect()
    }

    pub fn ballot_set(&self, v: usize) -> CandidateSet {
        CandidateSet::from_indices(self.m, self.ballot(v))
    }

    /// All ballots, as sorted candidate lists.
    pub fn approval_lists(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for c in 0..self.m {
            for v in self.supporters(c) {
                out[v].push(c);
            }
        }
        out
    }

    pub fn empty_committee(&self) -> CandidateSet {
        CandidateSet::new(self.m)
    }

    pub fn committee(&self, members: &[usize]) -> Result<CandidateSet, Error> {
        let set = self.subcommittee(members)?;
        if set.count() != self.k {
            return Err(Error::NotACommittee { size: set.count(), k: self.k });
        }
        Ok(set)
    }

    pub fn subcommittee(&self, members: &[usize]) -> Result<CandidateSet, Error> {
        let mut set = CandidateSet::new(self.m);
        for &c in members {
            if c >= self.m {
                return Err(Error::IndexOutOfRange { index: c, bound: self.m });
            }
            if !set.insert(c) {
                return Err(Error::InvalidInstance(format!("candidate {c} listed twice")));
            }
        }
        if set.count() > self.k {
            return Err(Error::NotACommittee { size: set.count(), k: self.k });
        }
        Ok(set)
    }

    /// `N_W`: voters approving at least one member of `w`.
    pub fn coverage(&self, w: &CandidateSet) -> VoterSet {
        let mut cov = VoterSet::new(self.n);
        for c in w.iter() {
            cov.union_words(self.support(c));
        }
        cov
    }

    /// `|A_v ∩ W|` for every voter.
    pub fn approval_counts(&self, w: &CandidateSet) -> Vec<u32> {
        let mut counts = vec![0u32; self.n];
        for c in w.iter() {
            for v in self.supporters(c) {
                counts[v] += 1;
            }
        }
        counts
    }

    /// Candidates approved by at least one voter.
    pub fn approved_candidates(&self) -> CandidateSet {
        CandidateSet::from_indices(self.m, (0..self.m).filter(|&c| self.support_len[c] > 0))
    }

    /// Parses the text format: a header `n m k`, then one ballot line per voter.
    /// Lines starting with `#` are comments. JSON input is accepted as well.
    pub fn parse(text: &str) -> Result<Instance, Error> {
        if text.trim_start().starts_with('{') {
            return Instance::from_json(text);
        }
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim_start().starts_with('#'));
        let (hline, header) = loop {
            match lines.next() {
                Some((_, l)) if l.trim().is_empty() => continue,
                Some((i, l)) => break (i + 1, l),
                None => return Err(Error::Parse { line: 1, msg: "missing header `n m k`".into() }),
            }
        };
        let nums: Vec<&str> = header.split_whitespace().collect();
        let parse_num = |s: &str| s.parse::<usize>().map_err(|_| Error::Parse { line: hline, msg: format!("invalid number {s:?} in header") });
        if nums.len() != 3 {
            return Err(Error::Parse { line: hline, msg: "header must be `n m k`".into() });
        }
        let (n, m, k) = (parse_num(nums[0])?, parse_num(nums[1])?, parse_num(nums[2])?);
        if k > m {
            return Err(Error::Parse { line: hline, msg: format!("k = {k} exceeds m = {m}") });
        }
        if n == 0 || k == 0 {
            return Err(Error::Parse { line: hline, msg: "need n >= 1 and k >= 1".into() });
        }
        let mut b = InstanceBuilder::new(n, m, k);
        for v in 0..n {
            let Some((i, l)) = lines.next() else {
                return Err(Error::Parse { line: hline + v + 1, msg: format!("expected {n} ballot lines, found {v}") });
            };
            let mut seen = CandidateSet::new(m);
            for tok in l.split_whitespace() {
                let c: usize = tok.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("invalid candidate index {tok:?}") })?;
                if c >= m {
                    return Err(Error::Parse { line: i + 1, msg: format!("candidate index {c} >= m = {m}") });
                }
                if !seen.insert(c) {
                    return Err(Error::Parse { line: i + 1, msg: format!("duplicate candidate {c} in ballot") });
                }
                b.approve(v, c);
            }
        }
        for (i, l) in lines {
            if !l.trim().is_empty() {
                return Err(Error::Parse { line: i + 1, msg: "unexpected content after the last ballot".into() });
            }
        }
        b.build()
    }

    pub fn from_json(text: &str) -> Result<Instance, Error> {
        let j: InstanceJson = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        Instance::new(j.n, j.m, j.k, &j.approvals)
    }

    /// Normalized text form: sorted ballots, no comments.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.n, self.m, self.k);
        for ballot in self.approval_lists() {
            let mut first = true;
            for c in ballot {
                if !first {
                    s.push(' ');
                }
                first = false;
                let _ = write!(s, "{c}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> InstanceJson {
        InstanceJson { n: self.n, m: self.m, k: self.k, approvals: self.approval_lists() }
    }
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Instance(n={}, m={}, k={})", self.n, self.m, self.k)
    }
}
