//! Reduction from SAT reconfiguration to JR reconfiguration, with an exact
//! solver for the source problem.
//!
//! Index layout of the reduced instance, for `b` variables, `a` clauses after
//! padding and `q = (a+27)/8`:
//!
//! | voters                       | candidates                          |
//! |------------------------------|-------------------------------------|
//! | `0..a` clause voters         | `0..a` clause candidates            |
//! | `a+10i..a+10i+10` variable i | `a+2i` is `x_i`, `a+2i+1` is `¬x_i` |
//! | 9 greedy                     | `a+2b` special 1                    |
//! | 9 attached to special 1      | `a+2b+1` special 2                  |
//! | 9 attached to special 2      | `a+2b+2..` `q` dummies              |
//! | `q` dummy voters, side 1     |                                     |
//! | `q` dummy voters, side 2     |                                     |

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::{CandidateSet, Error, Instance, InstanceBuilder};

/// Largest variable count accepted by [`sat_reconfig_connected`].
pub const SAT_BFS_MAX_VARS: usize = 20;

/// A CNF formula over variables `1..=vars` and two satisfying assignments.
/// Literals are DIMACS-style: `i` is `x_i`, `-i` is its negation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SatReconfigInstance {
    pub vars: usize,
    pub clauses: Vec<Vec<i32>>,
    pub phi1: Vec<bool>,
    pub phi2: Vec<bool>,
}

fn literal_true(lit: i32, phi: &[bool]) -> bool {
    phi[lit.unsigned_abs() as usize - 1] == (lit > 0)
}

impl SatReconfigInstance {
    pub fn new(vars: usize, clauses: Vec<Vec<i32>>, phi1: Vec<bool>, phi2: Vec<bool>) -> Result<Self, Error> {
        let s = SatReconfigInstance { vars, clauses, phi1, phi2 };
        s.validate()?;
        Ok(s)
    }

    pub fn satisfies(&self, phi: &[bool]) -> bool {
        self.clauses.iter().all(|cl| cl.iter().any(|&l| literal_true(l, phi)))
    }

    fn validate(&self) -> Result<(), Error> {
        if self.vars == 0 {
            return Err(Error::InvalidInput("need at least one variable".into()));
        }
        for (i, cl) in self.clauses.iter().enumerate() {
            if cl.is_empty() {
                return Err(Error::InvalidInput(format!("clause {} is empty", i + 1)));
            }
            if let Some(&l) = cl.iter().find(|&&l| l == 0 || l.unsigned_abs() as usize > self.vars) {
                return Err(Error::InvalidInput(format!("clause {}: literal {l} out of range", i + 1)));
            }
        }
        for (name, phi) in [("phi1", &self.phi1), ("phi2", &self.phi2)] {
            if phi.len() != self.vars {
                return Err(Error::InvalidInput(format!("{name} has {} values, expected {}", phi.len(), self.vars)));
            }
            if !self.satisfies(phi) {
                return Err(Error::PredicateViolated(format!("{name} does not satisfy the formula")));
            }
        }
        Ok(())
    }

    /// Parses `p cnf <vars> <clauses>`, the zero-terminated clauses, then two
    /// assignment lines, each listing every variable as a signed literal
    /// (an optional leading `v` and trailing `0` are ignored). Lines starting
    /// with `c` are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self, Error> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('c') && !l.starts_with('%'));
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "p" || h[1] != "cnf" {
            return Err(Error::Parse { line: hl, msg: "expected `p cnf <vars> <clauses>`".into() });
        }
        let num = |s: &str, line: usize| s.parse::<usize>().map_err(|e| Error::Parse { line, msg: format!("{s:?}: {e}") });
        let (vars, count) = (num(h[2], hl)?, num(h[3], hl)?);
        let mut clauses = Vec::with_capacity(count);
        let mut cur = Vec::new();
        while clauses.len() < count {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: hl, msg: format!("expected {count} clauses, found {}", clauses.len()) })?;
            for t in l.split_whitespace() {
                let lit: i32 = t.parse().map_err(|e| Error::Parse { line: ln, msg: format!("{t:?}: {e}") })?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else {
                    cur.push(lit);
                }
            }
        }
        if !cur.is_empty() {
            return Err(Error::Parse { line: hl, msg: "unterminated clause".into() });
        }
        let mut phis = Vec::new();
        for _ in 0..2 {
            let (ln, l) = lines.next().ok_or(Error::Parse { line: hl, msg: "expected two assignment lines".into() })?;
            let mut phi = vec![None; vars];
            for t in l.split_whitespace().filter(|&t| t != "v" && t != "0") {
                let lit: i32 = t.parse().map_err(|e| Error::Parse { line: ln, msg: format!("{t:?}: {e}") })?;
                let v = lit.unsigned_abs() as usize;
                if v == 0 || v > vars {
                    return Err(Error::Parse { line: ln, msg: format!("variable {v} out of range") });
                }
                phi[v - 1] = Some(lit > 0);
            }
            let phi: Option<Vec<bool>> = phi.into_iter().collect();
            phis.push(phi.ok_or(Error::Parse { line: ln, msg: "assignment must list every variable".into() })?);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing content".into() });
        }
        let phi2 = phis.pop().expect("two lines");
        let phi1 = phis.pop().expect("two lines");
        Self::new(vars, clauses, phi1, phi2)
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for cl in &self.clauses {
            for l in cl {
                s.push_str(&format!("{l} "));
            }
            s.push_str("0\n");
        }
        for phi in [&self.phi1, &self.phi2] {
            let lits: Vec<String> = phi.iter().enumerate().map(|(i, &t)| if t { format!("{}", i + 1) } else { format!("-{}", i + 1) }).collect();
            s.push_str(&format!("v {} 0\n", lits.join(" ")));
        }
        s
    }

    /// Clauses padded with copies of the first one until `8 | a+27`. An empty
    /// formula becomes `x_1 ∨ ¬x_1` first.
    pub fn padded_clauses(&self) -> Vec<Vec<i32>> {
        let mut cl = self.clauses.clone();
        if cl.is_empty() {
            cl.push(vec![1, -1]);
        }
        while (cl.len() + 27) % 8 != 0 {
            cl.push(cl[0].clone());
        }
        cl
    }
}

/// Index layout of a reduced instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionLayout {
    /// Clauses after padding.
    pub clauses: usize,
    pub vars: usize,
    /// Number of non-special dummy candidates, `(a+27)/8`.
    pub dummies: usize,
}

impl ReductionLayout {
    pub fn literal(&self, var: usize, positive: bool) -> usize {
        self.clauses + 2 * var + usize::from(!positive)
    }

    pub fn special(&self, side: usize) -> usize {
        self.clauses + 2 * self.vars + side
    }

    pub fn dummy(&self, j: usize) -> usize {
        self.clauses + 2 * self.vars + 2 + j
    }

    pub fn n(&self) -> usize {
        self.clauses + 10 * self.vars + 27 + 2 * self.dummies
    }

    pub fn m(&self) -> usize {
        self.clauses + 2 * self.vars + 2 + self.dummies
    }

    pub fn k(&self) -> usize {
        self.vars + self.dummies
    }

    /// The committee of an assignment: its true literals and every non-special dummy.
    pub fn committee(&self, phi: &[bool]) -> CandidateSet {
        let lits = phi.iter().enumerate().map(|(i, &t)| self.literal(i, t));
        CandidateSet::from_indices(self.m(), lits.chain((0..self.dummies).map(|j| self.dummy(j))))
    }

    /// The assignment of a committee holding exactly one literal per variable
    /// and every dummy, if it has that shape.
    pub fn project(&self, w: &CandidateSet) -> Option<Vec<bool>> {
        if !(0..self.dummies).all(|j| w.contains(self.dummy(j))) {
            return None;
        }
        (0..self.vars)
            .map(|i| match (w.contains(self.literal(i, true)), w.contains(self.literal(i, false))) {
                (true, false) => Some(true),
                (false, true) => Some(false),
                _ => None,
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Reduced {
    pub instance: Instance,
    pub w1: CandidateSet,
    pub w2: CandidateSet,
    pub layout: ReductionLayout,
}

/// Builds the JR-reconfiguration instance and the committees of `phi1` and `phi2`.
pub fn sat_to_jr_reconfig(sri: &SatReconfigInstance) -> Result<Reduced, Error> {
    sri.validate()?;
    let clauses = sri.padded_clauses();
    let (a, b) = (clauses.len(), sri.vars);
    let lay = ReductionLayout { clauses: a, vars: b, dummies: (a + 27) / 8 };
    let q = lay.dummies;
    let mut ib = InstanceBuilder::new(lay.n(), lay.m(), lay.k());
    for (j, cl) in clauses.iter().enumerate() {
        ib.approve(j, j);
        for &l in cl {
            ib.approve(j, lay.literal(l.unsigned_abs() as usize - 1, l > 0));
        }
    }
    let mut v = a;
    for i in 0..b {
        for _ in 0..10 {
            ib.approve(v, lay.literal(i, true));
            ib.approve(v, lay.literal(i, false));
            v += 1;
        }
    }
    for _ in 0..9 {
        for c in 0..a {
            ib.approve(v, c);
        }
        v += 1;
    }
    for side in 0..2 {
        for _ in 0..9 {
            ib.approve(v, lay.special(side));
            v += 1;
        }
    }
    for side in 0..2 {
        for j in 0..q {
            ib.approve(v, lay.special(side));
            ib.approve(v, lay.dummy(j));
            v += 1;
        }
    }
    debug_assert_eq!(v, lay.n());
    let instance = ib.build()?;
    let (w1, w2) = (lay.committee(&sri.phi1), lay.committee(&sri.phi2));
    for (name, w) in [("first", &w1), ("second", &w2)] {
        if let Some(wit) = crate::axioms::check_jr(&instance, w, &crate::Alpha::one()) {
            return Err(Error::Construction(format!("{name} committee violates JR via candidate {}", wit.candidate)));
        }
    }
    Ok(Reduced { instance, w1, w2, layout: lay })
}

/// Whether `phi1` reaches `phi2` through satisfying assignments by single bit flips.
pub fn sat_reconfig_connected(sri: &SatReconfigInstance) -> Result<bool, Error> {
    sri.validate()?;
    let b = sri.vars;
    if b > SAT_BFS_MAX_VARS {
        return Err(Error::TooLarge { what: "assignment space (variables)", size: b as u128, limit: SAT_BFS_MAX_VARS as u128 });
    }
    let pack = |phi: &[bool]| phi.iter().enumerate().fold(0u32, |acc, (i, &t)| acc | (u32::from(t) << i));
    let unpack = |x: u32| (0..b).map(|i| x >> i & 1 == 1).collect::<Vec<bool>>();
    let (s, t) = (pack(&sri.phi1), pack(&sri.phi2));
    let mut seen = vec![false; 1 << b];
    let mut queue = VecDeque::from([s]);
    seen[s as usize] = true;
    while let Some(x) = queue.pop_front() {
        if x == t {
            return Ok(true);
        }
        for i in 0..b {
            let y = x ^ (1 << i);
            if !seen[y as usize] && sri.satisfies(&unpack(y)) {
                seen[y as usize] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconfig::{bfs_connect, Predicate};

    fn two_var() -> SatReconfigInstance {
        SatReconfigInstance::new(2, vec![vec![1, 2]], vec![true, true], vec![false, true]).unwrap()
    }

    #[test]
    fn ratio_is_ten() {
        let r = sat_to_jr_reconfig(&two_var()).unwrap();
        assert_eq!(r.instance.n(), 10 * r.instance.k());
        assert_eq!(r.layout.clauses, 5);
    }

    #[test]
    fn single_clause_connected_both_ways() {
        let sri = two_var();
        assert!(sat_reconfig_connected(&sri).unwrap());
        let r = sat_to_jr_reconfig(&sri).unwrap();
        let out = bfs_connect(&r.instance, &r.w1, &r.w2, &Predicate::jr(), 1_000_000).unwrap();
        let path = out.path().expect("connected");
        for w in &path.steps {
            assert!(sri.satisfies(&r.layout.project(w).unwrap()));
        }
    }

    #[test]
    fn disconnected_pair() {
        // x1 <-> x2 as CNF: only 00 and 11 satisfy it, and they differ in two bits
        let sri = SatReconfigInstance::new(2, vec![vec![-1, 2], vec![1, -2]], vec![false, false], vec![true, true]).unwrap();
        assert!(!sat_reconfig_connected(&sri).unwrap());
        let r = sat_to_jr_reconfig(&sri).unwrap();
        let out = bfs_connect(&r.instance, &r.w1, &r.w2, &Predicate::jr(), 1_000_000).unwrap();
        assert!(out.path().is_none());
    }

    #[test]
    fn dimacs_round_trip() {
        let sri = two_var();
        assert_eq!(SatReconfigInstance::parse_dimacs(&sri.to_dimacs()).unwrap(), sri);
        assert!(SatReconfigInstance::parse_dimacs("p cnf 1 1\n1 0\n-1\n1\n").is_err());
    }
}
