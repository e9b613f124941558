//! Candidate-interval (CI) and voter-interval (VI) profiles, Pareto
//! dominance, and shortest JR paths on these domains.

use pq_tree::PQTree;
use serde::{Deserialize, Serialize};

use crate::bitset::count_and_not;
use crate::reconfig::{require, Path, PathBuilder, Predicate};
use crate::{CandidateSet, Error, Instance, InstanceBuilder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    /// Every ballot is an interval of the candidate ordering.
    Ci,
    /// Every support is an interval of the voter ordering.
    Vi,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DomainKind::Ci => "ci",
            DomainKind::Vi => "vi",
        })
    }
}

impl std::str::FromStr for DomainKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "ci" => Ok(DomainKind::Ci),
            "vi" => Ok(DomainKind::Vi),
            _ => Err(Error::InvalidInput(format!("unknown domain {s:?}; expected ci or vi"))),
        }
    }
}

/// An ordering of candidates (CI) or voters (VI) under which the profile has
/// the interval property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainCertificate {
    pub kind: DomainKind,
    pub ordering: Vec<usize>,
}

/// Rows of the incidence matrix whose columns must be consecutive.
fn rows(inst: &Instance, kind: DomainKind) -> (usize, Vec<Vec<usize>>) {
    match kind {
        DomainKind::Ci => (inst.m(), (0..inst.n()).map(|v| inst.ballot(v)).collect()),
        DomainKind::Vi => (inst.n(), (0..inst.m()).map(|c| inst.supporters(c).collect()).collect()),
    }
}

/// Whether every set is contiguous under `ordering` (a permutation of `0..universe`).
pub fn is_consecutive(universe: usize, sets: &[Vec<usize>], ordering: &[usize]) -> bool {
    if ordering.len() != universe {
        return false;
    }
    let mut pos = vec![usize::MAX; universe];
    for (i, &x) in ordering.iter().enumerate() {
        if x >= universe || pos[x] != usize::MAX {
            return false;
        }
        pos[x] = i;
    }
    sets.iter().all(|s| {
        let (lo, hi) = s.iter().fold((usize::MAX, 0), |(lo, hi), &x| (lo.min(pos[x]), hi.max(pos[x])));
        s.is_empty() || hi - lo + 1 == s.len()
    })
}

/// An ordering of `0..universe` making every set contiguous, found by PQ-tree
/// reduction and verified before it is returned.
pub fn consecutive_ones_order(universe: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    let identity: Vec<usize> = (0..universe).collect();
    if universe <= 2 {
        return Some(identity);
    }
    let mut tree = PQTree::from_leaves(&identity).ok()?;
    for s in sets {
        if s.len() >= 2 && s.len() < universe {
            tree = tree.reduction(s).ok()?;
        }
    }
    let order = tree.frontier();
    is_consecutive(universe, sets, &order).then_some(order)
}

impl DomainCertificate {
    /// Re-scans every interval under the ordering.
    pub fn verify(&self, inst: &Instance) -> Result<(), Error> {
        let (u, sets) = rows(inst, self.kind);
        if is_consecutive(u, &sets, &self.ordering) {
            Ok(())
        } else {
            Err(Error::Certificate(format!("ordering is not a {} ordering of this profile", self.kind)))
        }
    }

    /// Position of each element in the ordering.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ordering.len()];
        for (i, &x) in self.ordering.iter().enumerate() {
            pos[x] = i;
        }
        pos
    }
}

pub fn recognize(inst: &Instance, kind: DomainKind) -> Option<DomainCertificate> {
    let (u, sets) = rows(inst, kind);
    consecutive_ones_order(u, &sets).map(|ordering| DomainCertificate { kind, ordering })
}

pub fn recognize_ci(inst: &Instance) -> Option<DomainCertificate> {
    recognize(inst, DomainKind::Ci)
}

pub fn recognize_vi(inst: &Instance) -> Option<DomainCertificate> {
    recognize(inst, DomainKind::Vi)
}

/// Candidates whose support strictly contains the support of `c`.
pub fn pareto_dominators(inst: &Instance, c: usize) -> CandidateSet {
    let sc = inst.support(c);
    let len = inst.support_size(c);
    let mut out = CandidateSet::new(inst.m());
    for d in 0..inst.m() {
        if inst.support_size(d) > len && count_and_not(sc, inst.support(d)) == 0 {
            out.insert(d);
        }
    }
    out
}

/// Candidates not Pareto-dominated by any other.
pub fn pareto_optimal(inst: &Instance) -> CandidateSet {
    let mut out = CandidateSet::new(inst.m());
    for c in 0..inst.m() {
        if pareto_dominators(inst, c).is_empty() {
            out.insert(c);
        }
    }
    out
}

fn expect_kind(inst: &Instance, cert: &DomainCertificate, kind: DomainKind) -> Result<(), Error> {
    if cert.kind != kind {
        return Err(Error::Certificate(format!("expected a {kind} certificate, got {}", cert.kind)));
    }
    cert.verify(inst)
}

/// JR path of length exactly `distance(w, w2)` on a CI profile.
pub fn connect_jr_ci(inst: &Instance, cert: &DomainCertificate, w: &CandidateSet, w2: &CandidateSet) -> Result<Path, Error> {
    expect_kind(inst, cert, DomainKind::Ci)?;
    let pred = Predicate::jr();
    require(inst, w, &pred, "start")?;
    require(inst, w2, &pred, "target")?;
    let pos = cert.positions();
    let by_pos = |x: &CandidateSet| {
        let mut v = x.to_vec();
        v.sort_by_key(|&c| pos[c]);
        v
    };
    let mut front = PathBuilder::start(inst, &pred, w)?;
    let mut back = PathBuilder::start(inst, &pred, w2)?;
    loop {
        let (a, b) = (front.current().clone(), back.current().clone());
        if a == b {
            break;
        }
        let dx = by_pos(&a).into_iter().find(|&c| !b.contains(c)).expect("committees differ");
        let ey = by_pos(&b).into_iter().find(|&c| !a.contains(c)).expect("committees differ");
        if pos[dx] < pos[ey] {
            front.swap(dx, ey)?;
        } else {
            back.swap(ey, dx)?;
        }
    }
    front.extend(&back.finish().reversed())?;
    Ok(front.finish())
}

/// Replaces Pareto-dominated members by Pareto-optimal candidates, preferring
/// the smallest available dominator. Stops early when every Pareto-optimal
/// candidate is already a member.
fn drive_to_optimal(b: &mut PathBuilder<'_>, inst: &Instance, optimal: &CandidateSet) -> Result<(), Error> {
    let dominated: Vec<usize> = b.current().difference(optimal).to_vec();
    for c in dominated {
        let cur = b.current().clone();
        let free = optimal.difference(&cur);
        let Some(d) = pareto_dominators(inst, c).intersection(&free).first().or_else(|| free.first()) else {
            break;
        };
        b.swap(c, d)?;
    }
    Ok(())
}

/// The sub-profile on `keep`, with the map back to original indices.
fn restrict(inst: &Instance, keep: &CandidateSet) -> Result<(Instance, Vec<usize>), Error> {
    let map = keep.to_vec();
    let mut b = InstanceBuilder::new(inst.n(), map.len(), inst.k());
    for (i, &c) in map.iter().enumerate() {
        for v in inst.supporters(c) {
            b.approve(v, i);
        }
    }
    Ok((b.build()?, map))
}

/// JR path between two JR committees on a VI profile. The length equals
/// `distance(w, w2)` when neither committee holds a Pareto-dominated candidate.
pub fn connect_jr_vi(inst: &Instance, cert: &DomainCertificate, w: &CandidateSet, w2: &CandidateSet) -> Result<Path, Error> {
    expect_kind(inst, cert, DomainKind::Vi)?;
    let pred = Predicate::jr();
    require(inst, w, &pred, "start")?;
    require(inst, w2, &pred, "target")?;
    let optimal = pareto_optimal(inst);
    let mut front = PathBuilder::start(inst, &pred, w)?;
    let mut back = PathBuilder::start(inst, &pred, w2)?;
    drive_to_optimal(&mut front, inst, &optimal)?;
    drive_to_optimal(&mut back, inst, &optimal)?;
    let (a, b) = (front.current().clone(), back.current().clone());
    if optimal.count() >= inst.k() {
        // both ends now lie in the Pareto-optimal sub-profile, which is CI
        let (sub, map) = restrict(inst, &optimal)?;
        let ci = recognize_ci(&sub).ok_or_else(|| Error::Construction("Pareto-optimal sub-profile is not CI".into()))?;
        let mut inv = vec![usize::MAX; inst.m()];
        for (i, &c) in map.iter().enumerate() {
            inv[c] = i;
        }
        let lift = |x: &CandidateSet| CandidateSet::from_indices(sub.m(), x.iter().map(|c| inv[c]));
        let mid = connect_jr_ci(&sub, &ci, &lift(&a), &lift(&b))?;
        for step in mid.steps.iter().skip(1) {
            front.push(CandidateSet::from_indices(inst.m(), step.iter().map(|i| map[i])))?;
        }
    } else {
        // both ends contain every Pareto-optimal candidate, so any exchange of the rest keeps JR
        for (o, i) in a.difference(&b).iter().zip(b.difference(&a).iter()) {
            front.swap(o, i)?;
        }
    }
    front.extend(&back.finish().reversed())?;
    Ok(front.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vi_table() -> Instance {
        Instance::parse("6 6 2\n0 4\n0 4\n2 4 5\n3 4 5\n1 5\n1 5\n").unwrap()
    }

    #[test]
    fn vi_table_is_vi() {
        let inst = vi_table();
        let cert = recognize_vi(&inst).unwrap();
        cert.verify(&inst).unwrap();
        assert!(DomainCertificate { kind: DomainKind::Vi, ordering: (0..6).collect() }.verify(&inst).is_ok());
    }

    #[test]
    fn dominators_of_single_voter_candidate() {
        let inst = vi_table();
        assert_eq!(pareto_dominators(&inst, 2).to_vec(), vec![4, 5]);
        let dup = Instance::parse("2 2 1\n0 1\n0 1\n").unwrap();
        assert!(pareto_dominators(&dup, 0).is_empty());
    }

    #[test]
    fn tucker_cycle_is_not_ci() {
        // ballots {0,1},{1,2},{0,2} admit no interval ordering
        let inst = Instance::parse("3 3 1\n0 1\n1 2\n0 2\n").unwrap();
        assert!(recognize_ci(&inst).is_none());
    }

    #[test]
    fn vi_table_path_is_longer_than_distance() {
        let inst = vi_table();
        let cert = recognize_vi(&inst).unwrap();
        let w = inst.committee(&[0, 1]).unwrap();
        let w2 = inst.committee(&[2, 3]).unwrap();
        let p = connect_jr_vi(&inst, &cert, &w, &w2).unwrap();
        p.validate(&inst, &Predicate::jr()).unwrap();
        assert!(p.len() > 2);
    }

    #[test]
    fn ci_path_has_distance_length() {
        let inst = Instance::parse("6 7 3\n0 1 2 3 4\n0 1 2 3 4\n0 1 2 3 4\n2 3 4 5 6\n2 3 4 5 6\n2 3 4 5 6\n").unwrap();
        let cert = recognize_ci(&inst).unwrap();
        let w = inst.committee(&[0, 1, 2]).unwrap();
        let w2 = inst.committee(&[2, 5, 6]).unwrap();
        let p = connect_jr_ci(&inst, &cert, &w, &w2).unwrap();
        p.validate(&inst, &Predicate::jr()).unwrap();
        assert_eq!(p.len(), 2);
    }
}
