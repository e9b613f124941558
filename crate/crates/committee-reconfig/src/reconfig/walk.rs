//! Removal orders, remove-then-repair processes and the swap walker shared by
//! the constructive connectors.

use super::PathBuilder;
use crate::{CandidateSet, Error, Instance};

/// Orders the members of `w` so that each removal loses as few covered
/// voters as possible. Ties go to the smallest index.
pub fn removal_order(inst: &Instance, w: &CandidateSet) -> Vec<usize> {
    let mut counts = inst.approval_counts(w);
    let mut left = w.to_vec();
    let mut order = Vec::with_capacity(left.len());
    while !left.is_empty() {
        let (pos, _) = left
            .iter()
            .enumerate()
            .map(|(i, &c)| (i, inst.supporters(c).filter(|&v| counts[v] == 1).count()))
            .min_by_key(|&(i, loss)| (loss, left[i]))
            .expect("nonempty");
        let c = left.remove(pos);
        for v in inst.supporters(c) {
            counts[v] -= 1;
        }
        order.push(c);
    }
    order
}

/// Checks `|cov(W - {c_1..c_s})| * k >= |cov(W)| * k - s * n` for every prefix.
pub fn removal_order_bound_holds(inst: &Instance, w: &CandidateSet, order: &[usize]) -> bool {
    let (n, k) = (inst.n() as i128, inst.k() as i128);
    let full = inst.coverage(w).count() as i128;
    let mut cur = w.clone();
    for (s, &c) in order.iter().enumerate() {
        cur.remove(c);
        let cov = inst.coverage(&cur).count() as i128;
        if cov * k < full * k - (s as i128 + 1) * n {
            return false;
        }
    }
    true
}

/// Outcome of removing candidates in a fixed order and repairing violations.
#[derive(Debug, Clone)]
pub(crate) struct Repair {
    /// Candidates added, in order.
    pub added: Vec<usize>,
    /// `added_after[i]` is the number of additions made once the `i+1`-th removal is repaired.
    pub added_after: Vec<usize>,
    pub result: CandidateSet,
}

/// Starts from `start`, removes `order` one at a time and, after each
/// removal, adds the candidates proposed by `repair` until it returns `None`.
pub(crate) fn remove_and_repair(
    start: &CandidateSet,
    order: &[usize],
    mut repair: impl FnMut(&CandidateSet) -> Option<usize>,
    cap: usize,
) -> Result<Repair, Error> {
    let mut cur = start.clone();
    let mut added = Vec::new();
    let mut added_after = Vec::with_capacity(order.len());
    for &c in order {
        cur.remove(c);
        while let Some(d) = repair(&cur) {
            if !cur.insert(d) {
                return Err(Error::Construction(format!("repair proposed member {d}")));
            }
            added.push(d);
            if cur.count() > cap {
                return Err(Error::Construction(format!("repair grew the subcommittee past {cap}")));
            }
        }
        added_after.push(added.len());
    }
    Ok(Repair { added, added_after, result: cur })
}

/// Adds `adds` one at a time. Each addition evicts the first member of
/// `removes` still present and not in `keep`; when none is left, the smallest
/// member outside `keep` and outside the additions so far.
pub(crate) fn walk_adds(b: &mut PathBuilder<'_>, adds: &[usize], removes: &[usize], keep: &CandidateSet) -> Result<(), Error> {
    let mut done = CandidateSet::new(keep.universe());
    for &a in adds {
        if b.current().contains(a) {
            done.insert(a);
            continue;
        }
        let cur = b.current().clone();
        let out = removes
            .iter()
            .copied()
            .find(|&r| cur.contains(r) && !keep.contains(r) && !done.contains(r))
            .or_else(|| cur.iter().find(|&r| !keep.contains(r) && !done.contains(r)))
            .ok_or_else(|| Error::Construction(format!("no removable member when adding {a}")))?;
        b.swap(out, a)?;
        done.insert(a);
    }
    Ok(())
}

/// Swaps the current committee into `target`, evicting non-target members in
/// ascending order.
pub(crate) fn walk_to(b: &mut PathBuilder<'_>, target: &CandidateSet) -> Result<(), Error> {
    let cur = b.current().clone();
    let outs: Vec<usize> = cur.difference(target).to_vec();
    let ins: Vec<usize> = target.difference(&cur).to_vec();
    if outs.len() != ins.len() {
        return Err(Error::SizeMismatch { left: cur.count(), right: target.count() });
    }
    for (o, i) in outs.into_iter().zip(ins) {
        b.swap(o, i)?;
    }
    Ok(())
}
