//! Connecting two JR committees through 2-JR committees.

use super::walk::{remove_and_repair, removal_order, walk_adds, walk_to};
use super::{require, Path, PathBuilder, Predicate};
use crate::axioms::{check_jr, Alpha};
use crate::{CandidateSet, Error, Instance};

/// One side of the 2-JR connection.
#[derive(Debug, Clone)]
pub struct GreedySide {
    /// Members of the start committee in removal order.
    pub order: Vec<usize>,
    /// Candidates added to repair 2-JR, in order. They form a greedy 2-JR subcommittee.
    pub core: Vec<usize>,
    /// Path from the start committee to a committee containing `core`.
    pub path: Path,
}

/// Removes the members of `w` in [`removal_order`], repairing 2-JR after each
/// removal with the smallest witness candidate, and walks `w` to a committee
/// containing the resulting greedy core.
pub fn two_jr_greedy_side(inst: &Instance, w: &CandidateSet) -> Result<GreedySide, Error> {
    require(inst, w, &Predicate::jr(), "committee")?;
    let two = Alpha::integer(2);
    let pred = Predicate::Jr(two.clone());
    let order = removal_order(inst, w);
    let repair = remove_and_repair(w, &order, |cur| check_jr(inst, cur, &two).map(|x| x.candidate), inst.k())?;
    for (s, &r) in repair.added_after.iter().enumerate() {
        if r > s + 1 {
            return Err(Error::Construction(format!("{r} repairs after {} removals", s + 1)));
        }
    }
    let mut b = PathBuilder::start(inst, &pred, w)?;
    let keep = CandidateSet::new(inst.m());
    walk_adds(&mut b, &repair.added, &order, &keep)?;
    Ok(GreedySide { order, core: repair.added, path: b.finish() })
}

/// Path of 2-JR committees between two JR committees, of length at most `2k`.
pub fn connect_two_jr(inst: &Instance, w: &CandidateSet, w2: &CandidateSet) -> Result<Path, Error> {
    let jr = Predicate::jr();
    require(inst, w, &jr, "start")?;
    require(inst, w2, &jr, "target")?;
    let pred = Predicate::Jr(Alpha::integer(2));
    if w == w2 {
        return Ok(PathBuilder::start(inst, &pred, w)?.finish());
    }
    let a = two_jr_greedy_side(inst, w)?;
    let b = two_jr_greedy_side(inst, w2)?;
    let ga = CandidateSet::from_indices(inst.m(), a.core.iter().copied());
    let gb = CandidateSet::from_indices(inst.m(), b.core.iter().copied());
    let qa = a.path.last().clone();
    let qb = b.path.last().clone();

    let mut builder = PathBuilder::start(inst, &pred, w)?;
    builder.extend(&a.path)?;
    // bring in the other core while keeping this one, preferring to evict
    // members the far end does not need
    let both = ga.union(&gb);
    let mut evict: Vec<usize> = qa.difference(&both).iter().filter(|&c| !qb.contains(c)).collect();
    evict.extend(qa.difference(&both).iter().filter(|&c| qb.contains(c)));
    let adds: Vec<usize> = gb.difference(&qa).to_vec();
    walk_adds(&mut builder, &adds, &evict, &both)?;
    walk_to(&mut builder, &qb)?;
    builder.extend(&b.path.reversed())?;
    let path = builder.finish();
    if path.len() > 2 * inst.k() {
        return Err(Error::Construction(format!("2-JR path of length {} exceeds 2k = {}", path.len(), 2 * inst.k())));
    }
    Ok(path)
}
