//! Connecting two EJR committees through 4-EJR committees.

use super::walk::{remove_and_repair, walk_adds, walk_to};
use super::{require, Path, PathBuilder, Predicate};
use crate::axioms::{check_ejr, Alpha};
use crate::combin::{binomial, Subsets};
use crate::rules::{greedy_cohesive, EXHAUSTIVE_LIMIT};
use crate::{CandidateSet, Error, Instance, Rational};

/// `sum_v H(min(|A_v ∩ w|, |A_v ∩ x|))`.
pub fn relative_pav_score(inst: &Instance, w: &CandidateSet, x: &CandidateSet) -> Rational {
    let cw = inst.approval_counts(w);
    let cx = inst.approval_counts(x);
    let mut s = Rational::zero();
    for (a, b) in cw.iter().zip(&cx) {
        s += &crate::rational::harmonic((*a).min(*b) as usize);
    }
    s
}

/// Marginal contribution of member `c` of `x` to [`relative_pav_score`].
fn relative_marginal(inst: &Instance, wc: &[u32], xc: &[u32], c: usize) -> Rational {
    let mut s = Rational::zero();
    for v in inst.supporters(c) {
        if xc[v] <= wc[v] {
            s += &Rational::new(1, xc[v] as i64);
        }
    }
    s
}

/// Greedy order on `w` by smallest marginal relative score, smallest index on ties.
fn relative_removal_order(inst: &Instance, w: &CandidateSet) -> Vec<usize> {
    let wc = inst.approval_counts(w);
    let mut x = w.clone();
    let mut order = Vec::with_capacity(w.count());
    while !x.is_empty() {
        let xc = inst.approval_counts(&x);
        let c = x
            .iter()
            .map(|c| (relative_marginal(inst, &wc, &xc, c), c))
            .min()
            .map(|(_, c)| c)
            .expect("nonempty");
        x.remove(c);
        order.push(c);
    }
    order
}

/// A 4-EJR subcommittee of size at most `floor(k/4)`, shared by both ends of a connection.
pub fn four_ejr_core(inst: &Instance) -> Result<CandidateSet, Error> {
    let four = Alpha::integer(4);
    let size = inst.k() / 4;
    let (out, overflow) = greedy_cohesive(inst, &four);
    if !overflow && out.core.count() <= size && check_ejr(inst, &out.core, &four, inst.k())?.is_none() {
        return Ok(out.core);
    }
    let total = binomial(inst.m() as u64, size as u64);
    if total > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge { what: "4-EJR core search", size: total, limit: EXHAUSTIVE_LIMIT });
    }
    for s in Subsets::new(inst.m(), size) {
        let x = CandidateSet::from_indices(inst.m(), s);
        if check_ejr(inst, &x, &four, inst.k())?.is_none() {
            return Ok(x);
        }
    }
    Err(Error::Construction("no 4-EJR subcommittee of size floor(k/4)".into()))
}

/// Walks `w` to a committee containing `core`.
fn side(inst: &Instance, w: &CandidateSet, core: &CandidateSet, pred: &Predicate) -> Result<Path, Error> {
    let four = Alpha::integer(4);
    let k = inst.k();
    let order = relative_removal_order(inst, w);
    let r = 2 * k / 3;
    let repair = remove_and_repair(
        w,
        &order[..r],
        |cur| {
            let wit = check_ejr(inst, cur, &four, k).ok().flatten()?;
            wit.common.iter().find(|&c| !cur.contains(c))
        },
        k,
    )?;
    for (i, &j) in repair.added_after.iter().enumerate() {
        if j > i + 1 {
            return Err(Error::Construction(format!("{j} repairs after {} removals", i + 1)));
        }
    }
    let mut b = PathBuilder::start(inst, pred, w)?;
    walk_adds(&mut b, &repair.added, &order, &CandidateSet::new(inst.m()))?;
    let mut keep = CandidateSet::from_indices(inst.m(), repair.added.iter().copied());
    let missing: Vec<usize> = core.difference(b.current()).to_vec();
    if let Some((&last, rest)) = missing.split_last() {
        keep.union_with(core);
        walk_adds(&mut b, rest, &order[..r], &keep)?;
        // the final addition completes the core, so any non-core member may go
        walk_adds(&mut b, &[last], &order, core)?;
    }
    Ok(b.finish())
}

/// Path of 4-EJR committees between two EJR committees.
pub fn connect_ejr_4approx(inst: &Instance, w: &CandidateSet, w2: &CandidateSet) -> Result<Path, Error> {
    let ejr = Predicate::ejr();
    require(inst, w, &ejr, "start")?;
    require(inst, w2, &ejr, "target")?;
    let pred = Predicate::Ejr(Alpha::integer(4));
    if w == w2 {
        return Ok(PathBuilder::start(inst, &pred, w)?.finish());
    }
    let core = four_ejr_core(inst)?;
    let a = side(inst, w, &core, &pred)?;
    let b = side(inst, w2, &core, &pred)?;
    let mut builder = PathBuilder::start(inst, &pred, w)?;
    builder.extend(&a)?;
    walk_to(&mut builder, b.last())?;
    builder.extend(&b.reversed())?;
    Ok(builder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_score_peaks_at_reference() {
        let inst = Instance::parse("4 4 2\n0 1\n0\n2 3\n3\n").unwrap();
        let w = inst.committee(&[0, 3]).unwrap();
        let x = inst.committee(&[1, 2]).unwrap();
        assert!(relative_pav_score(&inst, &w, &x) <= relative_pav_score(&inst, &w, &w));
        assert_eq!(relative_pav_score(&inst, &w, &w), Rational::from(4usize));
    }

    #[test]
    fn grid_rows_to_columns() {
        let mut rows = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                rows.push(vec![i, 4 + j]);
            }
        }
        let inst = Instance::new(16, 8, 4, &rows).unwrap();
        let w = inst.committee(&[0, 1, 2, 3]).unwrap();
        let w2 = inst.committee(&[4, 5, 6, 7]).unwrap();
        let p = connect_ejr_4approx(&inst, &w, &w2).unwrap();
        p.validate(&inst, &Predicate::Ejr(Alpha::integer(4))).unwrap();
        assert_eq!(p.last(), &w2);
    }
}
