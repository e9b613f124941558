//! JR, EJR and EJR+ checkers with witness extraction.
//!
//! A group is `ell`-large under `alpha` when `|group| * k >= alpha * ell * n`.
//! Every checker returns the lexicographically smallest witness: smallest
//! `ell` first, then the smallest candidate (or candidate set).

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::bitset::{count_and, count_words, CandidateSet, VoterSet};
use crate::{Error, Instance, Rational};

/// Approximation factor, at least 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alpha {
    value: Rational,
    num: u128,
    den: u128,
}

impl Alpha {
    pub fn new(value: Rational) -> Result<Alpha, Error> {
        if value < Rational::one() {
            return Err(Error::InvalidAlpha(format!("{value} is below 1")));
        }
        let (num, den) = value
            .to_u128_pair()
            .filter(|&(p, q)| p <= u64::MAX as u128 && q <= u64::MAX as u128)
            .ok_or_else(|| Error::InvalidAlpha(format!("{value} has too many digits")))?;
        Ok(Alpha { value, num, den })
    }

    pub fn one() -> Alpha {
        Alpha::integer(1)
    }

    pub fn integer(v: u64) -> Alpha {
        Alpha::new(Rational::from_integer(v as i64)).expect("integer alpha >= 1")
    }

    pub fn ratio(p: u64, q: u64) -> Result<Alpha, Error> {
        if q == 0 {
            return Err(Error::InvalidAlpha("zero denominator".into()));
        }
        Alpha::new(Rational::new(p as i64, q as i64))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// `size * k >= alpha * ell * n`.
    #[inline]
    pub fn is_large(&self, size: usize, ell: usize, n: usize, k: usize) -> bool {
        (size as u128) * (k as u128) * self.den >= self.num * (ell as u128) * (n as u128)
    }

    /// Smallest group size that is `ell`-large.
    pub fn min_group(&self, ell: usize, n: usize, k: usize) -> usize {
        let top = self.num * ell as u128 * n as u128;
        let bottom = self.den * k as u128;
        top.div_ceil(bottom).try_into().unwrap_or(usize::MAX)
    }

    /// `ceil(alpha * ell)`.
    pub fn ceil_times(&self, ell: usize) -> usize {
        (self.num * ell as u128).div_ceil(self.den) as usize
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

impl fmt::Debug for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alpha({})", self.value)
    }
}

impl FromStr for Alpha {
    type Err = Error;
    fn from_str(s: &str) -> Result<Alpha, Error> {
        let r: Rational = s.parse().map_err(|e: crate::rational::ParseRationalError| Error::InvalidAlpha(e.to_string()))?;
        Alpha::new(r)
    }
}

impl Serialize for Alpha {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value.serialize(s)
    }
}

/// How many commonly approved candidates an approximate cohesive group needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CohesionMode {
    /// `ell` common candidates for groups of size `alpha * ell * n / k`.
    #[default]
    SingleCommon,
    /// `ceil(alpha * ell)` common candidates for the same group size.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JrWitness {
    pub candidate: usize,
    pub group: VoterSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EjrWitness {
    pub ell: usize,
    pub common: CandidateSet,
    pub group: VoterSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EjrPlusWitness {
    pub candidate: usize,
    pub ell: usize,
    pub group: VoterSet,
}

/// Any witness, tagged with its axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Jr(JrWitness, Alpha),
    Ejr(EjrWitness, Alpha),
    EjrPlus(EjrPlusWitness),
}

/// Serialized witness form shared by all axioms.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessJson {
    pub axiom: &'static str,
    pub alpha: Rational,
    pub ell: usize,
    pub candidates: Vec<usize>,
    pub voters: Vec<usize>,
}

impl Witness {
    pub fn to_json(&self) -> WitnessJson {
        match self {
            Witness::Jr(w, a) => WitnessJson {
                axiom: "jr",
                alpha: a.value().clone(),
                ell: 1,
                candidates: vec![w.candidate],
                voters: w.group.to_vec(),
            },
            Witness::Ejr(w, a) => WitnessJson {
                axiom: "ejr",
                alpha: a.value().clone(),
                ell: w.ell,
                candidates: w.common.to_vec(),
                voters: w.group.to_vec(),
            },
            Witness::EjrPlus(w) => WitnessJson {
                axiom: "ejr+",
                alpha: Rational::one(),
                ell: w.ell,
                candidates: vec![w.candidate],
                voters: w.group.to_vec(),
            },
        }
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Lexicographically first `size`-subset of `pool` whose common support,
/// restricted to `eligible`, has at least `min_size` voters.
pub(crate) fn find_common(
    inst: &Instance,
    eligible: &[u64],
    size: usize,
    min_size: usize,
    pool: &[usize],
) -> Option<(Vec<usize>, Vec<u64>)> {
    if size == 0 || count_words(eligible) < min_size {
        return None;
    }
    let cands: Vec<usize> = pool
        .iter()
        .copied()
        .filter(|&c| inst.support_size(c) >= min_size && count_and(inst.support(c), eligible) >= min_size)
        .collect();
    if cands.len() < size {
        return None;
    }
    if size == 1 {
        let c = cands[0];
        let group = inst.support(c).iter().zip(eligible).map(|(a, b)| a & b).collect();
        return Some((vec![c], group));
    }
    let mut chosen = Vec::with_capacity(size);
    let mut stack: Vec<Vec<u64>> = vec![eligible.to_vec()];
    if descend(inst, &cands, 0, size, min_size, &mut chosen, &mut stack) {
        let group = stack.pop().expect("group on stack");
        Some((chosen.iter().map(|&i| cands[i]).collect(), group))
    } else {
        None
    }
}

fn descend(
    inst: &Instance,
    cands: &[usize],
    start: usize,
    size: usize,
    min_size: usize,
    chosen: &mut Vec<usize>,
    stack: &mut Vec<Vec<u64>>,
) -> bool {
    if chosen.len() == size {
        return true;
    }
    let need = size - chosen.len();
    for i in start..cands.len() {
        if cands.len() - i < need {
            break;
        }
        let top = stack.last().expect("nonempty stack");
        let next: Vec<u64> = top.iter().zip(inst.support(cands[i])).map(|(a, b)| a & b).collect();
        if count_words(&next) < min_size {
            continue;
        }
        chosen.push(i);
        stack.push(next);
        if descend(inst, cands, i + 1, size, min_size, chosen, stack) {
            return true;
        }
        stack.pop();
        chosen.pop();
    }
    false
}

/// Voters approving fewer than `ell` members, as raw words.
pub(crate) fn eligible_words(inst: &Instance, counts: &[u32], ell: usize) -> Vec<u64> {
    let mut words = vec![0u64; inst.voter_words()];
    for (v, &c) in counts.iter().enumerate() {
        if (c as usize) < ell {
            words[v / 64] |= 1u64 << (v % 64);
        }
    }
    words
}

/// Checks alpha-JR: a violation is a candidate with at least `alpha * n / k`
/// supporters, none of whom approves a member of `w`.
pub fn check_jr(inst: &Instance, w: &CandidateSet, alpha: &Alpha) -> Option<JrWitness> {
    check_jr_with(inst, w, alpha, CohesionMode::SingleCommon)
}

pub fn check_jr_with(inst: &Instance, w: &CandidateSet, alpha: &Alpha, mode: CohesionMode) -> Option<JrWitness> {
    let (n, k) = (inst.n(), inst.k());
    let g = alpha.min_group(1, n, k);
    if g > n {
        return None;
    }
    let cov = inst.coverage(w);
    let uncovered = cov.complement();
    let needed = match mode {
        CohesionMode::SingleCommon => 1,
        CohesionMode::Literal => alpha.ceil_times(1),
    };
    if needed == 1 {
        let cw = cov.words();
        for c in 0..inst.m() {
            if inst.support_size(c) < g {
                continue;
            }
            let s = inst.support(c);
            let cnt: usize = s.iter().zip(cw).map(|(a, b)| (a & !b).count_ones() as usize).sum();
            if cnt >= g {
                let group = VoterSet::from_words(n, &s.iter().zip(cw).map(|(a, b)| a & !b).collect::<Vec<_>>());
                return Some(JrWitness { candidate: c, group });
            }
        }
        return None;
    }
    let pool: Vec<usize> = (0..inst.m()).collect();
    find_common(inst, uncovered.words(), needed, g, &pool)
        .map(|(t, group)| JrWitness { candidate: t[0], group: VoterSet::from_words(n, &group) })
}

/// Checks alpha-EJR for every `ell` in `1..=max_ell`.
pub fn check_ejr(inst: &Instance, w: &CandidateSet, alpha: &Alpha, max_ell: usize) -> Result<Option<EjrWitness>, Error> {
    check_ejr_with(inst, w, alpha, max_ell, CohesionMode::SingleCommon)
}

pub fn check_ejr_with(
    inst: &Instance,
    w: &CandidateSet,
    alpha: &Alpha,
    max_ell: usize,
    mode: CohesionMode,
) -> Result<Option<EjrWitness>, Error> {
    let (n, k) = (inst.n(), inst.k());
    if max_ell == 0 || max_ell > k {
        return Err(Error::MaxEllOutOfRange { max_ell, k });
    }
    let counts = inst.approval_counts(w);
    let pool: Vec<usize> = (0..inst.m()).collect();
    for ell in 1..=max_ell {
        let g = alpha.min_group(ell, n, k);
        if g > n {
            break;
        }
        let size = match mode {
            CohesionMode::SingleCommon => ell,
            CohesionMode::Literal => alpha.ceil_times(ell).max(ell),
        };
        if size > inst.m() {
            break;
        }
        let eligible = eligible_words(inst, &counts, ell);
        if let Some((t, group)) = find_common(inst, &eligible, size, g, &pool) {
            return Ok(Some(EjrWitness {
                ell,
                common: CandidateSet::from_indices(inst.m(), t),
                group: VoterSet::from_words(n, &group),
            }));
        }
    }
    Ok(None)
}

/// Checks EJR+: for each `ell` and each `c` outside `w`, the supporters of
/// `c` approving fewer than `ell` members must not be `ell`-large.
pub fn check_ejr_plus(inst: &Instance, w: &CandidateSet) -> Option<EjrPlusWitness> {
    let (n, k) = (inst.n(), inst.k());
    let counts = inst.approval_counts(w);
    let one = Alpha::one();
    for ell in 1..=k {
        let g = one.min_group(ell, n, k);
        let eligible = eligible_words(inst, &counts, ell);
        if count_words(&eligible) < g {
            continue;
        }
        for c in 0..inst.m() {
            if w.contains(c) || inst.support_size(c) < g {
                continue;
            }
            if count_and(inst.support(c), &eligible) >= g {
                let group: Vec<u64> = inst.support(c).iter().zip(&eligible).map(|(a, b)| a & b).collect();
                return Some(EjrPlusWitness { candidate: c, ell, group: VoterSet::from_words(n, &group) });
            }
        }
    }
    None
}

/// Every candidate outside `w` that witnesses an EJR+ violation, with its smallest `ell`.
pub fn ejr_plus_violators(inst: &Instance, w: &CandidateSet) -> Vec<EjrPlusWitness> {
    let (n, k) = (inst.n(), inst.k());
    let counts = inst.approval_counts(w);
    let one = Alpha::one();
    let mut found: Vec<Option<EjrPlusWitness>> = vec![None; inst.m()];
    for ell in 1..=k {
        let g = one.min_group(ell, n, k);
        let eligible = eligible_words(inst, &counts, ell);
        for c in 0..inst.m() {
            if w.contains(c) || found[c].is_some() {
                continue;
            }
            if count_and(inst.support(c), &eligible) >= g {
                let group: Vec<u64> = inst.support(c).iter().zip(&eligible).map(|(a, b)| a & b).collect();
                found[c] = Some(EjrPlusWitness { candidate: c, ell, group: VoterSet::from_words(n, &group) });
            }
        }
    }
    found.into_iter().flatten().collect()
}

/// The axioms used as predicates throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    Jr(Alpha),
    Ejr(Alpha),
    EjrPlus,
}

impl Axiom {
    /// Full check, returning a tagged witness on violation.
    pub fn check(&self, inst: &Instance, w: &CandidateSet) -> Option<Witness> {
        match self {
            Axiom::Jr(a) => check_jr(inst, w, a).map(|x| Witness::Jr(x, a.clone())),
            Axiom::Ejr(a) => check_ejr(inst, w, a, inst.k()).expect("k is a valid max_ell").map(|x| Witness::Ejr(x, a.clone())),
            Axiom::EjrPlus => check_ejr_plus(inst, w).map(Witness::EjrPlus),
        }
    }

    pub fn holds(&self, inst: &Instance, w: &CandidateSet) -> bool {
        self.check(inst, w).is_none()
    }

    pub fn name(&self) -> String {
        match self {
            Axiom::Jr(a) if *a == Alpha::one() => "jr".into(),
            Axiom::Jr(a) => format!("{a}-jr"),
            Axiom::Ejr(a) if *a == Alpha::one() => "ejr".into(),
            Axiom::Ejr(a) => format!("{a}-ejr"),
            Axiom::EjrPlus => "ejr+".into(),
        }
    }
}
