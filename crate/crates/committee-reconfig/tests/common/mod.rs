//! Independent oracles and random instance helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use committee_reconfig::{CandidateSet, Instance, InstanceBuilder};
use rand::seq::SliceRandom;
use rand::Rng;

/// Plain ballots, read once from the instance.
pub struct Ballots {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub ballots: Vec<Vec<usize>>,
}

impl Ballots {
    pub fn of(inst: &Instance) -> Ballots {
        Ballots { n: inst.n(), m: inst.m(), k: inst.k(), ballots: (0..inst.n()).map(|v| inst.ballot(v)).collect() }
    }

    fn masks(&self) -> Vec<u64> {
        self.ballots.iter().map(|b| b.iter().fold(0u64, |a, &c| a | 1 << c)).collect()
    }
}

/// Per voter group (bitmask over voters): common approvals and group size.
/// Built by the recurrence on the lowest voter in the group.
pub struct Groups {
    pub common: Vec<u64>,
    pub size: Vec<u32>,
}

pub fn groups(b: &Ballots) -> Groups {
    assert!(b.n <= 16 && b.m <= 64);
    let masks = b.masks();
    let total = 1usize << b.n;
    let mut common = vec![u64::MAX; total];
    let mut size = vec![0u32; total];
    for s in 1..total {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        common[s] = common[rest] & masks[low];
        size[s] = size[rest] + 1;
    }
    Groups { common, size }
}

/// Which of (alpha-JR, alpha-EJR, EJR+) `w` satisfies, by enumerating every voter group.
/// For a group `S`, EJR asks for `ell` with `|S| k den >= num ell n`,
/// `ell <= |common(S)|` and every voter below `ell`; the best `ell` is the
/// largest one allowed, so a group violates iff its largest member count is below it.
pub fn brute_axioms(b: &Ballots, g: &Groups, w: &[usize], num: u64, den: u64) -> (bool, bool, bool) {
    let wmask = w.iter().fold(0u64, |a, &c| a | 1 << c);
    let counts: Vec<u32> = b.masks().iter().map(|m| (m & wmask).count_ones()).collect();
    let total = 1usize << b.n;
    let mut maxc = vec![0u32; total];
    let (n, k) = (b.n as u64, b.k as u64);
    let (mut jr, mut ejr, mut ejrp) = (true, true, true);
    for s in 1..total {
        let low = s.trailing_zeros() as usize;
        maxc[s] = maxc[s & (s - 1)].max(counts[low]);
        let common = g.common[s];
        if common == 0 {
            continue;
        }
        let size = g.size[s] as u64;
        // largest ell with size*k*den >= num*ell*n
        let ell_alpha = (size * k * den / (num * n)) as u32;
        let ell_ejr = ell_alpha.min(common.count_ones());
        if ell_alpha >= 1 && maxc[s] == 0 {
            jr = false;
        }
        if maxc[s] < ell_ejr {
            ejr = false;
        }
        let ell_plus = (size * k / n) as u32;
        if common & !wmask != 0 && maxc[s] < ell_plus {
            ejrp = false;
        }
    }
    (jr, ejr, ejrp)
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(n, r, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, r, 0, &mut Vec::new(), &mut out);
    out
}

pub fn sym_diff(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| !b.contains(x)).count()
}

/// Every committee satisfying `pred`, by enumeration.
pub fn all_satisfying(inst: &Instance, pred: impl Fn(&CandidateSet) -> bool) -> Vec<CandidateSet> {
    combinations(inst.m(), inst.k())
        .into_iter()
        .map(|c| CandidateSet::from_indices(inst.m(), c))
        .filter(|w| pred(w))
        .collect()
}

/// Shortest-path length over the explicit graph of satisfying committees.
pub fn naive_distance(nodes: &[CandidateSet], from: &CandidateSet, to: &CandidateSet) -> Option<usize> {
    let idx: HashMap<&CandidateSet, usize> = nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let vecs: Vec<Vec<usize>> = nodes.iter().map(|w| w.to_vec()).collect();
    let adj: Vec<Vec<usize>> = (0..nodes.len())
        .map(|i| (0..nodes.len()).filter(|&j| sym_diff(&vecs[i], &vecs[j]) == 1).collect())
        .collect();
    let (s, t) = (*idx.get(from)?, *idx.get(to)?);
    let mut dist = vec![usize::MAX; nodes.len()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    (dist[t] != usize::MAX).then_some(dist[t])
}

/// Each cell approved independently with probability `p`.
pub fn random_instance(rng: &mut impl Rng, n: usize, m: usize, k: usize, p: f64) -> Instance {
    let mut b = InstanceBuilder::new(n, m, k);
    for v in 0..n {
        for c in 0..m {
            if rng.gen_bool(p) {
                b.approve(v, c);
            }
        }
    }
    b.build().unwrap()
}

/// A profile where every ballot is an interval of a hidden candidate order.
pub fn random_ci(rng: &mut impl Rng, n: usize, m: usize, k: usize) -> Instance {
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut b = InstanceBuilder::new(n, m, k);
    for v in 0..n {
        let lo = rng.gen_range(0..m);
        let len = rng.gen_range(1..=(m - lo).min(4));
        for &c in &perm[lo..lo + len] {
            b.approve(v, c);
        }
    }
    b.build().unwrap()
}

/// A profile where every support is an interval of a hidden voter order.
pub fn random_vi(rng: &mut impl Rng, n: usize, m: usize, k: usize) -> Instance {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut b = InstanceBuilder::new(n, m, k);
    for c in 0..m {
        let lo = rng.gen_range(0..n);
        let len = rng.gen_range(1..=(n - lo).min(n / 2 + 1));
        for &v in &perm[lo..lo + len] {
            b.approve(v, c);
        }
    }
    b.build().unwrap()
}

/// Whether some ordering of `0..universe` makes every set contiguous, by trying all of them.
pub fn brute_consecutive(universe: usize, sets: &[Vec<usize>]) -> bool {
    fn permute(order: &mut Vec<usize>, i: usize, sets: &[Vec<usize>]) -> bool {
        if i == order.len() {
            let mut pos = vec![0; order.len()];
            for (p, &x) in order.iter().enumerate() {
                pos[x] = p;
            }
            return sets.iter().all(|s| {
                s.is_empty() || {
                    let lo = s.iter().map(|&x| pos[x]).min().unwrap();
                    let hi = s.iter().map(|&x| pos[x]).max().unwrap();
                    hi - lo + 1 == s.len()
                }
            });
        }
        for j in i..order.len() {
            order.swap(i, j);
            if permute(order, i + 1, sets) {
                return true;
            }
            order.swap(i, j);
        }
        false
    }
    permute(&mut (0..universe).collect(), 0, sets)
}

/// Proptest strategy over small profiles.
pub fn arb_instance(max_n: usize, max_m: usize, max_k: usize) -> impl proptest::strategy::Strategy<Value = Instance> {
    use proptest::prelude::*;
    (1..=max_n, 1..=max_m)
        .prop_flat_map(move |(n, m)| (Just(n), Just(m), 1..=m.min(max_k), proptest::collection::vec(any::<bool>(), n * m)))
        .prop_map(|(n, m, k, cells)| {
            let mut b = InstanceBuilder::new(n, m, k);
            for v in 0..n {
                for c in 0..m {
                    if cells[v * m + c] {
                        b.approve(v, c);
                    }
                }
            }
            b.build().unwrap()
        })
}
