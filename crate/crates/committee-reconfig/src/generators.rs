//! Instance families: the isolated-JR family, the 2-JR tightness family,
//! grids, small named fixtures and seeded random profiles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, ColexSubsets};
use crate::{CandidateSet, Error, Instance, InstanceBuilder};

/// Largest number of support words a generator will materialize.
pub const MATERIALIZE_LIMIT: u128 = 64_000_000;

/// Which family an instance came from, with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Isolated { k: usize },
    Tightness { r: usize },
    Grid { r: usize },
    Fixture { name: String },
    Random { n: usize, m: usize, k: usize, density: f64, seed: u64 },
}

/// A representative of one orbit of single swaps under the instance's symmetry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapClass {
    pub label: String,
    pub remove: usize,
    pub add: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    #[serde(flatten)]
    pub family: Family,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub automorphism_classes: Option<Vec<SwapClass>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCommittee {
    pub label: String,
    pub members: Vec<usize>,
}

/// A generated instance with its labelled committees.
#[derive(Debug, Clone)]
pub struct Generated {
    pub descriptor: FamilyDescriptor,
    pub instance: Instance,
    pub committees: Vec<NamedCommittee>,
}

impl Generated {
    fn new(family: Family, instance: Instance) -> Generated {
        Generated { descriptor: FamilyDescriptor { family, automorphism_classes: None }, instance, committees: Vec::new() }
    }

    fn with(mut self, label: &str, members: &[usize]) -> Generated {
        self.committees.push(NamedCommittee { label: label.into(), members: members.to_vec() });
        self
    }

    /// The committee labelled `label`, as a set.
    pub fn committee(&self, label: &str) -> Option<CandidateSet> {
        let c = self.committees.iter().find(|c| c.label == label)?;
        Some(CandidateSet::from_indices(self.instance.m(), c.members.iter().copied()))
    }

    /// Sidecar JSON: descriptor plus committees.
    pub fn sidecar(&self) -> serde_json::Value {
        serde_json::json!({ "descriptor": self.descriptor, "committees": self.committees })
    }
}

/// Position of a sorted subset in colexicographic order.
pub fn colex_rank(subset: &[usize]) -> u128 {
    subset.iter().enumerate().map(|(j, &x)| binomial(x as u64, j as u64 + 1)).sum()
}

/// Inverse of [`colex_rank`] for `r`-subsets.
pub fn colex_unrank(mut rank: u128, r: usize) -> Vec<usize> {
    let mut out = vec![0; r];
    for j in (0..r).rev() {
        let mut x = j;
        while binomial(x as u64 + 1, j as u64 + 1) <= rank {
            x += 1;
        }
        rank -= binomial(x as u64, j as u64 + 1);
        out[j] = x;
    }
    out
}

fn guard(what: &'static str, n: usize, m: u128) -> Result<usize, Error> {
    let words = m.saturating_mul(crate::bitset::words_for(n) as u128);
    if words > MATERIALIZE_LIMIT {
        return Err(Error::TooLarge { what, size: words, limit: MATERIALIZE_LIMIT });
    }
    Ok(m as usize)
}

/// Index layout of the isolated-JR family.
///
/// Voters `0..k²` form `N1` and `k²..k³` form `N2`. Candidate `i < k` is
/// approved by voters `ik..ik+k`. The remaining candidates `d(i, S)` are
/// approved by voter `i` of `N1` and the `(k²-1)`-subset `S` of `N2`; they are
/// ordered by `i`, then by `S` in colex order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IsolatedLayout {
    pub k: usize,
}

impl IsolatedLayout {
    pub fn n(&self) -> usize {
        self.k.pow(3)
    }

    pub fn n1(&self) -> usize {
        self.k * self.k
    }

    /// Number of `S` per `N1` voter.
    pub fn per_voter(&self) -> u128 {
        binomial((self.n() - self.n1()) as u64, self.n1() as u64 - 1)
    }

    pub fn m(&self) -> u128 {
        (self.n1() as u128).saturating_mul(self.per_voter()).saturating_add(self.k as u128)
    }

    /// Index of `d(i, S)`; `s` lists positions within `N2`, sorted.
    pub fn d_index(&self, i: usize, s: &[usize]) -> usize {
        self.k + i * self.per_voter() as usize + colex_rank(s) as usize
    }

    /// Inverse of [`IsolatedLayout::d_index`].
    pub fn decode(&self, c: usize) -> Option<(usize, Vec<usize>)> {
        let off = c.checked_sub(self.k)?;
        let per = self.per_voter() as usize;
        Some((off / per, colex_unrank((off % per) as u128, self.n1() - 1)))
    }

    /// Orbit of the swap removing `c_i` and adding `add`: 0 when the added
    /// candidate's `N1` voter lies in `c_i`'s block, 1 otherwise.
    pub fn swap_class(&self, remove: usize, add: usize) -> usize {
        let i = (add - self.k) / self.per_voter() as usize;
        usize::from(i / self.k != remove)
    }
}

/// The isolated-JR family: `W = C1` satisfies JR and every other JR committee
/// is at distance `k-1` or more.
pub fn gen_isolated(k: usize) -> Result<Generated, Error> {
    if k < 3 {
        return Err(Error::InvalidInput(format!("isolated family needs k >= 3, got {k}")));
    }
    if k > 1024 {
        return Err(Error::TooLarge { what: "isolated family k", size: k as u128, limit: 1024 });
    }
    let lay = IsolatedLayout { k };
    let (n, n1) = (lay.n(), lay.n1());
    let m = guard("isolated family", n, lay.m())?;
    let mut b = InstanceBuilder::new(n, m, k);
    for i in 0..k {
        for v in i * k..(i + 1) * k {
            b.approve(v, i);
        }
    }
    let mut c = k;
    for i in 0..n1 {
        for s in ColexSubsets::new(n - n1, n1 - 1) {
            b.approve(i, c);
            for x in s {
                b.approve(n1 + x, c);
            }
            c += 1;
        }
    }
    debug_assert_eq!(c, m);
    let first: Vec<usize> = (0..n1 - 1).collect();
    let classes = vec![
        SwapClass { label: "same-block".into(), remove: 0, add: lay.d_index(0, &first) },
        SwapClass { label: "other-block".into(), remove: 0, add: lay.d_index(k, &first) },
    ];
    let mut g = Generated::new(Family::Isolated { k }, b.build()?).with("W", &(0..k).collect::<Vec<_>>());
    g.descriptor.automorphism_classes = Some(classes);
    Ok(g)
}

/// Index layout of the tightness family.
///
/// Voters `0..r(r+1)²` form `N1`, the last `r(r+1)` form `N2`. Candidate
/// `i < k` is approved by voters `i(r+1)..(i+1)(r+1)`. The remaining
/// candidates `d(A, B)` are approved by the `r`-subsets `A` of `N1` and `B`
/// of `N2`, ordered by `A` then `B`, both colex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightnessLayout {
    pub r: usize,
}

impl TightnessLayout {
    pub fn k(&self) -> usize {
        self.r * (self.r + 1)
    }

    pub fn n1(&self) -> usize {
        self.r * (self.r + 1) * (self.r + 1)
    }

    pub fn n(&self) -> usize {
        self.n1() + self.k()
    }

    fn inner(&self) -> u128 {
        binomial(self.k() as u64, self.r as u64)
    }

    pub fn c2_count(&self) -> u128 {
        binomial(self.n1() as u64, self.r as u64).saturating_mul(self.inner())
    }

    pub fn m(&self) -> u128 {
        self.c2_count().saturating_add(self.k() as u128)
    }

    /// Index of `d(A, B)`; `a` and `b` list positions within `N1` and `N2`, sorted.
    pub fn d_index(&self, a: &[usize], b: &[usize]) -> usize {
        self.k() + (colex_rank(a) * self.inner() + colex_rank(b)) as usize
    }

    /// The approximation factor `2r/(r+2)` as `(num, den)`.
    pub fn alpha(&self) -> (u64, u64) {
        (2 * self.r as u64, self.r as u64 + 2)
    }
}

/// The tightness family: `W = C1` and `W2 ⊇ D` both satisfy JR, while every
/// committee with exactly `r` members from `C2` violates `2r/(r+2)`-JR.
pub fn gen_tightness(r: usize) -> Result<Generated, Error> {
    if r < 3 {
        return Err(Error::InvalidInput(format!("tightness family needs r >= 3, got {r}")));
    }
    if r > 1024 {
        return Err(Error::TooLarge { what: "tightness family r", size: r as u128, limit: 1024 });
    }
    let lay = TightnessLayout { r };
    let (n, n1, k) = (lay.n(), lay.n1(), lay.k());
    let m = guard("tightness family", n, lay.m())?;
    let mut b = InstanceBuilder::new(n, m, k);
    for i in 0..k {
        for v in i * (r + 1)..(i + 1) * (r + 1) {
            b.approve(v, i);
        }
    }
    let n2_subsets: Vec<Vec<usize>> = ColexSubsets::new(k, r).collect();
    let mut c = k;
    for a in ColexSubsets::new(n1, r) {
        for s in &n2_subsets {
            for &v in &a {
                b.approve(v, c);
            }
            for &x in s {
                b.approve(n1 + x, c);
            }
            c += 1;
        }
    }
    debug_assert_eq!(c, m);
    let first: Vec<usize> = (0..r).collect();
    let mut w2: Vec<usize> = (0..=r).map(|blk| lay.d_index(&first, &(blk * r..(blk + 1) * r).collect::<Vec<_>>())).collect();
    w2.extend(0..k - (r + 1));
    w2.sort_unstable();
    Ok(Generated::new(Family::Tightness { r }, b.build()?)
        .with("W", &(0..k).collect::<Vec<_>>())
        .with("W2", &w2))
}

/// `r×r` grid: voter `ir+j` approves row candidate `i` and column candidate `r+j`.
pub fn gen_grid(r: usize) -> Result<Generated, Error> {
    if r < 2 {
        return Err(Error::InvalidInput(format!("grid needs r >= 2, got {r}")));
    }
    let mut b = InstanceBuilder::new(r * r, 2 * r, r);
    for i in 0..r {
        for j in 0..r {
            b.approve(i * r + j, i);
            b.approve(i * r + j, r + j);
        }
    }
    Ok(Generated::new(Family::Grid { r }, b.build()?)
        .with("rows", &(0..r).collect::<Vec<_>>())
        .with("cols", &(r..2 * r).collect::<Vec<_>>()))
}

pub const FIXTURES: [&str; 4] = ["example1", "ccav_table", "vi_table", "civi_table"];

/// Small named instances with their labelled committees.
///
/// * `example1`: two JR committees `W`, `W2` joined by the path `p0..p3`;
///   `not_jr` fails JR and `W2` fails EJR.
/// * `ccav_table`: `ccav` is the CCAV committee, none of whose members is affordable.
/// * `vi_table`: a VI profile where `W` and `W2` are JR but not joined by a JR path of length 2.
/// * `civi_table`: a CI and VI profile where `W` and `W2` are EJR but not joined by an EJR path of length 2.
pub fn gen_fixture(name: &str) -> Result<Generated, Error> {
    let fam = Family::Fixture { name: name.into() };
    Ok(match name {
        "example1" => {
            let inst = Instance::parse("9 6 3\n0\n0 1\n0 1\n2 3 4\n2 3 4\n2 3 4\n2 3 4\n2 3 5\n2 3 5\n")?;
            Generated::new(fam, inst)
                .with("W", &[0, 2, 3])
                .with("W2", &[1, 4, 5])
                .with("not_jr", &[2, 3, 4])
                .with("p0", &[0, 2, 3])
                .with("p1", &[1, 2, 3])
                .with("p2", &[1, 3, 4])
                .with("p3", &[1, 4, 5])
        }
        "ccav_table" => {
            let inst = Instance::parse("7 4 3\n0 3\n0\n1 3\n1\n2 3\n2\n\n")?;
            Generated::new(fam, inst).with("ccav", &[0, 1, 2])
        }
        "vi_table" => {
            let inst = Instance::parse("6 6 2\n0 4\n0 4\n2 4 5\n3 4 5\n1 5\n1 5\n")?;
            Generated::new(fam, inst).with("W", &[0, 1]).with("W2", &[2, 3])
        }
        "civi_table" => {
            let inst = Instance::parse("6 7 3\n0 1 2 3 4\n0 1 2 3 4\n0 1 2 3 4\n2 3 4 5 6\n2 3 4 5 6\n2 3 4 5 6\n")?;
            Generated::new(fam, inst).with("W", &[0, 1, 2]).with("W2", &[2, 5, 6])
        }
        _ => return Err(Error::InvalidInput(format!("unknown fixture {name:?}; expected one of {}", FIXTURES.join(", ")))),
    })
}

/// Each voter approves each candidate independently with probability
/// `density`, drawn voter by voter from ChaCha8 seeded with `seed`.
pub fn gen_random(n: usize, m: usize, k: usize, density: f64, seed: u64) -> Result<Generated, Error> {
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidInput(format!("density must lie in (0, 1], got {density}")));
    }
    if n == 0 || k == 0 || k > m {
        return Err(Error::InvalidInput(format!("need n >= 1 and 1 <= k <= m (n = {n}, m = {m}, k = {k})")));
    }
    guard("random instance", n, m as u128)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = InstanceBuilder::new(n, m, k);
    for v in 0..n {
        for c in 0..m {
            if rng.gen_bool(density) {
                b.approve(v, c);
            }
        }
    }
    Ok(Generated::new(Family::Random { n, m, k, density, seed }, b.build()?))
}
