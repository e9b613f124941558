//! Small combinatorics helpers: binomials, subset enumeration, worker counts.

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Iterator over the `r`-subsets of `0..n` in lexicographic order.
pub struct Subsets {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, r: usize) -> Subsets {
        Subsets { n, cur: (0..r).collect(), done: r > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let r = self.cur.len();
        let mut i = r;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cur[i] < self.n - r + i {
                self.cur[i] += 1;
                for j in i + 1..r {
                    self.cur[j] = self.cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Iterator over the `r`-subsets of `0..n` in colexicographic order
/// (sorted by largest element, then next largest, ...).
pub struct ColexSubsets {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl ColexSubsets {
    pub fn new(n: usize, r: usize) -> ColexSubsets {
        ColexSubsets { n, cur: (0..r).collect(), done: r > n }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let r = self.cur.len();
        // Advance the lowest position that can move without colliding.
        let mut i = 0;
        loop {
            if i == r {
                self.done = true;
                break;
            }
            let limit = if i + 1 < r { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for j in 0..i {
                    self.cur[j] = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Worker count for parallel enumeration. `COMMITTEE_RECONFIG_THREADS` caps it.
pub fn worker_count() -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    match std::env::var("COMMITTEE_RECONFIG_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        Some(cap) if cap >= 1 => avail.min(cap),
        _ => avail,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(18, 8), 43_758);
        assert_eq!(binomial(48, 3) * binomial(12, 3), 3_805_120);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }

    #[test]
    fn lexicographic_subsets() {
        let all: Vec<_> = Subsets::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Subsets::new(3, 0).count(), 1);
        assert_eq!(Subsets::new(2, 3).count(), 0);
    }

    #[test]
    fn colex_subsets() {
        let all: Vec<_> = ColexSubsets::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3], vec![2, 3]]);
        assert_eq!(ColexSubsets::new(18, 8).count() as u128, binomial(18, 8));
    }
}
