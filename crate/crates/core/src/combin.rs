//! Lexicographic enumeration of combinations and set partitions.

use crate::num::binomial;

/// k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] != i + self.n - k {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let mut c = next;
        loop {
            let count = binomial(n - c - 1, k - slot - 1);
            if rank < count {
                break;
            }
            rank -= count;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

/// Set partitions of `0..n` into exactly `r` nonempty blocks, as
/// restricted-growth strings (`labels[0] = 0`, each new label is one more
/// than the current maximum).
pub fn partitions_into(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(labels: &mut Vec<usize>, max: usize, n: usize, r: usize, out: &mut Vec<Vec<usize>>) {
        let i = labels.len();
        if i == n {
            if max + 1 == r {
                out.push(labels.clone());
            }
            return;
        }
        // Not enough items left to open the remaining blocks.
        if r - (max + 1) > n - i {
            return;
        }
        for l in 0..=(max + 1).min(r - 1) {
            labels.push(l);
            rec(labels, max.max(l), n, r, out);
            labels.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || r == 0 || r > n {
        return out;
    }
    let mut labels = vec![0];
    rec(&mut labels, 0, n, r, &mut out);
    out
}

/// Stirling number of the second kind `S(n, r)`, saturating.
pub fn stirling2(n: usize, r: usize) -> u128 {
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for i in 1..=n {
        for k in (1..=r.min(i)).rev() {
            row[k] = (k as u128).saturating_mul(row[k]).saturating_add(row[k - 1]);
        }
        row[0] = 0;
    }
    row[r]
}
