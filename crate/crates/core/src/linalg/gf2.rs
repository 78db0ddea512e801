//! Word-packed GF(2) vectors and elimination.

use std::fmt;

/// A fixed-length vector over GF(2), 64 coordinates per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, idx: I) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i >> 6] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.words[i >> 6] |= 1 << (i & 63);
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i >> 6] ^= 1 << (i & 63);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// XOR from word `from` onward; callers know the lower words of `other` are zero.
    #[inline]
    fn xor_tail(&mut self, other: &BitVec, from: usize) {
        for (a, b) in self.words[from..].iter_mut().zip(&other.words[from..]) {
            *a ^= b;
        }
    }

    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from_word(0)
    }

    #[inline]
    fn first_one_from_word(&self, w0: usize) -> Option<usize> {
        self.words[w0..]
            .iter()
            .position(|&w| w != 0)
            .map(|k| ((w0 + k) << 6) + self.words[w0 + k].trailing_zeros() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some((k << 6) + t)
            })
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank of a set of vectors of length `len`, each given by its support.
pub(crate) fn rank_dense(vectors: &[Vec<usize>], len: usize) -> usize {
    // pivot[c] = reduced vector whose leading one is at c
    let mut pivot: Vec<Option<BitVec>> = vec![None; len];
    let mut rank = 0;
    for support in vectors {
        if support.is_empty() {
            continue;
        }
        let mut v = BitVec::from_indices(len, support.iter().copied());
        let mut w0 = 0;
        while let Some(lead) = v.first_one_from_word(w0) {
            w0 = lead >> 6;
            match &pivot[lead] {
                Some(p) => v.xor_tail(p, w0),
                None => {
                    pivot[lead] = Some(v);
                    rank += 1;
                    break;
                }
            }
        }
        if rank == len {
            break;
        }
    }
    rank
}

/// Rank by column reduction on sorted index lists, pivoting on the largest
/// index. Used when packed rows would not fit in memory.
pub(crate) fn rank_sparse(vectors: Vec<Vec<usize>>) -> usize {
    use std::collections::HashMap;
    let mut pivot: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut rank = 0;
    for mut v in vectors {
        v.sort_unstable();
        dedup_pairs(&mut v);
        while let Some(&low) = v.last() {
            match pivot.get(&low) {
                Some(p) => v = sym_diff(&v, p),
                None => {
                    pivot.insert(low, v);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn dedup_pairs(v: &mut Vec<usize>) {
    // a repeated index cancels over GF(2)
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for &x in v.iter() {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    *v = out;
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() && k < b.len() {
        match a[i].cmp(&b[k]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[k]);
                k += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                k += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[k..]);
    out
}

/// In-place reduced row echelon form over GF(2). Returns `(row, pivot column)`.
pub(crate) fn rref(rows: &mut [BitVec], cols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
            continue;
        };
        rows.swap(next, p);
        let (head, tail) = rows.split_at_mut(next);
        let (pivot_row, rest) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(rest.iter_mut()) {
            if row.get(c) {
                row.xor_assign(pivot_row);
            }
        }
        pivots.push((next, c));
        next += 1;
    }
    pivots
}
