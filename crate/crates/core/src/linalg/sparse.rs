//! Rank of large sparse matrices: singleton peeling, splitting into
//! connected components, then elimination on what remains.
//!
//! Peeling never changes matrix values: a column with a single live entry
//! at row `r` clears row `r` from every other column by column operations
//! that touch no other row, so both the row and the column can be dropped
//! and the rank goes up by one. Rows with one live entry are symmetric.

use std::collections::HashMap;

use super::gf2;
use crate::field::{Field, Scalar};

/// Column with entries `(row, value)`; rows may repeat (values then add).
pub(crate) type Column = Vec<(u32, Scalar)>;

/// Dense elimination is used when the packed core fits in this many bytes.
const DENSE_BYTES: usize = 1 << 29;

/// Compressed sparse columns with normalized entries (sorted rows, no
/// zeros, no repeats).
#[derive(Default)]
pub(crate) struct Csc {
    ptr: Vec<usize>,
    idx: Vec<u32>,
    val: Vec<Scalar>,
}

impl Csc {
    pub(crate) fn new() -> Self {
        Csc {
            ptr: vec![0],
            idx: Vec::new(),
            val: Vec::new(),
        }
    }

    /// Appends a column, combining repeated rows.
    pub(crate) fn push(&mut self, field: Field, col: &mut Column) {
        col.sort_unstable_by_key(|t| t.0);
        let start = self.idx.len();
        for &(r, v) in col.iter() {
            if self.idx.len() > start && *self.idx.last().expect("nonempty") == r {
                let last = self.val.last_mut().expect("nonempty");
                *last = field.add(*last, v);
            } else {
                self.idx.push(r);
                self.val.push(v);
            }
        }
        // drop entries that cancelled
        let mut w = start;
        for k in start..self.idx.len() {
            if self.val[k] != 0 {
                self.idx[w] = self.idx[k];
                self.val[w] = self.val[k];
                w += 1;
            }
        }
        self.idx.truncate(w);
        self.val.truncate(w);
        self.ptr.push(w);
    }

    pub(crate) fn ncols(&self) -> usize {
        self.ptr.len() - 1
    }

    pub(crate) fn nnz(&self) -> usize {
        self.idx.len()
    }

    #[inline]
    fn col(&self, c: usize) -> (&[u32], &[Scalar]) {
        let r = self.ptr[c]..self.ptr[c + 1];
        (&self.idx[r.clone()], &self.val[r])
    }
}

/// Rank of the matrix with `nrows` rows and the given columns.
pub(crate) fn rank_columns(field: Field, nrows: usize, cols: Vec<Column>) -> usize {
    let mut m = Csc::new();
    for mut c in cols {
        m.push(field, &mut c);
    }
    rank_csc(field, nrows, &m)
}

pub(crate) fn rank_csc(field: Field, nrows: usize, m: &Csc) -> usize {
    let (rank, core_rows, core_cols) = peel(nrows, m);
    if core_cols.is_empty() || core_rows.is_empty() {
        return rank;
    }
    rank + core_rank(field, m, &core_rows, &core_cols)
}

/// Returns the number of peeled pivots and the surviving rows and columns.
fn peel(nrows: usize, m: &Csc) -> (usize, Vec<u32>, Vec<u32>) {
    let ncols = m.ncols();
    // row → columns, flat
    let mut row_ptr = vec![0usize; nrows + 1];
    for &r in &m.idx {
        row_ptr[r as usize + 1] += 1;
    }
    for r in 0..nrows {
        row_ptr[r + 1] += row_ptr[r];
    }
    let mut fill = row_ptr.clone();
    let mut row_idx = vec![0u32; m.nnz()];
    for c in 0..ncols {
        for &r in m.col(c).0 {
            row_idx[fill[r as usize]] = c as u32;
            fill[r as usize] += 1;
        }
    }
    drop(fill);
    let mut col_cnt: Vec<u32> = (0..ncols).map(|c| (m.ptr[c + 1] - m.ptr[c]) as u32).collect();
    let mut row_cnt: Vec<u32> = (0..nrows).map(|r| (row_ptr[r + 1] - row_ptr[r]) as u32).collect();
    let mut col_alive = vec![true; ncols];
    let mut row_alive = vec![true; nrows];
    // entries: (is_column, index)
    let mut queue: Vec<(bool, u32)> = Vec::new();
    queue.extend((0..ncols).filter(|&c| col_cnt[c] == 1).map(|c| (true, c as u32)));
    queue.extend((0..nrows).filter(|&r| row_cnt[r] == 1).map(|r| (false, r as u32)));
    let mut rank = 0;
    while let Some((is_col, k)) = queue.pop() {
        let k = k as usize;
        if is_col {
            if !col_alive[k] || col_cnt[k] != 1 {
                continue;
            }
            let r = m.col(k).0.iter().map(|&r| r as usize).find(|&r| row_alive[r]).expect("one live row");
            rank += 1;
            col_alive[k] = false;
            row_alive[r] = false;
            for &c2 in &row_idx[row_ptr[r]..row_ptr[r + 1]] {
                let c2 = c2 as usize;
                if col_alive[c2] {
                    col_cnt[c2] -= 1;
                    if col_cnt[c2] == 1 {
                        queue.push((true, c2 as u32));
                    }
                }
            }
        } else {
            if !row_alive[k] || row_cnt[k] != 1 {
                continue;
            }
            let c = row_idx[row_ptr[k]..row_ptr[k + 1]]
                .iter()
                .map(|&c| c as usize)
                .find(|&c| col_alive[c])
                .expect("one live column");
            rank += 1;
            row_alive[k] = false;
            col_alive[c] = false;
            for &r2 in m.col(c).0 {
                let r2 = r2 as usize;
                if row_alive[r2] {
                    row_cnt[r2] -= 1;
                    if row_cnt[r2] == 1 {
                        queue.push((false, r2 as u32));
                    }
                }
            }
        }
    }
    let core_cols: Vec<u32> = (0..ncols)
        .filter(|&c| col_alive[c] && col_cnt[c] > 0)
        .map(|c| c as u32)
        .collect();
    let core_rows: Vec<u32> = (0..nrows)
        .filter(|&r| row_alive[r] && row_cnt[r] > 0)
        .map(|r| r as u32)
        .collect();
    (rank, core_rows, core_cols)
}

fn core_rank(field: Field, m: &Csc, core_rows: &[u32], core_cols: &[u32]) -> usize {
    let mut local = HashMap::with_capacity(core_rows.len());
    for (i, &r) in core_rows.iter().enumerate() {
        local.insert(r, i);
    }
    let vectors: Vec<Vec<(usize, Scalar)>> = core_cols
        .iter()
        .map(|&c| {
            let (idx, val) = m.col(c as usize);
            idx.iter()
                .zip(val)
                .filter_map(|(r, &v)| local.get(r).map(|&i| (i, v)))
                .collect()
        })
        .collect();
    let (n, len) = (vectors.len(), core_rows.len());
    if field.is_binary() {
        let supports: Vec<Vec<usize>> = vectors.into_iter().map(|v| v.into_iter().map(|t| t.0).collect()).collect();
        if len.min(n).saturating_mul(len.max(n).div_ceil(8)) <= DENSE_BYTES {
            let (supports, len) = if len <= n { (supports, len) } else { (transpose(&supports, len), n) };
            gf2::rank_dense(&supports, len)
        } else {
            gf2::rank_sparse(supports)
        }
    } else {
        rank_sparse_mod_p(field, vectors)
    }
}

fn transpose(vectors: &[Vec<usize>], len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); len];
    for (c, v) in vectors.iter().enumerate() {
        for &r in v {
            out[r].push(c);
        }
    }
    out
}

/// Column reduction mod p pivoting on the largest index.
fn rank_sparse_mod_p(field: Field, vectors: Vec<Vec<(usize, Scalar)>>) -> usize {
    let mut pivot: HashMap<usize, Vec<(usize, Scalar)>> = HashMap::new();
    let mut rank = 0;
    for mut v in vectors {
        v.sort_unstable_by_key(|t| t.0);
        while let Some(&(low, x)) = v.last() {
            match pivot.get(&low) {
                Some(p) => {
                    // p has a 1 at `low`
                    v = field.axpy(&v, field.neg(x), p);
                }
                None => {
                    pivot.insert(low, field.scale(field.inv(x), &v));
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Disjoint-set forest over row indices.
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Rank of a matrix produced column by column by `gen`, holding at most
/// about `budget` nonzeros at a time. When everything fits, columns are
/// generated once; otherwise a first pass finds the connected components
/// of the row graph and later passes rank batches of components.
pub(crate) fn rank_streamed<G>(field: Field, nrows: usize, ncols: usize, gen: G, budget: usize) -> usize
where
    G: Fn(usize, &mut Column),
{
    if nrows == 0 || ncols == 0 {
        return 0;
    }
    let mut buf = Vec::new();
    let mut m = Csc::new();
    let mut fits = true;
    for c in 0..ncols {
        buf.clear();
        gen(c, &mut buf);
        m.push(field, &mut buf);
        if m.nnz() > budget {
            fits = false;
            break;
        }
    }
    if fits {
        return rank_csc(field, nrows, &m);
    }
    drop(m);
    let mut uf = UnionFind::new(nrows);
    let mut comp_nnz = vec![0usize; nrows];
    for c in 0..ncols {
        buf.clear();
        gen(c, &mut buf);
        if let Some(&(r0, _)) = buf.first() {
            for &(r, _) in &buf[1..] {
                uf.union(r0, r);
            }
        }
    }
    for c in 0..ncols {
        buf.clear();
        gen(c, &mut buf);
        if let Some(&(r0, _)) = buf.first() {
            comp_nnz[uf.find(r0) as usize] += buf.len();
        }
    }
    // batches of whole components, in root order
    let mut batch_of = vec![u32::MAX; nrows];
    let (mut batch, mut used) = (0u32, 0usize);
    for root in 0..nrows {
        let nnz = comp_nnz[root];
        if nnz == 0 {
            continue;
        }
        if used > 0 && used + nnz > budget {
            batch += 1;
            used = 0;
        }
        batch_of[root] = batch;
        used += nnz;
    }
    drop(comp_nnz);
    let mut rank = 0;
    for b in 0..=batch {
        // renumber rows of this batch densely
        let mut local = vec![u32::MAX; nrows];
        let mut next = 0u32;
        let mut m = Csc::new();
        for c in 0..ncols {
            buf.clear();
            gen(c, &mut buf);
            let Some(&(r0, _)) = buf.first() else { continue };
            if batch_of[uf.find(r0) as usize] != b {
                continue;
            }
            for t in buf.iter_mut() {
                let l = &mut local[t.0 as usize];
                if *l == u32::MAX {
                    *l = next;
                    next += 1;
                }
                t.0 = *l;
            }
            m.push(field, &mut buf);
        }
        rank += rank_csc(field, next as usize, &m);
    }
    rank
}
