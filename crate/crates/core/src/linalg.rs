//! Exact linear algebra over GF(p).
//!
//! Matrices are stored sparsely, row-major. Over GF(2) elimination runs on
//! rows packed into `u64` words and reduces with word-parallel XOR; for odd
//! primes a plain dense elimination is used. Pivots are always taken as the
//! first nonzero entry in row-major order, so kernel bases are reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar, SparseVec};

mod gf2;
pub(crate) mod sparse;

pub use gf2::BitVec;

/// Above this many words per packed row, GF(2) rank switches to sparse
/// column reduction to bound memory.
const DENSE_WORD_LIMIT: usize = 1 << 12;
/// Above this many entries, rank goes through sparse peeling first.
const DENSE_ENTRY_LIMIT: usize = 1 << 24;

#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        SparseMatrix {
            field,
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        SparseMatrix {
            field,
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Values are reduced
    /// mod p, repeated keys are summed and zeros dropped.
    pub fn from_triplets<I>(field: Field, rows: usize, cols: usize, triplets: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    row: r,
                    col: c,
                    rows,
                    cols,
                });
            }
            buckets[r].push((c, field.reduce(v)));
        }
        let data = buckets.into_iter().map(|b| field.collect(b)).collect();
        Ok(SparseMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from dense rows of integers (reduced mod p).
    pub fn from_dense(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged dense rows".into()));
        }
        let triplets = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(field, rows.len(), cols, triplets)
    }

    /// Builds a matrix from sparse rows with entries already reduced mod p.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<SparseVec>) -> Self {
        let data = rows.into_iter().map(|r| field.collect(r)).collect::<Vec<_>>();
        debug_assert!(data.iter().all(|r| r.iter().all(|&(c, _)| c < cols)));
        SparseMatrix {
            field,
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose `c`-th column is `columns[c]`.
    pub fn from_columns(field: Field, rows: usize, columns: &[SparseVec]) -> Result<Self> {
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            for &(r, v) in col {
                if r >= rows {
                    return Err(Error::IndexOutOfRange {
                        row: r,
                        col: c,
                        rows,
                        cols: columns.len(),
                    });
                }
                let v = v % field.characteristic();
                if v != 0 {
                    data[r].push((c, v));
                }
            }
        }
        // columns are visited in increasing order, so rows come out sorted,
        // but a column may repeat a row index
        let data = data.into_iter().map(|row| field.collect(row)).collect();
        Ok(SparseMatrix {
            field,
            rows,
            cols: columns.len(),
            data,
        })
    }

    /// Builds a `rows × cols` matrix column by column: `fill(c, buf)`
    /// appends the entries of column `c` (unreduced repeats allowed, values
    /// already in `0..p`) to an empty buffer.
    pub fn from_column_fn<F>(field: Field, rows: usize, cols: usize, mut fill: F) -> Self
    where
        F: FnMut(usize, &mut Vec<(usize, Scalar)>),
    {
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        let mut buf = Vec::new();
        for c in 0..cols {
            buf.clear();
            fill(c, &mut buf);
            field.canonicalize(&mut buf);
            for &(r, v) in &buf {
                data[r].push((c, v));
            }
        }
        SparseMatrix { field, rows, cols, data }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.data[r].binary_search_by_key(&c, |t| t.0) {
            Ok(k) => self.data[r][k].1,
            Err(_) => 0,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Scalar)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for &(c, v) in row {
                data[c].push((r, v));
            }
        }
        SparseMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.characteristic(),
                other.field.characteristic(),
            ));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .map(|row| {
                f.collect(
                    row.iter()
                        .flat_map(|&(k, a)| other.data[k].iter().map(move |&(c, b)| (c, f.mul(a, b)))),
                )
            })
            .collect();
        Ok(SparseMatrix {
            field: f,
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let f = self.field;
        let mut dense = vec![0 as Scalar; self.cols];
        for &(i, x) in v {
            dense[i] = x;
        }
        self.data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| {
                let s = row
                    .iter()
                    .fold(0, |acc, &(c, a)| f.add(acc, f.mul(a, dense[c])));
                (s != 0).then_some((r, s))
            })
            .collect()
    }

    /// Restricts to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut col_pos = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            col_pos[c] = k;
        }
        let data = rows
            .iter()
            .map(|&r| {
                let mut row: SparseVec = self.data[r]
                    .iter()
                    .filter(|t| col_pos[t.0] != usize::MAX)
                    .map(|&(c, v)| (col_pos[c], v))
                    .collect();
                row.sort_unstable_by_key(|t| t.0);
                row
            })
            .collect();
        SparseMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseMatrix {}x{} over {}", self.rows, self.cols, self.field)?;
        fmt::Display::fmt(self, f)
    }
}

/// One line per row: `row: c1 c2 ...` over GF(2), `row: c:v ...` otherwise.
impl fmt::Display for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row) in self.data.iter().enumerate() {
            write!(f, "{r}:")?;
            for &(c, v) in row {
                if self.field.is_binary() {
                    write!(f, " {c}")?;
                } else {
                    write!(f, " {c}:{v}")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Rank over the matrix's field.
pub fn rank(m: &SparseMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.rows.saturating_mul(m.cols) > DENSE_ENTRY_LIMIT {
        let rows = m.data.iter().map(|r| r.iter().map(|&(c, v)| (c as u32, v)).collect()).collect();
        return sparse::rank_columns(m.field, m.cols, rows);
    }
    if m.field.is_binary() {
        // pack along the shorter side
        let (vectors, len) = if m.cols <= m.rows {
            (row_supports(m), m.cols)
        } else {
            (row_supports(&m.transpose()), m.rows)
        };
        if len.div_ceil(64) <= DENSE_WORD_LIMIT {
            gf2::rank_dense(&vectors, len)
        } else {
            gf2::rank_sparse(vectors)
        }
    } else {
        let mut rows = to_dense(m);
        rref_dense(m.field, &mut rows, m.cols).len()
    }
}

/// Basis of the right null space `{v : M v = 0}`, one vector per free
/// column of the reduced row echelon form: the vector for free column `f`
/// has a 1 at `f` and zeros at every other free column.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    kernel_basis_with_free(m).0
}

/// [`kernel_basis`] together with the free column of each basis vector.
/// The coordinates of a kernel element in this basis are its values at
/// the free columns.
pub(crate) fn kernel_basis_with_free(m: &SparseMatrix) -> (Vec<SparseVec>, Vec<usize>) {
    let f = m.field;
    let n = m.cols;
    if m.field.is_binary() {
        let mut rows: Vec<BitVec> = m
            .data
            .iter()
            .map(|row| BitVec::from_indices(n, row.iter().map(|t| t.0)))
            .collect();
        let pivots = gf2::rref(&mut rows, n);
        let mut is_pivot = vec![false; n];
        for &(_, c) in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let basis = free
            .iter()
            .map(|&free| {
                let mut v: SparseVec = pivots
                    .iter()
                    .filter(|&&(r, _)| rows[r].get(free))
                    .map(|&(_, c)| (c, 1))
                    .collect();
                v.push((free, 1));
                v.sort_unstable_by_key(|t| t.0);
                v
            })
            .collect();
        (basis, free)
    } else {
        let mut rows = to_dense(m);
        let pivots = rref_dense(f, &mut rows, n);
        let mut is_pivot = vec![false; n];
        for &(_, c) in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let basis = free
            .iter()
            .map(|&free| {
                let mut v: SparseVec = pivots
                    .iter()
                    .filter(|&&(r, _)| rows[r][free] != 0)
                    .map(|&(r, c)| (c, f.neg(rows[r][free])))
                    .collect();
                v.push((free, 1));
                v.sort_unstable_by_key(|t| t.0);
                v
            })
            .collect();
        (basis, free)
    }
}

/// Betti number at the middle of `· --d_in--> V --d_out--> ·`, i.e.
/// `dim ker d_out - rank d_in`.
pub fn homology_rank(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize> {
    if d_in.rows != d_out.cols {
        return Err(Error::DimensionMismatch(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows, d_out.cols
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::CompositionNotZero);
    }
    Ok(d_out.cols - rank(d_out) - rank(d_in))
}

fn row_supports(m: &SparseMatrix) -> Vec<Vec<usize>> {
    m.data
        .iter()
        .map(|row| row.iter().map(|t| t.0).collect())
        .collect()
}

fn to_dense(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    m.data
        .iter()
        .map(|row| {
            let mut d = vec![0; m.cols];
            for &(c, v) in row {
                d[c] = v;
            }
            d
        })
        .collect()
}

/// In-place reduced row echelon form; returns `(row, pivot column)` pairs.
fn rref_dense(f: Field, rows: &mut [Vec<Scalar>], cols: usize) -> Vec<(usize, usize)> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        if next == rows.len() {
            break;
        }
        let Some(p) = (next..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(next, p);
        let inv = f.inv(rows[next][c]);
        for x in rows[next].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[c] == 0 {
                continue;
            }
            let factor = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(factor, y));
                }
            }
        }
        pivots.push((next, c));
        next += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf2(rows: &[Vec<i64>]) -> SparseMatrix {
        SparseMatrix::from_dense(Field::GF2, rows).unwrap()
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(rank(&SparseMatrix::identity(Field::GF2, 3)), 3);
        assert_eq!(rank(&SparseMatrix::zeros(Field::GF2, 4, 7)), 0);
        assert_eq!(rank(&SparseMatrix::zeros(Field::GF2, 0, 0)), 0);
    }

    #[test]
    fn dependent_rows_over_gf2() {
        let m = gf2(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(rank(&m), 2);
        // the same rows are independent over GF(3)
        let m3 = SparseMatrix::from_dense(Field::new(3).unwrap(), &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]])
            .unwrap();
        assert_eq!(rank(&m3), 3);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(Field::GF2, 2)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(Field::GF2, 1, 2)).len(), 2);
        assert_eq!(kernel_basis(&gf2(&[vec![1, 1]])), vec![vec![(0, 1), (1, 1)]]);
    }

    #[test]
    fn kernel_over_gf5_is_annihilated() {
        let f = Field::new(5).unwrap();
        let m = SparseMatrix::from_dense(f, &[vec![1, 2, 3, 4], vec![2, 4, 1, 0]]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 4 - rank(&m));
        for v in &k {
            assert!(m.apply(v).is_empty());
        }
    }

    #[test]
    fn homology_rank_examples() {
        let f = Field::GF2;
        let zero_in = SparseMatrix::zeros(f, 3, 0);
        let zero_out = SparseMatrix::zeros(f, 0, 3);
        assert_eq!(homology_rank(&zero_in, &zero_out).unwrap(), 3);

        let id = SparseMatrix::identity(f, 2);
        assert_eq!(homology_rank(&id, &SparseMatrix::zeros(f, 0, 2)).unwrap(), 0);

        let col = gf2(&[vec![1], vec![1]]);
        let row = gf2(&[vec![1, 1]]);
        assert_eq!(homology_rank(&col, &row).unwrap(), 0);

        let col = gf2(&[vec![1], vec![1], vec![0]]);
        let row = gf2(&[vec![1, 1, 0]]);
        assert_eq!(homology_rank(&col, &row).unwrap(), 1);
    }

    #[test]
    fn homology_rank_errors() {
        let f = Field::GF2;
        let id = SparseMatrix::identity(f, 2);
        assert_eq!(homology_rank(&id, &id), Err(Error::CompositionNotZero));
        assert!(matches!(
            homology_rank(&id, &SparseMatrix::zeros(f, 1, 3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn triplets_out_of_range() {
        assert!(SparseMatrix::from_triplets(Field::GF2, 2, 2, [(2, 0, 1)]).is_err());
    }

    #[test]
    fn debug_dump_format() {
        let m = gf2(&[vec![1, 0, 1], vec![0, 0, 0]]);
        assert_eq!(m.to_string(), "0: 0 2\n1:\n");
        let m3 = SparseMatrix::from_dense(Field::new(3).unwrap(), &[vec![0, 2]]).unwrap();
        assert_eq!(m3.to_string(), "0: 1:2\n");
    }

    #[test]
    fn sparse_gf2_path_matches_dense() {
        let vectors = vec![vec![0, 5, 9], vec![5, 9], vec![0], vec![1, 2], vec![1, 2]];
        assert_eq!(gf2::rank_sparse(vectors.clone()), gf2::rank_dense(&vectors, 10));
    }
}
