//! Truncated bar complexes: composition of bimodules (the derived tensor
//! product over the middle category) and Hochschild complexes.
//!
//! Column `j` of a two-sided bar complex for `V1` over `(A,B)`, `V2` over
//! `(B,C)` and outer objects `(a,c)` is the sum over object tuples
//! `o_0, …, o_j` of
//!
//! ```text
//! V1(a,o_0) ⊗ B(o_0,o_1) ⊗ … ⊗ B(o_(j−1),o_j) ⊗ V2(o_j,c)
//! ```
//!
//! The face `d_i` contracts factors `i` and `i+1` (the right action on `V1`
//! for `i = 0`, the left action on `V2` for `i = j`, composition in `B`
//! otherwise), and `d_H = Σ (−1)^i d_i`. A word in column `j` has total
//! degree `j +` its internal degree, and the total differential is
//! `D = (−1)^j d_V + d_H`, where `d_V` is the Koszul tensor differential.
//!
//! Bases are enumerated lazily per bidegree, ordered by object tuple and
//! then generator index, and cached. Ranks for large differentials are
//! computed by streaming columns through [`crate::linalg`]'s sparse path.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::bimod::{adj, adj_op, diagonal, Bimodule};
use crate::complex::{check_same, ChainComplex, Generator, Grading};
use crate::dgcat::{DgCategory, Table};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::linalg::sparse::{rank_streamed, Column};
use crate::linalg::SparseMatrix;

/// Nonzeros held in memory at once when ranking a streamed differential.
const RANK_BUDGET: usize = 40_000_000;

/// Largest total degree at which a truncated complex is guaranteed to have
/// the homology of the untruncated one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SafeBound {
    UpTo(i64),
    /// Nothing is omitted by the truncation (e.g. a zero input).
    Everywhere,
    NoFiniteBound,
}

impl SafeBound {
    pub fn covers(self, t: i64) -> bool {
        match self {
            SafeBound::UpTo(b) => t <= b,
            SafeBound::Everywhere => true,
            SafeBound::NoFiniteBound => false,
        }
    }

    pub fn min(self, other: SafeBound) -> SafeBound {
        use SafeBound::*;
        match (self, other) {
            (NoFiniteBound, _) | (_, NoFiniteBound) => NoFiniteBound,
            (Everywhere, x) | (x, Everywhere) => x,
            (UpTo(a), UpTo(b)) => UpTo(a.min(b)),
        }
    }

    /// Shifts a finite bound by `k`.
    pub fn offset(self, k: i64) -> SafeBound {
        match self {
            SafeBound::UpTo(b) => SafeBound::UpTo(b + k),
            other => other,
        }
    }
}

impl fmt::Display for SafeBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SafeBound::UpTo(b) => write!(f, "{b}"),
            SafeBound::Everywhere => f.write_str("all degrees"),
            SafeBound::NoFiniteBound => f.write_str("none"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    /// Within the exactness bound.
    Safe,
    /// Outside the exactness bound, or not stable under a longer truncation.
    Unverified,
    /// ℤ/2-graded: unchanged between truncations `J` and `J + 1`.
    Heuristic,
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Marker::Safe => "safe",
            Marker::Unverified => "unverified",
            Marker::Heuristic => "heuristic",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BettiLine {
    pub degree: i64,
    pub betti: usize,
    pub marker: Marker,
}

impl fmt::Display for BettiLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t {} betti {} {}", self.degree, self.betti, self.marker)
    }
}

/// A family of tensor words indexed by column and object tuple.
pub trait TensorWords: Send + Sync {
    fn field(&self) -> Field;
    fn grading(&self) -> Grading;
    /// Object tuples `o_0, …, o_j` of column `j` whose factors are all
    /// nonzero, in lexicographic order.
    fn tuples(&self, j: usize) -> Vec<Vec<u32>>;
    fn n_factors(&self, j: usize) -> usize;
    fn factor(&self, objs: &[u32], p: usize) -> &ChainComplex;
    /// Face `d_i` (unsigned by `(−1)^i`). Writes the target objects and
    /// generators, with a placeholder at the returned position, and returns
    /// that position, a sign, and the product terms to put there.
    fn face<'a>(
        &'a self,
        i: usize,
        objs: &[u32],
        gens: &[u32],
        objs_out: &mut Vec<u32>,
        gens_out: &mut Vec<u32>,
    ) -> Option<(usize, Scalar, &'a [(usize, Scalar)])>;
    fn label(&self, objs: &[u32], gens: &[u32]) -> String;
    /// Exactness bound for truncation at `trunc` (ℤ grading).
    fn safe_bound(&self, trunc: usize) -> SafeBound;
}

/// Words `V1(a,o_0) ⊗ B(o_0,o_1) ⊗ … ⊗ V2(o_j,c)`.
pub struct TwoSided {
    v1: Arc<Bimodule>,
    v2: Arc<Bimodule>,
    a: usize,
    c: usize,
}

impl TwoSided {
    fn middle(&self) -> &DgCategory {
        self.v1.right_cat()
    }
}

impl TensorWords for TwoSided {
    fn field(&self) -> Field {
        self.v1.field()
    }

    fn grading(&self) -> Grading {
        self.v1.grading()
    }

    fn tuples(&self, j: usize) -> Vec<Vec<u32>> {
        let b = self.middle();
        let nb = b.n_objects();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(j + 1);
        fn go(s: &TwoSided, nb: usize, j: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == j + 1 {
                if s.v2.slot_dim(*cur.last().expect("nonempty") as usize, s.c) > 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for o in 0..nb {
                let ok = match cur.last() {
                    None => s.v1.slot_dim(s.a, o) > 0,
                    Some(&p) => s.middle().hom_dim(p as usize, o) > 0,
                };
                if ok {
                    cur.push(o as u32);
                    go(s, nb, j, cur, out);
                    cur.pop();
                }
            }
        }
        go(self, nb, j, &mut cur, &mut out);
        out
    }

    fn n_factors(&self, j: usize) -> usize {
        j + 2
    }

    fn factor(&self, objs: &[u32], p: usize) -> &ChainComplex {
        let j = objs.len() - 1;
        if p == 0 {
            self.v1.slot(self.a, objs[0] as usize)
        } else if p == j + 1 {
            self.v2.slot(objs[j] as usize, self.c)
        } else {
            self.middle().hom(objs[p - 1] as usize, objs[p] as usize)
        }
    }

    fn face<'a>(
        &'a self,
        i: usize,
        objs: &[u32],
        gens: &[u32],
        objs_out: &mut Vec<u32>,
        gens_out: &mut Vec<u32>,
    ) -> Option<(usize, Scalar, &'a [(usize, Scalar)])> {
        let j = objs.len() - 1;
        debug_assert!(j >= 1 && i <= j);
        let o = |k: usize| objs[k] as usize;
        let (g, h) = (gens[i] as usize, gens[i + 1] as usize);
        let prod = if i == 0 {
            self.v1.right_product((self.a, o(0), o(1)), g, h)
        } else if i == j {
            self.v2.left_product((o(j - 1), o(j), self.c), g, h)
        } else {
            self.middle().product((o(i - 1), o(i), o(i + 1)), g, h)
        };
        if prod.is_empty() {
            return None;
        }
        objs_out.clear();
        objs_out.extend(objs.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x));
        gens_out.clear();
        gens_out.extend_from_slice(&gens[..i]);
        gens_out.push(0);
        gens_out.extend_from_slice(&gens[i + 2..]);
        Some((i, 1, prod))
    }

    fn label(&self, objs: &[u32], gens: &[u32]) -> String {
        let names: Vec<&str> = gens
            .iter()
            .enumerate()
            .map(|(p, &g)| self.factor(objs, p).generator(g as usize).name.as_str())
            .collect();
        let mut s = format!("[{}]", names.join("|"));
        if self.middle().n_objects() > 1 {
            let o: Vec<&str> = objs.iter().map(|&o| self.middle().objects()[o as usize].as_str()).collect();
            s.push_str(&format!("@{}", o.join(",")));
        }
        s
    }

    fn safe_bound(&self, trunc: usize) -> SafeBound {
        safe_degree_bound(&self.v1, &self.v2, trunc)
    }
}

/// Cyclic words `A(o_0,o_1) ⊗ … ⊗ A(o_(j−1),o_j) ⊗ A(o_j,o_0)`.
pub struct Cyclic {
    cat: Arc<DgCategory>,
}

impl TensorWords for Cyclic {
    fn field(&self) -> Field {
        self.cat.field()
    }

    fn grading(&self) -> Grading {
        self.cat.grading()
    }

    fn tuples(&self, j: usize) -> Vec<Vec<u32>> {
        let n = self.cat.n_objects();
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(j + 1);
        fn go(cat: &DgCategory, n: usize, j: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == j + 1 {
                if cat.hom_dim(cur[j] as usize, cur[0] as usize) > 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for o in 0..n {
                if cur.last().is_none_or(|&p| cat.hom_dim(p as usize, o) > 0) {
                    cur.push(o as u32);
                    go(cat, n, j, cur, out);
                    cur.pop();
                }
            }
        }
        go(&self.cat, n, j, &mut cur, &mut out);
        out
    }

    fn n_factors(&self, j: usize) -> usize {
        j + 1
    }

    fn factor(&self, objs: &[u32], p: usize) -> &ChainComplex {
        let next = objs[(p + 1) % objs.len()];
        self.cat.hom(objs[p] as usize, next as usize)
    }

    fn face<'a>(
        &'a self,
        i: usize,
        objs: &[u32],
        gens: &[u32],
        objs_out: &mut Vec<u32>,
        gens_out: &mut Vec<u32>,
    ) -> Option<(usize, Scalar, &'a [(usize, Scalar)])> {
        let j = objs.len() - 1;
        debug_assert!(j >= 1 && i <= j);
        let o = |k: usize| objs[k % (j + 1)] as usize;
        objs_out.clear();
        gens_out.clear();
        if i < j {
            let prod = self.cat.product((o(i), o(i + 1), o(i + 2)), gens[i] as usize, gens[i + 1] as usize);
            if prod.is_empty() {
                return None;
            }
            objs_out.extend(objs.iter().enumerate().filter(|&(k, _)| k != i + 1).map(|(_, &x)| x));
            gens_out.extend_from_slice(&gens[..i]);
            gens_out.push(0);
            gens_out.extend_from_slice(&gens[i + 2..]);
            Some((i, 1, prod))
        } else {
            // f_j moves to the front past f_0 … f_(j−1)
            let prod = self.cat.product((o(j), o(0), o(1)), gens[j] as usize, gens[0] as usize);
            if prod.is_empty() {
                return None;
            }
            let deg = |p: usize| self.factor(objs, p).degree_of(gens[p] as usize);
            let passed: i64 = (0..j).map(deg).sum();
            let sign = self.field().sign(deg(j) * passed);
            objs_out.push(objs[j]);
            objs_out.extend_from_slice(&objs[1..j]);
            gens_out.push(0);
            gens_out.extend_from_slice(&gens[1..j]);
            Some((0, sign, prod))
        }
    }

    fn label(&self, objs: &[u32], gens: &[u32]) -> String {
        let names: Vec<&str> = gens
            .iter()
            .enumerate()
            .map(|(p, &g)| self.factor(objs, p).generator(g as usize).name.as_str())
            .collect();
        let mut s = format!("[{}]", names.join("|"));
        if self.cat.n_objects() > 1 {
            let o: Vec<&str> = objs.iter().map(|&o| self.cat.objects()[o as usize].as_str()).collect();
            s.push_str(&format!("@{}", o.join(",")));
        }
        s
    }

    fn safe_bound(&self, trunc: usize) -> SafeBound {
        hochschild_safe_bound(&self.cat, trunc)
    }
}

/// Words of one object tuple in one bidegree, as mixed-radix codes.
struct Block {
    objs: Vec<u32>,
    radix: Vec<u32>,
    strides: Vec<u64>,
    /// ascending
    codes: Vec<u64>,
    offset: usize,
}

impl Block {
    fn decode(&self, code: u64, out: &mut Vec<u32>) {
        out.clear();
        out.extend(
            self.strides
                .iter()
                .zip(&self.radix)
                .map(|(&s, &r)| ((code / s) % r as u64) as u32),
        );
    }

    fn encode(&self, gens: &[u32]) -> u64 {
        gens.iter().zip(&self.strides).map(|(&g, &s)| g as u64 * s).sum()
    }

    fn find(&self, code: u64) -> Option<usize> {
        self.codes.binary_search(&code).ok().map(|k| self.offset + k)
    }
}

/// Basis of one bidegree `(internal degree n, column j)`.
struct Bidegree {
    blocks: Vec<Block>,
    by_tuple: HashMap<Vec<u32>, usize>,
    len: usize,
}

impl Bidegree {
    fn block(&self, objs: &[u32]) -> Option<&Block> {
        self.by_tuple.get(objs).map(|&b| &self.blocks[b])
    }

    /// Block and position of local index `k`.
    fn locate(&self, k: usize) -> (&Block, usize) {
        let b = self.blocks.partition_point(|b| b.offset <= k) - 1;
        let blk = &self.blocks[b];
        (blk, k - blk.offset)
    }
}

/// Which parts of the total differential to emit.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Vertical,
    Horizontal,
    Total,
}

/// The total complex of a truncated bar-type bicomplex.
pub struct TotalComplex<S> {
    shape: S,
    trunc: usize,
    tuples: Mutex<HashMap<usize, Arc<Vec<Vec<u32>>>>>,
    bidegrees: Mutex<HashMap<(i64, usize), Arc<Bidegree>>>,
    ranks: Mutex<HashMap<i64, usize>>,
}

/// Two-sided bar complex for one outer slot of a composition.
pub type BarComplex = TotalComplex<TwoSided>;
/// Cyclic bar complex of a category.
pub type HochschildComplex = TotalComplex<Cyclic>;

/// Pieces of a total degree: `(column, internal degree, basis, offset)`.
struct TotalBasis {
    pieces: Vec<(usize, i64, Arc<Bidegree>, usize)>,
    len: usize,
}

impl TotalBasis {
    fn piece_of(&self, c: usize) -> &(usize, i64, Arc<Bidegree>, usize) {
        let k = self.pieces.partition_point(|p| p.3 <= c) - 1;
        &self.pieces[k]
    }

    fn offset(&self, n: i64, j: usize) -> Option<(usize, &Bidegree)> {
        self.pieces
            .iter()
            .find(|p| p.0 == j && p.1 == n)
            .map(|p| (p.3, &*p.2))
    }
}

impl BarComplex {
    /// The bar complex of `V1 ∘ V2` at outer objects `(a, c)`.
    pub fn new(v1: Arc<Bimodule>, v2: Arc<Bimodule>, a: usize, c: usize, trunc: usize) -> Result<Self> {
        check_compose(&v1, &v2, trunc)?;
        if a >= v1.left_cat().n_objects() || c >= v2.right_cat().n_objects() {
            return Err(Error::Malformed("outer object out of range".into()));
        }
        Ok(TotalComplex::with_shape(TwoSided { v1, v2, a, c }, trunc))
    }

    /// Same complex with a different truncation.
    pub fn with_truncation(&self, trunc: usize) -> Result<Self> {
        let s = &self.shape;
        BarComplex::new(s.v1.clone(), s.v2.clone(), s.a, s.c, trunc)
    }
}

impl HochschildComplex {
    pub fn new(cat: Arc<DgCategory>, trunc: usize) -> Result<Self> {
        if !cat.is_unital() {
            return Err(Error::NonUnital);
        }
        if trunc < 1 {
            return Err(Error::TruncationTooSmall(trunc));
        }
        Ok(TotalComplex::with_shape(Cyclic { cat }, trunc))
    }

    pub fn with_truncation(&self, trunc: usize) -> Result<Self> {
        HochschildComplex::new(self.shape.cat.clone(), trunc)
    }
}

impl<S: TensorWords> TotalComplex<S> {
    fn with_shape(shape: S, trunc: usize) -> Self {
        TotalComplex {
            shape,
            trunc,
            tuples: Mutex::new(HashMap::new()),
            bidegrees: Mutex::new(HashMap::new()),
            ranks: Mutex::new(HashMap::new()),
        }
    }

    pub fn truncation(&self) -> usize {
        self.trunc
    }

    pub fn field(&self) -> Field {
        self.shape.field()
    }

    pub fn grading(&self) -> Grading {
        self.shape.grading()
    }

    pub fn shape(&self) -> &S {
        &self.shape
    }

    pub fn safe_bound(&self) -> SafeBound {
        match self.grading() {
            Grading::Z => self.shape.safe_bound(self.trunc),
            Grading::Z2 => SafeBound::NoFiniteBound,
        }
    }

    fn tuples(&self, j: usize) -> Arc<Vec<Vec<u32>>> {
        if let Some(t) = self.tuples.lock().expect("lock").get(&j) {
            return t.clone();
        }
        let t = Arc::new(self.shape.tuples(j));
        self.tuples.lock().expect("lock").entry(j).or_insert(t).clone()
    }

    /// Internal degree range of column `j` in ℤ mode.
    fn internal_range(&self, j: usize) -> Option<(i64, i64)> {
        let g = self.grading();
        let mut range: Option<(i64, i64)> = None;
        for objs in self.tuples(j).iter() {
            let (mut lo, mut hi) = (0, 0);
            for p in 0..self.shape.n_factors(j) {
                let f = self.shape.factor(objs, p);
                lo += f.min_degree().expect("nonzero factor");
                hi += f.max_degree().expect("nonzero factor");
            }
            range = Some(match range {
                None => (lo, hi),
                Some((a, b)) => (a.min(lo), b.max(hi)),
            });
        }
        match g {
            Grading::Z => range,
            Grading::Z2 => range.map(|_| (0, 1)),
        }
    }

    fn bidegree(&self, n: i64, j: usize) -> Arc<Bidegree> {
        let n = self.grading().normalize(n);
        if let Some(b) = self.bidegrees.lock().expect("lock").get(&(n, j)) {
            return b.clone();
        }
        let b = Arc::new(self.build_bidegree(n, j));
        self.bidegrees.lock().expect("lock").entry((n, j)).or_insert(b).clone()
    }

    fn build_bidegree(&self, n: i64, j: usize) -> Bidegree {
        let g = self.grading();
        let nf = self.shape.n_factors(j);
        let mut blocks = Vec::new();
        let mut by_tuple = HashMap::new();
        let mut len = 0;
        for objs in self.tuples(j).iter() {
            let factors: Vec<&ChainComplex> = (0..nf).map(|p| self.shape.factor(objs, p)).collect();
            let radix: Vec<u32> = factors.iter().map(|f| f.total_dim() as u32).collect();
            let mut strides = vec![1u64; nf];
            for p in (0..nf.saturating_sub(1)).rev() {
                strides[p] = strides[p + 1]
                    .checked_mul(radix[p + 1] as u64)
                    .expect("word count fits in 64 bits");
            }
            // suffix bounds on degree sums, for pruning in ℤ mode
            let mut lo = vec![0i64; nf + 1];
            let mut hi = vec![0i64; nf + 1];
            for p in (0..nf).rev() {
                lo[p] = lo[p + 1] + factors[p].min_degree().expect("nonzero factor");
                hi[p] = hi[p + 1] + factors[p].max_degree().expect("nonzero factor");
            }
            let mut codes = Vec::new();
            enumerate(g, &factors, &strides, &lo, &hi, 0, 0, n, 0, &mut codes);
            if !codes.is_empty() {
                by_tuple.insert(objs.clone(), blocks.len());
                let count = codes.len();
                blocks.push(Block {
                    objs: objs.clone(),
                    radix,
                    strides,
                    codes,
                    offset: len,
                });
                len += count;
            }
        }
        Bidegree { blocks, by_tuple, len }
    }

    /// Dimension of bidegree `(n, j)`.
    pub fn bidegree_dim(&self, n: i64, j: usize) -> usize {
        if j > self.trunc {
            return 0;
        }
        self.bidegree(n, j).len
    }

    /// Basis labels of bidegree `(n, j)`, in order.
    pub fn basis(&self, n: i64, j: usize) -> Vec<String> {
        let bd = self.bidegree(n, j);
        let mut gens = Vec::new();
        let mut out = Vec::with_capacity(bd.len);
        for blk in &bd.blocks {
            for &code in &blk.codes {
                blk.decode(code, &mut gens);
                out.push(self.shape.label(&blk.objs, &gens));
            }
        }
        out
    }

    fn columns_in(&self, t: i64) -> Vec<(usize, i64)> {
        let g = self.grading();
        let t = g.normalize(t);
        (0..=self.trunc)
            .filter_map(|j| {
                let n = g.normalize(t - j as i64);
                match self.internal_range(j) {
                    Some((lo, hi)) if lo <= n && n <= hi => Some((j, n)),
                    _ => None,
                }
            })
            .collect()
    }

    fn total_basis(&self, t: i64) -> TotalBasis {
        let mut pieces = Vec::new();
        let mut len = 0;
        for (j, n) in self.columns_in(t) {
            let bd = self.bidegree(n, j);
            if bd.len > 0 {
                let l = bd.len;
                pieces.push((j, n, bd, len));
                len += l;
            }
        }
        TotalBasis { pieces, len }
    }

    /// Dimension of the total complex in degree `t`.
    pub fn total_dim(&self, t: i64) -> usize {
        self.total_basis(t).len
    }

    /// Emits the image of one word under the chosen part of the
    /// differential as `(target column, target internal degree, local
    /// index, coefficient)`.
    #[allow(clippy::too_many_arguments)]
    fn image<F>(&self, part: Part, j: usize, n: i64, blk: &Block, code: u64, scratch: &mut Scratch, mut emit: F)
    where
        F: FnMut(usize, i64, usize, Scalar),
    {
        let fl = self.field();
        let g = self.grading();
        // target blocks depend only on the source block, so they are
        // resolved once per block
        let key = blk as *const Block as usize;
        if scratch.block != Some(key) {
            scratch.block = Some(key);
            scratch.vertical = None;
            scratch.horizontal = None;
            scratch.faces.clear();
        }
        blk.decode(code, &mut scratch.gens);
        let gens = &scratch.gens;
        if part != Part::Horizontal {
            let (target, tb) = scratch.vertical.get_or_insert_with(|| {
                let target = self.bidegree(n - 1, j);
                let tb = target.by_tuple.get(&blk.objs).copied();
                (target, tb)
            });
            let tn = g.normalize(n - 1);
            if let Some(tb) = tb.map(|b| &target.blocks[b]) {
                let col_sign = if part == Part::Total { fl.sign(j as i64) } else { 1 };
                let mut prefix = 0i64;
                for (p, &gp) in gens.iter().enumerate() {
                    let f = self.shape.factor(&blk.objs, p);
                    let s = fl.mul(col_sign, fl.sign(prefix));
                    for &(t, c) in f.d(gp as usize) {
                        let new = code - gp as u64 * blk.strides[p] + t as u64 * tb.strides[p];
                        let k = tb.find(new).expect("vertical target in basis");
                        emit(j, tn, k, fl.mul(s, c));
                    }
                    prefix += f.degree_of(gp as usize);
                }
            }
        }
        if part != Part::Vertical && j >= 1 {
            let target = scratch.horizontal.get_or_insert_with(|| self.bidegree(n, j - 1));
            if scratch.faces.is_empty() {
                scratch.faces.resize(j + 1, None);
            }
            for i in 0..=j {
                let Some((pos, sign, prod)) =
                    self.shape.face(i, &blk.objs, gens, &mut scratch.objs_out, &mut scratch.gens_out)
                else {
                    continue;
                };
                let b = *scratch.faces[i].get_or_insert_with(|| {
                    target.by_tuple.get(&scratch.objs_out).copied().expect("face target tuple")
                });
                let tb = &target.blocks[b];
                let base = tb.encode(&scratch.gens_out);
                let s = fl.mul(sign, fl.sign(i as i64));
                for &(r, c) in prod {
                    let k = tb.find(base + r as u64 * tb.strides[pos]).expect("face target in basis");
                    emit(j - 1, n, k, fl.mul(s, c));
                }
            }
        }
    }

    fn part_matrix(&self, part: Part, n: i64, j: usize) -> SparseMatrix {
        let src = self.bidegree(n, j);
        let rows = match part {
            Part::Vertical => self.bidegree(n - 1, j).len,
            _ if j == 0 => 0,
            _ => self.bidegree(n, j - 1).len,
        };
        let mut scratch = Scratch::default();
        SparseMatrix::from_column_fn(self.field(), rows, src.len, |c, col| {
            let (blk, k) = src.locate(c);
            self.image(part, j, n, blk, blk.codes[k], &mut scratch, |_, _, k, v| col.push((k, v)));
        })
    }

    /// `d_H = Σ (−1)^i d_i` from bidegree `(n, j)` to `(n, j−1)`.
    pub fn horizontal(&self, n: i64, j: usize) -> SparseMatrix {
        self.part_matrix(Part::Horizontal, n, j)
    }

    /// Internal tensor differential from `(n, j)` to `(n−1, j)`.
    pub fn vertical(&self, n: i64, j: usize) -> SparseMatrix {
        self.part_matrix(Part::Vertical, n, j)
    }

    fn total_column(&self, tb: &TotalBasis, target: &TotalBasis, c: usize, scratch: &mut Scratch, out: &mut Column) {
        let (j, n, bd, off) = tb.piece_of(c);
        let (blk, k) = bd.locate(c - off);
        let code = blk.codes[k];
        self.image(Part::Total, *j, *n, blk, code, scratch, |tj, tn, idx, coef| {
            let (toff, _) = target.offset(tn, tj).expect("target piece present");
            out.push(((toff + idx) as u32, coef));
        });
    }

    /// The total differential from degree `t` to `t − 1`.
    pub fn total_differential(&self, t: i64) -> SparseMatrix {
        let src = self.total_basis(t);
        let dst = self.total_basis(t - 1);
        let mut scratch = Scratch::default();
        let mut buf = Vec::new();
        SparseMatrix::from_column_fn(self.field(), dst.len, src.len, |c, col| {
            buf.clear();
            self.total_column(&src, &dst, c, &mut scratch, &mut buf);
            col.extend(buf.iter().map(|&(r, v)| (r as usize, v)));
        })
    }

    /// Rank of the total differential out of degree `t`.
    pub fn differential_rank(&self, t: i64) -> usize {
        let t = self.grading().normalize(t);
        if let Some(&r) = self.ranks.lock().expect("lock").get(&t) {
            return r;
        }
        let src = self.total_basis(t);
        let dst = self.total_basis(t - 1);
        let scratch = std::cell::RefCell::new(Scratch::default());
        let r = rank_streamed(
            self.field(),
            dst.len,
            src.len,
            |c, out| self.total_column(&src, &dst, c, &mut scratch.borrow_mut(), out),
            RANK_BUDGET,
        );
        self.ranks.lock().expect("lock").insert(t, r);
        r
    }

    /// Betti number of the truncated total complex in degree `t`.
    pub fn betti(&self, t: i64) -> usize {
        self.total_dim(t) - self.differential_rank(t) - self.differential_rank(t + 1)
    }

    /// Betti numbers over a range of degrees. Ranks are computed in
    /// parallel; the result does not depend on the thread count.
    pub fn betti_range(&self, degrees: RangeInclusive<i64>) -> Vec<usize> {
        let (lo, hi) = (*degrees.start(), *degrees.end());
        if lo > hi {
            return Vec::new();
        }
        let needed: Vec<i64> = (lo..=hi + 1).collect();
        // warm the basis cache sequentially so parallel work only reads it
        for &t in &needed {
            let _ = self.total_basis(t);
        }
        let ranks: Vec<usize> = needed.par_iter().map(|&t| self.differential_rank(t)).collect();
        (lo..=hi)
            .enumerate()
            .map(|(k, t)| self.total_dim(t) - ranks[k] - ranks[k + 1])
            .collect()
    }

    /// The whole truncated total complex, with generators named by their
    /// words, plus the flat index of every bidegree basis element.
    fn materialize(&self) -> Result<(ChainComplex, HashMap<(i64, usize), Vec<usize>>)> {
        let fl = self.field();
        let mut keys: Vec<(i64, usize)> = Vec::new();
        for j in 0..=self.trunc {
            if let Some((lo, hi)) = self.internal_range(j) {
                for n in lo..=hi {
                    if self.bidegree(n, j).len > 0 {
                        keys.push((n, j));
                    }
                }
            }
        }
        let mut base: HashMap<(i64, usize), usize> = HashMap::new();
        let mut total = 0;
        for &k in &keys {
            base.insert(k, total);
            total += self.bidegree(k.0, k.1).len;
        }
        let mut gens = Vec::with_capacity(total);
        let mut d = Vec::with_capacity(total);
        let mut scratch = Scratch::default();
        let mut labels = Vec::new();
        for &(n, j) in &keys {
            let bd = self.bidegree(n, j);
            for blk in &bd.blocks {
                for &code in &blk.codes {
                    blk.decode(code, &mut labels);
                    gens.push(Generator {
                        name: self.shape.label(&blk.objs, &labels),
                        degree: j as i64 + n,
                    });
                    let mut col = Vec::new();
                    self.image(Part::Total, j, n, blk, code, &mut scratch, |tj, tn, k, c| {
                        col.push((base[&(tn, tj)] + k, c));
                    });
                    d.push(fl.collect(col));
                }
            }
        }
        let (cx, pos) = ChainComplex::from_generators_indexed(fl, self.grading(), gens, d)?;
        let flat = keys
            .iter()
            .map(|&k| {
                let b = base[&k];
                let len = self.bidegree(k.0, k.1).len;
                (k, pos[b..b + len].to_vec())
            })
            .collect();
        Ok((cx, flat))
    }

    /// The truncated total complex as an explicit chain complex.
    pub fn to_complex(&self) -> Result<ChainComplex> {
        self.materialize().map(|(c, _)| c)
    }

    /// Betti lines with markers: safe within the exactness bound in ℤ mode;
    /// in ℤ/2 mode heuristic when truncations `J` and `J + 1` agree.
    pub fn report_with(&self, degrees: RangeInclusive<i64>, longer: Option<&Self>) -> Vec<BettiLine> {
        let values = self.betti_range(degrees.clone());
        let bound = self.safe_bound();
        let check = match (self.grading(), longer) {
            (Grading::Z2, Some(l)) => Some(l.betti_range(degrees.clone())),
            _ => None,
        };
        degrees
            .zip(values)
            .enumerate()
            .map(|(k, (t, betti))| {
                let marker = match self.grading() {
                    Grading::Z if bound.covers(t) => Marker::Safe,
                    Grading::Z => Marker::Unverified,
                    Grading::Z2 => match &check {
                        Some(c) if c[k] == betti => Marker::Heuristic,
                        _ => Marker::Unverified,
                    },
                };
                BettiLine { degree: t, betti, marker }
            })
            .collect()
    }
}

impl BarComplex {
    pub fn report(&self, degrees: RangeInclusive<i64>) -> Result<Vec<BettiLine>> {
        let longer = match self.grading() {
            Grading::Z2 => Some(self.with_truncation(self.trunc + 1)?),
            Grading::Z => None,
        };
        Ok(self.report_with(degrees, longer.as_ref()))
    }
}

impl HochschildComplex {
    pub fn report(&self, degrees: RangeInclusive<i64>) -> Result<Vec<BettiLine>> {
        let longer = match self.grading() {
            Grading::Z2 => Some(self.with_truncation(self.trunc + 1)?),
            Grading::Z => None,
        };
        Ok(self.report_with(degrees, longer.as_ref()))
    }
}

#[derive(Default)]
struct Scratch {
    gens: Vec<u32>,
    objs_out: Vec<u32>,
    gens_out: Vec<u32>,
    /// address of the block whose targets are cached below
    block: Option<usize>,
    vertical: Option<(Arc<Bidegree>, Option<usize>)>,
    horizontal: Option<Arc<Bidegree>>,
    /// target block of each face, once seen
    faces: Vec<Option<usize>>,
}

/// Depth-first enumeration of generator tuples with degree sum `n`,
/// emitting codes in ascending order.
#[allow(clippy::too_many_arguments)]
fn enumerate(
    g: Grading,
    factors: &[&ChainComplex],
    strides: &[u64],
    lo: &[i64],
    hi: &[i64],
    p: usize,
    sum: i64,
    n: i64,
    code: u64,
    out: &mut Vec<u64>,
) {
    if p == factors.len() {
        if g.normalize(sum) == n {
            out.push(code);
        }
        return;
    }
    let f = factors[p];
    for deg in f.degrees() {
        if g == Grading::Z {
            let rest = n - sum - deg;
            if rest < lo[p + 1] || rest > hi[p + 1] {
                continue;
            }
        }
        for k in f.block(deg) {
            enumerate(g, factors, strides, lo, hi, p + 1, sum + deg, n, code + k as u64 * strides[p], out);
        }
    }
}

fn check_compose(v1: &Bimodule, v2: &Bimodule, trunc: usize) -> Result<()> {
    check_same(v1.field(), v1.grading(), v2.field(), v2.grading())?;
    let (b1, b2) = (v1.right_cat(), v2.left_cat());
    if !(Arc::ptr_eq(b1, b2) || b1 == b2) {
        return Err(Error::CategoryMismatch);
    }
    if !b1.is_unital() {
        return Err(Error::NonUnitalMiddle);
    }
    if trunc < 1 {
        return Err(Error::TruncationTooSmall(trunc));
    }
    Ok(())
}

/// Exactness bound for the bar complex of `V1 ∘ V2` truncated at bar length
/// `trunc`: with `b` the least hom degree of the middle category and `v` the
/// least slot degree of the two bimodules, every omitted column sits above
/// total degree `t + 1` for `t ≤ 2v + (trunc+1)(b+1) − 2`, provided `b + 1 > 0`.
pub fn safe_degree_bound(v1: &Bimodule, v2: &Bimodule, trunc: usize) -> SafeBound {
    if v1.grading() == Grading::Z2 {
        return SafeBound::NoFiniteBound;
    }
    let (Some(m1), Some(m2)) = (v1.min_degree(), v2.min_degree()) else {
        return SafeBound::Everywhere;
    };
    let Some(b) = v1.right_cat().min_hom_degree() else {
        return SafeBound::Everywhere;
    };
    if b < 0 {
        return SafeBound::NoFiniteBound;
    }
    let v = m1.min(m2);
    SafeBound::UpTo(2 * v + (trunc as i64 + 1) * (b + 1) - 2)
}

/// Exactness bound for the cyclic bar complex truncated at `trunc`: column
/// `j` starts in total degree `j + (j+1)a` where `a` is the least hom degree.
pub fn hochschild_safe_bound(cat: &DgCategory, trunc: usize) -> SafeBound {
    if cat.grading() == Grading::Z2 {
        return SafeBound::NoFiniteBound;
    }
    let Some(a) = cat.min_hom_degree() else {
        return SafeBound::Everywhere;
    };
    if a < 0 {
        return SafeBound::NoFiniteBound;
    }
    SafeBound::UpTo((trunc as i64 + 1) * (a + 1) + a - 2)
}

/// Exactness bound for an outer composition whose left (or right) input is
/// itself a truncated composite: the outer bound, capped by the inner
/// bound shifted by the least degree of the other outer input.
pub fn nested_safe_bound(outer: SafeBound, inner: SafeBound, other_min: Option<i64>) -> SafeBound {
    match other_min {
        None => outer,
        Some(m) => outer.min(inner.offset(m)),
    }
}

/// `V1 ∘ V2` as a bimodule over `(A, C)`: every slot is the truncated
/// total bar complex, `A` acts on the first factor with sign
/// `(−1)^(|f| j)` and `C` acts on the last factor.
pub fn compose(v1: &Bimodule, v2: &Bimodule, trunc: usize) -> Result<Bimodule> {
    check_compose(v1, v2, trunc)?;
    let fl = v1.field();
    let g = v1.grading();
    let (a_cat, c_cat) = (v1.left_cat().clone(), v2.right_cat().clone());
    let (na, nc) = (a_cat.n_objects(), c_cat.n_objects());
    let (p1, p2) = (Arc::new(v1.clone()), Arc::new(v2.clone()));
    let bars: Vec<BarComplex> = (0..na * nc)
        .map(|s| BarComplex::new(p1.clone(), p2.clone(), s / nc, s % nc, trunc))
        .collect::<Result<_>>()?;
    let mut slots = Vec::with_capacity(na * nc);
    let mut flats = Vec::with_capacity(na * nc);
    for bar in &bars {
        let (cx, flat) = bar.materialize()?;
        slots.push(cx);
        flats.push(flat);
    }
    let mut gens = Vec::new();
    let mut lact: BTreeMap<(usize, usize, usize), Table> = BTreeMap::new();
    for a2 in 0..na {
        for a in 0..na {
            let h = a_cat.hom(a2, a);
            if h.is_empty() {
                continue;
            }
            for c in 0..nc {
                let (src, dst) = (a * nc + c, a2 * nc + c);
                let dsrc = slots[src].total_dim();
                let mut table = vec![Vec::new(); h.total_dim() * dsrc];
                for (&(n, j), flat) in &flats[src] {
                    let bd = bars[src].bidegree(n, j);
                    for blk in &bd.blocks {
                        for (k, &code) in blk.codes.iter().enumerate() {
                            blk.decode(code, &mut gens);
                            let x = flat[blk.offset + k];
                            let o0 = blk.objs[0] as usize;
                            for i in 0..h.total_dim() {
                                let prod = v1.left_product((a2, a, o0), i, gens[0] as usize);
                                if prod.is_empty() {
                                    continue;
                                }
                                let tn = g.normalize(n + h.degree_of(i));
                                let tbd = bars[dst].bidegree(tn, j);
                                let tblk = tbd.block(&blk.objs).expect("left action target tuple");
                                let tflat = &flats[dst][&(tn, j)];
                                let s = fl.sign(h.degree_of(i) * j as i64);
                                let out = fl.collect(prod.iter().map(|&(r, c)| {
                                    let mut w = gens.clone();
                                    w[0] = r as u32;
                                    let local = tblk.find(tblk.encode(&w)).expect("left action target word");
                                    (tflat[local], fl.mul(s, c))
                                }));
                                table[i * dsrc + x] = out;
                            }
                        }
                    }
                }
                lact.insert((a2, a, c), table);
            }
        }
    }
    let mut ract: BTreeMap<(usize, usize, usize), Table> = BTreeMap::new();
    for a in 0..na {
        for c in 0..nc {
            for c2 in 0..nc {
                let h = c_cat.hom(c, c2);
                if h.is_empty() {
                    continue;
                }
                let (src, dst) = (a * nc + c, a * nc + c2);
                let dh = h.total_dim();
                let mut table = vec![Vec::new(); slots[src].total_dim() * dh];
                for (&(n, j), flat) in &flats[src] {
                    let bd = bars[src].bidegree(n, j);
                    for blk in &bd.blocks {
                        let last = blk.radix.len() - 1;
                        for (k, &code) in blk.codes.iter().enumerate() {
                            blk.decode(code, &mut gens);
                            let x = flat[blk.offset + k];
                            let oj = *blk.objs.last().expect("nonempty") as usize;
                            for kk in 0..dh {
                                let prod = v2.right_product((oj, c, c2), gens[last] as usize, kk);
                                if prod.is_empty() {
                                    continue;
                                }
                                let tn = g.normalize(n + h.degree_of(kk));
                                let tbd = bars[dst].bidegree(tn, j);
                                let tblk = tbd.block(&blk.objs).expect("right action target tuple");
                                let tflat = &flats[dst][&(tn, j)];
                                let out = fl.collect(prod.iter().map(|&(r, cf)| {
                                    let mut w = gens.clone();
                                    w[last] = r as u32;
                                    let local = tblk.find(tblk.encode(&w)).expect("right action target word");
                                    (tflat[local], cf)
                                }));
                                table[x * dh + kk] = out;
                            }
                        }
                    }
                }
                ract.insert((a, c, c2), table);
            }
        }
    }
    Ok(Bimodule::from_parts(a_cat, c_cat, slots, lact, ract))
}

/// Hochschild complex of a unital category as the cyclic bar complex
/// truncated at `trunc`.
pub fn hochschild_direct(cat: &DgCategory, trunc: usize) -> Result<ChainComplex> {
    HochschildComplex::new(Arc::new(cat.clone()), trunc)?.to_complex()
}

/// The bar complex computing `A ⊗ over A^op⊗A` of the two readings of the
/// diagonal bimodule, without materializing it.
pub fn hochschild_via_adj_bar(cat: &DgCategory, trunc: usize) -> Result<BarComplex> {
    if !cat.is_unital() {
        return Err(Error::NonUnital);
    }
    let d = diagonal(cat);
    BarComplex::new(Arc::new(adj(&d)), Arc::new(adj_op(&d)), 0, 0, trunc)
}

/// Hochschild complex as the single slot of
/// `compose(adj(diagonal(A)), adj_op(diagonal(A)), trunc)`.
pub fn hochschild_via_adj(cat: &DgCategory, trunc: usize) -> Result<ChainComplex> {
    hochschild_via_adj_bar(cat, trunc)?.to_complex()
}

/// Betti comparison of two complexes over a degree range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub degrees: RangeInclusive<i64>,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub equal: bool,
}

impl fmt::Display for QuasiIsoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, (a, b)) in self.degrees.clone().zip(self.first.iter().zip(&self.second)) {
            writeln!(f, "t {t} betti {a} {b}")?;
        }
        writeln!(f, "{}", if self.equal { "equal" } else { "unequal" })
    }
}

pub fn quasi_iso_report(c1: &ChainComplex, c2: &ChainComplex, degrees: RangeInclusive<i64>) -> QuasiIsoReport {
    let first: Vec<usize> = degrees.clone().map(|t| c1.betti(t)).collect();
    let second: Vec<usize> = degrees.clone().map(|t| c2.betti(t)).collect();
    let equal = first == second;
    QuasiIsoReport {
        degrees,
        first,
        second,
        equal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn gf(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn cyclic_total_differential_squares_to_zero() {
        for p in [2, 3, 5] {
            for cat in [fixtures::dual(gf(p)), fixtures::exterior(gf(p)), fixtures::a2(gf(p)), fixtures::cone_cat(gf(p))] {
                let h = HochschildComplex::new(Arc::new(cat), 4).unwrap();
                let c = h.to_complex().unwrap();
                assert!(c.validate().passed(), "p = {p}");
                for t in 0..5 {
                    assert_eq!(h.total_dim(t), c.dim(t));
                }
            }
        }
    }

    #[test]
    fn dual_numbers_hochschild() {
        // char 2: every degree is two-dimensional; odd char: 2, 1, 1, …
        let h = HochschildComplex::new(Arc::new(fixtures::dual(Field::GF2)), 6).unwrap();
        assert_eq!(h.safe_bound(), SafeBound::UpTo(5));
        assert_eq!(h.betti_range(0..=5), vec![2; 6]);
        let h = HochschildComplex::new(Arc::new(fixtures::dual(gf(3))), 6).unwrap();
        assert_eq!(h.betti_range(0..=5), vec![2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn streamed_betti_matches_materialized_homology() {
        let h = HochschildComplex::new(Arc::new(fixtures::exterior(gf(3))), 4).unwrap();
        let c = h.to_complex().unwrap();
        for t in -1..8 {
            assert_eq!(h.betti(t), c.betti(t), "t = {t}");
        }
    }

    #[test]
    fn bicomplex_pieces_commute() {
        let d = diagonal(&fixtures::exterior(gf(3)));
        let bar = BarComplex::new(Arc::new(d.clone()), Arc::new(d), 0, 0, 4).unwrap();
        for j in 1..=4 {
            for n in 0..=4 {
                let h = bar.horizontal(n, j);
                let v = bar.vertical(n, j);
                let hv = bar.horizontal(n - 1, j).mul(&v).unwrap();
                let vh = bar.vertical(n, j - 1).mul(&h).unwrap();
                assert_eq!(hv, vh, "(n, j) = ({n}, {j})");
                if j >= 2 {
                    let hh = bar.horizontal(n, j - 1).mul(&h).unwrap();
                    assert!(hh.is_zero());
                }
            }
        }
    }

    #[test]
    fn diagonal_is_a_unit_for_composition() {
        for cat in [fixtures::dual(Field::GF2), fixtures::a2(gf(3)), fixtures::cone_cat(gf(5))] {
            let d = diagonal(&cat);
            let c = compose(&d, &d, 4).unwrap();
            assert!(c.validate().passed(), "{}", c.validate());
            let bound = safe_degree_bound(&d, &d, 4);
            for a in 0..cat.n_objects() {
                for b in 0..cat.n_objects() {
                    for t in -1..=5 {
                        if bound.covers(t) {
                            assert_eq!(c.slot(a, b).betti(t), cat.hom(a, b).betti(t));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn safe_bounds() {
        let d = diagonal(&fixtures::dual(Field::GF2));
        assert_eq!(safe_degree_bound(&d, &d, 3), SafeBound::UpTo(2));
        let e = diagonal(&fixtures::exterior(Field::GF2)).shift(1);
        // slots start in degree 1, homs in degree 0
        assert_eq!(safe_degree_bound(&e, &e, 3), SafeBound::UpTo(4));
        assert_eq!(hochschild_safe_bound(&fixtures::exterior(Field::GF2), 3), SafeBound::UpTo(2));
        assert_eq!(SafeBound::UpTo(3).min(SafeBound::Everywhere), SafeBound::UpTo(3));
        assert_eq!(nested_safe_bound(SafeBound::UpTo(5), SafeBound::UpTo(2), Some(1)), SafeBound::UpTo(3));
    }

    #[test]
    fn report_lines() {
        let h = HochschildComplex::new(Arc::new(fixtures::dual(Field::GF2)), 3).unwrap();
        let lines = h.report(0..=3).unwrap();
        let text: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
        assert_eq!(text[0], "t 0 betti 2 safe");
        assert_eq!(text[2], "t 2 betti 2 safe");
        assert!(text[3].ends_with("unverified"));
    }

    #[test]
    fn via_adj_matches_direct_on_small_inputs() {
        for cat in [fixtures::dual(Field::GF2), fixtures::a2(gf(3)), fixtures::exterior(gf(3))] {
            let direct = HochschildComplex::new(Arc::new(cat.clone()), 5).unwrap();
            let via = hochschild_via_adj_bar(&cat, 5).unwrap();
            let bound = direct.safe_bound().min(via.safe_bound());
            let SafeBound::UpTo(top) = bound else { panic!("finite bound expected") };
            assert_eq!(direct.betti_range(0..=top), via.betti_range(0..=top));
        }
    }

    #[test]
    fn composition_rejects_bad_inputs() {
        let d = diagonal(&fixtures::dual(Field::GF2));
        let e = diagonal(&fixtures::a2(Field::GF2));
        assert!(matches!(compose(&d, &e, 3), Err(Error::CategoryMismatch)));
        assert!(matches!(compose(&d, &d, 0), Err(Error::TruncationTooSmall(0))));
    }
}
