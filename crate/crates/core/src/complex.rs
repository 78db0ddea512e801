//! Finite chain complexes with degree −1 differential, in ℤ- or ℤ/2-graded
//! mode.
//!
//! Conventions: the tensor differential is `d(x⊗y) = dx⊗y + (−1)^|x| x⊗dy`;
//! the shift `C[k]` raises degrees by `k` and multiplies the differential by
//! `(−1)^k`; a degree-`n` elementary map `x ↦ y` has `|y| − |x| = n` and
//! `Df = f∘d + (−1)^(n+1) d∘f`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar, SparseVec};
use crate::linalg::{rank, SparseMatrix};
use crate::names;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grading {
    /// ℤ-graded.
    Z,
    /// ℤ/2-graded: degrees live in {0, 1}.
    Z2,
}

impl Grading {
    #[inline]
    pub fn normalize(self, degree: i64) -> i64 {
        match self {
            Grading::Z => degree,
            Grading::Z2 => degree.rem_euclid(2),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Grading::Z => "Z",
            Grading::Z2 => "Z2",
        }
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
}

/// A finite-dimensional chain complex with a named, ordered basis.
///
/// Generators are stored in one flat list sorted by degree (stable, so the
/// order within a degree is the construction order). All structure constants
/// elsewhere in the crate refer to generators by flat index.
#[derive(Clone)]
pub struct ChainComplex {
    field: Field,
    grading: Grading,
    gens: Vec<Generator>,
    blocks: BTreeMap<i64, Range<usize>>,
    d: Vec<SparseVec>,
    index: HashMap<String, usize>,
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.grading == other.grading
            && self.gens == other.gens
            && self.d == other.d
    }
}

impl Eq for ChainComplex {}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex[{}, {}] {{", self.field, self.grading)?;
        for (deg, r) in &self.blocks {
            write!(f, " {deg}: [")?;
            for i in r.clone() {
                write!(f, "{}", self.gens[i].name)?;
                if !self.d[i].is_empty() {
                    write!(f, " -> ")?;
                    for &(t, c) in &self.d[i] {
                        write!(f, "{}*{} ", c, self.gens[t].name)?;
                    }
                }
                if i + 1 < r.end {
                    write!(f, ", ")?;
                }
            }
            write!(f, "]")?;
        }
        write!(f, " }}")
    }
}

/// Outcome of [`ChainComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComplexReport {
    /// `(degree, generator)` pairs with `d(d(generator)) ≠ 0`, one per failing degree.
    pub failures: Vec<(i64, String)>,
}

impl ComplexReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ComplexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "complex ok");
        }
        for (deg, w) in &self.failures {
            writeln!(f, "d^2 != 0 at degree {deg}: witness {w}")?;
        }
        Ok(())
    }
}

impl ChainComplex {
    /// Builds a complex from a degree → names map and differential entries
    /// `(source, [(target, coefficient)])`.
    pub fn new<B, D>(field: Field, grading: Grading, basis: B, d: D) -> Result<Self>
    where
        B: IntoIterator<Item = (i64, Vec<String>)>,
        D: IntoIterator<Item = (String, Vec<(String, i64)>)>,
    {
        let mut gens = Vec::new();
        for (deg, names) in basis {
            for name in names {
                gens.push(Generator {
                    name,
                    degree: grading.normalize(deg),
                });
            }
        }
        let mut lookup = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if lookup.insert(g.name.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate generator `{}`", g.name)));
            }
        }
        let mut diff: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); gens.len()];
        for (src, targets) in d {
            let &s = lookup.get(&src).ok_or_else(|| Error::UnknownName(src.clone()))?;
            for (t, c) in targets {
                let &ti = lookup.get(&t).ok_or_else(|| Error::UnknownName(t.clone()))?;
                diff[s].push((ti, field.reduce(c)));
            }
        }
        let diff = diff.into_iter().map(|v| field.collect(v)).collect();
        Self::from_generators(field, grading, gens, diff)
    }

    /// Builds a complex from generators in any order and differentials given
    /// as sparse vectors over the same (input) indexing.
    pub fn from_generators(
        field: Field,
        grading: Grading,
        gens: Vec<Generator>,
        d: Vec<SparseVec>,
    ) -> Result<Self> {
        Self::from_generators_indexed(field, grading, gens, d).map(|(c, _)| c)
    }

    /// Like [`ChainComplex::from_generators`], also returning the flat
    /// position of each input generator.
    pub(crate) fn from_generators_indexed(
        field: Field,
        grading: Grading,
        mut gens: Vec<Generator>,
        d: Vec<SparseVec>,
    ) -> Result<(Self, Vec<usize>)> {
        if gens.len() != d.len() {
            return Err(Error::DimensionMismatch(
                "one differential per generator required".into(),
            ));
        }
        for g in &mut gens {
            g.degree = grading.normalize(g.degree);
        }
        let mut order: Vec<usize> = (0..gens.len()).collect();
        order.sort_by_key(|&i| gens[i].degree);
        let mut new_pos = vec![0; gens.len()];
        for (k, &i) in order.iter().enumerate() {
            new_pos[i] = k;
        }
        let sorted: Vec<Generator> = order.iter().map(|&i| gens[i].clone()).collect();
        let mut diff = Vec::with_capacity(d.len());
        for &i in &order {
            let mut v: SparseVec = Vec::with_capacity(d[i].len());
            for &(t, c) in &d[i] {
                if t >= gens.len() {
                    return Err(Error::Malformed(format!(
                        "differential of `{}` refers to generator {t}",
                        gens[i].name
                    )));
                }
                let expect = grading.normalize(gens[i].degree - 1);
                if gens[t].degree != expect {
                    return Err(Error::Malformed(format!(
                        "d({}) has a term {} of degree {} (expected {expect})",
                        gens[i].name, gens[t].name, gens[t].degree
                    )));
                }
                v.push((new_pos[t], c));
            }
            diff.push(field.collect(v));
        }
        Ok((Self::assemble(field, grading, sorted, diff)?, new_pos))
    }

    /// Internal constructor: generators already sorted by normalized degree.
    pub(crate) fn assemble(
        field: Field,
        grading: Grading,
        gens: Vec<Generator>,
        d: Vec<SparseVec>,
    ) -> Result<Self> {
        let mut blocks: BTreeMap<i64, Range<usize>> = BTreeMap::new();
        let mut index = HashMap::with_capacity(gens.len());
        for (i, g) in gens.iter().enumerate() {
            debug_assert!(i == 0 || gens[i - 1].degree <= g.degree);
            blocks
                .entry(g.degree)
                .and_modify(|r| r.end = i + 1)
                .or_insert(i..i + 1);
            if index.insert(g.name.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate generator `{}`", g.name)));
            }
        }
        Ok(ChainComplex {
            field,
            grading,
            gens,
            blocks,
            d,
            index,
        })
    }

    pub fn zero(field: Field, grading: Grading) -> Self {
        Self::assemble(field, grading, Vec::new(), Vec::new()).expect("empty complex")
    }

    /// 𝕂 concentrated in `degree`, with one generator called `name`.
    pub fn scalar(field: Field, grading: Grading, degree: i64, name: &str) -> Self {
        let gens = vec![Generator {
            name: name.to_string(),
            degree: grading.normalize(degree),
        }];
        Self::assemble(field, grading, gens, vec![Vec::new()]).expect("one generator")
    }

    /// The tensor unit 𝟙: 𝕂 in degree 0, generator `1`.
    pub fn unit(field: Field, grading: Grading) -> Self {
        Self::scalar(field, grading, 0, "1")
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn grading(&self) -> Grading {
        self.grading
    }

    #[inline]
    pub fn total_dim(&self) -> usize {
        self.gens.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.block(degree).len()
    }

    /// Degrees with at least one generator, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.blocks.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.blocks.keys().next_back().copied()
    }

    /// Flat index range of the generators in `degree`.
    pub fn block(&self, degree: i64) -> Range<usize> {
        self.blocks
            .get(&self.grading.normalize(degree))
            .cloned()
            .unwrap_or(0..0)
    }

    pub fn basis(&self, degree: i64) -> &[Generator] {
        &self.gens[self.block(degree)]
    }

    #[inline]
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    #[inline]
    pub fn generator(&self, i: usize) -> &Generator {
        &self.gens[i]
    }

    #[inline]
    pub fn degree_of(&self, i: usize) -> i64 {
        self.gens[i].degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Differential of generator `i`, in flat indices.
    #[inline]
    pub fn d(&self, i: usize) -> &SparseVec {
        &self.d[i]
    }

    /// Applies the differential to a flat-indexed vector.
    pub fn apply_d(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let f = self.field;
        f.collect(
            v.iter()
                .flat_map(|&(i, c)| self.d[i].iter().map(move |&(t, x)| (t, f.mul(c, x)))),
        )
    }

    /// The matrix of `d_n : C_n → C_(n−1)` in local (per-degree) indices.
    pub fn differential(&self, n: i64) -> SparseMatrix {
        let src = self.block(n);
        let dst = self.block(n - 1);
        let cols: Vec<SparseVec> = src
            .clone()
            .map(|i| self.d[i].iter().map(|&(t, c)| (t - dst.start, c)).collect())
            .collect();
        SparseMatrix::from_columns(self.field, dst.len(), &cols).expect("differential lands in degree n-1")
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.iter().all(Vec::is_empty)
    }

    /// Checks `d∘d = 0`, reporting the first witness in each failing degree.
    pub fn validate(&self) -> ComplexReport {
        let mut failures = Vec::new();
        for (&deg, r) in &self.blocks {
            if let Some(i) = r.clone().find(|&i| !self.apply_d(&self.d[i]).is_empty()) {
                failures.push((deg, self.gens[i].name.clone()));
            }
        }
        ComplexReport { failures }
    }

    /// Betti number in one degree; the complex is assumed valid.
    pub fn betti(&self, n: i64) -> usize {
        let dim = self.dim(n);
        if dim == 0 {
            return 0;
        }
        dim - rank(&self.differential(n)) - rank(&self.differential(n + 1))
    }

    /// Betti numbers in every degree of the support.
    pub fn homology(&self) -> Result<BTreeMap<i64, usize>> {
        let report = self.validate();
        if let Some((deg, w)) = report.failures.first() {
            return Err(Error::InvalidComplex(format!("d^2 != 0 at degree {deg} (witness {w})")));
        }
        Ok(self.degrees().map(|n| (n, self.betti(n))).collect())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.blocks
            .iter()
            .map(|(&n, r)| if n.rem_euclid(2) == 0 { r.len() as i64 } else { -(r.len() as i64) })
            .sum()
    }

    /// `C[k]`: degrees raised by `k`, differential multiplied by `(−1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let f = self.field;
        let s = f.sign(k);
        let gens = self
            .gens
            .iter()
            .map(|g| Generator {
                name: g.name.clone(),
                degree: g.degree + k,
            })
            .collect();
        let d = self.d.iter().map(|v| f.scale(s, v)).collect();
        ChainComplex::from_generators(f, self.grading, gens, d).expect("shift preserves structure")
    }

    pub(crate) fn check_compatible(&self, other: &ChainComplex) -> Result<()> {
        check_same(self.field, self.grading, other.field, other.grading)
    }
}

pub(crate) fn check_same(f1: Field, g1: Grading, f2: Field, g2: Grading) -> Result<()> {
    if f1 != f2 {
        return Err(Error::FieldMismatch(f1.characteristic(), f2.characteristic()));
    }
    if g1 != g2 {
        return Err(Error::GradingMismatch(g1.to_string(), g2.to_string()));
    }
    Ok(())
}

/// Tensor product with the Koszul sign on the second summand of the
/// differential. The generator for `(x, y)` is named `x⊗y`; it sits at
/// flat input position `i * dim(C2) + k` before sorting by degree.
pub fn tensor_cx(c1: &ChainComplex, c2: &ChainComplex) -> Result<ChainComplex> {
    tensor_cx_indexed(c1, c2).map(|(c, _)| c)
}

/// Tensor product plus the flat position of `x_i ⊗ y_k` at `i * dim(C2) + k`.
pub(crate) fn tensor_cx_indexed(
    c1: &ChainComplex,
    c2: &ChainComplex,
) -> Result<(ChainComplex, Vec<usize>)> {
    c1.check_compatible(c2)?;
    let f = c1.field;
    let n2 = c2.total_dim();
    let mut gens = Vec::with_capacity(c1.total_dim() * n2);
    let mut d = Vec::with_capacity(c1.total_dim() * n2);
    for (i, x) in c1.gens.iter().enumerate() {
        let sx = f.sign(x.degree);
        for (k, y) in c2.gens.iter().enumerate() {
            gens.push(Generator {
                name: names::tensor(&x.name, &y.name),
                degree: x.degree + y.degree,
            });
            let terms = c1.d[i]
                .iter()
                .map(|&(t, c)| (t * n2 + k, c))
                .chain(c2.d[k].iter().map(|&(t, c)| (i * n2 + t, f.mul(sx, c))));
            d.push(f.collect(terms));
        }
    }
    ChainComplex::from_generators_indexed(f, c1.grading, gens, d)
}

/// The hom complex: basis of elementary maps `x ↦ y` of degree `|y| − |x|`,
/// with `Df = f∘d₁ + (−1)^(n+1) d₂∘f`.
pub fn hom_cx(c1: &ChainComplex, c2: &ChainComplex) -> Result<ChainComplex> {
    c1.check_compatible(c2)?;
    let f = c1.field;
    let n2 = c2.total_dim();
    // preimages of each generator of C1 under d
    let mut pre: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); c1.total_dim()];
    for (z, dz) in c1.d.iter().enumerate() {
        for &(x, c) in dz {
            pre[x].push((z, c));
        }
    }
    let mut gens = Vec::with_capacity(c1.total_dim() * n2);
    let mut d = Vec::with_capacity(c1.total_dim() * n2);
    for (i, x) in c1.gens.iter().enumerate() {
        for (k, y) in c2.gens.iter().enumerate() {
            let n = y.degree - x.degree;
            gens.push(Generator {
                name: names::elementary_map(&x.name, &y.name),
                degree: n,
            });
            let s = f.sign(n + 1);
            let terms = pre[i]
                .iter()
                .map(|&(z, c)| (z * n2 + k, c))
                .chain(c2.d[k].iter().map(|&(t, c)| (i * n2 + t, f.mul(s, c))));
            d.push(f.collect(terms));
        }
    }
    ChainComplex::from_generators(f, c1.grading, gens, d)
}
