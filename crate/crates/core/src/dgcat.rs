//! Finite dg-categories given by hom complexes and composition structure
//! constants, written in diagrammatic order: `f ∈ A(a,b)`, `g ∈ A(b,c)`
//! compose to `fg ∈ A(a,c)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::complex::{check_same, tensor_cx_indexed, ChainComplex, Grading};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar, SparseVec};
use crate::names;

/// Composition table for one object triple `(a,b,c)`: entry
/// `i * dim A(b,c) + k` is the product of generator `i` of `A(a,b)` with
/// generator `k` of `A(b,c)`.
pub(crate) type Table = Vec<SparseVec>;

#[derive(Clone, PartialEq, Eq)]
pub struct DgCategory {
    field: Field,
    grading: Grading,
    objects: Vec<String>,
    homs: Vec<ChainComplex>,
    comp: BTreeMap<(usize, usize, usize), Table>,
    units: Option<Vec<SparseVec>>,
}

impl fmt::Debug for DgCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DgCategory[{}, {}] objects {:?}", self.field, self.grading, self.objects)?;
        for a in 0..self.n_objects() {
            for b in 0..self.n_objects() {
                let h = self.hom(a, b);
                if !h.is_empty() {
                    write!(f, "\n  {}→{}: {:?}", self.objects[a], self.objects[b], h)?;
                }
            }
        }
        Ok(())
    }
}

/// Which axiom a [`CategoryFailure`] violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Leibniz,
    Associativity,
    UnitNotCycle,
    UnitDegree,
    LeftUnit,
    RightUnit,
}

/// One violated axiom instance: the object tuple and the basis elements
/// (as `src|dst:name`) that witness it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Failure<A> {
    pub axiom: A,
    pub objects: Vec<String>,
    pub witness: Vec<String>,
}

pub type CategoryFailure = Failure<Axiom>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CategoryReport {
    pub failures: Vec<CategoryFailure>,
}

impl CategoryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn violates(&self, axiom: Axiom) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }
}

impl fmt::Display for CategoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "category ok");
        }
        for fail in &self.failures {
            writeln!(
                f,
                "{:?} fails at objects ({}) witness [{}]",
                fail.axiom,
                fail.objects.join(","),
                fail.witness.join(", ")
            )?;
        }
        Ok(())
    }
}

/// Collects one witness per (axiom, object tuple).
pub(crate) struct FailureLog<A> {
    seen: BTreeSet<(A, Vec<usize>)>,
    out: Vec<Failure<A>>,
}

impl<A> Default for FailureLog<A> {
    fn default() -> Self {
        FailureLog {
            seen: BTreeSet::new(),
            out: Vec::new(),
        }
    }
}

impl<A: Ord + Copy> FailureLog<A> {
    pub(crate) fn record(
        &mut self,
        axiom: A,
        objs: &[usize],
        mut obj_name: impl FnMut(usize) -> String,
        witness: impl FnOnce() -> Vec<String>,
    ) {
        if self.seen.insert((axiom, objs.to_vec())) {
            self.out.push(Failure {
                axiom,
                objects: objs.iter().map(|&o| obj_name(o)).collect(),
                witness: witness(),
            });
        }
    }

    pub(crate) fn into_failures(self) -> Vec<Failure<A>> {
        self.out
    }
}

/// Incremental construction by object and generator names.
pub struct DgCategoryBuilder {
    field: Field,
    grading: Grading,
    objects: Vec<String>,
    index: HashMap<String, usize>,
    homs: Vec<ChainComplex>,
    comp: BTreeMap<(usize, usize, usize), Table>,
    units: Vec<Option<SparseVec>>,
}

impl DgCategoryBuilder {
    pub fn new(field: Field, grading: Grading, objects: Vec<String>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(Error::Malformed(format!("duplicate object `{o}`")));
            }
        }
        let n = objects.len();
        Ok(DgCategoryBuilder {
            field,
            grading,
            index,
            homs: vec![ChainComplex::zero(field, grading); n * n],
            comp: BTreeMap::new(),
            units: vec![None; n],
            objects,
        })
    }

    pub fn object(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    pub fn hom(&mut self, a: &str, b: &str, complex: ChainComplex) -> Result<&mut Self> {
        let (a, b) = (self.object(a)?, self.object(b)?);
        self.hom_at(a, b, complex)
    }

    pub fn hom_at(&mut self, a: usize, b: usize, complex: ChainComplex) -> Result<&mut Self> {
        check_same(self.field, self.grading, complex.field(), complex.grading())?;
        let n = self.objects.len();
        self.homs[a * n + b] = complex;
        Ok(self)
    }

    fn gen_index(&self, a: usize, b: usize, name: &str) -> Result<usize> {
        let n = self.objects.len();
        self.homs[a * n + b].index_of(name).ok_or_else(|| {
            Error::UnknownName(format!("{}|{}:{}", self.objects[a], self.objects[b], name))
        })
    }

    /// Declares `left * right = Σ coeff · out` with `left ∈ A(a,b)`, `right ∈ A(b,c)`.
    pub fn compose(
        &mut self,
        (a, b, c): (&str, &str, &str),
        left: &str,
        right: &str,
        out: &[(&str, i64)],
    ) -> Result<&mut Self> {
        let (a, b, c) = (self.object(a)?, self.object(b)?, self.object(c)?);
        let i = self.gen_index(a, b, left)?;
        let k = self.gen_index(b, c, right)?;
        let mut v = Vec::with_capacity(out.len());
        for &(name, coeff) in out {
            v.push((self.gen_index(a, c, name)?, self.field.reduce(coeff)));
        }
        let v = self.field.collect(v);
        self.compose_at((a, b, c), i, k, v)
    }

    pub fn compose_at(
        &mut self,
        (a, b, c): (usize, usize, usize),
        i: usize,
        k: usize,
        out: SparseVec,
    ) -> Result<&mut Self> {
        let n = self.objects.len();
        let (dab, dbc) = (self.homs[a * n + b].total_dim(), self.homs[b * n + c].total_dim());
        if i >= dab || k >= dbc || out.iter().any(|t| t.0 >= self.homs[a * n + c].total_dim()) {
            return Err(Error::Malformed(format!(
                "composition entry out of range at ({}, {}, {})",
                self.objects[a], self.objects[b], self.objects[c]
            )));
        }
        let table = self
            .comp
            .entry((a, b, c))
            .or_insert_with(|| vec![Vec::new(); dab * dbc]);
        table[i * dbc + k] = out;
        Ok(self)
    }

    pub fn unit(&mut self, a: &str, v: &[(&str, i64)]) -> Result<&mut Self> {
        let a = self.object(a)?;
        let mut out = Vec::with_capacity(v.len());
        for &(name, coeff) in v {
            out.push((self.gen_index(a, a, name)?, self.field.reduce(coeff)));
        }
        let out = self.field.collect(out);
        self.unit_at(a, out)
    }

    pub fn unit_at(&mut self, a: usize, v: SparseVec) -> Result<&mut Self> {
        self.units[a] = Some(v);
        Ok(self)
    }

    pub fn build(self) -> Result<DgCategory> {
        let n = self.objects.len();
        let grading = self.grading;
        for (&(a, b, c), table) in &self.comp {
            let (hab, hbc, hac) = (
                &self.homs[a * n + b],
                &self.homs[b * n + c],
                &self.homs[a * n + c],
            );
            if table.len() != hab.total_dim() * hbc.total_dim() {
                return Err(Error::Malformed(format!(
                    "composition table for ({}, {}, {}) predates a hom change",
                    self.objects[a], self.objects[b], self.objects[c]
                )));
            }
            for (pos, out) in table.iter().enumerate() {
                let (i, k) = (pos / hbc.total_dim(), pos % hbc.total_dim());
                let deg = grading.normalize(hab.degree_of(i) + hbc.degree_of(k));
                if let Some(&(t, _)) = out.iter().find(|&&(t, _)| hac.degree_of(t) != deg) {
                    return Err(Error::Malformed(format!(
                        "{} * {} has a term {} of the wrong degree",
                        hab.generator(i).name,
                        hbc.generator(k).name,
                        hac.generator(t).name
                    )));
                }
            }
        }
        let declared = self.units.iter().filter(|u| u.is_some()).count();
        let units = if declared == 0 && n > 0 {
            None
        } else if declared == n {
            Some(self.units.into_iter().map(Option::unwrap).collect())
        } else {
            return Err(Error::Malformed("units must be given for all objects or none".into()));
        };
        let mut comp = self.comp;
        comp.retain(|_, t| t.iter().any(|v| !v.is_empty()));
        Ok(DgCategory {
            field: self.field,
            grading,
            objects: self.objects,
            homs: self.homs,
            comp,
            units,
        })
    }
}

impl DgCategory {
    pub fn builder(field: Field, grading: Grading, objects: Vec<String>) -> Result<DgCategoryBuilder> {
        DgCategoryBuilder::new(field, grading, objects)
    }

    /// The category with no objects (the formal unit of [`sum_cat`]).
    pub fn empty(field: Field, grading: Grading) -> Self {
        DgCategory {
            field,
            grading,
            objects: Vec::new(),
            homs: Vec::new(),
            comp: BTreeMap::new(),
            units: Some(Vec::new()),
        }
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
    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    #[inline]
    pub fn hom(&self, a: usize, b: usize) -> &ChainComplex {
        &self.homs[a * self.objects.len() + b]
    }

    #[inline]
    pub fn hom_dim(&self, a: usize, b: usize) -> usize {
        self.hom(a, b).total_dim()
    }

    pub fn total_hom_dim(&self) -> usize {
        self.homs.iter().map(ChainComplex::total_dim).sum()
    }

    /// Smallest degree occurring in any hom complex.
    pub fn min_hom_degree(&self) -> Option<i64> {
        self.homs.iter().filter_map(ChainComplex::min_degree).min()
    }

    pub(crate) fn tables(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Table)> {
        self.comp.iter()
    }

    /// Product of basis elements `i ∈ A(a,b)` and `k ∈ A(b,c)`.
    #[inline]
    pub fn product(&self, (a, b, c): (usize, usize, usize), i: usize, k: usize) -> &[(usize, Scalar)] {
        match self.comp.get(&(a, b, c)) {
            Some(t) => &t[i * self.hom_dim(b, c) + k],
            None => &[],
        }
    }

    /// Bilinear extension of [`DgCategory::product`].
    pub fn compose(
        &self,
        objs: (usize, usize, usize),
        u: &[(usize, Scalar)],
        v: &[(usize, Scalar)],
    ) -> SparseVec {
        let f = self.field;
        let Some(table) = self.comp.get(&objs) else {
            return Vec::new();
        };
        let dbc = self.hom_dim(objs.1, objs.2);
        f.collect(u.iter().flat_map(|&(i, x)| {
            v.iter().flat_map(move |&(k, y)| {
                let xy = f.mul(x, y);
                table[i * dbc + k].iter().map(move |&(t, z)| (t, f.mul(xy, z)))
            })
        }))
    }

    pub fn is_unital(&self) -> bool {
        self.units.is_some()
    }

    pub fn unit(&self, a: usize) -> Option<&SparseVec> {
        self.units.as_ref().map(|u| &u[a])
    }

    pub(crate) fn gen_label(&self, a: usize, b: usize, i: usize) -> String {
        format!(
            "{}|{}:{}",
            self.objects[a],
            self.objects[b],
            self.hom(a, b).generator(i).name
        )
    }

    /// Checks the Leibniz rule, associativity and (if present) the unit laws.
    pub fn validate(&self) -> CategoryReport {
        let f = self.field;
        let n = self.n_objects();
        let mut log = FailureLog::default();
        let name = |o: usize| self.objects[o].clone();
        let mut bad = self.homs.iter().enumerate().filter(|(_, h)| !h.validate().passed());
        if let Some((idx, h)) = bad.next() {
            let (a, b) = (idx / n, idx % n);
            log.record(Axiom::Leibniz, &[a, b], name, || {
                h.validate().failures.into_iter().map(|(_, w)| w).collect()
            });
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (hab, hbc, hac) = (self.hom(a, b), self.hom(b, c), self.hom(a, c));
                    for i in 0..hab.total_dim() {
                        let si = f.sign(hab.degree_of(i));
                        for k in 0..hbc.total_dim() {
                            let lhs = hac.apply_d(self.product((a, b, c), i, k));
                            let rhs = f.axpy(
                                &self.compose((a, b, c), hab.d(i), &[(k, 1)]),
                                si,
                                &self.compose((a, b, c), &[(i, 1)], hbc.d(k)),
                            );
                            if lhs != rhs {
                                log.record(Axiom::Leibniz, &[a, b, c], name, || {
                                    vec![self.gen_label(a, b, i), self.gen_label(b, c, k)]
                                });
                            }
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if !self.comp.contains_key(&(a, b, c)) {
                        continue;
                    }
                    for e in 0..n {
                        self.check_assoc((a, b, c, e), &mut log);
                    }
                }
            }
        }
        if let Some(units) = &self.units {
            for a in 0..n {
                let haa = self.hom(a, a);
                let u = &units[a];
                if u.iter().any(|&(t, _)| haa.degree_of(t) != 0) {
                    log.record(Axiom::UnitDegree, &[a], name, || vec![self.objects[a].clone()]);
                }
                if !haa.apply_d(u).is_empty() {
                    log.record(Axiom::UnitNotCycle, &[a], name, || vec![self.objects[a].clone()]);
                }
                for b in 0..n {
                    for i in 0..self.hom_dim(a, b) {
                        if self.compose((a, a, b), u, &[(i, 1)]) != vec![(i, 1)] {
                            log.record(Axiom::LeftUnit, &[a, b], name, || vec![self.gen_label(a, b, i)]);
                        }
                    }
                    for i in 0..self.hom_dim(b, a) {
                        if self.compose((b, a, a), &[(i, 1)], u) != vec![(i, 1)] {
                            log.record(Axiom::RightUnit, &[b, a], name, || vec![self.gen_label(b, a, i)]);
                        }
                    }
                }
            }
        }
        CategoryReport {
            failures: log.into_failures(),
        }
    }

    fn check_assoc(&self, (a, b, c, e): (usize, usize, usize, usize), log: &mut FailureLog<Axiom>) {
        let (dab, dbc, dce) = (self.hom_dim(a, b), self.hom_dim(b, c), self.hom_dim(c, e));
        for i in 0..dab {
            for k in 0..dbc {
                let fg = self.product((a, b, c), i, k);
                for l in 0..dce {
                    let left = self.compose((a, c, e), fg, &[(l, 1)]);
                    let gh = self.product((b, c, e), k, l);
                    let right = self.compose((a, b, e), &[(i, 1)], gh);
                    if left != right {
                        log.record(Axiom::Associativity, &[a, b, c, e], |o| self.objects[o].clone(), || {
                            vec![self.gen_label(a, b, i), self.gen_label(b, c, k), self.gen_label(c, e, l)]
                        });
                    }
                }
            }
        }
    }
}

/// 𝕂 as a dg-category: one object `*`, endomorphisms 𝕂 in degree 0.
pub fn unit_cat(field: Field, grading: Grading) -> DgCategory {
    let mut b = DgCategoryBuilder::new(field, grading, vec!["*".to_string()]).expect("one object");
    b.hom_at(0, 0, ChainComplex::unit(field, grading)).expect("same field");
    b.compose_at((0, 0, 0), 0, 0, vec![(0, 1)]).expect("in range");
    b.unit_at(0, vec![(0, 1)]).expect("in range");
    b.build().expect("unit category is well formed")
}

/// `A^op`: `A^op(a,b) = A(b,a)` with `f ·op g = (−1)^(|f||g|) g·f`.
pub fn opposite(cat: &DgCategory) -> DgCategory {
    let f = cat.field;
    let n = cat.n_objects();
    let mut homs = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            homs.push(cat.hom(b, a).clone());
        }
    }
    let mut comp = BTreeMap::new();
    for (&(c, b, a), table) in &cat.comp {
        // A(c,b) ⊗ A(b,a) → A(c,a) becomes A^op(a,b) ⊗ A^op(b,c) → A^op(a,c)
        let (hcb, hba) = (cat.hom(c, b), cat.hom(b, a));
        let (d_ab, d_bc) = (hba.total_dim(), hcb.total_dim());
        let mut t = vec![Vec::new(); d_ab * d_bc];
        for i in 0..d_ab {
            for k in 0..d_bc {
                let s = f.sign(hba.degree_of(i) * hcb.degree_of(k));
                t[i * d_bc + k] = f.scale(s, &table[k * d_ab + i]);
            }
        }
        comp.insert((a, b, c), t);
    }
    DgCategory {
        field: f,
        grading: cat.grading,
        objects: cat.objects.clone(),
        homs,
        comp,
        units: cat.units.clone(),
    }
}

/// `A ⊗ B`: objects are pairs `(a,b)` (index `a * |B| + b`), homs are tensor
/// complexes, composition is componentwise with the Koszul sign.
pub fn tensor_cat(ca: &DgCategory, cb: &DgCategory) -> Result<DgCategory> {
    check_same(ca.field, ca.grading, cb.field, cb.grading)?;
    let f = ca.field;
    let (na, nb) = (ca.n_objects(), cb.n_objects());
    let n = na * nb;
    let obj = |a: usize, b: usize| a * nb + b;
    let mut objects = Vec::with_capacity(n);
    for a in &ca.objects {
        for b in &cb.objects {
            objects.push(names::pair(a, b));
        }
    }
    let mut homs = vec![ChainComplex::zero(f, ca.grading); n * n];
    // positions[(x, y)][i * dim B + k] = flat index of e_i ⊗ e_k
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (a, c) in pairs(na) {
        for (b, d) in pairs(nb) {
            let (h, pos) = tensor_cx_indexed(ca.hom(a, c), cb.hom(b, d))?;
            let (x, y) = (obj(a, b), obj(c, d));
            homs[x * n + y] = h;
            positions[x * n + y] = pos;
        }
    }
    let mut comp = BTreeMap::new();
    for (&(a, c, e), ta) in &ca.comp {
        for (&(b, d, h), tb) in &cb.comp {
            let (x, y, z) = (obj(a, b), obj(c, d), obj(e, h));
            let (ha_ac, ha_ce) = (ca.hom(a, c), ca.hom(c, e));
            let (hb_bd, hb_dh) = (cb.hom(b, d), cb.hom(d, h));
            let (dac, dce, dbd, ddh) = (
                ha_ac.total_dim(),
                ha_ce.total_dim(),
                hb_bd.total_dim(),
                hb_dh.total_dim(),
            );
            let (pxy, pyz, pxz) = (&positions[x * n + y], &positions[y * n + z], &positions[x * n + z]);
            let dxy = dac * dbd;
            let dyz = dce * ddh;
            let bdim_xz = cb.hom_dim(b, h);
            let mut t = vec![Vec::new(); dxy * dyz];
            for i in 0..dac {
                for k in 0..dbd {
                    let left = pxy[i * dbd + k];
                    for i2 in 0..dce {
                        let s = f.sign(hb_bd.degree_of(k) * ha_ce.degree_of(i2));
                        let pa = &ta[i * dce + i2];
                        if pa.is_empty() {
                            continue;
                        }
                        for k2 in 0..ddh {
                            let pb = &tb[k * ddh + k2];
                            if pb.is_empty() {
                                continue;
                            }
                            let right = pyz[i2 * ddh + k2];
                            let out = f.collect(pa.iter().flat_map(|&(p, u)| {
                                pb.iter().map(move |&(q, v)| (pxz[p * bdim_xz + q], f.mul(s, f.mul(u, v))))
                            }));
                            t[left * dyz + right] = out;
                        }
                    }
                }
            }
            comp.insert((x, y, z), t);
        }
    }
    comp.retain(|_, t: &mut Table| t.iter().any(|v| !v.is_empty()));
    let units = match (&ca.units, &cb.units) {
        (Some(ua), Some(ub)) => {
            let mut us = Vec::with_capacity(n);
            for a in 0..na {
                for b in 0..nb {
                    let x = obj(a, b);
                    let pos = &positions[x * n + x];
                    let db = cb.hom_dim(b, b);
                    us.push(f.collect(ua[a].iter().flat_map(|&(p, u)| {
                        ub[b].iter().map(move |&(q, v)| (pos[p * db + q], f.mul(u, v)))
                    })));
                }
            }
            Some(us)
        }
        _ => None,
    };
    Ok(DgCategory {
        field: f,
        grading: ca.grading,
        objects,
        homs,
        comp,
        units,
    })
}

/// `A ⊕ B`: disjoint union of objects with zero complexes across the two
/// sides. Object names are kept unless they collide, in which case they are
/// prefixed `inl:` / `inr:`.
pub fn sum_cat(ca: &DgCategory, cb: &DgCategory) -> Result<DgCategory> {
    check_same(ca.field, ca.grading, cb.field, cb.grading)?;
    let (na, nb) = (ca.n_objects(), cb.n_objects());
    let n = na + nb;
    let collide = ca.objects.iter().any(|o| cb.objects.contains(o));
    let objects: Vec<String> = if collide {
        ca.objects
            .iter()
            .map(|o| format!("inl:{o}"))
            .chain(cb.objects.iter().map(|o| format!("inr:{o}")))
            .collect()
    } else {
        ca.objects.iter().chain(&cb.objects).cloned().collect()
    };
    let mut homs = vec![ChainComplex::zero(ca.field, ca.grading); n * n];
    for (a, b) in pairs(na) {
        homs[a * n + b] = ca.hom(a, b).clone();
    }
    for (a, b) in pairs(nb) {
        homs[(na + a) * n + na + b] = cb.hom(a, b).clone();
    }
    let mut comp = ca.comp.clone();
    for (&(a, b, c), t) in &cb.comp {
        comp.insert((na + a, na + b, na + c), t.clone());
    }
    let units = match (&ca.units, &cb.units) {
        (Some(ua), Some(ub)) => Some(ua.iter().chain(ub).cloned().collect()),
        _ => None,
    };
    Ok(DgCategory {
        field: ca.field,
        grading: ca.grading,
        objects,
        homs,
        comp,
        units,
    })
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn unit_category_is_valid() {
        let k = unit_cat(Field::GF2, Grading::Z);
        assert!(k.validate().passed());
        assert_eq!(k.total_hom_dim(), 1);
        assert_eq!(k.hom(0, 0).homology().unwrap().get(&0), Some(&1));
    }

    #[test]
    fn fixtures_validate() {
        assert!(fixtures::dual(Field::GF2).validate().passed());
        assert!(fixtures::a2(Field::GF2).validate().passed());
        assert!(fixtures::dual(Field::new(3).unwrap()).validate().passed());
    }

    fn two_dim_algebra(products: [(&str, &str, &[(&str, i64)]); 4]) -> DgCategory {
        let mut b = DgCategory::builder(Field::GF2, Grading::Z, vec!["*".into()]).unwrap();
        let hom = ChainComplex::new(Field::GF2, Grading::Z, [(0, vec!["1".into(), "x".into()])], []).unwrap();
        b.hom("*", "*", hom).unwrap();
        for (l, r, out) in products {
            b.compose(("*", "*", "*"), l, r, out).unwrap();
        }
        b.unit("*", &[("1", 1)]).unwrap();
        b.build().unwrap()
    }

    #[test]
    fn idempotent_square_is_still_an_algebra() {
        // x² = x gives 𝕂 × 𝕂, which is associative and unital
        let cat = two_dim_algebra([
            ("1", "1", &[("1", 1)]),
            ("1", "x", &[("x", 1)]),
            ("x", "1", &[("x", 1)]),
            ("x", "x", &[("x", 1)]),
        ]);
        assert!(cat.validate().passed());
    }

    #[test]
    fn corrupted_dual_fails() {
        let cat = two_dim_algebra([
            ("1", "1", &[("1", 1)]),
            ("1", "x", &[("x", 1)]),
            ("x", "1", &[]),
            ("x", "x", &[]),
        ]);
        let report = cat.validate();
        assert!(report.violates(Axiom::RightUnit));
        assert!(!report.violates(Axiom::LeftUnit));
    }

    #[test]
    fn non_associative_table_is_caught() {
        // 1·x = x, x·1 = x, x·x = 1 + x over a non-unital reading of the
        // same space but with 1·1 = x: (1·1)·x = x·x ≠ 1·(1·x) = 1·x
        let cat = two_dim_algebra([
            ("1", "1", &[("x", 1)]),
            ("1", "x", &[("x", 1)]),
            ("x", "1", &[("x", 1)]),
            ("x", "x", &[("1", 1), ("x", 1)]),
        ]);
        assert!(cat.validate().violates(Axiom::Associativity));
    }

    #[test]
    fn opposite_examples() {
        let dual = fixtures::dual(Field::GF2);
        assert_eq!(opposite(&dual), dual);
        let a2 = fixtures::a2(Field::GF2);
        let op = opposite(&a2);
        let (x, y) = (op.object_index("x").unwrap(), op.object_index("y").unwrap());
        assert_eq!(op.hom_dim(y, x), 1);
        assert_eq!(op.hom_dim(x, y), 0);
        assert!(op.validate().passed());
        assert_eq!(opposite(&op), a2);
    }

    #[test]
    fn tensor_examples() {
        let a2 = fixtures::a2(Field::GF2);
        let t = tensor_cat(&a2, &a2).unwrap();
        assert_eq!(t.n_objects(), 4);
        let (xx, yy) = (t.object_index("(x,x)").unwrap(), t.object_index("(y,y)").unwrap());
        assert_eq!(t.hom_dim(xx, yy), 1);
        assert!(t.validate().passed());

        let k = unit_cat(Field::GF2, Grading::Z);
        let kk = tensor_cat(&k, &k).unwrap();
        assert_eq!(kk.n_objects(), 1);
        assert_eq!(kk.total_hom_dim(), 1);
        assert!(kk.validate().passed());

        let dual = fixtures::dual(Field::GF2);
        let dd = tensor_cat(&dual, &dual).unwrap();
        assert_eq!(dd.total_hom_dim(), 4);
        assert!(dd.validate().passed());
    }

    #[test]
    fn sum_examples() {
        let a2 = fixtures::a2(Field::GF2);
        let k = unit_cat(Field::GF2, Grading::Z);
        let s = sum_cat(&a2, &k).unwrap();
        assert_eq!(s.n_objects(), 3);
        assert_eq!(s.hom_dim(0, 2) + s.hom_dim(2, 0) + s.hom_dim(1, 2) + s.hom_dim(2, 1), 0);
        assert!(s.validate().passed());
        let e = DgCategory::empty(Field::GF2, Grading::Z);
        assert_eq!(sum_cat(&a2, &e).unwrap(), a2);
    }

    #[test]
    fn mismatch_errors() {
        let a = unit_cat(Field::GF2, Grading::Z);
        let b = unit_cat(Field::new(3).unwrap(), Grading::Z);
        let c = unit_cat(Field::GF2, Grading::Z2);
        assert!(matches!(tensor_cat(&a, &b), Err(Error::FieldMismatch(..))));
        assert!(matches!(sum_cat(&a, &c), Err(Error::GradingMismatch(..))));
    }
}
