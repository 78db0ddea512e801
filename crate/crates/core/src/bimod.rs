//! Bimodules over pairs of dg-categories, given by slot complexes and action
//! structure constants, plus the strict complex of natural transformations.
//!
//! A bimodule `V` over `(A, B)` has a complex `V(a,b)` for every pair of
//! objects, a left action `A(a',a) ⊗ V(a,b) → V(a',b)` and a right action
//! `V(a,b) ⊗ B(b,b') → V(a,b')`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::complex::{check_same, hom_cx, tensor_cx_indexed, ChainComplex, Grading};
use crate::dgcat::{opposite, tensor_cat, unit_cat, DgCategory, Failure, FailureLog, Table};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar, SparseVec};
use crate::linalg::{kernel_basis_with_free, SparseMatrix};
use crate::names;

#[derive(Clone, PartialEq, Eq)]
pub struct Bimodule {
    left: Arc<DgCategory>,
    right: Arc<DgCategory>,
    slots: Vec<ChainComplex>,
    /// `(a', a, b)`: entry `i * dim V(a,b) + v` is `f_i · v`.
    lact: BTreeMap<(usize, usize, usize), Table>,
    /// `(a, b, b')`: entry `v * dim B(b,b') + k` is `v · g_k`.
    ract: BTreeMap<(usize, usize, usize), Table>,
}

impl fmt::Debug for Bimodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bimodule over ({:?}, {:?}) slot dims {:?}",
            self.left.objects(),
            self.right.objects(),
            self.slots.iter().map(ChainComplex::total_dim).collect::<Vec<_>>()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BimoduleAxiom {
    SlotComplex,
    LeftLeibniz,
    RightLeibniz,
    LeftAssociativity,
    RightAssociativity,
    Commutation,
    LeftUnit,
    RightUnit,
}

impl fmt::Display for BimoduleAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BimoduleAxiom::SlotComplex => "slot-complex",
            BimoduleAxiom::LeftLeibniz => "left-leibniz",
            BimoduleAxiom::RightLeibniz => "right-leibniz",
            BimoduleAxiom::LeftAssociativity => "left-associativity",
            BimoduleAxiom::RightAssociativity => "right-associativity",
            BimoduleAxiom::Commutation => "commutation",
            BimoduleAxiom::LeftUnit => "left-unit",
            BimoduleAxiom::RightUnit => "right-unit",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BimoduleReport {
    pub failures: Vec<Failure<BimoduleAxiom>>,
}

impl BimoduleReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn violates(&self, axiom: BimoduleAxiom) -> bool {
        self.failures.iter().any(|f| f.axiom == axiom)
    }
}

impl fmt::Display for BimoduleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "bimodule: pass");
        }
        writeln!(f, "bimodule: fail")?;
        for x in &self.failures {
            writeln!(f, "  {} at ({}) witness {}", x.axiom, x.objects.join(", "), x.witness.join(" "))?;
        }
        Ok(())
    }
}

/// Incremental construction by object and generator names.
pub struct BimoduleBuilder {
    left: Arc<DgCategory>,
    right: Arc<DgCategory>,
    slots: Vec<ChainComplex>,
    lact: BTreeMap<(usize, usize, usize), Table>,
    ract: BTreeMap<(usize, usize, usize), Table>,
}

impl BimoduleBuilder {
    pub fn new(left: Arc<DgCategory>, right: Arc<DgCategory>) -> Result<Self> {
        check_same(left.field(), left.grading(), right.field(), right.grading())?;
        let zero = ChainComplex::zero(left.field(), left.grading());
        let slots = vec![zero; left.n_objects() * right.n_objects()];
        Ok(BimoduleBuilder {
            left,
            right,
            slots,
            lact: BTreeMap::new(),
            ract: BTreeMap::new(),
        })
    }

    fn objects(&self, a: &str, b: &str) -> Result<(usize, usize)> {
        let a = self.left.object_index(a).ok_or_else(|| Error::UnknownName(a.into()))?;
        let b = self.right.object_index(b).ok_or_else(|| Error::UnknownName(b.into()))?;
        Ok((a, b))
    }

    fn slot_ref(&self, a: usize, b: usize) -> &ChainComplex {
        &self.slots[a * self.right.n_objects() + b]
    }

    pub fn slot(&mut self, a: &str, b: &str, complex: ChainComplex) -> Result<&mut Self> {
        let (a, b) = self.objects(a, b)?;
        self.slot_at(a, b, complex)
    }

    pub fn slot_at(&mut self, a: usize, b: usize, complex: ChainComplex) -> Result<&mut Self> {
        check_same(self.left.field(), self.left.grading(), complex.field(), complex.grading())?;
        let nb = self.right.n_objects();
        self.slots[a * nb + b] = complex;
        self.lact.retain(|&(a2, a1, b1), _| !((a2 == a || a1 == a) && b1 == b));
        self.ract.retain(|&(a1, b1, b2), _| !(a1 == a && (b1 == b || b2 == b)));
        Ok(self)
    }

    fn lookup(complex: &ChainComplex, name: &str) -> Result<usize> {
        complex.index_of(name).ok_or_else(|| Error::UnknownName(name.into()))
    }

    fn resolve(&self, complex: &ChainComplex, out: &[(&str, i64)]) -> Result<SparseVec> {
        let f = self.left.field();
        let mut v = Vec::with_capacity(out.len());
        for &(name, c) in out {
            v.push((Self::lookup(complex, name)?, f.reduce(c)));
        }
        Ok(f.collect(v))
    }

    /// Sets `f · v` for `f ∈ A(a',a)` and `v ∈ V(a,b)`.
    pub fn left_action(
        &mut self,
        (a2, a, b): (&str, &str, &str),
        f_name: &str,
        v_name: &str,
        out: &[(&str, i64)],
    ) -> Result<&mut Self> {
        let (a2, _) = self.objects(a2, b)?;
        let (a, b) = self.objects(a, b)?;
        let i = Self::lookup(self.left.hom(a2, a), f_name)?;
        let v = Self::lookup(self.slot_ref(a, b), v_name)?;
        let out = self.resolve(self.slot_ref(a2, b), out)?;
        self.left_action_at((a2, a, b), i, v, out)
    }

    pub fn left_action_at(
        &mut self,
        (a2, a, b): (usize, usize, usize),
        i: usize,
        v: usize,
        out: SparseVec,
    ) -> Result<&mut Self> {
        let (dl, dv) = (self.left.hom_dim(a2, a), self.slot_ref(a, b).total_dim());
        let dout = self.slot_ref(a2, b).total_dim();
        if i >= dl || v >= dv || out.iter().any(|&(t, _)| t >= dout) {
            return Err(Error::Malformed("left action entry out of range".into()));
        }
        let table = self.lact.entry((a2, a, b)).or_insert_with(|| vec![Vec::new(); dl * dv]);
        table[i * dv + v] = out;
        Ok(self)
    }

    /// Sets `v · g` for `v ∈ V(a,b)` and `g ∈ B(b,b')`.
    pub fn right_action(
        &mut self,
        (a, b, b2): (&str, &str, &str),
        v_name: &str,
        g_name: &str,
        out: &[(&str, i64)],
    ) -> Result<&mut Self> {
        let (a, b) = self.objects(a, b)?;
        let b2 = self.right.object_index(b2).ok_or_else(|| Error::UnknownName(b2.into()))?;
        let v = Self::lookup(self.slot_ref(a, b), v_name)?;
        let k = Self::lookup(self.right.hom(b, b2), g_name)?;
        let out = self.resolve(self.slot_ref(a, b2), out)?;
        self.right_action_at((a, b, b2), v, k, out)
    }

    pub fn right_action_at(
        &mut self,
        (a, b, b2): (usize, usize, usize),
        v: usize,
        k: usize,
        out: SparseVec,
    ) -> Result<&mut Self> {
        let (dv, dr) = (self.slot_ref(a, b).total_dim(), self.right.hom_dim(b, b2));
        let dout = self.slot_ref(a, b2).total_dim();
        if v >= dv || k >= dr || out.iter().any(|&(t, _)| t >= dout) {
            return Err(Error::Malformed("right action entry out of range".into()));
        }
        let table = self.ract.entry((a, b, b2)).or_insert_with(|| vec![Vec::new(); dv * dr]);
        table[v * dr + k] = out;
        Ok(self)
    }

    /// Checks degree additivity of every action entry.
    pub fn build(self) -> Result<Bimodule> {
        let g = self.left.grading();
        let nb = self.right.n_objects();
        let slot = |a: usize, b: usize| &self.slots[a * nb + b];
        for (&(a2, a, b), t) in &self.lact {
            let (h, src, dst) = (self.left.hom(a2, a), slot(a, b), slot(a2, b));
            for (pos, out) in t.iter().enumerate() {
                let (i, v) = (pos / src.total_dim(), pos % src.total_dim());
                let deg = g.normalize(h.degree_of(i) + src.degree_of(v));
                if out.iter().any(|&(w, _)| dst.degree_of(w) != deg) {
                    return Err(Error::Malformed(format!(
                        "{} · {} has a term of the wrong degree",
                        h.generator(i).name,
                        src.generator(v).name
                    )));
                }
            }
        }
        for (&(a, b, b2), t) in &self.ract {
            let (src, h, dst) = (slot(a, b), self.right.hom(b, b2), slot(a, b2));
            for (pos, out) in t.iter().enumerate() {
                let (v, k) = (pos / h.total_dim(), pos % h.total_dim());
                let deg = g.normalize(src.degree_of(v) + h.degree_of(k));
                if out.iter().any(|&(w, _)| dst.degree_of(w) != deg) {
                    return Err(Error::Malformed(format!(
                        "{} · {} has a term of the wrong degree",
                        src.generator(v).name,
                        h.generator(k).name
                    )));
                }
            }
        }
        Ok(Bimodule::from_parts(self.left, self.right, self.slots, self.lact, self.ract))
    }
}

impl Bimodule {
    pub fn builder(left: Arc<DgCategory>, right: Arc<DgCategory>) -> Result<BimoduleBuilder> {
        BimoduleBuilder::new(left, right)
    }

    pub(crate) fn from_parts(
        left: Arc<DgCategory>,
        right: Arc<DgCategory>,
        slots: Vec<ChainComplex>,
        mut lact: BTreeMap<(usize, usize, usize), Table>,
        mut ract: BTreeMap<(usize, usize, usize), Table>,
    ) -> Bimodule {
        lact.retain(|_, t| t.iter().any(|v| !v.is_empty()));
        ract.retain(|_, t| t.iter().any(|v| !v.is_empty()));
        Bimodule {
            left,
            right,
            slots,
            lact,
            ract,
        }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.left.field()
    }

    #[inline]
    pub fn grading(&self) -> Grading {
        self.left.grading()
    }

    pub fn left_cat(&self) -> &Arc<DgCategory> {
        &self.left
    }

    pub fn right_cat(&self) -> &Arc<DgCategory> {
        &self.right
    }

    #[inline]
    pub fn slot(&self, a: usize, b: usize) -> &ChainComplex {
        &self.slots[a * self.right.n_objects() + b]
    }

    pub fn slot_dim(&self, a: usize, b: usize) -> usize {
        self.slot(a, b).total_dim()
    }

    pub fn total_dim(&self) -> usize {
        self.slots.iter().map(ChainComplex::total_dim).sum()
    }

    /// Smallest degree in any slot.
    pub fn min_degree(&self) -> Option<i64> {
        self.slots.iter().filter_map(ChainComplex::min_degree).min()
    }

    /// Betti numbers of every slot, keyed by `(a, b)`.
    pub fn slot_homology(&self) -> Result<BTreeMap<(usize, usize), BTreeMap<i64, usize>>> {
        let nb = self.right.n_objects();
        self.slots
            .iter()
            .enumerate()
            .map(|(s, c)| Ok(((s / nb, s % nb), c.homology()?)))
            .collect()
    }

    /// `f_i · v` for `f_i ∈ A(a',a)`, `v ∈ V(a,b)`.
    #[inline]
    pub fn left_product(&self, (a2, a, b): (usize, usize, usize), i: usize, v: usize) -> &[(usize, Scalar)] {
        match self.lact.get(&(a2, a, b)) {
            Some(t) => &t[i * self.slot_dim(a, b) + v],
            None => &[],
        }
    }

    /// `v · g_k` for `v ∈ V(a,b)`, `g_k ∈ B(b,b')`.
    #[inline]
    pub fn right_product(&self, (a, b, b2): (usize, usize, usize), v: usize, k: usize) -> &[(usize, Scalar)] {
        match self.ract.get(&(a, b, b2)) {
            Some(t) => &t[v * self.right.hom_dim(b, b2) + k],
            None => &[],
        }
    }

    pub fn act_left(&self, objs: (usize, usize, usize), f: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let fl = self.field();
        fl.collect(f.iter().flat_map(|&(i, x)| {
            v.iter().flat_map(move |&(w, y)| {
                let xy = fl.mul(x, y);
                self.left_product(objs, i, w).iter().map(move |&(t, z)| (t, fl.mul(xy, z)))
            })
        }))
    }

    pub fn act_right(&self, objs: (usize, usize, usize), v: &[(usize, Scalar)], g: &[(usize, Scalar)]) -> SparseVec {
        let fl = self.field();
        fl.collect(v.iter().flat_map(|&(w, x)| {
            g.iter().flat_map(move |&(k, y)| {
                let xy = fl.mul(x, y);
                self.right_product(objs, w, k).iter().map(move |&(t, z)| (t, fl.mul(xy, z)))
            })
        }))
    }

    fn slot_label(&self, a: usize, b: usize, v: usize) -> String {
        format!(
            "{}|{}:{}",
            self.left.objects()[a],
            self.right.objects()[b],
            self.slot(a, b).generator(v).name
        )
    }

    /// Checks slot complexes, Leibniz rules, associativity and commutation
    /// of the actions, and unit actions where the categories are unital.
    pub fn validate(&self) -> BimoduleReport {
        use BimoduleAxiom::*;
        let fl = self.field();
        let (na, nb) = (self.left.n_objects(), self.right.n_objects());
        let (lc, rc) = (&*self.left, &*self.right);
        let mut log: FailureLog<BimoduleAxiom> = FailureLog::default();
        let lname = |o: usize| lc.objects()[o].clone();
        let rname = |o: usize| rc.objects()[o].clone();
        // object tuples mix both categories, so record names directly
        let mut note = |ax: BimoduleAxiom, key: Vec<usize>, objs: Vec<String>, w: Vec<String>| {
            let mut names = objs.into_iter();
            log.record(ax, &key, |_| names.next().unwrap_or_default(), || w);
        };
        for a in 0..na {
            for b in 0..nb {
                let r = self.slot(a, b).validate();
                if !r.passed() {
                    let w = r.failures.into_iter().map(|(_, w)| w).collect();
                    note(SlotComplex, vec![a, b], vec![lname(a), rname(b)], w);
                }
            }
        }
        for a2 in 0..na {
            for a in 0..na {
                let h = lc.hom(a2, a);
                for b in 0..nb {
                    let (src, dst) = (self.slot(a, b), self.slot(a2, b));
                    for i in 0..h.total_dim() {
                        let si = fl.sign(h.degree_of(i));
                        for v in 0..src.total_dim() {
                            let lhs = dst.apply_d(self.left_product((a2, a, b), i, v));
                            let rhs = fl.axpy(
                                &self.act_left((a2, a, b), h.d(i), &[(v, 1)]),
                                si,
                                &self.act_left((a2, a, b), &[(i, 1)], src.d(v)),
                            );
                            if lhs != rhs {
                                note(
                                    LeftLeibniz,
                                    vec![a2, a, b],
                                    vec![lname(a2), lname(a), rname(b)],
                                    vec![lc.gen_label(a2, a, i), self.slot_label(a, b, v)],
                                );
                            }
                        }
                    }
                }
            }
        }
        for a in 0..na {
            for b in 0..nb {
                let src = self.slot(a, b);
                for b2 in 0..nb {
                    let (h, dst) = (rc.hom(b, b2), self.slot(a, b2));
                    for v in 0..src.total_dim() {
                        let sv = fl.sign(src.degree_of(v));
                        for k in 0..h.total_dim() {
                            let lhs = dst.apply_d(self.right_product((a, b, b2), v, k));
                            let rhs = fl.axpy(
                                &self.act_right((a, b, b2), src.d(v), &[(k, 1)]),
                                sv,
                                &self.act_right((a, b, b2), &[(v, 1)], h.d(k)),
                            );
                            if lhs != rhs {
                                note(
                                    RightLeibniz,
                                    vec![a, b, b2],
                                    vec![lname(a), rname(b), rname(b2)],
                                    vec![self.slot_label(a, b, v), rc.gen_label(b, b2, k)],
                                );
                            }
                        }
                    }
                }
            }
        }
        // (f f')·v = f·(f'·v) for f ∈ A(a3,a2), f' ∈ A(a2,a)
        for a3 in 0..na {
            for a2 in 0..na {
                for a in 0..na {
                    for b in 0..nb {
                        for i in 0..lc.hom_dim(a3, a2) {
                            for k in 0..lc.hom_dim(a2, a) {
                                let ff = lc.product((a3, a2, a), i, k);
                                for v in 0..self.slot_dim(a, b) {
                                    let lhs = self.act_left((a3, a, b), ff, &[(v, 1)]);
                                    let fv = self.left_product((a2, a, b), k, v);
                                    let rhs = self.act_left((a3, a2, b), &[(i, 1)], fv);
                                    if lhs != rhs {
                                        note(
                                            LeftAssociativity,
                                            vec![a3, a2, a, b],
                                            vec![lname(a3), lname(a2), lname(a), rname(b)],
                                            vec![
                                                lc.gen_label(a3, a2, i),
                                                lc.gen_label(a2, a, k),
                                                self.slot_label(a, b, v),
                                            ],
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // (v·g)·g' = v·(g g')
        for a in 0..na {
            for b in 0..nb {
                for b2 in 0..nb {
                    for b3 in 0..nb {
                        for v in 0..self.slot_dim(a, b) {
                            for k in 0..rc.hom_dim(b, b2) {
                                let vg = self.right_product((a, b, b2), v, k);
                                for l in 0..rc.hom_dim(b2, b3) {
                                    let lhs = self.act_right((a, b2, b3), vg, &[(l, 1)]);
                                    let gg = rc.product((b, b2, b3), k, l);
                                    let rhs = self.act_right((a, b, b3), &[(v, 1)], gg);
                                    if lhs != rhs {
                                        note(
                                            RightAssociativity,
                                            vec![a, b, b2, b3],
                                            vec![lname(a), rname(b), rname(b2), rname(b3)],
                                            vec![
                                                self.slot_label(a, b, v),
                                                rc.gen_label(b, b2, k),
                                                rc.gen_label(b2, b3, l),
                                            ],
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // (f·v)·g = f·(v·g)
        for a2 in 0..na {
            for a in 0..na {
                for b in 0..nb {
                    for b2 in 0..nb {
                        for i in 0..lc.hom_dim(a2, a) {
                            for v in 0..self.slot_dim(a, b) {
                                let fv = self.left_product((a2, a, b), i, v);
                                for k in 0..rc.hom_dim(b, b2) {
                                    let lhs = self.act_right((a2, b, b2), fv, &[(k, 1)]);
                                    let vg = self.right_product((a, b, b2), v, k);
                                    let rhs = self.act_left((a2, a, b2), &[(i, 1)], vg);
                                    if lhs != rhs {
                                        note(
                                            Commutation,
                                            vec![a2, a, b, b2],
                                            vec![lname(a2), lname(a), rname(b), rname(b2)],
                                            vec![
                                                lc.gen_label(a2, a, i),
                                                self.slot_label(a, b, v),
                                                rc.gen_label(b, b2, k),
                                            ],
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        for a in 0..na {
            for b in 0..nb {
                for v in 0..self.slot_dim(a, b) {
                    if let Some(u) = lc.unit(a) {
                        if self.act_left((a, a, b), u, &[(v, 1)]) != vec![(v, 1)] {
                            note(LeftUnit, vec![a, b], vec![lname(a), rname(b)], vec![self.slot_label(a, b, v)]);
                        }
                    }
                    if let Some(u) = rc.unit(b) {
                        if self.act_right((a, b, b), &[(v, 1)], u) != vec![(v, 1)] {
                            note(RightUnit, vec![a, b], vec![lname(a), rname(b)], vec![self.slot_label(a, b, v)]);
                        }
                    }
                }
            }
        }
        BimoduleReport {
            failures: log.into_failures(),
        }
    }

    /// `V[k]`: every slot shifted by `k`; `f · s(v) = (−1)^(k|f|) s(f·v)`.
    pub fn shift(&self, k: i64) -> Bimodule {
        let fl = self.field();
        let slots = self.slots.iter().map(|c| c.shift(k)).collect::<Vec<_>>();
        // shifting keeps the flat order, so indices carry over
        let lact = self
            .lact
            .iter()
            .map(|(&(a2, a, b), t)| {
                let h = self.left.hom(a2, a);
                let dv = self.slot_dim(a, b);
                let t = t
                    .iter()
                    .enumerate()
                    .map(|(pos, out)| fl.scale(fl.sign(k * h.degree_of(pos / dv.max(1))), out))
                    .collect();
                ((a2, a, b), t)
            })
            .collect();
        Bimodule::from_parts(self.left.clone(), self.right.clone(), slots, lact, self.ract.clone())
    }

    /// `V ⊗ W` for a complex `W`, with `(v⊗w)·g = (−1)^(|w||g|) (v·g)⊗w`.
    pub fn tensor_complex(&self, w: &ChainComplex) -> Result<Bimodule> {
        check_same(self.field(), self.grading(), w.field(), w.grading())?;
        let fl = self.field();
        let nw = w.total_dim();
        let mut slots = Vec::with_capacity(self.slots.len());
        let mut pos = Vec::with_capacity(self.slots.len());
        for s in &self.slots {
            let (c, p) = tensor_cx_indexed(s, w)?;
            slots.push(c);
            pos.push(p);
        }
        let nb = self.right.n_objects();
        let mut lact = BTreeMap::new();
        for (&(a2, a, b), t) in &self.lact {
            let dv = self.slot_dim(a, b);
            let (src, dst) = (&pos[a * nb + b], &pos[a2 * nb + b]);
            let mut out = vec![Vec::new(); t.len() * nw];
            for (p, prod) in t.iter().enumerate() {
                let (i, v) = (p / dv, p % dv);
                for x in 0..nw {
                    out[i * dv * nw + src[v * nw + x]] =
                        fl.collect(prod.iter().map(|&(r, c)| (dst[r * nw + x], c)));
                }
            }
            lact.insert((a2, a, b), out);
        }
        let mut ract = BTreeMap::new();
        for (&(a, b, b2), t) in &self.ract {
            let h = self.right.hom(b, b2);
            let dh = h.total_dim();
            let (src, dst) = (&pos[a * nb + b], &pos[a * nb + b2]);
            let mut out = vec![Vec::new(); t.len() * nw];
            for (p, prod) in t.iter().enumerate() {
                let (v, k) = (p / dh, p % dh);
                for x in 0..nw {
                    let s = fl.sign(w.degree_of(x) * h.degree_of(k));
                    out[src[v * nw + x] * dh + k] =
                        fl.collect(prod.iter().map(|&(r, c)| (dst[r * nw + x], fl.mul(s, c))));
                }
            }
            ract.insert((a, b, b2), out);
        }
        Ok(Bimodule::from_parts(self.left.clone(), self.right.clone(), slots, lact, ract))
    }
}

/// The diagonal bimodule `(a,b) ↦ A(a,b)` with composition as both actions.
pub fn diagonal(cat: &DgCategory) -> Bimodule {
    let n = cat.n_objects();
    let arc = Arc::new(cat.clone());
    let mut slots = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            slots.push(cat.hom(a, b).clone());
        }
    }
    // composition tables already use the action layouts
    let tables: BTreeMap<_, _> = cat.tables().map(|(&k, t)| (k, t.clone())).collect();
    Bimodule::from_parts(arc.clone(), arc, slots, tables.clone(), tables)
}

/// Flat positions of a tensor hom's basis, recomputed in the order
/// [`tensor_cat`] uses.
fn tensor_positions(c1: &ChainComplex, c2: &ChainComplex) -> Vec<usize> {
    tensor_cx_indexed(c1, c2).expect("same field").1
}

/// Exterior tensor product over `(A⊗C, B⊗D)`: slots are tensor complexes,
/// `(f⊗g)·(v⊗w) = (−1)^(|g||v|) (f·v)⊗(g·w)` and
/// `(v⊗w)·(h⊗k) = (−1)^(|w||h|) (v·h)⊗(w·k)`.
pub fn ext_tensor(v1: &Bimodule, v2: &Bimodule) -> Result<Bimodule> {
    check_same(v1.field(), v1.grading(), v2.field(), v2.grading())?;
    let fl = v1.field();
    let left = Arc::new(tensor_cat(&v1.left, &v2.left)?);
    let right = Arc::new(tensor_cat(&v1.right, &v2.right)?);
    let (na, nc) = (v1.left.n_objects(), v2.left.n_objects());
    let (nb, nd) = (v1.right.n_objects(), v2.right.n_objects());
    let lobj = |a: usize, c: usize| a * nc + c;
    let robj = |b: usize, d: usize| b * nd + d;
    let nr = nb * nd;
    let mut slots = vec![ChainComplex::zero(fl, v1.grading()); na * nc * nr];
    let mut spos: Vec<Vec<usize>> = vec![Vec::new(); na * nc * nr];
    for a in 0..na {
        for c in 0..nc {
            for b in 0..nb {
                for d in 0..nd {
                    let (cx, p) = tensor_cx_indexed(v1.slot(a, b), v2.slot(c, d))?;
                    let s = lobj(a, c) * nr + robj(b, d);
                    slots[s] = cx;
                    spos[s] = p;
                }
            }
        }
    }
    let mut lact = BTreeMap::new();
    for (&(a2, a, b), t1) in &v1.lact {
        for (&(c2, c, d), t2) in &v2.lact {
            let (x2, x, y) = (lobj(a2, c2), lobj(a, c), robj(b, d));
            let (ha, hc) = (v1.left.hom(a2, a), v2.left.hom(c2, c));
            let hpos = tensor_positions(ha, hc);
            let (s1, s2) = (v1.slot(a, b), v2.slot(c, d));
            let (d1, d2) = (s1.total_dim(), s2.total_dim());
            let src = &spos[x * nr + y];
            let dst = &spos[x2 * nr + y];
            let ddst2 = v2.slot_dim(c2, d);
            let dsrc = d1 * d2;
            let mut out = vec![Vec::new(); hpos.len() * dsrc];
            for i in 0..ha.total_dim() {
                for k in 0..hc.total_dim() {
                    let hp = hpos[i * hc.total_dim() + k];
                    for v in 0..d1 {
                        let p1 = &t1[i * d1 + v];
                        if p1.is_empty() {
                            continue;
                        }
                        let s = fl.sign(hc.degree_of(k) * s1.degree_of(v));
                        for w in 0..d2 {
                            let p2 = &t2[k * d2 + w];
                            if p2.is_empty() {
                                continue;
                            }
                            out[hp * dsrc + src[v * d2 + w]] = fl.collect(p1.iter().flat_map(|&(r1, c1)| {
                                p2.iter().map(move |&(r2, c2)| (dst[r1 * ddst2 + r2], fl.mul(s, fl.mul(c1, c2))))
                            }));
                        }
                    }
                }
            }
            lact.insert((x2, x, y), out);
        }
    }
    let mut ract = BTreeMap::new();
    for (&(a, b, b2), t1) in &v1.ract {
        for (&(c, d, d2), t2) in &v2.ract {
            let (x, y, y2) = (lobj(a, c), robj(b, d), robj(b2, d2));
            let (hb, hd) = (v1.right.hom(b, b2), v2.right.hom(d, d2));
            let hpos = tensor_positions(hb, hd);
            let (s1, s2) = (v1.slot(a, b), v2.slot(c, d));
            let (n1, n2) = (s1.total_dim(), s2.total_dim());
            let (nhb, nhd) = (hb.total_dim(), hd.total_dim());
            let src = &spos[x * nr + y];
            let dst = &spos[x * nr + y2];
            let ddst2 = v2.slot_dim(c, d2);
            let dh = hpos.len();
            let mut out = vec![Vec::new(); n1 * n2 * dh];
            for v in 0..n1 {
                for h in 0..nhb {
                    let p1 = &t1[v * nhb + h];
                    if p1.is_empty() {
                        continue;
                    }
                    for w in 0..n2 {
                        let s = fl.sign(s2.degree_of(w) * hb.degree_of(h));
                        for k in 0..nhd {
                            let p2 = &t2[w * nhd + k];
                            if p2.is_empty() {
                                continue;
                            }
                            out[src[v * n2 + w] * dh + hpos[h * nhd + k]] =
                                fl.collect(p1.iter().flat_map(|&(r1, c1)| {
                                    p2.iter().map(move |&(r2, c2)| (dst[r1 * ddst2 + r2], fl.mul(s, fl.mul(c1, c2))))
                                }));
                        }
                    }
                }
            }
            ract.insert((x, y, y2), out);
        }
    }
    Ok(Bimodule::from_parts(left, right, slots, lact, ract))
}

/// `V` over `(A, B)` read as a bimodule over `(𝕂, A^op ⊗ B)`: slot
/// `(*, (a,b)) = V(a,b)` and `v·(f⊗g) = (−1)^(|f||v|) (f·v)·g`.
pub fn adj(v: &Bimodule) -> Bimodule {
    let fl = v.field();
    let (a_cat, b_cat) = (&*v.left, &*v.right);
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    let unit = Arc::new(unit_cat(fl, v.grading()));
    let right = Arc::new(tensor_cat(&opposite(a_cat), b_cat).expect("same field"));
    let obj = |a: usize, b: usize| a * nb + b;
    let slots: Vec<ChainComplex> = (0..na * nb).map(|s| v.slot(s / nb, s % nb).clone()).collect();
    let mut lact = BTreeMap::new();
    for s in 0..na * nb {
        let dim = slots[s].total_dim();
        lact.insert((0, 0, s), (0..dim).map(|i| vec![(i, 1)]).collect::<Table>());
    }
    let mut ract = BTreeMap::new();
    for a in 0..na {
        for b in 0..nb {
            let src = v.slot(a, b);
            for a2 in 0..na {
                for b2 in 0..nb {
                    // A^op(a, a2) = A(a2, a)
                    let (ha, hb) = (a_cat.hom(a2, a), b_cat.hom(b, b2));
                    let hpos = tensor_positions(ha, hb);
                    let dh = hpos.len();
                    if dh == 0 || src.is_empty() {
                        continue;
                    }
                    let mut t = vec![Vec::new(); src.total_dim() * dh];
                    for x in 0..src.total_dim() {
                        for i in 0..ha.total_dim() {
                            let fx = v.left_product((a2, a, b), i, x);
                            if fx.is_empty() {
                                continue;
                            }
                            let s = fl.sign(ha.degree_of(i) * src.degree_of(x));
                            for k in 0..hb.total_dim() {
                                let out = v.act_right((a2, b, b2), fx, &[(k, 1)]);
                                t[x * dh + hpos[i * hb.total_dim() + k]] = fl.scale(s, &out);
                            }
                        }
                    }
                    ract.insert((0, obj(a, b), obj(a2, b2)), t);
                }
            }
        }
    }
    Bimodule::from_parts(unit, right, slots, lact, ract)
}

/// `V` over `(A, B)` read as a bimodule over `(B^op ⊗ A, 𝕂)`: slot
/// `((b,a), *) = V(a,b)` and `(g⊗f)·v = (−1)^(|g|(|f|+|v|)) (f·v)·g`.
pub fn adj_op(v: &Bimodule) -> Bimodule {
    let fl = v.field();
    let (a_cat, b_cat) = (&*v.left, &*v.right);
    let (na, nb) = (a_cat.n_objects(), b_cat.n_objects());
    let unit = Arc::new(unit_cat(fl, v.grading()));
    let left = Arc::new(tensor_cat(&opposite(b_cat), a_cat).expect("same field"));
    let obj = |b: usize, a: usize| b * na + a;
    let mut slots = vec![ChainComplex::zero(fl, v.grading()); na * nb];
    for a in 0..na {
        for b in 0..nb {
            slots[obj(b, a)] = v.slot(a, b).clone();
        }
    }
    let mut ract = BTreeMap::new();
    for (s, slot) in slots.iter().enumerate() {
        let dim = slot.total_dim();
        ract.insert((s, 0, 0), (0..dim).map(|i| vec![(i, 1)]).collect::<Table>());
    }
    let mut lact = BTreeMap::new();
    for a in 0..na {
        for b in 0..nb {
            let src = v.slot(a, b);
            for a2 in 0..na {
                for b2 in 0..nb {
                    // hom((b2,a2),(b,a)) = B^op(b2, b) ⊗ A(a2, a) = B(b, b2) ⊗ A(a2, a)
                    let (hb, ha) = (b_cat.hom(b, b2), a_cat.hom(a2, a));
                    let hpos = tensor_positions(hb, ha);
                    if hpos.is_empty() || src.is_empty() {
                        continue;
                    }
                    let ds = src.total_dim();
                    let mut t = vec![Vec::new(); hpos.len() * ds];
                    for k in 0..hb.total_dim() {
                        for i in 0..ha.total_dim() {
                            let hp = hpos[k * ha.total_dim() + i];
                            for x in 0..ds {
                                let fx = v.left_product((a2, a, b), i, x);
                                if fx.is_empty() {
                                    continue;
                                }
                                let s = fl.sign(hb.degree_of(k) * (ha.degree_of(i) + src.degree_of(x)));
                                let out = v.act_right((a2, b, b2), fx, &[(k, 1)]);
                                t[hp * ds + x] = fl.scale(s, &out);
                            }
                        }
                    }
                    lact.insert((obj(b2, a2), obj(b, a), 0), t);
                }
            }
        }
    }
    Bimodule::from_parts(left, unit, slots, lact, ract)
}

fn same_categories(v1: &Bimodule, v2: &Bimodule) -> bool {
    (Arc::ptr_eq(&v1.left, &v2.left) || v1.left == v2.left)
        && (Arc::ptr_eq(&v1.right, &v2.right) || v1.right == v2.right)
}

/// The strict complex of natural transformations `V1 → V2`: in degree `n`,
/// families of degree-`n` maps `V1(a,b) → V2(a,b)` with
/// `φ(f·v) = (−1)^(n|f|) f·φ(v)` and `φ(v·g) = φ(v)·g`, and the hom-complex
/// differential applied slot-wise. No unit condition is imposed.
///
/// Each generator is named after the elementary map `a|b:x↦y` that serves
/// as its free coordinate.
pub fn nat_complex(v1: &Bimodule, v2: &Bimodule) -> Result<ChainComplex> {
    check_same(v1.field(), v1.grading(), v2.field(), v2.grading())?;
    if !same_categories(v1, v2) {
        return Err(Error::CategoryMismatch);
    }
    let fl = v1.field();
    let g = v1.grading();
    let (na, nb) = (v1.left.n_objects(), v1.right.n_objects());
    let ns = na * nb;
    let homs: Vec<ChainComplex> = (0..ns)
        .map(|s| hom_cx(v1.slot(s / nb, s % nb), v2.slot(s / nb, s % nb)))
        .collect::<Result<_>>()?;
    // unknown (s, x, y) lives at flat index x * dim V2(s) + y of the slot's
    // hom complex before sorting; recover the sorted position by name
    let unknown_pos = |s: usize, x: usize, y: usize| -> usize {
        let (c1, c2) = (v1.slot(s / nb, s % nb), v2.slot(s / nb, s % nb));
        let name = names::elementary_map(&c1.generator(x).name, &c2.generator(y).name);
        homs[s].index_of(&name).expect("elementary map present")
    };
    let degrees: std::collections::BTreeSet<i64> = homs.iter().flat_map(|h| h.degrees()).collect();
    // per degree: list of (slot, local index in hom complex) and its reverse
    let mut vars: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    let mut var_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &n in &degrees {
        let list = vars.entry(n).or_default();
        for (s, h) in homs.iter().enumerate() {
            for i in h.block(n) {
                var_index.insert((s, i), list.len());
                list.push((s, i));
            }
        }
    }
    let var = |n: i64, s: usize, x: usize, y: usize| -> Option<usize> {
        let (c1, c2) = (v1.slot(s / nb, s % nb), v2.slot(s / nb, s % nb));
        if g.normalize(c2.degree_of(y) - c1.degree_of(x)) != n {
            return None;
        }
        var_index.get(&(s, unknown_pos(s, x, y))).copied()
    };

    let mut kernels: BTreeMap<i64, (Vec<SparseVec>, Vec<usize>)> = BTreeMap::new();
    for (&n, list) in &vars {
        let mut rows: Vec<SparseVec> = Vec::new();
        // left constraints: φ(f·x) − (−1)^(n|f|) f·φ(x) in V2(a2, b)
        for a2 in 0..na {
            for a in 0..na {
                let h = v1.left.hom(a2, a);
                for b in 0..nb {
                    let (src, dst_s) = (a * nb + b, a2 * nb + b);
                    let (x1, out2) = (v1.slot(a, b), v2.slot(a2, b));
                    let y2 = v2.slot(a, b);
                    for i in 0..h.total_dim() {
                        let s = fl.neg(fl.sign(n * h.degree_of(i)));
                        for x in 0..x1.total_dim() {
                            let fx = v1.left_product((a2, a, b), i, x);
                            let deg_z = g.normalize(h.degree_of(i) + x1.degree_of(x) + n);
                            for z in out2.block(deg_z) {
                                let mut row: Vec<(usize, Scalar)> = Vec::new();
                                for &(w, c) in fx {
                                    if let Some(u) = var(n, dst_s, w, z) {
                                        row.push((u, c));
                                    }
                                }
                                for y in y2.block(g.normalize(x1.degree_of(x) + n)) {
                                    for &(t, c) in v2.left_product((a2, a, b), i, y) {
                                        if t == z {
                                            if let Some(u) = var(n, src, x, y) {
                                                row.push((u, fl.mul(s, c)));
                                            }
                                        }
                                    }
                                }
                                let row = fl.collect(row);
                                if !row.is_empty() {
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
            }
        }
        // right constraints: φ(x·g) − φ(x)·g in V2(a, b2)
        for a in 0..na {
            for b in 0..nb {
                for b2 in 0..nb {
                    let h = v1.right.hom(b, b2);
                    let (src, dst_s) = (a * nb + b, a * nb + b2);
                    let (x1, out2, y2) = (v1.slot(a, b), v2.slot(a, b2), v2.slot(a, b));
                    for k in 0..h.total_dim() {
                        for x in 0..x1.total_dim() {
                            let xg = v1.right_product((a, b, b2), x, k);
                            let deg_z = g.normalize(h.degree_of(k) + x1.degree_of(x) + n);
                            for z in out2.block(deg_z) {
                                let mut row: Vec<(usize, Scalar)> = Vec::new();
                                for &(w, c) in xg {
                                    if let Some(u) = var(n, dst_s, w, z) {
                                        row.push((u, c));
                                    }
                                }
                                for y in y2.block(g.normalize(x1.degree_of(x) + n)) {
                                    for &(t, c) in v2.right_product((a, b, b2), y, k) {
                                        if t == z {
                                            if let Some(u) = var(n, src, x, y) {
                                                row.push((u, fl.neg(c)));
                                            }
                                        }
                                    }
                                }
                                let row = fl.collect(row);
                                if !row.is_empty() {
                                    rows.push(row);
                                }
                            }
                        }
                    }
                }
            }
        }
        let m = SparseMatrix::from_rows(fl, list.len(), rows);
        kernels.insert(n, kernel_basis_with_free(&m));
    }

    let mut gens = Vec::new();
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    for (&n, (basis, free)) in &kernels {
        offsets.insert(n, gens.len());
        for (_, &col) in basis.iter().zip(free) {
            let (s, i) = vars[&n][col];
            let (a, b) = (s / nb, s % nb);
            gens.push(crate::complex::Generator {
                name: format!(
                    "{}|{}:{}",
                    v1.left.objects()[a],
                    v1.right.objects()[b],
                    homs[s].generator(i).name
                ),
                degree: n,
            });
        }
    }
    let mut d = Vec::with_capacity(gens.len());
    for (&n, (basis, _)) in &kernels {
        let target = g.normalize(n - 1);
        for vec in basis {
            // D applied slot-wise, expressed over the degree-(n−1) unknowns
            let mut image: Vec<(usize, Scalar)> = Vec::new();
            for &(u, c) in vec {
                let (s, i) = vars[&n][u];
                for &(t, e) in homs[s].d(i) {
                    image.push((var_index[&(s, t)], fl.mul(c, e)));
                }
            }
            let image = fl.collect(image);
            let Some((_, tf)) = kernels.get(&target) else {
                debug_assert!(image.is_empty());
                d.push(Vec::new());
                continue;
            };
            // coordinates in an RREF kernel basis are the free-column values
            let off = offsets[&target];
            let coords = tf
                .iter()
                .enumerate()
                .filter_map(|(j, &col)| {
                    image
                        .binary_search_by_key(&col, |&(u, _)| u)
                        .ok()
                        .map(|p| (off + j, image[p].1))
                })
                .collect();
            d.push(coords);
        }
    }
    ChainComplex::from_generators(fl, g, gens, d)
}

/// Betti number `k` of [`nat_complex`].
pub fn pi_k(v1: &Bimodule, v2: &Bimodule, k: i64) -> Result<usize> {
    Ok(nat_complex(v1, v2)?.betti(v1.grading().normalize(k)))
}
