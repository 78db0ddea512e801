//! Loading workspace files into core values, and writing core values back
//! as documents.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use dgcalc_core::{
    diagonal, nerve, Bimodule, ChainComplex, DgCategory, Field, FiniteCategory, FiniteSimplicialSet, Grading,
};

use crate::error::CliError;
use crate::format::{
    self, BimoduleDoc, CategoryDoc, ComplexDoc, DiffDoc, Entity, FiniteCategoryDoc, GradingDoc, SsetDoc, Term,
    TripleDoc, Workspace,
};

/// A resolved entity.
#[derive(Clone)]
pub enum Value {
    Complex(ChainComplex),
    Category(Arc<DgCategory>),
    Bimodule(Arc<Bimodule>),
    FiniteCategory(FiniteCategory),
    Sset(FiniteSimplicialSet),
}

/// Every entity of a file and its imports, resolved.
pub struct Loaded {
    pub field: Field,
    pub grading: Grading,
    /// name → (kind tag, value), in name order
    pub values: BTreeMap<String, (&'static str, Value)>,
}

impl Loaded {
    pub fn get(&self, name: &str) -> Result<&Value, CliError> {
        self.values
            .get(name)
            .map(|(_, v)| v)
            .ok_or_else(|| CliError::NotFound(format!("no entity named `{name}`")))
    }

    pub fn category(&self, name: &str) -> Result<Arc<DgCategory>, CliError> {
        match self.get(name)? {
            Value::Category(c) => Ok(c.clone()),
            _ => Err(CliError::NotFound(format!("entity `{name}` is not a category"))),
        }
    }

    pub fn bimodule(&self, name: &str) -> Result<Arc<Bimodule>, CliError> {
        match self.get(name)? {
            Value::Bimodule(b) => Ok(b.clone()),
            _ => Err(CliError::NotFound(format!("entity `{name}` is not a bimodule"))),
        }
    }

    pub fn sset(&self, name: &str) -> Result<&FiniteSimplicialSet, CliError> {
        match self.get(name)? {
            Value::Sset(s) => Ok(s),
            _ => Err(CliError::NotFound(format!("entity `{name}` is not a simplicial set"))),
        }
    }
}

fn schema(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Schema(format!("{path}: {msg}"))
}

/// Reads and parses one file.
pub fn read(path: &Path) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| schema(&path.display().to_string(), e))?;
    let ws = format::parse(&text).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    if ws.format != format::FORMAT_VERSION {
        return Err(schema(
            &format!("{}: format", path.display()),
            format!("unsupported format version {}", ws.format),
        ));
    }
    Ok(ws)
}

/// Loads a file with its imports and resolves every entity. Construction
/// errors are schema errors; axiom violations are reported separately by
/// [`validate_value`].
pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let mut docs: BTreeMap<String, (PathBuf, Entity)> = BTreeMap::new();
    let mut visited = BTreeSet::new();
    let (field, grading) = collect(path, &mut docs, &mut visited)?;
    let mut r = Resolver {
        field,
        grading,
        docs: &docs,
        values: BTreeMap::new(),
        active: BTreeSet::new(),
    };
    for name in docs.keys() {
        r.resolve(name)?;
    }
    Ok(Loaded {
        field,
        grading,
        values: r.values,
    })
}

fn collect(
    path: &Path,
    docs: &mut BTreeMap<String, (PathBuf, Entity)>,
    visited: &mut BTreeSet<PathBuf>,
) -> Result<(Field, Grading), CliError> {
    let canon = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    let ws = read(path)?;
    let field = Field::new(ws.field).map_err(|e| schema(&format!("{}: field", path.display()), e))?;
    let grading = match ws.grading {
        GradingDoc::Z => Grading::Z,
        GradingDoc::Z2 => Grading::Z2,
    };
    if !visited.insert(canon) {
        return Ok((field, grading));
    }
    for (name, e) in ws.entities {
        if docs.contains_key(&name) {
            return Err(schema(&format!("{}: entities.{name}", path.display()), "duplicate entity name"));
        }
        docs.insert(name, (path.to_path_buf(), e));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    for (k, imp) in ws.imports.iter().enumerate() {
        let (f, g) = collect(&base.join(imp), docs, visited)?;
        if f != field || g != grading {
            return Err(schema(
                &format!("{}: imports[{k}]", path.display()),
                "imported file uses a different field or grading",
            ));
        }
    }
    Ok((field, grading))
}

struct Resolver<'a> {
    field: Field,
    grading: Grading,
    docs: &'a BTreeMap<String, (PathBuf, Entity)>,
    values: BTreeMap<String, (&'static str, Value)>,
    active: BTreeSet<String>,
}

impl Resolver<'_> {
    fn resolve(&mut self, name: &str) -> Result<Value, CliError> {
        if let Some((_, v)) = self.values.get(name) {
            return Ok(v.clone());
        }
        let (file, entity) = self
            .docs
            .get(name)
            .ok_or_else(|| CliError::NotFound(format!("no entity named `{name}`")))?;
        if !self.active.insert(name.to_string()) {
            return Err(schema(&format!("entities.{name}"), "circular reference"));
        }
        let path = format!("{}: entities.{name}", file.display());
        let value = self.build(&path, entity)?;
        self.active.remove(name);
        self.values.insert(name.to_string(), (entity.kind(), value.clone()));
        Ok(value)
    }

    fn category_ref(&mut self, path: &str, name: &str) -> Result<Arc<DgCategory>, CliError> {
        match self.resolve(name) {
            Ok(Value::Category(c)) => Ok(c),
            Ok(_) => Err(CliError::NotFound(format!("{path}: entity `{name}` is not a category"))),
            Err(CliError::NotFound(m)) => Err(CliError::NotFound(format!("{path}: {m}"))),
            Err(e) => Err(e),
        }
    }

    fn build(&mut self, path: &str, e: &Entity) -> Result<Value, CliError> {
        let (field, grading) = (self.field, self.grading);
        Ok(match e {
            Entity::Complex(c) => Value::Complex(complex_from_doc(field, grading, c, path)?),
            Entity::Category(c) => Value::Category(Arc::new(category_from_doc(field, grading, c, path)?)),
            Entity::Bimodule(b) => {
                let left = self.category_ref(&format!("{path}.left_cat"), &b.left_cat)?;
                let right = self.category_ref(&format!("{path}.right_cat"), &b.right_cat)?;
                Value::Bimodule(Arc::new(bimodule_from_doc(left, right, b, path)?))
            }
            Entity::Diagonal(d) => {
                let cat = self.category_ref(&format!("{path}.category"), &d.category)?;
                Value::Bimodule(Arc::new(diagonal(&cat)))
            }
            Entity::FiniteCategory(c) => Value::FiniteCategory(finite_category_from_doc(c, path)?),
            Entity::Nerve(n) => {
                let at = format!("{path}.category");
                let cat = match self.resolve(&n.category) {
                    Ok(Value::FiniteCategory(c)) => c,
                    Ok(_) => {
                        return Err(CliError::NotFound(format!(
                            "{at}: entity `{}` is not a finite category",
                            n.category
                        )))
                    }
                    Err(CliError::NotFound(m)) => return Err(CliError::NotFound(format!("{at}: {m}"))),
                    Err(e) => return Err(e),
                };
                if !cat.validate().is_empty() {
                    return Err(CliError::Validation(format!("{at}: the category fails its axioms")));
                }
                Value::Sset(nerve(&cat, n.depth))
            }
            Entity::Sset(s) => Value::Sset(sset_from_doc(s, path)?),
        })
    }
}

fn parse_degree(path: &str, s: &str) -> Result<i64, CliError> {
    s.parse().map_err(|_| schema(path, format!("degree `{s}` is not an integer")))
}

fn check_object_names(path: &str, objects: &[String]) -> Result<(), CliError> {
    match objects.iter().find(|o| o.contains('|') || o.is_empty()) {
        Some(o) => Err(schema(path, format!("object name `{o}` must be nonempty and free of `|`"))),
        None => Ok(()),
    }
}

fn split_pair<'a>(path: &str, key: &'a str) -> Result<(&'a str, &'a str), CliError> {
    key.split_once('|').ok_or_else(|| schema(path, format!("`{key}` is not of the form a|b")))
}

/// Splits `a|b:name` using the known object names, so object names may
/// contain `:`.
fn split_elem<'a>(
    path: &str,
    s: &'a str,
    left_objs: &[String],
    right_objs: &[String],
) -> Result<(&'a str, &'a str, &'a str), CliError> {
    let (a, rest) = split_pair(path, s)?;
    let b = right_objs
        .iter()
        .filter(|o| rest.len() > o.len() && rest.starts_with(o.as_str()) && rest[o.len()..].starts_with(':'))
        .max_by_key(|o| o.len())
        .ok_or_else(|| schema(path, format!("`{s}` does not name an element a|b:x")))?;
    if !left_objs.iter().any(|o| o == a) {
        return Err(schema(path, format!("unknown object `{a}` in `{s}`")));
    }
    Ok((a, &rest[..b.len()], &rest[b.len() + 1..]))
}

fn terms(ts: &[Term]) -> Vec<(String, i64)> {
    ts.iter().map(|t| (t.name().to_string(), t.coeff())).collect()
}

pub fn complex_from_doc(field: Field, grading: Grading, doc: &ComplexDoc, path: &str) -> Result<ChainComplex, CliError> {
    let mut basis = Vec::new();
    for (deg, names) in &doc.basis {
        basis.push((parse_degree(&format!("{path}.basis"), deg)?, names.clone()));
    }
    let d = doc.d.iter().map(|e| (e.from.clone(), terms(&e.to)));
    ChainComplex::new(field, grading, basis, d).map_err(|e| schema(path, e))
}

pub fn category_from_doc(field: Field, grading: Grading, doc: &CategoryDoc, path: &str) -> Result<DgCategory, CliError> {
    check_object_names(&format!("{path}.objects"), &doc.objects)?;
    let mut b = DgCategory::builder(field, grading, doc.objects.clone()).map_err(|e| schema(path, e))?;
    for (key, cx) in &doc.homs {
        let at = format!("{path}.homs.{key}");
        let (x, y) = split_pair(&at, key)?;
        let c = complex_from_doc(field, grading, cx, &at)?;
        b.hom(x, y, c).map_err(|e| schema(&at, e))?;
    }
    let objs = &doc.objects;
    for (k, t) in doc.comp.iter().enumerate() {
        let at = format!("{path}.comp[{k}]");
        let (a, b1, f) = split_elem(&at, &t.left, objs, objs)?;
        let (b2, c, g) = split_elem(&at, &t.right, objs, objs)?;
        if b1 != b2 {
            return Err(schema(&at, format!("`{}` and `{}` are not composable", t.left, t.right)));
        }
        let mut out = Vec::new();
        for term in &t.out {
            let (a2, c2, h) = split_elem(&at, term.name(), objs, objs)?;
            if (a2, c2) != (a, c) {
                return Err(schema(&at, format!("`{}` is not in {a}|{c}", term.name())));
            }
            out.push((h, term.coeff()));
        }
        b.compose((a, b1, c), f, g, &out).map_err(|e| schema(&at, e))?;
    }
    for (obj, ts) in &doc.units {
        let at = format!("{path}.units.{obj}");
        let mut out = Vec::new();
        for term in ts {
            let (a, a2, h) = split_elem(&at, term.name(), objs, objs)?;
            if a != obj || a2 != obj {
                return Err(schema(&at, format!("`{}` is not an endomorphism of {obj}", term.name())));
            }
            out.push((h, term.coeff()));
        }
        b.unit(obj, &out).map_err(|e| schema(&at, e))?;
    }
    b.build().map_err(|e| schema(path, e))
}

pub fn bimodule_from_doc(
    left: Arc<DgCategory>,
    right: Arc<DgCategory>,
    doc: &BimoduleDoc,
    path: &str,
) -> Result<Bimodule, CliError> {
    let (field, grading) = (left.field(), left.grading());
    let (lo, ro) = (left.objects().to_vec(), right.objects().to_vec());
    let mut b = Bimodule::builder(left, right).map_err(|e| schema(path, e))?;
    for (key, cx) in &doc.slots {
        let at = format!("{path}.slots.{key}");
        let (x, y) = split_pair(&at, key)?;
        let c = complex_from_doc(field, grading, cx, &at)?;
        b.slot(x, y, c).map_err(|e| schema(&at, e))?;
    }
    for (k, t) in doc.lact.iter().enumerate() {
        let at = format!("{path}.lact[{k}]");
        let (a2, a, f) = split_elem(&at, &t.left, &lo, &lo)?;
        let (a1, bb, v) = split_elem(&at, &t.right, &lo, &ro)?;
        if a != a1 {
            return Err(schema(&at, format!("`{}` cannot act on `{}`", t.left, t.right)));
        }
        let mut out = Vec::new();
        for term in &t.out {
            let (x, y, w) = split_elem(&at, term.name(), &lo, &ro)?;
            if (x, y) != (a2, bb) {
                return Err(schema(&at, format!("`{}` is not in {a2}|{bb}", term.name())));
            }
            out.push((w, term.coeff()));
        }
        b.left_action((a2, a, bb), f, v, &out).map_err(|e| schema(&at, e))?;
    }
    for (k, t) in doc.ract.iter().enumerate() {
        let at = format!("{path}.ract[{k}]");
        let (a, bb, v) = split_elem(&at, &t.left, &lo, &ro)?;
        let (b1, b2, g) = split_elem(&at, &t.right, &ro, &ro)?;
        if bb != b1 {
            return Err(schema(&at, format!("`{}` cannot act on `{}`", t.right, t.left)));
        }
        let mut out = Vec::new();
        for term in &t.out {
            let (x, y, w) = split_elem(&at, term.name(), &lo, &ro)?;
            if (x, y) != (a, b2) {
                return Err(schema(&at, format!("`{}` is not in {a}|{b2}", term.name())));
            }
            out.push((w, term.coeff()));
        }
        b.right_action((a, bb, b2), v, g, &out).map_err(|e| schema(&at, e))?;
    }
    b.build().map_err(|e| schema(path, e))
}

pub fn finite_category_from_doc(doc: &FiniteCategoryDoc, path: &str) -> Result<FiniteCategory, CliError> {
    let obj = |at: &str, o: &str| {
        doc.objects
            .iter()
            .position(|x| x == o)
            .ok_or_else(|| schema(at, format!("unknown object `{o}`")))
    };
    let names: Vec<&String> = doc.morphisms.keys().collect();
    let mor = |at: &str, m: &str| {
        names
            .iter()
            .position(|x| *x == m)
            .ok_or_else(|| schema(at, format!("unknown morphism `{m}`")))
    };
    let mut morphisms = Vec::new();
    for (name, [s, t]) in &doc.morphisms {
        let at = format!("{path}.morphisms.{name}");
        morphisms.push((name.clone(), obj(&at, s)?, obj(&at, t)?));
    }
    let mut identities = Vec::new();
    for o in &doc.objects {
        let at = format!("{path}.identities");
        let id = doc.identities.get(o).ok_or_else(|| schema(&at, format!("no identity for `{o}`")))?;
        identities.push(mor(&at, id)?);
    }
    let mut comp = Vec::new();
    for (k, [f, g, h]) in doc.comp.iter().enumerate() {
        let at = format!("{path}.comp[{k}]");
        comp.push(((mor(&at, f)?, mor(&at, g)?), mor(&at, h)?));
    }
    FiniteCategory::new(doc.objects.clone(), morphisms, identities, comp).map_err(|e| schema(path, e))
}

fn parse_map_key(at: &str, key: &str) -> Result<(usize, usize), CliError> {
    key.split_once(':')
        .and_then(|(n, i)| Some((n.parse().ok()?, i.parse().ok()?)))
        .ok_or_else(|| schema(at, format!("`{key}` is not of the form level:index")))
}

pub fn sset_from_doc(doc: &SsetDoc, path: &str) -> Result<FiniteSimplicialSet, CliError> {
    let levels = &doc.levels;
    if levels.is_empty() {
        return Err(schema(&format!("{path}.levels"), "level 0 is required"));
    }
    let depth = levels.len() - 1;
    let lookup = |at: &str, n: usize, x: &str| {
        levels[n]
            .iter()
            .position(|y| y == x)
            .ok_or_else(|| schema(at, format!("`{x}` is not a simplex of level {n}")))
    };
    let mut faces: Vec<Vec<Vec<usize>>> = (0..=depth).map(|n| vec![Vec::new(); if n == 0 { 0 } else { n + 1 }]).collect();
    let mut degens: Vec<Vec<Vec<usize>>> = (0..depth).map(|n| vec![Vec::new(); n + 1]).collect();
    for (key, map) in &doc.d {
        let at = format!("{path}.d.{key}");
        let (n, i) = parse_map_key(&at, key)?;
        if n == 0 || n > depth || i > n {
            return Err(schema(&at, "no such face map"));
        }
        faces[n][i] = fill(&at, map, n, |x| lookup(&at, n, x), |y| lookup(&at, n - 1, y), levels)?;
    }
    for (key, map) in &doc.s {
        let at = format!("{path}.s.{key}");
        let (n, i) = parse_map_key(&at, key)?;
        if n >= depth || i > n {
            return Err(schema(&at, "no such degeneracy"));
        }
        degens[n][i] = fill(&at, map, n, |x| lookup(&at, n, x), |y| lookup(&at, n + 1, y), levels)?;
    }
    FiniteSimplicialSet::new(levels.clone(), faces, degens).map_err(|e| schema(path, e))
}

/// A total map on level `n` given by names.
fn fill(
    at: &str,
    map: &BTreeMap<String, String>,
    n: usize,
    src: impl Fn(&str) -> Result<usize, CliError>,
    dst: impl Fn(&str) -> Result<usize, CliError>,
    levels: &[Vec<String>],
) -> Result<Vec<usize>, CliError> {
    let mut out = vec![usize::MAX; levels[n].len()];
    for (x, y) in map {
        out[src(x)?] = dst(y)?;
    }
    if let Some(k) = out.iter().position(|&y| y == usize::MAX) {
        return Err(schema(at, format!("no image for `{}`", levels[n][k])));
    }
    Ok(out)
}

/// Runs the validator of a value; `None` when it passes.
pub fn validate_value(v: &Value) -> Option<String> {
    match v {
        Value::Complex(c) => Some(c.validate()).filter(|r| !r.passed()).map(|r| r.to_string()),
        Value::Category(c) => Some(c.validate()).filter(|r| !r.passed()).map(|r| r.to_string()),
        Value::Bimodule(b) => Some(b.validate()).filter(|r| !r.passed()).map(|r| r.to_string()),
        Value::FiniteCategory(c) => {
            let f = c.validate();
            (!f.is_empty()).then(|| f.iter().map(|l| format!("{l}\n")).collect())
        }
        Value::Sset(s) => Some(s.validate()).filter(|r| !r.passed()).map(|r| r.to_string()),
    }
}

fn scalar_term(field: Field, name: String, c: u32) -> Term {
    if field.is_binary() {
        Term::Bare(name)
    } else {
        Term::Scaled(name, c as i64)
    }
}

pub fn complex_to_doc(c: &ChainComplex) -> ComplexDoc {
    let f = c.field();
    let basis = c
        .degrees()
        .map(|n| (n.to_string(), c.basis(n).iter().map(|g| g.name.clone()).collect()))
        .collect();
    let d = (0..c.total_dim())
        .filter(|&i| !c.d(i).is_empty())
        .map(|i| DiffDoc {
            from: c.generator(i).name.clone(),
            to: c
                .d(i)
                .iter()
                .map(|&(t, v)| scalar_term(f, c.generator(t).name.clone(), v))
                .collect(),
        })
        .collect();
    ComplexDoc { basis, d }
}

pub fn category_to_doc(cat: &DgCategory) -> CategoryDoc {
    let f = cat.field();
    let n = cat.n_objects();
    let o = |a: usize| cat.objects()[a].as_str();
    let elem = |a: usize, b: usize, i: usize| format!("{}|{}:{}", o(a), o(b), cat.hom(a, b).generator(i).name);
    let mut homs = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            if !cat.hom(a, b).is_empty() {
                homs.insert(format!("{}|{}", o(a), o(b)), complex_to_doc(cat.hom(a, b)));
            }
        }
    }
    let mut comp = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for i in 0..cat.hom_dim(a, b) {
                    for k in 0..cat.hom_dim(b, c) {
                        let out = cat.product((a, b, c), i, k);
                        if !out.is_empty() {
                            comp.push(TripleDoc {
                                left: elem(a, b, i),
                                right: elem(b, c, k),
                                out: out.iter().map(|&(r, v)| scalar_term(f, elem(a, c, r), v)).collect(),
                            });
                        }
                    }
                }
            }
        }
    }
    let units = (0..n)
        .filter_map(|a| {
            cat.unit(a).map(|u| {
                let ts = u.iter().map(|&(r, v)| scalar_term(f, elem(a, a, r), v)).collect();
                (o(a).to_string(), ts)
            })
        })
        .collect();
    CategoryDoc {
        objects: cat.objects().to_vec(),
        homs,
        comp,
        units,
    }
}

pub fn finite_category_to_doc(cat: &FiniteCategory) -> FiniteCategoryDoc {
    let objs = cat.objects();
    let name = |k: usize| cat.morphism(k).0.to_string();
    let morphisms = (0..cat.n_morphisms())
        .map(|k| {
            let (n, s, t) = cat.morphism(k);
            (n.to_string(), [objs[s].clone(), objs[t].clone()])
        })
        .collect();
    let identities = (0..objs.len()).map(|o| (objs[o].clone(), name(cat.identity(o)))).collect();
    let mut comp = Vec::new();
    for f in 0..cat.n_morphisms() {
        for g in 0..cat.n_morphisms() {
            if let Some(h) = cat.compose(f, g) {
                comp.push([name(f), name(g), name(h)]);
            }
        }
    }
    FiniteCategoryDoc {
        objects: objs.to_vec(),
        morphisms,
        identities,
        comp,
    }
}

pub fn sset_to_doc(x: &FiniteSimplicialSet) -> SsetDoc {
    let levels: Vec<Vec<String>> = (0..=x.depth()).map(|n| x.level(n).to_vec()).collect();
    let named = |n: usize, m: usize, map: &[usize]| -> BTreeMap<String, String> {
        map.iter()
            .enumerate()
            .map(|(k, &y)| (levels[n][k].clone(), levels[m][y].clone()))
            .collect()
    };
    let mut d = BTreeMap::new();
    for n in 1..=x.depth() {
        for (i, map) in x.faces_raw()[n].iter().enumerate() {
            d.insert(format!("{n}:{i}"), named(n, n - 1, map));
        }
    }
    let mut s = BTreeMap::new();
    for n in 0..x.depth() {
        for (i, map) in x.degens_raw()[n].iter().enumerate() {
            s.insert(format!("{n}:{i}"), named(n, n + 1, map));
        }
    }
    SsetDoc { levels, d, s }
}

/// A single-entity workspace around `entity`.
pub fn workspace_of(field: Field, grading: Grading, name: &str, entity: Entity) -> Workspace {
    Workspace {
        format: format::FORMAT_VERSION,
        field: field.characteristic(),
        grading: match grading {
            Grading::Z => GradingDoc::Z,
            Grading::Z2 => GradingDoc::Z2,
        },
        imports: Vec::new(),
        entities: BTreeMap::from([(name.to_string(), entity)]),
    }
}

/// The workspace shipped as `fixtures/fixtures.json`, over GF(2) with
/// ℤ grading.
pub fn shipped_fixtures() -> Workspace {
    use dgcalc_core::fixtures as fx;
    use format::{DiagonalDoc, NerveDoc};
    let f = Field::GF2;
    let mut ws = workspace_of(f, Grading::Z, "unitK", Entity::Category(category_to_doc(&fx::unit_k(f))));
    let cat = |c: DgCategory| Entity::Category(category_to_doc(&c));
    let entities = [
        ("dual", cat(fx::dual(f))),
        ("exterior", cat(fx::exterior(f))),
        ("a2", cat(fx::a2(f))),
        ("cone", Entity::Complex(complex_to_doc(&fx::cone(f)))),
        ("coneCat", cat(fx::cone_cat(f))),
        ("diagDual", Entity::Diagonal(DiagonalDoc { category: "dual".into() })),
        ("diagA2", Entity::Diagonal(DiagonalDoc { category: "a2".into() })),
        ("chain", Entity::FiniteCategory(finite_category_to_doc(&fx::poset_abc()))),
        ("chainNerve", Entity::Nerve(NerveDoc { category: "chain".into(), depth: 4 })),
        ("z3", Entity::FiniteCategory(finite_category_to_doc(&fx::cyclic_group(3)))),
        ("z3Nerve", Entity::Nerve(NerveDoc { category: "z3".into(), depth: 4 })),
        ("spine", Entity::Sset(sset_to_doc(&fx::spine_of_triangle()))),
    ];
    ws.entities.extend(entities.into_iter().map(|(n, e)| (n.to_string(), e)));
    ws
}

#[cfg(test)]
mod tests {
    use super::*;
    use dgcalc_core::fixtures;

    #[test]
    fn category_documents_round_trip() {
        for p in [2, 3] {
            let f = Field::new(p).unwrap();
            for cat in [fixtures::dual(f), fixtures::a2(f), fixtures::cone_cat(f)] {
                let doc = category_to_doc(&cat);
                let back = category_from_doc(f, Grading::Z, &doc, "x").unwrap();
                assert!(back == cat);
            }
        }
    }

    #[test]
    fn elements_split_on_known_objects() {
        let objs = vec!["inl:x".to_string(), "y".to_string()];
        assert_eq!(split_elem("p", "inl:x|inl:x:1", &objs, &objs).unwrap(), ("inl:x", "inl:x", "1"));
        assert_eq!(split_elem("p", "y|y:a:b", &objs, &objs).unwrap(), ("y", "y", "a:b"));
        assert!(split_elem("p", "y|z:1", &objs, &objs).is_err());
    }
}
