//! The on-disk workspace format (version 1) and its canonical form.
//!
//! Parsing is strict: unknown fields and unknown `kind` tags are rejected.
//! The canonical form has sorted keys, coefficients reduced mod p (bare
//! names over GF(2)), merged and sorted terms, and sorted entry lists.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Workspace {
    pub format: u32,
    pub field: u32,
    pub grading: GradingDoc,
    /// Paths of further workspace files, relative to this one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub imports: Vec<String>,
    pub entities: BTreeMap<String, Entity>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
pub enum GradingDoc {
    Z,
    Z2,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Entity {
    Complex(ComplexDoc),
    Category(CategoryDoc),
    Bimodule(BimoduleDoc),
    Diagonal(DiagonalDoc),
    FiniteCategory(FiniteCategoryDoc),
    Nerve(NerveDoc),
    Sset(SsetDoc),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Complex(_) => "complex",
            Entity::Category(_) => "category",
            Entity::Bimodule(_) => "bimodule",
            Entity::Diagonal(_) => "diagonal",
            Entity::FiniteCategory(_) => "finite_category",
            Entity::Nerve(_) => "nerve",
            Entity::Sset(_) => "sset",
        }
    }
}

/// A basis element with a coefficient; over GF(2) the coefficient may be
/// omitted.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Term {
    Bare(String),
    Scaled(String, i64),
}

impl Term {
    pub fn name(&self) -> &str {
        match self {
            Term::Bare(n) | Term::Scaled(n, _) => n,
        }
    }

    pub fn coeff(&self) -> i64 {
        match self {
            Term::Bare(_) => 1,
            Term::Scaled(_, c) => *c,
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    /// degree (as a decimal string) → generator names
    pub basis: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub d: Vec<DiffDoc>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DiffDoc {
    pub from: String,
    pub to: Vec<Term>,
}

/// `left · right = out`, each element written `a|b:name`.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TripleDoc {
    pub left: String,
    pub right: String,
    pub out: Vec<Term>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    /// `a|b` → hom complex; absent pairs are zero
    pub homs: BTreeMap<String, ComplexDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comp: Vec<TripleDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub units: BTreeMap<String, Vec<Term>>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BimoduleDoc {
    pub left_cat: String,
    pub right_cat: String,
    /// `a|b` → slot complex; absent slots are zero
    pub slots: BTreeMap<String, ComplexDoc>,
    /// `f · v` with `f` in the left category and `v` in a slot
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lact: Vec<TripleDoc>,
    /// `v · g` with `v` in a slot and `g` in the right category
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ract: Vec<TripleDoc>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DiagonalDoc {
    pub category: String,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FiniteCategoryDoc {
    pub objects: Vec<String>,
    /// name → `[source, target]`
    pub morphisms: BTreeMap<String, [String; 2]>,
    /// object → identity morphism
    pub identities: BTreeMap<String, String>,
    /// `[f, g, f;g]` for every composable pair, diagrammatic order
    pub comp: Vec<[String; 3]>,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NerveDoc {
    pub category: String,
    pub depth: usize,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SsetDoc {
    pub levels: Vec<Vec<String>>,
    /// `"n:i"` → face `d_i` out of level `n`, as simplex → simplex
    pub d: BTreeMap<String, BTreeMap<String, String>>,
    /// `"n:i"` → degeneracy `s_i` out of level `n`
    pub s: BTreeMap<String, BTreeMap<String, String>>,
}

/// Parses a workspace, reporting the JSON path of the first error.
pub fn parse(text: &str) -> Result<Workspace, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        format!("{path}: {inner}")
    })
}

/// Reduces a coefficient into `0..p`.
fn reduce(c: i64, p: u32) -> i64 {
    c.rem_euclid(p as i64)
}

/// Merges duplicate names, drops zero coefficients and sorts by name.
pub fn canonical_terms(terms: &[Term], p: u32) -> Vec<Term> {
    let mut acc: BTreeMap<&str, i64> = BTreeMap::new();
    for t in terms {
        let e = acc.entry(t.name()).or_insert(0);
        *e = reduce(*e + t.coeff(), p);
    }
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(n, c)| if p == 2 { Term::Bare(n.to_string()) } else { Term::Scaled(n.to_string(), c) })
        .collect()
}

fn canonical_complex(c: &mut ComplexDoc, p: u32) {
    for d in &mut c.d {
        d.to = canonical_terms(&d.to, p);
    }
    c.d.retain(|d| !d.to.is_empty());
    c.d.sort_by(|a, b| a.from.cmp(&b.from));
}

fn canonical_triples(ts: &mut Vec<TripleDoc>, p: u32) {
    for t in ts.iter_mut() {
        t.out = canonical_terms(&t.out, p);
    }
    ts.retain(|t| !t.out.is_empty());
    ts.sort_by(|a, b| (&a.left, &a.right).cmp(&(&b.left, &b.right)));
}

/// Brings a workspace into canonical form in place.
pub fn canonicalize(ws: &mut Workspace) {
    let p = ws.field;
    for e in ws.entities.values_mut() {
        match e {
            Entity::Complex(c) => canonical_complex(c, p),
            Entity::Category(c) => {
                c.homs.values_mut().for_each(|h| canonical_complex(h, p));
                canonical_triples(&mut c.comp, p);
                for u in c.units.values_mut() {
                    *u = canonical_terms(u, p);
                }
            }
            Entity::Bimodule(b) => {
                b.slots.values_mut().for_each(|h| canonical_complex(h, p));
                canonical_triples(&mut b.lact, p);
                canonical_triples(&mut b.ract, p);
            }
            Entity::FiniteCategory(c) => c.comp.sort(),
            Entity::Diagonal(_) | Entity::Nerve(_) | Entity::Sset(_) => {}
        }
    }
}

/// Canonical text: pretty-printed with two-space indentation and a final
/// newline.
pub fn to_canonical_string(ws: &Workspace) -> String {
    let mut ws = ws.clone();
    canonicalize(&mut ws);
    let mut s = serde_json::to_string_pretty(&ws).expect("workspace serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terms_merge_and_reduce() {
        let t = vec![Term::Scaled("b".into(), 2), Term::Bare("a".into()), Term::Scaled("b".into(), 1)];
        assert_eq!(canonical_terms(&t, 3), vec![Term::Scaled("a".into(), 1)]);
        assert_eq!(canonical_terms(&t, 2), vec![Term::Bare("a".into()), Term::Bare("b".into())]);
        assert_eq!(canonical_terms(&[Term::Scaled("x".into(), -1)], 5), vec![Term::Scaled("x".into(), 4)]);
    }

    #[test]
    fn unknown_fields_and_kinds_are_rejected() {
        let bad_field = r#"{"format":1,"field":2,"grading":"Z","entities":{},"extra":0}"#;
        assert!(parse(bad_field).unwrap_err().contains("extra"));
        let bad_kind = r#"{"format":1,"field":2,"grading":"Z","entities":{"x":{"kind":"widget"}}}"#;
        let err = parse(bad_kind).unwrap_err();
        assert!(err.starts_with("entities.x"), "{err}");
        assert!(err.contains("widget"));
        let nested = r#"{"format":1,"field":2,"grading":"Z","entities":{"c":{"kind":"complex","basis":{},"dd":[]}}}"#;
        assert!(parse(nested).unwrap_err().contains("dd"));
    }

    #[test]
    fn canonical_form_is_stable() {
        let text = r#"{"format":1,"field":3,"grading":"Z","entities":{"c":{"kind":"complex",
            "basis":{"1":["t"],"0":["e"]},"d":[{"from":"t","to":[["e",4]]}]}}}"#;
        let ws = parse(text).unwrap();
        let once = to_canonical_string(&ws);
        let twice = to_canonical_string(&parse(&once).unwrap());
        assert_eq!(once, twice);
        assert!(once.contains("\"e\",\n"));
    }
}
