//! Small named inputs used by tests, benchmarks and the CLI fixture file.

use crate::complex::{ChainComplex, Grading};
use crate::dgcat::{unit_cat, DgCategory};
use crate::field::Field;
use crate::segal::{nerve, FiniteCategory, FiniteSimplicialSet};

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// 𝕂 as a one-object category.
pub fn unit_k(field: Field) -> DgCategory {
    unit_cat(field, Grading::Z)
}

/// Dual numbers 𝕂[x]/x²: one object `*`, basis `{1, x}` in degree 0.
pub fn dual(field: Field) -> DgCategory {
    let mut b = DgCategory::builder(field, Grading::Z, strings(&["*"])).expect("one object");
    let hom = ChainComplex::new(field, Grading::Z, [(0, strings(&["1", "x"]))], []).expect("basis");
    b.hom("*", "*", hom).expect("known object");
    let obj = ("*", "*", "*");
    b.compose(obj, "1", "1", &[("1", 1)]).expect("known names");
    b.compose(obj, "1", "x", &[("x", 1)]).expect("known names");
    b.compose(obj, "x", "1", &[("x", 1)]).expect("known names");
    b.unit("*", &[("1", 1)]).expect("known names");
    b.build().expect("dual numbers are well formed")
}

/// Exterior algebra on one generator `e` of degree 1: `{1, e}`, `e² = 0`.
pub fn exterior(field: Field) -> DgCategory {
    let mut b = DgCategory::builder(field, Grading::Z, strings(&["*"])).expect("one object");
    let hom = ChainComplex::new(field, Grading::Z, [(0, strings(&["1"])), (1, strings(&["e"]))], [])
        .expect("basis");
    b.hom("*", "*", hom).expect("known object");
    let obj = ("*", "*", "*");
    b.compose(obj, "1", "1", &[("1", 1)]).expect("known names");
    b.compose(obj, "1", "e", &[("e", 1)]).expect("known names");
    b.compose(obj, "e", "1", &[("e", 1)]).expect("known names");
    b.unit("*", &[("1", 1)]).expect("known names");
    b.build().expect("exterior algebra is well formed")
}

/// The A₂ quiver: objects `x`, `y`, identities `1` on each and one arrow
/// `u: x → y`.
pub fn a2(field: Field) -> DgCategory {
    let mut b = DgCategory::builder(field, Grading::Z, strings(&["x", "y"])).expect("two objects");
    let one = || ChainComplex::scalar(field, Grading::Z, 0, "1");
    b.hom("x", "x", one()).expect("known object");
    b.hom("y", "y", one()).expect("known object");
    b.hom("x", "y", ChainComplex::scalar(field, Grading::Z, 0, "u")).expect("known object");
    b.compose(("x", "x", "x"), "1", "1", &[("1", 1)]).expect("known names");
    b.compose(("y", "y", "y"), "1", "1", &[("1", 1)]).expect("known names");
    b.compose(("x", "x", "y"), "1", "u", &[("u", 1)]).expect("known names");
    b.compose(("x", "y", "y"), "u", "1", &[("u", 1)]).expect("known names");
    b.unit("x", &[("1", 1)]).expect("known names");
    b.unit("y", &[("1", 1)]).expect("known names");
    b.build().expect("A2 is well formed")
}

/// The acyclic cone `[𝕂 → 𝕂]`: `t` in degree 1 with `d t = e`.
pub fn cone(field: Field) -> ChainComplex {
    ChainComplex::new(
        field,
        Grading::Z,
        [(0, strings(&["e"])), (1, strings(&["t"]))],
        [("t".to_string(), vec![("e".to_string(), 1)])],
    )
    .expect("cone is well formed")
}

/// One object whose endomorphisms are the cone, with `t` acting as a
/// square-zero element of degree 1 and `e` as the unit.
pub fn cone_cat(field: Field) -> DgCategory {
    let mut b = DgCategory::builder(field, Grading::Z, strings(&["*"])).expect("one object");
    b.hom("*", "*", cone(field)).expect("known object");
    let obj = ("*", "*", "*");
    b.compose(obj, "e", "e", &[("e", 1)]).expect("known names");
    b.compose(obj, "e", "t", &[("t", 1)]).expect("known names");
    b.compose(obj, "t", "e", &[("t", 1)]).expect("known names");
    b.unit("*", &[("e", 1)]).expect("known names");
    b.build().expect("cone algebra is well formed")
}

/// The poset `0 < 1` as a category with morphisms `id0`, `id1`, `u`.
pub fn poset01() -> FiniteCategory {
    FiniteCategory::new(
        strings(&["0", "1"]),
        vec![("id0".into(), 0, 0), ("id1".into(), 1, 1), ("u".into(), 0, 1)],
        vec![0, 1],
        [((0, 0), 0), ((0, 2), 2), ((2, 1), 2), ((1, 1), 1)],
    )
    .expect("poset is well formed")
}

/// The chain `a < b < c` with arrows `f: a → b`, `g: b → c` and `h = fg`.
pub fn poset_abc() -> FiniteCategory {
    let m = vec![
        ("1a".into(), 0, 0),
        ("1b".into(), 1, 1),
        ("1c".into(), 2, 2),
        ("f".into(), 0, 1),
        ("g".into(), 1, 2),
        ("h".into(), 0, 2),
    ];
    let mut comp = vec![((3, 4), 5)];
    for (id, obj) in [(0usize, 0usize), (1, 1), (2, 2)] {
        for (k, &(_, s, t)) in m.iter().enumerate() {
            let (s, t): (usize, usize) = (s, t);
            if s == obj {
                comp.push(((id, k), k));
            }
            if t == obj {
                comp.push(((k, id), k));
            }
        }
    }
    comp.sort();
    comp.dedup();
    FiniteCategory::new(strings(&["a", "b", "c"]), m, vec![0, 1, 2], comp).expect("chain is well formed")
}

/// The cyclic group ℤ/n as a one-object category; morphism `k` is named
/// by its residue.
pub fn cyclic_group(n: usize) -> FiniteCategory {
    let m = (0..n).map(|k| (k.to_string(), 0, 0)).collect();
    let comp = (0..n).flat_map(|i| (0..n).map(move |k| ((i, k), (i + k) % n)));
    FiniteCategory::new(strings(&["*"]), m, vec![0], comp).expect("group is well formed")
}

/// The one-object category with only the identity.
pub fn point() -> FiniteCategory {
    FiniteCategory::new(strings(&["*"]), vec![("id".into(), 0, 0)], vec![0], [((0, 0), 0)])
        .expect("point is well formed")
}

/// Two composable edges `a → b → c` with no 2-simplex filling them,
/// truncated at depth 2: the nerve of `a < b < c` with the composite `h`
/// and every simplex through `(f, g)` removed.
pub fn spine_of_triangle() -> FiniteSimplicialSet {
    nerve(&poset_abc(), 2)
        .restrict(|_, name| name != "f;g" && !name.split(';').any(|p| p == "h"))
        .expect("spine is closed under faces and degeneracies")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dg_fixtures_validate() {
        for p in [2, 3, 5] {
            let f = Field::new(p).unwrap();
            for cat in [unit_k(f), dual(f), exterior(f), a2(f), cone_cat(f)] {
                assert!(cat.validate().passed(), "{cat:?}");
            }
        }
        assert!(cone(Field::GF2).validate().passed());
    }

    #[test]
    fn finite_category_fixtures_validate() {
        for c in [poset01(), poset_abc(), cyclic_group(2), cyclic_group(3), point()] {
            assert!(c.validate().is_empty());
        }
    }

    #[test]
    fn spine_shape() {
        let s = spine_of_triangle();
        assert!(s.validate().passed());
        assert_eq!(s.level(0).len(), 3);
        assert_eq!(s.level(1).len(), 5);
        assert_eq!(s.level(2).len(), 7);
    }
}
