//! Finite truncated simplicial sets, nerves of finite categories, and the
//! strict (discrete) Segal condition.
//!
//! Levels are finite sets of named simplices, so the Segal square is a
//! strict pullback and the condition is a bijection check.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A small category with explicit morphism sets. Composition is
/// diagrammatic: `comp[(f, g)]` is `f` followed by `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    /// `(name, source, target)`
    morphisms: Vec<(String, usize, usize)>,
    identities: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
}

impl FiniteCategory {
    /// Checks that names are unique, indices are in range, identities are
    /// endomorphisms of their objects, and composition is defined exactly on
    /// composable pairs with the right endpoints. The category laws are
    /// checked separately by [`FiniteCategory::validate`].
    pub fn new<C>(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identities: Vec<usize>,
        comp: C,
    ) -> Result<Self>
    where
        C: IntoIterator<Item = ((usize, usize), usize)>,
    {
        let no = objects.len();
        let nm = morphisms.len();
        let mut seen = HashMap::new();
        for (k, (name, s, t)) in morphisms.iter().enumerate() {
            if *s >= no || *t >= no {
                return Err(Error::Malformed(format!("morphism `{name}` has an unknown endpoint")));
            }
            if seen.insert(name.clone(), k).is_some() {
                return Err(Error::Malformed(format!("duplicate morphism `{name}`")));
            }
        }
        if identities.len() != no {
            return Err(Error::Malformed("one identity per object required".into()));
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= nm || morphisms[id].1 != o || morphisms[id].2 != o {
                return Err(Error::Malformed(format!("identity of `{}` is not an endomorphism", objects[o])));
            }
        }
        let mut table = HashMap::new();
        for ((f, g), h) in comp {
            if f >= nm || g >= nm || h >= nm {
                return Err(Error::Malformed("composition refers to an unknown morphism".into()));
            }
            let (ff, fg, fh) = (&morphisms[f], &morphisms[g], &morphisms[h]);
            if ff.2 != fg.1 || fh.1 != ff.1 || fh.2 != fg.2 {
                return Err(Error::Malformed(format!(
                    "composite of `{}` and `{}` has the wrong endpoints",
                    ff.0, fg.0
                )));
            }
            if table.insert((f, g), h).is_some() {
                return Err(Error::Malformed(format!("composite of `{}` and `{}` given twice", ff.0, fg.0)));
            }
        }
        for f in 0..nm {
            for g in 0..nm {
                if morphisms[f].2 == morphisms[g].1 && !table.contains_key(&(f, g)) {
                    return Err(Error::Malformed(format!(
                        "composite of `{}` and `{}` is missing",
                        morphisms[f].0, morphisms[g].0
                    )));
                }
            }
        }
        Ok(FiniteCategory {
            objects,
            morphisms,
            identities,
            comp: table,
        })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn morphism(&self, k: usize) -> (&str, usize, usize) {
        let (n, s, t) = &self.morphisms[k];
        (n, *s, *t)
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    /// `f` followed by `g`; `None` if they are not composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.comp.get(&(f, g)).copied()
    }

    /// Lists violated associativity and unit laws.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let name = |k: usize| self.morphisms[k].0.as_str();
        let nm = self.morphisms.len();
        for f in 0..nm {
            let (_, s, t) = self.morphisms[f];
            if self.comp[&(self.identities[s], f)] != f {
                out.push(format!("left unit fails at `{}`", name(f)));
            }
            if self.comp[&(f, self.identities[t])] != f {
                out.push(format!("right unit fails at `{}`", name(f)));
            }
            for g in (0..nm).filter(|&g| self.morphisms[g].1 == t) {
                let fg = self.comp[&(f, g)];
                for h in (0..nm).filter(|&h| self.morphisms[h].1 == self.morphisms[g].2) {
                    if self.comp[&(fg, h)] != self.comp[&(f, self.comp[&(g, h)])] {
                        out.push(format!("associativity fails at `{}`, `{}`, `{}`", name(f), name(g), name(h)));
                    }
                }
            }
        }
        out
    }
}

/// A simplicial set truncated at depth `D`: levels `0..=D`, faces out of
/// levels `1..=D` and degeneracies out of levels `0..D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSimplicialSet {
    levels: Vec<Vec<String>>,
    /// `faces[n][i][x]` is `d_i` of simplex `x` at level `n` (empty for `n = 0`).
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][i][x]` is `s_i` of simplex `x` at level `n`, for `n < D`.
    degens: Vec<Vec<Vec<usize>>>,
}

/// The identity families checked by [`FiniteSimplicialSet::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SimplicialIdentity {
    /// `d_i d_j = d_{j−1} d_i` for `i < j`
    FaceFace,
    /// `d_i s_j = s_{j−1} d_i` for `i < j`
    FaceDegenBelow,
    /// `d_j s_j = id = d_{j+1} s_j`
    FaceDegenId,
    /// `d_i s_j = s_j d_{i−1}` for `i > j + 1`
    FaceDegenAbove,
    /// `s_i s_j = s_{j+1} s_i` for `i ≤ j`
    DegenDegen,
}

impl fmt::Display for SimplicialIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimplicialIdentity::FaceFace => "d_i d_j = d_(j-1) d_i",
            SimplicialIdentity::FaceDegenBelow => "d_i s_j = s_(j-1) d_i",
            SimplicialIdentity::FaceDegenId => "d_j s_j = id = d_(j+1) s_j",
            SimplicialIdentity::FaceDegenAbove => "d_i s_j = s_j d_(i-1)",
            SimplicialIdentity::DegenDegen => "s_i s_j = s_(j+1) s_i",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsetFailure {
    pub identity: SimplicialIdentity,
    /// `(i, j)` in the identity's notation
    pub indices: (usize, usize),
    pub level: usize,
    pub simplex: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SsetReport {
    pub failures: Vec<SsetFailure>,
}

impl SsetReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SsetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return writeln!(f, "simplicial identities: pass");
        }
        writeln!(f, "simplicial identities: fail")?;
        for x in &self.failures {
            writeln!(
                f,
                "  {} (i={}, j={}) at level {} simplex {}",
                x.identity, x.indices.0, x.indices.1, x.level, x.simplex
            )?;
        }
        Ok(())
    }
}

impl FiniteSimplicialSet {
    /// Builds from names and maps given as `(level, index) → target name`
    /// lists. Checks shapes and that every map lands in the right level.
    pub fn new(
        levels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Malformed("a simplicial set needs level 0".into()));
        }
        let depth = levels.len() - 1;
        if faces.len() != depth + 1 || degens.len() != depth {
            return Err(Error::Malformed("wrong number of face or degeneracy levels".into()));
        }
        for (n, lv) in levels.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            if let Some(x) = lv.iter().find(|x| !seen.insert(x.as_str())) {
                return Err(Error::Malformed(format!("duplicate simplex `{x}` at level {n}")));
            }
        }
        for n in 0..=depth {
            let expect = if n == 0 { 0 } else { n + 1 };
            if faces[n].len() != expect {
                return Err(Error::Malformed(format!("level {n} needs {expect} face maps")));
            }
            for map in &faces[n] {
                if map.len() != levels[n].len() || map.iter().any(|&y| y >= levels[n - 1].len()) {
                    return Err(Error::Malformed(format!("face map out of level {n} is malformed")));
                }
            }
        }
        for n in 0..depth {
            if degens[n].len() != n + 1 {
                return Err(Error::Malformed(format!("level {n} needs {} degeneracies", n + 1)));
            }
            for map in &degens[n] {
                if map.len() != levels[n].len() || map.iter().any(|&y| y >= levels[n + 1].len()) {
                    return Err(Error::Malformed(format!("degeneracy out of level {n} is malformed")));
                }
            }
        }
        Ok(FiniteSimplicialSet { levels, faces, degens })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &[String] {
        &self.levels[n]
    }

    pub fn index_of(&self, n: usize, name: &str) -> Option<usize> {
        self.levels[n].iter().position(|x| x == name)
    }

    /// `d_i` on level `n`.
    #[inline]
    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    /// `s_i` on level `n`.
    #[inline]
    pub fn degen(&self, n: usize, i: usize, x: usize) -> usize {
        self.degens[n][i][x]
    }

    pub fn faces_raw(&self) -> &[Vec<Vec<usize>>] {
        &self.faces
    }

    pub fn degens_raw(&self) -> &[Vec<Vec<usize>>] {
        &self.degens
    }

    /// Redirects one face map entry; used to build corrupted inputs.
    pub fn with_face(&self, n: usize, i: usize, x: usize, target: usize) -> Result<Self> {
        let mut faces = self.faces.clone();
        *faces
            .get_mut(n)
            .and_then(|l| l.get_mut(i))
            .and_then(|m| m.get_mut(x))
            .ok_or_else(|| Error::Malformed("no such face entry".into()))? = target;
        Self::new(self.levels.clone(), faces, self.degens.clone())
    }

    /// The sub-object on the simplices satisfying `keep(level, name)`.
    /// Fails unless the kept simplices are closed under all maps.
    pub fn restrict(&self, keep: impl Fn(usize, &str) -> bool) -> Result<Self> {
        let depth = self.depth();
        let mut renum: Vec<Vec<Option<usize>>> = Vec::with_capacity(depth + 1);
        let mut levels = Vec::with_capacity(depth + 1);
        for (n, lv) in self.levels.iter().enumerate() {
            let mut r = vec![None; lv.len()];
            let mut names = Vec::new();
            for (x, name) in lv.iter().enumerate() {
                if keep(n, name) {
                    r[x] = Some(names.len());
                    names.push(name.clone());
                }
            }
            renum.push(r);
            levels.push(names);
        }
        let remap = |n_src: usize, n_dst: usize, map: &[usize]| -> Result<Vec<usize>> {
            map.iter()
                .enumerate()
                .filter(|&(x, _)| renum[n_src][x].is_some())
                .map(|(x, &y)| {
                    renum[n_dst][y].ok_or_else(|| {
                        Error::Malformed(format!(
                            "`{}` maps to the removed simplex `{}`",
                            self.levels[n_src][x], self.levels[n_dst][y]
                        ))
                    })
                })
                .collect()
        };
        let mut faces = vec![Vec::new()];
        for n in 1..=depth {
            faces.push(self.faces[n].iter().map(|m| remap(n, n - 1, m)).collect::<Result<_>>()?);
        }
        let mut degens = Vec::new();
        for n in 0..depth {
            degens.push(self.degens[n].iter().map(|m| remap(n, n + 1, m)).collect::<Result<_>>()?);
        }
        Self::new(levels, faces, degens)
    }

    /// Checks the five simplicial identity families wherever both sides are
    /// defined within the truncation.
    pub fn validate(&self) -> SsetReport {
        use SimplicialIdentity::*;
        let depth = self.depth();
        let mut failures = Vec::new();
        let mut fail = |identity, indices, level: usize, x: usize| {
            failures.push(SsetFailure {
                identity,
                indices,
                level,
                simplex: self.levels[level][x].clone(),
            })
        };
        for n in 2..=depth {
            for j in 0..=n {
                for i in 0..j {
                    if let Some(x) =
                        (0..self.levels[n].len()).find(|&x| self.face(n - 1, i, self.face(n, j, x)) != self.face(n - 1, j - 1, self.face(n, i, x)))
                    {
                        fail(FaceFace, (i, j), n, x);
                    }
                }
            }
        }
        // degeneracies from level n into n + 1, then faces back to n
        for n in 0..depth {
            let size = self.levels[n].len();
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let lhs = |x: usize| self.face(n + 1, i, self.degen(n, j, x));
                    let (ident, bad) = if i < j {
                        (FaceDegenBelow, (0..size).find(|&x| lhs(x) != self.degen(n - 1, j - 1, self.face(n, i, x))))
                    } else if i == j || i == j + 1 {
                        (FaceDegenId, (0..size).find(|&x| lhs(x) != x))
                    } else {
                        (FaceDegenAbove, (0..size).find(|&x| lhs(x) != self.degen(n - 1, j, self.face(n, i - 1, x))))
                    };
                    if let Some(x) = bad {
                        fail(ident, (i, j), n, x);
                    }
                }
            }
        }
        for n in 0..depth.saturating_sub(1) {
            for j in 0..=n {
                for i in 0..=j {
                    let bad = (0..self.levels[n].len())
                        .find(|&x| self.degen(n + 1, i, self.degen(n, j, x)) != self.degen(n + 1, j + 1, self.degen(n, i, x)));
                    if let Some(x) = bad {
                        fail(DegenDegen, (i, j), n, x);
                    }
                }
            }
        }
        SsetReport { failures }
    }

    /// Vertex `k` of an `n`-simplex.
    pub fn vertex(&self, n: usize, x: usize, k: usize) -> usize {
        // drop every vertex after k with the last face, then every one before
        let mut y = x;
        for level in (k + 1..=n).rev() {
            y = self.face(level, level, y);
        }
        for level in (1..=k).rev() {
            y = self.face(level, 0, y);
        }
        y
    }
}

/// The nerve truncated at depth `depth`: level `n` lists composable chains
/// `f1;…;fn` (objects at level 0). `d_0` drops the first arrow, `d_n` the
/// last, inner faces compose neighbours; `s_i` inserts an identity at
/// vertex `i`.
pub fn nerve(cat: &FiniteCategory, depth: usize) -> FiniteSimplicialSet {
    let nm = cat.n_morphisms();
    // chains[n] = list of morphism tuples; level 0 is handled by objects
    let mut chains: Vec<Vec<Vec<usize>>> = vec![Vec::new(); depth + 1];
    if depth >= 1 {
        chains[1] = (0..nm).map(|k| vec![k]).collect();
    }
    for n in 2..=depth {
        let mut next = Vec::new();
        for c in &chains[n - 1] {
            let end = cat.morphism(*c.last().expect("nonempty")).2;
            for k in 0..nm {
                if cat.morphism(k).1 == end {
                    let mut c2 = c.clone();
                    c2.push(k);
                    next.push(c2);
                }
            }
        }
        chains[n] = next;
    }
    let index: Vec<HashMap<Vec<usize>, usize>> = chains
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    let mut levels = vec![cat.objects().to_vec()];
    for c in chains.iter().skip(1) {
        levels.push(
            c.iter()
                .map(|ch| ch.iter().map(|&k| cat.morphism(k).0).collect::<Vec<_>>().join(";"))
                .collect(),
        );
    }
    let mut faces = vec![Vec::new()];
    if depth >= 1 {
        faces.push(vec![
            chains[1].iter().map(|c| cat.morphism(c[0]).2).collect(),
            chains[1].iter().map(|c| cat.morphism(c[0]).1).collect(),
        ]);
    }
    for n in 2..=depth {
        let mut maps = Vec::with_capacity(n + 1);
        for i in 0..=n {
            maps.push(
                chains[n]
                    .iter()
                    .map(|c| {
                        let mut d = c.clone();
                        if i == 0 {
                            d.remove(0);
                        } else if i == n {
                            d.pop();
                        } else {
                            let h = cat.compose(d[i - 1], d[i]).expect("composable chain");
                            d[i - 1] = h;
                            d.remove(i);
                        }
                        index[n - 1][&d]
                    })
                    .collect(),
            );
        }
        faces.push(maps);
    }
    let mut degens = Vec::with_capacity(depth);
    if depth >= 1 {
        degens.push(vec![(0..cat.objects().len()).map(|o| index[1][&vec![cat.identity(o)]]).collect()]);
    }
    for n in 1..depth {
        let mut maps = Vec::with_capacity(n + 1);
        for i in 0..=n {
            maps.push(
                chains[n]
                    .iter()
                    .map(|c| {
                        let v = if i == 0 { cat.morphism(c[0]).1 } else { cat.morphism(c[i - 1]).2 };
                        let mut e = c.clone();
                        e.insert(i, cat.identity(v));
                        index[n + 1][&e]
                    })
                    .collect(),
            );
        }
        degens.push(maps);
    }
    FiniteSimplicialSet::new(levels, faces, degens).expect("nerve is well formed")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegalVerdict {
    /// The map to the pullback is a bijection.
    Holds,
    /// A compatible pair `(front, back)` with no preimage.
    NotSurjective { front: String, back: String },
    /// Two simplices with the same front and back faces.
    NotInjective { first: String, second: String },
    /// The input fails the simplicial identities; no check was run.
    InvalidInput(SsetReport),
}

impl SegalVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SegalVerdict::Holds)
    }
}

impl fmt::Display for SegalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegalVerdict::Holds => f.write_str("pass"),
            SegalVerdict::NotSurjective { front, back } => write!(f, "fail: pair ({front}, {back}) not hit"),
            SegalVerdict::NotInjective { first, second } => {
                write!(f, "fail: {first} and {second} have the same image")
            }
            SegalVerdict::InvalidInput(_) => f.write_str("invalid-input"),
        }
    }
}

/// Strict Segal condition at `(m, n)`: the map from level `m+n` to
/// `level_m ×_{level_0} level_n` (front `m`-face, back `n`-face, glued at
/// vertex `m`) must be a bijection.
pub fn segal_check(x: &FiniteSimplicialSet, m: usize, n: usize) -> Result<SegalVerdict> {
    let depth = x.depth();
    if m + n > depth {
        return Err(Error::DepthExceeded {
            m,
            n,
            needed: m + n,
            depth,
        });
    }
    let report = x.validate();
    if !report.passed() {
        return Ok(SegalVerdict::InvalidInput(report));
    }
    let top = m + n;
    let front = |mut s: usize| {
        for level in (m + 1..=top).rev() {
            s = x.face(level, level, s);
        }
        s
    };
    let back = |mut s: usize| {
        for level in (n + 1..=top).rev() {
            s = x.face(level, 0, s);
        }
        s
    };
    let mut image: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for s in 0..x.level(top).len() {
        let key = (front(s), back(s));
        if let Some(&t) = image.get(&key) {
            return Ok(SegalVerdict::NotInjective {
                first: x.level(top)[t].clone(),
                second: x.level(top)[s].clone(),
            });
        }
        image.insert(key, s);
    }
    for y in 0..x.level(m).len() {
        let last = x.vertex(m, y, m);
        for z in 0..x.level(n).len() {
            if x.vertex(n, z, 0) == last && !image.contains_key(&(y, z)) {
                return Ok(SegalVerdict::NotSurjective {
                    front: x.level(m)[y].clone(),
                    back: x.level(n)[z].clone(),
                });
            }
        }
    }
    Ok(SegalVerdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn nerve_level_sizes() {
        let pt = nerve(&fixtures::point(), 3);
        assert!((0..=3).all(|n| pt.level(n).len() == 1));
        let p = nerve(&fixtures::poset01(), 2);
        assert_eq!([p.level(0).len(), p.level(1).len(), p.level(2).len()], [2, 3, 4]);
        let z2 = nerve(&fixtures::cyclic_group(2), 3);
        assert_eq!((0..=3).map(|n| z2.level(n).len()).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
        for s in [pt, p, z2] {
            assert!(s.validate().passed());
        }
    }

    #[test]
    fn standard_one_simplex_validates() {
        // Δ¹ is the nerve of 0 < 1
        assert!(nerve(&fixtures::poset01(), 2).validate().passed());
    }

    #[test]
    fn redirected_face_is_named() {
        let p = nerve(&fixtures::poset01(), 2);
        let u = p.index_of(1, "u").unwrap();
        let bad = p.with_face(1, 0, u, 0).unwrap();
        let r = bad.validate();
        assert!(!r.passed());
        assert!(r.failures.iter().any(|f| f.identity == SimplicialIdentity::FaceFace));
        assert!(matches!(segal_check(&bad, 1, 1), Ok(SegalVerdict::InvalidInput(_))));
    }

    #[test]
    fn nerves_satisfy_segal() {
        let p = nerve(&fixtures::poset01(), 3);
        for m in 0..=3 {
            for n in 0..=3 - m {
                assert_eq!(segal_check(&p, m, n), Ok(SegalVerdict::Holds));
            }
        }
        let z2 = nerve(&fixtures::cyclic_group(2), 3);
        assert!(segal_check(&z2, 2, 1).unwrap().holds());
    }

    #[test]
    fn spine_fails_at_the_composable_pair() {
        let s = fixtures::spine_of_triangle();
        assert_eq!(
            segal_check(&s, 1, 1),
            Ok(SegalVerdict::NotSurjective {
                front: "f".into(),
                back: "g".into()
            })
        );
    }

    #[test]
    fn depth_is_enforced() {
        let p = nerve(&fixtures::poset01(), 2);
        assert_eq!(
            segal_check(&p, 2, 1),
            Err(Error::DepthExceeded {
                m: 2,
                n: 1,
                needed: 3,
                depth: 2
            })
        );
    }

    #[test]
    fn vertices_of_a_chain() {
        let c = fixtures::poset_abc();
        let x = nerve(&c, 2);
        let fg = x.index_of(2, "f;g").unwrap();
        let names: Vec<&str> = (0..3).map(|k| x.level(0)[x.vertex(2, fg, k)].as_str()).collect();
        assert_eq!(names, ["a", "b", "c"]);
    }
}
