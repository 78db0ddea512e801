//! Seeded random inputs for property tests and benchmarks.
//!
//! Every generator takes an explicit RNG; [`seeded`] gives a reproducible
//! one.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bimod::{diagonal, Bimodule};
use crate::complex::{ChainComplex, Generator, Grading};
use crate::dgcat::DgCategory;
use crate::field::{Field, SparseVec};
use crate::linalg::{kernel_basis, SparseMatrix};
use crate::segal::FiniteCategory;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A complex with generators in degrees `lo..=hi`, at most `max_dim` per
/// degree. Each differential column is a random combination of a kernel
/// basis of the next differential down, so `d² = 0` by construction.
pub fn complex<R: Rng>(rng: &mut R, field: Field, lo: i64, hi: i64, max_dim: usize, prefix: &str) -> ChainComplex {
    let p = field.characteristic();
    let mut gens = Vec::new();
    let mut d: Vec<SparseVec> = Vec::new();
    // (first index, dimension, differential matrix) of the previous degree
    let mut prev: Option<(usize, usize, SparseMatrix)> = None;
    for n in lo..=hi {
        let dim = rng.gen_range(0..=max_dim);
        let start = gens.len();
        for k in 0..dim {
            gens.push(Generator {
                name: format!("{prefix}{n}_{k}"),
                degree: n,
            });
        }
        let mut cols = Vec::with_capacity(dim);
        match &prev {
            Some((pstart, pdim, pd)) if *pdim > 0 => {
                let ker = kernel_basis(pd);
                for _ in 0..dim {
                    let mut v = Vec::new();
                    for kv in &ker {
                        let c = rng.gen_range(0..p);
                        v.extend(kv.iter().map(|&(i, x)| (i, field.mul(c, x))));
                    }
                    cols.push(field.collect(v));
                }
                for col in &cols {
                    d.push(col.iter().map(|&(i, c)| (pstart + i, c)).collect());
                }
            }
            _ => {
                cols.resize(dim, Vec::new());
                d.extend(std::iter::repeat_n(Vec::new(), dim));
            }
        }
        let rows = prev.as_ref().map_or(0, |x| x.1);
        let m = SparseMatrix::from_columns(field, rows, &cols).expect("columns in range");
        prev = Some((start, dim, m));
    }
    ChainComplex::from_generators(field, Grading::Z, gens, d).expect("random complex is well formed")
}

/// A unital dg quiver category with radical square zero: up to
/// `max_objects` objects, identities in degree 0, and per hom at most three
/// generators in total, with arrows in degrees `0..=2` whose pairwise
/// products vanish.
pub fn category<R: Rng>(rng: &mut R, field: Field, max_objects: usize) -> DgCategory {
    let n = rng.gen_range(1..=max_objects.max(1));
    let names: Vec<String> = (0..n).map(|k| format!("o{k}")).collect();
    let mut b = DgCategory::builder(field, Grading::Z, names.clone()).expect("distinct objects");
    let mut arrow_names: Vec<Vec<String>> = Vec::with_capacity(n * n);
    for a in 0..n {
        for c in 0..n {
            let budget = if a == c { 2 } else { 3 };
            let arrows = complex(rng, field, 0, 2, 1, "a");
            let arrows = if arrows.total_dim() > budget { trim(&arrows, budget) } else { arrows };
            let mut gens: Vec<Generator> = arrows.generators().to_vec();
            arrow_names.push(gens.iter().map(|g| g.name.clone()).collect());
            let mut d: Vec<SparseVec> = (0..gens.len()).map(|i| arrows.d(i).clone()).collect();
            if a == c {
                gens.push(Generator { name: "1".into(), degree: 0 });
                d.push(Vec::new());
            }
            let hom = ChainComplex::from_generators(field, Grading::Z, gens, d).expect("hom complex");
            b.hom_at(a, c, hom).expect("objects in range");
        }
    }
    // identities act trivially; products of arrows are zero
    for a in 0..n {
        b.unit(&names[a], &[("1", 1)]).expect("identity present");
        b.compose((&names[a], &names[a], &names[a]), "1", "1", &[("1", 1)]).expect("names exist");
        for c in 0..n {
            for g in &arrow_names[a * n + c] {
                b.compose((&names[a], &names[a], &names[c]), "1", g, &[(g.as_str(), 1)])
                    .expect("names exist");
                b.compose((&names[a], &names[c], &names[c]), g, "1", &[(g.as_str(), 1)])
                    .expect("names exist");
            }
        }
    }
    b.build().expect("radical-square-zero quiver is a dg category")
}

/// The first `budget` generators of a complex, with zero differential.
fn trim(c: &ChainComplex, budget: usize) -> ChainComplex {
    let gens: Vec<Generator> = c.generators()[..budget].to_vec();
    let d = vec![Vec::new(); budget];
    ChainComplex::from_generators(c.field(), c.grading(), gens, d).expect("trimmed complex")
}

/// A bimodule over `(A, A)`: the diagonal, shifted by 0 or 1, tensored with
/// a small random complex.
pub fn bimodule<R: Rng>(rng: &mut R, cat: &Arc<DgCategory>) -> Bimodule {
    let field = cat.field();
    let k = rng.gen_range(0..=1);
    let w = loop {
        let w = complex(rng, field, 0, 1, 2, "w");
        if !w.is_empty() {
            break w;
        }
    };
    let diag = diagonal(cat).shift(k);
    diag.tensor_complex(&w).expect("tensoring with a complex keeps the axioms")
}

/// A transformation category: up to three objects, each a finite set of
/// size at most three, and the closure of at most two random maps under
/// composition. Composition is diagrammatic: `f;g` applies `f` first.
pub fn finite_category<R: Rng>(rng: &mut R) -> FiniteCategory {
    let n = rng.gen_range(1..=3);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let n_gens = rng.gen_range(0..=2);
    // a morphism is (source, target, map as a vector of images)
    type Map = (usize, usize, Vec<usize>);
    let mut maps: Vec<Map> = (0..n).map(|o| (o, o, (0..sizes[o]).collect())).collect();
    let mut names: Vec<String> = (0..n).map(|o| format!("id{o}")).collect();
    let mut seen: HashMap<Map, usize> = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut gens = Vec::new();
    for g in 0..n_gens {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let m: Map = (s, t, (0..sizes[s]).map(|_| rng.gen_range(0..sizes[t])).collect());
        let idx = *seen.entry(m.clone()).or_insert_with(|| {
            maps.push(m.clone());
            names.push(format!("g{g}"));
            maps.len() - 1
        });
        gens.push(idx);
    }
    // close under composition with generators on the right
    let mut queue: VecDeque<usize> = (0..maps.len()).collect();
    while let Some(f) = queue.pop_front() {
        for &g in &gens {
            let (fs, ft, fm) = maps[f].clone();
            let (gs, gt, gm) = maps[g].clone();
            if ft != gs {
                continue;
            }
            let m: Map = (fs, gt, fm.iter().map(|&x| gm[x]).collect());
            if !seen.contains_key(&m) {
                let name = if f < n { names[g].clone() } else { format!("{}{}", names[f], names[g]) };
                seen.insert(m.clone(), maps.len());
                maps.push(m);
                names.push(name);
                queue.push_back(maps.len() - 1);
            }
        }
    }
    let mut comp = Vec::new();
    for (f, (fs, ft, fm)) in maps.iter().enumerate() {
        for (g, (gs, gt, gm)) in maps.iter().enumerate() {
            if ft == gs {
                let m: Map = (*fs, *gt, fm.iter().map(|&x| gm[x]).collect());
                comp.push(((f, g), seen[&m]));
            }
        }
    }
    let morphisms = maps.iter().zip(&names).map(|((s, t, _), name)| (name.clone(), *s, *t)).collect();
    let objects = (0..n).map(|o| format!("s{o}")).collect();
    FiniteCategory::new(objects, morphisms, (0..n).collect(), comp).expect("closure is a category")
}

/// A `rows × cols` matrix whose entries are nonzero with probability
/// `density`, with uniform nonzero values.
pub fn matrix<R: Rng>(rng: &mut R, field: Field, rows: usize, cols: usize, density: f64) -> SparseMatrix {
    let p = field.characteristic();
    let mut triplets = Vec::new();
    for c in 0..cols {
        for r in 0..rows {
            if rng.gen_bool(density) {
                triplets.push((r, c, rng.gen_range(1..p) as i64));
            }
        }
    }
    SparseMatrix::from_triplets(field, rows, cols, triplets).expect("indices in range")
}
