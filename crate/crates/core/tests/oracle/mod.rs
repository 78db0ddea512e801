//! Independent reference computations. Nothing here calls into the crate
//! under test: algebras are written out as structure constants and ranks
//! use plain dense elimination.

#![allow(dead_code)]

use std::collections::HashMap;

/// Rank of a dense matrix over GF(p) by textbook row reduction.
pub fn dense_rank(p: u64, mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow(rows[rank][c] % p, p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] % p != 0 {
                let f = row[c] % p;
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Hochschild homology of 𝔽_p[x]/x² from its 2-periodic resolution: the
/// complex `A ← A ← A ← …` whose maps alternate between zero and
/// multiplication by `2x`.
pub fn dual_hh_periodic(p: u64, n: usize) -> usize {
    // rank of multiplication by 2x on the basis {1, x}
    let two_x = if p == 2 { 0 } else { 1 };
    let rank_out = |k: usize| if k == 0 || k % 2 == 1 { 0 } else { two_x };
    2 - rank_out(n) - rank_out(n + 1)
}

/// A finite quiver algebra concentrated in degree 0 with zero differential.
pub struct Algebra {
    pub objects: usize,
    /// hom dimension for each ordered pair
    pub dims: HashMap<(usize, usize), usize>,
    /// `(a, b, c, i, k) ↦ [(r, coefficient)]`, diagrammatic order
    pub mult: HashMap<(usize, usize, usize, usize, usize), Vec<(usize, u64)>>,
}

impl Algebra {
    pub fn unit_k() -> Self {
        let mut mult = HashMap::new();
        mult.insert((0, 0, 0, 0, 0), vec![(0, 1)]);
        Algebra { objects: 1, dims: HashMap::from([((0, 0), 1)]), mult }
    }

    /// basis 1 = 0, x = 1
    pub fn dual() -> Self {
        let mut mult = HashMap::new();
        mult.insert((0, 0, 0, 0, 0), vec![(0, 1)]);
        mult.insert((0, 0, 0, 0, 1), vec![(1, 1)]);
        mult.insert((0, 0, 0, 1, 0), vec![(1, 1)]);
        Algebra { objects: 1, dims: HashMap::from([((0, 0), 2)]), mult }
    }

    /// objects x = 0, y = 1; one arrow x → y
    pub fn a2() -> Self {
        let mut mult = HashMap::new();
        mult.insert((0, 0, 0, 0, 0), vec![(0, 1)]);
        mult.insert((1, 1, 1, 0, 0), vec![(0, 1)]);
        mult.insert((0, 0, 1, 0, 0), vec![(0, 1)]);
        mult.insert((0, 1, 1, 0, 0), vec![(0, 1)]);
        Algebra {
            objects: 2,
            dims: HashMap::from([((0, 0), 1), ((1, 1), 1), ((0, 1), 1)]),
            mult,
        }
    }

    fn dim(&self, a: usize, b: usize) -> usize {
        self.dims.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Words `f_0 ⊗ … ⊗ f_n` with `f_i: o_i → o_(i+1 mod n+1)`.
    fn words(&self, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut out = Vec::new();
        let k = self.objects;
        let total = k.pow(n as u32 + 1);
        for code in 0..total {
            let objs: Vec<usize> = (0..=n).map(|i| code / k.pow(i as u32) % k).collect();
            let dims: Vec<usize> = (0..=n).map(|i| self.dim(objs[i], objs[(i + 1) % (n + 1)])).collect();
            if dims.contains(&0) {
                continue;
            }
            let count: usize = dims.iter().product();
            for mut c in 0..count {
                let mut gens = Vec::with_capacity(n + 1);
                for &d in &dims {
                    gens.push(c % d);
                    c /= d;
                }
                out.push((objs.clone(), gens));
            }
        }
        out
    }

    /// Matrix of `b = Σ (−1)^i d_i` from chains of length `n + 1` to
    /// length `n`, rows indexed by target words.
    fn boundary(&self, p: u64, n: usize) -> Vec<Vec<u64>> {
        let src = self.words(n);
        let dst = self.words(n - 1);
        let index: HashMap<&(Vec<usize>, Vec<usize>), usize> = dst.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = vec![vec![0u64; src.len()]; dst.len()];
        for (col, (objs, gens)) in src.iter().enumerate() {
            for i in 0..=n {
                let sign = if i % 2 == 0 { 1 } else { p - 1 };
                let (a, b, c, f, g) = if i < n {
                    (objs[i], objs[i + 1], objs[(i + 2) % (n + 1)], gens[i], gens[i + 1])
                } else {
                    (objs[n], objs[0], objs[1 % (n + 1)], gens[n], gens[0])
                };
                let Some(prod) = self.mult.get(&(a, b, c, f, g)) else { continue };
                for &(r, coef) in prod {
                    let (o2, g2) = if i < n {
                        let mut o = objs.clone();
                        o.remove(i + 1);
                        let mut w = gens.clone();
                        w.splice(i..i + 2, [r]);
                        (o, w)
                    } else {
                        let mut o = vec![objs[n]];
                        o.extend_from_slice(&objs[1..n]);
                        let mut w = vec![r];
                        w.extend_from_slice(&gens[1..n]);
                        (o, w)
                    };
                    let row = index[&(o2, g2)];
                    m[row][col] = (m[row][col] + sign * coef) % p;
                }
            }
        }
        m
    }

    /// Hochschild homology in degree `n` from the full cyclic bar complex.
    pub fn hh(&self, p: u64, n: usize) -> usize {
        let dim = self.words(n).len();
        let r_out = if n == 0 { 0 } else { dense_rank(p, self.boundary(p, n)) };
        let r_in = dense_rank(p, self.boundary(p, n + 1));
        dim - r_out - r_in
    }
}

/// Discrete convolution of two Betti vectors, truncated to the shorter.
pub fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len().min(b.len());
    (0..n).map(|k| (0..=k).map(|i| a[i] * b[k - i]).sum()).collect()
}
