//! Prime fields GF(p) and sparse coefficient vectors.

use std::fmt;

use crate::error::{Error, Result};

/// Scalars are stored as canonical residues in `0..p`.
pub type Scalar = u32;

/// A sparse vector: `(index, coefficient)` pairs sorted by index, no zero
/// coefficients, no repeated indices.
pub type SparseVec = Vec<(usize, Scalar)>;

/// The prime field GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Field {
    p: u32,
}

impl Field {
    pub const GF2: Field = Field { p: 2 };

    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn characteristic(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn is_binary(self) -> bool {
        self.p == 2
    }

    #[inline]
    pub fn reduce(self, x: i64) -> Scalar {
        x.rem_euclid(self.p as i64) as Scalar
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as Scalar
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u64 * b as u64) % self.p as u64) as Scalar
    }

    /// Multiplicative inverse via Fermat; `a` must be nonzero.
    pub fn inv(self, a: Scalar) -> Scalar {
        debug_assert!(!a.is_multiple_of(self.p), "inverse of zero");
        let mut base = a as u64 % self.p as u64;
        let mut exp = self.p as u64 - 2;
        let m = self.p as u64;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            exp >>= 1;
        }
        acc as Scalar
    }

    /// `(-1)^k` as a field element.
    #[inline]
    pub fn sign(self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            1
        } else {
            self.neg(1)
        }
    }

    /// Returns `c * v`.
    pub fn scale(self, c: Scalar, v: &[(usize, Scalar)]) -> SparseVec {
        if c == 0 {
            return Vec::new();
        }
        v.iter()
            .map(|&(i, x)| (i, self.mul(c, x)))
            .filter(|&(_, x)| x != 0)
            .collect()
    }

    /// Collects arbitrary `(index, coefficient)` terms into a canonical sparse vector.
    pub fn collect<I>(self, terms: I) -> SparseVec
    where
        I: IntoIterator<Item = (usize, Scalar)>,
    {
        let mut v: Vec<(usize, Scalar)> = terms.into_iter().filter(|t| t.1 != 0).collect();
        self.canonicalize(&mut v);
        v
    }

    /// Sorts by index, merges repeated indices and drops zeros, in place.
    pub fn canonicalize(self, v: &mut Vec<(usize, Scalar)>) {
        if v.len() <= 1 {
            v.retain(|t| t.1 != 0);
            return;
        }
        v.sort_unstable_by_key(|t| t.0);
        let mut w = 0;
        for r in 0..v.len() {
            let (i, c) = v[r];
            if w > 0 && v[w - 1].0 == i {
                v[w - 1].1 = self.add(v[w - 1].1, c);
            } else {
                v[w] = (i, c);
                w += 1;
            }
        }
        v.truncate(w);
        v.retain(|t| t.1 != 0);
    }

    /// `a + c * b` for canonical sparse vectors.
    pub fn axpy(self, a: &[(usize, Scalar)], c: Scalar, b: &[(usize, Scalar)]) -> SparseVec {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() || k < b.len() {
            if k >= b.len() || (i < a.len() && a[i].0 < b[k].0) {
                out.push(a[i]);
                i += 1;
            } else if i >= a.len() || b[k].0 < a[i].0 {
                let x = self.mul(c, b[k].1);
                if x != 0 {
                    out.push((b[k].0, x));
                }
                k += 1;
            } else {
                let x = self.add(a[i].1, self.mul(c, b[k].1));
                if x != 0 {
                    out.push((a[i].0, x));
                }
                i += 1;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        assert!(Field::new(4).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(0).is_err());
        assert!(Field::new(7).is_ok());
    }

    #[test]
    fn inverses_mod_seven() {
        let f = Field::new(7).unwrap();
        for a in 1..7 {
            assert_eq!(f.mul(a, f.inv(a)), 1);
        }
    }

    #[test]
    fn collect_combines_and_drops_zeros() {
        let f = Field::new(3).unwrap();
        let v = f.collect(vec![(2, 1), (0, 2), (2, 2), (5, 1)]);
        assert_eq!(v, vec![(0, 2), (5, 1)]);
    }

    #[test]
    fn axpy_cancels() {
        let f = Field::GF2;
        assert_eq!(f.axpy(&[(0, 1), (3, 1)], 1, &[(3, 1), (4, 1)]), vec![(0, 1), (4, 1)]);
    }
}
