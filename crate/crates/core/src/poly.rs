//! Concrete polynomials in the coordinates `x^1 … x^d`, used to instantiate
//! differential polynomials on sample data.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::coeff::Q;
use crate::jet::MAX_DIM;

pub type Exponent = [u8; MAX_DIM];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    dim: usize,
    terms: BTreeMap<Exponent, Q>,
}

impl Poly {
    pub fn zero(dim: usize) -> Poly {
        assert!(dim <= MAX_DIM);
        Poly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Q) -> Poly {
        let mut p = Poly::zero(dim);
        p.add_term([0; MAX_DIM], c);
        p
    }

    /// The coordinate function `x^{k+1}` (zero-based `k`).
    pub fn coordinate(dim: usize, k: usize) -> Poly {
        let mut e = [0; MAX_DIM];
        e[k] = 1;
        let mut p = Poly::zero(dim);
        p.add_term(e, Q::ONE);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Q)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, e: Exponent, c: Q) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.get(&e).copied().unwrap_or(Q::ZERO) + c;
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-Q::ONE))
    }

    pub fn scale(&self, c: Q) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, v) in self.terms.iter() {
            out.add_term(*e, *v * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.dim.max(other.dim));
        for (e1, c1) in self.terms.iter() {
            for (e2, c2) in other.terms.iter() {
                let e: Exponent = core::array::from_fn(|k| e1[k] + e2[k]);
                out.add_term(e, *c1 * *c2);
            }
        }
        out
    }

    pub fn partial(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.dim);
        for (e, c) in self.terms.iter() {
            if e[k] > 0 {
                let mut ne = *e;
                ne[k] -= 1;
                out.add_term(ne, *c * Q::int(e[k] as i128));
            }
        }
        out
    }

    pub fn derivative(&self, alpha: &Exponent) -> Poly {
        let mut p = self.clone();
        for (k, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                p = p.partial(k);
            }
        }
        p
    }

    /// Substitutes `x^k ↦ images[k]` (a polynomial change of coordinates).
    pub fn compose(&self, images: &[Poly]) -> Poly {
        let dim = images.first().map_or(self.dim, |p| p.dim);
        let mut out = Poly::zero(dim);
        for (e, c) in self.terms.iter() {
            let mut acc = Poly::constant(dim, *c);
            for (k, &n) in e.iter().enumerate().take(self.dim) {
                for _ in 0..n {
                    acc = acc.mul(&images[k]);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// A random polynomial of total degree at most `degree` with integer
    /// coefficients in `-bound..=bound`.
    pub fn random(dim: usize, degree: u8, bound: i64, rng: &mut impl RngCore) -> Poly {
        let mut p = Poly::zero(dim);
        for e in exponents(dim, degree) {
            let span = (2 * bound + 1) as u64;
            let c = (rng.next_u64() % span) as i64 - bound;
            p.add_term(e, Q::from(c));
        }
        p
    }
}

/// All exponent vectors over `dim` coordinates with total degree `<= degree`.
pub fn exponents(dim: usize, degree: u8) -> Vec<Exponent> {
    fn rec(k: usize, dim: usize, left: u8, cur: &mut Exponent, out: &mut Vec<Exponent>) {
        if k == dim {
            out.push(*cur);
            return;
        }
        for n in 0..=left {
            cur[k] = n;
            rec(k + 1, dim, left - n, cur, out);
        }
        cur[k] = 0;
    }
    let mut out = Vec::new();
    rec(0, dim, degree, &mut [0; MAX_DIM], &mut out);
    out
}
