//! Rational linear combinations of canonical graphs.

use alloc::collections::btree_map;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::Canonical;
use crate::coeff::Q;

/// A finite sum `Σ c_i G_i` over canonical graphs. Zero graphs and zero
/// coefficients are never stored; iteration follows the canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSum<G: Ord> {
    terms: BTreeMap<G, Q>,
}

impl<G: Ord> Default for GraphSum<G> {
    fn default() -> Self {
        GraphSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<G: Canonical> GraphSum<G> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn single(g: &G) -> Self {
        let mut s = Self::new();
        s.add(g, Q::ONE);
        s
    }

    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (Q, &'a G)>) -> Self
    where
        G: 'a,
    {
        let mut s = Self::new();
        for (c, g) in terms {
            s.add(g, c);
        }
        s
    }

    /// Adds `c * g`, canonicalizing `g` first; returns the canonical sign.
    pub fn add(&mut self, g: &G, c: Q) -> i8 {
        let cf = g.canonical();
        if cf.sign != 0 {
            self.add_canonical(cf.graph, c * Q::int(cf.sign as i128));
        }
        cf.sign
    }

    /// Adds a term whose graph is already canonical.
    pub fn add_canonical(&mut self, g: G, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            btree_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn add_sum(&mut self, other: &GraphSum<G>, c: Q) {
        for (g, v) in other.terms.iter() {
            self.add_canonical(g.clone(), *v * c);
        }
    }

    pub fn scale(&self, c: Q) -> GraphSum<G> {
        let mut out = Self::new();
        out.add_sum(self, c);
        out
    }

    pub fn sub(&self, other: &GraphSum<G>) -> GraphSum<G> {
        let mut out = self.clone();
        out.add_sum(other, -Q::ONE);
        out
    }

    pub fn coeff(&self, g: &G) -> Q {
        self.terms.get(g).copied().unwrap_or(Q::ZERO)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&G, &Q)> {
        self.terms.iter()
    }

    pub fn graphs(&self) -> Vec<G> {
        self.terms.keys().cloned().collect()
    }

    /// Applies a linear map term by term.
    pub fn map<H: Canonical>(&self, mut f: impl FnMut(&G, Q, &mut GraphSum<H>)) -> GraphSum<H> {
        let mut out = GraphSum::new();
        for (g, c) in self.terms.iter() {
            f(g, *c, &mut out);
        }
        out
    }
}
