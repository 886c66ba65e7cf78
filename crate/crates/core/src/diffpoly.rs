//! Differential polynomials with exact rational coefficients.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::BuildHasherDefault;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use hashbrown::HashMap;
use rustc_hash::FxHasher;

use crate::coeff::Q;
use crate::jet::{Jet, Monomial, Symbol, MAX_DIM};
use crate::modp;
use crate::poly::Poly;

pub type FxMap<K, V> = HashMap<K, V, BuildHasherDefault<FxHasher>>;

/// A finite sum of monomials in jet variables. Zero coefficients are never
/// stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct DiffPoly {
    terms: FxMap<Monomial, Q>,
}

impl DiffPoly {
    pub fn zero() -> DiffPoly {
        DiffPoly::default()
    }

    pub fn constant(c: Q) -> DiffPoly {
        DiffPoly::term(c, Monomial::one())
    }

    pub fn one() -> DiffPoly {
        DiffPoly::constant(Q::ONE)
    }

    pub fn term(c: Q, m: Monomial) -> DiffPoly {
        let mut p = DiffPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn jet(j: Jet) -> DiffPoly {
        DiffPoly::term(Q::ONE, Monomial::jet(j))
    }

    /// The underived function `s` as a polynomial.
    pub fn symbol(s: Symbol) -> DiffPoly {
        DiffPoly::jet(Jet::base(s))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            hashbrown::hash_map::Entry::Occupied(mut e) => {
                let v = *e.get() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            hashbrown::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).copied().unwrap_or(Q::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Terms in ascending monomial order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, Q)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), *c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn scale(&self, c: Q) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), *v * c))
                .collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &DiffPoly, c: Q) {
        if c.is_zero() {
            return;
        }
        for (m, v) in other.terms.iter() {
            self.add_term(m.clone(), *v * c);
        }
    }

    pub fn mul_ref(&self, other: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        out.terms.reserve(self.len() * other.len());
        for (m1, c1) in self.terms.iter() {
            for (m2, c2) in other.terms.iter() {
                out.add_term(m1.mul(m2), *c1 * *c2);
            }
        }
        out
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &DiffPoly, b: &DiffPoly) {
        for (m1, c1) in a.terms.iter() {
            for (m2, c2) in b.terms.iter() {
                self.add_term(m1.mul(m2), *c1 * *c2);
            }
        }
    }

    /// Total derivative `D_k` along the zero-based coordinate `k`.
    pub fn total_derivative(&self, k: usize) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in self.terms.iter() {
            let jets = m.jets();
            for i in 0..jets.len() {
                if i > 0 && jets[i] == jets[i - 1] {
                    continue;
                }
                let mult = jets.iter().filter(|&&j| j == jets[i]).count() as i128;
                let mut nj: smallvec::SmallVec<[Jet; 12]> = jets.into();
                nj[i] = jets[i].differentiate(k);
                out.add_term(Monomial::from_jets(nj), *c * Q::int(mult));
            }
        }
        out
    }

    /// `∂^α` applied through total derivatives.
    pub fn derivative(&self, alpha: &[u8; MAX_DIM]) -> DiffPoly {
        let mut p = self.clone();
        for (k, &n) in alpha.iter().enumerate() {
            for _ in 0..n {
                p = p.total_derivative(k);
            }
        }
        p
    }

    /// Rewrites every jet; `f` returns the new jet and a sign factor.
    pub fn map_jets(&self, mut f: impl FnMut(Jet) -> (Jet, bool)) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in self.terms.iter() {
            let mut negate = false;
            let nm = m.map_jets(|j| {
                let (nj, neg) = f(j);
                negate ^= neg;
                nj
            });
            out.add_term(nm, if negate { -*c } else { *c });
        }
        out
    }

    /// Replaces the symbol `s` by `-s` everywhere.
    pub fn flip_symbol(&self, s: Symbol) -> DiffPoly {
        self.map_jets(|j| (j, j.symbol() == s))
    }

    /// Renames symbols through a permutation given as a lookup.
    pub fn rename_symbols(&self, f: impl Fn(Symbol) -> Symbol) -> DiffPoly {
        self.map_jets(|j| (j.with_symbol(f(j.symbol())), false))
    }

    /// Substitutes every occurrence of each listed jet by a polynomial.
    pub fn substitute(&self, f: impl Fn(Jet) -> Option<DiffPoly>) -> DiffPoly {
        let mut cache: FxMap<Jet, DiffPoly> = FxMap::default();
        let mut out = DiffPoly::zero();
        for (m, c) in self.terms.iter() {
            let mut acc = DiffPoly::constant(*c);
            for &j in m.jets() {
                let val = cache
                    .entry(j)
                    .or_insert_with(|| f(j).unwrap_or_else(|| DiffPoly::jet(j)))
                    .clone();
                acc = acc.mul_ref(&val);
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Largest number of derivatives on a single factor.
    pub fn max_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.jets().iter().map(|j| j.total_order()))
            .max()
            .unwrap_or(0)
    }

    /// Degree in the given symbol, as a set of distinct values over all terms.
    pub fn symbol_degrees(&self, s: Symbol) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().map(|m| m.count_symbol(s)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Evaluates at a pseudo-random point of `F_p`: every jet variable gets an
    /// independent value derived from `seed`.
    pub fn eval_mod_p(&self, seed: u64, p: u64) -> u64 {
        let mut acc = 0u64;
        for (m, c) in self.terms.iter() {
            let mut v = c.mod_p(p);
            for &j in m.jets() {
                v = modp::mul(v, jet_value(seed, j, p), p);
            }
            acc = modp::add(acc, v, p);
        }
        acc
    }

    /// Plugs in concrete polynomials in `x^1 … x^d` for the symbols.
    pub fn instantiate(&self, dim: usize, assign: &impl Fn(Symbol) -> Poly) -> Poly {
        let mut cache: FxMap<Jet, Poly> = FxMap::default();
        let mut out = Poly::zero(dim);
        for (m, c) in self.terms.iter() {
            let mut acc = Poly::constant(out.dim(), *c);
            for &j in m.jets() {
                let v = cache
                    .entry(j)
                    .or_insert_with(|| assign(j.symbol()).derivative(&j.alpha()))
                    .clone();
                acc = acc.mul(&v);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Divides by `divisor` in the graded order, returning quotient and
    /// remainder. The remainder is the unique normal form modulo the principal
    /// ideal, so it is zero exactly when the division is exact.
    pub fn reduce(&self, divisor: &DiffPoly) -> (DiffPoly, DiffPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (lead_m, lead_c) = divisor.leading_term().unwrap();
        let mut work: BTreeMap<Graded, Q> = self
            .terms
            .iter()
            .map(|(m, c)| (Graded(m.clone()), *c))
            .collect();
        let mut quotient = DiffPoly::zero();
        let mut remainder = DiffPoly::zero();
        while let Some((Graded(m), c)) = work.pop_last() {
            match m.checked_div(&lead_m) {
                Some(qm) => {
                    let qc = c / lead_c;
                    quotient.add_term(qm.clone(), qc);
                    for (dm, dc) in divisor.terms.iter() {
                        if *dm == lead_m {
                            continue;
                        }
                        let key = Graded(qm.mul(dm));
                        let v = work.get(&key).copied().unwrap_or(Q::ZERO) - qc * *dc;
                        if v.is_zero() {
                            work.remove(&key);
                        } else {
                            work.insert(key, v);
                        }
                    }
                }
                None => remainder.add_term(m, c),
            }
        }
        (quotient, remainder)
    }

    /// Exact quotient, or the leading monomial that obstructs division.
    #[allow(clippy::result_large_err)]
    pub fn div_exact(&self, divisor: &DiffPoly) -> Result<DiffPoly, (Monomial, Q)> {
        let (q, r) = self.reduce(divisor);
        match r.leading_term() {
            None => Ok(q),
            Some(t) => Err(t),
        }
    }

    pub fn leading_term(&self) -> Option<(Monomial, Q)> {
        self.terms
            .iter()
            .max_by(|a, b| a.0.graded_cmp(b.0))
            .map(|(m, c)| (m.clone(), *c))
    }

    /// Ratio `c` with `self = c * other`, if one exists.
    pub fn proportionality(&self, other: &DiffPoly) -> Option<Q> {
        if self.len() != other.len() {
            return None;
        }
        if self.is_zero() {
            return Some(Q::ONE);
        }
        let (m, c) = other.terms.iter().next().unwrap();
        let ratio = self.coeff(m) / *c;
        if ratio.is_zero() {
            return None;
        }
        other
            .terms
            .iter()
            .all(|(m, c)| self.coeff(m) == *c * ratio)
            .then_some(ratio)
    }
}

/// Pseudo-random value of a jet variable at a point of `F_p`.
pub fn jet_value(seed: u64, j: Jet, p: u64) -> u64 {
    modp::mix(seed ^ modp::mix(j.raw())) % p
}

#[derive(Clone, PartialEq, Eq)]
struct Graded(Monomial);

impl PartialOrd for Graded {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Graded {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.graded_cmp(&other.0)
    }
}

impl fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.sorted_terms().iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{m:?}")?;
        }
        Ok(())
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in rhs.terms.iter() {
            self.add_term(m.clone(), *c);
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in rhs.terms.iter() {
            self.add_term(m.clone(), -*c);
        }
    }
}

impl Add<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&DiffPoly> for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(-Q::ONE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho() -> DiffPoly {
        DiffPoly::symbol(Symbol::RHO)
    }

    fn a1() -> DiffPoly {
        DiffPoly::symbol(Symbol::casimir(1))
    }

    #[test]
    fn leibniz_rule_for_total_derivative() {
        let p = &rho() * &a1();
        let lhs = p.total_derivative(0);
        let rhs = &(&rho().total_derivative(0) * &a1()) + &(&rho() * &a1().total_derivative(0));
        assert_eq!(lhs, rhs);
        // D(ρ^2) = 2 ρ ρ_x
        let sq = &rho() * &rho();
        assert_eq!(
            sq.total_derivative(0),
            (&rho() * &rho().total_derivative(0)).scale(Q::int(2))
        );
    }

    #[test]
    fn exact_division() {
        let d = &a1().total_derivative(2) - &rho().total_derivative(1);
        let q = &(&rho() * &rho()) + &a1();
        let p = &q * &d;
        assert_eq!(p.div_exact(&d).unwrap(), q);
        let bad = &p + &rho();
        assert!(bad.div_exact(&d).is_err());
    }

    #[test]
    fn flip_and_rename() {
        let p = &(&a1() * &a1()) + &a1();
        let flipped = p.flip_symbol(Symbol::casimir(1));
        assert_eq!(flipped, &(&a1() * &a1()) - &a1());
        let renamed = p.rename_symbols(|s| {
            if s == Symbol::casimir(1) {
                Symbol::casimir(2)
            } else {
                s
            }
        });
        assert_eq!(renamed.symbol_degrees(Symbol::casimir(1)), alloc::vec![0]);
    }

    #[test]
    fn proportional_polys() {
        let p = &rho() + &a1();
        assert_eq!(
            p.scale(Q::new(-3, 2)).proportionality(&p),
            Some(Q::new(-3, 2))
        );
        assert_eq!((&p + &rho()).proportionality(&p), None);
    }
}
