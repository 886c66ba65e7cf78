//! Multivectors with differential-polynomial coefficients, the
//! Schouten–Nijenhuis bracket, and the Nambu-determinant brackets.
//!
//! A `k`-vector is stored as a superfunction `Σ_I A^I ξ_I` over strictly
//! increasing index tuples `I`; the odd variables `ξ_i` stand for `∂/∂x^i`.
//! The bracket is
//!
//! ```text
//! [[A, B]] = Σ_i (A ←∂/∂ξ_i)(∂B/∂x^i) − (∂A/∂x^i)(∂/∂ξ_i→ B)
//! ```
//!
//! so that `[[X, f]] = X(f)` for a vector field and `[[P, X]] = −L_X P`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use smallvec::SmallVec;

use crate::coeff::Q;
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::jet::{Symbol, MAX_DIM};

/// Strictly increasing zero-based coordinate indices.
pub type IndexSet = SmallVec<[u8; MAX_DIM]>;

#[derive(Clone, PartialEq, Eq)]
pub struct Multivector {
    dim: usize,
    arity: usize,
    coeffs: BTreeMap<IndexSet, DiffPoly>,
}

impl Multivector {
    pub fn zero(dim: usize, arity: usize) -> Multivector {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds MAX_DIM");
        Multivector {
            dim,
            arity,
            coeffs: BTreeMap::new(),
        }
    }

    /// A 0-vector.
    pub fn scalar(dim: usize, p: DiffPoly) -> Multivector {
        let mut m = Multivector::zero(dim, 0);
        m.add_to(IndexSet::new(), &p);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&IndexSet, &DiffPoly)> {
        self.coeffs.iter()
    }

    /// Total number of (index tuple, monomial) pairs.
    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(DiffPoly::len).sum()
    }

    /// Coefficient at a strictly increasing tuple.
    pub fn get(&self, idx: &[u8]) -> DiffPoly {
        self.coeffs.get(idx).cloned().unwrap_or_default()
    }

    /// Borrowed coefficient at a strictly increasing tuple; `None` is zero.
    pub fn get_ref(&self, idx: &[u8]) -> Option<&DiffPoly> {
        self.coeffs.get(idx)
    }

    /// Coefficient at an arbitrary tuple, applying the permutation sign.
    pub fn component(&self, idx: &[u8]) -> DiffPoly {
        match sort_with_sign(idx) {
            None => DiffPoly::zero(),
            Some((sorted, neg)) => {
                let c = self.get(&sorted);
                if neg {
                    -&c
                } else {
                    c
                }
            }
        }
    }

    /// Adds `p` to the coefficient of the (not necessarily sorted) tuple.
    pub fn add_component(&mut self, idx: &[u8], p: &DiffPoly) {
        if let Some((sorted, neg)) = sort_with_sign(idx) {
            if neg {
                self.add_to(sorted, &-p);
            } else {
                self.add_to(sorted, p);
            }
        }
    }

    fn add_to(&mut self, idx: IndexSet, p: &DiffPoly) {
        debug_assert_eq!(idx.len(), self.arity);
        if p.is_zero() {
            return;
        }
        let e = self.coeffs.entry(idx.clone()).or_default();
        *e += p;
        if e.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn add(&self, other: &Multivector) -> Multivector {
        self.add_scaled(other, Q::ONE)
    }

    pub fn sub(&self, other: &Multivector) -> Multivector {
        self.add_scaled(other, -Q::ONE)
    }

    pub fn add_scaled(&self, other: &Multivector, c: Q) -> Multivector {
        let mut out = self.clone();
        out.add_scaled_assign(other, c);
        out
    }

    /// `self += c * other`.
    pub fn add_scaled_assign(&mut self, other: &Multivector, c: Q) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        assert_eq!(self.arity, other.arity, "arity mismatch");
        for (i, p) in other.coeffs.iter() {
            let e = self.coeffs.entry(i.clone()).or_default();
            e.add_scaled(p, c);
            if e.is_zero() {
                self.coeffs.remove(i);
            }
        }
    }

    pub fn scale(&self, c: Q) -> Multivector {
        self.map(|p| p.scale(c))
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&DiffPoly) -> DiffPoly) -> Multivector {
        let mut out = Multivector::zero(self.dim, self.arity);
        for (i, p) in self.coeffs.iter() {
            out.add_to(i.clone(), &f(p));
        }
        out
    }

    /// Multiplies every coefficient by the polynomial `p`.
    pub fn mul_poly(&self, p: &DiffPoly) -> Multivector {
        self.map(|c| c * p)
    }

    fn partial_x(&self, k: usize) -> Multivector {
        self.map(|p| p.total_derivative(k))
    }

    /// Left derivative `∂/∂ξ_k →`.
    fn left_dxi(&self, k: u8) -> Multivector {
        let mut out = Multivector::zero(self.dim, self.arity.saturating_sub(1));
        for (idx, p) in self.coeffs.iter() {
            if let Some(r) = idx.iter().position(|&i| i == k) {
                let mut rest = idx.clone();
                rest.remove(r);
                out.add_to(rest, &if r % 2 == 1 { -p } else { p.clone() });
            }
        }
        out
    }

    /// Right derivative `← ∂/∂ξ_k`.
    fn right_dxi(&self, k: u8) -> Multivector {
        let mut out = Multivector::zero(self.dim, self.arity.saturating_sub(1));
        for (idx, p) in self.coeffs.iter() {
            if let Some(r) = idx.iter().position(|&i| i == k) {
                let mut rest = idx.clone();
                rest.remove(r);
                let neg = (idx.len() - 1 - r) % 2 == 1;
                out.add_to(rest, &if neg { -p } else { p.clone() });
            }
        }
        out
    }

    /// Exterior product of superfunctions.
    pub fn wedge(&self, other: &Multivector) -> Multivector {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Multivector::zero(self.dim, self.arity + other.arity);
        for (i, p) in self.coeffs.iter() {
            for (j, q) in other.coeffs.iter() {
                let mut cat: IndexSet = i.clone();
                cat.extend_from_slice(j);
                out.add_component(&cat, &(p * q));
            }
        }
        out
    }

    /// The Schouten–Nijenhuis bracket.
    pub fn schouten(&self, other: &Multivector) -> Result<Multivector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let (p, q) = (self.arity, other.arity);
        if p + q == 0 {
            return Ok(Multivector::zero(self.dim, 0));
        }
        if p + q - 1 > self.dim {
            return Err(Error::ArityOverflow {
                arity: p + q - 1,
                dim: self.dim,
            });
        }
        let mut out = Multivector::zero(self.dim, p + q - 1);
        for k in 0..self.dim {
            if p > 0 {
                out.add_scaled_assign(&self.right_dxi(k as u8).wedge(&other.partial_x(k)), Q::ONE);
            }
            if q > 0 {
                out.add_scaled_assign(&self.partial_x(k).wedge(&other.left_dxi(k as u8)), -Q::ONE);
            }
        }
        Ok(out)
    }

    /// `½ [[P, P]]`, the left-hand side of the Jacobi identity.
    pub fn jacobiator(&self) -> Result<Multivector> {
        if self.arity != 2 {
            return Err(Error::Invalid("jacobiator expects a bi-vector".into()));
        }
        if self.dim < 3 {
            return Ok(Multivector::zero(self.dim, 3));
        }
        Ok(self.schouten(self)?.scale(Q::new(1, 2)))
    }

    /// Evaluates the `k`-vector on `k` functions, `A(f_1, …, f_k)`.
    pub fn apply(&self, args: &[DiffPoly]) -> DiffPoly {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        let grads: Vec<Vec<DiffPoly>> = args
            .iter()
            .map(|f| (0..self.dim).map(|k| f.total_derivative(k)).collect())
            .collect();
        let mut out = DiffPoly::zero();
        for (idx, c) in self.coeffs.iter() {
            for (perm, neg) in permutations(idx.len()) {
                let mut prod = c.clone();
                for (s, &pos) in perm.iter().enumerate() {
                    prod = &prod * &grads[s][idx[pos] as usize];
                    if prod.is_zero() {
                        break;
                    }
                }
                if neg {
                    out -= &prod;
                } else {
                    out += &prod;
                }
            }
        }
        out
    }

    /// Replaces the symbol `s` by `-s` in every coefficient.
    pub fn flip_symbol(&self, s: Symbol) -> Multivector {
        self.map(|p| p.flip_symbol(s))
    }

    pub fn rename_symbols(&self, f: impl Fn(Symbol) -> Symbol + Copy) -> Multivector {
        self.map(|p| p.rename_symbols(f))
    }

    /// Evaluates every coefficient at a pseudo-random point modulo `p`.
    pub fn eval_mod_p(&self, seed: u64, p: u64) -> Vec<(IndexSet, u64)> {
        self.coeffs
            .iter()
            .map(|(i, c)| (i.clone(), c.eval_mod_p(seed, p)))
            .collect()
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector(d={}, k={})", self.dim, self.arity)?;
        for (i, p) in self.coeffs.iter() {
            write!(f, "\n  {:?}: {:?}", i.as_slice(), p)?;
        }
        Ok(())
    }
}

/// Sorts a tuple, returning the sorted tuple and whether the permutation was
/// odd; `None` on a repeated index.
pub fn sort_with_sign(idx: &[u8]) -> Option<(IndexSet, bool)> {
    let mut v: IndexSet = idx.into();
    let mut neg = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            neg = !neg;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, neg))
}

/// All permutations of `0..n` with their parity (true = odd).
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if cur.len() == n {
            let inv = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| cur[i] > cur[j])
                .count();
            out.push((cur.clone(), inv % 2 == 1));
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut alloc::vec![false; n], &mut out);
    out
}

/// A row of a Jacobian matrix: either a constant unit covector or the
/// gradient of a polynomial.
enum Row<'a> {
    Unit(usize),
    Grad(&'a [DiffPoly]),
}

fn jacobian_det(rows: &[Row<'_>], dim: usize) -> DiffPoly {
    assert_eq!(rows.len(), dim);
    let mut out = DiffPoly::zero();
    'perm: for (perm, neg) in permutations(dim) {
        let mut prod = DiffPoly::one();
        for (r, row) in rows.iter().enumerate() {
            match row {
                Row::Unit(i) => {
                    if perm[r] != *i {
                        continue 'perm;
                    }
                }
                Row::Grad(g) => {
                    prod = &prod * &g[perm[r]];
                    if prod.is_zero() {
                        continue 'perm;
                    }
                }
            }
        }
        if neg {
            out -= &prod;
        } else {
            out += &prod;
        }
    }
    out
}

fn gradient(f: &DiffPoly, dim: usize) -> Vec<DiffPoly> {
    (0..dim).map(|k| f.total_derivative(k)).collect()
}

/// The Nambu-determinant bi-vector `P(ρ, [a])` with generic density and
/// Casimirs `a_1 … a_{d−2}`.
pub fn nambu_bivector(dim: usize) -> Result<Multivector> {
    if dim < 2 {
        return Err(Error::Invalid(alloc::format!(
            "Nambu bracket needs d >= 2, got {dim}"
        )));
    }
    let casimirs: Vec<DiffPoly> = (1..=dim - 2)
        .map(|i| DiffPoly::symbol(Symbol::casimir(i)))
        .collect();
    nambu_bivector_with(dim, &DiffPoly::symbol(Symbol::RHO), &casimirs)
}

/// The Nambu-determinant bi-vector built from arbitrary polynomials in place
/// of `ρ` and the Casimirs.
pub fn nambu_bivector_with(
    dim: usize,
    rho: &DiffPoly,
    casimirs: &[DiffPoly],
) -> Result<Multivector> {
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(Error::Invalid(alloc::format!(
            "unsupported dimension {dim}"
        )));
    }
    if casimirs.len() != dim - 2 {
        return Err(Error::Invalid(alloc::format!(
            "expected {} Casimirs, got {}",
            dim - 2,
            casimirs.len()
        )));
    }
    let grads: Vec<Vec<DiffPoly>> = casimirs.iter().map(|a| gradient(a, dim)).collect();
    let mut out = Multivector::zero(dim, 2);
    for i in 0..dim {
        for j in i + 1..dim {
            let mut rows = alloc::vec![Row::Unit(i), Row::Unit(j)];
            rows.extend(grads.iter().map(|g| Row::Grad(g)));
            let det = jacobian_det(&rows, dim);
            out.add_to(smallvec::smallvec![i as u8, j as u8], &(rho * &det));
        }
    }
    Ok(out)
}

/// The top-degree multivector `ρ ∂_{x^1} ∧ … ∧ ∂_{x^d}`.
pub fn top_vector(dim: usize, rho: &DiffPoly) -> Multivector {
    let mut out = Multivector::zero(dim, dim);
    out.add_to((0..dim as u8).collect(), rho);
    out
}

/// The `N`-ary Nambu bracket `ρ · det ∂(f_1, …, f_N, a_{N−1}, …, a_{d−2}) / ∂x`.
pub fn nary_bracket(dim: usize, args: &[DiffPoly]) -> Result<DiffPoly> {
    let rho = DiffPoly::symbol(Symbol::RHO);
    let casimirs: Vec<DiffPoly> = (1..=dim.saturating_sub(2))
        .map(|i| DiffPoly::symbol(Symbol::casimir(i)))
        .collect();
    nary_bracket_with(dim, &rho, &casimirs, args)
}

pub fn nary_bracket_with(
    dim: usize,
    rho: &DiffPoly,
    casimirs: &[DiffPoly],
    args: &[DiffPoly],
) -> Result<DiffPoly> {
    let n = args.len();
    if n < 2 || n > dim {
        return Err(Error::Invalid(alloc::format!(
            "bracket arity {n} outside 2..={dim}"
        )));
    }
    if dim > MAX_DIM || casimirs.len() != dim - 2 {
        return Err(Error::Invalid(
            "Casimir list does not match the dimension".into(),
        ));
    }
    let mut grads: Vec<Vec<DiffPoly>> = args.iter().map(|f| gradient(f, dim)).collect();
    grads.extend(casimirs[n - 2..].iter().map(|a| gradient(a, dim)));
    let rows: Vec<Row<'_>> = grads.iter().map(|g| Row::Grad(g)).collect();
    Ok(rho * &jacobian_det(&rows, dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Jet;

    fn jet1(s: Symbol, k: usize) -> DiffPoly {
        DiffPoly::jet(Jet::first(s, k))
    }

    #[test]
    fn nambu_in_two_dimensions_is_rho() {
        let p = nambu_bivector(2).unwrap();
        assert_eq!(p.get(&[0, 1]), DiffPoly::symbol(Symbol::RHO));
        assert_eq!(p.term_count(), 1);
    }

    #[test]
    fn nambu_in_three_dimensions_by_hand() {
        // expansion of det(e_i; e_j; ∇a) along the last row
        let p = nambu_bivector(3).unwrap();
        let rho = DiffPoly::symbol(Symbol::RHO);
        let a = Symbol::casimir(1);
        assert_eq!(p.get(&[0, 1]), &rho * &jet1(a, 2));
        assert_eq!(p.get(&[0, 2]), -&(&rho * &jet1(a, 1)));
        assert_eq!(p.get(&[1, 2]), &rho * &jet1(a, 0));
    }

    #[test]
    fn vector_field_acts_as_derivation() {
        let f = DiffPoly::symbol(Symbol::aux(0));
        let mut x = Multivector::zero(2, 1);
        x.add_component(&[0], &DiffPoly::symbol(Symbol::RHO));
        let f0 = Multivector::scalar(2, f.clone());
        let lhs = x.schouten(&f0).unwrap();
        assert_eq!(
            lhs.get(&[]),
            &DiffPoly::symbol(Symbol::RHO) * &f.total_derivative(0)
        );
    }

    #[test]
    fn top_degree_bracket_arity_is_checked() {
        let p = nambu_bivector(3).unwrap();
        let t = top_vector(3, &DiffPoly::symbol(Symbol::RHO));
        assert!(matches!(p.schouten(&t), Err(Error::ArityOverflow { .. })));
    }

    #[test]
    fn sort_sign() {
        assert_eq!(
            sort_with_sign(&[2, 0, 1]).unwrap(),
            (smallvec::smallvec![0, 1, 2], false)
        );
        assert!(sort_with_sign(&[1, 0]).unwrap().1);
        assert!(sort_with_sign(&[1, 1]).is_none());
    }

    fn rho() -> DiffPoly {
        DiffPoly::symbol(Symbol::RHO)
    }

    #[test]
    fn euler_bracket() {
        use crate::poly::Poly;
        let p = nambu_bivector(3).unwrap();
        let coord = |k| Poly::coordinate(3, k);
        let a = coord(0)
            .mul(&coord(0))
            .add(&coord(1).mul(&coord(1)))
            .add(&coord(2).mul(&coord(2)))
            .scale(Q::new(1, 2));
        let assign = |s: Symbol| {
            if s.is_rho() {
                Poly::constant(3, Q::ONE)
            } else {
                a.clone()
            }
        };
        // {x,y} = z, {y,z} = x, {z,x} = y
        assert_eq!(p.get(&[0, 1]).instantiate(3, &assign), coord(2));
        assert_eq!(p.get(&[1, 2]).instantiate(3, &assign), coord(0));
        assert_eq!(p.component(&[2, 0]).instantiate(3, &assign), coord(1));
    }

    #[test]
    fn nary_bracket_cases() {
        let x: Vec<DiffPoly> = (0..3).map(|k| DiffPoly::symbol(Symbol::aux(k))).collect();
        let f = &x[0];
        let g = &x[1];
        let b2 = nary_bracket(3, &[f.clone(), g.clone()]).unwrap();
        assert_eq!(
            b2,
            nambu_bivector(3).unwrap().apply(&[f.clone(), g.clone()])
        );
        let swapped = nary_bracket(3, &[g.clone(), f.clone()]).unwrap();
        assert_eq!(swapped, -&b2);
        let b3 = nary_bracket(3, &x).unwrap();
        let x3 = nary_bracket(3, &[x[1].clone(), x[0].clone(), x[2].clone()]).unwrap();
        assert_eq!(x3, -&b3);
        assert!(nary_bracket(3, &x[..1]).is_err());
        assert!(nary_bracket(3, &[f.clone(), g.clone(), f.clone(), g.clone()]).is_err());
    }

    #[test]
    fn coordinate_bracket_is_rho() {
        use crate::poly::Poly;
        let coords: Vec<Poly> = (0..4).map(|k| Poly::coordinate(4, k)).collect();
        let args: Vec<DiffPoly> = (0..4).map(|k| DiffPoly::symbol(Symbol::aux(k))).collect();
        let b = nary_bracket(4, &args).unwrap();
        let r = Poly::random(4, 2, 3, &mut Lcg(5));
        let assign = |s: Symbol| match s.aux_index() {
            Some(k) => coords[k].clone(),
            None => r.clone(),
        };
        assert_eq!(b.instantiate(4, &assign), r);
    }

    struct Lcg(u64);

    impl rand_core::RngCore for Lcg {
        fn next_u32(&mut self) -> u32 {
            self.next_u64() as u32
        }
        fn next_u64(&mut self) -> u64 {
            self.0 = self
                .0
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            self.0 >> 11
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            rand_core::impls::fill_bytes_via_next(self, dest)
        }
        fn try_fill_bytes(
            &mut self,
            dest: &mut [u8],
        ) -> core::result::Result<(), rand_core::Error> {
            self.fill_bytes(dest);
            Ok(())
        }
    }

    #[test]
    fn iterated_bracket_with_casimirs_gives_nambu() {
        for d in 2..=4 {
            let mut m = top_vector(d, &rho());
            for i in (1..=d - 2).rev() {
                m = m
                    .schouten(&Multivector::scalar(
                        d,
                        DiffPoly::symbol(Symbol::casimir(i)),
                    ))
                    .unwrap();
            }
            assert_eq!(m, nambu_bivector(d).unwrap(), "d = {d}");
        }
    }

    #[test]
    fn jacobiator_vanishes() {
        for d in [2, 3, 4] {
            let p = nambu_bivector(d).unwrap();
            assert!(p.jacobiator().unwrap().is_zero(), "d = {d}");
        }
        assert!(nambu_bivector(2)
            .unwrap()
            .schouten(&nambu_bivector(2).unwrap())
            .is_err());
    }

    #[test]
    fn jacobiator_detects_non_poisson() {
        let mut p = Multivector::zero(3, 2);
        p.add_component(&[0, 1], &DiffPoly::symbol(Symbol::aux(0)));
        p.add_component(&[0, 2], &DiffPoly::symbol(Symbol::aux(1)));
        assert!(!p.jacobiator().unwrap().is_zero());
    }

    mod props {
        use super::super::*;
        use crate::jet::Jet;
        use proptest::prelude::*;

        const D: usize = 3;

        fn poly() -> impl Strategy<Value = DiffPoly> {
            let jet = (0usize..3, 0usize..=D).prop_map(|(s, k)| {
                let sym = [Symbol::RHO, Symbol::casimir(1), Symbol::aux(0)][s];
                if k == D {
                    DiffPoly::symbol(sym)
                } else {
                    DiffPoly::jet(Jet::first(sym, k))
                }
            });
            proptest::collection::vec((jet.clone(), jet, -3i64..=3), 1..3).prop_map(|ts| {
                let mut out = DiffPoly::zero();
                for (a, b, c) in ts {
                    out.add_scaled(&(&a * &b), Q::from(c));
                }
                out
            })
        }

        fn multivector(k: usize) -> impl Strategy<Value = Multivector> {
            let sets: Vec<IndexSet> = (0..1u32 << D)
                .filter(|m| m.count_ones() as usize == k)
                .map(|m| (0..D as u8).filter(|i| m >> i & 1 == 1).collect())
                .collect();
            let n = sets.len();
            proptest::collection::vec(poly(), n).prop_map(move |ps| {
                let mut m = Multivector::zero(D, k);
                for (i, p) in sets.iter().zip(ps) {
                    m.add_component(i, &p);
                }
                m
            })
        }

        fn pair() -> impl Strategy<Value = (Multivector, Multivector)> {
            (0usize..=2, 0usize..=2).prop_flat_map(|(p, q)| (multivector(p), multivector(q)))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn graded_antisymmetry((a, b) in pair()) {
                let (p, q) = (a.arity(), b.arity());
                let ab = a.schouten(&b).unwrap();
                let ba = b.schouten(&a).unwrap();
                let c = if ((p as i64 - 1) * (q as i64 - 1)).rem_euclid(2) == 0 { Q::ONE } else { -Q::ONE };
                prop_assert!(ab.add_scaled(&ba, c).is_zero());
            }

            #[test]
            fn vector_fields_act_as_derivations(x in multivector(1), f in poly(), g in poly()) {
                let xf = x.apply(core::slice::from_ref(&f));
                let xg = x.apply(core::slice::from_ref(&g));
                prop_assert_eq!(x.apply(&[&f * &g]), &(&xf * &g) + &(&f * &xg));
            }
        }
    }
}
