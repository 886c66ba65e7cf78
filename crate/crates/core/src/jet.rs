//! Jet variables `∂^α s` over coordinates `x^1 … x^d`, and monomials in them.

use core::fmt;

use smallvec::SmallVec;

/// Largest supported dimension of the affine space.
pub const MAX_DIM: usize = 6;

/// A function symbol: the density `ρ`, a Casimir `a_i`, or an opaque
/// auxiliary argument (`f`, `g`, …).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u8);

impl Symbol {
    pub const RHO: Symbol = Symbol(0);
    const AUX_BASE: u8 = 32;

    /// The Casimir `a_i`, with `i` starting at 1.
    pub fn casimir(i: usize) -> Symbol {
        assert!(
            (1..Self::AUX_BASE as usize).contains(&i),
            "casimir index out of range"
        );
        Symbol(i as u8)
    }

    /// Opaque argument number `j`; `aux(0)` prints as `f`, `aux(1)` as `g`.
    pub fn aux(j: usize) -> Symbol {
        assert!(j < 200, "auxiliary index out of range");
        Symbol(Self::AUX_BASE + j as u8)
    }

    pub fn is_rho(self) -> bool {
        self.0 == 0
    }

    pub fn casimir_index(self) -> Option<usize> {
        (1..Self::AUX_BASE)
            .contains(&self.0)
            .then_some(self.0 as usize)
    }

    pub fn aux_index(self) -> Option<usize> {
        (self.0 >= Self::AUX_BASE).then(|| (self.0 - Self::AUX_BASE) as usize)
    }

    pub fn name(self) -> alloc::string::String {
        use alloc::format;
        if self.is_rho() {
            "rho".into()
        } else if let Some(i) = self.casimir_index() {
            format!("a{i}")
        } else {
            match self.aux_index().unwrap() {
                0 => "f".into(),
                1 => "g".into(),
                j => format!("u{j}"),
            }
        }
    }

    pub fn parse(name: &str) -> Option<Symbol> {
        match name {
            "rho" => Some(Symbol::RHO),
            "f" => Some(Symbol::aux(0)),
            "g" => Some(Symbol::aux(1)),
            _ => {
                if let Some(rest) = name.strip_prefix('a') {
                    let i: usize = rest.parse().ok()?;
                    (1..Self::AUX_BASE as usize)
                        .contains(&i)
                        .then(|| Symbol::casimir(i))
                } else if let Some(rest) = name.strip_prefix('u') {
                    let j: usize = rest.parse().ok()?;
                    (j < 200).then(|| Symbol::aux(j))
                } else {
                    None
                }
            }
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Multi-index of partial derivatives, one count per coordinate.
pub type MultiIndex = [u8; MAX_DIM];

/// A jet variable packed into a word: symbol in the top byte, then one byte of
/// derivative order per coordinate. The packed order is the monomial order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet(u64);

impl Jet {
    pub fn new(symbol: Symbol, alpha: MultiIndex) -> Jet {
        let mut bits = (symbol.0 as u64) << 56;
        for (k, &a) in alpha.iter().enumerate() {
            bits |= (a as u64) << (8 * (MAX_DIM - 1 - k));
        }
        Jet(bits)
    }

    /// The underived function `s`.
    pub fn base(symbol: Symbol) -> Jet {
        Jet::new(symbol, [0; MAX_DIM])
    }

    /// `∂s/∂x^k` with `k` zero-based.
    pub fn first(symbol: Symbol, k: usize) -> Jet {
        Jet::base(symbol).differentiate(k)
    }

    pub fn symbol(self) -> Symbol {
        Symbol((self.0 >> 56) as u8)
    }

    pub fn order(self, k: usize) -> u8 {
        ((self.0 >> (8 * (MAX_DIM - 1 - k))) & 0xff) as u8
    }

    pub fn alpha(self) -> MultiIndex {
        core::array::from_fn(|k| self.order(k))
    }

    pub fn total_order(self) -> u32 {
        (0..MAX_DIM).map(|k| self.order(k) as u32).sum()
    }

    /// One more derivative along zero-based coordinate `k`.
    pub fn differentiate(self, k: usize) -> Jet {
        assert!(k < MAX_DIM);
        assert!(self.order(k) < u8::MAX, "derivative order overflow");
        Jet(self.0 + (1u64 << (8 * (MAX_DIM - 1 - k))))
    }

    pub fn with_symbol(self, symbol: Symbol) -> Jet {
        Jet((self.0 & ((1u64 << 56) - 1)) | ((symbol.0 as u64) << 56))
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol().name())?;
        let alpha = self.alpha();
        if alpha.iter().any(|&a| a > 0) {
            f.write_str("_")?;
            for (k, &a) in alpha.iter().enumerate() {
                for _ in 0..a {
                    write!(f, "{}", k + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// A product of jet variables, stored as a sorted multiset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[Jet; 12]>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(SmallVec::new())
    }

    pub fn from_jets(mut jets: SmallVec<[Jet; 12]>) -> Monomial {
        jets.sort_unstable();
        Monomial(jets)
    }

    pub fn jet(j: Jet) -> Monomial {
        let mut v = SmallVec::new();
        v.push(j);
        Monomial(v)
    }

    pub fn jets(&self) -> &[Jet] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Product of two monomials (sorted merge).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[Jet; 12]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i] <= b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self` as multisets.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out: SmallVec<[Jet; 12]> = SmallVec::new();
        let mut j = 0;
        for &x in self.0.iter() {
            if j < other.0.len() && other.0[j] == x {
                j += 1;
            } else if j < other.0.len() && other.0[j] < x {
                return None;
            } else {
                out.push(x);
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Replaces every jet through `f`, which may also flip the sign.
    pub fn map_jets(&self, mut f: impl FnMut(Jet) -> Jet) -> Monomial {
        Monomial::from_jets(self.0.iter().map(|&j| f(j)).collect())
    }

    pub fn count_symbol(&self, s: Symbol) -> usize {
        self.0.iter().filter(|j| j.symbol() == s).count()
    }

    /// Graded order used for leading terms in exact division.
    pub fn graded_cmp(&self, other: &Monomial) -> core::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, j) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            write!(f, "{j:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_roundtrip() {
        let j = Jet::new(Symbol::casimir(2), [1, 0, 3, 0, 0, 0]);
        assert_eq!(j.symbol(), Symbol::casimir(2));
        assert_eq!(j.alpha(), [1, 0, 3, 0, 0, 0]);
        assert_eq!(j.total_order(), 4);
        assert_eq!(j.differentiate(1).alpha(), [1, 1, 3, 0, 0, 0]);
        assert_eq!(alloc::format!("{j:?}"), "a2_1333");
    }

    #[test]
    fn monomial_division() {
        let r = Monomial::jet(Jet::base(Symbol::RHO));
        let a = Monomial::jet(Jet::first(Symbol::casimir(1), 0));
        let ra = r.mul(&a);
        assert_eq!(ra.checked_div(&a), Some(r.clone()));
        assert_eq!(r.checked_div(&a), None);
    }

    #[test]
    fn symbol_names() {
        for s in [
            Symbol::RHO,
            Symbol::casimir(3),
            Symbol::aux(0),
            Symbol::aux(1),
            Symbol::aux(7),
        ] {
            assert_eq!(Symbol::parse(&s.name()), Some(s));
        }
    }
}
