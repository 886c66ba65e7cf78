//! Exact sparse linear algebra over arbitrary-precision rationals.
//!
//! Columns are pushed one at a time and reduced against a triangular basis
//! keyed by pivot row. Each basis vector remembers which combination of the
//! original columns produced it, which yields kernels and solutions.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;
pub type SparseVec<K> = BTreeMap<K, Rat>;

/// Incrementally built column echelon form.
#[derive(Clone, Debug)]
pub struct ColumnEchelon<K: Ord + Clone> {
    /// pivot row → (reduced vector, combination of original columns)
    basis: BTreeMap<K, (SparseVec<K>, BTreeMap<usize, Rat>)>,
    ncols: usize,
    kernel: Vec<BTreeMap<usize, Rat>>,
    independent: Vec<usize>,
}

impl<K: Ord + Clone> Default for ColumnEchelon<K> {
    fn default() -> Self {
        ColumnEchelon {
            basis: BTreeMap::new(),
            ncols: 0,
            kernel: Vec::new(),
            independent: Vec::new(),
        }
    }
}

fn axpy<K: Ord + Clone>(y: &mut BTreeMap<K, Rat>, a: &Rat, x: &BTreeMap<K, Rat>) {
    for (k, v) in x {
        let delta = a * v;
        match y.get_mut(k) {
            Some(e) => {
                *e += delta;
                if e.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                y.insert(k.clone(), delta);
            }
        }
    }
}

impl<K: Ord + Clone> ColumnEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `v` against the basis; returns the residue and the combination
    /// `c` (over original columns) with `v_in = residue + Σ c_j col_j`.
    fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, BTreeMap<usize, Rat>) {
        v.retain(|_, x| !x.is_zero());
        let mut comb: BTreeMap<usize, Rat> = BTreeMap::new();
        let mut done: SparseVec<K> = BTreeMap::new();
        while let Some((k, x)) = v.pop_last() {
            match self.basis.get(&k) {
                Some((b, c)) => {
                    let factor = &x / &b[&k];
                    let neg = -&factor;
                    let mut rest = b.clone();
                    rest.remove(&k);
                    axpy(&mut v, &neg, &rest);
                    axpy(&mut comb, &factor, c);
                }
                None => {
                    done.insert(k, x);
                }
            }
        }
        (done, comb)
    }

    /// Adds a column. Returns the index of the new kernel vector if the
    /// column is dependent on the previous ones.
    pub fn push(&mut self, col: SparseVec<K>) -> Option<usize> {
        let j = self.ncols;
        self.ncols += 1;
        let (residue, comb) = self.reduce(col);
        match residue.last_key_value() {
            None => {
                let mut kv: BTreeMap<usize, Rat> = comb.into_iter().map(|(i, x)| (i, -x)).collect();
                kv.insert(j, Rat::one());
                self.kernel.push(kv);
                Some(self.kernel.len() - 1)
            }
            Some((pivot, _)) => {
                let pivot = pivot.clone();
                let mut c: BTreeMap<usize, Rat> = comb.into_iter().map(|(i, x)| (i, -x)).collect();
                c.insert(j, Rat::one());
                self.basis.insert(pivot, (residue, c));
                self.independent.push(j);
                None
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn column_count(&self) -> usize {
        self.ncols
    }

    /// Columns that entered the basis, in push order.
    pub fn independent_columns(&self) -> &[usize] {
        &self.independent
    }

    /// Kernel basis as dense vectors, each scaled to coprime integers with a
    /// positive leading entry.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        self.kernel
            .iter()
            .map(|kv| {
                let mut v = vec![Rat::zero(); self.ncols];
                for (i, x) in kv {
                    v[*i] = x.clone();
                }
                primitive(v)
            })
            .collect()
    }

    /// Solves `Σ x_j col_j = b`. On success the solution is supported on the
    /// independent columns; otherwise the nonzero residue is returned.
    pub fn solve(&self, b: SparseVec<K>) -> Result<Vec<Rat>, SparseVec<K>> {
        let (residue, comb) = self.reduce(b);
        if !residue.is_empty() {
            return Err(residue);
        }
        let mut x = vec![Rat::zero(); self.ncols];
        for (i, c) in comb {
            x[i] = c;
        }
        Ok(x)
    }
}

/// Scales a rational vector to coprime integers with positive first nonzero
/// entry.
pub fn primitive(v: Vec<Rat>) -> Vec<Rat> {
    let mut l = BigInt::one();
    for x in &v {
        if !x.is_zero() {
            l = l.lcm(x.denom());
        }
    }
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v;
    }
    let first_neg = ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative());
    if first_neg {
        g = -g;
    }
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &g))
        .collect()
}
