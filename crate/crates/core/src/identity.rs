//! The fundamental identity of `N`-ary Nambu brackets, checked exactly on
//! concrete polynomial samples.

use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::jet::MAX_DIM;
use crate::multivector::permutations;
use crate::poly::Poly;

/// `{f_1, …, f_N} = ρ · det ∂(f_1, …, f_N, a_{N−1}, …, a_{d−2}) / ∂x` with
/// polynomial density and Casimirs.
#[derive(Clone, Debug)]
pub struct Bracket {
    pub dim: usize,
    pub rho: Poly,
    pub casimirs: Vec<Poly>,
}

impl Bracket {
    pub fn new(dim: usize, rho: Poly, casimirs: Vec<Poly>) -> Result<Bracket> {
        if !(2..=MAX_DIM).contains(&dim) || casimirs.len() != dim - 2 {
            return Err(Error::Invalid(alloc::format!(
                "{} Casimirs do not fit d = {dim}",
                casimirs.len()
            )));
        }
        Ok(Bracket { dim, rho, casimirs })
    }

    pub fn apply(&self, args: &[Poly]) -> Result<Poly> {
        let n = args.len();
        if n < 2 || n > self.dim {
            return Err(Error::Invalid(alloc::format!(
                "bracket arity {n} outside 2..={}",
                self.dim
            )));
        }
        let rows: Vec<Vec<Poly>> = args
            .iter()
            .chain(&self.casimirs[n - 2..])
            .map(|f| (0..self.dim).map(|k| f.partial(k)).collect())
            .collect();
        let mut det = Poly::zero(self.dim);
        for (perm, neg) in permutations(self.dim) {
            let mut prod = Poly::constant(self.dim, crate::coeff::Q::ONE);
            for (r, &c) in perm.iter().enumerate() {
                prod = prod.mul(&rows[r][c]);
                if prod.is_zero() {
                    break;
                }
            }
            det = if neg { det.sub(&prod) } else { det.add(&prod) };
        }
        Ok(self.rho.mul(&det))
    }
}

/// Random data for one instance of the identity.
#[derive(Clone, Debug)]
pub struct Sample {
    pub rho: Poly,
    pub casimirs: Vec<Poly>,
    /// `f_1 … f_{N−1}`.
    pub f: Vec<Poly>,
    /// `g_1 … g_N`.
    pub g: Vec<Poly>,
}

impl Sample {
    /// Degree-≤ 2 polynomials with coefficients in `-2..=2`.
    pub fn random(dim: usize, n: usize, rng: &mut impl RngCore) -> Sample {
        let mut p = || Poly::random(dim, 2, 2, rng);
        Sample {
            rho: p(),
            casimirs: (0..dim.saturating_sub(2)).map(|_| p()).collect(),
            f: (0..n.saturating_sub(1)).map(|_| p()).collect(),
            g: (0..n).map(|_| p()).collect(),
        }
    }
}

/// `{f, {g_1, …, g_N}} − Σ_k {g_1, …, {f, g_k}, …, g_N}`, with `outer`
/// used for the brackets whose first arguments are `f` and `inner` for the
/// others.
pub fn fundamental_residual(
    outer: &Bracket,
    inner: &Bracket,
    f: &[Poly],
    g: &[Poly],
) -> Result<Poly> {
    let n = g.len();
    if f.len() + 1 != n {
        return Err(Error::Invalid(
            "need N − 1 functions f and N functions g".into(),
        ));
    }
    let with = |b: &Bracket, first: &[Poly], last: Poly| {
        let mut args = first.to_vec();
        args.push(last);
        b.apply(&args)
    };
    let mut res = with(outer, f, inner.apply(g)?)?;
    for k in 0..n {
        let mut args = g.to_vec();
        args[k] = with(outer, f, g[k].clone())?;
        res = res.sub(&inner.apply(&args)?);
    }
    Ok(res)
}

/// Whether the `N`-ary fundamental identity holds exactly on the sample.
pub fn check_fundamental_identity(dim: usize, n: usize, sample: &Sample) -> Result<bool> {
    if sample.g.len() != n {
        return Err(Error::Invalid(alloc::format!(
            "sample is for N = {}, not {n}",
            sample.g.len()
        )));
    }
    let b = Bracket::new(dim, sample.rho.clone(), sample.casimirs.clone())?;
    Ok(fundamental_residual(&b, &b, &sample.f, &sample.g)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn holds_on_random_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (d, n) in [(3, 3), (4, 2), (3, 2)] {
            for _ in 0..10 {
                let s = Sample::random(d, n, &mut rng);
                assert!(
                    check_fundamental_identity(d, n, &s).unwrap(),
                    "d = {d}, N = {n}"
                );
            }
        }
    }

    #[test]
    fn corrupted_density_breaks_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = Sample::random(3, 3, &mut rng);
        let b = Bracket::new(3, s.rho.clone(), s.casimirs.clone()).unwrap();
        let bad = Bracket::new(3, s.rho.add(&Poly::coordinate(3, 0)), s.casimirs.clone()).unwrap();
        assert!(!fundamental_residual(&bad, &b, &s.f, &s.g)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn arity_is_checked() {
        let b = Bracket::new(
            3,
            Poly::coordinate(3, 0),
            alloc::vec![Poly::coordinate(3, 1)],
        )
        .unwrap();
        assert!(b.apply(&[Poly::coordinate(3, 0)]).is_err());
        assert!(Bracket::new(3, Poly::zero(3), Vec::new()).is_err());
    }
}
