//! Trivialisation of graph flows by vector fields, Casimir and density
//! velocities, and symmetry checks.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::Q;
use crate::diffpoly::DiffPoly;
use crate::error::{Error, Result};
use crate::eval::{flatten, EntryKey, KContents};
use crate::flow::{evaluate_ksum, flow_normalization};
use crate::graph::cocycle::is_cocycle;
use crate::graph::{GraphSum, KGraph, UGraph};
use crate::jet::{Monomial, Symbol};
use crate::linalg::{ColumnEchelon, Rat, SparseVec};
use crate::multivector::{nambu_bivector, nambu_bivector_with, top_vector, IndexSet, Multivector};
use crate::orient::{orient, orient_general};

/// Hamiltonian vector field of a 0-vector graph sum with one terminal (the
/// `ρ`-vertex): the terminal becomes a wedge whose Left arrow goes to a new
/// sink and whose Right arrow lands on every vertex in turn.
pub fn ham_vector_field_2d(ham: &GraphSum<KGraph>) -> Result<GraphSum<KGraph>> {
    let mut out = GraphSum::new();
    for (h, c) in ham.iter() {
        if h.sink_count() != 0 || h.terminal_count() != 1 {
            return Err(Error::Invalid(
                "Hamiltonian graphs need no sinks and one terminal".into(),
            ));
        }
        for v in 0..h.vertex_count() {
            out.add(&h.issue_wedge_from_terminal(v), *c);
        }
    }
    Ok(out)
}

/// Number of graphs emitted by [`ham_vector_field_2d`] before merging.
pub fn ham_vector_field_emitted(ham: &GraphSum<KGraph>) -> usize {
    ham.iter().map(|(h, _)| h.vertex_count()).sum()
}

/// Result of [`solve_coboundary`].
#[derive(Clone, Debug)]
pub struct Trivialisation {
    pub dim: usize,
    /// Ansatz coefficients, supported on the first independent columns in
    /// ansatz order; `None` when the system has no solution.
    pub solution: Option<Vec<Rat>>,
    /// A nonzero entry of the reduced right-hand side when unsolvable.
    pub witness: Option<(EntryKey, Rat)>,
    pub rows: usize,
    pub columns: usize,
    pub rank: usize,
    /// Kernel of the ansatz under `X ↦ [[P, X]]`: the gauge freedom.
    pub gauge: Vec<Vec<Rat>>,
}

impl Trivialisation {
    pub fn is_solved(&self) -> bool {
        self.solution.is_some()
    }
}

fn column(m: &Multivector) -> SparseVec<EntryKey> {
    flatten(m)
        .into_iter()
        .map(|(k, v)| (k, v.to_big()))
        .collect()
}

/// Solves `q = [[p, Σ c_i X_i]]` for rational `c_i` over the given vector
/// fields.
pub fn solve_coboundary(
    q: &Multivector,
    p: &Multivector,
    ansatz: &[Multivector],
) -> Result<Trivialisation> {
    let mut ech = ColumnEchelon::new();
    let mut rows = alloc::collections::BTreeSet::new();
    for x in ansatz {
        if x.arity() != 1 || x.dim() != q.dim() {
            return Err(Error::Invalid(
                "ansatz entries must be vector fields over the flow's dimension".into(),
            ));
        }
        let col = column(&p.schouten(x)?);
        rows.extend(col.keys().cloned());
        ech.push(col);
    }
    let rhs = column(q);
    rows.extend(rhs.keys().cloned());
    let (solution, witness) = match ech.solve(rhs) {
        Ok(s) => (Some(s), None),
        Err(res) => (None, res.into_iter().next_back()),
    };
    Ok(Trivialisation {
        dim: q.dim(),
        solution,
        witness,
        rows: rows.len(),
        columns: ansatz.len(),
        rank: ech.rank(),
        gauge: ech.kernel(),
    })
}

/// `Σ c_i X_i`.
pub fn combine(coeffs: &[Rat], fields: &[Multivector]) -> Result<Multivector> {
    let first = fields
        .first()
        .ok_or_else(|| Error::Invalid("empty ansatz".into()))?;
    let mut out = Multivector::zero(first.dim(), first.arity());
    for (c, x) in coeffs.iter().zip(fields) {
        if !c.is_zero() {
            out.add_scaled_assign(
                x,
                Q::from_big(c).ok_or_else(|| Error::Invalid("coefficient overflow".into()))?,
            );
        }
    }
    Ok(out)
}

fn casimirs(dim: usize) -> Vec<DiffPoly> {
    (1..=dim - 2)
        .map(|i| DiffPoly::symbol(Symbol::casimir(i)))
        .collect()
}

/// `ȧ_i = c · Σ_v Or(γ)(P ⊗ … ⊗ a_i ⊗ … ⊗ P)` with `a_i` in slot `v`,
/// `c` the flow normalization of `γ`.
pub fn casimir_velocity(g: &GraphSum<UGraph>, dim: usize, i: usize) -> Result<DiffPoly> {
    if dim < 3 || !(1..=dim - 2).contains(&i) {
        return Err(Error::Invalid(alloc::format!(
            "no Casimir a_{i} over d = {dim}"
        )));
    }
    if let Err(w) = is_cocycle(g) {
        return Err(Error::NotCocycle(w.len()));
    }
    let c = flow_normalization(&orient(g, 2)?.sum);
    let contents = KContents {
        dim,
        bivector: nambu_bivector(dim)?,
        terminals: vec![DiffPoly::symbol(Symbol::casimir(i))],
    };
    let n = g.iter().next().map_or(0, |(h, _)| h.vertex_count());
    let mut total = DiffPoly::zero();
    for v in 0..n {
        let s = orient_general(g, 0, Some(v))?.sum;
        total.add_scaled(&evaluate_ksum(&s, &contents, 0)?.component(&[]), c);
    }
    Ok(total)
}

/// `Σ_i P(ρ, a_1, …, ȧ_i, …, a_{d−2})`.
pub fn casimir_part(dim: usize, adot: &[DiffPoly]) -> Result<Multivector> {
    let rho = DiffPoly::symbol(Symbol::RHO);
    let mut out = Multivector::zero(dim, 2);
    for (i, a) in adot.iter().enumerate() {
        let mut cas = casimirs(dim);
        cas[i] = a.clone();
        out.add_scaled_assign(&nambu_bivector_with(dim, &rho, &cas)?, Q::ONE);
    }
    Ok(out)
}

/// Outcome of [`rho_velocity`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RhoVelocity {
    Exact(DiffPoly),
    /// The component `∂_i f ∂_j g` whose division fails, with the leading
    /// remainder term.
    NotDivisible {
        component: IndexSet,
        witness: (Monomial, Q),
    },
}

/// Divides `(q − Σ_i P(ρ, …, ȧ_i, …))(f, g)` by `det ∂(f, g, a)/∂x`,
/// comparing coefficients of each `∂_i f ∂_j g` separately.
pub fn rho_velocity(q: &Multivector, adot: &[DiffPoly]) -> Result<RhoVelocity> {
    let dim = q.dim();
    if adot.len() != dim - 2 {
        return Err(Error::DimensionMismatch {
            expected: dim - 2,
            found: adot.len(),
        });
    }
    let cp = casimir_part(dim, adot)?;
    let j = nambu_bivector_with(dim, &DiffPoly::one(), &casimirs(dim))?;
    let mut quotient: Option<DiffPoly> = None;
    for a in 0..dim {
        for b in a + 1..dim {
            let idx: IndexSet = [a as u8, b as u8].into_iter().collect();
            let mut num = q.get(&idx);
            num.add_scaled(&cp.get(&idx), -Q::ONE);
            let den = j.get(&idx);
            let fail = |w| {
                Ok(RhoVelocity::NotDivisible {
                    component: idx.clone(),
                    witness: w,
                })
            };
            match &quotient {
                None => match num.div_exact(&den) {
                    Ok(qt) => quotient = Some(qt),
                    Err(w) => return fail(w),
                },
                Some(qt) => {
                    let diff = &num - &(qt * &den);
                    if let Some(w) = diff.leading_term() {
                        return fail(w);
                    }
                }
            }
        }
    }
    Ok(RhoVelocity::Exact(quotient.unwrap_or_default()))
}

/// `P(ρ̇, [a]) + Σ_i P(ρ, …, [ȧ_i], …)`.
pub fn leibniz_rhs(dim: usize, rhodot: &DiffPoly, adot: &[DiffPoly]) -> Result<Multivector> {
    let mut out = nambu_bivector_with(dim, rhodot, &casimirs(dim))?;
    out.add_scaled_assign(&casimir_part(dim, adot)?, Q::ONE);
    Ok(out)
}

/// Whether `q = P(ρ̇, [a]) + Σ_i P(ρ, …, [ȧ_i], …)` holds exactly. Compared
/// one component at a time, using that `P` is linear in `ρ`.
pub fn verify_leibniz_match(q: &Multivector, rhodot: &DiffPoly, adot: &[DiffPoly]) -> Result<bool> {
    let dim = q.dim();
    if q.arity() != 2 || adot.len() != dim - 2 {
        return Err(Error::Invalid(
            "need a bi-vector and d − 2 Casimir velocities".into(),
        ));
    }
    let cp = casimir_part(dim, adot)?;
    let j = nambu_bivector_with(dim, &DiffPoly::one(), &casimirs(dim))?;
    for a in 0..dim {
        for b in a + 1..dim {
            let idx = [a as u8, b as u8];
            let mut rhs = rhodot * &j.get(&idx);
            rhs.add_scaled(&cp.get(&idx), Q::ONE);
            let same = match q.get_ref(&idx) {
                Some(p) => *p == rhs,
                None => rhs.is_zero(),
            };
            if !same {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `ȧ_i = (−X)(a_i)` for every `i` and `ρ̇ ∂_x = [[ρ ∂_x, X]]`.
pub fn verify_field_transport(
    x: &Multivector,
    rhodot: &DiffPoly,
    adot: &[DiffPoly],
) -> Result<bool> {
    let dim = x.dim();
    if x.arity() != 1 || adot.len() != dim - 2 {
        return Err(Error::Invalid(
            "transport needs a vector field and d − 2 Casimir velocities".into(),
        ));
    }
    for (i, a) in adot.iter().enumerate() {
        let lhs = -&x.apply(&[DiffPoly::symbol(Symbol::casimir(i + 1))]);
        if lhs != *a {
            return Ok(false);
        }
    }
    let rho = DiffPoly::symbol(Symbol::RHO);
    Ok(top_vector(dim, &rho).schouten(x)? == top_vector(dim, rhodot))
}

/// Transformations of the Casimirs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// `a_i ↦ −a_i`.
    Flip(usize),
    /// `a_i ↔ a_j`.
    Swap(usize, usize),
}

impl Transform {
    pub fn apply(self, m: &Multivector) -> Multivector {
        m.map(|p| self.apply_poly(p))
    }

    pub fn apply_poly(self, p: &DiffPoly) -> DiffPoly {
        match self {
            Transform::Flip(i) => p.flip_symbol(Symbol::casimir(i)),
            Transform::Swap(i, j) => p.rename_symbols(move |s| match s.casimir_index() {
                Some(k) if k == i => Symbol::casimir(j),
                Some(k) if k == j => Symbol::casimir(i),
                _ => s,
            }),
        }
    }
}

/// Behaviour of `P` and of a flow under a Casimir transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub bivector_flips: bool,
    pub flow_invariant: bool,
}

pub fn symmetry_check(q: &Multivector, t: Transform) -> Result<Symmetry> {
    let dim = q.dim();
    let valid = |i: usize| (1..=dim.saturating_sub(2)).contains(&i);
    let ok = match t {
        Transform::Flip(i) => valid(i),
        Transform::Swap(i, j) => valid(i) && valid(j) && i != j,
    };
    if !ok {
        return Err(Error::Invalid(alloc::format!(
            "{t:?} does not act over d = {dim}"
        )));
    }
    let p = nambu_bivector(dim)?;
    Ok(Symmetry {
        bivector_flips: t.apply(&p) == p.scale(-Q::ONE),
        flow_invariant: q.coeffs().all(|(_, c)| t.apply_poly(c) == *c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cocycle::gamma3;
    use crate::graph::MicroGraph;
    use crate::micro_expand::enumerate_micrographs;
    use crate::relations::Evaluate;

    fn ham3() -> GraphSum<KGraph> {
        GraphSum::single(&KGraph::parse_hamiltonian("(1,3;1,2)").unwrap())
    }

    fn sunflower() -> GraphSum<KGraph> {
        let mut s = GraphSum::new();
        s.add(&KGraph::parse("(0,1;1,3;1,2)", 1).unwrap(), Q::ONE);
        s.add(&KGraph::parse("(0,2;1,3;1,2)", 1).unwrap(), Q::int(2));
        s
    }

    #[test]
    fn ham_gamma3_gives_the_sunflower() {
        let x = ham_vector_field_2d(&ham3()).unwrap();
        assert_eq!(ham_vector_field_emitted(&ham3()), 3);
        assert_eq!(x, sunflower());
        assert!(x.iter().any(|(g, _)| g.tadpole_count() > 0));
        assert!(ham_vector_field_2d(&GraphSum::new()).unwrap().is_empty());
        assert!(ham_vector_field_2d(&sunflower()).is_err());
    }

    #[test]
    fn ham_field_is_the_classical_hamiltonian_field() {
        let h = ham3();
        let c = KContents::nambu(2, 1).unwrap();
        let hv = evaluate_ksum(&h, &c, 0).unwrap().component(&[]);
        let x = evaluate_ksum(
            &ham_vector_field_2d(&h).unwrap(),
            &KContents::nambu(2, 0).unwrap(),
            1,
        )
        .unwrap();
        assert_eq!(x.component(&[0]), hv.total_derivative(1));
        assert_eq!(x.component(&[1]), -&hv.total_derivative(0));
    }

    #[test]
    fn sunflower_trivialises_gamma3_in_2d() {
        let p = nambu_bivector(2).unwrap();
        let q = crate::flow::gamma_flow(&gamma3(), 2).unwrap();
        let fields: Vec<Multivector> = sunflower()
            .graphs()
            .iter()
            .map(|g| g.evaluate_at(2).unwrap())
            .collect();
        let t = solve_coboundary(&q, &p, &fields).unwrap();
        let sol = t.solution.unwrap();
        let expect: Vec<Rat> = sunflower().iter().map(|(_, c)| c.to_big()).collect();
        assert_eq!(sol, expect);
    }

    #[test]
    fn gamma3_velocities_d3() {
        let q = crate::flow::gamma_flow(&gamma3(), 3).unwrap();
        let adot = vec![casimir_velocity(&gamma3(), 3, 1).unwrap()];
        let RhoVelocity::Exact(rhodot) = rho_velocity(&q, &adot).unwrap() else {
            panic!("division failed")
        };
        assert!(verify_leibniz_match(&q, &rhodot, &adot).unwrap());
        assert_eq!(leibniz_rhs(3, &rhodot, &adot).unwrap(), q);
        let corrupted = vec![adot[0].scale(Q::int(2))];
        assert!(!verify_leibniz_match(&q, &rhodot, &corrupted).unwrap());
        let mut bad = q.clone();
        let one: IndexSet = [0u8, 1].into_iter().collect();
        bad.add_component(&one, &DiffPoly::symbol(Symbol::RHO));
        assert!(matches!(
            rho_velocity(&bad, &adot).unwrap(),
            RhoVelocity::NotDivisible { .. }
        ));
    }

    #[test]
    fn constant_casimir_has_zero_velocity() {
        let v = casimir_velocity(&gamma3(), 3, 1).unwrap();
        let constant = v.substitute(|j| (j.symbol() == Symbol::casimir(1)).then(DiffPoly::zero));
        assert!(constant.is_zero());
    }

    #[test]
    fn gamma3_coboundary_d3() {
        let q = crate::flow::gamma_flow(&gamma3(), 3).unwrap();
        let p = nambu_bivector(3).unwrap();
        let graphs: Vec<MicroGraph> = enumerate_micrographs(1, 3, 3).unwrap();
        let fields: Vec<Multivector> = graphs.iter().map(|g| g.evaluate_at(3).unwrap()).collect();
        let t = solve_coboundary(&q, &p, &fields).unwrap();
        let sol = t.solution.clone().expect("solvable over micro-graphs");
        let x = combine(&sol, &fields).unwrap();
        assert_eq!(p.schouten(&x).unwrap(), q);
        let adot = vec![casimir_velocity(&gamma3(), 3, 1).unwrap()];
        let RhoVelocity::Exact(rhodot) = rho_velocity(&q, &adot).unwrap() else {
            panic!()
        };
        assert!(verify_field_transport(&x, &rhodot, &adot).unwrap());
        assert!(!verify_field_transport(&Multivector::zero(3, 1), &rhodot, &adot).unwrap());

        let kfields: Vec<Multivector> = sunflower()
            .graphs()
            .iter()
            .map(|g| g.evaluate_at(3).unwrap())
            .collect();
        let u = solve_coboundary(&q, &p, &kfields).unwrap();
        assert!(!u.is_solved());
        assert!(u.witness.is_some());
    }

    #[test]
    fn symmetries_d3() {
        let q = crate::flow::gamma_flow(&gamma3(), 3).unwrap();
        let s = symmetry_check(&q, Transform::Flip(1)).unwrap();
        assert!(s.bivector_flips && s.flow_invariant);
        assert!(symmetry_check(&q, Transform::Flip(2)).is_err());
    }
}
