//! Identities among evaluated graphs: vanishing graphs, synonyms, linear
//! relations, and their behaviour under embedding.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::Q;
use crate::error::{Error, Result};
use crate::eval::{evaluate_kontsevich, evaluate_micro, flatten, EntryKey, KContents};
use crate::graph::{Canonical, KGraph, MicroGraph};
use crate::linalg::{ColumnEchelon, Rat, SparseVec};
use crate::multivector::Multivector;

/// A graph that can be evaluated over a given dimension with generic
/// contents.
pub trait Evaluate: Canonical {
    fn evaluate_at(&self, dim: usize) -> Result<Multivector>;
}

impl Evaluate for KGraph {
    /// Nambu bracket (generic density at `d = 2`) in every wedge, `ρ` in
    /// every terminal.
    fn evaluate_at(&self, dim: usize) -> Result<Multivector> {
        evaluate_kontsevich(self, &KContents::nambu(dim, self.terminal_count())?)
    }
}

impl Evaluate for MicroGraph {
    fn evaluate_at(&self, dim: usize) -> Result<Multivector> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        evaluate_micro(self)
    }
}

/// Indices into the input list, split three ways.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vanishing {
    pub zero_by_sign: Vec<usize>,
    pub nonzero_vanishing: Vec<usize>,
    pub nonvanishing: Vec<usize>,
}

pub fn find_vanishing<G: Evaluate>(graphs: &[G], dim: usize) -> Result<Vanishing> {
    let mut out = Vanishing::default();
    for (i, g) in graphs.iter().enumerate() {
        if g.canonical().sign == 0 {
            out.zero_by_sign.push(i);
        } else if g.evaluate_at(dim)?.is_zero() {
            out.nonzero_vanishing.push(i);
        } else {
            out.nonvanishing.push(i);
        }
    }
    Ok(out)
}

/// One synonym class: `φ(graphs[i]) = c · φ(graphs[rep])` for each
/// `(i, c)`, the representative first with `c = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynonymClass {
    pub members: Vec<(usize, Q)>,
}

/// Classes of exact proportionality among the nonvanishing graphs; the
/// vanishing ones are left out. Representatives are the first members in
/// input order.
pub fn synonym_classes<G: Evaluate>(graphs: &[G], dim: usize) -> Result<Vec<SynonymClass>> {
    let mut reps: Vec<(alloc::collections::BTreeMap<EntryKey, Q>, usize)> = Vec::new();
    let mut classes: Vec<SynonymClass> = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let v = flatten(&g.evaluate_at(dim)?);
        if v.is_empty() {
            continue;
        }
        match reps.iter().position(|(r, _)| proportion(&v, r).is_some()) {
            Some(k) => {
                let c = proportion(&v, &reps[k].0).expect("checked");
                classes[reps[k].1].members.push((i, c));
            }
            None => {
                reps.push((v, classes.len()));
                classes.push(SynonymClass {
                    members: vec![(i, Q::ONE)],
                });
            }
        }
    }
    Ok(classes)
}

/// `c` with `a = c · b`, if any.
fn proportion(
    a: &alloc::collections::BTreeMap<EntryKey, Q>,
    b: &alloc::collections::BTreeMap<EntryKey, Q>,
) -> Option<Q> {
    if a.len() != b.len() {
        return None;
    }
    let (k, x) = a.iter().next()?;
    let c = *x / *b.get(k)?;
    a.iter()
        .all(|(k, x)| b.get(k).is_some_and(|y| *y * c == *x))
        .then_some(c)
}

fn column(m: &Multivector) -> SparseVec<EntryKey> {
    flatten(m)
        .into_iter()
        .map(|(k, v)| (k, v.to_big()))
        .collect()
}

/// Column echelon form of the evaluation matrix (rows: monomial entries,
/// columns: graphs).
pub fn evaluation_echelon<G: Evaluate>(
    graphs: &[G],
    dim: usize,
) -> Result<ColumnEchelon<EntryKey>> {
    let mut ech = ColumnEchelon::new();
    for g in graphs {
        ech.push(column(&g.evaluate_at(dim)?));
    }
    Ok(ech)
}

/// Basis of `{c : φ(Σ c_i Γ_i) = 0}`, each vector primitive integral.
pub fn nullspace<G: Evaluate>(graphs: &[G], dim: usize) -> Result<Vec<Vec<Rat>>> {
    Ok(evaluation_echelon(graphs, dim)?.kernel())
}

pub fn rank<G: Evaluate>(graphs: &[G], dim: usize) -> Result<usize> {
    Ok(evaluation_echelon(graphs, dim)?.rank())
}

/// Whether `Σ c_i embed(Γ_i)` still evaluates to zero one dimension up.
pub fn check_embedding_preserves(coeffs: &[Rat], graphs: &[MicroGraph]) -> Result<bool> {
    if coeffs.len() != graphs.len() {
        return Err(Error::Invalid(
            "relation and graph list differ in length".into(),
        ));
    }
    let mut total: SparseVec<EntryKey> = SparseVec::new();
    for (c, g) in coeffs.iter().zip(graphs) {
        if c.is_zero() {
            continue;
        }
        for (k, v) in column(&evaluate_micro(&g.embed())?) {
            let e = total.entry(k).or_insert_with(Rat::zero);
            *e += v * c;
        }
    }
    Ok(total.values().all(Zero::is_zero))
}

/// Lifts Kontsevich graphs at `d = 2` to micro-graphs at `d = 2`: each wedge
/// is a Levi-Civita vertex with the same ordered pair of arrows.
pub fn kontsevich_as_micro(g: &KGraph) -> Result<MicroGraph> {
    if g.terminal_count() != 0 {
        return Err(Error::Invalid(
            "graphs with terminals have no micro-graph form".into(),
        ));
    }
    let tuples = (0..g.wedge_count())
        .map(|k| {
            let (l, r) = g.targets(k);
            [l as u8, r as u8].into_iter().collect()
        })
        .collect();
    MicroGraph::new(2, g.sink_count(), tuples)
}

/// All nonisomorphic Kontsevich graphs with `sinks` sinks of in-degree one
/// and `wedges` wedges, no double arrows, zero graphs dropped.
pub fn enumerate_kontsevich(sinks: usize, wedges: usize) -> Result<Vec<KGraph>> {
    let n = sinks + wedges;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|l| (l + 1..n).map(move |r| (l, r)))
        .collect();
    let mut found = BTreeSet::new();
    let mut pick = vec![0usize; wedges];
    loop {
        let targets: Vec<(usize, usize)> = pick.iter().map(|&p| pairs[p]).collect();
        let hits_ok =
            (0..sinks).all(|s| targets.iter().filter(|&&(l, r)| l == s || r == s).count() == 1);
        if hits_ok {
            let cf = KGraph::new(sinks, 0, &targets)?.canonical();
            if cf.sign != 0 {
                found.insert(cf.graph);
            }
        }
        let mut k = 0;
        while k < wedges {
            pick[k] += 1;
            if pick[k] < pairs.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if k == wedges {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

/// Connected one-vector graphs on three wedges.
pub fn admissible_one_vector_graphs() -> Result<Vec<KGraph>> {
    Ok(enumerate_kontsevich(1, 3)?
        .into_iter()
        .filter(KGraph::is_connected)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::micro_expand::enumerate_micrographs;

    #[test]
    fn admissible_fourteen_have_rank_three() {
        let gs = admissible_one_vector_graphs().unwrap();
        assert_eq!(gs.len(), 14);
        assert_eq!(gs.iter().filter(|g| g.wedges_reach_sinks()).count(), 13);
        assert_eq!(rank(&gs, 2).unwrap(), 3);
        assert_eq!(nullspace(&gs, 2).unwrap().len(), 11);
    }

    #[test]
    fn two_block_hamiltonians_d3() {
        let hs = enumerate_micrographs(0, 2, 3).unwrap();
        let v = find_vanishing(&hs, 3).unwrap();
        assert_eq!(v.nonvanishing.len(), 6);
        let classes = synonym_classes(&hs, 3).unwrap();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 1, 2, 2]);
        assert_eq!(rank(&hs, 3).unwrap(), 4);
    }

    #[test]
    fn two_block_hamiltonians_d2_do_not_vanish() {
        let hs = enumerate_micrographs(0, 2, 2).unwrap();
        let v = find_vanishing(&hs, 2).unwrap();
        assert!(v.zero_by_sign.is_empty() && v.nonzero_vanishing.is_empty());
        assert!(!hs.is_empty());
    }

    #[test]
    fn trivial_relations() {
        let gs = admissible_one_vector_graphs().unwrap();
        let g = gs[0].clone();
        let k = nullspace(&[g.clone(), g.clone()], 2).unwrap();
        assert_eq!(
            k,
            vec![vec![
                Rat::from_integer(1.into()),
                Rat::from_integer((-1).into())
            ]]
        );
        let classes = synonym_classes(&[g.clone(), g], 2).unwrap();
        assert_eq!(
            classes,
            vec![SynonymClass {
                members: vec![(0, Q::ONE), (1, Q::ONE)]
            }]
        );
    }

    #[test]
    fn vanishing_graph_gives_a_standard_kernel_vector() {
        let hs = enumerate_micrographs(0, 2, 4).unwrap();
        let v = find_vanishing(&hs, 4).unwrap();
        assert_eq!(v.nonzero_vanishing.len(), 1);
        let h0 = hs[v.nonzero_vanishing[0]].clone();
        let roles = crate::graph::Roles {
            sinks: vec![],
            levi_civita: vec![1, 2],
            casimirs: vec![vec![3, 4], vec![5, 6]],
        };
        let written = MicroGraph::parse("[1,2,3,5;3,4,5,6]", 4, &roles)
            .unwrap()
            .graph;
        assert_eq!(written.canonical().graph, h0);
        let other = hs[v.nonvanishing[0]].clone();
        let k = nullspace(&[other, h0.clone()], 4).unwrap();
        assert_eq!(k, vec![vec![Rat::zero(), Rat::from_integer(1.into())]]);
        assert!(check_embedding_preserves(&[Rat::from_integer(1.into())], &[h0]).unwrap());
    }

    #[test]
    fn false_relation_is_not_preserved() {
        let hs = enumerate_micrographs(0, 2, 3).unwrap();
        let c: Vec<Rat> = (0..hs.len())
            .map(|i| Rat::from_integer((i as i64 * 7 % 5 + 1).into()))
            .collect();
        assert!(!check_embedding_preserves(&c, &hs).unwrap());
    }

    #[test]
    fn sunflower_synonyms_survive_embedding() {
        let gs: Vec<MicroGraph> = admissible_one_vector_graphs()
            .unwrap()
            .iter()
            .map(|g| kontsevich_as_micro(g).unwrap())
            .collect();
        let classes = synonym_classes(&gs, 2).unwrap();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 4, 7]);
        let size_of = |text: &str| {
            let g = kontsevich_as_micro(&KGraph::parse(text, 1).unwrap())
                .unwrap()
                .canonical()
                .graph;
            let i = gs.iter().position(|h| *h == g).unwrap();
            classes
                .iter()
                .find(|c| c.members.iter().any(|(j, _)| *j == i))
                .unwrap()
                .members
                .len()
        };
        assert_eq!(size_of("(0,1;1,3;1,2)"), 4);
        assert_eq!(size_of("(0,2;1,3;1,2)"), 7);
        for class in &classes {
            let (rep, _) = class.members[0];
            for &(i, c) in &class.members[1..] {
                let coeffs = [Rat::from_integer(1.into()), -c.to_big()];
                let pair = [gs[i].clone(), gs[rep].clone()];
                assert!(check_embedding_preserves(&coeffs, &pair).unwrap());
                let up: Vec<MicroGraph> = pair.iter().map(MicroGraph::embed).collect();
                assert!(check_embedding_preserves(&coeffs, &up).unwrap());
            }
        }
    }

    #[test]
    fn vanishing_descendants_stay_vanishing() {
        let mut sf = crate::graph::GraphSum::new();
        sf.add(&KGraph::parse("(0,1;1,3;1,2)", 1).unwrap(), Q::ONE);
        sf.add(&KGraph::parse("(0,2;1,3;1,2)", 1).unwrap(), Q::int(2));
        let e = crate::micro_expand::leibniz_expand(&sf, 3).unwrap();
        let gs: Vec<MicroGraph> = e.support.into_iter().collect();
        let v = find_vanishing(&gs, 3).unwrap();
        assert_eq!((v.zero_by_sign.len(), v.nonzero_vanishing.len()), (2, 10));
        for &i in v.zero_by_sign.iter().chain(&v.nonzero_vanishing) {
            assert!(evaluate_micro(&gs[i].embed()).unwrap().is_zero());
        }
    }
}
