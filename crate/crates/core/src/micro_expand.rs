//! Leibniz expansion of Kontsevich graphs into Nambu micro-graphs and
//! enumeration of micro-graph families.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Q;
use crate::error::{Error, Result};
use crate::graph::micro::Tuple;
use crate::graph::{Canonical, GraphSum, KGraph, MicroGraph};

/// Output of [`leibniz_expand`].
#[derive(Clone, Debug, Default)]
pub struct Expansion {
    /// Canonical, merged, zero graphs dropped.
    pub sum: GraphSum<MicroGraph>,
    /// Every distinct canonical graph produced, zero graphs included.
    pub support: BTreeSet<MicroGraph>,
    /// Graphs of the support with canonical sign 0.
    pub zero: BTreeSet<MicroGraph>,
    /// Canonical graph of each Leibniz term, before merging.
    pub terms: Vec<MicroGraph>,
    /// Leibniz terms dropped because a tuple repeats a target.
    pub repeated: usize,
}

/// Replaces every wedge by a Nambu subgraph over `d` and distributes each
/// arrow that hit a wedge over that subgraph's vertices. Terms in which a
/// Levi-Civita tuple repeats a target vanish on their face and are only
/// counted.
pub fn leibniz_expand(s: &GraphSum<KGraph>, d: usize) -> Result<Expansion> {
    if d < 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: d,
        });
    }
    let mut out = Expansion::default();
    for (g, c) in s.iter() {
        expand_one(g, *c, d, &mut out)?;
    }
    Ok(out)
}

fn expand_one(g: &KGraph, c: Q, d: usize, out: &mut Expansion) -> Result<()> {
    if g.terminal_count() != 0 {
        return Err(Error::Invalid(
            "graphs with terminals cannot be expanded".into(),
        ));
    }
    let (m, b) = (g.sink_count(), g.wedge_count());
    let cas = |t: usize, k: usize| m + b + (t - 1) * b + k;
    // Slots (wedge, position) of arrows that land on a wedge.
    let mut slots: Vec<(usize, usize, usize)> = Vec::new();
    let mut base: Vec<Tuple> = Vec::with_capacity(b);
    for k in 0..b {
        let (l, r) = g.targets(k);
        let mut t: Tuple = Tuple::new();
        for (pos, x) in [l, r].into_iter().enumerate() {
            if x >= m {
                slots.push((k, pos, x - m));
            }
            t.push(x as u8);
        }
        for i in 1..=d - 2 {
            t.push(cas(i, k) as u8);
        }
        base.push(t);
    }
    // Choice 0: the Levi-Civita vertex; choice i: own copy of a_i.
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut tuples = base.clone();
        for (&(k, pos, w), &ch) in slots.iter().zip(&choice) {
            tuples[k][pos] = if ch == 0 {
                (m + w) as u8
            } else {
                cas(ch, w) as u8
            };
        }
        if tuples.iter().any(has_repeat) {
            out.repeated += 1;
        } else {
            let cf = MicroGraph::new_unchecked(d, m, tuples)?.canonical();
            out.terms.push(cf.graph.clone());
            out.support.insert(cf.graph.clone());
            if cf.sign == 0 {
                out.zero.insert(cf.graph);
            } else {
                out.sum.add_canonical(cf.graph, c * Q::int(cf.sign as i128));
            }
        }
        if !next_mixed(&mut choice, d - 1) {
            break;
        }
    }
    Ok(())
}

fn has_repeat(t: &Tuple) -> bool {
    t.iter().enumerate().any(|(i, x)| t[i + 1..].contains(x))
}

fn next_mixed(v: &mut [usize], radix: usize) -> bool {
    for x in v.iter_mut() {
        *x += 1;
        if *x < radix {
            return true;
        }
        *x = 0;
    }
    false
}

/// All nonisomorphic micro-graphs with `k` sinks and `blocks` Nambu
/// subgraphs over `d`, in canonical order. Each block keeps its own
/// Casimirs in the last `d − 2` slots; the two free arrows range over all
/// vertices and each sink receives exactly one arrow. Tuples never repeat a
/// target; graphs that are zero by symmetry are included.
pub fn enumerate_micrographs(k: usize, blocks: usize, d: usize) -> Result<Vec<MicroGraph>> {
    if d < 2 || blocks == 0 || k > 2 * blocks {
        return Err(Error::Invalid("infeasible micro-graph signature".into()));
    }
    let n = k + blocks * (d - 1);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|l| (l + 1..n).map(move |r| (l, r)))
        .collect();
    let mut found = BTreeSet::new();
    let mut pick = vec![0usize; blocks];
    loop {
        let mut hits = vec![0usize; k];
        for &p in &pick {
            let (l, r) = pairs[p];
            for x in [l, r] {
                if x < k {
                    hits[x] += 1;
                }
            }
        }
        if hits.iter().all(|&h| h == 1) {
            let tuples: Vec<Tuple> = pick
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    let (l, r) = pairs[p];
                    let mut t: Tuple = Tuple::new();
                    t.push(l as u8);
                    t.push(r as u8);
                    for i in 1..=d - 2 {
                        t.push((k + blocks + (i - 1) * blocks + j) as u8);
                    }
                    t
                })
                .collect();
            if !tuples.iter().any(has_repeat) {
                found.insert(MicroGraph::new_unchecked(d, k, tuples)?.canonical().graph);
            }
        }
        if !next_mixed(&mut pick, pairs.len()) {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

/// Reference enumeration over every target assignment of every arrow,
/// filtered by validity; exponential, for cross-checks on tiny cases.
pub fn enumerate_brute_force(k: usize, blocks: usize, d: usize) -> Result<Vec<MicroGraph>> {
    let n = k + blocks * (d - 1);
    let mut found = BTreeSet::new();
    let mut all = vec![0usize; blocks * d];
    loop {
        let tuples: Vec<Tuple> = all
            .chunks(d)
            .map(|c| c.iter().map(|&x| x as u8).collect())
            .collect();
        let g = MicroGraph::new_unchecked(d, k, tuples)?;
        if !g.tuples().iter().any(has_repeat)
            && (0..k).all(|s| g.in_degree(s) == 1)
            && g.validate().is_ok()
        {
            found.insert(g.canonical().graph);
        }
        if !next_mixed(&mut all, n) {
            break;
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{evaluate_kontsevich, flatten, CasimirContent, KContents, MicroContents};
    use crate::flow::{evaluate_ksum, evaluate_msum};

    fn sunflower() -> GraphSum<KGraph> {
        let mut s = GraphSum::new();
        s.add(&KGraph::parse("(0,1;1,3;1,2)", 1).unwrap(), Q::ONE);
        s.add(&KGraph::parse("(0,2;1,3;1,2)", 1).unwrap(), Q::int(2));
        s
    }

    #[test]
    fn wedge_expands_to_one_subgraph() {
        let e = leibniz_expand(&GraphSum::single(&KGraph::wedge()), 3).unwrap();
        assert_eq!(e.sum.len(), 1);
        assert_eq!(e.terms.len(), 1);
        let (g, _) = e.sum.iter().next().unwrap();
        assert_eq!(g.block_count(), 1);
        assert_eq!(g.sink_count(), 2);
        assert!(leibniz_expand(&GraphSum::single(&KGraph::wedge()), 2).is_err());
    }

    #[test]
    fn sunflower_descendants_d3() {
        let e = leibniz_expand(&sunflower(), 3).unwrap();
        assert_eq!(e.support.len(), 41);
        assert_eq!(e.terms.len(), 48);
        assert_eq!(e.repeated, 16);
        assert_eq!(e.zero.len(), 2);
    }

    #[test]
    fn sunflower_terms_d4() {
        let e = leibniz_expand(&sunflower(), 4).unwrap();
        assert_eq!(e.terms.len(), 324);
        assert_eq!(e.support.len(), 282);
        let vanishing: BTreeSet<&MicroGraph> = e
            .support
            .iter()
            .filter(|g| e.zero.contains(*g) || crate::eval::evaluate_micro(g).unwrap().is_zero())
            .collect();
        assert_eq!(e.terms.iter().filter(|g| vanishing.contains(g)).count(), 54);
        assert_eq!(e.terms.iter().filter(|g| e.zero.contains(*g)).count(), 6);
    }

    #[test]
    fn expansion_commutes_with_evaluation() {
        let s = sunflower();
        for d in [3, 4] {
            let e = leibniz_expand(&s, d).unwrap();
            let lhs = evaluate_msum(&e.sum, &MicroContents::generic(d), d, 1).unwrap();
            let rhs = evaluate_ksum(&s, &KContents::nambu(d, 0).unwrap(), 1).unwrap();
            assert_eq!(flatten(&lhs), flatten(&rhs), "d = {d}");
        }
        let tetra = KGraph::parse("(0,3;1,4;2,3)", 2).unwrap();
        let e = leibniz_expand(&GraphSum::single(&tetra), 3).unwrap();
        let lhs = evaluate_msum(&e.sum, &MicroContents::generic(3), 3, 2).unwrap();
        let rhs = evaluate_kontsevich(&tetra, &KContents::nambu(3, 0).unwrap()).unwrap();
        assert_eq!(flatten(&lhs), flatten(&rhs));
    }

    #[test]
    fn two_block_hamiltonians() {
        assert_eq!(enumerate_micrographs(0, 2, 3).unwrap().len(), 6);
        assert_eq!(enumerate_micrographs(0, 2, 4).unwrap().len(), 21);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for (k, b, d) in [
            (0, 1, 3),
            (1, 1, 3),
            (2, 1, 3),
            (0, 2, 3),
            (1, 2, 3),
            (0, 1, 4),
        ] {
            assert_eq!(
                enumerate_micrographs(k, b, d).unwrap(),
                enumerate_brute_force(k, b, d).unwrap(),
                "{k} {b} {d}"
            );
        }
    }

    #[test]
    fn enumeration_has_no_isomorphic_pairs() {
        let gs = enumerate_micrographs(1, 2, 3).unwrap();
        let canon: BTreeSet<MicroGraph> = gs.iter().map(|g| g.canonical().graph).collect();
        assert_eq!(canon.len(), gs.len());
    }

    #[test]
    fn embedding_with_coordinate_reproduces_value() {
        for g in enumerate_micrographs(1, 2, 3).unwrap() {
            if g.canonical().sign == 0 {
                continue;
            }
            let base = crate::eval::evaluate_micro(&g).unwrap();
            let mut c = MicroContents::generic(3);
            c.casimirs.push(CasimirContent::Coordinate(3));
            let lifted = crate::eval::evaluate_micro_with(&g.embed(), &c).unwrap();
            assert_eq!(flatten(&base), flatten(&lifted), "{g}");
        }
    }

    #[test]
    fn kontsevich_micro_graph_example() {
        use crate::graph::Roles;
        let roles = Roles {
            sinks: vec![0, 1],
            levi_civita: vec![2, 3],
            casimirs: vec![vec![4, 5]],
        };
        let mut written = GraphSum::new();
        for text in ["[0,1,4;2,3,5]", "[0,1,4;4,3,5]"] {
            let p = MicroGraph::parse(text, 3, &roles).unwrap();
            written.add(&p.graph, Q::int(p.sign as i128));
        }
        let k = KGraph::parse("(0,1;2,3)", 2).unwrap();
        let e = leibniz_expand(&GraphSum::single(&k), 3).unwrap();
        assert_eq!(e.sum, written);
        assert_eq!(e.repeated, 2);
        let lhs = evaluate_msum(&written, &MicroContents::generic(3), 3, 2).unwrap();
        let rhs = evaluate_kontsevich(&k, &KContents::nambu(3, 0).unwrap()).unwrap();
        assert_eq!(flatten(&lhs), flatten(&rhs));
    }
}
