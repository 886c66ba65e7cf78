//! Orientation of undirected cocycles into sums of Kontsevich digraphs.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Q;
use crate::error::{Error, Result};
use crate::graph::canon::sort_parity;
use crate::graph::{Canonical, GraphSum, KGraph, UGraph};

/// Output of [`orient`].
#[derive(Clone, Debug)]
pub struct Orientation {
    /// Signed sum over all admissible portraits, canonicalized and merged.
    pub sum: GraphSum<KGraph>,
    /// Number of admissible portraits per canonical graph (zero graphs
    /// included), before signs and merging.
    pub portraits: BTreeMap<KGraph, u64>,
}

impl Orientation {
    /// Graphs with nonzero coefficient.
    pub fn directed_graph_count(&self) -> usize {
        self.sum.len()
    }

    /// Classes of the support modulo exchange of the two sinks.
    pub fn bivector_classes(&self) -> Vec<Vec<KGraph>> {
        let mut seen: BTreeMap<KGraph, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<KGraph>> = Vec::new();
        for (g, _) in self.sum.iter() {
            if seen.contains_key(g) {
                continue;
            }
            let mut class = vec![g.clone()];
            if g.sink_count() == 2 {
                let s = g.swap_sinks().canonical().graph;
                if s != *g && self.sum.coeff(&s) != Q::ZERO {
                    seen.insert(s.clone(), classes.len());
                    class.push(s);
                }
            }
            seen.insert(g.clone(), classes.len());
            classes.push(class);
        }
        classes
    }

    /// Portrait counts of the graphs in the support, in canonical order.
    pub fn multiplicities(&self) -> Vec<u64> {
        self.sum
            .graphs()
            .iter()
            .map(|g| self.portraits.get(g).copied().unwrap_or(0))
            .collect()
    }
}

/// Directs the edges of every term so that each vertex of `γ` becomes a wedge
/// and each of the `m` sinks receives one arrow; vertices listed in
/// `terminals` get no outgoing arrows instead. Signs compare the global edge
/// order `E(γ) ∧ (sink arrows)` with the wedge-by-wedge arrow order.
pub fn orient_general(
    g: &GraphSum<UGraph>,
    m: usize,
    terminal: Option<usize>,
) -> Result<Orientation> {
    let mut sum = GraphSum::new();
    let mut portraits: BTreeMap<KGraph, u64> = BTreeMap::new();
    for (gamma, c) in g.iter() {
        let n = gamma.vertex_count();
        let e = gamma.edge_count();
        let wedges = n - terminal.map_or(0, |_| 1);
        if e + m != 2 * wedges {
            return Err(Error::Grading {
                vertices: n,
                edges: e,
            });
        }
        if let Some(t) = terminal {
            if t >= n {
                return Err(Error::TargetOutOfRange {
                    target: t,
                    vertices: n,
                });
            }
        }
        let edges: Vec<(usize, usize)> = gamma.edges().collect();
        // Labels in the Kontsevich graph.
        let t_count = terminal.map_or(0, |_| 1);
        let label = |v: usize| -> usize {
            match terminal {
                Some(t) if v == t => m,
                Some(t) => m + t_count + if v < t { v } else { v - 1 },
                None => m + v,
            }
        };
        let mut sink_src = vec![0usize; m];
        loop {
            for mask in 0u64..(1u64 << e) {
                // out[v] = list of (position, target label)
                let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
                for (i, &(a, b)) in edges.iter().enumerate() {
                    let (src, dst) = if mask & (1 << i) == 0 { (a, b) } else { (b, a) };
                    out[src].push((i, label(dst)));
                }
                for (s, &v) in sink_src.iter().enumerate() {
                    out[v].push((e + s, s));
                }
                let ok = (0..n).all(|v| {
                    let want = if Some(v) == terminal { 0 } else { 2 };
                    out[v].len() == want
                });
                if !ok {
                    continue;
                }
                let mut seq = Vec::with_capacity(e + m);
                let mut targets = vec![(0, 0); wedges];
                for v in 0..n {
                    if Some(v) == terminal {
                        continue;
                    }
                    let o = &out[v];
                    seq.push(o[0].0);
                    seq.push(o[1].0);
                    targets[label(v) - m - t_count] = (o[0].1, o[1].1);
                }
                let odd = sort_parity(&mut seq).expect("distinct positions");
                let kg = KGraph::new(m, t_count, &targets)?;
                let cf = kg.canonical();
                *portraits.entry(cf.graph.clone()).or_insert(0) += 1;
                if cf.sign != 0 {
                    let s = if odd { -cf.sign } else { cf.sign };
                    sum.add_canonical(cf.graph, *c * Q::int(s as i128));
                }
            }
            // Next sink assignment.
            let mut k = 0;
            while k < m {
                sink_src[k] += 1;
                if sink_src[k] < n {
                    break;
                }
                sink_src[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
    }
    Ok(Orientation { sum, portraits })
}

/// Orientation over `m ∈ {1, 2}` sinks.
pub fn orient(g: &GraphSum<UGraph>, m: usize) -> Result<Orientation> {
    if !(1..=2).contains(&m) {
        return Err(Error::Sinks(m));
    }
    orient_general(g, m, None)
}

/// `Σ_v` orientations with vertex `v` made terminal and no sinks: the
/// graphs of `Or(γ)(P ⊗ … ⊗ a ⊗ … ⊗ P)` with `a` in every slot in turn.
pub fn orient_cyclic_terminal(g: &GraphSum<UGraph>) -> Result<GraphSum<KGraph>> {
    let mut total = GraphSum::new();
    let n = g.iter().next().map_or(0, |(h, _)| h.vertex_count());
    for v in 0..n {
        let o = orient_general(g, 0, Some(v))?;
        total.add_sum(&o.sum, Q::ONE);
    }
    Ok(total)
}

/// Skew-symmetrization over sinks `0` and `1`: `½ (S − swap(S))`.
pub fn skew(s: &GraphSum<KGraph>) -> GraphSum<KGraph> {
    let mut out = GraphSum::new();
    for (g, c) in s.iter() {
        out.add(g, *c * Q::new(1, 2));
        out.add(&g.swap_sinks(), -*c * Q::new(1, 2));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cocycle::gamma3;

    #[test]
    fn tetrahedron_orientation() {
        let o = orient(&gamma3(), 2).unwrap();
        assert_eq!(o.directed_graph_count(), 3);
        let mut mult = o.multiplicities();
        mult.sort_unstable();
        assert_eq!(mult, vec![8, 24, 24]);
        assert_eq!(o.bivector_classes().len(), 2);
        for (g, c) in o.sum.iter() {
            assert_eq!(c.abs(), Q::int(o.portraits[g] as i128));
        }
        assert_eq!(skew(&o.sum), o.sum);
        for (g, _) in o.sum.iter() {
            assert_eq!(g.tadpole_count(), 0);
        }
    }

    #[test]
    fn pentagon_wheel_orientation() {
        let o = orient(&crate::graph::cocycle::gamma5(), 2).unwrap();
        assert_eq!(o.directed_graph_count(), 167);
        assert_eq!(o.bivector_classes().len(), 91);
        assert_eq!(skew(&o.sum), o.sum);
    }

    #[test]
    fn single_vertex_gives_the_wedge() {
        let o = orient(&GraphSum::single(&UGraph::point()), 2).unwrap();
        assert_eq!(o.sum.len(), 1);
        let (g, c) = o.sum.iter().next().unwrap();
        assert_eq!(*g, KGraph::wedge().canonical().graph);
        assert_eq!(c.abs(), Q::ONE);
        assert!(matches!(
            orient(&GraphSum::single(&UGraph::edge()), 2),
            Err(Error::Grading { .. })
        ));
        assert!(matches!(orient(&gamma3(), 3), Err(Error::Sinks(3))));
    }
}
