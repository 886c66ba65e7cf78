//! Undirected graphs with a global wedge order on edges, the insertion
//! bracket and the vertex blow-up differential.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::canon::{canonicalize, sort_parity, ColoredGraph};
use super::{Canonical, CanonicalForm, GraphSum};
use crate::coeff::Q;
use crate::error::{Error, Result};

/// An undirected graph on vertices `0..n` whose edges are ordered; swapping
/// two edges negates the graph. Self-loops are not allowed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UGraph {
    n: usize,
    edges: Vec<[u8; 2]>,
}

impl UGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<UGraph> {
        if n > 255 {
            return Err(Error::Invalid("too many vertices".into()));
        }
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            for t in [a, b] {
                if t >= n {
                    return Err(Error::TargetOutOfRange {
                        target: t,
                        vertices: n,
                    });
                }
            }
            if a == b {
                return Err(Error::Invalid(alloc::format!("self-loop on vertex {a}")));
            }
            out.push([a.min(b) as u8, a.max(b) as u8]);
        }
        Ok(UGraph { n, edges: out })
    }

    fn from_raw(n: usize, edges: Vec<[u8; 2]>) -> UGraph {
        UGraph {
            n,
            edges: edges
                .into_iter()
                .map(|[a, b]| [a.min(b), a.max(b)])
                .collect(),
        }
    }

    /// The single vertex `•`.
    pub fn point() -> UGraph {
        UGraph {
            n: 1,
            edges: Vec::new(),
        }
    }

    /// The single edge `•-•`.
    pub fn edge() -> UGraph {
        UGraph {
            n: 2,
            edges: vec![[0, 1]],
        }
    }

    /// The complete graph on `n` vertices, edges in lexicographic order.
    pub fn complete(n: usize) -> UGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push([a as u8, b as u8]);
            }
        }
        UGraph { n, edges }
    }

    /// The `k`-wheel: hub `0`, rim `1..=k`; spokes first, then the rim cycle.
    pub fn wheel(k: usize) -> UGraph {
        let mut edges = Vec::new();
        for i in 1..=k {
            edges.push([0, i as u8]);
        }
        for i in 1..=k {
            let j = if i == k { 1 } else { i + 1 };
            edges.push([i.min(j) as u8, i.max(j) as u8]);
        }
        UGraph { n: k + 1, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|e| (e[0] as usize, e[1] as usize))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e[0] as usize == v || e[1] as usize == v)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let (a, b) = (e[0] as usize, e[1] as usize);
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.edges[i][0] as usize == v || self.edges[i][1] as usize == v)
            .collect()
    }
}

impl Canonical for UGraph {
    fn canonical(&self) -> CanonicalForm<UGraph> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e[0] as usize].push(e[1] as usize);
            adj[e[1] as usize].push(e[0] as usize);
        }
        let cg = ColoredGraph {
            colors: vec![0; self.n],
            out_adj: adj,
            in_adj: vec![Vec::new(); self.n],
        };
        let c = canonicalize(&cg, |p| {
            let mut es: Vec<[u32; 2]> = self
                .edges
                .iter()
                .map(|e| {
                    let (a, b) = (p[e[0] as usize] as u32, p[e[1] as usize] as u32);
                    [a.min(b), a.max(b)]
                })
                .collect();
            let parity = sort_parity(&mut es);
            (es.into_iter().flatten().collect(), parity)
        });
        let edges = c
            .encoding
            .chunks(2)
            .map(|w| [w[0] as u8, w[1] as u8])
            .collect();
        CanonicalForm {
            graph: UGraph { n: self.n, edges },
            sign: c.sign,
            relabeling: c.perm,
        }
    }
}

impl fmt::Debug for UGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, e) in self.edges.iter().enumerate() {
            write!(f, "{}{}-{}", if i > 0 { "," } else { "" }, e[0], e[1])?;
        }
        Ok(())
    }
}

/// Vertex blow-up differential of a single graph, accumulated into `out`.
/// Each vertex `v` splits into `v` and a new vertex joined by a new edge
/// placed first; `v`'s edges are distributed so that both ends keep at least
/// one of them.
pub fn differential_into(g: &UGraph, c: Q, out: &mut GraphSum<UGraph>) {
    let n = g.n;
    for v in 0..n {
        let inc = g.incident(v);
        let k = inc.len();
        if k < 2 {
            continue;
        }
        for mask in 1u32..(1u32 << k) - 1 {
            let mut edges = Vec::with_capacity(g.edges.len() + 1);
            edges.push([v as u8, n as u8]);
            for (i, e) in g.edges.iter().enumerate() {
                let mut e = *e;
                if let Some(pos) = inc.iter().position(|&j| j == i) {
                    if mask & (1 << pos) != 0 {
                        if e[0] as usize == v {
                            e[0] = n as u8;
                        } else {
                            e[1] = n as u8;
                        }
                    }
                }
                edges.push(e);
            }
            out.add(&UGraph::from_raw(n + 1, edges), c);
        }
    }
}

pub fn differential(s: &GraphSum<UGraph>) -> GraphSum<UGraph> {
    let mut out = GraphSum::new();
    for (g, c) in s.iter() {
        differential_into(g, *c, &mut out);
    }
    out
}

/// `a ∘ b`: insert `a` into each vertex of `b`, reattaching that vertex's
/// edges to the vertices of `a` in all ways. Edge order is `E(a) ∧ E(b)`.
pub fn insert_into(a: &UGraph, b: &UGraph, c: Q, out: &mut GraphSum<UGraph>) {
    let na = a.n;
    for v in 0..b.n {
        let inc = b.incident(v);
        let k = inc.len();
        let total = na.pow(k as u32);
        let relabel = |u: usize| (if u < v { u } else { u - 1 } + na) as u8;
        for code in 0..total {
            let mut choice = vec![0usize; k];
            let mut x = code;
            for ch in choice.iter_mut() {
                *ch = x % na;
                x /= na;
            }
            let mut edges = a.edges.clone();
            for (i, e) in b.edges.iter().enumerate() {
                let (p, q) = (e[0] as usize, e[1] as usize);
                let ne = match inc.iter().position(|&j| j == i) {
                    Some(pos) => {
                        let other = if p == v { q } else { p };
                        [choice[pos] as u8, relabel(other)]
                    }
                    None => [relabel(p), relabel(q)],
                };
                edges.push(ne);
            }
            out.add(&UGraph::from_raw(na + b.n - 1, edges), c);
        }
    }
}

/// Graded commutator `[a, b] = a∘b − (−1)^{|a||b|} b∘a`, degree = edge count.
pub fn bracket(a: &GraphSum<UGraph>, b: &GraphSum<UGraph>) -> GraphSum<UGraph> {
    let mut out = GraphSum::new();
    for (ga, ca) in a.iter() {
        for (gb, cb) in b.iter() {
            let c = *ca * *cb;
            insert_into(ga, gb, c, &mut out);
            let odd = (ga.edge_count() * gb.edge_count()) % 2 == 1;
            insert_into(gb, ga, if odd { c } else { -c }, &mut out);
        }
    }
    out
}

/// `𝖽 = [•-•, ·]`, the same map as [`differential`] through the bracket.
pub fn differential_via_bracket(s: &GraphSum<UGraph>) -> GraphSum<UGraph> {
    bracket(&GraphSum::single(&UGraph::edge()), s)
}

/// Whether `𝖽(s) = 0`; on failure, the surviving terms.
pub fn is_cocycle(s: &GraphSum<UGraph>) -> core::result::Result<(), GraphSum<UGraph>> {
    let d = differential(s);
    if d.is_empty() {
        Ok(())
    } else {
        Err(d)
    }
}

/// The common `(vertices, edges)` bi-grading, if the sum is homogeneous.
pub fn grading(s: &GraphSum<UGraph>) -> Option<(usize, usize)> {
    let mut it = s.iter().map(|(g, _)| (g.vertex_count(), g.edge_count()));
    let first = it.next()?;
    it.all(|x| x == first).then_some(first)
}

/// All connected simple graphs on `n` vertices with `e` edges and minimal
/// degree at least `min_degree` that are not zero by an odd automorphism, in
/// canonical form and canonical order.
pub fn enumerate_graphs(n: usize, e: usize, min_degree: usize) -> Vec<UGraph> {
    let all = UGraph::complete(n).edges;
    let mut out = alloc::collections::BTreeSet::new();
    let mut pick = Vec::with_capacity(e);
    fn rec(
        all: &[[u8; 2]],
        start: usize,
        e: usize,
        n: usize,
        min_degree: usize,
        pick: &mut Vec<[u8; 2]>,
        out: &mut alloc::collections::BTreeSet<UGraph>,
    ) {
        if pick.len() == e {
            let g = UGraph {
                n,
                edges: pick.clone(),
            };
            if (0..n).all(|v| g.degree(v) >= min_degree) && g.is_connected() {
                let cf = g.canonical();
                if cf.sign != 0 {
                    out.insert(cf.graph);
                }
            }
            return;
        }
        for i in start..all.len() {
            if all.len() - i < e - pick.len() {
                break;
            }
            pick.push(all[i]);
            rec(all, i + 1, e, n, min_degree, pick, out);
            pick.pop();
        }
    }
    rec(&all, 0, e, n, min_degree, &mut pick, &mut out);
    out.into_iter().collect()
}

/// The tetrahedron `γ_3` as a single-term cocycle.
pub fn gamma3() -> GraphSum<UGraph> {
    GraphSum::single(&UGraph::complete(4))
}

/// The pentagon-wheel cocycle with integer coefficients: `2·wheel₅` (edges
/// as in [`UGraph::wheel`]) minus `5·` its companion graph.
pub fn gamma5() -> GraphSum<UGraph> {
    let companion = [
        (0, 1),
        (0, 2),
        (0, 4),
        (1, 3),
        (1, 5),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (4, 5),
    ];
    let mut s = GraphSum::new();
    s.add(&UGraph::wheel(5), Q::int(2));
    s.add(&UGraph::new(6, &companion).expect("valid"), Q::int(-5));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_edge_is_zero() {
        let g = UGraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.canonical().sign, 0);
    }

    #[test]
    fn relabeling_invariance_with_sign() {
        let g = UGraph::complete(4);
        let h = UGraph::new(4, &[(2, 3), (0, 2), (1, 2), (0, 3), (1, 3), (0, 1)]).unwrap();
        let (cg, ch) = (g.canonical(), h.canonical());
        assert_eq!(cg.graph, ch.graph);
        assert_ne!(cg.sign, 0);
        let again = cg.graph.canonical();
        assert_eq!(again.graph, cg.graph);
        assert_eq!(again.sign, 1);
    }

    #[test]
    fn tetrahedron_is_cocycle() {
        assert!(is_cocycle(&gamma3()).is_ok());
    }

    #[test]
    fn pentagon_wheel_cocycle() {
        let g = gamma5();
        assert_eq!(g.len(), 2);
        assert_eq!(grading(&g), Some((6, 10)));
        assert!(is_cocycle(&g).is_ok());
        let w = UGraph::wheel(5).canonical();
        assert_eq!(g.coeff(&w.graph) * Q::int(w.sign as i128), Q::int(2));
    }

    #[test]
    fn pentagon_wheel_spans_kernel() {
        use crate::linalg::{ColumnEchelon, SparseVec};
        let gs = enumerate_graphs(6, 10, 3);
        let mut e = ColumnEchelon::new();
        for g in &gs {
            let d = differential(&GraphSum::single(g));
            let col: SparseVec<UGraph> = d.iter().map(|(h, c)| (h.clone(), c.to_big())).collect();
            e.push(col);
        }
        assert_eq!(e.kernel().len(), 1);
    }

    #[test]
    fn bracket_reproduces_differential() {
        for g in [
            UGraph::complete(4),
            UGraph::wheel(4),
            UGraph::edge(),
            UGraph::wheel(5),
        ] {
            let s = GraphSum::single(&g);
            assert_eq!(differential(&s), differential_via_bracket(&s));
        }
    }

    fn path(n: usize) -> UGraph {
        let e: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        UGraph::new(n, &e).unwrap()
    }

    #[test]
    fn cocycle_certificates() {
        let chorded = UGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap();
        let w = is_cocycle(&GraphSum::single(&chorded)).unwrap_err();
        assert!(!w.is_empty());
        assert!(w
            .iter()
            .all(|(g, _)| g.vertex_count() == 5 && g.edge_count() == 6));
    }

    #[test]
    fn bracket_of_gamma3_and_gamma5_is_in_grading_9_16() {
        let b = bracket(&gamma3(), &gamma5());
        assert!(!b.is_empty());
        assert_eq!(grading(&b), Some((9, 16)));
        assert!(bracket(&gamma3(), &gamma3()).is_empty());
    }

    #[test]
    fn graded_jacobi_on_small_graphs() {
        let gs = [UGraph::edge(), path(3), UGraph::complete(3), path(4)];
        let sign = |a: &UGraph, b: &UGraph| {
            if a.edge_count() * b.edge_count() % 2 == 1 {
                -Q::ONE
            } else {
                Q::ONE
            }
        };
        for a in &gs {
            for b in &gs {
                for c in &gs {
                    let (sa, sb, sc) = (
                        GraphSum::single(a),
                        GraphSum::single(b),
                        GraphSum::single(c),
                    );
                    let lhs = bracket(&sa, &bracket(&sb, &sc));
                    let mut rhs = bracket(&bracket(&sa, &sb), &sc);
                    rhs.add_sum(&bracket(&sb, &bracket(&sa, &sc)), sign(a, b));
                    assert_eq!(lhs, rhs, "{a:?} {b:?} {c:?}");
                }
            }
        }
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn graph() -> impl Strategy<Value = UGraph> {
            (2usize..=6).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 1..=(n + 2)).prop_map(move |es| {
                    let es: Vec<(usize, usize)> = es.into_iter().filter(|(a, b)| a != b).collect();
                    UGraph::new(n, &es).unwrap()
                })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(20))]

            #[test]
            fn differential_squares_to_zero(g in graph(), h in graph()) {
                let mut s = GraphSum::single(&g);
                s.add(&h, Q::int(3));
                let d = differential(&s);
                prop_assert!(differential(&d).is_empty());
                if let (Some((n, e)), Some(_)) = (grading(&GraphSum::single(&g)), grading(&d)) {
                    prop_assert!(differential(&GraphSum::single(&g))
                        .iter()
                        .all(|(x, _)| x.vertex_count() == n + 1 && x.edge_count() == e + 1));
                }
            }
        }
    }
}
