//! Evaluation of directed graphs as tensor networks.
//!
//! Every arrow carries a summation index in `0..d`; each vertex contributes
//! its content with upper indices from its outgoing arrows, differentiated
//! along the indices of its incoming arrows. Arrows into sinks stay free and
//! become the slots of the output multivector, which is antisymmetrized.
//!
//! The sum over index assignments is organized as variable elimination over
//! a vertex order: a table keyed by the values of the currently open arrows
//! is extended one vertex at a time, and arrows whose both ends are done are
//! summed out.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::Q;
use crate::diffpoly::{DiffPoly, FxMap};
use crate::error::{Error, Result};
use crate::graph::{KGraph, MicroGraph};
use crate::jet::{MultiIndex, Symbol, MAX_DIM};
use crate::modp::{self, PRIME};
use crate::multivector::{nambu_bivector, sort_with_sign, IndexSet, Multivector};

/// Coefficient ring for the contraction.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: Q) -> Self;
}

impl Ring for DiffPoly {
    fn zero() -> Self {
        DiffPoly::zero()
    }
    fn is_zero(&self) -> bool {
        DiffPoly::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn scale(&self, c: Q) -> Self {
        DiffPoly::scale(self, c)
    }
}

/// Residues modulo the prime `2^61 − 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModP(pub u64);

impl Ring for ModP {
    fn zero() -> Self {
        ModP(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add_assign(&mut self, other: &Self) {
        self.0 = modp::add(self.0, other.0, PRIME);
    }
    fn mul(&self, other: &Self) -> Self {
        ModP(modp::mul(self.0, other.0, PRIME))
    }
    fn scale(&self, c: Q) -> Self {
        ModP(modp::mul(self.0, c.mod_p(PRIME), PRIME))
    }
}

/// How a vertex contributes to the contraction.
#[derive(Clone, Debug)]
pub enum Content<'a> {
    /// A multivector whose arity equals the out-degree (wedges carry `P`).
    Tensor(&'a Multivector),
    /// `c · ε^{i_1…i_d}` with out-degree `d`.
    LeviCivita(&'a DiffPoly),
    /// A function; out-degree 0.
    Scalar(&'a DiffPoly),
    /// The coordinate function `x^{k+1}`; out-degree 0, in-degree ≥ 1.
    Coordinate(usize),
    /// An argument slot; in-degree exactly 1.
    Sink,
}

/// A directed graph with vertex contents, ready for contraction.
pub struct Network<'a> {
    dim: usize,
    contents: Vec<Content<'a>>,
    /// Vertices with equal keys share a factor cache.
    cache_keys: Vec<usize>,
    outs: Vec<Vec<usize>>,
    arrows: Vec<(usize, usize)>,
    sinks: Vec<usize>,
}

impl<'a> Network<'a> {
    pub fn new(dim: usize) -> Self {
        Network {
            dim,
            contents: Vec::new(),
            cache_keys: Vec::new(),
            outs: Vec::new(),
            arrows: Vec::new(),
            sinks: Vec::new(),
        }
    }

    /// Adds a vertex and returns its id. Sinks become output slots in the
    /// order they are added.
    pub fn vertex(&mut self, content: Content<'a>, cache_key: usize) -> usize {
        let v = self.contents.len();
        if matches!(content, Content::Sink) {
            self.sinks.push(v);
        }
        self.contents.push(content);
        self.cache_keys.push(cache_key);
        self.outs.push(Vec::new());
        v
    }

    /// Adds the next outgoing arrow of `from` (order matters).
    pub fn arrow(&mut self, from: usize, to: usize) {
        self.outs[from].push(self.arrows.len());
        self.arrows.push((from, to));
    }

    fn check(&self) -> Result<()> {
        if self.arrows.len() > 32 {
            return Err(Error::Invalid("more than 32 arrows".into()));
        }
        for (v, c) in self.contents.iter().enumerate() {
            let out = self.outs[v].len();
            let ok = match c {
                Content::Tensor(m) => m.arity() == out && m.dim() == self.dim,
                Content::LeviCivita(_) => out == self.dim,
                Content::Scalar(_) | Content::Coordinate(_) | Content::Sink => out == 0,
            };
            if !ok {
                return Err(Error::Invalid(alloc::format!(
                    "vertex {v} has incompatible out-degree {out}"
                )));
            }
        }
        for &s in &self.sinks {
            let indeg = self.arrows.iter().filter(|a| a.1 == s).count();
            if indeg != 1 {
                return Err(Error::Invalid(alloc::format!(
                    "sink {s} has in-degree {indeg}, expected 1"
                )));
            }
        }
        Ok(())
    }

    fn factor(&self, v: usize, out: &[u8], alpha: &MultiIndex) -> Option<DiffPoly> {
        match &self.contents[v] {
            Content::Tensor(m) => {
                let c = m.component(out);
                (!c.is_zero()).then(|| c.derivative(alpha))
            }
            Content::LeviCivita(c) => {
                let (_, neg) = sort_with_sign(out)?;
                let d = c.derivative(alpha);
                Some(if neg { -&d } else { d })
            }
            Content::Scalar(p) => Some(p.derivative(alpha)),
            Content::Coordinate(k) => {
                let total: u32 = alpha.iter().map(|&a| a as u32).sum();
                assert!(total > 0, "underived coordinate content");
                (total == 1 && alpha[*k] == 1).then(DiffPoly::one)
            }
            Content::Sink => Some(DiffPoly::one()),
        }
    }

    fn order(&self) -> Vec<usize> {
        let n = self.contents.len();
        let mut done = vec![false; n];
        for &s in &self.sinks {
            done[s] = true;
        }
        let mut order = Vec::new();
        // Greedy: prefer vertices that close many open arrows and open few.
        while order.len() + self.sinks.len() < n {
            let mut best: Option<(i64, usize)> = None;
            for v in (0..n).filter(|&v| !done[v]) {
                let mut score = 0i64;
                for a in self.arrows.iter().filter(|a| a.0 == v || a.1 == v) {
                    let other = if a.0 == v { a.1 } else { a.0 };
                    if other == v {
                        continue;
                    }
                    if done[other] && !self.sinks.contains(&other) {
                        score -= 1;
                    } else {
                        score += 1;
                    }
                }
                if best.is_none_or(|(b, _)| score < b) {
                    best = Some((score, v));
                }
            }
            let v = best.unwrap().1;
            done[v] = true;
            order.push(v);
        }
        order
    }

    /// Full contraction. Returns the raw components `C^{i_1…i_k}` keyed by
    /// the index on the arrow into each sink, in sink order.
    pub fn contract_raw<R: Ring>(
        &self,
        lift: &dyn Fn(&DiffPoly) -> R,
    ) -> Result<Vec<(IndexSet, R)>> {
        self.check()?;
        let d = self.dim as u8;
        let nar = self.arrows.len();
        let order = self.order();
        let mut processed = vec![false; self.contents.len()];
        let is_sink_arrow: Vec<bool> = self
            .arrows
            .iter()
            .map(|a| self.sinks.contains(&a.1))
            .collect();
        let mut table: FxMap<u128, R> = FxMap::default();
        table.insert(0, lift(&DiffPoly::one()));
        let mut cache: FxMap<(usize, IndexSet, MultiIndex), Option<R>> = FxMap::default();
        let get = |key: u128, a: usize| ((key >> (4 * a)) & 0xf) as u8;

        for &v in &order {
            let inc: Vec<usize> = (0..nar)
                .filter(|&i| self.arrows[i].0 == v || self.arrows[i].1 == v)
                .collect();
            // Arrows that become open now.
            let fresh: Vec<usize> = inc
                .iter()
                .copied()
                .filter(|&i| {
                    let (a, b) = self.arrows[i];
                    let other = if a == v { b } else { a };
                    other == v || !processed[other]
                })
                .collect();
            processed[v] = true;
            // Arrows that close after this vertex.
            let closing: Vec<usize> = inc
                .iter()
                .copied()
                .filter(|&i| {
                    let (a, b) = self.arrows[i];
                    processed[a] && processed[b] && !is_sink_arrow[i]
                })
                .collect();
            let mut clear_mask: u128 = 0;
            for &i in &closing {
                clear_mask |= 0xf << (4 * i);
            }
            let outs = &self.outs[v];
            let ins: Vec<usize> = inc
                .iter()
                .copied()
                .filter(|&i| self.arrows[i].1 == v)
                .collect();
            let mut next: FxMap<u128, R> = FxMap::default();
            let nfresh = fresh.len() as u32;
            let combos = (d as u64).pow(nfresh);
            for (&key, val) in table.iter() {
                'assign: for code in 0..combos {
                    let mut k = key;
                    let mut x = code;
                    for &i in &fresh {
                        let value = (x % d as u64) as u128 + 1;
                        x /= d as u64;
                        k |= value << (4 * i);
                    }
                    let out_idx: IndexSet = outs.iter().map(|&i| get(k, i) - 1).collect();
                    if out_idx.len() > 1 {
                        for a in 0..out_idx.len() {
                            for b in a + 1..out_idx.len() {
                                if out_idx[a] == out_idx[b] {
                                    continue 'assign;
                                }
                            }
                        }
                    }
                    let mut alpha: MultiIndex = [0; MAX_DIM];
                    for &i in &ins {
                        alpha[(get(k, i) - 1) as usize] += 1;
                    }
                    let ck = (self.cache_keys[v], out_idx.clone(), alpha);
                    let f = cache.entry(ck).or_insert_with(|| {
                        self.factor(v, &out_idx, &alpha)
                            .filter(|p| !p.is_zero())
                            .map(|p| lift(&p))
                    });
                    let Some(f) = f else { continue };
                    let prod = val.mul(f);
                    if prod.is_zero() {
                        continue;
                    }
                    let nk = k & !clear_mask;
                    match next.get_mut(&nk) {
                        Some(e) => e.add_assign(&prod),
                        None => {
                            next.insert(nk, prod);
                        }
                    }
                }
            }
            next.retain(|_, r| !r.is_zero());
            table = next;
        }
        let sink_arrows: Vec<usize> = self
            .sinks
            .iter()
            .map(|&s| (0..nar).find(|&i| self.arrows[i].1 == s).unwrap())
            .collect();
        let mut out: Vec<(IndexSet, R)> = table
            .into_iter()
            .map(|(k, r)| (sink_arrows.iter().map(|&i| get(k, i) - 1).collect(), r))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }

    /// Contraction followed by antisymmetrization over the sinks,
    /// `M^I = (1/k!) Σ_σ sgn(σ) C^{σ(I)}`.
    pub fn contract<R: Ring>(
        &self,
        lift: &dyn Fn(&DiffPoly) -> R,
    ) -> Result<BTreeMap<IndexSet, R>> {
        let raw = self.contract_raw(lift)?;
        let k = self.sinks.len();
        let kfact: i128 = (1..=k as i128).product();
        let w = Q::new(1, kfact);
        let mut out: BTreeMap<IndexSet, R> = BTreeMap::new();
        for (idx, r) in raw {
            let Some((sorted, neg)) = sort_with_sign(&idx) else {
                continue;
            };
            let term = r.scale(if neg { -w } else { w });
            match out.get_mut(&sorted) {
                Some(e) => e.add_assign(&term),
                None => {
                    out.insert(sorted, term);
                }
            }
        }
        out.retain(|_, r| !r.is_zero());
        Ok(out)
    }

    pub fn evaluate(&self) -> Result<Multivector> {
        let comps = self.contract::<DiffPoly>(&|p| p.clone())?;
        let mut m = Multivector::zero(self.dim, self.sinks.len());
        for (idx, p) in comps {
            m.add_component(&idx, &p);
        }
        Ok(m)
    }

    pub fn evaluate_mod_p(&self, seed: u64) -> Result<BTreeMap<IndexSet, ModP>> {
        self.contract::<ModP>(&|p| ModP(p.eval_mod_p(seed, PRIME)))
    }
}

/// What sits in the internal vertices of a Kontsevich graph.
#[derive(Clone, Debug)]
pub struct KContents {
    pub dim: usize,
    /// Bi-vector placed in every wedge.
    pub bivector: Multivector,
    /// Content of each terminal vertex, in terminal order.
    pub terminals: Vec<DiffPoly>,
}

impl KContents {
    /// Generic density `P = ρ ∂_x ∧ ∂_y` at `d = 2` or the Nambu bracket at
    /// `d ≥ 3`, with terminals carrying `ρ`.
    pub fn nambu(dim: usize, terminals: usize) -> Result<KContents> {
        Ok(KContents {
            dim,
            bivector: nambu_bivector(dim)?,
            terminals: vec![DiffPoly::symbol(Symbol::RHO); terminals],
        })
    }
}

pub fn kontsevich_network<'a>(g: &KGraph, c: &'a KContents) -> Result<Network<'a>> {
    if c.terminals.len() != g.terminal_count() {
        return Err(Error::Invalid(
            "terminal contents do not match the graph".into(),
        ));
    }
    let mut net = Network::new(c.dim);
    for _ in 0..g.sink_count() {
        net.vertex(Content::Sink, 0);
    }
    for t in 0..g.terminal_count() {
        net.vertex(Content::Scalar(&c.terminals[t]), 2 + t);
    }
    for k in 0..g.wedge_count() {
        let v = net.vertex(Content::Tensor(&c.bivector), 1);
        let (l, r) = g.targets(k);
        net.arrow(v, l);
        net.arrow(v, r);
    }
    Ok(net)
}

/// What sits in the vertices of a Nambu micro-graph.
#[derive(Clone, Debug)]
pub struct MicroContents {
    pub rho: DiffPoly,
    pub casimirs: Vec<CasimirContent>,
}

#[derive(Clone, Debug)]
pub enum CasimirContent {
    Poly(DiffPoly),
    Coordinate(usize),
}

impl MicroContents {
    pub fn generic(dim: usize) -> MicroContents {
        MicroContents {
            rho: DiffPoly::symbol(Symbol::RHO),
            casimirs: (1..=dim.saturating_sub(2))
                .map(|i| CasimirContent::Poly(DiffPoly::symbol(Symbol::casimir(i))))
                .collect(),
        }
    }
}

pub fn micro_network<'a>(g: &MicroGraph, c: &'a MicroContents) -> Result<Network<'a>> {
    let d = g.dim();
    if c.casimirs.len() != d - 2 {
        return Err(Error::DimensionMismatch {
            expected: d - 2,
            found: c.casimirs.len(),
        });
    }
    let mut net = Network::new(d);
    let (m, b) = (g.sink_count(), g.block_count());
    for _ in 0..m {
        net.vertex(Content::Sink, 0);
    }
    for _ in 0..b {
        net.vertex(Content::LeviCivita(&c.rho), 1);
    }
    for i in 1..=d - 2 {
        for _ in 0..b {
            let content = match &c.casimirs[i - 1] {
                CasimirContent::Poly(p) => Content::Scalar(p),
                CasimirContent::Coordinate(k) => Content::Coordinate(*k),
            };
            net.vertex(content, 1 + i);
        }
    }
    for (j, t) in g.tuples().iter().enumerate() {
        for &x in t {
            net.arrow(m + j, x as usize);
        }
    }
    Ok(net)
}

/// `φ(g)` for a Kontsevich graph.
pub fn evaluate_kontsevich(g: &KGraph, c: &KContents) -> Result<Multivector> {
    kontsevich_network(g, c)?.evaluate()
}

/// `φ(g)` for a Nambu micro-graph with generic `ρ` and Casimirs.
pub fn evaluate_micro(g: &MicroGraph) -> Result<Multivector> {
    let c = MicroContents::generic(g.dim());
    micro_network(g, &c)?.evaluate()
}

pub fn evaluate_micro_with(g: &MicroGraph, c: &MicroContents) -> Result<Multivector> {
    micro_network(g, c)?.evaluate()
}

/// Sparse key for a multivector entry.
pub type EntryKey = (IndexSet, crate::jet::Monomial);

/// Flattens a multivector into `(indices, monomial) → coefficient`.
pub fn flatten(m: &Multivector) -> BTreeMap<EntryKey, Q> {
    let mut out = BTreeMap::new();
    for (idx, p) in m.coeffs() {
        for (mon, c) in p.iter() {
            out.insert((idx.clone(), mon.clone()), *c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::micro::Tuple;
    use crate::jet::Jet;

    #[test]
    fn single_wedge_is_p() {
        for d in 2..=4 {
            let c = KContents::nambu(d, 0).unwrap();
            let v = evaluate_kontsevich(&KGraph::wedge(), &c).unwrap();
            assert_eq!(v, c.bivector);
        }
    }

    #[test]
    fn nambu_block_is_p() {
        let g = MicroGraph::new(3, 2, vec![Tuple::from_slice(&[0, 1, 3])]).unwrap();
        assert_eq!(evaluate_micro(&g).unwrap(), nambu_bivector(3).unwrap());
        let g4 = MicroGraph::new(4, 2, vec![Tuple::from_slice(&[0, 1, 3, 4])]).unwrap();
        assert_eq!(evaluate_micro(&g4).unwrap(), nambu_bivector(4).unwrap());
    }

    #[test]
    fn two_wedges_with_tadpole_by_hand() {
        // wedge 1 → (0, 2), wedge 2 → (1, 2): X^i = Σ ∂_k P^{ij} ∂_j ∂_l P^{kl}
        let g = KGraph::new(1, 0, &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(g.tadpole_count(), 1);
        let c = KContents::nambu(3, 0).unwrap();
        let v = evaluate_kontsevich(&g, &c).unwrap();
        let p = &c.bivector;
        let mut expect = Multivector::zero(3, 1);
        for i in 0..3u8 {
            let mut acc = DiffPoly::zero();
            for j in 0..3u8 {
                for k in 0..3u8 {
                    for l in 0..3u8 {
                        let a = p.component(&[i, j]).total_derivative(k as usize);
                        let b = p
                            .component(&[k, l])
                            .total_derivative(j as usize)
                            .total_derivative(l as usize);
                        acc += &(&a * &b);
                    }
                }
            }
            expect.add_component(&[i], &acc);
        }
        assert_eq!(v, expect);
        assert!(evaluate_kontsevich(&KGraph::new(1, 0, &[(0, 2), (0, 1)]).unwrap(), &c).is_err());
    }

    #[test]
    fn mod_p_agrees_with_full_expansion() {
        let g = KGraph::parse("(0,2;1,3;1,2)", 1).unwrap();
        let c = KContents::nambu(3, 0).unwrap();
        let net = kontsevich_network(&g, &c).unwrap();
        let full = net.evaluate().unwrap();
        let fast = net.evaluate_mod_p(7).unwrap();
        for (idx, p) in full.coeffs() {
            assert_eq!(
                fast.get(idx).copied().unwrap_or(ModP(0)).0,
                p.eval_mod_p(7, PRIME)
            );
        }
        let _ = Jet::base(Symbol::RHO);
    }

    #[test]
    fn permuting_a_tuple_multiplies_by_the_sign() {
        use crate::graph::Canonical;
        for g in crate::micro_expand::enumerate_micrographs(1, 2, 3).unwrap() {
            let v = evaluate_micro(&g).unwrap();
            let mut ts: Vec<Tuple> = g.tuples().to_vec();
            ts[0].swap(0, 2);
            let h = MicroGraph::new_unchecked(3, 1, ts.clone()).unwrap();
            assert_eq!(evaluate_micro(&h).unwrap(), v.scale(-Q::ONE), "{g}");
            ts[0].rotate_left(1);
            ts[0].rotate_left(1);
            let h = MicroGraph::new_unchecked(3, 1, ts).unwrap();
            assert_eq!(evaluate_micro(&h).unwrap(), v.scale(-Q::ONE), "{g}");
            let cf = g.canonical();
            assert_eq!(
                evaluate_micro(&cf.graph)
                    .unwrap()
                    .scale(Q::int(cf.sign as i128)),
                v
            );
        }
    }

    #[test]
    fn relabeled_kontsevich_graphs_agree_up_to_sign() {
        use crate::graph::Canonical;
        let c = KContents::nambu(3, 0).unwrap();
        for text in ["(0,1;1,3;1,2)", "(0,2;1,3;1,2)", "(0,3;1,4;2,3)"] {
            let sinks = if text.contains('4') { 2 } else { 1 };
            let g = KGraph::parse(text, sinks).unwrap();
            let cf = g.canonical();
            let lhs = evaluate_kontsevich(&g, &c).unwrap();
            let rhs = evaluate_kontsevich(&cf.graph, &c)
                .unwrap()
                .scale(Q::int(cf.sign as i128));
            assert_eq!(lhs, rhs, "{text}");
        }
    }

    #[test]
    fn unimodular_change_of_coordinates() {
        use crate::poly::Poly;
        use rand_chacha::rand_core::{RngCore, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let d = 3;
        let x = |k| Poly::coordinate(d, k);
        // x ↦ A y, A = L·U with unit triangular factors, det A = 1
        let image = [
            x(0).add(&x(1).scale(Q::int(2))).add(&x(2)),
            x(1).sub(&x(2).scale(Q::int(3))),
            x(0).add(&x(1).scale(Q::int(2))).add(&x(2).scale(Q::int(2))),
        ];
        let graphs = crate::micro_expand::enumerate_micrographs(0, 2, d).unwrap();
        let mut checked = 0;
        for k in 0..graphs.len() {
            let g = &graphs[(k * 5 + rng.next_u32() as usize) % graphs.len()];
            let h = evaluate_micro(g).unwrap().get(&[]);
            let rho = Poly::random(d, 1, 2, &mut rng);
            let a = Poly::random(d, 2, 2, &mut rng);
            let assign = |rho: &Poly, a: &Poly| {
                let (rho, a) = (rho.clone(), a.clone());
                move |s: Symbol| if s.is_rho() { rho.clone() } else { a.clone() }
            };
            let before = h.instantiate(d, &assign(&rho, &a)).compose(&image);
            let after = h.instantiate(d, &assign(&rho.compose(&image), &a.compose(&image)));
            assert_eq!(before, after, "{g}");
            checked += 1;
            if checked == 5 {
                break;
            }
        }
        assert_eq!(checked, 5);
    }
}
