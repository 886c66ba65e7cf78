//! Nambu micro-graphs: Levi-Civita vertices with wedge-ordered `d`-tuples of
//! outgoing arrows, Casimir copies, and sinks.
//!
//! Internal layout for `m` sinks and `b` blocks over dimension `d`: sinks
//! `0..m`, Levi-Civita vertices `m..m+b`, then the copies of `a_t` for
//! `t = 1..=d−2`, copy `j` of `a_t` at `m + b + (t−1)·b + j`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use smallvec::SmallVec;

use super::canon::{canonicalize, sort_parity, ColoredGraph};
use super::kontsevich::{parse_groups, parse_list};
use super::{Canonical, CanonicalForm};
use crate::error::{Error, Result};
use crate::jet::MAX_DIM;

pub type Tuple = SmallVec<[u8; MAX_DIM]>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MicroGraph {
    dim: u8,
    sinks: u8,
    tuples: Vec<Tuple>,
}

/// Role of a vertex in the internal layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Sink(usize),
    LeviCivita(usize),
    /// Copy `copy` of the Casimir `a_index`.
    Casimir {
        index: usize,
        copy: usize,
    },
}

/// Role table for reading encodings with arbitrary vertex labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Roles {
    pub sinks: Vec<usize>,
    pub levi_civita: Vec<usize>,
    /// `casimirs[i-1]` lists the labels of the copies of `a_i`.
    pub casimirs: Vec<Vec<usize>>,
}

/// A parsed graph in normalized arrow order; the written graph equals
/// `sign · graph`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub graph: MicroGraph,
    pub sign: i8,
}

impl MicroGraph {
    /// Builds and validates a graph given in the internal layout.
    pub fn new(dim: usize, sinks: usize, tuples: Vec<Tuple>) -> Result<MicroGraph> {
        let g = MicroGraph::new_unchecked(dim, sinks, tuples)?;
        g.validate()?;
        Ok(g)
    }

    /// Checks ranges and arities only.
    pub fn new_unchecked(dim: usize, sinks: usize, tuples: Vec<Tuple>) -> Result<MicroGraph> {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(Error::DimensionMismatch {
                expected: MAX_DIM,
                found: dim,
            });
        }
        let b = tuples.len();
        let total = sinks + b * (dim - 1);
        if total > 255 {
            return Err(Error::Invalid("too many vertices".into()));
        }
        for (j, t) in tuples.iter().enumerate() {
            if t.len() != dim {
                return Err(Error::OutDegree {
                    vertex: sinks + j,
                    expected: dim,
                    found: t.len(),
                });
            }
            for &x in t {
                if x as usize >= total {
                    return Err(Error::TargetOutOfRange {
                        target: x as usize,
                        vertices: total,
                    });
                }
            }
        }
        Ok(MicroGraph {
            dim: dim as u8,
            sinks: sinks as u8,
            tuples,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn sink_count(&self) -> usize {
        self.sinks as usize
    }

    pub fn block_count(&self) -> usize {
        self.tuples.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.sink_count() + self.block_count() * (self.dim() - 1)
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn lc_label(&self, j: usize) -> usize {
        self.sink_count() + j
    }

    pub fn casimir_label(&self, index: usize, copy: usize) -> usize {
        let b = self.block_count();
        self.sink_count() + b + (index - 1) * b + copy
    }

    pub fn role(&self, v: usize) -> Role {
        let (m, b) = (self.sink_count(), self.block_count());
        if v < m {
            Role::Sink(v)
        } else if v < m + b {
            Role::LeviCivita(v - m)
        } else {
            let r = v - m - b;
            Role::Casimir {
                index: r / b + 1,
                copy: r % b,
            }
        }
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.tuples
            .iter()
            .flatten()
            .filter(|&&t| t as usize == v)
            .count()
    }

    /// Number of arrows from a Levi-Civita vertex to itself.
    pub fn tadpole_count(&self) -> usize {
        self.tuples
            .iter()
            .enumerate()
            .map(|(j, t)| {
                t.iter()
                    .filter(|&&x| x as usize == self.lc_label(j))
                    .count()
            })
            .sum()
    }

    /// Owner of each Casimir copy: `owner[i-1][copy] = Levi-Civita block`.
    /// Found as a perfect matching per Casimir index; `None` if there is none.
    pub fn ownership(&self) -> Option<Vec<Vec<usize>>> {
        let b = self.block_count();
        let mut all = Vec::new();
        for index in 1..=self.dim().saturating_sub(2) {
            let adj: Vec<Vec<usize>> = (0..b)
                .map(|j| {
                    let mut v: Vec<usize> = (0..b)
                        .filter(|&c| self.tuples[j].contains(&(self.casimir_label(index, c) as u8)))
                        .collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            let owner = perfect_matching(&adj)?;
            all.push(owner);
        }
        Some(all)
    }

    /// Checks the whole-Nambu-subgraph invariant.
    pub fn validate(&self) -> Result<()> {
        if self.ownership().is_none() {
            return Err(Error::NotNambu(
                "Casimir copies cannot be assigned one per Levi-Civita vertex".into(),
            ));
        }
        Ok(())
    }

    /// Tuples in normalized order `(Left, Right, own a_1, …, own a_{d−2})`
    /// and the sign of the reordering.
    pub fn normalized(&self) -> Option<(Vec<Tuple>, i8)> {
        let owners = self.ownership()?;
        let mut sign = 1i8;
        let mut out = Vec::with_capacity(self.tuples.len());
        for (j, t) in self.tuples.iter().enumerate() {
            let own: Vec<u8> = (1..=self.dim() - 2)
                .map(|i| {
                    let copy = owners[i - 1].iter().position(|&o| o == j).unwrap();
                    self.casimir_label(i, copy) as u8
                })
                .collect();
            let mut order: Vec<usize> = (0..t.len()).filter(|&p| !own.contains(&t[p])).collect();
            for c in &own {
                order.push(t.iter().position(|x| x == c).unwrap());
            }
            let mut perm = order.clone();
            if sort_parity(&mut perm) == Some(true) {
                sign = -sign;
            }
            out.push(order.iter().map(|&p| t[p]).collect());
        }
        Some((out, sign))
    }

    /// Lifts to dimension `d+1`: every Levi-Civita vertex gets a fresh
    /// Casimir `a_{d−1}` as the last arrow of its tuple.
    pub fn embed(&self) -> MicroGraph {
        let d = self.dim();
        assert!(d < MAX_DIM, "embedding beyond the supported dimension");
        let b = self.block_count();
        let tuples = self
            .tuples
            .iter()
            .enumerate()
            .map(|(j, t)| {
                let mut t = t.clone();
                t.push((self.sink_count() + b + (d - 2) * b + j) as u8);
                t
            })
            .collect();
        MicroGraph {
            dim: (d + 1) as u8,
            sinks: self.sinks,
            tuples,
        }
    }

    /// Lenient reader for `[0,1,5;2,5,6]` with an explicit role table.
    pub fn parse(text: &str, dim: usize, roles: &Roles) -> Result<Parsed> {
        let groups = parse_groups(text)?;
        if groups.len() != roles.levi_civita.len() {
            return Err(Error::Roles(alloc::format!(
                "{} groups but {} Levi-Civita vertices",
                groups.len(),
                roles.levi_civita.len()
            )));
        }
        if roles.casimirs.len() != dim.saturating_sub(2) {
            return Err(Error::Roles(alloc::format!(
                "expected {} Casimir kinds",
                dim.saturating_sub(2)
            )));
        }
        let b = groups.len();
        let m = roles.sinks.len();
        for (i, c) in roles.casimirs.iter().enumerate() {
            if c.len() != b {
                return Err(Error::Roles(alloc::format!(
                    "a_{} has {} copies, expected {b}",
                    i + 1,
                    c.len()
                )));
            }
        }
        let mut labels: Vec<usize> = roles.sinks.clone();
        labels.extend(&roles.levi_civita);
        labels.extend(roles.casimirs.iter().flatten());
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Roles("a label has two roles".into()));
        }
        // Temporary layout: Casimir copies in role-table order.
        let map =
            |x: usize| -> Result<u8> {
                labels.iter().position(|&l| l == x).map(|p| p as u8).ok_or(
                    Error::TargetOutOfRange {
                        target: x,
                        vertices: labels.len(),
                    },
                )
            };
        let mut tuples = Vec::with_capacity(b);
        for (j, g) in groups.iter().enumerate() {
            if g.len() != dim {
                return Err(Error::OutDegree {
                    vertex: roles.levi_civita[j],
                    expected: dim,
                    found: g.len(),
                });
            }
            tuples.push(g.iter().map(|&x| map(x)).collect::<Result<Tuple>>()?);
        }
        let temp = MicroGraph::new_unchecked(dim, m, tuples)?;
        let owners = temp
            .ownership()
            .ok_or_else(|| Error::NotNambu("not built of whole Nambu subgraphs".into()))?;
        // Relabel so that copy j of each a_i is owned by block j.
        let mut relabel: Vec<u8> = (0..temp.vertex_count() as u8).collect();
        for i in 1..=dim - 2 {
            for (copy, &owner) in owners[i - 1].iter().enumerate() {
                relabel[temp.casimir_label(i, copy)] = temp.casimir_label(i, owner) as u8;
            }
        }
        let tuples = temp
            .tuples
            .iter()
            .map(|t| t.iter().map(|&x| relabel[x as usize]).collect())
            .collect();
        let owned = MicroGraph::new_unchecked(dim, m, tuples)?;
        let (normal, sign) = owned.normalized().expect("ownership exists");
        Ok(Parsed {
            graph: MicroGraph {
                dim: dim as u8,
                sinks: m as u8,
                tuples: normal,
            },
            sign,
        })
    }

    /// Strict reader: `nambu d m ; t,…,t ; …` in the internal layout.
    pub fn parse_strict(text: &str) -> Result<MicroGraph> {
        let mut parts = text.split(';');
        let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(alloc::format!("bad number {s:?}")))
        };
        let (d, m) = match head.as_slice() {
            ["nambu", d, m] => (num(d)?, num(m)?),
            _ => return Err(Error::Parse("expected header `nambu d m`".into())),
        };
        let tuples = parts
            .map(|g| parse_list(g).map(|v| v.into_iter().map(|x| x.min(255) as u8).collect()))
            .collect::<Result<Vec<Tuple>>>()?;
        MicroGraph::new(d, m, tuples)
    }

    pub fn to_strict(&self) -> String {
        let mut s = alloc::format!("nambu {} {}", self.dim, self.sinks);
        for t in &self.tuples {
            s.push_str(" ; ");
            for (k, x) in t.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                s.push_str(&alloc::format!("{x}"));
            }
        }
        s
    }
}

/// Kuhn's algorithm; `adj[left]` lists right vertices. Returns
/// `owner[right] = left`.
fn perfect_matching(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none() || augment(owner[v].unwrap(), adj, seen, owner) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    for u in 0..n {
        let mut seen = vec![false; n];
        if !augment(u, adj, &mut seen, &mut owner) {
            return None;
        }
    }
    owner.into_iter().collect()
}

impl Canonical for MicroGraph {
    fn canonical(&self) -> CanonicalForm<MicroGraph> {
        let n = self.vertex_count();
        let m = self.sink_count();
        let colors: Vec<u32> = (0..n)
            .map(|v| match self.role(v) {
                Role::Sink(i) => i as u32,
                Role::LeviCivita(_) => m as u32,
                Role::Casimir { index, .. } => (m + index) as u32,
            })
            .collect();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (j, t) in self.tuples.iter().enumerate() {
            for &x in t {
                out_adj[m + j].push(x as usize);
                in_adj[x as usize].push(m + j);
            }
        }
        let cg = ColoredGraph {
            colors,
            out_adj,
            in_adj,
        };
        let b = self.block_count();
        let mut inv = vec![0usize; n];
        let c = canonicalize(&cg, |p| {
            for (old, &new) in p.iter().enumerate() {
                inv[new] = old;
            }
            let mut enc = Vec::with_capacity(b * self.dim());
            let mut odd = false;
            let mut zero = false;
            for &old in &inv[m..m + b] {
                let mut t: Tuple = self.tuples[old - m]
                    .iter()
                    .map(|&x| p[x as usize] as u8)
                    .collect();
                match sort_parity(&mut t) {
                    Some(o) => odd ^= o,
                    None => zero = true,
                }
                enc.extend(t.iter().map(|&x| x as u32));
            }
            (enc, if zero { None } else { Some(odd) })
        });
        let d = self.dim();
        let tuples = c
            .encoding
            .chunks(d)
            .map(|w| w.iter().map(|&x| x as u8).collect())
            .collect();
        CanonicalForm {
            graph: MicroGraph {
                dim: self.dim,
                sinks: self.sinks,
                tuples,
            },
            sign: c.sign,
            relabeling: c.perm,
        }
    }
}

impl fmt::Display for MicroGraph {
    /// Bracket notation `[t,…,t;t,…,t]` in the internal layout.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (j, t) in self.tuples.iter().enumerate() {
            if j > 0 {
                f.write_str(";")?;
            }
            for (k, x) in t.iter().enumerate() {
                write!(f, "{}{x}", if k > 0 { "," } else { "" })?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for MicroGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_strict())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roles(sinks: &[usize], lc: &[usize], cas: &[&[usize]]) -> Roles {
        Roles {
            sinks: sinks.to_vec(),
            levi_civita: lc.to_vec(),
            casimirs: cas.iter().map(|c| c.to_vec()).collect(),
        }
    }

    #[test]
    fn bracket_notation_examples() {
        let g1 =
            MicroGraph::parse("[0,1,5;2,5,6]", 3, &roles(&[0, 1, 2], &[3, 4], &[&[5, 6]])).unwrap();
        assert_eq!(g1.graph.sink_count(), 3);
        assert_eq!(g1.graph.vertex_count(), 7);
        let g2 =
            MicroGraph::parse("[0,1,4;3,4,5]", 3, &roles(&[0, 1], &[2, 3], &[&[4, 5]])).unwrap();
        assert_eq!(g2.graph.tadpole_count(), 1);
        let g4 = MicroGraph::parse("[1,2,4;1,2,4]", 3, &roles(&[], &[1, 2], &[&[3, 4]]));
        assert!(matches!(g4, Err(Error::NotNambu(_))));
        let g3 =
            MicroGraph::parse("[0,1,4;2,4,5]", 3, &roles(&[0, 1], &[2, 3], &[&[4, 5]])).unwrap();
        assert_ne!(g3.graph.canonical().sign, 0);
    }

    #[test]
    fn normalization_sign() {
        let r = roles(&[], &[1, 2], &[&[3, 4], &[5, 6]]);
        let h = MicroGraph::parse("[1,2,3,5;3,4,5,6]", 4, &r).unwrap();
        assert_eq!(h.sign, -1);
        assert_eq!(h.graph.vertex_count(), 6);
        let cf = h.graph.canonical();
        assert_ne!(cf.sign, 0);
        let again = cf.graph.canonical();
        assert_eq!((again.graph, again.sign), (cf.graph, 1));
    }

    #[test]
    fn wedge_swap_negates_and_embed_counts() {
        let a = MicroGraph::new(3, 2, vec![Tuple::from_slice(&[0, 1, 3])]).unwrap();
        let b = MicroGraph::new(3, 2, vec![Tuple::from_slice(&[1, 0, 3])]).unwrap();
        assert_eq!(a.canonical().sign, -b.canonical().sign);
        let e = a.embed();
        assert_eq!(e.dim(), 4);
        assert_eq!(e.vertex_count(), a.vertex_count() + a.block_count());
        assert!(e.validate().is_ok());
        assert_eq!(MicroGraph::parse_strict(&e.to_strict()).unwrap(), e);
    }
}
