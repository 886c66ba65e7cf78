//! Kontsevich digraphs built of wedges over sinks, optionally with terminal
//! vertices (aerial vertices without outgoing arrows, as in Hamiltonians).
//!
//! Labels: sinks `0..m`, terminals `m..m+t`, wedges after that.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::canon::{canonicalize, sort_parity, ColoredGraph};
use super::{Canonical, CanonicalForm};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KGraph {
    sinks: u8,
    terminals: u8,
    targets: Vec<[u8; 2]>,
}

impl KGraph {
    pub fn new(sinks: usize, terminals: usize, targets: &[(usize, usize)]) -> Result<KGraph> {
        let total = sinks + terminals + targets.len();
        if total > 255 {
            return Err(Error::Invalid("too many vertices".into()));
        }
        for &(l, r) in targets {
            for t in [l, r] {
                if t >= total {
                    return Err(Error::TargetOutOfRange {
                        target: t,
                        vertices: total,
                    });
                }
            }
        }
        Ok(KGraph {
            sinks: sinks as u8,
            terminals: terminals as u8,
            targets: targets.iter().map(|&(l, r)| [l as u8, r as u8]).collect(),
        })
    }

    /// The single wedge over two sinks, i.e. `P` itself.
    pub fn wedge() -> KGraph {
        KGraph {
            sinks: 2,
            terminals: 0,
            targets: vec![[0, 1]],
        }
    }

    pub fn sink_count(&self) -> usize {
        self.sinks as usize
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals as usize
    }

    pub fn wedge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.first_wedge() + self.targets.len()
    }

    pub fn first_wedge(&self) -> usize {
        (self.sinks + self.terminals) as usize
    }

    /// `(Left, Right)` targets of the `k`-th wedge.
    pub fn targets(&self, k: usize) -> (usize, usize) {
        let [l, r] = self.targets[k];
        (l as usize, r as usize)
    }

    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w0 = self.first_wedge();
        self.targets
            .iter()
            .enumerate()
            .flat_map(move |(k, t)| [(w0 + k, t[0] as usize), (w0 + k, t[1] as usize)])
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows().filter(|&(_, t)| t == v).count()
    }

    /// Number of wedges with an arrow to themselves.
    pub fn tadpole_count(&self) -> usize {
        let w0 = self.first_wedge();
        self.targets
            .iter()
            .enumerate()
            .filter(|(k, t)| t.contains(&((w0 + k) as u8)))
            .count()
    }

    /// Weak connectivity.
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.arrows() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let r = find(&mut parent, 0);
        (0..n).all(|v| find(&mut parent, v) == r)
    }

    /// Whether every wedge has a directed path to some sink.
    pub fn wedges_reach_sinks(&self) -> bool {
        let n = self.vertex_count();
        let mut reach: Vec<bool> = (0..n).map(|v| v < self.sink_count()).collect();
        loop {
            let mut changed = false;
            for (a, b) in self.arrows() {
                if reach[b] && !reach[a] {
                    reach[a] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (self.first_wedge()..n).all(|v| reach[v])
    }

    /// Exchanges sinks `0` and `1`.
    pub fn swap_sinks(&self) -> KGraph {
        assert!(self.sinks >= 2);
        let sw = |t: u8| match t {
            0 => 1,
            1 => 0,
            x => x,
        };
        KGraph {
            sinks: self.sinks,
            terminals: self.terminals,
            targets: self.targets.iter().map(|t| [sw(t[0]), sw(t[1])]).collect(),
        }
    }

    /// Turns the `k`-th terminal into a wedge placed first among the wedges,
    /// with the given targets in the new labeling. Only valid with no sinks:
    /// a new sink `0` is created and all old labels shift by one.
    pub(crate) fn issue_wedge_from_terminal(&self, right: usize) -> KGraph {
        assert_eq!(self.sinks, 0);
        assert_eq!(self.terminals, 1);
        let mut targets = Vec::with_capacity(self.targets.len() + 1);
        targets.push([0, (right + 1) as u8]);
        for t in &self.targets {
            targets.push([t[0] + 1, t[1] + 1]);
        }
        KGraph {
            sinks: 1,
            terminals: 0,
            targets,
        }
    }

    /// Lenient reader for the inline form `(0,1;1,3;1,2)`: one group of
    /// `Left,Right` per wedge, wedges numbered from `sinks` on.
    pub fn parse(text: &str, sinks: usize) -> Result<KGraph> {
        let groups = parse_groups(text)?;
        let pairs = pairs_of(&groups)?;
        KGraph::new(sinks, 0, &pairs)
    }

    /// Reader for Hamiltonian encodings `[3,5; 4,5; 1,2; 1,2]`: the terminal
    /// vertex is `1`, wedges are `2, 3, …`, no sinks.
    pub fn parse_hamiltonian(text: &str) -> Result<KGraph> {
        let groups = parse_groups(text)?;
        let pairs = pairs_of(&groups)?;
        let total = pairs.len() + 1;
        let mut shifted = Vec::with_capacity(pairs.len());
        for (l, r) in pairs {
            for t in [l, r] {
                if t == 0 || t > total {
                    return Err(Error::TargetOutOfRange {
                        target: t,
                        vertices: total + 1,
                    });
                }
            }
            shifted.push((l - 1, r - 1));
        }
        KGraph::new(0, 1, &shifted)
    }

    /// Strict reader: `m n ; L,R ; …` or `kontsevich m t ; L,R ; …`.
    pub fn parse_strict(text: &str) -> Result<KGraph> {
        let mut parts = text.split(';');
        let head: Vec<&str> = parts.next().unwrap_or("").split_whitespace().collect();
        let nums = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse(alloc::format!("bad number {s:?}")))
        };
        let rest: Vec<&str> = parts.collect();
        let pairs = pairs_of(
            &rest
                .iter()
                .map(|g| parse_list(g))
                .collect::<Result<Vec<_>>>()?,
        )?;
        match head.as_slice() {
            ["kontsevich", m, t] => KGraph::new(nums(m)?, nums(t)?, &pairs),
            [m, n] => {
                let n = nums(n)?;
                if n != pairs.len() {
                    return Err(Error::Parse(alloc::format!(
                        "header says {n} wedges, found {}",
                        pairs.len()
                    )));
                }
                KGraph::new(nums(m)?, 0, &pairs)
            }
            _ => Err(Error::Parse(
                "expected header `m n` or `kontsevich m t`".into(),
            )),
        }
    }

    /// Strict serialization, `kontsevich m t ; L,R ; …`.
    pub fn to_strict(&self) -> String {
        let mut s = alloc::format!("kontsevich {} {}", self.sinks, self.terminals);
        for t in &self.targets {
            s.push_str(&alloc::format!(" ; {},{}", t[0], t[1]));
        }
        s
    }
}

pub(crate) fn parse_list(g: &str) -> Result<Vec<usize>> {
    g.split(',')
        .map(|x| {
            let x = x.trim();
            x.parse::<usize>()
                .map_err(|_| Error::Parse(alloc::format!("bad vertex label {x:?}")))
        })
        .collect()
}

/// Splits `(a,b;c,d)` or `[a,b;c,d]` into groups.
pub(crate) fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>> {
    let t = text.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .or_else(|| t.strip_prefix('[').and_then(|s| s.strip_suffix(']')))
        .unwrap_or(t);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(';').map(parse_list).collect()
}

fn pairs_of(groups: &[Vec<usize>]) -> Result<Vec<(usize, usize)>> {
    groups
        .iter()
        .enumerate()
        .map(|(k, g)| match g.as_slice() {
            [l, r] => Ok((*l, *r)),
            _ => Err(Error::OutDegree {
                vertex: k,
                expected: 2,
                found: g.len(),
            }),
        })
        .collect()
}

impl Canonical for KGraph {
    fn canonical(&self) -> CanonicalForm<KGraph> {
        let n = self.vertex_count();
        let m = self.sink_count();
        let w0 = self.first_wedge();
        let mut colors: Vec<u32> = (0..n as u32).map(|v| v.min(m as u32)).collect();
        for c in colors.iter_mut().skip(w0) {
            *c = m as u32 + 1;
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        for (a, b) in self.arrows() {
            out_adj[a].push(b);
            in_adj[b].push(a);
        }
        let cg = ColoredGraph {
            colors,
            out_adj,
            in_adj,
        };
        let mut inv = vec![0usize; n];
        let c = canonicalize(&cg, |p| {
            for (old, &new) in p.iter().enumerate() {
                inv[new] = old;
            }
            let mut enc = Vec::with_capacity(2 * self.targets.len());
            let mut odd = false;
            let mut zero = false;
            for &old in &inv[w0..] {
                let t = self.targets[old - w0];
                let mut pair = [p[t[0] as usize] as u32, p[t[1] as usize] as u32];
                match sort_parity(&mut pair) {
                    Some(o) => odd ^= o,
                    None => zero = true,
                }
                enc.extend_from_slice(&pair);
            }
            (enc, if zero { None } else { Some(odd) })
        });
        let targets = c
            .encoding
            .chunks(2)
            .map(|w| [w[0] as u8, w[1] as u8])
            .collect();
        CanonicalForm {
            graph: KGraph {
                sinks: self.sinks,
                terminals: self.terminals,
                targets,
            },
            sign: c.sign,
            relabeling: c.perm,
        }
    }
}

impl fmt::Display for KGraph {
    /// Inline form `(L,R;L,R;…)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, t) in self.targets.iter().enumerate() {
            write!(f, "{}{},{}", if k > 0 { ";" } else { "" }, t[0], t[1])?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for KGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_strict())
    }
}
