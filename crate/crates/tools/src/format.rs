//! JSON file formats for graph sums, multivectors and differential
//! polynomials. Rationals are written as `"p/q"` in lowest terms.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use nambu_core::graph::{GraphSum, KGraph, MicroGraph, Roles, UGraph};
use nambu_core::multivector::IndexSet;
use nambu_core::{DiffPoly, Jet, Monomial, Multivector, Symbol, MAX_DIM, Q};
use num_q::{parse_q, write_q};
use serde::{Deserialize, Serialize};

pub mod num_q {
    use super::*;

    /// Always `p/q`, also for integers.
    pub fn write_q(q: &Q) -> String {
        format!("{}/{}", q.numer(), q.denom())
    }

    pub fn parse_q(s: &str) -> Result<Q> {
        s.parse::<Q>().map_err(|_| anyhow!("bad rational {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Species {
    Cocycle,
    Kontsevich,
    Nambu,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RolesJson {
    pub sinks: Vec<usize>,
    pub levi_civita: Vec<usize>,
    pub casimirs: Vec<Vec<usize>>,
}

/// One term of a graph file.
///
/// `cocycle`: `vertices` and one `[a, b]` group per edge in wedge order.
/// `kontsevich`: `sinks`, `terminals`, one `[L, R]` group per wedge; wedges
/// are numbered after sinks and terminals. `nambu`: `d`, `sinks`, one
/// `d`-tuple per Levi-Civita vertex, in the internal layout unless `roles`
/// gives the labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub species: Species,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(default)]
    pub sinks: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub terminals: usize,
    pub groups: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub roles: Option<RolesJson>,
    pub coefficient: String,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub terms: Vec<TermJson>,
}

/// A list of graphs of one species, in file order, with coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphList {
    Cocycle(Vec<(Q, UGraph)>),
    Kontsevich(Vec<(Q, KGraph)>),
    Nambu(Vec<(Q, MicroGraph)>),
}

impl GraphList {
    pub fn species(&self) -> Species {
        match self {
            GraphList::Cocycle(_) => Species::Cocycle,
            GraphList::Kontsevich(_) => Species::Kontsevich,
            GraphList::Nambu(_) => Species::Nambu,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            GraphList::Cocycle(v) => v.len(),
            GraphList::Kontsevich(v) => v.len(),
            GraphList::Nambu(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cocycle(&self) -> Result<GraphSum<UGraph>> {
        match self {
            GraphList::Cocycle(v) => Ok(GraphSum::from_terms(v.iter().map(|(c, g)| (*c, g)))),
            other => bail!(
                "expected a cocycle file, found {:?} graphs",
                other.species()
            ),
        }
    }

    pub fn kontsevich(&self) -> Result<GraphSum<KGraph>> {
        match self {
            GraphList::Kontsevich(v) => Ok(GraphSum::from_terms(v.iter().map(|(c, g)| (*c, g)))),
            other => bail!(
                "expected Kontsevich graphs, found {:?} graphs",
                other.species()
            ),
        }
    }

    pub fn nambu(&self) -> Result<GraphSum<MicroGraph>> {
        match self {
            GraphList::Nambu(v) => Ok(GraphSum::from_terms(v.iter().map(|(c, g)| (*c, g)))),
            other => bail!("expected micro-graphs, found {:?} graphs", other.species()),
        }
    }
}

fn term_to_graph(t: &TermJson) -> Result<(Q, Graph)> {
    let c = parse_q(&t.coefficient)?;
    let pairs = || -> Result<Vec<(usize, usize)>> {
        t.groups
            .iter()
            .map(|g| match g.as_slice() {
                [a, b] => Ok((*a, *b)),
                _ => bail!("group {g:?} is not a pair"),
            })
            .collect()
    };
    Ok(match t.species {
        Species::Cocycle => {
            let n = t.vertices.context("cocycle term needs `vertices`")?;
            (c, Graph::U(UGraph::new(n, &pairs()?)?))
        }
        Species::Kontsevich => (c, Graph::K(KGraph::new(t.sinks, t.terminals, &pairs()?)?)),
        Species::Nambu => {
            let d = t.d.context("nambu term needs `d`")?;
            match &t.roles {
                Some(r) => {
                    let roles = Roles {
                        sinks: r.sinks.clone(),
                        levi_civita: r.levi_civita.clone(),
                        casimirs: r.casimirs.clone(),
                    };
                    let p = MicroGraph::parse(&groups_text(&t.groups), d, &roles)?;
                    (c * Q::int(p.sign as i128), Graph::M(p.graph))
                }
                None => {
                    let tuples = t
                        .groups
                        .iter()
                        .map(|g| {
                            g.iter()
                                .map(|&x| u8::try_from(x).unwrap_or(u8::MAX))
                                .collect()
                        })
                        .collect();
                    (c, Graph::M(MicroGraph::new(d, t.sinks, tuples)?))
                }
            }
        }
    })
}

enum Graph {
    U(UGraph),
    K(KGraph),
    M(MicroGraph),
}

fn groups_text(groups: &[Vec<usize>]) -> String {
    let inner: Vec<String> = groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("[{}]", inner.join(";"))
}

impl GraphFile {
    pub fn to_list(&self) -> Result<GraphList> {
        let species = self
            .terms
            .first()
            .map_or(Species::Kontsevich, |t| t.species);
        let mut u = Vec::new();
        let mut k = Vec::new();
        let mut m = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            if t.species != species {
                bail!("term {i} mixes species");
            }
            match term_to_graph(t).with_context(|| format!("term {i}"))? {
                (c, Graph::U(g)) => u.push((c, g)),
                (c, Graph::K(g)) => k.push((c, g)),
                (c, Graph::M(g)) => m.push((c, g)),
            }
        }
        Ok(match species {
            Species::Cocycle => GraphList::Cocycle(u),
            Species::Kontsevich => GraphList::Kontsevich(k),
            Species::Nambu => GraphList::Nambu(m),
        })
    }

    pub fn from_cocycle(name: Option<&str>, s: &GraphSum<UGraph>) -> GraphFile {
        let terms = s
            .iter()
            .map(|(g, c)| TermJson {
                species: Species::Cocycle,
                d: None,
                vertices: Some(g.vertex_count()),
                sinks: 0,
                terminals: 0,
                groups: g.edges().map(|(a, b)| vec![a, b]).collect(),
                roles: None,
                coefficient: write_q(c),
            })
            .collect();
        GraphFile {
            name: name.map(Into::into),
            terms,
        }
    }

    pub fn from_kontsevich<'a>(
        name: Option<&str>,
        terms: impl IntoIterator<Item = (&'a KGraph, Q)>,
    ) -> GraphFile {
        let terms = terms
            .into_iter()
            .map(|(g, c)| TermJson {
                species: Species::Kontsevich,
                d: None,
                vertices: None,
                sinks: g.sink_count(),
                terminals: g.terminal_count(),
                groups: (0..g.wedge_count())
                    .map(|k| {
                        let (l, r) = g.targets(k);
                        vec![l, r]
                    })
                    .collect(),
                roles: None,
                coefficient: write_q(&c),
            })
            .collect();
        GraphFile {
            name: name.map(Into::into),
            terms,
        }
    }

    pub fn from_nambu<'a>(
        name: Option<&str>,
        terms: impl IntoIterator<Item = (&'a MicroGraph, Q)>,
    ) -> GraphFile {
        let terms = terms
            .into_iter()
            .map(|(g, c)| TermJson {
                species: Species::Nambu,
                d: Some(g.dim()),
                vertices: None,
                sinks: g.sink_count(),
                terminals: 0,
                groups: g
                    .tuples()
                    .iter()
                    .map(|t| t.iter().map(|&x| x as usize).collect())
                    .collect(),
                roles: None,
                coefficient: write_q(&c),
            })
            .collect();
        GraphFile {
            name: name.map(Into::into),
            terms,
        }
    }

    pub fn read(path: &Path) -> Result<GraphFile> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetJson {
    pub symbol: String,
    pub alpha: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermPolyJson {
    pub monomial: Vec<JetJson>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub indices: Vec<u8>,
    pub terms: Vec<TermPolyJson>,
}

/// Multivector with zero-based coordinate indices; monomials list their
/// jets in the canonical order, `alpha` has one entry per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultivectorJson {
    pub arity: usize,
    pub d: usize,
    pub coefficients: Vec<EntryJson>,
}

pub fn poly_to_json(p: &DiffPoly, d: usize) -> Vec<TermPolyJson> {
    p.sorted_terms()
        .into_iter()
        .map(|(m, c)| TermPolyJson {
            monomial: m
                .jets()
                .iter()
                .map(|j| JetJson {
                    symbol: j.symbol().name(),
                    alpha: j.alpha()[..d].to_vec(),
                })
                .collect(),
            coeff: write_q(&c),
        })
        .collect()
}

pub fn poly_from_json(terms: &[TermPolyJson]) -> Result<DiffPoly> {
    let mut out = DiffPoly::zero();
    for t in terms {
        let mut m = Monomial::one();
        for j in &t.monomial {
            let s =
                Symbol::parse(&j.symbol).ok_or_else(|| anyhow!("unknown symbol {:?}", j.symbol))?;
            if j.alpha.len() > MAX_DIM {
                bail!("multi-index longer than {MAX_DIM}");
            }
            let mut alpha = [0u8; MAX_DIM];
            alpha[..j.alpha.len()].copy_from_slice(&j.alpha);
            m = m.mul(&Monomial::jet(Jet::new(s, alpha)));
        }
        out.add_term(m, parse_q(&t.coeff)?);
    }
    Ok(out)
}

impl MultivectorJson {
    pub fn from_multivector(m: &Multivector) -> MultivectorJson {
        MultivectorJson {
            arity: m.arity(),
            d: m.dim(),
            coefficients: m
                .coeffs()
                .map(|(i, p)| EntryJson {
                    indices: i.to_vec(),
                    terms: poly_to_json(p, m.dim()),
                })
                .collect(),
        }
    }

    pub fn to_multivector(&self) -> Result<Multivector> {
        let mut m = Multivector::zero(self.d, self.arity);
        for e in &self.coefficients {
            if e.indices.len() != self.arity || e.indices.iter().any(|&i| i as usize >= self.d) {
                bail!("bad index tuple {:?}", e.indices);
            }
            let idx: IndexSet = e.indices.iter().copied().collect();
            m.add_component(&idx, &poly_from_json(&e.terms)?);
        }
        Ok(m)
    }
}

/// Coefficient vector as `"p/q"` strings.
pub fn rats_to_json(v: &[nambu_core::linalg::Rat]) -> Vec<String> {
    v.iter()
        .map(|r| format!("{}/{}", r.numer(), r.denom()))
        .collect()
}

/// Counts by key, for summaries.
pub type Counts = BTreeMap<String, usize>;

#[cfg(test)]
mod tests {
    use super::*;
    use nambu_core::graph::cocycle::gamma5;
    use nambu_core::multivector::nambu_bivector;

    #[test]
    fn rationals_are_written_in_lowest_terms() {
        assert_eq!(write_q(&Q::new(4, -6)), "-2/3");
        assert_eq!(write_q(&Q::int(2)), "2/1");
        assert_eq!(parse_q("6/4").unwrap(), Q::new(3, 2));
        assert_eq!(parse_q("-5").unwrap(), Q::int(-5));
        assert!(parse_q("1/0").is_err());
    }

    #[test]
    fn graph_files_round_trip() {
        let f = GraphFile::from_cocycle(Some("gamma5"), &gamma5());
        let text = serde_json::to_string_pretty(&f).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_list().unwrap().cocycle().unwrap(), gamma5());
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);

        let k = KGraph::parse("(0,1;1,3;1,2)", 1).unwrap();
        let f = GraphFile::from_kontsevich(None, [(&k, Q::new(1, 2))]);
        let l = f.to_list().unwrap();
        assert_eq!(l, GraphList::Kontsevich(vec![(Q::new(1, 2), k)]));
    }

    #[test]
    fn micro_graphs_read_with_roles() {
        let text = r#"{"terms":[{"species":"nambu","d":3,"groups":[[0,1,5],[2,5,6]],
            "roles":{"sinks":[0,1,2],"levi_civita":[3,4],"casimirs":[[5,6]]},"coefficient":"1"}]}"#;
        let f: GraphFile = serde_json::from_str(text).unwrap();
        let GraphList::Nambu(v) = f.to_list().unwrap() else {
            panic!()
        };
        assert_eq!(v[0].1.sink_count(), 3);
        let again = GraphFile::from_nambu(None, v.iter().map(|(c, g)| (g, *c)))
            .to_list()
            .unwrap();
        assert_eq!(again, GraphList::Nambu(v));
        let bad = text.replace("[2,5,6]", "[2,5]");
        assert!(serde_json::from_str::<GraphFile>(&bad)
            .unwrap()
            .to_list()
            .is_err());
    }

    #[test]
    fn multivectors_round_trip() {
        let p = nambu_bivector(4).unwrap();
        let j = MultivectorJson::from_multivector(&p);
        let text = serde_json::to_string(&j).unwrap();
        let back: MultivectorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_multivector().unwrap(), p);
    }
}
