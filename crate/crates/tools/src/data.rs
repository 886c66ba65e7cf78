//! Bundled cocycles and graph sums, and generated graph families, addressable
//! by name wherever the CLI takes a graph file.

use std::path::Path;

use anyhow::{bail, Result};
use nambu_core::graph::{GraphSum, KGraph, UGraph};
use nambu_core::micro_expand::{enumerate_micrographs, leibniz_expand};
use nambu_core::relations::admissible_one_vector_graphs;
use nambu_core::Q;

use crate::format::GraphFile;

const GAMMA3: &str = include_str!("../data/gamma3.json");
const GAMMA5: &str = include_str!("../data/gamma5.json");
const SUNFLOWER: &str = include_str!("../data/sunflower.json");
const HAM_GAMMA3: &str = include_str!("../data/ham_gamma3.json");
const HAM_GAMMA5: &str = include_str!("../data/ham_gamma5.json");

/// Names accepted in place of a path.
pub const NAMES: &[&str] = &[
    "gamma3",
    "gamma5",
    "sunflower",
    "ham-gamma3",
    "ham-gamma5",
    "hams-d2",
    "hams-d3",
    "hams-d4",
    "admissible",
    "sunflower-d3",
    "sunflower-d4",
    "micro-1-3-d3",
];

fn bundled(text: &str) -> GraphFile {
    serde_json::from_str(text).expect("bundled data parses")
}

pub fn gamma3() -> Result<GraphSum<UGraph>> {
    bundled(GAMMA3).to_list()?.cocycle()
}

pub fn gamma5() -> Result<GraphSum<UGraph>> {
    bundled(GAMMA5).to_list()?.cocycle()
}

pub fn sunflower() -> Result<GraphSum<KGraph>> {
    bundled(SUNFLOWER).to_list()?.kontsevich()
}

pub fn ham_gamma3() -> Result<GraphSum<KGraph>> {
    bundled(HAM_GAMMA3).to_list()?.kontsevich()
}

pub fn ham_gamma5() -> Result<GraphSum<KGraph>> {
    bundled(HAM_GAMMA5).to_list()?.kontsevich()
}

fn family(name: &str) -> Result<Option<GraphFile>> {
    let ones = |n| std::iter::repeat_n(Q::ONE, n);
    Ok(Some(match name {
        "gamma3" => bundled(GAMMA3),
        "gamma5" => bundled(GAMMA5),
        "sunflower" => bundled(SUNFLOWER),
        "ham-gamma3" => bundled(HAM_GAMMA3),
        "ham-gamma5" => bundled(HAM_GAMMA5),
        "hams-d2" | "hams-d3" | "hams-d4" => {
            let d = name[name.len() - 1..].parse().expect("digit");
            let gs = enumerate_micrographs(0, 2, d)?;
            GraphFile::from_nambu(Some(name), gs.iter().zip(ones(gs.len())))
        }
        "micro-1-3-d3" => {
            let gs = enumerate_micrographs(1, 3, 3)?;
            GraphFile::from_nambu(Some(name), gs.iter().zip(ones(gs.len())))
        }
        "admissible" => {
            let gs = admissible_one_vector_graphs()?;
            GraphFile::from_kontsevich(Some(name), gs.iter().zip(ones(gs.len())))
        }
        "sunflower-d3" | "sunflower-d4" => {
            let d = name[name.len() - 1..].parse().expect("digit");
            let e = leibniz_expand(&sunflower()?, d)?;
            GraphFile::from_nambu(Some(name), e.support.iter().zip(ones(e.support.len())))
        }
        _ => return Ok(None),
    }))
}

/// A bundled or generated set by name (`_` and `-` are interchangeable),
/// else the JSON file at that path.
pub fn resolve(name_or_path: &str) -> Result<GraphFile> {
    if let Some(f) = family(&name_or_path.replace('_', "-"))? {
        return Ok(f);
    }
    let p = Path::new(name_or_path);
    if !p.exists() {
        bail!(
            "{name_or_path:?} is neither a bundled name ({}) nor a file",
            NAMES.join(", ")
        );
    }
    GraphFile::read(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nambu_core::graph::cocycle;
    use nambu_core::graph::Canonical;

    #[test]
    fn bundled_cocycles_match_the_constructors() {
        assert_eq!(gamma3().unwrap(), cocycle::gamma3());
        assert_eq!(gamma5().unwrap(), cocycle::gamma5());
    }

    #[test]
    fn bundled_graph_sums() {
        let s = sunflower().unwrap();
        let a = KGraph::parse("(0,1;1,3;1,2)", 1).unwrap().canonical();
        let b = KGraph::parse("(0,2;1,3;1,2)", 1).unwrap().canonical();
        assert_eq!(s.coeff(&a.graph) * Q::int(a.sign as i128), Q::ONE);
        assert_eq!(s.coeff(&b.graph) * Q::int(b.sign as i128), Q::int(2));
        assert_eq!(
            ham_gamma3().unwrap(),
            GraphSum::single(&KGraph::parse_hamiltonian("(1,3;1,2)").unwrap())
        );
        let mut h5 = GraphSum::new();
        h5.add(
            &KGraph::parse_hamiltonian("[3,5;4,5;1,2;1,4]").unwrap(),
            Q::int(6),
        );
        h5.add(
            &KGraph::parse_hamiltonian("[3,5;4,5;1,2;1,5]").unwrap(),
            Q::int(-2),
        );
        h5.add(
            &KGraph::parse_hamiltonian("[5,1;1,4;1,2;1,3]").unwrap(),
            Q::int(-2),
        );
        assert_eq!(ham_gamma5().unwrap(), h5);
    }

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            if n.ends_with("d4") {
                continue;
            }
            assert!(!resolve(n).unwrap().terms.is_empty(), "{n}");
        }
        assert!(resolve("no-such-set").is_err());
        assert_eq!(
            resolve("ham_gamma3").unwrap(),
            resolve("ham-gamma3").unwrap()
        );
    }
}
