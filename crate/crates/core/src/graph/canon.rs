//! Signed canonical labeling by brute force over colour-preserving
//! permutations, after colour refinement.
//!
//! The graphs handled here have at most a dozen or so vertices, and colour
//! refinement splits almost all of them into tiny cells, so enumerating the
//! product of cell permutations is cheap and leaves the sign bookkeeping in
//! plain sight.

use alloc::vec;
use alloc::vec::Vec;

/// Input to the canonicalizer: initial colours (which must already encode
/// roles in their relative order) and adjacency used for refinement.
pub struct ColoredGraph {
    pub colors: Vec<u32>,
    /// Out-neighbours (for undirected graphs, all neighbours).
    pub out_adj: Vec<Vec<usize>>,
    /// In-neighbours (empty lists for undirected graphs).
    pub in_adj: Vec<Vec<usize>>,
}

/// Result of a canonical search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canon {
    pub encoding: Vec<u32>,
    /// `+1`/`-1`, or `0` when an automorphism reverses the orientation.
    pub sign: i8,
    /// `perm[old] = new`.
    pub perm: Vec<usize>,
}

/// Stable colour refinement; returns colours renumbered `0..k` in an
/// isomorphism-invariant order that extends the initial order.
pub fn refine(g: &ColoredGraph) -> Vec<u32> {
    let n = g.colors.len();
    let mut colors = rank(&g.colors.iter().map(|&c| vec![c]).collect::<Vec<_>>());
    loop {
        let sigs: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut outs: Vec<u32> = g.out_adj[v].iter().map(|&w| colors[w]).collect();
                let mut ins: Vec<u32> = g.in_adj[v].iter().map(|&w| colors[w]).collect();
                outs.sort_unstable();
                ins.sort_unstable();
                let mut s = vec![colors[v], outs.len() as u32];
                s.extend(outs);
                s.push(u32::MAX);
                s.extend(ins);
                s
            })
            .collect();
        let next = rank(&sigs);
        let before = count_distinct(&colors);
        let after = count_distinct(&next);
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<u32> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn count_distinct(c: &[u32]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Minimizes `encode(perm)` over all permutations that map each refined
/// colour cell onto its label block. `encode` returns the encoding and the
/// parity of the relabeling, or `None` as parity for a graph that is zero on
/// its face (e.g. a repeated arrow).
pub fn canonicalize<F>(g: &ColoredGraph, mut encode: F) -> Canon
where
    F: FnMut(&[usize]) -> (Vec<u32>, Option<bool>),
{
    let colors = refine(g);
    let n = colors.len();
    let ncolors = count_distinct(&colors);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); ncolors];
    for v in 0..n {
        cells[colors[v] as usize].push(v);
    }
    let mut offsets = Vec::with_capacity(ncolors);
    let mut acc = 0;
    for c in &cells {
        offsets.push(acc);
        acc += c.len();
    }

    let mut perm = vec![usize::MAX; n];
    let mut best: Option<(Vec<u32>, bool, Vec<usize>)> = None;
    let mut zero = false;
    let mut face_zero = false;
    search(&cells, &offsets, 0, &mut perm, &mut |p| {
        let (enc, parity) = encode(p);
        let neg = match parity {
            Some(neg) => neg,
            None => {
                face_zero = true;
                false
            }
        };
        match &best {
            Some((b, bneg, _)) if enc == *b => {
                if *bneg != neg {
                    zero = true;
                }
            }
            Some((b, _, _)) if enc > *b => {}
            _ => {
                best = Some((enc, neg, p.to_vec()));
                zero = false;
            }
        }
        true
    });
    let (encoding, neg, perm) = best.expect("at least one labeling");
    let sign = if zero || face_zero {
        0
    } else if neg {
        -1
    } else {
        1
    };
    Canon {
        encoding,
        sign,
        perm,
    }
}

fn search(
    cells: &[Vec<usize>],
    offsets: &[usize],
    cell: usize,
    perm: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if cell == cells.len() {
        return visit(perm);
    }
    let members = &cells[cell];
    let base = offsets[cell];
    let k = members.len();
    let mut labels: Vec<usize> = (0..k).collect();
    // Heap's algorithm over the labels assigned to this cell.
    let mut c = vec![0usize; k];
    for (i, &v) in members.iter().enumerate() {
        perm[v] = base + labels[i];
    }
    if !search(cells, offsets, cell + 1, perm, visit) {
        return false;
    }
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                labels.swap(0, i);
            } else {
                labels.swap(c[i], i);
            }
            for (j, &v) in members.iter().enumerate() {
                perm[v] = base + labels[j];
            }
            if !search(cells, offsets, cell + 1, perm, visit) {
                return false;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    true
}

/// Sorts `v` in place and reports whether the sorting permutation was odd;
/// `None` if two entries coincide.
pub fn sort_parity<T: Ord>(v: &mut [T]) -> Option<bool> {
    let mut odd = false;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            odd = !odd;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(odd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_of_sorting() {
        let mut v = [3, 1, 2];
        assert_eq!(sort_parity(&mut v), Some(false));
        let mut v = [2, 1, 3];
        assert_eq!(sort_parity(&mut v), Some(true));
        let mut v = [2, 2];
        assert_eq!(sort_parity(&mut v), None);
    }

    #[test]
    fn heap_enumerates_all_permutations() {
        let g = ColoredGraph {
            colors: vec![0; 4],
            out_adj: vec![Vec::new(); 4],
            in_adj: vec![Vec::new(); 4],
        };
        let mut seen = Vec::new();
        canonicalize(&g, |p| {
            seen.push(p.to_vec());
            (p.iter().map(|&x| x as u32).collect(), Some(false))
        });
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
    }
}
