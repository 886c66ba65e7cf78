//! Rayon drivers for the embarrassingly parallel parts: evaluating the terms
//! of a graph sum and the columns of a linear system. Results are merged in
//! input order, so output does not depend on the thread count.

use anyhow::Result;
use nambu_core::eval::{evaluate_kontsevich, evaluate_micro_with, KContents, MicroContents};
use nambu_core::flow::{flow_graphs, DIRECT_FLOW_MAX_DIM};
use nambu_core::graph::{GraphSum, KGraph, MicroGraph, UGraph};
use nambu_core::micro_expand::leibniz_expand;
use nambu_core::{Multivector, Q};
use rayon::prelude::*;

/// Builds the global pool once; later calls are ignored.
pub fn init_threads(threads: usize) {
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

/// One accumulator per worker over contiguous chunks, merged in chunk
/// order. The first partial sum absorbs the others, so peak memory stays
/// near one result per worker.
fn chunked<G: Sync + Ord, F>(
    terms: &[(&G, Q)],
    dim: usize,
    arity: usize,
    eval: F,
) -> Result<Multivector>
where
    F: Fn(&G) -> nambu_core::Result<Multivector> + Sync,
{
    let chunk = terms.len().div_ceil(rayon::current_num_threads()).max(1);
    let mut parts = terms
        .par_chunks(chunk)
        .map(|c| -> nambu_core::Result<Multivector> {
            let mut acc = Multivector::zero(dim, arity);
            for (g, q) in c {
                acc.add_scaled_assign(&eval(g)?, *q);
            }
            Ok(acc)
        })
        .collect::<nambu_core::Result<Vec<_>>>()?
        .into_iter();
    let mut out = parts
        .next()
        .unwrap_or_else(|| Multivector::zero(dim, arity));
    for p in parts {
        out.add_scaled_assign(&p, Q::ONE);
    }
    Ok(out)
}

pub fn evaluate_msum(
    s: &GraphSum<MicroGraph>,
    contents: &MicroContents,
    dim: usize,
    arity: usize,
) -> Result<Multivector> {
    let terms: Vec<(&MicroGraph, Q)> = s.iter().map(|(g, c)| (g, *c)).collect();
    chunked(&terms, dim, arity, |g| evaluate_micro_with(g, contents))
}

pub fn evaluate_ksum(
    s: &GraphSum<KGraph>,
    contents: &KContents,
    arity: usize,
) -> Result<Multivector> {
    let terms: Vec<(&KGraph, Q)> = s.iter().map(|(g, c)| (g, *c)).collect();
    chunked(&terms, contents.dim, arity, |g| {
        evaluate_kontsevich(g, contents)
    })
}

/// `Q^γ_d`, evaluated like [`nambu_core::flow::gamma_flow`] but in parallel.
pub fn gamma_flow(g: &GraphSum<UGraph>, dim: usize) -> Result<Multivector> {
    let s = flow_graphs(g)?;
    if dim <= DIRECT_FLOW_MAX_DIM {
        return evaluate_ksum(&s, &KContents::nambu(dim, 0)?, 2);
    }
    let e = leibniz_expand(&s, dim)?;
    evaluate_msum(&e.sum, &MicroContents::generic(dim), dim, 2)
}

/// Evaluates every item, preserving order.
pub fn map_ordered<T: Sync, U: Send>(
    items: &[T],
    f: impl Fn(&T) -> Result<U> + Sync + Send,
) -> Result<Vec<U>> {
    items.par_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nambu_core::graph::cocycle::gamma3;

    #[test]
    fn matches_the_sequential_flow() {
        for d in [2, 3] {
            assert_eq!(
                gamma_flow(&gamma3(), d).unwrap(),
                nambu_core::flow::gamma_flow(&gamma3(), d).unwrap()
            );
        }
    }
}
