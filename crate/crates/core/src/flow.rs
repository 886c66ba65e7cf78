//! Evaluated graph sums: the flows `Q^γ_d`, their 2D trivialising vector
//! fields, and the evaluation of micro-graph sums.

use crate::coeff::Q;
use crate::error::{Error, Result};
use crate::eval::{evaluate_kontsevich, evaluate_micro_with, KContents, MicroContents};
use crate::graph::cocycle::{grading, is_cocycle};
use crate::graph::{GraphSum, KGraph, MicroGraph, UGraph};
use crate::micro_expand::leibniz_expand;
use crate::multivector::Multivector;
use crate::orient::orient;

/// Constant `c` making `c · Or(γ)` a primitive integer combination whose
/// first term (in canonical order) is positive. For the tetrahedron this
/// is `1/8`, turning the multiplicities `8 : 24` into `1 : 3`.
pub fn flow_normalization(or: &GraphSum<KGraph>) -> Q {
    let den = or
        .iter()
        .fold(1i128, |l, (_, c)| l / gcd(l, c.denom()) * c.denom());
    let num = or
        .iter()
        .fold(0i128, |g, (_, c)| gcd(g, (*c * Q::int(den)).numer()));
    if num == 0 {
        return Q::ONE;
    }
    let first = or.iter().next().map_or(Q::ONE, |(_, c)| *c);
    let c = Q::new(den, num);
    if first.numer() < 0 {
        -c
    } else {
        c
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `φ(Σ c_i Γ_i)` for Kontsevich graphs with a common signature.
pub fn evaluate_ksum(
    s: &GraphSum<KGraph>,
    contents: &KContents,
    arity: usize,
) -> Result<Multivector> {
    let mut out = Multivector::zero(contents.dim, arity);
    for (g, c) in s.iter() {
        let v = evaluate_kontsevich(g, contents)?;
        if v.arity() != arity {
            return Err(Error::Invalid("graph arity differs from the sum".into()));
        }
        out.add_scaled_assign(&v, *c);
    }
    Ok(out)
}

/// `φ(Σ c_i Γ_i)` for Nambu micro-graphs over one dimension.
pub fn evaluate_msum(
    s: &GraphSum<MicroGraph>,
    contents: &MicroContents,
    dim: usize,
    arity: usize,
) -> Result<Multivector> {
    let mut out = Multivector::zero(dim, arity);
    for (g, c) in s.iter() {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.dim(),
            });
        }
        out.add_scaled_assign(&evaluate_micro_with(g, contents)?, *c);
    }
    Ok(out)
}

/// The bi-vector sum `c · Or(γ)` over two sinks, normalized by
/// [`flow_normalization`].
pub fn flow_graphs(g: &GraphSum<UGraph>) -> Result<GraphSum<KGraph>> {
    if let Err(witness) = is_cocycle(g) {
        return Err(Error::NotCocycle(witness.len()));
    }
    if grading(g).is_none() {
        return Err(Error::Invalid("cocycle is not homogeneous".into()));
    }
    let or = orient(g, 2)?.sum;
    Ok(or.scale(flow_normalization(&or)))
}

/// Largest dimension at which flows are contracted with the bi-vector in
/// every wedge; above it the sum is expanded into micro-graphs first, which
/// keeps the intermediate tables small.
pub const DIRECT_FLOW_MAX_DIM: usize = 3;

/// `Q^γ_d`: the flow evaluated with the generic 2D density (`d = 2`) or the
/// Nambu bracket (`d ≥ 3`) in every wedge.
pub fn gamma_flow(g: &GraphSum<UGraph>, dim: usize) -> Result<Multivector> {
    let s = flow_graphs(g)?;
    if dim <= DIRECT_FLOW_MAX_DIM {
        return evaluate_ksum(&s, &KContents::nambu(dim, 0)?, 2);
    }
    let e = leibniz_expand(&s, dim)?;
    evaluate_msum(&e.sum, &MicroContents::generic(dim), dim, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cocycle::gamma3;

    #[test]
    fn tetrahedron_normalization() {
        let or = orient(&gamma3(), 2).unwrap().sum;
        assert_eq!(flow_normalization(&or).abs(), Q::new(1, 8));
    }

    #[test]
    fn direct_and_micro_routes_agree() {
        let s = flow_graphs(&gamma3()).unwrap();
        let e = leibniz_expand(&s, 3).unwrap();
        let micro = evaluate_msum(&e.sum, &MicroContents::generic(3), 3, 2).unwrap();
        assert_eq!(micro, gamma_flow(&gamma3(), 3).unwrap());
        assert!(!micro.is_zero());
    }
}
