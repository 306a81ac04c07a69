use super::{is_congruence, FiniteAlgebra, Partition, ProductView};
use crate::error::{Error, Result};

/// Decides C(α, β; 0) by the matrix method. A matrix [[x, y], [z, w]] is the
/// tuple (x, y, z, w) of A⁴; the condition fails iff some generated matrix has
/// x = y and z ≠ w.
pub fn centralizer_condition(alg: &FiniteAlgebra, alpha: &Partition, beta: &Partition) -> Result<bool> {
    for (name, p) in [("alpha", alpha), ("beta", beta)] {
        if !is_congruence(alg, p) {
            return Err(Error::NotACongruence(format!("{name} = {p} on {}", alg.name)));
        }
    }
    let n = alg.size;
    let mut gens = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if alpha.same(a, b) {
                gens.push(vec![a, a, b, b]);
            }
            if beta.same(a, b) {
                gens.push(vec![a, b, a, b]);
            }
        }
    }
    let view = ProductView::power(alg, 4);
    let closed = view.sg_until(gens, usize::MAX, |m| m[0] == m[1] && m[2] != m[3]);
    Ok(!closed.stopped)
}
