//! Built-in algebras. Each family uses its own operation symbol so algebras of
//! different families never share a signature.

use crate::algebra::{FiniteAlgebra, OperationTable};

fn build(name: &str, size: usize, op: OperationTable) -> FiniteAlgebra {
    FiniteAlgebra::new(name, size, vec![op]).expect("catalog tables are valid")
}

/// Two-element meet semilattice; 0 is absorbing.
pub fn semilattice() -> FiniteAlgebra {
    build(
        "semilattice",
        2,
        OperationTable::from_fn("meet", 2, 2, |t| t[0].min(t[1])),
    )
}

/// Z₂ with the minority operation x+y+z.
pub fn z2_minority() -> FiniteAlgebra {
    build(
        "z2",
        2,
        OperationTable::from_fn("m", 3, 2, |t| (t[0] + t[1] + t[2]) % 2),
    )
}

/// Two-element majority algebra.
pub fn majority() -> FiniteAlgebra {
    build(
        "majority",
        2,
        OperationTable::from_fn("maj", 3, 2, |t| usize::from(t[0] + t[1] + t[2] >= 2)),
    )
}

/// The four-element algebra with a ternary cyclic operation `f`:
/// 0 whenever an argument is 0 or the arguments are {1,2,3}, and the
/// minority operation on every two-element subset of {1,2,3}.
pub fn a1() -> FiniteAlgebra {
    build("A1", 4, OperationTable::from_fn("f", 3, 4, a1_f))
}

fn a1_f(t: &[usize]) -> usize {
    let (x, y, z) = (t[0], t[1], t[2]);
    if x == 0 || y == 0 || z == 0 {
        0
    } else if x == y {
        z
    } else if y == z {
        x
    } else if x == z {
        y
    } else {
        0
    }
}

/// Z₃ with the Mal'cev operation x−y+z.
pub fn z3_affine() -> FiniteAlgebra {
    build(
        "z3",
        3,
        OperationTable::from_fn("d", 3, 3, |t| (t[0] + 2 * t[1] + t[2]) % 3),
    )
}

/// Z₂ × semilattice with the ternary operation (x+y+z, x∧y∧z).
/// Element (z, s) is numbered 2z + s.
pub fn z2_times_semilattice() -> FiniteAlgebra {
    build(
        "z2xsl",
        4,
        OperationTable::from_fn("g", 3, 4, |t| {
            let z = (t[0] / 2 + t[1] / 2 + t[2] / 2) % 2;
            let s = (t[0] % 2).min(t[1] % 2).min(t[2] % 2);
            2 * z + s
        }),
    )
}

/// Two-element algebra whose only operation is the first projection.
pub fn projections() -> FiniteAlgebra {
    build("proj", 2, OperationTable::from_fn("p", 2, 2, |t| t[0]))
}

/// One-element algebra with a single operation of the given symbol.
pub fn trivial(symbol: &str, arity: usize) -> FiniteAlgebra {
    build("trivial", 1, OperationTable::new(symbol, arity, vec![0]))
}

/// The semilattice, Z₂, majority and A₁ seeds.
pub fn seeds() -> Vec<FiniteAlgebra> {
    vec![semilattice(), z2_minority(), majority(), a1()]
}

/// Looks up a built-in algebra by name.
pub fn by_name(name: &str) -> Option<FiniteAlgebra> {
    match name {
        "semilattice" => Some(semilattice()),
        "z2" => Some(z2_minority()),
        "majority" => Some(majority()),
        "A1" => Some(a1()),
        "z3" => Some(z3_affine()),
        "z2xsl" => Some(z2_times_semilattice()),
        "proj" => Some(projections()),
        _ => None,
    }
}

pub const BUILTIN_NAMES: &[&str] = &["semilattice", "z2", "majority", "A1", "z3", "z2xsl", "proj"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_algebra;

    #[test]
    fn a1_is_cyclic_and_idempotent() {
        let a = a1();
        assert!(validate_algebra(&a).idempotent);
        for x in 0..4 {
            for y in 0..4 {
                for z in 0..4 {
                    assert_eq!(a1_f(&[x, y, z]), a1_f(&[y, z, x]));
                }
            }
        }
        assert_eq!(a1_f(&[1, 2, 3]), 0);
        assert_eq!(a1_f(&[1, 2, 2]), 1);
        assert_eq!(a1_f(&[0, 3, 3]), 0);
    }

    #[test]
    fn builtins_resolve() {
        for n in BUILTIN_NAMES {
            assert_eq!(by_name(n).unwrap().name, *n);
        }
    }
}
