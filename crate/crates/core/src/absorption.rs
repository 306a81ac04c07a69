//! Binary and ternary absorption, bounded projectivity, and a per-subset
//! absorption report.

use serde::{Deserialize, Serialize};

use crate::algebra::{congruences, index_tuple, is_subuniverse, quotient, FiniteAlgebra, Partition, ProductView};
use crate::bitset::Subset;
use crate::caps::Caps;
use crate::edges::{EdgeGraph, Flavor};
use crate::error::{Error, Result};
use crate::terms::{free_algebra, free_algebra_family, FreeAlgebra, TermOperation};
use crate::Tri;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbsorptionKind {
    Binary,
    Ternary,
    Projective,
    StronglyProjective,
    AbsorbingElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    /// Search of a complete free algebra for a witnessing term.
    TermSearch,
    /// No asm-edge leaves the set.
    AsmClosure,
    /// (B × A) ∪ (A × B) is a subuniverse of A².
    ProductClosure,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionWitness {
    pub subset: Vec<usize>,
    pub kind: AbsorptionKind,
    pub term: Option<TermOperation>,
    /// For the product test, the closed set of pairs.
    pub certificate: Option<Vec<Vec<usize>>>,
    pub method: Method,
}

impl AbsorptionWitness {
    /// Re-checks the witness against the definition.
    pub fn replay(&self, alg: &FiniteAlgebra) -> bool {
        let b = Subset::from_elems(alg.size, self.subset.iter().copied());
        match (&self.term, &self.certificate) {
            (Some(t), _) => absorbs(&t.table, alg.size, t.arity, &b),
            (None, Some(pairs)) => ProductView::power(alg, 2).is_closed(pairs),
            (None, None) => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionDecision {
    pub subset: Vec<usize>,
    pub absorbing: bool,
    pub is_subuniverse: bool,
    pub witness: Option<AbsorptionWitness>,
    /// Methods that contributed to the decision.
    pub methods: Vec<Method>,
    /// Yes when two independent methods agreed, Unknown when only one ran.
    pub cross_checked: Tri,
}

/// Whether `table` (a k-ary operation on 0..n) maps every tuple with at
/// least k − 1 entries in `b` into `b`.
pub fn absorbs(table: &[u8], n: usize, k: usize, b: &Subset) -> bool {
    (0..table.len()).all(|idx| {
        let t = index_tuple(n, k, idx);
        let inside = t.iter().filter(|&&x| b.contains(x)).count();
        inside + 1 < k || b.contains(table[idx] as usize)
    })
}

/// Index of the first element of a complete F(2) witnessing binary absorption
/// of `b` on the first family member.
pub fn binary_absorption_witness(f2: &FreeAlgebra, b: &Subset) -> Option<usize> {
    let n = f2.sizes[0];
    (0..f2.len()).find(|&i| absorbs(&f2.elements[i][..n * n], n, 2, b))
}

fn check_nonempty(alg: &FiniteAlgebra, b: &Subset) -> Result<()> {
    if b.is_empty() || b.universe() != alg.size {
        return Err(Error::PreconditionViolated(format!(
            "subset {b} must be nonempty and live on {} elements",
            alg.size
        )));
    }
    Ok(())
}

/// Binary absorption by search of F(2), cross-checked against asm-closedness.
pub fn is_2_absorbing(alg: &FiniteAlgebra, edges: &EdgeGraph, b: &Subset, caps: &Caps) -> Result<AbsorptionDecision> {
    check_nonempty(alg, b)?;
    let f2 = free_algebra(alg, 2, caps.closure);
    decide_binary(alg, edges, b, &f2, caps)
}

fn decide_binary(
    alg: &FiniteAlgebra,
    edges: &EdgeGraph,
    b: &Subset,
    f2: &FreeAlgebra,
    caps: &Caps,
) -> Result<AbsorptionDecision> {
    let asm_closed = edges.is_exact().then(|| edges.is_closed(Flavor::Asm, b));
    let mut methods = Vec::new();
    let mut witness = None;
    let absorbing = if f2.complete {
        methods.push(Method::TermSearch);
        let found = binary_absorption_witness(f2, b);
        if let Some(i) = found {
            let w = AbsorptionWitness {
                subset: b.to_vec(),
                kind: AbsorptionKind::Binary,
                term: Some(f2.operation(i)),
                certificate: None,
                method: Method::TermSearch,
            };
            debug_assert!(w.replay(alg));
            witness = Some(w);
        }
        found.is_some()
    } else {
        match asm_closed {
            Some(c) => c,
            None => return Err(Error::cap(format!("F(2) of {}", alg.name), caps.closure)),
        }
    };
    if let Some(closed) = asm_closed {
        methods.push(Method::AsmClosure);
        if f2.complete && closed != absorbing {
            return Err(Error::AbsorptionMismatch {
                subset: b.to_string(),
                detail: format!("binary term search says {absorbing}, asm-closedness says {closed}"),
            });
        }
    }
    Ok(AbsorptionDecision {
        subset: b.to_vec(),
        absorbing,
        is_subuniverse: is_subuniverse(alg, b),
        witness,
        cross_checked: if methods.len() == 2 { Tri::Yes } else { Tri::Unknown },
        methods,
    })
}

/// (B × A) ∪ (A × B) as pairs.
fn cross(n: usize, b: &Subset) -> Vec<Vec<usize>> {
    let mut v = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if b.contains(x) || b.contains(y) {
                v.push(vec![x, y]);
            }
        }
    }
    v
}

/// Ternary absorption by closing (B × A) ∪ (A × B) in A², cross-checked by
/// search of F(3) when it completes.
pub fn is_3_absorbing(alg: &FiniteAlgebra, b: &Subset, caps: &Caps) -> Result<AbsorptionDecision> {
    check_nonempty(alg, b)?;
    let f3 = free_algebra(alg, 3, caps.closure);
    decide_ternary(alg, b, &f3)
}

fn decide_ternary(alg: &FiniteAlgebra, b: &Subset, f3: &FreeAlgebra) -> Result<AbsorptionDecision> {
    let n = alg.size;
    let pairs = cross(n, b);
    let structural = ProductView::power(alg, 2).is_closed(&pairs);
    let mut methods = vec![Method::ProductClosure];
    let mut witness = structural.then(|| AbsorptionWitness {
        subset: b.to_vec(),
        kind: AbsorptionKind::Ternary,
        term: None,
        certificate: Some(pairs.clone()),
        method: Method::ProductClosure,
    });
    let mut cross_checked = Tri::Unknown;
    if f3.complete {
        methods.push(Method::TermSearch);
        let len = n * n * n;
        let found = (0..f3.len()).find(|&i| absorbs(&f3.elements[i][..len], n, 3, b));
        if found.is_some() != structural {
            return Err(Error::AbsorptionMismatch {
                subset: b.to_string(),
                detail: format!(
                    "product closure says {structural}, ternary term search says {}",
                    found.is_some()
                ),
            });
        }
        cross_checked = Tri::Yes;
        if let (Some(i), Some(w)) = (found, witness.as_mut()) {
            w.term = Some(f3.operation(i));
        }
    }
    Ok(AbsorptionDecision {
        subset: b.to_vec(),
        absorbing: structural,
        is_subuniverse: is_subuniverse(alg, b),
        witness,
        methods,
        cross_checked,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Projectivity {
    pub subset: Vec<usize>,
    /// Highest arity whose free algebra was checked completely.
    pub verified_arity: usize,
    pub projective: bool,
    pub strongly_projective: bool,
    pub absorbing_element: bool,
    /// First term operation that breaks projectivity or strong projectivity.
    pub failure: Option<TermOperation>,
}

/// Whether coordinate `i` of a k-ary table pulls B-inputs to B-outputs.
fn coordinate_pulls(table: &[u8], n: usize, k: usize, i: usize, b: &Subset) -> bool {
    (0..table.len()).all(|idx| {
        let t = index_tuple(n, k, idx);
        !b.contains(t[i]) || b.contains(table[idx] as usize)
    })
}

fn projectivity_of(t: &TermOperation, b: &Subset) -> (bool, bool) {
    let k = t.arity;
    let pulls: Vec<bool> = (0..k).map(|i| coordinate_pulls(&t.table, t.size, k, i, b)).collect();
    let projective = pulls.iter().any(|&p| p);
    let strong = t.essential_coordinates().iter().all(|&i| pulls[i]);
    (projective, strong)
}

/// Projectivity and strong projectivity over all term operations of arity at
/// most the configured cap.
pub fn bounded_projectivity(alg: &FiniteAlgebra, b: &Subset, caps: &Caps) -> Result<Projectivity> {
    check_nonempty(alg, b)?;
    if !is_subuniverse(alg, b) {
        return Err(Error::PreconditionViolated(format!(
            "{b} is not a subuniverse of {}",
            alg.name
        )));
    }
    let frees: Vec<FreeAlgebra> = (1..=caps.projectivity_arity)
        .map(|k| free_algebra(alg, k, caps.closure))
        .collect();
    Ok(projectivity_from(b, &frees))
}

fn projectivity_from(b: &Subset, frees: &[FreeAlgebra]) -> Projectivity {
    let mut out = Projectivity {
        subset: b.to_vec(),
        verified_arity: 0,
        projective: true,
        strongly_projective: true,
        absorbing_element: false,
        failure: None,
    };
    for f in frees {
        if !f.complete {
            break;
        }
        let n = f.sizes[0];
        let len = n.pow(f.generators as u32);
        for i in 0..f.len() {
            let t = TermOperation {
                arity: f.generators,
                size: n,
                table: f.elements[i][..len].to_vec(),
                tree: None,
            };
            let (p, s) = projectivity_of(&t, b);
            out.projective &= p;
            out.strongly_projective &= s;
            if !(p && s) && out.failure.is_none() {
                out.failure = Some(f.operation(i));
            }
        }
        out.verified_arity = f.generators;
    }
    out.absorbing_element = b.count() == 1 && out.strongly_projective && out.verified_arity > 0;
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetClass {
    pub subset: Vec<usize>,
    pub is_subuniverse: bool,
    pub binary: bool,
    pub ternary: bool,
    /// Projectivity flags, for subuniverses.
    pub projective: Option<bool>,
    pub strongly_projective: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransportCheck {
    pub congruence: Partition,
    pub arity: usize,
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorptionReport {
    pub algebra: String,
    pub subsets: Vec<SubsetClass>,
    pub projectivity_arity: usize,
    /// Violations of: absorbing sets are subuniverses; binary absorption,
    /// projectivity and strong projectivity coincide.
    pub audit_failures: Vec<String>,
    pub transport: Vec<TransportCheck>,
}

impl AbsorptionReport {
    pub fn class(&self, subset: &[usize]) -> Option<&SubsetClass> {
        self.subsets.iter().find(|c| c.subset == subset)
    }

    pub fn is_clean(&self) -> bool {
        self.audit_failures.is_empty() && self.transport.iter().all(|t| t.failures.is_empty())
    }
}

/// Classifies every nonempty subset.
pub fn absorption_report(alg: &FiniteAlgebra, edges: &EdgeGraph, caps: &Caps) -> Result<AbsorptionReport> {
    let n = alg.size;
    if n > caps.subset_size {
        return Err(Error::cap(
            format!("subset enumeration of {}", alg.name),
            caps.subset_size,
        ));
    }
    let f2 = free_algebra(alg, 2, caps.closure);
    let f3 = free_algebra(alg, 3, caps.closure);
    let frees: Vec<FreeAlgebra> = (1..=caps.projectivity_arity)
        .map(|k| match k {
            2 => f2.clone(),
            3 => f3.clone(),
            _ => free_algebra(alg, k, caps.closure),
        })
        .collect();
    let mut subsets = Vec::new();
    let mut audit_failures = Vec::new();
    let mut verified = caps.projectivity_arity;
    for mask in 1u64..(1u64 << n) {
        let b = Subset::from_elems(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        let two = decide_binary(alg, edges, &b, &f2, caps)?;
        let three = decide_ternary(alg, &b, &f3)?;
        let is_sub = two.is_subuniverse;
        if (two.absorbing || three.absorbing) && !is_sub {
            audit_failures.push(format!("{b} absorbs but is not a subuniverse"));
        }
        let (projective, strongly_projective) = if is_sub {
            let p = projectivity_from(&b, &frees);
            verified = verified.min(p.verified_arity);
            if p.projective != two.absorbing || p.strongly_projective != two.absorbing {
                audit_failures.push(format!(
                    "{b}: binary absorption {}, projective {}, strongly projective {} (up to arity {})",
                    two.absorbing, p.projective, p.strongly_projective, p.verified_arity
                ));
            }
            (Some(p.projective), Some(p.strongly_projective))
        } else {
            (None, None)
        };
        subsets.push(SubsetClass {
            subset: b.to_vec(),
            is_subuniverse: is_sub,
            binary: two.absorbing,
            ternary: three.absorbing,
            projective,
            strongly_projective,
        });
    }
    subsets.sort_by(|x, y| {
        x.subset
            .len()
            .cmp(&y.subset.len())
            .then_with(|| x.subset.cmp(&y.subset))
    });
    let transport = transport_checks(alg, &subsets, caps)?;
    Ok(AbsorptionReport {
        algebra: alg.name.clone(),
        subsets,
        projectivity_arity: verified,
        audit_failures,
        transport,
    })
}

/// Absorption moves along every quotient map, witnessed by the same term.
fn transport_checks(alg: &FiniteAlgebra, classes: &[SubsetClass], caps: &Caps) -> Result<Vec<TransportCheck>> {
    let n = alg.size;
    if n > caps.congruence_size {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for theta in congruences(alg, caps.congruence_size)?.all {
        if theta.is_discrete() {
            continue;
        }
        let q = quotient(alg, &theta)?;
        let m = q.size;
        for k in [2usize, 3] {
            let family = free_algebra_family(&[alg, &q], k, caps.closure)?;
            if !family.complete {
                continue;
            }
            let (la, lq) = (n.pow(k as u32), m.pow(k as u32));
            let on_a = |i: usize| &family.elements[i][..la];
            let on_q = |i: usize| &family.elements[i][la..la + lq];
            let mut check = TransportCheck {
                congruence: theta.clone(),
                arity: k,
                checked: 0,
                failures: Vec::new(),
            };
            for c in classes {
                let cs = Subset::from_elems(n, c.subset.iter().copied());
                if let Some(i) = (0..family.len()).find(|&i| absorbs(on_a(i), n, k, &cs)) {
                    let d = Subset::from_elems(m, c.subset.iter().map(|&x| theta.block_of(x)));
                    check.checked += 1;
                    if !absorbs(on_q(i), m, k, &d) {
                        check
                            .failures
                            .push(format!("image of {cs} under {theta} is not absorbed by the same term"));
                    }
                }
            }
            for mask in 1u64..(1u64 << m) {
                let d = Subset::from_elems(m, (0..m).filter(|&i| mask >> i & 1 == 1));
                if let Some(i) = (0..family.len()).find(|&i| absorbs(on_q(i), m, k, &d)) {
                    let pre = Subset::from_elems(n, (0..n).filter(|&x| d.contains(theta.block_of(x))));
                    check.checked += 1;
                    if !absorbs(on_a(i), n, k, &pre) {
                        check.failures.push(format!(
                            "preimage of {d} under {theta} is not absorbed by the same term"
                        ));
                    }
                }
            }
            out.push(check);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::edges::{compute_edges, EdgeConfig};

    fn setup(alg: &FiniteAlgebra) -> EdgeGraph {
        compute_edges(alg, &EdgeConfig::default()).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> Subset {
        Subset::from_elems(n, xs.iter().copied())
    }

    #[test]
    fn binary_absorption_examples() {
        let caps = Caps::default();
        let sl = catalog::semilattice();
        let d = is_2_absorbing(&sl, &setup(&sl), &set(2, &[0]), &caps).unwrap();
        assert!(d.absorbing && d.cross_checked == Tri::Yes);
        let w = d.witness.unwrap();
        assert!(w.replay(&sl));
        assert_eq!(w.term.unwrap().table, vec![0, 0, 0, 1]);
        let z = catalog::z2_minority();
        assert!(!is_2_absorbing(&z, &setup(&z), &set(2, &[0]), &caps).unwrap().absorbing);
        let a1 = catalog::a1();
        let d = is_2_absorbing(&a1, &setup(&a1), &set(4, &[0]), &caps).unwrap();
        assert!(d.absorbing && d.is_subuniverse);
    }

    #[test]
    fn ternary_absorption_examples() {
        let caps = Caps::default();
        let m = catalog::majority();
        let d = is_3_absorbing(&m, &set(2, &[0]), &caps).unwrap();
        assert!(d.absorbing && d.cross_checked == Tri::Yes);
        assert!(d.witness.unwrap().replay(&m));
        assert!(
            !is_3_absorbing(&catalog::z2_minority(), &set(2, &[0]), &caps)
                .unwrap()
                .absorbing
        );
        assert!(is_3_absorbing(&m, &set(2, &[0, 1]), &caps).unwrap().absorbing);
    }

    #[test]
    fn projectivity_examples() {
        let caps = Caps::default();
        let p = bounded_projectivity(&catalog::a1(), &set(4, &[0]), &caps).unwrap();
        assert!(p.strongly_projective && p.absorbing_element);
        assert_eq!(p.verified_arity, 3);
        let p = bounded_projectivity(&catalog::semilattice(), &set(2, &[0]), &caps).unwrap();
        assert!(p.strongly_projective);
        let p = bounded_projectivity(&catalog::majority(), &set(2, &[0]), &caps).unwrap();
        assert!(!p.projective);
    }

    #[test]
    fn reports() {
        let caps = Caps::default();
        let a1 = catalog::a1();
        let r = absorption_report(&a1, &setup(&a1), &caps).unwrap();
        assert!(r.is_clean(), "{:?}", r.audit_failures);
        let zero = r.class(&[0]).unwrap();
        assert!(zero.binary && zero.ternary);
        let pair = r.class(&[1, 2]).unwrap();
        assert!(pair.is_subuniverse && !pair.binary);
        let m = catalog::majority();
        let r = absorption_report(&m, &setup(&m), &caps).unwrap();
        for x in [[0], [1]] {
            let c = r.class(&x).unwrap();
            assert!(c.ternary && !c.binary);
        }
        let t = catalog::trivial("f", 3);
        let r = absorption_report(&t, &setup(&t), &caps).unwrap();
        assert_eq!(r.subsets.len(), 1);
        assert!(r.subsets[0].binary && r.subsets[0].ternary);
    }
}
