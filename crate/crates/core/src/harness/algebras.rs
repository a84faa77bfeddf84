//! Small algebras used as default contexts and fixtures.

use std::sync::Arc;

use crate::bqa::Algebra;
use crate::exactla::Fp;
use crate::layered::TensorContext;
use crate::quiver::{Arrow, BoundQuiver, MonomialIdeal, Quiver};

/// `k[x]/⟨x^n⟩` (for `n = 1` the field itself).
pub fn truncated_loop(fp: Fp, n: usize) -> Arc<Algebra> {
    if n <= 1 {
        return field(fp);
    }
    let q = Quiver::new(1, vec![Arrow::new("x", 0, 0)]).unwrap();
    let rel = q.path(&vec![0; n]).unwrap();
    Algebra::new(fp, BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap())
}

pub fn field(fp: Fp) -> Arc<Algebra> {
    Algebra::new(fp, BoundQuiver::new(Quiver::new(1, vec![]).unwrap(), MonomialIdeal::zero()).unwrap())
}

/// `3 -a-> 2 -b-> 1` with `ba = 0`.
pub fn q3(fp: Fp) -> Arc<Algebra> {
    let q = Quiver::new(3, vec![Arrow::new("a", 2, 1), Arrow::new("b", 1, 0)]).unwrap();
    let rel = q.path(&[0, 1]).unwrap();
    Algebra::new(fp, BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap())
}

/// Linearly oriented `A_n`, arrows `i+1 -> i`, no relations.
pub fn linear(fp: Fp, n: usize) -> Arc<Algebra> {
    let arrows = (1..n).map(|i| Arrow::new(format!("a{i}"), i, i - 1)).collect();
    let q = Quiver::new(n, arrows).unwrap();
    Algebra::new(fp, BoundQuiver::new(q, MonomialIdeal::zero()).unwrap())
}

/// Cyclic Nakayama algebra `1 -α-> 2 -β-> 3 -γ-> 1` with `βα(γβα)^5 = 0` and `(αγβ)^6 = 0`;
/// Kupisch series (17, 18, 18).
pub fn kupisch_17_18_18(fp: Fp) -> Arc<Algebra> {
    let q = Quiver::new(
        3,
        vec![Arrow::new("alpha", 0, 1), Arrow::new("beta", 1, 2), Arrow::new("gamma", 2, 0)],
    )
    .unwrap();
    let mut r1 = vec![0, 1];
    for _ in 0..5 {
        r1.extend([2, 0, 1]);
    }
    let r2: Vec<usize> = (0..6).flat_map(|_| [1, 2, 0]).collect();
    let ideal = MonomialIdeal::new(vec![q.path(&r1).unwrap(), q.path(&r2).unwrap()]).unwrap();
    Algebra::new(fp, BoundQuiver::new(q, ideal).unwrap())
}

/// The four contexts `A ⊗ kQ/I` with `A ∈ {k[x]/⟨x²⟩, kQ3/⟨ba⟩}` and `Q ∈ {A_2, Q3}`.
pub fn default_contexts(fp: Fp) -> Vec<Arc<TensorContext>> {
    let bases = [truncated_loop(fp, 2), q3(fp)];
    let factors = [linear(fp, 2), q3(fp)];
    bases
        .iter()
        .flat_map(|a| factors.iter().map(move |b| TensorContext::new(a.clone(), b.clone()).unwrap()))
        .collect()
}
