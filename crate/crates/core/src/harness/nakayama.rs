//! Nakayama algebras: enumeration of indecomposables, Gorenstein core, and
//! bounded evidence about injective dimensions of the regular module.

use std::fmt;
use std::sync::Arc;

use crate::bqa::{self, Algebra, BqaModule, IsoVerdict, PdBound, Verdict};

use super::HarnessError;

/// A bound quiver algebra whose quiver is a directed line or cycle.
#[derive(Debug, Clone)]
pub struct NakayamaAlgebra {
    alg: Arc<Algebra>,
    kupisch: Vec<usize>,
}

impl NakayamaAlgebra {
    pub fn new(alg: Arc<Algebra>) -> Result<Self, HarnessError> {
        let q = alg.bound_quiver().quiver();
        let n = q.vertex_count();
        if (0..n).any(|v| q.arrows_into(v).len() > 1 || q.arrows_out_of(v).len() > 1) {
            return Err(HarnessError::NotNakayama);
        }
        // every vertex reaches at most one new vertex, so lines and cycles are the only shapes
        let components = connected_components(&alg);
        if components > 1 {
            return Err(HarnessError::NotNakayama);
        }
        let kupisch = (0..n).map(|v| alg.bound_quiver().paths_from(v).count()).collect();
        Ok(NakayamaAlgebra { alg, kupisch })
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    /// Lengths of the indecomposable projectives.
    pub fn kupisch(&self) -> &[usize] {
        &self.kupisch
    }
}

fn connected_components(alg: &Algebra) -> usize {
    let q = alg.bound_quiver().quiver();
    let n = q.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in q.arrows() {
        let (x, y) = (find(&mut parent, a.source), find(&mut parent, a.target));
        parent[x] = y;
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

/// `P(vertex) / rad^length P(vertex)`.
#[derive(Debug, Clone)]
pub struct Indecomposable {
    pub vertex: usize,
    pub length: usize,
    pub module: BqaModule,
}

impl Indecomposable {
    pub fn is_projective(&self, a: &NakayamaAlgebra) -> bool {
        self.length == a.kupisch[self.vertex]
    }

    pub fn label(&self) -> String {
        format!("P({})/rad^{}", self.vertex + 1, self.length)
    }
}

/// Quotient of `P(v)` by the span of paths of length at least `length`.
pub fn truncated_projective(alg: &Arc<Algebra>, v: usize, length: usize) -> BqaModule {
    let pres = alg.presentation();
    let p = bqa::projective(alg, v);
    let elems: Vec<(usize, Vec<u32>)> = pres
        .monomials()
        .iter()
        .enumerate()
        .filter(|(_, m)| m.source == v && m.word.len() == length)
        .map(|(i, m)| {
            let mut e = vec![0u32; p.dims()[m.target]];
            e[pres.slot(i)] = 1;
            (m.target, e)
        })
        .collect();
    let subs = pres.generated(p.rep(), &elems);
    BqaModule::from_rep(alg, pres.quotient(p.rep(), &subs).0)
}

/// All indecomposables: every quotient `P(v)/rad^ℓ P(v)` with `1 <= ℓ <= len P(v)`.
pub fn enumerate_nakayama(a: &NakayamaAlgebra) -> Vec<Indecomposable> {
    let mut out = Vec::new();
    for (v, &len) in a.kupisch.iter().enumerate() {
        for length in 1..=len {
            out.push(Indecomposable {
                vertex: v,
                length,
                module: truncated_projective(&a.alg, v, length),
            });
        }
    }
    out
}

/// Position of the enumerated indecomposable isomorphic to `m`, if the probe decides it.
pub fn identify(list: &[Indecomposable], m: &BqaModule) -> Option<usize> {
    list.iter()
        .position(|ind| matches!(bqa::iso_probe(&ind.module, m), IsoVerdict::Iso(_)))
}

#[derive(Debug, Clone)]
pub struct CoreReport {
    pub bound: usize,
    pub indecomposables: usize,
    /// Indices (into the enumeration) of the non-projective GP-certified modules.
    pub nonprojective_gp: Vec<usize>,
    /// Vertices of the projective covers of those modules.
    pub cover_vertices: Vec<usize>,
    /// Syzygy orbits as index sequences, closed when the first element recurs.
    pub orbits: Vec<Vec<usize>>,
    /// Indices whose syzygy was found decomposable (must stay empty).
    pub decomposable_syzygies: Vec<usize>,
    /// Semi-GP-certified indices that the GP test refuted.
    pub semi_not_gp: Vec<usize>,
    pub verdicts: Vec<(Verdict, Verdict)>,
}

impl CoreReport {
    pub fn core_size(&self) -> usize {
        self.nonprojective_gp.len() + self.cover_vertices.len()
    }
}

/// GP and semi-GP certificates on every indecomposable, plus the core and syzygy orbits.
pub fn gorenstein_core(a: &NakayamaAlgebra, list: &[Indecomposable], bound: usize) -> CoreReport {
    use rayon::prelude::*;
    let verdicts: Vec<(Verdict, Verdict)> = super::install(|| {
        list.par_iter()
            .map(|ind| (bqa::semi_gp_cert(&ind.module, bound), bqa::gp_cert(&ind.module, bound)))
            .collect()
    });
    let nonprojective_gp: Vec<usize> = (0..list.len())
        .filter(|&i| verdicts[i].1.is_certified() && !list[i].is_projective(a))
        .collect();
    let semi_not_gp = (0..list.len())
        .filter(|&i| verdicts[i].0.is_certified() && !verdicts[i].1.is_certified())
        .collect();
    let mut cover_vertices: Vec<usize> = nonprojective_gp.iter().map(|&i| list[i].vertex).collect();
    cover_vertices.sort_unstable();
    cover_vertices.dedup();

    let mut decomposable_syzygies = Vec::new();
    let mut syz: Vec<Option<usize>> = vec![None; list.len()];
    for (i, ind) in list.iter().enumerate() {
        if ind.is_projective(a) {
            continue;
        }
        let om = bqa::syzygy(&ind.module);
        if om.is_zero() {
            continue;
        }
        // indecomposable over a Nakayama algebra iff the top is simple
        if bqa::top(&om).total_dim() != 1 {
            decomposable_syzygies.push(i);
            continue;
        }
        syz[i] = identify(list, &om);
    }
    let mut orbits = Vec::new();
    let mut seen = vec![false; list.len()];
    for &start in &nonprojective_gp {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut cur = start;
        while let Some(next) = syz[cur] {
            orbit.push(next);
            if seen[next] {
                break;
            }
            seen[next] = true;
            cur = next;
        }
        orbits.push(orbit);
    }
    CoreReport {
        bound,
        indecomposables: list.len(),
        nonprojective_gp,
        cover_vertices,
        orbits,
        decomposable_syzygies,
        semi_not_gp,
        verdicts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjDim {
    Finite(usize),
    Exceeds(usize),
}

impl fmt::Display for InjDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InjDim::Finite(d) => write!(f, "FINITE({d})"),
            InjDim::Exceeds(n) => write!(f, "EXCEEDS({n})"),
        }
    }
}

/// Bounded injective dimension of the regular module on each side, read off as
/// projective dimensions of `D(A^op)` over `A` and of `D(A)` over `A^op`.
pub fn evidence_non_gorenstein(alg: &Arc<Algebra>, bound: usize) -> (InjDim, InjDim) {
    let op = alg.opposite();
    let conv = |p: PdBound| match p {
        PdBound::Exactly(d) => InjDim::Finite(d),
        PdBound::MoreThan(n) => InjDim::Exceeds(n),
    };
    let left = conv(bqa::pd_up_to(&bqa::dual(&bqa::regular(&op)), bound));
    let right = conv(bqa::pd_up_to(&bqa::dual(&bqa::regular(alg)), bound));
    (left, right)
}
