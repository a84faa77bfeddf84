//! Modules over a monomial bound quiver algebra `B = kQ/I`.

use std::fmt;
use std::sync::{Arc, OnceLock, Weak};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactla::{Fp, Matrix, Subspace};
use crate::quiver::BoundQuiver;
use crate::rep::{FreeModule, Presentation, Rep, Resolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BqaError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
}

/// A monomial bound quiver algebra over `F_p`.
pub struct Algebra {
    fp: Fp,
    bq: BoundQuiver,
    pres: Presentation,
    regular: OnceLock<Rep>,
    op: OnceLock<Arc<Algebra>>,
    back: Option<Weak<Algebra>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra(p={}, {})", self.fp.p(), self.bq)
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.fp == other.fp && self.bq == other.bq
    }
}

impl Algebra {
    pub fn new(fp: Fp, bq: BoundQuiver) -> Arc<Algebra> {
        Arc::new(Self::build(fp, bq, None))
    }

    fn build(fp: Fp, bq: BoundQuiver, back: Option<Weak<Algebra>>) -> Algebra {
        let pres = Presentation::product(fp, &[&bq]);
        Algebra {
            fp,
            bq,
            pres,
            regular: OnceLock::new(),
            op: OnceLock::new(),
            back,
        }
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn bound_quiver(&self) -> &BoundQuiver {
        &self.bq
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn vertex_count(&self) -> usize {
        self.bq.quiver().vertex_count()
    }

    pub fn dim(&self) -> usize {
        self.bq.nonzero_paths().len()
    }

    pub fn regular_rep(&self) -> &Rep {
        self.regular.get_or_init(|| self.pres.regular())
    }

    /// The opposite algebra; taking it twice returns the original `Arc`.
    pub fn opposite(self: &Arc<Self>) -> Arc<Algebra> {
        if let Some(orig) = self.back.as_ref().and_then(Weak::upgrade) {
            return orig;
        }
        self.op
            .get_or_init(|| Arc::new(Self::build(self.fp, self.bq.opposite(), Some(Arc::downgrade(self)))))
            .clone()
    }
}

fn same(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A finite-dimensional module given as a representation of the bound quiver.
#[derive(Debug, Clone)]
pub struct BqaModule {
    alg: Arc<Algebra>,
    rep: Rep,
}

impl PartialEq for BqaModule {
    fn eq(&self, other: &Self) -> bool {
        same(&self.alg, &other.alg) && self.rep == other.rep
    }
}

impl BqaModule {
    /// Checks shapes only; relations are checked by [`check_module`].
    pub fn new(alg: &Arc<Algebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Self, BqaError> {
        let rep = Rep { dims, maps };
        if rep.dims.len() != alg.vertex_count() {
            return Err(BqaError::ShapeMismatch(format!(
                "{} dimensions for {} vertices",
                rep.dims.len(),
                alg.vertex_count()
            )));
        }
        if rep.maps.len() != alg.bq.quiver().arrows().len() {
            return Err(BqaError::ShapeMismatch(format!(
                "{} matrices for {} arrows",
                rep.maps.len(),
                alg.bq.quiver().arrows().len()
            )));
        }
        for (a, arrow) in alg.bq.quiver().arrows().iter().enumerate() {
            let want = (rep.dims[arrow.target], rep.dims[arrow.source]);
            if rep.maps[a].shape() != want {
                return Err(BqaError::ShapeMismatch(format!(
                    "arrow {} has shape {:?}, expected {:?}",
                    arrow.name,
                    rep.maps[a].shape(),
                    want
                )));
            }
        }
        Ok(BqaModule { alg: alg.clone(), rep })
    }

    pub fn from_rep(alg: &Arc<Algebra>, rep: Rep) -> Self {
        debug_assert!(alg.pres.shapes_ok(&rep));
        BqaModule { alg: alg.clone(), rep }
    }

    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Self::from_rep(alg, alg.pres.zero_rep())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn rep(&self) -> &Rep {
        &self.rep
    }

    pub fn dims(&self) -> &[usize] {
        &self.rep.dims
    }

    pub fn map(&self, arrow: usize) -> &Matrix {
        &self.rep.maps[arrow]
    }

    pub fn total_dim(&self) -> usize {
        self.rep.total_dim()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn pres(&self) -> &Presentation {
        &self.alg.pres
    }
}

/// A module homomorphism: one matrix per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct BqaHom {
    pub source: BqaModule,
    pub target: BqaModule,
    pub maps: Vec<Matrix>,
}

impl BqaHom {
    pub fn is_natural(&self) -> bool {
        self.source.pres().is_hom(&self.source.rep, &self.target.rep, &self.maps)
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|f| f.rank() == f.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|f| f.rank() == f.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn compose(&self, inner: &BqaHom) -> BqaHom {
        BqaHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            maps: self.maps.iter().zip(&inner.maps).map(|(f, g)| f.mul(g)).collect(),
        }
    }

    pub fn identity(m: &BqaModule) -> BqaHom {
        BqaHom {
            source: m.clone(),
            target: m.clone(),
            maps: m.rep.dims.iter().map(|&d| Matrix::identity(m.alg.fp, d)).collect(),
        }
    }
}

/// Indices of the ideal generators that do not act as zero.
pub fn check_module(m: &BqaModule) -> Vec<usize> {
    let bq = &m.alg.bq;
    bq.ideal()
        .generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| {
            let mut acc = Matrix::identity(m.alg.fp, m.rep.dims[g.source]);
            for &a in &g.arrows {
                acc = m.rep.maps[a].mul(&acc);
            }
            !acc.is_zero()
        })
        .map(|(i, _)| i)
        .collect()
}

pub fn hom_space(m: &BqaModule, n: &BqaModule) -> Result<Vec<BqaHom>, BqaError> {
    if !same(&m.alg, &n.alg) {
        return Err(BqaError::AlgebraMismatch);
    }
    Ok(m.pres()
        .hom_space(&m.rep, &n.rep)
        .into_iter()
        .map(|maps| BqaHom {
            source: m.clone(),
            target: n.clone(),
            maps,
        })
        .collect())
}

pub fn hom_dim(m: &BqaModule, n: &BqaModule) -> usize {
    m.pres().hom_space(&m.rep, &n.rep).len()
}

pub fn kernel(f: &BqaHom) -> (BqaModule, BqaHom) {
    let (rep, incl) = f.source.pres().kernel(&f.source.rep, &f.maps);
    let k = BqaModule::from_rep(&f.source.alg, rep);
    let hom = BqaHom {
        source: k.clone(),
        target: f.source.clone(),
        maps: incl,
    };
    (k, hom)
}

pub fn cokernel(f: &BqaHom) -> (BqaModule, BqaHom) {
    let (rep, proj) = f.source.pres().cokernel(&f.target.rep, &f.maps);
    let c = BqaModule::from_rep(&f.source.alg, rep);
    let hom = BqaHom {
        source: f.target.clone(),
        target: c.clone(),
        maps: proj,
    };
    (c, hom)
}

/// Image with the corestriction `source -> image` and the inclusion `image -> target`.
pub fn image(f: &BqaHom) -> (BqaModule, BqaHom, BqaHom) {
    let (rep, incl) = f.source.pres().image(&f.target.rep, &f.maps);
    let im = BqaModule::from_rep(&f.source.alg, rep);
    let subs: Vec<Subspace> = f.maps.iter().map(Matrix::image).collect();
    let coim = f
        .maps
        .iter()
        .zip(&subs)
        .map(|(m, s)| s.coords_matrix(m))
        .collect();
    (
        im.clone(),
        BqaHom {
            source: f.source.clone(),
            target: im.clone(),
            maps: coim,
        },
        BqaHom {
            source: im,
            target: f.target.clone(),
            maps: incl,
        },
    )
}

pub fn simple(alg: &Arc<Algebra>, v: usize) -> BqaModule {
    BqaModule::from_rep(alg, alg.pres.simple(v))
}

pub fn projective(alg: &Arc<Algebra>, v: usize) -> BqaModule {
    BqaModule::from_rep(alg, alg.pres.projective(v))
}

pub fn injective(alg: &Arc<Algebra>, v: usize) -> BqaModule {
    dual(&projective(&alg.opposite(), v))
}

pub fn simples(alg: &Arc<Algebra>) -> Vec<BqaModule> {
    (0..alg.vertex_count()).map(|v| simple(alg, v)).collect()
}

pub fn projectives(alg: &Arc<Algebra>) -> Vec<BqaModule> {
    (0..alg.vertex_count()).map(|v| projective(alg, v)).collect()
}

pub fn injectives(alg: &Arc<Algebra>) -> Vec<BqaModule> {
    (0..alg.vertex_count()).map(|v| injective(alg, v)).collect()
}

pub fn regular(alg: &Arc<Algebra>) -> BqaModule {
    BqaModule::from_rep(alg, alg.regular_rep().clone())
}

pub fn direct_sum(alg: &Arc<Algebra>, parts: &[&BqaModule]) -> BqaModule {
    let reps: Vec<&Rep> = parts.iter().map(|m| &m.rep).collect();
    BqaModule::from_rep(alg, alg.pres.direct_sum(&reps))
}

pub fn radical(m: &BqaModule) -> (BqaModule, BqaHom) {
    let subs = m.pres().radical(&m.rep);
    let (rep, incl) = m.pres().subrep(&m.rep, &subs);
    let r = BqaModule::from_rep(&m.alg, rep);
    let hom = BqaHom {
        source: r.clone(),
        target: m.clone(),
        maps: incl,
    };
    (r, hom)
}

pub fn top(m: &BqaModule) -> BqaModule {
    let subs = m.pres().radical(&m.rep);
    BqaModule::from_rep(&m.alg, m.pres().quotient(&m.rep, &subs).0)
}

/// Minimal projective cover `P -> m`; `P` lists one summand per top basis vector.
pub fn projective_cover(m: &BqaModule) -> (BqaModule, BqaHom) {
    let cover = m.pres().cover(&m.rep);
    let p = BqaModule::from_rep(&m.alg, cover.free.rep(m.pres()));
    let epi = BqaHom {
        source: p.clone(),
        target: m.clone(),
        maps: cover.epi,
    };
    (p, epi)
}

/// Vertices of the indecomposable summands of the projective cover.
pub fn cover_vertices(m: &BqaModule) -> Vec<usize> {
    m.pres().cover(&m.rep).free.gens
}

pub fn syzygy(m: &BqaModule) -> BqaModule {
    BqaModule::from_rep(&m.alg, m.pres().syzygy(&m.rep))
}

pub fn resolution(m: &BqaModule, length: usize) -> Resolution {
    m.pres().resolution(&m.rep, length)
}

/// Dimensions of `Ext^k(m, n)` for `k = 0..=max_k`.
pub fn ext_dims(m: &BqaModule, n: &BqaModule, max_k: usize) -> Vec<usize> {
    let res = resolution(m, max_k + 1);
    let cx = m.pres().hom_complex(&res, &n.rep);
    (0..=max_k).map(|k| cx.cohomology_dim(k)).collect()
}

pub fn ext_dim(m: &BqaModule, n: &BqaModule, k: usize) -> usize {
    ext_dims(m, n, k)[k]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PdBound {
    Exactly(usize),
    MoreThan(usize),
}

impl fmt::Display for PdBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PdBound::Exactly(d) => write!(f, "{d}"),
            PdBound::MoreThan(n) => write!(f, "MORE_THAN({n})"),
        }
    }
}

pub fn pd_up_to(m: &BqaModule, bound: usize) -> PdBound {
    pd_of_rep(m.pres(), &m.rep, bound)
}

pub(crate) fn pd_of_rep(pres: &Presentation, rep: &Rep, bound: usize) -> PdBound {
    match pres.resolution(rep, bound).projective_dimension() {
        Some(d) if d <= bound => PdBound::Exactly(d),
        _ => PdBound::MoreThan(bound),
    }
}

/// Vector-space dual, a module over the opposite algebra.
pub fn dual(m: &BqaModule) -> BqaModule {
    let op = m.alg.opposite();
    BqaModule::from_rep(&op, m.pres().dual(&m.rep))
}

/// `Hom(m, B)` as a module over the opposite algebra.
pub fn star(m: &BqaModule) -> BqaModule {
    let op = m.alg.opposite();
    BqaModule::from_rep(&op, m.pres().star(&m.rep).rep)
}

/// Canonical evaluation `m -> m**`.
pub fn eval_map(m: &BqaModule) -> BqaHom {
    let op = m.alg.opposite();
    let (mm, ev) = m.pres().evaluation(&op.pres, &m.rep);
    BqaHom {
        source: m.clone(),
        target: BqaModule::from_rep(&m.alg, mm),
        maps: ev,
    }
}

pub fn is_torsionless(m: &BqaModule) -> bool {
    eval_map(m).is_injective()
}

pub fn is_reflexive(m: &BqaModule) -> bool {
    eval_map(m).is_iso()
}

/// Minimal left `proj`-approximation `m -> P`.
pub fn left_proj_approx(m: &BqaModule) -> BqaHom {
    let op = m.alg.opposite();
    let (free, maps) = m.pres().left_projective_approximation(&op.pres, &m.rep);
    BqaHom {
        source: m.clone(),
        target: BqaModule::from_rep(&m.alg, free.rep(m.pres())),
        maps,
    }
}

/// Which module a failed Ext-vanishing test was about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Module,
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Witness {
    /// `Ext^degree(-, regular)` has dimension `dim > 0`.
    Ext { side: Side, degree: usize, dim: usize },
    /// Evaluation map not bijective.
    NotReflexive { kernel: usize, cokernel: usize },
    /// Free-form evidence from a composite check.
    Other(String),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Ext { side: Side::Module, degree, dim } => write!(f, "ext{degree}(M,B)={dim}"),
            Witness::Ext { side: Side::Dual, degree, dim } => write!(f, "ext{degree}(M*,B)={dim}"),
            Witness::NotReflexive { kernel, cokernel } => {
                write!(f, "eval not bijective (ker {kernel}, coker {cokernel})")
            }
            Witness::Other(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Verdict {
    CertifiedUpTo(usize),
    Refuted(Witness),
    Unknown(String),
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::CertifiedUpTo(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedUpTo(n) => write!(f, "CERTIFIED_UP_TO({n})"),
            Verdict::Refuted(w) => write!(f, "REFUTED({w})"),
            Verdict::Unknown(why) => write!(f, "UNKNOWN({why})"),
        }
    }
}

/// First degree `1 <= i <= bound` with `Ext^i(rep, target) != 0`, with its dimension.
pub(crate) fn first_nonvanishing(pres: &Presentation, rep: &Rep, target: &Rep, bound: usize) -> Option<(usize, usize)> {
    let res = pres.resolution(rep, bound + 1);
    let cx = pres.hom_complex(&res, target);
    let top = if res.complete { bound.min(res.terms.len()) } else { bound };
    (1..=top).map(|i| (i, cx.cohomology_dim(i))).find(|&(_, d)| d != 0)
}

pub(crate) fn semi_gp_rep(pres: &Presentation, rep: &Rep, regular: &Rep, bound: usize, side: Side) -> Verdict {
    match first_nonvanishing(pres, rep, regular, bound) {
        Some((degree, dim)) => Verdict::Refuted(Witness::Ext { side, degree, dim }),
        None => Verdict::CertifiedUpTo(bound),
    }
}

/// `Ext^i(m, B) = 0` for `1 <= i <= bound`.
pub fn semi_gp_cert(m: &BqaModule, bound: usize) -> Verdict {
    semi_gp_rep(m.pres(), &m.rep, m.alg.regular_rep(), bound, Side::Module)
}

/// Bounded totally-reflexive test: both `m` and `m*` semi-GP up to `bound`, and `m` reflexive.
pub fn gp_cert(m: &BqaModule, bound: usize) -> Verdict {
    let v = semi_gp_cert(m, bound);
    if !v.is_certified() {
        return v;
    }
    let op = m.alg.opposite();
    let st = m.pres().star(&m.rep).rep;
    let v = semi_gp_rep(&op.pres, &st, op.regular_rep(), bound, Side::Dual);
    if !v.is_certified() {
        return v;
    }
    let ev = eval_map(m);
    if !ev.is_iso() {
        let kernel: usize = ev.maps.iter().map(|f| f.cols() - f.rank()).sum();
        let cokernel: usize = ev.maps.iter().map(|f| f.rows() - f.rank()).sum();
        return Verdict::Refuted(Witness::NotReflexive { kernel, cokernel });
    }
    Verdict::CertifiedUpTo(bound)
}

pub fn random_module(alg: &Arc<Algebra>, budget: usize, seed: u64) -> BqaModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_module_with(alg, budget, &mut rng)
}

pub fn random_module_with<R: Rng + ?Sized>(alg: &Arc<Algebra>, budget: usize, rng: &mut R) -> BqaModule {
    BqaModule::from_rep(alg, alg.pres.random_module(budget, rng))
}

/// Quotient of `⊕ P(v)` (over `gens`) by `relations` random radical elements.
pub fn random_quotient<R: Rng + ?Sized>(alg: &Arc<Algebra>, gens: &[usize], relations: usize, rng: &mut R) -> BqaModule {
    BqaModule::from_rep(alg, alg.pres.random_quotient(&FreeModule::new(gens.to_vec()), relations, rng))
}

#[derive(Debug, Clone, PartialEq)]
pub enum IsoVerdict {
    Iso(Vec<Matrix>),
    NotIso(String),
    Undecided,
}

pub const ISO_TRIALS: usize = 32;

pub fn iso_probe(m: &BqaModule, n: &BqaModule) -> IsoVerdict {
    iso_probe_trials(m, n, ISO_TRIALS)
}

pub fn iso_probe_trials(m: &BqaModule, n: &BqaModule, trials: usize) -> IsoVerdict {
    if let Some(inv) = distinguishing_invariant(m.pres(), &m.rep, &n.rep) {
        return IsoVerdict::NotIso(inv);
    }
    match random_iso(m.pres(), &m.rep, &n.rep, trials) {
        Some(w) => IsoVerdict::Iso(w),
        None => IsoVerdict::Undecided,
    }
}

pub(crate) fn distinguishing_invariant(pres: &Presentation, m: &Rep, n: &Rep) -> Option<String> {
    if m.dims != n.dims {
        return Some("dimension vector".into());
    }
    for (a, (x, y)) in m.maps.iter().zip(&n.maps).enumerate() {
        if x.rank() != y.rank() {
            return Some(format!("rank of arrow {}", a + 1));
        }
    }
    for v in 0..pres.point_count() {
        let s = pres.simple(v);
        if pres.hom_space(&s, m).len() != pres.hom_space(&s, n).len() {
            return Some(format!("hom(S{},-)", v + 1));
        }
        if pres.hom_space(m, &s).len() != pres.hom_space(n, &s).len() {
            return Some(format!("hom(-,S{})", v + 1));
        }
    }
    if pres.hom_space(m, m).len() != pres.hom_space(n, n).len() {
        return Some("endomorphism dimension".into());
    }
    None
}

pub(crate) fn random_iso(pres: &Presentation, m: &Rep, n: &Rep, trials: usize) -> Option<Vec<Matrix>> {
    let fp = pres.field();
    let basis = pres.hom_space(m, n);
    if m.is_zero() && n.is_zero() {
        return Some(m.dims.iter().map(|_| Matrix::zeros(fp, 0, 0)).collect());
    }
    if basis.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1503);
    for _ in 0..trials {
        let mut f: Vec<Matrix> = m
            .dims
            .iter()
            .zip(&n.dims)
            .map(|(&c, &r)| Matrix::zeros(fp, r, c))
            .collect();
        for h in &basis {
            let c = rng.gen_range(0..fp.p());
            if c != 0 {
                for (fx, hx) in f.iter_mut().zip(h) {
                    *fx = fx.add(&hx.scale(c));
                }
            }
        }
        if f.iter().all(|fx| fx.rows() == fx.cols() && fx.rank() == fx.rows()) {
            return Some(f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{Arrow, MonomialIdeal, Quiver};

    fn q3(fp: Fp) -> Arc<Algebra> {
        let q = Quiver::new(3, vec![Arrow::new("a", 2, 1), Arrow::new("b", 1, 0)]).unwrap();
        let rel = q.path_from_names(&["b", "a"]).unwrap();
        Algebra::new(fp, BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap())
    }

    fn kx2() -> Arc<Algebra> {
        let q = Quiver::new(1, vec![Arrow::new("x", 0, 0)]).unwrap();
        let rel = q.path(&[0, 0]).unwrap();
        Algebra::new(Fp::two(), BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap())
    }

    #[test]
    fn truncated_loop_module_check() {
        let a = kx2();
        let fp = a.field();
        let nil = Matrix::from_rows(fp, &[[0, 0], [1, 0]], 2).unwrap();
        assert!(check_module(&BqaModule::new(&a, vec![2], vec![nil]).unwrap()).is_empty());
        let id = Matrix::identity(fp, 2);
        assert_eq!(check_module(&BqaModule::new(&a, vec![2], vec![id]).unwrap()), vec![0]);
        for p in projectives(&a) {
            assert!(check_module(&p).is_empty());
        }
    }

    #[test]
    fn hom_dimensions_on_q3() {
        let a = q3(Fp::two());
        let p = projectives(&a);
        assert_eq!(hom_dim(&p[1], &p[2]), p[2].dims()[1]);
        assert_eq!(hom_dim(&p[1], &p[2]), 1);
        assert_eq!(hom_dim(&p[2], &p[1]), 0);
    }

    #[test]
    fn kernel_of_projection_onto_simple() {
        let a = q3(Fp::two());
        let p2 = projective(&a, 1);
        let s2 = simple(&a, 1);
        let f = hom_space(&p2, &s2).unwrap().remove(0);
        let (k, incl) = kernel(&f);
        assert_eq!(k.dims(), &[1, 0, 0]);
        assert!(incl.is_natural());
        let (c, _) = cokernel(&BqaHom::identity(&p2));
        assert!(c.is_zero());
    }

    #[test]
    fn radical_and_top() {
        let a = q3(Fp::two());
        let (r, _) = radical(&projective(&a, 2));
        assert_eq!(r.dims(), &[0, 1, 0]);
        for v in 0..3 {
            assert_eq!(top(&projective(&a, v)).dims(), simple(&a, v).dims());
            assert!(radical(&simple(&a, v)).0.is_zero());
        }
    }

    #[test]
    fn syzygies_over_q3() {
        let a = q3(Fp::two());
        let s3 = simple(&a, 2);
        let o1 = syzygy(&s3);
        assert_eq!(o1.dims(), &[0, 1, 0]);
        let o2 = syzygy(&o1);
        assert_eq!(o2.dims(), &[1, 0, 0]);
        assert!(syzygy(&o2).is_zero());
        assert_eq!(pd_up_to(&s3, 5), PdBound::Exactly(2));
        assert_eq!(ext_dim(&s3, &simple(&a, 1), 1), 1);
    }

    #[test]
    fn periodic_simple_over_truncated_loop() {
        let a = kx2();
        let s = simple(&a, 0);
        assert_eq!(syzygy(&s), s);
        assert_eq!(ext_dims(&s, &s, 5), vec![1; 6]);
        assert_eq!(ext_dim(&s, &regular(&a), 1), 0);
        assert_eq!(pd_up_to(&s, 7), PdBound::MoreThan(7));
    }

    #[test]
    fn injectives_are_duals_of_opposite_projectives() {
        let a = q3(Fp::two());
        let op = a.opposite();
        assert!(Arc::ptr_eq(&op.opposite(), &a));
        assert_eq!(injective(&a, 0).dims(), &[1, 1, 0]);
        assert_eq!(injective(&a, 2).dims(), &[0, 0, 1]);
        assert_eq!(dual(&simple(&a, 1)), simple(&op, 1));
    }

    #[test]
    fn star_examples() {
        let a = q3(Fp::two());
        let op = a.opposite();
        for v in 0..3 {
            assert_eq!(star(&projective(&a, v)).dims(), projective(&op, v).dims());
        }
        assert_eq!(star(&simple(&a, 1)).total_dim(), 1);
        assert!(star(&simple(&a, 2)).is_zero());
    }

    #[test]
    fn torsionless_examples() {
        let a = q3(Fp::two());
        for p in projectives(&a) {
            assert!(is_reflexive(&p));
        }
        assert!(!is_torsionless(&simple(&a, 2)));
        let b = kx2();
        assert!(is_torsionless(&simple(&b, 0)));
    }

    #[test]
    fn approximations() {
        let a = q3(Fp::two());
        let f = left_proj_approx(&simple(&a, 2));
        assert!(f.target.is_zero());
        let p = projective(&a, 1);
        let g = left_proj_approx(&p);
        assert!(g.is_iso());
        let b = kx2();
        let h = left_proj_approx(&simple(&b, 0));
        assert_eq!(h.target.total_dim(), 2);
        assert!(h.is_injective() && h.is_natural());
    }

    #[test]
    fn certificates() {
        let a = q3(Fp::two());
        for p in projectives(&a) {
            assert_eq!(gp_cert(&p, 6), Verdict::CertifiedUpTo(6));
        }
        assert!(semi_gp_cert(&simple(&a, 2), 2).is_refuted());
        assert!(is_torsionless(&simple(&a, 1)));
        assert!(gp_cert(&simple(&a, 1), 4).is_refuted());
        let b = kx2();
        assert_eq!(semi_gp_cert(&simple(&b, 0), 10), Verdict::CertifiedUpTo(10));
        assert_eq!(gp_cert(&simple(&b, 0), 10), Verdict::CertifiedUpTo(10));
        assert_eq!(gp_cert(&BqaModule::zero(&a), 3), Verdict::CertifiedUpTo(3));
    }

    #[test]
    fn random_modules_are_reproducible_and_valid() {
        let a = q3(Fp::new(3).unwrap());
        let m1 = random_module(&a, 4, 42);
        let m2 = random_module(&a, 4, 42);
        assert_eq!(m1, m2);
        assert!(check_module(&m1).is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_quotient(&a, &[2], 0, &mut rng), projective(&a, 2));
    }

    #[test]
    fn iso_probe_examples() {
        let a = q3(Fp::two());
        let p2 = projective(&a, 1);
        assert!(matches!(iso_probe(&p2, &p2), IsoVerdict::Iso(_)));
        assert!(matches!(iso_probe(&simple(&a, 0), &simple(&a, 1)), IsoVerdict::NotIso(_)));
        let ss = direct_sum(&a, &[&simple(&a, 0), &simple(&a, 1)]);
        assert_eq!(iso_probe(&p2, &ss), IsoVerdict::NotIso("rank of arrow 2".into()));
    }
}
