//! Modules over `Λ = A ⊗ kQ/I` as representations of `(Q, I)` in `A`-modules.
//!
//! A [`LayeredRep`] keeps one `A`-module per vertex of `Q` and one `A`-linear map
//! per arrow. Homological algebra runs on the tensor presentation of `Λ`
//! (monomials are pairs of nonzero paths), never on a single bound quiver.

use std::fmt;
use std::sync::{Arc, OnceLock, Weak};

use thiserror::Error;

use crate::bqa::{self, Algebra, BqaModule, PdBound, Side, Verdict, Witness};
use crate::exactla::{Fp, Matrix, Subspace};
use crate::quiver::{Arrow, BoundQuiver, MonomialIdeal, Path, Quiver};
use crate::rep::{induced_rank, Presentation, Rep};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayeredError {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u32, u32),
    #[error("the tensor factor quiver must be acyclic")]
    Cyclic,
    #[error("arrows of the tensor factor must go from larger to smaller labels")]
    Labeling,
    #[error("vertex {} is not a source", .0 + 1)]
    NotSource(usize),
    #[error("identity needs a separated monic representation")]
    SmonRequired,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("representations live over different contexts")]
    ContextMismatch,
}

/// The pair `(A, kQ/I)` defining `Λ = A ⊗ kQ/I`.
pub struct TensorContext {
    a: Arc<Algebra>,
    b: Arc<Algebra>,
    pres: Presentation,
    regular: OnceLock<Rep>,
    op: OnceLock<Arc<TensorContext>>,
    back: Option<Weak<TensorContext>>,
}

impl fmt::Debug for TensorContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorContext({:?} ⊗ {:?})", self.a, self.b)
    }
}

impl PartialEq for TensorContext {
    fn eq(&self, other: &Self) -> bool {
        *self.a == *other.a && *self.b == *other.b
    }
}

impl TensorContext {
    pub fn new(a: Arc<Algebra>, b: Arc<Algebra>) -> Result<Arc<Self>, LayeredError> {
        if a.field() != b.field() {
            return Err(LayeredError::PrimeMismatch(a.field().p(), b.field().p()));
        }
        let q = b.bound_quiver().quiver();
        if !q.is_acyclic() {
            return Err(LayeredError::Cyclic);
        }
        if !q.follows_labeling() {
            return Err(LayeredError::Labeling);
        }
        Ok(Arc::new(Self::build(a, b, None)))
    }

    fn build(a: Arc<Algebra>, b: Arc<Algebra>, back: Option<Weak<TensorContext>>) -> Self {
        let pres = Presentation::product(a.field(), &[a.bound_quiver(), b.bound_quiver()]);
        TensorContext {
            a,
            b,
            pres,
            regular: OnceLock::new(),
            op: OnceLock::new(),
            back,
        }
    }

    pub fn base(&self) -> &Arc<Algebra> {
        &self.a
    }

    pub fn factor(&self) -> &Arc<Algebra> {
        &self.b
    }

    pub fn field(&self) -> Fp {
        self.a.field()
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn q_vertices(&self) -> usize {
        self.b.vertex_count()
    }

    pub fn a_vertices(&self) -> usize {
        self.a.vertex_count()
    }

    pub fn q_arrows(&self) -> &[Arrow] {
        self.b.bound_quiver().quiver().arrows()
    }

    pub fn regular_rep(&self) -> &Rep {
        self.regular.get_or_init(|| self.pres.regular())
    }

    /// `(A^op, Q^op, I^op)`; taking it twice returns the original `Arc`.
    pub fn opposite(self: &Arc<Self>) -> Arc<TensorContext> {
        if let Some(orig) = self.back.as_ref().and_then(Weak::upgrade) {
            return orig;
        }
        self.op
            .get_or_init(|| Arc::new(Self::build(self.a.opposite(), self.b.opposite(), Some(Arc::downgrade(self)))))
            .clone()
    }

    fn point(&self, v: usize, i: usize) -> usize {
        i * self.a_vertices() + v
    }
}

fn same(a: &Arc<TensorContext>, b: &Arc<TensorContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A `Λ`-module: `A`-modules on the vertices of `Q`, `A`-maps on its arrows.
#[derive(Debug, Clone)]
pub struct LayeredRep {
    ctx: Arc<TensorContext>,
    branches: Vec<BqaModule>,
    /// `maps[α][v]` is the component at `A`-vertex `v` of `X_α`.
    maps: Vec<Vec<Matrix>>,
}

impl PartialEq for LayeredRep {
    fn eq(&self, other: &Self) -> bool {
        same(&self.ctx, &other.ctx) && self.branches == other.branches && self.maps == other.maps
    }
}

impl LayeredRep {
    pub fn new(ctx: &Arc<TensorContext>, branches: Vec<BqaModule>, maps: Vec<Vec<Matrix>>) -> Result<Self, LayeredError> {
        if branches.len() != ctx.q_vertices() || maps.len() != ctx.q_arrows().len() {
            return Err(LayeredError::ShapeMismatch("vertex or arrow count".into()));
        }
        for (alpha, arrow) in ctx.q_arrows().iter().enumerate() {
            if maps[alpha].len() != ctx.a_vertices() {
                return Err(LayeredError::ShapeMismatch(format!("arrow {} block count", arrow.name)));
            }
            for v in 0..ctx.a_vertices() {
                let want = (branches[arrow.target].dims()[v], branches[arrow.source].dims()[v]);
                if maps[alpha][v].shape() != want {
                    return Err(LayeredError::ShapeMismatch(format!(
                        "arrow {} at A-vertex {}: {:?}, expected {:?}",
                        arrow.name,
                        v + 1,
                        maps[alpha][v].shape(),
                        want
                    )));
                }
            }
        }
        Ok(LayeredRep {
            ctx: ctx.clone(),
            branches,
            maps,
        })
    }

    pub fn zero(ctx: &Arc<TensorContext>) -> Self {
        Self::from_rep(ctx, &ctx.pres.zero_rep())
    }

    pub fn context(&self) -> &Arc<TensorContext> {
        &self.ctx
    }

    pub fn branch(&self, i: usize) -> &BqaModule {
        &self.branches[i]
    }

    pub fn branches(&self) -> &[BqaModule] {
        &self.branches
    }

    pub fn arrow_map(&self, alpha: usize) -> &[Matrix] {
        &self.maps[alpha]
    }

    pub fn arrow_hom(&self, alpha: usize) -> bqa::BqaHom {
        let arrow = &self.ctx.q_arrows()[alpha];
        bqa::BqaHom {
            source: self.branches[arrow.source].clone(),
            target: self.branches[arrow.target].clone(),
            maps: self.maps[alpha].clone(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.branches.iter().map(BqaModule::total_dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.branches.iter().all(BqaModule::is_zero)
    }

    /// The representation of the tensor presentation.
    pub fn to_rep(&self) -> Rep {
        let ctx = &self.ctx;
        let (na, nq) = (ctx.a_vertices(), ctx.q_vertices());
        let mut dims = vec![0; na * nq];
        for i in 0..nq {
            for v in 0..na {
                dims[ctx.point(v, i)] = self.branches[i].dims()[v];
            }
        }
        let mut maps = vec![Matrix::zeros(ctx.field(), 0, 0); ctx.pres.arrows().len()];
        for i in 0..nq {
            for a in 0..ctx.a.bound_quiver().quiver().arrows().len() {
                maps[ctx.pres.factor_arrow(0, a, &[0, i])] = self.branches[i].map(a).clone();
            }
        }
        for alpha in 0..ctx.q_arrows().len() {
            for v in 0..na {
                maps[ctx.pres.factor_arrow(1, alpha, &[v, 0])] = self.maps[alpha][v].clone();
            }
        }
        Rep { dims, maps }
    }

    pub fn from_rep(ctx: &Arc<TensorContext>, rep: &Rep) -> Self {
        let (na, nq) = (ctx.a_vertices(), ctx.q_vertices());
        let na_arrows = ctx.a.bound_quiver().quiver().arrows().len();
        let branches = (0..nq)
            .map(|i| {
                let dims = (0..na).map(|v| rep.dims[ctx.point(v, i)]).collect();
                let maps = (0..na_arrows)
                    .map(|a| rep.maps[ctx.pres.factor_arrow(0, a, &[0, i])].clone())
                    .collect();
                BqaModule::from_rep(&ctx.a, Rep { dims, maps })
            })
            .collect();
        let maps = (0..ctx.q_arrows().len())
            .map(|alpha| {
                (0..na)
                    .map(|v| rep.maps[ctx.pres.factor_arrow(1, alpha, &[v, 0])].clone())
                    .collect()
            })
            .collect();
        LayeredRep {
            ctx: ctx.clone(),
            branches,
            maps,
        }
    }

    /// `X_p` at each `A`-vertex for a path of `Q` (identity on trivial paths).
    pub fn path_map(&self, p: &Path) -> Vec<Matrix> {
        (0..self.ctx.a_vertices())
            .map(|v| {
                let mut acc = Matrix::identity(self.ctx.field(), self.branches[p.source].dims()[v]);
                for &alpha in &p.arrows {
                    acc = self.maps[alpha][v].mul(&acc);
                }
                acc
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Branch module at a `Q`-vertex violates an `A`-relation.
    Branch { vertex: usize, generator: usize },
    /// `X_α` does not commute with an `A`-arrow.
    Naturality { arrow: usize, a_arrow: usize },
    /// A generator of `I` does not act as zero.
    Relation { generator: usize },
}

impl Violation {
    pub fn describe(&self, ctx: &TensorContext) -> String {
        match self {
            Violation::Branch { vertex, generator } => {
                let g = &ctx.a.bound_quiver().ideal().generators()[*generator];
                format!("branch {} violates {}", vertex + 1, g.display(ctx.a.bound_quiver().quiver()))
            }
            Violation::Naturality { arrow, a_arrow } => format!(
                "map {} not natural for {}",
                ctx.q_arrows()[*arrow].name,
                ctx.a.bound_quiver().quiver().arrow(*a_arrow).name
            ),
            Violation::Relation { generator } => {
                let g = &ctx.b.bound_quiver().ideal().generators()[*generator];
                format!("relation {} nonzero", g.display(ctx.b.bound_quiver().quiver()))
            }
        }
    }
}

pub fn validate(x: &LayeredRep) -> Vec<Violation> {
    let ctx = &x.ctx;
    let mut out = Vec::new();
    for (i, b) in x.branches.iter().enumerate() {
        for generator in bqa::check_module(b) {
            out.push(Violation::Branch { vertex: i, generator });
        }
    }
    for (alpha, arrow) in ctx.q_arrows().iter().enumerate() {
        let (src, tgt) = (&x.branches[arrow.source], &x.branches[arrow.target]);
        for (a, aa) in ctx.a.bound_quiver().quiver().arrows().iter().enumerate() {
            let lhs = tgt.map(a).mul(&x.maps[alpha][aa.source]);
            let rhs = x.maps[alpha][aa.target].mul(src.map(a));
            if lhs != rhs {
                out.push(Violation::Naturality { arrow: alpha, a_arrow: a });
            }
        }
    }
    for (g, gen) in ctx.b.bound_quiver().ideal().generators().iter().enumerate() {
        if x.path_map(gen).iter().any(|m| !m.is_zero()) {
            out.push(Violation::Relation { generator: g });
        }
    }
    out
}

/// Total incoming map `⊕_{e(α)=i} X_{s(α)} -> X_i` at each `A`-vertex.
fn incoming(x: &LayeredRep, i: usize) -> (Vec<usize>, Vec<Matrix>) {
    let ctx = &x.ctx;
    let arrows: Vec<usize> = ctx.b.bound_quiver().quiver().arrows_into(i);
    let mats = (0..ctx.a_vertices())
        .map(|v| {
            let mut m = Matrix::zeros(ctx.field(), x.branches[i].dims()[v], 0);
            for &alpha in &arrows {
                m = m.hstack(&x.maps[alpha][v]);
            }
            m
        })
        .collect();
    (arrows, mats)
}

fn incoming_hom(x: &LayeredRep, i: usize) -> bqa::BqaHom {
    let (arrows, maps) = incoming(x, i);
    let parts: Vec<&BqaModule> = arrows
        .iter()
        .map(|&alpha| &x.branches[x.ctx.q_arrows()[alpha].source])
        .collect();
    bqa::BqaHom {
        source: bqa::direct_sum(&x.ctx.a, &parts),
        target: x.branches[i].clone(),
        maps,
    }
}

pub fn coker_i(x: &LayeredRep, i: usize) -> BqaModule {
    bqa::cokernel(&incoming_hom(x, i)).0
}

pub fn ker_i(x: &LayeredRep, i: usize) -> BqaModule {
    bqa::kernel(&incoming_hom(x, i)).0
}

/// `∩_{s(α)=i} Ker X_α` (the whole branch at a sink).
pub fn ker_out_i(x: &LayeredRep, i: usize) -> BqaModule {
    let ctx = &x.ctx;
    let out = ctx.b.bound_quiver().quiver().arrows_out_of(i);
    let subs: Vec<Subspace> = (0..ctx.a_vertices())
        .map(|v| {
            let kers: Vec<Subspace> = out.iter().map(|&alpha| x.maps[alpha][v].kernel()).collect();
            Subspace::intersect_all(ctx.field(), x.branches[i].dims()[v], &kers).unwrap()
        })
        .collect();
    let b = &x.branches[i];
    BqaModule::from_rep(&ctx.a, ctx.a.presentation().subrep(b.rep(), &subs).0)
}

/// Named subcategories of `A`-mod used as the class `𝒳`.
#[derive(Debug, Clone)]
pub enum ClassPredicate {
    All,
    Proj,
    Inj,
    Gproj(usize),
    SemiGp(usize),
    PerpOf(Vec<BqaModule>, usize),
}

impl ClassPredicate {
    pub fn name(&self) -> String {
        match self {
            ClassPredicate::All => "ALL".into(),
            ClassPredicate::Proj => "PROJ".into(),
            ClassPredicate::Inj => "INJ".into(),
            ClassPredicate::Gproj(n) => format!("GPROJ({n})"),
            ClassPredicate::SemiGp(n) => format!("SEMI_GP({n})"),
            ClassPredicate::PerpOf(t, n) => format!("PERP_OF({} modules,{n})", t.len()),
        }
    }

    pub fn accepts(&self, m: &BqaModule) -> bool {
        match self {
            ClassPredicate::All => true,
            ClassPredicate::Proj => bqa::pd_up_to(m, 0) == PdBound::Exactly(0),
            ClassPredicate::Inj => bqa::pd_up_to(&bqa::dual(m), 0) == PdBound::Exactly(0),
            ClassPredicate::Gproj(n) => bqa::gp_cert(m, *n).is_certified(),
            ClassPredicate::SemiGp(n) => bqa::semi_gp_cert(m, *n).is_certified(),
            ClassPredicate::PerpOf(ts, n) => ts.iter().all(|t| bqa::ext_dims(m, t, *n)[1..].iter().all(|&d| d == 0)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    M1,
    M2,
    M3,
    E1,
    E2,
    E3,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::M1 => "m1",
            Condition::M2 => "m2",
            Condition::M3 => "m3",
            Condition::E1 => "e1",
            Condition::E2 => "e2",
            Condition::E3 => "e3",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Pass,
    /// Failed condition, offending vertex or arrow (0-based), and a short witness.
    Fail { condition: Condition, vertex: Option<usize>, arrow: Option<usize>, witness: String },
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(self, CheckResult::Pass)
    }

    pub fn render(&self, ctx: &TensorContext) -> String {
        match self {
            CheckResult::Pass => "PASS".into(),
            CheckResult::Fail { condition, vertex, arrow, witness } => {
                let at = match (vertex, arrow) {
                    (Some(v), _) => format!("vertex {}", v + 1),
                    (_, Some(a)) => format!("arrow {}", ctx.q_arrows()[*a].name),
                    _ => String::new(),
                };
                format!("FAIL({condition}, {at}: {witness})")
            }
        }
    }
}

fn fail(condition: Condition, vertex: Option<usize>, arrow: Option<usize>, witness: String) -> CheckResult {
    CheckResult::Fail {
        condition,
        vertex,
        arrow,
        witness,
    }
}

/// Separated monic test: (m1) at every vertex, (m2) at every arrow, then (m3).
pub fn smon_check(x: &LayeredRep, pred: &ClassPredicate) -> CheckResult {
    let ctx = &x.ctx;
    let bq = ctx.b.bound_quiver();
    let na = ctx.a_vertices();
    for i in 0..ctx.q_vertices() {
        let arrows = bq.quiver().arrows_into(i);
        for v in 0..na {
            let sum: usize = arrows.iter().map(|&alpha| x.maps[alpha][v].rank()).sum();
            let (_, mats) = incoming(x, i);
            let joint = mats[v].rank();
            if joint != sum {
                return fail(Condition::M1, Some(i), None, format!("images sum to {joint} < {sum}"));
            }
        }
    }
    for alpha in 0..bq.quiver().arrows().len() {
        let ks = bq.k_alpha(alpha).expect("arrow index in range");
        let maps: Vec<Vec<Matrix>> = ks.iter().map(|q| x.path_map(q)).collect();
        let s = bq.quiver().arrow(alpha).source;
        for v in 0..na {
            let ker = x.maps[alpha][v].kernel();
            let images: Vec<Subspace> = maps.iter().map(|m| m[v].image()).collect();
            let sum = Subspace::sum(ctx.field(), x.branches[s].dims()[v], &images).unwrap();
            if ker != sum {
                return fail(
                    Condition::M2,
                    None,
                    Some(alpha),
                    format!("ker has dim {}, sum of images dim {}", ker.dim(), sum.dim()),
                );
            }
        }
    }
    if !matches!(pred, ClassPredicate::All) {
        for i in 0..ctx.q_vertices() {
            if !pred.accepts(&coker_i(x, i)) {
                return fail(Condition::M3, Some(i), None, format!("coker not in {}", pred.name()));
            }
        }
    }
    CheckResult::Pass
}

/// Separated epic test: (e1) at every vertex, (e2) at every arrow, then (e3).
pub fn sepi_check(x: &LayeredRep, pred: &ClassPredicate) -> CheckResult {
    let ctx = &x.ctx;
    let bq = ctx.b.bound_quiver();
    let na = ctx.a_vertices();
    for i in 0..ctx.q_vertices() {
        let arrows = bq.quiver().arrows_out_of(i);
        for v in 0..na {
            let sum: usize = arrows.iter().map(|&alpha| x.maps[alpha][v].rank()).sum();
            let mut stacked = Matrix::zeros(ctx.field(), 0, x.branches[i].dims()[v]);
            for &alpha in &arrows {
                stacked = stacked.vstack(&x.maps[alpha][v]);
            }
            let joint = stacked.rank();
            if joint != sum {
                return fail(Condition::E1, Some(i), None, format!("joint image {joint} < {sum}"));
            }
        }
    }
    for alpha in 0..bq.quiver().arrows().len() {
        let ls = bq.l_alpha(alpha).expect("arrow index in range");
        let maps: Vec<Vec<Matrix>> = ls.iter().map(|q| x.path_map(q)).collect();
        let t = bq.quiver().arrow(alpha).target;
        for v in 0..na {
            let im = x.maps[alpha][v].image();
            let kers: Vec<Subspace> = maps.iter().map(|m| m[v].kernel()).collect();
            let cap = Subspace::intersect_all(ctx.field(), x.branches[t].dims()[v], &kers).unwrap();
            if im != cap {
                return fail(
                    Condition::E2,
                    None,
                    Some(alpha),
                    format!("image dim {}, intersection of kernels dim {}", im.dim(), cap.dim()),
                );
            }
        }
    }
    if !matches!(pred, ClassPredicate::All) {
        for i in 0..ctx.q_vertices() {
            if !pred.accepts(&ker_out_i(x, i)) {
                return fail(Condition::E3, Some(i), None, format!("kernel not in {}", pred.name()));
            }
        }
    }
    CheckResult::Pass
}

/// `m ⊗ u` with `(m ⊗ u)_i = m^{dim u_i}`; copy `c` of `m` occupies rows `c·dim m_v ..`.
pub fn tensor(ctx: &Arc<TensorContext>, m: &BqaModule, u: &BqaModule) -> Result<LayeredRep, LayeredError> {
    if m.algebra().field() != u.algebra().field() {
        return Err(LayeredError::PrimeMismatch(m.algebra().field().p(), u.algebra().field().p()));
    }
    if **m.algebra() != *ctx.a || **u.algebra() != *ctx.b {
        return Err(LayeredError::ContextMismatch);
    }
    let fp = ctx.field();
    let branches = (0..ctx.q_vertices())
        .map(|i| {
            let k = u.dims()[i];
            let dims = m.dims().iter().map(|d| d * k).collect();
            let maps = (0..m.rep().maps.len())
                .map(|a| Matrix::identity(fp, k).kron(m.map(a)).unwrap())
                .collect();
            BqaModule::from_rep(&ctx.a, Rep { dims, maps })
        })
        .collect();
    let maps = (0..ctx.q_arrows().len())
        .map(|alpha| {
            (0..ctx.a_vertices())
                .map(|v| u.map(alpha).kron(&Matrix::identity(fp, m.dims()[v])).unwrap())
                .collect()
        })
        .collect();
    Ok(LayeredRep {
        ctx: ctx.clone(),
        branches,
        maps,
    })
}

/// Indecomposable projective `P_A(v) ⊗ P(i)`.
pub fn layered_projective(ctx: &Arc<TensorContext>, v: usize, i: usize) -> LayeredRep {
    LayeredRep::from_rep(ctx, &ctx.pres.projective(ctx.point(v, i)))
}

pub fn layered_projectives(ctx: &Arc<TensorContext>) -> Vec<LayeredRep> {
    (0..ctx.q_vertices())
        .flat_map(|i| (0..ctx.a_vertices()).map(move |v| (v, i)))
        .map(|(v, i)| layered_projective(ctx, v, i))
        .collect()
}

/// Cover generators as `(A-vertex, Q-vertex)` pairs, and the cover itself.
pub fn layered_projective_cover(x: &LayeredRep) -> (Vec<(usize, usize)>, LayeredRep, Vec<Matrix>) {
    let ctx = &x.ctx;
    let cover = ctx.pres.cover(&x.to_rep());
    let gens = cover
        .free
        .gens
        .iter()
        .map(|&p| (p % ctx.a_vertices(), p / ctx.a_vertices()))
        .collect();
    let p = LayeredRep::from_rep(ctx, &cover.free.rep(&ctx.pres));
    (gens, p, cover.epi)
}

pub fn layered_syzygy(x: &LayeredRep) -> LayeredRep {
    LayeredRep::from_rep(&x.ctx, &x.ctx.pres.syzygy(&x.to_rep()))
}

pub fn layered_resolution(x: &LayeredRep, length: usize) -> crate::rep::Resolution {
    x.ctx.pres.resolution(&x.to_rep(), length)
}

pub fn layered_hom_dim(x: &LayeredRep, y: &LayeredRep) -> usize {
    x.ctx.pres.hom_space(&x.to_rep(), &y.to_rep()).len()
}

pub fn layered_ext_dims(x: &LayeredRep, y: &LayeredRep, max_k: usize) -> Vec<usize> {
    let pres = &x.ctx.pres;
    let res = pres.resolution(&x.to_rep(), max_k + 1);
    let cx = pres.hom_complex(&res, &y.to_rep());
    (0..=max_k).map(|k| cx.cohomology_dim(k)).collect()
}

pub fn layered_ext_dim(x: &LayeredRep, y: &LayeredRep, k: usize) -> usize {
    layered_ext_dims(x, y, k)[k]
}

pub fn layered_pd(x: &LayeredRep, bound: usize) -> PdBound {
    bqa::pd_of_rep(&x.ctx.pres, &x.to_rep(), bound)
}

pub fn layered_semi_gp_cert(x: &LayeredRep, bound: usize) -> Verdict {
    bqa::semi_gp_rep(&x.ctx.pres, &x.to_rep(), x.ctx.regular_rep(), bound, Side::Module)
}

/// Bounded totally-reflexive test in the layered category.
pub fn layered_gp_cert(x: &LayeredRep, bound: usize) -> Verdict {
    let v = layered_semi_gp_cert(x, bound);
    if !v.is_certified() {
        return v;
    }
    let ctx = &x.ctx;
    let op = ctx.opposite();
    let rep = x.to_rep();
    let st = ctx.pres.star(&rep).rep;
    let v = bqa::semi_gp_rep(&op.pres, &st, op.regular_rep(), bound, Side::Dual);
    if !v.is_certified() {
        return v;
    }
    let (_, ev) = ctx.pres.evaluation(&op.pres, &rep);
    let kernel: usize = ev.iter().map(|f| f.cols() - f.rank()).sum();
    let cokernel: usize = ev.iter().map(|f| f.rows() - f.rank()).sum();
    if kernel + cokernel > 0 {
        return Verdict::Refuted(Witness::NotReflexive { kernel, cokernel });
    }
    Verdict::CertifiedUpTo(bound)
}

/// `DA ⊗ kQ/I` where `DA` is the dual of the opposite regular module.
pub fn dual_regular_tensor(ctx: &Arc<TensorContext>) -> LayeredRep {
    let da = bqa::dual(&bqa::regular(&ctx.a.opposite()));
    let da = BqaModule::from_rep(&ctx.a, da.rep().clone());
    tensor(ctx, &da, &bqa::regular(&ctx.b)).expect("same context")
}

/// `Ext^k` vanishing against `t` for `1 <= k <= bound`; returns the first nonzero degree.
pub fn layered_perp_witness(x: &LayeredRep, t: &LayeredRep, bound: usize) -> Option<(usize, usize)> {
    bqa::first_nonvanishing(&x.ctx.pres, &x.to_rep(), &t.to_rep(), bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdjunctionReport {
    /// `dim Ext^k_A(Coker_i x, m)` and `dim Ext^k_Λ(x, m ⊗ S(i))`.
    pub coker: (usize, usize),
    /// `dim Ext^k_Λ(m ⊗ P(i), x)` and `dim Ext^k_A(m, x_i)`.
    pub tensor: (usize, usize),
}

impl AdjunctionReport {
    pub fn agrees(&self) -> bool {
        self.coker.0 == self.coker.1 && self.tensor.0 == self.tensor.1
    }
}

/// Both adjunction identities in degree `k`; the first needs `x` separated monic when `k >= 1`.
pub fn adjunction_check(x: &LayeredRep, m: &BqaModule, i: usize, k: usize) -> Result<AdjunctionReport, LayeredError> {
    if k >= 1 && !smon_check(x, &ClassPredicate::All).passed() {
        return Err(LayeredError::SmonRequired);
    }
    let coker = adjunction_coker(x, m, i, k);
    Ok(AdjunctionReport {
        coker,
        tensor: adjunction_tensor(x, m, i, k),
    })
}

pub fn adjunction_coker(x: &LayeredRep, m: &BqaModule, i: usize, k: usize) -> (usize, usize) {
    let ctx = &x.ctx;
    let lhs = bqa::ext_dim(&coker_i(x, i), m, k);
    let si = bqa::simple(&ctx.b, i);
    let rhs = layered_ext_dim(x, &tensor(ctx, m, &si).expect("same context"), k);
    (lhs, rhs)
}

pub fn adjunction_tensor(x: &LayeredRep, m: &BqaModule, i: usize, k: usize) -> (usize, usize) {
    let ctx = &x.ctx;
    let pi = bqa::projective(&ctx.b, i);
    let lhs = layered_ext_dim(&tensor(ctx, m, &pi).expect("same context"), x, k);
    let rhs = bqa::ext_dim(m, &x.branches[i], k);
    (lhs, rhs)
}

/// Vertexwise dual over `(A^op, Q^op, I^op)`.
pub fn dual_layered(x: &LayeredRep) -> LayeredRep {
    let op = x.ctx.opposite();
    LayeredRep::from_rep(&op, &x.ctx.pres.dual(&x.to_rep()))
}

/// Extension `0 -> y -> E -> x -> 0` whose class is the combination of a basis of
/// `Hom(Ω x, y)` with the given coefficients.
pub fn layered_extension(x: &LayeredRep, y: &LayeredRep, coeffs: impl FnMut(usize) -> u32) -> LayeredRep {
    LayeredRep::from_rep(&x.ctx, &x.ctx.pres.extension(&x.to_rep(), &y.to_rep(), coeffs))
}

/// `[X; Y]_φ` for a source vertex `n`: `X` over `Λ'` (Q without `n`), `Y` an `A`-module,
/// and `φ : rad P(n) ⊗ Y -> X`.
#[derive(Debug, Clone)]
pub struct Triple {
    pub parent: Arc<TensorContext>,
    pub source: usize,
    pub reduced: Arc<TensorContext>,
    /// Old vertex of `Q` for each vertex of the reduced quiver.
    pub kept: Vec<usize>,
    pub x: LayeredRep,
    pub y: BqaModule,
    /// `phi[j][v]`: component at reduced vertex `j`, `A`-vertex `v`.
    pub phi: Vec<Vec<Matrix>>,
}

impl PartialEq for Triple {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.x == other.x && self.y == other.y && self.phi == other.phi
    }
}

/// `Λ'` for `Q` with the source `n` removed, plus the kept old vertices.
pub fn reduced_context(ctx: &Arc<TensorContext>, n: usize) -> Result<(Arc<TensorContext>, Vec<usize>), LayeredError> {
    let bq = ctx.b.bound_quiver();
    let q = bq.quiver();
    if n >= q.vertex_count() || !q.arrows_into(n).is_empty() {
        return Err(LayeredError::NotSource(n));
    }
    let kept: Vec<usize> = (0..q.vertex_count()).filter(|&v| v != n).collect();
    let new_of = |v: usize| if v > n { v - 1 } else { v };
    let mut arrow_map = vec![usize::MAX; q.arrows().len()];
    let mut arrows = Vec::new();
    for (a, arrow) in q.arrows().iter().enumerate() {
        if arrow.source != n {
            arrow_map[a] = arrows.len();
            arrows.push(Arrow::new(arrow.name.clone(), new_of(arrow.source), new_of(arrow.target)));
        }
    }
    let q2 = Quiver::new(kept.len(), arrows).expect("subquiver is valid");
    let gens = bq
        .ideal()
        .generators()
        .iter()
        .filter(|g| g.source != n)
        .map(|g| Path {
            source: new_of(g.source),
            target: new_of(g.target),
            arrows: g.arrows.iter().map(|&a| arrow_map[a]).collect(),
        })
        .collect();
    let bq2 = BoundQuiver::new(q2, MonomialIdeal::new(gens).expect("lengths preserved"))
        .expect("full subquiver of an admissible monomial quiver");
    let b2 = Algebra::new(ctx.field(), bq2);
    let reduced = TensorContext::new(ctx.a.clone(), b2)?;
    Ok((reduced, kept))
}

/// Nonzero paths of length at least one leaving `n`, grouped by reduced target vertex.
fn radical_paths(ctx: &TensorContext, n: usize, kept: &[usize]) -> Vec<Vec<Path>> {
    let bq = ctx.b.bound_quiver();
    kept.iter()
        .map(|&j| bq.paths_from(n).filter(|p| p.target == j && !p.is_trivial()).cloned().collect())
        .collect()
}

/// `rad P(n)` as a module over the reduced path algebra.
pub fn radical_of_projective(ctx: &Arc<TensorContext>, n: usize) -> Result<BqaModule, LayeredError> {
    let (reduced, kept) = reduced_context(ctx, n)?;
    let p = bqa::projective(&ctx.b, n);
    let dims = kept.iter().map(|&j| p.dims()[j]).collect();
    let maps = ctx
        .b
        .bound_quiver()
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.source != n)
        .map(|(a, _)| p.map(a).clone())
        .collect();
    // trivial path e_n sits at vertex n only, so dropping n leaves the radical
    Ok(BqaModule::from_rep(reduced.factor(), Rep { dims, maps }))
}

pub fn split_at_source(x: &LayeredRep, n: usize) -> Result<Triple, LayeredError> {
    let ctx = &x.ctx;
    let (reduced, kept) = reduced_context(ctx, n)?;
    let q = ctx.b.bound_quiver().quiver();
    let branches: Vec<BqaModule> = kept.iter().map(|&j| x.branches[j].clone()).collect();
    let maps: Vec<Vec<Matrix>> = q
        .arrows()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.source != n)
        .map(|(a, _)| x.maps[a].clone())
        .collect();
    let xr = LayeredRep {
        ctx: reduced.clone(),
        branches,
        maps,
    };
    let paths = radical_paths(ctx, n, &kept);
    let phi = paths
        .iter()
        .enumerate()
        .map(|(j, ps)| {
            (0..ctx.a_vertices())
                .map(|v| {
                    let mut m = Matrix::zeros(ctx.field(), xr.branches[j].dims()[v], 0);
                    for p in ps {
                        m = m.hstack(&x.path_map(p)[v]);
                    }
                    m
                })
                .collect()
        })
        .collect();
    Ok(Triple {
        parent: ctx.clone(),
        source: n,
        reduced,
        kept,
        x: xr,
        y: x.branches[n].clone(),
        phi,
    })
}

pub fn assemble(t: &Triple) -> LayeredRep {
    let ctx = &t.parent;
    let q = ctx.b.bound_quiver().quiver();
    let n = t.source;
    let paths = radical_paths(ctx, n, &t.kept);
    let new_of = |v: usize| if v > n { v - 1 } else { v };
    let mut branches = Vec::with_capacity(q.vertex_count());
    for i in 0..q.vertex_count() {
        branches.push(if i == n { t.y.clone() } else { t.x.branches[new_of(i)].clone() });
    }
    let mut reduced_arrow = 0;
    let maps = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            if arrow.source == n {
                let j = new_of(arrow.target);
                let c = paths[j]
                    .iter()
                    .position(|p| p.arrows == [a])
                    .expect("arrows out of n are nonzero paths");
                (0..ctx.a_vertices())
                    .map(|v| {
                        let w = t.y.dims()[v];
                        t.phi[j][v].block(0, c * w, t.phi[j][v].rows(), w)
                    })
                    .collect()
            } else {
                let m = t.x.maps[reduced_arrow].clone();
                reduced_arrow += 1;
                m
            }
        })
        .collect();
    LayeredRep {
        ctx: ctx.clone(),
        branches,
        maps,
    }
}

impl Triple {
    /// `rad P(n) ⊗ Y` over the reduced context.
    pub fn domain(&self) -> LayeredRep {
        let rad = radical_of_projective(&self.parent, self.source).expect("source checked");
        let rad = BqaModule::from_rep(self.reduced.factor(), rad.rep().clone());
        tensor(&self.reduced, &self.y, &rad).expect("same context")
    }

    /// `φ` as per-point matrices of the reduced tensor presentation.
    pub fn phi_rep(&self) -> Vec<Matrix> {
        let na = self.reduced.a_vertices();
        let mut out = vec![Matrix::zeros(self.reduced.field(), 0, 0); na * self.reduced.q_vertices()];
        for (j, comps) in self.phi.iter().enumerate() {
            for (v, m) in comps.iter().enumerate() {
                out[self.reduced.point(v, j)] = m.clone();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XzReport {
    pub bound: usize,
    /// `φ* : Hom(X, Λ') -> Hom(rad P(n) ⊗ Y, Λ')` is onto.
    pub phi_star_onto: bool,
    /// First degree where `Ext^i(φ, Λ')` fails to be bijective.
    pub ext_failure: Option<usize>,
    /// Semi-GP verdict for `Y`.
    pub y_verdict: Verdict,
    /// Semi-GP verdict for the assembled module.
    pub assembled: Verdict,
}

impl XzReport {
    pub fn conditions_hold(&self) -> bool {
        self.phi_star_onto && self.ext_failure.is_none() && self.y_verdict.is_certified()
    }

    pub fn agrees(&self) -> bool {
        self.conditions_hold() == self.assembled.is_certified()
    }
}

/// Evaluates the three triangular conditions up to `bound` and the direct certificate,
/// retrying once at `2 * bound` on disagreement.
pub fn xz_condition_check(t: &Triple, bound: usize) -> XzReport {
    let r = xz_at(t, bound);
    if r.agrees() {
        r
    } else {
        xz_at(t, 2 * bound)
    }
}

fn xz_at(t: &Triple, bound: usize) -> XzReport {
    let pres = &t.reduced.pres;
    let lam = t.reduced.regular_rep();
    let dom = t.domain().to_rep();
    let x = t.x.to_rep();
    let phi = t.phi_rep();
    debug_assert!(pres.is_hom(&dom, &x, &phi));

    let homs = pres.hom_space(&x, lam);
    let target_dim = pres.hom_space(&dom, lam).len();
    let composed: Vec<Vec<u32>> = homs
        .iter()
        .map(|h| h.iter().zip(&phi).flat_map(|(f, p)| f.mul(p).data().to_vec()).collect())
        .collect();
    let width = composed.first().map_or(0, Vec::len);
    let span = Subspace::from_vectors(pres.field(), width, &composed);
    let phi_star_onto = span.dim() == target_dim;

    let res_dom = pres.resolution(&dom, bound + 1);
    let res_x = pres.resolution(&x, bound + 1);
    let cx_dom = pres.hom_complex(&res_dom, lam);
    let cx_x = pres.hom_complex(&res_x, lam);
    let lift = pres.lift(&res_dom, &res_x, &phi, bound);
    let acts = pres.actions(lam);
    let mut ext_failure = None;
    for i in 1..=bound {
        let d_dom = if i < res_dom.terms.len() || res_dom.complete { cx_dom.cohomology_dim(i) } else { 0 };
        let d_x = if i < res_x.terms.len() || res_x.complete { cx_x.cohomology_dim(i) } else { 0 };
        if d_dom != d_x {
            ext_failure = Some(i);
            break;
        }
        if d_dom == 0 {
            continue;
        }
        let tk = pres.pullback(&res_dom.terms[i], &res_x.terms[i], &lift[i], lam, &acts);
        if induced_rank(pres.field(), &cx_x, &cx_dom, &tk, i) != d_dom {
            ext_failure = Some(i);
            break;
        }
    }
    XzReport {
        bound,
        phi_star_onto,
        ext_failure,
        y_verdict: bqa::semi_gp_cert(&t.y, bound),
        assembled: layered_semi_gp_cert(&assemble(t), bound),
    }
}

/// Kronecker quiver with `r` arrows `2 -> 1` and no relations, over the field of `a`.
pub fn kronecker_context(a: &Arc<Algebra>, r: usize) -> Arc<TensorContext> {
    let arrows = (0..r).map(|k| Arrow::new(format!("k{}", k + 1), 1, 0)).collect();
    let q = Quiver::new(2, arrows).expect("valid Kronecker quiver");
    let b = Algebra::new(a.field(), BoundQuiver::new(q, MonomialIdeal::zero()).expect("acyclic"));
    TensorContext::new(a.clone(), b).expect("Kronecker quiver follows the labeling")
}

/// `[P^r; U]_{φ^r}` for the left projective approximation `φ : U -> P`.
pub fn approximation_triple(u: &BqaModule, r: usize) -> Triple {
    assert!(r >= 1);
    let ctx = kronecker_context(u.algebra(), r);
    let approx = bqa::left_proj_approx(u);
    let (reduced, kept) = reduced_context(&ctx, 1).expect("vertex 2 is a source");
    let p = &approx.target;
    let pr = bqa::direct_sum(u.algebra(), &vec![p; r]);
    let x = LayeredRep {
        ctx: reduced.clone(),
        branches: vec![pr],
        maps: vec![],
    };
    let fp = ctx.field();
    let phi = vec![(0..ctx.a_vertices())
        .map(|v| Matrix::block_diag(fp, &vec![approx.maps[v].clone(); r]))
        .collect()];
    Triple {
        parent: ctx,
        source: 1,
        reduced,
        kept,
        x,
        y: u.clone(),
        phi,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q3_bq() -> BoundQuiver {
        let q = Quiver::new(3, vec![Arrow::new("a", 2, 1), Arrow::new("b", 1, 0)]).unwrap();
        let rel = q.path_from_names(&["b", "a"]).unwrap();
        BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap()
    }

    fn field_alg(fp: Fp) -> Arc<Algebra> {
        Algebra::new(fp, BoundQuiver::new(Quiver::new(1, vec![]).unwrap(), MonomialIdeal::zero()).unwrap())
    }

    fn kx2() -> Arc<Algebra> {
        let q = Quiver::new(1, vec![Arrow::new("x", 0, 0)]).unwrap();
        let rel = q.path(&[0, 0]).unwrap();
        Algebra::new(Fp::two(), BoundQuiver::new(q, MonomialIdeal::new(vec![rel]).unwrap()).unwrap())
    }

    fn a2() -> Arc<Algebra> {
        let q = Quiver::new(2, vec![Arrow::new("a", 1, 0)]).unwrap();
        Algebra::new(Fp::two(), BoundQuiver::new(q, MonomialIdeal::zero()).unwrap())
    }

    fn k_q3() -> Arc<TensorContext> {
        let fp = Fp::two();
        TensorContext::new(field_alg(fp), Algebra::new(fp, q3_bq())).unwrap()
    }

    #[test]
    fn tensor_with_projective_of_q3() {
        let ctx = TensorContext::new(kx2(), Algebra::new(Fp::two(), q3_bq())).unwrap();
        let m = bqa::simple(ctx.base(), 0);
        let x = tensor(&ctx, &m, &bqa::projective(ctx.factor(), 2)).unwrap();
        assert_eq!(x.branch(2), &m);
        assert_eq!(x.branch(1), &m);
        assert!(x.branch(0).is_zero());
        assert_eq!(x.arrow_map(0)[0], Matrix::identity(Fp::two(), 1));
        assert!(validate(&x).is_empty());
        for i in 0..3 {
            let c = coker_i(&x, i);
            assert_eq!(c.total_dim(), if i == 2 { 1 } else { 0 });
        }
    }

    #[test]
    fn layered_projectives_are_tensors() {
        let ctx = TensorContext::new(kx2(), Algebra::new(Fp::two(), q3_bq())).unwrap();
        for i in 0..3 {
            let t = tensor(&ctx, &bqa::projective(ctx.base(), 0), &bqa::projective(ctx.factor(), i)).unwrap();
            assert_eq!(t, layered_projective(&ctx, 0, i));
        }
    }

    #[test]
    fn smon_examples() {
        let ctx = k_q3();
        let k = bqa::simple(ctx.base(), 0);
        let p3 = tensor(&ctx, &k, &bqa::projective(ctx.factor(), 2)).unwrap();
        assert!(smon_check(&p3, &ClassPredicate::All).passed());
        let s2 = tensor(&ctx, &k, &bqa::simple(ctx.factor(), 1)).unwrap();
        match smon_check(&s2, &ClassPredicate::All) {
            CheckResult::Fail { condition, arrow, .. } => {
                assert_eq!(condition, Condition::M2);
                assert_eq!(arrow, Some(1));
            }
            CheckResult::Pass => panic!("S(2) is not separated monic"),
        }
        assert!(ker_i(&p3, 1).is_zero());
    }

    #[test]
    fn sepi_duality_on_p3() {
        let ctx = k_q3();
        let k = bqa::simple(ctx.base(), 0);
        let p3 = tensor(&ctx, &k, &bqa::projective(ctx.factor(), 2)).unwrap();
        let d = dual_layered(&p3);
        assert!(sepi_check(&d, &ClassPredicate::All).passed());
        assert_eq!(dual_layered(&d), p3);
        let s2 = tensor(&ctx, &k, &bqa::simple(ctx.factor(), 1)).unwrap();
        assert!(!sepi_check(&s2, &ClassPredicate::All).passed());
    }

    #[test]
    fn planted_ext_value() {
        let ctx = TensorContext::new(kx2(), Algebra::new(Fp::two(), q3_bq())).unwrap();
        let s = bqa::simple(ctx.base(), 0);
        let x = tensor(&ctx, &s, &bqa::simple(ctx.factor(), 2)).unwrap();
        assert_eq!(layered_ext_dim(&x, &x, 1), 1);
    }

    #[test]
    fn adjunction_k0() {
        let ctx = k_q3();
        let k = bqa::simple(ctx.base(), 0);
        let p3 = tensor(&ctx, &k, &bqa::projective(ctx.factor(), 2)).unwrap();
        let r = adjunction_check(&p3, &k, 2, 0).unwrap();
        assert_eq!(r.coker, (1, 1));
        assert!(r.agrees());
    }

    #[test]
    fn split_examples() {
        let fp = Fp::two();
        let ctx = TensorContext::new(kx2(), a2()).unwrap();
        let m = bqa::simple(ctx.base(), 0);
        let x = tensor(&ctx, &m, &bqa::projective(ctx.factor(), 1)).unwrap();
        let t = split_at_source(&x, 1).unwrap();
        assert_eq!(t.y, m);
        assert_eq!(t.x.branch(0), &m);
        assert_eq!(t.phi[0][0], Matrix::identity(fp, 1));
        assert_eq!(assemble(&t), x);
        assert_eq!(split_at_source(&x, 0).unwrap_err(), LayeredError::NotSource(0));
    }

    #[test]
    fn xz_on_projective_and_simple() {
        let ctx = TensorContext::new(kx2(), a2()).unwrap();
        let p = layered_projective(&ctx, 0, 1);
        let r = xz_condition_check(&split_at_source(&p, 1).unwrap(), 4);
        assert!(r.conditions_hold() && r.assembled.is_certified());

        let a = Algebra::new(Fp::two(), q3_bq());
        let ctx = TensorContext::new(a, a2()).unwrap();
        let s3 = bqa::simple(ctx.base(), 2);
        let x = tensor(&ctx, &s3, &bqa::simple(ctx.factor(), 1)).unwrap();
        let r = xz_condition_check(&split_at_source(&x, 1).unwrap(), 4);
        assert!(!r.y_verdict.is_certified());
        assert!(r.assembled.is_refuted());
        assert!(r.agrees());
    }

    #[test]
    fn approximation_triple_examples() {
        let b = kx2();
        let t = approximation_triple(&bqa::simple(&b, 0), 2);
        assert!(smon_check(&assemble(&t), &ClassPredicate::All).passed());
        let a = Algebra::new(Fp::two(), q3_bq());
        let t = approximation_triple(&bqa::simple(&a, 2), 1);
        match smon_check(&assemble(&t), &ClassPredicate::All) {
            CheckResult::Fail { condition, .. } => assert_eq!(condition, Condition::M2),
            CheckResult::Pass => panic!("zero approximation is not monic"),
        }
        let t = approximation_triple(&bqa::projective(&a, 1), 1);
        assert!(smon_check(&assemble(&t), &ClassPredicate::All).passed());
    }
}
