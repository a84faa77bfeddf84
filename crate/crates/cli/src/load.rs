//! Turning parsed documents into algebras, modules and layered representations.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use smonkit::bqa::{self, Algebra, BqaModule};
use smonkit::exactla::{Fp, Matrix};
use smonkit::layered::{self, LayeredRep, TensorContext};
use smonkit::quiver::{Arrow, BoundQuiver, MonomialIdeal, Quiver};
use thiserror::Error;

use crate::format::{
    parse_document, AlgebraDoc, ArrowDecl, Document, FactorDoc, LayeredDoc, MapDoc, MatrixBlock, ModuleBody, ModuleDoc,
    ParseError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {msg}")]
    Invalid { path: String, msg: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

fn invalid(path: &Path, line: Option<usize>, msg: impl Into<String>) -> CliError {
    let path = match line {
        Some(l) => format!("{}:{l}", path.display()),
        None => path.display().to_string(),
    };
    CliError::Invalid { path, msg: msg.into() }
}

#[derive(Debug, Clone)]
pub struct LoadedModule {
    pub module: BqaModule,
    pub algebra_path: PathBuf,
    /// Relations the module fails, in written form.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LoadedLayered {
    pub rep: LayeredRep,
    pub base_path: PathBuf,
    /// Factor with any path resolved against the file's directory.
    pub factor: FactorDoc,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone)]
pub enum Loaded {
    Algebra(Arc<Algebra>, PathBuf),
    Module(LoadedModule),
    Layered(LoadedLayered),
}

impl Loaded {
    pub fn violations(&self) -> &[String] {
        match self {
            Loaded::Algebra(..) => &[],
            Loaded::Module(m) => &m.violations,
            Loaded::Layered(x) => &x.violations,
        }
    }
}

/// Loads files, sharing one algebra per path and one context per (base, factor)
/// so objects from different files can be compared.
#[derive(Debug, Default)]
pub struct Workspace {
    prime: Option<u32>,
    algebras: HashMap<PathBuf, Arc<Algebra>>,
    contexts: HashMap<(PathBuf, String), Arc<TensorContext>>,
}

fn read(path: &Path) -> Result<Document, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_document(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn resolve(from: &Path, reference: &str) -> PathBuf {
    let r = Path::new(reference);
    if r.is_absolute() {
        return r.to_path_buf();
    }
    from.parent().unwrap_or(Path::new("")).join(r)
}

fn key(path: &Path) -> PathBuf {
    std::fs::canonicalize(path).unwrap_or_else(|_| path.to_path_buf())
}

impl Workspace {
    /// `prime` is the `--prime` flag; files without a `prime` line use it (default 2).
    pub fn new(prime: Option<u32>) -> Self {
        Workspace {
            prime,
            ..Default::default()
        }
    }

    pub fn default_field(&self) -> Result<Fp, CliError> {
        let p = self.prime.unwrap_or(2);
        Fp::new(p as u64).map_err(|e| CliError::Usage(format!("--prime {p}: {e}")))
    }

    pub fn load(&mut self, path: &Path) -> Result<Loaded, CliError> {
        match read(path)? {
            Document::Algebra(doc) => {
                let alg = self.algebra_from_doc(path, &doc)?;
                Ok(Loaded::Algebra(alg, path.to_path_buf()))
            }
            Document::Module(doc) => self.module_from_doc(path, &doc).map(Loaded::Module),
            Document::Layered(doc) => self.layered_from_doc(path, &doc).map(Loaded::Layered),
        }
    }

    pub fn algebra(&mut self, path: &Path) -> Result<Arc<Algebra>, CliError> {
        if let Some(a) = self.algebras.get(&key(path)) {
            return Ok(a.clone());
        }
        match read(path)? {
            Document::Algebra(doc) => self.algebra_from_doc(path, &doc),
            _ => Err(invalid(path, None, "not an algebra file")),
        }
    }

    pub fn module(&mut self, path: &Path) -> Result<LoadedModule, CliError> {
        match self.load(path)? {
            Loaded::Module(m) => Ok(m),
            _ => Err(invalid(path, None, "not a module file")),
        }
    }

    fn algebra_from_doc(&mut self, path: &Path, doc: &AlgebraDoc) -> Result<Arc<Algebra>, CliError> {
        let k = key(path);
        if let Some(a) = self.algebras.get(&k) {
            return Ok(a.clone());
        }
        let fp = match (doc.prime, self.prime) {
            (Some(p), Some(q)) if p != q => {
                return Err(invalid(path, None, format!("prime {p} conflicts with --prime {q}")));
            }
            (Some(p), _) => Fp::new(p as u64).map_err(|e| invalid(path, Some(2), e.to_string()))?,
            (None, _) => self.default_field()?,
        };
        let bq = bound_quiver(path, doc)?;
        let alg = Algebra::new(fp, bq);
        self.algebras.insert(k, alg.clone());
        Ok(alg)
    }

    fn module_from_doc(&mut self, path: &Path, doc: &ModuleDoc) -> Result<LoadedModule, CliError> {
        let algebra_path = resolve(path, &doc.algebra);
        let alg = self.algebra(&algebra_path)?;
        let module = module_from_body(path, &alg, &doc.body)?;
        let violations = relation_violations(&module);
        Ok(LoadedModule {
            module,
            algebra_path,
            violations,
        })
    }

    pub fn context(&mut self, base_path: &Path, factor: &FactorDoc, at: &Path) -> Result<Arc<TensorContext>, CliError> {
        let fkey = match factor {
            FactorDoc::Path(p) => format!("path {}", key(Path::new(p)).display()),
            FactorDoc::Inline(doc) => Document::Algebra(doc.clone()).to_string(),
        };
        let k = (key(base_path), fkey);
        if let Some(c) = self.contexts.get(&k) {
            return Ok(c.clone());
        }
        let base = self.algebra(base_path)?;
        let b = match factor {
            FactorDoc::Path(p) => {
                let b = self.algebra(Path::new(p))?;
                if b.field() != base.field() {
                    return Err(invalid(at, None, "base and factor use different primes"));
                }
                b
            }
            FactorDoc::Inline(doc) => Algebra::new(base.field(), bound_quiver(at, doc)?),
        };
        let ctx = TensorContext::new(base, b).map_err(|e| invalid(at, None, e.to_string()))?;
        self.contexts.insert(k, ctx.clone());
        Ok(ctx)
    }

    fn layered_from_doc(&mut self, path: &Path, doc: &LayeredDoc) -> Result<LoadedLayered, CliError> {
        let base_path = resolve(path, &doc.base);
        let factor = match &doc.factor {
            FactorDoc::Path(p) => FactorDoc::Path(resolve(path, p).display().to_string()),
            inline => inline.clone(),
        };
        let ctx = self.context(&base_path, &factor, path)?;
        let q = ctx.factor().bound_quiver().quiver().clone();
        let a = ctx.base().clone();
        let mut branches: Vec<Option<BqaModule>> = vec![None; q.vertex_count()];
        for (v, body) in &doc.branches {
            if *v > q.vertex_count() {
                return Err(invalid(path, Some(body.dims_line - 1), format!("branch {v} out of range")));
            }
            branches[v - 1] = Some(module_from_body(path, &a, body)?);
        }
        let branches: Vec<BqaModule> = branches
            .into_iter()
            .enumerate()
            .map(|(v, b)| b.ok_or_else(|| invalid(path, None, format!("missing branch {}", v + 1))))
            .collect::<Result<_, _>>()?;
        let mut maps: Vec<Option<Vec<Matrix>>> = vec![None; q.arrows().len()];
        for m in &doc.maps {
            let alpha = q
                .arrow_index(&m.arrow)
                .ok_or_else(|| invalid(path, Some(m.line), format!("unknown arrow `{}`", m.arrow)))?;
            let arrow = q.arrow(alpha);
            maps[alpha] = Some(map_blocks(path, &a, m, &branches[arrow.source], &branches[arrow.target])?);
        }
        let maps: Vec<Vec<Matrix>> = maps
            .into_iter()
            .enumerate()
            .map(|(alpha, m)| m.ok_or_else(|| invalid(path, None, format!("missing map for arrow `{}`", q.arrow(alpha).name))))
            .collect::<Result<_, _>>()?;
        let rep = LayeredRep::new(&ctx, branches, maps).map_err(|e| invalid(path, None, e.to_string()))?;
        let violations = layered::validate(&rep).iter().map(|v| v.describe(&ctx)).collect();
        Ok(LoadedLayered {
            rep,
            base_path,
            factor,
            violations,
        })
    }
}

fn bound_quiver(path: &Path, doc: &AlgebraDoc) -> Result<BoundQuiver, CliError> {
    let arrows = doc
        .arrows
        .iter()
        .map(|a| Arrow::new(a.name.clone(), a.source - 1, a.target - 1))
        .collect();
    let q = Quiver::new(doc.vertices, arrows).map_err(|e| invalid(path, None, e.to_string()))?;
    let mut gens = Vec::new();
    for (r, line) in doc.relations.iter().zip(&doc.relation_lines) {
        let names: Vec<&str> = r.iter().map(String::as_str).collect();
        gens.push(q.path_from_names(&names).map_err(|e| invalid(path, Some(*line), e.to_string()))?);
    }
    let ideal = MonomialIdeal::new(gens).map_err(|e| invalid(path, None, e.to_string()))?;
    BoundQuiver::new(q, ideal).map_err(|e| invalid(path, None, e.to_string()))
}

fn matrix(path: &Path, fp: Fp, block: &MatrixBlock, want: (usize, usize), what: &str) -> Result<Matrix, CliError> {
    if (block.rows, block.cols) != want {
        return Err(invalid(
            path,
            Some(block.line),
            format!("malformed matrix block for {what}: {}x{}, expected {}x{}", block.rows, block.cols, want.0, want.1),
        ));
    }
    let data = block.entries.iter().map(|&x| fp.reduce(x)).collect();
    Ok(Matrix::from_data(fp, block.rows, block.cols, data))
}

fn module_from_body(path: &Path, alg: &Arc<Algebra>, body: &ModuleBody) -> Result<BqaModule, CliError> {
    let q = alg.bound_quiver().quiver();
    if body.dims.len() != q.vertex_count() {
        return Err(invalid(
            path,
            Some(body.dims_line),
            format!("{} dimensions given for {} vertices", body.dims.len(), q.vertex_count()),
        ));
    }
    let mut maps: Vec<Option<Matrix>> = vec![None; q.arrows().len()];
    for (name, block) in &body.matrices {
        let a = q
            .arrow_index(name)
            .ok_or_else(|| invalid(path, Some(block.line), format!("unknown arrow `{name}`")))?;
        let arrow = q.arrow(a);
        let want = (body.dims[arrow.target], body.dims[arrow.source]);
        maps[a] = Some(matrix(path, alg.field(), block, want, &format!("arrow `{name}`"))?);
    }
    let maps: Vec<Matrix> = maps
        .into_iter()
        .enumerate()
        .map(|(a, m)| {
            m.ok_or_else(|| invalid(path, Some(body.dims_line), format!("missing matrix for arrow `{}`", q.arrow(a).name)))
        })
        .collect::<Result<_, _>>()?;
    BqaModule::new(alg, body.dims.clone(), maps).map_err(|e| invalid(path, Some(body.dims_line), e.to_string()))
}

fn map_blocks(path: &Path, a: &Arc<Algebra>, m: &MapDoc, src: &BqaModule, tgt: &BqaModule) -> Result<Vec<Matrix>, CliError> {
    let mut blocks: Vec<Option<Matrix>> = vec![None; a.vertex_count()];
    for (v, block) in &m.blocks {
        if *v > a.vertex_count() {
            return Err(invalid(path, Some(block.line), format!("A-vertex {v} out of range")));
        }
        let want = (tgt.dims()[v - 1], src.dims()[v - 1]);
        blocks[v - 1] = Some(matrix(path, a.field(), block, want, &format!("map `{}` at A-vertex {v}", m.arrow))?);
    }
    blocks
        .into_iter()
        .enumerate()
        .map(|(v, b)| b.ok_or_else(|| invalid(path, Some(m.line), format!("map `{}` lacks a block for A-vertex {}", m.arrow, v + 1))))
        .collect()
}

fn relation_violations(m: &BqaModule) -> Vec<String> {
    let bq = m.algebra().bound_quiver();
    bqa::check_module(m)
        .into_iter()
        .map(|g| format!("relation {} acts nonzero", written(bq.quiver(), &bq.ideal().generators()[g].arrows)))
        .collect()
}

fn written(q: &Quiver, arrows: &[usize]) -> String {
    arrows.iter().rev().map(|&a| q.arrow(a).name.as_str()).collect::<Vec<_>>().join(" ")
}

// ----------------------------------------------------------------------------
// back to documents

fn block(m: &Matrix) -> MatrixBlock {
    MatrixBlock {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.data().iter().map(|&x| x as i64).collect(),
        line: 0,
    }
}

pub fn module_body(m: &BqaModule) -> ModuleBody {
    let q = m.algebra().bound_quiver().quiver();
    ModuleBody {
        dims: m.dims().to_vec(),
        dims_line: 0,
        matrices: q.arrows().iter().enumerate().map(|(a, arrow)| (arrow.name.clone(), block(m.map(a)))).collect(),
    }
}

pub fn module_doc(m: &BqaModule, algebra: &str) -> ModuleDoc {
    ModuleDoc {
        algebra: algebra.to_string(),
        body: module_body(m),
    }
}

/// Algebra block without a prime line, as used for inline factors.
pub fn algebra_doc(alg: &Algebra) -> AlgebraDoc {
    let bq = alg.bound_quiver();
    let q = bq.quiver();
    let gens = bq.ideal().generators();
    AlgebraDoc {
        prime: None,
        vertices: q.vertex_count(),
        arrows: q
            .arrows()
            .iter()
            .map(|a| ArrowDecl {
                name: a.name.clone(),
                source: a.source + 1,
                target: a.target + 1,
            })
            .collect(),
        relations: gens
            .iter()
            .map(|g| g.arrows.iter().rev().map(|&a| q.arrow(a).name.clone()).collect())
            .collect(),
        relation_lines: vec![0; gens.len()],
    }
}

pub fn layered_doc(x: &LayeredRep, base: &str, factor: FactorDoc) -> LayeredDoc {
    let ctx = x.context();
    LayeredDoc {
        base: base.to_string(),
        factor,
        branches: x.branches().iter().enumerate().map(|(v, b)| (v + 1, module_body(b))).collect(),
        maps: ctx
            .q_arrows()
            .iter()
            .enumerate()
            .map(|(alpha, arrow)| MapDoc {
                arrow: arrow.name.clone(),
                line: 0,
                blocks: x.arrow_map(alpha).iter().enumerate().map(|(v, m)| (v + 1, block(m))).collect(),
            })
            .collect(),
    }
}
