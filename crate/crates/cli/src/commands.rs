use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use smonkit::bqa::{self, Verdict};
use smonkit::harness::{self, algebras, SuiteConfig, SuiteName};
use smonkit::layered::{self, ClassPredicate, LayeredRep, TensorContext};

use crate::format::{Document, FactorDoc};
use crate::load::{self, CliError, Loaded, LoadedLayered, Workspace};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "smonkit", version, about = "Homological checks for monomial algebras and layered representations")]
pub struct Cli {
    /// Prime used by files without a `prime` line (default 2).
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    /// Ext bound N for certificates (default 8, 60 for the nakayama suite).
    #[arg(long, global = true)]
    pub bound: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Omit wall-time lines so reports can be compared byte for byte.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate algebra, module and layered files.
    Check { paths: Vec<PathBuf> },
    /// Separated monic test of a layered representation.
    Smon {
        #[arg(long, default_value = "ALL")]
        pred: String,
        path: PathBuf,
    },
    /// Separated epic test of a layered representation.
    Sepi {
        #[arg(long, default_value = "ALL")]
        pred: String,
        path: PathBuf,
    },
    /// Cokernel of the incoming map at a vertex, as a module file.
    Coker {
        #[arg(long)]
        vertex: usize,
        path: PathBuf,
    },
    /// Dimension of Ext^k between two modules or two layered representations.
    Ext {
        #[arg(long, default_value_t = 1)]
        k: usize,
        first: PathBuf,
        second: PathBuf,
    },
    /// Bounded Gorenstein-projective certificate.
    Gp { path: PathBuf },
    /// Bounded semi-Gorenstein-projective certificate.
    Semigp { path: PathBuf },
    /// Layered representation m ⊗ u.
    Tensor { module: PathBuf, factor_module: PathBuf },
    /// Split a layered representation at a source vertex.
    Split {
        /// Source vertex (default: the largest source).
        #[arg(long)]
        vertex: Option<usize>,
        path: PathBuf,
    },
    /// Run a verification suite.
    Suite {
        name: String,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replay a single sample.
        #[arg(long)]
        index: Option<usize>,
        /// Algebra files: pairs `A Q` of contexts, or `A [Q]` for nakayama and weakly-gorenstein.
        files: Vec<PathBuf>,
    },
}

/// Text for stdout and stderr plus the exit code.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn out(stdout: String, code: i32) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_USAGE,
                }
            } else {
                Outcome::out(text, EXIT_PASS)
            }
        }
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let mut ws = Workspace::new(cli.prime);
    match dispatch(cli, &mut ws) {
        Ok(o) => o,
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

fn dispatch(cli: &Cli, ws: &mut Workspace) -> Result<Outcome, CliError> {
    let bound = cli.bound.unwrap_or(8);
    match &cli.command {
        Command::Check { paths } => check(ws, paths),
        Command::Smon { pred, path } => {
            let x = layered_input(ws, path)?;
            let pred = predicate(pred, bound)?;
            let r = layered::smon_check(&x.rep, &pred);
            let code = if r.passed() { EXIT_PASS } else { EXIT_FAIL };
            Ok(Outcome::out(format!("smon({}): {}\n", pred.name(), r.render(x.rep.context())), code))
        }
        Command::Sepi { pred, path } => {
            let x = layered_input(ws, path)?;
            let pred = predicate(pred, bound)?;
            let r = layered::sepi_check(&x.rep, &pred);
            let code = if r.passed() { EXIT_PASS } else { EXIT_FAIL };
            Ok(Outcome::out(format!("sepi({}): {}\n", pred.name(), r.render(x.rep.context())), code))
        }
        Command::Coker { vertex, path } => {
            let x = layered_input(ws, path)?;
            let i = vertex_arg(*vertex, x.rep.context().q_vertices())?;
            let m = layered::coker_i(&x.rep, i);
            let doc = load::module_doc(&m, &absolute(&x.base_path));
            Ok(Outcome::out(Document::Module(doc).to_string(), EXIT_PASS))
        }
        Command::Ext { k, first, second } => ext(ws, *k, first, second),
        Command::Gp { path } => certificate(ws, path, bound, false),
        Command::Semigp { path } => certificate(ws, path, bound, true),
        Command::Tensor { module, factor_module } => {
            let m = valid_module(ws, module)?;
            let u = valid_module(ws, factor_module)?;
            let factor = FactorDoc::Path(absolute(&u.algebra_path));
            let ctx = ws.context(&m.algebra_path, &factor, factor_module)?;
            let x = layered::tensor(&ctx, &m.module, &u.module).map_err(|e| CliError::Usage(e.to_string()))?;
            let doc = load::layered_doc(&x, &absolute(&m.algebra_path), factor);
            Ok(Outcome::out(Document::Layered(doc).to_string(), EXIT_PASS))
        }
        Command::Split { vertex, path } => split(ws, path, *vertex, bound),
        Command::Suite {
            name,
            samples,
            seed,
            index,
            files,
        } => suite(cli, ws, name, *samples, *seed, *index, files),
    }
}

fn check(ws: &mut Workspace, paths: &[PathBuf]) -> Result<Outcome, CliError> {
    if paths.is_empty() {
        return Err(CliError::Usage("check needs at least one file".into()));
    }
    let mut out = String::new();
    let mut code = EXIT_PASS;
    for p in paths {
        let loaded = ws.load(p)?;
        let v = loaded.violations();
        if v.is_empty() {
            writeln!(out, "{}: ok", p.display()).unwrap();
        } else {
            code = EXIT_FAIL;
            for line in v {
                writeln!(out, "{}: {line}", p.display()).unwrap();
            }
        }
    }
    Ok(Outcome::out(out, code))
}

fn reject_violations(path: &Path, v: &[String]) -> Result<(), CliError> {
    if v.is_empty() {
        return Ok(());
    }
    Err(CliError::Invalid {
        path: path.display().to_string(),
        msg: format!("invalid input ({})", v.join("; ")),
    })
}

fn valid_module(ws: &mut Workspace, path: &Path) -> Result<load::LoadedModule, CliError> {
    let m = ws.module(path)?;
    reject_violations(path, &m.violations)?;
    Ok(m)
}

fn layered_input(ws: &mut Workspace, path: &Path) -> Result<LoadedLayered, CliError> {
    match ws.load(path)? {
        Loaded::Layered(x) => {
            reject_violations(path, &x.violations)?;
            Ok(x)
        }
        _ => Err(CliError::Usage(format!("{}: expected a layered file", path.display()))),
    }
}

fn vertex_arg(v: usize, count: usize) -> Result<usize, CliError> {
    if v == 0 || v > count {
        return Err(CliError::Usage(format!("vertex {v} out of range 1..={count}")));
    }
    Ok(v - 1)
}

fn predicate(name: &str, bound: usize) -> Result<ClassPredicate, CliError> {
    Ok(match name.to_ascii_uppercase().as_str() {
        "ALL" => ClassPredicate::All,
        "PROJ" => ClassPredicate::Proj,
        "INJ" => ClassPredicate::Inj,
        "GPROJ" => ClassPredicate::Gproj(bound),
        "SEMIGP" | "SEMI_GP" => ClassPredicate::SemiGp(bound),
        other => return Err(CliError::Usage(format!("unknown predicate `{other}` (ALL, PROJ, INJ, GPROJ, SEMIGP)"))),
    })
}

fn ext(ws: &mut Workspace, k: usize, first: &Path, second: &Path) -> Result<Outcome, CliError> {
    let dim = match (ws.load(first)?, ws.load(second)?) {
        (Loaded::Module(m), Loaded::Module(n)) => {
            reject_violations(first, &m.violations)?;
            reject_violations(second, &n.violations)?;
            if !Arc::ptr_eq(m.module.algebra(), n.module.algebra()) {
                return Err(CliError::Usage("modules are over different algebras".into()));
            }
            bqa::ext_dim(&m.module, &n.module, k)
        }
        (Loaded::Layered(x), Loaded::Layered(y)) => {
            reject_violations(first, &x.violations)?;
            reject_violations(second, &y.violations)?;
            if !Arc::ptr_eq(x.rep.context(), y.rep.context()) {
                return Err(CliError::Usage("layered representations have different contexts".into()));
            }
            layered::layered_ext_dim(&x.rep, &y.rep, k)
        }
        _ => return Err(CliError::Usage("ext needs two module files or two layered files".into())),
    };
    Ok(Outcome::out(format!("{dim}\n"), EXIT_PASS))
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::CertifiedUpTo(_) => EXIT_PASS,
        Verdict::Refuted(_) => EXIT_FAIL,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn certificate(ws: &mut Workspace, path: &Path, bound: usize, semi: bool) -> Result<Outcome, CliError> {
    let v = match ws.load(path)? {
        Loaded::Module(m) => {
            reject_violations(path, &m.violations)?;
            if semi {
                bqa::semi_gp_cert(&m.module, bound)
            } else {
                bqa::gp_cert(&m.module, bound)
            }
        }
        Loaded::Layered(x) => {
            reject_violations(path, &x.violations)?;
            if semi {
                layered::layered_semi_gp_cert(&x.rep, bound)
            } else {
                layered::layered_gp_cert(&x.rep, bound)
            }
        }
        Loaded::Algebra(..) => return Err(CliError::Usage("expected a module or layered file".into())),
    };
    Ok(Outcome::out(format!("{v}\n"), verdict_code(&v)))
}

fn largest_source(ctx: &TensorContext) -> usize {
    let q = ctx.factor().bound_quiver().quiver();
    (0..q.vertex_count()).rev().find(|&v| q.arrows_into(v).is_empty()).unwrap_or(0)
}

fn split(ws: &mut Workspace, path: &Path, vertex: Option<usize>, bound: usize) -> Result<Outcome, CliError> {
    let x = layered_input(ws, path)?;
    let ctx = x.rep.context().clone();
    let n = match vertex {
        Some(v) => vertex_arg(v, ctx.q_vertices())?,
        None => largest_source(&ctx),
    };
    if ctx.q_vertices() < 2 {
        return Err(CliError::Usage("splitting needs a quiver with at least two vertices".into()));
    }
    let t = layered::split_at_source(&x.rep, n).map_err(|e| CliError::Usage(e.to_string()))?;
    let base = absolute(&x.base_path);
    let round_trip = layered::assemble(&t) == x.rep;
    let report = layered::xz_condition_check(&t, bound);
    let mut out = String::new();
    writeln!(out, "# source vertex {}", n + 1).unwrap();
    writeln!(out, "# Y: module at the source").unwrap();
    out.push_str(&Document::Module(load::module_doc(&t.y, &base)).to_string());
    writeln!(out, "# X: restriction to the remaining vertices").unwrap();
    let reduced = FactorDoc::Inline(load::algebra_doc(t.reduced.factor()));
    out.push_str(&Document::Layered(load::layered_doc(&t.x, &base, reduced)).to_string());
    writeln!(out, "# phi: Y ⊗ rad P({}) -> X", n + 1).unwrap();
    for (j, blocks) in t.phi.iter().enumerate() {
        for (v, m) in blocks.iter().enumerate() {
            writeln!(out, "phi {} {} {} {}", t.kept[j] + 1, v + 1, m.rows(), m.cols()).unwrap();
            for r in 0..m.rows() {
                let row: Vec<String> = m.row(r).iter().map(|e| e.to_string()).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
    }
    writeln!(out, "round-trip: {}", if round_trip { "ok" } else { "MISMATCH" }).unwrap();
    writeln!(
        out,
        "conditions: phi*-onto={} ext-vanishing={} Y={} (N={})",
        report.phi_star_onto,
        report.ext_failure.map_or("yes".to_string(), |d| format!("fails in degree {d}")),
        report.y_verdict,
        report.bound
    )
    .unwrap();
    writeln!(out, "assembled semi-gp: {}", report.assembled).unwrap();
    writeln!(out, "agreement: {}", if report.agrees() { "yes" } else { "NO" }).unwrap();
    let code = if round_trip && report.agrees() { EXIT_PASS } else { EXIT_FAIL };
    Ok(Outcome::out(out, code))
}

fn suite(
    cli: &Cli,
    ws: &mut Workspace,
    name: &str,
    samples: usize,
    seed: u64,
    index: Option<usize>,
    files: &[PathBuf],
) -> Result<Outcome, CliError> {
    let suite = SuiteName::parse(name).map_err(|e| CliError::Usage(e.to_string()))?;
    let fp = ws.default_field()?;
    let single = matches!(suite, SuiteName::Nakayama | SuiteName::WeaklyGorenstein);
    let mut cfg = SuiteConfig::new(suite, Vec::new());
    if single {
        match files {
            [] => cfg.algebra = Some(algebras::kupisch_17_18_18(fp)),
            [a] => cfg.algebra = Some(ws.algebra(a)?),
            [a, q] => {
                cfg.algebra = Some(ws.algebra(a)?);
                cfg.contexts = vec![ws.context(a, &FactorDoc::Path(q.display().to_string()), q)?];
            }
            _ => return Err(CliError::Usage(format!("suite {name} takes an algebra file and an optional factor file"))),
        }
    } else if files.is_empty() {
        cfg.contexts = algebras::default_contexts(fp);
    } else {
        if files.len() % 2 != 0 {
            return Err(CliError::Usage("context files come in pairs: base algebra, then factor algebra".into()));
        }
        for pair in files.chunks(2) {
            cfg.contexts.push(ws.context(&pair[0], &FactorDoc::Path(pair[1].display().to_string()), &pair[1])?);
        }
    }
    cfg.bound = cli.bound.unwrap_or(if suite == SuiteName::Nakayama { 60 } else { 8 });
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.only_index = index;
    let report = harness::run_suite(&cfg).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = match cli.format {
        Format::Text => report.render_text(!cli.no_timing),
        Format::Records => report.render_records(!cli.no_timing),
    };
    Ok(Outcome::out(text, if report.ok() { EXIT_PASS } else { EXIT_FAIL }))
}

/// The layered representation stored in `path`, for library callers.
pub fn load_layered(prime: Option<u32>, path: &Path) -> Result<LayeredRep, CliError> {
    let mut ws = Workspace::new(prime);
    layered_input(&mut ws, path).map(|x| x.rep)
}

/// Written documents refer to algebras by absolute path so they load from anywhere.
fn absolute(p: &Path) -> String {
    std::fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf()).display().to_string()
}
