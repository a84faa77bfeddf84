//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use smonkit::exactla::{Fp, Matrix, Subspace};
use smonkit::harness::nakayama::{self, InjDim, NakayamaAlgebra};
use smonkit::harness::{algebras, run_suite, SuiteConfig, SuiteName, SuiteReport};
use smonkit::layered::{self, LayeredRep};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn smonkit(args: &[&str], threads: Option<&str>) -> (String, i32) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_smonkit"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("SMONKIT_THREADS", t);
    }
    let out = cmd.output().expect("binary runs");
    (String::from_utf8_lossy(&out.stdout).into_owned(), out.status.code().unwrap_or(-1))
}

fn note<'a>(report: &'a str, key: &str) -> Option<&'a str> {
    report.lines().find_map(|l| l.strip_prefix("note: ")?.strip_prefix(key)?.strip_prefix(": "))
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn suite(name: SuiteName, samples: usize) -> SuiteReport {
    let mut cfg = SuiteConfig::new(name, algebras::default_contexts(Fp::two()));
    cfg.samples = samples;
    cfg.bound = 8;
    run_suite(&cfg).expect("suite runs")
}

fn suite_ok(r: &SuiteReport, min_samples: usize) -> Result<(), String> {
    let samples = r.records.iter().filter(|x| x.index.is_some()).count();
    ensure(samples >= min_samples, format!("{samples} samples"))?;
    match r.first_failure() {
        None => Ok(()),
        Some(f) => Err(format!("{} failures, first {} [{}]", r.failed(), f.label, f.detail)),
    }
}

fn fixture_passed(r: &SuiteReport, name: &str) -> Result<(), String> {
    let label = format!("fixture {name}");
    match r.records.iter().find(|x| x.label == label) {
        Some(x) if x.pass => Ok(()),
        Some(x) => Err(format!("{label} failed: {}", x.detail)),
        None => Err(format!("{label} missing")),
    }
}

fn c1_nakayama() -> Check {
    let (out, code) = smonkit(&["suite", "nakayama", "--bound", "60", &fixture("kupisch-17-18-18.alg")], None);
    ensure(code == 0, format!("exit {code}"))?;
    ensure(note(&out, "indecomposables") == Some("53"), "indecomposable count")?;
    ensure(note(&out, "non-projective gp") == Some("5"), "non-projective GP count")?;
    let mods = note(&out, "non-projective gp modules").unwrap_or("");
    ensure(mods.split(' ').all(|m| m.starts_with("P(2)/")), format!("not all quotients of P(2): {mods}"))?;
    ensure(note(&out, "non-projective gp lengths") == Some("[3,6,9,12,15]"), "lengths")?;
    let kx6 = NakayamaAlgebra::new(algebras::truncated_loop(Fp::two(), 6)).unwrap();
    let target = nakayama::enumerate_nakayama(&kx6).len();
    let core = note(&out, "core").unwrap_or("");
    ensure(core.starts_with(&format!("{target} indecomposables")), format!("core `{core}` vs {target}"))?;
    Ok("53 indecomposables, 5 GP quotients of P(2) of lengths 3..15, core 6".into())
}

fn c2_weakly_gorenstein() -> Check {
    let alg = algebras::kupisch_17_18_18(Fp::two());
    let nak = NakayamaAlgebra::new(alg.clone()).unwrap();
    let list = nakayama::enumerate_nakayama(&nak);
    let core = nakayama::gorenstein_core(&nak, &list, 60);
    let semi = core.verdicts.iter().filter(|v| v.0.is_certified()).count();
    ensure(list.len() == 53, "enumeration")?;
    ensure(semi > 0, "no semi-GP module at all")?;
    ensure(core.semi_not_gp.is_empty(), format!("{} semi-GP but not GP", core.semi_not_gp.len()))?;
    let (left, right) = nakayama::evidence_non_gorenstein(&alg, 30);
    ensure(
        left == InjDim::Exceeds(30) || right == InjDim::Exceeds(30),
        format!("left {left}, right {right}"),
    )?;
    Ok(format!("{semi} semi-GP at N=60, all GP; inj.dim left {left} right {right}"))
}

fn c3_ce() -> Check {
    let r = suite(SuiteName::Ce, 100);
    suite_ok(&r, 100)?;
    fixture_passed(&r, "ext1-S-S3")?;
    Ok(format!("{} instances over 4 contexts", r.records.len()))
}

fn c4_adjunction() -> Check {
    let r = suite(SuiteName::Adjunction, 100);
    suite_ok(&r, 100)?;
    Ok(format!("{} instances, k <= 3", r.records.len()))
}

fn c5_smon_perp() -> Check {
    let r = suite(SuiteName::SmonPerp, 100);
    suite_ok(&r, 100)?;
    for f in ["P3", "S2", "extension-P3-P2"] {
        fixture_passed(&r, f)?;
    }
    Ok(format!("{} instances, N=8", r.records.len()))
}

fn c6_gproj() -> Check {
    let r = suite(SuiteName::Lz3, 100);
    suite_ok(&r, 100)?;
    Ok(format!("{} instances, N=8", r.records.len()))
}

fn c7_pd() -> Check {
    let r = suite(SuiteName::PdAdd, 100);
    suite_ok(&r, 100)?;
    fixture_passed(&r, "S3-tensor-P1")?;
    Ok(format!("{} pairs", r.records.len()))
}

fn c8_triangular() -> Check {
    let contexts = algebras::default_contexts(Fp::two());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    for k in 0..100 {
        let ctx = &contexts[k % contexts.len()];
        let x = LayeredRep::from_rep(ctx, &ctx.presentation().random_module(3, &mut rng));
        let q = ctx.factor().bound_quiver().quiver();
        for n in (0..q.vertex_count()).filter(|&v| q.arrows_into(v).is_empty()) {
            let t = layered::split_at_source(&x, n).map_err(|e| e.to_string())?;
            ensure(layered::assemble(&t) == x, format!("round trip failed on sample {k}"))?;
        }
    }
    let r = suite(SuiteName::Triangular, 100);
    let fixtures: Vec<_> = r.records.iter().filter(|x| x.index.is_none()).collect();
    ensure(fixtures.iter().all(|x| x.pass), "a triangular fixture failed")?;
    suite_ok(&r, 100)?;
    Ok(format!("100 round trips, {} fixtures agree", fixtures.len()))
}

fn c9_determinism() -> Check {
    let runs: [&[&str]; 4] = [
        &["suite", "ce", "--samples", "50", "--seed", "7", "--no-timing"],
        &["suite", "smon-perp", "--samples", "40", "--seed", "3", "--no-timing", "--format", "records"],
        &["suite", "triangular", "--samples", "40", "--seed", "9", "--no-timing"],
        &["suite", "nakayama", "--bound", "24", "--no-timing"],
    ];
    for args in runs {
        let a = smonkit(args, None).0;
        let b = smonkit(args, None).0;
        let serial = smonkit(args, Some("1")).0;
        ensure(!a.is_empty() && a == b && a == serial, format!("`{}` differs between runs", args.join(" ")))?;
    }
    Ok("4 suites byte-identical across reruns and thread counts".into())
}

fn small_matrix(fp: Fp) -> impl Strategy<Value = Matrix> {
    (0..6usize, 0..6usize).prop_flat_map(move |(r, c)| {
        prop::collection::vec(0..fp.p(), r * c).prop_map(move |d| Matrix::from_data(fp, r, c, d))
    })
}

/// Up to five vectors in `F_p^n`, as rows.
fn sized(fp: Fp, n: usize) -> impl Strategy<Value = Matrix> {
    (0..6usize).prop_flat_map(move |r| prop::collection::vec(0..fp.p(), r * n).prop_map(move |d| Matrix::from_data(fp, r, n, d)))
}

fn rows(m: &Matrix) -> Vec<Vec<u32>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn c10_properties() -> Check {
    let cases = 1000;
    let run = |name: &str, f: &dyn Fn(&mut TestRunner) -> Result<(), String>| -> Result<(), String> {
        let mut runner = TestRunner::new(Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        });
        f(&mut runner).map_err(|e| format!("{name}: {e}"))
    };
    let field = prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Fp::new(p).unwrap());
    run("grassmann", &|r| {
        let s = (field.clone(), 0..6usize).prop_flat_map(|(fp, n)| (sized(fp, n), sized(fp, n)));
        r.run(&s, |(a, b)| {
            let (u, w) = (Subspace::from_matrix(a), Subspace::from_matrix(b));
            prop_assert_eq!(u.plus(&w).unwrap().dim() + u.intersect(&w).unwrap().dim(), u.dim() + w.dim());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    run("rank duality", &|r| {
        r.run(&field.clone().prop_flat_map(small_matrix), |m| {
            prop_assert_eq!(m.rank(), m.transpose().rank());
            prop_assert_eq!(m.rank() + m.kernel().dim(), m.cols());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    run("canonicity", &|r| {
        r.run(&(field.clone().prop_flat_map(small_matrix), any::<u64>()), |(m, seed)| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut shuffled = rows(&m);
            shuffled.shuffle(&mut rng);
            shuffled.extend(rows(&m));
            let a = Subspace::from_vectors(m.field(), m.cols(), &rows(&m));
            let b = Subspace::from_vectors(m.field(), m.cols(), &shuffled);
            prop_assert_eq!(a.basis(), b.basis());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    run("kron rank", &|r| {
        let s = field.clone().prop_flat_map(|fp| (small_matrix(fp), small_matrix(fp)));
        r.run(&s, |(a, b)| {
            prop_assert_eq!(a.kron(&b).unwrap().rank(), a.rank() * b.rank());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?;
    Ok(format!("4 properties x {cases} cases"))
}

fn main() {
    let criteria: [(usize, &str, Duration, fn() -> Check); 10] = [
        (1, "Nakayama reproduction", Duration::from_secs(60), c1_nakayama),
        (2, "weakly Gorenstein evidence", Duration::from_secs(120), c2_weakly_gorenstein),
        (3, "Cartan-Eilenberg", Duration::from_secs(60), c3_ce),
        (4, "adjunction identities", Duration::from_secs(60), c4_adjunction),
        (5, "smon vs perpendicular category", Duration::from_secs(120), c5_smon_perp),
        (6, "Gproj criterion", Duration::from_secs(120), c6_gproj),
        (7, "pd additivity", Duration::from_secs(60), c7_pd),
        (8, "triangular split", Duration::from_secs(60), c8_triangular),
        (9, "determinism", Duration::from_secs(300), c9_determinism),
        (10, "substrate properties", Duration::from_secs(10), c10_properties),
    ];
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; took longer than {}s", limit.as_secs())),
            Err(e) => (false, e),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {n:>2} {name}: {detail} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
