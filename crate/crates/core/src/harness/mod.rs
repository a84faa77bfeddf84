//! Seeded verification suites over sampled and planted modules.
//!
//! Every instance draws from its own RNG stream derived from `(seed, index)`,
//! so serial and parallel runs give identical reports.

pub mod algebras;
pub mod nakayama;
mod suites;

use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bqa::Algebra;
use crate::layered::TensorContext;

pub use suites::run_instance_count;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HarnessError {
    #[error("algebra is not Nakayama")]
    NotNakayama,
    #[error("unknown suite {0}")]
    UnknownSuite(String),
    #[error("suite {0} needs {1}")]
    MissingInput(&'static str, &'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteName {
    Ce,
    Adjunction,
    SmonPerp,
    Lz3,
    PdAdd,
    Triangular,
    WeaklyGorenstein,
    Nakayama,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Ce,
        SuiteName::Adjunction,
        SuiteName::SmonPerp,
        SuiteName::Lz3,
        SuiteName::PdAdd,
        SuiteName::Triangular,
        SuiteName::WeaklyGorenstein,
        SuiteName::Nakayama,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Ce => "ce",
            SuiteName::Adjunction => "adjunction",
            SuiteName::SmonPerp => "smon-perp",
            SuiteName::Lz3 => "lz3",
            SuiteName::PdAdd => "pd-add",
            SuiteName::Triangular => "triangular",
            SuiteName::WeaklyGorenstein => "weakly-gorenstein",
            SuiteName::Nakayama => "nakayama",
        }
    }

    pub fn parse(s: &str) -> Result<SuiteName, HarnessError> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| HarnessError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub name: SuiteName,
    /// Contexts `A ⊗ kQ/I` sampled round-robin.
    pub contexts: Vec<Arc<TensorContext>>,
    /// Base algebra for the Nakayama and weakly-Gorenstein suites.
    pub algebra: Option<Arc<Algebra>>,
    pub bound: usize,
    pub samples: usize,
    pub seed: u64,
    /// Replay a single sample (fixtures are skipped).
    pub only_index: Option<usize>,
}

impl SuiteConfig {
    pub fn new(name: SuiteName, contexts: Vec<Arc<TensorContext>>) -> Self {
        SuiteConfig {
            name,
            contexts,
            algebra: None,
            bound: 8,
            samples: 100,
            seed: 0,
            only_index: None,
        }
    }
}

/// Outcome for one sample or fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceRecord {
    /// `sample N` or `fixture NAME`.
    pub label: String,
    /// Sample index when the record came from sampling.
    pub index: Option<usize>,
    pub pass: bool,
    pub detail: String,
}

impl InstanceRecord {
    pub fn sample(index: usize, pass: bool, detail: impl Into<String>) -> Self {
        InstanceRecord {
            label: format!("sample {index}"),
            index: Some(index),
            pass,
            detail: detail.into(),
        }
    }

    pub fn fixture(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        InstanceRecord {
            label: format!("fixture {name}"),
            index: None,
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: SuiteName,
    pub bound: usize,
    pub samples: usize,
    pub seed: u64,
    pub records: Vec<InstanceRecord>,
    /// Summary lines (suite-specific findings).
    pub notes: Vec<String>,
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.records.len() - self.passed()
    }

    pub fn ok(&self) -> bool {
        self.failed() == 0
    }

    pub fn first_failure(&self) -> Option<&InstanceRecord> {
        self.records.iter().find(|r| !r.pass)
    }

    fn replay(&self, r: &InstanceRecord) -> String {
        match r.index {
            Some(i) => format!(
                "suite {} --seed {} --bound {} --index {}",
                self.suite.as_str(),
                self.seed,
                self.bound,
                i
            ),
            None => format!("suite {} --seed {} --bound {} --samples 0", self.suite.as_str(), self.seed, self.bound),
        }
    }

    pub fn render_text(&self, timing: bool) -> String {
        let mut s = String::new();
        writeln!(s, "suite: {}", self.suite.as_str()).unwrap();
        writeln!(s, "config: seed={} bound={} samples={}", self.seed, self.bound, self.samples).unwrap();
        writeln!(s, "instances: {}", self.records.len()).unwrap();
        writeln!(s, "pass: {}", self.passed()).unwrap();
        writeln!(s, "fail: {}", self.failed()).unwrap();
        match self.first_failure() {
            Some(r) => writeln!(s, "first counterexample: {} [{}] replay: {}", r.label, r.detail, self.replay(r)).unwrap(),
            None => writeln!(s, "first counterexample: none").unwrap(),
        }
        for n in &self.notes {
            writeln!(s, "note: {n}").unwrap();
        }
        if timing {
            writeln!(s, "wall-time: {:.3}s", self.wall_time.as_secs_f64()).unwrap();
        }
        s
    }

    /// One tab-separated record per instance: suite, label, verdict, witness.
    pub fn render_records(&self, timing: bool) -> String {
        let mut s = String::new();
        for r in &self.records {
            let witness = if r.pass { "-".to_string() } else { self.replay(r) };
            writeln!(
                s,
                "{}\t{}\t{}\t{}\t{}",
                self.suite.as_str(),
                r.label,
                if r.pass { "PASS" } else { "FAIL" },
                r.detail,
                witness
            )
            .unwrap();
        }
        for n in &self.notes {
            writeln!(s, "{}\tnote\t-\t{}\t-", self.suite.as_str(), n).unwrap();
        }
        if timing {
            writeln!(s, "{}\twall-time\t-\t{:.3}s\t-", self.suite.as_str(), self.wall_time.as_secs_f64()).unwrap();
        }
        s
    }
}

/// RNG stream for sample `index`.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index as u64 ^ 0x5EED)))
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Runs `f` on the configured pool (`SMONKIT_THREADS` caps the thread count).
pub(crate) fn install<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let threads = std::env::var("SMONKIT_THREADS").ok().and_then(|s| s.parse::<usize>().ok());
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .unwrap_or_else(|_| panic!("cannot build a pool of {n} threads")),
        _ => f(),
    }
}

/// Indices to run: all samples, or the single replayed one.
pub(crate) fn sample_indices(cfg: &SuiteConfig) -> Vec<usize> {
    match cfg.only_index {
        Some(i) => vec![i],
        None => (0..cfg.samples).collect(),
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport, HarnessError> {
    let start = Instant::now();
    let (records, notes) = suites::dispatch(cfg)?;
    Ok(SuiteReport {
        suite: cfg.name,
        bound: cfg.bound,
        samples: cfg.samples,
        seed: cfg.seed,
        records,
        notes,
        wall_time: start.elapsed(),
    })
}
