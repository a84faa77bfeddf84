use smonkit::bqa;
use smonkit::exactla::Fp;
use smonkit::harness::nakayama::{self, InjDim, NakayamaAlgebra};
use smonkit::harness::{algebras, run_suite, HarnessError, SuiteConfig, SuiteName};

fn config(name: SuiteName, samples: usize, seed: u64) -> SuiteConfig {
    let mut cfg = SuiteConfig::new(name, algebras::default_contexts(Fp::two()));
    cfg.samples = samples;
    cfg.bound = 6;
    cfg.seed = seed;
    cfg
}

#[test]
fn sampled_suites_pass() {
    for name in [
        SuiteName::Ce,
        SuiteName::Adjunction,
        SuiteName::SmonPerp,
        SuiteName::Lz3,
        SuiteName::PdAdd,
        SuiteName::Triangular,
    ] {
        let report = run_suite(&config(name, 24, 11)).unwrap();
        assert!(report.ok(), "{}", report.render_records(false));
        assert!(report.records.len() >= 24);
    }
}

#[test]
fn reports_are_deterministic() {
    for name in [SuiteName::Ce, SuiteName::SmonPerp, SuiteName::Triangular] {
        let a = run_suite(&config(name, 12, 5)).unwrap();
        let b = run_suite(&config(name, 12, 5)).unwrap();
        assert_eq!(a.render_text(false), b.render_text(false));
        assert_eq!(a.render_records(false), b.render_records(false));
        let c = run_suite(&config(name, 12, 6)).unwrap();
        assert_ne!(a.render_records(false), c.render_records(false));
    }
}

#[test]
fn replaying_an_index_reproduces_its_record() {
    let full = run_suite(&config(SuiteName::Adjunction, 10, 3)).unwrap();
    let mut cfg = config(SuiteName::Adjunction, 10, 3);
    cfg.only_index = Some(7);
    let one = run_suite(&cfg).unwrap();
    assert_eq!(one.records.len(), 1);
    let same = full.records.iter().find(|r| r.index == Some(7)).unwrap();
    assert_eq!(&one.records[0], same);
}

#[test]
fn suites_without_contexts_are_rejected() {
    let cfg = SuiteConfig::new(SuiteName::Ce, Vec::new());
    assert!(matches!(run_suite(&cfg), Err(HarnessError::MissingInput(..))));
    assert!(matches!(SuiteName::parse("nope"), Err(HarnessError::UnknownSuite(_))));
}

#[test]
fn nakayama_enumeration_counts() {
    let fp = Fp::two();
    for (alg, count) in [
        (algebras::kupisch_17_18_18(fp), 53),
        (algebras::truncated_loop(fp, 6), 6),
        (algebras::linear(fp, 2), 3),
    ] {
        let nak = NakayamaAlgebra::new(alg).unwrap();
        let list = nakayama::enumerate_nakayama(&nak);
        assert_eq!(list.len(), count);
        assert_eq!(list.len(), nak.kupisch().iter().sum::<usize>());
    }
    assert!(matches!(
        NakayamaAlgebra::new(algebras::truncated_loop(fp, 2)).map(|n| n.kupisch().to_vec()),
        Ok(v) if v == vec![2]
    ));
}

#[test]
fn non_nakayama_algebras_are_rejected() {
    let fp = Fp::two();
    let ctx = smonkit::layered::kronecker_context(&algebras::field(fp), 2);
    assert!(matches!(NakayamaAlgebra::new(ctx.factor().clone()), Err(HarnessError::NotNakayama)));
}

#[test]
fn gorenstein_core_small_cases() {
    let fp = Fp::two();
    // self-injective: every indecomposable is GP
    let nak = NakayamaAlgebra::new(algebras::truncated_loop(fp, 2)).unwrap();
    let list = nakayama::enumerate_nakayama(&nak);
    let core = nakayama::gorenstein_core(&nak, &list, 8);
    assert_eq!(core.nonprojective_gp.len(), 1);
    assert_eq!(core.core_size(), 2);
    // hereditary: no non-projective GP
    let nak = NakayamaAlgebra::new(algebras::linear(fp, 2)).unwrap();
    let list = nakayama::enumerate_nakayama(&nak);
    let core = nakayama::gorenstein_core(&nak, &list, 8);
    assert_eq!(core.core_size(), 0);
}

#[test]
fn injective_dimension_evidence() {
    let fp = Fp::two();
    assert_eq!(
        nakayama::evidence_non_gorenstein(&algebras::truncated_loop(fp, 3), 5),
        (InjDim::Finite(0), InjDim::Finite(0))
    );
    let (l, r) = nakayama::evidence_non_gorenstein(&algebras::linear(fp, 3), 5);
    assert!(matches!(l, InjDim::Finite(d) if d <= 1) && matches!(r, InjDim::Finite(d) if d <= 1));
    let (l, r) = nakayama::evidence_non_gorenstein(&algebras::kupisch_17_18_18(fp), 12);
    assert!(l == InjDim::Exceeds(12) || r == InjDim::Exceeds(12));
}

#[test]
fn kupisch_series_matches_projectives() {
    let alg = algebras::kupisch_17_18_18(Fp::two());
    let lens: Vec<usize> = bqa::projectives(&alg).iter().map(|p| p.total_dim()).collect();
    assert_eq!(lens, vec![17, 18, 18]);
}
