use genusforge::family::{
    builtin, enumerate_variants, search_family, Builtin, FamilyCandidate, FamilyConfig, FamilyError,
};

fn expected_genus(s: u32) -> u32 {
    // Euler's formula for a triangulation of K_12s
    let v = 12 * s as i64;
    let e = v * (v - 1) / 2;
    ((2 - v + e - 2 * e / 3) / 2) as u32
}

#[test]
fn builtins_cover_small_cases() {
    assert!(matches!(builtin(1), Ok(Builtin::Index4 { n: 12, .. })));
    assert!(matches!(builtin(2), Ok(Builtin::Index4 { n: 24, .. })));
    assert!(matches!(builtin(3), Ok(Builtin::Index1(_))));
    assert!(matches!(builtin(4), Err(FamilyError::NoBuiltin(4))));
    assert!(matches!(search_family(3, &FamilyConfig::default()), Err(FamilyError::BelowFamily(3))));
}

#[test]
fn s4_search_and_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FamilyConfig { cache: Some(dir.path().to_path_buf()), ..FamilyConfig::default() };
    let sol = search_family(4, &cfg).unwrap();
    assert!(!sol.from_cache);
    assert!(sol.certificate.pass);
    assert_eq!(sol.certificate.genus, Some(expected_genus(4)));
    assert_eq!(sol.candidate.log.n(), 44);
    assert_eq!(sol.candidate.graph.trace_and_index().index(), 1);
    assert!(sol.candidate.graph.validate_principles().all_pass());

    let text = sol.candidate.to_text();
    assert_eq!(FamilyCandidate::from_text(&text).unwrap(), sol.candidate);

    let cached = search_family(4, &cfg).unwrap();
    assert!(cached.from_cache);
    assert_eq!(cached.candidate, sol.candidate);
    assert_eq!(cached.certificate, sol.certificate);

    // m = 0 at s = 4, so the only variant is the candidate itself
    let set = enumerate_variants(&sol.candidate).unwrap();
    assert_eq!(set.variants.len(), 1);
    assert!(set.variants[0].1.cyclic_eq(&sol.candidate.log));
}

#[test]
fn exhausted_search_reports_its_stages() {
    let cfg = FamilyConfig { budget_checks: 1, ..FamilyConfig::default() };
    match search_family(4, &cfg) {
        Err(FamilyError::SearchFailed(report)) => assert!(report.budget_exhausted, "{report}"),
        other => panic!("expected a staged failure, got {other:?}"),
    }
}
