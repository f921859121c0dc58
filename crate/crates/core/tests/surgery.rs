use genusforge::data::S3_LOG;
use genusforge::derivation::{derive_rotation_system, DerivationSpec};
use genusforge::surgery::{plan_surgery, rsf_hash, verify_final, SurgeryConfig, SurgeryError, SurgeryPlan};
use genusforge::{Log, RotationSystem};

fn derived() -> RotationSystem {
    derive_rotation_system(&DerivationSpec::new(Log::parse(32, S3_LOG).unwrap())).unwrap()
}

#[test]
fn s3_surgery_reaches_k36() {
    let rs = derived();
    let (plan, stats) = plan_surgery(&rs, 3, &SurgeryConfig::default()).unwrap();
    assert!(stats.states < 1_000_000, "{stats}");
    assert_eq!(plan.handle_count(), 1);
    assert_eq!(plan.edge_delta(), 6);

    let (out, ledger) = plan.apply(&rs).unwrap();
    let handles: Vec<_> = ledger.iter().filter(|e| e.genus_after != e.genus_before).collect();
    assert_eq!(handles.len(), 1);
    assert_eq!(handles[0].genus_after - handles[0].genus_before, 1);
    assert_eq!(ledger.first().unwrap().genus_before, 87);
    assert_eq!(ledger.last().unwrap().genus_after, 88);

    let cert = verify_final(&out, 3);
    assert!(cert.pass, "{}", cert.to_text());
    assert_eq!((cert.vertices, cert.edges, cert.faces, cert.genus), (36, 630, 420, Some(88)));
    assert_eq!(cert.hash, rsf_hash(&RotationSystem::from_rsf(&out.to_rsf()).unwrap()));

    // the text form replays to the same triangulation
    let again = SurgeryPlan::from_text(&plan.to_text()).unwrap();
    assert_eq!(again, plan);
    assert_eq!(again.apply(&rs).unwrap().0, out);
}

#[test]
fn tiny_budget_fails_cleanly() {
    let cfg = SurgeryConfig { budget_states: 5, ..SurgeryConfig::default() };
    match plan_surgery(&derived(), 3, &cfg) {
        Err(SurgeryError::BudgetExhausted(stats)) => assert!(stats.states > 5),
        other => panic!("expected budget exhaustion, got {other:?}"),
    }
}

#[test]
fn planner_rejects_non_triangulations() {
    // a 4-cycle: two quadrilateral faces
    let rows = (0..4u32).map(|v| {
        let n = |g: u32| genusforge::VertexLabel::Number(g % 4);
        (n(v), vec![n(v + 1), n(v + 3)])
    });
    let c4 = RotationSystem::from_rows(4, &[], rows).unwrap();
    assert!(matches!(plan_surgery(&c4, 3, &SurgeryConfig::default()), Err(SurgeryError::Precondition(_))));
}

#[test]
fn plans_with_wrong_ledgers_are_refused() {
    assert!(matches!(
        SurgeryPlan::from_text("flip 0>1\n").unwrap().apply(&derived()),
        Err(SurgeryError::HandleCount(0))
    ));
    assert!(SurgeryPlan::from_text("twist 0>1\n").is_err());
}
