use mcid_core::checks::{check_fanout, check_path_balance, ViolationKind};
use mcid_core::equiv::{check_equivalence, verify, Outcome, SolveOptions};
use mcid_core::fault::{inject, FaultKind, FaultSpec, Target};
use mcid_core::mcid::{build_mcid, mcid_size_upper_bound, GateOrigin};
use mcid_core::sim::{evaluate_golden, exhaustive_equivalence, simulate, WaveInput};
use mcid_core::{ArrivalSchedule, TechnologyProfile, TimedSignal};
use mcid_testkit::fixtures;

fn rsfq() -> TechnologyProfile {
    TechnologyProfile::rsfq()
}

fn uniform(n: &mcid_core::Netlist) -> ArrivalSchedule {
    ArrivalSchedule::uniform(n.input_names())
}

#[test]
fn late_input_model_and_trace() {
    let imp = fixtures::late_input();
    let golden = fixtures::late_input_golden();
    let m = build_mcid(&imp, &rsfq()).unwrap();
    for pi in ["a", "b", "c"] {
        assert_eq!(m.occurrences(pi), [-3]);
    }
    assert_eq!(m.occurrences("d"), [-2]);

    let run = verify(&imp, &golden, &rsfq(), &uniform(&imp), &SolveOptions::default()).unwrap();
    assert_eq!(run.matching.reference_step, -3);
    let trace = run.verdict.trace().expect("inequivalent").clone();
    let cell = |pi: &str, c: u32| trace.value(pi, c).unwrap();
    for c in 0..2 {
        assert!(!cell("a", c));
        assert!(cell("b", c));
        assert!(cell("c", c));
    }
    assert!(cell("d", 0));
    assert!(!cell("d", 1));
    assert!(!trace.golden_assignment["d"]);
    assert!(trace.mcid_output);
    assert!(!trace.golden_output);
    assert_eq!(
        trace.to_string(),
        "CYCLE 0: a=0 b=1 c=1 d=1\nCYCLE 1: a=0 b=1 c=1 d=0\nGOLDEN: a=0 b=1 c=1 d=0\nOUTPUT y: impl=1 golden=0\n"
    );

    let (wave, t) = trace.replay_wave();
    let out = simulate(&imp, &rsfq(), &wave).unwrap();
    assert!(out[t][0]);
    assert_eq!(evaluate_golden(&golden, &[false, true, true, false]).unwrap(), [false]);
}

#[test]
fn late_input_with_arrival_schedule_is_equivalent() {
    let imp = fixtures::late_input();
    let golden = fixtures::late_input_golden();
    let mut sched = uniform(&imp);
    sched.set("d", 1);
    let run = verify(&imp, &golden, &rsfq(), &sched, &SolveOptions::default()).unwrap();
    assert_eq!(run.verdict.outcome, Outcome::Equivalent);
    assert_eq!(run.mcid.occurrences("d"), [-3]);
    // Identical halves hash together: no search needed.
    assert_eq!(run.verdict.stats.decisions, 0);

    assert!(exhaustive_equivalence(&imp, &golden, &rsfq(), &sched)
        .unwrap()
        .is_equivalent());
    assert!(!exhaustive_equivalence(&imp, &golden, &rsfq(), &uniform(&imp))
        .unwrap()
        .is_equivalent());
}

#[test]
fn late_input_wave_shows_mismatch() {
    let imp = fixtures::late_input();
    let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    let mut wave = WaveInput::new(names);
    wave.push(vec![false, true, true, false]).unwrap();
    wave.push(vec![false, true, true, true]).unwrap();
    let out = simulate(&imp, &rsfq(), &wave).unwrap();
    // The first vector reaches y at cycle 3, paired with the second d.
    assert!(out[3][0]);
}

#[test]
fn shared_inverter_removal_duplicates_inverter() {
    let imp = fixtures::shared_inverter();
    assert!(check_path_balance(&imp, &rsfq()).passed());
    let before = build_mcid(&imp, &rsfq()).unwrap();
    let spec = FaultSpec {
        kind: FaultKind::RemoveDff,
        target: Target::Gate("d1".into()),
        replacement: None,
        seed: 0,
    };
    let (faulty, _) = inject(&imp, &spec).unwrap();
    let after = build_mcid(&faulty, &rsfq()).unwrap();
    let inv_copies = |m: &mcid_core::McidCircuit| {
        let inv = faulty.gate_by_name("inv1").unwrap();
        m.gates()
            .iter()
            .filter(|g| g.origin == GateOrigin::Source(inv))
            .map(|g| m.signal(g.output).step)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>()
    };
    assert_eq!(inv_copies(&before).len(), 1);
    assert_eq!(inv_copies(&after), [-2, -1]);
    assert!(after.lookup(&TimedSignal::new("inv1", -1)).is_some());
    assert_eq!(after.occurrences("a"), [-3, -2]);
}

#[test]
fn deep_cone_growth_and_bound() {
    let imp = fixtures::deep_cone();
    assert!(check_path_balance(&imp, &rsfq()).passed());
    assert!(check_fanout(&imp, &rsfq()).passed());
    assert_eq!(imp.logic_level("s").unwrap(), 4);

    let f1 = imp.gate_by_name("f1").unwrap();
    let before = build_mcid(&imp, &rsfq()).unwrap();
    let spec = FaultSpec {
        kind: FaultKind::RemoveDff,
        target: Target::Gate("f1".into()),
        replacement: None,
        seed: 0,
    };
    let (faulty, _) = inject(&imp, &spec).unwrap();
    let after = build_mcid(&faulty, &rsfq()).unwrap();
    let added = after.gate_count() - (before.gate_count() - 1);
    assert_eq!(added, 7);
    assert_eq!(mcid_size_upper_bound(&imp, &rsfq(), &[f1]).unwrap(), 15);
}

#[test]
fn split_fanin_missing_dff_is_flagged_at_the_and() {
    let imp = fixtures::split_fanin();
    assert!(check_path_balance(&imp, &rsfq()).passed());
    let spec = FaultSpec {
        kind: FaultKind::RemoveDff,
        target: Target::Gate("cd".into()),
        replacement: None,
        seed: 0,
    };
    let (faulty, _) = inject(&imp, &spec).unwrap();
    let report = check_path_balance(&faulty, &rsfq());
    assert_eq!(report.violations.len(), 1);
    assert_eq!(report.violations[0].kind, ViolationKind::UnbalancedFanin);
    assert_eq!(report.violations[0].location, "y");
    assert_eq!(report.violations[0].detail, "AND2 fanin s={1} c={0}");
}

#[test]
fn self_miter_needs_no_search() {
    let golden = fixtures::late_input_golden();
    let m = build_mcid(&golden, &TechnologyProfile::cmos()).unwrap();
    let matching = mcid_core::itcl::match_inputs(&m, &golden).unwrap();
    let miter = mcid_core::equiv::build_miter(&m, &golden, &matching).unwrap();
    assert_eq!(miter.root, mcid_core::equiv::Edge::FALSE);
    let v = check_equivalence(&miter, &SolveOptions::default());
    assert!(v.is_equivalent());
    assert_eq!(v.stats.decisions, 0);
}
