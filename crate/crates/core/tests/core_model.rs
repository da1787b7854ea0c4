use proptest::prelude::*;
use qcisc_core::{
    circuit::{circuit_duration, circuit_quality},
    default_library, BlockEntry, BlockLibrary, BlockSource, Circuit, CoreError, CostModel,
    InstructionKind, LocalPolicy, LocalUParams,
};

fn swap4_fig3a() -> Circuit {
    // slots: {S(0,1) || S(2,3)}, {S(1,2)}, {S(0,1) || S(2,3)}
    let mut c = Circuit::empty(4);
    c.push_at(InstructionKind::Swap2, vec![0, 1], 0).unwrap();
    c.push_at(InstructionKind::Swap2, vec![2, 3], 0).unwrap();
    c.push_at(InstructionKind::Swap2, vec![1, 2], 1).unwrap();
    c.push_at(InstructionKind::Swap2, vec![0, 1], 2).unwrap();
    c.push_at(InstructionKind::Swap2, vec![2, 3], 2).unwrap();
    c
}

#[test]
fn empty_circuit_has_zero_duration_and_unit_quality() {
    let lib = default_library();
    let cm = CostModel::default();
    let c = Circuit::empty(3);
    assert_eq!(circuit_duration(&c, &lib, &cm).unwrap(), 0.0);
    let q = circuit_quality(&c, &lib, &cm).unwrap();
    assert_eq!(q.fidelity, 1.0);
    assert_eq!(q.duration, 0.0);
    assert_eq!(q.quality, 1.0);
}

#[test]
fn swap4_network_duration_is_slot_max_sum() {
    // Independent oracle: sum over slots of the max entry duration. Three
    // slots, each dominated by a SWAP2 at 3/(2J) -> 4.5/J total.
    let lib = default_library();
    let cm = CostModel::default();
    let c = swap4_fig3a();
    let mut by_slot = std::collections::BTreeMap::<u32, f64>::new();
    for inst in c.instructions() {
        let d = lib.entry(&inst.kind).unwrap().duration;
        let e = by_slot.entry(inst.slot).or_insert(0.0);
        if d > *e {
            *e = d;
        }
    }
    let oracle: f64 = by_slot.values().sum();
    assert_eq!(oracle, 4.5);
    assert_eq!(circuit_duration(&c, &lib, &cm).unwrap(), 4.5);
}

#[test]
fn single_cnot_duration_is_half_unit() {
    let lib = default_library();
    let cm = CostModel::default();
    let mut c = Circuit::empty(2);
    c.push_sequential(InstructionKind::Cnot, vec![0, 1]).unwrap();
    assert_eq!(circuit_duration(&c, &lib, &cm).unwrap(), 0.5);
}

#[test]
fn quality_of_single_block_matches_closed_form() {
    let mut lib = BlockLibrary::new(CostModel::default());
    lib.insert(BlockEntry::new(
        InstructionKind::OpaqueBlock { label: "b".into(), m: 2 },
        1.0,
        0.99999,
        BlockSource::Ingested,
    ))
    .unwrap();
    let cm = CostModel::default(); // T_R = 250
    let mut c = Circuit::empty(2);
    c.push_sequential(InstructionKind::OpaqueBlock { label: "b".into(), m: 2 }, vec![0, 1])
        .unwrap();
    let q = circuit_quality(&c, &lib, &cm).unwrap();
    let expected = 0.99999 * (-1.0f64 / 250.0).exp();
    assert!((q.quality - expected).abs() < 1e-15);
    assert!(q.quality <= q.fidelity);
}

#[test]
fn repeated_blocks_multiply_fidelity() {
    let lib = default_library();
    let cm = CostModel::default();
    let mut c = Circuit::empty(4);
    let f = lib.entry(&InstructionKind::SwapBlock { m: 4 }).unwrap().fidelity;
    for _ in 0..5 {
        c.push_sequential(InstructionKind::SwapBlock { m: 4 }, vec![0, 1, 2, 3])
            .unwrap();
    }
    let q = circuit_quality(&c, &lib, &cm).unwrap();
    assert!((q.fidelity - f.powi(5)).abs() < 1e-14);
}

#[test]
fn missing_entry_is_an_error() {
    let lib = BlockLibrary::new(CostModel::default());
    let cm = CostModel::default();
    let mut c = Circuit::empty(2);
    c.push_sequential(InstructionKind::Cnot, vec![0, 1]).unwrap();
    match circuit_duration(&c, &lib, &cm) {
        Err(CoreError::MissingBlockEntry(k)) => assert_eq!(k, "cnot"),
        other => panic!("expected MissingBlockEntry, got {other:?}"),
    }
}

#[test]
fn local_gates_are_free_under_fast_local_only() {
    let lib = default_library();
    let mut c = Circuit::empty(1);
    c.push_sequential(InstructionKind::LocalU(LocalUParams::identity()), vec![0])
        .unwrap();
    let fast = CostModel::default();
    assert_eq!(circuit_duration(&c, &lib, &fast).unwrap(), 0.0);
    let timed = CostModel::new(1.0, 250.0, LocalPolicy::TimedLocal { duration: 0.1 });
    assert_eq!(circuit_duration(&c, &lib, &timed).unwrap(), 0.1);
}

#[test]
fn same_slot_overlap_is_rejected() {
    let mut c = Circuit::empty(3);
    c.push_at(InstructionKind::Swap2, vec![0, 1], 0).unwrap();
    let err = c.push_at(InstructionKind::Swap2, vec![1, 2], 0).unwrap_err();
    assert!(matches!(err, CoreError::OverlapViolation { slot: 0, qubit: 1 }));
}

#[test]
fn non_contiguous_window_is_rejected() {
    let mut c = Circuit::empty(4);
    let err = c
        .push_sequential(InstructionKind::SwapBlock { m: 3 }, vec![0, 1, 3])
        .unwrap_err();
    assert!(matches!(err, CoreError::InvariantViolation(_)));
}

#[test]
fn library_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lib.json");
    let mut lib = BlockLibrary::new(CostModel::default());
    lib.insert(BlockEntry::new(
        InstructionKind::QftBlock { m: 5 },
        4.5,
        0.99994,
        BlockSource::Ingested,
    ))
    .unwrap();
    lib.save(&path).unwrap();
    let loaded = BlockLibrary::load(&path).unwrap();
    assert_eq!(lib, loaded);
    let e = loaded.entry(&InstructionKind::QftBlock { m: 5 }).unwrap();
    assert_eq!(e.fidelity, 0.99994);
}

#[test]
fn default_library_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("default.json");
    let lib = default_library();
    lib.save(&path).unwrap();
    assert_eq!(BlockLibrary::load(&path).unwrap(), lib);
}

#[test]
fn empty_library_is_valid_but_lookups_fail() {
    let lib = BlockLibrary::new(CostModel::default());
    assert!(lib.is_empty());
    assert!(lib.entry(&InstructionKind::Cnot).is_err());
}

#[test]
fn out_of_range_fidelity_is_rejected() {
    let mut lib = BlockLibrary::new(CostModel::default());
    let err = lib
        .insert(BlockEntry::new(InstructionKind::Cnot, 0.5, 1.2, BlockSource::Analytic))
        .unwrap_err();
    assert!(matches!(err, CoreError::InvariantViolation(_)));
}

#[test]
fn circuit_round_trips_through_json() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    let c = swap4_fig3a().with_metadata("scheme", "swap");
    c.save(&path).unwrap();
    let loaded = Circuit::load(&path).unwrap();
    assert_eq!(c, loaded);
}

#[test]
fn concatenation_adds_durations_and_multiplies_fidelities() {
    let lib = default_library();
    let cm = CostModel::default();
    let a = swap4_fig3a();
    let mut b = Circuit::empty(4);
    b.push_sequential(InstructionKind::SwapBlock { m: 4 }, vec![0, 1, 2, 3])
        .unwrap();
    let ab = a.then(&b).unwrap();
    let qa = circuit_quality(&a, &lib, &cm).unwrap();
    let qb = circuit_quality(&b, &lib, &cm).unwrap();
    let qab = circuit_quality(&ab, &lib, &cm).unwrap();
    assert!((qab.fidelity - qa.fidelity * qb.fidelity).abs() < 1e-14);
    assert!((qab.duration - (qa.duration + qb.duration)).abs() < 1e-12);
}

proptest! {
    /// Random same-slot placements: accepted circuits never share a qubit
    /// within a slot; constructing an overlapping one always errors.
    #[test]
    fn slot_disjointness_totality(placements in proptest::collection::vec((0u32..6, 0u32..4), 1..12)) {
        let mut c = Circuit::empty(7);
        let mut occupied: Vec<(u32, u32)> = Vec::new();
        for (q, slot) in placements {
            let qubits = vec![q, q + 1];
            let overlaps = occupied.iter().any(|&(oq, os)| os == slot && (oq == q || oq + 1 == q || oq == q + 1));
            let res = c.push_at(InstructionKind::Swap2, qubits, slot);
            prop_assert_eq!(res.is_ok(), !overlaps);
            if !overlaps {
                occupied.push((q, slot));
            }
        }
    }

    /// Adding an instruction never decreases circuit duration.
    #[test]
    fn duration_monotone_under_append(n_blocks in 1usize..8) {
        let lib = default_library();
        let cm = CostModel::default();
        let mut c = Circuit::empty(4);
        let mut prev = 0.0;
        for i in 0..n_blocks {
            let kind = if i % 2 == 0 { InstructionKind::Swap2 } else { InstructionKind::Cnot };
            c.push_sequential(kind, vec![(i as u32) % 3, (i as u32) % 3 + 1]).unwrap();
            let d = circuit_duration(&c, &lib, &cm).unwrap();
            prop_assert!(d >= prev);
            prev = d;
        }
    }
}
