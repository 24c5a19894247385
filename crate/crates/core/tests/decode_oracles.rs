//! Cross-verification of the peeling decoder against the feasibility
//! criterion, over exhaustive survivor subsets at desk scale.

use ambx_core::{
    decodable, decode, encode, CodeSpec, Construction, DataGrid, DecodeStatus, Direction,
    Projection,
};

fn payload(len: usize) -> Vec<u8> {
    (0..len).map(|i| (i as u32).wrapping_mul(2654435761).to_le_bytes()[0]).collect()
}

fn family_specs() -> Vec<CodeSpec> {
    let mut specs = Vec::new();
    for b in 1..=5usize {
        for k in 1..=5usize {
            for n in k..=7usize {
                specs.push(CodeSpec::new(Construction::C33, n, k, b, 1).unwrap());
            }
            let s = k.div_ceil(2);
            for n in s..=6usize {
                specs.push(CodeSpec::new(Construction::C35 { q_e: 2 }, n, k, b, 1).unwrap());
            }
        }
    }
    specs
}

fn subset(projs: &[Projection], mask: u32) -> (Vec<Projection>, Vec<Direction>) {
    let mut chosen = Vec::new();
    let mut dirs = Vec::new();
    for (i, proj) in projs.iter().enumerate() {
        if mask >> i & 1 == 1 {
            chosen.push(proj.clone());
            dirs.push(proj.dir);
        }
    }
    (chosen, dirs)
}

#[test]
fn peeling_success_agrees_with_feasibility_criterion() {
    // The geometric criterion (sum|p| >= b or sum|q| >= k over survivors)
    // and the peeling outcome must agree on every subset of every spec.
    let mut decodes = 0u64;
    for spec in family_specs() {
        let grid = DataGrid::from_bytes(&payload(spec.capacity()), spec.b(), spec.k(), 1).unwrap();
        let projs = encode(&grid, &spec).unwrap();
        for mask in 0u32..(1 << spec.n()) {
            let (chosen, dirs) = subset(&projs, mask);
            let feasible = decodable(&spec, &dirs);
            let out = decode(&spec, &chosen).unwrap();
            decodes += 1;
            match out.report.status {
                DecodeStatus::Success => {
                    assert!(
                        feasible,
                        "peeling succeeded on an infeasible subset: spec {:?}, mask {mask:b}",
                        spec
                    );
                    assert_eq!(out.grid.to_data_grid().unwrap(), grid);
                }
                DecodeStatus::Stalled => {
                    assert!(
                        !feasible,
                        "peeling stalled on a feasible subset: spec {:?}, mask {mask:b}",
                        spec
                    );
                    assert!(out.report.residual_unresolved > 0);
                }
            }
        }
    }
    assert!(decodes > 9_000, "sweep unexpectedly small: {decodes}");
}

#[test]
fn every_tolerance_respecting_subset_reconstructs() {
    // The family guarantee: any reconstruction_size-subset decodes.
    for spec in family_specs() {
        let grid = DataGrid::from_bytes(&payload(spec.capacity()), spec.b(), spec.k(), 1).unwrap();
        let projs = encode(&grid, &spec).unwrap();
        let s = spec.reconstruction_size();
        for mask in 0u32..(1 << spec.n()) {
            if mask.count_ones() as usize != s {
                continue;
            }
            let (chosen, dirs) = subset(&projs, mask);
            assert!(
                decodable(&spec, &dirs),
                "family subset of size {s} infeasible: spec {spec:?}, mask {mask:b}"
            );
            let out = decode(&spec, &chosen).unwrap();
            assert_eq!(out.report.status, DecodeStatus::Success, "mask {mask:b}");
            assert_eq!(out.grid.to_data_grid().unwrap(), grid);
        }
    }
}

#[test]
fn stalls_are_partially_sound_and_fully_accounted() {
    for spec in family_specs() {
        let grid = DataGrid::from_bytes(&payload(spec.capacity()), spec.b(), spec.k(), 1).unwrap();
        let projs = encode(&grid, &spec).unwrap();
        for mask in 0u32..(1 << spec.n()) {
            let (chosen, _) = subset(&projs, mask);
            let out = decode(&spec, &chosen).unwrap();
            let cells = spec.b() * spec.k();
            assert_eq!(out.report.resolved_count + out.report.residual_unresolved, cells);
            assert_eq!(out.report.peel_trace.len(), out.report.resolved_count);
            assert_eq!(out.grid.resolved_count(), out.report.resolved_count);
            // Anything recovered must be the truth, stall or not.
            for z in 0..spec.b() {
                for l in 0..spec.k() {
                    if let Some(sym) = out.grid.cell(z, l) {
                        assert_eq!(sym, grid.cell(z, l));
                    }
                }
            }
            // No cell may be peeled twice.
            let mut seen = std::collections::BTreeSet::new();
            for step in &out.report.peel_trace {
                assert!(seen.insert((step.row, step.col)), "cell peeled twice");
            }
            // Work accounting: one XOR per (resolved cell, available projection).
            assert_eq!(out.report.xor_ops, (out.report.resolved_count * chosen.len()) as u64);
        }
    }
}
