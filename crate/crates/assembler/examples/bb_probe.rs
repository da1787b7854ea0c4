use qcisc_assembler::{assemble_cnnot_backbone, plan_backbone};
use qcisc_core::{circuit::{circuit_duration, circuit_quality}, default_library, CostModel};
use qcisc_sim::{simulate_circuit, GateSet, trace_fidelity, targets};

fn check(n: u32) {
    let plan = plan_backbone(n);
    println!("n={n}: p={} m1={} m2={} g1={:?} g2={:?} g3={:?} g4={:?}",
        plan.p, plan.m1, plan.m2, plan.m3_1, plan.m3_2, plan.m3_3, plan.m3_4);
    let c = match assemble_cnnot_backbone(&plan) {
        Ok(c) => c,
        Err(e) => { println!("   ASSEMBLE-ERR {e}"); return; }
    };
    let lib = default_library();
    let cm = CostModel::default();
    let hist_ok = c.block_histogram() == plan.expected_histogram();
    let dur = circuit_duration(&c, &lib, &cm);
    let formula = plan.duration(&lib);
    let fid = circuit_quality(&c, &lib, &cm).map(|q| q.fidelity);
    let f_formula = plan.fidelity(&lib);
    match (dur, formula, fid, f_formula) {
        (Ok(d), Ok(f), Ok(ff), Ok(fff)) => {
            println!("   dur {d:.4} vs {f:.4} hist={hist_ok} fid-match={}", (ff - fff).abs() < 1e-12);
            if !hist_ok {
                println!("   got:  {:?}", c.block_histogram());
                println!("   want: {:?}", plan.expected_histogram());
            }
        }
        e => println!("   ERR {e:?}"),
    }
    if n <= 9 {
        let sim = simulate_circuit(&c, &GateSet::exact()).unwrap();
        let target_q: u32 = c.metadata["target"].parse().unwrap();
        let anc: u32 = c.metadata["ancilla"].parse().unwrap();
        let controls: Vec<u32> = (0..n).filter(|&q| q != target_q && q != anc).collect();
        let exact = targets::cnnot_with_roles(n, &controls, target_q);
        let f = trace_fidelity(sim.mat(), exact.mat());
        println!("   oracle F_tr = {f:.12}");
    }
}

fn main() {
    for n in [5u32, 6, 7, 8, 9, 41, 42] {
        check(n);
    }
}
