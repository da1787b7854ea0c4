use qcisc_assembler::{assemble_cnnot_basic, BasicPlan};
use qcisc_sim::{simulate_circuit, GateSet, trace_fidelity};
use qcisc_sim::targets;

fn check(m1: u32, m2: u32, m3: u32, k: u32) {
    let n = m1 + (m2 - 1) + 2 * k * m3 + 2;
    let plan = match BasicPlan::new(n, m1, m2, m3, k) {
        Ok(p) => p,
        Err(e) => { println!("plan ({m1},{m2},{m3},{k}) n={n}: INVALID {e}"); return; }
    };
    let c = match assemble_cnnot_basic(&plan) {
        Ok(c) => c,
        Err(e) => { println!("plan ({m1},{m2},{m3},{k}) n={n}: ASSEMBLE-ERR {e}"); return; }
    };
    if n > 10 { println!("skip sim n={n}"); return; }
    let sim = simulate_circuit(&c, &GateSet::exact()).unwrap();
    // controls = all but target(0)... target/ancilla from metadata
    let target_q: u32 = c.metadata["target"].parse().unwrap();
    let anc: u32 = c.metadata["ancilla"].parse().unwrap();
    let controls: Vec<u32> = (0..n).filter(|&q| q != target_q && q != anc).collect();
    let exact = targets::cnnot_with_roles(n, &controls, target_q);
    let f = trace_fidelity(sim.mat(), exact.mat());
    println!("plan ({m1},{m2},{m3},{k}) n={n}: F_tr = {f:.12} slots={} gates={}", c.slot_count(), c.instructions().len());
}

fn main() {
    check(1, 1, 1, 1); // Fig-7 special
    check(1, 2, 1, 1); // n=6
    check(2, 2, 1, 1); // n=7
    check(1, 3, 1, 1); // n=7
    check(1, 2, 1, 2); // n=8
    check(1, 2, 2, 1); // n=8  (m3 = 2: shuttles live)
    check(2, 3, 1, 1); // n=8
    check(1, 2, 1, 3); // n=10 (k=3)
    check(2, 2, 2, 1); // n=9
    check(1, 3, 2, 1); // n=9
    check(2, 3, 2, 1); // n=10
}
