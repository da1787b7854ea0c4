use qcisc_assembler::{assemble_cnnot_basic, BasicPlan};
use qcisc_core::{circuit::{circuit_duration, circuit_quality}, default_library, CostModel};

fn check(m1: u32, m2: u32, m3: u32, k: u32) {
    let n = m1 + (m2 - 1) + 2 * k * m3 + 2;
    let plan = BasicPlan::new(n, m1, m2, m3, k).unwrap();
    let c = assemble_cnnot_basic(&plan).unwrap();
    let lib = default_library();
    let cm = CostModel::default();
    let emitted = circuit_duration(&c, &lib, &cm).unwrap();
    let formula = plan.duration(&lib).unwrap();
    let hist = c.block_histogram();
    let want = plan.expected_histogram();
    let hist_ok = hist == want;
    let f_emitted = circuit_quality(&c, &lib, &cm).unwrap().fidelity;
    let f_formula = plan.fidelity(&lib).unwrap();
    println!("({m1},{m2},{m3},{k}) n={n}: dur {emitted:.4} vs {formula:.4} ({}) hist={} fid {}","
        ".trim(), hist_ok, (f_emitted - f_formula).abs() < 1e-14);
    if !hist_ok {
        println!("   got:  {hist:?}");
        println!("   want: {want:?}");
    }
}

fn main() {
    for (m1, m2, m3, k) in [(1u32,2u32,1u32,1u32),(2,2,1,1),(1,2,2,1),(2,3,2,1),(1,2,1,2),(2,2,2,2),(1,2,2,3),(1,2,1,4),(2,3,2,4),(1,2,2,5),(3,4,2,4),(2,5,3,4)] {
        check(m1, m2, m3, k);
    }
}
