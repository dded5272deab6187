//! End-to-end: build, verify, serialize, re-parse, re-verify.

use cyclotome_core::circuit::{build_program, closed_form_count, export_dot, parse, serialize};
use cyclotome_core::ntheory::FermatContext;
use cyclotome_core::verify::verify_program;

fn run(p: u64, bits: u32, tol: f64) {
    let ctx = FermatContext::new(p).unwrap();
    let program = build_program(&ctx, bits).unwrap();
    assert_eq!(program.op_count(), closed_form_count(p), "p={p}");

    let report = verify_program(&program, bits, tol).unwrap();
    assert!(report.bound_ok && report.coverage_ok);
    assert!(report.max_dev < tol, "p={p} max_dev {}", report.max_dev);
    assert_eq!(report.op_count, program.op_count());

    let text = serialize(&program);
    let back = parse(&text).unwrap();
    assert_eq!(back, program, "round trip p={p}");
    assert_eq!(serialize(&back), text);
    verify_program(&back, bits, tol).unwrap();

    let dot = export_dot(&program);
    assert!(dot.matches("[label=").count() == program.node_count());
}

#[test]
fn small_primes_end_to_end() {
    for p in [3u64, 5, 17] {
        run(p, 64, 1e-12);
    }
}

#[test]
fn p257_end_to_end_at_high_precision() {
    run(257, 192, 1e-30);
}

#[test]
fn rebuilding_at_other_precisions_changes_nothing_structural() {
    let ctx = FermatContext::new(17).unwrap();
    let a = build_program(&ctx, 64).unwrap();
    let b = build_program(&ctx, 128).unwrap();
    // values get sharper, the circuit does not move
    assert_eq!(a, b);
}
