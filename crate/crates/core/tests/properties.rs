mod common;

#[test]
fn kernel_antisymmetry_256_cases() {
    common::kernel_antisymmetry(256).unwrap();
}

#[test]
fn mode_jacobi_256_cases() {
    common::mode_jacobi(256).unwrap();
}

#[test]
fn every_mutation_is_detected() {
    for (name, tried, missed) in common::mutation_suite() {
        assert!(tried > 0, "{name}: no mutations generated");
        assert!(missed.is_empty(), "{name}: undetected {missed:?}");
    }
}
