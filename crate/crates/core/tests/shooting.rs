use core::f64::consts::PI;

use qbrach_core::engine::{shoot_for_target, ShootingOptions};
use qbrach_core::gates::{target_entangler, target_swap};
use qbrach_core::heisenberg::heisenberg_constraints;

#[test]
fn swap_is_found_at_the_optimal_time() {
    let c = heisenberg_constraints(1.0).unwrap();
    let r = shoot_for_target(&target_swap().matrix, &c, ShootingOptions::default()).unwrap();
    assert!(r.success);
    assert!(r.duration <= 3f64.sqrt() * PI / 4.0 + 1e-3);
    assert!(r.infidelity < 1e-6);
}

#[test]
fn entangler_quarter_turn() {
    let c = heisenberg_constraints(1.0).unwrap();
    let r = shoot_for_target(&target_entangler(PI / 4.0).unwrap().matrix, &c, ShootingOptions::default()).unwrap();
    assert!(r.success);
    assert!((r.duration - PI * (7.0f64 / 32.0).sqrt()).abs() < 1e-2);
}

#[test]
fn unreachable_target_is_reported_not_raised() {
    use qbrach_core::engine::ConstraintSet;
    use qbrach_core::pauli::{pauli_string_matrix, PauliString};
    // Only Z1 is allowed; SWAP is out of reach.
    let forbidden = PauliString::all(2)
        .into_iter()
        .filter(|s| s.weight() > 0 && s.to_string() != "Z1")
        .map(|s| pauli_string_matrix(&s))
        .collect();
    let c = ConstraintSet::new(1.0, forbidden).unwrap();
    let opts = ShootingOptions { restarts: 1, duration_seeds: 2, max_evals: 100, lm_iters: 5, ..Default::default() };
    let r = shoot_for_target(&target_swap().matrix, &c, opts).unwrap();
    assert!(!r.success);
    assert!(r.infidelity > 1e-3);
}
