use fockphase::fock::{ladder_moment, number_moments};
use fockphase::oracle::{
    ladder_power_matrix, number_matrix, oracle_expectation, oracle_interferometer, oracle_state, two_mode_operators,
};
use fockphase::interferometry::{delta_jz_direct, slope_djz_dphi};
use fockphase::states::build;
use fockphase::verify::{cross_check, Suite};
use fockphase::StateSpec;

fn padded_pair(spec: &StateSpec) -> (fockphase::FockVector, fockphase::FockVector, usize) {
    let state = build(spec).unwrap();
    let dim = state.dim() + 16;
    let oracle = oracle_state(spec, dim).unwrap();
    (state.padded(dim), oracle, dim)
}

#[test]
fn spec_examples_against_matrices() {
    let (s, o, dim) = padded_pair(&StateSpec::psdfs(1, 1, 1.0, 0.0));
    let m = ladder_power_matrix(1, 1, dim).unwrap();
    assert!((ladder_moment(&s, 1, 1) - oracle_expectation(&s, &m).unwrap()).norm() < 1e-8);
    assert!(o.fidelity(&s) >= 1.0 - 1e-8);

    let (s, _, dim) = padded_pair(&StateSpec::padfs(1, 0, 1.0, 0.0));
    let n = number_matrix(dim).unwrap();
    let m = number_moments(&s);
    assert!((m.mean - oracle_expectation(&s, &n).unwrap().re).abs() < 1e-8);
    assert!((m.second_moment - oracle_expectation(&s, &n.pow(2)).unwrap().re).abs() < 1e-8);

    let (s, _, dim) = padded_pair(&StateSpec::padfs(1, 1, 1.0, 0.0));
    let n2 = number_matrix(dim).unwrap().pow(2);
    let value = oracle_expectation(&s, &n2).unwrap();
    assert!(value.im.abs() < 1e-10);
    assert!((number_moments(&s).second_moment - value.re).abs() < 1e-8);

    let (s, o, _) = padded_pair(&StateSpec::psdfs(2, 1, 1.0, 0.0));
    assert!(o.fidelity(&s) >= 1.0 - 1e-8);
}

#[test]
fn full_tensor_product_on_small_state() {
    let spec = StateSpec::padfs(1, 1, 0.1, 0.3);
    let state = build(&spec).unwrap();
    let dim = 16;
    let small = oracle_state(&spec, dim).unwrap();
    assert!(small.fidelity(&state) > 1.0 - 1e-8);
    let ops = two_mode_operators(dim).unwrap();
    for phi in [0.4, std::f64::consts::FRAC_PI_4, 2.2] {
        let out = oracle_interferometer(&small, phi, &ops).unwrap();
        assert!((out.jz_var - delta_jz_direct(&state, phi)).abs() < 1e-8);
        assert!((out.slope - slope_djz_dphi(&state, phi)).abs() < 1e-8);
    }
}

#[test]
fn full_cross_check_on_edge_specs() {
    for spec in [
        StateSpec::padfs(3, 3, 2.0, std::f64::consts::PI),
        StateSpec::psdfs(3, 0, 2.0, std::f64::consts::FRAC_PI_2),
        StateSpec::psdfs(3, 3, 0.3, 0.0),
        StateSpec::padfs(0, 0, 0.05, 0.0),
    ] {
        let checks = cross_check(&spec, Suite::Full).unwrap();
        let bad: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        assert!(bad.is_empty(), "{spec:?}: {bad:#?}");
    }
}
