use boson_decay_core::analysis::linspace;
use boson_decay_core::decay::fock_populations;
use boson_decay_core::fock_oracle::ground_state_invariance_check;
use boson_decay_core::spectral::discretize_bath;
use boson_decay_core::state::coherent_amplitudes;
use boson_decay_core::*;

fn small_bath(n_modes: usize) -> (SystemMode, DiscreteBath) {
    let system = SystemMode::new(5.0).unwrap();
    let spec = SpectralDensitySpec::new(1.0, 5.0, 2.0).unwrap();
    (system, discretize_bath(&spec, n_modes).unwrap())
}

#[test]
fn fock_populations_follow_binomial_law() {
    let times = linspace(0.0, 5.0, 20);
    for n_modes in 1..=3 {
        let (system, bath) = small_bath(n_modes);
        let exact = ExactPropagator::new(&system, &bath).unwrap();
        for n in 1..=3 {
            let oracle = FockOracle::new(&system, &bath, n).unwrap();
            let states = oracle
                .reduced_states(&OpenSystemState::Fock(n), &times)
                .unwrap();
            for (t, rho) in times.iter().zip(&states) {
                let expected = fock_populations(n, exact.survival(*t), *t).unwrap();
                for (got, want) in rho.populations().iter().zip(&expected.probs) {
                    assert!(
                        (got - want).abs() <= 1e-8,
                        "N={n_modes} n={n} t={t}: {got} vs {want}"
                    );
                }
                assert!(rho.max_off_diagonal() <= 1e-10);
                assert!((rho.trace() - 1.0).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn coherent_state_stays_pure_and_coherent() {
    let (system, bath) = small_bath(2);
    let exact = ExactPropagator::new(&system, &bath).unwrap();
    for alpha in [C64::new(1.0, 0.0), C64::new(0.6, -0.8)] {
        let initial = OpenSystemState::Coherent(alpha);
        let oracle = FockOracle::new(&system, &bath, initial.suggested_cutoff()).unwrap();
        for t in [0.3, 1.0, 2.5, 4.0] {
            let rho = oracle.reduced_state(&initial, t).unwrap();
            let label = alpha * exact.coefficients(t).u;
            assert!(rho.purity() >= 1.0 - 1e-6);
            assert!(rho.fidelity_with_pure(&coherent_amplitudes(label, rho.n_max())) >= 1.0 - 1e-6);
            assert!((rho.mean_number() - alpha.norm_sqr() * exact.survival(t)).abs() <= 1e-6);
            assert!(rho.hermiticity_defect() <= 1e-10);
            assert!(rho.min_eigenvalue().unwrap() >= -1e-8);
        }
    }
}

#[test]
fn vacuum_is_stationary_with_irregular_couplings() {
    let (system, bath) = small_bath(3);
    let bath = bath.with_couplings(&[0.31, 0.9, 0.12]).unwrap();
    assert!(ground_state_invariance_check(&system, &bath, 3.0).unwrap());
    let (system, single) = small_bath(1);
    let xi = single.modes()[0].xi;
    let quarter = std::f64::consts::FRAC_PI_2 / xi;
    assert!(ground_state_invariance_check(&system, &single, quarter).unwrap());
}
