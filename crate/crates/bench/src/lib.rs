//! Shared fixtures for the benchmarks.

use boson_decay_core::spectral::discretize_bath;
use boson_decay_core::{DiscreteBath, SpectralDensitySpec, SystemMode};

/// Flat band of `n_modes` modes centred on `omega_b = 20`, with `gamma = 1`
/// and half-width 10.
pub fn flat_band(n_modes: usize) -> (SystemMode, DiscreteBath) {
    let system = SystemMode::new(20.0).expect("positive frequency");
    let spec = SpectralDensitySpec::new(1.0, 20.0, 10.0).expect("valid band");
    (
        system,
        discretize_bath(&spec, n_modes).expect("nonzero mode count"),
    )
}
