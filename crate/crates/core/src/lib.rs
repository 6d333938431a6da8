//! Simulation library for a Lambda-scheme Bose-Einstein condensate probed by
//! a weak quantum pulse under a classical coupling field.
//!
//! The semiclassical side ([`medium`]) produces susceptibilities, slow-light
//! spectra and the effective couplings k1, k2. The quantum side treats each
//! excitation number M as an independent block: [`algebra`] builds the
//! deformed-algebra machinery and its su(2) realization, [`spectral`]
//! diagonalizes the blocks exactly and perturbatively, and [`dynamics`]
//! propagates photon-number statistics (Fano-Mandel Q, collapses and
//! revivals) for a coherent probe.
//!
//! ```
//! use becprobe::*;
//!
//! // Slow light at the resonant working point.
//! let medium = MediumParams::sodium();
//! let drive = DriveParams::sodium_default();
//! let constants = PhysicalConstants::default();
//! let response = optical_response(&medium, &drive, &constants, None).unwrap();
//! assert!((response.v_g.unwrap() - 2000.0).abs() < 300.0);
//!
//! // Photon statistics of a small coherent probe over one Rabi period.
//! let omega = medium.omega;
//! let (k1, k2) = (3.04e-7 * omega, -3.01e-9 * omega);
//! let state = initial_state(4.0, medium.n_atoms, 20).unwrap();
//! let t_rabi = std::f64::consts::TAU / ladder_frequency(4.0, 500.0, k1, k2);
//! let times: Vec<f64> = (0..64).map(|i| t_rabi * i as f64 / 63.0).collect();
//! let series =
//!     evolve_expectations(&state, k1, k2, 0.0, &times, EvolutionOrder::Exact).unwrap();
//! assert!((series.n_mean[0] - 4.0).abs() < 1e-6);
//! assert!(series.q[0].unwrap().abs() < 1e-6); // coherent input is Poissonian
//! ```

pub mod algebra;
pub mod constants;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod medium;
pub mod spectral;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};

pub use algebra::{
    classify_sector, pae_generators, spin_matrices, IrrepSector, PaeGenerators, SpinMatrices,
    StructurePolynomial, Zone,
};
pub use dynamics::{
    default_m_cutoff, direct_poisson_sum, evolve_expectations, initial_state, ladder_frequency,
    mandel_q, timescales, zero_order_expectations, CollapseBranch, EvolutionOrder, QuantumState,
    TimeSeries, Timescales,
};
pub use medium::{
    coupling_constants, find_transparency_points, gamma_factor, optical_response, oracle_cubic_fit,
    rabi_from_intensity, rho32_coefficients, steady_state_oracle, susceptibilities,
    CouplingConstants, CouplingField, DriveParams, MediumParams, OpticalResponse, ProbeField,
    Rho32Coefficients, SteadyState, SusceptibilityResult,
};
pub use spectral::{
    dressing_transform, exact_spectrum, perturbative_spectrum, sector_spectrum,
    spectrum_relative_errors, DressingTransform, ExactSpectrum, SectorHamiltonian, SectorSpectrum,
};
