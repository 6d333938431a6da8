//! Physical constants used at the SI boundary.
//!
//! Internally every frequency, rate and coupling is an angular frequency in
//! rad/s and energies are angular frequencies (hbar = 1). Planck's constant
//! only enters when converting measured field intensities and dipole moments
//! into Rabi frequencies or susceptibilities.

/// Immutable bundle of SI constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum (m/s).
    pub c: f64,
    /// Vacuum permittivity (F/m).
    pub epsilon0: f64,
    /// Reduced Planck constant (J s); converts dipole energies to rad/s.
    pub hbar: f64,
}

impl PhysicalConstants {
    pub fn new(c: f64, epsilon0: f64, hbar: f64) -> crate::Result<Self> {
        if !(c > 0.0 && epsilon0 > 0.0 && hbar > 0.0) {
            return Err(crate::Error::Domain(
                "physical constants must be strictly positive".into(),
            ));
        }
        Ok(Self { c, epsilon0, hbar })
    }
}

impl Default for PhysicalConstants {
    /// CODATA 2018 values.
    fn default() -> Self {
        Self {
            c: 299_792_458.0,
            epsilon0: 8.8541878128e-12,
            hbar: 1.054_571_817e-34,
        }
    }
}
