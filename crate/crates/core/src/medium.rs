//! Semiclassical response of the three-level Lambda medium: steady-state
//! density matrix, linear and Kerr susceptibilities, refraction / absorption /
//! group-index spectra, and the effective coupling constants handed to the
//! quantum model.
//!
//! Conventions: all rates and frequencies are angular (rad/s). The probe
//! detuning is Delta = omega - omega_p, the coupling detuning is
//! delta_c = omega - omega_12 - omega_c; delta_c = 0 puts the coupling field
//! on its bare resonance, which is the configuration all presets use.

use nalgebra::{Matrix3, SMatrix, SVector};
use num_complex::Complex64 as C64;

use crate::constants::PhysicalConstants;
use crate::linalg::pairwise_sum_c;
use crate::{Error, Result};

/// Atomic and optical constants of the Lambda scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Decay rate |3> -> |1> (rad/s).
    pub gamma31: f64,
    /// Decay rate |3> -> |2> (rad/s).
    pub gamma32: f64,
    /// Decay rate |1> -> |2> between the hyperfine ground states (rad/s).
    pub gamma12: f64,
    /// Dipole matrix element of the probe transition |3><2| (C m).
    pub mu32: f64,
    /// Dipole matrix element of the coupling transition |3><1| (C m).
    pub mu31: f64,
    /// Ground-state hyperfine splitting omega_12 (rad/s).
    pub omega12: f64,
    /// Optical transition frequency omega of |3> -> |2> (rad/s).
    pub omega: f64,
    /// Condensate density N/V (atoms per m^3).
    pub density: f64,
    /// Particle count N used by the quantum model.
    pub n_atoms: f64,
    /// Quantization volume (m^3); `None` derives V = n_atoms / density.
    pub volume: Option<f64>,
}

impl MediumParams {
    pub fn validated(self) -> Result<Self> {
        let pos = [
            self.gamma31,
            self.gamma32,
            self.gamma12,
            self.mu32.abs(),
            self.mu31.abs(),
            self.omega12,
            self.omega,
            self.density,
            self.n_atoms,
        ];
        if pos.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::Domain(
                "medium rates, dipoles, frequencies, density and atom count must be positive"
                    .into(),
            ));
        }
        if let Some(v) = self.volume {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain("volume must be positive".into()));
            }
        }
        Ok(self)
    }

    /// Optical coherence decay, (gamma_32 + gamma_31) / 2.
    pub fn gamma_opt(&self) -> f64 {
        0.5 * (self.gamma32 + self.gamma31)
    }

    /// Ground-state (magnetic) coherence decay, gamma_12.
    pub fn gamma_mag(&self) -> f64 {
        self.gamma12
    }

    /// Quantization volume, defaulting to n_atoms / density.
    pub fn volume(&self) -> f64 {
        self.volume.unwrap_or(self.n_atoms / self.density)
    }

    /// Sodium-condensate parameter set used by all presets:
    /// gamma_32/2pi = gamma_31/2pi = 5 MHz, gamma_12/2pi = 38 kHz,
    /// mu = 22e-30 C m, omega/2pi = 5.1e14 Hz, omega_12/2pi = 1772 MHz,
    /// density 3.3e12 cm^-3, N = 1000.
    pub fn sodium() -> Self {
        use std::f64::consts::TAU;
        Self {
            gamma31: TAU * 5.0e6,
            gamma32: TAU * 5.0e6,
            gamma12: TAU * 38.0e3,
            mu32: 22.0e-30,
            mu31: 22.0e-30,
            omega12: TAU * 1.772e9,
            omega: TAU * 5.1e14,
            density: 3.3e18,
            n_atoms: 1000.0,
            volume: None,
        }
    }
}

/// Classical coupling-field strength, one representation authoritative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingField {
    /// Rabi frequency g1 (rad/s).
    Rabi(f64),
    /// Beam intensity I_c (W/m^2).
    Intensity(f64),
}

/// Probe-field strength, one representation authoritative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProbeField {
    /// Slowly varying amplitude A_p (V/m).
    Amplitude(f64),
    /// Intensity I_p (W/m^2).
    Intensity(f64),
}

/// Classical drive settings: coupling and probe fields plus detunings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveParams {
    pub coupling: CouplingField,
    pub probe: ProbeField,
    /// Probe detuning Delta = omega - omega_p (rad/s); any real value.
    pub delta_p: f64,
    /// Coupling detuning delta = omega - omega_12 - omega_c (rad/s).
    pub delta_c: f64,
}

impl DriveParams {
    /// Coupling Rabi frequency in rad/s.
    pub fn g1(&self, medium: &MediumParams, constants: &PhysicalConstants) -> Result<f64> {
        match self.coupling {
            CouplingField::Rabi(g) => Ok(g),
            CouplingField::Intensity(i) => rabi_from_intensity(i, medium.mu31, constants),
        }
    }

    /// Probe amplitude A_p in V/m.
    pub fn probe_amplitude(&self, constants: &PhysicalConstants) -> Result<f64> {
        match self.probe {
            ProbeField::Amplitude(a) => Ok(a),
            ProbeField::Intensity(i) => {
                if i < 0.0 {
                    return Err(Error::Domain("probe intensity must be nonnegative".into()));
                }
                Ok((2.0 * i / (constants.c * constants.epsilon0)).sqrt())
            }
        }
    }

    /// Reference drive: I_c = 55 mW/cm^2, I_p = 80 uW/cm^2, both fields resonant.
    pub fn sodium_default() -> Self {
        Self {
            coupling: CouplingField::Intensity(550.0),
            probe: ProbeField::Intensity(0.80),
            delta_p: 0.0,
            delta_c: 0.0,
        }
    }

    pub fn with_delta(mut self, delta_p: f64) -> Self {
        self.delta_p = delta_p;
        self
    }
}

/// Rabi frequency |mu| sqrt(2 I / (c eps0)) / hbar for a field of intensity I.
pub fn rabi_from_intensity(
    intensity: f64,
    dipole: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    if intensity < 0.0 {
        return Err(Error::Domain(format!(
            "field intensity must be nonnegative, got {intensity}"
        )));
    }
    if !dipole.is_finite() || dipole <= 0.0 {
        return Err(Error::Domain("dipole moment must be positive".into()));
    }
    let amplitude = (2.0 * intensity / (constants.c * constants.epsilon0)).sqrt();
    Ok(dipole * amplitude / constants.hbar)
}

/// First- and third-order response coefficients of the probe coherence.
#[derive(Debug, Clone, Copy)]
pub struct Rho32Coefficients {
    /// Linear coefficient, 1/Gamma (s).
    pub rho1: C64,
    /// Kerr coefficient multiplying |g2|^2 g2 (s^3).
    pub rho3: C64,
    /// The response denominator Gamma (rad/s).
    pub gamma_factor: C64,
}

/// Response denominator Gamma = Delta - 2i gamma_opt + |g1|^2 / (i gamma_mag + (delta_c - Delta)).
///
/// At delta_c = 0 (coupling field on its bare resonance) the two-photon
/// term reduces to |g1|^2 / (i gamma_mag - Delta).
pub fn gamma_factor(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
) -> Result<C64> {
    let g1 = drive.g1(medium, constants)?;
    let gamma_opt = medium.gamma_opt();
    let raman = C64::new(drive.delta_c - drive.delta_p, medium.gamma_mag());
    let gamma = C64::new(drive.delta_p, -2.0 * gamma_opt) + C64::new(g1 * g1, 0.0) / raman;
    let threshold = 1e-6 * gamma_opt;
    if gamma.norm() < threshold {
        return Err(Error::GammaSingular {
            delta: drive.delta_p,
            gamma_abs: gamma.norm(),
            threshold,
        });
    }
    Ok(gamma)
}

/// Closed-form linear and Kerr coefficients of rho_32 for atoms pooled in |2>.
pub fn rho32_coefficients(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
) -> Result<Rho32Coefficients> {
    let gamma = gamma_factor(medium, drive, constants)?;
    let rho1 = gamma.inv();
    let b = 1.0 / (2.0 * medium.gamma_opt()) + 1.0 / medium.gamma_mag();
    let rho3 = C64::i() / gamma * ((gamma.conj() - gamma) / (2.0 * gamma.norm_sqr())) * b;
    Ok(Rho32Coefficients {
        rho1,
        rho3,
        gamma_factor: gamma,
    })
}

/// Steady-state single-atom density matrix of the averaged Lambda system.
#[derive(Debug, Clone)]
pub struct SteadyState {
    /// 3x3 Hermitian density matrix, indices 0,1,2 = levels |1>,|2>,|3>.
    pub rho: Matrix3<C64>,
    /// Relative residual norm of the full equation set at the solution.
    pub residual: f64,
}

impl SteadyState {
    pub fn trace(&self) -> C64 {
        self.rho[(0, 0)] + self.rho[(1, 1)] + self.rho[(2, 2)]
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.rho[(i, j)] - self.rho[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// The probe coherence element rho_32.
    pub fn rho32(&self) -> C64 {
        self.rho[(2, 1)]
    }
}

// Unknown ordering in the vectorized Liouvillian.
const R11: usize = 0;
const R22: usize = 1;
const R33: usize = 2;
const R21: usize = 3;
const R12: usize = 4;
const R31: usize = 5;
const R13: usize = 6;
const R32: usize = 7;
const R23: usize = 8;

fn liouvillian(
    medium: &MediumParams,
    delta_p: f64,
    delta_c: f64,
    g1: f64,
    g2: C64,
) -> SMatrix<C64, 9, 9> {
    let i = C64::i();
    let g1c = C64::new(g1, 0.0);
    let (g32, g31, g12) = (medium.gamma32, medium.gamma31, medium.gamma12);
    let mut l = SMatrix::<C64, 9, 9>::zeros();
    let mut add = |r: usize, c: usize, v: C64| l[(r, c)] += v;

    add(R11, R13, -i * g1c);
    add(R11, R31, i * g1c.conj());
    add(R11, R11, C64::new(-2.0 * g12, 0.0));
    add(R11, R33, C64::new(2.0 * g31, 0.0));

    add(R22, R23, -i * g2);
    add(R22, R32, i * g2.conj());
    add(R22, R11, C64::new(2.0 * g12, 0.0));
    add(R22, R33, C64::new(2.0 * g32, 0.0));

    add(R33, R13, i * g1c);
    add(R33, R31, -i * g1c.conj());
    add(R33, R23, i * g2);
    add(R33, R32, -i * g2.conj());
    add(R33, R33, C64::new(-2.0 * (g32 + g31), 0.0));

    add(R21, R21, -i * (delta_c - delta_p) - C64::new(g12, 0.0));
    add(R21, R23, -i * g1c);
    add(R21, R31, i * g2.conj());

    add(R12, R12, i * (delta_c - delta_p) - C64::new(g12, 0.0));
    add(R12, R32, i * g1c.conj());
    add(R12, R13, -i * g2);

    add(R31, R31, -i * delta_c - C64::new(g12 + g32 + g31, 0.0));
    add(R31, R11, i * g1c);
    add(R31, R33, -i * g1c);
    add(R31, R21, i * g2);

    add(R13, R13, i * delta_c - C64::new(g12 + g32 + g31, 0.0));
    add(R13, R11, -i * g1c.conj());
    add(R13, R33, i * g1c.conj());
    add(R13, R12, -i * g2.conj());

    add(R32, R32, -i * delta_p - C64::new(g32 + g31, 0.0));
    add(R32, R22, i * g2);
    add(R32, R33, -i * g2);
    add(R32, R12, i * g1c);

    add(R23, R23, i * delta_p - C64::new(g32 + g31, 0.0));
    add(R23, R22, -i * g2.conj());
    add(R23, R33, i * g2.conj());
    add(R23, R21, -i * g1c.conj());
    l
}

/// Solve the full averaged equation set {L rho = 0, tr rho = 1}.
///
/// All nine density-matrix elements are treated as independent complex
/// unknowns; the trace row replaces the (redundant) rho_11 population row.
pub fn steady_state_oracle(
    medium: &MediumParams,
    drive: &DriveParams,
    g2: C64,
    constants: &PhysicalConstants,
) -> Result<SteadyState> {
    medium.validated()?;
    let g1 = drive.g1(medium, constants)?;
    let l = liouvillian(medium, drive.delta_p, drive.delta_c, g1, g2);
    let mut a = l;
    for c in 0..9 {
        a[(0, c)] = C64::new(0.0, 0.0);
    }
    a[(0, R11)] = C64::new(1.0, 0.0);
    a[(0, R22)] = C64::new(1.0, 0.0);
    a[(0, R33)] = C64::new(1.0, 0.0);
    let mut b = SVector::<C64, 9>::zeros();
    b[0] = C64::new(1.0, 0.0);

    let lu = a.lu();
    let x = lu.solve(&b).ok_or_else(|| {
        let diag = lu.u().diagonal();
        let max = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let min = diag.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
        Error::IllConditioned {
            cond_estimate: if min > 0.0 { max / min } else { f64::INFINITY },
        }
    })?;

    let residual = (l * x).norm() / (l.norm() * x.norm().max(f64::MIN_POSITIVE));
    let mut rho = Matrix3::<C64>::zeros();
    let place = [
        (R11, 0, 0),
        (R22, 1, 1),
        (R33, 2, 2),
        (R21, 1, 0),
        (R12, 0, 1),
        (R31, 2, 0),
        (R13, 0, 2),
        (R32, 2, 1),
        (R23, 1, 2),
    ];
    for (k, r, c) in place {
        rho[(r, c)] = x[k];
    }
    Ok(SteadyState { rho, residual })
}

/// Cubic least-squares fit of the oracle's rho_32(g2) on a geometric grid.
///
/// Basis {g2, g2^2, g2^3} with real positive g2 in [1e-3, 1e-2] gamma_opt,
/// eight points; returns (rho1, rho2, rho3) coefficients.
pub fn oracle_cubic_fit(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
) -> Result<(C64, C64, C64)> {
    let gamma_opt = medium.gamma_opt();
    let n = 8;
    let lo = 1e-3 * gamma_opt;
    let hi = 1e-2 * gamma_opt;
    let mut g2s = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / (n - 1) as f64;
        g2s.push(lo * (hi / lo).powf(t));
    }
    // Normal equations on the scaled basis, accumulated in fixed pairwise order.
    let scale = hi;
    let mut design = nalgebra::SMatrix::<f64, 3, 3>::zeros();
    let mut rhs_terms: Vec<[C64; 3]> = Vec::with_capacity(n);
    let mut design_terms: Vec<[f64; 6]> = Vec::with_capacity(n);
    for &g2 in &g2s {
        let ss = steady_state_oracle(medium, drive, C64::new(g2, 0.0), constants)?;
        let r32 = ss.rho32();
        let x = g2 / scale;
        let basis = [x, x * x, x * x * x];
        design_terms.push([
            basis[0] * basis[0],
            basis[0] * basis[1],
            basis[0] * basis[2],
            basis[1] * basis[1],
            basis[1] * basis[2],
            basis[2] * basis[2],
        ]);
        rhs_terms.push([r32 * basis[0], r32 * basis[1], r32 * basis[2]]);
    }
    let col = |idx: usize| -> Vec<f64> { design_terms.iter().map(|t| t[idx]).collect() };
    let d = [
        crate::linalg::pairwise_sum(&col(0)),
        crate::linalg::pairwise_sum(&col(1)),
        crate::linalg::pairwise_sum(&col(2)),
        crate::linalg::pairwise_sum(&col(3)),
        crate::linalg::pairwise_sum(&col(4)),
        crate::linalg::pairwise_sum(&col(5)),
    ];
    design[(0, 0)] = d[0];
    design[(0, 1)] = d[1];
    design[(1, 0)] = d[1];
    design[(0, 2)] = d[2];
    design[(2, 0)] = d[2];
    design[(1, 1)] = d[3];
    design[(1, 2)] = d[4];
    design[(2, 1)] = d[4];
    design[(2, 2)] = d[5];
    let rhs_col = |idx: usize| -> Vec<C64> { rhs_terms.iter().map(|t| t[idx]).collect() };
    let rhs = nalgebra::SVector::<C64, 3>::from([
        pairwise_sum_c(&rhs_col(0)),
        pairwise_sum_c(&rhs_col(1)),
        pairwise_sum_c(&rhs_col(2)),
    ]);
    let design_c = design.map(|v| C64::new(v, 0.0));
    let sol = design_c.lu().solve(&rhs).ok_or(Error::IllConditioned {
        cond_estimate: f64::INFINITY,
    })?;
    Ok((
        sol[0] / scale,
        sol[1] / (scale * scale),
        sol[2] / (scale * scale * scale),
    ))
}

/// Linear and Kerr susceptibilities.
#[derive(Debug, Clone, Copy)]
pub struct SusceptibilityResult {
    /// chi^(1), dimensionless.
    pub chi1: C64,
    /// chi^(3) in m^2/V^2.
    pub chi3: C64,
    pub gamma_factor: C64,
}

/// chi^(1) = (N/V)|mu32|^2/(eps0 hbar Gamma);
/// chi^(3) = i (2N/3V)(|mu32|^4/(eps0 hbar^3)) (Gamma* - Gamma)/(Gamma |Gamma|^2) B.
pub fn susceptibilities(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
) -> Result<SusceptibilityResult> {
    let gamma = gamma_factor(medium, drive, constants)?;
    let b = 1.0 / (2.0 * medium.gamma_opt()) + 1.0 / medium.gamma_mag();
    let mu2 = medium.mu32 * medium.mu32;
    let chi1 = C64::new(
        medium.density * mu2 / (constants.epsilon0 * constants.hbar),
        0.0,
    ) / gamma;
    let chi3 = C64::i()
        * (2.0 * medium.density / 3.0)
        * (mu2 * mu2 / (constants.epsilon0 * constants.hbar.powi(3)))
        * ((gamma.conj() - gamma) / (gamma * gamma.norm_sqr()))
        * b;
    Ok(SusceptibilityResult {
        chi1,
        chi3,
        gamma_factor: gamma,
    })
}

/// Refraction, absorption and group-velocity data at one probe detuning.
#[derive(Debug, Clone, Copy)]
pub struct OpticalResponse {
    /// Linear refraction index.
    pub n_p0: f64,
    /// Kerr refraction coefficient (m^2/V^2).
    pub n_p2: f64,
    /// Linear absorption (1/m).
    pub eta_p0: f64,
    /// Kerr absorption coefficient (m/V^2).
    pub eta_p2: f64,
    /// Group refraction index (includes the |A_p|^2 part of n_p).
    pub n_g: f64,
    /// Group velocity c/n_g; `None` marks |n_g| below threshold.
    pub v_g: Option<f64>,
    /// |n_g(h/2) - n_g(h)| from the half-step convergence check.
    pub n_g_convergence: f64,
}

impl OpticalResponse {
    /// Total absorption at the configured probe amplitude.
    pub fn eta_total(&self, probe_amplitude: f64) -> f64 {
        self.eta_p0 + self.eta_p2 * probe_amplitude * probe_amplitude
    }
}

/// Default finite-difference step for the group-index derivative (rad/s).
pub const GROUP_INDEX_STEP: f64 = std::f64::consts::TAU * 10e3;

fn refraction_total(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
    delta: f64,
    ap2: f64,
) -> Result<f64> {
    let s = susceptibilities(medium, &drive.with_delta(delta), constants)?;
    Ok(1.0 + 0.5 * s.chi1.re + 0.375 * s.chi3.re * ap2)
}

/// Full optical response with the group index from a central finite
/// difference in omega_p (equivalently -d/dDelta), step `step` or the default.
pub fn optical_response(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
    step: Option<f64>,
) -> Result<OpticalResponse> {
    let h = step.unwrap_or(GROUP_INDEX_STEP).abs();
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain("derivative step must be nonzero".into()));
    }
    let delta = drive.delta_p;
    let ap = drive.probe_amplitude(constants)?;
    let ap2 = ap * ap;
    let s = susceptibilities(medium, drive, constants)?;
    let omega_p = medium.omega - delta;
    let n_p0 = 1.0 + 0.5 * s.chi1.re;
    let n_p2 = 0.375 * s.chi3.re;
    let eta_p0 = omega_p / constants.c * s.chi1.im;
    let eta_p2 = 0.75 * omega_p / constants.c * s.chi3.im;

    let ng_at = |hh: f64| -> Result<f64> {
        let np_plus = refraction_total(medium, drive, constants, delta + hh, ap2)?;
        let np_minus = refraction_total(medium, drive, constants, delta - hh, ap2)?;
        // d n_p / d omega_p = -d n_p / d Delta at fixed omega
        let dnp = -(np_plus - np_minus) / (2.0 * hh);
        Ok(n_p0 + n_p2 * ap2 + omega_p * dnp)
    };
    let n_g = ng_at(h)?;
    let n_g_half = ng_at(0.5 * h)?;
    let v_g = if n_g.abs() > 1e-6 {
        Some(constants.c / n_g)
    } else {
        None
    };
    Ok(OpticalResponse {
        n_p0,
        n_p2,
        eta_p0,
        eta_p2,
        n_g,
        v_g,
        n_g_convergence: (n_g_half - n_g).abs(),
    })
}

/// Detunings where the total absorption eta_p0 + eta_p2 |A_p|^2 crosses zero.
///
/// Scans `grid_points` equally spaced detunings over `delta_range`, brackets
/// sign changes and refines each by bisection to |eta_p| < 1e-6 per meter.
/// No sign change yields an empty list.
pub fn find_transparency_points(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
    delta_range: (f64, f64),
    grid_points: usize,
) -> Result<Vec<f64>> {
    if grid_points < 2 {
        return Err(Error::Domain("grid must have at least 2 points".into()));
    }
    let ap = drive.probe_amplitude(constants)?;
    let ap2 = ap * ap;
    let eta = |d: f64| -> Result<f64> {
        let s = susceptibilities(medium, &drive.with_delta(d), constants)?;
        let omega_p = medium.omega - d;
        Ok(omega_p / constants.c * (s.chi1.im + 0.75 * s.chi3.im * ap2))
    };
    let (lo, hi) = delta_range;
    let stepd = (hi - lo) / (grid_points - 1) as f64;
    let mut prev = eta(lo)?;
    let mut roots = Vec::new();
    for k in 1..grid_points {
        let d = lo + stepd * k as f64;
        let val = eta(d)?;
        if prev == 0.0 {
            roots.push(lo + stepd * (k - 1) as f64);
        } else if prev.signum() != val.signum() && val != 0.0 {
            let (mut a, mut b) = (d - stepd, d);
            let mut fa = prev;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                let fm = eta(m)?;
                if fm.abs() < 1e-6 {
                    a = m;
                    b = m;
                    break;
                }
                if fm.signum() == fa.signum() {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev = val;
    }
    Ok(roots)
}

/// Effective quantum couplings derived from the medium response.
#[derive(Debug, Clone, Copy)]
pub struct CouplingConstants {
    /// Single-photon Rabi frequency mu32 sqrt(omega / (2 hbar eps0 V)) (rad/s).
    pub k0: f64,
    /// Linear coupling, real and nonnegative after the phase convention (rad/s).
    pub k1: f64,
    /// Nonlinear coupling (rad/s).
    pub k2: f64,
    /// Linear form factor rho1(g1)/rho1(0).
    pub l_l: C64,
    /// Nonlinear form factor rho3(g1)/rho1(0).
    pub l_nl: C64,
    /// arg(L_l), the phase removed by the convention making k1 real.
    pub phase: f64,
    /// Imaginary part discarded from k2 by the phase convention (rad/s).
    pub k2_residual_imag: f64,
}

/// Coupling constants k0, k1 = k0 |L_l|, k2 = k0^3 Re(e^{-i arg L_l} L_nl).
pub fn coupling_constants(
    medium: &MediumParams,
    drive: &DriveParams,
    constants: &PhysicalConstants,
) -> Result<CouplingConstants> {
    let v = medium.volume();
    let k0 = medium.mu32 * (medium.omega / (2.0 * constants.hbar * constants.epsilon0 * v)).sqrt();
    let with_g1 = rho32_coefficients(medium, drive, constants)?;
    let mut no_coupling = *drive;
    no_coupling.coupling = CouplingField::Rabi(0.0);
    let bare = rho32_coefficients(medium, &no_coupling, constants)?;
    if !bare.rho1.is_finite() || bare.rho1.norm() == 0.0 {
        return Err(Error::GammaSingular {
            delta: drive.delta_p,
            gamma_abs: bare.gamma_factor.norm(),
            threshold: f64::INFINITY,
        });
    }
    let l_l = with_g1.rho1 / bare.rho1;
    let l_nl = with_g1.rho3 / bare.rho1;
    let phase = l_l.arg();
    let rotated = C64::from_polar(1.0, -phase) * l_nl;
    let k0_cubed = k0 * k0 * k0;
    Ok(CouplingConstants {
        k0,
        k1: k0 * l_l.norm(),
        k2: k0_cubed * rotated.re,
        l_l,
        l_nl,
        phase,
        k2_residual_imag: k0_cubed * rotated.im,
    })
}
