//! Effective-Hamiltonian blocks, exact dense spectra, the perturbative
//! spectrum through second order, and the dressing transforms.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::algebra::{spin_matrices, IrrepSector};
use crate::linalg::{eigh, exp_i_hermitian};
use crate::{Error, Result};

/// One fixed-M block of the effective Hamiltonian.
///
/// Basis states are `|n, m = M - n - r>` ordered by m-tilde ascending
/// (photon number descending); this works for every zone including M = 2r.
#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    pub m: u64,
    pub r: f64,
    pub r_tilde: f64,
    pub dim: usize,
    /// Full Hermitian block, diagonal omega_p (n + m + N/2) + Delta m.
    pub matrix: DMatrix<C64>,
    /// Sector constant C0 = omega_p (M + N/2 - r) + Delta (r_tilde - r).
    pub c0: f64,
    pub delta: f64,
    pub omega_p: f64,
    k1: f64,
    k2: f64,
}

impl SectorHamiltonian {
    /// Build the block for any (M, r), boundary irreps included.
    pub fn new(
        m: u64,
        r: f64,
        omega_p: f64,
        delta: f64,
        k1: f64,
        k2: f64,
        n_atoms: f64,
    ) -> Result<Self> {
        let two_r = 2.0 * r;
        if !r.is_finite() || r < 0.0 || (two_r - two_r.round()).abs() > 1e-9 {
            return Err(Error::Domain("r must be a nonnegative half-integer".into()));
        }
        let mf = m as f64;
        let n_min = (mf - two_r).max(0.0).round() as i64;
        let dim = (m as i64 - n_min + 1) as usize;
        let r_tilde = (dim - 1) as f64 / 2.0;
        let mut h = DMatrix::<C64>::zeros(dim, dim);
        for i in 0..dim {
            let n = mf - i as f64;
            let ms = mf - n - r;
            h[(i, i)] = C64::new(omega_p * (n + ms + n_atoms / 2.0) + delta * ms, 0.0);
            if i + 1 < dim {
                let amp = (k1 + k2 * n) * n.sqrt() * (r * (r + 1.0) - ms * (ms + 1.0)).sqrt();
                h[(i + 1, i)] = C64::new(amp, 0.0);
                h[(i, i + 1)] = C64::new(amp, 0.0);
            }
        }
        let c0 = omega_p * (mf + n_atoms / 2.0 - r) + delta * (r_tilde - r);
        Ok(Self {
            m,
            r,
            r_tilde,
            dim,
            matrix: h,
            c0,
            delta,
            omega_p,
            k1,
            k2,
        })
    }

    /// Build the block of a classified sector, rejecting invalid ones.
    pub fn from_sector(
        sector: &IrrepSector,
        omega_p: f64,
        delta: f64,
        n_atoms: f64,
    ) -> Result<Self> {
        sector.require_valid()?;
        Self::new(
            sector.m, sector.r, omega_p, delta, sector.k1, sector.k2, n_atoms,
        )
    }

    /// H - C0, built directly so the large omega_p scale never enters:
    /// diagonal Delta * m_tilde, couplings unchanged. Used by dynamics.
    pub fn reduced(&self) -> DMatrix<C64> {
        let mut h = self.matrix.clone();
        for i in 0..self.dim {
            let mt = -self.r_tilde + i as f64;
            h[(i, i)] = C64::new(self.delta * mt, 0.0);
        }
        h
    }

    /// Photon numbers n_i = M - i in basis order.
    pub fn photon_numbers(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.m as f64 - i as f64).collect()
    }

    pub fn couplings(&self) -> (f64, f64) {
        (self.k1, self.k2)
    }
}

/// Exact dense spectrum of one block.
#[derive(Debug, Clone)]
pub struct ExactSpectrum {
    /// Ascending eigenvalues (rad/s).
    pub values: DVector<f64>,
    /// Matching eigenvector columns.
    pub vectors: DMatrix<C64>,
    /// (E_max - E_min) / (dim - 1); zero for one-dimensional blocks.
    pub mean_splitting: f64,
}

pub fn exact_spectrum(h: &SectorHamiltonian) -> Result<ExactSpectrum> {
    let (values, vectors) = eigh(&h.matrix)?;
    let n = values.len();
    let mean_splitting = if n >= 2 {
        (values[n - 1] - values[0]) / (n - 1) as f64
    } else {
        0.0
    };
    Ok(ExactSpectrum {
        values,
        vectors,
        mean_splitting,
    })
}

/// Perturbative energies per m-tilde, relative to the sector constant C0.
///
/// Order 0 is the uniform ladder Omega_R m-tilde; order 1 adds the
/// detuning-proportional quadratic term; order 2 adds the (beta1/4)^2 and
/// beta2/2 bracket terms of the diagonalized operator.
pub fn perturbative_spectrum(sector: &IrrepSector, delta: f64, order: u8) -> Result<Vec<f64>> {
    if order > 2 {
        return Err(Error::Domain(format!("order must be 0..=2, got {order}")));
    }
    sector.require_valid()?;
    let (_, omega_r) = sector.dressing_angles(delta)?;
    let k = sector.k_eff;
    let (b1, b2) = (sector.beta1, sector.beta2);
    let rr = sector.r_tilde * (sector.r_tilde + 1.0);
    let k2s = k * k;
    let d2 = delta * delta;
    let energies = sector
        .projections()
        .iter()
        .map(|&mt| {
            let mut e = omega_r * mt;
            if order >= 1 {
                e -= (b1 / 4.0) * (k2s * delta / (omega_r * omega_r)) * (3.0 * mt * mt - rr);
            }
            if order >= 2 {
                let d4 = d2 * d2;
                let k4 = k2s * k2s;
                let om2 = omega_r * omega_r;
                let om4 = om2 * om2;
                e += (b1 / 4.0).powi(2)
                    * (k2s / omega_r)
                    * mt
                    * ((4.0 * d4 - 9.0 * d2 * k2s + 4.0 * k4) / om4 * mt * mt
                        - (2.0 * d4 - 5.0 * d2 * k2s + 2.0 * k4) / om4 * rr
                        + 0.5 * (d4 + d2 * k2s + k4) / om4);
                e -= (b2 / 2.0)
                    * (k2s / omega_r)
                    * mt
                    * ((4.0 * d2 - k2s) / om2 * mt * mt - (2.0 * d2 - k2s) / om2 * rr
                        + 0.5 * (d2 - k2s) / om2);
            }
            e
        })
        .collect();
    Ok(energies)
}

/// Exact and perturbative level data for one sector.
#[derive(Debug, Clone)]
pub struct SectorSpectrum {
    pub exact: ExactSpectrum,
    /// Perturbative energies per order, including C0, indexed by m-tilde.
    pub orders: [Vec<f64>; 3],
    pub c0: f64,
}

pub fn sector_spectrum(
    sector: &IrrepSector,
    omega_p: f64,
    delta: f64,
    n_atoms: f64,
) -> Result<SectorSpectrum> {
    let h = SectorHamiltonian::from_sector(sector, omega_p, delta, n_atoms)?;
    let exact = exact_spectrum(&h)?;
    let mut orders: [Vec<f64>; 3] = Default::default();
    for (ord, slot) in orders.iter_mut().enumerate() {
        *slot = perturbative_spectrum(sector, delta, ord as u8)?
            .into_iter()
            .map(|e| e + h.c0)
            .collect();
    }
    Ok(SectorSpectrum {
        exact,
        orders,
        c0: h.c0,
    })
}

/// Relative error max |E_exact - E^(n)| / mean splitting, ascending-sorted
/// pairing, for orders 0..=2.
pub fn spectrum_relative_errors(spectrum: &SectorSpectrum) -> [f64; 3] {
    let exact = &spectrum.exact.values;
    let de = spectrum.exact.mean_splitting;
    let mut out = [0.0; 3];
    for (ord, energies) in spectrum.orders.iter().enumerate() {
        let mut sorted = energies.clone();
        sorted.sort_by(f64::total_cmp);
        let worst = sorted
            .iter()
            .zip(exact.iter())
            .map(|(p, e)| (p - e).abs())
            .fold(0.0, f64::max);
        out[ord] = if de > 0.0 { worst / de } else { worst };
    }
    out
}

/// Dressing transforms: U0 always, U1/U2 per requested order.
#[derive(Debug, Clone)]
pub struct DressingTransform {
    pub u0: DMatrix<C64>,
    pub u1: DMatrix<C64>,
    pub u2: DMatrix<C64>,
    pub order: u8,
    pub psi0: f64,
}

impl DressingTransform {
    /// Combined transform U2 U1 U0 at the stored order.
    pub fn combined(&self) -> DMatrix<C64> {
        &self.u2 * &(&self.u1 * &self.u0)
    }
}

/// Build U0 = exp(i psi0 s_y) and, for order >= 1/2, the higher generators.
///
/// The exponentials are evaluated by spectral decomposition of the Hermitian
/// generators. The second-order generator keeps the printed structure except
/// for its (beta1/4)^2 sin^2(psi0) {sx s3 sy + sy s3 sx} term, which breaks
/// the residual cancellation it is supposed to provide (the commutator
/// [{s3,sy},{s3,sx}] is diagonal, so no such term can appear); dropping it
/// restores the cubic off-diagonal scaling.
pub fn dressing_transform(
    sector: &IrrepSector,
    delta: f64,
    order: u8,
) -> Result<DressingTransform> {
    if order > 2 {
        return Err(Error::Domain(format!("order must be 0..=2, got {order}")));
    }
    sector.require_valid()?;
    let (psi0, _) = sector.dressing_angles(delta)?;
    let spins = spin_matrices(sector.r_tilde)?;
    let dim = sector.dim;
    let identity = DMatrix::<C64>::identity(dim, dim);
    let u0 = exp_i_hermitian(&spins.sy, psi0)?;

    let (sin, cos) = psi0.sin_cos();
    let b1 = sector.beta1;
    let b2 = sector.beta2;
    let rr = sector.r_tilde * (sector.r_tilde + 1.0);
    let s3 = &spins.s3;
    let sx = &spins.sx;
    let sy = &spins.sy;

    let u1 = if order >= 1 {
        let g1 = (s3 * sy + sy * s3) * C64::new((2.0 * psi0).cos(), 0.0)
            - (sx * sy + sy * sx) * C64::new(0.25 * (2.0 * psi0).sin(), 0.0);
        exp_i_hermitian(&g1, -(b1 / 4.0) * sin)?
    } else {
        identity.clone()
    };

    let u2 = if order >= 2 {
        let sy3 = sy * sy * sy;
        let ga = (&sy3 * C64::new(1.0 / 3.0, 0.0) - (s3 * sy * s3) * C64::new(8.0, 0.0)
            + sy * C64::new(rr / 2.0 - 31.0 / 12.0, 0.0))
            * C64::new((b1 / 4.0 * sin).powi(2) * 0.5 * (4.0 * psi0).sin(), 0.0);
        let mixed = sy * s3 * sx + sx * s3 * sy;
        let gb = ((s3 * sy * s3) * C64::new(2.0 * (3.0 * psi0).cos(), 0.0)
            + sy * C64::new(0.5 * cos, 0.0)
            + &mixed * C64::new(0.5 * sin * cos * cos - 0.5 * (3.0 * psi0).sin(), 0.0)
            - (sy
                * (&(sy * sy) * C64::new(2.0 / 3.0, 0.0)
                    - &identity * C64::new(2.0 * rr - 10.0 / 3.0, 0.0)))
                * C64::new(cos * sin * sin, 0.0))
            * C64::new(-(b2 / 2.0) * sin, 0.0);
        exp_i_hermitian(&(ga + gb), 1.0)?
    } else {
        identity
    };

    Ok(DressingTransform {
        u0,
        u1,
        u2,
        order,
        psi0,
    })
}
