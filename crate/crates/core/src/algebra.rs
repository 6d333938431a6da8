//! Fifth-order polynomial algebra of excitations: sector classification,
//! structure polynomial, su(2) spin matrices and the zone realizations of the
//! deformed generators.
//!
//! All sector matrices are indexed by the effective-spin projection m-tilde
//! ascending from -r_tilde; raising operators therefore populate the
//! subdiagonal (row m+1, column m).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::{Error, Result};

/// Which side of the M = 2r line an irrep sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    /// M > 2r, strong-field side; effective spin r.
    Remote,
    /// M < 2r, weak-field side; effective spin M/2.
    Nearby,
}

/// One excitation block of the effective model, with its expansion data.
#[derive(Debug, Clone, Copy)]
pub struct IrrepSector {
    /// Total excitation number M.
    pub m: u64,
    /// Collective Dicke index r (half-integer).
    pub r: f64,
    pub zone: Zone,
    /// Effective spin of the isomorphic su(2) block.
    pub r_tilde: f64,
    /// Block dimension 2 r_tilde + 1.
    pub dim: usize,
    /// Smallness parameter of the square-root expansion.
    pub alpha: f64,
    /// gamma of the expansion (order-unity under the validity bound).
    pub gamma_param: f64,
    /// Effective coupling k = 2 k1 gamma / sqrt(alpha) (rad/s).
    pub k_eff: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Couplings the sector was classified with (rad/s).
    pub k1: f64,
    pub k2: f64,
    /// Whether M + 1 < |k1/k2| holds (always true for k2 = 0).
    pub valid: bool,
    /// Mixing angle, set once a detuning is attached.
    pub psi0: Option<f64>,
    /// Nonlinear quantum Rabi frequency, set with the detuning (rad/s).
    pub omega_r: Option<f64>,
}

fn require_half_integer(x: f64, what: &str) -> Result<()> {
    let doubled = 2.0 * x;
    if !x.is_finite() || x < 0.0 || (doubled - doubled.round()).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "{what} must be a nonnegative half-integer, got {x}"
        )));
    }
    Ok(())
}

/// Classify the (M, r) irrep and fill its expansion parameters.
///
/// Boundary irreps M = 2r are rejected. Sectors violating the validity bound
/// M + 1 < |k1/k2| are returned with `valid = false`.
pub fn classify_sector(m: u64, r: f64, k1: f64, k2: f64) -> Result<IrrepSector> {
    require_half_integer(r, "Dicke index r")?;
    if !k1.is_finite() || k1 <= 0.0 {
        return Err(Error::Domain("k1 must be positive".into()));
    }
    let mf = m as f64;
    let two_r = 2.0 * r;
    let ratio = k2 / k1;
    let (zone, r_tilde, alpha, gamma_param) = if mf > two_r {
        let alpha = 1.0 / (mf - r + 0.5);
        (Zone::Remote, r, alpha, 1.0 + ratio * (mf - r + 0.5))
    } else if mf < two_r {
        let alpha = 2.0 / (4.0 * r - mf + 1.0);
        (
            Zone::Nearby,
            mf / 2.0,
            alpha,
            1.0 + ratio * (mf + 1.0) / 2.0,
        )
    } else {
        return Err(Error::BoundaryZone { m, r });
    };
    let k_eff = 2.0 * k1 * gamma_param / alpha.sqrt();
    let beta1 = alpha * (1.0 + ratio * 2.0 / (gamma_param * alpha));
    let beta2 = alpha * alpha * (0.125 - ratio / (2.0 * gamma_param * alpha));
    let valid = k2 == 0.0 || mf + 1.0 < (k1 / k2).abs();
    Ok(IrrepSector {
        m,
        r,
        zone,
        r_tilde,
        dim: (2.0 * r_tilde).round() as usize + 1,
        alpha,
        gamma_param,
        k_eff,
        beta1,
        beta2,
        k1,
        k2,
        valid,
        psi0: None,
        omega_r: None,
    })
}

impl IrrepSector {
    /// Mixing angle and Rabi frequency for a probe detuning:
    /// psi0 = atan2(k_eff, Delta), Omega_R = sqrt(Delta^2 + k_eff^2).
    pub fn dressing_angles(&self, delta: f64) -> Result<(f64, f64)> {
        let omega_r = delta.hypot(self.k_eff);
        if omega_r == 0.0 {
            return Err(Error::DegenerateDressing);
        }
        Ok((f64::atan2(self.k_eff, delta), omega_r))
    }

    /// Copy of the sector with psi0 and Omega_R filled for `delta`.
    pub fn with_detuning(mut self, delta: f64) -> Result<Self> {
        let (psi0, omega_r) = self.dressing_angles(delta)?;
        self.psi0 = Some(psi0);
        self.omega_r = Some(omega_r);
        Ok(self)
    }

    pub fn require_valid(&self) -> Result<()> {
        if self.valid {
            Ok(())
        } else {
            Err(Error::InvalidSector {
                m: self.m,
                r: self.r,
                bound: (self.k1 / self.k2).abs(),
            })
        }
    }

    /// Projection values m-tilde = -r_tilde .. r_tilde in basis order.
    pub fn projections(&self) -> Vec<f64> {
        (0..self.dim).map(|i| -self.r_tilde + i as f64).collect()
    }
}

/// Structure polynomial p5 of the deformed algebra, in factored form.
#[derive(Debug, Clone, Copy)]
pub struct StructurePolynomial {
    /// Leading coefficient -(k2/k1)^2.
    pub c0: f64,
    /// Double root -(k1/k2 + (M-r)/2); `None` when k2 = 0 (cubic limit).
    pub q0: Option<f64>,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    m: f64,
    r: f64,
    ratio: f64,
}

impl StructurePolynomial {
    pub fn new(m: u64, r: f64, k1: f64, k2: f64) -> Result<Self> {
        require_half_integer(r, "Dicke index r")?;
        if !k1.is_finite() || k1 <= 0.0 {
            return Err(Error::Domain("k1 must be positive".into()));
        }
        let mf = m as f64;
        let half = (mf - r) / 2.0;
        let ratio = k2 / k1;
        Ok(Self {
            c0: -ratio * ratio,
            q0: if k2 == 0.0 {
                None
            } else {
                Some(-(k1 / k2 + half))
            },
            q1: -half,
            q2: half - r,
            q3: half + r + 1.0,
            m: mf,
            r,
            ratio,
        })
    }

    /// Evaluate p5(x). The deformation factor is kept unfactored so k2 = 0
    /// degenerates smoothly to the plain Tavis-Cummings cubic.
    pub fn eval(&self, x: f64) -> f64 {
        let half = (self.m - self.r) / 2.0;
        let deform = 1.0 + self.ratio * (x + half);
        -(x - self.q1) * deform * deform * (x - self.q2) * (x - self.q3)
    }

    /// Interval where the physical irrep lives: [q2, q3] in remote zones,
    /// [q1, q3] in nearby ones.
    pub fn physical_interval(&self, zone: Zone) -> (f64, f64) {
        match zone {
            Zone::Remote => (self.q2, self.q3),
            Zone::Nearby => (self.q1, self.q3),
        }
    }
}

/// Dense spin matrices for a spin-r_tilde representation, m ascending.
#[derive(Debug, Clone)]
pub struct SpinMatrices {
    pub r_tilde: f64,
    pub s3: DMatrix<C64>,
    pub s_plus: DMatrix<C64>,
    pub s_minus: DMatrix<C64>,
    pub sx: DMatrix<C64>,
    pub sy: DMatrix<C64>,
}

/// Ladder construction: `<m+1| s+ |m> = sqrt(r(r+1) - m(m+1))`.
pub fn spin_matrices(r_tilde: f64) -> Result<SpinMatrices> {
    require_half_integer(r_tilde, "spin r_tilde")?;
    let dim = (2.0 * r_tilde).round() as usize + 1;
    let mut s3 = DMatrix::<C64>::zeros(dim, dim);
    let mut s_plus = DMatrix::<C64>::zeros(dim, dim);
    let casimir = r_tilde * (r_tilde + 1.0);
    for i in 0..dim {
        let m = -r_tilde + i as f64;
        s3[(i, i)] = C64::new(m, 0.0);
        if i + 1 < dim {
            s_plus[(i + 1, i)] = C64::new((casimir - m * (m + 1.0)).sqrt(), 0.0);
        }
    }
    let s_minus = s_plus.adjoint();
    let sx = (&s_plus + &s_minus) * C64::new(0.5, 0.0);
    let sy = (&s_plus - &s_minus) * (C64::new(0.0, -0.5));
    Ok(SpinMatrices {
        r_tilde,
        s3,
        s_plus,
        s_minus,
        sx,
        sy,
    })
}

/// Deformed-algebra generators realized on the sector's su(2) block.
#[derive(Debug, Clone)]
pub struct PaeGenerators {
    pub m0: DMatrix<C64>,
    pub m_plus: DMatrix<C64>,
    pub m_minus: DMatrix<C64>,
}

/// Build M0, M+, M- from the zone realization. The square root acts on a
/// diagonal function of s3, so it is taken entrywise on the spectrum.
pub fn pae_generators(sector: &IrrepSector) -> Result<PaeGenerators> {
    sector.require_valid()?;
    let spins = spin_matrices(sector.r_tilde)?;
    let mf = sector.m as f64;
    let r = sector.r;
    let ratio = sector.k2 / sector.k1;
    let mut m0 = DMatrix::<C64>::zeros(sector.dim, sector.dim);
    let mut factor = DMatrix::<C64>::zeros(sector.dim, sector.dim);
    for i in 0..sector.dim {
        let mt = -sector.r_tilde + i as f64;
        let (offset, root_arg, deform_arg) = match sector.zone {
            Zone::Remote => ((mf - r) / 2.0, mf - r + 1.0 - mt, mf - r + 1.0 - mt),
            Zone::Nearby => (
                r / 2.0,
                (4.0 * r - mf) / 2.0 + 1.0 - mt,
                mf / 2.0 + 1.0 - mt,
            ),
        };
        // Nonnegative in both zones; a negative argument means the zone
        // bookkeeping broke.
        assert!(
            root_arg >= 0.0,
            "negative square-root argument {root_arg} in {:?} zone (M={}, r={})",
            sector.zone,
            sector.m,
            sector.r
        );
        m0[(i, i)] = C64::new(offset - mt, 0.0);
        factor[(i, i)] = C64::new(root_arg.sqrt() * (1.0 + ratio * deform_arg), 0.0);
    }
    let m_plus = &spins.s_minus * &factor;
    let m_minus = m_plus.adjoint();
    Ok(PaeGenerators {
        m0,
        m_plus,
        m_minus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_norm;
    use proptest::prelude::*;

    const K1: f64 = 1.0;
    const K2: f64 = -0.009901; // |k1/k2| ~ 101, the working ratio

    #[test]
    fn classification_examples() {
        let s = classify_sector(25, 500.0, K1, K2).unwrap();
        assert_eq!(s.zone, Zone::Nearby);
        assert_eq!(s.r_tilde, 12.5);
        assert_eq!(s.dim, 26);
        assert!((s.alpha - 2.0 / 1976.0).abs() < 1e-15);

        let s = classify_sector(1200, 500.0, K1, K2).unwrap();
        assert_eq!(s.zone, Zone::Remote);
        assert_eq!(s.r_tilde, 500.0);
        assert_eq!(s.dim, 1001);
        assert!((s.alpha - 1.0 / 700.5).abs() < 1e-15);
        assert!(!s.valid); // 1201 > 101

        // |k1/k2| = 101 marks M = 100 invalid.
        let s = classify_sector(100, 500.0, 1.0, -1.0 / 101.0).unwrap();
        assert!(!s.valid);
        assert!(s.require_valid().is_err());
        let s = classify_sector(99, 500.0, 1.0, -1.0 / 101.0).unwrap();
        assert!(s.valid);

        assert!(matches!(
            classify_sector(1000, 500.0, K1, K2),
            Err(Error::BoundaryZone { .. })
        ));
    }

    #[test]
    fn gamma_stays_above_half_under_validity() {
        for m in 0..=99 {
            let s = classify_sector(m, 500.0, 1.0, -1.0 / 101.0).unwrap();
            if s.valid {
                assert!(s.gamma_param > 0.5, "gamma {} at M={m}", s.gamma_param);
            }
        }
    }

    #[test]
    fn spin_matrices_small_cases() {
        // r = 1/2: half the Pauli matrices.
        let s = spin_matrices(0.5).unwrap();
        assert_eq!(s.s3[(0, 0)], C64::new(-0.5, 0.0));
        assert_eq!(s.s3[(1, 1)], C64::new(0.5, 0.0));
        assert_eq!(s.s_plus[(1, 0)], C64::new(1.0, 0.0));
        assert!((s.sx[(0, 1)] - C64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((s.sy[(1, 0)] - C64::new(0.0, -0.5)).norm() < 1e-15);

        // r = 1: diag(-1, 0, 1) and ladder elements sqrt(2).
        let s = spin_matrices(1.0).unwrap();
        for (i, want) in [-1.0, 0.0, 1.0].iter().enumerate() {
            assert_eq!(s.s3[(i, i)].re, *want);
        }
        assert!((s.s_plus[(1, 0)].re - 2.0f64.sqrt()).abs() < 1e-15);
        assert!((s.s_plus[(2, 1)].re - 2.0f64.sqrt()).abs() < 1e-15);

        assert!(spin_matrices(0.7).is_err());
        assert!(spin_matrices(-1.0).is_err());
    }

    #[test]
    fn casimir_and_commutators_up_to_r20() {
        for twice_r in 1..=40u32 {
            let rt = twice_r as f64 / 2.0;
            let s = spin_matrices(rt).unwrap();
            let dim = s.s3.nrows();
            let casimir = &s.s3 * &s.s3
                + (&s.s_plus * &s.s_minus + &s.s_minus * &s.s_plus) * C64::new(0.5, 0.0);
            let expect = DMatrix::<C64>::identity(dim, dim) * C64::new(rt * (rt + 1.0), 0.0);
            assert!(frobenius_norm(&(&casimir - &expect)) < 1e-12 * rt * (rt + 1.0).max(1.0));
            let comm = &s.s3 * &s.s_plus - &s.s_plus * &s.s3 - &s.s_plus;
            assert!(frobenius_norm(&comm) < 1e-12 * rt.max(1.0));
        }
    }

    #[test]
    fn structure_polynomial_example() {
        // M = 4, r = 10 (nearby): q1 = 3, q2 = -13, q3 = 8.
        let p = StructurePolynomial::new(4, 10.0, K1, K2).unwrap();
        assert_eq!((p.q1, p.q2, p.q3), (3.0, -13.0, 8.0));
        let sector = classify_sector(4, 10.0, K1, K2).unwrap();
        let gens = pae_generators(&sector).unwrap();
        let product = &gens.m_plus * &gens.m_minus;
        let scale = product.iter().map(|z| z.norm()).fold(1.0, f64::max);
        for i in 0..sector.dim {
            let m0 = gens.m0[(i, i)].re;
            assert!((product[(i, i)].re - p.eval(m0)).abs() < 1e-10 * scale);
        }
        // p5 >= 0 on integer-spaced points of the physical interval.
        let (lo, hi) = p.physical_interval(sector.zone);
        let mut x = lo;
        while x <= hi + 1e-9 {
            assert!(p.eval(x) >= -1e-9, "p5({x}) < 0");
            x += 1.0;
        }
    }

    #[test]
    fn tavis_cummings_limit() {
        // k2 = 0, nearby sector: M+M- spectrum matches n (r(r+1) - m(m+1)).
        let sector = classify_sector(6, 10.0, K1, 0.0).unwrap();
        let gens = pae_generators(&sector).unwrap();
        let product = &gens.m_plus * &gens.m_minus;
        let r = sector.r;
        for i in 0..sector.dim {
            let mt = -sector.r_tilde + i as f64;
            let n = sector.m as f64 / 2.0 - mt; // photon number in this basis state
            let m_spin = sector.m as f64 - n - r;
            let expect = n * (r * (r + 1.0) - m_spin * (m_spin + 1.0));
            assert!((product[(i, i)].re - expect).abs() < 1e-10 * expect.max(1.0));
        }
    }

    #[test]
    fn commutator_residuals() {
        for (m, r) in [(4u64, 10.0), (25, 500.0), (60, 500.0), (31, 10.0), (7, 2.0)] {
            let sector = classify_sector(m, r, K1, K2).unwrap();
            let gens = pae_generators(&sector).unwrap();
            let comm = &gens.m0 * &gens.m_plus - &gens.m_plus * &gens.m0 - &gens.m_plus;
            let scale = frobenius_norm(&gens.m_plus).max(1.0);
            assert!(frobenius_norm(&comm) < 1e-12 * scale, "M={m} r={r}");
        }
    }

    /// Defining realization on the joint photon x spin basis, for comparison.
    fn joint_generators(m: u64, r: f64, k1: f64, k2: f64) -> (DMatrix<C64>, DMatrix<C64>) {
        let mf = m as f64;
        let n_min = (mf - 2.0 * r).max(0.0) as i64;
        let ns: Vec<i64> = (n_min..=m as i64).rev().collect(); // m-tilde ascending
        let dim = ns.len();
        let mut m0 = DMatrix::<C64>::zeros(dim, dim);
        let mut m_plus = DMatrix::<C64>::zeros(dim, dim);
        for (i, &n) in ns.iter().enumerate() {
            let nf = n as f64;
            let ms = mf - nf - r;
            m0[(i, i)] = C64::new((nf - ms) / 2.0, 0.0);
            // M+ = (1 + (k2/k1) a†a) a† S-: raises n, lowers spin, so the
            // target n+1 sits one index earlier.
            if i > 0 {
                let amp = (1.0 + (k2 / k1) * (nf + 1.0))
                    * (nf + 1.0).sqrt()
                    * (r * (r + 1.0) - ms * (ms - 1.0)).sqrt();
                m_plus[(i - 1, i)] = C64::new(amp, 0.0);
            }
        }
        (m0, m_plus)
    }

    #[test]
    fn realizations_match_defining_form() {
        for (m, r) in [(4u64, 10.0), (25, 500.0), (7, 2.0), (12, 5.0), (60, 100.0)] {
            let sector = classify_sector(m, r, K1, K2).unwrap();
            let gens = pae_generators(&sector).unwrap();
            let (m0_joint, mp_joint) = joint_generators(m, r, K1, K2);
            assert_eq!(gens.m0.nrows(), m0_joint.nrows());
            assert!(frobenius_norm(&(&gens.m0 - &m0_joint)) < 1e-10);
            let scale = frobenius_norm(&mp_joint).max(1.0);
            assert!(
                frobenius_norm(&(&gens.m_plus - &mp_joint)) < 1e-9 * scale,
                "M={m} r={r}"
            );
        }
    }

    proptest! {
        #[test]
        fn root_ordering_and_q0(m in 0u64..2000, r_idx in 0usize..3, half in proptest::bool::ANY) {
            let r = [10.0, 100.0, 500.0][r_idx] + if half { 0.5 } else { 0.0 };
            let p = StructurePolynomial::new(m, r, K1, K2).unwrap();
            let mf = m as f64;
            if mf >= 2.0 * r {
                prop_assert!(p.q1 <= p.q2 && p.q2 <= p.q3);
                if mf > 2.0 * r {
                    prop_assert!(p.q1 < p.q2);
                }
            } else {
                prop_assert!(p.q2 < p.q1 && p.q1 < p.q3);
            }
            // q0 above q3 whenever the validity bound holds (k2 < 0 here).
            if mf + 1.0 < (K1 / K2).abs() {
                prop_assert!(p.q0.unwrap() > p.q3);
            }
        }

        #[test]
        fn classification_is_total_off_the_boundary(m in 0u64..5000, twice_r in 1u64..=2000) {
            let r = twice_r as f64 / 2.0;
            if m as f64 == 2.0 * r {
                let is_boundary_err =
                    matches!(classify_sector(m, r, K1, K2), Err(crate::Error::BoundaryZone { .. }));
                prop_assert!(is_boundary_err);
            } else {
                let s = classify_sector(m, r, K1, K2).unwrap();
                prop_assert!(s.alpha > 0.0);
                prop_assert_eq!(s.dim, (2.0 * s.r_tilde) as usize + 1);
                prop_assert_eq!(
                    s.zone,
                    if (m as f64) > 2.0 * r { Zone::Remote } else { Zone::Nearby }
                );
            }
        }

        #[test]
        fn structure_identity_random_sectors(m in 0u64..=60, r_idx in 0usize..3) {
            let r = [10.0, 100.0, 500.0][r_idx];
            if m as f64 == 2.0 * r {
                return Ok(());
            }
            let sector = classify_sector(m, r, K1, K2).unwrap();
            if !sector.valid {
                return Ok(());
            }
            let gens = pae_generators(&sector).unwrap();
            let p = StructurePolynomial::new(m, r, K1, K2).unwrap();
            let product = &gens.m_plus * &gens.m_minus;
            let scale = product.iter().map(|z| z.norm()).fold(1.0, f64::max);
            for i in 0..sector.dim {
                prop_assert!((product[(i, i)].re - p.eval(gens.m0[(i, i)].re)).abs() <= 1e-10 * scale);
            }
        }
    }
}
