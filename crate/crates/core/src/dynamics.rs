//! Initial-state preparation, time evolution of photon-number moments,
//! Fano-Mandel statistics, zero-order closed forms and the characteristic
//! collapse/revival time scales.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::algebra::classify_sector;
use crate::linalg::{eigh, exp_i_hermitian, pairwise_sum};
use crate::spectral::{perturbative_spectrum, SectorHamiltonian};
use crate::{Error, Result};

/// Joint atom-field state stored per excitation sector.
///
/// Sector M holds the amplitudes over its m-tilde-ascending basis; the
/// initial-state constructor concentrates weight on index 0, the state with
/// all photons present and the atoms unexcited.
#[derive(Debug, Clone)]
pub struct QuantumState {
    /// (M, amplitudes) sorted by ascending M.
    pub sectors: Vec<(u64, DVector<C64>)>,
    /// Coherent-state mean photon number of the probe.
    pub n0: f64,
    /// Largest retained excitation number.
    pub m_cutoff: u64,
    /// Collective Dicke index, N/2 for the fully symmetric preparation.
    pub r: f64,
    /// Probability mass dropped by the cutoff, before renormalization.
    pub truncated_mass: f64,
    /// Set when the truncated mass exceeded 1e-3.
    pub truncation_warning: bool,
}

impl QuantumState {
    pub fn norm_sqr(&self) -> f64 {
        let terms: Vec<f64> = self
            .sectors
            .iter()
            .map(|(_, amps)| amps.iter().map(|a| a.norm_sqr()).sum::<f64>())
            .collect();
        pairwise_sum(&terms)
    }
}

/// Default sector cutoff: min(60, |k1/k2| - 2, n0 + 10 sqrt(n0)).
pub fn default_m_cutoff(n0: f64, k1: f64, k2: f64) -> u64 {
    let validity = if k2 == 0.0 {
        u64::MAX
    } else {
        ((k1 / k2).abs().floor() as i64 - 2).max(0) as u64
    };
    let poisson = (n0 + 10.0 * n0.sqrt()).ceil() as u64;
    60u64.min(validity).min(poisson)
}

/// Coherent probe x unexcited atoms, truncated at `m_cutoff` and renormalized.
///
/// Sector M receives Poisson weight e^{-n0} n0^M / M! on its all-photons,
/// atoms-down basis state. Truncated mass above 1e-3 sets the warning flag;
/// above 5e-2 the construction fails.
pub fn initial_state(n0: f64, n_atoms: f64, m_cutoff: u64) -> Result<QuantumState> {
    if !n0.is_finite() || n0 <= 0.0 {
        return Err(Error::Domain("n0 must be positive".into()));
    }
    if !n_atoms.is_finite() || n_atoms < 1.0 {
        return Err(Error::Domain("need at least one atom".into()));
    }
    let r = n_atoms / 2.0;
    let mut weights = Vec::with_capacity(m_cutoff as usize + 1);
    let mut w = (-n0).exp();
    weights.push(w);
    for m in 1..=m_cutoff {
        w *= n0 / m as f64;
        weights.push(w);
    }
    let kept = pairwise_sum(&weights);
    let lost = (1.0 - kept).max(0.0);
    if lost > 0.05 {
        return Err(Error::Truncation { lost, limit: 0.05 });
    }
    let sectors = weights
        .iter()
        .enumerate()
        .map(|(m, &wm)| {
            let mf = m as f64;
            let dim = (mf.min(2.0 * r) + 1.0).round() as usize;
            let mut amps = DVector::<C64>::zeros(dim);
            amps[0] = C64::new((wm / kept).sqrt(), 0.0);
            (m as u64, amps)
        })
        .collect();
    Ok(QuantumState {
        sectors,
        n0,
        m_cutoff,
        r,
        truncated_mass: lost,
        truncation_warning: lost > 1e-3,
    })
}

/// Sampled photon-number moments and Fano-Mandel parameter.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    /// Sample times (s).
    pub times: Vec<f64>,
    pub n_mean: Vec<f64>,
    pub n2_mean: Vec<f64>,
    /// Q per sample; `None` where the mean photon number is ~zero.
    pub q: Vec<Option<f64>>,
}

impl TimeSeries {
    fn from_moments(times: Vec<f64>, n_mean: Vec<f64>, n2_mean: Vec<f64>) -> Self {
        let q = n_mean
            .iter()
            .zip(&n2_mean)
            .map(|(&n, &n2)| mandel_q(n, n2))
            .collect();
        Self {
            times,
            n_mean,
            n2_mean,
            q,
        }
    }
}

/// Q = `(<n^2> - <n>^2)/<n> - 1`; `None` below the `<n>` = 1e-12 floor.
pub fn mandel_q(n_mean: f64, n2_mean: f64) -> Option<f64> {
    if n_mean <= 1e-12 {
        None
    } else {
        Some((n2_mean - n_mean * n_mean) / n_mean - 1.0)
    }
}

/// Which spectrum drives the sector phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionOrder {
    /// Dressed evolution with the perturbative energies at this order (0..=2);
    /// only U0 dresses the state.
    Perturbative(u8),
    /// Exact dense spectrum of each sector block.
    Exact,
}

struct SectorPropagator {
    weight_vector: DVector<C64>, // initial amplitudes rotated into the phase basis
    basis: nalgebra::DMatrix<C64>, // maps phase basis back to the photon basis
    energies: DVector<f64>,
    photon_numbers: Vec<f64>,
}

fn sector_propagator(
    m: u64,
    r: f64,
    amps: &DVector<C64>,
    k1: f64,
    k2: f64,
    delta: f64,
    order: EvolutionOrder,
) -> Result<SectorPropagator> {
    // Energies are taken relative to the sector constant C0; it is a global
    // phase within the block and cancels in every expectation value.
    let h = SectorHamiltonian::new(m, r, 0.0, delta, k1, k2, 2.0 * r)?;
    let photon_numbers = h.photon_numbers();
    let (energies, basis) = match order {
        EvolutionOrder::Exact => {
            let (vals, vecs) = eigh(&h.reduced())?;
            (vals, vecs)
        }
        EvolutionOrder::Perturbative(ord) => {
            let sector = classify_sector(m, r, k1, k2)?.with_detuning(delta)?;
            let energies = DVector::from_vec(perturbative_spectrum(&sector, delta, ord)?);
            let spins = crate::algebra::spin_matrices(sector.r_tilde)?;
            let u0 = exp_i_hermitian(&spins.sy, sector.psi0.unwrap())?;
            // state evolves as U0^-1 e^{-i E t} U0, so the phase basis is U0.
            (energies, u0.adjoint())
        }
    };
    let weight_vector = basis.adjoint() * amps;
    Ok(SectorPropagator {
        weight_vector,
        basis,
        energies,
        photon_numbers,
    })
}

/// Evolve the photon-number moments of `state` over `times`.
///
/// Cross-sector coherences never contribute (the photon number preserves M),
/// so the sectors are propagated independently and summed with fixed
/// ascending-M pairwise reductions.
pub fn evolve_expectations(
    state: &QuantumState,
    k1: f64,
    k2: f64,
    delta: f64,
    times: &[f64],
    order: EvolutionOrder,
) -> Result<TimeSeries> {
    let mut props = Vec::with_capacity(state.sectors.len());
    let mut failed: Vec<u64> = Vec::new();
    for (m, amps) in &state.sectors {
        if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-300 {
            continue;
        }
        match sector_propagator(*m, state.r, amps, k1, k2, delta, order) {
            Ok(p) => props.push(p),
            Err(_) if matches!(order, EvolutionOrder::Perturbative(_)) => failed.push(*m),
            Err(e) => return Err(e),
        }
    }
    if !failed.is_empty() {
        return Err(Error::MissingSectors(failed));
    }
    let mut n_mean = Vec::with_capacity(times.len());
    let mut n2_mean = Vec::with_capacity(times.len());
    let mut n_terms = vec![0.0f64; props.len()];
    let mut n2_terms = vec![0.0f64; props.len()];
    for &t in times {
        for (s, p) in props.iter().enumerate() {
            let phased = DVector::from_iterator(
                p.energies.len(),
                p.energies
                    .iter()
                    .zip(p.weight_vector.iter())
                    .map(|(&e, &w)| C64::from_polar(1.0, -e * t) * w),
            );
            let amps = &p.basis * phased;
            let mut n = 0.0;
            let mut n2 = 0.0;
            for (a, &nv) in amps.iter().zip(&p.photon_numbers) {
                let pr = a.norm_sqr();
                n += pr * nv;
                n2 += pr * nv * nv;
            }
            n_terms[s] = n;
            n2_terms[s] = n2;
        }
        n_mean.push(pairwise_sum(&n_terms));
        n2_mean.push(pairwise_sum(&n2_terms));
    }
    Ok(TimeSeries::from_moments(times.to_vec(), n_mean, n2_mean))
}

/// Zero-order closed forms for the coherent-probe, unexcited-atoms state.
///
/// Each sector precesses as a spin coherent state about the dressed axis:
/// with w(t) = cos^2 psi0 + sin^2 psi0 cos(Omega_R t),
///   `<n>   = (M - r~) + r~ w`,
///   `<n^2> = (M - r~)^2 + 2 (M - r~) r~ w + r~^2 w^2 + (r~/2)(1 - w^2)`.
/// M, psi0, r~ and Omega_R are sector quantities averaged with the state's
/// weights, never mean-field scalars. At Delta = 0 the `<n>` form reduces
/// termwise to the direct ladder sum with frequencies k_n.
pub fn zero_order_expectations(
    state: &QuantumState,
    k1: f64,
    k2: f64,
    delta: f64,
    times: &[f64],
) -> Result<TimeSeries> {
    // The closed forms assume zero initial dipole: all sector weight on the
    // lowest m-tilde state.
    for (m, amps) in &state.sectors {
        let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if total > 1e-300 && amps[0].norm_sqr() < total * (1.0 - 1e-12) {
            let _ = m;
            return Err(Error::UnsupportedState);
        }
    }
    let mut per_sector = Vec::new();
    for (m, amps) in &state.sectors {
        let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if *m == 0 || weight < 1e-300 {
            continue;
        }
        let sector = classify_sector(*m, state.r, k1, k2)?;
        let (psi0, omega_r) = sector.dressing_angles(delta)?;
        per_sector.push((
            weight,
            *m as f64 - sector.r_tilde,
            sector.r_tilde,
            psi0,
            omega_r,
        ));
    }
    let mut n_mean = Vec::with_capacity(times.len());
    let mut n2_mean = Vec::with_capacity(times.len());
    let mut n_terms = vec![0.0f64; per_sector.len()];
    let mut n2_terms = vec![0.0f64; per_sector.len()];
    for &t in times {
        for (s, &(weight, mr, rt, psi0, omega_r)) in per_sector.iter().enumerate() {
            let (sin, cos) = psi0.sin_cos();
            let w = cos * cos + sin * sin * (omega_r * t).cos();
            n_terms[s] = weight * (mr + rt * w);
            n2_terms[s] =
                weight * (mr * mr + 2.0 * mr * rt * w + rt * rt * w * w + 0.5 * rt * (1.0 - w * w));
        }
        n_mean.push(pairwise_sum(&n_terms));
        n2_mean.push(pairwise_sum(&n2_terms));
    }
    Ok(TimeSeries::from_moments(times.to_vec(), n_mean, n2_mean))
}

/// Ladder frequency `k_n = (k1 + k2 (n+1)/2) sqrt(2 (4r - n + 1))`, defined
/// for n <= 4r + 1.
pub fn ladder_frequency(n: f64, r: f64, k1: f64, k2: f64) -> f64 {
    (k1 + k2 * (n + 1.0) / 2.0) * (2.0 * (4.0 * r - n + 1.0)).sqrt()
}

/// Direct Poisson ladder sum for the mean photon number,
/// `sum_n P_n n (k_n^2 + 2 Delta^2 + k_n^2 cos(sqrt(k_n^2 + Delta^2) t)) / (2 (k_n^2 + Delta^2))`.
pub fn direct_poisson_sum(
    n0: f64,
    r: f64,
    k1: f64,
    k2: f64,
    delta: f64,
    times: &[f64],
) -> Vec<f64> {
    let n_max = ((n0 + 12.0 * n0.sqrt()).ceil() as usize)
        .max(4)
        .min((4.0 * r) as usize);
    let mut weights = Vec::with_capacity(n_max + 1);
    let mut w = (-n0).exp();
    weights.push(w);
    for n in 1..=n_max {
        w *= n0 / n as f64;
        weights.push(w);
    }
    let mut out = Vec::with_capacity(times.len());
    let mut terms = vec![0.0f64; n_max + 1];
    for &t in times {
        for (n, slot) in terms.iter_mut().enumerate() {
            if n == 0 || weights[n] < 1e-18 {
                *slot = 0.0;
                continue;
            }
            let kn = ladder_frequency(n as f64, r, k1, k2);
            let om2 = kn * kn + delta * delta;
            *slot = weights[n]
                * n as f64
                * (kn * kn + 2.0 * delta * delta + kn * kn * (om2.sqrt() * t).cos())
                / (2.0 * om2);
        }
        out.push(pairwise_sum(&terms));
    }
    out
}

/// Which collapse asymptotic applies (the smaller of the two estimates).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollapseBranch {
    SmallK2,
    LargeK2,
}

/// Characteristic time scales of the collapse/revival dynamics (seconds).
#[derive(Debug, Clone, Copy)]
pub struct Timescales {
    /// Rabi period 2 pi / sqrt(k_{n0}^2 + Delta^2).
    pub t_rabi: f64,
    /// Small-k2 collapse estimate, leading form.
    pub t_col_small_k2: f64,
    /// Small-k2 estimate with the k2 correction; `None` when the corrected
    /// radicand turns negative (expansion broken) or the flag is off.
    pub t_col_small_k2_corrected: Option<f64>,
    /// Large-k2 collapse estimate 1/(|k2| sqrt(sqrt(n0) r)); `None` if k2 = 0.
    pub t_col_large_k2: Option<f64>,
    /// Large-k2 estimate with the bracket correction, behind the same flag.
    pub t_col_large_k2_corrected: Option<f64>,
    /// Revival period from the n0, n0+1 ladder beat; `None` when degenerate.
    pub t_revival: Option<f64>,
}

impl Timescales {
    /// The applicable collapse estimate: the smaller of the two asymptotics.
    pub fn applicable_collapse(&self) -> (f64, CollapseBranch) {
        match self.t_col_large_k2 {
            Some(t2) if t2 < self.t_col_small_k2 => (t2, CollapseBranch::LargeK2),
            _ => (self.t_col_small_k2, CollapseBranch::SmallK2),
        }
    }
}

/// Evaluate T_R, tau_col^(1), tau_col^(2) and tau_rev.
///
/// `m0` is the initial atomic projection (defaults to -r, all atoms down);
/// `with_corrections` additionally evaluates the longer corrected forms.
pub fn timescales(
    n0: f64,
    r: f64,
    m0: Option<f64>,
    k1: f64,
    k2: f64,
    delta: f64,
    with_corrections: bool,
) -> Result<Timescales> {
    if !n0.is_finite() || n0 <= 0.0 || !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain("n0 and r must be positive".into()));
    }
    let m0 = m0.unwrap_or(-r);
    let kn0 = ladder_frequency(n0, r, k1, k2);
    let kn1 = ladder_frequency(n0 + 1.0, r, k1, k2);
    let om0 = kn0.hypot(delta);
    let om1 = kn1.hypot(delta);
    let t_rabi = std::f64::consts::TAU / om0;
    let t_revival = if om0 == om1 {
        None
    } else {
        Some((std::f64::consts::TAU / (om1 - om0)).abs())
    };

    let sqrt_n0 = n0.sqrt();
    let lead1 = (4.0 * (3.0 * r - m0 + 1.0) * k1 * k1 + delta * delta) / (k1.powi(4) * sqrt_n0);
    let t_col_small_k2 = lead1.sqrt();
    let t_col_small_k2_corrected = if with_corrections && k2 != 0.0 {
        let corr = 4.0
            * k2
            * (k1 * k1 * (8.0 * r - n0 + 1.0) * (4.0 * r + 1.0) - (2.0 * r - n0) * delta * delta)
            / (k1.powi(5) * sqrt_n0);
        let radicand = lead1 + corr;
        (radicand > 0.0).then(|| radicand.sqrt())
    } else {
        None
    };

    let t_col_large_k2 = (k2 != 0.0).then(|| 1.0 / (k2.abs() * (sqrt_n0 * r).sqrt()));
    let t_col_large_k2_corrected = if with_corrections && k2 != 0.0 {
        let d2k = delta * delta / (k2 * k2);
        let numer = 8.0 * k1.powi(4)
            + 6.0 * k1 * k1 * k2 * k2 * (2.0 * n0 + 1.0)
            + 4.0 * k1.powi(3) * k2 * (2.0 * n0 + 3.0)
            + k1 * k2.powi(3) * (d2k + 6.0 * n0 + 1.0)
            + k2.powi(4) * (n0 - d2k * (n0 - 0.5));
        let bracket = 1.0 + numer / (2.0 * r * k2 * (2.0 * k1 + k2).powi(3));
        (bracket > 0.0).then(|| t_col_large_k2.unwrap() * bracket.sqrt())
    } else {
        None
    };

    Ok(Timescales {
        t_rabi,
        t_col_small_k2,
        t_col_small_k2_corrected,
        t_col_large_k2,
        t_col_large_k2_corrected,
        t_revival,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    const OMEGA: f64 = TAU * 5.1e14;
    const DELTA: f64 = 2.4e-8 * OMEGA;
    const K1: f64 = 3.04e-7 * OMEGA;
    const K2: f64 = -3.01e-9 * OMEGA;

    #[test]
    fn initial_state_moments() {
        let state = initial_state(25.0, 1000.0, 60).unwrap();
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
        assert!(state.truncated_mass < 1e-6);
        assert!(!state.truncation_warning);
        let series =
            evolve_expectations(&state, K1, K2, DELTA, &[0.0], EvolutionOrder::Exact).unwrap();
        assert!((series.n_mean[0] - 25.0).abs() < 1e-6);
        assert!((series.n2_mean[0] - 650.0).abs() < 1e-4);
        assert!(series.q[0].unwrap().abs() < 1e-6);
    }

    #[test]
    fn initial_state_small_n0_concentrates_in_vacuum() {
        let state = initial_state(1e-8, 1000.0, 10).unwrap();
        let (m0, amps) = &state.sectors[0];
        assert_eq!(*m0, 0);
        assert!((amps[0].norm_sqr() - 1.0).abs() < 1e-7);
    }

    #[test]
    fn initial_state_truncation_paths() {
        // Harsh cutoff loses too much mass.
        assert!(matches!(
            initial_state(25.0, 1000.0, 10),
            Err(Error::Truncation { .. })
        ));
        // Moderate cutoff warns but succeeds.
        let state = initial_state(25.0, 1000.0, 35).unwrap();
        assert!(state.truncation_warning);
        assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn default_cutoff_rule() {
        assert_eq!(default_m_cutoff(25.0, K1, K2), 60);
        assert_eq!(default_m_cutoff(25.0, K1, 0.0), 60);
        assert_eq!(default_m_cutoff(1.0, K1, K2), 11);
        assert_eq!(default_m_cutoff(25.0, K1, K1 / 30.0), 28);
    }

    #[test]
    fn mandel_q_reference_statistics() {
        let n = 7.3;
        assert!(mandel_q(n, n * n + n).unwrap().abs() < 1e-12); // coherent
        assert!((mandel_q(n, n * n).unwrap() + 1.0).abs() < 1e-12); // Fock
        assert!((mandel_q(n, 2.0 * n * n + n).unwrap() - n).abs() < 1e-12); // thermal
        assert!(mandel_q(0.0, 0.0).is_none());
    }

    #[test]
    fn norm_and_energy_conserved_under_exact_evolution() {
        let state = initial_state(4.0, 20.0, 16).unwrap();
        let times: Vec<f64> = (0..40).map(|i| i as f64 * 2e-11).collect();
        // Norm: evolve and re-check moments stay bounded by the ladder.
        let series =
            evolve_expectations(&state, K1, K2, DELTA, &times, EvolutionOrder::Exact).unwrap();
        for (n, n2) in series.n_mean.iter().zip(&series.n2_mean) {
            assert!(*n >= -1e-12 && *n <= 16.0 + 1e-9);
            assert!(*n2 + 1e-9 >= n * n);
        }
        // Energy: <H_reduced> per sector is a weighted sum of fixed
        // eigenvalues, hence time independent; spot-check via two times.
        let e_of = |t: f64| -> f64 {
            let mut total = 0.0;
            for (m, amps) in &state.sectors {
                if amps.iter().map(|a| a.norm_sqr()).sum::<f64>() < 1e-300 {
                    continue;
                }
                let h =
                    SectorHamiltonian::new(*m, state.r, 0.0, DELTA, K1, K2, 2.0 * state.r).unwrap();
                let (vals, vecs) = eigh(&h.reduced()).unwrap();
                let w = vecs.adjoint() * amps;
                total += vals
                    .iter()
                    .zip(w.iter())
                    .map(|(&e, a)| {
                        let phase = C64::from_polar(1.0, -e * t);
                        (phase * a).norm_sqr() * e
                    })
                    .sum::<f64>();
            }
            total
        };
        let e0 = e_of(0.0);
        let e1 = e_of(1e-9);
        assert!((e0 - e1).abs() <= 1e-9 * e0.abs().max(1.0));
    }

    #[test]
    fn q_bounded_below_and_variance_nonnegative() {
        let state = initial_state(25.0, 1000.0, 60).unwrap();
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 5e-12).collect();
        let series = evolve_expectations(
            &state,
            K1,
            K2,
            DELTA,
            &times,
            EvolutionOrder::Perturbative(2),
        )
        .unwrap();
        for (i, q) in series.q.iter().enumerate() {
            if let Some(q) = q {
                assert!(*q >= -1.0 - 1e-9, "Q[{i}] = {q}");
            }
            let n = series.n_mean[i];
            assert!(series.n2_mean[i] >= n * n - 1e-9 * n * n - 1e-12);
        }
    }

    #[test]
    fn zero_order_closed_forms_match_order0_evolution() {
        let state = initial_state(25.0, 1000.0, 60).unwrap();
        let times: Vec<f64> = (0..128).map(|i| i as f64 * 1e-9 / 127.0).collect();
        let closed = zero_order_expectations(&state, K1, K2, DELTA, &times).unwrap();
        let evolved = evolve_expectations(
            &state,
            K1,
            K2,
            DELTA,
            &times,
            EvolutionOrder::Perturbative(0),
        )
        .unwrap();
        for i in 0..times.len() {
            assert!((closed.n_mean[i] - evolved.n_mean[i]).abs() < 1e-9 * 25.0);
            assert!((closed.n2_mean[i] - evolved.n2_mean[i]).abs() < 1e-8 * 650.0);
        }
    }

    #[test]
    fn zero_order_reduces_to_ladder_sum_at_resonance() {
        let state = initial_state(25.0, 1000.0, 75).unwrap();
        let times: Vec<f64> = (0..64).map(|i| i as f64 * 1e-9 / 63.0).collect();
        let closed = zero_order_expectations(&state, K1, K2, 0.0, &times).unwrap();
        let ladder = direct_poisson_sum(25.0, state.r, K1, K2, 0.0, &times);
        for (i, (c, l)) in closed.n_mean.iter().zip(&ladder).enumerate() {
            assert!((c - l).abs() < 2e-6 * 25.0, "t index {i}: {c} vs {l}");
        }
    }

    #[test]
    fn zero_order_rejects_excited_states() {
        let mut state = initial_state(4.0, 1000.0, 12).unwrap();
        let dim = state.sectors[3].1.len();
        state.sectors[3].1 = DVector::from_element(dim, C64::new(0.3, 0.0));
        assert!(matches!(
            zero_order_expectations(&state, K1, K2, DELTA, &[0.0]),
            Err(Error::UnsupportedState)
        ));
    }

    #[test]
    fn rabi_chain_example() {
        // Fig-5 configuration: gamma ~ 0.871, k ~ 54.8 k1, T_R ~ 0.118 ns.
        let sector = classify_sector(25, 500.0, K1, K2).unwrap();
        assert!((sector.gamma_param - 0.871).abs() < 1e-3);
        assert!((sector.k_eff / K1 - 54.77).abs() < 0.05);
        let (_, omega_r) = sector.dressing_angles(DELTA).unwrap();
        let t_r = TAU / omega_r;
        assert!((t_r - 0.12e-9).abs() / 0.12e-9 < 0.10);
        // Consistent with the ladder frequency route.
        let ts = timescales(25.0, 500.0, None, K1, K2, DELTA, false).unwrap();
        assert!((ts.t_rabi - t_r).abs() < 1e-4 * t_r);
    }

    #[test]
    fn order_consistency_at_short_times() {
        // Order 2 and order 0 track each other early on; the gap grows with
        // the accumulated phase of the nonlinear level-spacing corrections
        // (2.3% of n0 after one Rabi period, 7.2% after three).
        let state = initial_state(25.0, 1000.0, 60).unwrap();
        let t_rabi = TAU / ladder_frequency(25.0, 500.0, K1, K2).hypot(DELTA);
        let times: Vec<f64> = (0..600).map(|i| 3.0 * t_rabi * i as f64 / 599.0).collect();
        let o0 = evolve_expectations(
            &state,
            K1,
            K2,
            DELTA,
            &times,
            EvolutionOrder::Perturbative(0),
        )
        .unwrap();
        let o2 = evolve_expectations(
            &state,
            K1,
            K2,
            DELTA,
            &times,
            EvolutionOrder::Perturbative(2),
        )
        .unwrap();
        let max_dev = |cap: f64| -> f64 {
            times
                .iter()
                .zip(o0.n_mean.iter().zip(&o2.n_mean))
                .filter(|(t, _)| **t <= cap)
                .map(|(_, (a, b))| (a - b).abs() / 25.0)
                .fold(0.0, f64::max)
        };
        assert!(max_dev(t_rabi) < 0.025, "1 T_R: {}", max_dev(t_rabi));
        assert!(
            max_dev(3.0 * t_rabi) < 0.08,
            "3 T_R: {}",
            max_dev(3.0 * t_rabi)
        );
    }

    #[test]
    fn timescales_closed_form_and_edge_cases() {
        // m0 = -r, k2 = 0: tau_col^(1) = sqrt((4(3r - m0 + 1)k1^2 + Delta^2)/(k1^4 sqrt(n0))).
        let (n0, r) = (25.0, 500.0);
        let ts = timescales(n0, r, Some(-r), K1, 0.0, DELTA, true).unwrap();
        let expect = ((4.0 * (3.0 * r + r + 1.0) * K1 * K1 + DELTA * DELTA)
            / (K1.powi(4) * n0.sqrt()))
        .sqrt();
        assert!((ts.t_col_small_k2 - expect).abs() < 1e-12 * expect);
        assert!(ts.t_col_large_k2.is_none());
        assert!(ts.t_col_small_k2_corrected.is_none());
        // k2 != 0 with corrections: row-a radicand goes negative, marked inapplicable.
        let ts = timescales(n0, r, None, K1, K2, DELTA, true).unwrap();
        assert!(ts.t_col_small_k2_corrected.is_none());
        assert!(ts.t_col_large_k2_corrected.is_some());
        let (applicable, branch) = ts.applicable_collapse();
        assert_eq!(branch, CollapseBranch::LargeK2);
        assert!(applicable < ts.t_col_small_k2);
        // Degenerate revival marker.
        let flat = timescales(1.0, 1e12, None, K1, 0.0, 0.0, false).unwrap();
        let rel = flat.t_revival.map(|t| flat.t_rabi / t).unwrap_or(0.0);
        assert!(rel < 1e-5);
    }
}
