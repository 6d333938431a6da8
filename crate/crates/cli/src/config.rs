//! Flat `key = value` run configuration with section prefixes `medium.`,
//! `drive.`, `quantum.` and `output.`.
//!
//! Parsing is total: unknown keys, bad numbers and out-of-range values are
//! reported with their line number. Frequency-like keys carry their unit in
//! the suffix (`_over_2pi_hz` or `_over_omega`); everything defaults to the
//! sodium preset so an empty document is a valid configuration.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use becprobe::{CouplingField, DriveParams, MediumParams, PhysicalConstants, ProbeField};

const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    // medium
    pub gamma31_over_2pi_hz: f64,
    pub gamma32_over_2pi_hz: f64,
    pub gamma12_over_2pi_hz: f64,
    pub mu31_coulomb_meter: f64,
    pub mu32_coulomb_meter: f64,
    pub omega_over_2pi_hz: f64,
    pub omega12_over_2pi_hz: f64,
    pub density_per_m3: f64,
    pub n_atoms: f64,
    pub volume_m3: Option<f64>,
    // drive
    pub g1_over_2pi_hz: Option<f64>,
    pub coupling_intensity_w_per_m2: f64,
    pub probe_amplitude_v_per_m: Option<f64>,
    pub probe_intensity_w_per_m2: f64,
    pub delta_over_2pi_hz: f64,
    pub delta_c_over_2pi_hz: f64,
    pub delta_min_over_2pi_hz: f64,
    pub delta_max_over_2pi_hz: f64,
    pub delta_points: usize,
    // quantum
    pub k1_over_omega: f64,
    pub k2_over_omega: f64,
    pub derive_couplings: bool,
    pub qdelta_over_omega: f64,
    pub n0: f64,
    pub m_cutoff: u64,
    pub order: u8,
    pub t_max_ns: f64,
    pub samples: usize,
    pub m_min: u64,
    pub m_max: u64,
    // output
    pub out_dir: String,
    pub prefix: String,
    /// Keys the user set explicitly (everything else is a default).
    pub user_keys: BTreeSet<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            gamma31_over_2pi_hz: 5e6,
            gamma32_over_2pi_hz: 5e6,
            gamma12_over_2pi_hz: 38e3,
            mu31_coulomb_meter: 22e-30,
            mu32_coulomb_meter: 22e-30,
            omega_over_2pi_hz: 5.1e14,
            omega12_over_2pi_hz: 1.772e9,
            density_per_m3: 3.3e18,
            n_atoms: 1000.0,
            volume_m3: None,
            g1_over_2pi_hz: None,
            coupling_intensity_w_per_m2: 550.0,
            probe_amplitude_v_per_m: None,
            probe_intensity_w_per_m2: 0.80,
            delta_over_2pi_hz: 0.0,
            delta_c_over_2pi_hz: 0.0,
            delta_min_over_2pi_hz: -2e6,
            delta_max_over_2pi_hz: 2e6,
            delta_points: 401,
            k1_over_omega: 3.04e-7,
            k2_over_omega: -3.01e-9,
            derive_couplings: false,
            qdelta_over_omega: 2.4e-8,
            n0: 25.0,
            m_cutoff: 60,
            order: 2,
            t_max_ns: 1.0,
            samples: 4096,
            m_min: 2,
            m_max: 60,
            out_dir: String::new(),
            prefix: String::new(),
            user_keys: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ParseError> {
    value.parse::<f64>().map_err(|_| ParseError {
        line,
        message: format!("{key}: expected a number, got `{value}`"),
    })
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ParseError> {
    value.parse::<usize>().map_err(|_| ParseError {
        line,
        message: format!("{key}: expected a nonnegative integer, got `{value}`"),
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ParseError> {
    value.parse::<bool>().map_err(|_| ParseError {
        line,
        message: format!("{key}: expected true or false, got `{value}`"),
    })
}

fn require_positive(line: usize, key: &str, v: f64) -> Result<f64, ParseError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ParseError {
            line,
            message: format!("{key}: must be positive, got {v}"),
        })
    }
}

fn require_nonnegative(line: usize, key: &str, v: f64) -> Result<f64, ParseError> {
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(ParseError {
            line,
            message: format!("{key}: must be nonnegative, got {v}"),
        })
    }
}

impl RunConfig {
    /// Apply one `key = value` assignment. `line` is used for error reporting.
    pub fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ParseError> {
        let f = |k: &str| parse_f64(line, k, value);
        match key {
            "medium.gamma31_over_2pi_hz" => {
                self.gamma31_over_2pi_hz = require_positive(line, key, f(key)?)?
            }
            "medium.gamma32_over_2pi_hz" => {
                self.gamma32_over_2pi_hz = require_positive(line, key, f(key)?)?
            }
            "medium.gamma12_over_2pi_hz" => {
                self.gamma12_over_2pi_hz = require_positive(line, key, f(key)?)?
            }
            "medium.mu31_coulomb_meter" => {
                self.mu31_coulomb_meter = require_positive(line, key, f(key)?)?
            }
            "medium.mu32_coulomb_meter" => {
                self.mu32_coulomb_meter = require_positive(line, key, f(key)?)?
            }
            "medium.omega_over_2pi_hz" => {
                self.omega_over_2pi_hz = require_positive(line, key, f(key)?)?
            }
            "medium.omega12_over_2pi_hz" => {
                self.omega12_over_2pi_hz = require_positive(line, key, f(key)?)?
            }
            "medium.density_per_m3" => self.density_per_m3 = require_positive(line, key, f(key)?)?,
            "medium.n_atoms" => self.n_atoms = require_positive(line, key, f(key)?)?,
            "medium.volume_m3" => self.volume_m3 = Some(require_positive(line, key, f(key)?)?),
            "drive.g1_over_2pi_hz" => {
                self.g1_over_2pi_hz = Some(require_nonnegative(line, key, f(key)?)?)
            }
            "drive.coupling_intensity_w_per_m2" => {
                self.coupling_intensity_w_per_m2 = require_nonnegative(line, key, f(key)?)?
            }
            "drive.probe_amplitude_v_per_m" => {
                self.probe_amplitude_v_per_m = Some(require_nonnegative(line, key, f(key)?)?)
            }
            "drive.probe_intensity_w_per_m2" => {
                self.probe_intensity_w_per_m2 = require_nonnegative(line, key, f(key)?)?
            }
            "drive.delta_over_2pi_hz" => self.delta_over_2pi_hz = f(key)?,
            "drive.delta_c_over_2pi_hz" => self.delta_c_over_2pi_hz = f(key)?,
            "drive.delta_min_over_2pi_hz" => self.delta_min_over_2pi_hz = f(key)?,
            "drive.delta_max_over_2pi_hz" => self.delta_max_over_2pi_hz = f(key)?,
            "drive.delta_points" => {
                let v = parse_usize(line, key, value)?;
                if v < 2 {
                    return Err(ParseError {
                        line,
                        message: format!("{key}: need at least 2 grid points"),
                    });
                }
                self.delta_points = v;
            }
            "quantum.k1_over_omega" => self.k1_over_omega = require_positive(line, key, f(key)?)?,
            "quantum.k2_over_omega" => self.k2_over_omega = f(key)?,
            "quantum.derive_couplings" => self.derive_couplings = parse_bool(line, key, value)?,
            "quantum.delta_over_omega" => self.qdelta_over_omega = f(key)?,
            "quantum.n0" => self.n0 = require_positive(line, key, f(key)?)?,
            "quantum.m_cutoff" => {
                self.m_cutoff = parse_usize(line, key, value)? as u64;
            }
            "quantum.order" => {
                let v = parse_usize(line, key, value)?;
                if v > 2 {
                    return Err(ParseError {
                        line,
                        message: format!("{key}: order must be 0, 1 or 2"),
                    });
                }
                self.order = v as u8;
            }
            "quantum.t_max_ns" => self.t_max_ns = require_positive(line, key, f(key)?)?,
            "quantum.samples" => {
                let v = parse_usize(line, key, value)?;
                if v < 2 {
                    return Err(ParseError {
                        line,
                        message: format!("{key}: need at least 2 samples"),
                    });
                }
                self.samples = v;
            }
            "quantum.m_min" => self.m_min = parse_usize(line, key, value)? as u64,
            "quantum.m_max" => self.m_max = parse_usize(line, key, value)? as u64,
            "output.dir" => self.out_dir = value.to_string(),
            "output.prefix" => self.prefix = value.to_string(),
            _ => {
                return Err(ParseError {
                    line,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
        self.user_keys.insert(key.to_string());
        Ok(())
    }

    /// Parse a whole document: `key = value` lines, `#` comments, blank lines.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ParseError {
                    line,
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            cfg.set(key.trim(), value.trim(), line)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ParseError> {
        if self.delta_min_over_2pi_hz >= self.delta_max_over_2pi_hz {
            return Err(ParseError {
                line: 0,
                message: "drive.delta_min_over_2pi_hz must be below drive.delta_max_over_2pi_hz"
                    .into(),
            });
        }
        if self.m_min > self.m_max {
            return Err(ParseError {
                line: 0,
                message: "quantum.m_min must not exceed quantum.m_max".into(),
            });
        }
        Ok(())
    }

    /// Serialize every key with its provenance; `parse` of the result gives
    /// back an equal configuration.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut push = |key: &str, value: String| {
            let tag = if self.user_keys.contains(key) {
                "user"
            } else {
                "default"
            };
            let _ = writeln!(out, "{key} = {value}  # {tag}");
        };
        push(
            "medium.gamma31_over_2pi_hz",
            self.gamma31_over_2pi_hz.to_string(),
        );
        push(
            "medium.gamma32_over_2pi_hz",
            self.gamma32_over_2pi_hz.to_string(),
        );
        push(
            "medium.gamma12_over_2pi_hz",
            self.gamma12_over_2pi_hz.to_string(),
        );
        push(
            "medium.mu31_coulomb_meter",
            self.mu31_coulomb_meter.to_string(),
        );
        push(
            "medium.mu32_coulomb_meter",
            self.mu32_coulomb_meter.to_string(),
        );
        push(
            "medium.omega_over_2pi_hz",
            self.omega_over_2pi_hz.to_string(),
        );
        push(
            "medium.omega12_over_2pi_hz",
            self.omega12_over_2pi_hz.to_string(),
        );
        push("medium.density_per_m3", self.density_per_m3.to_string());
        push("medium.n_atoms", self.n_atoms.to_string());
        if let Some(v) = self.volume_m3 {
            push("medium.volume_m3", v.to_string());
        }
        if let Some(v) = self.g1_over_2pi_hz {
            push("drive.g1_over_2pi_hz", v.to_string());
        }
        push(
            "drive.coupling_intensity_w_per_m2",
            self.coupling_intensity_w_per_m2.to_string(),
        );
        if let Some(v) = self.probe_amplitude_v_per_m {
            push("drive.probe_amplitude_v_per_m", v.to_string());
        }
        push(
            "drive.probe_intensity_w_per_m2",
            self.probe_intensity_w_per_m2.to_string(),
        );
        push(
            "drive.delta_over_2pi_hz",
            self.delta_over_2pi_hz.to_string(),
        );
        push(
            "drive.delta_c_over_2pi_hz",
            self.delta_c_over_2pi_hz.to_string(),
        );
        push(
            "drive.delta_min_over_2pi_hz",
            self.delta_min_over_2pi_hz.to_string(),
        );
        push(
            "drive.delta_max_over_2pi_hz",
            self.delta_max_over_2pi_hz.to_string(),
        );
        push("drive.delta_points", self.delta_points.to_string());
        push("quantum.k1_over_omega", self.k1_over_omega.to_string());
        push("quantum.k2_over_omega", self.k2_over_omega.to_string());
        push(
            "quantum.derive_couplings",
            self.derive_couplings.to_string(),
        );
        push(
            "quantum.delta_over_omega",
            self.qdelta_over_omega.to_string(),
        );
        push("quantum.n0", self.n0.to_string());
        push("quantum.m_cutoff", self.m_cutoff.to_string());
        push("quantum.order", self.order.to_string());
        push("quantum.t_max_ns", self.t_max_ns.to_string());
        push("quantum.samples", self.samples.to_string());
        push("quantum.m_min", self.m_min.to_string());
        push("quantum.m_max", self.m_max.to_string());
        push("output.dir", self.out_dir.clone());
        push("output.prefix", self.prefix.clone());
        out
    }

    /// Values-only equality, ignoring provenance bookkeeping.
    pub fn same_values(&self, other: &Self) -> bool {
        let mut a = self.clone();
        let mut b = other.clone();
        a.user_keys.clear();
        b.user_keys.clear();
        a == b
    }

    pub fn medium(&self) -> MediumParams {
        MediumParams {
            gamma31: TAU * self.gamma31_over_2pi_hz,
            gamma32: TAU * self.gamma32_over_2pi_hz,
            gamma12: TAU * self.gamma12_over_2pi_hz,
            mu31: self.mu31_coulomb_meter,
            mu32: self.mu32_coulomb_meter,
            omega12: TAU * self.omega12_over_2pi_hz,
            omega: TAU * self.omega_over_2pi_hz,
            density: self.density_per_m3,
            n_atoms: self.n_atoms,
            volume: self.volume_m3,
        }
    }

    pub fn drive(&self) -> DriveParams {
        DriveParams {
            coupling: match self.g1_over_2pi_hz {
                Some(g) => CouplingField::Rabi(TAU * g),
                None => CouplingField::Intensity(self.coupling_intensity_w_per_m2),
            },
            probe: match self.probe_amplitude_v_per_m {
                Some(a) => ProbeField::Amplitude(a),
                None => ProbeField::Intensity(self.probe_intensity_w_per_m2),
            },
            delta_p: TAU * self.delta_over_2pi_hz,
            delta_c: TAU * self.delta_c_over_2pi_hz,
        }
    }

    /// Angular transition frequency omega (rad/s).
    pub fn omega(&self) -> f64 {
        TAU * self.omega_over_2pi_hz
    }

    /// Quantum-model couplings (k1, k2) in rad/s: configured ratios, or
    /// derived from the medium response when `quantum.derive_couplings` is on.
    pub fn quantum_couplings(&self) -> anyhow::Result<(f64, f64)> {
        if self.derive_couplings {
            let constants = PhysicalConstants::default();
            let drive = self
                .drive()
                .with_delta(self.qdelta_over_omega * self.omega());
            let cc = becprobe::coupling_constants(&self.medium(), &drive, &constants)?;
            Ok((cc.k1, cc.k2))
        } else {
            Ok((
                self.k1_over_omega * self.omega(),
                self.k2_over_omega * self.omega(),
            ))
        }
    }

    /// Probe detuning of the quantum scenarios (rad/s).
    pub fn quantum_delta(&self) -> f64 {
        self.qdelta_over_omega * self.omega()
    }
}
