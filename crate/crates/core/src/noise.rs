//! Pure dephasing interleaved with the decode circuit.
//!
//! Only transverse relaxation is modelled. The total circuit time is cut
//! into `slicing` equal segments; the `L` decode layers act instantaneously
//! at the centres of `L` equal intervals of the same time line. A segment
//! that straddles a layer is split there, so each qubit dephases for exactly
//! the time that elapses between gates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::five_qubit::{decoder, decompose_outcomes, distill_decode, DistillationOutcome};
use crate::magic::prepare_faulty_direct;
use crate::state::DensityOperator;

/// Hahn-echo `T₂` in seconds for (M, C₁, C₂, C₃, C₄).
pub const T2_TIMES: [f64; 5] = [0.84, 1.27, 1.17, 1.19, 1.13];
/// Linewidth `T₂*` in seconds for (M, C₁, C₂, C₃, C₄).
pub const T2_STAR_TIMES: [f64; 5] = [0.61, 1.04, 0.66, 1.16, 0.84];
/// Duration of the distillation circuit, seconds.
pub const DEFAULT_CIRCUIT_TIME: f64 = 0.1;
pub const DEFAULT_SLICING: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    None,
    #[serde(rename = "T2")]
    T2,
    #[serde(rename = "T2star")]
    T2Star,
    Custom,
}

impl NoiseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            NoiseMode::None => "none",
            NoiseMode::T2 => "T2",
            NoiseMode::T2Star => "T2star",
            NoiseMode::Custom => "custom",
        }
    }
}

impl fmt::Display for NoiseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NoiseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(NoiseMode::None),
            "T2" | "t2" => Ok(NoiseMode::T2),
            "T2star" | "t2star" | "T2*" => Ok(NoiseMode::T2Star),
            "custom" => Ok(NoiseMode::Custom),
            other => Err(Error::InvalidConfig(format!("unknown noise mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    /// Per-qubit dephasing times in register order (M, C₁, C₂, C₃, C₄).
    pub dephasing_times: [f64; 5],
    pub total_circuit_time: f64,
    pub mode: NoiseMode,
    pub slicing: usize,
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self {
            dephasing_times: T2_TIMES,
            total_circuit_time: DEFAULT_CIRCUIT_TIME,
            mode: NoiseMode::None,
            slicing: DEFAULT_SLICING,
        }
    }

    pub fn t2() -> Self {
        Self {
            mode: NoiseMode::T2,
            ..Self::noiseless()
        }
    }

    pub fn t2_star() -> Self {
        Self {
            dephasing_times: T2_STAR_TIMES,
            mode: NoiseMode::T2Star,
            ..Self::noiseless()
        }
    }

    pub fn custom(dephasing_times: [f64; 5], total_circuit_time: f64, slicing: usize) -> Result<Self> {
        let cfg = Self {
            dephasing_times,
            total_circuit_time,
            mode: NoiseMode::Custom,
            slicing,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Preset for a mode; `Custom` starts from the `T₂` times.
    pub fn preset(mode: NoiseMode) -> Self {
        match mode {
            NoiseMode::None => Self::noiseless(),
            NoiseMode::T2 => Self::t2(),
            NoiseMode::T2Star => Self::t2_star(),
            NoiseMode::Custom => Self {
                mode: NoiseMode::Custom,
                ..Self::t2()
            },
        }
    }

    pub fn with_total_time(mut self, seconds: f64) -> Result<Self> {
        self.total_circuit_time = seconds;
        self.validate()?;
        Ok(self)
    }

    pub fn with_slicing(mut self, slicing: usize) -> Result<Self> {
        self.slicing = slicing;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(&bad) = self.dephasing_times.iter().find(|t| t.is_nan() || **t <= 0.0) {
            return Err(Error::InvalidDephasingTime(bad));
        }
        if self.total_circuit_time.is_nan() || self.total_circuit_time < 0.0 {
            return Err(Error::NegativeTime(self.total_circuit_time));
        }
        if self.slicing == 0 {
            return Err(Error::InvalidConfig("slicing must be at least 1".into()));
        }
        Ok(())
    }
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self::noiseless()
    }
}

/// Phase damping on one qubit: coherences between its `|0⟩` and `|1⟩`
/// scale by `e^{−t/T₂}`, populations are untouched.
pub fn dephase(rho: &DensityOperator, qubit: usize, t: f64, t2: f64) -> Result<DensityOperator> {
    dephase_many(rho, &[(qubit, t, t2)])
}

fn dephase_many(rho: &DensityOperator, spec: &[(usize, f64, f64)]) -> Result<DensityOperator> {
    let n = rho.n_qubits();
    let mut factors = Vec::with_capacity(spec.len());
    for &(qubit, t, t2) in spec {
        if qubit >= n {
            return Err(Error::InvalidTargets {
                indices: vec![qubit],
                n_qubits: n,
            });
        }
        if t.is_nan() || t < 0.0 {
            return Err(Error::NegativeTime(t));
        }
        if t2.is_nan() || t2 <= 0.0 {
            return Err(Error::InvalidDephasingTime(t2));
        }
        factors.push((1usize << (n - 1 - qubit), (-t / t2).exp()));
    }
    let mut m = rho.matrix().clone();
    let dim = rho.dim();
    for r in 0..dim {
        for c in 0..dim {
            let diff = r ^ c;
            let scale: f64 = factors
                .iter()
                .filter(|(mask, _)| diff & mask != 0)
                .map(|(_, g)| g)
                .product();
            m[(r, c)] *= scale;
        }
    }
    Ok(DensityOperator::from_matrix_unchecked(m))
}

/// Dephases every qubit of a five-qubit register for `t` seconds.
pub fn dephase_register(rho: &DensityOperator, t: f64, times: &[f64; 5]) -> Result<DensityOperator> {
    rho.expect_qubits(5)?;
    let spec: Vec<(usize, f64, f64)> = times.iter().enumerate().map(|(q, &t2)| (q, t, t2)).collect();
    dephase_many(rho, &spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    Layer(usize),
    /// Dephasing for this many ticks of `total / (2·L·S)`.
    Noise(usize),
}

fn schedule(layers: usize, slices: usize) -> Vec<Event> {
    // slice boundaries at 2L·k ticks, layer j fires at (2j+1)·S ticks
    let mut events = Vec::with_capacity(layers + 2 * slices);
    let mut now = 0usize;
    let mut j = 0usize;
    for k in 1..=slices {
        let end = 2 * layers * k;
        while j < layers && (2 * j + 1) * slices <= end {
            let at = (2 * j + 1) * slices;
            if at > now {
                events.push(Event::Noise(at - now));
                now = at;
            }
            events.push(Event::Layer(j));
            j += 1;
        }
        if end > now {
            events.push(Event::Noise(end - now));
            now = end;
        }
    }
    events
}

/// The decode circuit with dephasing segments interleaved.
pub fn noisy_decode(rho_in: &DensityOperator, cfg: &NoiseConfig) -> Result<DensityOperator> {
    cfg.validate()?;
    rho_in.expect_qubits(5)?;
    let dec = decoder();
    if cfg.mode == NoiseMode::None || cfg.total_circuit_time == 0.0 {
        return dec.apply(rho_in);
    }
    let layers = dec.layers().len();
    let tick = cfg.total_circuit_time / (2 * layers * cfg.slicing) as f64;
    let mut rho = rho_in.clone();
    for event in schedule(layers, cfg.slicing) {
        rho = match event {
            Event::Layer(j) => rho.conjugate_by(dec.layer_unitary(j)),
            Event::Noise(ticks) => dephase_register(&rho, ticks as f64 * tick, &cfg.dephasing_times)?,
        };
    }
    Ok(rho)
}

/// One distillation round on `prepare_faulty_direct(p_in)^⊗5` under `cfg`.
pub fn noisy_distill(p_in: f64, cfg: &NoiseConfig) -> Result<DistillationOutcome> {
    let rho_in = prepare_faulty_direct(p_in)?.tensor_power(5);
    if cfg.mode == NoiseMode::None {
        cfg.validate()?;
        return distill_decode(&rho_in);
    }
    decompose_outcomes(&noisy_decode(&rho_in, cfg)?)
}
