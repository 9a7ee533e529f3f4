//! Polarization sweeps and their CSV/JSON tables.

use std::fmt;

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use magicdist::five_qubit::{distill_decode, distill_projective, N_OUTCOMES};
use magicdist::magic::{m_polarization, prepare_faulty_direct};
use magicdist::noise::{noisy_distill, NoiseConfig, NoiseMode};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::numfmt::{rounded, table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Projective,
    Decode,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Projective => "projective",
            Variant::Decode => "decode",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub p_start: f64,
    pub p_end: f64,
    pub steps: usize,
    pub variant: Variant,
    pub noise: NoiseConfig,
    pub iterations: usize,
    /// Reserved; every computation is currently deterministic.
    pub rng_seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p-start", self.p_start), ("p-end", self.p_end)] {
            if !(-1.0..=1.0).contains(&p) {
                bail!("{name} must lie in [-1, 1], got {p}");
            }
        }
        if self.p_start > self.p_end {
            bail!("p-start ({}) exceeds p-end ({})", self.p_start, self.p_end);
        }
        if self.steps < 2 {
            bail!("steps must be at least 2, got {}", self.steps);
        }
        if self.iterations < 1 {
            bail!("iterations must be at least 1");
        }
        if self.variant == Variant::Projective && self.noise.mode != NoiseMode::None {
            bail!("noise is only modelled for the decode variant");
        }
        self.noise.validate()?;
        Ok(())
    }

    /// Evenly spaced inputs; the last point is exactly `p_end`.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.p_end
                } else {
                    self.p_start + (self.p_end - self.p_start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// One evaluated grid point, after `iterations` rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p_in: f64,
    pub p_out: Option<f64>,
    pub theta0: f64,
    /// `None` for outcomes a variant does not report.
    pub theta: [Option<f64>; N_OUTCOMES],
    pub bloch: [Option<[f64; 3]>; N_OUTCOMES],
}

fn single_round(p: f64, variant: Variant, noise: &NoiseConfig) -> Result<SweepRow> {
    let input = prepare_faulty_direct(p)?;
    match variant {
        Variant::Projective => {
            let out = distill_projective(&input.tensor_power(5))?;
            let mut theta = [None; N_OUTCOMES];
            let mut bloch = [None; N_OUTCOMES];
            theta[0] = Some(out.success_probability);
            bloch[0] = Some(out.distilled.bloch()?.as_array());
            Ok(SweepRow {
                p_in: p,
                p_out: Some(m_polarization(&out.distilled)?),
                theta0: out.success_probability,
                theta,
                bloch,
            })
        }
        Variant::Decode => {
            let out = if noise.mode == NoiseMode::None {
                distill_decode(&input.tensor_power(5))?
            } else {
                noisy_distill(p, noise)?
            };
            Ok(SweepRow {
                p_in: p,
                p_out: out.p_out(),
                theta0: out.theta0(),
                theta: out.theta().map(Some),
                bloch: out.blochs().map(|b| b.map(|b| b.as_array())),
            })
        }
    }
}

/// Runs `iterations` rounds from `p_in`, feeding each output polarization
/// into fresh copies; the row reports the last round.
pub fn evaluate(p_in: f64, variant: Variant, noise: &NoiseConfig, iterations: usize) -> Result<SweepRow> {
    let mut p = p_in;
    let mut row = single_round(p, variant, noise)?;
    for _ in 1..iterations {
        p = row
            .p_out
            .with_context(|| format!("trivial syndrome never occurs at p = {p}; cannot iterate"))?
            .clamp(-1.0, 1.0);
        row = single_round(p, variant, noise)?;
    }
    row.p_in = p_in;
    Ok(row)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.grid()
        .par_iter()
        .map(|&p| evaluate(p, spec.variant, &spec.noise, spec.iterations))
        .collect()
}

pub const CSV_HEADER: &str = "p_in,p_out,theta0,variant,noise_mode";

pub fn to_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let p_out = r.p_out.map(table).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            table(r.p_in),
            p_out,
            table(r.theta0),
            spec.variant,
            spec.noise.mode
        ));
    }
    out
}

fn number(x: f64) -> Value {
    json!(rounded(x))
}

pub fn row_json(spec: &SweepSpec, r: &SweepRow) -> Value {
    json!({
        "p_in": number(r.p_in),
        "variant": spec.variant.as_str(),
        "noise_mode": spec.noise.mode.as_str(),
        "theta": r.theta.iter().map(|t| t.map_or(Value::Null, number)).collect::<Vec<_>>(),
        "bloch": r.bloch.iter().map(|b| match b {
            Some(v) => Value::Array(v.iter().map(|&c| number(c)).collect()),
            None => Value::Null,
        }).collect::<Vec<_>>(),
        "p_out": r.p_out.map_or(Value::Null, number),
        "theta0": number(r.theta0),
    })
}

pub fn to_json(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let doc = json!({
        "metadata": {
            "p_start": number(spec.p_start),
            "p_end": number(spec.p_end),
            "steps": spec.steps,
            "variant": spec.variant.as_str(),
            "noise_mode": spec.noise.mode.as_str(),
            "iterations": spec.iterations,
            "total_circuit_time": number(spec.noise.total_circuit_time),
            "slicing": spec.noise.slicing,
            "dephasing_times": spec.noise.dephasing_times.iter().map(|&t| number(t)).collect::<Vec<_>>(),
            "rng_seed": spec.rng_seed,
        },
        "rows": rows.iter().map(|r| row_json(spec, r)).collect::<Vec<_>>(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("plain JSON values");
    s.push('\n');
    s
}
