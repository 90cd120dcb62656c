use std::io::Write;
use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::synth::{gen_pair, gen_set};
use super::{Algorithm, Sketcher};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub k: usize,
    pub l0: usize,
    pub l1: f64,
    pub pairs: usize,
    pub target_j: f64,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { algorithm: Algorithm::DartMinHash, k: 256, l0: 256, l1: 1.0, pairs: 100, target_j: 0.5, seed: 1 }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.l0 == 0 || self.pairs == 0 {
            return Err(Error::invalid("k, l0 and pairs must be positive"));
        }
        if !(self.l1.is_finite() && self.l1 > 0.0) {
            return Err(Error::invalid(format!("l1 must be positive and finite, got {}", self.l1)));
        }
        if !(self.target_j > 0.0 && self.target_j < 1.0) {
            return Err(Error::invalid(format!("target J must be in (0, 1), got {}", self.target_j)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationRow {
    pub k: usize,
    pub target_j: f64,
    pub estimate: f64,
    pub in_ci: bool,
}

/// Half-width of the normal 95% interval of a k-sample binomial estimate.
pub fn ci_half_width(j: f64, k: usize) -> f64 {
    1.96 * (j * (1.0 - j) / k as f64).sqrt()
}

fn trial(config: &ExperimentConfig, index: u64) -> Result<EstimationRow> {
    // Each trial has its own ChaCha stream, so rows do not depend on how
    // trials are spread over threads.
    let mut g = ChaCha8Rng::seed_from_u64(config.seed);
    g.set_stream(index);
    let x = gen_set(config.l0, config.l1, &mut g);
    let y = gen_pair(&x, config.target_j, &mut g)?;
    let sketcher = Sketcher::new(config.algorithm, config.k, g.random())?;
    let estimate = sketcher.estimate(&x, &y)?;
    let j = config.target_j;
    Ok(EstimationRow { k: config.k, target_j: j, estimate, in_ci: (estimate - j).abs() <= ci_half_width(j, config.k) })
}

/// Runs `config.pairs` independent trials, each with a fresh pair and seed.
pub fn run_estimation(config: &ExperimentConfig) -> Result<Vec<EstimationRow>> {
    config.validate()?;
    let threads = thread::available_parallelism().map_or(1, |n| n.get()).min(config.pairs);
    let chunk = config.pairs.div_ceil(threads);
    thread::scope(|s| {
        let handles: Vec<_> = (0..config.pairs)
            .step_by(chunk)
            .map(|start| {
                let end = (start + chunk).min(config.pairs);
                s.spawn(move || (start..end).map(|i| trial(config, i as u64)).collect::<Result<Vec<_>>>())
            })
            .collect();
        let mut rows = Vec::with_capacity(config.pairs);
        for h in handles {
            rows.extend(h.join().expect("estimation worker panicked")?);
        }
        Ok(rows)
    })
}

pub fn write_estimation_csv<W: Write>(
    mut out: W,
    config: &ExperimentConfig,
    rows: &[EstimationRow],
) -> std::io::Result<()> {
    writeln!(
        out,
        "# seed={} algorithm={} k={} l0={} l1={:?} pairs={} target_j={}",
        config.seed, config.algorithm, config.k, config.l0, config.l1, config.pairs, config.target_j
    )?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "target_j", "estimate", "in_ci"])?;
    for r in rows {
        w.write_record([r.k.to_string(), r.target_j.to_string(), r.estimate.to_string(), r.in_ci.to_string()])?;
    }
    w.flush()
}
