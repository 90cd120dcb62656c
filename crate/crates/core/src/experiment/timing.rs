use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::synth::gen_set;
use super::{Algorithm, Sketcher};
use crate::error::{Error, Result};
use crate::set::WeightedSet;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingCell {
    pub k: usize,
    pub l0: usize,
    pub l1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub l0: usize,
    pub l1: f64,
    /// Milliseconds per sketch.
    pub mean_ms: f64,
}

/// Standard running-time grid: k and l0 from 1 to 16384 at unit norm, plus
/// k = 256, l0 = 1024 at norms 2^64 and 2^-64.
pub fn standard_grid() -> Vec<TimingCell> {
    let cell = |k, l0, l1| TimingCell { k, l0, l1 };
    let mut grid = Vec::new();
    for l0 in [256, 4096] {
        for k in [1, 256, 4096] {
            grid.push(cell(k, l0, 1.0));
        }
    }
    for k in [64, 1024] {
        for l0 in [64, 1024, 16384] {
            grid.push(cell(k, l0, 1.0));
        }
    }
    for l1 in [1.0, 2f64.powi(64), 2f64.powi(-64)] {
        grid.push(cell(256, 1024, l1));
    }
    grid
}

/// Sets used for one cell; identical for every algorithm.
pub fn cell_sets(cell: &TimingCell, sets: usize, seed: u64) -> Vec<WeightedSet> {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    g.set_stream(cell.k as u64 ^ (cell.l0 as u64) << 32 ^ cell.l1.to_bits().rotate_left(17));
    (0..sets).map(|_| gen_set(cell.l0, cell.l1, &mut g)).collect()
}

const GROUPS: usize = 10;

/// Median over groups of the mean time per sketch, in milliseconds.
pub fn time_sketches(sketcher: &Sketcher, sets: &[WeightedSet]) -> Result<f64> {
    if sets.is_empty() {
        return Err(Error::invalid("no sets to time"));
    }
    for x in sets.iter().take(3) {
        black_box(sketcher.sketch(x)?);
    }
    let groups = GROUPS.min(sets.len());
    let size = sets.len().div_ceil(groups);
    let mut means = Vec::with_capacity(groups);
    for chunk in sets.chunks(size) {
        let start = Instant::now();
        for x in chunk {
            black_box(sketcher.sketch(black_box(x))?);
        }
        means.push(start.elapsed().as_secs_f64() * 1e3 / chunk.len() as f64);
    }
    means.sort_by(f64::total_cmp);
    let n = means.len();
    Ok(if n % 2 == 1 { means[n / 2] } else { 0.5 * (means[n / 2 - 1] + means[n / 2]) })
}

/// Times every algorithm on every cell, one cell after another.
pub fn run_timing(algorithms: &[Algorithm], cells: &[TimingCell], sets: usize, seed: u64) -> Result<Vec<TimingRow>> {
    let mut rows = Vec::with_capacity(algorithms.len() * cells.len());
    for cell in cells {
        let data = cell_sets(cell, sets, seed);
        for &algorithm in algorithms {
            let sketcher = Sketcher::new(algorithm, cell.k, seed)?;
            let mean_ms = time_sketches(&sketcher, &data)?;
            rows.push(TimingRow { algorithm, k: cell.k, l0: cell.l0, l1: cell.l1, mean_ms });
        }
    }
    Ok(rows)
}

/// Formats `v` with three significant digits.
pub fn format_sig3(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return v.to_string();
    }
    let mut magnitude = v.abs().log10().floor() as i32;
    // 9.996 rounds up to 10.0, which has one more integer digit.
    if (v.abs() / 10f64.powi(magnitude - 2)).round() >= 1000.0 {
        magnitude += 1;
    }
    let decimals = 2 - magnitude;
    if decimals > 0 {
        format!("{v:.*}", decimals as usize)
    } else {
        let unit = 10f64.powi(-decimals);
        format!("{:.0}", (v / unit).round() * unit)
    }
}

pub fn write_timing_csv<W: Write>(mut out: W, seed: u64, sets: usize, rows: &[TimingRow]) -> std::io::Result<()> {
    writeln!(out, "# seed={seed} sets_per_cell={sets}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["algorithm", "k", "l0", "l1", "mean_ms"])?;
    for r in rows {
        w.write_record([
            r.algorithm.to_string(),
            r.k.to_string(),
            r.l0.to_string(),
            format!("{:?}", r.l1),
            format_sig3(r.mean_ms),
        ])?;
    }
    w.flush()
}
