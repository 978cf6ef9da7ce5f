//! Monte Carlo recovery-rate sweeps.

mod bench;
mod csv;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::decoders::{
    sample_erasure, syndrome_of, tn_build, ErasureDecoder, IntOptDecoder, NoisePrior, TnDecoder,
    DEFAULT_GENERATOR_LIMIT, DEFAULT_MEMORY_BUDGET,
};
use crate::error::{Error, Result};
use crate::pauli::Pauli;
use crate::push::generate_operators;
use crate::tiling::{InflationRule, Preset};

pub use bench::{runtime_bench, BenchConfig, BenchRow};
pub use csv::{parse_csv, read_csv, write_csv};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Erasure,
    IntOpt,
    TensorNetwork,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Erasure => "erasure",
            DecoderKind::IntOpt => "intopt",
            DecoderKind::TensorNetwork => "tn",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "erasure" | "erasure-ge" => Ok(DecoderKind::Erasure),
            "intopt" | "int-opt" => Ok(DecoderKind::IntOpt),
            "tn" | "tensor-network" => Ok(DecoderKind::TensorNetwork),
            other => Err(Error::Config(format!("unknown decoder {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub preset: Preset,
    pub layers: usize,
    pub rule: InflationRule,
    pub decoder: DecoderKind,
    pub p_start: f64,
    pub p_end: f64,
    pub p_step: f64,
    pub trials: usize,
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
    pub master_seed: u64,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Bulk logical qubits that must survive for a trial to count.
    pub targets: Vec<usize>,
    pub generator_limit: usize,
    pub memory_budget: usize,
    /// Written as a metadata line when set.
    pub timestamp: Option<String>,
}

impl SweepConfig {
    /// Erasure defaults: `p` from 0.01 to 1.0 in steps of 0.01, 750 trials.
    pub fn erasure(preset: Preset, layers: usize) -> Self {
        SweepConfig {
            preset,
            layers,
            rule: InflationRule::Vertex,
            decoder: DecoderKind::Erasure,
            p_start: 0.01,
            p_end: 1.0,
            p_step: 0.01,
            trials: 750,
            rx: 1.0 / 3.0,
            ry: 1.0 / 3.0,
            rz: 1.0 / 3.0,
            master_seed: 0,
            workers: 0,
            targets: vec![0],
            generator_limit: DEFAULT_GENERATOR_LIMIT,
            memory_budget: DEFAULT_MEMORY_BUDGET,
            timestamp: None,
        }
    }

    /// Pauli-noise defaults: `p` from 0.10 to 0.50 in steps of 0.01, 500
    /// trials, `rx = rz = 0.33`.
    pub fn pauli(preset: Preset, layers: usize, decoder: DecoderKind) -> Self {
        SweepConfig {
            decoder,
            p_start: 0.10,
            p_end: 0.50,
            p_step: 0.01,
            trials: 500,
            rx: 0.33,
            ry: 0.34,
            rz: 0.33,
            ..Self::erasure(preset, layers)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.p_start && self.p_start <= self.p_end && self.p_end <= 1.0) {
            return Err(Error::Config(format!(
                "need 0 <= p_start <= p_end <= 1, got {}..{}",
                self.p_start, self.p_end
            )));
        }
        if !(self.p_step > 0.0) {
            return Err(Error::Config("p_step must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.targets.is_empty() {
            return Err(Error::Config("no logical qubits targeted".into()));
        }
        if self.decoder != DecoderKind::Erasure {
            NoisePrior::new(0.0, self.rx, self.ry, self.rz)?;
        }
        Ok(())
    }

    /// Grid points `p_start + i·p_step` up to and including `p_end`.
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.p_end - self.p_start) / self.p_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| ((self.p_start + i as f64 * self.p_step) * 1e9).round() / 1e9)
            .collect()
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let mut m = vec![
            ("preset".to_string(), self.preset.to_string()),
            ("layers".to_string(), self.layers.to_string()),
            ("rule".to_string(), self.rule.to_string()),
            ("decoder".to_string(), self.decoder.to_string()),
            ("seed".to_string(), self.master_seed.to_string()),
            ("trials".to_string(), self.trials.to_string()),
        ];
        if self.decoder != DecoderKind::Erasure {
            m.push((
                "prior".to_string(),
                format!("rx={} ry={} rz={}", self.rx, self.ry, self.rz),
            ));
        }
        let targets: Vec<String> = self.targets.iter().map(|t| t.to_string()).collect();
        m.push(("targets".to_string(), targets.join(",")));
        if let Some(ts) = &self.timestamp {
            m.push(("timestamp".to_string(), ts.clone()));
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub successes: u64,
    pub trials: u64,
}

impl SweepRow {
    pub fn recovery_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn stderr(&self) -> f64 {
        let r = self.recovery_rate();
        (r * (1.0 - r) / self.trials as f64).sqrt()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn rate_at(&self, p: f64) -> Option<SweepRow> {
        self.rows.iter().copied().find(|r| (r.p - p).abs() < 1e-9)
    }
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of one trial; depends only on its coordinates, never on scheduling.
pub fn trial_seed(master_seed: u64, p_index: u64, trial_index: u64) -> u64 {
    splitmix(splitmix(splitmix(master_seed) ^ p_index) ^ trial_index.rotate_left(32))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
}

/// Counts successes of `trial` for trial indices `range` at every grid point.
fn run_grid<F>(cfg: &SweepConfig, range: std::ops::Range<u64>, trial: F) -> Result<Vec<SweepRow>>
where
    F: Fn(f64, &mut ChaCha8Rng) -> Result<bool> + Sync,
{
    let pool = pool(cfg.workers)?;
    cfg.grid()
        .into_iter()
        .enumerate()
        .map(|(pi, p)| {
            let successes = pool.install(|| {
                range
                    .clone()
                    .into_par_iter()
                    .map(|t| {
                        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.master_seed, pi as u64, t));
                        trial(p, &mut rng).map(u64::from)
                    })
                    .try_reduce(|| 0, |a, b| Ok(a + b))
            })?;
            Ok(SweepRow {
                p,
                successes,
                trials: range.end - range.start,
            })
        })
        .collect()
}

/// Erasure sweep with the Gaussian-elimination decoder.
pub fn run_erasure_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    run_erasure_trials(cfg, 0..cfg.trials as u64)
}

/// Like [`run_erasure_sweep`] but only for the given trial indices, so a
/// sweep can be split and merged.
pub fn run_erasure_trials(cfg: &SweepConfig, range: std::ops::Range<u64>) -> Result<SweepResult> {
    cfg.validate()?;
    if cfg.decoder != DecoderKind::Erasure {
        return Err(Error::Config(format!("{} is not an erasure decoder", cfg.decoder)));
    }
    let net = cfg.preset.build_with(cfg.layers, cfg.rule)?;
    let ops = generate_operators(&net)?;
    let dec = ErasureDecoder::new(&ops, &cfg.targets)?;
    let rows = run_grid(cfg, range, |p, rng| {
        let e = sample_erasure(ops.n, p, rng);
        dec.correctable(&e)
    })?;
    Ok(SweepResult {
        metadata: cfg.metadata(),
        rows,
    })
}

/// Pauli-noise sweep with the integer-optimization or tensor-network decoder.
pub fn run_pauli_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    run_pauli_trials(cfg, 0..cfg.trials as u64)
}

pub fn run_pauli_trials(cfg: &SweepConfig, range: std::ops::Range<u64>) -> Result<SweepResult> {
    cfg.validate()?;
    let net = cfg.preset.build_with(cfg.layers, cfg.rule)?;
    let ops = generate_operators(&net)?;
    let prior_at = |p: f64| NoisePrior::new(p, cfg.rx, cfg.ry, cfg.rz);
    let rows = match cfg.decoder {
        DecoderKind::Erasure => {
            return Err(Error::Config("erasure is not a Pauli-noise decoder".into()))
        }
        DecoderKind::TensorNetwork => {
            if cfg.targets != [0] {
                return Err(Error::Config(
                    "the tensor-network decoder only decodes logical qubit 0".into(),
                ));
            }
            let dec = TnDecoder::new(&tn_build(&net)?, cfg.memory_budget)?;
            run_grid(cfg, range, |p, rng| {
                let prior = prior_at(p)?;
                let e = prior.sample(ops.n, rng);
                Ok(dec.decode(&e, &prior)?.1 == Pauli::I)
            })?
        }
        DecoderKind::IntOpt => {
            let dec = IntOptDecoder::new(&ops, &cfg.targets, cfg.generator_limit)?;
            run_grid(cfg, range, |p, rng| {
                let prior = prior_at(p)?;
                let e = prior.sample(ops.n, rng);
                let s = syndrome_of(&ops.stabilizers, &e)?;
                let c = dec.decode(&s)?;
                Ok(dec.succeeded(&e, &c))
            })?
        }
    };
    Ok(SweepResult {
        metadata: cfg.metadata(),
        rows,
    })
}

/// Runs whichever sweep matches `cfg.decoder`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    match cfg.decoder {
        DecoderKind::Erasure => run_erasure_sweep(cfg),
        _ => run_pauli_sweep(cfg),
    }
}

/// Adds the counts of `other` into `into`; both must share the same grid.
pub fn merge_counts(into: &mut SweepResult, other: &SweepResult) -> Result<()> {
    if into.rows.len() != other.rows.len() {
        return Err(Error::Config("sweeps have different grids".into()));
    }
    for (a, b) in into.rows.iter_mut().zip(&other.rows) {
        if (a.p - b.p).abs() > 1e-9 {
            return Err(Error::Config("sweeps have different grids".into()));
        }
        a.successes += b.successes;
        a.trials += b.trials;
    }
    Ok(())
}

/// Where the recovery curve of a deeper code crosses that of a shallower one.
///
/// Looks at `d(p) = r_deeper(p) − r_shallower(p)` on the shared grid, picks
/// the adjacent pair of points that best splits the grid into `d > 0` before
/// and `d < 0` after, and interpolates linearly between them. Returns `None`
/// if `d` never changes sign.
pub fn crossing_point(shallower: &SweepResult, deeper: &SweepResult) -> Option<f64> {
    let pts: Vec<(f64, f64)> = shallower
        .rows
        .iter()
        .filter_map(|a| {
            deeper
                .rate_at(a.p)
                .map(|b| (a.p, b.recovery_rate() - a.recovery_rate()))
        })
        .collect();
    let mut best: Option<(usize, usize)> = None;
    for i in 0..pts.len().saturating_sub(1) {
        if !(pts[i].1 > 0.0 && pts[i + 1].1 <= 0.0) {
            continue;
        }
        let score = pts[..=i].iter().filter(|x| x.1 > 0.0).count()
            + pts[i + 1..].iter().filter(|x| x.1 < 0.0).count();
        if best.map_or(true, |(s, _)| score > s) {
            best = Some((score, i));
        }
    }
    let (_, i) = best?;
    let ((p0, d0), (p1, d1)) = (pts[i], pts[i + 1]);
    Some(p0 + (p1 - p0) * d0 / (d0 - d1))
}
