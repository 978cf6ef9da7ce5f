use std::fmt;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::decoders::{
    sample_erasure, syndrome_of, tn_build, ErasureDecoder, IntOptDecoder, NoisePrior, TnDecoder,
    DEFAULT_GENERATOR_LIMIT, DEFAULT_MEMORY_BUDGET,
};
use crate::push::{generate_operators, BoundaryOperatorSet};
use crate::tiling::{Preset, TensorNetwork};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub presets: Vec<Preset>,
    pub max_layers: usize,
    /// Decodes timed per (stage, preset, layer).
    pub events: usize,
    /// Deepest layer for the minimum-weight decoder.
    pub intopt_max_layers: usize,
    /// Error rate used for the decode timings.
    pub p: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            presets: Preset::ALL.to_vec(),
            max_layers: 2,
            events: 20,
            intopt_max_layers: 2,
            p: 0.1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub stage: &'static str,
    pub preset: Preset,
    pub layers: usize,
    pub n: usize,
    /// `None` when the stage was skipped; `note` says why.
    pub seconds_per_event: Option<f64>,
    pub note: String,
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.seconds_per_event {
            Some(s) => write!(
                f,
                "{:<9} {:<12} L={} n={:<6} {:.6e} s/event",
                self.stage, self.preset, self.layers, self.n, s
            ),
            None => write!(
                f,
                "{:<9} {:<12} L={} n={:<6} skipped: {}",
                self.stage, self.preset, self.layers, self.n, self.note
            ),
        }
    }
}

fn time_events<F: FnMut(&mut ChaCha8Rng) -> crate::Result<()>>(
    events: usize,
    seed: u64,
    mut f: F,
) -> crate::Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    for _ in 0..events {
        f(&mut rng)?;
    }
    Ok(start.elapsed().as_secs_f64() / events.max(1) as f64)
}

fn decode_rows(
    cfg: &BenchConfig,
    preset: Preset,
    layers: usize,
    net: &TensorNetwork,
    ops: &BoundaryOperatorSet,
) -> Vec<BenchRow> {
    let row = |stage, r: crate::Result<f64>| match r {
        Ok(s) => BenchRow {
            stage,
            preset,
            layers,
            n: ops.n,
            seconds_per_event: Some(s),
            note: String::new(),
        },
        Err(e) => BenchRow {
            stage,
            preset,
            layers,
            n: ops.n,
            seconds_per_event: None,
            note: e.to_string(),
        },
    };
    let prior = NoisePrior::depolarizing(cfg.p).ok();
    let mut rows = Vec::new();

    let erasure = ErasureDecoder::new(ops, &[0]).and_then(|dec| {
        time_events(cfg.events, cfg.seed, |rng| {
            dec.correctable(&sample_erasure(ops.n, cfg.p, rng)).map(|_| ())
        })
    });
    rows.push(row("erasure", erasure));

    let intopt = if layers > cfg.intopt_max_layers {
        Err(crate::Error::Capability(format!(
            "minimum-weight decoding is only benchmarked up to L={}",
            cfg.intopt_max_layers
        )))
    } else {
        IntOptDecoder::new(ops, &[0], DEFAULT_GENERATOR_LIMIT).and_then(|dec| {
            let prior = prior
                .ok_or_else(|| crate::Error::Config(format!("invalid error rate {}", cfg.p)))?;
            time_events(cfg.events, cfg.seed, |rng| {
                let e = prior.sample(ops.n, rng);
                dec.decode(&syndrome_of(&ops.stabilizers, &e)?).map(|_| ())
            })
        })
    };
    rows.push(row("intopt", intopt));

    let tn = tn_build(net)
        .and_then(|ind| TnDecoder::new(&ind, DEFAULT_MEMORY_BUDGET))
        .and_then(|dec| {
            let prior = prior
                .ok_or_else(|| crate::Error::Config(format!("invalid error rate {}", cfg.p)))?;
            time_events(cfg.events, cfg.seed, |rng| {
                let e = prior.sample(ops.n, rng);
                dec.decode(&e, &prior).map(|_| ())
            })
        });
    rows.push(row("tn", tn));
    rows
}

/// Wall-clock time per event: one code generation per layer, and per-trial
/// decode times for each decoder.
pub fn runtime_bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &preset in &cfg.presets {
        for layers in 0..=cfg.max_layers {
            let start = Instant::now();
            let built = preset
                .build(layers)
                .and_then(|net| generate_operators(&net).map(|ops| (net, ops)));
            let elapsed = start.elapsed().as_secs_f64();
            match built {
                Ok((net, ops)) => {
                    rows.push(BenchRow {
                        stage: "generate",
                        preset,
                        layers,
                        n: ops.n,
                        seconds_per_event: Some(elapsed),
                        note: String::new(),
                    });
                    rows.extend(decode_rows(cfg, preset, layers, &net, &ops));
                }
                Err(e) => rows.push(BenchRow {
                    stage: "generate",
                    preset,
                    layers,
                    n: 0,
                    seconds_per_event: None,
                    note: e.to_string(),
                }),
            }
        }
    }
    rows
}
