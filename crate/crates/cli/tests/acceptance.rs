//! End-to-end acceptance checks. Prints one line per criterion and exits
//! nonzero if any fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use hyperqec::decoders::oracle_coset_distribution;
use hyperqec::harness::{runtime_bench, BenchConfig};
use hyperqec::{
    batch_push, correctness_check, crossing_point, erasure_correctable, generate_operators,
    perfect_513, readout, run_sweep, steane_713, syndrome_of, tn_build, verify_k_uniform,
    BoundaryOperatorSet, DecoderKind, ErasurePattern, IntOptDecoder, NoisePrior, Pauli,
    PauliString, Preset, SeedCode, SweepConfig, SweepResult, SymplecticMatrix, TnDecoder,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn all_paulis(n: usize) -> impl Iterator<Item = PauliString> {
    (0..4usize.pow(n as u32)).map(move |mut i| {
        let mut ps = Vec::with_capacity(n);
        for _ in 0..n {
            ps.push(Pauli::from_index(i % 4));
            i /= 4;
        }
        PauliString::from_paulis(&ps)
    })
}

fn anticommute(a: &PauliString, b: &PauliString) -> bool {
    (0..a.num_qubits())
        .filter(|&q| !a.get(q).commutes(b.get(q)))
        .count()
        % 2
        == 1
}

fn single_tile(preset: Preset) -> BoundaryOperatorSet {
    generate_operators(&preset.build(0).unwrap()).unwrap()
}

fn seed_validity() -> Outcome {
    let mut out = Vec::new();
    for code in [perfect_513(), steane_713()] {
        SeedCode::new(
            code.name(),
            code.stabilizers().to_vec(),
            code.logical_x().to_vec(),
            code.logical_z().to_vec(),
        )
        .map_err(|e| e.to_string())?;
        let d = all_paulis(code.n_physical())
            .filter(|e| !e.is_identity())
            .filter(|e| code.stabilizers().iter().all(|s| !anticommute(e, s)))
            .filter(|e| {
                code.logical_x()
                    .iter()
                    .chain(code.logical_z())
                    .any(|l| anticommute(e, l))
            })
            .map(|e| e.weight())
            .min()
            .unwrap_or(0);
        ensure(d == 3, format!("{} has distance {d}", code.name()))?;
        out.push(format!("{} d={d}", code.name()));
    }
    Ok(out.join(", "))
}

fn uniformity() -> Outcome {
    let c = perfect_513();
    let three = verify_k_uniform(&c, 3).map_err(|e| e.to_string())?;
    let four = verify_k_uniform(&c, 4).map_err(|e| e.to_string())?;
    ensure(three && !four, format!("3-uniform={three} 4-uniform={four}"))?;
    Ok("3-uniform, not 4-uniform".into())
}

fn push_integrity() -> Outcome {
    let mut sizes = Vec::new();
    for preset in Preset::ALL {
        for layers in 0..=2 {
            let net = preset.build(layers).map_err(|e| e.to_string())?;
            let pushed = batch_push(&net).map_err(|e| e.to_string())?;
            let report = correctness_check(&net, &pushed);
            ensure(report.ok(), format!("{preset} L={layers}: {:?}", report.diagnostics.first()))?;
            let ops = readout(&net, &pushed);
            let problems = ops.validate();
            ensure(problems.is_empty(), format!("{preset} L={layers}: {:?}", problems.first()))?;
            let rank = ops.stabilizer_matrix().rank();
            ensure(
                rank == ops.n - ops.k(),
                format!("{preset} L={layers}: rank {rank} != n-k"),
            )?;
            sizes.push(ops.n.to_string());
        }
    }
    Ok(format!("n = {}", sizes.join("/")))
}

fn single_tile_equivalence() -> Outcome {
    for (preset, seed) in [
        (Preset::MaxRateHappy, perfect_513()),
        (Preset::ZeroRateHappy, perfect_513()),
        (Preset::ZeroRateSteane, steane_713()),
    ] {
        let ops = single_tile(preset);
        let a = SymplecticMatrix::from_rows(ops.stabilizers.clone()).map_err(|e| e.to_string())?;
        let b = SymplecticMatrix::from_rows(seed.stabilizers().to_vec()).map_err(|e| e.to_string())?;
        ensure(
            a.canonical_basis() == b.canonical_basis(),
            format!("{preset}: readout differs from seed"),
        )?;
    }
    Ok("identical reduced stabilizer matrices".into())
}

fn erasure_oracle() -> Outcome {
    let mut patterns = 0;
    for preset in [Preset::MaxRateHappy, Preset::ZeroRateSteane] {
        let ops = single_tile(preset);
        let logicals: Vec<PauliString> = all_paulis(ops.n)
            .filter(|p| ops.stabilizers.iter().all(|s| !anticommute(p, s)))
            .filter(|p| anticommute(p, &ops.logical_x[0]) || anticommute(p, &ops.logical_z[0]))
            .collect();
        for mask in 0..1u64 << ops.n {
            let e = ErasurePattern::from_mask(ops.n, mask);
            let inside = logicals
                .iter()
                .any(|l| (0..ops.n).all(|q| e.is_erased(q) || l.get(q) == Pauli::I));
            let got = erasure_correctable(&ops, &e, &[0]).map_err(|e| e.to_string())?;
            ensure(got == !inside, format!("{preset} mask {mask:b}"))?;
            patterns += 1;
        }
    }
    Ok(format!("{patterns} patterns agree"))
}

fn intopt_optimality() -> Outcome {
    let mut syndromes = 0;
    for preset in [Preset::MaxRateHappy, Preset::ZeroRateSteane] {
        let ops = single_tile(preset);
        let dec = IntOptDecoder::new(&ops, &[0], 26).map_err(|e| e.to_string())?;
        let mut best: HashMap<Vec<bool>, usize> = HashMap::new();
        for e in all_paulis(ops.n) {
            let s = syndrome_of(&ops.stabilizers, &e).unwrap();
            let w = best.entry(s.bits).or_insert(usize::MAX);
            *w = (*w).min(e.weight());
        }
        for (bits, &w) in &best {
            let s = hyperqec::Syndrome { bits: bits.clone() };
            let c = dec.decode(&s).map_err(|e| e.to_string())?;
            ensure(
                syndrome_of(&ops.stabilizers, &c).unwrap() == s,
                format!("{preset}: wrong syndrome"),
            )?;
            ensure(c.weight() == w, format!("{preset}: weight {} > {w}", c.weight()))?;
            syndromes += 1;
        }
        for q in 0..ops.n {
            for p in [Pauli::X, Pauli::Y, Pauli::Z] {
                let e = PauliString::single(ops.n, q, p);
                let c = dec.decode(&syndrome_of(&ops.stabilizers, &e).unwrap()).unwrap();
                ensure(dec.succeeded(&e, &c), format!("{preset}: {e} not corrected"))?;
            }
        }
    }
    Ok(format!("{syndromes} syndromes minimal, weight-1 errors corrected"))
}

fn tn_oracle() -> Outcome {
    let prior = NoisePrior::new(0.13, 0.3, 0.2, 0.5).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for preset in Preset::ALL {
        let net = preset.build(0).unwrap();
        let ops = generate_operators(&net).unwrap();
        let dec = TnDecoder::new(&tn_build(&net).unwrap(), 1 << 24).map_err(|e| e.to_string())?;
        for e in all_paulis(ops.n) {
            let a = dec.coset_distribution(&e, &prior).unwrap().normalized();
            let b = oracle_coset_distribution(&ops, &e, &prior).unwrap().normalized();
            for c in 0..4 {
                let scale = a[c].abs().max(b[c].abs());
                if scale > 0.0 {
                    worst = worst.max((a[c] - b[c]).abs() / scale);
                }
            }
        }
    }
    ensure(worst <= 1e-10, format!("max relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e}"))
}

fn sweep(cfg: &SweepConfig) -> Result<SweepResult, String> {
    run_sweep(cfg).map_err(|e| e.to_string())
}

fn threshold() -> Outcome {
    let res: Vec<SweepResult> = (0..=2)
        .map(|l| sweep(&SweepConfig::pauli(Preset::ZeroRateSteane, l, DecoderKind::TensorNetwork)))
        .collect::<Result<_, _>>()?;
    let c01 = crossing_point(&res[0], &res[1]);
    let c12 = crossing_point(&res[1], &res[2]).ok_or("R=1 and R=2 curves do not cross")?;
    ensure(
        (0.16..=0.20).contains(&c12),
        format!("R=1/R=2 crossing at {c12:.4}"),
    )?;
    Ok(format!(
        "R=1/R=2 crossing at {c12:.4} (R=0/R=1 at {})",
        c01.map_or("none".into(), |c| format!("{c:.4}"))
    ))
}

fn no_threshold() -> Outcome {
    let res: Vec<SweepResult> = (0..=2)
        .map(|l| sweep(&SweepConfig::erasure(Preset::MaxRateHappy, l)))
        .collect::<Result<_, _>>()?;
    let at = |r: &SweepResult, p: f64| r.rate_at(p).ok_or(format!("no row at p={p}"));
    let mut rates = Vec::new();
    for l in 0..2 {
        let (a, b) = (at(&res[l], 0.40)?, at(&res[l + 1], 0.40)?);
        let sigma = a.stderr().hypot(b.stderr());
        ensure(
            a.recovery_rate() - b.recovery_rate() > 3.0 * sigma,
            format!("r(0.40) at R={} is not clearly below R={l}", l + 1),
        )?;
        rates.push(a.recovery_rate());
        // a crossing needs the deeper code to be clearly better somewhere below it
        for row in res[l].rows.iter().filter(|r| r.p < 0.5) {
            let deeper = at(&res[l + 1], row.p)?;
            let sigma = row.stderr().hypot(deeper.stderr());
            ensure(
                deeper.recovery_rate() - row.recovery_rate() <= 3.0 * sigma,
                format!("R={} beats R={l} at p={:.2}", l + 1, row.p),
            )?;
        }
    }
    rates.push(at(&res[2], 0.40)?.recovery_rate());
    Ok(format!(
        "r(0.40) = {:.3} > {:.3} > {:.3}, deeper layers never significantly better",
        rates[0], rates[1], rates[2]
    ))
}

fn scaling() -> Outcome {
    let start = Instant::now();
    let net = Preset::ZeroRateHappy.build(4).map_err(|e| e.to_string())?;
    let ops = generate_operators(&net).map_err(|e| e.to_string())?;
    let generate = start.elapsed();
    ensure(ops.n > 1000, format!("only {} qubits at L=4", ops.n))?;
    ensure(generate < Duration::from_secs(600), "generation over 10 minutes")?;
    let rows = runtime_bench(&BenchConfig {
        presets: Preset::ALL.to_vec(),
        max_layers: 2,
        events: 5,
        ..BenchConfig::default()
    });
    let intopt: Vec<_> = rows.iter().filter(|r| r.stage == "intopt").collect();
    ensure(intopt.len() == 9, format!("{} intopt rows for L <= 2", intopt.len()))?;
    let mut timed = Vec::new();
    for row in &intopt {
        match row.seconds_per_event {
            Some(s) => timed.push(format!("{} L={} {:.1e}s", row.preset, row.layers, s)),
            None if row.layers == 0 => {
                return Err(format!("intopt {} L=0: {}", row.preset, row.note))
            }
            None => ensure(
                row.note.contains("capability"),
                format!("intopt {} L={}: {}", row.preset, row.layers, row.note),
            )?,
        }
    }
    let secs = |preset, layers| {
        intopt
            .iter()
            .find(|r| r.preset == preset && r.layers == layers)
            .and_then(|r| r.seconds_per_event)
    };
    let grows = Preset::ALL.iter().any(|&p| match (secs(p, 0), secs(p, 1)) {
        (Some(a), Some(b)) => b > a,
        _ => false,
    });
    ensure(grows, "no preset shows intopt cost growing from L=0 to L=1")?;
    Ok(format!(
        "zero-happy L=4 n={} in {:.2}s; intopt {}",
        ops.n,
        generate.as_secs_f64(),
        timed.join(", ")
    ))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for (decoder, workers) in [("erasure", 1), ("erasure", 2), ("erasure", 3), ("tn", 1), ("tn", 2)] {
        let out = dir.path().join(format!("{decoder}-{workers}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_hyperqec"))
            .args(["sweep", "--preset", "zero-steane", "--layers", "1"])
            .args(["--decoder", decoder, "--trials", "40", "--seed", "7"])
            .args(["--p-start", "0.1", "--p-end", "0.4", "--p-step", "0.1"])
            .arg("--workers")
            .arg(workers.to_string())
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), String::from_utf8_lossy(&status.stderr))?;
        outputs.push((decoder, std::fs::read(&out).map_err(|e| e.to_string())?));
    }
    for w in outputs.windows(2) {
        if w[0].0 == w[1].0 {
            ensure(w[0].1 == w[1].1, format!("{} output depends on worker count", w[0].0))?;
        }
    }
    Ok("CSV bytes identical across worker counts".into())
}

fn main() {
    let criteria: [(&str, Option<u64>, fn() -> Outcome); 11] = [
        ("seed-code validity", Some(60), seed_validity),
        ("k-uniformity", Some(1), uniformity),
        ("push pipeline integrity", Some(120), push_integrity),
        ("single-tile equivalence", None, single_tile_equivalence),
        ("erasure oracle equivalence", Some(60), erasure_oracle),
        ("min-weight optimality", None, intopt_optimality),
        ("TN decoder oracle equivalence", Some(60), tn_oracle),
        ("threshold reproduction", None, threshold),
        ("no-threshold reproduction", None, no_threshold),
        ("scaling sanity", None, scaling),
        ("determinism", None, determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()))
            .and_then(|detail| match budget {
                Some(s) if start.elapsed() > Duration::from_secs(s) => {
                    Err(format!("{detail}; over the {s}s budget"))
                }
                _ => Ok(detail),
            });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 11 criteria failed");
        std::process::exit(1);
    }
}
