//! Noise models, syndromes and the three decoders.

mod erasure;
mod intopt;
mod oracle;
mod tn;

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

pub use erasure::{erasure_correctable, ErasureDecoder};
pub use intopt::{destabilizers, int_opt_decode, IntOptDecoder, DEFAULT_GENERATOR_LIMIT};
pub use oracle::{oracle_coset_distribution, oracle_ml_decode, ORACLE_MAX_QUBITS};
pub use tn::{
    tn_build, tn_decode, IndicatorNetwork, IndicatorTensor, TnDecoder, DEFAULT_MEMORY_BUDGET,
};

/// Set of erased qubits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ErasurePattern {
    erased: Vec<bool>,
}

impl ErasurePattern {
    pub fn new(erased: Vec<bool>) -> Self {
        ErasurePattern { erased }
    }

    pub fn none(n: usize) -> Self {
        ErasurePattern::new(vec![false; n])
    }

    /// Pattern from the low `n` bits of `mask`, bit `i` = qubit `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        ErasurePattern::new((0..n).map(|i| (mask >> i) & 1 == 1).collect())
    }

    pub fn n(&self) -> usize {
        self.erased.len()
    }

    pub fn is_erased(&self, q: usize) -> bool {
        self.erased[q]
    }

    pub fn count(&self) -> usize {
        self.erased.iter().filter(|&&e| e).count()
    }

    pub fn erased_qubits(&self) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.erased[q]).collect()
    }

    pub fn bits(&self) -> &[bool] {
        &self.erased
    }
}

/// Erases each of `n` qubits independently with probability `p`.
pub fn sample_erasure<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> ErasurePattern {
    ErasurePattern::new((0..n).map(|_| rng.gen::<f64>() < p).collect())
}

/// Single-qubit Pauli channel: an error occurs with probability `p` and is
/// X, Y or Z in proportions `rx : ry : rz`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoisePrior {
    p: f64,
    rx: f64,
    ry: f64,
    rz: f64,
}

impl NoisePrior {
    pub fn new(p: f64, rx: f64, ry: f64, rz: f64) -> Result<Self> {
        let valid = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !valid(p) || !valid(rx) || !valid(ry) || !valid(rz) {
            return Err(Error::Config(format!(
                "noise parameters must lie in [0, 1] (p={p}, rx={rx}, ry={ry}, rz={rz})"
            )));
        }
        if (rx + ry + rz - 1.0).abs() > 1e-6 {
            return Err(Error::Config(format!(
                "rx + ry + rz must be 1, got {}",
                rx + ry + rz
            )));
        }
        Ok(NoisePrior { p, rx, ry, rz })
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        Self::new(p, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn proportions(&self) -> (f64, f64, f64) {
        (self.rx, self.ry, self.rz)
    }

    /// Probabilities of I, X, Y, Z on one qubit.
    pub fn probs(&self) -> [f64; 4] {
        [
            1.0 - self.p,
            self.p * self.rx,
            self.p * self.ry,
            self.p * self.rz,
        ]
    }

    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> PauliString {
        let mut e = PauliString::identity(n);
        let (px, py) = (self.p * self.rx, self.p * (self.rx + self.ry));
        for q in 0..n {
            let u: f64 = rng.gen();
            if u < self.p {
                e.set(
                    q,
                    if u < px {
                        Pauli::X
                    } else if u < py {
                        Pauli::Y
                    } else {
                        Pauli::Z
                    },
                );
            }
        }
        e
    }

    /// Probability of the full operator `e` under independent noise.
    pub fn probability(&self, e: &PauliString) -> f64 {
        let probs = self.probs();
        (0..e.num_qubits()).map(|q| probs[e.get(q).index()]).product()
    }
}

/// One bit per stabilizer generator; set where the error anticommutes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub bits: Vec<bool>,
}

impl Syndrome {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }
}

pub fn syndrome_of(stabilizers: &[PauliString], error: &PauliString) -> Result<Syndrome> {
    let bits = stabilizers
        .iter()
        .map(|s| s.commutes(error).map(|c| !c))
        .collect::<Result<Vec<_>>>()?;
    Ok(Syndrome { bits })
}

/// Unnormalized weights of the four logical classes `Ī, X̄, Ȳ, Z̄` of the
/// decoded logical qubit, relative to the sampled error.
///
/// The actual values are `weights[c] * exp(log_scale)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CosetDistribution {
    pub weights: [f64; 4],
    pub log_scale: f64,
}

impl CosetDistribution {
    pub fn value(&self, class: Pauli) -> f64 {
        self.weights[class.index()] * self.log_scale.exp()
    }

    /// Normalized to sum to one.
    pub fn normalized(&self) -> [f64; 4] {
        let total: f64 = self.weights.iter().sum();
        if total > 0.0 {
            self.weights.map(|w| w / total)
        } else {
            [0.0; 4]
        }
    }

    /// Most likely class; ties go to the earlier of `I, X, Y, Z`.
    pub fn argmax(&self) -> Pauli {
        let mut best = 0;
        for c in 1..4 {
            if self.weights[c] > self.weights[best] {
                best = c;
            }
        }
        Pauli::from_index(best)
    }
}

impl fmt::Display for CosetDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.normalized();
        write!(
            f,
            "I={:.6} X={:.6} Y={:.6} Z={:.6}",
            w[0], w[1], w[2], w[3]
        )
    }
}
