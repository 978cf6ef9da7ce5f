use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::push::BoundaryOperatorSet;

use super::{CosetDistribution, NoisePrior};

/// Largest code the brute-force decoder accepts.
pub const ORACLE_MAX_QUBITS: usize = 12;

/// Exact class probabilities of logical qubit 0 by enumerating the whole
/// stabilizer group. Other logical qubits are summed over.
pub fn oracle_coset_distribution(
    ops: &BoundaryOperatorSet,
    error: &PauliString,
    prior: &NoisePrior,
) -> Result<CosetDistribution> {
    if ops.n > ORACLE_MAX_QUBITS {
        return Err(Error::Capability(format!(
            "brute-force decoding is limited to {ORACLE_MAX_QUBITS} qubits, code has {}",
            ops.n
        )));
    }
    if error.num_qubits() != ops.n {
        return Err(Error::Dimension {
            expected: ops.n,
            actual: error.num_qubits(),
        });
    }
    let mut gens: Vec<&PauliString> = ops.stabilizers.iter().collect();
    for j in 1..ops.k() {
        gens.push(&ops.logical_x[j]);
        gens.push(&ops.logical_z[j]);
    }
    let (lx, lz) = (&ops.logical_x[0], &ops.logical_z[0]);
    let ly = lx.multiply(lz)?;
    let reps = [PauliString::identity(ops.n), lx.clone(), ly, lz.clone()];

    let mut weights = [0.0; 4];
    for (c, rep) in reps.iter().enumerate() {
        let mut cur = error.multiply(rep)?;
        weights[c] += prior.probability(&cur);
        for i in 1u64..(1u64 << gens.len()) {
            cur.mul_assign_raw(gens[i.trailing_zeros() as usize]);
            weights[c] += prior.probability(&cur);
        }
    }
    Ok(CosetDistribution {
        weights,
        log_scale: 0.0,
    })
}

/// Brute-force maximum-likelihood decision for logical qubit 0.
pub fn oracle_ml_decode(
    ops: &BoundaryOperatorSet,
    error: &PauliString,
    prior: &NoisePrior,
) -> Result<(CosetDistribution, Pauli)> {
    let d = oracle_coset_distribution(ops, error, prior)?;
    Ok((d, d.argmax()))
}
