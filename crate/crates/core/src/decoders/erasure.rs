use crate::error::{Error, Result};
use crate::pauli::{PauliString, RestrictedSolver, SymplecticMatrix};
use crate::push::BoundaryOperatorSet;

use super::ErasurePattern;

/// Gaussian-elimination erasure decoder for a fixed code.
///
/// A targeted logical survives an erasure if some stabilizer agrees with it
/// on every erased qubit, so that their product avoids the erasure.
#[derive(Clone, Debug)]
pub struct ErasureDecoder {
    stabilizers: SymplecticMatrix,
    logicals: Vec<PauliString>,
}

impl ErasureDecoder {
    /// `targets` are bulk logical indices; both X and Z of each are checked.
    pub fn new(ops: &BoundaryOperatorSet, targets: &[usize]) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Config("no logical qubits targeted".into()));
        }
        let mut logicals = Vec::new();
        for &j in targets {
            if j >= ops.k() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    limit: ops.k(),
                });
            }
            logicals.push(ops.logical_x[j].clone());
            logicals.push(ops.logical_z[j].clone());
        }
        Ok(ErasureDecoder {
            stabilizers: ops.stabilizer_matrix(),
            logicals,
        })
    }

    pub fn correctable(&self, e: &ErasurePattern) -> Result<bool> {
        let n = self.stabilizers.num_qubits();
        if e.n() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: e.n(),
            });
        }
        let erased = e.erased_qubits();
        let untouched = |l: &PauliString| erased.iter().all(|&q| l.get(q) == crate::Pauli::I);
        if self.logicals.iter().all(untouched) {
            return Ok(true);
        }
        let solver = RestrictedSolver::new(&self.stabilizers, &erased);
        Ok(self.logicals.iter().all(|l| solver.solve(l).is_some()))
    }
}

/// One-shot form of [`ErasureDecoder::correctable`].
pub fn erasure_correctable(
    ops: &BoundaryOperatorSet,
    e: &ErasurePattern,
    targets: &[usize],
) -> Result<bool> {
    ErasureDecoder::new(ops, targets)?.correctable(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::push::generate_operators;
    use crate::tiling::setup_max_rate_happy;

    #[test]
    fn perfect_code_small_and_full_erasures() {
        let ops = generate_operators(&setup_max_rate_happy(0).unwrap()).unwrap();
        let dec = ErasureDecoder::new(&ops, &[0]).unwrap();
        assert!(dec.correctable(&ErasurePattern::none(5)).unwrap());
        for mask in 0u64..32 {
            let e = ErasurePattern::from_mask(5, mask);
            if e.count() <= 2 {
                assert!(dec.correctable(&e).unwrap(), "mask {mask:05b}");
            }
        }
        assert!(!dec.correctable(&ErasurePattern::from_mask(5, 31)).unwrap());
        assert!(dec.correctable(&ErasurePattern::none(4)).is_err());
    }
}
