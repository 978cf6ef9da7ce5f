use crate::error::{Error, Result};
use crate::gf2::{get_bit, right_inverse, BitMatrix};
use crate::pauli::PauliString;
use crate::push::BoundaryOperatorSet;

use super::Syndrome;

/// Largest number of search generators [`IntOptDecoder`] accepts by default.
pub const DEFAULT_GENERATOR_LIMIT: usize = 26;

/// Pure errors: `D[i]` anticommutes with stabilizer `i` and commutes with
/// every other stabilizer.
pub fn destabilizers(stabilizers: &[PauliString]) -> Result<Vec<PauliString>> {
    let Some(first) = stabilizers.first() else {
        return Ok(Vec::new());
    };
    let n = first.num_qubits();
    // row j = (z | x) of S_j, so that A·(x | z)ᵀ is the symplectic product
    let mut a = BitMatrix::zeros(stabilizers.len(), 2 * n);
    for (j, s) in stabilizers.iter().enumerate() {
        if s.num_qubits() != n {
            return Err(Error::Dimension {
                expected: n,
                actual: s.num_qubits(),
            });
        }
        for q in 0..n {
            a.set(j, q, s.z(q));
            a.set(j, n + q, s.x(q));
        }
    }
    let sols = right_inverse(&a).ok_or_else(|| Error::Rank {
        rank: a.rank(),
        count: stabilizers.len(),
    })?;
    Ok(sols
        .into_iter()
        .map(|v| {
            let mut d = PauliString::identity(n);
            for q in 0..n {
                let (x, z) = (get_bit(&v, q), get_bit(&v, n + q));
                d.set(q, crate::Pauli::from_bits(x, z));
            }
            d
        })
        .collect())
}

/// Minimum-weight decoder by exhaustive search over the group generated by
/// the stabilizers and the targeted logical operators.
#[derive(Clone, Debug)]
pub struct IntOptDecoder {
    n: usize,
    destabilizers: Vec<PauliString>,
    generators: Vec<PauliString>,
    targeted: Vec<PauliString>,
    stabilizer_count: usize,
}

impl IntOptDecoder {
    pub fn new(ops: &BoundaryOperatorSet, targets: &[usize], limit: usize) -> Result<Self> {
        let mut targeted = Vec::new();
        for &j in targets {
            if j >= ops.k() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    limit: ops.k(),
                });
            }
            targeted.push(ops.logical_x[j].clone());
            targeted.push(ops.logical_z[j].clone());
        }
        let generators: Vec<PauliString> =
            ops.stabilizers.iter().chain(&targeted).cloned().collect();
        if generators.len() > limit.min(63) {
            return Err(Error::Capability(format!(
                "minimum-weight search over {} generators exceeds the limit of {}",
                generators.len(),
                limit.min(63)
            )));
        }
        Ok(IntOptDecoder {
            n: ops.n,
            destabilizers: destabilizers(&ops.stabilizers)?,
            stabilizer_count: ops.stabilizers.len(),
            generators,
            targeted,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// `Π D_i^{s_i}`: some error with the given syndrome.
    pub fn pure_error(&self, s: &Syndrome) -> Result<PauliString> {
        if s.len() != self.stabilizer_count {
            return Err(Error::Dimension {
                expected: self.stabilizer_count,
                actual: s.len(),
            });
        }
        let mut e = PauliString::identity(self.n);
        for (d, &bit) in self.destabilizers.iter().zip(&s.bits) {
            if bit {
                e.mul_assign_raw(d);
            }
        }
        Ok(e)
    }

    /// Lowest-weight operator with syndrome `s`. Among equal weights the
    /// lexicographically least generator-coefficient vector wins, with the
    /// first generator most significant.
    pub fn decode(&self, s: &Syndrome) -> Result<PauliString> {
        let base = self.pure_error(s)?;
        let g = self.generators.len();
        let stride = base.words().len();
        let half = stride / 2;
        let gens: Vec<u64> = self
            .generators
            .iter()
            .flat_map(|p| p.words().iter().copied())
            .collect();
        let mut cur = base.words().to_vec();
        let weight = |w: &[u64]| -> u32 {
            (0..half).map(|i| (w[i] | w[half + i]).count_ones()).sum()
        };
        let key = |mask: u64| if g == 0 { 0 } else { mask.reverse_bits() >> (64 - g) };
        let mut best_w = weight(&cur);
        let mut best_mask = 0u64;
        let mut mask = 0u64;
        for i in 1u64..(1u64 << g) {
            let j = i.trailing_zeros() as usize;
            mask ^= 1 << j;
            for (c, v) in cur.iter_mut().zip(&gens[j * stride..(j + 1) * stride]) {
                *c ^= v;
            }
            let w = weight(&cur);
            if w < best_w || (w == best_w && key(mask) < key(best_mask)) {
                best_w = w;
                best_mask = mask;
            }
        }
        let mut out = base;
        for j in 0..g {
            if (best_mask >> j) & 1 == 1 {
                out.mul_assign_raw(&self.generators[j]);
            }
        }
        Ok(out)
    }

    /// True iff `correction · error` acts trivially on the targeted
    /// logical qubits. The product always has trivial syndrome, so this is
    /// stabilizer-group membership when every logical qubit is targeted.
    pub fn succeeded(&self, error: &PauliString, correction: &PauliString) -> bool {
        let mut residual = error.clone();
        residual.mul_assign_raw(correction);
        !self.targeted.iter().any(|l| residual.anticommutes_raw(l))
    }
}

/// Decodes the central logical qubit with the default generator limit.
pub fn int_opt_decode(ops: &BoundaryOperatorSet, s: &Syndrome) -> Result<PauliString> {
    IntOptDecoder::new(ops, &[0], DEFAULT_GENERATOR_LIMIT)?.decode(s)
}
