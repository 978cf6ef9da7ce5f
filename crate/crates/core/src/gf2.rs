//! Dense bit-packed matrices over GF(2).
//!
//! Rows are stored contiguously as `u64` words and all elimination steps are
//! whole-word XORs. This is the workhorse behind span membership, linear
//! solves, kernels and the erasure decoder.

/// Number of 64-bit words needed to hold `bits` bits.
#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[inline]
pub(crate) fn get_bit(words: &[u64], i: usize) -> bool {
    (words[i >> 6] >> (i & 63)) & 1 == 1
}

#[inline]
pub(crate) fn set_bit(words: &mut [u64], i: usize, value: bool) {
    let mask = 1u64 << (i & 63);
    if value {
        words[i >> 6] |= mask;
    } else {
        words[i >> 6] &= !mask;
    }
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

/// Row-major bit matrix with `cols` logical columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols).max(1);
        BitMatrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        get_bit(self.row(r), c)
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        let stride = self.stride;
        set_bit(&mut self.data[r * stride..(r + 1) * stride], c, value);
    }

    pub fn push_row(&mut self, words: &[u64]) {
        debug_assert!(words.len() >= self.stride);
        self.data.extend_from_slice(&words[..self.stride]);
        self.rows += 1;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.data.split_at_mut(hi * s);
        head[lo * s..(lo + 1) * s].swap_with_slice(&mut tail[..s]);
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        if dst < src {
            let (head, tail) = self.data.split_at_mut(src * s);
            xor_into(&mut head[dst * s..(dst + 1) * s], &tail[..s]);
        } else {
            let (head, tail) = self.data.split_at_mut(dst * s);
            xor_into(&mut tail[..s], &head[src * s..(src + 1) * s]);
        }
    }

    pub fn is_zero_row(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    /// Reduced row echelon form over the first `limit` columns, in place.
    ///
    /// Columns are scanned in increasing order; returns the pivot columns.
    /// Columns at or beyond `limit` are carried along but never pivoted on,
    /// which is how combination tracking is done with an augmented identity.
    pub fn rref_limited(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..limit.min(self.cols) {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rref(&mut self) -> Vec<usize> {
        let cols = self.cols;
        self.rref_limited(cols)
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        out
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let mut out = BitMatrix::zeros(self.rows, columns.len());
        for r in 0..self.rows {
            let row = self.row(r);
            for (j, &c) in columns.iter().enumerate() {
                if get_bit(row, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }
}

/// Result of reducing `[A | I]`: every reduced row remembers which original
/// rows were summed to produce it.
#[derive(Clone, Debug)]
pub struct TrackedReduction {
    /// Reduced rows of `A`, pivot rows first.
    pub reduced: BitMatrix,
    /// `combos.row(i)` is the combination of original rows giving `reduced.row(i)`.
    pub combos: BitMatrix,
    pub pivots: Vec<usize>,
}

impl TrackedReduction {
    pub fn new(a: &BitMatrix) -> Self {
        let mut aug = a.hconcat(&BitMatrix::identity(a.rows()));
        let pivots = aug.rref_limited(a.cols());
        let all_a: Vec<usize> = (0..a.cols()).collect();
        let all_i: Vec<usize> = (a.cols()..a.cols() + a.rows()).collect();
        TrackedReduction {
            reduced: aug.select_columns(&all_a),
            combos: aug.select_columns(&all_i),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Finds `c` with `c · A = target` using the pivot rows only (free
    /// variables zero). `target` has `A.cols()` bits.
    pub fn solve(&self, target: &[u64]) -> Option<Vec<u64>> {
        let mut residual = target.to_vec();
        let mut combo = vec![0u64; self.combos.stride];
        for (i, &p) in self.pivots.iter().enumerate() {
            if get_bit(&residual, p) {
                xor_into(&mut residual, self.reduced.row(i));
                xor_into(&mut combo, self.combos.row(i));
            }
        }
        residual.iter().all(|&w| w == 0).then_some(combo)
    }

    /// Basis of `{c : c · A = 0}` (the left kernel).
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        (self.rank()..self.reduced.rows())
            .map(|r| self.combos.row(r).to_vec())
            .collect()
    }
}

/// Right inverse of a full-row-rank matrix: returns `x_i` (each `A.cols()`
/// bits) with `A x_i = e_i`, or `None` if the rows are dependent.
pub fn right_inverse(a: &BitMatrix) -> Option<Vec<Vec<u64>>> {
    let t = TrackedReduction::new(a);
    if t.rank() != a.rows() {
        return None;
    }
    // T A = R, R restricted to pivot columns is the identity, so
    // x_i[pivot_j] = T[j][i] solves R x = T e_i and hence A x = e_i.
    let words = words_for(a.cols()).max(1);
    let sols = (0..a.rows())
        .map(|i| {
            let mut x = vec![0u64; words];
            for (j, &p) in t.pivots.iter().enumerate() {
                if t.combos.get(j, i) {
                    set_bit(&mut x, p, true);
                }
            }
            x
        })
        .collect();
    Some(sols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&str]) -> BitMatrix {
        let cols = rows[0].len();
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (r, s) in rows.iter().enumerate() {
            for (c, ch) in s.chars().enumerate() {
                m.set(r, c, ch == '1');
            }
        }
        m
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = from_rows(&["1100", "0110", "1010", "0000"]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rref_pivots_are_increasing() {
        let mut m = from_rows(&["0011", "0110", "1111"]);
        let pivots = m.rref();
        assert_eq!(pivots, vec![0, 1, 2]);
        for (i, &p) in pivots.iter().enumerate() {
            for r in 0..m.rows() {
                assert_eq!(m.get(r, p), r == i);
            }
        }
    }

    #[test]
    fn tracked_solve_and_kernel() {
        let a = from_rows(&["110", "011", "101"]);
        let t = TrackedReduction::new(&a);
        assert_eq!(t.rank(), 2);
        let kernel = t.kernel();
        assert_eq!(kernel.len(), 1);
        // all three rows sum to zero
        assert_eq!(kernel[0][0] & 0b111, 0b111);
        let target = {
            let mut w = vec![0u64];
            set_bit(&mut w, 0, true);
            set_bit(&mut w, 2, true);
            w
        };
        let c = t.solve(&target).unwrap();
        let mut acc = vec![0u64];
        for r in 0..3 {
            if get_bit(&c, r) {
                xor_into(&mut acc, a.row(r));
            }
        }
        assert_eq!(acc, target);
    }

    #[test]
    fn right_inverse_gives_unit_vectors() {
        let a = from_rows(&["1101", "0111"]);
        let x = right_inverse(&a).unwrap();
        for (i, xi) in x.iter().enumerate() {
            for r in 0..2 {
                let dot = (a.row(r)[0] & xi[0]).count_ones() % 2 == 1;
                assert_eq!(dot, r == i);
            }
        }
        assert!(right_inverse(&from_rows(&["11", "11"])).is_none());
    }
}
