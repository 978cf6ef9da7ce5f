//! Phase-free Pauli operators in binary symplectic form.
//!
//! Qubit `i` of a [`PauliString`] carries `(x_i, z_i)`: `(0,0)=I`, `(1,0)=X`,
//! `(0,1)=Z`, `(1,1)=Y`. Signs and factors of `i` are dropped, so the group
//! product is a bitwise XOR. Text form is an uppercase string over
//! `{I,X,Y,Z}` with qubit 0 leftmost.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{get_bit, set_bit, words_for, xor_into, BitMatrix, TrackedReduction};

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    #[default]
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    #[inline]
    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    #[inline]
    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// Index in the order `I, X, Y, Z`.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    #[inline]
    pub fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i & 3]
    }

    #[inline]
    pub fn mul(self, other: Pauli) -> Pauli {
        Pauli::from_bits(self.x_bit() ^ other.x_bit(), self.z_bit() ^ other.z_bit())
    }

    #[inline]
    pub fn commutes(self, other: Pauli) -> bool {
        !((self.x_bit() & other.z_bit()) ^ (self.z_bit() & other.x_bit()))
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// An `n`-qubit Pauli operator without phase.
///
/// Storage is `[x words | z words]`, each block `ceil(n/64)` words long with
/// unused high bits kept at zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    words: Vec<u64>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliString {
            n,
            words: vec![0; 2 * w],
        }
    }

    /// Operator acting as `p` on qubit `qubit` and identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(qubit, p);
        s
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut s = Self::identity(paulis.len());
        for (i, &p) in paulis.iter().enumerate() {
            s.set(i, p);
        }
        s
    }

    /// Parses the `{I,X,Y,Z}` text form.
    pub fn from_text(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::Parse {
                text: text.to_string(),
                reason: "empty operator".into(),
            });
        }
        let paulis = text
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::Parse {
                    text: text.to_string(),
                    reason: format!("unexpected character {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&paulis))
    }

    pub fn to_text(&self) -> String {
        (0..self.n).map(|i| self.get(i).to_char()).collect()
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn block(&self) -> usize {
        self.words.len() / 2
    }

    #[inline]
    pub fn x_words(&self) -> &[u64] {
        &self.words[..self.block()]
    }

    #[inline]
    pub fn z_words(&self) -> &[u64] {
        &self.words[self.block()..]
    }

    /// Raw `[x | z]` word storage.
    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), 2 * words_for(n));
        PauliString { n, words }
    }

    #[inline]
    pub fn x(&self, i: usize) -> bool {
        get_bit(self.x_words(), i)
    }

    #[inline]
    pub fn z(&self, i: usize) -> bool {
        get_bit(self.z_words(), i)
    }

    #[inline]
    pub fn get(&self, i: usize) -> Pauli {
        Pauli::from_bits(self.x(i), self.z(i))
    }

    pub fn set(&mut self, i: usize, p: Pauli) {
        assert!(i < self.n, "qubit {i} out of range for {} qubits", self.n);
        let b = self.block();
        set_bit(&mut self.words[..b], i, p.x_bit());
        set_bit(&mut self.words[b..], i, p.z_bit());
    }

    pub fn is_identity(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Number of non-identity sites.
    pub fn weight(&self) -> usize {
        self.x_words()
            .iter()
            .zip(self.z_words())
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Qubits on which the operator is not the identity.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.x(i) || self.z(i)).collect()
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(())
    }

    /// Symplectic product is 1 (operators anticommute). No length check.
    #[inline]
    pub(crate) fn anticommutes_raw(&self, other: &PauliString) -> bool {
        let b = self.block();
        let mut acc = 0u32;
        for i in 0..b {
            acc ^= (self.words[i] & other.words[b + i]).count_ones()
                ^ (self.words[b + i] & other.words[i]).count_ones();
        }
        acc & 1 == 1
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(!self.anticommutes_raw(other))
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_raw(other);
        Ok(out)
    }

    #[inline]
    pub(crate) fn mul_assign_raw(&mut self, other: &PauliString) {
        xor_into(&mut self.words, &other.words);
    }

    /// Restriction to `qubits`, in the given order.
    pub fn slice(&self, qubits: &[usize]) -> PauliString {
        let mut out = PauliString::identity(qubits.len());
        for (j, &q) in qubits.iter().enumerate() {
            out.set(j, self.get(q));
        }
        out
    }

    /// Bit at symplectic column `c` (`c < n` is an x column, otherwise z).
    #[inline]
    pub fn symplectic_bit(&self, c: usize) -> bool {
        if c < self.n {
            self.x(c)
        } else {
            self.z(c - self.n)
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.to_text())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PauliString::from_text(s)
    }
}

/// Free-function forms of the group operations.
pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes(b)
}

pub fn multiply(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    a.multiply(b)
}

pub fn weight(a: &PauliString) -> usize {
    a.weight()
}

/// Ordered rows of equal-length Pauli operators, read as a GF(2) matrix with
/// `2n` columns `(x_0..x_{n-1} | z_0..z_{n-1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticMatrix {
    n: usize,
    rows: Vec<PauliString>,
}

/// Output of [`SymplecticMatrix::rref`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: SymplecticMatrix,
    pub rank: usize,
    /// Pivot columns in symplectic numbering, strictly increasing.
    pub pivots: Vec<usize>,
}

impl SymplecticMatrix {
    pub fn new(n: usize, rows: Vec<PauliString>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.num_qubits() != n) {
            return Err(Error::Dimension {
                expected: n,
                actual: bad.num_qubits(),
            });
        }
        Ok(SymplecticMatrix { n, rows })
    }

    /// Builds from a nonempty list, taking `n` from the first row.
    pub fn from_rows(rows: Vec<PauliString>) -> Result<Self> {
        let n = rows.first().map(|r| r.num_qubits()).ok_or(Error::Dimension {
            expected: 1,
            actual: 0,
        })?;
        Self::new(n, rows)
    }

    pub fn parse(rows: &[&str]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| PauliString::from_text(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<PauliString> {
        self.rows
    }

    pub fn push(&mut self, row: PauliString) -> Result<()> {
        if row.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: row.num_qubits(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    fn to_bits(&self) -> BitMatrix {
        let w = words_for(self.n);
        let mut m = BitMatrix::zeros(0, 2 * 64 * w);
        for r in &self.rows {
            m.push_row(r.words());
        }
        m
    }

    /// Maps a bit position of the `[x words | z words]` layout to a
    /// symplectic column index.
    fn bit_to_column(&self, bit: usize) -> usize {
        let half = 64 * words_for(self.n);
        if bit < half {
            bit
        } else {
            self.n + bit - half
        }
    }

    pub fn rref(&self) -> Rref {
        let mut bits = self.to_bits();
        let raw = bits.rref();
        let rank = raw.len();
        let rows = (0..bits.rows())
            .map(|r| PauliString::from_words(self.n, bits.row(r).to_vec()))
            .collect();
        Rref {
            matrix: SymplecticMatrix { n: self.n, rows },
            rank,
            pivots: raw.into_iter().map(|b| self.bit_to_column(b)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows.is_empty() {
            return 0;
        }
        self.to_bits().rref().len()
    }

    /// Nonzero rows of the reduced form; equal for row-equivalent matrices.
    pub fn canonical_basis(&self) -> Vec<PauliString> {
        let r = self.rref();
        r.matrix.rows.into_iter().take(r.rank).collect()
    }

    /// True iff both matrices span the same row space.
    pub fn same_span(&self, other: &SymplecticMatrix) -> bool {
        self.n == other.n && self.canonical_basis() == other.canonical_basis()
    }

    /// Row-space membership.
    pub fn contains(&self, target: &PauliString) -> Result<bool> {
        if target.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: target.num_qubits(),
            });
        }
        if self.rows.is_empty() {
            return Ok(target.is_identity());
        }
        let all: Vec<usize> = (0..self.n).collect();
        Ok(self.solve_combination(target, &all)?.is_some())
    }

    /// `Σ coeffs[i]·row_i`.
    pub fn combine(&self, coeffs: &[bool]) -> PauliString {
        let mut acc = PauliString::identity(self.n);
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c {
                acc.mul_assign_raw(row);
            }
        }
        acc
    }

    /// Finds a combination `c` of rows whose restriction to `frozen` (both x
    /// and z parts) equals the restriction of `target`.
    ///
    /// The returned `c` is the back-substitution solution on the pivot rows
    /// with all free variables zero, so it is fixed by the row order.
    pub fn solve_combination(
        &self,
        target: &PauliString,
        frozen: &[usize],
    ) -> Result<Option<Vec<bool>>> {
        if target.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: target.num_qubits(),
            });
        }
        if let Some(&bad) = frozen.iter().find(|&&q| q >= self.n) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                limit: self.n,
            });
        }
        let solver = RestrictedSolver::new(self, frozen);
        Ok(solver.solve(target))
    }
}

/// Reusable solver for `c · rows|frozen = target|frozen`.
///
/// Built once per `(basis, frozen)` pair; [`RestrictedSolver::solve`] and
/// [`RestrictedSolver::kernel`] are then cheap.
#[derive(Clone, Debug)]
pub struct RestrictedSolver {
    frozen: Vec<usize>,
    rows: usize,
    reduction: TrackedReduction,
}

impl RestrictedSolver {
    pub fn new(basis: &SymplecticMatrix, frozen: &[usize]) -> Self {
        let cols = 2 * frozen.len();
        let mut m = BitMatrix::zeros(basis.len(), cols);
        for (r, row) in basis.rows().iter().enumerate() {
            for (j, &q) in frozen.iter().enumerate() {
                if row.x(q) {
                    m.set(r, 2 * j, true);
                }
                if row.z(q) {
                    m.set(r, 2 * j + 1, true);
                }
            }
        }
        RestrictedSolver {
            frozen: frozen.to_vec(),
            rows: basis.len(),
            reduction: TrackedReduction::new(&m),
        }
    }

    fn restrict(&self, target: &PauliString) -> Vec<u64> {
        let mut t = vec![0u64; words_for(2 * self.frozen.len()).max(1)];
        for (j, &q) in self.frozen.iter().enumerate() {
            if target.x(q) {
                set_bit(&mut t, 2 * j, true);
            }
            if target.z(q) {
                set_bit(&mut t, 2 * j + 1, true);
            }
        }
        t
    }

    pub fn solve(&self, target: &PauliString) -> Option<Vec<bool>> {
        let t = self.restrict(target);
        self.reduction
            .solve(&t)
            .map(|c| (0..self.rows).map(|i| get_bit(&c, i)).collect())
    }

    /// Combinations whose restriction to the frozen qubits is the identity.
    pub fn kernel(&self) -> Vec<Vec<bool>> {
        self.reduction
            .kernel()
            .into_iter()
            .map(|c| (0..self.rows).map(|i| get_bit(&c, i)).collect())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.reduction.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(!commutes(&p("X"), &p("Z")).unwrap());
        assert!(commutes(&p("XIZZY"), &p("XIZZY")).unwrap());
        assert!(commutes(&p("XIIXIXX"), &p("ZIIZIZZ")).unwrap());
        assert!(matches!(
            commutes(&p("XX"), &p("X")),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(multiply(&p("XX"), &p("ZZ")).unwrap(), p("YY"));
        assert_eq!(multiply(&p("IIIII"), &p("XZYIZ")).unwrap(), p("XZYIZ"));
        assert_eq!(multiply(&p("XZ"), &p("XZ")).unwrap(), p("II"));
        assert!(multiply(&p("XZ"), &p("X")).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(weight(&p("IIIII")), 0);
        assert_eq!(weight(&p("XIZZY")), 4);
        assert_eq!(weight(&p("XXXXXXX")), 7);
    }

    #[test]
    fn text_parse_errors() {
        assert!(PauliString::from_text("").is_err());
        assert!(PauliString::from_text("XA").is_err());
        assert!(PauliString::from_text("xz").is_err());
    }

    #[test]
    fn wide_operators_cross_word_boundaries() {
        let n = 130;
        let mut a = PauliString::identity(n);
        a.set(0, Pauli::X);
        a.set(64, Pauli::Y);
        a.set(129, Pauli::Z);
        let b = PauliString::single(n, 129, Pauli::X);
        assert_eq!(a.weight(), 3);
        assert!(!a.commutes(&b).unwrap());
        assert_eq!(PauliString::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn rref_ranks() {
        let steane = SymplecticMatrix::parse(&[
            "XIIXIXX", "IXIXXIX", "IIXIXXX", "ZIIZIZZ", "IZIZZIZ", "IIZIZZZ",
        ])
        .unwrap();
        assert_eq!(steane.rank(), 6);
        let copies = SymplecticMatrix::parse(&["XZ", "XZ", "XZ", "XZ"]).unwrap();
        let r = copies.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        let five = SymplecticMatrix::parse(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap();
        assert_eq!(five.rank(), 4);
    }

    #[test]
    fn pivots_in_symplectic_numbering() {
        let m = SymplecticMatrix::parse(&["ZI", "IX"]).unwrap();
        let r = m.rref();
        // x_1 is column 1, z_0 is column n + 0 = 2
        assert_eq!(r.pivots, vec![1, 2]);
    }

    #[test]
    fn solve_combination_examples() {
        let five = SymplecticMatrix::parse(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap();
        let all: Vec<usize> = (0..5).collect();
        let c = five
            .solve_combination(&PauliString::identity(5), &all)
            .unwrap()
            .unwrap();
        assert!(c.iter().all(|&b| !b));

        let xx = SymplecticMatrix::parse(&["XX"]).unwrap();
        assert!(xx.solve_combination(&p("XZ"), &[0, 1]).unwrap().is_none());
        assert!(xx.solve_combination(&p("XZ"), &[0]).unwrap().is_some());
        assert!(xx.solve_combination(&p("XZ"), &[2]).is_err());
    }

    #[test]
    fn span_membership() {
        let five = SymplecticMatrix::parse(&["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]).unwrap();
        let prod = p("XZZXI").multiply(&p("IXZZX")).unwrap();
        assert!(five.contains(&prod).unwrap());
        assert!(!five.contains(&p("XXXXX")).unwrap());
    }
}
