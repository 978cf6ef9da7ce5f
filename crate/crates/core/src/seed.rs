//! Seed codes: small stabilizer codes used as tensors of the network.
//!
//! A seed `[[n, k]]` code is read as an `m = n + k` leg tensor. Legs
//! `0..n` are the physical (planar) legs in the listed qubit order and legs
//! `n..n+k` carry the logical qubits.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, SymplecticMatrix};

/// Eigenbasis used to fix a logical leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixBasis {
    /// `|0>` of the logical qubit; adds `Z̄` as a stabilizer.
    Z,
    /// `|+>` of the logical qubit; adds `X̄` as a stabilizer.
    X,
}

impl FixBasis {
    pub fn pauli(self) -> Pauli {
        match self {
            FixBasis::Z => Pauli::Z,
            FixBasis::X => Pauli::X,
        }
    }
}

impl fmt::Display for FixBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixBasis::Z => "Z",
            FixBasis::X => "X",
        })
    }
}

impl FromStr for FixBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(FixBasis::Z),
            "X" | "x" => Ok(FixBasis::X),
            other => Err(Error::Config(format!("unknown fix basis {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedCode {
    name: String,
    n_physical: usize,
    k_logical: usize,
    stabilizers: Vec<PauliString>,
    logical_x: Vec<PauliString>,
    logical_z: Vec<PauliString>,
}

impl SeedCode {
    /// Validated constructor.
    ///
    /// Requires `n - k` independent, pairwise commuting stabilizers and
    /// logical pairs that commute with the stabilizers and satisfy the
    /// canonical (anti)commutation pattern.
    pub fn new(
        name: impl Into<String>,
        stabilizers: Vec<PauliString>,
        logical_x: Vec<PauliString>,
        logical_z: Vec<PauliString>,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: String| Error::InvalidSeed {
            name: name.clone(),
            reason,
        };
        let n = stabilizers
            .first()
            .or(logical_x.first())
            .map(PauliString::num_qubits)
            .ok_or_else(|| invalid("no operators given".into()))?;
        if n == 0 {
            return Err(invalid("zero qubits".into()));
        }
        if logical_x.len() != logical_z.len() {
            return Err(invalid(format!(
                "{} logical X but {} logical Z operators",
                logical_x.len(),
                logical_z.len()
            )));
        }
        let k = logical_x.len();
        for op in stabilizers.iter().chain(&logical_x).chain(&logical_z) {
            if op.num_qubits() != n {
                return Err(invalid(format!(
                    "operator {op} has {} qubits, expected {n}",
                    op.num_qubits()
                )));
            }
        }
        if k > n || stabilizers.len() != n - k {
            return Err(invalid(format!(
                "expected {} stabilizers for n={n}, k={k}, got {}",
                n.saturating_sub(k),
                stabilizers.len()
            )));
        }
        if !stabilizers.is_empty() {
            let rank = SymplecticMatrix::new(n, stabilizers.clone())?.rank();
            if rank != stabilizers.len() {
                return Err(invalid(format!(
                    "stabilizers are dependent (rank {rank} of {})",
                    stabilizers.len()
                )));
            }
        }
        for (i, a) in stabilizers.iter().enumerate() {
            for b in &stabilizers[i + 1..] {
                if a.anticommutes_raw(b) {
                    return Err(invalid(format!("stabilizers {a} and {b} anticommute")));
                }
            }
            for l in logical_x.iter().chain(&logical_z) {
                if a.anticommutes_raw(l) {
                    return Err(invalid(format!("logical {l} anticommutes with stabilizer {a}")));
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                if logical_x[i].anticommutes_raw(&logical_z[j]) != (i == j) {
                    return Err(invalid(format!(
                        "logical X{i} / Z{j} have the wrong commutation relation"
                    )));
                }
                if i < j
                    && (logical_x[i].anticommutes_raw(&logical_x[j])
                        || logical_z[i].anticommutes_raw(&logical_z[j]))
                {
                    return Err(invalid(format!("logicals {i} and {j} anticommute")));
                }
            }
        }
        Ok(SeedCode {
            name,
            n_physical: n,
            k_logical: k,
            stabilizers,
            logical_x,
            logical_z,
        })
    }

    pub fn from_text(
        name: &str,
        stabilizers: &[&str],
        logical_x: &[&str],
        logical_z: &[&str],
    ) -> Result<Self> {
        let parse = |v: &[&str]| {
            v.iter()
                .map(|s| PauliString::from_text(s))
                .collect::<Result<Vec<_>>>()
        };
        Self::new(name, parse(stabilizers)?, parse(logical_x)?, parse(logical_z)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n_physical(&self) -> usize {
        self.n_physical
    }

    pub fn k_logical(&self) -> usize {
        self.k_logical
    }

    /// Total leg count `n + k`.
    pub fn legs(&self) -> usize {
        self.n_physical + self.k_logical
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn logical_x(&self) -> &[PauliString] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliString] {
        &self.logical_z
    }

    /// Seed-code definition text: `STAB`, `LOGX` and `LOGZ` lines.
    ///
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse_definition(name: &str, text: &str) -> Result<Self> {
        let mut stabs = Vec::new();
        let mut lx = Vec::new();
        let mut lz = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(kind), Some(op), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::InvalidSeed {
                    name: name.into(),
                    reason: format!("line {}: expected `<KIND> <operator>`", lineno + 1),
                });
            };
            let op = PauliString::from_text(op)?;
            match kind {
                "STAB" => stabs.push(op),
                "LOGX" => lx.push(op),
                "LOGZ" => lz.push(op),
                other => {
                    return Err(Error::InvalidSeed {
                        name: name.into(),
                        reason: format!("line {}: unknown record {other:?}", lineno + 1),
                    })
                }
            }
        }
        Self::new(name, stabs, lx, lz)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "custom".into());
        Self::parse_definition(&name, &text)
    }

    pub fn to_definition(&self) -> String {
        let mut out = String::new();
        for s in &self.stabilizers {
            out.push_str(&format!("STAB {s}\n"));
        }
        for l in &self.logical_x {
            out.push_str(&format!("LOGX {l}\n"));
        }
        for l in &self.logical_z {
            out.push_str(&format!("LOGZ {l}\n"));
        }
        out
    }

    /// Looks up a built-in seed by name.
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "perfect_513" => Ok(perfect_513()),
            "steane_713" => Ok(steane_713()),
            "steane_octagon" => Ok(steane_octagon()),
            other => Err(Error::InvalidSeed {
                name: other.into(),
                reason: "not in the built-in catalog".into(),
            }),
        }
    }
}

/// Names accepted by [`SeedCode::by_name`].
pub const CATALOG: &[&str] = &["perfect_513", "steane_713", "steane_octagon"];

/// The perfect `[[5,1,3]]` code.
pub fn perfect_513() -> SeedCode {
    SeedCode::from_text(
        "perfect_513",
        &["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
        &["XXXXX"],
        &["ZZZZZ"],
    )
    .expect("built-in seed is valid")
}

/// The Steane `[[7,1,3]]` code.
pub fn steane_713() -> SeedCode {
    SeedCode::from_text(
        "steane_713",
        &["XIIXIXX", "IXIXXIX", "IIXIXXX", "ZIIZIZZ", "IZIZZIZ", "IIZIZZZ"],
        &["XXXXXXX"],
        &["ZZZZZZZ"],
    )
    .expect("built-in seed is valid")
}

/// The 8-leg Steane tensor with its logical leg laid in the plane: an
/// `[[8,0]]` stabilizer state whose stabilizers are the generators of
/// [`tensor_group`] of [`steane_713`].
pub fn steane_octagon() -> SeedCode {
    let group = tensor_group(&steane_713()).expect("built-in seed is valid");
    SeedCode::new("steane_octagon", group.generators.into_rows(), vec![], vec![])
        .expect("tensor group of a valid seed is a valid [[8,0]] code")
}

/// Stabilizer group of the `m`-leg tensor of a seed code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorStabilizerGroup {
    pub m: usize,
    /// Stabilizers extended by identity on the logical legs, followed by
    /// `X̄_j ⊗ X_{n+j}` and `Z̄_j ⊗ Z_{n+j}` for each logical qubit `j`.
    pub generators: SymplecticMatrix,
}

impl TensorStabilizerGroup {
    /// All `2^m` group elements, in Gray-code order starting at identity.
    pub fn elements(&self) -> Vec<PauliString> {
        let gens = self.generators.rows();
        let mut cur = PauliString::identity(self.m);
        let mut out = Vec::with_capacity(1 << gens.len());
        out.push(cur.clone());
        for i in 1u64..(1u64 << gens.len()) {
            cur.mul_assign_raw(&gens[i.trailing_zeros() as usize]);
            out.push(cur.clone());
        }
        out
    }
}

fn extend(op: &PauliString, m: usize, extra: Option<(usize, Pauli)>) -> PauliString {
    let mut out = PauliString::identity(m);
    for q in 0..op.num_qubits() {
        out.set(q, op.get(q));
    }
    if let Some((leg, p)) = extra {
        out.set(leg, p);
    }
    out
}

/// Generators of the tensor's stabilizer group on all `n + k` legs.
///
/// Seeds are validated on construction, so this only fails on internal
/// dimension errors.
pub fn tensor_group(seed: &SeedCode) -> Result<TensorStabilizerGroup> {
    let n = seed.n_physical;
    let m = seed.legs();
    let mut rows: Vec<PauliString> = seed.stabilizers.iter().map(|s| extend(s, m, None)).collect();
    for j in 0..seed.k_logical {
        rows.push(extend(&seed.logical_x[j], m, Some((n + j, Pauli::X))));
        rows.push(extend(&seed.logical_z[j], m, Some((n + j, Pauli::Z))));
    }
    Ok(TensorStabilizerGroup {
        m,
        generators: SymplecticMatrix::new(m, rows)?,
    })
}

/// Projects logical qubit `logical_index` onto a stabilizer eigenstate.
///
/// The fixed logical operator joins the stabilizers and the leg is removed,
/// so the result has one logical qubit and one leg fewer.
pub fn fix_leg(seed: &SeedCode, logical_index: usize, basis: FixBasis) -> Result<SeedCode> {
    if logical_index >= seed.k_logical {
        return Err(Error::IndexOutOfRange {
            index: logical_index,
            limit: seed.k_logical,
        });
    }
    let mut stabs = seed.stabilizers.clone();
    stabs.push(match basis {
        FixBasis::Z => seed.logical_z[logical_index].clone(),
        FixBasis::X => seed.logical_x[logical_index].clone(),
    });
    let keep = |v: &[PauliString]| {
        v.iter()
            .enumerate()
            .filter(|&(i, _)| i != logical_index)
            .map(|(_, p)| p.clone())
            .collect::<Vec<_>>()
    };
    SeedCode::new(
        format!("{}+fix{basis}{logical_index}", seed.name),
        stabs,
        keep(&seed.logical_x),
        keep(&seed.logical_z),
    )
}

/// Largest leg count accepted by [`verify_k_uniform`].
pub const MAX_UNIFORMITY_LEGS: usize = 14;

/// True iff every reduction of the tensor state to at most `k` legs is
/// maximally mixed.
///
/// For a stabilizer state the reduction to `s` is maximally mixed exactly
/// when no nonidentity group element is supported inside `s`, so this is the
/// same as every nonidentity element having weight greater than `k`.
pub fn verify_k_uniform(seed: &SeedCode, k: usize) -> Result<bool> {
    let m = seed.legs();
    if m > MAX_UNIFORMITY_LEGS {
        return Err(Error::Capability(format!(
            "k-uniformity check enumerates 2^{m} elements; limit is {MAX_UNIFORMITY_LEGS} legs"
        )));
    }
    let group = tensor_group(seed)?;
    Ok(group
        .elements()
        .iter()
        .skip(1)
        .all(|g| g.weight() > k))
}
