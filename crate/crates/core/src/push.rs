//! Operator pushing: every locally defined stabilizer and logical operator is
//! carried outward from its tensor until it only acts on dangling legs.
//!
//! Tensors are activated in id order, which is center-to-boundary and
//! counterclockwise within a layer. When a tensor is activated, its legs to
//! lower-numbered tensors are blocked: operators it defines are identity
//! there, and operators arriving from outside are never pushed back inward.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString, RestrictedSolver, SymplecticMatrix};
use crate::tiling::{LegKind, LegRef, Tensor, TensorNetwork};

/// Stabilizer group of a placed tensor on all of its legs.
///
/// Like [`crate::seed::tensor_group`], except that for a fixed logical leg
/// only the generator matching the fixed basis is kept, so that leg only
/// ever carries the identity or the fixed-basis operator.
pub fn leg_group(t: &Tensor) -> SymplecticMatrix {
    let seed = &t.seed;
    let n = seed.n_physical();
    let m = seed.legs();
    let embed = |op: &PauliString, extra: Option<(usize, Pauli)>| {
        let mut out = PauliString::identity(m);
        for q in 0..n {
            out.set(q, op.get(q));
        }
        if let Some((leg, p)) = extra {
            out.set(leg, p);
        }
        out
    };
    let mut rows: Vec<PauliString> = seed.stabilizers().iter().map(|s| embed(s, None)).collect();
    for j in 0..seed.k_logical() {
        let leg = n + j;
        let (lx, lz) = (&seed.logical_x()[j], &seed.logical_z()[j]);
        match t.legs[leg].kind {
            LegKind::Fixed(basis) => match basis.pauli() {
                Pauli::X => rows.push(embed(lx, Some((leg, Pauli::X)))),
                _ => rows.push(embed(lz, Some((leg, Pauli::Z)))),
            },
            _ => {
                rows.push(embed(lx, Some((leg, Pauli::X))));
                rows.push(embed(lz, Some((leg, Pauli::Z))));
            }
        }
    }
    SymplecticMatrix::new(m, rows).expect("rows built with m legs")
}

/// Finds a group element of `t` that matches `constraint` on the listed legs.
///
/// Unlisted legs are free. Returns `None` if no element fits.
pub fn push_through_tensor(t: &Tensor, constraint: &[(usize, Pauli)]) -> Option<PauliString> {
    let group = leg_group(t);
    let legs: Vec<usize> = constraint.iter().map(|&(l, _)| l).collect();
    let mut target = PauliString::identity(group.num_qubits());
    for &(l, p) in constraint {
        target.set(l, p);
    }
    let solver = RestrictedSolver::new(&group, &legs);
    solver.solve(&target).map(|c| group.combine(&c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorTag {
    Stabilizer(usize),
    /// Logical X of the tensor's `j`-th logical leg.
    LogicalX(usize),
    LogicalZ(usize),
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorTag::Stabilizer(i) => write!(f, "S{i}"),
            OperatorTag::LogicalX(j) => write!(f, "X{j}"),
            OperatorTag::LogicalZ(j) => write!(f, "Z{j}"),
        }
    }
}

/// One operator after pushing: the assignment on every tensor it reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushedOperator {
    pub tensor: usize,
    pub tag: OperatorTag,
    /// Tensor id to the operator on that tensor's legs. Tensors that are
    /// absent carry the identity.
    pub assignment: BTreeMap<usize, PauliString>,
}

impl PushedOperator {
    pub fn on_leg(&self, r: LegRef) -> Pauli {
        self.assignment
            .get(&r.tensor)
            .map(|a| a.get(r.leg))
            .unwrap_or(Pauli::I)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PushResult {
    pub operators: Vec<PushedOperator>,
}

impl PushResult {
    /// Boundary operator of every pushed operator, keyed by source tensor and tag.
    pub fn boundary_map(&self, net: &TensorNetwork) -> BTreeMap<(usize, OperatorTag), PauliString> {
        self.operators
            .iter()
            .map(|op| ((op.tensor, op.tag), boundary_string(net, op)))
            .collect()
    }
}

fn boundary_string(net: &TensorNetwork, op: &PushedOperator) -> PauliString {
    let order = net.boundary_order();
    let mut out = PauliString::identity(order.len());
    for (q, r) in order.iter().enumerate() {
        out.set(q, op.on_leg(*r));
    }
    out
}

struct TileSolver {
    group: SymplecticMatrix,
    solver: RestrictedSolver,
    /// Legs to lower-numbered tensors.
    blocked: Vec<usize>,
    /// Open logical legs.
    logical: Vec<usize>,
}

impl TileSolver {
    fn new(t: &Tensor) -> Self {
        let mut blocked = Vec::new();
        let mut logical = Vec::new();
        for leg in &t.legs {
            match leg.kind {
                LegKind::Contracted(peer) if peer.tensor < t.id => blocked.push(leg.index),
                LegKind::Logical(_) => logical.push(leg.index),
                _ => {}
            }
        }
        let frozen: Vec<usize> = blocked.iter().chain(&logical).copied().collect();
        let group = leg_group(t);
        let solver = RestrictedSolver::new(&group, &frozen);
        TileSolver {
            group,
            solver,
            blocked,
            logical,
        }
    }
}

/// Pushes every local generator of every tensor to the boundary.
///
/// Local stabilizers of a tensor are a basis of its group elements that are
/// identity on its blocked and open logical legs; each open logical leg also
/// contributes its X and Z operators.
pub fn batch_push(net: &TensorNetwork) -> Result<PushResult> {
    let solvers: Vec<TileSolver> = net.tensors.iter().map(TileSolver::new).collect();
    let mut operators = Vec::new();
    for t in &net.tensors {
        let ts = &solvers[t.id];
        let mut local: Vec<(OperatorTag, PauliString)> = ts
            .solver
            .kernel()
            .iter()
            .enumerate()
            .map(|(i, c)| (OperatorTag::Stabilizer(i), ts.group.combine(c)))
            .collect();
        let n = t.seed.n_physical();
        for &leg in &ts.logical {
            let j = leg - n;
            for (tag, p) in [(OperatorTag::LogicalX(j), Pauli::X), (OperatorTag::LogicalZ(j), Pauli::Z)] {
                let target = PauliString::single(t.legs.len(), leg, p);
                let c = ts.solver.solve(&target).ok_or_else(|| Error::Integrity {
                    tensor: t.id,
                    tag: tag.to_string(),
                    reason: "logical leg cannot be isolated from blocked legs".into(),
                })?;
                local.push((tag, ts.group.combine(&c)));
            }
        }
        for (tag, op) in local {
            operators.push(push_operator(net, &solvers, t.id, tag, op)?);
        }
    }
    Ok(PushResult { operators })
}

fn push_operator(
    net: &TensorNetwork,
    solvers: &[TileSolver],
    source: usize,
    tag: OperatorTag,
    op: PauliString,
) -> Result<PushedOperator> {
    let mut assignment = BTreeMap::new();
    let mut pending = BTreeSet::new();
    let schedule = |t: &Tensor, a: &PauliString, pending: &mut BTreeSet<usize>| {
        for leg in &t.legs {
            if let LegKind::Contracted(peer) = leg.kind {
                if peer.tensor > t.id && a.get(leg.index) != Pauli::I {
                    pending.insert(peer.tensor);
                }
            }
        }
    };
    schedule(&net.tensors[source], &op, &mut pending);
    assignment.insert(source, op);

    while let Some(u) = pending.pop_first() {
        let t = &net.tensors[u];
        let ts = &solvers[u];
        let mut target = PauliString::identity(t.legs.len());
        for &leg in &ts.blocked {
            let peer = t.legs[leg].peer().expect("blocked legs are contracted");
            let p = assignment
                .get(&peer.tensor)
                .map(|a: &PauliString| a.get(peer.leg))
                .unwrap_or(Pauli::I);
            target.set(leg, p);
        }
        let c = ts.solver.solve(&target).ok_or_else(|| Error::Integrity {
            tensor: source,
            tag: tag.to_string(),
            reason: format!("no element of tensor {u} matches the incoming legs"),
        })?;
        let a = ts.group.combine(&c);
        schedule(t, &a, &mut pending);
        assignment.insert(u, a);
    }
    Ok(PushedOperator {
        tensor: source,
        tag,
        assignment,
    })
}

/// Outcome of [`correctness_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub diagnostics: Vec<String>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }
}

/// Walks every internal leg pair of every pushed operator and confirms both
/// sides agree, and that logical and fixed legs carry nothing unexpected.
pub fn correctness_check(net: &TensorNetwork, pushed: &PushResult) -> CheckReport {
    let mut diagnostics = Vec::new();
    for op in &pushed.operators {
        for t in &net.tensors {
            for leg in &t.legs {
                let here = LegRef::new(t.id, leg.index);
                let p = op.on_leg(here);
                match leg.kind {
                    LegKind::Contracted(peer) => {
                        if peer.tensor > t.id {
                            let q = op.on_leg(peer);
                            if p != q {
                                diagnostics.push(format!(
                                    "{}@{}: leg {}.{} carries {p} but {}.{} carries {q}",
                                    op.tag, op.tensor, t.id, leg.index, peer.tensor, peer.leg
                                ));
                            }
                        }
                    }
                    LegKind::Logical(_) => {
                        let expected = match op.tag {
                            OperatorTag::LogicalX(j)
                                if op.tensor == t.id && leg.index == t.seed.n_physical() + j =>
                            {
                                Pauli::X
                            }
                            OperatorTag::LogicalZ(j)
                                if op.tensor == t.id && leg.index == t.seed.n_physical() + j =>
                            {
                                Pauli::Z
                            }
                            _ => Pauli::I,
                        };
                        if p != expected {
                            diagnostics.push(format!(
                                "{}@{}: logical leg {}.{} carries {p}, expected {expected}",
                                op.tag, op.tensor, t.id, leg.index
                            ));
                        }
                    }
                    LegKind::Fixed(basis) => {
                        if p != Pauli::I && p != basis.pauli() {
                            diagnostics.push(format!(
                                "{}@{}: fixed leg {}.{} carries {p}",
                                op.tag, op.tensor, t.id, leg.index
                            ));
                        }
                    }
                    LegKind::Dangling => {}
                }
            }
        }
    }
    CheckReport { diagnostics }
}

/// Boundary form of a holographic code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryOperatorSet {
    pub n: usize,
    /// Dangling leg behind each qubit; empty when loaded from a file that
    /// does not record it.
    pub qubit_order: Vec<LegRef>,
    pub stabilizers: Vec<PauliString>,
    /// Indexed by bulk qubit; index 0 is the central tensor's logical.
    pub logical_x: Vec<PauliString>,
    pub logical_z: Vec<PauliString>,
}

/// Collects the boundary operators of a finished push.
pub fn readout(net: &TensorNetwork, pushed: &PushResult) -> BoundaryOperatorSet {
    let k = net.k();
    let n = net.n();
    let mut stabilizers = Vec::new();
    let mut logical_x = vec![PauliString::identity(n); k];
    let mut logical_z = vec![PauliString::identity(n); k];
    for op in &pushed.operators {
        let b = boundary_string(net, op);
        let bulk = |j: usize| {
            let t = &net.tensors[op.tensor];
            match t.legs[t.seed.n_physical() + j].kind {
                LegKind::Logical(i) => i,
                _ => unreachable!("logical operators only come from open legs"),
            }
        };
        match op.tag {
            OperatorTag::Stabilizer(_) => stabilizers.push(b),
            OperatorTag::LogicalX(j) => logical_x[bulk(j)] = b,
            OperatorTag::LogicalZ(j) => logical_z[bulk(j)] = b,
        }
    }
    BoundaryOperatorSet {
        n,
        qubit_order: net.boundary_order().to_vec(),
        stabilizers,
        logical_x,
        logical_z,
    }
}

/// Push, check and read out in one go.
pub fn generate_operators(net: &TensorNetwork) -> Result<BoundaryOperatorSet> {
    let pushed = batch_push(net)?;
    let report = correctness_check(net, &pushed);
    if let Some(first) = report.diagnostics.first() {
        return Err(Error::Integrity {
            tensor: 0,
            tag: "check".into(),
            reason: format!("{} mismatches, first: {first}", report.diagnostics.len()),
        });
    }
    Ok(readout(net, &pushed))
}

impl BoundaryOperatorSet {
    pub fn k(&self) -> usize {
        self.logical_x.len()
    }

    pub fn stabilizer_matrix(&self) -> SymplecticMatrix {
        SymplecticMatrix::new(self.n, self.stabilizers.clone()).expect("operators have n qubits")
    }

    /// Checks stabilizer independence and the full commutation table.
    /// Returns a list of violations, empty when the set is a valid code.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let all = self
            .stabilizers
            .iter()
            .chain(&self.logical_x)
            .chain(&self.logical_z);
        if let Some(bad) = all.clone().find(|p| p.num_qubits() != self.n) {
            problems.push(format!("operator on {} qubits, expected {}", bad.num_qubits(), self.n));
            return problems;
        }
        let rank = if self.stabilizers.is_empty() {
            0
        } else {
            self.stabilizer_matrix().rank()
        };
        if rank != self.stabilizers.len() || rank + self.k() != self.n {
            problems.push(format!(
                "stabilizer rank {rank} with {} generators, n - k = {}",
                self.stabilizers.len(),
                self.n as isize - self.k() as isize
            ));
        }
        for (i, a) in self.stabilizers.iter().enumerate() {
            for (j, b) in self.stabilizers.iter().enumerate().skip(i + 1) {
                if a.anticommutes_raw(b) {
                    problems.push(format!("stabilizers {i} and {j} anticommute"));
                }
            }
            for (j, l) in self.logical_x.iter().chain(&self.logical_z).enumerate() {
                if a.anticommutes_raw(l) {
                    problems.push(format!("stabilizer {i} anticommutes with logical {j}"));
                }
            }
        }
        for i in 0..self.k() {
            for j in 0..self.k() {
                let want = i == j;
                if self.logical_x[i].anticommutes_raw(&self.logical_z[j]) != want {
                    problems.push(format!("logical X{i} / Z{j} commutation is wrong"));
                }
                if i < j {
                    if self.logical_x[i].anticommutes_raw(&self.logical_x[j]) {
                        problems.push(format!("logical X{i} / X{j} anticommute"));
                    }
                    if self.logical_z[i].anticommutes_raw(&self.logical_z[j]) {
                        problems.push(format!("logical Z{i} / Z{j} anticommute"));
                    }
                }
            }
        }
        problems
    }

    /// Operator-list text: `STAB`, `LOGX<i>` and `LOGZ<i>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# n={} k={}\n", self.n, self.k()));
        if !self.qubit_order.is_empty() {
            let order: Vec<String> = self
                .qubit_order
                .iter()
                .map(|r| format!("{}.{}", r.tensor, r.leg))
                .collect();
            out.push_str(&format!("# order {}\n", order.join(" ")));
        }
        for s in &self.stabilizers {
            out.push_str(&format!("STAB {s}\n"));
        }
        for (i, (x, z)) in self.logical_x.iter().zip(&self.logical_z).enumerate() {
            out.push_str(&format!("LOGX{i} {x}\nLOGZ{i} {z}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut stabilizers = Vec::new();
        let mut lx: BTreeMap<usize, PauliString> = BTreeMap::new();
        let mut lz: BTreeMap<usize, PauliString> = BTreeMap::new();
        let mut order = Vec::new();
        let bad = |line: &str, reason: &str| Error::Parse {
            text: line.to_string(),
            reason: reason.to_string(),
        };
        for raw in text.lines() {
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix("# order ") {
                for tok in rest.split_whitespace() {
                    let (t, l) = tok.split_once('.').ok_or_else(|| bad(line, "bad leg reference"))?;
                    let t = t.parse().map_err(|_| bad(line, "bad tensor id"))?;
                    let l = l.parse().map_err(|_| bad(line, "bad leg index"))?;
                    order.push(LegRef::new(t, l));
                }
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, body) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| bad(line, "expected `<tag> <operator>`"))?;
            let op = PauliString::from_text(body.trim())?;
            if head == "STAB" {
                stabilizers.push(op);
            } else if let Some(i) = head.strip_prefix("LOGX") {
                lx.insert(i.parse().map_err(|_| bad(line, "bad logical index"))?, op);
            } else if let Some(i) = head.strip_prefix("LOGZ") {
                lz.insert(i.parse().map_err(|_| bad(line, "bad logical index"))?, op);
            } else {
                return Err(bad(line, "unknown tag"));
            }
        }
        let k = lx.len();
        if lz.len() != k || (0..k).any(|i| !lx.contains_key(&i) || !lz.contains_key(&i)) {
            return Err(bad(text.lines().next().unwrap_or(""), "logical indices must pair up as 0..k"));
        }
        let n = stabilizers
            .first()
            .or_else(|| lx.values().next())
            .map(|p| p.num_qubits())
            .ok_or_else(|| bad("", "no operators"))?;
        let set = BoundaryOperatorSet {
            n,
            qubit_order: order,
            stabilizers,
            logical_x: lx.into_values().collect(),
            logical_z: lz.into_values().collect(),
        };
        if let Some(p) = set
            .stabilizers
            .iter()
            .chain(&set.logical_x)
            .chain(&set.logical_z)
            .find(|p| p.num_qubits() != n)
        {
            return Err(Error::Dimension {
                expected: n,
                actual: p.num_qubits(),
            });
        }
        Ok(set)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::perfect_513;
    use crate::tiling::{setup_max_rate_happy, setup_zero_rate_happy, Preset};

    fn tile() -> Tensor {
        setup_max_rate_happy(0).unwrap().tensors.remove(0)
    }

    #[test]
    fn stabilizer_extends_by_identity() {
        let t = tile();
        let c: Vec<(usize, Pauli)> = "XZZXI"
            .chars()
            .enumerate()
            .map(|(i, ch)| (i, Pauli::from_char(ch).unwrap()))
            .collect();
        let full = push_through_tensor(&t, &c).unwrap();
        assert_eq!(full.to_text(), "XZZXII");
    }

    #[test]
    fn logical_pushes_to_transversal() {
        let full = push_through_tensor(&tile(), &[(5, Pauli::X)]).unwrap();
        assert_eq!(full.to_text(), "XXXXXX");
        let ops = generate_operators(&setup_max_rate_happy(0).unwrap()).unwrap();
        let span = SymplecticMatrix::new(5, perfect_513().stabilizers().to_vec()).unwrap();
        let diff = ops.logical_x[0].multiply(&PauliString::from_text("XXXXX").unwrap()).unwrap();
        assert!(span.contains(&diff).unwrap());
    }

    #[test]
    fn single_planar_x_is_not_pushable() {
        let t = tile();
        let mut c: Vec<(usize, Pauli)> = (0..6).map(|l| (l, Pauli::I)).collect();
        c[2].1 = Pauli::X;
        assert!(push_through_tensor(&t, &c).is_none());
    }

    #[test]
    fn zero_rate_r1_counts() {
        let net = setup_zero_rate_happy(1).unwrap();
        let pushed = batch_push(&net).unwrap();
        let stabs = pushed
            .operators
            .iter()
            .filter(|o| matches!(o.tag, OperatorTag::Stabilizer(_)))
            .count();
        assert_eq!(stabs, net.n() - 1);
        assert_eq!(pushed.operators.len(), net.n() + 1);
        assert!(correctness_check(&net, &pushed).ok());
    }

    #[test]
    fn corrupted_leg_gives_one_diagnostic() {
        let net = setup_zero_rate_happy(1).unwrap();
        let mut pushed = batch_push(&net).unwrap();
        // find an operator that crosses an internal leg and flip one side
        let (oi, t, leg) = pushed
            .operators
            .iter()
            .enumerate()
            .find_map(|(oi, op)| {
                op.assignment.iter().find_map(|(&t, a)| {
                    net.tensors[t]
                        .legs
                        .iter()
                        .find(|l| l.peer().is_some() && a.get(l.index) != Pauli::I)
                        .map(|l| (oi, t, l.index))
                })
            })
            .unwrap();
        let a = pushed.operators[oi].assignment.get_mut(&t).unwrap();
        let p = a.get(leg);
        a.set(leg, p.mul(Pauli::Y));
        let report = correctness_check(&net, &pushed);
        assert_eq!(report.diagnostics.len(), 1, "{:?}", report.diagnostics);
    }

    #[test]
    fn single_tile_check_passes() {
        for p in Preset::ALL {
            let net = p.build(0).unwrap();
            let pushed = batch_push(&net).unwrap();
            assert!(correctness_check(&net, &pushed).ok());
        }
    }

    #[test]
    fn operator_list_round_trip() {
        let ops = generate_operators(&setup_max_rate_happy(1).unwrap()).unwrap();
        let text = ops.to_text();
        assert_eq!(BoundaryOperatorSet::parse(&text).unwrap(), ops);
        assert!(BoundaryOperatorSet::parse("FOO XX\n").is_err());
    }
}
