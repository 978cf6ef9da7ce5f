//! Maximum-likelihood decoding by exact contraction of Pauli indicator
//! tensors.
//!
//! Every placed tensor becomes a rank-`m` array over `{I, X, Y, Z}` that is 1
//! on the tensor's stabilizer group and 0 elsewhere. For a given error the
//! dangling legs are weighted by the noise prior, fixed and undecoded
//! logical legs are summed over, and the network is contracted down to the
//! open central logical leg. The four results are proportional to the
//! probabilities of the four logical classes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::push::leg_group;
use crate::tiling::{LegKind, TensorNetwork};

use super::{CosetDistribution, NoisePrior};

/// Default cap on the number of entries of any intermediate tensor.
pub const DEFAULT_MEMORY_BUDGET: usize = 1 << 24;

const PLAN_ATTEMPTS: usize = 64;
const PLAN_SEED: u64 = 0x5eed_7e45_0e0d_0001;

/// 0/1 tensor of one placed tensor's stabilizer group.
#[derive(Clone, Debug)]
pub struct IndicatorTensor {
    pub tensor: usize,
    pub legs: usize,
    /// Group elements, two bits per leg holding the [`Pauli::index`].
    elements: Vec<u64>,
}

impl IndicatorTensor {
    fn pack(paulis: impl Iterator<Item = Pauli>) -> u64 {
        paulis
            .enumerate()
            .fold(0u64, |acc, (i, p)| acc | (p.index() as u64) << (2 * i))
    }

    fn digit(element: u64, leg: usize) -> usize {
        ((element >> (2 * leg)) & 3) as usize
    }

    pub fn entry(&self, assignment: &[Pauli]) -> f64 {
        let key = Self::pack(assignment.iter().copied());
        if self.elements.binary_search(&key).is_ok() {
            1.0
        } else {
            0.0
        }
    }

    pub fn nonzero_count(&self) -> usize {
        self.elements.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LegRole {
    Qubit(usize),
    Edge(usize),
    Open,
    Traced,
}

/// Indicator tensors of a whole network, with the role of every leg.
#[derive(Clone, Debug)]
pub struct IndicatorNetwork {
    pub tensors: Vec<IndicatorTensor>,
    roles: Vec<Vec<LegRole>>,
    n: usize,
    edges: usize,
}

impl IndicatorNetwork {
    pub fn n(&self) -> usize {
        self.n
    }
}

/// Builds the indicator network; logical qubit 0 is the one left open.
pub fn tn_build(net: &TensorNetwork) -> Result<IndicatorNetwork> {
    let open = *net
        .logical_legs()
        .first()
        .ok_or_else(|| Error::Config("network has no logical qubit to decode".into()))?;
    let mut qubit_of = HashMap::new();
    for (q, r) in net.boundary_order().iter().enumerate() {
        qubit_of.insert(*r, q);
    }
    let mut edge_of = HashMap::new();
    let mut edges = 0;
    let mut tensors = Vec::with_capacity(net.tensors.len());
    let mut roles = Vec::with_capacity(net.tensors.len());
    for t in &net.tensors {
        if t.legs.len() > 32 {
            return Err(Error::Capability(format!(
                "tensor {} has {} legs; at most 32 are supported",
                t.id,
                t.legs.len()
            )));
        }
        let group = leg_group(t);
        let gens = group.rows();
        let mut cur = PauliString::identity(t.legs.len());
        let mut elements = Vec::with_capacity(1 << gens.len());
        elements.push(0);
        for i in 1u64..(1u64 << gens.len()) {
            cur.mul_assign_raw(&gens[i.trailing_zeros() as usize]);
            elements.push(IndicatorTensor::pack((0..t.legs.len()).map(|l| cur.get(l))));
        }
        elements.sort_unstable();
        tensors.push(IndicatorTensor {
            tensor: t.id,
            legs: t.legs.len(),
            elements,
        });
        roles.push(
            t.legs
                .iter()
                .map(|leg| {
                    let here = crate::tiling::LegRef::new(t.id, leg.index);
                    match leg.kind {
                        LegKind::Dangling => LegRole::Qubit(qubit_of[&here]),
                        LegKind::Contracted(peer) => {
                            let key = here.min(peer);
                            let id = *edge_of.entry(key).or_insert_with(|| {
                                edges += 1;
                                edges - 1
                            });
                            LegRole::Edge(id)
                        }
                        LegKind::Logical(_) if here == open => LegRole::Open,
                        LegKind::Logical(_) | LegKind::Fixed(_) => LegRole::Traced,
                    }
                })
                .collect(),
        );
    }
    Ok(IndicatorNetwork {
        tensors,
        roles,
        n: net.n(),
        edges,
    })
}

/// A tile with its qubit legs still to be weighted.
#[derive(Clone, Debug)]
struct Tile {
    /// Edge ids of the kept legs, least significant digit first.
    kept: Vec<usize>,
    qubits: Vec<usize>,
    /// `elements × qubits` Pauli indices.
    digits: Vec<u8>,
    /// Position of each element in the dense kept-leg array.
    kept_index: Vec<u32>,
    sparse: bool,
}

impl Tile {
    fn dense_size(&self) -> usize {
        1 << (2 * self.kept.len())
    }

    fn element_count(&self) -> usize {
        self.kept_index.len()
    }
}

/// Maps a flat index to a permuted flat index one byte (four legs) at a time.
#[derive(Clone, Debug)]
struct Permutation {
    tables: Vec<[u32; 256]>,
    size: usize,
    identity: bool,
}

impl Permutation {
    fn new(mults: &[usize]) -> Self {
        let identity = mults.iter().enumerate().all(|(i, &m)| m == 1 << (2 * i));
        let tables = mults
            .chunks(4)
            .map(|chunk| {
                let mut t = [0u32; 256];
                for (byte, slot) in t.iter_mut().enumerate() {
                    *slot = chunk
                        .iter()
                        .enumerate()
                        .map(|(i, &m)| ((byte >> (2 * i)) & 3) * m)
                        .sum::<usize>() as u32;
                }
                t
            })
            .collect();
        Permutation {
            tables,
            size: 1 << (2 * mults.len()),
            identity,
        }
    }

    #[inline]
    fn offset(&self, idx: usize) -> usize {
        self.tables
            .iter()
            .enumerate()
            .map(|(k, t)| t[(idx >> (8 * k)) & 255] as usize)
            .sum()
    }

    fn apply(&self, src: &[f64], dst: &mut Vec<f64>) {
        dst.clear();
        if self.identity {
            dst.extend_from_slice(src);
            return;
        }
        dst.resize(self.size, 0.0);
        for (idx, &v) in src.iter().enumerate() {
            dst[self.offset(idx)] = v;
        }
    }
}

#[derive(Clone, Debug)]
enum LeftOperand {
    /// `(row, col)` of each element of a sparse tile.
    Sparse(Vec<(u32, u32)>),
    Dense(Permutation),
}

#[derive(Clone, Debug)]
struct Step {
    a: usize,
    b: usize,
    rows: usize,
    inner: usize,
    cols: usize,
    left: LeftOperand,
    right: Permutation,
}

/// Indicator network with a fixed contraction plan, ready for repeated
/// decoding.
#[derive(Clone, Debug)]
pub struct TnDecoder {
    n: usize,
    tiles: Vec<Tile>,
    steps: Vec<Step>,
    last: usize,
    max_rank: usize,
    cost: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum SlotKind {
    SparseTile(usize),
    Dense,
}

fn size_of(legs: usize) -> f64 {
    4f64.powi(legs as i32)
}

/// Legs of the contraction of `a` and `b`: the free legs of `b`, then those of `a`.
fn merged(a: &[usize], b: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let shared: Vec<usize> = a.iter().copied().filter(|e| b.contains(e)).collect();
    let fa: Vec<usize> = a.iter().copied().filter(|e| !shared.contains(e)).collect();
    let fb: Vec<usize> = b.iter().copied().filter(|e| !shared.contains(e)).collect();
    (fa, shared, fb)
}

/// Greedy pairwise order; `noise` perturbs the choice for randomized restarts.
fn greedy_order(initial: &[Vec<usize>], noise: Option<(&mut ChaCha8Rng, f64)>) -> Vec<(usize, usize)> {
    let mut legs: Vec<Option<Vec<usize>>> = initial.iter().cloned().map(Some).collect();
    let mut owners: HashMap<usize, Vec<usize>> = HashMap::new();
    for (s, l) in initial.iter().enumerate() {
        for &e in l {
            owners.entry(e).or_default().push(s);
        }
    }
    let mut noise = noise;
    let mut order = Vec::new();
    loop {
        let mut pairs: Vec<(usize, usize)> = owners
            .values()
            .filter(|o| o.len() == 2)
            .map(|o| (o[0].min(o[1]), o[0].max(o[1])))
            .collect();
        if pairs.is_empty() {
            break;
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut best: Option<(f64, (usize, usize))> = None;
        for &(i, j) in &pairs {
            let (a, b) = (legs[i].as_ref().unwrap(), legs[j].as_ref().unwrap());
            let (fa, _, fb) = merged(a, b);
            let mut score = size_of(fa.len() + fb.len()) - size_of(a.len()) - size_of(b.len());
            if let Some((rng, temp)) = noise.as_mut() {
                let u: f64 = rng.gen_range(1e-12..1.0);
                score -= *temp * score.abs().max(1.0) * (-(u.ln())).ln();
            }
            if best.map_or(true, |(s, _)| score < s) {
                best = Some((score, (i, j)));
            }
        }
        let (i, j) = best.unwrap().1;
        let (a, b) = (legs[i].take().unwrap(), legs[j].take().unwrap());
        let (fa, shared, fb) = merged(&a, &b);
        let new = legs.len();
        for e in &shared {
            owners.remove(e);
        }
        let result: Vec<usize> = fb.iter().chain(&fa).copied().collect();
        for e in &result {
            let o = owners.get_mut(e).unwrap();
            for s in o.iter_mut() {
                if *s == i || *s == j {
                    *s = new;
                }
            }
        }
        legs.push(Some(result));
        order.push((i, j));
    }
    order
}

impl TnDecoder {
    pub fn new(net: &IndicatorNetwork, memory_budget: usize) -> Result<Self> {
        let mut tiles = Vec::with_capacity(net.tensors.len());
        for (ind, roles) in net.tensors.iter().zip(&net.roles) {
            let mut kept = Vec::new();
            let mut kept_legs = Vec::new();
            let mut qubits = Vec::new();
            let mut qubit_legs = Vec::new();
            for (leg, role) in roles.iter().enumerate() {
                match *role {
                    LegRole::Edge(e) => {
                        kept.push(e);
                        kept_legs.push(leg);
                    }
                    LegRole::Open => {
                        kept.push(net.edges);
                        kept_legs.push(leg);
                    }
                    LegRole::Qubit(q) => {
                        qubits.push(q);
                        qubit_legs.push(leg);
                    }
                    LegRole::Traced => {}
                }
            }
            let mut digits = Vec::with_capacity(ind.elements.len() * qubits.len());
            let mut kept_index = Vec::with_capacity(ind.elements.len());
            for &el in &ind.elements {
                digits.extend(qubit_legs.iter().map(|&l| IndicatorTensor::digit(el, l) as u8));
                kept_index.push(
                    kept_legs
                        .iter()
                        .enumerate()
                        .map(|(pos, &l)| IndicatorTensor::digit(el, l) << (2 * pos))
                        .sum::<usize>() as u32,
                );
            }
            let dense = 1usize << (2 * kept.len());
            tiles.push(Tile {
                sparse: qubits.is_empty() && ind.elements.len() * 4 <= dense,
                kept,
                qubits,
                digits,
                kept_index,
            });
        }

        let initial: Vec<Vec<usize>> = tiles.iter().map(|t| t.kept.clone()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(PLAN_SEED);
        let mut best: Option<(f64, usize, Vec<(usize, usize)>)> = None;
        let mut smallest_rank = usize::MAX;
        for attempt in 0..PLAN_ATTEMPTS {
            let order = if attempt == 0 {
                greedy_order(&initial, None)
            } else {
                let temp = rng.gen_range(0.05..1.0);
                greedy_order(&initial, Some((&mut rng, temp)))
            };
            let (cost, rank) = Self::plan_cost(&tiles, &order);
            smallest_rank = smallest_rank.min(rank);
            if (1usize << (2 * rank.min(31))) > memory_budget {
                continue;
            }
            if best.as_ref().map_or(true, |(c, _, _)| cost < *c) {
                best = Some((cost, rank, order));
            }
        }
        let (cost, max_rank, order) = best.ok_or_else(|| {
            Error::Capability(format!(
                "contraction needs an intermediate tensor of rank {smallest_rank} \
                 (4^{smallest_rank} entries), above the memory budget of {memory_budget}"
            ))
        })?;
        let (steps, last, final_legs) = Self::compile(&tiles, &order);
        if final_legs != vec![net.edges] {
            return Err(Error::Config(
                "indicator network does not reduce to the open logical leg".into(),
            ));
        }
        Ok(TnDecoder {
            n: net.n,
            tiles,
            steps,
            last,
            max_rank,
            cost,
        })
    }

    /// Estimated multiply-adds and the largest intermediate rank of an order.
    fn plan_cost(tiles: &[Tile], order: &[(usize, usize)]) -> (f64, usize) {
        let mut legs: Vec<Vec<usize>> = tiles.iter().map(|t| t.kept.clone()).collect();
        let mut kind: Vec<SlotKind> = tiles
            .iter()
            .enumerate()
            .map(|(i, t)| if t.sparse { SlotKind::SparseTile(i) } else { SlotKind::Dense })
            .collect();
        let mut cost = 0.0;
        let mut max_rank = legs.iter().map(|l| l.len()).max().unwrap_or(0);
        for &(i, j) in order {
            let (i, j) = match (kind[i], kind[j]) {
                (SlotKind::Dense, SlotKind::SparseTile(_)) => (j, i),
                _ => (i, j),
            };
            let (fa, shared, fb) = merged(&legs[i], &legs[j]);
            let cols = size_of(fb.len());
            cost += match kind[i] {
                SlotKind::SparseTile(t) => tiles[t].element_count() as f64 * cols,
                SlotKind::Dense => size_of(legs[i].len()) + size_of(fa.len() + shared.len()) * cols,
            };
            cost += size_of(legs[j].len());
            let result: Vec<usize> = fb.iter().chain(&fa).copied().collect();
            max_rank = max_rank.max(result.len());
            legs.push(result);
            kind.push(SlotKind::Dense);
        }
        (cost, max_rank)
    }

    fn compile(tiles: &[Tile], order: &[(usize, usize)]) -> (Vec<Step>, usize, Vec<usize>) {
        let mut legs: Vec<Vec<usize>> = tiles.iter().map(|t| t.kept.clone()).collect();
        let mut sparse: Vec<bool> = tiles.iter().map(|t| t.sparse).collect();
        let mut steps = Vec::with_capacity(order.len());
        for &(i, j) in order {
            let (a, b) = if !sparse[i] && sparse[j] { (j, i) } else { (i, j) };
            let (fa, shared, fb) = merged(&legs[a], &legs[b]);
            let (rows, inner, cols) = (1 << (2 * fa.len()), 1 << (2 * shared.len()), 1 << (2 * fb.len()));
            // left operand laid out as [row = fa digits][col = shared digits]
            let left_mults: Vec<usize> = legs[a]
                .iter()
                .map(|e| {
                    if let Some(p) = fa.iter().position(|x| x == e) {
                        (1 << (2 * p)) * inner
                    } else {
                        1 << (2 * shared.iter().position(|x| x == e).unwrap())
                    }
                })
                .collect();
            let left = if sparse[a] {
                let perm = Permutation::new(&left_mults);
                let pairs = tiles[a]
                    .kept_index
                    .iter()
                    .map(|&k| {
                        let off = perm.offset(k as usize);
                        ((off / inner) as u32, (off % inner) as u32)
                    })
                    .collect();
                LeftOperand::Sparse(pairs)
            } else {
                LeftOperand::Dense(Permutation::new(&left_mults))
            };
            // right operand laid out as [row = shared digits][col = fb digits]
            let right_mults: Vec<usize> = legs[b]
                .iter()
                .map(|e| {
                    if let Some(p) = fb.iter().position(|x| x == e) {
                        1 << (2 * p)
                    } else {
                        (1 << (2 * shared.iter().position(|x| x == e).unwrap())) * cols
                    }
                })
                .collect();
            steps.push(Step {
                a,
                b,
                rows,
                inner,
                cols,
                left,
                right: Permutation::new(&right_mults),
            });
            legs.push(fb.iter().chain(&fa).copied().collect());
            sparse.push(false);
        }
        let last = legs.len() - 1;
        (steps, last, legs[last].clone())
    }

    /// Rank of the largest intermediate tensor in the plan.
    pub fn max_intermediate_rank(&self) -> usize {
        self.max_rank
    }

    /// Estimated multiply-adds per decode.
    pub fn estimated_cost(&self) -> f64 {
        self.cost
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Class weights of the decoded logical qubit for the error `error`.
    pub fn coset_distribution(&self, error: &PauliString, prior: &NoisePrior) -> Result<CosetDistribution> {
        if error.num_qubits() != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                actual: error.num_qubits(),
            });
        }
        let probs = prior.probs();
        // v[q][P] = Pr(E_q · P)
        let vectors: Vec<[f64; 4]> = (0..self.n)
            .map(|q| {
                let e = error.get(q);
                let mut v = [0.0; 4];
                for p in Pauli::ALL {
                    v[p.index()] = probs[e.mul(p).index()];
                }
                v
            })
            .collect();

        let mut log_scale = 0.0;
        let mut slots: Vec<Option<Vec<f64>>> = Vec::with_capacity(self.tiles.len() + self.steps.len());
        for tile in &self.tiles {
            let nq = tile.qubits.len();
            let weight = |e: usize| -> f64 {
                let d = &tile.digits[e * nq..(e + 1) * nq];
                tile.qubits
                    .iter()
                    .zip(d)
                    .map(|(&q, &p)| vectors[q][p as usize])
                    .product()
            };
            let values = if tile.sparse {
                (0..tile.element_count()).map(weight).collect()
            } else {
                let mut dense = vec![0.0; tile.dense_size()];
                for e in 0..tile.element_count() {
                    dense[tile.kept_index[e] as usize] += weight(e);
                }
                log_scale += normalize(&mut dense);
                dense
            };
            slots.push(Some(values));
        }

        let mut left_buf = Vec::new();
        let mut right_buf = Vec::new();
        for step in &self.steps {
            let a = slots[step.a].take().expect("plan uses each slot once");
            let b = slots[step.b].take().expect("plan uses each slot once");
            let b = if self.is_sparse_tile(step.b) {
                self.densify(step.b, &b)
            } else {
                b
            };
            step.right.apply(&b, &mut right_buf);
            let mut out = vec![0.0; step.rows * step.cols];
            match &step.left {
                LeftOperand::Sparse(pairs) => {
                    for (&(r, c), &v) in pairs.iter().zip(&a) {
                        if v == 0.0 {
                            continue;
                        }
                        let dst = &mut out[r as usize * step.cols..(r as usize + 1) * step.cols];
                        let src = &right_buf[c as usize * step.cols..(c as usize + 1) * step.cols];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += v * s;
                        }
                    }
                }
                LeftOperand::Dense(perm) => {
                    perm.apply(&a, &mut left_buf);
                    for r in 0..step.rows {
                        let dst = &mut out[r * step.cols..(r + 1) * step.cols];
                        for c in 0..step.inner {
                            let v = left_buf[r * step.inner + c];
                            if v == 0.0 {
                                continue;
                            }
                            let src = &right_buf[c * step.cols..(c + 1) * step.cols];
                            for (d, s) in dst.iter_mut().zip(src) {
                                *d += v * s;
                            }
                        }
                    }
                }
            }
            log_scale += normalize(&mut out);
            slots.push(Some(out));
        }

        let last = slots[self.last].take().expect("final tensor");
        let last = if self.is_sparse_tile(self.last) {
            self.densify(self.last, &last)
        } else {
            last
        };
        let mut weights = [0.0; 4];
        weights.copy_from_slice(&last[..4]);
        Ok(CosetDistribution { weights, log_scale })
    }

    fn is_sparse_tile(&self, slot: usize) -> bool {
        slot < self.tiles.len() && self.tiles[slot].sparse
    }

    fn densify(&self, slot: usize, values: &[f64]) -> Vec<f64> {
        let tile = &self.tiles[slot];
        let mut dense = vec![0.0; tile.dense_size()];
        for (&k, &v) in tile.kept_index.iter().zip(values) {
            dense[k as usize] += v;
        }
        dense
    }

    /// Coset distribution and the most likely class.
    pub fn decode(&self, error: &PauliString, prior: &NoisePrior) -> Result<(CosetDistribution, Pauli)> {
        let d = self.coset_distribution(error, prior)?;
        Ok((d, d.argmax()))
    }
}

/// Scales `v` so its largest entry is 1 and returns the log of the factor
/// taken out.
fn normalize(v: &mut [f64]) -> f64 {
    let max = v.iter().fold(0.0f64, |m, &x| m.max(x));
    if max > 0.0 && max != 1.0 {
        let inv = 1.0 / max;
        for x in v.iter_mut() {
            *x *= inv;
        }
        max.ln()
    } else {
        0.0
    }
}

/// One-shot decode: build, plan and contract.
pub fn tn_decode(
    net: &TensorNetwork,
    error: &PauliString,
    prior: &NoisePrior,
) -> Result<(CosetDistribution, Pauli)> {
    TnDecoder::new(&tn_build(net)?, DEFAULT_MEMORY_BUDGET)?.decode(error, prior)
}
