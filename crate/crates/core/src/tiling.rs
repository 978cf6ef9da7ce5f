//! Layered `{p, 4}` hyperbolic tilings and the tensor networks built on them.
//!
//! Growth is purely combinatorial. The current region is a disk whose
//! boundary is a counterclockwise cycle of vertices, each annotated with the
//! number of region tiles meeting there (1..=3, since four tiles meet at
//! every vertex). One inflation step walks that cycle and attaches
//!
//! * one tile across every boundary edge, where consecutive edges whose
//!   shared vertex already has three tiles are covered by a single tile, and
//! * with vertex inflation, one extra tile at every vertex that only has a
//!   single tile so far (the tile touching the region in just that vertex).
//!
//! Tiles are numbered in construction order, center first and then
//! counterclockwise within each layer. Planar legs follow the polygon edges
//! counterclockwise, starting from an edge that touches the previous layer.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::seed::{fix_leg, perfect_513, steane_713, steane_octagon, FixBasis, SeedCode};

/// Schläfli symbol `{p, q}` restricted to hyperbolic tilings with `q = 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schlafli {
    pub p: usize,
    pub q: usize,
}

impl Schlafli {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if q != 4 {
            return Err(Error::UnsupportedQ(q));
        }
        check_hyperbolic(p, q)?;
        Ok(Schlafli { p, q })
    }
}

fn check_hyperbolic(p: usize, q: usize) -> Result<()> {
    // 1/p + 1/q < 1/2  <=>  2(p + q) < pq
    if p == 0 || 2 * (p + q) >= p * q {
        return Err(Error::NotHyperbolic { p, q });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InflationRule {
    /// Each layer adds the tiles sharing an edge with the region.
    Edge,
    /// Each layer adds every tile touching a boundary vertex.
    Vertex,
}

impl FromStr for InflationRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(InflationRule::Edge),
            "vertex" => Ok(InflationRule::Vertex),
            other => Err(Error::Config(format!("unknown inflation rule {other:?}"))),
        }
    }
}

impl fmt::Display for InflationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InflationRule::Edge => "edge",
            InflationRule::Vertex => "vertex",
        })
    }
}

/// A `(tensor, leg)` address.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LegRef {
    pub tensor: usize,
    pub leg: usize,
}

impl LegRef {
    pub fn new(tensor: usize, leg: usize) -> Self {
        LegRef { tensor, leg }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegKind {
    /// Planar leg on the outer boundary: a physical qubit of the code.
    Dangling,
    /// Planar leg glued to another tensor's leg.
    Contracted(LegRef),
    /// Open logical leg; carries the bulk qubit with the given index.
    Logical(usize),
    /// Logical leg projected onto an eigenstate.
    Fixed(FixBasis),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorLeg {
    pub owner: usize,
    pub index: usize,
    pub kind: LegKind,
}

impl TensorLeg {
    pub fn is_planar(&self) -> bool {
        matches!(self.kind, LegKind::Dangling | LegKind::Contracted(_))
    }

    pub fn peer(&self) -> Option<LegRef> {
        match self.kind {
            LegKind::Contracted(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Tensor {
    pub id: usize,
    pub layer: usize,
    pub seed: Arc<SeedCode>,
    /// `seed.n_physical()` planar legs followed by `seed.k_logical()`
    /// logical or fixed legs.
    pub legs: Vec<TensorLeg>,
}

impl Tensor {
    pub fn planar_degree(&self) -> usize {
        self.seed.n_physical()
    }

    /// Seed with all fixed legs projected out, as produced by [`fix_leg`].
    pub fn effective_seed(&self) -> Result<SeedCode> {
        let n = self.seed.n_physical();
        let mut seed = (*self.seed).clone();
        // fix from the highest logical index down so lower indices stay valid
        for j in (0..self.seed.k_logical()).rev() {
            if let LegKind::Fixed(basis) = self.legs[n + j].kind {
                seed = fix_leg(&seed, j, basis)?;
            }
        }
        Ok(seed)
    }
}

/// Seed placed on one tile, plus which of its logical legs are fixed.
#[derive(Clone, Debug)]
pub struct TileSeed {
    pub seed: Arc<SeedCode>,
    /// One entry per logical leg; `None` keeps the leg open.
    pub fixed: Vec<Option<FixBasis>>,
}

impl TileSeed {
    pub fn open(seed: Arc<SeedCode>) -> Self {
        let k = seed.k_logical();
        TileSeed {
            seed,
            fixed: vec![None; k],
        }
    }

    pub fn fixed_all(seed: Arc<SeedCode>, basis: FixBasis) -> Self {
        let k = seed.k_logical();
        TileSeed {
            seed,
            fixed: vec![Some(basis); k],
        }
    }
}

#[derive(Clone, Debug)]
pub struct TensorNetwork {
    pub schlafli: Schlafli,
    pub layers: usize,
    pub rule: InflationRule,
    pub tensors: Vec<Tensor>,
    boundary: Vec<LegRef>,
    logical_legs: Vec<LegRef>,
}

impl TensorNetwork {
    pub fn leg(&self, r: LegRef) -> &TensorLeg {
        &self.tensors[r.tensor].legs[r.leg]
    }

    /// Physical qubit count.
    pub fn n(&self) -> usize {
        self.boundary.len()
    }

    /// Number of open logical legs (bulk qubits).
    pub fn k(&self) -> usize {
        self.logical_legs.len()
    }

    /// Open logical legs indexed by bulk qubit; index 0 is on the center.
    pub fn logical_legs(&self) -> &[LegRef] {
        &self.logical_legs
    }

    /// Dangling legs in boundary order; position `i` is physical qubit `i`.
    pub fn boundary_order(&self) -> &[LegRef] {
        &self.boundary
    }

    pub fn tensors_in_layer(&self, layer: usize) -> impl Iterator<Item = &Tensor> {
        self.tensors.iter().filter(move |t| t.layer == layer)
    }

    /// Plain-text description: one line per tensor with its legs.
    ///
    /// Leg tokens are `D` (dangling), `C<t>.<l>` (contracted to tensor `t`
    /// leg `l`), `L<i>` (open logical, bulk qubit `i`) and `F<basis>`.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# tiling {{{},{}}} layers={} rule={} n={} k={}",
            self.schlafli.p,
            self.schlafli.q,
            self.layers,
            self.rule,
            self.n(),
            self.k()
        );
        for t in &self.tensors {
            let legs: Vec<String> = t
                .legs
                .iter()
                .map(|l| match l.kind {
                    LegKind::Dangling => "D".to_string(),
                    LegKind::Contracted(r) => format!("C{}.{}", r.tensor, r.leg),
                    LegKind::Logical(i) => format!("L{i}"),
                    LegKind::Fixed(b) => format!("F{b}"),
                })
                .collect();
            let _ = writeln!(
                out,
                "tensor {} layer {} seed {} legs {}",
                t.id,
                t.layer,
                t.seed.name(),
                legs.join(" ")
            );
        }
        let order: Vec<String> = self
            .boundary
            .iter()
            .map(|r| format!("{}.{}", r.tensor, r.leg))
            .collect();
        let _ = writeln!(out, "boundary {}", order.join(" "));
        out
    }
}

/// Free-function form of [`TensorNetwork::boundary_order`].
pub fn boundary_order(net: &TensorNetwork) -> Vec<LegRef> {
    net.boundary.clone()
}

struct Face {
    layer: usize,
    vertices: Vec<usize>,
}

struct Builder {
    faces: Vec<Face>,
    /// Number of region faces at each vertex.
    vcount: Vec<u8>,
    /// Directed edge `(u, v)` with its face on the left, not yet glued.
    open_edges: HashMap<(usize, usize), LegRef>,
    glue: Vec<(LegRef, LegRef)>,
    /// Counterclockwise boundary vertex cycle.
    boundary: Vec<usize>,
}

impl Builder {
    fn new_vertex(&mut self) -> usize {
        self.vcount.push(0);
        self.vcount.len() - 1
    }

    fn add_face(&mut self, layer: usize, vertices: Vec<usize>) -> Result<()> {
        let id = self.faces.len();
        let d = vertices.len();
        for k in 0..d {
            let (u, v) = (vertices[k], vertices[(k + 1) % d]);
            let me = LegRef::new(id, k);
            if let Some(other) = self.open_edges.remove(&(v, u)) {
                self.glue.push((other, me));
            } else if self.open_edges.insert((u, v), me).is_some() {
                return Err(Error::Tiling(format!("edge {u}->{v} used twice")));
            }
        }
        for &v in &vertices {
            self.vcount[v] += 1;
            if self.vcount[v] > 4 {
                return Err(Error::Tiling(format!("vertex {v} has more than 4 tiles")));
            }
        }
        self.faces.push(Face { layer, vertices });
        Ok(())
    }

    /// Re-derives the boundary cycle from the unglued edges, starting at
    /// `start` if it is still on the boundary.
    fn trace_boundary(&mut self, start: usize) -> Result<()> {
        let mut next: HashMap<usize, usize> = HashMap::with_capacity(self.open_edges.len());
        for &(u, v) in self.open_edges.keys() {
            if next.insert(u, v).is_some() {
                return Err(Error::Tiling(format!("vertex {u} is pinched")));
            }
        }
        let first = if next.contains_key(&start) {
            start
        } else {
            *next.keys().min().ok_or_else(|| Error::Tiling("empty boundary".into()))?
        };
        let mut cycle = vec![first];
        let mut cur = next[&first];
        while cur != first {
            cycle.push(cur);
            cur = *next
                .get(&cur)
                .ok_or_else(|| Error::Tiling(format!("boundary breaks at vertex {cur}")))?;
            if cycle.len() > next.len() {
                return Err(Error::Tiling("boundary is not a simple cycle".into()));
            }
        }
        if cycle.len() != next.len() {
            return Err(Error::Tiling("boundary has several components".into()));
        }
        self.boundary = cycle;
        Ok(())
    }

    fn inflate(&mut self, layer: usize, rule: InflationRule, degree: usize) -> Result<()> {
        let b = self.boundary.clone();
        let m = b.len();
        let count: Vec<u8> = b.iter().map(|&v| self.vcount[v]).collect();
        if count.iter().any(|&c| c == 0 || c >= 4) {
            return Err(Error::Tiling("boundary vertex with invalid tile count".into()));
        }
        // Start at a vertex with one tile if possible so the ring of new
        // tiles opens with an edge tile and closes with a vertex tile.
        let s = (0..m)
            .find(|&i| count[i] == 1)
            .or_else(|| (0..m).find(|&i| count[i] != 3))
            .ok_or_else(|| Error::Tiling("boundary closes up".into()))?;

        // far endpoints of the outward edges: (incoming side, outgoing side)
        let mut far: Vec<Option<(usize, usize)>> = vec![None; m];
        for i in 0..m {
            far[i] = match count[i] {
                1 => {
                    let a = self.new_vertex();
                    let c = self.new_vertex();
                    Some((a, c))
                }
                2 => {
                    let a = self.new_vertex();
                    Some((a, a))
                }
                _ => None,
            };
        }

        let mut t = 0;
        while t < m {
            let i = (s + t) % m;
            // run of edges i..=j joined through vertices with three tiles
            let mut r = 1;
            while count[(i + r) % m] == 3 {
                r += 1;
                if r > m {
                    return Err(Error::Tiling("boundary closes up".into()));
                }
            }
            let end = (i + r) % m;
            let fresh = degree as isize - r as isize - 3;
            if fresh < 0 {
                return Err(Error::Tiling(format!(
                    "a {degree}-gon cannot cover {r} boundary edges"
                )));
            }
            let mut poly = Vec::with_capacity(degree);
            for k in (0..=r).rev() {
                poly.push(b[(i + k) % m]);
            }
            poly.push(far[i].expect("run starts at vertex with < 3 tiles").1);
            for _ in 0..fresh {
                let v = self.new_vertex();
                poly.push(v);
            }
            poly.push(far[end].expect("run ends at vertex with < 3 tiles").0);
            self.add_face(layer, poly)?;

            if rule == InflationRule::Vertex && count[end] == 1 {
                let (fin, fout) = far[end].expect("vertex with one tile has outward edges");
                let mut poly = Vec::with_capacity(degree);
                poly.push(b[end]);
                poly.push(fin);
                for _ in 0..degree - 3 {
                    let v = self.new_vertex();
                    poly.push(v);
                }
                poly.push(fout);
                self.add_face(layer, poly)?;
            }
            t += r;
        }
        let start = far[s].map(|f| f.1).unwrap_or(b[s]);
        self.trace_boundary(start)
    }
}

/// Grows a layered tiling and places a tensor on every tile.
///
/// `assign` chooses the seed for each layer; the planar degree of a tile is
/// the number of physical legs of its seed, and every degree used must be
/// hyperbolic together with `q = 4`.
pub fn build_tiling<F>(
    schlafli: Schlafli,
    layers: usize,
    rule: InflationRule,
    mut assign: F,
) -> Result<TensorNetwork>
where
    F: FnMut(usize) -> TileSeed,
{
    check_hyperbolic(schlafli.p, schlafli.q)?;
    let specs: Vec<TileSeed> = (0..=layers).map(&mut assign).collect();
    for spec in &specs {
        check_hyperbolic(spec.seed.n_physical(), schlafli.q)?;
        if spec.fixed.len() != spec.seed.k_logical() {
            return Err(Error::Config(format!(
                "seed {} has {} logical legs but {} fix entries",
                spec.seed.name(),
                spec.seed.k_logical(),
                spec.fixed.len()
            )));
        }
    }

    let mut b = Builder {
        faces: Vec::new(),
        vcount: Vec::new(),
        open_edges: HashMap::new(),
        glue: Vec::new(),
        boundary: Vec::new(),
    };
    let d0 = specs[0].seed.n_physical();
    let center: Vec<usize> = (0..d0).map(|_| b.new_vertex()).collect();
    b.add_face(0, center)?;
    b.trace_boundary(0)?;
    for layer in 1..=layers {
        b.inflate(layer, rule, specs[layer].seed.n_physical())?;
    }

    let mut tensors: Vec<Tensor> = b
        .faces
        .iter()
        .enumerate()
        .map(|(id, f)| {
            let spec = &specs[f.layer];
            let n = spec.seed.n_physical();
            let mut legs: Vec<TensorLeg> = (0..n)
                .map(|index| TensorLeg {
                    owner: id,
                    index,
                    kind: LegKind::Dangling,
                })
                .collect();
            for (j, fix) in spec.fixed.iter().enumerate() {
                legs.push(TensorLeg {
                    owner: id,
                    index: n + j,
                    kind: match fix {
                        Some(basis) => LegKind::Fixed(*basis),
                        None => LegKind::Logical(usize::MAX),
                    },
                });
            }
            debug_assert_eq!(f.vertices.len(), n);
            Tensor {
                id,
                layer: f.layer,
                seed: spec.seed.clone(),
                legs,
            }
        })
        .collect();
    for &(a, c) in &b.glue {
        tensors[a.tensor].legs[a.leg].kind = LegKind::Contracted(c);
        tensors[c.tensor].legs[c.leg].kind = LegKind::Contracted(a);
    }
    let mut logical_legs = Vec::new();
    for t in tensors.iter_mut() {
        for leg in t.legs.iter_mut() {
            if let LegKind::Logical(_) = leg.kind {
                leg.kind = LegKind::Logical(logical_legs.len());
                logical_legs.push(LegRef::new(leg.owner, leg.index));
            }
        }
    }

    // boundary legs in cycle order, rotated to start at the first dangling
    // leg of the lowest-numbered tensor that has one
    let cycle = &b.boundary;
    let mut order: Vec<LegRef> = (0..cycle.len())
        .map(|i| b.open_edges[&(cycle[i], cycle[(i + 1) % cycle.len()])])
        .collect();
    if let Some(pos) = order
        .iter()
        .enumerate()
        .min_by_key(|(_, r)| (r.tensor, r.leg))
        .map(|(i, _)| i)
    {
        order.rotate_left(pos);
    }

    Ok(TensorNetwork {
        schlafli,
        layers,
        rule,
        tensors,
        boundary: order,
        logical_legs,
    })
}

/// Built-in code families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `[[5,1,3]]` on every tile of `{5,4}`, all logical legs open.
    MaxRateHappy,
    /// `[[5,1,3]]` on `{5,4}` with only the central logical leg open.
    ZeroRateHappy,
    /// Steane heptagon at the center surrounded by planar 8-leg Steane
    /// tensors.
    ZeroRateSteane,
}

impl Preset {
    pub const ALL: [Preset; 3] = [
        Preset::MaxRateHappy,
        Preset::ZeroRateHappy,
        Preset::ZeroRateSteane,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::MaxRateHappy => "max-happy",
            Preset::ZeroRateHappy => "zero-happy",
            Preset::ZeroRateSteane => "zero-steane",
        }
    }

    pub fn build(self, layers: usize) -> Result<TensorNetwork> {
        self.build_with(layers, InflationRule::Vertex)
    }

    pub fn build_with(self, layers: usize, rule: InflationRule) -> Result<TensorNetwork> {
        match self {
            Preset::MaxRateHappy => {
                let seed = Arc::new(perfect_513());
                build_tiling(Schlafli::new(5, 4)?, layers, rule, |_| {
                    TileSeed::open(seed.clone())
                })
            }
            Preset::ZeroRateHappy => {
                let seed = Arc::new(perfect_513());
                build_tiling(Schlafli::new(5, 4)?, layers, rule, |layer| {
                    if layer == 0 {
                        TileSeed::open(seed.clone())
                    } else {
                        TileSeed::fixed_all(seed.clone(), FixBasis::Z)
                    }
                })
            }
            Preset::ZeroRateSteane => {
                let center = Arc::new(steane_713());
                let octagon = Arc::new(steane_octagon());
                build_tiling(Schlafli::new(8, 4)?, layers, rule, |layer| {
                    if layer == 0 {
                        TileSeed::open(center.clone())
                    } else {
                        TileSeed::open(octagon.clone())
                    }
                })
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset {s:?}")))
    }
}

pub fn setup_max_rate_happy(layers: usize) -> Result<TensorNetwork> {
    Preset::MaxRateHappy.build(layers)
}

pub fn setup_zero_rate_happy(layers: usize) -> Result<TensorNetwork> {
    Preset::ZeroRateHappy.build(layers)
}

pub fn setup_zero_rate_steane(layers: usize) -> Result<TensorNetwork> {
    Preset::ZeroRateSteane.build(layers)
}
