//! Greedy Pauli-network synthesis: CNOT-count and CNOT-depth heuristics.
//!
//! Both heuristics share one engine. The table is kept in the frame of the
//! network built so far: after appending a gate `G`, every remaining column
//! `P` becomes `G P G†`. A column is popped, and its rotation placed, as soon
//! as it acts on a single qubit.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::chunk::{best_on_pair, cli_all, enumerate_chunks, score_with, PlacedChunk};
use crate::circuit::CliffordCircuit;
use crate::error::{Error, Result};
use crate::matching::{max_weight_matching, WeightedGraph};
use crate::ordered::RotationDag;
use crate::pauli::{CliffordGate, PauliLetter, PauliTable, Sign};

/// Optimization objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Count,
    Depth,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "count" => Ok(Mode::Count),
            "depth" => Ok(Mode::Depth),
            other => Err(Error::Invalid(format!("unknown mode {other:?} (expected count or depth)"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Count => "count",
            Mode::Depth => "depth",
        })
    }
}

/// Where a rotation lands in the network and what it has become there.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Placement {
    /// Index of the rotation in the input sequence.
    pub rotation: usize,
    /// Number of network gates preceding the rotation.
    pub prefix: usize,
    pub qubit: usize,
    pub letter: PauliLetter,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisResult {
    pub num_qubits: usize,
    pub network: Vec<CliffordGate>,
    /// One entry per non-identity input rotation, in placement order.
    pub placements: Vec<Placement>,
    /// Length of the input sequence, including dropped identities.
    pub input_len: usize,
}

impl SynthesisResult {
    pub fn placement_of(&self, rotation: usize) -> Option<&Placement> {
        self.placements.iter().find(|p| p.rotation == rotation)
    }

    pub fn network_circuit(&self) -> CliffordCircuit {
        CliffordCircuit::from_clifford(self.num_qubits, &self.network)
    }

    pub fn cnot_count(&self) -> usize {
        self.network.iter().filter(|g| g.is_cnot()).count()
    }
}

/// Synthesis state. `front` holds the columns eligible for scoring and
/// popping; `rest` holds columns still blocked by the ordering DAG. Both are
/// conjugated by every emitted gate.
pub(crate) struct Engine {
    front: PauliTable,
    rest: PauliTable,
    dag: Option<Dag>,
    network: Vec<CliffordGate>,
    placements: Vec<Placement>,
    input_len: usize,
}

struct Dag {
    graph: RotationDag,
    /// Vertex id for each input index.
    vertex_of: Vec<usize>,
    /// Input index for each vertex.
    origin_of: Vec<usize>,
}

impl Engine {
    pub(crate) fn unordered(table: &PauliTable) -> Self {
        Engine {
            front: table.clone(),
            rest: PauliTable::new(table.num_qubits()),
            dag: None,
            network: Vec::new(),
            placements: Vec::new(),
            input_len: table.input_len(),
        }
    }

    pub(crate) fn ordered(table: &PauliTable) -> Self {
        let graph = RotationDag::build(table);
        let mut vertex_of = vec![usize::MAX; table.input_len()];
        for (v, &o) in table.origins().iter().enumerate() {
            vertex_of[o] = v;
        }
        let free: Vec<usize> = graph.front_layer();
        let mut engine = Engine {
            front: PauliTable::new(table.num_qubits()),
            rest: table.clone(),
            dag: Some(Dag {
                graph,
                vertex_of,
                origin_of: table.origins().to_vec(),
            }),
            network: Vec::new(),
            placements: Vec::new(),
            input_len: table.input_len(),
        };
        let origins: Vec<usize> = free.iter().map(|&v| table.origin(v)).collect();
        engine.release(&origins);
        engine
    }

    pub(crate) fn front(&self) -> &PauliTable {
        &self.front
    }

    pub(crate) fn is_done(&self) -> bool {
        self.front.is_empty() && self.rest.is_empty()
    }

    /// Moves the columns with the given origins from `rest` to the back of
    /// `front`, keeping their relative order in `rest`.
    fn release(&mut self, origins: &[usize]) {
        if origins.is_empty() {
            return;
        }
        let mut moving = vec![false; self.input_len];
        for &o in origins {
            moving[o] = true;
        }
        let mut keep = Vec::with_capacity(self.rest.len());
        for j in 0..self.rest.len() {
            let o = self.rest.origin(j);
            if moving[o] {
                self.front
                    .push_column(&self.rest.column(j), o)
                    .expect("tables share a qubit count");
            } else {
                keep.push(j);
            }
        }
        self.rest.select_columns(&keep);
        self.rest.set_input_len(self.input_len);
    }

    /// Sorts `front` by support and pops every single-qubit column, releasing
    /// DAG successors until no further column can be popped.
    pub(crate) fn pop_trivial(&mut self) {
        loop {
            let (order, supports) = self.front.support_order();
            let k = supports.iter().take_while(|&&s| s <= 1).count();
            if k == 0 {
                if order.iter().enumerate().any(|(i, &j)| i != j) {
                    self.front.select_columns(&order);
                }
                return;
            }
            let prefix = self.network.len();
            let mut freed = Vec::new();
            for j in 0..k {
                debug_assert_eq!(supports[j], 1, "conjugation never produces identity");
                let c = order[j];
                let rotation = self.front.origin(c);
                let qubit = (0..self.front.num_qubits())
                    .find(|&q| !self.front.letter(q, c).is_identity())
                    .expect("support-1 column");
                self.placements.push(Placement {
                    rotation,
                    prefix,
                    qubit,
                    letter: self.front.letter(qubit, c),
                    sign: self.front.sign(c),
                });
                if let Some(dag) = self.dag.as_mut() {
                    for v in dag.graph.resolve(dag.vertex_of[rotation]) {
                        freed.push(dag.origin_of[v]);
                    }
                }
            }
            self.front.select_columns(&order[k..]);
            self.front.set_input_len(self.input_len);
            self.release(&freed);
            if freed.is_empty() {
                return;
            }
        }
    }

    pub(crate) fn apply(&mut self, placed: &PlacedChunk) {
        for gate in placed.gates() {
            self.front.conjugate(gate, false);
            self.rest.conjugate(gate, false);
            self.network.push(gate);
        }
    }

    pub(crate) fn finish(self) -> SynthesisResult {
        SynthesisResult {
            num_qubits: self.front.num_qubits(),
            network: self.network,
            placements: self.placements,
            input_len: self.input_len,
        }
    }

    /// One greedy chunk on the leading column.
    pub(crate) fn count_step(&mut self) {
        let placed = best_on_leading(&self.front);
        self.apply(&placed);
        self.pop_trivial();
    }

    /// One matching layer. Returns `true` if the leading column's support
    /// went down (or it was placed).
    pub(crate) fn depth_step(&mut self, force: bool) -> bool {
        let lead = self.front.origin(0);
        let lead_support = self.front.support_size(0);
        let forced = force.then(|| best_on_leading(&self.front));
        for placed in depth_layer(&self.front, forced) {
            self.apply(&placed);
            self.pop_trivial();
        }
        match self.front.origins().iter().position(|&o| o == lead) {
            None => true,
            Some(j) => self.front.support_size(j) < lead_support,
        }
    }
}

/// Best placed chunk over ordered pairs of the leading column's support.
/// Chunks outer, pairs inner, strict improvement: the lowest
/// `(chunk, control, target)` wins ties.
fn best_on_leading(table: &PauliTable) -> PlacedChunk {
    let support: Vec<usize> = (0..table.num_qubits())
        .filter(|&q| !table.letter(q, 0).is_identity())
        .collect();
    let mut best: Option<(PlacedChunk, i64)> = None;
    for chunk in enumerate_chunks() {
        for &c in &support {
            for &t in &support {
                if c == t {
                    continue;
                }
                let placed = chunk.place(c, t);
                // Both qubits carry the leading column, so neither has a
                // leading identity yet.
                let s = score_with(table, &placed, 0, 0);
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((placed, s));
                }
            }
        }
    }
    let (placed, s) = best.expect("leading column has support at least 2");
    assert!(s >= 1, "no chunk reduces the leading column");
    placed
}

/// Chunks for one layer, sorted by smallest touched qubit. When `forced` is
/// given, its qubits are excluded from the matching and it joins the layer.
fn depth_layer(table: &PauliTable, forced: Option<PlacedChunk>) -> Vec<PlacedChunk> {
    let n = table.num_qubits();
    let cli = cli_all(table);
    let blocked = |q: usize| forced.is_some_and(|f| f.control == q || f.target == q);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !blocked(i) && !blocked(j))
        .collect();
    let scored: Vec<(PlacedChunk, i64)> = pairs
        .par_iter()
        .map(|&(i, j)| best_on_pair(table, i, j, &cli))
        .collect();

    let mut graph = WeightedGraph::new(n);
    for (&(i, j), &(_, w)) in pairs.iter().zip(&scored) {
        if w > 0 {
            graph.set_weight(i, j, w);
        }
    }
    let matching = max_weight_matching(&graph);
    let mut layer: Vec<PlacedChunk> = matching
        .pairs
        .iter()
        .map(|pair| {
            let k = pairs.binary_search(pair).expect("matched pair was scored");
            scored[k].0
        })
        .chain(forced)
        .collect();
    layer.sort_by_key(|p| p.control.min(p.target));
    layer
}

/// Greedy CNOT-count synthesis.
pub fn synth_count(table: &PauliTable) -> SynthesisResult {
    run(Engine::unordered(table), Mode::Count)
}

/// Matching-based CNOT-depth synthesis.
pub fn synth_depth(table: &PauliTable) -> SynthesisResult {
    run(Engine::unordered(table), Mode::Depth)
}

pub fn synthesize(table: &PauliTable, mode: Mode) -> SynthesisResult {
    run(Engine::unordered(table), mode)
}

pub(crate) fn run(mut engine: Engine, mode: Mode) -> SynthesisResult {
    engine.pop_trivial();
    let mut force = false;
    while !engine.front().is_empty() {
        match mode {
            Mode::Count => engine.count_step(),
            Mode::Depth => force = !engine.depth_step(force),
        }
    }
    debug_assert!(engine.is_done());
    engine.finish()
}
