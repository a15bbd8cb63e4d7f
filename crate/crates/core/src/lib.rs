//! Pauli-network synthesis for sequences of Pauli rotations.
//!
//! A Pauli network is a CNOT-based Clifford circuit along whose prefixes every
//! input Pauli operator becomes a single-qubit operator at least once. The
//! synthesizers here build such networks greedily from two-qubit chunks, with
//! a CNOT-count and a CNOT-depth objective, optionally respecting the order
//! of non-commuting rotations.

pub mod bench;
pub mod chunk;
pub mod circuit;
pub mod error;
pub mod extract;
pub mod matching;
pub mod ordered;
pub mod pauli;
pub mod synth;
pub mod verify;

pub use chunk::{enumerate_chunks, score, Chunk, ControlPrep, PlacedChunk, TargetPrep};
pub use error::{Error, Result};
pub use matching::{max_weight_matching, Matching, WeightedGraph};
pub use pauli::{CliffordGate, PauliLetter, PauliOperator, PauliTable, Sign};
pub use circuit::{naive_synthesis, realize, realize_closed, CliffordCircuit, Gate, Metrics, Rotation};
pub use extract::{extract_rotations, parse_circuit, resynthesize, InputCircuit, InputGate};
pub use ordered::{build_dag, synth_ordered, RotationDag};
pub use synth::{synth_count, synth_depth, synthesize, Mode, Placement, SynthesisResult};
pub use verify::{dense, equiv_up_to_phase, is_ordered_pauli_network, is_pauli_network, DenseUnitary};
