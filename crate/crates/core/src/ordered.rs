//! Order-preserving synthesis for rotation sequences.
//!
//! Rotation `j` must not be placed before an earlier rotation `i < j` it
//! anticommutes with. Only the front layer of the precedence DAG is scored;
//! blocked rotations still follow the network's frame.

use crate::pauli::{PauliOperator, PauliTable};
use crate::synth::{run, Engine, Mode, SynthesisResult};

/// Anticommutation precedence over a rotation sequence. Vertices are column
/// indices of the table the DAG was built from.
#[derive(Clone, Debug)]
pub struct RotationDag {
    successors: Vec<Vec<usize>>,
    in_degree: Vec<usize>,
    removed: Vec<bool>,
}

impl RotationDag {
    /// Tests every pair of columns; edge `i → j` iff `i < j` and they
    /// anticommute.
    pub fn build(table: &PauliTable) -> Self {
        let ops: Vec<PauliOperator> = table.columns();
        let m = ops.len();
        let mut successors = vec![Vec::new(); m];
        let mut in_degree = vec![0; m];
        for i in 0..m {
            for j in i + 1..m {
                if ops[i].anticommutes(&ops[j]).expect("columns share a qubit count") {
                    successors[i].push(j);
                    in_degree[j] += 1;
                }
            }
        }
        RotationDag {
            successors,
            in_degree,
            removed: vec![false; m],
        }
    }

    pub fn len(&self) -> usize {
        self.successors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.successors.is_empty()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.successors[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.iter().map(move |&j| (i, j)))
            .collect()
    }

    /// Unremoved vertices with no unresolved predecessor, ascending.
    pub fn front_layer(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&v| !self.removed[v] && self.in_degree[v] == 0)
            .collect()
    }

    /// Removes `v` and returns the successors that became free, ascending.
    pub fn resolve(&mut self, v: usize) -> Vec<usize> {
        debug_assert!(!self.removed[v] && self.in_degree[v] == 0);
        self.removed[v] = true;
        let mut freed = Vec::new();
        for &s in &self.successors[v] {
            self.in_degree[s] -= 1;
            if self.in_degree[s] == 0 {
                freed.push(s);
            }
        }
        freed
    }
}

pub fn build_dag(sequence: &PauliTable) -> RotationDag {
    RotationDag::build(sequence)
}

/// Synthesizes a network in which anticommuting rotations are placed in
/// sequence order.
pub fn synth_ordered(sequence: &PauliTable, mode: Mode) -> SynthesisResult {
    run(Engine::ordered(sequence), mode)
}
