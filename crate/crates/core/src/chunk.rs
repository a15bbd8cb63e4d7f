//! Single-CNOT Clifford chunks and the leading-identity score.
//!
//! A chunk is `CNOT · (U1 ⊗ U2)` with `U1 ∈ {I, H, √X}` on the control and
//! `U2 ∈ {I, H, S}` on the target. Nine templates, each placeable on either
//! orientation of a qubit pair.

use crate::pauli::{CliffordGate, PauliLetter, PauliOperator, PauliTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ControlPrep {
    I,
    H,
    Sx,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetPrep {
    I,
    H,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Chunk {
    pub control_prep: ControlPrep,
    pub target_prep: TargetPrep,
}

const CONTROL_PREPS: [ControlPrep; 3] = [ControlPrep::I, ControlPrep::H, ControlPrep::Sx];
const TARGET_PREPS: [TargetPrep; 3] = [TargetPrep::I, TargetPrep::H, TargetPrep::S];

/// The nine chunk templates; control prep outer, target prep inner.
pub fn enumerate_chunks() -> [Chunk; 9] {
    std::array::from_fn(|i| Chunk {
        control_prep: CONTROL_PREPS[i / 3],
        target_prep: TARGET_PREPS[i % 3],
    })
}

impl Chunk {
    /// Position in [`enumerate_chunks`].
    pub fn index(&self) -> usize {
        let c = CONTROL_PREPS.iter().position(|p| *p == self.control_prep).unwrap();
        let t = TARGET_PREPS.iter().position(|p| *p == self.target_prep).unwrap();
        3 * c + t
    }

    pub fn place(self, control: usize, target: usize) -> PlacedChunk {
        PlacedChunk {
            chunk: self,
            control,
            target,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlacedChunk {
    pub chunk: Chunk,
    pub control: usize,
    pub target: usize,
}

impl PlacedChunk {
    /// Pre-gates (identity omitted) followed by the CNOT, in time order.
    pub fn gates(&self) -> Vec<CliffordGate> {
        let mut gates = Vec::with_capacity(3);
        match self.chunk.control_prep {
            ControlPrep::I => {}
            ControlPrep::H => gates.push(CliffordGate::H(self.control)),
            ControlPrep::Sx => gates.push(CliffordGate::Sx(self.control)),
        }
        match self.chunk.target_prep {
            TargetPrep::I => {}
            TargetPrep::H => gates.push(CliffordGate::H(self.target)),
            TargetPrep::S => gates.push(CliffordGate::S(self.target)),
        }
        gates.push(CliffordGate::cnot(self.control, self.target));
        gates
    }

    /// Lexicographic tie-break key: lower wins.
    pub fn key(&self) -> (usize, usize, usize) {
        (self.chunk.index(), self.control, self.target)
    }
}

#[inline]
fn first_set(bits: u64, word: usize) -> Option<usize> {
    (bits != 0).then(|| word * 64 + bits.trailing_zeros() as usize)
}

/// Number of leading columns acting as identity on qubit `q`.
pub fn cli_metric(table: &PauliTable, q: usize) -> usize {
    let n = table.num_qubits();
    table
        .row(q)
        .iter()
        .zip(table.row(n + q))
        .enumerate()
        .find_map(|(w, (z, x))| first_set(z | x, w))
        .unwrap_or(table.len())
}

/// [`cli_metric`] for every qubit.
pub fn cli_all(table: &PauliTable) -> Vec<usize> {
    (0..table.num_qubits()).map(|q| cli_metric(table, q)).collect()
}

/// Leading-identity counts on `(control, target)` after conjugating by the
/// chunk, computed word by word without touching the table.
pub(crate) fn cli_after(table: &PauliTable, placed: &PlacedChunk) -> (usize, usize) {
    let n = table.num_qubits();
    let (c, t) = (placed.control, placed.target);
    let (zc, xc) = (table.row(c), table.row(n + c));
    let (zt, xt) = (table.row(t), table.row(n + t));
    let mut cli_c = None;
    let mut cli_t = None;
    for w in 0..zc.len() {
        let (mut zcw, mut xcw) = (zc[w], xc[w]);
        let (mut ztw, mut xtw) = (zt[w], xt[w]);
        match placed.chunk.control_prep {
            ControlPrep::I => {}
            ControlPrep::H => std::mem::swap(&mut zcw, &mut xcw),
            ControlPrep::Sx => xcw ^= zcw,
        }
        match placed.chunk.target_prep {
            TargetPrep::I => {}
            TargetPrep::H => std::mem::swap(&mut ztw, &mut xtw),
            TargetPrep::S => ztw ^= xtw,
        }
        xtw ^= xcw;
        zcw ^= ztw;
        if cli_c.is_none() {
            cli_c = first_set(zcw | xcw, w);
        }
        if cli_t.is_none() {
            cli_t = first_set(ztw | xtw, w);
        }
        if cli_c.is_some() && cli_t.is_some() {
            break;
        }
    }
    let len = table.len();
    (cli_c.unwrap_or(len), cli_t.unwrap_or(len))
}

/// Score with precomputed leading-identity counts for the two qubits.
pub(crate) fn score_with(
    table: &PauliTable,
    placed: &PlacedChunk,
    before_control: usize,
    before_target: usize,
) -> i64 {
    let (after_c, after_t) = cli_after(table, placed);
    let gain_c = after_c as i64 - before_control as i64;
    let gain_t = after_t as i64 - before_target as i64;
    gain_c.max(gain_t)
}

/// Largest leading-identity gain on the two touched qubits. Does not modify
/// the table.
pub fn score(table: &PauliTable, placed: &PlacedChunk) -> i64 {
    score_with(
        table,
        placed,
        cli_metric(table, placed.control),
        cli_metric(table, placed.target),
    )
}

/// Best placement on the unordered pair `{i, j}` over all nine chunks and
/// both orientations. Ties go to the lowest [`PlacedChunk::key`].
pub(crate) fn best_on_pair(table: &PauliTable, i: usize, j: usize, cli: &[usize]) -> (PlacedChunk, i64) {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let mut best: Option<(PlacedChunk, i64)> = None;
    for chunk in enumerate_chunks() {
        for (c, t) in [(lo, hi), (hi, lo)] {
            let placed = chunk.place(c, t);
            let s = score_with(table, &placed, cli[c], cli[t]);
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((placed, s));
            }
        }
    }
    best.expect("catalog is non-empty")
}

/// Whether some catalog chunk, with the control on the first qubit, maps both
/// `Z⊗Z` and `p⊗q` to operators that are identity on the control.
pub fn coreduction_condition(p: PauliLetter, q: PauliLetter) -> bool {
    let zz = PauliOperator::from_letters(&[PauliLetter::Z, PauliLetter::Z], Default::default());
    let pq = PauliOperator::from_letters(&[p, q], Default::default());
    enumerate_chunks().iter().any(|chunk| {
        let mut table = PauliTable::new(2);
        table.push_column(&zz, 0).unwrap();
        table.push_column(&pq, 1).unwrap();
        for g in chunk.place(0, 1).gates() {
            table.conjugate(g, false);
        }
        (0..2).all(|j| table.letter(0, j).is_identity())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliLetter::*;
    use crate::pauli::Sign;

    fn table(ops: &[&str]) -> PauliTable {
        PauliTable::from_strs(ops).unwrap()
    }

    #[test]
    fn catalog_order() {
        let chunks = enumerate_chunks();
        assert_eq!(chunks.len(), 9);
        assert_eq!(
            chunks[0],
            Chunk {
                control_prep: ControlPrep::I,
                target_prep: TargetPrep::I
            }
        );
        assert!(chunks.contains(&Chunk {
            control_prep: ControlPrep::Sx,
            target_prep: TargetPrep::S
        }));
        for (i, c) in chunks.iter().enumerate() {
            assert_eq!(c.index(), i);
        }
    }

    #[test]
    fn cli_examples() {
        assert_eq!(cli_metric(&table(&["ZZ", "IZ"]), 0), 0);
        assert_eq!(cli_metric(&table(&["IZ", "ZZ"]), 0), 1);
        assert_eq!(cli_metric(&table(&["IZ", "IZ"]), 0), 2);
        assert_eq!(cli_metric(&PauliTable::new(3), 1), 0);
    }

    #[test]
    fn score_examples() {
        let bare = enumerate_chunks()[0];
        assert_eq!(score(&table(&["ZZ"]), &bare.place(0, 1)), 1);
        assert_eq!(score(&table(&["ZZ", "ZZ"]), &bare.place(0, 1)), 2);
        let xi = table(&["XI"]);
        for chunk in enumerate_chunks() {
            assert!(score(&xi, &chunk.place(0, 1)) <= 0);
            assert!(score(&xi, &chunk.place(1, 0)) <= 0);
        }
    }

    #[test]
    fn chunk_gates() {
        let c = Chunk {
            control_prep: ControlPrep::Sx,
            target_prep: TargetPrep::S,
        };
        assert_eq!(
            c.place(2, 0).gates(),
            vec![CliffordGate::Sx(2), CliffordGate::S(0), CliffordGate::cnot(2, 0)]
        );
        assert_eq!(enumerate_chunks()[0].place(0, 1).gates(), vec![CliffordGate::cnot(0, 1)]);
    }

    #[test]
    fn coreduction() {
        assert!(coreduction_condition(Z, Z));
        assert!(coreduction_condition(Z, X));
        assert!(coreduction_condition(Z, Y));
        assert!(!coreduction_condition(X, Z));
        let reducible: Vec<_> = PauliLetter::ALL
            .iter()
            .flat_map(|&p| PauliLetter::ALL.iter().map(move |&q| (p, q)))
            .filter(|&(p, q)| coreduction_condition(p, q))
            .collect();
        // Z⊗{X,Y,Z}, plus the pairs already identity on the control that
        // stay so under CNOT or CNOT·(I⊗S).
        assert_eq!(reducible, vec![(I, I), (I, X), (I, Y), (Z, X), (Z, Y), (Z, Z)]);
    }

    /// Apply-and-measure score.
    fn score_by_application(table: &PauliTable, gates: &[CliffordGate], c: usize, t: usize) -> i64 {
        let mut after = table.clone();
        for &g in gates {
            after.apply_gate(g).unwrap();
        }
        let d = |q| cli_metric(&after, q) as i64 - cli_metric(table, q) as i64;
        d(c).max(d(t))
    }

    /// The six one-qubit Cliffords modulo Paulis, as gate sequences.
    fn one_qubit_cliffords(q: usize) -> [Vec<CliffordGate>; 6] {
        use CliffordGate::{Sx, H, S};
        [vec![], vec![H(q)], vec![S(q)], vec![S(q), H(q)], vec![H(q), S(q)], vec![Sx(q)]]
    }

    fn best_general(table: &PauliTable) -> i64 {
        let mut best = i64::MIN;
        for (c, t) in [(0, 1), (1, 0)] {
            for v1 in one_qubit_cliffords(c) {
                for v2 in one_qubit_cliffords(t) {
                    let mut gates = v1.clone();
                    gates.extend(v2);
                    gates.push(CliffordGate::cnot(c, t));
                    best = best.max(score_by_application(table, &gates, c, t));
                }
            }
        }
        best
    }

    fn best_catalog(table: &PauliTable) -> i64 {
        let cli = cli_all(table);
        best_on_pair(table, 0, 1, &cli).1
    }

    #[test]
    fn catalog_sufficiency_exhaustive() {
        let letters = PauliLetter::ALL;
        for a in letters {
            for b in letters {
                for p in letters {
                    for q in letters {
                        let mut t = PauliTable::new(2);
                        t.push_column(&PauliOperator::from_letters(&[a, b], Sign::Plus), 0).unwrap();
                        t.push_column(&PauliOperator::from_letters(&[p, q], Sign::Plus), 1).unwrap();
                        assert_eq!(best_catalog(&t), best_general(&t), "{a}{b} {p}{q}");
                    }
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn table(n: usize) -> impl Strategy<Value = PauliTable> {
            prop::collection::vec(prop::collection::vec(0usize..4, n), 1..90).prop_map(move |cols| {
                let mut t = PauliTable::new(n);
                for (i, c) in cols.iter().enumerate() {
                    let letters: Vec<PauliLetter> = c.iter().map(|&k| PauliLetter::ALL[k]).collect();
                    t.push_column(&PauliOperator::from_letters(&letters, Sign::Plus), i).unwrap();
                }
                t
            })
        }

        proptest! {
            #[test]
            fn score_is_pure_and_correct(t in table(4)) {
                let copy = t.clone();
                for chunk in enumerate_chunks() {
                    for c in 0..4 {
                        for tq in (0..4).filter(|&x| x != c) {
                            let placed = chunk.place(c, tq);
                            let s = score(&t, &placed);
                            prop_assert_eq!(&t, &copy);
                            prop_assert_eq!(s, score_by_application(&t, &placed.gates(), c, tq));
                        }
                    }
                }
            }

            #[test]
            fn catalog_sufficiency(t in table(2)) {
                prop_assert_eq!(best_catalog(&t), best_general(&t));
            }
        }
    }
}
