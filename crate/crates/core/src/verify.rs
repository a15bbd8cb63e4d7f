//! Checkers for both network definitions and a dense unitary simulator for
//! small circuits.

use num_complex::Complex64;

use crate::circuit::{CliffordCircuit, Gate};
use crate::error::{Error, Result};
use crate::ordered::RotationDag;
use crate::pauli::{CliffordGate, PauliLetter, PauliOperator, PauliTable};

/// For every column, the half-open prefix ranges `[start, end)` over which
/// it has support size 1 under the network's conjugation frame.
fn trivial_intervals(network: &CliffordCircuit, operators: &PauliTable) -> Result<Vec<Vec<(usize, usize)>>> {
    let gates = network.clifford_gates()?;
    for g in &gates {
        g.validate(operators.num_qubits())?;
    }
    let n = operators.num_qubits();
    let m = operators.len();
    let mut table = operators.clone();
    let mut support = table.supports();
    let mut open: Vec<Option<usize>> = support.iter().map(|&s| (s == 1).then_some(0)).collect();
    let mut intervals = vec![Vec::new(); m];

    let occupancy = |t: &PauliTable, q: usize| -> Vec<u64> {
        t.row(q).iter().zip(t.row(n + q)).map(|(z, x)| z | x).collect()
    };

    for (k, &gate) in gates.iter().enumerate() {
        let CliffordGate::Cnot { control, target } = gate else {
            table.conjugate(gate, false);
            continue;
        };
        let before = [occupancy(&table, control), occupancy(&table, target)];
        table.conjugate(gate, false);
        let after = [occupancy(&table, control), occupancy(&table, target)];
        let mut changed = Vec::new();
        for (b, a) in before.iter().zip(&after) {
            for w in 0..b.len() {
                let mut diff = b[w] ^ a[w];
                while diff != 0 {
                    let bit = diff.trailing_zeros() as usize;
                    let j = w * 64 + bit;
                    if a[w] >> bit & 1 == 1 {
                        support[j] += 1;
                    } else {
                        support[j] -= 1;
                    }
                    changed.push(j);
                    diff &= diff - 1;
                }
            }
        }
        for j in changed {
            match (open[j], support[j] == 1) {
                (None, true) => open[j] = Some(k + 1),
                (Some(start), false) => {
                    intervals[j].push((start, k + 1));
                    open[j] = None;
                }
                _ => {}
            }
        }
    }
    let end = gates.len() + 1;
    for (j, start) in open.into_iter().enumerate() {
        if let Some(start) = start {
            intervals[j].push((start, end));
        }
    }
    Ok(intervals)
}

/// Whether every operator reaches support size 1 at some prefix of the
/// network. The witness holds the earliest such prefix per column.
pub fn is_pauli_network(network: &CliffordCircuit, operators: &PauliTable) -> Result<(bool, Option<Vec<usize>>)> {
    let intervals = trivial_intervals(network, operators)?;
    let witness: Option<Vec<usize>> = intervals.iter().map(|iv| iv.first().map(|&(s, _)| s)).collect();
    Ok((witness.is_some(), witness))
}

/// Like [`is_pauli_network`], additionally requiring `p_i <= p_j` whenever
/// `i < j` anticommute. Prefixes are assigned greedily, earliest first, in
/// sequence order.
pub fn is_ordered_pauli_network(
    network: &CliffordCircuit,
    sequence: &PauliTable,
) -> Result<(bool, Option<Vec<usize>>)> {
    let intervals = trivial_intervals(network, sequence)?;
    let dag = RotationDag::build(sequence);
    let mut lower = vec![0usize; sequence.len()];
    let mut witness = Vec::with_capacity(sequence.len());
    for (j, iv) in intervals.iter().enumerate() {
        let lb = lower[j];
        let k = iv.partition_point(|&(_, end)| end <= lb);
        let Some(&(start, _)) = iv.get(k) else {
            return Ok((false, None));
        };
        let p = start.max(lb);
        witness.push(p);
        for &s in dag.successors(j) {
            lower[s] = lower[s].max(p);
        }
    }
    Ok((true, Some(witness)))
}

pub const DENSE_LIMIT: usize = 8;

/// Dense `2^n × 2^n` matrix, row-major. Qubit 0 is the most significant bit
/// of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    num_qubits: usize,
    dim: usize,
    data: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

type Mat2 = [[Complex64; 2]; 2];

fn gate_matrix(gate: CliffordGate) -> Mat2 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    match gate {
        CliffordGate::H(_) => [[ONE * h, ONE * h], [ONE * h, -ONE * h]],
        CliffordGate::S(_) => [[ONE, ZERO], [ZERO, I]],
        CliffordGate::Sx(_) => {
            let (a, b) = (Complex64::new(0.5, 0.5), Complex64::new(0.5, -0.5));
            [[a, b], [b, a]]
        }
        CliffordGate::Cnot { .. } => unreachable!("two-qubit gate"),
    }
}

fn rotation_matrix(axis: PauliLetter, angle: f64) -> Mat2 {
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let p = pauli_2x2(axis);
    let mut m = [[ZERO; 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            let id = if r == k { ONE } else { ZERO };
            m[r][k] = id * c - I * s * p[r][k];
        }
    }
    m
}

fn pauli_2x2(letter: PauliLetter) -> Mat2 {
    match letter {
        PauliLetter::I => [[ONE, ZERO], [ZERO, ONE]],
        PauliLetter::X => [[ZERO, ONE], [ONE, ZERO]],
        PauliLetter::Y => [[ZERO, -I], [I, ZERO]],
        PauliLetter::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

impl DenseUnitary {
    pub fn identity(num_qubits: usize) -> Result<Self> {
        if num_qubits > DENSE_LIMIT {
            return Err(Error::TooLarge {
                what: "dense simulation",
                size: num_qubits,
                limit: DENSE_LIMIT,
            });
        }
        let dim = 1 << num_qubits;
        let mut data = vec![ZERO; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = ONE;
        }
        Ok(DenseUnitary { num_qubits, dim, data })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    /// `self ← M_q · self` for a one-qubit matrix on qubit `q`.
    fn left_one(&mut self, q: usize, m: Mat2) {
        let mask = self.mask(q);
        let dim = self.dim;
        for r0 in (0..dim).filter(|r| r & mask == 0) {
            let r1 = r0 | mask;
            for c in 0..dim {
                let (a, b) = (self.data[r0 * dim + c], self.data[r1 * dim + c]);
                self.data[r0 * dim + c] = m[0][0] * a + m[0][1] * b;
                self.data[r1 * dim + c] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    fn left_cnot(&mut self, control: usize, target: usize) {
        let (cm, tm) = (self.mask(control), self.mask(target));
        let dim = self.dim;
        for r in (0..dim).filter(|r| r & cm != 0 && r & tm == 0) {
            for c in 0..dim {
                self.data.swap(r * dim + c, (r | tm) * dim + c);
            }
        }
    }

    /// `self ← G · self`.
    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::Clifford(CliffordGate::Cnot { control, target }) => self.left_cnot(control, target),
            Gate::Clifford(g) => self.left_one(g.qubits()[0], gate_matrix(g)),
            Gate::Rotation(r) => self.left_one(r.qubit, rotation_matrix(r.axis, r.angle)),
        }
    }

    /// `self ← P · self`, signs included.
    fn left_pauli(&mut self, p: &PauliOperator) {
        let dim = self.dim;
        let mut out = vec![ZERO; dim * dim];
        let mut xmask = 0;
        for q in 0..self.num_qubits {
            if p.x_bit(q) {
                xmask |= self.mask(q);
            }
        }
        for s in 0..dim {
            let mut phase = ONE * p.sign().as_f64();
            for q in 0..self.num_qubits {
                let bit = s & self.mask(q) != 0;
                let flip = if bit { -ONE } else { ONE };
                match p.letter(q) {
                    PauliLetter::I | PauliLetter::X => {}
                    PauliLetter::Z => phase *= flip,
                    PauliLetter::Y => phase *= I * flip,
                }
            }
            let r = s ^ xmask;
            for c in 0..dim {
                out[r * dim + c] = phase * self.data[s * dim + c];
            }
        }
        self.data = out;
    }

    /// `self ← R_P(θ) · self` with `R_P(θ) = cos(θ/2) I − i sin(θ/2) P`.
    pub fn apply_rotation(&mut self, p: &PauliOperator, angle: f64) {
        let mut pu = self.clone();
        pu.left_pauli(p);
        let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
        for (u, v) in self.data.iter_mut().zip(&pu.data) {
            *u = *u * c - I * s * v;
        }
    }

    pub fn mul(&self, rhs: &DenseUnitary) -> DenseUnitary {
        let dim = self.dim;
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.data[r * dim + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * rhs.data[k * dim + c];
                }
            }
        }
        DenseUnitary {
            num_qubits: self.num_qubits,
            dim,
            data,
        }
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let dim = self.dim;
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.data[r * dim + c].conj();
            }
        }
        DenseUnitary {
            num_qubits: self.num_qubits,
            dim,
            data,
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let id = DenseUnitary::identity(self.num_qubits).expect("same size");
        max_deviation(&self.mul(&self.adjoint()), &id) <= tol
    }
}

/// Matrix of a signed Pauli operator.
pub fn pauli_matrix(p: &PauliOperator) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(p.num_qubits())?;
    u.left_pauli(p);
    Ok(u)
}

/// Unitary of a circuit, gates applied in list order.
pub fn dense(circuit: &CliffordCircuit) -> Result<DenseUnitary> {
    circuit.validate()?;
    let mut u = DenseUnitary::identity(circuit.num_qubits)?;
    for g in &circuit.gates {
        u.apply(g);
    }
    Ok(u)
}

/// `R_{P_m}(θ_m) ⋯ R_{P_1}(θ_1)`: the first rotation acts first.
pub fn rotation_product(num_qubits: usize, rotations: &[(PauliOperator, f64)]) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(num_qubits)?;
    for (p, angle) in rotations {
        if p.num_qubits() != num_qubits {
            return Err(Error::LengthMismatch {
                expected: num_qubits,
                found: p.num_qubits(),
            });
        }
        u.apply_rotation(p, *angle);
    }
    Ok(u)
}

fn max_deviation(a: &DenseUnitary, b: &DenseUnitary) -> f64 {
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise deviation between `a` and `b` after aligning the global
/// phase on the largest-magnitude entry of `a`. Infinite if shapes differ.
pub fn phase_aligned_deviation(a: &DenseUnitary, b: &DenseUnitary) -> f64 {
    if a.dim != b.dim {
        return f64::INFINITY;
    }
    let (k, pivot) = a
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        .expect("non-empty matrix");
    let other = b.data[k];
    if other.norm() == 0.0 {
        return f64::INFINITY;
    }
    let phase = (other / pivot) / (other / pivot).norm();
    a.data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

pub fn equiv_up_to_phase(a: &DenseUnitary, b: &DenseUnitary, tol: f64) -> bool {
    phase_aligned_deviation(a, b) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Rotation;

    fn table(ops: &[&str]) -> PauliTable {
        PauliTable::from_strs(ops).unwrap()
    }

    fn cx(c: usize, t: usize) -> Gate {
        Gate::Clifford(CliffordGate::cnot(c, t))
    }

    #[test]
    fn network_examples() {
        let empty = CliffordCircuit::new(3);
        assert_eq!(
            is_pauli_network(&empty, &table(&["ZII", "IXI"])).unwrap(),
            (true, Some(vec![0, 0]))
        );
        let mut one = CliffordCircuit::new(2);
        one.gates.push(cx(0, 1));
        assert_eq!(is_pauli_network(&one, &table(&["ZZ"])).unwrap(), (true, Some(vec![1])));
        assert_eq!(
            is_pauli_network(&CliffordCircuit::new(2), &table(&["ZZ"])).unwrap(),
            (false, None)
        );
        let mut with_rot = one.clone();
        with_rot.gates.push(Gate::Rotation(Rotation {
            axis: PauliLetter::Z,
            qubit: 0,
            angle: 1.0,
            origin: None,
        }));
        assert!(matches!(
            is_pauli_network(&with_rot, &table(&["ZZ"])),
            Err(Error::NonCliffordGate(1))
        ));
    }

    #[test]
    fn ordered_examples() {
        let empty = CliffordCircuit::new(1);
        assert_eq!(
            is_ordered_pauli_network(&empty, &table(&["Z", "Z"])).unwrap(),
            (true, Some(vec![0, 0]))
        );
        assert_eq!(
            is_ordered_pauli_network(&empty, &table(&["Z", "X"])).unwrap(),
            (true, Some(vec![0, 0]))
        );
        // "XI" is trivial only at prefix 0, "ZZ" only after the CNOT.
        let mut c = CliffordCircuit::new(2);
        c.gates.push(cx(0, 1));
        c.gates.push(Gate::Clifford(CliffordGate::H(0)));
        c.gates.push(cx(1, 0));
        let seq = table(&["ZZ", "XI"]);
        assert!(is_pauli_network(&c, &seq).unwrap().0);
        assert!(!is_ordered_pauli_network(&c, &seq).unwrap().0);
        assert!(is_ordered_pauli_network(&c, &table(&["XI", "ZZ"])).unwrap().0);
    }

    /// Exhaustive search over prefix assignments.
    fn ordered_brute_force(c: &CliffordCircuit, seq: &PauliTable) -> bool {
        let intervals = trivial_intervals(c, seq).unwrap();
        let feasible: Vec<Vec<usize>> = intervals
            .iter()
            .map(|iv| iv.iter().flat_map(|&(s, e)| s..e).collect())
            .collect();
        let edges = RotationDag::build(seq).edges();
        fn go(i: usize, feasible: &[Vec<usize>], edges: &[(usize, usize)], p: &mut Vec<usize>) -> bool {
            if i == feasible.len() {
                return edges.iter().all(|&(a, b)| p[a] <= p[b]);
            }
            for &x in &feasible[i] {
                p.push(x);
                if go(i + 1, feasible, edges, p) {
                    return true;
                }
                p.pop();
            }
            false
        }
        go(0, &feasible, &edges, &mut Vec::new())
    }

    #[test]
    fn greedy_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let letters = ['I', 'X', 'Y', 'Z'];
        for _ in 0..400 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=6);
            let ops: Vec<String> = (0..m)
                .map(|_| loop {
                    let s: String = (0..n).map(|_| letters[rng.gen_range(0..4)]).collect();
                    if s.chars().any(|c| c != 'I') {
                        break s;
                    }
                })
                .collect();
            let refs: Vec<&str> = ops.iter().map(String::as_str).collect();
            let seq = table(&refs);
            let mut c = CliffordCircuit::new(n);
            for _ in 0..rng.gen_range(0..8) {
                let q = rng.gen_range(0..n);
                let g = match rng.gen_range(0..4) {
                    0 if n > 1 => CliffordGate::cnot(q, (q + rng.gen_range(1..n)) % n),
                    1 => CliffordGate::S(q),
                    2 => CliffordGate::Sx(q),
                    _ => CliffordGate::H(q),
                };
                c.push(g);
            }
            let (ok, witness) = is_ordered_pauli_network(&c, &seq).unwrap();
            assert_eq!(ok, ordered_brute_force(&c, &seq), "{ops:?} {:?}", c.to_text());
            if let Some(w) = witness {
                let edges = RotationDag::build(&seq).edges();
                assert!(edges.iter().all(|&(a, b)| w[a] <= w[b]));
            }
        }
    }

    #[test]
    fn dense_examples() {
        let id = dense(&CliffordCircuit::new(2)).unwrap();
        assert_eq!(id, DenseUnitary::identity(2).unwrap());

        let mut h = CliffordCircuit::new(1);
        h.push(CliffordGate::H(0));
        let u = dense(&h).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (r, c, v) in [(0, 0, s), (0, 1, s), (1, 0, s), (1, 1, -s)] {
            assert!((u.get(r, c) - ONE * v).norm() < 1e-12);
        }

        let z: PauliOperator = "Z".parse().unwrap();
        let rz = rotation_product(1, &[(z.clone(), std::f64::consts::PI)]).unwrap();
        let zm = pauli_matrix(&z).unwrap();
        assert!(equiv_up_to_phase(&rz, &zm, 1e-12));
        assert!((rz.get(0, 0) - (-I)).norm() < 1e-12);
        assert!(DenseUnitary::identity(9).is_err());
    }

    #[test]
    fn cnot_orientation() {
        // Qubit 0 is the most significant bit: CX 0 1 maps |10> to |11>.
        let mut c = CliffordCircuit::new(2);
        c.gates.push(cx(0, 1));
        let u = dense(&c).unwrap();
        assert_eq!(u.get(3, 2), ONE);
        assert_eq!(u.get(2, 2), ZERO);
    }

    #[test]
    fn phase_alignment() {
        let a = pauli_matrix(&"XY".parse().unwrap()).unwrap();
        let mut b = a.clone();
        for v in b.data.iter_mut() {
            *v *= Complex64::from_polar(1.0, 0.7);
        }
        assert!(equiv_up_to_phase(&a, &b, 1e-12));
        let c = pauli_matrix(&"-XY".parse().unwrap()).unwrap();
        assert!(equiv_up_to_phase(&a, &c, 1e-12));
        let d = pauli_matrix(&"XZ".parse().unwrap()).unwrap();
        assert!(!equiv_up_to_phase(&a, &d, 1e-6));
        assert!(a.is_unitary(1e-12));
    }
}
