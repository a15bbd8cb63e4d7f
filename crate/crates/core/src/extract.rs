//! Clifford+rotation input circuits: parsing, rewriting as a Clifford times
//! a rotation sequence, and resynthesis through the ordered heuristics.

use std::f64::consts::FRAC_PI_4;

use crate::circuit::{parse_angle, parse_header, parse_qubit, CliffordCircuit, Gate, Rotation};
use crate::error::{Error, Result};
use crate::ordered::synth_ordered;
use crate::pauli::{CliffordGate, PauliLetter, PauliOperator, PauliTable};
use crate::synth::Mode;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InputGate {
    Cx(usize, usize),
    H(usize),
    S(usize),
    Sdg(usize),
    Sx(usize),
    X(usize),
    Y(usize),
    Z(usize),
    T(usize),
    Tdg(usize),
    Rz(usize, f64),
    Rx(usize, f64),
    Ry(usize, f64),
}

impl InputGate {
    /// Axis, qubit and angle for non-Clifford gates.
    pub fn rotation(&self) -> Option<(PauliLetter, usize, f64)> {
        match *self {
            InputGate::T(q) => Some((PauliLetter::Z, q, FRAC_PI_4)),
            InputGate::Tdg(q) => Some((PauliLetter::Z, q, -FRAC_PI_4)),
            InputGate::Rz(q, a) => Some((PauliLetter::Z, q, a)),
            InputGate::Rx(q, a) => Some((PauliLetter::X, q, a)),
            InputGate::Ry(q, a) => Some((PauliLetter::Y, q, a)),
            _ => None,
        }
    }

    pub fn is_clifford(&self) -> bool {
        self.rotation().is_none()
    }

    /// The gate over `{CNOT, H, S, √X}` in time order, up to global phase.
    /// Empty for rotations.
    pub fn clifford_gates(&self) -> Vec<CliffordGate> {
        use CliffordGate as G;
        match *self {
            InputGate::Cx(c, t) => vec![G::cnot(c, t)],
            InputGate::H(q) => vec![G::H(q)],
            InputGate::S(q) => vec![G::S(q)],
            InputGate::Sdg(q) => vec![G::S(q); 3],
            InputGate::Sx(q) => vec![G::Sx(q)],
            InputGate::X(q) => vec![G::Sx(q); 2],
            InputGate::Y(q) => vec![G::Sx(q), G::Sx(q), G::S(q), G::S(q)],
            InputGate::Z(q) => vec![G::S(q); 2],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct InputCircuit {
    pub num_qubits: usize,
    pub gates: Vec<InputGate>,
}

impl InputCircuit {
    /// Same unitary (up to global phase) as a [`CliffordCircuit`].
    pub fn to_circuit(&self) -> CliffordCircuit {
        let mut c = CliffordCircuit::new(self.num_qubits);
        for g in &self.gates {
            match g.rotation() {
                Some((axis, qubit, angle)) => c.push(Gate::Rotation(Rotation {
                    axis,
                    qubit,
                    angle,
                    origin: None,
                })),
                None => c.extend_clifford(&g.clifford_gates()),
            }
        }
        c
    }
}

/// Toffoli with controls `a`, `b` and target `c`: 6 CNOTs, 7 T/T†, 2 H.
pub fn toffoli(a: usize, b: usize, c: usize) -> [InputGate; 15] {
    use InputGate::*;
    [
        H(c),
        Cx(b, c),
        Tdg(c),
        Cx(a, c),
        T(c),
        Cx(b, c),
        Tdg(c),
        Cx(a, c),
        T(b),
        T(c),
        H(c),
        Cx(a, b),
        T(a),
        Tdg(b),
        Cx(a, b),
    ]
}

/// Parses the circuit text format extended with `SDG`, `T`, `TDG`, `X`, `Y`,
/// `Z` and `CCX a b c`. Toffolis are expanded on the spot.
pub fn parse_circuit(text: &str) -> Result<InputCircuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing QUBITS header"))?;
    let num_qubits = parse_header(line, header)?;
    let mut gates = Vec::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        let mnemonic = fields[0].to_ascii_uppercase();
        let (qubits, angle) = match mnemonic.as_str() {
            "CX" | "CNOT" => (2, false),
            "CCX" | "TOFFOLI" => (3, false),
            "RZ" | "RX" | "RY" => (1, true),
            "H" | "S" | "SDG" | "SX" | "X" | "Y" | "Z" | "T" | "TDG" => (1, false),
            _ => return Err(Error::parse(line, format!("unknown gate {:?}", fields[0]))),
        };
        if fields.len() != 1 + qubits + angle as usize {
            return Err(Error::parse(
                line,
                format!("{} expects {} operands", fields[0], qubits + angle as usize),
            ));
        }
        let q: Vec<usize> = (1..=qubits)
            .map(|k| parse_qubit(line, Some(fields[k]), num_qubits))
            .collect::<Result<_>>()?;
        for a in 0..q.len() {
            if q[a + 1..].contains(&q[a]) {
                return Err(Error::parse(line, format!("repeated qubit {}", q[a])));
            }
        }
        let theta = if angle { parse_angle(line, fields[2])? } else { 0.0 };
        match mnemonic.as_str() {
            "CX" | "CNOT" => gates.push(InputGate::Cx(q[0], q[1])),
            "CCX" | "TOFFOLI" => gates.extend(toffoli(q[0], q[1], q[2])),
            "RZ" => gates.push(InputGate::Rz(q[0], theta)),
            "RX" => gates.push(InputGate::Rx(q[0], theta)),
            "RY" => gates.push(InputGate::Ry(q[0], theta)),
            "H" => gates.push(InputGate::H(q[0])),
            "S" => gates.push(InputGate::S(q[0])),
            "SDG" => gates.push(InputGate::Sdg(q[0])),
            "SX" => gates.push(InputGate::Sx(q[0])),
            "X" => gates.push(InputGate::X(q[0])),
            "Y" => gates.push(InputGate::Y(q[0])),
            "Z" => gates.push(InputGate::Z(q[0])),
            "T" => gates.push(InputGate::T(q[0])),
            _ => gates.push(InputGate::Tdg(q[0])),
        }
    }
    Ok(InputCircuit { num_qubits, gates })
}

/// `U = C · R_{P_k}(θ_k) ⋯ R_{P_1}(θ_1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub num_qubits: usize,
    /// Positive-sign operators with the sign folded into the angle; the
    /// first entry acts first.
    pub rotations: Vec<(PauliOperator, f64)>,
    /// The Clifford gates of the input, in order.
    pub clifford_tail: Vec<InputGate>,
}

impl Extraction {
    pub fn tail_gates(&self) -> Vec<CliffordGate> {
        self.clifford_tail.iter().flat_map(|g| g.clifford_gates()).collect()
    }
}

/// Moves every rotation in front of all Clifford gates preceding it. Each
/// rotation axis is pulled back through its Clifford prefix `V`, giving
/// `V† A V`.
pub fn extract_rotations(circuit: &InputCircuit) -> Result<Extraction> {
    let n = circuit.num_qubits;
    let mut table = PauliTable::new(n);
    let mut angles = Vec::new();
    for g in circuit.gates.iter().rev() {
        for q in g_qubits(g) {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: n });
            }
        }
        match g.rotation() {
            Some((axis, qubit, angle)) => {
                table.push_column(&PauliOperator::single(n, qubit, axis), angles.len())?;
                angles.push(angle);
            }
            None => {
                for cg in g.clifford_gates().into_iter().rev() {
                    table.conjugate(cg, true);
                }
            }
        }
    }
    let rotations = table
        .columns()
        .into_iter()
        .zip(angles)
        .rev()
        .map(|(op, angle)| {
            let sign = op.sign().as_f64();
            (op.with_sign(Default::default()), sign * angle)
        })
        .collect();
    Ok(Extraction {
        num_qubits: n,
        rotations,
        clifford_tail: circuit.gates.iter().copied().filter(InputGate::is_clifford).collect(),
    })
}

fn g_qubits(g: &InputGate) -> Vec<usize> {
    match *g {
        InputGate::Cx(c, t) => vec![c, t],
        InputGate::H(q)
        | InputGate::S(q)
        | InputGate::Sdg(q)
        | InputGate::Sx(q)
        | InputGate::X(q)
        | InputGate::Y(q)
        | InputGate::Z(q)
        | InputGate::T(q)
        | InputGate::Tdg(q)
        | InputGate::Rz(q, _)
        | InputGate::Rx(q, _)
        | InputGate::Ry(q, _) => vec![q],
    }
}

/// Rebuilds the circuit as: ordered network with rotations, inverse
/// network, then the original Clifford gates. Equal to the input up to
/// global phase.
pub fn resynthesize(circuit: &InputCircuit, mode: Mode) -> Result<CliffordCircuit> {
    let extraction = extract_rotations(circuit)?;
    let ops: Vec<PauliOperator> = extraction.rotations.iter().map(|(p, _)| p.clone()).collect();
    let angles: Vec<f64> = extraction.rotations.iter().map(|&(_, a)| a).collect();
    let table = if ops.is_empty() {
        PauliTable::new(circuit.num_qubits)
    } else {
        PauliTable::from_operators(&ops)?
    };
    let result = synth_ordered(&table, mode);
    let mut out = crate::circuit::realize_closed(&result, &angles)?;
    out.num_qubits = circuit.num_qubits;
    out.extend_clifford(&extraction.tail_gates());
    Ok(out)
}
