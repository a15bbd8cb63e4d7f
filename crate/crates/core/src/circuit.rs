//! Gate-list circuits, CNOT metrics, rotation placement and the ladder
//! baseline.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{CliffordGate, PauliLetter, PauliOperator};
use crate::synth::SynthesisResult;

/// Single-qubit rotation `exp(-i angle A / 2)` about axis `A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub axis: PauliLetter,
    pub qubit: usize,
    pub angle: f64,
    /// Input rotation this gate implements, when known.
    pub origin: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Clifford(CliffordGate),
    Rotation(Rotation),
}

impl Gate {
    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Clifford(g) if g.is_cnot())
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Clifford(g) => g.qubits(),
            Gate::Rotation(r) => vec![r.qubit],
        }
    }
}

impl From<CliffordGate> for Gate {
    fn from(g: CliffordGate) -> Self {
        Gate::Clifford(g)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub cnot_count: usize,
    pub cnot_depth: usize,
    pub total_gates: usize,
}

impl Metrics {
    pub fn of(c: &CliffordCircuit) -> Self {
        Metrics {
            cnot_count: c.cnot_count(),
            cnot_depth: c.cnot_depth(),
            total_gates: c.gates.len(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CliffordCircuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(num_qubits: usize) -> Self {
        CliffordCircuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_clifford(num_qubits: usize, gates: &[CliffordGate]) -> Self {
        CliffordCircuit {
            num_qubits,
            gates: gates.iter().copied().map(Gate::Clifford).collect(),
        }
    }

    pub fn push(&mut self, gate: impl Into<Gate>) {
        self.gates.push(gate.into());
    }

    pub fn extend_clifford(&mut self, gates: &[CliffordGate]) {
        self.gates.extend(gates.iter().copied().map(Gate::Clifford));
    }

    /// Appends the exact inverse of `gates`.
    pub fn extend_inverse(&mut self, gates: &[CliffordGate]) {
        for g in gates.iter().rev() {
            self.extend_clifford(&g.inverse());
        }
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    /// ASAP layering of CNOTs only; one-qubit gates are free.
    pub fn cnot_depth(&self) -> usize {
        let mut clock = vec![0usize; self.num_qubits];
        for g in &self.gates {
            if let Gate::Clifford(CliffordGate::Cnot { control, target }) = *g {
                let t = clock[control].max(clock[target]) + 1;
                clock[control] = t;
                clock[target] = t;
            }
        }
        clock.into_iter().max().unwrap_or(0)
    }

    pub fn metrics(&self) -> Metrics {
        Metrics::of(self)
    }

    pub fn rotation_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Rotation(_))).count()
    }

    /// The Clifford gates, or an error naming the first rotation.
    pub fn clifford_gates(&self) -> Result<Vec<CliffordGate>> {
        self.gates
            .iter()
            .enumerate()
            .map(|(i, g)| match g {
                Gate::Clifford(c) => Ok(*c),
                Gate::Rotation(_) => Err(Error::NonCliffordGate(i)),
            })
            .collect()
    }

    pub fn without_rotations(&self) -> CliffordCircuit {
        CliffordCircuit {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().filter(|g| matches!(g, Gate::Clifford(_))).copied().collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            match g {
                Gate::Clifford(c) => c.validate(self.num_qubits)?,
                Gate::Rotation(r) if r.qubit >= self.num_qubits => {
                    return Err(Error::QubitOutOfRange {
                        qubit: r.qubit,
                        num_qubits: self.num_qubits,
                    })
                }
                Gate::Rotation(_) => {}
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("QUBITS {}\n", self.num_qubits);
        for g in &self.gates {
            match *g {
                Gate::Clifford(CliffordGate::Cnot { control, target }) => writeln!(out, "CX {control} {target}"),
                Gate::Clifford(CliffordGate::H(q)) => writeln!(out, "H {q}"),
                Gate::Clifford(CliffordGate::S(q)) => writeln!(out, "S {q}"),
                Gate::Clifford(CliffordGate::Sx(q)) => writeln!(out, "SX {q}"),
                Gate::Rotation(r) => {
                    // Avoid printing "-0".
                    let angle = if r.angle == 0.0 { 0.0 } else { r.angle };
                    writeln!(out, "R{} {} {}", r.axis.as_char(), r.qubit, angle)
                }
            }
            .expect("writing to a String");
        }
        out
    }

    /// Parses the text produced by [`CliffordCircuit::to_text`]. Blank lines
    /// and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "missing QUBITS header"))?;
        let num_qubits = parse_header(line, header)?;
        let mut circuit = CliffordCircuit::new(num_qubits);
        for (line, content) in lines {
            let fields: Vec<&str> = content.split_whitespace().collect();
            let qubit = |k: usize| parse_qubit(line, fields.get(k).copied(), num_qubits);
            let arity = |k: usize| {
                if fields.len() == k + 1 {
                    Ok(())
                } else {
                    Err(Error::parse(line, format!("{} expects {} operands", fields[0], k)))
                }
            };
            let gate = match fields[0].to_ascii_uppercase().as_str() {
                "CX" | "CNOT" => {
                    arity(2)?;
                    let (c, t) = (qubit(1)?, qubit(2)?);
                    if c == t {
                        return Err(Error::parse(line, "CX control equals target"));
                    }
                    Gate::Clifford(CliffordGate::cnot(c, t))
                }
                "H" => {
                    arity(1)?;
                    Gate::Clifford(CliffordGate::H(qubit(1)?))
                }
                "S" => {
                    arity(1)?;
                    Gate::Clifford(CliffordGate::S(qubit(1)?))
                }
                "SX" => {
                    arity(1)?;
                    Gate::Clifford(CliffordGate::Sx(qubit(1)?))
                }
                m @ ("RX" | "RY" | "RZ") => {
                    arity(2)?;
                    let axis = PauliLetter::from_char(m.as_bytes()[1] as char).expect("axis letter");
                    Gate::Rotation(Rotation {
                        axis,
                        qubit: qubit(1)?,
                        angle: parse_angle(line, fields[2])?,
                        origin: None,
                    })
                }
                other => return Err(Error::parse(line, format!("unknown gate {other:?}"))),
            };
            circuit.gates.push(gate);
        }
        Ok(circuit)
    }
}

pub(crate) fn parse_header(line: usize, header: &str) -> Result<usize> {
    let mut fields = header.split_whitespace();
    match (fields.next(), fields.next(), fields.next()) {
        (Some(h), Some(n), None) if h.eq_ignore_ascii_case("QUBITS") => n
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid qubit count {n:?}"))),
        _ => Err(Error::parse(line, "expected header \"QUBITS n\"")),
    }
}

pub(crate) fn parse_qubit(line: usize, field: Option<&str>, num_qubits: usize) -> Result<usize> {
    let field = field.ok_or_else(|| Error::parse(line, "missing qubit operand"))?;
    let q: usize = field
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid qubit {field:?}")))?;
    if q >= num_qubits {
        return Err(Error::parse(line, format!("qubit {q} out of range for {num_qubits} qubits")));
    }
    Ok(q)
}

pub(crate) fn parse_angle(line: usize, field: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|a| a.is_finite())
        .ok_or_else(|| Error::parse(line, format!("invalid angle {field:?}")))
}

/// Each rotation on its own: basis change to Z, CNOT ladder onto the highest
/// support qubit, `RZ`, then the inverse. `2(w - 1)` CNOTs per rotation.
pub fn naive_synthesis(rotations: &[(PauliOperator, f64)]) -> Result<CliffordCircuit> {
    let num_qubits = rotations.first().map_or(0, |(p, _)| p.num_qubits());
    let mut circuit = CliffordCircuit::new(num_qubits);
    for (i, (op, angle)) in rotations.iter().enumerate() {
        if op.num_qubits() != num_qubits {
            return Err(Error::LengthMismatch {
                expected: num_qubits,
                found: op.num_qubits(),
            });
        }
        let support = op.support();
        let Some(&last) = support.last() else {
            return Err(Error::IdentityRotation(i));
        };
        let mut forward = Vec::with_capacity(2 * support.len());
        for &q in &support {
            match op.letter(q) {
                PauliLetter::X => forward.push(CliffordGate::H(q)),
                PauliLetter::Y => forward.push(CliffordGate::Sx(q)),
                _ => {}
            }
        }
        forward.extend(support.windows(2).map(|w| CliffordGate::cnot(w[0], w[1])));
        circuit.extend_clifford(&forward);
        circuit.push(Gate::Rotation(Rotation {
            axis: PauliLetter::Z,
            qubit: last,
            angle: op.sign().as_f64() * angle,
            origin: Some(i),
        }));
        circuit.extend_inverse(&forward);
    }
    Ok(circuit)
}

/// Inserts each placed rotation into the network at its prefix. `angles` is
/// indexed by input rotation. The result implements `U · ∏ R_{P_i}(θ_i)`
/// where `U` is the network and rotations act in placement order.
pub fn realize(result: &SynthesisResult, angles: &[f64]) -> Result<CliffordCircuit> {
    if angles.len() != result.input_len {
        return Err(Error::AngleCountMismatch {
            expected: result.input_len,
            found: angles.len(),
        });
    }
    let mut circuit = CliffordCircuit::new(result.num_qubits);
    let mut placements = result.placements.iter().peekable();
    for k in 0..=result.network.len() {
        while let Some(p) = placements.next_if(|p| p.prefix == k) {
            circuit.push(Gate::Rotation(Rotation {
                axis: p.letter,
                qubit: p.qubit,
                angle: p.sign.as_f64() * angles[p.rotation],
                origin: Some(p.rotation),
            }));
        }
        if let Some(&g) = result.network.get(k) {
            circuit.push(g);
        }
    }
    debug_assert!(placements.next().is_none(), "placements are sorted by prefix");
    Ok(circuit)
}

/// [`realize`] followed by the inverse network, so the circuit implements
/// the rotation product alone.
pub fn realize_closed(result: &SynthesisResult, angles: &[f64]) -> Result<CliffordCircuit> {
    let mut circuit = realize(result, angles)?;
    circuit.extend_inverse(&result.network);
    Ok(circuit)
}
