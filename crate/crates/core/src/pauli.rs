//! Bit-level Pauli operators and tables of operators.
//!
//! A Pauli operator on `n` qubits is stored as two packed bit vectors, the
//! Z part and the X part, plus a ±1 sign. Per qubit the pair `(z, x)` encodes
//! `I = (0, 0)`, `X = (0, 1)`, `Z = (1, 0)` and `Y = (1, 1)`. The leftmost
//! letter of a Pauli string is qubit 0.
//!
//! A [`PauliTable`] holds `m` operators as the columns of a `2n × m` bit
//! matrix stored row-major in 64-bit words, so conjugating the whole table by
//! a Clifford gate is a handful of word-wide XORs and swaps per row.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use log::warn;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
/// Splits a column order into `(word, mask)` runs that are increasing within one word.
fn segments(order: &[usize]) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::new();
    let mut last = usize::MAX;
    for &s in order {
        let (w, bit) = (s / WORD, 1u64 << (s % WORD));
        match out.last_mut() {
            Some((lw, mask)) if *lw == w && last != usize::MAX && s > last => *mask |= bit,
            _ => out.push((w, bit)),
        }
        last = s;
    }
    out
}

fn gather(src: &[u64], segments: &[(usize, u64)], dst: &mut [u64]) {
    let pext = pext_fn();
    let mut pos = 0usize;
    for &(w, mask) in segments {
        let bits = pext(src[w], mask);
        let (i, off) = (pos / WORD, pos % WORD);
        dst[i] |= bits << off;
        let len = mask.count_ones() as usize;
        if off != 0 && off + len > WORD {
            dst[i + 1] |= bits >> (WORD - off);
        }
        pos += len;
    }
}

fn pext_soft(value: u64, mut mask: u64) -> u64 {
    let mut out = 0u64;
    let mut b = 0;
    while mask != 0 {
        out |= (value >> mask.trailing_zeros() & 1) << b;
        mask &= mask - 1;
        b += 1;
    }
    out
}

#[cfg(target_arch = "x86_64")]
fn pext_fn() -> fn(u64, u64) -> u64 {
    #[target_feature(enable = "bmi2")]
    unsafe fn pext_bmi2(value: u64, mask: u64) -> u64 {
        std::arch::x86_64::_pext_u64(value, mask)
    }
    fn pext_hw(value: u64, mask: u64) -> u64 {
        // SAFETY: only selected after runtime detection of BMI2.
        unsafe { pext_bmi2(value, mask) }
    }
    if std::arch::is_x86_feature_detected!("bmi2") {
        pext_hw
    } else {
        pext_soft
    }
}

#[cfg(not(target_arch = "x86_64"))]
fn pext_fn() -> fn(u64, u64) -> u64 {
    pext_soft
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [PauliLetter::I, PauliLetter::X, PauliLetter::Y, PauliLetter::Z];

    /// Letter from its `(z, x)` encoding.
    pub fn from_bits(z: bool, x: bool) -> Self {
        match (z, x) {
            (false, false) => PauliLetter::I,
            (false, true) => PauliLetter::X,
            (true, false) => PauliLetter::Z,
            (true, true) => PauliLetter::Y,
        }
    }

    /// The `(z, x)` encoding.
    pub fn bits(self) -> (bool, bool) {
        match self {
            PauliLetter::I => (false, false),
            PauliLetter::X => (false, true),
            PauliLetter::Z => (true, false),
            PauliLetter::Y => (true, true),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliLetter::I),
            'X' => Some(PauliLetter::X),
            'Y' => Some(PauliLetter::Y),
            'Z' => Some(PauliLetter::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            PauliLetter::I => 'I',
            PauliLetter::X => 'X',
            PauliLetter::Y => 'Y',
            PauliLetter::Z => 'Z',
        }
    }

    pub fn is_identity(self) -> bool {
        self == PauliLetter::I
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Overall ±1 phase of an operator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn from_negative(negative: bool) -> Self {
        if negative {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Minus
    }

    pub fn flipped(self) -> Self {
        Sign::from_negative(!self.is_negative())
    }

    pub fn as_f64(self) -> f64 {
        if self.is_negative() {
            -1.0
        } else {
            1.0
        }
    }
}

/// A Hermitian Pauli operator with a ±1 phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    num_qubits: usize,
    z: Vec<u64>,
    x: Vec<u64>,
    sign: Sign,
}

impl PauliOperator {
    pub fn identity(num_qubits: usize) -> Self {
        let w = words_for(num_qubits);
        PauliOperator {
            num_qubits,
            z: vec![0; w],
            x: vec![0; w],
            sign: Sign::Plus,
        }
    }

    pub fn from_letters(letters: &[PauliLetter], sign: Sign) -> Self {
        let mut op = PauliOperator::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            op.set_letter(q, l);
        }
        op.sign = sign;
        op
    }

    /// Single-qubit operator `letter` acting on `qubit`.
    pub fn single(num_qubits: usize, qubit: usize, letter: PauliLetter) -> Self {
        let mut op = PauliOperator::identity(num_qubits);
        op.set_letter(qubit, letter);
        op
    }

    /// Parses a string over `{I, X, Y, Z}`; the leftmost letter is qubit 0.
    pub fn encode(pauli: &str, sign: Option<Sign>) -> Result<Self> {
        if pauli.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let letters = pauli
            .chars()
            .enumerate()
            .map(|(position, c)| {
                PauliLetter::from_char(c).ok_or(Error::InvalidPauliLetter { position, found: c })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliOperator::from_letters(&letters, sign.unwrap_or_default()))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn with_sign(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    pub fn z_bit(&self, q: usize) -> bool {
        self.z[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn x_bit(&self, q: usize) -> bool {
        self.x[q / WORD] >> (q % WORD) & 1 == 1
    }

    pub fn letter(&self, q: usize) -> PauliLetter {
        PauliLetter::from_bits(self.z_bit(q), self.x_bit(q))
    }

    pub fn letters(&self) -> Vec<PauliLetter> {
        (0..self.num_qubits).map(|q| self.letter(q)).collect()
    }

    pub fn set_letter(&mut self, q: usize, letter: PauliLetter) {
        let (z, x) = letter.bits();
        let (w, b) = (q / WORD, q % WORD);
        self.z[w] = (self.z[w] & !(1 << b)) | ((z as u64) << b);
        self.x[w] = (self.x[w] & !(1 << b)) | ((x as u64) << b);
    }

    /// Number of non-identity letters.
    pub fn support_size(&self) -> usize {
        self.z
            .iter()
            .zip(&self.x)
            .map(|(z, x)| (z | x).count_ones() as usize)
            .sum()
    }

    /// Qubits carrying a non-identity letter, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|&q| self.z_bit(q) || self.x_bit(q))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.support_size() == 0
    }

    /// Symplectic product: `true` iff the two operators anti-commute.
    pub fn anticommutes(&self, other: &PauliOperator) -> Result<bool> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                found: other.num_qubits,
            });
        }
        let ones: u32 = (0..self.z.len())
            .map(|w| ((self.z[w] & other.x[w]) ^ (self.x[w] & other.z[w])).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign.is_negative() {
            write!(f, "-")?;
        }
        for q in 0..self.num_qubits {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Accepts an optional leading `+` or `-`.
    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = match s.as_bytes().first() {
            Some(b'-') => (Sign::Minus, &s[1..]),
            Some(b'+') => (Sign::Plus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        PauliOperator::encode(body, Some(sign))
    }
}

/// Free-function form of [`PauliOperator::anticommutes`].
pub fn anticommutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    p.anticommutes(q)
}

/// The Clifford gates used for conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    Cnot { control: usize, target: usize },
    H(usize),
    S(usize),
    /// `√X`, i.e. `R_X(π/2)` up to phase.
    Sx(usize),
}

impl CliffordGate {
    pub fn cnot(control: usize, target: usize) -> Self {
        CliffordGate::Cnot { control, target }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::Cnot { control, target } => vec![control, target],
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::Sx(q) => vec![q],
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, CliffordGate::Cnot { .. })
    }

    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        if let CliffordGate::Cnot { control, target } = *self {
            if control == target {
                return Err(Error::SameControlTarget(control));
            }
        }
        Ok(())
    }

    /// Gate sequence over the same alphabet implementing the inverse.
    pub fn inverse(&self) -> Vec<CliffordGate> {
        match *self {
            CliffordGate::S(_) | CliffordGate::Sx(_) => vec![*self; 3],
            _ => vec![*self],
        }
    }
}

/// A `2n × m` table of Pauli operators, one per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliTable {
    num_qubits: usize,
    len: usize,
    /// Words per row currently allocated.
    stride: usize,
    /// Rows `0..n` are Z parts, rows `n..2n` are X parts.
    rows: Vec<u64>,
    signs: Vec<u64>,
    origin: Vec<usize>,
    input_len: usize,
}

impl PauliTable {
    pub fn new(num_qubits: usize) -> Self {
        PauliTable {
            num_qubits,
            len: 0,
            stride: 0,
            rows: Vec::new(),
            signs: Vec::new(),
            origin: Vec::new(),
            input_len: 0,
        }
    }

    /// Builds a table from operators of equal length. Identity operators are
    /// dropped with a warning; surviving columns keep their input index as
    /// origin.
    pub fn from_operators(ops: &[PauliOperator]) -> Result<Self> {
        let num_qubits = ops.first().map_or(0, |op| op.num_qubits());
        let mut table = PauliTable::new(num_qubits);
        table.reserve(ops.len());
        for (i, op) in ops.iter().enumerate() {
            if op.num_qubits() != num_qubits {
                return Err(Error::LengthMismatch {
                    expected: num_qubits,
                    found: op.num_qubits(),
                });
            }
            if op.is_identity() {
                warn!("dropping rotation {i}: identity operator is a global phase");
                continue;
            }
            table.push_column(op, i)?;
        }
        table.input_len = ops.len();
        Ok(table)
    }

    /// Parses each string with [`PauliOperator::from_str`].
    pub fn from_strs(ops: &[&str]) -> Result<Self> {
        let ops = ops
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<PauliOperator>>>()?;
        PauliTable::from_operators(&ops)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of operators originally offered, including dropped identities.
    pub fn input_len(&self) -> usize {
        self.input_len
    }

    pub(crate) fn set_input_len(&mut self, input_len: usize) {
        self.input_len = input_len;
    }

    pub fn origin(&self, j: usize) -> usize {
        self.origin[j]
    }

    pub fn origins(&self) -> &[usize] {
        &self.origin
    }

    /// Number of words in use per row.
    pub(crate) fn words(&self) -> usize {
        words_for(self.len)
    }

    #[inline]
    pub(crate) fn row(&self, r: usize) -> &[u64] {
        let start = r * self.stride;
        &self.rows[start..start + self.words()]
    }

    #[inline]
    fn bit(&self, r: usize, j: usize) -> bool {
        self.rows[r * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn sign(&self, j: usize) -> Sign {
        Sign::from_negative(self.signs[j / WORD] >> (j % WORD) & 1 == 1)
    }

    pub fn letter(&self, q: usize, j: usize) -> PauliLetter {
        PauliLetter::from_bits(self.bit(q, j), self.bit(self.num_qubits + q, j))
    }

    pub fn column(&self, j: usize) -> PauliOperator {
        let mut op = PauliOperator::identity(self.num_qubits);
        for q in 0..self.num_qubits {
            op.set_letter(q, self.letter(q, j));
        }
        op.with_sign(self.sign(j))
    }

    pub fn columns(&self) -> Vec<PauliOperator> {
        (0..self.len).map(|j| self.column(j)).collect()
    }

    pub fn support_size(&self, j: usize) -> usize {
        (0..self.num_qubits)
            .filter(|&q| self.bit(q, j) || self.bit(self.num_qubits + q, j))
            .count()
    }

    /// Support size of every column.
    pub fn supports(&self) -> Vec<usize> {
        // Vertical counters: plane `p` holds bit `p` of every column's count.
        let n = self.num_qubits;
        let depth = (usize::BITS - n.leading_zeros()) as usize;
        let mut planes = vec![0u64; depth];
        let mut out = Vec::with_capacity(self.len);
        for w in 0..words_for(self.len) {
            planes.iter_mut().for_each(|p| *p = 0);
            for q in 0..n {
                let mut carry = self.rows[q * self.stride + w] | self.rows[(n + q) * self.stride + w];
                for p in planes.iter_mut() {
                    if carry == 0 {
                        break;
                    }
                    let sum = *p ^ carry;
                    carry &= *p;
                    *p = sum;
                }
            }
            for b in 0..WORD.min(self.len - w * WORD) {
                let count = planes.iter().rev().fold(0, |acc, p| acc << 1 | (p >> b & 1) as usize);
                out.push(count);
            }
        }
        out
    }

    fn reserve(&mut self, columns: usize) {
        let needed = words_for(columns);
        if needed <= self.stride {
            return;
        }
        let stride = needed.max(2 * self.stride);
        let rows = 2 * self.num_qubits;
        let mut grown = vec![0u64; rows * stride];
        for r in 0..rows {
            let old = &self.rows[r * self.stride..(r + 1) * self.stride];
            grown[r * stride..r * stride + self.stride].copy_from_slice(old);
        }
        self.rows = grown;
        self.signs.resize(stride, 0);
        self.stride = stride;
    }

    pub fn push_column(&mut self, op: &PauliOperator, origin: usize) -> Result<()> {
        if op.num_qubits() != self.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                found: op.num_qubits(),
            });
        }
        let j = self.len;
        self.reserve(j + 1);
        let (w, b) = (j / WORD, j % WORD);
        let n = self.num_qubits;
        for q in 0..n {
            self.rows[q * self.stride + w] |= (op.z_bit(q) as u64) << b;
            self.rows[(n + q) * self.stride + w] |= (op.x_bit(q) as u64) << b;
        }
        self.signs[w] |= (op.sign().is_negative() as u64) << b;
        self.origin.push(origin);
        self.len += 1;
        self.input_len = self.input_len.max(origin + 1);
        Ok(())
    }

    /// Rebuilds the table keeping only `order`, in that order.
    pub fn select_columns(&mut self, order: &[usize]) {
        let rows = 2 * self.num_qubits;
        let stride = words_for(order.len()).max(1);
        let mut data = vec![0u64; rows * stride];
        let mut signs = vec![0u64; stride];
        let segments = segments(order);
        for r in 0..rows {
            let src = &self.rows[r * self.stride..(r + 1) * self.stride];
            gather(src, &segments, &mut data[r * stride..(r + 1) * stride]);
        }
        gather(&self.signs, &segments, &mut signs);
        self.origin = order.iter().map(|&s| self.origin[s]).collect();
        self.rows = data;
        self.signs = signs;
        self.stride = stride;
        self.len = order.len();
    }

    /// Removes column `j`, returning the operator and its origin.
    pub fn pop_column(&mut self, j: usize) -> Result<(PauliOperator, usize)> {
        if j >= self.len {
            return Err(Error::ColumnOutOfRange { index: j, len: self.len });
        }
        let op = self.column(j);
        let origin = self.origin[j];
        let keep: Vec<usize> = (0..self.len).filter(|&k| k != j).collect();
        self.select_columns(&keep);
        Ok((op, origin))
    }

    /// Stable sort of the columns by ascending support size.
    pub fn sort_columns_by_support(&mut self) {
        let (order, _) = self.support_order();
        if order.iter().enumerate().any(|(i, &j)| i != j) {
            self.select_columns(&order);
        }
    }

    /// Stable support order of the columns, with the support of each.
    pub(crate) fn support_order(&self) -> (Vec<usize>, Vec<usize>) {
        let supports = self.supports();
        let mut order: Vec<usize> = (0..self.len).collect();
        order.sort_by_key(|&j| supports[j]);
        let sorted = order.iter().map(|&j| supports[j]).collect();
        (order, sorted)
    }

    /// Conjugates every column `P` into `G P G†`, tracking signs.
    pub fn apply_gate(&mut self, gate: CliffordGate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.conjugate(gate, false);
        Ok(())
    }

    /// Conjugates every column `P` into `G† P G`.
    pub fn apply_gate_inverse(&mut self, gate: CliffordGate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.conjugate(gate, true);
        Ok(())
    }

    pub(crate) fn conjugate(&mut self, gate: CliffordGate, inverse: bool) {
        let n = self.num_qubits;
        let stride = self.stride;
        let words = self.words();
        let rows = &mut self.rows;
        let signs = &mut self.signs;
        match gate {
            CliffordGate::Cnot { control, target } => {
                let (zc, xc, zt, xt) = (control, n + control, target, n + target);
                for w in 0..words {
                    let (zc_w, xc_w) = (rows[zc * stride + w], rows[xc * stride + w]);
                    let (zt_w, xt_w) = (rows[zt * stride + w], rows[xt * stride + w]);
                    signs[w] ^= xc_w & zt_w & !(xt_w ^ zc_w);
                    rows[xt * stride + w] = xt_w ^ xc_w;
                    rows[zc * stride + w] = zc_w ^ zt_w;
                }
            }
            CliffordGate::H(q) => {
                let (zr, xr) = (q, n + q);
                for w in 0..words {
                    let (z, x) = (rows[zr * stride + w], rows[xr * stride + w]);
                    signs[w] ^= z & x;
                    rows[zr * stride + w] = x;
                    rows[xr * stride + w] = z;
                }
            }
            CliffordGate::S(q) => {
                let (zr, xr) = (q, n + q);
                for w in 0..words {
                    let (z, x) = (rows[zr * stride + w], rows[xr * stride + w]);
                    // S P S†: Y -> -X.  S† P S: X -> -Y.
                    signs[w] ^= if inverse { x & !z } else { x & z };
                    rows[zr * stride + w] = z ^ x;
                }
            }
            CliffordGate::Sx(q) => {
                let (zr, xr) = (q, n + q);
                for w in 0..words {
                    let (z, x) = (rows[zr * stride + w], rows[xr * stride + w]);
                    // √X P √X†: Z -> -Y.  √X† P √X: Y -> -Z.
                    signs[w] ^= if inverse { z & x } else { z & !x };
                    rows[xr * stride + w] = x ^ z;
                }
            }
        }
    }
}

/// One line of a Pauli input file.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliEntry {
    pub operator: PauliOperator,
    pub angle: Option<f64>,
}

/// Reads the Pauli input format: one operator per line, an optional angle in
/// radians after whitespace, `#` starts a comment.
pub fn read_pauli_file<R: BufRead>(reader: R) -> Result<Vec<PauliEntry>> {
    let mut entries = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let pauli = fields.next().unwrap_or_default();
        let operator: PauliOperator = pauli
            .parse()
            .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        let angle = match fields.next() {
            Some(a) => Some(
                a.parse::<f64>()
                    .map_err(|_| Error::parse(line_no, format!("invalid angle {a:?}")))?,
            ),
            None => None,
        };
        if let Some(extra) = fields.next() {
            return Err(Error::parse(line_no, format!("unexpected token {extra:?}")));
        }
        match width {
            None => width = Some(operator.num_qubits()),
            Some(w) if w != operator.num_qubits() => {
                return Err(Error::parse(
                    line_no,
                    format!("operator has {} qubits, expected {w}", operator.num_qubits()),
                ))
            }
            _ => {}
        }
        entries.push(PauliEntry { operator, angle });
    }
    Ok(entries)
}

pub fn parse_pauli_text(text: &str) -> Result<Vec<PauliEntry>> {
    read_pauli_file(text.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(s: &str) -> PauliOperator {
        s.parse().unwrap()
    }

    fn bits(op: &PauliOperator) -> (Vec<u8>, Vec<u8>) {
        let n = op.num_qubits();
        (
            (0..n).map(|q| op.z_bit(q) as u8).collect(),
            (0..n).map(|q| op.x_bit(q) as u8).collect(),
        )
    }

    #[test]
    fn encode_layout() {
        let p = PauliOperator::encode("XIYZ", None).unwrap();
        assert_eq!(bits(&p), (vec![0, 0, 1, 1], vec![1, 0, 1, 0]));
        assert_eq!(p.sign(), Sign::Plus);

        let id = PauliOperator::encode("IIII", None).unwrap();
        assert_eq!(bits(&id), (vec![0; 4], vec![0; 4]));

        let zz = PauliOperator::encode("ZZ", None).unwrap();
        assert_eq!(bits(&zz), (vec![1, 1], vec![0, 0]));
    }

    #[test]
    fn encode_errors() {
        assert!(matches!(PauliOperator::encode("", None), Err(Error::EmptyPauli)));
        match PauliOperator::encode("XIQZ", None) {
            Err(Error::InvalidPauliLetter { position, found }) => {
                assert_eq!((position, found), (2, 'Q'));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn support_sizes() {
        assert_eq!(op("IZXIZ").support_size(), 3);
        assert_eq!(op("IIII").support_size(), 0);
        assert_eq!(op("XIYZ").support_size(), 3);
        assert_eq!(op("IZXIZ").support(), vec![1, 2, 4]);
    }

    #[test]
    fn display_round_trip() {
        for s in ["XIYZ", "-ZZ", "Y"] {
            assert_eq!(op(s).to_string(), s);
        }
        assert_eq!(op("+XY").to_string(), "XY");
    }

    #[test]
    fn anticommutation() {
        assert!(op("Z").anticommutes(&op("X")).unwrap());
        assert!(!op("ZZ").anticommutes(&op("XX")).unwrap());
        assert!(!op("ZI").anticommutes(&op("ZI")).unwrap());
        assert!(op("Z").anticommutes(&op("XX")).is_err());
    }

    fn single(s: &str, gate: CliffordGate) -> PauliOperator {
        let mut t = PauliTable::from_strs(&[s]).unwrap();
        t.apply_gate(gate).unwrap();
        t.column(0)
    }

    #[test]
    fn gate_examples() {
        assert_eq!(single("ZZ", CliffordGate::cnot(0, 1)), op("IZ"));
        assert_eq!(single("XI", CliffordGate::H(0)), op("ZI"));
        assert_eq!(single("Y", CliffordGate::S(0)), op("-X"));
        assert_eq!(single("Z", CliffordGate::Sx(0)), op("-Y"));
    }

    #[test]
    fn gate_out_of_range() {
        let mut t = PauliTable::from_strs(&["ZZ"]).unwrap();
        assert!(matches!(
            t.apply_gate(CliffordGate::H(2)),
            Err(Error::QubitOutOfRange { qubit: 2, num_qubits: 2 })
        ));
        assert!(matches!(
            t.apply_gate(CliffordGate::cnot(1, 1)),
            Err(Error::SameControlTarget(1))
        ));
    }

    #[test]
    fn sort_is_stable_and_ascending() {
        let mut t = PauliTable::from_strs(&["XYZ", "ZII", "XXI", "IYI"]).unwrap();
        t.sort_columns_by_support();
        let cols: Vec<String> = t.columns().iter().map(|c| c.to_string()).collect();
        assert_eq!(cols, ["ZII", "IYI", "XXI", "XYZ"]);
        assert_eq!(t.origins(), &[1, 3, 2, 0]);
    }

    #[test]
    fn pop_last_column() {
        let mut t = PauliTable::from_strs(&["-XZ"]).unwrap();
        let (p, origin) = t.pop_column(0).unwrap();
        assert_eq!(p, op("-XZ"));
        assert_eq!(origin, 0);
        assert!(t.is_empty());
        assert!(t.pop_column(0).is_err());
    }

    #[test]
    fn identity_columns_dropped() {
        let t = PauliTable::from_strs(&["XI", "II", "IZ"]).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.origins(), &[0, 2]);
        assert_eq!(t.input_len(), 3);
    }

    #[test]
    fn table_spanning_many_words() {
        let ops: Vec<String> = (0..150)
            .map(|i| if i % 3 == 0 { "XZY".into() } else { "ZIZ".into() })
            .collect();
        let refs: Vec<&str> = ops.iter().map(|s| s.as_str()).collect();
        let mut t = PauliTable::from_strs(&refs).unwrap();
        t.apply_gate(CliffordGate::cnot(0, 2)).unwrap();
        t.apply_gate(CliffordGate::cnot(0, 2)).unwrap();
        for (j, op) in ops.iter().enumerate() {
            assert_eq!(&t.column(j).to_string(), op);
        }
        assert_eq!(t.supports()[149], 2);
        assert_eq!(t.supports()[147], 3);
    }

    #[test]
    fn pauli_file() {
        let text = "# header\nXIZ 0.5\n\n-ZZI   # no angle\nYYY 1e-3\n";
        let entries = parse_pauli_text(text).unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].angle, Some(0.5));
        assert_eq!(entries[1].operator, op("-ZZI"));
        assert_eq!(entries[1].angle, None);

        let err = parse_pauli_text("XX\nXXX\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_pauli_text("XA\n").unwrap_err();
        assert!(err.to_string().contains("position 1"));
    }

    /// All gates on `n` qubits.
    fn all_gates(n: usize) -> Vec<CliffordGate> {
        let mut gates = Vec::new();
        for q in 0..n {
            gates.extend([CliffordGate::H(q), CliffordGate::S(q), CliffordGate::Sx(q)]);
            for t in (0..n).filter(|&t| t != q) {
                gates.push(CliffordGate::cnot(q, t));
            }
        }
        gates
    }

    fn all_operators(n: usize) -> Vec<PauliOperator> {
        (1..4usize.pow(n as u32))
            .flat_map(|code| {
                let letters: Vec<PauliLetter> = (0..n).map(|q| PauliLetter::ALL[code / 4usize.pow(q as u32) % 4]).collect();
                [Sign::Plus, Sign::Minus].map(|s| PauliOperator::from_letters(&letters, s))
            })
            .collect()
    }

    #[test]
    fn dense_conjugation_oracle() {
        use crate::circuit::CliffordCircuit;
        use crate::verify::{dense, pauli_matrix};
        for n in 1..=3 {
            for g in all_gates(n) {
                let mut c = CliffordCircuit::new(n);
                c.push(g);
                let u = dense(&c).unwrap();
                let ud = u.adjoint();
                let ops = all_operators(n);
                let mut forward = PauliTable::from_operators(&ops).unwrap();
                let mut backward = forward.clone();
                forward.apply_gate(g).unwrap();
                backward.apply_gate_inverse(g).unwrap();
                for (j, p) in ops.iter().enumerate() {
                    let pm = pauli_matrix(p).unwrap();
                    let fwd = u.mul(&pm).mul(&ud);
                    let bwd = ud.mul(&pm).mul(&u);
                    let close = |a: &crate::verify::DenseUnitary, b: &crate::verify::DenseUnitary| {
                        (0..a.dim()).all(|r| (0..a.dim()).all(|k| (a.get(r, k) - b.get(r, k)).norm() < 1e-12))
                    };
                    assert!(close(&pauli_matrix(&forward.column(j)).unwrap(), &fwd), "{g:?} on {p}");
                    assert!(close(&pauli_matrix(&backward.column(j)).unwrap(), &bwd), "{g:?}† on {p}");
                }
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn operator(n: usize) -> impl Strategy<Value = PauliOperator> {
            (prop::collection::vec(0usize..4, n), any::<bool>()).prop_map(|(l, neg)| {
                let letters: Vec<PauliLetter> = l.into_iter().map(|i| PauliLetter::ALL[i]).collect();
                PauliOperator::from_letters(&letters, Sign::from_negative(neg))
            })
        }

        fn gate(n: usize) -> impl Strategy<Value = CliffordGate> {
            (0usize..4, 0..n, 1..n).prop_map(move |(k, q, d)| match k {
                0 => CliffordGate::cnot(q, (q + d) % n),
                1 => CliffordGate::H(q),
                2 => CliffordGate::S(q),
                _ => CliffordGate::Sx(q),
            })
        }

        fn table(n: usize) -> impl Strategy<Value = PauliTable> {
            prop::collection::vec(operator(n), 1..140).prop_map(|ops| {
                let mut t = PauliTable::new(ops[0].num_qubits());
                for (i, op) in ops.iter().enumerate() {
                    t.push_column(op, i).unwrap();
                }
                t
            })
        }

        proptest! {
            #[test]
            fn involutions(t in table(5), g in gate(5)) {
                let mut u = t.clone();
                let reps = match g {
                    CliffordGate::Cnot { .. } | CliffordGate::H(_) => 2,
                    _ => 4,
                };
                for _ in 0..reps {
                    u.apply_gate(g).unwrap();
                }
                prop_assert_eq!(&u, &t);
                u.apply_gate(g).unwrap();
                u.apply_gate_inverse(g).unwrap();
                prop_assert_eq!(&u, &t);
            }

            #[test]
            fn commutation_preserved(
                p in operator(6),
                q in operator(6),
                gates in prop::collection::vec(gate(6), 0..30),
            ) {
                let before = p.anticommutes(&q).unwrap();
                let mut t = PauliTable::new(6);
                t.push_column(&p, 0).unwrap();
                t.push_column(&q, 1).unwrap();
                for g in gates {
                    t.apply_gate(g).unwrap();
                }
                prop_assert_eq!(t.column(0).anticommutes(&t.column(1)).unwrap(), before);
            }

            #[test]
            fn support_bound(t in table(6), g in gate(6)) {
                let before = t.supports();
                let mut u = t.clone();
                u.apply_gate(g).unwrap();
                for (a, b) in before.iter().zip(u.supports()) {
                    let bound = if g.is_cnot() { 1 } else { 0 };
                    prop_assert!(a.abs_diff(b) <= bound);
                }
            }

            #[test]
            fn sort_keeps_columns(t in table(4)) {
                let mut u = t.clone();
                u.sort_columns_by_support();
                let s = u.supports();
                prop_assert!(s.windows(2).all(|w| w[0] <= w[1]));
                for j in 0..u.len() {
                    prop_assert_eq!(u.column(j), t.column(u.origin(j)));
                }
            }

            #[test]
            fn select_any_order(t in table(5), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..200)) {
                let order: Vec<usize> = picks.iter().map(|i| i.index(t.len())).collect();
                let mut u = t.clone();
                u.select_columns(&order);
                prop_assert_eq!(u.len(), order.len());
                for (j, &s) in order.iter().enumerate() {
                    prop_assert_eq!(u.column(j), t.column(s));
                    prop_assert_eq!(u.origin(j), t.origin(s));
                }
            }

            #[test]
            fn pext_matches_soft(v in any::<u64>(), m in any::<u64>()) {
                prop_assert_eq!(pext_fn()(v, m), pext_soft(v, m));
            }

            #[test]
            fn supports_match_columns(t in table(7)) {
                let s = t.supports();
                for (j, &size) in s.iter().enumerate() {
                    prop_assert_eq!(size, t.column(j).support_size());
                }
            }
        }
    }
}
