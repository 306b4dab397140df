//! Exact multi-qubit Pauli algebra with bit-packed symplectic representation,
//! stabilizer groups in canonical (reduced row echelon) form, and CNOT/H
//! Clifford circuits acting by conjugation.
//!
//! Convention: an operator is stored as `i^phase * X^x * Z^z` where the Z
//! factors act first (i.e. the matrix is the X-part times the Z-part). On a
//! qubit carrying both bits the local matrix is `XZ = -iY`.

use crate::error::{Error, Result};
use std::fmt;

/// Single-qubit Pauli axis used when querying weight-1 stabilizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Z,
}

const WORD: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

fn get_bit(bits: &[u64], i: usize) -> bool {
    bits[i / WORD] >> (i % WORD) & 1 == 1
}

fn set_bit(bits: &mut [u64], i: usize, v: bool) {
    let (w, b) = (i / WORD, i % WORD);
    if v {
        bits[w] |= 1 << b;
    } else {
        bits[w] &= !(1 << b);
    }
}

fn popcount_and(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// A Pauli operator `i^phase * X^x * Z^z` on `n` qubits (Z acts first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: usize,
    /// Power of `i` in {0,1,2,3}.
    phase: u8,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliOperator {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliOperator {
            n,
            phase: 0,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    /// A single-qubit X or Z on qubit `q`.
    pub fn single(n: usize, q: usize, axis: Axis) -> Self {
        let mut p = Self::identity(n);
        match axis {
            Axis::X => set_bit(&mut p.x, q, true),
            Axis::Z => set_bit(&mut p.z, q, true),
        }
        p
    }

    /// Builds an operator from explicit X- and Z-support lists with phase
    /// `i^phase`.
    pub fn from_support(n: usize, xs: &[usize], zs: &[usize], phase: u8) -> Self {
        let mut p = Self::identity(n);
        for &q in xs {
            assert!(q < n, "qubit index {q} out of range {n}");
            set_bit(&mut p.x, q, true);
        }
        for &q in zs {
            assert!(q < n, "qubit index {q} out of range {n}");
            set_bit(&mut p.z, q, true);
        }
        p.phase = phase & 3;
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Power of `i` in the `i^phase X^x Z^z` normal form.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_bit(&self, q: usize) -> bool {
        get_bit(&self.x, q)
    }

    pub fn z_bit(&self, q: usize) -> bool {
        get_bit(&self.z, q)
    }

    /// True when both masks are empty (the operator is `i^phase * I`).
    pub fn is_identity_support(&self) -> bool {
        self.x.iter().all(|&w| w == 0) && self.z.iter().all(|&w| w == 0)
    }

    /// True when the operator is exactly `+I`.
    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_identity_support()
    }

    /// Number of qubits with a non-identity local factor.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits with a non-identity local factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&q| self.x_bit(q) || self.z_bit(q))
            .collect()
    }

    /// Exact product `self * other` with phase bookkeeping:
    /// `(i^a X^x1 Z^z1)(i^b X^x2 Z^z2) = i^(a+b+2*<z1,x2>) X^(x1+x2) Z^(z1+z2)`.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        if self.n != other.n {
            return Err(Error::QubitMismatch(self.n, other.n));
        }
        let cross = popcount_and(&self.z, &other.x);
        let mut out = self.clone();
        for w in 0..self.x.len() {
            out.x[w] ^= other.x[w];
            out.z[w] ^= other.z[w];
        }
        out.phase = (self.phase + other.phase + 2 * (cross as u8 & 1)) & 3;
        Ok(out)
    }

    /// Hermitian conjugate.
    pub fn dagger(&self) -> PauliOperator {
        // (i^k X Z)^† = i^-k Z X = i^-k (-1)^<x,z> X Z.
        let overlap = popcount_and(&self.x, &self.z) as u8 & 1;
        let mut out = self.clone();
        out.phase = (4 - self.phase + 2 * overlap) & 3;
        out
    }

    /// Multiplies the phase by -1.
    pub fn negated(&self) -> PauliOperator {
        let mut out = self.clone();
        out.phase = (out.phase + 2) & 3;
        out
    }

    /// Multiplies the phase by `i^k`.
    pub fn times_i_pow(&self, k: u8) -> PauliOperator {
        let mut out = self.clone();
        out.phase = (out.phase + k) & 3;
        out
    }

    /// True when the two operators commute (symplectic form vanishes).
    pub fn commutes(&self, other: &PauliOperator) -> bool {
        (popcount_and(&self.x, &other.z) + popcount_and(&self.z, &other.x)) % 2 == 0
    }

    /// Hermitian iff `phase + |x∧z|` is even.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + popcount_and(&self.x, &self.z)) % 2 == 0
    }

    /// Compares the bit masks only, ignoring the phase.
    pub fn same_support_pattern(&self, other: &PauliOperator) -> bool {
        self.x == other.x && self.z == other.z
    }

    fn bit_at_column(&self, col: usize) -> bool {
        if col < self.n {
            self.x_bit(col)
        } else {
            self.z_bit(col - self.n)
        }
    }

    /// Conjugation by CNOT with the given control and target:
    /// X_c -> X_c X_t, Z_t -> Z_c Z_t; no phase change in this convention
    /// (both the X-part and the Z-part stay pure).
    pub fn conj_cnot(&mut self, control: usize, target: usize) {
        assert!(control != target);
        if self.x_bit(control) {
            let v = !self.x_bit(target);
            set_bit(&mut self.x, target, v);
        }
        if self.z_bit(target) {
            let v = !self.z_bit(control);
            set_bit(&mut self.z, control, v);
        }
    }

    /// Conjugation by Hadamard on qubit `q`: swaps the X/Z bits; a qubit
    /// carrying both picks up a sign (H(XZ)H = ZX = -XZ).
    pub fn conj_h(&mut self, q: usize) {
        let (xb, zb) = (self.x_bit(q), self.z_bit(q));
        if xb && zb {
            self.phase = (self.phase + 2) & 3;
        }
        set_bit(&mut self.x, q, zb);
        set_bit(&mut self.z, q, xb);
    }

    /// Parses the text form, e.g. `+X3 Z7 Z8`, `-i Y0 X2`. A missing sign
    /// means `+`. Repeated letters on the same qubit multiply.
    pub fn parse(n: usize, text: &str) -> Result<PauliOperator> {
        let mut s = text.trim();
        let mut acc = Self::identity(n);
        for (pfx, ph) in [("+i", 1u8), ("-i", 3), ("+", 0), ("-", 2)] {
            if let Some(rest) = s.strip_prefix(pfx) {
                acc.phase = ph;
                s = rest;
                break;
            }
        }
        for tok in s.split_whitespace() {
            let mut chars = tok.chars();
            let letter = chars
                .next()
                .ok_or_else(|| Error::Parse(format!("empty token in {text:?}")))?;
            let q: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad qubit index in token {tok:?}")))?;
            if q >= n {
                return Err(Error::Parse(format!("qubit {q} out of range {n}")));
            }
            let factor = match letter {
                'X' => Self::single(n, q, Axis::X),
                'Z' => Self::single(n, q, Axis::Z),
                // Y = i X Z in this convention.
                'Y' => Self::from_support(n, &[q], &[q], 1),
                'I' => Self::identity(n),
                _ => return Err(Error::Parse(format!("unknown letter {letter:?}"))),
            };
            acc = acc.mul(&factor)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PauliOperator {
    /// Text form with explicit sign and ascending qubit letters; qubits
    /// carrying both bits print as `Y` with the `-i` folded into the sign.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ys = popcount_and(&self.x, &self.z) as u8;
        // i^phase (XZ)^#Y = i^(phase - #Y) Y^#Y.
        let disp = (self.phase + 4 - (ys & 3)) & 3;
        f.write_str(["+", "+i", "-", "-i"][disp as usize])?;
        let mut any = false;
        for q in 0..self.n {
            let letter = match (self.x_bit(q), self.z_bit(q)) {
                (false, false) => continue,
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, " {letter}{q}")?;
            any = true;
        }
        if !any {
            f.write_str(" I")?;
        }
        Ok(())
    }
}

/// A CNOT/Hadamard gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    Cnot { control: usize, target: usize },
    H { q: usize },
}

/// A Clifford circuit built from CNOT and Hadamard gates, acting on Pauli
/// operators by conjugation (gates applied in list order).
#[derive(Debug, Clone, Default)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<Gate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> Self {
        CliffordCircuit { n, gates: vec![] }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        assert!(control < self.n && target < self.n && control != target);
        self.gates.push(Gate::Cnot { control, target });
    }

    pub fn h(&mut self, q: usize) {
        assert!(q < self.n);
        self.gates.push(Gate::H { q });
    }

    /// `U P U†` with `U = g_k ... g_1` (first listed gate acts first).
    pub fn conjugate(&self, p: &PauliOperator) -> Result<PauliOperator> {
        if p.num_qubits() != self.n {
            return Err(Error::QubitMismatch(p.num_qubits(), self.n));
        }
        let mut out = p.clone();
        for g in &self.gates {
            match *g {
                Gate::Cnot { control, target } => out.conj_cnot(control, target),
                Gate::H { q } => out.conj_h(q),
            }
        }
        Ok(out)
    }

    /// True when every pair of gates commutes. For CNOT-only circuits this
    /// holds iff no qubit is the control of one gate and the target of
    /// another (and no gate pair shares a qubit in mixed roles with an H).
    pub fn all_gates_commute(&self) -> bool {
        for (i, a) in self.gates.iter().enumerate() {
            for b in &self.gates[i + 1..] {
                if !gates_commute(*a, *b) {
                    return false;
                }
            }
        }
        true
    }
}

fn gates_commute(a: Gate, b: Gate) -> bool {
    use Gate::*;
    match (a, b) {
        (Cnot { control: c1, target: t1 }, Cnot { control: c2, target: t2 }) => {
            c1 != t2 && c2 != t1
        }
        (Cnot { control, target }, H { q }) | (H { q }, Cnot { control, target }) => {
            q != control && q != target
        }
        (H { .. }, H { .. }) => true,
    }
}

/// Sign of a group member: `sign * pattern` is in the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberSign {
    Plus,
    Minus,
}

/// A stabilizer group: commuting Hermitian Pauli generators, stored in a
/// unique canonical (symplectic RREF) form. `-I` is rejected; redundant
/// `+I`-reducing generators are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerGroup {
    n: usize,
    rows: Vec<PauliOperator>,
}

impl StabilizerGroup {
    /// Builds and canonicalizes a group from (possibly redundant) generators.
    pub fn from_generators(n: usize, gens: &[PauliOperator]) -> Result<Self> {
        for (i, g) in gens.iter().enumerate() {
            if g.num_qubits() != n {
                return Err(Error::QubitMismatch(g.num_qubits(), n));
            }
            if !g.is_hermitian() {
                return Err(Error::NonHermitian(g.to_string()));
            }
            for (j, h) in gens.iter().enumerate().skip(i + 1) {
                if !g.commutes(h) {
                    return Err(Error::AnticommutingGenerators(i, j));
                }
            }
        }
        let rows = canonical_rows(n, gens.to_vec())?;
        Ok(StabilizerGroup { n, rows })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    /// Canonical generator rows (unique for a given group).
    pub fn rows(&self) -> &[PauliOperator] {
        &self.rows
    }

    /// GF(2) rank = number of independent generators.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Dimension of the joint +1 eigenspace: `2^(n - rank)`.
    pub fn stabilized_dimension_log2(&self) -> usize {
        self.n - self.rows.len()
    }

    /// Two groups are equal iff their canonical rows coincide (signs
    /// included).
    pub fn equals(&self, other: &StabilizerGroup) -> bool {
        self == other
    }

    /// Reduces `p` against the canonical rows. Returns the sign `s` such
    /// that `s*p` is a group member, or `None` when neither `±p` belongs.
    /// `±i*p` membership is impossible for Hermitian groups.
    pub fn membership_sign(&self, p: &PauliOperator) -> Option<MemberSign> {
        if p.num_qubits() != self.n {
            return None;
        }
        let mut acc = p.clone();
        for row in &self.rows {
            let pivot = pivot_column(row);
            if acc.bit_at_column(pivot) {
                acc = acc.mul(row).expect("same qubit count");
            }
        }
        if !acc.is_identity_support() {
            return None;
        }
        match acc.phase() {
            0 => Some(MemberSign::Plus),
            2 => Some(MemberSign::Minus),
            _ => None,
        }
    }

    /// True when `+p` is a group member.
    pub fn contains(&self, p: &PauliOperator) -> bool {
        self.membership_sign(p) == Some(MemberSign::Plus)
    }

    /// Every weight-1 element of the group: `(qubit, axis, sign)`.
    pub fn single_qubit_stabilizers(&self) -> Vec<(usize, Axis, MemberSign)> {
        let mut out = vec![];
        for q in 0..self.n {
            for axis in [Axis::X, Axis::Z] {
                let cand = PauliOperator::single(self.n, q, axis);
                if let Some(sign) = self.membership_sign(&cand) {
                    out.push((q, axis, sign));
                }
            }
        }
        out
    }

    /// Conjugates every generator by a Clifford circuit, returning the
    /// transformed group (in canonical form).
    pub fn conjugated_by(&self, circuit: &CliffordCircuit) -> Result<StabilizerGroup> {
        let gens: Result<Vec<_>> = self.rows.iter().map(|r| circuit.conjugate(r)).collect();
        StabilizerGroup::from_generators(self.n, &gens?)
    }
}

fn pivot_column(p: &PauliOperator) -> usize {
    let n = p.num_qubits();
    for col in 0..2 * n {
        if p.bit_at_column(col) {
            return col;
        }
    }
    unreachable!("canonical rows are never identity")
}

/// Symplectic Gaussian elimination to reduced row echelon form over GF(2)
/// with exact phase tracking; column order is (x_0..x_{n-1}, z_0..z_{n-1}).
fn canonical_rows(n: usize, mut rows: Vec<PauliOperator>) -> Result<Vec<PauliOperator>> {
    let mut r = 0;
    for col in 0..2 * n {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i].bit_at_column(col)) else {
            continue;
        };
        rows.swap(r, pivot);
        for j in 0..rows.len() {
            if j != r && rows[j].bit_at_column(col) {
                rows[j] = rows[j].mul(&rows[r])?;
            }
        }
        r += 1;
    }
    // Rows past the rank reduced to the identity pattern: +I rows are
    // redundant generators; -I (or ±iI, impossible for Hermitian inputs)
    // means the sign assignment is inconsistent.
    for row in &rows[r..] {
        debug_assert!(row.is_identity_support());
        if row.phase() != 0 {
            return Err(Error::MinusIdentity);
        }
    }
    rows.truncate(r);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_phases_follow_the_z_first_convention() {
        // X0 * Z0 = X^1 Z^1 (phase 0), while Z0 * X0 = -X^1 Z^1.
        let x = PauliOperator::single(1, 0, Axis::X);
        let z = PauliOperator::single(1, 0, Axis::Z);
        let xz = x.mul(&z).unwrap();
        assert_eq!(xz.phase(), 0);
        let zx = z.mul(&x).unwrap();
        assert_eq!(zx.phase(), 2);
        assert!(xz.same_support_pattern(&zx));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let p = PauliOperator::parse(9, "+X3 Z7 Z8").unwrap();
        assert_eq!(p.to_string(), "+ X3 Z7 Z8");
        let q = PauliOperator::parse(9, p.to_string().trim()).unwrap();
        assert_eq!(p, q);
        let y = PauliOperator::parse(2, "-i Y0 X1").unwrap();
        let y2 = PauliOperator::parse(2, &y.to_string()).unwrap();
        assert_eq!(y, y2);
    }

    #[test]
    fn anticommuting_generators_are_rejected() {
        let gens = [
            PauliOperator::single(2, 0, Axis::X),
            PauliOperator::single(2, 0, Axis::Z),
        ];
        assert!(matches!(
            StabilizerGroup::from_generators(2, &gens),
            Err(Error::AnticommutingGenerators(0, 1))
        ));
    }

    #[test]
    fn minus_identity_is_rejected() {
        // {+Z0, -Z0} generates -I.
        let gens = [
            PauliOperator::single(2, 0, Axis::Z),
            PauliOperator::single(2, 0, Axis::Z).negated(),
        ];
        assert!(matches!(
            StabilizerGroup::from_generators(2, &gens),
            Err(Error::MinusIdentity)
        ));
    }

    #[test]
    fn membership_reports_signs() {
        let gens = [
            PauliOperator::parse(2, "+X0 X1").unwrap(),
            PauliOperator::parse(2, "-Z0 Z1").unwrap(),
        ];
        let g = StabilizerGroup::from_generators(2, &gens).unwrap();
        assert_eq!(g.rank(), 2);
        let zz = PauliOperator::parse(2, "+Z0 Z1").unwrap();
        assert_eq!(g.membership_sign(&zz), Some(MemberSign::Minus));
        let yy = PauliOperator::parse(2, "+Y0 Y1").unwrap();
        // (X0X1)(-Z0Z1) = -(X0Z0)(X1Z1) = -(-iY0)(-iY1) = +Y0Y1.
        assert_eq!(g.membership_sign(&yy), Some(MemberSign::Plus));
        assert_eq!(
            g.membership_sign(&PauliOperator::single(2, 0, Axis::X)),
            None
        );
    }
}
