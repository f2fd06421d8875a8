//! Bit-packed Pauli strings `i^k · ⊗ σ_j` with `σ_j ∈ {I, X, Y, Z}`.
//!
//! A qubit with both bits set is `Y` (not `XZ`), so a string with even `k` is
//! Hermitian and `k ∈ {0, 2}` is its sign.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    /// power of `i`, mod 4
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let w = n.div_ceil(64);
        PauliString {
            n,
            x: vec![0; w],
            z: vec![0; w],
            phase: 0,
        }
    }

    /// `P` on every qubit of `support` (repeats cancel pairwise).
    pub fn from_support(n: usize, support: &[usize], p: Pauli) -> Self {
        let mut s = Self::identity(n);
        for &q in support {
            s.toggle(q, p);
        }
        s
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut s = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    /// `i^phase`; `0 → +1`, `1 → +i`, `2 → −1`, `3 → −i`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn negated(mut self) -> Self {
        self.phase = (self.phase + 2) % 4;
        self
    }

    pub fn get(&self, q: usize) -> Pauli {
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    /// Overwrites qubit `q` without touching the phase.
    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let (w, b) = (q / 64, 1u64 << (q % 64));
        let (px, pz) = p.bits();
        self.x[w] = if px { self.x[w] | b } else { self.x[w] & !b };
        self.z[w] = if pz { self.z[w] | b } else { self.z[w] & !b };
    }

    /// XORs the bits of `p` into qubit `q`, ignoring the phase of the product.
    pub fn toggle(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range");
        let (w, b) = (q / 64, 1u64 << (q % 64));
        let (px, pz) = p.bits();
        if px {
            self.x[w] ^= b;
        }
        if pz {
            self.z[w] ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, (a, b)) in self.x.iter().zip(&self.z).enumerate() {
            let mut bits = a | b;
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Symplectic inner product `x₁·z₂ + z₁·x₂ mod 2`.
    pub fn symplectic_product(&self, other: &PauliString) -> u32 {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut acc = 0u32;
        for i in 0..self.x.len() {
            acc ^= ((self.x[i] & other.z[i]) ^ (self.z[i] & other.x[i])).count_ones() & 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.symplectic_product(other) == 0
    }

    /// Operator product `self · other` with the phase tracked exactly.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.n, other.n, "qubit count mismatch");
        let mut plus = 0i64;
        let mut minus = 0i64;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for i in 0..self.x.len() {
            let (x1, z1, x2, z2) = (self.x[i], self.z[i], other.x[i], other.z[i]);
            let (px1, py1, pz1) = (x1 & !z1, x1 & z1, !x1 & z1);
            let (px2, py2, pz2) = (x2 & !z2, x2 & z2, !x2 & z2);
            // XY = iZ, YZ = iX, ZX = iY and the reversed orders give −i
            plus += ((px1 & py2) | (py1 & pz2) | (pz1 & px2)).count_ones() as i64;
            minus += ((px1 & pz2) | (py1 & px2) | (pz1 & py2)).count_ones() as i64;
            x.push(x1 ^ x2);
            z.push(z1 ^ z2);
        }
        let phase = (self.phase as i64 + other.phase as i64 + plus - minus).rem_euclid(4) as u8;
        PauliString {
            n: self.n,
            x,
            z,
            phase,
        }
    }

    /// Same operator up to an overall phase.
    pub fn equal_up_to_phase(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn has_y(&self) -> bool {
        self.x.iter().zip(&self.z).any(|(a, b)| a & b != 0)
    }

    pub fn y_qubits(&self) -> Vec<usize> {
        self.support()
            .into_iter()
            .filter(|&q| self.get(q) == Pauli::Y)
            .collect()
    }

    /// `[x words | z words]`, the row layout used for rank computations.
    pub fn symplectic_row(&self) -> Vec<u64> {
        let mut row = self.x.clone();
        row.extend_from_slice(&self.z);
        row
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.n {
            let c = match self.get(q) {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
