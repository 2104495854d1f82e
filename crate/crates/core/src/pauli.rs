//! Phaseless Pauli strings in packed symplectic form.
//!
//! A string on `n` qubits is a pair of bit vectors `(x, z)` packed into 64-bit
//! words. The letter at qubit `i` is `I`, `X`, `Z` or `Y` according to
//! `(x_i, z_i) = (0,0), (1,0), (0,1), (1,1)`. Qubit 0 is the leftmost
//! character of the text form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Single-qubit Pauli letter, phase dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];

    /// Index in the `(I, X, Y, Z)` ordering used by channel vectors.
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Letter::I => 0,
            Letter::X => 1,
            Letter::Y => 2,
            Letter::Z => 3,
        }
    }

    #[inline]
    pub fn from_bits(x: bool, z: bool) -> Letter {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    #[inline]
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'I' => Some(Letter::I),
            'X' => Some(Letter::X),
            'Y' => Some(Letter::Y),
            'Z' => Some(Letter::Z),
            _ => None,
        }
    }
}

/// Letter counts of a Pauli string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Weights {
    pub wt: usize,
    pub i: usize,
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// A phaseless Pauli operator on `n` qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        let words = n.div_ceil(WORD);
        PauliString {
            n,
            x: vec![0; words],
            z: vec![0; words],
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut p = PauliString::identity(letters.len());
        for (i, &l) in letters.iter().enumerate() {
            p.set(i, l);
        }
        p
    }

    /// Single letter `l` at qubit `pos`, identity elsewhere.
    pub fn single(n: usize, pos: usize, l: Letter) -> Self {
        let mut p = PauliString::identity(n);
        p.set(pos, l);
        p
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn x_bit(&self, i: usize) -> bool {
        (self.x[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn z_bit(&self, i: usize) -> bool {
        (self.z[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn letter(&self, i: usize) -> Letter {
        assert!(i < self.n, "qubit {i} out of range for length {}", self.n);
        Letter::from_bits(self.x_bit(i), self.z_bit(i))
    }

    pub fn set(&mut self, i: usize, l: Letter) {
        assert!(i < self.n, "qubit {i} out of range for length {}", self.n);
        let (xb, zb) = l.bits();
        let (w, b) = (i / WORD, i % WORD);
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.n).map(|i| self.letter(i))
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Phaseless product `self · other`.
    pub fn mul(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        Ok(PauliString {
            n: self.n,
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    pub fn mul_assign(&mut self, other: &PauliString) -> Result<()> {
        self.check_len(other)?;
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
        Ok(())
    }

    /// Symplectic inner product: `false` when the operators commute.
    pub fn anticommutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.anticommutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        let mut acc = 0u32;
        for w in 0..self.x.len() {
            acc ^= ((self.x[w] & other.z[w]) ^ (self.z[w] & other.x[w])).count_ones() & 1;
        }
        acc == 1
    }

    /// Syndrome-style commutation bit: 0 when commuting, 1 when anticommuting.
    pub fn commutes(&self, other: &PauliString) -> Result<u8> {
        Ok(self.anticommutes(other)? as u8)
    }

    pub fn weights(&self) -> Weights {
        let mut w = Weights::default();
        for word in 0..self.x.len() {
            let (x, z) = (self.x[word], self.z[word]);
            w.x += (x & !z).count_ones() as usize;
            w.y += (x & z).count_ones() as usize;
            w.z += (!x & z).count_ones() as usize;
        }
        w.wt = w.x + w.y + w.z;
        w.i = self.n - w.wt;
        w
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &PauliString) -> PauliString {
        let mut out = PauliString::identity(self.n + other.n);
        for (i, l) in self.letters().chain(other.letters()).enumerate() {
            out.set(i, l);
        }
        out
    }

    /// Exchange X and Z on every qubit (Y is fixed).
    pub fn swap_xz(&self) -> PauliString {
        PauliString {
            n: self.n,
            x: self.z.clone(),
            z: self.x.clone(),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| Letter::from_char(c).ok_or_else(|| Error::MalformedPauli(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::MalformedPauli(s.to_string()));
        }
        Ok(PauliString::from_letters(&letters))
    }
}
