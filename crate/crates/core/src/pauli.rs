//! Pauli strings on `n` qubits.
//!
//! Qubits are labelled `1..=n`, qubit 1 being the leftmost tensor factor (the most
//! significant bit of the computational index). The text form lists the
//! non-identity letters followed by their qubit label, e.g. `X1Y3`; the empty
//! string and `I` both denote the identity.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// The 2×2 Pauli matrix.
pub fn pauli_matrix(p: Pauli) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let data = match p {
        Pauli::X => alloc::vec![z, one, one, z],
        Pauli::Y => alloc::vec![z, -i, i, z],
        Pauli::Z => alloc::vec![one, z, z, -one],
    };
    ComplexMatrix::from_vec(2, data)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: usize,
    letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        Self { n_qubits, letters: BTreeMap::new() }
    }

    /// Builds a string from `(qubit, letter)` pairs with 1-based qubit labels.
    pub fn new(n_qubits: usize, letters: impl IntoIterator<Item = (usize, Pauli)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a Pauli string needs at least one qubit".into()));
        }
        let mut map = BTreeMap::new();
        for (q, p) in letters {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if map.insert(q, p).is_some() {
                return Err(Error::Parse(alloc::format!("qubit {q} listed twice")));
            }
        }
        Ok(Self { n_qubits, letters: map })
    }

    /// Parses the text form (`"X1Y3"`) on `n_qubits` qubits.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text.eq_ignore_ascii_case("i") {
            return Self::new(n_qubits, []);
        }
        let mut letters = Vec::new();
        let mut chars = text.chars().peekable();
        while let Some(ch) = chars.next() {
            let p = match ch.to_ascii_uppercase() {
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::Parse(alloc::format!("unexpected character {other:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q: usize =
                digits.parse().map_err(|_| Error::Parse(alloc::format!("missing qubit label after {ch}")))?;
            letters.push((q, p));
        }
        Self::new(n_qubits, letters)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.letters.iter().map(|(&q, &p)| (q, p))
    }

    fn bit(&self, q: usize) -> usize {
        1 << (self.n_qubits - q)
    }

    /// `(x_mask, z_mask, number of Y letters)`.
    fn masks(&self) -> (usize, usize, usize) {
        let (mut x, mut z, mut ys) = (0, 0, 0);
        for (&q, &p) in &self.letters {
            let b = self.bit(q);
            match p {
                Pauli::X => x |= b,
                Pauli::Z => z |= b,
                Pauli::Y => {
                    x |= b;
                    z |= b;
                    ys += 1;
                }
            }
        }
        (x, z, ys)
    }

    /// Column `c` of the string maps to row `c ^ x_mask` with this phase.
    #[inline]
    fn entry(c: usize, z: usize, ys: usize) -> Complex64 {
        let sign = if (c & z).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
        let i_pow = match ys % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        i_pow * sign
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n_qubits;
        let (x, z, ys) = self.masks();
        let mut m = ComplexMatrix::zeros(dim.max(2));
        for c in 0..dim {
            m[(c ^ x, c)] = Self::entry(c, z, ys);
        }
        m
    }

    /// `Tr(σ·A)` in `O(2^n)` using the one-nonzero-per-column structure of `σ`.
    pub fn trace_with(&self, a: &ComplexMatrix) -> Result<Complex64> {
        let dim = 1usize << self.n_qubits;
        if a.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: a.dim() });
        }
        let (x, z, ys) = self.masks();
        Ok((0..dim).map(|c| Self::entry(c, z, ys) * a[(c, c ^ x)]).sum())
    }

    /// Adds `coeff·σ` into `acc`.
    pub fn accumulate_into(&self, acc: &mut ComplexMatrix, coeff: Complex64) {
        let dim = 1usize << self.n_qubits;
        let (x, z, ys) = self.masks();
        for c in 0..dim {
            acc[(c ^ x, c)] += coeff * Self::entry(c, z, ys);
        }
    }

    /// All `4^n` strings, identity first, ordered by weight then lexicographically.
    pub fn all(n_qubits: usize) -> Vec<PauliString> {
        let mut out: Vec<PauliString> = (0..=n_qubits).flat_map(|j| Self::of_weight(n_qubits, j)).collect();
        out.sort_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.cmp(b)));
        out
    }

    /// The `C(n, j)·3^j` strings acting non-trivially on exactly `j` qubits.
    pub fn of_weight(n_qubits: usize, j: usize) -> Vec<PauliString> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(j);
        combos(1, n_qubits, j, &mut chosen, &mut |qubits| {
            let mut letters = alloc::vec![0usize; qubits.len()];
            loop {
                out.push(PauliString {
                    n_qubits,
                    letters: qubits.iter().zip(&letters).map(|(&q, &l)| (q, Pauli::ALL[l])).collect(),
                });
                // Odometer over {X, Y, Z}^j.
                let mut k = letters.len();
                loop {
                    if k == 0 {
                        return;
                    }
                    k -= 1;
                    letters[k] += 1;
                    if letters[k] < 3 {
                        break;
                    }
                    letters[k] = 0;
                }
            }
        });
        out
    }
}

fn combos(start: usize, n: usize, left: usize, chosen: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if left == 0 {
        f(chosen);
        return;
    }
    for q in start..=n {
        if n + 1 - q < left {
            break;
        }
        chosen.push(q);
        combos(q + 1, n, left - 1, chosen, f);
        chosen.pop();
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("I");
        }
        for (q, p) in self.letters() {
            write!(f, "{}{}", p.letter(), q)?;
        }
        Ok(())
    }
}

/// Parses with the qubit count set to the largest label present.
impl FromStr for PauliString {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let probe = Self::parse(s, usize::BITS as usize - 1)?;
        let n = probe.letters.keys().next_back().copied().unwrap_or(1);
        Self::parse(s, n)
    }
}

/// Dense matrix of a Pauli string (`2^n × 2^n`, Hermitian, squares to identity).
///
/// A single-qubit identity string is returned as the 2×2 identity.
pub fn pauli_string_matrix(s: &PauliString) -> HermitianOperator {
    HermitianOperator::from_matrix_unchecked(s.to_matrix())
}
