//! The question algebra: base-4 multi-indices over qubit sites, the
//! compatibility/complementarity predicate, sitewise Pauli products with
//! phase bookkeeping, XNOR composition with correlation parity, and the
//! operator realization of each question.
//!
//! A question is labelled by one Pauli direction per qubit, `0` standing for
//! "not interrogated" on that site.  The all-zero label would be the trivial
//! always-yes question and is excluded, which leaves `4^N - 1` questions per
//! system size.  Two questions can be known simultaneously exactly when the
//! number of sites on which they carry different nonzero directions is even;
//! at the operator level this is commutation of the corresponding Pauli
//! words, and the test suite checks the two formulations against each other.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Guard on the system size.  Everything downstream is dense linear algebra
/// over `4^N - 1` (Bloch) or `2^N` (Hilbert) dimensions, so the cap keeps
/// memory and runtimes at desk scale; it is a guard, not an algorithmic
/// limit.
pub const QUBIT_CAP: usize = 4;

/// Checks a qubit count against [`QUBIT_CAP`].
pub fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > QUBIT_CAP {
        return Err(Error::CapExceeded { n, cap: QUBIT_CAP });
    }
    Ok(())
}

/// Number of questions in the catalogue for `n` qubits: `4^n - 1`.
pub fn question_count(n: usize) -> usize {
    4usize.pow(n as u32) - 1
}

/// A question label: one Pauli direction in `{0,1,2,3}` per qubit site,
/// with at least one nonzero entry.
///
/// Labels are ordered by their linear encoding, which reads the sites as a
/// big-endian base-4 number and subtracts one to skip the excluded all-zero
/// label.  Bloch-vector components, graph vertices and generator rows all
/// share this ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuestionIndex {
    sites: Vec<u8>,
}

impl QuestionIndex {
    /// Validates and builds a question index; `n` is passed explicitly so
    /// that truncated or padded site lists are caught at the boundary.
    pub fn make_index(sites: &[u8], n: usize) -> Result<Self> {
        if sites.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: sites.len(),
            });
        }
        for (position, &value) in sites.iter().enumerate() {
            if value > 3 {
                return Err(Error::SiteOutOfRange { position, value });
            }
        }
        if sites.iter().all(|&s| s == 0) {
            return Err(Error::AllZeroIndex);
        }
        Ok(QuestionIndex {
            sites: sites.to_vec(),
        })
    }

    /// Builds the index with `n` inferred from the slice length.
    pub fn new(sites: &[u8]) -> Result<Self> {
        Self::make_index(sites, sites.len())
    }

    /// Inverse of [`QuestionIndex::linear`].
    pub fn from_linear(n: usize, index: usize) -> Result<Self> {
        let count = question_count(n);
        if index >= count {
            return Err(Error::LinearIndexOutOfRange { index, count });
        }
        let mut code = index + 1;
        let mut sites = vec![0u8; n];
        for site in sites.iter_mut().rev() {
            *site = (code % 4) as u8;
            code /= 4;
        }
        Ok(QuestionIndex { sites })
    }

    /// Qubit count.
    pub fn n(&self) -> usize {
        self.sites.len()
    }

    /// Per-site Pauli directions.
    pub fn sites(&self) -> &[u8] {
        &self.sites
    }

    /// Position in `0..4^n-1`: big-endian base-4 value of the sites, minus
    /// one for the excluded trivial label.
    pub fn linear(&self) -> usize {
        let code = self
            .sites
            .iter()
            .fold(0usize, |acc, &s| acc * 4 + s as usize);
        code - 1
    }

    /// Number of interrogated (nonzero) sites.
    pub fn weight(&self) -> usize {
        self.sites.iter().filter(|&&s| s != 0).count()
    }
}

impl fmt::Display for QuestionIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sites {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for QuestionIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut sites = Vec::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            let value = ch.to_digit(10).ok_or(Error::SiteOutOfRange {
                position,
                value: u8::MAX,
            })? as u8;
            if value > 3 {
                return Err(Error::SiteOutOfRange { position, value });
            }
            sites.push(value);
        }
        QuestionIndex::new(&sites)
    }
}

/// All `4^n - 1` question indices in linear order.
pub fn all_questions(n: usize) -> Vec<QuestionIndex> {
    (0..question_count(n))
        .map(|i| QuestionIndex::from_linear(n, i).expect("index in range"))
        .collect()
}

/// Phase of a Pauli-word product, one of `{+1, +i, -1, -i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliPhase {
    One,
    I,
    MinusOne,
    MinusI,
}

impl PauliPhase {
    fn from_exponent(k: u8) -> Self {
        match k % 4 {
            0 => PauliPhase::One,
            1 => PauliPhase::I,
            2 => PauliPhase::MinusOne,
            _ => PauliPhase::MinusI,
        }
    }

    /// Power of `i` representing this phase.
    pub fn exponent(self) -> u8 {
        match self {
            PauliPhase::One => 0,
            PauliPhase::I => 1,
            PauliPhase::MinusOne => 2,
            PauliPhase::MinusI => 3,
        }
    }

    /// Group product of two phases.
    pub fn times(self, other: PauliPhase) -> PauliPhase {
        PauliPhase::from_exponent(self.exponent() + other.exponent())
    }

    /// The phase as a complex number.
    pub fn as_complex(self) -> Complex64 {
        match self {
            PauliPhase::One => Complex64::new(1.0, 0.0),
            PauliPhase::I => Complex64::new(0.0, 1.0),
            PauliPhase::MinusOne => Complex64::new(-1.0, 0.0),
            PauliPhase::MinusI => Complex64::new(0.0, -1.0),
        }
    }

    /// True for `+1` and `-1`; the product of two commuting Pauli words
    /// always lands here.
    pub fn is_real(self) -> bool {
        matches!(self, PauliPhase::One | PauliPhase::MinusOne)
    }

    /// The sign for real phases: `+1.0` or `-1.0`.  Panics on imaginary
    /// phases, which callers exclude via [`is_compatible`].
    pub fn real_sign(self) -> f64 {
        match self {
            PauliPhase::One => 1.0,
            PauliPhase::MinusOne => -1.0,
            _ => panic!("phase {self} has no real sign"),
        }
    }
}

impl fmt::Display for PauliPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PauliPhase::One => "+1",
            PauliPhase::I => "+i",
            PauliPhase::MinusOne => "-1",
            PauliPhase::MinusI => "-i",
        };
        f.write_str(s)
    }
}

/// Whether the dependent third question of a compatible pair equals their
/// XNOR (`Even`) or its negation (`Odd`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CorrelationParity {
    Even,
    Odd,
}

impl fmt::Display for CorrelationParity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelationParity::Even => "even",
            CorrelationParity::Odd => "odd",
        })
    }
}

fn ensure_same_n(a: &QuestionIndex, b: &QuestionIndex) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::LengthMismatch {
            expected: a.n(),
            got: b.n(),
        });
    }
    Ok(())
}

/// Two questions can be answered simultaneously iff they differ on an even
/// number of sites where both are interrogated; equivalently, their Pauli
/// words commute.
pub fn is_compatible(a: &QuestionIndex, b: &QuestionIndex) -> Result<bool> {
    ensure_same_n(a, b)?;
    Ok(compatible_unchecked(a, b))
}

pub(crate) fn compatible_unchecked(a: &QuestionIndex, b: &QuestionIndex) -> bool {
    let clashes = a
        .sites
        .iter()
        .zip(&b.sites)
        .filter(|(&x, &y)| x != 0 && y != 0 && x != y)
        .count();
    clashes % 2 == 0
}

/// Product of two single-site Paulis: returns (direction, power of i).
/// Convention: sigma_1 sigma_2 = i sigma_3 and cyclic.
fn site_product(a: u8, b: u8) -> (u8, u8) {
    match (a, b) {
        (0, x) => (x, 0),
        (x, 0) => (x, 0),
        (x, y) if x == y => (0, 0),
        (1, 2) => (3, 1),
        (2, 3) => (1, 1),
        (3, 1) => (2, 1),
        (2, 1) => (3, 3),
        (3, 2) => (1, 3),
        (1, 3) => (2, 3),
        _ => unreachable!("site values validated to 0..=3"),
    }
}

/// Operator product of two question labels: sitewise Pauli multiplication
/// with the accumulated phase.  Returns `None` for the index exactly when
/// the product is the identity word, i.e. when `a == b`.
pub fn pauli_product(
    a: &QuestionIndex,
    b: &QuestionIndex,
) -> Result<(Option<QuestionIndex>, PauliPhase)> {
    ensure_same_n(a, b)?;
    let mut sites = Vec::with_capacity(a.n());
    let mut exponent = 0u8;
    for (&x, &y) in a.sites.iter().zip(&b.sites) {
        let (dir, k) = site_product(x, y);
        sites.push(dir);
        exponent = (exponent + k) % 4;
    }
    let phase = PauliPhase::from_exponent(exponent);
    if sites.iter().all(|&s| s == 0) {
        Ok((None, phase))
    } else {
        Ok((Some(QuestionIndex { sites }), phase))
    }
}

/// Composition of two distinct compatible questions: the dependent third
/// question ("are the answers the same?") together with its correlation
/// parity.  `Even` when the third question equals the XNOR of the operands,
/// `Odd` when it equals the negation; the parity is the sign of the Pauli
/// product phase.
pub fn xnor_compose(
    a: &QuestionIndex,
    b: &QuestionIndex,
) -> Result<(QuestionIndex, CorrelationParity)> {
    ensure_same_n(a, b)?;
    if a == b {
        return Err(Error::EqualOperands { q: a.to_string() });
    }
    if !compatible_unchecked(a, b) {
        return Err(Error::IncompatibleOperands {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let (index, phase) = pauli_product(a, b)?;
    let index = index.expect("product of distinct labels is a nonzero word");
    let parity = match phase {
        PauliPhase::One => CorrelationParity::Even,
        PauliPhase::MinusOne => CorrelationParity::Odd,
        // Compatible words commute, so their product phase is real.
        _ => unreachable!("compatible pair with imaginary product phase"),
    };
    Ok((index, parity))
}

/// The four single-qubit Pauli matrices, indexed 0..=3.
fn pauli_2x2(direction: u8) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match direction {
        0 => ComplexMatrix::from_row_slice(2, 2, &[one, z, z, one]),
        1 => ComplexMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        2 => ComplexMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        3 => ComplexMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
        _ => unreachable!("site values validated to 0..=3"),
    }
}

/// Kronecker product of single-site Paulis for an arbitrary site word;
/// accepts the all-zero word (identity), which [`pauli_matrix`] excludes.
pub fn pauli_word_matrix(sites: &[u8]) -> ComplexMatrix {
    let mut m = pauli_2x2(sites[0]);
    for &s in &sites[1..] {
        m = m.kronecker(&pauli_2x2(s));
    }
    m
}

/// The Hermitian operator realizing a question: the Kronecker product of its
/// per-site Pauli matrices.  Traceless, squares to the identity, eigenvalues
/// +-1 with equal multiplicity.
pub fn pauli_matrix(a: &QuestionIndex) -> ComplexMatrix {
    pauli_word_matrix(&a.sites)
}
