//! Observer states over the question catalogue.
//!
//! A state is the collection of probabilities `y_i` the observer assigns to
//! the catalogue questions, stored as the generalized Bloch vector
//! `r_i = 2 y_i - 1` in `R^{4^N-1}`.  The associated density matrix is
//! `rho = (1 + r . sigma) / 2^N`; the squared Bloch norm counts the answered
//! independent bits.  Conversions, the Born rule in both its linear and
//! trace forms, the projective posterior update, validity testing and
//! seeded random state generation all live here.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, max_abs, ComplexMatrix};
use crate::questions::{
    all_questions, check_qubit_count, compatible_unchecked, pauli_matrix, pauli_product,
    question_count, QuestionIndex,
};
use crate::tol;

/// Generalized Bloch vector of an `n`-qubit state: one correlation
/// coefficient `r_i = 2 y_i - 1` per catalogue question, in linear index
/// order.
///
/// Construction only checks the shape; membership in the state space (the
/// positivity of the associated density matrix) is a separate, more
/// expensive test performed by [`validate_state`], so that deliberately
/// invalid vectors can be built and diagnosed.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochState {
    n: usize,
    r: DVector<f64>,
}

/// Density matrix on the `2^n`-dimensional Hilbert space.  Construction
/// enforces Hermiticity and unit trace; positivity is checked by
/// [`DensityMatrix::min_eigenvalue`] where needed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    m: ComplexMatrix,
}

/// A continuous question direction `q` in Bloch space: valid when the
/// operator `q . sigma` has eigenvalues +-1 with equal multiplicity, i.e.
/// squares to the identity and is traceless.  The catalogue questions are
/// the basis directions.
#[derive(Debug, Clone, PartialEq)]
pub struct QuestionVector {
    n: usize,
    q: DVector<f64>,
}

/// Information an observer holds about a system, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationContent {
    pub bits: f64,
}

/// Answer to a binary question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Answer {
    Yes,
    No,
}

impl Answer {
    /// Sign convention: yes = +1, no = -1 (the Bloch component of the
    /// certain posterior).
    pub fn sign(self) -> f64 {
        match self {
            Answer::Yes => 1.0,
            Answer::No => -1.0,
        }
    }
}

/// Pure/mixed verdict with the evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateKind {
    Pure,
    Mixed,
}

/// Output of [`classify`]: the verdict plus the residuals it rests on.
#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub kind: StateKind,
    /// max-abs(rho^2 - rho); zero exactly on pure states.
    pub idempotence_residual: f64,
    /// Whether |r|^2 matches the pure-state value 2^n - 1 within tolerance
    /// (necessary for purity; reported as a cross-check, not the criterion).
    pub norm_matches_pure: bool,
}

/// Output of [`validate_state`].
#[derive(Debug, Clone, Serialize)]
pub struct StateValidation {
    pub n: usize,
    pub info_bits: f64,
    /// Smallest eigenvalue of the associated density matrix.
    pub min_eigenvalue: f64,
    /// Whether every |r_i| <= 1 (necessary: each y_i is a probability).
    pub components_in_range: bool,
    pub valid: bool,
    /// Present when the state is valid.
    pub classification: Option<Classification>,
}

impl BlochState {
    /// Builds a state vector after checking the component count.
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        check_qubit_count(n)?;
        let expected = question_count(n);
        if r.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: r.len(),
            });
        }
        Ok(BlochState {
            n,
            r: DVector::from_vec(r),
        })
    }

    pub(crate) fn from_vector(n: usize, r: DVector<f64>) -> Self {
        debug_assert_eq!(r.len(), question_count(n));
        BlochState { n, r }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &DVector<f64> {
        &self.r
    }

    /// Component for a specific question.
    pub fn component(&self, q: &QuestionIndex) -> Result<f64> {
        if q.n() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: q.n(),
            });
        }
        Ok(self.r[q.linear()])
    }

    /// Probability the observer assigns to "yes" for a catalogue question.
    pub fn probability(&self, q: &QuestionIndex) -> Result<f64> {
        Ok((self.component(q)? + 1.0) / 2.0)
    }
}

/// The maximally uncommitted prior: `y_i = 1/2` for every question, i.e.
/// the zero Bloch vector.
pub fn state_of_no_information(n: usize) -> Result<BlochState> {
    check_qubit_count(n)?;
    Ok(BlochState {
        n,
        r: DVector::zeros(question_count(n)),
    })
}

/// The maximally correlated two-qubit state with `r_11 = r_22 = 1`,
/// `r_33 = -1` and all other components zero: both observers' catalogue
/// shows perfect correlations and total ignorance of the individual
/// questions.
pub fn bell_state() -> BlochState {
    let mut r = DVector::zeros(question_count(2));
    r[QuestionIndex::new(&[1, 1]).unwrap().linear()] = 1.0;
    r[QuestionIndex::new(&[2, 2]).unwrap().linear()] = 1.0;
    r[QuestionIndex::new(&[3, 3]).unwrap().linear()] = -1.0;
    BlochState { n: 2, r }
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace (positivity is deliberately not
    /// checked here; see [`validate_state`]).
    pub fn new(n: usize, m: ComplexMatrix) -> Result<Self> {
        check_qubit_count(n)?;
        let dim = 1usize << n;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "density matrix for n={n} must be {dim}x{dim}, got {}x{}",
                    m.nrows(),
                    m.ncols()
                ),
            });
        }
        let asym = max_abs(&(m.adjoint() - &m));
        if asym > tol::ALGEBRAIC_TOL {
            return Err(Error::NotHermitian { residual: asym });
        }
        let tr = m.trace();
        let tr_residual = (tr - Complex64::new(1.0, 0.0)).norm();
        if tr_residual > tol::ALGEBRAIC_TOL {
            return Err(Error::NotUnitTrace {
                residual: tr_residual,
            });
        }
        Ok(DensityMatrix { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Smallest eigenvalue; nonnegative (within tolerance) on physical
    /// states.
    pub fn min_eigenvalue(&self) -> f64 {
        crate::linalg::min_eigenvalue(&self.m)
    }

    /// Sorted (ascending) eigenvalue list.
    pub fn spectrum(&self) -> Vec<f64> {
        let (vals, _) = hermitian_eigen(&self.m);
        let mut v: Vec<f64> = vals.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// Expands a Bloch vector into its density matrix
/// `rho = (1 + sum_i r_i sigma_i) / 2^n`.
pub fn bloch_to_density(s: &BlochState) -> DensityMatrix {
    let dim = 1usize << s.n;
    let mut m = ComplexMatrix::identity(dim, dim);
    for (i, q) in all_questions(s.n).iter().enumerate() {
        if s.r[i] != 0.0 {
            m += pauli_matrix(q) * Complex64::new(s.r[i], 0.0);
        }
    }
    m /= Complex64::new(dim as f64, 0.0);
    DensityMatrix { n: s.n, m }
}

/// Reads the Bloch components back out of a density matrix via
/// `r_i = trace(rho sigma_i)`.  The traces of a Hermitian matrix against
/// Hermitian observables are real; imaginary parts (which are bounded by
/// the Hermiticity check at construction) are discarded.
pub fn density_to_bloch(rho: &DensityMatrix) -> BlochState {
    let qs = all_questions(rho.n);
    let mut r = DVector::zeros(qs.len());
    for (i, q) in qs.iter().enumerate() {
        let sigma = pauli_matrix(q);
        // trace(rho sigma) without forming the product matrix.
        let mut tr = Complex64::new(0.0, 0.0);
        for a in 0..rho.m.nrows() {
            for b in 0..rho.m.ncols() {
                tr += rho.m[(a, b)] * sigma[(b, a)];
            }
        }
        r[i] = tr.re;
    }
    BlochState { n: rho.n, r }
}

/// Squared Bloch norm: the number of answered independent bits.
pub fn info_measure(s: &BlochState) -> InformationContent {
    InformationContent {
        bits: s.r.norm_squared(),
    }
}

/// Pure/mixed classification by operator idempotence (`rho^2 = rho`), with
/// the norm condition `|r|^2 = 2^n - 1` reported as a cross-check.
///
/// Returns an error when the state is not positive semidefinite, in which
/// case the verdict would be meaningless.
pub fn classify(s: &BlochState) -> Result<Classification> {
    let rho = bloch_to_density(s);
    let min_eig = rho.min_eigenvalue();
    if min_eig < tol::PSD_MIN_EIGENVALUE {
        return Err(Error::InvalidState {
            min_eigenvalue: min_eig,
        });
    }
    let m = rho.matrix();
    let idempotence_residual = max_abs(&(m * m - m));
    let pure = idempotence_residual < tol::PURITY_TOL;
    let target = (1usize << s.n) as f64 - 1.0;
    let norm_matches_pure = (s.r.norm_squared() - target).abs() < tol::PURITY_TOL;
    Ok(Classification {
        kind: if pure { StateKind::Pure } else { StateKind::Mixed },
        idempotence_residual,
        norm_matches_pure,
    })
}

impl QuestionVector {
    /// Validates that `q . sigma` is a genuine binary observable:
    /// squares to the identity within tolerance (the traceless part is
    /// automatic because every basis operator is traceless).
    pub fn new(n: usize, q: Vec<f64>) -> Result<Self> {
        check_qubit_count(n)?;
        let expected = question_count(n);
        if q.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: q.len(),
            });
        }
        let v = QuestionVector {
            n,
            q: DVector::from_vec(q),
        };
        let op = v.operator();
        let dim = 1usize << n;
        let residual = max_abs(&(&op * &op - ComplexMatrix::identity(dim, dim)));
        if residual > tol::PURITY_TOL {
            return Err(Error::InvalidQuestionVector { residual });
        }
        Ok(v)
    }

    /// The basis direction for a catalogue question; valid by construction.
    pub fn basis(index: &QuestionIndex) -> Self {
        let mut q = DVector::zeros(question_count(index.n()));
        q[index.linear()] = 1.0;
        QuestionVector { n: index.n(), q }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> &DVector<f64> {
        &self.q
    }

    /// The observable `q . sigma`.
    pub fn operator(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (i, idx) in all_questions(self.n).iter().enumerate() {
            if self.q[i] != 0.0 {
                m += pauli_matrix(idx) * Complex64::new(self.q[i], 0.0);
            }
        }
        m
    }

    /// The projector onto the "yes" eigenspace, `P = (1 + q . sigma) / 2`.
    pub fn projector(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        (ComplexMatrix::identity(dim, dim) + self.operator()) * Complex64::new(0.5, 0.0)
    }
}

/// Probability of "yes" by the linear rule `Y(q|r) = (q . r + 1) / 2`;
/// equal to `trace(rho P_q)` (the test suites verify the two forms against
/// each other).
pub fn born_probability(q: &QuestionVector, s: &BlochState) -> Result<f64> {
    if q.n != s.n {
        return Err(Error::DimensionMismatch {
            context: format!("question vector has n={}, state has n={}", q.n, s.n),
        });
    }
    Ok((q.q.dot(&s.r) + 1.0) / 2.0)
}

/// Projective posterior update on a catalogue question, evaluated in closed
/// form.
///
/// The rule is `rho' = P rho P / trace(rho P)` with `P` the answer
/// projector.  Expanding in the Pauli basis gives, with `s` the answer sign
/// and `p` the answer probability:
/// the asked component becomes exactly `s`; every component complementary
/// to the asked question vanishes exactly; and every other compatible
/// component `b` becomes `(r_b + s phi r_c) / (2p)`, where `sigma_a sigma_b
/// = phi sigma_c` defines the partner component `c` and the sign `phi`.
/// The closed form is what makes repeatability exact rather than
/// approximate; the matrix-level rule is used as an oracle in the tests.
pub fn posterior_update(s: &BlochState, a: &QuestionIndex, answer: Answer) -> Result<BlochState> {
    if a.n() != s.n {
        return Err(Error::LengthMismatch {
            expected: s.n,
            got: a.n(),
        });
    }
    let sign = answer.sign();
    let p = (1.0 + sign * s.r[a.linear()]) / 2.0;
    if p <= tol::ZERO_PROBABILITY_TOL {
        return Err(Error::ZeroProbabilityAnswer { probability: p });
    }
    let qs = all_questions(s.n);
    let mut r = DVector::zeros(qs.len());
    for (i, b) in qs.iter().enumerate() {
        if b == a {
            r[i] = sign;
        } else if compatible_unchecked(a, b) {
            let (c, phase) = pauli_product(a, b).expect("same n");
            let c = c.expect("distinct labels give a nonzero product");
            let phi = phase.real_sign();
            r[i] = (s.r[i] + sign * phi * s.r[c.linear()]) / (2.0 * p);
        }
        // Complementary components stay exactly zero.
    }
    Ok(BlochState { n: s.n, r })
}

/// Full validity report: positivity of the associated density matrix plus
/// the cheap component-range check, with classification for valid states.
pub fn validate_state(s: &BlochState) -> StateValidation {
    let rho = bloch_to_density(s);
    let min_eigenvalue = rho.min_eigenvalue();
    let components_in_range = s.r.iter().all(|&x| x.abs() <= 1.0 + tol::ALGEBRAIC_TOL);
    let valid = min_eigenvalue >= tol::PSD_MIN_EIGENVALUE;
    let classification = if valid {
        classify(s).ok()
    } else {
        None
    };
    StateValidation {
        n: s.n,
        info_bits: s.r.norm_squared(),
        min_eigenvalue,
        components_in_range,
        valid,
        classification,
    }
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state: a normalized complex-Gaussian vector in
/// `C^{2^n}`, returned as its Bloch vector.  Deterministic in the seed.
pub fn random_pure(n: usize, seed: u64) -> Result<BlochState> {
    check_qubit_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let mut v = DVector::from_fn(dim, |_, _| complex_gaussian(&mut rng));
    let norm = v.norm();
    v /= Complex64::new(norm, 0.0);
    let m = &v * v.adjoint();
    Ok(density_to_bloch(&DensityMatrix { n, m }))
}

/// Hilbert-Schmidt-random mixed state: `rho = A A^dagger / trace(A A^dagger)`
/// with complex-Gaussian `A`.  Deterministic in the seed.
pub fn random_mixed(n: usize, seed: u64) -> Result<BlochState> {
    check_qubit_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n;
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(&mut rng));
    let mut m = &a * a.adjoint();
    let tr = m.trace();
    m /= tr;
    Ok(density_to_bloch(&DensityMatrix { n, m }))
}

// --- serialization ----------------------------------------------------

#[derive(Serialize, Deserialize)]
struct BlochStateRepr {
    n: usize,
    r: Vec<f64>,
}

impl Serialize for BlochState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BlochStateRepr {
            n: self.n,
            r: self.r.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlochState {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BlochStateRepr::deserialize(deserializer)?;
        BlochState::new(repr.n, repr.r).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixRepr {
    n: usize,
    /// Row-major `[re, im]` pairs.
    entries: Vec<[f64; 2]>,
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let dim = self.m.nrows();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = self.m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        DensityMatrixRepr { n: self.n, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DensityMatrixRepr::deserialize(deserializer)?;
        let dim = 1usize << repr.n;
        if repr.entries.len() != dim * dim {
            return Err(serde::de::Error::custom(format!(
                "expected {} entries, got {}",
                dim * dim,
                repr.entries.len()
            )));
        }
        let m = ComplexMatrix::from_fn(dim, dim, |i, j| {
            let [re, im] = repr.entries[i * dim + j];
            Complex64::new(re, im)
        });
        DensityMatrix::new(repr.n, m).map_err(serde::de::Error::custom)
    }
}

/// Formats a float with 17 significant digits, enough for an exact
/// `f64` round trip; used by every CSV writer.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV row for a state: `n, r_0, r_1, ...`.
pub fn state_csv_row(s: &BlochState) -> String {
    let mut fields = vec![s.n.to_string()];
    fields.extend(s.r.iter().map(|&x| fmt_f64(x)));
    fields.join(",")
}
