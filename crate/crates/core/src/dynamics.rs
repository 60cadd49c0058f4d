//! Reversible dynamics on Bloch space and its Hilbert-space counterpart.
//!
//! Time evolution acts linearly on Bloch vectors, `r(t) = exp(t G) r(0)`,
//! with `G` antisymmetric (information is conserved) and vanishing on
//! compatible question pairs.  At `n = 2` the allowed one-parameter groups
//! are generated by the fifteen pentagon swaps, each exchanging information
//! between one pentagon pair while conserving all six pentagon charges; the
//! same generators arise as adjoint actions `-i[H, .]` of Pauli
//! Hamiltonians, and the module checks the two constructions against each
//! other.  Exponentiation is implemented twice on purpose: scaling-and-
//! squaring on Bloch space versus Hermitian eigendecomposition on Hilbert
//! space, so the equivalence check compares genuinely different algorithms.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{maximal_cliques, pentagon_lattice, PentagonLattice};
use crate::linalg::{frobenius_dot, hermitian_eigen, max_abs, max_abs_real, ComplexMatrix, RealMatrix};
use crate::questions::{
    all_questions, check_qubit_count, compatible_unchecked, pauli_matrix, pauli_product,
    question_count, PauliPhase, QuestionIndex,
};
use crate::states::{bloch_to_density, density_to_bloch, BlochState, DensityMatrix};
use crate::tol;

/// Seed for the fixed sample of pure states over which [`check_generator`]
/// evaluates the pentagon-conservation residual; pinned so reports are
/// reproducible.
const PENTAGON_SAMPLE_SEED: u64 = 0x70C4_D155;
const PENTAGON_SAMPLE_COUNT: usize = 20;

/// Antisymmetric generator of a one-parameter evolution group on Bloch
/// space.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionGenerator {
    n: usize,
    g: RealMatrix,
}

impl EvolutionGenerator {
    /// Wraps a matrix after checking its dimension.  Antisymmetry and the
    /// compatibility-zero pattern are diagnosed by [`check_generator`]
    /// rather than enforced here, so that deliberately broken generators
    /// can be constructed and reported on.
    pub fn new(n: usize, g: RealMatrix) -> Result<Self> {
        check_qubit_count(n)?;
        let d = question_count(n);
        if g.nrows() != d || g.ncols() != d {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "generator for n={n} must be {d}x{d}, got {}x{}",
                    g.nrows(),
                    g.ncols()
                ),
            });
        }
        Ok(EvolutionGenerator { n, g })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.g
    }
}

/// A Hamiltonian expressed by its real coefficients over the question
/// catalogue (the traceless Pauli words); the identity component is
/// physically irrelevant and omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n: usize,
    coefficients: DVector<f64>,
}

impl Hamiltonian {
    pub fn new(n: usize, coefficients: Vec<f64>) -> Result<Self> {
        check_qubit_count(n)?;
        let expected = question_count(n);
        if coefficients.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: coefficients.len(),
            });
        }
        Ok(Hamiltonian {
            n,
            coefficients: DVector::from_vec(coefficients),
        })
    }

    /// The Hamiltonian with a single unit coefficient on one Pauli word.
    pub fn pauli_word(index: &QuestionIndex) -> Self {
        let mut coefficients = DVector::zeros(question_count(index.n()));
        coefficients[index.linear()] = 1.0;
        Hamiltonian {
            n: index.n(),
            coefficients,
        }
    }

    /// Random Hamiltonian with Gaussian coefficients normalized to unit
    /// coefficient norm; the normalization keeps operator norms at O(1) so
    /// the finite-difference probes stay in their asymptotic regime.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_qubit_count(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut coefficients =
            DVector::from_fn(question_count(n), |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = coefficients.norm();
        coefficients /= norm;
        Ok(Hamiltonian { n, coefficients })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    /// The operator `H = sum_i h_i sigma_i`.
    pub fn matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (i, idx) in all_questions(self.n).iter().enumerate() {
            if self.coefficients[i] != 0.0 {
                m += pauli_matrix(idx) * Complex64::new(self.coefficients[i], 0.0);
            }
        }
        m
    }
}

/// The swap generator of a pentagon pair.
///
/// With `s` the unique question shared by pentagons `a` and `b`, the
/// generator has one `+-1` entry pair for every question `x` complementary
/// to `s`: writing `sigma_s sigma_x = i phi sigma_y` (the product phase is
/// imaginary because `s` and `x` anticommute), the entry is
/// `G[x][y] = phi`.  Running over all eight complementary `x` fills in the
/// antisymmetric partners automatically and pairs the four swapped
/// question couples, each couple lying inside one of the four pentagons
/// other than `a` and `b`.
pub fn pentagon_swap_generator(a: usize, b: usize) -> Result<EvolutionGenerator> {
    let lattice = pentagon_lattice();
    pentagon_swap_with(&lattice, a, b)
}

/// As [`pentagon_swap_generator`], reusing a prebuilt lattice.
pub fn pentagon_swap_with(lattice: &PentagonLattice, a: usize, b: usize) -> Result<EvolutionGenerator> {
    let shared = lattice.shared_question(a, b)?;
    let d = question_count(2);
    let mut g = RealMatrix::zeros(d, d);
    for x in all_questions(2) {
        if compatible_unchecked(&shared, &x) {
            continue;
        }
        let (y, phase) = pauli_product(&shared, &x).expect("same n");
        let y = y.expect("distinct labels give a nonzero product");
        let phi = match phase {
            PauliPhase::I => 1.0,
            PauliPhase::MinusI => -1.0,
            // Complementary words anticommute, so the phase is imaginary.
            _ => unreachable!("complementary pair with real product phase"),
        };
        g[(x.linear(), y.linear())] = phi;
    }
    Ok(EvolutionGenerator { n: 2, g })
}

/// All fifteen pentagon-pair swaps, ordered by pair `(a, b)` ascending.
pub fn all_pentagon_swaps() -> Vec<EvolutionGenerator> {
    let lattice = pentagon_lattice();
    let mut out = Vec::with_capacity(15);
    for a in 1..=6 {
        for b in (a + 1)..=6 {
            out.push(pentagon_swap_with(&lattice, a, b).expect("valid labels"));
        }
    }
    out
}

/// The adjoint generator of a Hamiltonian:
/// `g[i][j] = trace(sigma_i . (-i)[H, sigma_j]) / 2^n`, evaluated literally
/// at the matrix level (the sparse structure-constant shortcut is used as
/// an oracle in the tests, not here).
pub fn generator_from_hamiltonian(h: &Hamiltonian) -> EvolutionGenerator {
    let d = question_count(h.n);
    let dim = 1usize << h.n;
    let sigmas: Vec<ComplexMatrix> = all_questions(h.n).iter().map(pauli_matrix).collect();
    let hm = h.matrix();
    let mut g = RealMatrix::zeros(d, d);
    let minus_i = Complex64::new(0.0, -1.0);
    for j in 0..d {
        let commutator = (&hm * &sigmas[j] - &sigmas[j] * &hm) * minus_i;
        for i in 0..d {
            let mut tr = Complex64::new(0.0, 0.0);
            for a in 0..dim {
                for b in 0..dim {
                    tr += sigmas[i][(a, b)] * commutator[(b, a)];
                }
            }
            g[(i, j)] = tr.re / dim as f64;
        }
    }
    EvolutionGenerator { n: h.n, g }
}

/// Adjoint generators of all single Pauli words of the given interrogation
/// weights; `(n=1, [1])` yields the three rotation generators, and
/// `(n=3, [1, 2])` the embedded one- and two-qubit generator set whose
/// closure is the full 63-dimensional algebra.
pub fn adjoint_generators_for_weights(n: usize, weights: &[usize]) -> Result<Vec<EvolutionGenerator>> {
    check_qubit_count(n)?;
    Ok(all_questions(n)
        .iter()
        .filter(|q| weights.contains(&q.weight()))
        .map(|q| generator_from_hamiltonian(&Hamiltonian::pauli_word(q)))
        .collect())
}

/// Structural report on a generator.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub n: usize,
    /// max-abs of `g + g^T`.
    pub antisymmetry_residual: f64,
    /// Index pairs `(i, j)`, `i <= j`, of compatible questions carrying a
    /// nonzero entry.
    pub pattern_violations: Vec<[usize; 2]>,
    /// Largest magnitude found on a compatible pair.
    pub max_pattern_abs: f64,
    /// For `n = 2`: the largest instantaneous pentagon-charge drift
    /// `|sum_{i in Pent_a} r_i (G r)_i|` over a fixed sample of random
    /// pure states.  The conservation law characterizes the action on pure
    /// states (mixed states generically violate the individual equalities),
    /// so the probe samples the pure manifold.
    pub pentagon_residual: Option<f64>,
    pub pass: bool,
}

/// Checks antisymmetry, the compatibility-zero pattern, and (at `n = 2`)
/// pentagon-charge conservation on random pure states.
pub fn check_generator(g: &EvolutionGenerator) -> GeneratorCheck {
    let m = &g.g;
    let antisymmetry_residual = max_abs_real(&(m + m.transpose()));

    let qs = all_questions(g.n);
    let mut pattern_violations = Vec::new();
    let mut max_pattern_abs = 0.0f64;
    for i in 0..qs.len() {
        for j in i..qs.len() {
            if compatible_unchecked(&qs[i], &qs[j]) {
                let v = m[(i, j)].abs().max(m[(j, i)].abs());
                max_pattern_abs = max_pattern_abs.max(v);
                if v > tol::ALGEBRAIC_TOL {
                    pattern_violations.push([i, j]);
                }
            }
        }
    }

    let pentagon_residual = (g.n == 2).then(|| {
        let lattice = pentagon_lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(PENTAGON_SAMPLE_SEED);
        let mut worst = 0.0f64;
        for _ in 0..PENTAGON_SAMPLE_COUNT {
            let s = crate::states::random_pure(2, rng.gen()).expect("n=2 within cap");
            let dr = m * s.r();
            for pent in lattice.pentagons() {
                let drift: f64 = pent
                    .members()
                    .iter()
                    .map(|q| s.r()[q.linear()] * dr[q.linear()])
                    .sum();
                worst = worst.max(drift.abs());
            }
        }
        worst
    });

    let pass = antisymmetry_residual <= tol::ALGEBRAIC_TOL
        && pattern_violations.is_empty()
        && pentagon_residual.is_none_or(|r| r <= tol::ALGEBRAIC_TOL);
    GeneratorCheck {
        n: g.n,
        antisymmetry_residual,
        pattern_violations,
        max_pattern_abs,
        pentagon_residual,
        pass,
    }
}

/// Evolves a Bloch vector: `r(t) = exp(t g) r(0)`, with the exponential
/// computed by scaling-and-squaring.
pub fn evolve_bloch(g: &EvolutionGenerator, s: &BlochState, t: f64) -> Result<BlochState> {
    if g.n != s.n() {
        return Err(Error::DimensionMismatch {
            context: format!("generator has n={}, state has n={}", g.n, s.n()),
        });
    }
    let u = (&g.g * t).exp();
    Ok(BlochState::from_vector(s.n(), u * s.r()))
}

/// Evolves a density matrix by unitary conjugation,
/// `rho(t) = U rho U^dagger` with `U = exp(-i H t)` built from the
/// eigendecomposition of `H`.
pub fn evolve_density(h: &Hamiltonian, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if h.n != rho.n() {
        return Err(Error::DimensionMismatch {
            context: format!("hamiltonian has n={}, state has n={}", h.n, rho.n()),
        });
    }
    let (vals, vecs) = hermitian_eigen(&h.matrix());
    let phases = ComplexMatrix::from_diagonal(&vals.map(|e| {
        let angle = -e * t;
        Complex64::new(angle.cos(), angle.sin())
    }));
    let u = &vecs * phases * vecs.adjoint();
    let evolved = &u * rho.matrix() * u.adjoint();
    // Unitary conjugation preserves Hermiticity and trace to rounding; the
    // constructor re-checks both.
    DensityMatrix::new(rho.n(), evolved)
}

/// Maximum deviation between the two evolution paths: Bloch-space
/// exponential of the adjoint generator versus Hilbert-space unitary
/// conjugation, compared component by component after conversion.
pub fn adjoint_equivalence_check(h: &Hamiltonian, s: &BlochState, t: f64) -> Result<f64> {
    let bloch_path = evolve_bloch(&generator_from_hamiltonian(h), s, t)?;
    let density_path = density_to_bloch(&evolve_density(h, &bloch_to_density(s), t)?);
    Ok((bloch_path.r() - density_path.r()).amax())
}

/// Central finite-difference residual of the equation of motion
/// `d rho / dt = -i [H, rho]` at time `t`, probed with step `eps`.
pub fn von_neumann_residual(h: &Hamiltonian, s: &BlochState, t: f64, eps: f64) -> Result<f64> {
    let rho0 = bloch_to_density(s);
    let plus = evolve_density(h, &rho0, t + eps)?;
    let minus = evolve_density(h, &rho0, t - eps)?;
    let at_t = evolve_density(h, &rho0, t)?;
    let derivative = (plus.matrix() - minus.matrix()) / Complex64::new(2.0 * eps, 0.0);
    let hm = h.matrix();
    let commutator = (&hm * at_t.matrix() - at_t.matrix() * &hm) * Complex64::new(0.0, -1.0);
    Ok(max_abs(&(derivative - commutator)))
}

/// Dimension of the Lie algebra spanned by the given generators: the span
/// is extended with pairwise commutators until a full pass adds no new
/// direction.  Rank decisions use the Frobenius norm left after
/// orthogonalizing a unit-normalized candidate against the current basis,
/// with threshold [`tol::LIE_RANK_TOL`].
pub fn lie_closure(generators: &[EvolutionGenerator]) -> Result<usize> {
    let n = match generators.first() {
        Some(g) => g.n,
        None => return Err(Error::EmptyGeneratorList),
    };
    if let Some(bad) = generators.iter().find(|g| g.n != n) {
        return Err(Error::DimensionMismatch {
            context: format!("generators mix n={n} and n={}", bad.n),
        });
    }

    let mut basis: Vec<RealMatrix> = Vec::new();
    for g in generators {
        try_extend_basis(&mut basis, g.g.clone());
    }

    // `processed` marks how many leading basis elements have had all their
    // mutual commutators taken; each pass commutates every old-new and
    // new-new pair exactly once.
    let mut processed = 0;
    while processed < basis.len() {
        let frontier = basis.len();
        for i in 0..frontier {
            for j in processed.max(i + 1)..frontier {
                let candidate = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                try_extend_basis(&mut basis, candidate);
            }
        }
        processed = frontier;
    }
    Ok(basis.len())
}

/// Orthogonalizes `candidate` against `basis` (two modified Gram-Schmidt
/// passes) and appends it when the remainder is significant.
fn try_extend_basis(basis: &mut Vec<RealMatrix>, candidate: RealMatrix) {
    let norm = candidate.norm();
    if norm < f64::MIN_POSITIVE {
        return;
    }
    let mut c = candidate / norm;
    for _ in 0..2 {
        for b in basis.iter() {
            let overlap = frobenius_dot(b, &c);
            c -= b * overlap;
        }
    }
    let residual = c.norm();
    if residual > tol::LIE_RANK_TOL {
        basis.push(c / residual);
    }
}

/// Compares two generators up to one global scale factor, fixed by the
/// entry of largest magnitude in `reference`.  Returns `(scale, max-abs
/// residual of candidate - scale * reference)`.
pub fn match_up_to_scale(candidate: &EvolutionGenerator, reference: &EvolutionGenerator) -> Result<(f64, f64)> {
    if candidate.n != reference.n {
        return Err(Error::DimensionMismatch {
            context: format!(
                "cannot compare generators with n={} and n={}",
                candidate.n, reference.n
            ),
        });
    }
    let mut pivot = (0usize, 0usize);
    let mut best = 0.0f64;
    for i in 0..reference.g.nrows() {
        for j in 0..reference.g.ncols() {
            if reference.g[(i, j)].abs() > best {
                best = reference.g[(i, j)].abs();
                pivot = (i, j);
            }
        }
    }
    if best == 0.0 {
        let residual = max_abs_real(&candidate.g);
        return Ok((0.0, residual));
    }
    let scale = candidate.g[pivot] / reference.g[pivot];
    let residual = max_abs_real(&(&candidate.g - &reference.g * scale));
    Ok((scale, residual))
}

/// One sampled point of an evolution trajectory.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub charges: Vec<f64>,
    pub norm_squared: f64,
}

/// Charges and norm along `exp(t g) r` over a time grid.  At `n = 2` the
/// charges are the six pentagon charges; at other sizes the rows carry the
/// maximal-clique charges of the catalogue.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryReport {
    pub n: usize,
    pub charge_labels: Vec<String>,
    pub rows: Vec<TrajectoryRow>,
    /// Largest charge drift relative to t = 0 anywhere on the grid.
    pub max_charge_drift: f64,
    /// Largest |r(t)|^2 drift relative to t = 0.
    pub max_norm_drift: f64,
    pub pass: bool,
}

/// Samples the trajectory of `s` under `g` at the given times.
pub fn trajectory(g: &EvolutionGenerator, s: &BlochState, times: &[f64]) -> Result<TrajectoryReport> {
    if g.n != s.n() {
        return Err(Error::DimensionMismatch {
            context: format!("generator has n={}, state has n={}", g.n, s.n()),
        });
    }
    let (charge_labels, sets): (Vec<String>, Vec<Vec<usize>>) = if g.n == 2 {
        let lattice = pentagon_lattice();
        lattice
            .pentagons()
            .iter()
            .enumerate()
            .map(|(k, p)| {
                (
                    format!("pent{}", k + 1),
                    p.members().iter().map(|q| q.linear()).collect(),
                )
            })
            .unzip()
    } else {
        let cliques = maximal_cliques(&crate::graph::build_graph(g.n)?);
        cliques
            .iter()
            .enumerate()
            .map(|(k, c)| {
                (
                    format!("clique{}", k + 1),
                    c.members().iter().map(|q| q.linear()).collect(),
                )
            })
            .unzip()
    };

    let charges_of = |r: &DVector<f64>| -> Vec<f64> {
        sets.iter()
            .map(|set| set.iter().map(|&i| r[i] * r[i]).sum())
            .collect()
    };

    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let evolved = evolve_bloch(g, s, t)?;
        rows.push(TrajectoryRow {
            t,
            charges: charges_of(evolved.r()),
            norm_squared: evolved.r().norm_squared(),
        });
    }

    let reference_charges = charges_of(s.r());
    let reference_norm = s.r().norm_squared();
    let mut max_charge_drift = 0.0f64;
    let mut max_norm_drift = 0.0f64;
    for row in &rows {
        for (c, c0) in row.charges.iter().zip(&reference_charges) {
            max_charge_drift = max_charge_drift.max((c - c0).abs());
        }
        max_norm_drift = max_norm_drift.max((row.norm_squared - reference_norm).abs());
    }
    let pass = max_norm_drift <= tol::EVOLUTION_NORM_TOL
        && max_charge_drift <= tol::TRAJECTORY_CHARGE_TOL;
    Ok(TrajectoryReport {
        n: g.n,
        charge_labels,
        rows,
        max_charge_drift,
        max_norm_drift,
        pass,
    })
}

/// CSV rendering of a trajectory: `t, charges..., norm_squared`.
pub fn trajectory_csv(report: &TrajectoryReport) -> String {
    let mut out = String::from("t");
    for label in &report.charge_labels {
        out.push(',');
        out.push_str(label);
    }
    out.push_str(",norm_squared\n");
    for row in &report.rows {
        out.push_str(&crate::states::fmt_f64(row.t));
        for c in &row.charges {
            out.push(',');
            out.push_str(&crate::states::fmt_f64(*c));
        }
        out.push(',');
        out.push_str(&crate::states::fmt_f64(row.norm_squared));
        out.push('\n');
    }
    out
}

// --- serialization ----------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GeneratorRepr {
    n: usize,
    /// Strictly-upper-triangle sparse triplets; the antisymmetric partner
    /// of each entry is implied.
    entries: Vec<(usize, usize, f64)>,
}

impl Serialize for EvolutionGenerator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for i in 0..self.g.nrows() {
            for j in (i + 1)..self.g.ncols() {
                if self.g[(i, j)] != 0.0 {
                    entries.push((i, j, self.g[(i, j)]));
                }
            }
        }
        GeneratorRepr { n: self.n, entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EvolutionGenerator {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = GeneratorRepr::deserialize(deserializer)?;
        let d = question_count(repr.n);
        let mut g = RealMatrix::zeros(d, d);
        for (i, j, v) in repr.entries {
            if i >= d || j >= d {
                return Err(serde::de::Error::custom(format!(
                    "entry ({i}, {j}) outside a {d}x{d} generator"
                )));
            }
            g[(i, j)] = v;
            g[(j, i)] = -v;
        }
        EvolutionGenerator::new(repr.n, g).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, classify, random_mixed, random_pure, state_of_no_information, StateKind};
    use approx::assert_abs_diff_eq;

    fn q(s: &str) -> QuestionIndex {
        s.parse().unwrap()
    }

    #[test]
    fn swap_1_2_matches_the_catalogued_entries() {
        let g = pentagon_swap_generator(1, 2).unwrap();
        let m = g.matrix();
        // Pairs (Q_20, Q_31), (Q_30, Q_21), (Q_12, Q_03), (Q_13, Q_02)
        // with signs +, -, +, -.
        let entries = [
            ("20", "31", 1.0),
            ("30", "21", -1.0),
            ("12", "03", 1.0),
            ("13", "02", -1.0),
        ];
        let mut expected = RealMatrix::zeros(15, 15);
        for (a, b, sign) in entries {
            expected[(q(a).linear(), q(b).linear())] = sign;
            expected[(q(b).linear(), q(a).linear())] = -sign;
        }
        assert_eq!(m, &expected);
    }

    #[test]
    fn swap_rejects_bad_labels() {
        assert!(matches!(
            pentagon_swap_generator(1, 1),
            Err(Error::EqualPentagons)
        ));
        assert!(matches!(
            pentagon_swap_generator(0, 2),
            Err(Error::BadLabel { label: 0 })
        ));
        assert!(matches!(
            pentagon_swap_generator(1, 7),
            Err(Error::BadLabel { label: 7 })
        ));
    }

    #[test]
    fn all_swaps_have_eight_entries_and_pass_checks() {
        let lattice = pentagon_lattice();
        let swaps = all_pentagon_swaps();
        assert_eq!(swaps.len(), 15);
        let mut labels = Vec::new();
        for a in 1..=6 {
            for b in (a + 1)..=6 {
                labels.push((a, b));
            }
        }
        for (g, (a, b)) in swaps.iter().zip(labels) {
            let nonzero = g.matrix().iter().filter(|&&x| x != 0.0).count();
            assert_eq!(nonzero, 8, "swap ({a},{b})");
            let report = check_generator(g);
            assert!(report.pass, "swap ({a},{b}): {report:?}");
            assert_eq!(report.antisymmetry_residual, 0.0);
            assert!(report.pentagon_residual.unwrap() < tol::ALGEBRAIC_TOL);

            // Each swapped pair lies inside one common pentagon, and that
            // pentagon is not a or b.
            let qs = all_questions(2);
            for i in 0..15 {
                for j in (i + 1)..15 {
                    if g.matrix()[(i, j)] == 0.0 {
                        continue;
                    }
                    let pi = lattice.pentagons_of(&qs[i]);
                    let pj = lattice.pentagons_of(&qs[j]);
                    let common: Vec<usize> =
                        pi.iter().filter(|k| pj.contains(k)).copied().collect();
                    assert_eq!(common.len(), 1, "pair ({i},{j}) of swap ({a},{b})");
                    assert_ne!(common[0], a);
                    assert_ne!(common[0], b);
                }
            }
        }
    }

    #[test]
    fn adjoint_generator_of_z_rotates_x_into_y() {
        // H = sigma_3 / 2 generates d r_1/dt = -r_2, d r_2/dt = r_1.
        let h = Hamiltonian::new(1, vec![0.0, 0.0, 0.5]).unwrap();
        let g = generator_from_hamiltonian(&h);
        let m = g.matrix();
        assert_abs_diff_eq!(m[(1, 0)], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(0, 1)], -1.0, epsilon = 1e-14);
        for k in 0..3 {
            assert_abs_diff_eq!(m[(2, k)], 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(m[(k, 2)], 0.0, epsilon = 1e-14);
        }
        assert!(check_generator(&g).pass);
    }

    #[test]
    fn adjoint_generator_matches_structure_constant_oracle() {
        // Independent sparse evaluation from the product phases:
        // g[x][y] = 2 h_s phi whenever sigma_s sigma_y = i phi sigma_x with
        // s complementary to y.
        let h = Hamiltonian::random(2, 99).unwrap();
        let g = generator_from_hamiltonian(&h);
        let qs = all_questions(2);
        let mut oracle = RealMatrix::zeros(15, 15);
        for (s_idx, s) in qs.iter().enumerate() {
            if h.coefficients()[s_idx] == 0.0 {
                continue;
            }
            for y in &qs {
                if compatible_unchecked(s, y) {
                    continue;
                }
                let (x, phase) = pauli_product(s, y).unwrap();
                let x = x.unwrap();
                let phi = match phase {
                    PauliPhase::I => 1.0,
                    PauliPhase::MinusI => -1.0,
                    _ => unreachable!(),
                };
                oracle[(x.linear(), y.linear())] += 2.0 * h.coefficients()[s_idx] * phi;
            }
        }
        assert!(max_abs_real(&(g.matrix() - oracle)) < 1e-12);
    }

    #[test]
    fn zero_hamiltonian_gives_zero_generator() {
        let h = Hamiltonian::new(2, vec![0.0; 15]).unwrap();
        let g = generator_from_hamiltonian(&h);
        assert_eq!(max_abs_real(g.matrix()), 0.0);
    }

    #[test]
    fn swaps_match_adjoint_generators_of_their_shared_word() {
        let lattice = pentagon_lattice();
        for a in 1..=6 {
            for b in (a + 1)..=6 {
                let swap = pentagon_swap_with(&lattice, a, b).unwrap();
                let shared = lattice.shared_question(a, b).unwrap();
                let adjoint = generator_from_hamiltonian(&Hamiltonian::pauli_word(&shared));
                let (scale, residual) = match_up_to_scale(&swap, &adjoint).unwrap();
                assert_abs_diff_eq!(scale.abs(), 0.5, epsilon = 1e-14);
                assert!(residual < 1e-10, "pair ({a},{b}): residual {residual}");
            }
        }
    }

    #[test]
    fn check_generator_flags_broken_inputs() {
        let swap = pentagon_swap_generator(1, 2).unwrap();
        // Symmetric perturbation.
        let mut m = swap.matrix().clone();
        m[(0, 5)] += 1e-6;
        m[(5, 0)] += 1e-6;
        let report = check_generator(&EvolutionGenerator::new(2, m).unwrap());
        assert!(report.antisymmetry_residual > 1e-7);
        assert!(!report.pass);

        // Entry on a compatible pair (Q_11, Q_22).
        let mut m = swap.matrix().clone();
        let (i, j) = (q("11").linear(), q("22").linear());
        m[(i, j)] = 0.5;
        m[(j, i)] = -0.5;
        let report = check_generator(&EvolutionGenerator::new(2, m).unwrap());
        assert_eq!(report.pattern_violations, vec![[i.min(j), i.max(j)]]);
        assert!(!report.pass);
    }

    #[test]
    fn evolution_group_properties() {
        let g = pentagon_swap_generator(2, 5).unwrap();
        let s = random_pure(2, 4).unwrap();

        let identity = evolve_bloch(&g, &s, 0.0).unwrap();
        assert!((identity.r() - s.r()).amax() < 1e-15);

        let (t1, t2) = (0.37, -1.11);
        let chained = evolve_bloch(&g, &evolve_bloch(&g, &s, t1).unwrap(), t2).unwrap();
        let direct = evolve_bloch(&g, &s, t1 + t2).unwrap();
        assert!((chained.r() - direct.r()).amax() < tol::EVOLUTION_NORM_TOL);

        let evolved = evolve_bloch(&g, &s, 2.2).unwrap();
        assert_abs_diff_eq!(
            evolved.r().norm_squared(),
            s.r().norm_squared(),
            epsilon = tol::EVOLUTION_NORM_TOL
        );
    }

    #[test]
    fn density_evolution_preserves_spectrum_and_rotates_correctly() {
        let h = Hamiltonian::new(1, vec![0.0, 0.0, 0.5]).unwrap();
        let s = crate::states::BlochState::new(1, vec![1.0, 0.0, 0.0]).unwrap();
        let rho = bloch_to_density(&s);

        let unchanged = evolve_density(&h, &rho, 0.0).unwrap();
        assert!(max_abs(&(unchanged.matrix() - rho.matrix())) < 1e-15);

        // Half turn about z maps +x to -x.
        let at_pi = density_to_bloch(&evolve_density(&h, &rho, std::f64::consts::PI).unwrap());
        assert_abs_diff_eq!(at_pi.r()[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(at_pi.r()[1], 0.0, epsilon = 1e-12);

        // Spectrum invariance on a mixed state.
        let mixed = bloch_to_density(&random_mixed(1, 8).unwrap());
        let before = mixed.spectrum();
        let after = evolve_density(&h, &mixed, 1.7).unwrap().spectrum();
        for (x, y) in before.iter().zip(&after) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn the_two_evolution_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 1..=2usize {
            for _ in 0..10 {
                let h = Hamiltonian::random(n, rng.gen()).unwrap();
                let s = random_mixed(n, rng.gen()).unwrap();
                let t: f64 = rng.gen_range(-3.0..3.0);
                let deviation = adjoint_equivalence_check(&h, &s, t).unwrap();
                assert!(deviation < tol::BLOCH_DENSITY_EQUIV_TOL, "deviation {deviation}");
            }
        }
        let zero = Hamiltonian::new(1, vec![0.0; 3]).unwrap();
        let s = random_pure(1, 3).unwrap();
        assert!(adjoint_equivalence_check(&zero, &s, 1.0).unwrap() < 1e-14);
    }

    #[test]
    fn finite_difference_probe_of_the_equation_of_motion() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for n in 1..=2usize {
            for _ in 0..5 {
                let h = Hamiltonian::random(n, rng.gen()).unwrap();
                let s = random_mixed(n, rng.gen()).unwrap();
                let t: f64 = rng.gen_range(0.0..2.0);
                let residual =
                    von_neumann_residual(&h, &s, t, tol::VON_NEUMANN_FD_EPSILON).unwrap();
                assert!(residual < tol::VON_NEUMANN_FD_TOL, "residual {residual}");
            }
        }
    }

    #[test]
    fn pure_states_stay_pure_and_charges_ride_along() {
        let g = pentagon_swap_generator(3, 4).unwrap();
        let s = random_pure(2, 21).unwrap();
        let times: Vec<f64> = (0..20).map(|k| 0.3 * k as f64).collect();
        let report = trajectory(&g, &s, &times).unwrap();
        assert!(report.pass, "drift {report:?}");
        assert!(report.max_charge_drift < tol::TRAJECTORY_CHARGE_TOL);

        let late = evolve_bloch(&g, &s, 5.7).unwrap();
        assert_eq!(classify(&late).unwrap().kind, StateKind::Pure);
    }

    #[test]
    fn closure_dimensions() {
        // The fifteen swaps close on themselves.
        assert_eq!(lie_closure(&all_pentagon_swaps()).unwrap(), 15);
        // Single-qubit rotations close at dimension 3.
        let rot = adjoint_generators_for_weights(1, &[1]).unwrap();
        assert_eq!(rot.len(), 3);
        assert_eq!(lie_closure(&rot).unwrap(), 3);
        // A single swap generates a 1-dimensional algebra.
        assert_eq!(lie_closure(&all_pentagon_swaps()[..1]).unwrap(), 1);
        assert!(matches!(lie_closure(&[]), Err(Error::EmptyGeneratorList)));
    }

    #[test]
    fn swaps_are_linearly_independent_by_svd() {
        let swaps = all_pentagon_swaps();
        let mut stacked = RealMatrix::zeros(15, 225);
        for (k, g) in swaps.iter().enumerate() {
            for (col, &v) in g.matrix().iter().enumerate() {
                stacked[(k, col)] = v;
            }
        }
        let svd = stacked.svd(false, false);
        let max_sv = svd.singular_values.max();
        let rank = svd
            .singular_values
            .iter()
            .filter(|&&s| s > tol::LIE_RANK_TOL * max_sv)
            .count();
        assert_eq!(rank, 15);
    }

    #[test]
    fn trajectory_charges_move_on_mixed_states_but_norm_never_does() {
        // The pentagon equalities characterize pure states; a generic mixed
        // state shows genuine charge motion under a swap while the total
        // norm stays put.
        let g = pentagon_swap_generator(1, 2).unwrap();
        let s = random_mixed(2, 5).unwrap();
        let times: Vec<f64> = (0..8).map(|k| 0.5 * k as f64).collect();
        let report = trajectory(&g, &s, &times).unwrap();
        assert!(report.max_norm_drift < tol::EVOLUTION_NORM_TOL);
        assert!(report.max_charge_drift > 1e-3, "mixed state should move charges");
    }

    #[test]
    fn generator_serialization_round_trips() {
        let g = pentagon_swap_generator(4, 6).unwrap();
        let json = serde_json::to_string(&g).unwrap();
        let back: EvolutionGenerator = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
        // Eight nonzero entries serialize as four triplets.
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["entries"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn bell_state_is_stationary_under_its_own_swap() {
        // The (1,2) swap is generated by the shared word Q_11; the Bell
        // state's r_11 component is an eigendirection, and the state only
        // picks up motion in the complementary block, which vanishes here.
        let g = pentagon_swap_generator(1, 2).unwrap();
        let bell = bell_state();
        let evolved = evolve_bloch(&g, &bell, 1.3).unwrap();
        assert!((evolved.r() - bell.r()).amax() < 1e-12);

        let no_info = state_of_no_information(2).unwrap();
        let still = evolve_bloch(&g, &no_info, 2.0).unwrap();
        assert_eq!(still.r().amax(), 0.0);
    }
}
