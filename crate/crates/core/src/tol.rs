//! Numerical tolerances used across the crate, pinned in one place.
//!
//! Every bound below is part of the acceptance contract of some check, so
//! changing one is a behavioural change, not a tuning knob.  The rationale
//! comments record why each magnitude is safe at the problem sizes involved
//! (dense complex matrices of dimension at most 16, real generators of
//! dimension at most 255).

/// Exact algebraic identities evaluated in double precision: Pauli product
/// phases, Born-rule double representation, charge-sum identities, generator
/// antisymmetry and sparsity patterns, monogamy cross-correlations.  A dozen
/// floating-point operations on O(1) quantities keep the error within a few
/// ulp, so 1e-12 leaves four orders of magnitude of headroom.
pub const ALGEBRAIC_TOL: f64 = 1e-12;

/// Positive semidefiniteness margin for density matrices: the minimum
/// eigenvalue may undershoot zero by this much before a state is rejected.
/// Eigenvalues of 16x16 Hermitian matrices computed by QR iteration are
/// accurate to ~1e-14 in the spectral norm, so -1e-10 rejects nothing valid.
pub const PSD_MIN_EIGENVALUE: f64 = -1e-10;

/// Purity decisions: a state is pure when its density matrix is idempotent,
/// max-abs(rho^2 - rho) below this bound.  Also used for the pure-state norm
/// cross-check |r|^2 = 2^N - 1 and the pentagon equalities on pure states,
/// which inherit the same quadratic error profile.
pub const PURITY_TOL: f64 = 1e-9;

/// Norm conservation along exponentiated trajectories and the one-parameter
/// group law.  The scaling-and-squaring exponential of a 15x15 generator is
/// backward stable; 1e-10 absorbs the accumulated rounding at |t| of a few
/// units.
pub const EVOLUTION_NORM_TOL: f64 = 1e-10;

/// Pentagon charges sampled along a trajectory must match their t=0 values
/// this closely (squares of evolved components, hence slightly looser than
/// the norm bound).
pub const TRAJECTORY_CHARGE_TOL: f64 = 1e-9;

/// Agreement between the two independent evolution paths (Bloch-space
/// exponential vs. Hilbert-space eigendecomposition).  Both paths are
/// accurate to ~1e-13; 1e-8 keeps the comparison meaningful without being
/// flaky for Hamiltonians of O(1) norm.
pub const BLOCH_DENSITY_EQUIV_TOL: f64 = 1e-8;

/// Step used by the central finite-difference probe of the equation of
/// motion, and the residual bound it must meet.  The truncation error is
/// (2|H|)^3 eps^2 / 6; test Hamiltonians are normalized to unit coefficient
/// norm so the bound holds with an order of magnitude to spare.
pub const VON_NEUMANN_FD_EPSILON: f64 = 1e-4;
pub const VON_NEUMANN_FD_TOL: f64 = 1e-6;

/// Rank threshold for the commutator-closure iteration: a candidate
/// direction (normalized to unit Frobenius norm) is new when its component
/// orthogonal to the current span exceeds this.  Genuine new directions in
/// these algebras come in with O(1) residuals; numerical dust sits at 1e-15.
pub const LIE_RANK_TOL: f64 = 1e-8;

/// Probabilities at or below this threshold are treated as zero when
/// conditioning on an answer.
pub const ZERO_PROBABILITY_TOL: f64 = 1e-12;

/// Multi-shot tomography acceptance: max-abs frequency error after
/// `TOMOGRAPHY_SAMPLES` draws per question on a single qubit.  The binomial
/// standard error is 1/(2 sqrt(M)) ~ 0.0016, so 0.02 is a > 6 sigma bound.
pub const TOMOGRAPHY_SAMPLES: usize = 100_000;
pub const TOMOGRAPHY_ERROR_BOUND: f64 = 0.02;

/// Acceptable least-squares slope band for the tomography error-vs-samples
/// curve on log-log axes; the estimator converges as M^(-1/2).
pub const CONVERGENCE_SLOPE_MIN: f64 = -0.65;
pub const CONVERGENCE_SLOPE_MAX: f64 = -0.35;

/// A generic random mixed state must leave at least this much slack in some
/// pentagon equality (the equalities characterize pure states).
pub const MIXED_CHARGE_DEFICIT: f64 = 1e-3;

/// Wall-clock budgets, in seconds, for the timed acceptance checks.
pub const RUNTIME_CENSUS_S: f64 = 1.0;
pub const RUNTIME_PENTAGON_S: f64 = 5.0;
pub const RUNTIME_GENERATORS_S: f64 = 60.0;
