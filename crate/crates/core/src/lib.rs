//! Verification laboratory for small multi-qubit systems described purely in
//! terms of binary questions and the information an observer holds about
//! their answers.
//!
//! The crate is organised around a catalogue of *questions* (tensor products
//! of Pauli directions, indexed by base-4 multi-indices), the *states* an
//! observer can hold over them (generalized Bloch vectors and their density
//! matrices), the *informational charges* conserved by reversible dynamics,
//! and the combinatorial structures tying them together (complementarity
//! graphs, maximal cliques, the six-pentagon lattice of the two-qubit
//! catalogue).  Every derived quantity is checked against an independent
//! matrix-level computation in the test suites, and the [`verify`] module
//! bundles those checks into a reproducible acceptance battery.

pub mod charges;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod interrogation;
pub mod linalg;
pub mod logic;
pub mod questions;
pub mod states;
pub mod tol;
pub mod verify;

pub use charges::{
    charge, complementarity_audit, complementarity_audit_with, monogamy_demo, pentagon_report,
    pentagon_report_with, AuditEntry, ComplementarityAudit, MonogamyEntry, MonogamyReport,
    PentagonCharge, PentagonReport, TripleFactorization,
};
pub use dynamics::{
    adjoint_equivalence_check, adjoint_generators_for_weights, all_pentagon_swaps,
    check_generator, evolve_bloch, evolve_density, generator_from_hamiltonian, lie_closure,
    match_up_to_scale, pentagon_swap_generator, pentagon_swap_with, trajectory, trajectory_csv,
    von_neumann_residual, EvolutionGenerator, GeneratorCheck, Hamiltonian, TrajectoryReport,
    TrajectoryRow,
};
pub use error::{Error, Result};
pub use graph::{
    build_graph, clique_census, export_graph, maximal_cliques, pentagon_lattice,
    CliqueCensus, ComplementarityGraph, ComplementaritySet, PentagonLattice,
};
pub use interrogation::{
    convergence_csv, convergence_report, exact_frequencies, mix_seed, multi_shot_tomography,
    reconstruct_from_frequencies, single_shot, ConvergenceReport, ConvergenceRow,
    InterrogationRecord, InterrogationStep, TomographyEstimate,
};
pub use linalg::{kron, ComplexMatrix};
pub use logic::{
    all_even_table, classical_identity_check, correlation_table, correlation_table_dot,
    correlation_table_json, eval_xnor, hidden_variable_search, ClassicalIdentityReport,
    IdentityRow, ParityConstraint, TruthAssignment, ATOM_LABELS,
};
pub use verify::{
    criterion_10_monogamy, criterion_11_interrogation, criterion_1_census,
    criterion_2_pentagon_equalities, criterion_3_pure_norm, criterion_4_pentagon_sum,
    criterion_5_generators, criterion_6_evolution_equivalence, criterion_7_born_rule,
    criterion_8_logic, criterion_9_complementarity_bound, verify_all, CriterionResult,
    VerifyReport,
};
pub use questions::{
    all_questions, is_compatible, pauli_matrix, pauli_product, question_count, xnor_compose,
    CorrelationParity, PauliPhase, QuestionIndex, QUBIT_CAP,
};
pub use states::{
    bell_state, bloch_to_density, born_probability, classify, density_to_bloch, info_measure,
    posterior_update, random_mixed, random_pure, state_of_no_information, validate_state,
    Answer, BlochState, DensityMatrix, InformationContent, QuestionVector, StateKind,
};
