//! Conserved information charges carried by complementary question sets.
//!
//! The charge of a complementary set is the summed squared Bloch
//! components of its members.  Two exact facts organize everything at
//! `n = 2`: every maximal set (pentagon) carries at most one bit, with
//! equality exactly on pure states, and the six pentagon charges always
//! sum to twice the total information.  The module also carries the
//! three-party monogamy demonstration: a maximally correlated pair leaves
//! no correlation for a bystander, visible directly in the Bloch
//! components of the product state.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_graph, maximal_cliques, pentagon_lattice, ComplementaritySet, PentagonLattice};
use crate::linalg::kron;
use crate::questions::QuestionIndex;
use crate::states::{
    bell_state, bloch_to_density, born_probability, classify, density_to_bloch, info_measure,
    random_pure, BlochState, DensityMatrix, QuestionVector, StateKind,
};
use crate::tol;

/// The information charge of a complementary set:
/// `sum_{i in set} r_i^2`, in bits.
pub fn charge(set: &ComplementaritySet, s: &BlochState) -> Result<f64> {
    if let Some(q) = set.members().iter().find(|q| q.n() != s.n()) {
        return Err(Error::DimensionMismatch {
            context: format!("set member {q} has n={}, state has n={}", q.n(), s.n()),
        });
    }
    Ok(set
        .members()
        .iter()
        .map(|q| {
            let v = s.r()[q.linear()];
            v * v
        })
        .sum())
}

/// One pentagon's charge inside a [`PentagonReport`].
#[derive(Debug, Clone, Serialize)]
pub struct PentagonCharge {
    pub label: String,
    pub members: Vec<String>,
    pub charge: f64,
}

/// The six pentagon charges of a two-qubit state, together with the exact
/// sum rule and the pure-state saturation check.
#[derive(Debug, Clone, Serialize)]
pub struct PentagonReport {
    pub charges: Vec<PentagonCharge>,
    /// Total information `|r|^2` in bits.
    pub total_info_bits: f64,
    /// `sum of charges - 2 |r|^2`; an exact identity, so this is pure
    /// rounding noise.
    pub sum_residual: f64,
    pub state_kind: StateKind,
    /// For pure states: the largest deviation of any pentagon charge from
    /// one bit.  Mixed states genuinely deviate, so no value is reported.
    pub max_pure_deviation: Option<f64>,
    pub pass: bool,
}

/// Computes the [`PentagonReport`] of a two-qubit state.
pub fn pentagon_report(s: &BlochState) -> Result<PentagonReport> {
    pentagon_report_with(&pentagon_lattice(), s)
}

/// As [`pentagon_report`], reusing a prebuilt lattice (the lattice is
/// state-independent, so batch campaigns build it once).
pub fn pentagon_report_with(lattice: &PentagonLattice, s: &BlochState) -> Result<PentagonReport> {
    if s.n() != 2 {
        return Err(Error::WrongN {
            expected: 2,
            got: s.n(),
        });
    }
    let classification = classify(s)?;
    let charges: Vec<PentagonCharge> = lattice
        .pentagons()
        .iter()
        .enumerate()
        .map(|(k, pent)| {
            let value = charge(pent, s).expect("lattice and state are both n=2");
            PentagonCharge {
                label: format!("pent{}", k + 1),
                members: pent.members().iter().map(|q| q.to_string()).collect(),
                charge: value,
            }
        })
        .collect();
    let total_info_bits = info_measure(s).bits;
    let sum: f64 = charges.iter().map(|c| c.charge).sum();
    let sum_residual = sum - 2.0 * total_info_bits;
    let max_pure_deviation = (classification.kind == StateKind::Pure).then(|| {
        charges
            .iter()
            .map(|c| (c.charge - 1.0).abs())
            .fold(0.0f64, f64::max)
    });
    let pass = sum_residual.abs() <= tol::ALGEBRAIC_TOL
        && max_pure_deviation.is_none_or(|d| d <= tol::PURITY_TOL);
    Ok(PentagonReport {
        charges,
        total_info_bits,
        sum_residual,
        state_kind: classification.kind,
        max_pure_deviation,
        pass,
    })
}

/// One maximal set's entry in a [`ComplementarityAudit`].
#[derive(Debug, Clone, Serialize)]
pub struct AuditEntry {
    pub members: Vec<String>,
    pub charge: f64,
}

/// Verdict of auditing every maximal complementary set against the
/// one-bit capacity bound.
#[derive(Debug, Clone, Serialize)]
pub struct ComplementarityAudit {
    pub n: usize,
    pub total_info_bits: f64,
    pub entries: Vec<AuditEntry>,
    pub max_charge: f64,
    /// Indices into `entries` whose charge exceeds one bit beyond
    /// tolerance.
    pub violations: Vec<usize>,
    pub pass: bool,
}

/// Audits all maximal complementary sets of the state's catalogue: no set
/// may carry more than one bit.
pub fn complementarity_audit(s: &BlochState) -> Result<ComplementarityAudit> {
    let cliques = maximal_cliques(&build_graph(s.n())?);
    complementarity_audit_with(&cliques, s)
}

/// As [`complementarity_audit`], reusing precomputed maximal sets.
pub fn complementarity_audit_with(
    cliques: &[ComplementaritySet],
    s: &BlochState,
) -> Result<ComplementarityAudit> {
    let mut entries = Vec::with_capacity(cliques.len());
    let mut violations = Vec::new();
    let mut max_charge = 0.0f64;
    for (k, set) in cliques.iter().enumerate() {
        let value = charge(set, s)?;
        max_charge = max_charge.max(value);
        if value > 1.0 + tol::PURITY_TOL {
            violations.push(k);
        }
        entries.push(AuditEntry {
            members: set.members().iter().map(|q| q.to_string()).collect(),
            charge: value,
        });
    }
    Ok(ComplementarityAudit {
        n: s.n(),
        total_info_bits: info_measure(s).bits,
        entries,
        max_charge,
        pass: violations.is_empty(),
        violations,
    })
}

/// A labelled Bloch component of the three-party state.
#[derive(Debug, Clone, Serialize)]
pub struct MonogamyEntry {
    pub question: String,
    pub value: f64,
}

/// A triple correlation compared against the product of its pair and
/// single marginals.
#[derive(Debug, Clone, Serialize)]
pub struct TripleFactorization {
    pub question: String,
    pub value: f64,
    pub product_of_marginals: f64,
    pub residual: f64,
}

/// The monogamy demonstration on `AB` maximally entangled with a bystander
/// `C` in a random pure state.
#[derive(Debug, Clone, Serialize)]
pub struct MonogamyReport {
    pub seed: u64,
    /// Bloch vector of the bystander qubit.
    pub c_bloch: Vec<f64>,
    /// The three maximal pair correlations of `AB` (labels 110, 220, 330).
    pub ab_pair_correlations: Vec<MonogamyEntry>,
    /// Largest single-party component of `A` or `B` (exactly zero: the
    /// entangled pair answers no individual question).
    pub max_ab_single_abs: f64,
    /// All pair correlations linking `A` or `B` with `C` (labels m0l and
    /// 0ml); monogamy forces every one of them to vanish.
    pub cross_correlations: Vec<MonogamyEntry>,
    pub max_cross_abs: f64,
    /// All triple correlations, each compared against the product of its
    /// `AB` pair marginal and `C` single marginal.
    pub triples: Vec<TripleFactorization>,
    pub max_factorization_residual: f64,
    /// Information held by `C` alone: one full bit, untouched by the
    /// saturated pair.
    pub c_info_bits: f64,
    /// Probability of a yes answer to the question aligned with `C`'s own
    /// Bloch direction.
    pub aligned_c_probability: f64,
    pub pass: bool,
}

/// Builds the maximally entangled pair `AB`, adjoins a random pure
/// bystander `C`, and reads monogamy off the joint Bloch components: the
/// pair saturates its mutual correlations, so every cross correlation
/// with `C` vanishes identically while `C` keeps its own full bit.
pub fn monogamy_demo(seed: u64) -> Result<MonogamyReport> {
    let ab = bell_state();
    let c = random_pure(1, seed)?;
    let rho = DensityMatrix::new(
        3,
        kron(bloch_to_density(&ab).matrix(), bloch_to_density(&c).matrix()),
    )?;
    let joint = density_to_bloch(&rho);
    let r = joint.r();
    let component = |sites: [u8; 3]| -> f64 {
        r[QuestionIndex::new(&sites).expect("nonzero index").linear()]
    };
    let label = |sites: [u8; 3]| format!("{}{}{}", sites[0], sites[1], sites[2]);

    let mut ab_pair_correlations = Vec::new();
    let mut pair_residual = 0.0f64;
    for d in 1..=3u8 {
        let sites = [d, d, 0];
        let value = component(sites);
        pair_residual = pair_residual.max((value - ab.r()[QuestionIndex::new(&[d, d]).unwrap().linear()]).abs());
        ab_pair_correlations.push(MonogamyEntry {
            question: label(sites),
            value,
        });
    }

    let mut max_ab_single_abs = 0.0f64;
    for d in 1..=3u8 {
        max_ab_single_abs = max_ab_single_abs.max(component([d, 0, 0]).abs());
        max_ab_single_abs = max_ab_single_abs.max(component([0, d, 0]).abs());
    }

    let mut cross_correlations = Vec::new();
    let mut max_cross_abs = 0.0f64;
    for m in 1..=3u8 {
        for l in 1..=3u8 {
            for sites in [[m, 0, l], [0, m, l]] {
                let value = component(sites);
                max_cross_abs = max_cross_abs.max(value.abs());
                cross_correlations.push(MonogamyEntry {
                    question: label(sites),
                    value,
                });
            }
        }
    }

    let mut triples = Vec::new();
    let mut max_factorization_residual = 0.0f64;
    for m in 1..=3u8 {
        for v in 1..=3u8 {
            for l in 1..=3u8 {
                let sites = [m, v, l];
                let value = component(sites);
                let product = component([m, v, 0]) * component([0, 0, l]);
                let residual = (value - product).abs();
                max_factorization_residual = max_factorization_residual.max(residual);
                triples.push(TripleFactorization {
                    question: label(sites),
                    value,
                    product_of_marginals: product,
                    residual,
                });
            }
        }
    }

    let c_bloch: Vec<f64> = (0..3).map(|i| c.r()[i]).collect();
    let c_info_bits = info_measure(&c).bits;

    // The bystander's own question, embedded in the three-party catalogue.
    let mut aligned = vec![0.0; r.len()];
    for (l, &cl) in c_bloch.iter().enumerate() {
        aligned[QuestionIndex::new(&[0, 0, (l + 1) as u8]).unwrap().linear()] = cl;
    }
    let aligned_c_probability = born_probability(&QuestionVector::new(3, aligned)?, &joint)?;

    let pass = pair_residual <= tol::ALGEBRAIC_TOL
        && max_ab_single_abs <= tol::ALGEBRAIC_TOL
        && max_cross_abs <= tol::ALGEBRAIC_TOL
        && max_factorization_residual <= tol::ALGEBRAIC_TOL
        && (c_info_bits - 1.0).abs() <= tol::PURITY_TOL
        && (aligned_c_probability - 1.0).abs() <= tol::PURITY_TOL;

    Ok(MonogamyReport {
        seed,
        c_bloch,
        ab_pair_correlations,
        max_ab_single_abs,
        cross_correlations,
        max_cross_abs,
        triples,
        max_factorization_residual,
        c_info_bits,
        aligned_c_probability,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_mixed, state_of_no_information};
    use approx::assert_abs_diff_eq;

    fn set_of(labels: &[&str]) -> ComplementaritySet {
        let members = labels.iter().map(|s| s.parse().unwrap()).collect();
        ComplementaritySet::new(members, false).unwrap()
    }

    #[test]
    fn bell_state_charges_each_pentagon_to_one_bit() {
        let report = pentagon_report(&bell_state()).unwrap();
        assert!(report.pass);
        assert_eq!(report.state_kind, StateKind::Pure);
        for c in &report.charges {
            assert_abs_diff_eq!(c.charge, 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(report.total_info_bits, 3.0, epsilon = 1e-15);
        assert!(report.sum_residual.abs() < 1e-15);
        // First pentagon catches exactly the 11 component of the pair.
        assert!(report.charges[0].members.contains(&"11".to_string()));
    }

    #[test]
    fn no_information_state_has_no_charge_anywhere() {
        let report = pentagon_report(&state_of_no_information(2).unwrap()).unwrap();
        assert!(report.pass);
        assert_eq!(report.state_kind, StateKind::Mixed);
        assert!(report.max_pure_deviation.is_none());
        for c in &report.charges {
            assert_eq!(c.charge, 0.0);
        }
        assert_eq!(report.sum_residual, 0.0);
    }

    #[test]
    fn single_qubit_full_catalogue_charges_to_one_bit_when_pure() {
        let s = random_pure(1, 11).unwrap();
        let set = set_of(&["1", "2", "3"]);
        assert_abs_diff_eq!(charge(&set, &s).unwrap(), 1.0, epsilon = tol::PURITY_TOL);
    }

    #[test]
    fn pure_two_qubit_states_saturate_every_pentagon() {
        for seed in 0..50u64 {
            let s = random_pure(2, seed).unwrap();
            let report = pentagon_report(&s).unwrap();
            assert!(report.pass, "seed {seed}: {report:?}");
            assert!(report.max_pure_deviation.unwrap() <= tol::PURITY_TOL);
        }
    }

    #[test]
    fn pentagon_sum_rule_holds_on_mixed_states_too() {
        for seed in 0..50u64 {
            let s = random_mixed(2, seed).unwrap();
            let report = pentagon_report(&s).unwrap();
            assert!(
                report.sum_residual.abs() <= tol::ALGEBRAIC_TOL,
                "seed {seed}: {}",
                report.sum_residual
            );
        }
    }

    #[test]
    fn mixed_states_leave_a_visible_charge_deficit() {
        let s = random_mixed(2, 3).unwrap();
        let report = pentagon_report(&s).unwrap();
        assert_eq!(report.state_kind, StateKind::Mixed);
        let min_charge = report
            .charges
            .iter()
            .map(|c| c.charge)
            .fold(f64::INFINITY, f64::min);
        assert!(
            min_charge < 1.0 - tol::MIXED_CHARGE_DEFICIT,
            "min charge {min_charge}"
        );
    }

    #[test]
    fn audit_passes_on_honest_states_of_all_sizes() {
        for n in 1..=3usize {
            let cliques = maximal_cliques(&build_graph(n).unwrap());
            for seed in 0..40u64 {
                let s = random_mixed(n, seed).unwrap();
                let audit = complementarity_audit_with(&cliques, &s).unwrap();
                assert!(audit.pass, "n={n} seed={seed}: max {}", audit.max_charge);
                assert!(audit.max_charge <= 1.0 + tol::PURITY_TOL);
            }
        }
    }

    #[test]
    fn audit_flags_a_fabricated_overcharge() {
        // Raw vector access allows states outside the physical body; the
        // audit must call them out.
        let mut r = vec![0.0; 15];
        r[QuestionIndex::new(&[1, 1]).unwrap().linear()] = 1.2;
        let s = BlochState::new(2, r).unwrap();
        let audit = complementarity_audit(&s).unwrap();
        assert!(!audit.pass);
        assert!(!audit.violations.is_empty());
        assert!(audit.max_charge > 1.4);
    }

    #[test]
    fn charge_rejects_mismatched_sizes() {
        let set = set_of(&["11", "12"]);
        let s = state_of_no_information(1).unwrap();
        assert!(matches!(
            charge(&set, &s),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn pentagon_report_requires_two_qubits() {
        let s = state_of_no_information(1).unwrap();
        assert!(matches!(
            pentagon_report(&s),
            Err(Error::WrongN { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn monogamy_demonstration_is_exact() {
        for seed in [0u64, 7, 123] {
            let report = monogamy_demo(seed).unwrap();
            assert!(report.pass, "seed {seed}: {report:?}");
            assert_eq!(report.cross_correlations.len(), 18);
            assert_eq!(report.triples.len(), 27);
            assert!(report.max_cross_abs <= tol::ALGEBRAIC_TOL);
            assert!(report.max_ab_single_abs <= tol::ALGEBRAIC_TOL);
            assert!(report.max_factorization_residual <= tol::ALGEBRAIC_TOL);
            assert_abs_diff_eq!(report.c_info_bits, 1.0, epsilon = tol::PURITY_TOL);
            assert_abs_diff_eq!(report.aligned_c_probability, 1.0, epsilon = tol::PURITY_TOL);

            // The pair correlations are the Bell components themselves.
            let values: Vec<f64> = report.ab_pair_correlations.iter().map(|e| e.value).collect();
            assert_eq!(values, vec![1.0, 1.0, -1.0]);

            // Some triple correlations are genuinely nonzero: entanglement
            // plus a bystander is not a classical product of zeros.
            let max_triple = report
                .triples
                .iter()
                .map(|t| t.value.abs())
                .fold(0.0f64, f64::max);
            assert!(max_triple > 0.1, "seed {seed}: {max_triple}");
        }
    }
}
