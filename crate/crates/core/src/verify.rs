//! The acceptance suite: twelve numbered criteria covering the whole
//! catalogue of claims, each returning a deterministic pass/fail verdict
//! with the measured residuals in its details line.
//!
//! Every criterion derives its randomness from the master seed through
//! [`mix_seed`], so a report is a pure function of that seed: running the
//! suite twice must produce byte-identical serialized output, and the
//! final criterion checks exactly that by recomputing the other eleven
//! from scratch.  Wall-clock limits are enforced as booleans; no timings
//! appear in the serialized report, which would otherwise never be
//! reproducible.

use std::time::Instant;

use serde::Serialize;

use crate::charges::{complementarity_audit_with, monogamy_demo, pentagon_report_with};
use crate::dynamics::{
    adjoint_equivalence_check, adjoint_generators_for_weights, all_pentagon_swaps,
    check_generator, evolve_bloch, generator_from_hamiltonian, lie_closure, match_up_to_scale,
    von_neumann_residual, Hamiltonian,
};
use crate::graph::{build_graph, clique_census, maximal_cliques, pentagon_lattice};
use crate::interrogation::{
    convergence_report, mix_seed, multi_shot_tomography, single_shot,
};
use crate::logic::{
    all_even_table, classical_identity_check, correlation_table, hidden_variable_search,
};
use crate::questions::{all_questions, CorrelationParity};
use crate::states::{
    bloch_to_density, born_probability, info_measure, random_mixed, random_pure,
    QuestionVector,
};
use crate::tol;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub details: String,
}

/// The full acceptance report.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
}

/// Runs all twelve criteria under the given master seed.
pub fn verify_all(seed: u64) -> VerifyReport {
    let mut criteria = run_first_eleven(seed);
    criteria.push(criterion_12_determinism(seed, &criteria));
    let pass = criteria.iter().all(|c| c.pass);
    VerifyReport {
        seed,
        criteria,
        pass,
    }
}

fn run_first_eleven(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_1_census(),
        criterion_2_pentagon_equalities(seed),
        criterion_3_pure_norm(seed),
        criterion_4_pentagon_sum(seed),
        criterion_5_generators(),
        criterion_6_evolution_equivalence(seed),
        criterion_7_born_rule(seed),
        criterion_8_logic(),
        criterion_9_complementarity_bound(seed),
        criterion_10_monogamy(seed),
        criterion_11_interrogation(seed),
    ]
}

fn result(id: usize, name: &str, pass: bool, details: String) -> CriterionResult {
    CriterionResult {
        id,
        name: name.to_string(),
        pass,
        details,
    }
}

/// Criterion 1: the clique census matches the catalogue at n = 1 and 2.
pub fn criterion_1_census() -> CriterionResult {
    let start = Instant::now();
    let census2 = clique_census(&build_graph(2).expect("n=2 within cap"));
    let census1 = clique_census(&build_graph(1).expect("n=1 within cap"));
    let within_time = start.elapsed().as_secs_f64() < tol::RUNTIME_CENSUS_S;
    let fives = census2.counts_by_size.get("5").copied().unwrap_or(0);
    let threes = census2.counts_by_size.get("3").copied().unwrap_or(0);
    let only_those = census2.cliques.iter().all(|c| c.size == 5 || c.size == 3);
    let single = census1.counts_by_size.get("3").copied().unwrap_or(0);
    let pass = fives == 6
        && threes == 20
        && only_those
        && single == 1
        && census1.cliques.len() == 1
        && within_time;
    result(
        1,
        "clique-census",
        pass,
        format!("n=2: {fives} sets of 5 and {threes} of 3; n=1: {single} set of 3"),
    )
}

/// Criterion 2: pentagon charges saturate one bit on random pure states.
pub fn criterion_2_pentagon_equalities(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let lattice = pentagon_lattice();
    let mut worst = 0.0f64;
    for k in 0..1000u64 {
        let s = random_pure(2, mix_seed(seed, 0x0200 + k)).expect("n=2 within cap");
        let report = pentagon_report_with(&lattice, &s).expect("pure state is valid");
        for c in &report.charges {
            worst = worst.max((c.charge - 1.0).abs());
        }
    }
    let within_time = start.elapsed().as_secs_f64() < tol::RUNTIME_PENTAGON_S;
    let pass = worst <= tol::PURITY_TOL && within_time;
    result(
        2,
        "pentagon-equalities",
        pass,
        format!("worst |charge - 1| over 1000 pure states: {worst:.3e}"),
    )
}

/// Criterion 3: pure-state information is 2^n - 1 bits at n = 1, 2, 3.
pub fn criterion_3_pure_norm(seed: u64) -> CriterionResult {
    let mut details = Vec::new();
    let mut pass = true;
    for n in 1..=3usize {
        let target = (1u64 << n) as f64 - 1.0;
        let mut worst = 0.0f64;
        for k in 0..300u64 {
            let s = random_pure(n, mix_seed(seed, 0x0300 + 1000 * n as u64 + k))
                .expect("n within cap");
            worst = worst.max((info_measure(&s).bits - target).abs());
        }
        pass &= worst <= tol::PURITY_TOL;
        details.push(format!("n={n}: worst |I - {target}| = {worst:.3e}"));
    }
    result(3, "pure-state-norm", pass, details.join("; "))
}

/// Criterion 4: pentagon charges sum to twice the total information.
pub fn criterion_4_pentagon_sum(seed: u64) -> CriterionResult {
    let lattice = pentagon_lattice();
    let mut worst = 0.0f64;
    for k in 0..1000u64 {
        let sub = mix_seed(seed, 0x0400 + k);
        let s = if k % 2 == 0 {
            random_mixed(2, sub)
        } else {
            random_pure(2, sub)
        }
        .expect("n=2 within cap");
        let report = pentagon_report_with(&lattice, &s).expect("sampled states are valid");
        worst = worst.max(report.sum_residual.abs());
    }
    let pass = worst <= tol::ALGEBRAIC_TOL;
    result(
        4,
        "pentagon-sum-identity",
        pass,
        format!("worst |sum of charges - 2I| over 1000 states: {worst:.3e}"),
    )
}

/// Criterion 5: swap generators check out and close at dimensions 15 and 63.
pub fn criterion_5_generators() -> CriterionResult {
    let start = Instant::now();
    let lattice = pentagon_lattice();
    let swaps = all_pentagon_swaps();

    let mut checks_pass = true;
    let mut worst_scale_residual = 0.0f64;
    let mut pair = 0;
    for a in 1..=6usize {
        for b in (a + 1)..=6 {
            let g = &swaps[pair];
            pair += 1;
            let check = check_generator(g);
            checks_pass &= check.pass;
            let shared = lattice.shared_question(a, b).expect("valid pair");
            let adjoint = generator_from_hamiltonian(&Hamiltonian::pauli_word(&shared));
            let (_, residual) = match_up_to_scale(g, &adjoint).expect("same n");
            worst_scale_residual = worst_scale_residual.max(residual);
        }
    }
    let swap_dimension = lie_closure(&swaps).expect("nonempty");
    let embedded = adjoint_generators_for_weights(3, &[1, 2]).expect("n=3 within cap");
    let embedded_count = embedded.len();
    let embedded_dimension = lie_closure(&embedded).expect("nonempty");
    let within_time = start.elapsed().as_secs_f64() < tol::RUNTIME_GENERATORS_S;

    let pass = checks_pass
        && worst_scale_residual <= 1e-10
        && swap_dimension == 15
        && embedded_count == 36
        && embedded_dimension == 63
        && within_time;
    result(
        5,
        "swap-generators",
        pass,
        format!(
            "15 swaps pass structural checks; worst adjoint-match residual {worst_scale_residual:.3e}; \
             closure dims {swap_dimension} and {embedded_dimension} (from {embedded_count} embedded generators)"
        ),
    )
}

/// Criterion 6: the Bloch and density evolution paths agree.
pub fn criterion_6_evolution_equivalence(seed: u64) -> CriterionResult {
    let mut worst_equivalence = 0.0f64;
    let mut worst_fd = 0.0f64;
    let mut worst_info_drift = 0.0f64;
    for n in 1..=2usize {
        for k in 0..20u64 {
            let base = 0x0600 + 100 * n as u64 + k;
            let h = Hamiltonian::random(n, mix_seed(seed, base)).expect("n within cap");
            let sub = mix_seed(seed, base + 40);
            let s = if k % 2 == 0 {
                random_pure(n, sub)
            } else {
                random_mixed(n, sub)
            }
            .expect("n within cap");
            // Spread times over a few periods, avoiding the trivial t=0.
            let t = 0.1 + 3.0 * (mix_seed(seed, base + 80) % 1000) as f64 / 1000.0;

            worst_equivalence =
                worst_equivalence.max(adjoint_equivalence_check(&h, &s, t).expect("same n"));
            worst_fd = worst_fd.max(
                von_neumann_residual(&h, &s, t, tol::VON_NEUMANN_FD_EPSILON).expect("same n"),
            );
            let evolved = evolve_bloch(&generator_from_hamiltonian(&h), &s, t).expect("same n");
            worst_info_drift = worst_info_drift
                .max((info_measure(&evolved).bits - info_measure(&s).bits).abs());
        }
    }
    let pass = worst_equivalence <= tol::BLOCH_DENSITY_EQUIV_TOL
        && worst_fd < tol::VON_NEUMANN_FD_TOL
        && worst_info_drift <= tol::EVOLUTION_NORM_TOL;
    result(
        6,
        "evolution-equivalence",
        pass,
        format!(
            "worst path deviation {worst_equivalence:.3e}; worst finite-difference residual {worst_fd:.3e}; \
             worst information drift {worst_info_drift:.3e}"
        ),
    )
}

/// Criterion 7: the probability rule matches the operator trace.
pub fn criterion_7_born_rule(seed: u64) -> CriterionResult {
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for n in 1..=3usize {
        let questions = all_questions(n);
        for k in 0..100u64 {
            let base = 0x0700 + 1000 * n as u64 + k;
            let s = if k % 2 == 0 {
                random_pure(n, mix_seed(seed, base))
            } else {
                random_mixed(n, mix_seed(seed, base))
            }
            .expect("n within cap");
            let q = &questions[(mix_seed(seed, base + 500) as usize) % questions.len()];
            let vector = QuestionVector::basis(q);
            let y = born_probability(&vector, &s).expect("same n");
            // The operator oracle: y = trace(rho P) with P the +1
            // eigenspace projector, computed at the matrix level.
            let rho = bloch_to_density(&s);
            let p = vector.projector();
            let mut trace = 0.0f64;
            for a in 0..rho.matrix().nrows() {
                for b in 0..rho.matrix().ncols() {
                    trace += (rho.matrix()[(a, b)] * p[(b, a)]).re;
                }
            }
            worst = worst.max((y - trace).abs());
            checked += 1;
        }
    }
    let pass = worst <= tol::ALGEBRAIC_TOL;
    result(
        7,
        "born-rule",
        pass,
        format!("worst |y - trace(rho P)| over {checked} pairs: {worst:.3e}"),
    )
}

/// Criterion 8: the classical identity holds; the quantum table has no hidden variables.
pub fn criterion_8_logic() -> CriterionResult {
    let identity = classical_identity_check();
    let table = correlation_table();
    let quantum = hidden_variable_search(&table).expect("table is well formed");
    let classical = hidden_variable_search(&all_even_table()).expect("table is well formed");

    let parity_of = |a: &str, b: &str| {
        table
            .iter()
            .find(|t| t.a().to_string() == a && t.b().to_string() == b)
            .map(|t| t.parity())
    };
    let caption_ok = parity_of("11", "22") == Some(CorrelationParity::Odd)
        && parity_of("12", "21") == Some(CorrelationParity::Even)
        && parity_of("01", "10") == Some(CorrelationParity::Even);

    let pass = identity.pass && quantum == 0 && classical > 0 && caption_ok;
    result(
        8,
        "classical-logic",
        pass,
        format!(
            "identity holds in 16/16 rows; hidden-variable assignments: quantum table {quantum}, \
             all-even variant {classical}"
        ),
    )
}

/// Criterion 9: no maximal clique ever carries more than one bit.
pub fn criterion_9_complementarity_bound(seed: u64) -> CriterionResult {
    let cliques = maximal_cliques(&build_graph(2).expect("n=2 within cap"));
    let mut worst = 0.0f64;
    let mut violations = 0usize;
    for k in 0..1000u64 {
        let sub = mix_seed(seed, 0x0900 + k);
        let s = if k % 2 == 0 {
            random_mixed(2, sub)
        } else {
            random_pure(2, sub)
        }
        .expect("n=2 within cap");
        let audit = complementarity_audit_with(&cliques, &s).expect("catalogue matches state");
        worst = worst.max(audit.max_charge);
        violations += audit.violations.len();
    }
    let pass = violations == 0 && worst <= 1.0 + tol::PURITY_TOL;
    result(
        9,
        "complementarity-bound",
        pass,
        format!("largest clique charge over 1000 states: {worst:.12}; violations: {violations}"),
    )
}

/// Criterion 10: a saturated pair leaves no correlation for a bystander.
pub fn criterion_10_monogamy(seed: u64) -> CriterionResult {
    let report = monogamy_demo(mix_seed(seed, 0x0a00)).expect("construction is valid");
    let ab_saturated = report
        .ab_pair_correlations
        .iter()
        .all(|e| (e.value.abs() - 1.0).abs() <= tol::ALGEBRAIC_TOL);
    let pass = report.pass && report.max_cross_abs <= tol::ALGEBRAIC_TOL && ab_saturated;
    result(
        10,
        "monogamy",
        pass,
        format!(
            "largest cross correlation {:.3e}; largest factorization residual {:.3e}; bystander holds {:.6} bits",
            report.max_cross_abs, report.max_factorization_residual, report.c_info_bits
        ),
    )
}

/// Criterion 11: interrogation is repeatable and tomography converges.
pub fn criterion_11_interrogation(seed: u64) -> CriterionResult {
    // Repeatability over 10^4 sampled records with immediate repeats.
    let questions: Vec<crate::questions::QuestionIndex> =
        ["11", "11", "23", "23"].iter().map(|s| s.parse().unwrap()).collect();
    let mut repeat_failures = 0usize;
    for k in 0..10_000u64 {
        let s = random_pure(2, mix_seed(seed, 0x0b00 + k)).expect("n=2 within cap");
        let record =
            single_shot(&s, &questions, mix_seed(seed, 0x0c00 + k)).expect("sampled answers");
        if record.steps[0].answer != record.steps[1].answer
            || record.steps[2].answer != record.steps[3].answer
        {
            repeat_failures += 1;
        }
    }

    let s1 = random_pure(1, mix_seed(seed, 0x0d00)).expect("n=1 within cap");
    let estimate = multi_shot_tomography(&s1, tol::TOMOGRAPHY_SAMPLES, mix_seed(seed, 0x0d01))
        .expect("positive sample count");
    let convergence = convergence_report(
        &s1,
        &[100, 1000, 10_000, 100_000],
        mix_seed(seed, 0x0d02),
    )
    .expect("valid grid");
    let slope_ok = convergence.slope.is_some_and(|m| {
        (tol::CONVERGENCE_SLOPE_MIN..=tol::CONVERGENCE_SLOPE_MAX).contains(&m)
    });

    let pass =
        repeat_failures == 0 && estimate.max_abs_error < tol::TOMOGRAPHY_ERROR_BOUND && slope_ok;
    let slope_text = convergence
        .slope
        .map(|m| format!("{m:.3}"))
        .unwrap_or_else(|| "n/a".to_string());
    result(
        11,
        "interrogation",
        pass,
        format!(
            "repeat failures 0 expected, got {repeat_failures}; tomography error {:.5}; \
             convergence slope {slope_text}",
            estimate.max_abs_error
        ),
    )
}

fn criterion_12_determinism(seed: u64, first_run: &[CriterionResult]) -> CriterionResult {
    let second_run = run_first_eleven(seed);
    let a = serde_json::to_string(first_run).expect("plain data serializes");
    let b = serde_json::to_string(&second_run).expect("plain data serializes");
    let pass = a == b;
    result(
        12,
        "determinism",
        pass,
        format!(
            "two in-process runs serialized to {} bytes each; byte-identical: {pass}",
            a.len()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_full_suite_passes_under_the_pinned_seed() {
        let report = verify_all(42);
        for c in &report.criteria {
            assert!(c.pass, "criterion {} ({}): {}", c.id, c.name, c.details);
        }
        assert!(report.pass);
        assert_eq!(report.criteria.len(), 12);
        assert_eq!(
            report.criteria.iter().map(|c| c.id).collect::<Vec<_>>(),
            (1..=12).collect::<Vec<_>>()
        );
    }

    #[test]
    fn reports_serialize_identically_across_runs() {
        let a = serde_json::to_string(&verify_all(7)).unwrap();
        let b = serde_json::to_string(&verify_all(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn different_seeds_still_pass() {
        // The identities hold for any sample; the seed only moves the
        // sampled points.
        let report = verify_all(20260814);
        assert!(report.pass, "{:#?}", report.criteria);
    }
}
