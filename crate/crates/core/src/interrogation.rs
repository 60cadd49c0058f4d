//! The observer's side of the theory: asking questions and updating state.
//!
//! A single-shot interrogation drives one system through a chain of
//! projective questions, sampling each answer from the current Born
//! probability and collapsing the description afterwards.  Multi-shot
//! tomography interrogates a fresh system per sample and reconstructs the
//! Bloch vector from raw answer frequencies (no smoothing, so the error
//! bounds are exact binomials).  Every campaign is deterministic under its
//! seed, with one independent RNG stream per question so that per-question
//! results do not depend on enumeration order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::questions::{all_questions, question_count, QuestionIndex};
use crate::states::{
    born_probability, posterior_update, Answer, BlochState, QuestionVector,
};

/// One asked question with its sampled answer and the collapsed state.
#[derive(Debug, Clone)]
pub struct InterrogationStep {
    pub question: QuestionIndex,
    pub answer: Answer,
    pub posterior: BlochState,
}

impl Serialize for InterrogationStep {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("InterrogationStep", 3)?;
        s.serialize_field("question", &self.question.to_string())?;
        s.serialize_field("answer", match self.answer {
            Answer::Yes => "yes",
            Answer::No => "no",
        })?;
        s.serialize_field("posterior", &self.posterior)?;
        s.end()
    }
}

/// Full record of a single-shot interrogation chain.
#[derive(Debug, Clone, Serialize)]
pub struct InterrogationRecord {
    pub prior: BlochState,
    pub steps: Vec<InterrogationStep>,
    pub seed: u64,
}

/// Interrogates one system with a sequence of questions, sampling each
/// answer from the state the previous answers left behind.
///
/// A sampled answer always has nonzero probability (the sampler can only
/// pick it if its probability exceeds the uniform draw), so the posterior
/// update cannot fail on the sampled branch.
pub fn single_shot(
    prior: &BlochState,
    questions: &[QuestionIndex],
    seed: u64,
) -> Result<InterrogationRecord> {
    if questions.is_empty() {
        return Err(Error::EmptyQuestionSequence);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = prior.clone();
    let mut steps = Vec::with_capacity(questions.len());
    for q in questions {
        let y = born_probability(&QuestionVector::basis(q), &current)?;
        let answer = if rng.gen::<f64>() < y {
            Answer::Yes
        } else {
            Answer::No
        };
        let posterior = posterior_update(&current, q, answer)?;
        current = posterior.clone();
        steps.push(InterrogationStep {
            question: q.clone(),
            answer,
            posterior,
        });
    }
    Ok(InterrogationRecord {
        prior: prior.clone(),
        steps,
        seed,
    })
}

/// Frequency-based tomographic estimate of a state.
#[derive(Debug, Clone, Serialize)]
pub struct TomographyEstimate {
    pub n: usize,
    pub samples_per_question: usize,
    pub seed: u64,
    /// (yes, total) per catalogue question, in linear order.
    pub counts: Vec<(u64, u64)>,
    /// Estimated yes-frequencies, `counts.0 / counts.1`.
    pub y_hat: Vec<f64>,
    /// Reconstructed Bloch components, `2 y_hat - 1`.
    pub r_hat: Vec<f64>,
    /// The state the samples were drawn from.
    pub reference: BlochState,
    pub max_abs_error: f64,
}

/// Maps yes-frequencies to Bloch components, `r_i = 2 y_i - 1`; the
/// deterministic core of the estimator, shared by the sampled and the
/// exact (infinite-sample) paths.
pub fn reconstruct_from_frequencies(n: usize, y: &[f64]) -> Result<Vec<f64>> {
    let expected = question_count(n);
    if y.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: y.len(),
        });
    }
    Ok(y.iter().map(|p| 2.0 * p - 1.0).collect())
}

/// The exact Born frequencies of every catalogue question; feeding them to
/// [`reconstruct_from_frequencies`] returns the Bloch vector itself, the
/// infinite-sample limit of the estimator.
pub fn exact_frequencies(s: &BlochState) -> Vec<f64> {
    s.r().iter().map(|r| (r + 1.0) / 2.0).collect()
}

/// Interrogates `samples_per_question` fresh systems per catalogue
/// question and reconstructs the state from the answer frequencies.  Each
/// question samples from its own RNG stream (derived from the master seed
/// and the question's linear index), so estimates are reproducible
/// question by question.
pub fn multi_shot_tomography(
    true_state: &BlochState,
    samples_per_question: usize,
    seed: u64,
) -> Result<TomographyEstimate> {
    if samples_per_question == 0 {
        return Err(Error::InvalidSampleCount);
    }
    let n = true_state.n();
    let questions = all_questions(n);
    let mut counts = Vec::with_capacity(questions.len());
    let mut y_hat = Vec::with_capacity(questions.len());
    for q in &questions {
        let y = born_probability(&QuestionVector::basis(q), true_state)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(1 + q.linear() as u64);
        let mut yes = 0u64;
        for _ in 0..samples_per_question {
            if rng.gen::<f64>() < y {
                yes += 1;
            }
        }
        counts.push((yes, samples_per_question as u64));
        y_hat.push(yes as f64 / samples_per_question as f64);
    }
    let r_hat = reconstruct_from_frequencies(n, &y_hat)?;
    let max_abs_error = r_hat
        .iter()
        .zip(true_state.r().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(TomographyEstimate {
        n,
        samples_per_question,
        seed,
        counts,
        y_hat,
        r_hat,
        reference: true_state.clone(),
        max_abs_error,
    })
}

/// One grid point of a convergence campaign.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub samples: usize,
    pub max_abs_error: f64,
}

/// Tomography error as a function of ensemble size.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub n: usize,
    pub seed: u64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log10(error)` against `log10(samples)`;
    /// the binomial estimator converges at slope -1/2.  Absent when fewer
    /// than two grid points carry a nonzero error.
    pub slope: Option<f64>,
}

/// Runs tomography at every grid point (strictly increasing sample
/// counts) and fits the error decay rate.  Grid points draw from
/// independent sub-seeds so the rows are independent experiments.
pub fn convergence_report(
    true_state: &BlochState,
    grid: &[usize],
    seed: u64,
) -> Result<ConvergenceReport> {
    if grid.is_empty() || grid[0] == 0 || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSampleGrid);
    }
    let mut rows = Vec::with_capacity(grid.len());
    for (k, &samples) in grid.iter().enumerate() {
        let estimate = multi_shot_tomography(true_state, samples, mix_seed(seed, k as u64))?;
        rows.push(ConvergenceRow {
            samples,
            max_abs_error: estimate.max_abs_error,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.max_abs_error > 0.0)
        .map(|r| ((r.samples as f64).log10(), r.max_abs_error.log10()))
        .collect();
    let slope = (points.len() >= 2).then(|| {
        let m = points.len() as f64;
        let mean_x: f64 = points.iter().map(|p| p.0).sum::<f64>() / m;
        let mean_y: f64 = points.iter().map(|p| p.1).sum::<f64>() / m;
        let cov: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
        let var: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
        cov / var
    });
    Ok(ConvergenceReport {
        n: true_state.n(),
        seed,
        rows,
        slope,
    })
}

/// CSV rendering of a convergence table: `samples, max_abs_error`.
pub fn convergence_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("samples,max_abs_error\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{}\n",
            row.samples,
            crate::states::fmt_f64(row.max_abs_error)
        ));
    }
    out
}

/// Derives an independent sub-seed from a master seed and an index
/// (splitmix-style finalizer, so neighboring indices land far apart).
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_state, random_pure, state_of_no_information};

    fn q(s: &str) -> QuestionIndex {
        s.parse().unwrap()
    }

    #[test]
    fn repeated_questions_get_identical_answers() {
        for seed in 0..200u64 {
            let prior = random_pure(2, seed).unwrap();
            let sequence = vec![q("12"), q("12"), q("30"), q("30"), q("12")];
            let record = single_shot(&prior, &sequence, seed).unwrap();
            assert_eq!(record.steps[0].answer, record.steps[1].answer, "seed {seed}");
            assert_eq!(record.steps[2].answer, record.steps[3].answer, "seed {seed}");
            // Immediate repetition leaves the posterior untouched, exactly.
            assert_eq!(
                record.steps[0].posterior.r(),
                record.steps[1].posterior.r()
            );
        }
    }

    #[test]
    fn asked_questions_collapse_all_complementary_ones() {
        let prior = random_pure(2, 5).unwrap();
        let record = single_shot(&prior, &[q("23")], 9).unwrap();
        let posterior = &record.steps[0].posterior;
        for other in all_questions(2) {
            if crate::questions::is_compatible(&q("23"), &other).unwrap() {
                continue;
            }
            let y = born_probability(&QuestionVector::basis(&other), posterior).unwrap();
            assert_eq!(y, 0.5, "question {other} should be fully reset");
        }
    }

    #[test]
    fn bell_prior_answers_both_pair_questions_affirmatively() {
        for seed in 0..20u64 {
            let record = single_shot(&bell_state(), &[q("11"), q("22")], seed).unwrap();
            assert_eq!(record.steps[0].answer, Answer::Yes);
            assert_eq!(record.steps[1].answer, Answer::Yes);
        }
    }

    #[test]
    fn no_information_prior_answers_at_random() {
        let prior = state_of_no_information(2).unwrap();
        let mut yes = 0;
        let total = 4000;
        for seed in 0..total {
            let record = single_shot(&prior, &[q("11")], seed).unwrap();
            if record.steps[0].answer == Answer::Yes {
                yes += 1;
            }
        }
        // Binomial(4000, 1/2): five sigma is about 158.
        let deviation = (yes as i64 - total as i64 / 2).abs();
        assert!(deviation < 160, "deviation {deviation}");
    }

    #[test]
    fn single_shot_is_deterministic_and_rejects_empty_sequences() {
        let prior = random_pure(2, 1).unwrap();
        let a = single_shot(&prior, &[q("11"), q("20")], 42).unwrap();
        let b = single_shot(&prior, &[q("11"), q("20")], 42).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert!(matches!(
            single_shot(&prior, &[], 0),
            Err(Error::EmptyQuestionSequence)
        ));
    }

    #[test]
    fn exact_frequencies_invert_to_the_state_itself() {
        let s = random_pure(2, 77).unwrap();
        let r = reconstruct_from_frequencies(2, &exact_frequencies(&s)).unwrap();
        for (a, b) in r.iter().zip(s.r().iter()) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(matches!(
            reconstruct_from_frequencies(2, &[0.5; 3]),
            Err(Error::LengthMismatch { expected: 15, got: 3 })
        ));
    }

    #[test]
    fn tomography_is_deterministic_and_within_binomial_bounds() {
        let s = random_pure(1, 19).unwrap();
        let a = multi_shot_tomography(&s, 100_000, 7).unwrap();
        let b = multi_shot_tomography(&s, 100_000, 7).unwrap();
        assert_eq!(a.counts, b.counts);
        // Binomial standard error at 1e5 samples is at most 1/(2 sqrt(M))
        // on y, i.e. 1/sqrt(M) ~ 0.0032 on r; 0.02 is more than six sigma.
        assert!(a.max_abs_error < 0.02, "error {}", a.max_abs_error);
        assert!(matches!(
            multi_shot_tomography(&s, 0, 7),
            Err(Error::InvalidSampleCount)
        ));
    }

    #[test]
    fn tomography_streams_are_per_question() {
        // The estimate for one question is unchanged by the existence of
        // the others: stream indices are tied to the question identity.
        let s = random_pure(2, 3).unwrap();
        let estimate = multi_shot_tomography(&s, 500, 11).unwrap();
        let y = born_probability(&QuestionVector::basis(&q("33")), &s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        rng.set_stream(1 + q("33").linear() as u64);
        let yes = (0..500).filter(|_| rng.gen::<f64>() < y).count() as u64;
        assert_eq!(estimate.counts[q("33").linear()].0, yes);
    }

    #[test]
    fn estimator_is_unbiased() {
        let s = random_pure(1, 4).unwrap();
        let samples = 2000;
        let runs = 100;
        let mut mean = [0.0f64; 3];
        for k in 0..runs {
            let estimate = multi_shot_tomography(&s, samples, mix_seed(1000, k)).unwrap();
            for (m, r) in mean.iter_mut().zip(&estimate.r_hat) {
                *m += r / runs as f64;
            }
        }
        for (i, m) in mean.iter().enumerate() {
            let y = (s.r()[i] + 1.0) / 2.0;
            let se_mean = 2.0 * (y * (1.0 - y) / (samples * runs as usize) as f64).sqrt();
            let deviation = (m - s.r()[i]).abs();
            assert!(
                deviation < 3.0 * se_mean + 1e-12,
                "component {i}: deviation {deviation}, se {se_mean}"
            );
        }
    }

    #[test]
    fn convergence_error_decays_like_inverse_square_root() {
        let s = random_pure(1, 23).unwrap();
        let report = convergence_report(&s, &[100, 1000, 10_000, 100_000], 5).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert!(report.rows[3].max_abs_error < report.rows[0].max_abs_error);
        let slope = report.slope.unwrap();
        assert!(
            (crate::tol::CONVERGENCE_SLOPE_MIN..=crate::tol::CONVERGENCE_SLOPE_MAX)
                .contains(&slope),
            "slope {slope}"
        );
    }

    #[test]
    fn convergence_edge_cases() {
        let s = state_of_no_information(1).unwrap();
        let report = convergence_report(&s, &[1000], 3).unwrap();
        assert_eq!(report.rows.len(), 1);
        assert!(report.slope.is_none());
        // Zero-information state: estimated frequencies hover around 1/2.
        let estimate = multi_shot_tomography(&s, 10_000, 3).unwrap();
        for y in &estimate.y_hat {
            assert!((y - 0.5).abs() < 0.02);
        }

        assert!(matches!(
            convergence_report(&s, &[], 0),
            Err(Error::InvalidSampleGrid)
        ));
        assert!(matches!(
            convergence_report(&s, &[100, 100], 0),
            Err(Error::InvalidSampleGrid)
        ));
        assert!(matches!(
            convergence_report(&s, &[0, 10], 0),
            Err(Error::InvalidSampleGrid)
        ));

        let csv = convergence_csv(&report);
        assert!(csv.starts_with("samples,max_abs_error\n1000,"));
    }
}
