//! Propositional analysis of the two-qubit correlation structure.
//!
//! Correlation questions are XNORs of individual questions, and for
//! classical bits any four atoms obey the exchange identity
//! `(a XNOR b') XNOR (c XNOR d') = (a XNOR d') XNOR (c XNOR b')`.  The
//! two-qubit question catalogue assigns parities to its compatible
//! triangles that break this pattern: an exhaustive search over all 64
//! truth assignments to the six individual questions shows that no
//! assignment reproduces the quantum parity table, while the all-even
//! (classical) variant of the same table is satisfiable.  Everything here
//! is exhaustive, never sampled.

use std::collections::BTreeMap;

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::questions::{
    all_questions, is_compatible, xnor_compose, CorrelationParity, QuestionIndex,
};

/// The atom labels of the hidden-variable model: individual questions on
/// the first qubit, then on the second.
pub const ATOM_LABELS: [&str; 6] = ["Q1", "Q2", "Q3", "Q1'", "Q2'", "Q3'"];

/// XNOR: true exactly when the two bits agree.
pub fn eval_xnor(p: bool, q: bool) -> bool {
    p == q
}

/// A total truth assignment over the six individual-question atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthAssignment {
    values: BTreeMap<String, bool>,
}

impl TruthAssignment {
    /// Builds an assignment from an explicit map; it must be total over
    /// [`ATOM_LABELS`] and mention nothing else.
    pub fn new(values: BTreeMap<String, bool>) -> Result<Self> {
        for label in ATOM_LABELS {
            if !values.contains_key(label) {
                return Err(Error::MalformedConstraint {
                    reason: format!("assignment is missing atom {label}"),
                });
            }
        }
        if values.len() != ATOM_LABELS.len() {
            return Err(Error::MalformedConstraint {
                reason: format!(
                    "assignment must cover exactly the {} atoms, got {} entries",
                    ATOM_LABELS.len(),
                    values.len()
                ),
            });
        }
        Ok(TruthAssignment { values })
    }

    /// The `code`-th of the 64 assignments: bit `k` of `code` is the value
    /// of `ATOM_LABELS[k]`.
    pub fn from_code(code: u8) -> Self {
        let values = ATOM_LABELS
            .iter()
            .enumerate()
            .map(|(k, label)| (label.to_string(), code >> k & 1 == 1))
            .collect();
        TruthAssignment { values }
    }

    pub fn atom(&self, label: &str) -> Option<bool> {
        self.values.get(label).copied()
    }

    /// Value of a catalogue question under this assignment: individual
    /// questions read their atom directly, composite questions are the
    /// XNOR of their two atoms (the "local" hidden-variable rule:
    /// individual values determine all correlations).
    pub fn question_value(&self, q: &QuestionIndex) -> Result<bool> {
        if q.n() != 2 {
            return Err(Error::WrongN {
                expected: 2,
                got: q.n(),
            });
        }
        let first = q.sites()[0] as usize;
        let second = q.sites()[1] as usize;
        let a = (first > 0).then(|| self.values[ATOM_LABELS[first - 1]]);
        let b = (second > 0).then(|| self.values[ATOM_LABELS[second + 2]]);
        Ok(match (a, b) {
            (Some(a), Some(b)) => eval_xnor(a, b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("the all-zero index cannot be constructed"),
        })
    }
}

/// One row of the classical-identity table.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityRow {
    /// Values of (Q1, Q1', Q2, Q2').
    pub assignment: [bool; 4],
    pub lhs: bool,
    pub rhs: bool,
    pub holds: bool,
}

/// Exhaustive check of the classical exchange identity.
#[derive(Debug, Clone, Serialize)]
pub struct ClassicalIdentityReport {
    pub rows: Vec<IdentityRow>,
    pub pass: bool,
}

/// Verifies `(Q1 XNOR Q1') XNOR (Q2 XNOR Q2') = (Q1 XNOR Q2') XNOR
/// (Q2 XNOR Q1')` over all 16 assignments.  For definite simultaneous
/// truth values the identity is unavoidable, which is exactly what makes
/// the quantum parity table below remarkable.
pub fn classical_identity_check() -> ClassicalIdentityReport {
    let mut rows = Vec::with_capacity(16);
    for code in 0..16u8 {
        let bit = |k: u8| code >> k & 1 == 1;
        let (q1, q1p, q2, q2p) = (bit(0), bit(1), bit(2), bit(3));
        let lhs = eval_xnor(eval_xnor(q1, q1p), eval_xnor(q2, q2p));
        let rhs = eval_xnor(eval_xnor(q1, q2p), eval_xnor(q2, q1p));
        rows.push(IdentityRow {
            assignment: [q1, q1p, q2, q2p],
            lhs,
            rhs,
            holds: lhs == rhs,
        });
    }
    let pass = rows.iter().all(|r| r.holds);
    ClassicalIdentityReport { rows, pass }
}

/// A triangle constraint `c = (a XNOR b)` (parity `Even`) or
/// `c = NOT (a XNOR b)` (parity `Odd`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityConstraint {
    a: QuestionIndex,
    b: QuestionIndex,
    c: QuestionIndex,
    parity: CorrelationParity,
}

impl ParityConstraint {
    /// Validates that `a` and `b` are a compatible pair and that `c` is
    /// their composition index.  The parity is free: the search probes
    /// both the actual table and counterfactual variants.
    pub fn new(
        a: QuestionIndex,
        b: QuestionIndex,
        c: QuestionIndex,
        parity: CorrelationParity,
    ) -> Result<Self> {
        let (composed, _) = xnor_compose(&a, &b).map_err(|e| Error::MalformedConstraint {
            reason: format!("({a}, {b}) is not a composable pair: {e}"),
        })?;
        if composed != c {
            return Err(Error::MalformedConstraint {
                reason: format!("({a}, {b}) composes to {composed}, not {c}"),
            });
        }
        Ok(ParityConstraint { a, b, c, parity })
    }

    pub fn a(&self) -> &QuestionIndex {
        &self.a
    }

    pub fn b(&self) -> &QuestionIndex {
        &self.b
    }

    pub fn c(&self) -> &QuestionIndex {
        &self.c
    }

    pub fn parity(&self) -> CorrelationParity {
        self.parity
    }

    /// Whether the assignment satisfies this constraint.
    pub fn satisfied_by(&self, t: &TruthAssignment) -> Result<bool> {
        let correlation = eval_xnor(t.question_value(&self.a)?, t.question_value(&self.b)?);
        let expected = match self.parity {
            CorrelationParity::Even => correlation,
            CorrelationParity::Odd => !correlation,
        };
        Ok(t.question_value(&self.c)? == expected)
    }

    /// The same triple with parity forced to `Even` (the classical
    /// counterfactual).
    pub fn all_even(&self) -> Self {
        ParityConstraint {
            parity: CorrelationParity::Even,
            ..self.clone()
        }
    }
}

impl Serialize for ParityConstraint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ParityConstraint", 4)?;
        s.serialize_field("a", &self.a.to_string())?;
        s.serialize_field("b", &self.b.to_string())?;
        s.serialize_field("c", &self.c.to_string())?;
        s.serialize_field("parity", &self.parity.to_string())?;
        s.end()
    }
}

/// Counts the truth assignments over the six atoms satisfying every
/// constraint; the enumeration of all 64 candidates is exhaustive.
pub fn hidden_variable_search(constraints: &[ParityConstraint]) -> Result<usize> {
    let mut satisfying = 0;
    for code in 0..64u8 {
        let t = TruthAssignment::from_code(code);
        let mut ok = true;
        for c in constraints {
            if !c.satisfied_by(&t)? {
                ok = false;
                break;
            }
        }
        if ok {
            satisfying += 1;
        }
    }
    Ok(satisfying)
}

/// The full two-qubit parity table: one constraint per compatible
/// triangle, fifteen in total, each computed from the composition rule
/// rather than copied from a picture.  Triangles are canonical
/// (`a < b < c` in linear order) and sorted.
pub fn correlation_table() -> Vec<ParityConstraint> {
    let qs = all_questions(2);
    let mut table = Vec::new();
    for i in 0..qs.len() {
        for j in (i + 1)..qs.len() {
            if !is_compatible(&qs[i], &qs[j]).expect("same n") {
                continue;
            }
            let (c, parity) = xnor_compose(&qs[i], &qs[j]).expect("compatible and distinct");
            // Keep each triangle once, via its two lowest members.
            if c.linear() > qs[j].linear() {
                table.push(
                    ParityConstraint::new(qs[i].clone(), qs[j].clone(), c, parity)
                        .expect("composition is consistent"),
                );
            }
        }
    }
    table
}

/// The classical counterfactual of [`correlation_table`]: identical
/// triangles, every parity `Even`.
pub fn all_even_table() -> Vec<ParityConstraint> {
    correlation_table().iter().map(ParityConstraint::all_even).collect()
}

/// JSON export of a constraint table.
pub fn correlation_table_json(table: &[ParityConstraint]) -> String {
    serde_json::to_string_pretty(table).expect("plain data serializes")
}

/// DOT export of the compatibility structure: one edge per compatible
/// pair, colored by the parity of the unique triangle through it (red for
/// odd, green for even).
pub fn correlation_table_dot() -> String {
    let qs = all_questions(2);
    let mut out = String::from("graph correlations {\n  node [shape=circle];\n");
    for q in &qs {
        out.push_str(&format!("  \"Q{q}\";\n"));
    }
    for i in 0..qs.len() {
        for j in (i + 1)..qs.len() {
            if !is_compatible(&qs[i], &qs[j]).expect("same n") {
                continue;
            }
            let (_, parity) = xnor_compose(&qs[i], &qs[j]).expect("compatible and distinct");
            let color = match parity {
                CorrelationParity::Odd => "red",
                CorrelationParity::Even => "green",
            };
            out.push_str(&format!(
                "  \"Q{}\" -- \"Q{}\" [color={color}];\n",
                qs[i], qs[j]
            ));
        }
    }
    out.push_str("}\n");
    out
}
