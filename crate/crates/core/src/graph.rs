//! Complementarity graphs and their maximal cliques.
//!
//! Vertices are the `4^N - 1` question indices in linear order; an edge
//! joins two questions exactly when they are complementary (cannot be known
//! simultaneously).  Maximal cliques of this graph are the maximal sets of
//! mutually complementary questions; at `N = 2` these are six pentagons and
//! twenty triangles, and the six pentagons form the lattice on which the
//! charge and swap machinery is built.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::questions::{
    all_questions, check_qubit_count, compatible_unchecked, question_count, QuestionIndex,
};

/// The complementarity graph over the question catalogue of an `n`-qubit
/// system.  Immutable after construction.
#[derive(Debug, Clone)]
pub struct ComplementarityGraph {
    n: usize,
    /// Adjacency as one bitmask row per vertex (vertex order = linear index
    /// order, bit `j` of row `i` set iff `i` and `j` are complementary).
    adjacency: Vec<BitSet>,
}

/// Fixed-capacity bitset over vertex indices; 4 words cover the largest
/// catalogue under the qubit cap (255 vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(len: usize) -> Self {
        BitSet {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn full(len: usize) -> Self {
        let mut s = Self::empty(len);
        for i in 0..len {
            s.insert(i);
        }
        s
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn intersection_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Ascending iteration keeps every consumer deterministic.
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

/// A set of mutually complementary questions; `maximal` records whether no
/// outside question is complementary to every member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementaritySet {
    members: Vec<QuestionIndex>,
    maximal: bool,
}

impl ComplementaritySet {
    /// Builds a set after checking pairwise complementarity; membership is
    /// stored sorted by linear index.
    pub fn new(members: Vec<QuestionIndex>, maximal: bool) -> Result<Self> {
        for a in &members {
            for b in &members {
                if a != b && crate::questions::is_compatible(a, b)? {
                    return Err(Error::MalformedConstraint {
                        reason: format!("{a} and {b} are compatible, set is not complementary"),
                    });
                }
            }
        }
        let mut members = members;
        members.sort();
        Ok(ComplementaritySet { members, maximal })
    }

    pub fn members(&self) -> &[QuestionIndex] {
        &self.members
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, q: &QuestionIndex) -> bool {
        self.members.binary_search(q).is_ok()
    }
}

impl ComplementarityGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        question_count(self.n)
    }

    pub fn vertices(&self) -> Vec<QuestionIndex> {
        all_questions(self.n)
    }

    /// Whether vertices `i` and `j` (linear indices) are complementary.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    /// Number of complementary partners of vertex `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as ordered pairs `(i, j)` with `i < j`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let d = self.vertex_count();
        let mut out = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Builds the complementarity graph for `n` qubits.
pub fn build_graph(n: usize) -> Result<ComplementarityGraph> {
    check_qubit_count(n)?;
    let qs = all_questions(n);
    let d = qs.len();
    let mut adjacency = vec![BitSet::empty(d); d];
    for i in 0..d {
        for j in (i + 1)..d {
            if !compatible_unchecked(&qs[i], &qs[j]) {
                adjacency[i].insert(j);
                adjacency[j].insert(i);
            }
        }
    }
    Ok(ComplementarityGraph { n, adjacency })
}

/// Enumerates all maximal cliques with pivoted Bron-Kerbosch.
///
/// The pivot is the vertex of `P (union) X` with the most neighbours in `P`,
/// ties broken by lowest linear index, and candidate vertices are visited in
/// ascending order, so the recursion (and hence the output before the final
/// canonical sort) is fully deterministic.  Output is sorted by size
/// descending, then lexicographically by member linear indices.
pub fn maximal_cliques(g: &ComplementarityGraph) -> Vec<ComplementaritySet> {
    let d = g.vertex_count();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(
        &g.adjacency,
        &mut r,
        BitSet::full(d),
        BitSet::empty(d),
        &mut found,
    );

    let qs = g.vertices();
    let mut sets: Vec<ComplementaritySet> = found
        .into_iter()
        .map(|members| {
            let mut members: Vec<QuestionIndex> =
                members.into_iter().map(|i| qs[i].clone()).collect();
            members.sort();
            ComplementaritySet {
                members,
                maximal: true,
            }
        })
        .collect();
    sets.sort_by(|a, b| {
        b.size()
            .cmp(&a.size())
            .then_with(|| a.members.cmp(&b.members))
    });
    sets
}

fn bron_kerbosch(
    adj: &[BitSet],
    r: &mut Vec<usize>,
    p: BitSet,
    x: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r.clone());
        return;
    }
    // Pivot with the largest |P & N(u)|; ascending scan makes ties go to the
    // lowest index.
    let mut pivot = usize::MAX;
    let mut best = usize::MAX;
    for u in p.iter().chain(x.iter()) {
        let gain = p.intersection_count(&adj[u]);
        if best == usize::MAX || gain > best || (gain == best && u < pivot) {
            best = gain;
            pivot = u;
        }
    }

    let mut p = p;
    let mut x = x;
    let candidates: Vec<usize> = p
        .iter()
        .filter(|&v| pivot == usize::MAX || !adj[pivot].contains(v))
        .collect();
    for v in candidates {
        r.push(v);
        bron_kerbosch(
            adj,
            r,
            p.intersection(&adj[v]),
            x.intersection(&adj[v]),
            out,
        );
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// The six maximal five-question sets of the two-qubit catalogue, labelled
/// 1..=6, together with the incidence map from questions to the pentagons
/// containing them.
///
/// Labels follow the structure of the swap generators: odd labels are the
/// "row" pentagons built on the three correlation questions sharing a first
/// site (`Pent_1 = {Q_11, Q_12, Q_13, Q_20, Q_30}`), even labels the
/// "column" pentagons sharing a second site, in site order.  Reports always
/// print each label's membership, so downstream tooling never depends on the
/// numbering alone.
#[derive(Debug, Clone)]
pub struct PentagonLattice {
    pentagons: Vec<ComplementaritySet>,
    /// `incidence[linear index] = labels (1-based) of the two pentagons
    /// containing that question`.
    incidence: Vec<Vec<usize>>,
}

impl PentagonLattice {
    /// Pentagon by 1-based label.
    pub fn pentagon(&self, label: usize) -> Result<&ComplementaritySet> {
        if !(1..=6).contains(&label) {
            return Err(Error::BadLabel { label });
        }
        Ok(&self.pentagons[label - 1])
    }

    pub fn pentagons(&self) -> &[ComplementaritySet] {
        &self.pentagons
    }

    /// 1-based labels of the pentagons containing `q`.
    pub fn pentagons_of(&self, q: &QuestionIndex) -> &[usize] {
        &self.incidence[q.linear()]
    }

    /// The unique question lying in both pentagons of a distinct pair.
    ///
    /// Existence and uniqueness are forced by counting: fifteen questions,
    /// each in exactly two of six pentagons, is one question per unordered
    /// pentagon pair.
    pub fn shared_question(&self, a: usize, b: usize) -> Result<QuestionIndex> {
        if a == b {
            return Err(Error::EqualPentagons);
        }
        let pa = self.pentagon(a)?;
        let pb = self.pentagon(b)?;
        let shared: Vec<&QuestionIndex> =
            pa.members().iter().filter(|q| pb.contains(q)).collect();
        debug_assert_eq!(shared.len(), 1, "pentagon pair shares exactly one question");
        Ok(shared[0].clone())
    }
}

/// Builds the two-qubit pentagon lattice from the clique enumeration.
pub fn pentagon_lattice() -> PentagonLattice {
    let g = build_graph(2).expect("n=2 is within the cap");
    let cliques = maximal_cliques(&g);
    let pentagons: Vec<&ComplementaritySet> =
        cliques.iter().filter(|c| c.size() == 5).collect();
    assert_eq!(pentagons.len(), 6, "two-qubit catalogue has six pentagons");

    let find_containing = |a: &QuestionIndex, b: &QuestionIndex| -> ComplementaritySet {
        let found = pentagons
            .iter()
            .find(|p| p.contains(a) && p.contains(b))
            .expect("row/column pentagon exists");
        (*found).clone()
    };

    let mut ordered = Vec::with_capacity(6);
    for i in 1..=3u8 {
        // Row pentagon i: contains Q_{i1} and Q_{i2}.
        let a = QuestionIndex::new(&[i, 1]).unwrap();
        let b = QuestionIndex::new(&[i, 2]).unwrap();
        ordered.push(find_containing(&a, &b));
        // Column pentagon i: contains Q_{1i} and Q_{2i}.
        let a = QuestionIndex::new(&[1, i]).unwrap();
        let b = QuestionIndex::new(&[2, i]).unwrap();
        ordered.push(find_containing(&a, &b));
    }

    let mut incidence = vec![Vec::new(); question_count(2)];
    for (k, pent) in ordered.iter().enumerate() {
        for q in pent.members() {
            incidence[q.linear()].push(k + 1);
        }
    }
    PentagonLattice {
        pentagons: ordered,
        incidence,
    }
}

/// JSON clique-census report.
#[derive(Debug, Clone, Serialize)]
pub struct CliqueCensus {
    pub n: usize,
    pub cliques: Vec<CensusEntry>,
    /// Size -> count, keyed by the decimal size so the JSON object key
    /// ordering is deterministic.
    pub counts_by_size: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CensusEntry {
    pub size: usize,
    pub members: Vec<String>,
}

/// Census of the maximal cliques of `g`, in canonical order.
pub fn clique_census(g: &ComplementarityGraph) -> CliqueCensus {
    let cliques = maximal_cliques(g);
    let mut counts_by_size: BTreeMap<String, usize> = BTreeMap::new();
    let entries: Vec<CensusEntry> = cliques
        .iter()
        .map(|c| {
            *counts_by_size.entry(c.size().to_string()).or_insert(0) += 1;
            CensusEntry {
                size: c.size(),
                members: c.members().iter().map(|q| q.to_string()).collect(),
            }
        })
        .collect();
    CliqueCensus {
        n: g.n(),
        cliques: entries,
        counts_by_size,
    }
}

#[derive(Serialize)]
struct GraphJson {
    n: usize,
    nodes: Vec<String>,
    edges: Vec<[String; 2]>,
}

/// Renders the graph as DOT or JSON (`format` is case-insensitive).
pub fn export_graph(g: &ComplementarityGraph, format: &str) -> Result<String> {
    let qs = g.vertices();
    match format.to_ascii_lowercase().as_str() {
        "dot" => {
            let mut out = String::from("graph complementarity {\n");
            for q in &qs {
                out.push_str(&format!("    \"{q}\";\n"));
            }
            for (i, j) in g.edges() {
                out.push_str(&format!("    \"{}\" -- \"{}\";\n", qs[i], qs[j]));
            }
            out.push_str("}\n");
            Ok(out)
        }
        "json" => {
            let doc = GraphJson {
                n: g.n(),
                nodes: qs.iter().map(|q| q.to_string()).collect(),
                edges: g
                    .edges()
                    .iter()
                    .map(|&(i, j)| [qs[i].to_string(), qs[j].to_string()])
                    .collect(),
            };
            Ok(serde_json::to_string_pretty(&doc).expect("static report structure"))
        }
        other => Err(Error::UnknownFormat {
            format: other.to_string(),
        }),
    }
}
