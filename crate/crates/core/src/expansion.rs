//! Query reformulation: thesaurus (concept-based) expansion and
//! pseudo-relevance feedback through local association clusters.
//!
//! Both strategies are plain set unions over the original query terms.
//! Added terms carry no weight of their own.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{DocId, InvertedIndex};
use crate::text::{analyze, AnalyzerConfig, Term};
use crate::thesaurus::Thesaurus;

/// A query: id plus distinct terms in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Query {
    pub qid: String,
    terms: Vec<Term>,
}

impl Query {
    pub fn new(qid: impl Into<String>, terms: impl IntoIterator<Item = Term>) -> Query {
        let mut seen = HashSet::new();
        let terms = terms.into_iter().filter(|t| seen.insert(t.clone())).collect();
        Query { qid: qid.into(), terms }
    }

    pub fn from_text(qid: impl Into<String>, text: &str, cfg: &AnalyzerConfig) -> Query {
        Query::new(qid, analyze(text, cfg))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// A query with no terms cannot be run; it retrieves nothing.
    pub fn is_runnable(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.contains(t)
    }

    fn union(&self, extra: impl IntoIterator<Item = Term>) -> Query {
        Query::new(self.qid.clone(), self.terms.iter().cloned().chain(extra))
    }
}

/// Adds every synonym of every query term. Multiword synonyms contribute
/// each of their words. Added terms follow the originals, grouped by the
/// query term that produced them and sorted within each group.
pub fn expand_cb(q: &Query, th: &Thesaurus) -> Query {
    let extra: Vec<Term> = q
        .terms
        .iter()
        .flat_map(|t| {
            th.synonyms(t)
                .into_iter()
                .flat_map(|p| p.terms().to_vec())
                .collect::<BTreeSet<_>>()
        })
        .collect();
    q.union(extra)
}

/// Pseudo-relevance feedback settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrfParams {
    /// Size of the local document set.
    pub d: usize,
    /// Correlates kept per query term.
    pub t: usize,
    /// Depth of the initial retrieval; the local set is its prefix.
    pub k_sample: usize,
}

impl Default for PrfParams {
    fn default() -> Self {
        PrfParams::new(15, 7).expect("defaults are valid")
    }
}

impl PrfParams {
    pub fn new(d: usize, t: usize) -> Result<PrfParams> {
        if d == 0 || t == 0 {
            return Err(Error::Config(format!("PRF needs d >= 1 and t >= 1 (got d={d}, t={t})")));
        }
        Ok(PrfParams {
            d,
            t,
            k_sample: d.max(100),
        })
    }
}

/// The first `d` documents retrieved for `q`, in rank order.
pub fn sample_top_docs(index: &InvertedIndex, q: &Query, d: usize) -> Vec<DocId> {
    index.search(q.terms(), d).into_iter().map(|h| h.doc).collect()
}

/// Sparse symmetric term-term association scores over a local document set:
/// `score(u, v) = Σ_d tf(u, d) · tf(v, d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationMatrix {
    vocab: Vec<Term>,
    ids: HashMap<Term, u32>,
    // keyed by (min, max) local id; zero scores are absent
    scores: HashMap<(u32, u32), u64>,
}

impl AssociationMatrix {
    /// Distinct terms of the local set, sorted.
    pub fn vocab(&self) -> &[Term] {
        &self.vocab
    }

    pub fn contains(&self, t: &str) -> bool {
        self.ids.contains_key(t)
    }

    /// Number of stored (unordered) pairs, diagonal included.
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn score(&self, u: &str, v: &str) -> u64 {
        match (self.ids.get(u), self.ids.get(v)) {
            (Some(&a), Some(&b)) => self.scores.get(&(a.min(b), a.max(b))).copied().unwrap_or(0),
            _ => 0,
        }
    }

    /// Non-zero entries as `(u, v, score)` with `u <= v`, sorted.
    pub fn entries(&self) -> Vec<(&Term, &Term, u64)> {
        let mut out: Vec<_> = self
            .scores
            .iter()
            .map(|(&(a, b), &s)| (&self.vocab[a as usize], &self.vocab[b as usize], s))
            .collect();
        out.sort();
        out
    }
}

/// Builds the association matrix over `docs`. Repeated ids count once.
pub fn build_association_matrix(index: &InvertedIndex, docs: &[DocId]) -> Result<AssociationMatrix> {
    let mut rows = Vec::with_capacity(docs.len());
    let mut seen = HashSet::new();
    for d in docs {
        let terms = index.doc_terms(d)?;
        if seen.insert(d) {
            rows.push(terms);
        }
    }

    let vocab: Vec<Term> = rows
        .iter()
        .flatten()
        .map(|(t, _)| t.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let ids: HashMap<Term, u32> = vocab.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();

    let mut scores: HashMap<(u32, u32), u64> = HashMap::new();
    for row in &rows {
        // rows are sorted by term, and local ids follow term order
        let local: Vec<(u32, u64)> = row.iter().map(|(t, tf)| (ids[t], u64::from(*tf))).collect();
        for (i, &(u, fu)) in local.iter().enumerate() {
            for &(v, fv) in &local[i..] {
                *scores.entry((u, v)).or_insert(0) += fu * fv;
            }
        }
    }
    Ok(AssociationMatrix { vocab, ids, scores })
}

/// Up to `t` terms `v != u` with the largest positive `score(u, v)`,
/// descending, ties in term order.
pub fn top_correlates(m: &AssociationMatrix, u: &str, t: usize) -> Vec<Term> {
    if !m.contains(u) {
        return Vec::new();
    }
    let mut cands: Vec<(u64, &Term)> = m
        .vocab
        .iter()
        .filter(|v| v.as_str() != u)
        .map(|v| (m.score(u, v), v))
        .filter(|&(s, _)| s > 0)
        .collect();
    cands.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    cands.into_iter().take(t).map(|(_, v)| v.clone()).collect()
}

/// Expands `q` with the top correlates of each of its terms inside the
/// local set of the first `p.d` retrieved documents. A query that retrieves
/// nothing is returned unchanged.
pub fn expand_prf(index: &InvertedIndex, q: &Query, p: &PrfParams) -> Result<Query> {
    let pool = index.search(q.terms(), p.k_sample.max(p.d));
    let local: Vec<DocId> = pool.into_iter().take(p.d).map(|h| h.doc).collect();
    if local.is_empty() {
        return Ok(q.clone());
    }
    let m = build_association_matrix(index, &local)?;
    let extra: Vec<Term> = q.terms.iter().flat_map(|u| top_correlates(&m, u, p.t)).collect();
    Ok(q.union(extra))
}
