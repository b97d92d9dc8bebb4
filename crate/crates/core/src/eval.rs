//! Run evaluation: P@k, 11-point interpolated precision, and the per-query
//! improvement classification used to compare two reformulation strategies.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::Hash;

use log::warn;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::index::{DocId, ScoredHit};

pub const DEFAULT_K_LEVELS: [usize; 4] = [5, 10, 20, 100];

/// Binary relevance judgments. Absent pairs are non-relevant.
#[derive(Debug, Clone, Default)]
pub struct Qrels {
    order: Vec<String>,
    judged: HashMap<String, HashMap<DocId, bool>>,
}

impl Qrels {
    pub fn new() -> Qrels {
        Qrels::default()
    }

    /// Records a judgment; a later judgment for the same pair replaces the
    /// earlier one.
    pub fn insert(&mut self, qid: &str, doc: DocId, relevant: bool) {
        if !self.judged.contains_key(qid) {
            self.order.push(qid.to_owned());
        }
        self.judged.entry(qid.to_owned()).or_default().insert(doc, relevant);
    }

    /// Query ids in first-appearance order.
    pub fn qids(&self) -> &[String] {
        &self.order
    }

    pub fn contains_query(&self, qid: &str) -> bool {
        self.judged.contains_key(qid)
    }

    pub fn relevant(&self, qid: &str) -> HashSet<DocId> {
        self.judged
            .get(qid)
            .into_iter()
            .flatten()
            .filter(|(_, &r)| r)
            .map(|(d, _)| d.clone())
            .collect()
    }

    pub fn is_relevant(&self, qid: &str, doc: &DocId) -> bool {
        self.judged.get(qid).and_then(|m| m.get(doc)).copied().unwrap_or(false)
    }
}

/// Ranked output of one system over a query set.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub tag: String,
    queries: Vec<(String, Vec<ScoredHit>)>,
}

impl RunResult {
    pub fn new(tag: impl Into<String>) -> RunResult {
        RunResult {
            tag: tag.into(),
            queries: Vec::new(),
        }
    }

    /// Adds the ranking for one query. Hits are re-sorted by descending
    /// score, ties by ascending `DocId`; a duplicate document is an error.
    pub fn push(&mut self, qid: impl Into<String>, mut hits: Vec<ScoredHit>) -> Result<()> {
        let qid = qid.into();
        if self.queries.iter().any(|(q, _)| *q == qid) {
            return Err(Error::Config(format!("query {qid} already present in run")));
        }
        hits.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.doc.cmp(&b.doc)));
        let mut seen = HashSet::new();
        if let Some(dup) = hits.iter().find(|h| !seen.insert(&h.doc)) {
            return Err(Error::Config(format!(
                "document {} listed twice for query {qid}",
                dup.doc
            )));
        }
        self.queries.push((qid, hits));
        Ok(())
    }

    pub fn queries(&self) -> impl Iterator<Item = (&str, &[ScoredHit])> {
        self.queries.iter().map(|(q, h)| (q.as_str(), h.as_slice()))
    }

    pub fn get(&self, qid: &str) -> Option<&[ScoredHit]> {
        self.queries.iter().find(|(q, _)| q == qid).map(|(_, h)| h.as_slice())
    }

    pub fn ranked_ids(&self, qid: &str) -> Vec<DocId> {
        self.get(qid)
            .unwrap_or_default()
            .iter()
            .map(|h| h.doc.clone())
            .collect()
    }
}

/// Interpolated precision at recall 0.0, 0.1, ..., 1.0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PrCurve(pub [f64; 11]);

impl PrCurve {
    pub const RECALL_LEVELS: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

    pub fn points(&self) -> &[f64; 11] {
        &self.0
    }

    fn mean<'a>(curves: impl IntoIterator<Item = &'a PrCurve>) -> PrCurve {
        let mut sum = [0.0; 11];
        let mut n = 0usize;
        for c in curves {
            for (s, p) in sum.iter_mut().zip(c.0) {
                *s += p;
            }
            n += 1;
        }
        if n > 0 {
            for s in &mut sum {
                *s /= n as f64;
            }
        }
        PrCurve(sum)
    }
}

/// `|relevant ∩ top-k| / k`. The denominator stays `k` for short lists.
pub fn precision_at_k<T: Eq + Hash>(ranked: &[T], rel: &HashSet<T>, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    let hits = ranked.iter().take(k).filter(|d| rel.contains(d)).count();
    hits as f64 / k as f64
}

/// Standard 11-point interpolation: the point at recall level `i/10` is the
/// best precision at any rank whose recall reaches `i/10`, or 0.
pub fn interpolated_pr_curve<T: Eq + Hash>(ranked: &[T], rel: &HashSet<T>) -> Result<PrCurve> {
    if rel.is_empty() {
        return Err(Error::NoRelevant(String::new()));
    }
    let n_rel = rel.len();
    let mut points = [0.0f64; 11];
    let mut found = 0usize;
    // walk ranks; each relevant hit raises recall, so update every level it reaches
    for (r, d) in ranked.iter().enumerate() {
        if !rel.contains(d) {
            continue;
        }
        found += 1;
        let precision = found as f64 / (r + 1) as f64;
        for (i, p) in points.iter_mut().enumerate() {
            // recall >= i/10  <=>  10·found >= i·n_rel
            if 10 * found >= i * n_rel && precision > *p {
                *p = precision;
            }
        }
    }
    Ok(PrCurve(points))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ImprovementTag {
    /// Strictly higher at all eleven recall levels.
    Improvement,
    /// Strictly lower at all eleven recall levels.
    NoImprovement,
    /// Anything else, including identical curves.
    NoDecision,
}

impl ImprovementTag {
    pub const ALL: [ImprovementTag; 3] = [
        ImprovementTag::Improvement,
        ImprovementTag::NoImprovement,
        ImprovementTag::NoDecision,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            ImprovementTag::Improvement => "+",
            ImprovementTag::NoImprovement => "-",
            ImprovementTag::NoDecision => "X",
        }
    }
}

impl fmt::Display for ImprovementTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Serialize for ImprovementTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.symbol())
    }
}

pub fn classify_improvement(before: &PrCurve, after: &PrCurve) -> ImprovementTag {
    let pairs = || before.0.iter().zip(&after.0);
    if pairs().all(|(b, a)| a > b) {
        ImprovementTag::Improvement
    } else if pairs().all(|(b, a)| a < b) {
        ImprovementTag::NoImprovement
    } else {
        ImprovementTag::NoDecision
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TagCount {
    pub tag: ImprovementTag,
    pub count: usize,
    /// Whole percent of the total, rounded half up.
    pub percent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationSummary {
    pub total: usize,
    /// In the order `+`, `-`, `X`.
    pub counts: [TagCount; 3],
}

impl ClassificationSummary {
    pub fn get(&self, tag: ImprovementTag) -> TagCount {
        self.counts
            .iter()
            .copied()
            .find(|c| c.tag == tag)
            .expect("all tags present")
    }
}

/// Rounds `100·count/total` half up, in integers.
pub fn percent_half_up(count: usize, total: usize) -> u32 {
    if total == 0 {
        return 0;
    }
    ((200 * count + total) / (2 * total)) as u32
}

pub fn aggregate_classification(tags: &[ImprovementTag]) -> ClassificationSummary {
    let total = tags.len();
    let counts = ImprovementTag::ALL.map(|tag| {
        let count = tags.iter().filter(|&&t| t == tag).count();
        TagCount {
            tag,
            count,
            percent: percent_half_up(count, total),
        }
    });
    ClassificationSummary { total, counts }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QueryEval {
    pub qid: String,
    pub num_rel: usize,
    pub num_ret: usize,
    pub num_rel_ret: usize,
    /// Aligned with the report's `k_levels`.
    pub precision_at: Vec<f64>,
    pub curve: PrCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub tag: String,
    pub k_levels: Vec<usize>,
    pub queries: Vec<QueryEval>,
    pub mean_precision_at: Vec<f64>,
    pub mean_curve: PrCurve,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn query(&self, qid: &str) -> Option<&QueryEval> {
        self.queries.iter().find(|q| q.qid == qid)
    }

    pub fn qids(&self) -> impl Iterator<Item = &str> {
        self.queries.iter().map(|q| q.qid.as_str())
    }
}

/// Scores a run against judgments.
///
/// The evaluated set is every judged query with at least one relevant
/// document; a judged query missing from the run counts as an empty ranking.
/// Run queries without judgments or without relevant documents are left out
/// and reported in `warnings`. Fails when run and qrels share no query.
pub fn evaluate_run(run: &RunResult, qrels: &Qrels, k_levels: &[usize]) -> Result<EvalReport> {
    if !run.queries().any(|(q, _)| qrels.contains_query(q)) {
        return Err(Error::NoOverlap);
    }
    let mut warnings = Vec::new();
    let mut order: Vec<&str> = Vec::new();
    let mut listed = HashSet::new();
    for (qid, _) in run.queries() {
        if !qrels.contains_query(qid) {
            warnings.push(format!("query {qid}: no judgments; excluded"));
        } else if listed.insert(qid) {
            order.push(qid);
        }
    }
    for qid in qrels.qids() {
        if listed.insert(qid.as_str()) {
            order.push(qid);
            warnings.push(format!("query {qid}: absent from run; scored as empty ranking"));
        }
    }

    let mut queries = Vec::new();
    for qid in order {
        let rel = qrels.relevant(qid);
        if rel.is_empty() {
            warnings.push(format!("query {qid}: no relevant documents; excluded"));
            continue;
        }
        let ranked = run.ranked_ids(qid);
        let curve = interpolated_pr_curve(&ranked, &rel).map_err(|_| Error::NoRelevant(qid.into()))?;
        queries.push(QueryEval {
            qid: qid.to_owned(),
            num_rel: rel.len(),
            num_ret: ranked.len(),
            num_rel_ret: ranked.iter().filter(|d| rel.contains(*d)).count(),
            precision_at: k_levels.iter().map(|&k| precision_at_k(&ranked, &rel, k)).collect(),
            curve,
        });
    }
    for w in &warnings {
        warn!("{}: {w}", run.tag);
    }
    if queries.is_empty() {
        return Err(Error::NoOverlap);
    }

    let n = queries.len() as f64;
    let mean_precision_at = (0..k_levels.len())
        .map(|i| queries.iter().map(|q| q.precision_at[i]).sum::<f64>() / n)
        .collect();
    let mean_curve = PrCurve::mean(queries.iter().map(|q| &q.curve));
    Ok(EvalReport {
        tag: run.tag.clone(),
        k_levels: k_levels.to_vec(),
        queries,
        mean_precision_at,
        mean_curve,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub qid: String,
    pub indicator: ImprovementTag,
    /// Smallest and largest `variant - baseline` over the eleven points.
    pub min_delta: f64,
    pub max_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub baseline_tag: String,
    pub variant_tag: String,
    pub rows: Vec<ComparisonRow>,
    pub summary: ClassificationSummary,
    pub k_levels: Vec<usize>,
    pub baseline_precision_at: Vec<f64>,
    pub variant_precision_at: Vec<f64>,
    pub precision_at_delta: Vec<f64>,
    pub baseline_curve: PrCurve,
    pub variant_curve: PrCurve,
}

/// Classifies every query of `variant` against `baseline`. Both reports
/// must cover the same queries and the same cutoffs.
pub fn compare_runs(baseline: &EvalReport, variant: &EvalReport) -> Result<Comparison> {
    let b: BTreeSet<&str> = baseline.qids().collect();
    let v: BTreeSet<&str> = variant.qids().collect();
    if b != v {
        return Err(Error::QuerySetMismatch {
            only_baseline: b.difference(&v).map(|s| s.to_string()).collect(),
            only_variant: v.difference(&b).map(|s| s.to_string()).collect(),
        });
    }
    if baseline.k_levels != variant.k_levels {
        return Err(Error::Config("reports use different P@k cutoffs".into()));
    }

    let rows: Vec<ComparisonRow> = baseline
        .queries
        .iter()
        .map(|bq| {
            let vq = variant.query(&bq.qid).expect("query sets are equal");
            let deltas = vq.curve.0.iter().zip(&bq.curve.0).map(|(a, b)| a - b);
            ComparisonRow {
                qid: bq.qid.clone(),
                indicator: classify_improvement(&bq.curve, &vq.curve),
                min_delta: deltas.clone().fold(f64::INFINITY, f64::min),
                max_delta: deltas.fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    let tags: Vec<_> = rows.iter().map(|r| r.indicator).collect();
    Ok(Comparison {
        baseline_tag: baseline.tag.clone(),
        variant_tag: variant.tag.clone(),
        summary: aggregate_classification(&tags),
        rows,
        k_levels: baseline.k_levels.clone(),
        precision_at_delta: variant
            .mean_precision_at
            .iter()
            .zip(&baseline.mean_precision_at)
            .map(|(v, b)| v - b)
            .collect(),
        baseline_precision_at: baseline.mean_precision_at.clone(),
        variant_precision_at: variant.mean_precision_at.clone(),
        baseline_curve: baseline.mean_curve,
        variant_curve: variant.mean_curve,
    })
}
