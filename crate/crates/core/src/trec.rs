//! Line-oriented file formats: TREC qrels and runs, query TSV and the
//! expanded-query dump.

use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::eval::{Qrels, RunResult};
use crate::expansion::Query;
use crate::index::{DocId, ScoredHit};
use crate::text::AnalyzerConfig;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// `qid 0 docid rel`, whitespace-separated. Any positive relevance counts
/// as relevant.
pub fn parse_qrels(text: &str, origin: &Path) -> Result<Qrels> {
    let mut qrels = Qrels::new();
    for (n, line) in lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [qid, _, doc, rel] = f[..] else {
            return Err(Error::parse(origin, n, format!("expected 4 fields, found {}", f.len())));
        };
        let rel: i64 = rel
            .parse()
            .map_err(|_| Error::parse(origin, n, format!("relevance {rel:?} is not an integer")))?;
        qrels.insert(qid, DocId::new(doc), rel > 0);
    }
    Ok(qrels)
}

pub fn load_qrels(path: &Path) -> Result<Qrels> {
    parse_qrels(&read(path)?, path)
}

/// `qid Q0 docid rank score tag`. The rank column is checked for syntax
/// only; order comes from the scores. The first tag names the run.
pub fn parse_run(text: &str, origin: &Path) -> Result<RunResult> {
    let mut tag: Option<String> = None;
    let mut order: Vec<String> = Vec::new();
    let mut per_query: std::collections::HashMap<String, (Vec<ScoredHit>, HashSet<String>)> = Default::default();
    for (n, line) in lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        let [qid, _, doc, rank, score, run_tag] = f[..] else {
            return Err(Error::parse(origin, n, format!("expected 6 fields, found {}", f.len())));
        };
        rank.parse::<u64>()
            .map_err(|_| Error::parse(origin, n, format!("rank {rank:?} is not an integer")))?;
        let score: f64 = score
            .parse()
            .ok()
            .filter(|s: &f64| s.is_finite())
            .ok_or_else(|| Error::parse(origin, n, format!("score {score:?} is not a number")))?;
        tag.get_or_insert_with(|| run_tag.to_owned());
        let entry = per_query.entry(qid.to_owned()).or_insert_with(|| {
            order.push(qid.to_owned());
            Default::default()
        });
        if !entry.1.insert(doc.to_owned()) {
            return Err(Error::parse(
                origin,
                n,
                format!("document {doc} repeated for query {qid}"),
            ));
        }
        entry.0.push(ScoredHit {
            doc: DocId::new(doc),
            score,
        });
    }
    let mut run = RunResult::new(tag.unwrap_or_default());
    for qid in order {
        let (hits, _) = per_query.remove(&qid).expect("recorded above");
        run.push(qid, hits)?;
    }
    Ok(run)
}

pub fn load_run(path: &Path) -> Result<RunResult> {
    parse_run(&read(path)?, path)
}

/// Writes a run in TREC format, ranks starting at 1. Scores use the
/// shortest representation that round-trips.
pub fn write_run<W: Write>(run: &RunResult, mut w: W) -> std::io::Result<()> {
    for (qid, hits) in run.queries() {
        for (i, h) in hits.iter().enumerate() {
            writeln!(w, "{qid} Q0 {} {} {} {}", h.doc, i + 1, h.score, run.tag)?;
        }
    }
    Ok(())
}

/// Query file: `qid<TAB>query text`, one per line; blank lines are skipped.
pub fn parse_queries(text: &str, cfg: &AnalyzerConfig, origin: &Path) -> Result<Vec<Query>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (n, line) in lines(text) {
        let Some((qid, body)) = line.split_once('\t') else {
            return Err(Error::parse(origin, n, "expected qid<TAB>query text"));
        };
        let qid = qid.trim();
        if qid.is_empty() {
            return Err(Error::parse(origin, n, "empty query id"));
        }
        if !seen.insert(qid.to_owned()) {
            return Err(Error::parse(origin, n, format!("duplicate query id {qid}")));
        }
        out.push(Query::from_text(qid, body, cfg));
    }
    Ok(out)
}

pub fn load_queries(path: &Path, cfg: &AnalyzerConfig) -> Result<Vec<Query>> {
    parse_queries(&read(path)?, cfg, path)
}

/// Expanded-query dump: `qid<TAB>term1 term2 ...`.
pub fn write_expanded<W: Write>(queries: &[Query], mut w: W) -> std::io::Result<()> {
    for q in queries {
        let terms: Vec<&str> = q.terms().iter().map(|t| t.as_str()).collect();
        writeln!(w, "{}\t{}", q.qid, terms.join(" "))?;
    }
    Ok(())
}
