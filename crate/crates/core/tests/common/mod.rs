//! Brute-force reference implementations used by the integration and
//! acceptance tests. Nothing here calls into the index, expansion or eval
//! code paths it is checked against; only the analyzer is shared.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use qreform::{analyze, AnalyzerConfig};

pub type Doc = (String, String);

/// Random corpus: `n_docs` documents over a vocabulary of `vocab` words
/// named `w0`, `w1`, ... with skewed word choice so that frequencies vary.
pub fn random_corpus(rng: &mut StdRng, n_docs: usize, vocab: usize) -> Vec<Doc> {
    (0..n_docs)
        .map(|i| {
            let len = rng.gen_range(0..30);
            let words: Vec<String> = (0..len)
                .map(|_| {
                    let a = rng.gen_range(0..vocab);
                    let b = rng.gen_range(0..vocab);
                    format!("w{}", a.min(b))
                })
                .collect();
            (format!("doc{i:03}"), words.join(" "))
        })
        .collect()
}

pub fn random_query(rng: &mut StdRng, vocab: usize) -> String {
    let n = rng.gen_range(1..4);
    (0..n)
        .map(|_| format!("w{}", rng.gen_range(0..vocab + 3)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn count(tokens: &[String], t: &str) -> u64 {
    tokens.iter().filter(|x| x.as_str() == t).count() as u64
}

fn analyzed(text: &str, cfg: &AnalyzerConfig) -> Vec<String> {
    analyze(text, cfg).into_iter().map(|t| t.into_string()).collect()
}

/// BM25 (k1 = 1.2, b = 0.75) by rescanning every document's analyzed text.
/// Returns `(doc, score)` for documents matching at least one term, sorted
/// by descending score then ascending id.
pub fn brute_bm25(docs: &[Doc], cfg: &AnalyzerConfig, query: &str) -> Vec<(String, f64)> {
    let (k1, b) = (1.2f64, 0.75f64);
    let mut sorted: Vec<&Doc> = docs.iter().collect();
    sorted.sort_by(|x, y| x.0.cmp(&y.0));
    let toks: Vec<Vec<String>> = sorted.iter().map(|(_, t)| analyzed(t, cfg)).collect();
    let n = toks.len();
    let total: u64 = toks.iter().map(|t| t.len() as u64).sum();
    let avgdl = total as f64 / n as f64;
    let terms: BTreeSet<String> = analyzed(query, cfg).into_iter().collect();

    let mut out = Vec::new();
    for (i, dt) in toks.iter().enumerate() {
        let mut score = 0.0f64;
        let mut matched = false;
        for t in &terms {
            let tf = count(dt, t);
            if tf == 0 {
                continue;
            }
            matched = true;
            let df = toks.iter().filter(|d| d.iter().any(|x| x == t)).count() as f64;
            let idf = (1.0 + (n as f64 - df + 0.5) / (df + 0.5)).ln();
            let tf = tf as f64;
            let dl = dt.len() as f64;
            score += idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * dl / avgdl));
        }
        if matched {
            out.push((sorted[i].0.clone(), score));
        }
    }
    out.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(&y.0)));
    out
}

/// Full association matrix over the named documents by a triple loop over
/// documents × terms × terms, with frequencies recounted from raw text.
/// Returns the sorted local vocabulary and a dense matrix indexed like it.
pub fn brute_matrix(docs: &[Doc], cfg: &AnalyzerConfig, local: &[String]) -> (Vec<String>, Vec<Vec<u64>>) {
    let texts: Vec<Vec<String>> = local
        .iter()
        .map(|id| {
            let (_, text) = docs.iter().find(|(d, _)| d == id).expect("doc exists");
            analyzed(text, cfg)
        })
        .collect();
    let vocab: Vec<String> = texts
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let pos: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (t.as_str(), i)).collect();
    let v = vocab.len();
    let mut m = vec![vec![0u64; v]; v];
    for toks in &texts {
        let mut tf = vec![0u64; v];
        for t in toks {
            tf[pos[t.as_str()]] += 1;
        }
        for u in 0..v {
            for w in 0..v {
                m[u][w] += tf[u] * tf[w];
            }
        }
    }
    (vocab, m)
}

/// `|relevant in first k| / k`, recounted by indexing.
pub fn naive_precision(ranked: &[u32], rel: &BTreeSet<u32>, k: usize) -> f64 {
    let mut hits = 0usize;
    for i in 0..k {
        if i < ranked.len() && rel.contains(&ranked[i]) {
            hits += 1;
        }
    }
    hits as f64 / k as f64
}

/// 11-point curve: for each level, the maximum precision over every rank
/// whose recall reaches the level, each rank's counts recomputed from
/// scratch.
pub fn naive_curve(ranked: &[u32], rel: &BTreeSet<u32>) -> [f64; 11] {
    let mut out = [0.0; 11];
    for (level, slot) in out.iter_mut().enumerate() {
        for r in 1..=ranked.len() {
            let found = ranked[..r].iter().filter(|d| rel.contains(d)).count();
            // recall = found / |rel| >= level / 10, compared exactly
            if found * 10 >= level * rel.len() && found > 0 {
                let p = found as f64 / r as f64;
                if p > *slot {
                    *slot = p;
                }
            }
        }
    }
    out
}

/// Random ranking of up to `max_len` distinct docs out of `universe`, plus
/// a non-empty relevant set.
pub fn random_ranking(rng: &mut StdRng, max_len: usize, universe: u32) -> (Vec<u32>, BTreeSet<u32>) {
    let mut all: Vec<u32> = (0..universe).collect();
    all.shuffle(rng);
    let len = rng.gen_range(0..=max_len);
    let ranked = all[..len].to_vec();
    let n_rel = rng.gen_range(1..=universe as usize / 2);
    all.shuffle(rng);
    (ranked, all[..n_rel].iter().copied().collect())
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toy")
}

pub fn write_corpus(dir: &Path, docs: &[Doc]) {
    for (id, text) in docs {
        let p = dir.join(format!("{id}.txt"));
        if let Some(parent) = p.parent() {
            std::fs::create_dir_all(parent).unwrap();
        }
        std::fs::write(p, text).unwrap();
    }
}

/// All regular files under `dir` with their contents, keyed by relative
/// path.
pub fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    walkdir_files(dir, dir)
}

fn walkdir_files(root: &Path, dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            out.extend(walkdir_files(root, &p));
        } else {
            let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
            out.insert(rel, std::fs::read(&p).unwrap());
        }
    }
    out
}
