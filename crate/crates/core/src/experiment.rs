//! End-to-end experiment steps behind the `qreform` binary: index a corpus,
//! produce SR/CB/PRF runs, evaluate them and compare two runs.
//!
//! Every step is a plain function so scripts and tests can call the same
//! code the binary does.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::eval::{compare_runs, evaluate_run, Comparison, EvalReport, RunResult, DEFAULT_K_LEVELS};
use crate::expansion::{expand_cb, expand_prf, PrfParams, Query};
use crate::index::{build_index, InvertedIndex};
use crate::report;
use crate::text::{load_stopwords, AnalyzerConfig};
use crate::thesaurus::Thesaurus;
use crate::trec;

/// Retrieval strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Original query, no reformulation.
    Sr,
    /// Concept-based expansion from the thesaurus.
    Cb,
    /// Pseudo-relevance feedback.
    Prf,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Sr, Mode::Cb, Mode::Prf];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Sr => "sr",
            Mode::Cb => "cb",
            Mode::Prf => "prf",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "sr" => Ok(Mode::Sr),
            "cb" => Ok(Mode::Cb),
            "prf" => Ok(Mode::Prf),
            other => Err(Error::Config(format!(
                "unknown mode {other:?} (expected sr, cb or prf)"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub corpus_dir: Option<PathBuf>,
    pub index_dir: Option<PathBuf>,
    pub queries_path: Option<PathBuf>,
    pub qrels_path: Option<PathBuf>,
    pub thesaurus_path: Option<PathBuf>,
    pub analyzer: AnalyzerConfig,
    pub prf: PrfParams,
    pub k_retrieve: usize,
    pub k_levels: Vec<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            corpus_dir: None,
            index_dir: None,
            queries_path: None,
            qrels_path: None,
            thesaurus_path: None,
            analyzer: AnalyzerConfig::default(),
            prf: PrfParams::default(),
            k_retrieve: 1000,
            k_levels: DEFAULT_K_LEVELS.to_vec(),
        }
    }
}

/// On-disk experiment configuration (TOML). Relative paths are resolved
/// against the directory holding the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    corpus: Option<PathBuf>,
    index: Option<PathBuf>,
    queries: Option<PathBuf>,
    qrels: Option<PathBuf>,
    thesaurus: Option<PathBuf>,
    k_retrieve: Option<usize>,
    k_levels: Option<Vec<usize>>,
    #[serde(default)]
    analyzer: AnalyzerSection,
    #[serde(default)]
    prf: PrfSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzerSection {
    lowercase: Option<bool>,
    strip_diacritics: Option<bool>,
    normalize_alef_ya: Option<bool>,
    stopwords: Option<PathBuf>,
    min_token_length: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PrfSection {
    d: Option<usize>,
    t: Option<usize>,
    k_sample: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::from_toml(&text, base)
    }

    pub fn from_toml(text: &str, base: &Path) -> Result<ExperimentConfig> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let rel = |p: Option<PathBuf>| p.map(|p| if p.is_absolute() { p } else { base.join(p) });
        let defaults = AnalyzerConfig::default();
        let a = file.analyzer;
        let mut analyzer = AnalyzerConfig::new(
            a.lowercase.unwrap_or(defaults.lowercase()),
            a.strip_diacritics.unwrap_or(defaults.strip_diacritics()),
            a.normalize_alef_ya.unwrap_or(defaults.normalize_alef_ya()),
        )
        .with_min_token_length(a.min_token_length.unwrap_or(1));
        if let Some(sw) = rel(a.stopwords) {
            analyzer = analyzer.with_stopwords(load_stopwords(&sw)?);
        }
        let mut prf = PrfParams::new(
            file.prf.d.unwrap_or(PrfParams::default().d),
            file.prf.t.unwrap_or(PrfParams::default().t),
        )?;
        if let Some(k) = file.prf.k_sample {
            prf.k_sample = k.max(prf.d);
        }
        let cfg = ExperimentConfig {
            corpus_dir: rel(file.corpus),
            index_dir: rel(file.index),
            queries_path: rel(file.queries),
            qrels_path: rel(file.qrels),
            thesaurus_path: rel(file.thesaurus),
            analyzer,
            prf,
            k_retrieve: file.k_retrieve.unwrap_or(1000),
            k_levels: file.k_levels.unwrap_or_else(|| DEFAULT_K_LEVELS.to_vec()),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Replaces the PRF depths, keeping the pool at least `d` deep.
    pub fn set_prf(&mut self, d: Option<usize>, t: Option<usize>) -> Result<()> {
        let k_sample = self.prf.k_sample;
        self.prf = PrfParams::new(d.unwrap_or(self.prf.d), t.unwrap_or(self.prf.t))?;
        self.prf.k_sample = self.prf.k_sample.max(k_sample);
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_levels.is_empty() || self.k_levels.contains(&0) {
            return Err(Error::Config("k_levels must be non-empty and positive".into()));
        }
        if self.k_retrieve == 0 {
            return Err(Error::Config("k_retrieve must be at least 1".into()));
        }
        let max_k = *self.k_levels.iter().max().expect("non-empty");
        if self.k_retrieve < max_k {
            return Err(Error::Config(format!(
                "k_retrieve ({}) must be at least the largest P@k cutoff ({max_k})",
                self.k_retrieve
            )));
        }
        Ok(())
    }

    fn require<'a>(p: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
        p.as_deref()
            .ok_or_else(|| Error::Config(format!("missing {what} path")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexStats {
    pub n_docs: usize,
    pub vocab_size: usize,
    pub bytes_on_disk: u64,
}

impl fmt::Display for IndexStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "documents: {}\nvocabulary: {}\nindex size: {} bytes",
            self.n_docs, self.vocab_size, self.bytes_on_disk
        )
    }
}

/// Builds and saves the index. Refuses to overwrite an existing index
/// unless `force` is set.
pub fn cmd_index(cfg: &ExperimentConfig, force: bool) -> Result<IndexStats> {
    let corpus = ExperimentConfig::require(&cfg.corpus_dir, "corpus")?;
    let index_dir = ExperimentConfig::require(&cfg.index_dir, "index")?;
    let manifest = index_dir.join("manifest.json");
    if manifest.exists() && !force {
        return Err(Error::IndexExists(index_dir.to_path_buf()));
    }
    let index = build_index(corpus, &cfg.analyzer)?;
    let bytes_on_disk = index.save(index_dir)?;
    Ok(IndexStats {
        n_docs: index.n_docs(),
        vocab_size: index.vocab_size(),
        bytes_on_disk,
    })
}

/// Loads the index named by `cfg`, checking its analyzer against `cfg`.
pub fn open_index(cfg: &ExperimentConfig) -> Result<InvertedIndex> {
    let dir = ExperimentConfig::require(&cfg.index_dir, "index")?;
    InvertedIndex::load_checked(dir, &cfg.analyzer)
}

/// Reformulates every query under `mode`, preserving input order.
pub fn reformulate(
    index: &InvertedIndex,
    queries: &[Query],
    mode: Mode,
    thesaurus: Option<&Thesaurus>,
    prf: &PrfParams,
) -> Result<Vec<Query>> {
    match mode {
        Mode::Sr => Ok(queries.to_vec()),
        Mode::Cb => {
            let th = thesaurus.ok_or_else(|| Error::Config("mode cb requires a thesaurus".into()))?;
            Ok(queries.par_iter().map(|q| expand_cb(q, th)).collect())
        }
        Mode::Prf => queries.par_iter().map(|q| expand_prf(index, q, prf)).collect(),
    }
}

/// Runs already-reformulated queries, `k` hits each. The run tag is the
/// mode name.
pub fn execute(index: &InvertedIndex, queries: &[Query], mode: Mode, k: usize) -> Result<RunResult> {
    let hits: Vec<_> = queries.par_iter().map(|q| index.search(q.terms(), k)).collect();
    let mut run = RunResult::new(mode.as_str());
    for (q, h) in queries.iter().zip(hits) {
        run.push(q.qid.clone(), h)?;
    }
    Ok(run)
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub run: RunResult,
    pub expanded: Vec<Query>,
}

/// Loads index, queries and (for `cb`) the thesaurus, then reformulates and
/// retrieves. Nothing is written.
pub fn produce_run(cfg: &ExperimentConfig, mode: Mode) -> Result<RunOutput> {
    cfg.validate()?;
    let thesaurus = match mode {
        Mode::Cb => {
            let path = cfg
                .thesaurus_path
                .as_deref()
                .ok_or_else(|| Error::Config("mode cb requires --thesaurus".into()))?;
            Some(Thesaurus::load(path, &cfg.analyzer)?)
        }
        _ => None,
    };
    let index = open_index(cfg)?;
    let qpath = ExperimentConfig::require(&cfg.queries_path, "queries")?;
    let queries = trec::load_queries(qpath, &cfg.analyzer)?;
    let expanded = reformulate(&index, &queries, mode, thesaurus.as_ref(), &cfg.prf)?;
    let run = execute(&index, &expanded, mode, cfg.k_retrieve)?;
    Ok(RunOutput { run, expanded })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// `produce_run`, then writes the TREC run to `out` and, when asked, the
/// expanded queries as TSV.
pub fn cmd_run(cfg: &ExperimentConfig, mode: Mode, out: &Path, dump_expanded: Option<&Path>) -> Result<RunOutput> {
    let output = produce_run(cfg, mode)?;
    let mut buf = Vec::new();
    trec::write_run(&output.run, &mut buf).map_err(Error::Write)?;
    write_file(out, &buf)?;
    if let Some(path) = dump_expanded {
        let mut buf = Vec::new();
        trec::write_expanded(&output.expanded, &mut buf).map_err(Error::Write)?;
        write_file(path, &buf)?;
    }
    Ok(output)
}

/// `report.csv` / `report.json` style outputs from a stem; a `.csv` or
/// `.json` extension on the stem is dropped.
pub fn output_paths(stem: &Path) -> (PathBuf, PathBuf) {
    let base = match stem.extension().and_then(|e| e.to_str()) {
        Some("csv" | "json") => stem.with_extension(""),
        _ => stem.to_path_buf(),
    };
    let mut csv = base.clone().into_os_string();
    csv.push(".csv");
    let mut json = base.into_os_string();
    json.push(".json");
    (csv.into(), json.into())
}

/// Evaluates a run file; writes `<out>.csv` and `<out>.json` when `out` is
/// given.
pub fn cmd_eval(run_path: &Path, qrels_path: &Path, out: Option<&Path>, k_levels: &[usize]) -> Result<EvalReport> {
    let run = trec::load_run(run_path)?;
    let qrels = trec::load_qrels(qrels_path)?;
    let report = evaluate_run(&run, &qrels, k_levels)?;
    if let Some(stem) = out {
        let (csv_path, json_path) = output_paths(stem);
        let mut buf = Vec::new();
        report::write_eval_csv(&report, &mut buf)?;
        write_file(&csv_path, &buf)?;
        let mut buf = Vec::new();
        report::write_json(&report, &mut buf)?;
        write_file(&json_path, &buf)?;
    }
    Ok(report)
}

/// Evaluates two run files against the same judgments and classifies each
/// query of the variant against the baseline.
pub fn cmd_compare(
    baseline_path: &Path,
    variant_path: &Path,
    qrels_path: &Path,
    out: Option<&Path>,
    k_levels: &[usize],
) -> Result<Comparison> {
    let qrels = trec::load_qrels(qrels_path)?;
    let baseline = evaluate_run(&trec::load_run(baseline_path)?, &qrels, k_levels)?;
    let variant = evaluate_run(&trec::load_run(variant_path)?, &qrels, k_levels)?;
    let cmp = compare_runs(&baseline, &variant)?;
    if let Some(stem) = out {
        let (csv_path, json_path) = output_paths(stem);
        let mut buf = Vec::new();
        report::write_comparison_csv(&cmp, &mut buf)?;
        write_file(&csv_path, &buf)?;
        let mut buf = Vec::new();
        report::write_json(&cmp, &mut buf)?;
        write_file(&json_path, &buf)?;
    }
    Ok(cmp)
}
