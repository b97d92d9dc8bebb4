//! Ranked retrieval with two automatic query-reformulation strategies and
//! a TREC-style evaluation harness.
//!
//! * [`text`]: tokenization and normalization shared by indexing, querying
//!   and thesaurus loading.
//! * [`index`]: inverted index with a forward view, BM25 search and on-disk
//!   persistence.
//! * [`thesaurus`]: synset file loader and synonym lookup.
//! * [`expansion`]: concept-based expansion (thesaurus union) and
//!   pseudo-relevance feedback through local association clusters.
//! * [`eval`]: P@k, 11-point interpolated precision, per-query
//!   improvement classification and aggregation.
//! * [`trec`], [`report`]: file formats.
//! * [`experiment`]: the steps behind the `qreform` binary.
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --example search_basics
//! cargo run --example full_experiment
//! ```

pub mod error;
pub mod eval;
pub mod expansion;
pub mod experiment;
pub mod index;
pub mod report;
pub mod text;
pub mod thesaurus;
pub mod trec;

pub use error::{Error, Result};
pub use eval::{
    aggregate_classification, classify_improvement, compare_runs, evaluate_run, interpolated_pr_curve, precision_at_k,
    ClassificationSummary, Comparison, EvalReport, ImprovementTag, PrCurve, Qrels, RunResult,
};
pub use expansion::{
    build_association_matrix, expand_cb, expand_prf, sample_top_docs, top_correlates, AssociationMatrix, PrfParams,
    Query,
};
pub use experiment::{ExperimentConfig, Mode};
pub use index::{build_index, Bm25, DocId, InvertedIndex, ScoredHit};
pub use text::{analyze, normalize, tokenize, AnalyzerConfig, Term};
pub use thesaurus::{Phrase, Synset, Thesaurus};
