//! Analyze text, build an in-memory index and run a BM25 search.
//!
//! cargo run --example search_basics

use qreform::{analyze, AnalyzerConfig, InvertedIndex, Query};

fn main() -> qreform::Result<()> {
    let cfg = AnalyzerConfig::default();

    // Diacritics are stripped and alef / ya variants folded.
    let raw = "أسْعَار النّفط، Oil Prices!";
    let terms: Vec<String> = analyze(raw, &cfg).into_iter().map(|t| t.into_string()).collect();
    println!("{raw:?} -> {terms:?}");

    let index = InvertedIndex::from_documents(
        [
            ("d1", "Oil prices rose sharply as supply tightened."),
            ("d2", "Crude oil exports and oil prices."),
            ("d3", "The football season opened with a derby."),
            ("d4", "اسعار النفط ترتفع"),
        ],
        &cfg,
    )?;
    println!(
        "{} docs, {} terms, avgdl {:.2}",
        index.n_docs(),
        index.vocab_size(),
        index.avg_doc_len()
    );

    for text in ["oil prices", "أسعار النفط", "derby"] {
        let q = Query::from_text("q", text, &cfg);
        println!("\n{text}");
        for hit in index.search(q.terms(), 3) {
            println!("  {:<4} {:.4}", hit.doc, hit.score);
        }
    }
    Ok(())
}
