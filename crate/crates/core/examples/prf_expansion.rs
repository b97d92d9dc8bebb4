//! Pseudo-relevance feedback: build the association matrix over the top
//! documents and add each query term's strongest correlates.
//!
//! cargo run --example prf_expansion

use qreform::{
    build_association_matrix, expand_prf, sample_top_docs, top_correlates, AnalyzerConfig, InvertedIndex, PrfParams,
    Query,
};

fn main() -> qreform::Result<()> {
    let cfg = AnalyzerConfig::identity();
    let index = InvertedIndex::from_documents([("d1", "a a b"), ("d2", "a b b"), ("d3", "c d")], &cfg)?;

    let q = Query::from_text("q", "a", &cfg);
    let local = sample_top_docs(&index, &q, 2);
    println!("local set: {local:?}");

    let m = build_association_matrix(&index, &local)?;
    for (u, v, s) in m.entries() {
        println!("  S[{u},{v}] = {s}");
    }
    println!("correlates of a: {:?}", top_correlates(&m, "a", 7));

    let p = PrfParams::new(2, 7)?;
    let e = expand_prf(&index, &q, &p)?;
    println!("expanded: {:?}", e.terms());

    // A query that matches nothing is left as it is.
    let miss = Query::from_text("m", "zzz", &cfg);
    assert_eq!(expand_prf(&index, &miss, &p)?, miss);
    Ok(())
}
