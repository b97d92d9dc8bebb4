//! Concept-based expansion: add thesaurus synonyms to each query term.
//!
//! cargo run --example concept_expansion

use std::path::Path;

use qreform::{expand_cb, trec, AnalyzerConfig, Thesaurus};

fn main() -> qreform::Result<()> {
    let cfg = AnalyzerConfig::default();
    let text = "\
# id\tpos\tmembers
s1\tnoun\tprice,cost,value
s2\tnoun\toil,petroleum,crude oil
s3\tnoun\tالنفط,البترول
";
    let th = Thesaurus::parse(text, &cfg, Path::new("inline"))?;
    println!("{} synsets", th.len());

    let queries = trec::parse_queries("1\toil price\n2\tالنفط\n3\tweather\n", &cfg, Path::new("inline"))?;
    for q in &queries {
        let e = expand_cb(q, &th);
        let before: Vec<&str> = q.terms().iter().map(|t| t.as_str()).collect();
        let after: Vec<&str> = e.terms().iter().map(|t| t.as_str()).collect();
        println!("{}: {before:?} -> {after:?}", q.qid);
    }

    // The bundled fixture thesaurus.
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toy/thesaurus.tsv");
    let th = Thesaurus::load(&fixture, &cfg)?;
    println!("\nfixture thesaurus: {} synsets", th.len());
    for s in th.synsets().iter().take(3) {
        let members: Vec<String> = s.members.iter().map(|p| p.to_string()).collect();
        println!("  {} ({:?}): {}", s.id, s.pos, members.join(", "));
    }
    Ok(())
}
