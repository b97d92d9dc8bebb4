//! Per-query classification of a variant run against a baseline:
//! `+` better at every recall level, `-` worse at every level, `X` otherwise.
//!
//! cargo run --example compare_strategies

use std::path::Path;

use qreform::{aggregate_classification, compare_runs, evaluate_run, report, trec, ImprovementTag};

fn main() -> qreform::Result<()> {
    let o = Path::new("inline");
    let qrels = trec::parse_qrels("1 0 a 1\n1 0 b 1\n2 0 c 1\n3 0 d 1\n", o)?;
    let baseline = trec::parse_run(
        "1 Q0 x 1 3 base\n1 Q0 a 2 2 base\n1 Q0 b 3 1 base\n2 Q0 c 1 1 base\n3 Q0 d 1 1 base\n",
        o,
    )?;
    let variant = trec::parse_run(
        "1 Q0 a 1 3 var\n1 Q0 b 2 2 var\n2 Q0 y 1 2 var\n2 Q0 c 2 1 var\n3 Q0 d 1 1 var\n",
        o,
    )?;
    let k = [1, 5];
    let cmp = compare_runs(
        &evaluate_run(&baseline, &qrels, &k)?,
        &evaluate_run(&variant, &qrels, &k)?,
    )?;
    print!("{}", report::render_comparison(&cmp));

    // Percentages are whole numbers rounded half up.
    use ImprovementTag::*;
    let tags: Vec<_> = [(Improvement, 7), (NoImprovement, 29), (NoDecision, 14)]
        .into_iter()
        .flat_map(|(t, n)| std::iter::repeat_n(t, n))
        .collect();
    let s = aggregate_classification(&tags);
    for c in s.counts {
        println!("{} {:>3} {:>3}%", c.tag, c.count, c.percent);
    }
    Ok(())
}
