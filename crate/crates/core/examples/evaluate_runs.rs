//! Precision at k and the 11-point interpolated curve for a small run.
//!
//! cargo run --example evaluate_runs

use std::path::Path;

use qreform::{evaluate_run, report, trec};

fn main() -> qreform::Result<()> {
    let qrels = trec::parse_qrels("1 0 d1 1\n1 0 d4 1\n1 0 d9 0\n2 0 d2 1\n", Path::new("inline"))?;
    let run = trec::parse_run(
        "\
1 Q0 d1 1 9.0 demo
1 Q0 d2 2 8.0 demo
1 Q0 d3 3 7.0 demo
1 Q0 d4 4 6.0 demo
2 Q0 d5 1 4.0 demo
2 Q0 d2 2 3.5 demo
",
        Path::new("inline"),
    )?;
    let rep = evaluate_run(&run, &qrels, &[1, 2, 5])?;
    print!("{}", report::render_eval(&rep));
    for q in &rep.queries {
        println!(
            "query {}: P@k {:?}, curve {:?}",
            q.qid,
            q.precision_at,
            q.curve.points()
        );
    }
    println!();
    report::write_eval_csv(&rep, std::io::stdout())?;
    Ok(())
}
