//! End to end on the bundled fixture: index, three runs, evaluations and
//! comparisons, written to a directory given as the first argument (or a
//! temporary one).
//!
//! cargo run --example full_experiment -- /tmp/qreform-demo

use std::path::{Path, PathBuf};

use qreform::experiment::{self, ExperimentConfig, Mode};
use qreform::report;

fn main() -> qreform::Result<()> {
    let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/toy/experiment.toml");
    let out: PathBuf = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join(format!("qreform-demo-{}", std::process::id())));

    let mut cfg = ExperimentConfig::from_file(&fixture)?;
    cfg.index_dir = Some(out.join("index"));
    println!("{}", experiment::cmd_index(&cfg, true)?);

    let qrels = cfg.qrels_path.clone().expect("fixture names its qrels");
    for mode in Mode::ALL {
        let run = out.join(format!("{mode}.run"));
        experiment::cmd_run(&cfg, mode, &run, Some(&out.join(format!("{mode}.expanded.tsv"))))?;
        let rep = experiment::cmd_eval(&run, &qrels, Some(&out.join(format!("{mode}.eval"))), &cfg.k_levels)?;
        print!("{}", report::render_eval(&rep));
    }
    for variant in [Mode::Cb, Mode::Prf] {
        let cmp = experiment::cmd_compare(
            &out.join("sr.run"),
            &out.join(format!("{variant}.run")),
            &qrels,
            Some(&out.join(format!("sr_vs_{variant}"))),
            &cfg.k_levels,
        )?;
        print!("{}", report::render_comparison(&cmp));
    }
    println!("outputs in {}", out.display());
    Ok(())
}
