use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qreform::experiment::{self, ExperimentConfig, Mode};
use qreform::report;
use qreform::Error;

/// Index a corpus, run SR / CB / PRF retrieval, evaluate and compare runs.
#[derive(Parser)]
#[command(name = "qreform", version)]
struct Cli {
    /// Experiment configuration file (TOML); flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and save the inverted index.
    Index {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        index: Option<PathBuf>,
        /// Overwrite an existing index.
        #[arg(long)]
        force: bool,
    },
    /// Retrieve for every query and write a TREC run file.
    Run {
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        index: Option<PathBuf>,
        #[arg(long)]
        queries: Option<PathBuf>,
        #[arg(long)]
        thesaurus: Option<PathBuf>,
        /// PRF local document set size.
        #[arg(long)]
        d: Option<usize>,
        /// PRF correlates per query term.
        #[arg(long)]
        t: Option<usize>,
        /// Documents retrieved per query.
        #[arg(long)]
        k: Option<usize>,
        /// Also write the reformulated queries as TSV.
        #[arg(long)]
        dump_expanded: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a run: P@k and the 11-point interpolated curve.
    Eval {
        #[arg(long)]
        run: PathBuf,
        #[command(flatten)]
        common: EvalArgs,
    },
    /// Classify each query of a variant run against a baseline run.
    Compare {
        #[arg(long)]
        baseline: PathBuf,
        #[arg(long)]
        variant: PathBuf,
        #[command(flatten)]
        common: EvalArgs,
    },
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    qrels: Option<PathBuf>,
    /// Output stem; `.csv` and `.json` files are written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    match cli.command {
        Command::Index { corpus, index, force } => {
            cfg.corpus_dir = corpus.or(cfg.corpus_dir);
            cfg.index_dir = index.or(cfg.index_dir);
            let stats = experiment::cmd_index(&cfg, force)?;
            println!("{stats}");
        }
        Command::Run {
            mode,
            index,
            queries,
            thesaurus,
            d,
            t,
            k,
            dump_expanded,
            out,
        } => {
            cfg.index_dir = index.or(cfg.index_dir);
            cfg.queries_path = queries.or(cfg.queries_path);
            cfg.thesaurus_path = thesaurus.or(cfg.thesaurus_path);
            cfg.set_prf(d, t)?;
            if let Some(k) = k {
                cfg.k_retrieve = k;
            }
            let output = experiment::cmd_run(&cfg, mode, &out, dump_expanded.as_deref())?;
            let lines: usize = output.run.queries().map(|(_, h)| h.len()).sum();
            println!(
                "{mode}: {} queries, {lines} lines -> {}",
                output.expanded.len(),
                out.display()
            );
        }
        Command::Eval { run, common } => {
            let qrels = common
                .qrels
                .or(cfg.qrels_path)
                .ok_or_else(|| Error::Config("missing --qrels".into()))?;
            let rep = experiment::cmd_eval(&run, &qrels, common.out.as_deref(), &cfg.k_levels)?;
            print!("{}", report::render_eval(&rep));
        }
        Command::Compare {
            baseline,
            variant,
            common,
        } => {
            let qrels = common
                .qrels
                .or(cfg.qrels_path)
                .ok_or_else(|| Error::Config("missing --qrels".into()))?;
            let cmp = experiment::cmd_compare(&baseline, &variant, &qrels, common.out.as_deref(), &cfg.k_levels)?;
            print!("{}", report::render_comparison(&cmp));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
