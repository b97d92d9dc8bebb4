//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p qreform --test acceptance`.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use qreform::experiment::{self, ExperimentConfig, Mode};
use qreform::{
    aggregate_classification, build_association_matrix, expand_cb, expand_prf, interpolated_pr_curve, precision_at_k,
    AnalyzerConfig, DocId, ImprovementTag, InvertedIndex, PrfParams, Query, Thesaurus,
};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn index_of(docs: &[Doc], cfg: &AnalyzerConfig) -> InvertedIndex {
    InvertedIndex::from_documents(docs.iter().map(|(d, t)| (d.as_str(), t.as_str())), cfg).unwrap()
}

/// Association-matrix oracle: 100+ random corpora (≤ 20 docs, ≤ 200-term
/// vocabulary), entry-for-entry and integer-exact, in under 10 s.
fn matrix_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xA550C);
    let cfg = AnalyzerConfig::default();
    let cases = 120;
    let mut entries = 0usize;
    for case in 0..cases {
        let n_docs = rng.gen_range(1..=20);
        let vocab = rng.gen_range(1..=200);
        let docs = random_corpus(&mut rng, n_docs, vocab);
        let index = index_of(&docs, &cfg);
        ensure!(
            index.vocab_size() <= 200,
            "case {case}: vocabulary {} > 200",
            index.vocab_size()
        );

        let mut ids: Vec<String> = docs.iter().map(|(d, _)| d.clone()).collect();
        ids.shuffle(&mut rng);
        ids.truncate(rng.gen_range(1..=n_docs));
        let local: Vec<DocId> = ids.iter().map(|s| DocId::new(s.as_str())).collect();

        let m = build_association_matrix(&index, &local).map_err(|e| e.to_string())?;
        let (vocab, dense) = brute_matrix(&docs, &cfg, &ids);
        let got_vocab: Vec<&str> = m.vocab().iter().map(|t| t.as_str()).collect();
        ensure!(got_vocab == vocab, "case {case}: local vocabulary differs");
        for (i, u) in vocab.iter().enumerate() {
            for (j, v) in vocab.iter().enumerate() {
                ensure!(
                    m.score(u, v) == dense[i][j],
                    "case {case}: S[{u},{v}] = {} but oracle says {}",
                    m.score(u, v),
                    dense[i][j]
                );
                entries += 1;
            }
        }
        let nonzero_upper = (0..vocab.len())
            .flat_map(|i| (i..vocab.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| dense[i][j] > 0)
            .count();
        ensure!(
            m.len() == nonzero_upper,
            "case {case}: sparse map holds zero or extra entries"
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?} (limit 10 s)");
    Ok(format!("{cases} corpora, {entries} entries checked in {elapsed:.2?}"))
}

/// d1 = "a a b", d2 = "a b b": S[a,b] = 4, S[a,a] = 5, S[b,b] = 5.
fn matrix_fixture() -> Outcome {
    let index = InvertedIndex::from_documents([("d1", "a a b"), ("d2", "a b b")], &AnalyzerConfig::default()).unwrap();
    let m = build_association_matrix(&index, &["d1".into(), "d2".into()]).map_err(|e| e.to_string())?;
    let got = (
        m.score("a", "b"),
        m.score("b", "a"),
        m.score("a", "a"),
        m.score("b", "b"),
    );
    ensure!(got == (4, 4, 5, 5), "got S[a,b], S[b,a], S[a,a], S[b,b] = {got:?}");
    Ok("S[a,b]=4 S[a,a]=5 S[b,b]=5".into())
}

/// Metric oracle: 100+ random rankings (≤ 10 docs); P@k and the 11-point
/// curve match the naive implementation exactly; every curve is monotone.
fn metric_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x3E7);
    let cases = 500;
    for case in 0..cases {
        let (ranked, rel) = random_ranking(&mut rng, 10, 14);
        let rel_set: std::collections::HashSet<u32> = rel.iter().copied().collect();
        for k in (1..=12).chain([20, 100]) {
            let got = precision_at_k(&ranked, &rel_set, k);
            let want = naive_precision(&ranked, &rel, k);
            ensure!(got == want, "case {case}: P@{k} = {got}, oracle {want}");
        }
        let curve = interpolated_pr_curve(&ranked, &rel_set).map_err(|e| e.to_string())?;
        let want = naive_curve(&ranked, &rel);
        ensure!(curve.0 == want, "case {case}: curve {:?}, oracle {want:?}", curve.0);
        ensure!(
            curve.0.windows(2).all(|w| w[0] >= w[1]),
            "case {case}: curve not monotone"
        );
    }
    Ok(format!("{cases} rankings"))
}

/// Whole-percent summaries over 50 queries, rounded half up.
fn classification_fixture() -> Outcome {
    use ImprovementTag::*;
    let build = |p: usize, m: usize, x: usize| -> Vec<ImprovementTag> {
        [(Improvement, p), (NoImprovement, m), (NoDecision, x)]
            .into_iter()
            .flat_map(|(t, n)| std::iter::repeat_n(t, n))
            .collect()
    };
    for ((p, m, x), want) in [((7, 29, 14), [14, 58, 28]), ((9, 14, 27), [18, 28, 54])] {
        let s = aggregate_classification(&build(p, m, x));
        let counts = s.counts.map(|c| c.count);
        let pct = s.counts.map(|c| c.percent);
        ensure!(s.total == 50 && counts == [p, m, x], "counts {counts:?}");
        ensure!(pct == want, "({p},{m},{x}) gave {pct:?}, expected {want:?}");
    }
    Ok("(7,29,14) -> 14/58/28 %, (9,14,27) -> 18/28/54 %".into())
}

fn strip_tag(run: &str) -> String {
    run.lines()
        .map(|l| l.rsplit_once(' ').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Empty thesaurus keeps CB equal to SR; zero-hit queries survive PRF
/// unchanged; both strategies only ever add terms.
fn expansion_identities() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fx = fixture_dir();
    let mut cfg = ExperimentConfig::from_file(&fx.join("experiment.toml")).map_err(|e| e.to_string())?;
    cfg.index_dir = Some(tmp.path().join("index"));
    let empty = tmp.path().join("empty.tsv");
    std::fs::write(&empty, "").unwrap();
    cfg.thesaurus_path = Some(empty);
    experiment::cmd_index(&cfg, false).map_err(|e| e.to_string())?;
    let sr_path = tmp.path().join("sr.run");
    let cb_path = tmp.path().join("cb.run");
    let sr = experiment::cmd_run(&cfg, Mode::Sr, &sr_path, None).map_err(|e| e.to_string())?;
    let cb = experiment::cmd_run(&cfg, Mode::Cb, &cb_path, None).map_err(|e| e.to_string())?;
    ensure!(sr.expanded == cb.expanded, "CB with an empty thesaurus changed a query");
    let sr_text = std::fs::read_to_string(&sr_path).unwrap();
    let cb_text = std::fs::read_to_string(&cb_path).unwrap();
    ensure!(!sr_text.is_empty(), "SR run is empty");
    ensure!(
        strip_tag(&sr_text) == strip_tag(&cb_text),
        "CB run differs from SR run beyond the tag column"
    );
    ensure!(
        sr_text.replace(" sr\n", " cb\n") == cb_text,
        "CB run is not byte-identical to SR run with the tag renamed"
    );

    let mut rng = StdRng::seed_from_u64(0xE1);
    let analyzer = AnalyzerConfig::default();
    let mut checked = 0;
    for case in 0..200 {
        let vocab = rng.gen_range(3..40);
        let n_docs = rng.gen_range(1..25);
        let docs = random_corpus(&mut rng, n_docs, vocab);
        let index = index_of(&docs, &analyzer);

        // zero-hit query
        let miss = Query::from_text("z", "nothingmatches alsonothing", &analyzer);
        let p = PrfParams::new(rng.gen_range(1..20), rng.gen_range(1..10)).unwrap();
        let out = expand_prf(&index, &miss, &p).map_err(|e| e.to_string())?;
        ensure!(out == miss, "case {case}: zero-hit query changed under PRF");

        // random thesaurus over the same vocabulary
        let mut th = String::new();
        for s in 0..rng.gen_range(0..8) {
            let members: Vec<String> = (0..rng.gen_range(1..5))
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        format!("w{} w{}", rng.gen_range(0..vocab), rng.gen_range(0..vocab))
                    } else {
                        format!("w{}", rng.gen_range(0..vocab))
                    }
                })
                .collect();
            th.push_str(&format!("s{s}\tnoun\t{}\n", members.join(",")));
        }
        let th = Thesaurus::parse(&th, &analyzer, Path::new("fuzz")).map_err(|e| e.to_string())?;

        let q = Query::from_text("q", &random_query(&mut rng, vocab), &analyzer);
        let cb = expand_cb(&q, &th);
        let prf = expand_prf(&index, &q, &p).map_err(|e| e.to_string())?;
        for e in [&cb, &prf] {
            ensure!(e.qid == q.qid, "case {case}: qid changed");
            ensure!(
                q.terms().iter().all(|t| e.contains(t)),
                "case {case}: expansion dropped an original term"
            );
            ensure!(
                e.terms()[..q.terms().len()] == *q.terms(),
                "case {case}: original term order not preserved"
            );
        }
        ensure!(
            prf.terms().len() <= q.terms().len() * (1 + p.t),
            "case {case}: PRF grew past |q|(1+T)"
        );
        let cb_bound: usize = q.terms().len()
            + q.terms()
                .iter()
                .map(|t| th.synonyms(t).iter().map(|p| p.terms().len()).sum::<usize>())
                .sum::<usize>();
        ensure!(cb.terms().len() <= cb_bound, "case {case}: CB grew past its bound");
        checked += 1;
    }
    Ok(format!(
        "fixture CB==SR ({} lines); {checked} fuzz cases",
        sr_text.lines().count()
    ))
}

fn pipeline(root: &Path) -> Result<(), String> {
    let fx = fixture_dir();
    let mut cfg = ExperimentConfig::from_file(&fx.join("experiment.toml")).map_err(|e| e.to_string())?;
    cfg.index_dir = Some(root.join("index"));
    experiment::cmd_index(&cfg, false).map_err(|e| e.to_string())?;
    let qrels = cfg.qrels_path.clone().unwrap();
    for mode in Mode::ALL {
        let run = root.join(format!("{mode}.run"));
        let dump = root.join(format!("{mode}.expanded.tsv"));
        experiment::cmd_run(&cfg, mode, &run, Some(&dump)).map_err(|e| e.to_string())?;
        experiment::cmd_eval(&run, &qrels, Some(&root.join(format!("{mode}.eval"))), &cfg.k_levels)
            .map_err(|e| e.to_string())?;
    }
    for variant in [Mode::Cb, Mode::Prf] {
        experiment::cmd_compare(
            &root.join("sr.run"),
            &root.join(format!("{variant}.run")),
            &qrels,
            Some(&root.join(format!("sr_vs_{variant}"))),
            &cfg.k_levels,
        )
        .map_err(|e| e.to_string())?;
    }
    Ok(())
}

/// Two full pipelines over the bundled fixture are byte-identical; < 60 s.
fn end_to_end_determinism() -> Outcome {
    let start = Instant::now();
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    pipeline(a.path())?;
    pipeline(b.path())?;
    let elapsed = start.elapsed();
    let sa = snapshot(a.path());
    let sb = snapshot(b.path());
    // index (2) + runs (3) + dumps (3) + eval csv/json (6) + compare csv/json (4)
    ensure!(sa.len() == 18, "expected 18 output files, found {}", sa.len());
    ensure!(
        sa.keys().eq(sb.keys()),
        "output file sets differ: {:?} vs {:?}",
        sa.keys().collect::<Vec<_>>(),
        sb.keys().collect::<Vec<_>>()
    );
    for (name, bytes) in &sa {
        ensure!(sb[name] == *bytes, "{name} differs between runs");
    }
    let n_docs = std::fs::read_dir(fixture_dir().join("corpus"))
        .unwrap()
        .map(|d| std::fs::read_dir(d.unwrap().path()).unwrap().count())
        .sum::<usize>();
    ensure!((80..=120).contains(&n_docs), "fixture has {n_docs} documents");
    ensure!(elapsed < Duration::from_secs(60), "took {elapsed:?} (limit 60 s)");
    Ok(format!(
        "{} files identical, {n_docs} docs, {elapsed:.2?} for both pipelines",
        sa.len()
    ))
}

/// BM25 order matches a brute-force scorer on corpora ≤ 50 docs, and every
/// shorter cutoff is a prefix of a longer one.
fn bm25_oracle() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xB325);
    let cfg = AnalyzerConfig::default();
    let mut queries = 0;
    for case in 0..150 {
        let vocab = rng.gen_range(2..60);
        let n_docs = rng.gen_range(1..=50);
        let docs = random_corpus(&mut rng, n_docs, vocab);
        let index = index_of(&docs, &cfg);
        for _ in 0..4 {
            let text = random_query(&mut rng, vocab);
            let q = Query::from_text("q", &text, &cfg);
            let full = index.search(q.terms(), docs.len() + 1);
            let oracle = brute_bm25(&docs, &cfg, &text);
            let got: Vec<&str> = full.iter().map(|h| h.doc.as_str()).collect();
            let want: Vec<&str> = oracle.iter().map(|(d, _)| d.as_str()).collect();
            ensure!(got == want, "case {case} {text:?}: order {got:?}, oracle {want:?}");
            for (h, (_, s)) in full.iter().zip(&oracle) {
                ensure!((h.score - s).abs() <= 1e-12, "case {case}: score {} vs {s}", h.score);
            }
            for k in 1..=full.len() {
                ensure!(
                    index.search(q.terms(), k)[..] == full[..k],
                    "case {case}: k={k} not a prefix"
                );
            }
            queries += 1;
        }
    }
    Ok(format!("{queries} queries over 150 corpora"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("association-matrix oracle", matrix_oracle),
        ("worked matrix fixture", matrix_fixture),
        ("metric oracle", metric_oracle),
        ("classification fixture", classification_fixture),
        ("expansion identities", expansion_identities),
        ("end-to-end determinism", end_to_end_determinism),
        ("BM25 search oracle", bm25_oracle),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
