//! Inverted index with a forward (document → terms) view and BM25 ranking.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::text::{analyze, AnalyzerConfig, Term};

/// Document identifier: path relative to the corpus root, without the
/// `.txt` extension, `/`-separated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DocId(String);

impl DocId {
    pub fn new(id: impl Into<String>) -> DocId {
        DocId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for DocId {
    fn from(s: &str) -> Self {
        DocId(s.to_owned())
    }
}

/// Internal document number: position of the document in DocId order.
pub type DocNo = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Posting {
    pub doc: DocNo,
    pub tf: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredHit {
    pub doc: DocId,
    pub score: f64,
}

/// BM25 parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25 {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25 {
    fn default() -> Self {
        Bm25 { k1: 1.2, b: 0.75 }
    }
}

impl Bm25 {
    /// `ln(1 + (N - df + 0.5) / (df + 0.5))`
    pub fn idf(&self, n_docs: usize, df: usize) -> f64 {
        let n = n_docs as f64;
        let df = df as f64;
        (1.0 + (n - df + 0.5) / (df + 0.5)).ln()
    }

    pub fn term_weight(&self, idf: f64, tf: u32, doc_len: u32, avgdl: f64) -> f64 {
        let tf = f64::from(tf);
        let norm = self.k1 * (1.0 - self.b + self.b * f64::from(doc_len) / avgdl);
        idf * (tf * (self.k1 + 1.0)) / (tf + norm)
    }
}

#[derive(Debug, Clone)]
pub struct InvertedIndex {
    analyzer: AnalyzerConfig,
    docs: Vec<DocId>,
    doc_lens: Vec<u32>,
    doc_lookup: HashMap<DocId, DocNo>,
    vocab: Vec<Term>,
    term_ids: HashMap<Term, u32>,
    postings: Vec<Vec<Posting>>,
    // per document, (term id, tf) sorted by term id
    forward: Vec<Vec<(u32, u32)>>,
    total_len: u64,
}

impl InvertedIndex {
    /// Builds an index from in-memory documents. Documents are ordered by id
    /// regardless of input order.
    pub fn from_documents<I, D, S>(docs: I, analyzer: &AnalyzerConfig) -> Result<InvertedIndex>
    where
        I: IntoIterator<Item = (D, S)>,
        D: Into<DocId>,
        S: AsRef<str>,
    {
        let mut counted: Vec<(DocId, BTreeMap<Term, u32>)> = docs
            .into_iter()
            .map(|(id, text)| (id.into(), term_counts(text.as_ref(), analyzer)))
            .collect();
        counted.sort_by(|a, b| a.0.cmp(&b.0));
        Self::assemble(counted, analyzer.clone())
    }

    fn assemble(counted: Vec<(DocId, BTreeMap<Term, u32>)>, analyzer: AnalyzerConfig) -> Result<InvertedIndex> {
        for pair in counted.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::DuplicateDocument(pair[0].0.to_string()));
            }
        }

        let vocab: Vec<Term> = counted
            .iter()
            .flat_map(|(_, tfs)| tfs.keys().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let term_ids: HashMap<Term, u32> = vocab.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();

        let mut postings = vec![Vec::new(); vocab.len()];
        let mut forward = Vec::with_capacity(counted.len());
        let mut docs = Vec::with_capacity(counted.len());
        let mut doc_lens = Vec::with_capacity(counted.len());
        for (no, (id, tfs)) in counted.into_iter().enumerate() {
            let mut row = Vec::with_capacity(tfs.len());
            let mut len = 0u32;
            for (term, tf) in tfs {
                let tid = term_ids[&term];
                postings[tid as usize].push(Posting { doc: no as DocNo, tf });
                row.push((tid, tf));
                len += tf;
            }
            forward.push(row);
            docs.push(id);
            doc_lens.push(len);
        }
        Ok(Self::from_parts(analyzer, docs, doc_lens, vocab, postings, forward))
    }

    fn from_parts(
        analyzer: AnalyzerConfig,
        docs: Vec<DocId>,
        doc_lens: Vec<u32>,
        vocab: Vec<Term>,
        postings: Vec<Vec<Posting>>,
        forward: Vec<Vec<(u32, u32)>>,
    ) -> InvertedIndex {
        let doc_lookup = docs.iter().enumerate().map(|(i, d)| (d.clone(), i as DocNo)).collect();
        let term_ids = vocab.iter().enumerate().map(|(i, t)| (t.clone(), i as u32)).collect();
        let total_len = doc_lens.iter().map(|&l| u64::from(l)).sum();
        InvertedIndex {
            analyzer,
            docs,
            doc_lens,
            doc_lookup,
            vocab,
            term_ids,
            postings,
            forward,
            total_len,
        }
    }

    pub fn analyzer(&self) -> &AnalyzerConfig {
        &self.analyzer
    }

    pub fn n_docs(&self) -> usize {
        self.docs.len()
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    /// Sorted vocabulary.
    pub fn vocab(&self) -> &[Term] {
        &self.vocab
    }

    /// Document ids in ascending order; the position is the `DocNo`.
    pub fn doc_ids(&self) -> &[DocId] {
        &self.docs
    }

    pub fn doc_no(&self, d: &DocId) -> Option<DocNo> {
        self.doc_lookup.get(d).copied()
    }

    pub fn doc_len(&self, d: &DocId) -> Result<u32> {
        Ok(self.doc_lens[self.require_doc(d)? as usize])
    }

    pub fn avg_doc_len(&self) -> f64 {
        if self.docs.is_empty() {
            0.0
        } else {
            self.total_len as f64 / self.docs.len() as f64
        }
    }

    pub fn df(&self, t: &str) -> usize {
        self.postings(t).map_or(0, <[Posting]>::len)
    }

    pub fn postings(&self, t: &str) -> Option<&[Posting]> {
        self.term_ids.get(t).map(|&id| self.postings[id as usize].as_slice())
    }

    fn require_doc(&self, d: &DocId) -> Result<DocNo> {
        self.doc_no(d).ok_or_else(|| Error::UnknownDocument(d.to_string()))
    }

    /// Frequency of `t` in `d`; 0 when `t` does not occur there.
    pub fn term_freq(&self, t: &str, d: &DocId) -> Result<u32> {
        let no = self.require_doc(d)?;
        let Some(&tid) = self.term_ids.get(t) else {
            return Ok(0);
        };
        let row = &self.forward[no as usize];
        Ok(row.binary_search_by_key(&tid, |&(id, _)| id).map_or(0, |i| row[i].1))
    }

    /// Distinct terms of `d` with their frequencies, in term order.
    pub fn doc_terms(&self, d: &DocId) -> Result<Vec<(Term, u32)>> {
        let no = self.require_doc(d)?;
        Ok(self.forward[no as usize]
            .iter()
            .map(|&(tid, tf)| (self.vocab[tid as usize].clone(), tf))
            .collect())
    }

    /// BM25 top-k with the default parameters.
    pub fn search(&self, terms: &[Term], k: usize) -> Vec<ScoredHit> {
        self.search_with(&Bm25::default(), terms, k)
    }

    /// Ranks documents matching at least one term by BM25, descending, ties
    /// by ascending `DocId`. Repeated query terms count once.
    pub fn search_with(&self, bm25: &Bm25, terms: &[Term], k: usize) -> Vec<ScoredHit> {
        if k == 0 {
            return Vec::new();
        }
        let distinct: BTreeSet<&str> = terms.iter().map(Term::as_str).collect();
        let avgdl = self.avg_doc_len();
        let n = self.n_docs();

        let mut acc = vec![0.0f64; n];
        let mut hit = vec![false; n];
        let mut matched = Vec::new();
        for term in distinct {
            let Some(plist) = self.postings(term) else {
                continue;
            };
            let idf = bm25.idf(n, plist.len());
            for p in plist {
                let d = p.doc as usize;
                acc[d] += bm25.term_weight(idf, p.tf, self.doc_lens[d], avgdl);
                if !hit[d] {
                    hit[d] = true;
                    matched.push(p.doc);
                }
            }
        }

        let mut ranked: Vec<(f64, DocNo)> = matched.into_iter().map(|d| (acc[d as usize], d)).collect();
        let by_rank = |a: &(f64, DocNo), b: &(f64, DocNo)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        if ranked.len() > k {
            ranked.select_nth_unstable_by(k - 1, by_rank);
            ranked.truncate(k);
        }
        ranked.sort_unstable_by(by_rank);
        ranked
            .into_iter()
            .map(|(score, d)| ScoredHit {
                doc: self.docs[d as usize].clone(),
                score,
            })
            .collect()
    }

    /// Writes `manifest.json` and `postings.bin` into `dir`, creating it if
    /// needed. Returns the number of bytes written.
    pub fn save(&self, dir: &Path) -> Result<u64> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let postings = self.encode_postings();
        let manifest = Manifest {
            format: MANIFEST_FORMAT.to_owned(),
            version: MANIFEST_VERSION,
            n_docs: self.n_docs(),
            vocab_size: self.vocab_size(),
            total_terms: self.total_len,
            analyzer_fingerprint: self.analyzer.fingerprint(),
            analyzer: self.analyzer.clone(),
            postings_sha256: hex::encode(Sha256::digest(&postings)),
        };
        let mut json = serde_json::to_vec_pretty(&manifest)?;
        json.push(b'\n');

        let mpath = dir.join(MANIFEST_FILE);
        let ppath = dir.join(POSTINGS_FILE);
        std::fs::write(&ppath, &postings).map_err(|e| Error::io(&ppath, e))?;
        std::fs::write(&mpath, &json).map_err(|e| Error::io(&mpath, e))?;
        Ok((postings.len() + json.len()) as u64)
    }

    /// Loads an index saved with [`InvertedIndex::save`].
    pub fn load(dir: &Path) -> Result<InvertedIndex> {
        let mpath = dir.join(MANIFEST_FILE);
        let ppath = dir.join(POSTINGS_FILE);
        let mbytes = std::fs::read(&mpath).map_err(|e| Error::io(&mpath, e))?;
        let manifest: Manifest =
            serde_json::from_slice(&mbytes).map_err(|e| Error::Corrupt(format!("{}: {e}", mpath.display())))?;
        if manifest.format != MANIFEST_FORMAT || manifest.version != MANIFEST_VERSION {
            return Err(Error::Corrupt(format!(
                "unsupported index format {} v{}",
                manifest.format, manifest.version
            )));
        }
        if manifest.analyzer.fingerprint() != manifest.analyzer_fingerprint {
            return Err(Error::Corrupt("analyzer fingerprint does not match manifest".into()));
        }
        let bytes = std::fs::read(&ppath).map_err(|e| Error::io(&ppath, e))?;
        if hex::encode(Sha256::digest(&bytes)) != manifest.postings_sha256 {
            return Err(Error::Corrupt("postings checksum mismatch".into()));
        }
        let index = Self::decode_postings(&bytes, manifest.analyzer)?;
        if index.n_docs() != manifest.n_docs || index.vocab_size() != manifest.vocab_size {
            return Err(Error::Corrupt("manifest counts disagree with postings".into()));
        }
        Ok(index)
    }

    /// Loads an index and requires its recorded analyzer to equal `expected`.
    pub fn load_checked(dir: &Path, expected: &AnalyzerConfig) -> Result<InvertedIndex> {
        let index = Self::load(dir)?;
        if index.analyzer.fingerprint() != expected.fingerprint() {
            return Err(Error::AnalyzerMismatch);
        }
        Ok(index)
    }

    // Layout (little-endian): magic, n_docs, {id, len}*, n_terms,
    // {term, n_postings, {doc, tf}*}*. Strings are u32-length-prefixed UTF-8.
    fn encode_postings(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(POSTINGS_MAGIC);
        put_u32(&mut out, self.docs.len() as u32);
        for (id, &len) in self.docs.iter().zip(&self.doc_lens) {
            put_str(&mut out, id.as_str());
            put_u32(&mut out, len);
        }
        put_u32(&mut out, self.vocab.len() as u32);
        for (term, plist) in self.vocab.iter().zip(&self.postings) {
            put_str(&mut out, term);
            put_u32(&mut out, plist.len() as u32);
            for p in plist {
                put_u32(&mut out, p.doc);
                put_u32(&mut out, p.tf);
            }
        }
        out
    }

    fn decode_postings(bytes: &[u8], analyzer: AnalyzerConfig) -> Result<InvertedIndex> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if r.take(POSTINGS_MAGIC.len())? != POSTINGS_MAGIC {
            return Err(Error::Corrupt("bad postings magic".into()));
        }
        let n_docs = r.u32()? as usize;
        let mut docs = Vec::with_capacity(n_docs);
        let mut doc_lens = Vec::with_capacity(n_docs);
        for _ in 0..n_docs {
            docs.push(DocId(r.string()?));
            doc_lens.push(r.u32()?);
        }
        if docs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Corrupt("document ids not strictly ascending".into()));
        }
        let n_terms = r.u32()? as usize;
        let mut vocab = Vec::with_capacity(n_terms);
        let mut postings = Vec::with_capacity(n_terms);
        let mut forward = vec![Vec::new(); n_docs];
        for tid in 0..n_terms {
            let term = Term::new(r.string()?).ok_or_else(|| Error::Corrupt("invalid term".into()))?;
            let n = r.u32()? as usize;
            let mut plist = Vec::with_capacity(n);
            for _ in 0..n {
                let doc = r.u32()?;
                let tf = r.u32()?;
                if doc as usize >= n_docs || tf == 0 {
                    return Err(Error::Corrupt(format!("bad posting for {term}")));
                }
                forward[doc as usize].push((tid as u32, tf));
                plist.push(Posting { doc, tf });
            }
            vocab.push(term);
            postings.push(plist);
        }
        if r.pos != bytes.len() {
            return Err(Error::Corrupt("trailing bytes in postings".into()));
        }
        Ok(Self::from_parts(analyzer, docs, doc_lens, vocab, postings, forward))
    }
}

fn term_counts(text: &str, analyzer: &AnalyzerConfig) -> BTreeMap<Term, u32> {
    let mut tfs = BTreeMap::new();
    for t in analyze(text, analyzer) {
        *tfs.entry(t).or_insert(0) += 1;
    }
    tfs
}

const MANIFEST_FILE: &str = "manifest.json";
const POSTINGS_FILE: &str = "postings.bin";
const MANIFEST_FORMAT: &str = "qreform-index";
const MANIFEST_VERSION: u32 = 1;
const POSTINGS_MAGIC: &[u8; 4] = b"QRFP";

#[derive(Serialize, Deserialize)]
struct Manifest {
    format: String,
    version: u32,
    n_docs: usize,
    vocab_size: usize,
    total_terms: u64,
    analyzer_fingerprint: String,
    analyzer: AnalyzerConfig,
    postings_sha256: String,
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_str(out: &mut Vec<u8>, s: &str) {
    put_u32(out, s.len() as u32);
    out.extend_from_slice(s.as_bytes());
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::Corrupt("truncated postings".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn string(&mut self) -> Result<String> {
        let n = self.u32()? as usize;
        let b = self.take(n)?;
        String::from_utf8(b.to_vec()).map_err(|_| Error::Corrupt("invalid UTF-8 in postings".into()))
    }
}

/// Indexes every `.txt` file below `corpus_dir`, one document per file.
///
/// Files that are not valid UTF-8 are skipped with a warning. Any other I/O
/// failure is fatal.
pub fn build_index(corpus_dir: &Path, analyzer: &AnalyzerConfig) -> Result<InvertedIndex> {
    let files = collect_corpus_files(corpus_dir)?;
    let counted: Vec<Option<(DocId, BTreeMap<Term, u32>)>> = files
        .par_iter()
        .map(|(id, path)| -> Result<_> {
            let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
            match String::from_utf8(bytes) {
                Ok(text) => Ok(Some((id.clone(), term_counts(&text, analyzer)))),
                Err(_) => {
                    warn!("skipping {}: not valid UTF-8", path.display());
                    Ok(None)
                }
            }
        })
        .collect::<Result<_>>()?;
    let counted: Vec<_> = counted.into_iter().flatten().collect();
    if counted.is_empty() {
        return Err(Error::NoDocuments(corpus_dir.to_path_buf()));
    }
    InvertedIndex::assemble(counted, analyzer.clone())
}

fn collect_corpus_files(corpus_dir: &Path) -> Result<Vec<(DocId, PathBuf)>> {
    let meta = std::fs::metadata(corpus_dir).map_err(|e| Error::io(corpus_dir, e))?;
    if !meta.is_dir() {
        return Err(Error::io(
            corpus_dir,
            std::io::Error::new(std::io::ErrorKind::NotADirectory, "not a directory"),
        ));
    }
    let mut files = Vec::new();
    for entry in walkdir::WalkDir::new(corpus_dir).follow_links(true) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(corpus_dir).to_path_buf();
            let io = e
                .into_io_error()
                .unwrap_or_else(|| std::io::Error::other("directory walk failed"));
            Error::io(path, io)
        })?;
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().and_then(|e| e.to_str()) != Some("txt") {
            continue;
        }
        let rel = path
            .strip_prefix(corpus_dir)
            .expect("walkdir yields paths under its root")
            .with_extension("");
        let id: Vec<String> = rel
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect();
        files.push((DocId(id.join("/")), path.to_path_buf()));
    }
    files.sort();
    Ok(files)
}
