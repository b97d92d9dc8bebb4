//! Synset thesaurus loaded from a tab-separated file.
//!
//! Format, one synset per line:
//!
//! ```text
//! synset_id<TAB>pos<TAB>member1,member2,...
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Members may be
//! multiword; each word is normalized with the index analyzer.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::text::{analyze, AnalyzerConfig, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    Adverb,
    Unknown,
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "noun" => Ok(Pos::Noun),
            "verb" => Ok(Pos::Verb),
            "adjective" => Ok(Pos::Adjective),
            "adverb" => Ok(Pos::Adverb),
            "unknown" => Ok(Pos::Unknown),
            other => Err(format!("unknown part of speech {other:?}")),
        }
    }
}

/// A synset member: one or more normalized terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Phrase(Vec<Term>);

impl Phrase {
    pub fn new(terms: Vec<Term>) -> Option<Phrase> {
        if terms.is_empty() {
            None
        } else {
            Some(Phrase(terms))
        }
    }

    pub fn single(t: Term) -> Phrase {
        Phrase(vec![t])
    }

    pub fn terms(&self) -> &[Term] {
        &self.0
    }

    pub fn is_multiword(&self) -> bool {
        self.0.len() > 1
    }
}

impl fmt::Display for Phrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(t)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: String,
    pub pos: Pos,
    pub members: BTreeSet<Phrase>,
}

#[derive(Debug, Clone, Default)]
pub struct Thesaurus {
    synsets: Vec<Synset>,
    by_member: HashMap<Phrase, Vec<usize>>,
}

impl Thesaurus {
    pub fn new(synsets: Vec<Synset>) -> Thesaurus {
        let mut by_member: HashMap<Phrase, Vec<usize>> = HashMap::new();
        for (i, s) in synsets.iter().enumerate() {
            for m in &s.members {
                by_member.entry(m.clone()).or_default().push(i);
            }
        }
        Thesaurus { synsets, by_member }
    }

    pub fn load(path: &Path, cfg: &AnalyzerConfig) -> Result<Thesaurus> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, cfg, path)
    }

    /// Parses thesaurus text; `origin` is only used in error messages.
    pub fn parse(text: &str, cfg: &AnalyzerConfig, origin: &Path) -> Result<Thesaurus> {
        let mut synsets = Vec::new();
        let mut seen = HashSet::new();
        for (i, raw) in text.split('\n').enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [id, pos, members] = fields[..] else {
                return Err(Error::parse(
                    origin,
                    line_no,
                    format!("expected 3 tab-separated fields, found {}", fields.len()),
                ));
            };
            let id = id.trim();
            if id.is_empty() {
                return Err(Error::parse(origin, line_no, "empty synset id"));
            }
            let pos: Pos = pos.trim().parse().map_err(|m| Error::parse(origin, line_no, m))?;
            if !seen.insert(id.to_owned()) {
                return Err(Error::DuplicateSynset {
                    id: id.to_owned(),
                    line: line_no,
                });
            }
            let members: BTreeSet<Phrase> = members
                .split(',')
                .filter_map(|m| Phrase::new(analyze(m, cfg)))
                .collect();
            if members.is_empty() {
                warn!("synset {id} (line {line_no}) has no members after normalization; dropped");
                continue;
            }
            synsets.push(Synset {
                id: id.to_owned(),
                pos,
                members,
            });
        }
        Ok(Thesaurus::new(synsets))
    }

    pub fn synsets(&self) -> &[Synset] {
        &self.synsets
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    /// Synsets that contain `t` as a single-word member.
    pub fn synsets_of(&self, t: &Term) -> impl Iterator<Item = &Synset> {
        self.by_member
            .get(&Phrase::single(t.clone()))
            .into_iter()
            .flatten()
            .map(|&i| &self.synsets[i])
    }

    /// Union of the members of every synset containing `t`, minus `t`.
    /// All senses contribute; part of speech is ignored.
    pub fn synonyms(&self, t: &Term) -> BTreeSet<Phrase> {
        let me = Phrase::single(t.clone());
        self.synsets_of(t)
            .flat_map(|s| s.members.iter())
            .filter(|m| **m != me)
            .cloned()
            .collect()
    }
}
