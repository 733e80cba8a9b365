//! Chat log ingestion.
//!
//! Lines follow the archived IRC layout used by the Ubuntu channel logs:
//!
//! ```text
//! [08:43] <mdz> lifeless: ok, it sounds like you're agreeing with me, then
//! [08:45] * dave waves
//! [08:46] === alice [~alice@host] has joined #ubuntu-beginners
//! ```
//!
//! Anything that does not fit one of these shapes is skipped and counted,
//! never treated as fatal.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Wall-clock time of a log line. Seconds are kept only when the source
/// line carried them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LogTime {
    pub hour: u8,
    pub minute: u8,
    pub second: Option<u8>,
}

impl LogTime {
    pub fn new(hour: u8, minute: u8) -> Self {
        LogTime {
            hour,
            minute,
            second: None,
        }
    }

    /// Parses `HH:MM` or `HH:MM:SS`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = s.split(':');
        let hour = two_digits(parts.next()?)?;
        let minute = two_digits(parts.next()?)?;
        let second = match parts.next() {
            Some(p) => Some(two_digits(p)?),
            None => None,
        };
        if parts.next().is_some() || hour > 23 || minute > 59 || second.is_some_and(|s| s > 59) {
            return None;
        }
        Some(LogTime {
            hour,
            minute,
            second,
        })
    }
}

fn two_digits(s: &str) -> Option<u8> {
    let b = s.as_bytes();
    if b.len() != 2 || !b.iter().all(u8::is_ascii_digit) {
        return None;
    }
    Some((b[0] - b'0') * 10 + (b[1] - b'0'))
}

impl fmt::Display for LogTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.hour, self.minute)?;
        if let Some(s) = self.second {
            write!(f, ":{s:02}")?;
        }
        Ok(())
    }
}

impl Serialize for LogTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LogTime {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        LogTime::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad time {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    UserMessage,
    Action,
    System,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub date: NaiveDate,
    pub time: LogTime,
    pub nick: String,
    pub body: String,
    pub kind: MessageKind,
}

impl ChatMessage {
    /// True for lines a person typed (messages and `/me` actions).
    pub fn is_authored(&self) -> bool {
        matches!(self.kind, MessageKind::UserMessage | MessageKind::Action)
    }
}

/// Canonical form of a nickname: Unicode lowercase.
pub fn fold_nick(nick: &str) -> String {
    nick.to_lowercase()
}

fn valid_nick(nick: &str) -> bool {
    !nick.is_empty() && !nick.chars().any(|c| c.is_whitespace() || c == '<' || c == '>')
}

const SYSTEM_MARKERS: [&str; 6] = ["===", "***", "-!-", "-->", "<--", "--"];

const SYSTEM_PHRASES: [&str; 7] = [
    "has joined",
    "has left",
    "has quit",
    "has parted",
    "is now known as",
    "changed the topic",
    "topic",
];

/// Parses one physical log line. `None` is the skip marker.
pub fn parse_line(line: &str, date: NaiveDate) -> Option<ChatMessage> {
    let line = line.trim_end_matches(['\r', '\n']);
    let rest = line.strip_prefix('[')?;
    let close = rest.find(']')?;
    let time = LogTime::parse(&rest[..close])?;
    let rest = rest[close + 1..].trim_start_matches(' ');

    let message = |nick: &str, body: &str, kind| ChatMessage {
        date,
        time,
        nick: nick.to_string(),
        body: body.to_string(),
        kind,
    };

    for marker in SYSTEM_MARKERS {
        if let Some(notice) = rest.strip_prefix(marker).and_then(|r| r.strip_prefix(' ')) {
            let notice = notice.trim();
            if !SYSTEM_PHRASES.iter().any(|p| notice.contains(p)) {
                return None;
            }
            let nick = notice.split_whitespace().next()?;
            return valid_nick(nick).then(|| message(nick, notice, MessageKind::System));
        }
    }

    if let Some(tagged) = rest.strip_prefix('<') {
        let close = tagged.find('>')?;
        let nick = tagged[..close].trim_start_matches(['@', '+']);
        if !valid_nick(nick) {
            return None;
        }
        let body = &tagged[close + 1..];
        let body = body.strip_prefix(' ').unwrap_or(body);
        return Some(message(nick, body, MessageKind::UserMessage));
    }

    if let Some(action) = rest.strip_prefix("* ") {
        let (nick, body) = action.split_once(' ').unwrap_or((action, ""));
        return valid_nick(nick).then(|| message(nick, body, MessageKind::Action));
    }

    None
}

/// One input log file and the day it covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    pub path: PathBuf,
    pub date: NaiveDate,
}

impl SourceFile {
    pub fn new(path: impl Into<PathBuf>, date: NaiveDate) -> Self {
        SourceFile {
            path: path.into(),
            date,
        }
    }
}

/// Messages parsed from one chunk of text plus its line accounting.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedText {
    pub messages: Vec<ChatMessage>,
    pub total_lines: usize,
    pub skipped_lines: usize,
}

pub fn parse_text(text: &str, date: NaiveDate) -> ParsedText {
    let mut out = ParsedText::default();
    for line in text.lines() {
        out.total_lines += 1;
        match parse_line(line, date) {
            Some(m) => out.messages.push(m),
            None => out.skipped_lines += 1,
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChatCorpus {
    pub messages: Vec<ChatMessage>,
    pub source_files: Vec<SourceFile>,
    pub message_count: usize,
    /// Physical lines read, including skipped ones.
    pub total_lines: usize,
    /// Lines that matched no grammar.
    pub skipped_lines: usize,
}

impl ChatCorpus {
    pub fn from_parts(source_files: Vec<SourceFile>, parts: Vec<ParsedText>) -> Self {
        let mut corpus = ChatCorpus {
            messages: Vec::new(),
            source_files,
            message_count: 0,
            total_lines: 0,
            skipped_lines: 0,
        };
        for p in parts {
            corpus.total_lines += p.total_lines;
            corpus.skipped_lines += p.skipped_lines;
            corpus.messages.extend(p.messages);
        }
        corpus.message_count = corpus.messages.len();
        corpus
    }

    pub fn user_messages(&self) -> impl Iterator<Item = &ChatMessage> {
        self.messages
            .iter()
            .filter(|m| m.kind == MessageKind::UserMessage)
    }
}

/// Parses every file (concurrently) and concatenates the results in the
/// declared order.
pub fn parse_corpus(files: &[SourceFile]) -> Result<ChatCorpus> {
    if files.is_empty() {
        return Err(Error::EmptyInput);
    }
    for pair in files.windows(2) {
        if pair[0].date >= pair[1].date {
            return Err(Error::UnorderedInput(format!(
                "{} ({}) is followed by {} ({})",
                pair[0].path.display(),
                pair[0].date,
                pair[1].path.display(),
                pair[1].date
            )));
        }
    }
    let parts = files
        .par_iter()
        .map(|f| {
            let bytes = std::fs::read(&f.path).map_err(|source| Error::Read {
                path: f.path.clone(),
                source,
            })?;
            Ok(parse_text(&String::from_utf8_lossy(&bytes), f.date))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChatCorpus::from_parts(files.to_vec(), parts))
}

/// Reads the date out of a `YYYY-MM-DD.txt` file name.
pub fn date_from_file_name(path: &Path) -> Result<NaiveDate> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .filter(|_| path.extension().is_some_and(|e| e == "txt"))
        .and_then(|s| NaiveDate::parse_from_str(s, "%Y-%m-%d").ok())
        .ok_or_else(|| Error::UndatedFile(path.to_path_buf()))
}

/// Expands directories into their dated `*.txt` logs and sorts everything
/// by date.
pub fn discover_inputs(paths: &[PathBuf]) -> Result<Vec<SourceFile>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let entries = std::fs::read_dir(path).map_err(|source| Error::Read {
                path: path.clone(),
                source,
            })?;
            for entry in entries {
                let p = entry?.path();
                if let Ok(date) = date_from_file_name(&p) {
                    files.push(SourceFile::new(p, date));
                }
            }
        } else {
            files.push(SourceFile::new(path.clone(), date_from_file_name(path)?));
        }
    }
    files.sort_by(|a, b| a.date.cmp(&b.date).then_with(|| a.path.cmp(&b.path)));
    Ok(files)
}

/// Reads a manifest of `YYYY-MM-DD path` lines. Relative paths resolve
/// against the manifest's directory; `#` starts a comment.
pub fn read_manifest(path: &Path) -> Result<Vec<SourceFile>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut files = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (date, file) = line.split_once(char::is_whitespace).ok_or(Error::Format {
            what: "manifest",
            line: i + 1,
            message: "expected `YYYY-MM-DD path`".into(),
        })?;
        let date = NaiveDate::parse_from_str(date, "%Y-%m-%d").map_err(|e| Error::Format {
            what: "manifest",
            line: i + 1,
            message: e.to_string(),
        })?;
        files.push(SourceFile::new(base.join(file.trim()), date));
    }
    Ok(files)
}

/// Writes the corpus as newline-delimited JSON, one message per line.
pub fn write_ndjson<W: Write>(corpus: &ChatCorpus, mut w: W) -> Result<()> {
    for m in &corpus.messages {
        serde_json::to_writer(&mut w, m)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a corpus written by [`write_ndjson`]. `origin` is recorded as the
/// source path for every date found.
pub fn read_ndjson<R: BufRead>(r: R, origin: &Path) -> Result<ChatCorpus> {
    let mut messages: Vec<ChatMessage> = Vec::new();
    let mut total = 0;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        total += 1;
        if line.trim().is_empty() {
            continue;
        }
        messages.push(serde_json::from_str(&line).map_err(|e| Error::Format {
            what: "corpus",
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    let mut source_files: Vec<SourceFile> = Vec::new();
    for m in &messages {
        if source_files.last().map(|s| s.date) != Some(m.date) {
            source_files.push(SourceFile::new(origin, m.date));
        }
    }
    source_files.dedup_by_key(|s| s.date);
    let message_count = messages.len();
    Ok(ChatCorpus {
        messages,
        source_files,
        message_count,
        total_lines: total,
        skipped_lines: total - message_count,
    })
}

/// Canonical participants and how many lines each authored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roster {
    counts: BTreeMap<String, usize>,
}

impl Roster {
    /// A roster from a known participant list, with zero message counts.
    pub fn from_prior_list<I, S>(nicks: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Roster {
            counts: nicks
                .into_iter()
                .filter(|n| valid_nick(n.as_ref()))
                .map(|n| (fold_nick(n.as_ref()), 0))
                .collect(),
        }
    }

    /// Adds every nick of `other`, summing counts.
    pub fn merge(&mut self, other: &Roster) {
        for (nick, count) in &other.counts {
            *self.counts.entry(nick.clone()).or_default() += count;
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, nick: &str) -> bool {
        self.counts.contains_key(&fold_nick(nick))
    }

    pub fn count(&self, nick: &str) -> usize {
        self.counts.get(&fold_nick(nick)).copied().unwrap_or(0)
    }

    /// Canonical nicks in sorted order.
    pub fn nicks(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn counts(&self) -> &BTreeMap<String, usize> {
        &self.counts
    }
}

pub fn build_roster(corpus: &ChatCorpus) -> Roster {
    let mut counts = BTreeMap::new();
    for m in corpus.messages.iter().filter(|m| m.is_authored()) {
        *counts.entry(fold_nick(&m.nick)).or_default() += 1;
    }
    Roster { counts }
}
