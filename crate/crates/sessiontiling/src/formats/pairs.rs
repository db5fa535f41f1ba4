use std::path::Path;

use sessiontiling_core::corpus::{tokenize, PairCorpus};

use super::{numbered_lines, read_text};
use crate::{Error, FormatError, Result};

/// One `query<TAB>reply` pair per non-blank line.
pub fn parse_pair_corpus(text: &str) -> Result<PairCorpus, FormatError> {
    let mut corpus = PairCorpus::new();
    for (line_no, line) in numbered_lines(text) {
        if line.trim().is_empty() {
            continue;
        }
        let (q, r) = line
            .split_once('\t')
            .ok_or(FormatError::MalformedLine(line_no))?;
        let (q, r) = (tokenize(q), tokenize(r));
        if q.is_empty() || r.is_empty() {
            return Err(FormatError::MalformedLine(line_no));
        }
        corpus.push(q, r);
    }
    Ok(corpus)
}

pub fn load_pair_corpus(path: &Path) -> Result<PairCorpus> {
    parse_pair_corpus(&read_text(path)?).map_err(|e| Error::format(path, e))
}
