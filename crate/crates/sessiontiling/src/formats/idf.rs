use std::fmt::Write as _;
use std::path::Path;

use sessiontiling_core::similarity::IdfStats;

use super::{numbered_lines, read_text, write_text};
use crate::{Error, FormatError, Result};

/// Document count on the first line, then one `word<TAB>df` line per word.
pub fn write_idf(stats: &IdfStats) -> String {
    let mut out = format!("{}\n", stats.documents());
    for (word, df) in stats.frequencies() {
        writeln!(out, "{word}\t{df}").expect("writing to a String");
    }
    out
}

pub fn parse_idf(text: &str) -> Result<IdfStats, FormatError> {
    let mut lines = numbered_lines(text).filter(|(_, l)| !l.trim().is_empty());
    let (first, header) = lines
        .next()
        .ok_or_else(|| FormatError::parse(1, "missing document count"))?;
    let documents: u64 = header
        .trim()
        .parse()
        .map_err(|_| FormatError::parse(first, "first line must be the document count"))?;
    let mut df = Vec::new();
    for (line_no, line) in lines {
        let (word, count) = line
            .split_once('\t')
            .ok_or_else(|| FormatError::parse(line_no, "expected `word<TAB>df`"))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| FormatError::parse(line_no, format!("`{count}` is not a count")))?;
        if word.is_empty() || count > documents {
            return Err(FormatError::parse(
                line_no,
                "empty word or df above the document count",
            ));
        }
        df.push((word.to_owned(), count));
    }
    IdfStats::from_frequencies(documents, df).map_err(|e| FormatError::parse(first, e.to_string()))
}

pub fn save_idf(path: &Path, stats: &IdfStats) -> Result<()> {
    write_text(path, &write_idf(stats))
}

pub fn load_idf(path: &Path) -> Result<IdfStats> {
    parse_idf(&read_text(path)?).map_err(|e| Error::format(path, e))
}
