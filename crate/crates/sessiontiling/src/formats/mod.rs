//! Text file formats.
//!
//! * pair corpus: `query<TAB>reply` per line.
//! * sessions: one utterance per line, `====` for a boundary, a blank line
//!   between sessions, optional `Q:`/`R:` role prefixes.
//! * model: header `V dim`, then `word v1 … v_dim` per line.
//! * idf: document count on the first line, then `word<TAB>df`.
//! * profile dump: `gap_index<TAB>similarity<TAB>depth<TAB>boundary` rows.
//!
//! Every reader takes `&str`/`BufRead` and reports 1-based line numbers; the
//! `*_file` helpers attach the path.

mod idf;
mod model;
mod pairs;
mod profile;
mod sessions;

use std::fs;
use std::path::Path;

use crate::{Error, Result};

pub use idf::{load_idf, parse_idf, save_idf, write_idf};
pub use model::{format_sig6, load_model, read_vectors, save_model, save_vectors, write_vectors};
pub use pairs::{load_pair_corpus, parse_pair_corpus};
pub use profile::{write_profile, ProfileRow};
pub use sessions::{load_sessions, parse_sessions, save_sessions, serialize_sessions};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Lines with their 1-based numbers, `\r` stripped.
pub(crate) fn numbered_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}
