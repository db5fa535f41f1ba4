use std::collections::BTreeSet;
use std::path::Path;

use sessiontiling_core::corpus::{Role, Session, Utterance};

use super::{numbered_lines, read_text, write_text};
use crate::{Error, FormatError, Result};

const BOUNDARY: &str = "====";

fn split_prefix(line: &str) -> (Option<Role>, &str) {
    if let Some(rest) = line.strip_prefix("Q:") {
        (Some(Role::Query), rest.trim_start())
    } else if let Some(rest) = line.strip_prefix("R:") {
        (Some(Role::Reply), rest.trim_start())
    } else {
        (None, line)
    }
}

#[derive(Default)]
struct Builder {
    utterances: Vec<Utterance>,
    boundaries: BTreeSet<usize>,
    next_role: Option<Role>,
    pending_boundary: Option<usize>,
}

impl Builder {
    fn finish(&mut self, out: &mut Vec<Session>) -> Result<(), FormatError> {
        if let Some(line) = self.pending_boundary {
            return Err(FormatError::BoundaryAtEdge { line });
        }
        if !self.utterances.is_empty() {
            let utterances = std::mem::take(&mut self.utterances);
            let boundaries = std::mem::take(&mut self.boundaries);
            out.push(Session::new(utterances, boundaries).expect("builder keeps sessions valid"));
        }
        self.next_role = None;
        Ok(())
    }
}

/// Parses the session file format.
///
/// Roles alternate starting with a query; a `Q:` or `R:` prefix sets the
/// role of its line (and alternation continues from there).
pub fn parse_sessions(text: &str) -> Result<Vec<Session>, FormatError> {
    let mut sessions = Vec::new();
    let mut b = Builder::default();
    for (line_no, line) in numbered_lines(text) {
        if line.trim().is_empty() {
            b.finish(&mut sessions)?;
        } else if line.trim() == BOUNDARY {
            if b.utterances.is_empty() {
                return Err(FormatError::BoundaryAtEdge { line: line_no });
            }
            b.pending_boundary = Some(line_no);
        } else {
            if b.pending_boundary.take().is_some() {
                b.boundaries.insert(b.utterances.len() - 1);
            }
            let (prefix, raw) = split_prefix(line);
            let role = prefix.or(b.next_role).unwrap_or(Role::Query);
            b.next_role = Some(role.other());
            b.utterances
                .push(Utterance::new(b.utterances.len(), role, raw));
        }
    }
    b.finish(&mut sessions)?;
    Ok(sessions)
}

fn needs_prefix(raw: &str) -> bool {
    raw.trim().is_empty()
        || raw.trim() == BOUNDARY
        || raw.starts_with("Q:")
        || raw.starts_with("R:")
        || raw.starts_with(char::is_whitespace)
}

/// Writes sessions in the format [`parse_sessions`] reads. A role prefix is
/// written only where alternation would guess wrong or the text would be
/// misread without one.
pub fn serialize_sessions(sessions: &[Session]) -> String {
    let mut out = String::new();
    for s in sessions {
        let mut expected = Role::Query;
        for u in s.utterances() {
            let raw = u.raw.replace(['\n', '\r'], " ");
            if u.role != expected || needs_prefix(&raw) {
                out.push_str(match u.role {
                    Role::Query => "Q: ",
                    Role::Reply => "R: ",
                });
            }
            out.push_str(&raw);
            out.push('\n');
            if s.gold_boundaries().contains(&u.index) {
                out.push_str(BOUNDARY);
                out.push('\n');
            }
            expected = u.role.other();
        }
        out.push('\n');
    }
    out
}

pub fn load_sessions(path: &Path) -> Result<Vec<Session>> {
    parse_sessions(&read_text(path)?).map_err(|e| Error::format(path, e))
}

pub fn save_sessions(path: &Path, sessions: &[Session]) -> Result<()> {
    write_text(path, &serialize_sessions(sessions))
}
