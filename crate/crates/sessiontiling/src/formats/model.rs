use std::fmt::Write as _;
use std::path::Path;

use sessiontiling_core::embeddings::{EmbeddingModel, WordVectors};

use super::{numbered_lines, read_text, write_text};
use crate::{Error, FormatError, Result};

/// Formats like C's `%g`: six significant digits, trailing zeros dropped.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        trim_zeros(&format!("{x:.*}", (5 - exp) as usize)).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_vectors(vectors: &WordVectors) -> String {
    let mut out = format!("{} {}\n", vectors.len(), vectors.dim());
    for (id, word) in vectors.words().iter().enumerate() {
        out.push_str(word);
        for &v in vectors.row(id as u32) {
            write!(out, " {}", format_sig6(v)).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// Reads the text model format. Only input vectors are stored, so the
/// result is a [`WordVectors`] table rather than a trainable model.
pub fn read_vectors(text: &str) -> Result<WordVectors, FormatError> {
    let mut lines = numbered_lines(text).filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| FormatError::parse(1, "missing `V dim` header"))?;
    let header_line = numbered_lines(text)
        .find(|(_, l)| !l.trim().is_empty())
        .map_or(1, |(n, _)| n);
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (count, dim) = match fields.as_slice() {
        [v, d] => match (v.parse::<usize>(), d.parse::<usize>()) {
            (Ok(v), Ok(d)) if d > 0 => (v, d),
            _ => {
                return Err(FormatError::parse(
                    header_line,
                    "header must be `V dim` with dim > 0",
                ))
            }
        },
        _ => return Err(FormatError::parse(header_line, "header must be `V dim`")),
    };
    let mut words = Vec::with_capacity(count);
    let mut data = Vec::with_capacity(count * dim);
    let mut last_line = header_line;
    for _ in 0..count {
        let (line_no, line) = lines.next().ok_or_else(|| {
            FormatError::parse(last_line + 1, format!("expected {count} word lines"))
        })?;
        last_line = line_no;
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-blank line");
        let before = data.len();
        for f in fields {
            let v: f64 = f
                .parse()
                .map_err(|_| FormatError::parse(line_no, format!("`{f}` is not a number")))?;
            if !v.is_finite() {
                return Err(FormatError::parse(line_no, format!("`{f}` is not finite")));
            }
            data.push(v);
        }
        if data.len() - before != dim {
            return Err(FormatError::parse(
                line_no,
                format!("expected {dim} values, found {}", data.len() - before),
            ));
        }
        if words.iter().any(|w| w == word) {
            return Err(FormatError::parse(
                line_no,
                format!("duplicate word `{word}`"),
            ));
        }
        words.push(word.to_owned());
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(FormatError::parse(
            line_no,
            format!("more than {count} word lines"),
        ));
    }
    WordVectors::new(words, dim, data).map_err(|e| FormatError::parse(header_line, e.to_string()))
}

pub fn save_vectors(path: &Path, vectors: &WordVectors) -> Result<()> {
    write_text(path, &write_vectors(vectors))
}

/// Saves the input vectors of `model`.
pub fn save_model(path: &Path, model: &EmbeddingModel) -> Result<()> {
    save_vectors(path, &model.word_vectors())
}

pub fn load_model(path: &Path) -> Result<WordVectors> {
    read_vectors(&read_text(path)?).map_err(|e| Error::format(path, e))
}
