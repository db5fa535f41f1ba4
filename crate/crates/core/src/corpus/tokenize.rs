use alloc::string::String;
use alloc::vec::Vec;

/// Splits raw text into tokens.
///
/// Text is split on Unicode whitespace. Within each chunk, a leading and a
/// trailing run of punctuation each become one token, Latin letters are
/// lowercased, and every CJK codepoint becomes a token of its own. Already
/// word-segmented input (words separated by spaces) passes through intact.
pub fn tokenize(raw: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in raw.split(char::is_whitespace).filter(|c| !c.is_empty()) {
        tokenize_chunk(chunk, &mut tokens);
    }
    tokens
}

fn tokenize_chunk(chunk: &str, out: &mut Vec<String>) {
    let lead_end = chunk
        .char_indices()
        .find(|&(_, c)| !is_punctuation(c))
        .map_or(chunk.len(), |(i, _)| i);
    if lead_end == chunk.len() {
        out.push(String::from(chunk));
        return;
    }
    let trail_start = chunk
        .char_indices()
        .rev()
        .find(|&(_, c)| !is_punctuation(c))
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(lead_end);

    if lead_end > 0 {
        out.push(String::from(&chunk[..lead_end]));
    }
    let mut word = String::new();
    for c in chunk[lead_end..trail_start].chars() {
        if is_cjk(c) {
            if !word.is_empty() {
                out.push(core::mem::take(&mut word));
            }
            out.push(String::from(c));
        } else if is_latin(c) {
            word.extend(c.to_lowercase());
        } else {
            word.push(c);
        }
    }
    if !word.is_empty() {
        out.push(word);
    }
    if trail_start < chunk.len() {
        out.push(String::from(&chunk[trail_start..]));
    }
}

fn is_punctuation(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(c,
            '\u{00A1}' | '\u{00A7}' | '\u{00AB}' | '\u{00B6}' | '\u{00B7}' | '\u{00BB}' | '\u{00BF}'
            | '\u{2010}'..='\u{2027}'
            | '\u{2030}'..='\u{205E}'
            | '\u{3001}'..='\u{3003}'
            | '\u{3008}'..='\u{3011}'
            | '\u{3014}'..='\u{301F}'
            | '\u{30FB}'
            | '\u{FE10}'..='\u{FE19}'
            | '\u{FE30}'..='\u{FE4F}'
            | '\u{FF01}'..='\u{FF0F}'
            | '\u{FF1A}'..='\u{FF20}'
            | '\u{FF3B}'..='\u{FF40}'
            | '\u{FF5B}'..='\u{FF65}')
}

fn is_cjk(c: char) -> bool {
    matches!(c,
        '\u{3040}'..='\u{309F}'     // hiragana
        | '\u{30A0}'..='\u{30FA}'   // katakana
        | '\u{30FC}'..='\u{30FF}'
        | '\u{3400}'..='\u{4DBF}'   // CJK extension A
        | '\u{4E00}'..='\u{9FFF}'   // CJK unified ideographs
        | '\u{F900}'..='\u{FAFF}'   // compatibility ideographs
        | '\u{20000}'..='\u{3134F}')
}

fn is_latin(c: char) -> bool {
    matches!(c, 'A'..='Z' | 'a'..='z' | '\u{00C0}'..='\u{024F}' | '\u{1E00}'..='\u{1EFF}')
}
