//! Text formats: automaton files, composition expressions, input words and
//! DOT export.

mod dot;
mod expr;
mod format;

use std::collections::BTreeSet;
use std::fmt;

pub use dot::{render_dot, render_dot_labeled};
pub use expr::{parse_expression, render_expression};
pub use format::{parse_automaton, render_automaton};

use crate::automaton::{Letter, Word, EPSILON_TOKEN};
use crate::error::{Error, Result};

/// A located parse error. `line` and `column` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub code: &'static str,
    pub message: String,
}

impl ParseDiagnostic {
    pub(crate) fn new(line: usize, column: usize, code: &'static str, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            column,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.code, self.message)
    }
}

fn single_char_letters<'a>(mut letters: impl Iterator<Item = &'a Letter>) -> bool {
    letters.all(|l| l.as_str().chars().count() == 1)
}

/// Reads an input word. `eps` alone is the empty word; text with commas is
/// split on them; otherwise a single-character alphabet splits the text
/// into characters, and a wider one takes it as a single letter.
pub fn parse_word(text: &str, alphabet: &BTreeSet<Letter>) -> Result<Word> {
    let text = text.trim();
    if text == EPSILON_TOKEN || text.is_empty() {
        return Ok(Vec::new());
    }
    if text.contains(',') {
        return text.split(',').map(|t| Letter::new(t.trim())).collect();
    }
    if single_char_letters(alphabet.iter()) {
        Letter::chars(text)
    } else {
        Ok(vec![Letter::new(text).map_err(|_| Error::InvalidLetter(text.to_string()))?])
    }
}

/// Inverse of [`parse_word`] for words over `alphabet`.
pub fn render_word(word: &[Letter], alphabet: &BTreeSet<Letter>) -> String {
    if word.is_empty() {
        return EPSILON_TOKEN.to_string();
    }
    let separator = if single_char_letters(alphabet.iter().chain(word)) {
        ""
    } else {
        ","
    };
    word.iter()
        .map(Letter::as_str)
        .collect::<Vec<_>>()
        .join(separator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alphabet(letters: &[&str]) -> BTreeSet<Letter> {
        letters.iter().map(|l| Letter::new(*l).unwrap()).collect()
    }

    #[test]
    fn words_over_single_character_alphabets() {
        let ab = alphabet(&["a", "b"]);
        let w = parse_word("aabaaaab", &ab).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(render_word(&w, &ab), "aabaaaab");
        assert_eq!(parse_word("eps", &ab).unwrap(), Vec::<Letter>::new());
        assert_eq!(render_word(&[], &ab), "eps");
    }

    #[test]
    fn words_over_wide_alphabets() {
        let wide = alphabet(&["go", "stop"]);
        let w = parse_word("go,stop,go", &wide).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(render_word(&w, &wide), "go,stop,go");
        assert_eq!(parse_word("stop", &wide).unwrap().len(), 1);
        assert!(parse_word("go,,stop", &wide).is_err());
    }
}
