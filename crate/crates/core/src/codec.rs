//! Text formats for trees and the canonical-string isomorphism oracle.
//!
//! Two line formats are supported:
//! * parens: `tree := "(" tree* ")"`, e.g. `(()(()))`; nodes are numbered in
//!   preorder of the string.
//! * parents: whitespace-separated integers where entry `i` is the parent of
//!   node `i` and the root is `-1`, e.g. `-1 0 0`.
//!
//! [`parse_tree`] picks the format from the first non-space character.

use thiserror::Error;

use crate::tree::{NodeId, Tree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("empty input")]
    EmptyInput,
    #[error("unbalanced parentheses at byte {position}")]
    UnbalancedParens { position: usize },
    #[error("unexpected input after the tree at byte {position}")]
    TrailingGarbage { position: usize },
    #[error("unexpected character {found:?} at byte {position}")]
    InvalidCharacter { position: usize, found: char },
    #[error("cannot parse parent entry {token:?}: {reason}")]
    ParseError { token: String, reason: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Parses a balanced-parenthesis string. Surrounding whitespace is ignored.
pub fn parse_parens(s: &str) -> Result<Tree, CodecError> {
    let text = s.trim();
    if text.is_empty() {
        return Err(CodecError::EmptyInput);
    }
    let offset = s.find(text).unwrap_or(0);

    let mut parents: Vec<Option<NodeId>> = Vec::new();
    let mut open: Vec<NodeId> = Vec::new();
    for (i, ch) in text.char_indices() {
        let position = offset + i;
        if !parents.is_empty() && open.is_empty() {
            return Err(CodecError::TrailingGarbage { position });
        }
        match ch {
            '(' => {
                parents.push(open.last().copied());
                open.push(parents.len() - 1);
            }
            ')' => {
                if open.pop().is_none() {
                    return Err(CodecError::UnbalancedParens { position });
                }
            }
            found => return Err(CodecError::InvalidCharacter { position, found }),
        }
    }
    if !open.is_empty() {
        return Err(CodecError::UnbalancedParens {
            position: offset + text.len(),
        });
    }
    Ok(Tree::from_parents(&parents)?)
}

/// Serializes `t` with children emitted in storage order.
pub fn to_parens(t: &Tree) -> String {
    let mut out = String::with_capacity(2 * t.len());
    // (node, index of next child to visit)
    let mut stack = vec![(t.root(), 0usize)];
    out.push('(');
    while let Some((u, next)) = stack.last_mut() {
        match t.children(*u).get(*next) {
            Some(&v) => {
                *next += 1;
                out.push('(');
                stack.push((v, 0));
            }
            None => {
                out.push(')');
                stack.pop();
            }
        }
    }
    out
}

/// Canonical parenthesis form: each node's children are emitted sorted by
/// their own canonical strings (byte order). Two trees are isomorphic iff
/// their canonical strings are equal.
///
/// Quadratic in the worst case; this is the reference oracle, not a fast path.
pub fn canonical_string(t: &Tree) -> String {
    let levels = t.level_index();
    let mut canon: Vec<Option<String>> = vec![None; t.len()];
    let mut parts: Vec<String> = Vec::new();
    for level in levels.levels() {
        for &u in level {
            parts.clear();
            parts.extend(
                t.children(u)
                    .iter()
                    .map(|&v| canon[v].take().expect("children are one level down")),
            );
            parts.sort_unstable();
            let len = 2 + parts.iter().map(String::len).sum::<usize>();
            let mut s = String::with_capacity(len);
            s.push('(');
            parts.iter().for_each(|p| s.push_str(p));
            s.push(')');
            canon[u] = Some(s);
        }
    }
    canon[t.root()].take().unwrap()
}

/// Parses a parent array line (`-1` marks the root).
pub fn parse_parent_array(s: &str) -> Result<Tree, CodecError> {
    let parents = s
        .split_whitespace()
        .map(|token| {
            let value: i64 = token
                .parse()
                .map_err(|e: std::num::ParseIntError| CodecError::ParseError {
                    token: token.to_string(),
                    reason: e.to_string(),
                })?;
            match value {
                -1 => Ok(None),
                v if v < 0 => Err(CodecError::ParseError {
                    token: token.to_string(),
                    reason: "only -1 may be negative".to_string(),
                }),
                v => usize::try_from(v).map(Some).map_err(|e| CodecError::ParseError {
                    token: token.to_string(),
                    reason: e.to_string(),
                }),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    if parents.is_empty() {
        return Err(CodecError::EmptyInput);
    }
    Ok(Tree::from_parents(&parents)?)
}

pub fn to_parent_array(t: &Tree) -> String {
    let mut out = String::with_capacity(3 * t.len());
    for (i, p) in t.parents().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        match p {
            Some(p) => out.push_str(&p.to_string()),
            None => out.push_str("-1"),
        }
    }
    out
}

/// Which line format a piece of text is in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Parens,
    Parents,
}

pub fn detect_format(s: &str) -> Option<Format> {
    match s.trim_start().chars().next()? {
        '(' => Some(Format::Parens),
        c if c == '-' || c.is_ascii_digit() => Some(Format::Parents),
        _ => None,
    }
}

/// Parses either format, chosen by the first non-space character.
pub fn parse_tree(s: &str) -> Result<Tree, CodecError> {
    match detect_format(s) {
        Some(Format::Parens) => parse_parens(s),
        Some(Format::Parents) => parse_parent_array(s),
        None => match s.trim_start().char_indices().next() {
            None => Err(CodecError::EmptyInput),
            Some((_, found)) => Err(CodecError::InvalidCharacter {
                position: s.len() - s.trim_start().len(),
                found,
            }),
        },
    }
}
