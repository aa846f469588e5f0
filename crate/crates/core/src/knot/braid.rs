use std::fmt;

use crate::error::{Error, Result};

/// A braid word: letter `i` is `sigma_i`, letter `-i` is its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidArgument("a braid needs at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::InvalidArgument(format!(
                    "generator s{} out of range for {strands} strands",
                    l.unsigned_abs()
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// The permutation of strand positions induced by the braid.
    pub fn permutation(&self) -> Vec<usize> {
        // perm[p] = final position of the strand starting at p
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &start) in at.iter().enumerate() {
            perm[start] = pos;
        }
        perm
    }

    /// Number of components of the closure.
    pub fn closure_components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for s in 0..self.strands {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut p = s;
            while !seen[p] {
                seen[p] = true;
                p = perm[p];
            }
        }
        count
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "strands={};", self.strands)?;
        for &l in &self.letters {
            if l > 0 {
                write!(f, " s{l}")?;
            } else {
                write!(f, " s{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn parse_uint(text: &str, pos: usize) -> Result<usize> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(pos, format!("expected a positive integer, found {text:?}")));
    }
    text.parse().map_err(|_| parse_err(pos, format!("integer {text:?} out of range")))
}

/// Parses `[strands=<n>;] s<i> s<j>^-1 ...`. Without a header the strand count is
/// one more than the largest generator index.
pub fn parse_braid(text: &str) -> Result<BraidWord> {
    let mut body = text;
    let mut offset = 0;
    let mut strands = None;
    let trimmed = text.trim_start();
    if let Some(rest) = trimmed.strip_prefix("strands") {
        let rest_trim = rest.trim_start();
        let eq_pos = text.len() - rest_trim.len();
        let after_eq = rest_trim
            .strip_prefix('=')
            .ok_or_else(|| parse_err(eq_pos, "expected '=' after 'strands'"))?;
        let end = after_eq.find(|c: char| c == ';' || c.is_whitespace()).unwrap_or(after_eq.len());
        let num_pos = text.len() - after_eq.len();
        let n = parse_uint(after_eq[..end].trim(), num_pos)?;
        if n == 0 {
            return Err(parse_err(num_pos, "strand count must be at least 1"));
        }
        strands = Some(n);
        let mut rest = &after_eq[end..];
        let r = rest.trim_start();
        if let Some(r2) = r.strip_prefix(';') {
            rest = r2;
        }
        offset = text.len() - rest.len();
        body = rest;
    }

    let mut letters = Vec::new();
    let mut max_index = 0usize;
    let mut i = 0;
    let bytes = body.as_bytes();
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        let tok = &body[start..i];
        let pos = offset + start;
        let rest = tok.strip_prefix('s').ok_or_else(|| parse_err(pos, format!("unexpected token {tok:?}")))?;
        let (num, inverse) = match rest.split_once('^') {
            Some((n, "-1")) => (n, true),
            Some((_, e)) => return Err(parse_err(pos, format!("unsupported exponent {e:?}, only ^-1 is allowed"))),
            None => (rest, false),
        };
        let idx = parse_uint(num, pos + 1)?;
        if idx == 0 {
            return Err(parse_err(pos + 1, "generator indices start at 1"));
        }
        if let Some(n) = strands {
            if idx >= n {
                return Err(parse_err(pos, format!("generator s{idx} out of range for {n} strands")));
            }
        }
        max_index = max_index.max(idx);
        let l = i32::try_from(idx).map_err(|_| parse_err(pos, "generator index too large"))?;
        letters.push(if inverse { -l } else { l });
    }
    BraidWord::new(strands.unwrap_or(max_index + 1), letters)
}
