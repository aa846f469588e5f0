use std::collections::BTreeMap;
use std::fmt;

use super::braid::BraidWord;
use crate::error::{Error, Result};

/// Planar diagram code. Each crossing `X[i, j, k, l]` lists its four edges
/// counterclockwise starting from the incoming under-strand, so the under-strand
/// runs `i -> k` and the over-strand joins `j` and `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDCode {
    crossings: Vec<[u32; 4]>,
}

/// An oriented crossing: edges of the under- and over-strand and the sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrientedCrossing {
    pub under_in: u32,
    pub under_out: u32,
    pub over_in: u32,
    pub over_out: u32,
    /// `+1` when the over-strand runs `l -> j`.
    pub sign: i8,
}

impl PDCode {
    /// Checks that every label occurs exactly twice.
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for x in &crossings {
            for &e in x {
                *counts.entry(e).or_default() += 1;
            }
        }
        if let Some((e, c)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(Error::Diagram(format!("edge {e} occurs {c} times, expected twice")));
        }
        Ok(PDCode { crossings })
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    fn occurrences(&self) -> BTreeMap<u32, Vec<(usize, usize)>> {
        let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, x) in self.crossings.iter().enumerate() {
            for (p, &e) in x.iter().enumerate() {
                occ.entry(e).or_default().push((c, p));
            }
        }
        occ
    }

    fn other_end(occ: &BTreeMap<u32, Vec<(usize, usize)>>, e: u32, here: (usize, usize)) -> (usize, usize) {
        let ends = &occ[&e];
        if ends[0] == here {
            ends[1]
        } else {
            ends[0]
        }
    }

    /// Number of closed curves in the diagram.
    pub fn components(&self) -> usize {
        let occ = self.occurrences();
        let mut seen = vec![[false; 4]; self.crossings.len()];
        let mut count = 0;
        for c in 0..self.crossings.len() {
            for p in 0..4 {
                if seen[c][p] {
                    continue;
                }
                count += 1;
                let mut at = (c, p);
                while !seen[at.0][at.1] {
                    let out = (at.0, (at.1 + 2) % 4);
                    seen[at.0][at.1] = true;
                    seen[out.0][out.1] = true;
                    at = Self::other_end(&occ, self.crossings[out.0][out.1], out);
                }
            }
        }
        count.max(1)
    }

    /// Orients the single component by walking it from the under-strand entry of
    /// the first crossing. Returns the crossings in input order and the edges in
    /// the order they are traversed.
    pub fn orient(&self) -> Result<(Vec<OrientedCrossing>, Vec<u32>)> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok((Vec::new(), Vec::new()));
        }
        let comps = self.components();
        if comps > 1 {
            return Err(Error::LinkClosure(comps));
        }
        let occ = self.occurrences();
        let mut entry: Vec<[bool; 4]> = vec![[false; 4]; n];
        let mut order = Vec::with_capacity(2 * n);
        let start = (0usize, 0usize);
        let mut at = start;
        loop {
            let (c, p) = at;
            if p == 2 || entry[c][p] {
                return Err(Error::Diagram(format!(
                    "inconsistent orientation at crossing {} (entered at position {p})",
                    c + 1
                )));
            }
            entry[c][p] = true;
            let out = (c, (p + 2) % 4);
            let e = self.crossings[c][out.1];
            order.push(e);
            at = Self::other_end(&occ, e, out);
            if at == start {
                break;
            }
        }
        let mut out = Vec::with_capacity(n);
        for (c, x) in self.crossings.iter().enumerate() {
            if !entry[c][0] || entry[c][1] == entry[c][3] {
                return Err(Error::Diagram(format!("inconsistent orientation at crossing {}", c + 1)));
            }
            let positive = entry[c][3];
            out.push(OrientedCrossing {
                under_in: x[0],
                under_out: x[2],
                over_in: if positive { x[3] } else { x[1] },
                over_out: if positive { x[1] } else { x[3] },
                sign: if positive { 1 } else { -1 },
            });
        }
        Ok((out, order))
    }
}

impl fmt::Display for PDCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PD[")?;
        for (i, x) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "X[{},{},{},{}]", x[0], x[1], x[2], x[3])?;
        }
        write!(f, "]")
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn eat(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(Error::Parse { pos: self.pos, msg: format!("expected {token:?}") })
        }
    }

    fn peek(&mut self, token: &str) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(token)
    }

    fn label(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.text[start..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(Error::Parse { pos: start, msg: "expected a positive integer label".into() });
        }
        self.pos += digits;
        match self.text[start..self.pos].parse::<u32>() {
            Ok(0) => Err(Error::Parse { pos: start, msg: "labels must be positive".into() }),
            Ok(v) => Ok(v),
            Err(_) => Err(Error::Parse { pos: start, msg: "label out of range".into() }),
        }
    }
}

/// Parses `PD[X[a,b,c,d],...]`.
pub fn parse_pd(text: &str) -> Result<PDCode> {
    let mut cur = Cursor { text, pos: 0 };
    cur.eat("PD[")?;
    let mut crossings = Vec::new();
    if !cur.peek("]") {
        loop {
            cur.eat("X[")?;
            let mut x = [0u32; 4];
            for (i, slot) in x.iter_mut().enumerate() {
                if i > 0 {
                    cur.eat(",")?;
                }
                *slot = cur.label()?;
            }
            cur.eat("]")?;
            crossings.push(x);
            if cur.peek(",") {
                cur.eat(",")?;
            } else {
                break;
            }
        }
    }
    cur.eat("]")?;
    cur.skip_ws();
    if cur.pos != text.len() {
        return Err(Error::Parse { pos: cur.pos, msg: "trailing input".into() });
    }
    PDCode::new(crossings)
}

/// PD code of the closure of `b`, with edges numbered `1..2c` along the orientation.
pub fn braid_to_pd(b: &BraidWord) -> Result<PDCode> {
    let comps = b.closure_components();
    if comps > 1 {
        return Err(Error::LinkClosure(comps));
    }
    let n = b.strands() as u32;
    let mut cur: Vec<u32> = (0..n).collect();
    let mut next = n;
    let mut raw = Vec::with_capacity(b.letters().len());
    for &l in b.letters() {
        let i = l.unsigned_abs() as usize - 1;
        let (a, bb) = (cur[i], cur[i + 1]);
        let (na, nb) = (next, next + 1);
        next += 2;
        raw.push(if l > 0 { [bb, nb, na, a] } else { [a, bb, nb, na] });
        cur[i] = na;
        cur[i + 1] = nb;
    }
    // close up: the top edge at each position is the bottom edge there
    let close: BTreeMap<u32, u32> = cur.iter().enumerate().map(|(p, &e)| (e, p as u32)).collect();
    for x in raw.iter_mut() {
        for e in x.iter_mut() {
            if let Some(&p) = close.get(e) {
                *e = p;
            }
        }
    }
    let pd = PDCode::new(raw)?;
    let (_, order) = pd.orient()?;
    let relabel: BTreeMap<u32, u32> = order.iter().enumerate().map(|(k, &e)| (e, k as u32 + 1)).collect();
    PDCode::new(pd.crossings.iter().map(|x| x.map(|e| relabel[&e])).collect())
}
